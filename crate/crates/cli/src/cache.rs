//! On-disk cache of the enumerated groups and their class tables.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use u35_core::context::{U35Context, AUT_ORDER};
use u35_core::hsgraph::{automorphism_group, build_hs_graph, derived_subgroup, verify_srg};
use u35_core::permcore::cache::{read_perms, write_perms};
use u35_core::permcore::{enumerate_group, EnumeratedGroup, Permutation};
use u35_core::shapes::suborbit_table;

pub const AUT_ELEMENTS: &str = "aut.u35p";
pub const AUT_GENERATORS: &str = "aut_generators.u35p";
pub const GROUP_ELEMENTS: &str = "group.u35p";
pub const GROUP_GENERATORS: &str = "group_generators.u35p";
pub const INVOLUTIONS: &str = "involutions.u35p";
pub const ORDER3: &str = "order3.u35p";
pub const SUBORBITS: &str = "suborbits.json";

const PERM_FILES: [&str; 6] = [
    AUT_ELEMENTS,
    AUT_GENERATORS,
    GROUP_ELEMENTS,
    GROUP_GENERATORS,
    INVOLUTIONS,
    ORDER3,
];

/// Marks errors that map to the cache/IO exit code.
#[derive(Debug)]
pub struct CacheProblem(pub String);

impl std::fmt::Display for CacheProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CacheProblem {}

fn problem(msg: impl Into<String>) -> anyhow::Error {
    CacheProblem(msg.into()).into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CacheFile {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheStatus {
    Built,
    Loaded,
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn describe(dir: &Path) -> Result<Vec<CacheFile>> {
    PERM_FILES
        .iter()
        .chain(&[SUBORBITS])
        .map(|name| {
            let data = fs::read(dir.join(name))
                .map_err(|e| problem(format!("reading {name}: {e}")))?;
            Ok(CacheFile {
                name: name.to_string(),
                bytes: data.len() as u64,
                sha256: hex(&Sha256::digest(&data)),
            })
        })
        .collect()
}

/// Whether every cache file is present.
pub fn is_complete(dir: &Path) -> bool {
    PERM_FILES.iter().chain(&[SUBORBITS]).all(|f| dir.join(f).is_file())
}

fn write(dir: &Path, name: &str, perms: &[Permutation]) -> Result<()> {
    write_perms(&dir.join(name), perms).map_err(|e| problem(format!("writing {name}: {e}")))
}

fn read(dir: &Path, name: &str) -> Result<Vec<Permutation>> {
    read_perms(&dir.join(name)).map_err(|e| problem(format!("{name}: {e}")))
}

/// Builds the graph and both groups from scratch and writes the cache.
pub fn build(dir: &Path) -> Result<U35Context> {
    let graph = build_hs_graph()?;
    if !verify_srg(&graph, 50, 7, 0, 1).passed() {
        bail!("constructed graph is not strongly regular with parameters (50,7,0,1)");
    }
    let aut = enumerate_group(&automorphism_group(&graph)?, AUT_ORDER as usize)?;
    let group = derived_subgroup(&aut)?;
    fs::create_dir_all(dir).map_err(|e| problem(format!("creating {}: {e}", dir.display())))?;
    write(dir, AUT_ELEMENTS, aut.elements())?;
    write(dir, AUT_GENERATORS, aut.generators())?;
    write(dir, GROUP_ELEMENTS, group.elements())?;
    write(dir, GROUP_GENERATORS, group.generators())?;
    let ctx = U35Context::from_group(graph, aut.order(), group)?;
    write(dir, INVOLUTIONS, ctx.involutions())?;
    let gens: Vec<Permutation> = (0..ctx.subgroup_count())
        .map(|i| *ctx.subgroup_generator(i))
        .collect();
    write(dir, ORDER3, &gens)?;
    let table = suborbit_table(&ctx)?;
    let json = serde_json::to_vec_pretty(&table)?;
    fs::write(dir.join(SUBORBITS), json)
        .map_err(|e| problem(format!("writing {SUBORBITS}: {e}")))?;
    Ok(ctx)
}

fn group_from(dir: &Path, elements: &str, generators: &str) -> Result<EnumeratedGroup> {
    EnumeratedGroup::from_parts(read(dir, elements)?, read(dir, generators)?)
        .map_err(|e| problem(format!("{elements}: {e}")))
}

/// Reads the cache, checking every file's digest and the consistency of the
/// stored tables with the stored group.
pub fn load(dir: &Path) -> Result<U35Context> {
    if !is_complete(dir) {
        return Err(problem(format!(
            "no complete cache in {}; run `u35 build --cache {}` first",
            dir.display(),
            dir.display()
        )));
    }
    let graph = build_hs_graph()?;
    let aut = group_from(dir, AUT_ELEMENTS, AUT_GENERATORS)?;
    if !aut.generators().iter().all(|g| graph.preserves(g)) {
        return Err(problem("cached automorphism does not preserve the graph"));
    }
    let group = group_from(dir, GROUP_ELEMENTS, GROUP_GENERATORS)?;
    if !group.generators().iter().all(|g| aut.contains(g)) {
        return Err(problem("cached group is not inside the cached automorphism group"));
    }
    let ctx = U35Context::from_group(graph, aut.order(), group)
        .map_err(|e| problem(format!("cached group: {e}")))?;
    if read(dir, INVOLUTIONS)? != ctx.involutions() {
        return Err(problem("cached involution table does not match the group"));
    }
    let gens = read(dir, ORDER3)?;
    let matches = gens.len() == ctx.subgroup_count()
        && gens.iter().enumerate().all(|(i, g)| g == ctx.subgroup_generator(i));
    if !matches {
        return Err(problem("cached order-3 subgroup table does not match the group"));
    }
    Ok(ctx)
}

/// Loads a complete cache, or builds one if the directory has none.
pub fn load_or_build(dir: &Path) -> Result<(U35Context, CacheStatus, Vec<CacheFile>)> {
    let (ctx, status) = if is_complete(dir) {
        (load(dir)?, CacheStatus::Loaded)
    } else {
        (build(dir)?, CacheStatus::Built)
    };
    let files = describe(dir).context("describing cache")?;
    Ok((ctx, status, files))
}

/// Loads an existing cache together with its file digests.
pub fn open(dir: &Path) -> Result<(U35Context, Vec<CacheFile>)> {
    let ctx = load(dir)?;
    Ok((ctx, describe(dir)?))
}
