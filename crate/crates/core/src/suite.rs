//! The fifteen end-to-end checks, run against one shared context with
//! intermediate results computed lazily and reused between checks.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::context::{U35Context, AUT_ORDER, GROUP_ORDER, INVOLUTION_COUNT, ORDER3_SUBGROUP_COUNT};
use crate::exact::{format_rational, rat, ExactScalar};
use crate::gram::{
    a7_restriction, assemble_gram, check_relations, find_s3_s4_involution, gamma_minus_orbits,
    pasechnik_vectors, rank_consensus, rank_exact, resurrection_inner_check, solve_x,
    symmetric_exact, v_decomposition, GramMatrix, OrbitDecomposition, PairClassification,
    PasechnikSet, DEFAULT_PRIMES,
};
use crate::hsgraph::{build_hs_graph, fixed_subgraph, verify_srg};
use crate::nortsak::{build_all_algebras, verify_algebra, AlgebraSpec, AlgebraType};
use crate::shapes::{
    census_report, containment_facts, s3_subgroup_count, solve_shape, suborbit_table, ShapeMap,
};

pub const CRITERIA: [u8; 15] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15];

/// Base order-3 subgroup for the checks that need one.
const BASE: usize = 0;
/// Vertex whose stabilizer is the A7.
const A7_VERTEX: usize = 0;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub primes: Vec<u64>,
    /// Use exact elimination where the default is a mod-p consensus.
    pub exact: bool,
    pub seed: u64,
    pub census_bases: usize,
    pub norton_pairs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            primes: DEFAULT_PRIMES.to_vec(),
            exact: false,
            seed: 0,
            census_bases: 5,
            norton_pairs: 50,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub criterion: u8,
    pub title: &'static str,
    pub passed: bool,
    pub witness: Value,
}

impl CheckOutcome {
    /// The witness with arrays longer than `max` replaced by their length.
    pub fn abbreviated_witness(&self, max: usize) -> Value {
        abbreviate(&self.witness, max)
    }
}

fn abbreviate(v: &Value, max: usize) -> Value {
    match v {
        Value::Array(a) if a.len() > max => Value::String(format!("[{} items]", a.len())),
        Value::Array(a) => Value::Array(a.iter().map(|x| abbreviate(x, max)).collect()),
        Value::Object(o) => Value::Object(
            o.iter()
                .map(|(k, x)| (k.clone(), abbreviate(x, max)))
                .collect(),
        ),
        other => other.clone(),
    }
}

pub fn title(criterion: u8) -> &'static str {
    match criterion {
        1 => "Hoffman-Singleton graph",
        2 => "group orders and classes",
        3 => "involution suborbits",
        4 => "Petersen fixed subgraphs",
        5 => "Norton-Sakuma algebras",
        6 => "shape",
        7 => "pair censuses",
        8 => "Majorana Gram rank",
        9 => "Pasechnik relations",
        10 => "determination of x",
        11 => "dimension",
        12 => "V+ and V- decomposition",
        13 => "Gamma- orbit structure",
        14 => "linking involutions",
        15 => "A7 restriction",
        _ => "unknown",
    }
}

/// Wall-clock budget, where one is part of the criterion.
pub fn time_limit(criterion: u8) -> Option<Duration> {
    match criterion {
        1 => Some(Duration::from_secs(1)),
        2 => Some(Duration::from_secs(60)),
        5 => Some(Duration::from_secs(10)),
        11 => Some(Duration::from_secs(300)),
        _ => None,
    }
}

type Res<T> = Result<T, String>;

fn cached<T>(cell: &OnceLock<Res<T>>, init: impl FnOnce() -> Res<T>) -> Res<&T> {
    cell.get_or_init(init).as_ref().map_err(Clone::clone)
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn outcome(criterion: u8, result: Res<(bool, Value)>) -> CheckOutcome {
    let (passed, witness) = result.unwrap_or_else(|e| (false, json!({ "error": e })));
    CheckOutcome {
        criterion,
        title: title(criterion),
        passed,
        witness,
    }
}

/// Criteria that need no group context: the graph and the algebras.
pub fn run_standalone(criterion: u8, config: &SuiteConfig) -> Option<(CheckOutcome, Duration)> {
    let start = Instant::now();
    let result = match criterion {
        1 => hs_graph(),
        5 => norton_sakuma(config),
        _ => return None,
    };
    Some((outcome(criterion, result), start.elapsed()))
}

fn hs_graph() -> Res<(bool, Value)> {
    let g = build_hs_graph().map_err(err)?;
    let cert = verify_srg(&g, 50, 7, 0, 1);
    let edges = g.edge_count();
    Ok((
        cert.passed() && edges == 175,
        json!({ "srg": cert.passed(), "edges": edges }),
    ))
}

fn norton_sakuma(config: &SuiteConfig) -> Res<(bool, Value)> {
    let reports: Vec<_> = build_all_algebras()
        .map_err(err)?
        .par_iter()
        .map(|a| verify_algebra(a, config.norton_pairs, config.seed))
        .collect();
    let summary: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "algebra": r.algebra, "dimension": r.dimension, "passed": r.passed() }))
        .collect();
    Ok((
        reports.len() == 8 && reports.iter().all(|r| r.passed()),
        json!({ "algebras": summary }),
    ))
}

pub struct Suite {
    config: SuiteConfig,
    ctx: U35Context,
    context_time: Duration,
    algebras: OnceLock<Res<Vec<AlgebraSpec>>>,
    shape: OnceLock<Res<ShapeMap>>,
    pairs: OnceLock<Res<PairClassification>>,
    gram: OnceLock<Res<GramMatrix>>,
    pasechnik: OnceLock<Res<PasechnikSet>>,
    x: OnceLock<Res<ExactScalar>>,
    orbits: OnceLock<Res<OrbitDecomposition>>,
}

impl Suite {
    /// `context_time` is how long building or loading the context took; it
    /// counts towards the group criterion.
    pub fn new(ctx: U35Context, context_time: Duration, config: SuiteConfig) -> Self {
        Self {
            config,
            ctx,
            context_time,
            algebras: OnceLock::new(),
            shape: OnceLock::new(),
            pairs: OnceLock::new(),
            gram: OnceLock::new(),
            pasechnik: OnceLock::new(),
            x: OnceLock::new(),
            orbits: OnceLock::new(),
        }
    }

    pub fn context(&self) -> &U35Context {
        &self.ctx
    }

    pub fn config(&self) -> &SuiteConfig {
        &self.config
    }

    pub fn context_time(&self) -> Duration {
        self.context_time
    }

    fn algebras(&self) -> Res<&Vec<AlgebraSpec>> {
        cached(&self.algebras, || build_all_algebras().map_err(err))
    }

    pub fn shape(&self) -> Res<&ShapeMap> {
        cached(&self.shape, || {
            let table = suborbit_table(&self.ctx).map_err(err)?;
            let facts = containment_facts(self.algebras()?).map_err(err)?;
            solve_shape(&table, &facts).map_err(err)
        })
    }

    fn pairs(&self) -> Res<&PairClassification> {
        cached(&self.pairs, || PairClassification::compute(&self.ctx, BASE).map_err(err))
    }

    /// The 2275×2275 Gram matrix with x symbolic.
    pub fn gram(&self) -> Res<&GramMatrix> {
        cached(&self.gram, || {
            assemble_gram(&self.ctx, self.pairs()?, self.shape()?, true).map_err(err)
        })
    }

    fn pasechnik(&self) -> Res<&PasechnikSet> {
        cached(&self.pasechnik, || pasechnik_vectors(&self.ctx).map_err(err))
    }

    pub fn x(&self) -> Res<&ExactScalar> {
        cached(&self.x, || {
            solve_x(self.gram()?, &self.pasechnik()?.vectors).map_err(err)
        })
    }

    fn orbits(&self) -> Res<&OrbitDecomposition> {
        cached(&self.orbits, || {
            gamma_minus_orbits(&self.ctx, self.pairs()?, BASE).map_err(err)
        })
    }

    /// Runs one criterion, timing it. Failures to compute are reported as a
    /// failed check with the error in the witness.
    pub fn run(&self, criterion: u8) -> (CheckOutcome, Duration) {
        let start = Instant::now();
        let result = match criterion {
            1 => hs_graph(),
            2 => self.group(),
            3 => self.suborbits(),
            4 => self.petersen(),
            5 => norton_sakuma(&self.config),
            6 => self.shape_check(),
            7 => self.censuses(),
            8 => self.majorana_rank(),
            9 => self.pasechnik_check(),
            10 => self.x_determination(),
            11 => self.dimension(),
            12 => self.v_plus_minus(),
            13 => self.gamma_minus(),
            14 => self.linking(),
            15 => self.a7(),
            n => Err(format!("no criterion {n}")),
        };
        let mut elapsed = start.elapsed();
        if criterion == 2 {
            elapsed += self.context_time;
        }
        (outcome(criterion, result), elapsed)
    }

    fn group(&self) -> Res<(bool, Value)> {
        let ctx = &self.ctx;
        let class = ctx
            .group()
            .conjugacy_class(ctx.involution(0))
            .map_err(err)?
            .len();
        let w = json!({
            "aut_order": ctx.aut_order(),
            "order": ctx.group().order(),
            "involutions": ctx.involutions().len(),
            "involution_class": class,
            "order3_subgroups": ctx.subgroup_count(),
        });
        let ok = ctx.aut_order() == AUT_ORDER
            && ctx.group().order() == GROUP_ORDER
            && ctx.involutions().len() == INVOLUTION_COUNT
            && class == INVOLUTION_COUNT
            && ctx.subgroup_count() == ORDER3_SUBGROUP_COUNT;
        Ok((ok, w))
    }

    fn suborbits(&self) -> Res<(bool, Value)> {
        let table = suborbit_table(&self.ctx).map_err(err)?;
        let mut found: Vec<(usize, u64)> = table
            .suborbits
            .iter()
            .map(|s| (s.size, s.product_order))
            .collect();
        found.sort_unstable();
        let mut expected = vec![
            (1, 1),
            (20, 2),
            (120, 3),
            (120, 4),
            (120, 6),
            (48, 5),
            (48, 5),
            (48, 5),
        ];
        expected.sort_unstable();
        let d6 = s3_subgroup_count(&self.ctx);
        Ok((
            found == expected && d6 == 10_500,
            json!({ "suborbits": table.suborbits, "d6_subgroups": d6 }),
        ))
    }

    fn petersen(&self) -> Res<(bool, Value)> {
        let ctx = &self.ctx;
        let per: Vec<(bool, u64, usize)> = ctx
            .involutions()
            .par_iter()
            .map(|t| {
                let (sub, _) = fixed_subgraph(t, ctx.graph());
                let c = ctx.group().centralizer(t).map_err(err)?;
                Ok((
                    verify_srg(&sub, 10, 3, 0, 1).passed(),
                    c.order(),
                    c.involutions().len(),
                ))
            })
            .collect::<Res<_>>()?;
        let petersen = per.iter().filter(|p| p.0).count();
        let central = per.iter().filter(|p| p.1 == 240).count();
        let invs = per.iter().filter(|p| p.2 == 21).count();
        let n = per.len();
        Ok((
            n == INVOLUTION_COUNT && petersen == n && central == n && invs == n,
            json!({
                "involutions": n,
                "petersen_fixed_subgraphs": petersen,
                "centralizer_order_240": central,
                "centralizer_with_21_involutions": invs,
            }),
        ))
    }

    fn shape_check(&self) -> Res<(bool, Value)> {
        let shape = self.shape()?;
        let expected = [
            (2, AlgebraType::A2),
            (3, AlgebraType::A3),
            (4, AlgebraType::B4),
            (5, AlgebraType::A5),
            (6, AlgebraType::A6),
        ];
        let ok = shape.0.len() == expected.len()
            && expected.iter().all(|&(o, t)| shape.get(o) == Some(t));
        Ok((ok, json!({ "shape": shape })))
    }

    fn censuses(&self) -> Res<(bool, Value)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        let mut bases = sample(&mut rng, self.ctx.subgroup_count(), self.config.census_bases).into_vec();
        bases.sort_unstable();
        let reports = bases
            .par_iter()
            .map(|&rho| census_report(&self.ctx, rho).map_err(err))
            .collect::<Res<Vec<_>>>()?;
        let rows: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "base": r.base,
                    "axis_counts": r.axis_counts(),
                    "subgroup_counts": r.subgroup_counts(),
                    "matches": r.matches_expected(),
                })
            })
            .collect();
        Ok((
            !reports.is_empty() && reports.iter().all(|r| r.matches_expected()),
            json!({ "bases": rows }),
        ))
    }

    fn majorana_rank(&self) -> Res<(bool, Value)> {
        let maj = self.gram()?.majorana_block();
        let modp = rank_consensus(&maj, None, &self.config.primes).map_err(err)?;
        let exact = symmetric_exact(&maj, None).map_err(err)?;
        let ok = maj.dim() == INVOLUTION_COUNT
            && modp.per_prime.len() >= 3
            && modp.per_prime.iter().all(|&(_, r)| r == INVOLUTION_COUNT)
            && exact.rank == INVOLUTION_COUNT
            && exact.positive_definite();
        Ok((
            ok,
            json!({
                "dimension": maj.dim(),
                "rank_mod_p": modp.per_prime,
                "rank_exact": exact.rank,
                "positive_definite": exact.positive_definite(),
            }),
        ))
    }

    fn pasechnik_check(&self) -> Res<(bool, Value)> {
        let set = self.pasechnik()?;
        let x = rat(4, 81);
        let check = check_relations(self.gram()?, &set.vectors, &x).map_err(err)?;
        let terms_ok = set.vectors.iter().all(|v| v.len() == 13);
        Ok((
            !set.vectors.is_empty() && terms_ok && check.passed(),
            json!({
                "relations": check.relations,
                "elementary_abelian_subgroups": set.elementary_abelian_count,
                "columns": check.columns,
                "thirteen_terms": terms_ok,
                "nonzero_norms": check.nonzero_norms,
                "nonzero_pairings": check.nonzero_pairings,
            }),
        ))
    }

    fn x_determination(&self) -> Res<(bool, Value)> {
        let target = rat(4, 81);
        let x = self.x()?;
        let m = self.gram()?;
        let reps = self.orbits()?.representatives();
        let reports = reps
            .par_iter()
            .map(|&sigma| {
                let link = find_s3_s4_involution(&self.ctx, BASE, sigma).map_err(err)?;
                resurrection_inner_check(&self.ctx, m, BASE, sigma, link.t).map_err(err)
            })
            .collect::<Res<Vec<_>>>()?;
        let ok = *x == target
            && reports.len() == 6
            && reports.iter().all(|r| r.root_value == target);
        Ok((
            ok,
            json!({ "x": format_rational(x), "resurrection": reports }),
        ))
    }

    fn dimension(&self) -> Res<(bool, Value)> {
        let m = self.gram()?;
        let x = self.x()?;
        let modp = rank_consensus(m, Some(x), &self.config.primes).map_err(err)?;
        let mut ok = modp.per_prime.len() >= 3 && modp.agreed() == Some(798);
        let mut w = json!({
            "dimension": m.dim(),
            "x": format_rational(x),
            "rank_mod_p": modp.per_prime,
            "kernel_dimension": modp.agreed().map(|r| m.dim() - r),
        });
        if self.config.exact {
            let r = rank_exact(m, Some(x)).map_err(err)?;
            ok &= r == 798;
            w["rank_exact"] = json!(r);
        }
        Ok((ok, w))
    }

    fn v_plus_minus(&self) -> Res<(bool, Value)> {
        let dec = self.orbits()?;
        let v = v_decomposition(self.gram()?, self.x()?, dec, &self.config.primes).map_err(err)?;
        let ok = v.v_plus_rank.per_prime.len() >= 3
            && v.v_plus_rank.agreed() == Some(796)
            && v.pairing.is_some()
            && v.product_rank == Some(2)
            && v.sums_to_zero == Some(true);
        Ok((ok, serde_json::to_value(&v).map_err(err)?))
    }

    fn gamma_minus(&self) -> Res<(bool, Value)> {
        let dec = self.orbits()?;
        let sizes: Vec<usize> = dec.orbits.iter().map(Vec::len).collect();
        let ok = dec.normalizer_order == 72
            && dec.gamma_minus.len() == 432
            && sizes == [72; 6]
            && dec.common_normalizing_pairs == 0;
        Ok((
            ok,
            json!({
                "base": dec.base,
                "normalizer_order": dec.normalizer_order,
                "gamma_minus": dec.gamma_minus.len(),
                "orbit_sizes": sizes,
                "representatives": dec.representatives(),
                "common_normalizing_pairs": dec.common_normalizing_pairs,
            }),
        ))
    }

    fn linking(&self) -> Res<(bool, Value)> {
        let reps = self.orbits()?.representatives();
        let found = reps
            .par_iter()
            .map(|&sigma| find_s3_s4_involution(&self.ctx, BASE, sigma).map_err(err))
            .collect::<Res<Vec<_>>>()?;
        Ok((found.len() == 6, json!({ "linking": found })))
    }

    fn a7(&self) -> Res<(bool, Value)> {
        let report = a7_restriction(
            &self.ctx,
            self.gram()?,
            self.x()?,
            self.pasechnik()?,
            A7_VERTEX,
            &self.config.primes,
            self.config.exact,
        )
        .map_err(err)?;
        Ok((report.passed(), serde_json::to_value(&report).map_err(err)?))
    }
}
