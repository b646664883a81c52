//! Suborbits of the conjugation action on involutions, classification of
//! axis pairs by the subgroup they generate, and the shape solver.

mod classes;
mod solver;

use std::collections::{BTreeMap, VecDeque};

use rustc_hash::FxHashSet;
use serde::Serialize;
use thiserror::Error;

use crate::context::U35Context;
use crate::exact::{format_rational, AffineScalar};
use crate::nortsak::NortsakError;
use crate::permcore::{PermError, Permutation};

pub use classes::{AxisPairClass, SubgroupPairClass};
pub use solver::{
    containment_facts, majorana_inner_product, solve_shape, standard_containment_facts,
    ContainmentFact, ShapeMap,
};

/// Largest proper subgroup order of U3(5); closures past it are the whole group.
pub const CLOSURE_CAP: usize = 2520;

#[derive(Debug, Error)]
pub enum ShapeError {
    #[error("multiple involution classes: class of the base has {class} of {total} involutions")]
    MultipleInvolutionClasses { class: usize, total: usize },
    #[error("unexpected order {0} for the subgroup generated by an involution and an order-3 subgroup")]
    UnexpectedAxisPairOrder(u64),
    #[error("unexpected order {0} for the subgroup generated by two order-3 subgroups")]
    UnexpectedSubgroupPairOrder(u64),
    #[error("A7 generated by two 3-cycles")]
    A7ThreeCycles,
    #[error("A7 generator with centralizer order {0}, expected 9 or 36")]
    A7Centralizer(u64),
    #[error("no consistent shape")]
    NoConsistentShape,
    #[error("ambiguous shape: {0}")]
    AmbiguousShape(String),
    #[error("product order {0} outside 1..=6")]
    OrderOutOfRange(u64),
    #[error("product order {0} has no assigned algebra")]
    Unassigned(u64),
    #[error("containment of order {order} in {outer} matches {matches} algebras")]
    ContainmentAmbiguous {
        outer: crate::nortsak::AlgebraType,
        order: u64,
        matches: usize,
    },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Nortsak(#[from] NortsakError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Suborbit {
    pub size: usize,
    pub product_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuborbitTable {
    /// Involution index of the base point.
    pub base: usize,
    /// Sorted by size, then product order.
    pub suborbits: Vec<Suborbit>,
}

impl SuborbitTable {
    pub fn total(&self) -> usize {
        self.suborbits.iter().map(|s| s.size).sum()
    }

    /// Number of suborbits whose product order is `order`.
    pub fn count_with_order(&self, order: u64) -> usize {
        self.suborbits
            .iter()
            .filter(|s| s.product_order == order)
            .count()
    }

    pub fn orders(&self) -> Vec<u64> {
        let mut o: Vec<u64> = self.suborbits.iter().map(|s| s.product_order).collect();
        o.sort_unstable();
        o.dedup();
        o
    }
}

/// Orbits of C(t0) on the involutions, for the first involution t0.
pub fn suborbit_table(ctx: &U35Context) -> Result<SuborbitTable, ShapeError> {
    let g = ctx.group();
    let t0 = *ctx.involution(0);
    let total = ctx.involutions().len();
    let class = g.conjugacy_class(&t0)?.len();
    if class != total {
        return Err(ShapeError::MultipleInvolutionClasses { class, total });
    }
    let c = g.centralizer(&t0)?;
    let mut seen = vec![false; total];
    let mut suborbits = Vec::new();
    for start in 0..total {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut size = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            size += 1;
            for h in c.generators() {
                let j = ctx.conjugate_involution(i, h);
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        suborbits.push(Suborbit {
            size,
            product_order: t0.then(ctx.involution(start)).order(),
        });
    }
    suborbits.sort();
    Ok(SuborbitTable { base: 0, suborbits })
}

/// Number of distinct dihedral subgroups of order 6.
pub fn s3_subgroup_count(ctx: &U35Context) -> usize {
    let invs = ctx.involutions();
    let mut seen: FxHashSet<[u32; 3]> = FxHashSet::default();
    for (i, t) in invs.iter().enumerate() {
        for (j, s) in invs.iter().enumerate() {
            if t.then(s).order() != 3 {
                continue;
            }
            let third = ctx
                .involution_index(&s.conjugate_by(t))
                .expect("conjugate involution");
            let mut key = [i as u32, j as u32, third as u32];
            key.sort_unstable();
            seen.insert(key);
        }
    }
    seen.len()
}

pub fn classify_pair_t_rho(
    ctx: &U35Context,
    t: &Permutation,
    rho: usize,
) -> Result<AxisPairClass, ShapeError> {
    let r = ctx.subgroup_generator(rho);
    let h = ctx.group().subgroup_closure(&[*t, *r], CLOSURE_CAP)?;
    AxisPairClass::from_order(h.order(), t.commutes_with(r))
}

pub fn classify_pair_rho_sigma(
    ctx: &U35Context,
    rho: usize,
    sigma: usize,
) -> Result<SubgroupPairClass, ShapeError> {
    let r = *ctx.subgroup_generator(rho);
    let s = *ctx.subgroup_generator(sigma);
    let h = ctx.group().subgroup_closure(&[r, s], CLOSURE_CAP)?;
    let order = if h.is_whole_group_sentinel() {
        ctx.group().order()
    } else {
        h.order()
    };
    match order {
        168 => {
            let common = h
                .involutions()
                .iter()
                .any(|i| ctx.normalizes(i, rho) && ctx.normalizes(i, sigma));
            Ok(if common {
                SubgroupPairClass::L27Normalized
            } else {
                SubgroupPairClass::L27
            })
        }
        2520 => {
            let elements = h.elements().expect("enumerated below the cap");
            let centralizer = |x: &Permutation| {
                elements.iter().filter(|e| e.commutes_with(x)).count() as u64
            };
            match (centralizer(&r), centralizer(&s)) {
                (9, 9) => Ok(SubgroupPairClass::A7Pure),
                (9, 36) | (36, 9) => Ok(SubgroupPairClass::A7Mixed),
                (36, 36) => Err(ShapeError::A7ThreeCycles),
                (9, c) | (c, _) => Err(ShapeError::A7Centralizer(c)),
            }
        }
        n => SubgroupPairClass::from_order(n),
    }
}

/// Class of every involution against the subgroup `rho`, by involution index.
pub fn axis_pair_census(ctx: &U35Context, rho: usize) -> Result<Vec<AxisPairClass>, ShapeError> {
    ctx.involutions()
        .iter()
        .map(|t| classify_pair_t_rho(ctx, t, rho))
        .collect()
}

/// Class of every order-3 subgroup against `rho`, by subgroup index.
pub fn subgroup_pair_census(
    ctx: &U35Context,
    rho: usize,
) -> Result<Vec<SubgroupPairClass>, ShapeError> {
    (0..ctx.subgroup_count())
        .map(|s| classify_pair_rho_sigma(ctx, rho, s))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub label: String,
    pub subgroup_order: u64,
    pub count: usize,
    pub inner_product: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub base: usize,
    pub axis_pairs: Vec<CensusRow>,
    pub subgroup_pairs: Vec<CensusRow>,
}

impl CensusReport {
    pub fn axis_counts(&self) -> Vec<usize> {
        self.axis_pairs.iter().map(|r| r.count).collect()
    }

    pub fn subgroup_counts(&self) -> Vec<usize> {
        self.subgroup_pairs.iter().map(|r| r.count).collect()
    }

    pub fn matches_expected(&self) -> bool {
        self.axis_counts()
            == AxisPairClass::ALL
                .iter()
                .map(|c| c.expected_count())
                .collect::<Vec<_>>()
            && self.subgroup_counts()
                == SubgroupPairClass::ALL
                    .iter()
                    .map(|c| c.expected_count())
                    .collect::<Vec<_>>()
    }
}

fn tally<T: Ord + Copy>(classes: &[T]) -> BTreeMap<T, usize> {
    let mut m = BTreeMap::new();
    for &c in classes {
        *m.entry(c).or_insert(0) += 1;
    }
    m
}

pub fn census_report(ctx: &U35Context, rho: usize) -> Result<CensusReport, ShapeError> {
    let axis = tally(&axis_pair_census(ctx, rho)?);
    let sub = tally(&subgroup_pair_census(ctx, rho)?);
    Ok(CensusReport {
        base: rho,
        axis_pairs: AxisPairClass::ALL
            .iter()
            .map(|c| CensusRow {
                label: c.label().to_string(),
                subgroup_order: c.group_order(),
                count: axis.get(c).copied().unwrap_or(0),
                inner_product: format_rational(&c.inner_product()),
            })
            .collect(),
        subgroup_pairs: SubgroupPairClass::ALL
            .iter()
            .map(|c| CensusRow {
                label: c.label().to_string(),
                subgroup_order: c.group_order(),
                count: sub.get(c).copied().unwrap_or(0),
                inner_product: affine_label(&c.inner_product()),
            })
            .collect(),
    })
}

fn affine_label(a: &AffineScalar) -> String {
    if a.is_constant() {
        format_rational(&a.constant)
    } else {
        a.to_string()
    }
}
