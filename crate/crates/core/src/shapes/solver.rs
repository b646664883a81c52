use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use super::{ShapeError, SuborbitTable};
use crate::exact::ExactScalar;
use crate::nortsak::{build_algebra, AlgebraSpec, AlgebraType};

/// Algebra type assigned to each product order of a pair of involutions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeMap(pub BTreeMap<u64, AlgebraType>);

impl ShapeMap {
    pub fn get(&self, order: u64) -> Option<AlgebraType> {
        self.0.get(&order).copied()
    }

    pub fn image(&self) -> BTreeSet<AlgebraType> {
        self.0.values().copied().collect()
    }
}

/// The pair of axes a0, a_k of `outer` with k of order `order` generates
/// a subalgebra of type `inner`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ContainmentFact {
    pub outer: AlgebraType,
    pub order: u64,
    pub inner: AlgebraType,
}

pub fn standard_containment_facts() -> Vec<ContainmentFact> {
    use AlgebraType::*;
    let fact = |outer, order, inner| ContainmentFact {
        outer,
        order,
        inner,
    };
    vec![
        fact(A4, 2, B2),
        fact(B4, 2, A2),
        fact(A6, 2, A2),
        fact(A6, 3, A3),
    ]
}

/// Reads the containment facts off the algebras: the subalgebra spanned by
/// a0 and a_k has rotation order n/gcd(n,k), and its type is the unique
/// algebra of that rotation order with the same inner product (a0, a_k).
pub fn containment_facts(algebras: &[AlgebraSpec]) -> Result<Vec<ContainmentFact>, ShapeError> {
    let mut facts = BTreeSet::new();
    for outer in algebras {
        let n = outer.tag().rotation_order() as i64;
        for k in 1..n {
            let m = (n / n.gcd(&k)) as u64;
            if m == n as u64 {
                continue;
            }
            let Some(value) = outer.axis_pair_inner(k) else {
                continue;
            };
            let matches: Vec<AlgebraType> = algebras
                .iter()
                .filter(|a| {
                    a.tag().rotation_order() as u64 == m
                        && a.axis_pair_inner(1).as_ref() == Some(&value)
                })
                .map(AlgebraSpec::tag)
                .collect();
            let [inner] = matches[..] else {
                return Err(ShapeError::ContainmentAmbiguous {
                    outer: outer.tag(),
                    order: m,
                    matches: matches.len(),
                });
            };
            facts.insert(ContainmentFact {
                outer: outer.tag(),
                order: m,
                inner,
            });
        }
    }
    Ok(facts.into_iter().collect())
}

fn contained(facts: &[ContainmentFact], outer: AlgebraType, order: u64) -> Option<AlgebraType> {
    facts
        .iter()
        .find(|f| f.outer == outer && f.order == order)
        .map(|f| f.inner)
}

/// Constraint propagation over the candidate types of each product order.
///
/// When all pairs with product order m form a single suborbit, all the
/// dihedral groups of order 2m are conjugate. If some pair has product
/// order M with m | M, the dihedral group of order 2M contains one of
/// order 2m, so the type for m is the subalgebra type of the type for M.
pub fn solve_shape(
    table: &SuborbitTable,
    facts: &[ContainmentFact],
) -> Result<ShapeMap, ShapeError> {
    let orders: Vec<u64> = table.orders().into_iter().filter(|&o| o > 1).collect();
    let mut candidates: BTreeMap<u64, BTreeSet<AlgebraType>> = BTreeMap::new();
    for &o in &orders {
        if o > 6 {
            return Err(ShapeError::OrderOutOfRange(o));
        }
        candidates.insert(
            o,
            AlgebraType::ALL
                .into_iter()
                .filter(|t| t.rotation_order() as u64 == o)
                .collect(),
        );
    }
    let rules: Vec<(u64, u64)> = orders
        .iter()
        .flat_map(|&m| orders.iter().map(move |&big| (m, big)))
        .filter(|&(m, big)| m < big && big % m == 0 && table.count_with_order(m) == 1)
        .collect();
    loop {
        let mut changed = false;
        for &(m, big) in &rules {
            let small_set = candidates[&m].clone();
            let big_set: BTreeSet<AlgebraType> = candidates[&big]
                .iter()
                .copied()
                .filter(|&t| contained(facts, t, m).is_some_and(|s| small_set.contains(&s)))
                .collect();
            let reachable: BTreeSet<AlgebraType> = big_set
                .iter()
                .filter_map(|&t| contained(facts, t, m))
                .collect();
            let small_new: BTreeSet<AlgebraType> =
                small_set.intersection(&reachable).copied().collect();
            if big_set != candidates[&big] || small_new != small_set {
                changed = true;
                candidates.insert(big, big_set);
                candidates.insert(m, small_new);
            }
        }
        if !changed {
            break;
        }
    }
    if candidates.values().any(BTreeSet::is_empty) {
        return Err(ShapeError::NoConsistentShape);
    }
    let ambiguous: Vec<String> = candidates
        .iter()
        .filter(|(_, c)| c.len() > 1)
        .map(|(o, c)| {
            let names: Vec<&str> = c.iter().map(|t| t.name()).collect();
            format!("{o}: {}", names.join("|"))
        })
        .collect();
    if !ambiguous.is_empty() {
        return Err(ShapeError::AmbiguousShape(ambiguous.join(", ")));
    }
    Ok(ShapeMap(
        candidates
            .into_iter()
            .map(|(o, c)| (o, *c.iter().next().expect("nonempty")))
            .collect(),
    ))
}

/// (a_t, a_s) when ts has the given order.
pub fn majorana_inner_product(shape: &ShapeMap, order: u64) -> Result<ExactScalar, ShapeError> {
    match order {
        1 => Ok(ExactScalar::one()),
        2..=6 => {
            let tag = shape.get(order).ok_or(ShapeError::Unassigned(order))?;
            Ok(build_algebra(tag)?
                .axis_pair_inner(1)
                .expect("every algebra contains a1"))
        }
        _ => Err(ShapeError::OrderOutOfRange(order)),
    }
}
