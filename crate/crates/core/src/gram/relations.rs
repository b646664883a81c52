use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::rank::{bareiss_rank, rank_consensus, RankConsensus};
use super::{AxisId, GramError, GramMatrix, RelationVector, SCALE};
use crate::context::U35Context;
use crate::exact::{format_rational, int, rational_kernel, rational_rank, ExactScalar, RationalMatrix};
use crate::permcore::Permutation;

/// The relation vectors 45·Σu_i − 32·Σb_j, one for each elementary abelian
/// subgroup of order 9 that is inverted by some involution.
#[derive(Debug, Clone)]
pub struct PasechnikSet {
    pub vectors: Vec<RelationVector>,
    /// The four order-3 subgroups of each 3², sorted.
    pub subgroups: Vec<[usize; 4]>,
    /// The nine involutions of the corresponding 3²:2, sorted.
    pub involutions: Vec<[usize; 9]>,
    /// All elementary abelian subgroups of order 9, with or without an
    /// inverting involution.
    pub elementary_abelian_count: usize,
}

/// Brute-force enumeration of the subgroups 3² and their inverting involutions.
pub fn pasechnik_vectors(ctx: &U35Context) -> Result<PasechnikSet, GramError> {
    let n = ctx.subgroup_count();
    let mut found: BTreeSet<[usize; 4]> = BTreeSet::new();
    for rho in 0..n {
        let r = ctx.subgroup_generator(rho);
        for sigma in rho + 1..n {
            let s = ctx.subgroup_generator(sigma);
            if !r.commutes_with(s) {
                continue;
            }
            let rs = r.then(s);
            let rs2 = rs.then(s);
            let mut key = [
                rho,
                sigma,
                ctx.subgroup_of(&rs).expect("order 3"),
                ctx.subgroup_of(&rs2).expect("order 3"),
            ];
            key.sort_unstable();
            found.insert(key);
        }
    }
    let elementary_abelian_count = found.len();
    let mut set = PasechnikSet {
        vectors: Vec::new(),
        subgroups: Vec::new(),
        involutions: Vec::new(),
        elementary_abelian_count,
    };
    for key in found {
        let gens: Vec<Permutation> = key.iter().map(|&i| *ctx.subgroup_generator(i)).collect();
        let inverts = |t: &Permutation| gens.iter().all(|g| g.conjugate_by(t) == g.inverse());
        let Some(t) = ctx.involutions().iter().find(|t| inverts(t)) else {
            continue;
        };
        let (a, b) = (gens[0], gens[1]);
        let mut invs = Vec::with_capacity(9);
        for i in 0..3 {
            for j in 0..3 {
                let p = t.then(&a.pow(i)).then(&b.pow(j));
                if p.order() != 2 || !inverts(&p) {
                    return Err(GramError::InvertingCoset(key));
                }
                invs.push(ctx.involution_index(&p).expect("involution"));
            }
        }
        invs.sort_unstable();
        let inv_arr: [usize; 9] = invs.try_into().expect("nine involutions");
        let v = RelationVector::from_terms(
            key.iter()
                .map(|&u| (AxisId::ThreeA(u), int(45)))
                .chain(inv_arr.iter().map(|&b| (AxisId::Majorana(b), int(-32)))),
        );
        set.vectors.push(v);
        set.subgroups.push(key);
        set.involutions.push(inv_arr);
    }
    Ok(set)
}

/// A relation with integer coefficients (cleared of denominators) on the
/// matrix row indices.
fn integer_terms(m: &GramMatrix, r: &RelationVector) -> Result<Vec<(usize, i64)>, GramError> {
    let den = r
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let den = ExactScalar::from_integer(den);
    r.iter()
        .map(|(a, c)| {
            let i = m.index_of(*a).ok_or(GramError::MissingAxis(*a))?;
            let k = (c * &den).to_integer().to_i64().ok_or(GramError::NonIntegral {
                value: format_rational(c),
                scale: 1,
            })?;
            Ok((i, k))
        })
        .collect()
}

/// For each relation and each matrix column c, the pairing (r, c) as
/// `A + B·x`, up to a positive factor depending only on r.
pub fn pairing_equations(
    m: &GramMatrix,
    rels: &[RelationVector],
) -> Result<Vec<Vec<(i128, i128)>>, GramError> {
    let pal = m.scaled_affine_palette(SCALE)?;
    let n = m.dim();
    rels.par_iter()
        .map(|r| {
            let terms = integer_terms(m, r)?;
            let mut out = vec![(0i128, 0i128); n];
            for (i, k) in terms {
                for (slot, &code) in out.iter_mut().zip(m.row_codes(i)) {
                    let (a, b) = pal[code as usize];
                    slot.0 += k as i128 * a as i128;
                    slot.1 += k as i128 * b as i128;
                }
            }
            Ok(out)
        })
        .collect()
}

/// The unique x making every relation orthogonal to every axis.
pub fn solve_x(m: &GramMatrix, rels: &[RelationVector]) -> Result<ExactScalar, GramError> {
    let mut root: Option<ExactScalar> = None;
    for eqs in pairing_equations(m, rels)? {
        for (a, b) in eqs {
            if b == 0 {
                if a != 0 {
                    return Err(GramError::Inconsistent);
                }
                continue;
            }
            let r = ExactScalar::new(BigInt::from(-a), BigInt::from(b));
            match &root {
                None => root = Some(r),
                Some(x) if *x == r => {}
                Some(_) => return Err(GramError::Inconsistent),
            }
        }
    }
    root.ok_or(GramError::Unconstrained)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relations: usize,
    pub columns: usize,
    /// Relations whose squared norm is nonzero.
    pub nonzero_norms: usize,
    /// (relation, column) pairs with nonzero pairing.
    pub nonzero_pairings: usize,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.nonzero_norms == 0 && self.nonzero_pairings == 0
    }
}

/// Norms and pairings with all columns at `x`, exactly.
pub fn check_relations(
    m: &GramMatrix,
    rels: &[RelationVector],
    x: &ExactScalar,
) -> Result<RelationCheck, GramError> {
    let eqs = pairing_equations(m, rels)?;
    let (xn, xd) = (
        x.numer().to_i128().ok_or(GramError::Inconsistent)?,
        x.denom().to_i128().ok_or(GramError::Inconsistent)?,
    );
    let value = |(a, b): (i128, i128)| a * xd + b * xn;
    let mut nonzero_norms = 0;
    let mut nonzero_pairings = 0;
    for (r, e) in rels.iter().zip(&eqs) {
        nonzero_pairings += e.iter().filter(|&&ab| value(ab) != 0).count();
        let norm = m.pair(r, r)?;
        if !norm.eval(x).is_zero() {
            nonzero_norms += 1;
        }
    }
    Ok(RelationCheck {
        relations: rels.len(),
        columns: m.dim(),
        nonzero_norms,
        nonzero_pairings,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct A7Report {
    pub vertex: usize,
    pub order: u64,
    pub involutions: usize,
    /// Order-3 subgroups with centralizer order 9 in the A7 (type 3²).
    pub pure_subgroups: usize,
    /// Order-3 subgroups with centralizer order 36 (3-cycles).
    pub three_cycle_subgroups: usize,
    /// Rank of the Gram matrix on the involutions and the 3² subgroups.
    pub rank: RankConsensus,
    pub rank_exact: Option<usize>,
    pub kernel_dimension: Option<usize>,
    pub majorana_rank: RankConsensus,
    pub majorana_rank_exact: Option<usize>,
    /// Rank once the 3-cycle axes are added as well.
    pub rank_with_three_cycles: RankConsensus,
    /// Relation vectors all of whose axes lie in the A7.
    pub internal_relations: usize,
    pub internal_relation_rank: usize,
    /// Dimension of the span of the internal relations that avoids the
    /// 3-cycle axes.
    pub pure_relation_span: usize,
    /// Every vector of that span is in the kernel of the restricted matrix.
    pub pure_span_in_kernel: bool,
}

impl A7Report {
    pub fn passed(&self) -> bool {
        self.involutions == 105
            && self.pure_subgroups == 140
            && self.rank.agreed() == Some(196)
            && self.rank_exact.is_none_or(|r| r == 196)
            && self.kernel_dimension == Some(49)
            && self.majorana_rank.agreed() == Some(105)
            && self.majorana_rank_exact.is_none_or(|r| r == 105)
            && self.pure_relation_span == 35
            && self.pure_span_in_kernel
    }
}

/// Restriction of the Gram matrix at `x` to a vertex stabilizer A7.
pub fn a7_restriction(
    ctx: &U35Context,
    m: &GramMatrix,
    x: &ExactScalar,
    pasechnik: &PasechnikSet,
    vertex: usize,
    primes: &[u64],
    exact: bool,
) -> Result<A7Report, GramError> {
    let h = ctx.vertex_stabilizer(vertex)?;
    let elements = h
        .elements()
        .ok_or_else(|| GramError::A7("vertex stabilizer not enumerated".into()))?;
    let mut invs: Vec<usize> = elements
        .iter()
        .filter(|g| g.order() == 2)
        .map(|g| ctx.involution_index(g).expect("involution"))
        .collect();
    invs.sort_unstable();
    let subs: BTreeSet<usize> = elements
        .iter()
        .filter(|g| g.order() == 3)
        .map(|g| ctx.subgroup_of(g).expect("order 3"))
        .collect();
    let mut pure = Vec::new();
    let mut cycles = Vec::new();
    for s in subs {
        let g = ctx.subgroup_generator(s);
        match elements.iter().filter(|e| e.commutes_with(g)).count() {
            9 => pure.push(s),
            36 => cycles.push(s),
            c => return Err(GramError::A7(format!("centralizer order {c} for an element of order 3"))),
        }
    }

    let axes: Vec<AxisId> = invs
        .iter()
        .map(|&i| AxisId::Majorana(i))
        .chain(pure.iter().map(|&s| AxisId::ThreeA(s)))
        .collect();
    let block = m.restrict_to_axes(&axes)?;
    let majorana = block.majorana_block();
    let mut with_cycles_axes = axes.clone();
    with_cycles_axes.extend(cycles.iter().map(|&s| AxisId::ThreeA(s)));
    let with_cycles = m.restrict_to_axes(&with_cycles_axes)?;

    let rank = rank_consensus(&block, Some(x), primes)?;
    let majorana_rank = rank_consensus(&majorana, Some(x), primes)?;
    let rank_with_three_cycles = rank_consensus(&with_cycles, Some(x), primes)?;
    let (rank_exact, majorana_rank_exact) = if exact {
        (
            Some(super::rank::rank_exact(&block, Some(x))?),
            Some(super::rank::rank_exact(&majorana, Some(x))?),
        )
    } else {
        (None, None)
    };
    let certified = rank_exact.or(rank.agreed());
    let kernel_dimension = certified.map(|r| block.dim() - r);

    // Relations inside the A7, on the coordinates (involutions, 3², 3-cycles).
    let inv_set: BTreeSet<usize> = invs.iter().copied().collect();
    let sub_set: BTreeSet<usize> = pure.iter().chain(&cycles).copied().collect();
    let internal: Vec<&RelationVector> = pasechnik
        .vectors
        .iter()
        .zip(pasechnik.subgroups.iter().zip(&pasechnik.involutions))
        .filter(|(_, (s, t))| s.iter().all(|u| sub_set.contains(u)) && t.iter().all(|b| inv_set.contains(b)))
        .map(|(v, _)| v)
        .collect();
    let coords: Vec<AxisId> = with_cycles_axes.clone();
    let rows: RationalMatrix = internal
        .iter()
        .map(|v| coords.iter().map(|a| v.coeff(a)).collect())
        .collect();
    let internal_relation_rank = rational_rank(&rows);
    // Combinations c with Σ c_k v_k vanishing on every 3-cycle coordinate.
    let cycle_cols: Vec<usize> = (axes.len()..coords.len()).collect();
    let on_cycles: RationalMatrix = cycle_cols
        .iter()
        .map(|&j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let combos = rational_kernel(&on_cycles, rows.len());
    let span: RationalMatrix = combos
        .iter()
        .map(|c| {
            (0..axes.len())
                .map(|j| {
                    c.iter()
                        .zip(&rows)
                        .fold(ExactScalar::zero(), |acc, (ck, r)| acc + ck * &r[j])
                })
                .collect()
        })
        .collect();
    let pure_relation_span = rational_rank(&span);
    let values = block.evaluated_palette(Some(x))?;
    let pure_span_in_kernel = span.par_iter().all(|w| {
        (0..block.dim()).all(|i| {
            let row = block.row_codes(i);
            w.iter()
                .zip(row)
                .fold(ExactScalar::zero(), |acc, (wj, &c)| acc + wj * &values[c as usize])
                .is_zero()
        })
    });

    Ok(A7Report {
        vertex,
        order: h.order(),
        involutions: invs.len(),
        pure_subgroups: pure.len(),
        three_cycle_subgroups: cycles.len(),
        rank,
        rank_exact,
        kernel_dimension,
        majorana_rank,
        majorana_rank_exact,
        rank_with_three_cycles,
        internal_relations: internal.len(),
        internal_relation_rank,
        pure_relation_span,
        pure_span_in_kernel,
    })
}

/// Integer fraction-free rank of small rational row sets.
pub(crate) fn integer_row_rank(rows: &[Vec<i128>]) -> usize {
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    bareiss_rank(&rows)
}
