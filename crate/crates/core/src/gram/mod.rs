//! Gram matrices of the Majorana axes and the 3A-axes of U3(5), their
//! ranks, the relation vectors living in their kernels and the orbit data
//! around a fixed 3A-axis.

mod export;
mod orbits;
mod rank;
mod relations;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::context::U35Context;
use crate::exact::{AffineScalar, ExactScalar, FormalVector};
use crate::permcore::{PermError, Permutation};
use crate::shapes::{
    axis_pair_census, majorana_inner_product, subgroup_pair_census, AxisPairClass, ShapeError,
    ShapeMap, SubgroupPairClass,
};

pub use export::{export_matrix, ExportManifest};
pub use orbits::{
    f_combinations, find_s3_s4_involution, gamma_minus_orbits, ComplementClasses, resurrection_inner_check, v_decomposition,
    LinkingInvolution, OrbitDecomposition, ResurrectionReport, S4Labelling, VDecomposition,
};
pub use rank::{
    bareiss_rank, is_prime, rank_consensus, symmetric_exact, SymmetricExact, rank_exact, rank_mod_p,
    palette_residues, rank_mod_p_dense, ModpEchelon, RankConsensus, DEFAULT_PRIMES,
};
pub use relations::{
    a7_restriction, check_relations, pairing_equations, pasechnik_vectors, solve_x, A7Report,
    PasechnikSet, RelationCheck,
};

/// Common denominator of every entry of the U3(5) Gram matrix at x = 4/81.
pub const SCALE: i64 = 103_680;

/// A Majorana axis, indexed by involution, or a 3A-axis, indexed by
/// subgroup of order 3 so that u_ρ = u_{ρ⁻¹}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AxisId {
    Majorana(usize),
    ThreeA(usize),
}

impl AxisId {
    /// Position in the full 2275 ordering: involutions first, then subgroups.
    pub fn position(self) -> usize {
        match self {
            AxisId::Majorana(i) => i,
            AxisId::ThreeA(i) => crate::context::INVOLUTION_COUNT + i,
        }
    }

    pub fn from_position(p: usize) -> AxisId {
        if p < crate::context::INVOLUTION_COUNT {
            AxisId::Majorana(p)
        } else {
            AxisId::ThreeA(p - crate::context::INVOLUTION_COUNT)
        }
    }

    pub fn is_majorana(self) -> bool {
        matches!(self, AxisId::Majorana(_))
    }

    /// The axis indexed by the conjugate of this one under `g`.
    pub fn conjugate(self, ctx: &U35Context, g: &Permutation) -> AxisId {
        match self {
            AxisId::Majorana(i) => AxisId::Majorana(ctx.conjugate_involution(i, g)),
            AxisId::ThreeA(i) => AxisId::ThreeA(ctx.conjugate_subgroup(i, g)),
        }
    }
}

impl fmt::Display for AxisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisId::Majorana(i) => write!(f, "a{i}"),
            AxisId::ThreeA(i) => write!(f, "u{i}"),
        }
    }
}

pub type RelationVector = FormalVector<AxisId>;

#[derive(Debug, Error)]
pub enum GramError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("{0} is not a prime outside {{2, 3, 5}}")]
    InvalidPrime(u64),
    #[error("prime {0} divides an entry denominator")]
    DenominatorCollision(u64),
    #[error("matrix depends on x but no value was supplied")]
    UnknownNotFixed,
    #[error("entry {value} is not integral after scaling by {scale}")]
    NonIntegral { value: String, scale: i64 },
    #[error("inconsistent system")]
    Inconsistent,
    #[error("x unconstrained")]
    Unconstrained,
    #[error("axis {0} is not a row of the matrix")]
    MissingAxis(AxisId),
    #[error("degenerate: coefficient of x vanishes")]
    Degenerate,
    #[error("S4 labelling ambiguous: {0}")]
    S4Labelling(String),
    #[error("no involution t with <rho,t> = S3 and <sigma,t> = S4")]
    LinkingInvolutionNotFound,
    #[error("no valid pairing")]
    NoValidPairing,
    #[error("orbit structure: {0}")]
    OrbitStructure(String),
    #[error("the inverting coset of the 3² with subgroups {0:?} contains a non-inverting element")]
    InvertingCoset([usize; 4]),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("A7 restriction: {0}")]
    A7(String),
    #[error("relation {index} pairs to {value} with axis {axis}")]
    NonzeroPairing {
        index: usize,
        axis: AxisId,
        value: String,
    },
}

/// Pair classes against one fixed order-3 subgroup, transported to any
/// other subgroup by conjugation.
pub struct PairClassification {
    base: usize,
    axis: Vec<AxisPairClass>,
    subgroup: Vec<SubgroupPairClass>,
    to_base: Vec<u32>,
}

impl PairClassification {
    pub fn compute(ctx: &U35Context, base: usize) -> Result<Self, ShapeError> {
        Ok(Self {
            base,
            axis: axis_pair_census(ctx, base)?,
            subgroup: subgroup_pair_census(ctx, base)?,
            to_base: ctx.subgroup_conjugators_to(base),
        })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// The first element `g` with `ρ^g = base`.
    pub fn conjugator_to_base<'a>(&self, ctx: &'a U35Context, rho: usize) -> &'a Permutation {
        ctx.group().element(self.to_base[rho] as usize)
    }

    /// Class of ⟨t, ρ⟩ for the involution with index `t`.
    pub fn axis_class(&self, ctx: &U35Context, t: usize, rho: usize) -> AxisPairClass {
        let g = self.conjugator_to_base(ctx, rho);
        self.axis[ctx.conjugate_involution(t, g)]
    }

    pub fn subgroup_class(&self, ctx: &U35Context, rho: usize, sigma: usize) -> SubgroupPairClass {
        let g = self.conjugator_to_base(ctx, rho);
        self.subgroup[ctx.conjugate_subgroup(sigma, g)]
    }
}

/// Symmetric matrix of inner products, each entry affine in x. Entries are
/// stored as one-byte codes into a small palette of distinct values.
#[derive(Clone)]
pub struct GramMatrix {
    axes: Vec<AxisId>,
    positions: FxHashMap<AxisId, u32>,
    palette: Vec<AffineScalar>,
    codes: Vec<u8>,
}

impl fmt::Debug for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GramMatrix")
            .field("dim", &self.dim())
            .field("palette", &self.palette)
            .finish()
    }
}

impl GramMatrix {
    /// Builds a matrix from per-entry codes. Unused palette entries are dropped.
    pub fn from_codes(axes: Vec<AxisId>, palette: Vec<AffineScalar>, codes: Vec<u8>) -> Self {
        assert_eq!(codes.len(), axes.len() * axes.len(), "code table size");
        let mut used = vec![false; palette.len()];
        for &c in &codes {
            used[c as usize] = true;
        }
        let mut remap = vec![u8::MAX; palette.len()];
        let mut compact = Vec::new();
        for (i, v) in palette.into_iter().enumerate() {
            if used[i] {
                remap[i] = compact.len() as u8;
                compact.push(v);
            }
        }
        let codes = codes.into_iter().map(|c| remap[c as usize]).collect();
        let positions = axes
            .iter()
            .enumerate()
            .map(|(i, a)| (*a, i as u32))
            .collect();
        Self {
            axes,
            positions,
            palette: compact,
            codes,
        }
    }

    /// Dense constructor for small hand-made matrices.
    pub fn from_entries(axes: Vec<AxisId>, entries: &[Vec<AffineScalar>]) -> Self {
        let mut palette: Vec<AffineScalar> = Vec::new();
        let mut codes = Vec::with_capacity(axes.len() * axes.len());
        for row in entries {
            assert_eq!(row.len(), axes.len(), "row length");
            for v in row {
                let c = match palette.iter().position(|p| p == v) {
                    Some(c) => c,
                    None => {
                        palette.push(v.clone());
                        palette.len() - 1
                    }
                };
                codes.push(u8::try_from(c).expect("at most 256 distinct entries"));
            }
        }
        Self::from_codes(axes, palette, codes)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[AxisId] {
        &self.axes
    }

    pub fn index_of(&self, axis: AxisId) -> Option<usize> {
        self.positions.get(&axis).map(|&i| i as usize)
    }

    pub fn palette(&self) -> &[AffineScalar] {
        &self.palette
    }

    pub fn code(&self, i: usize, j: usize) -> u8 {
        self.codes[i * self.dim() + j]
    }

    pub fn row_codes(&self, i: usize) -> &[u8] {
        let n = self.dim();
        &self.codes[i * n..(i + 1) * n]
    }

    pub fn entry(&self, i: usize, j: usize) -> &AffineScalar {
        &self.palette[self.code(i, j) as usize]
    }

    pub fn entry_for(&self, a: AxisId, b: AxisId) -> Result<&AffineScalar, GramError> {
        let i = self.index_of(a).ok_or(GramError::MissingAxis(a))?;
        let j = self.index_of(b).ok_or(GramError::MissingAxis(b))?;
        Ok(self.entry(i, j))
    }

    pub fn has_unknown(&self) -> bool {
        self.palette.iter().any(|v| !v.is_constant())
    }

    /// Number of entries carrying x.
    pub fn unknown_support(&self) -> usize {
        let marked: Vec<bool> = self.palette.iter().map(|v| !v.is_constant()).collect();
        self.codes.iter().filter(|&&c| marked[c as usize]).count()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i + 1..n).all(|j| self.code(i, j) == self.code(j, i)))
    }

    /// Principal submatrix on the given row indices, in that order.
    pub fn restrict(&self, indices: &[usize]) -> GramMatrix {
        let axes = indices.iter().map(|&i| self.axes[i]).collect();
        let mut codes = Vec::with_capacity(indices.len() * indices.len());
        for &i in indices {
            let row = self.row_codes(i);
            codes.extend(indices.iter().map(|&j| row[j]));
        }
        GramMatrix::from_codes(axes, self.palette.clone(), codes)
    }

    pub fn restrict_to_axes(&self, axes: &[AxisId]) -> Result<GramMatrix, GramError> {
        let idx = axes
            .iter()
            .map(|&a| self.index_of(a).ok_or(GramError::MissingAxis(a)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.restrict(&idx))
    }

    pub fn majorana_block(&self) -> GramMatrix {
        let idx: Vec<usize> = (0..self.dim())
            .filter(|&i| self.axes[i].is_majorana())
            .collect();
        self.restrict(&idx)
    }

    /// Palette values at `x`; `None` is allowed only for x-free matrices.
    pub fn evaluated_palette(&self, x: Option<&ExactScalar>) -> Result<Vec<ExactScalar>, GramError> {
        self.palette
            .iter()
            .map(|v| match x {
                Some(x) => Ok(v.eval(x)),
                None if v.is_constant() => Ok(v.constant.clone()),
                None => Err(GramError::UnknownNotFixed),
            })
            .collect()
    }

    /// Palette values at `x`, multiplied by `scale` and required to be integers.
    pub fn scaled_palette(&self, x: Option<&ExactScalar>, scale: i64) -> Result<Vec<i64>, GramError> {
        let s = ExactScalar::from_integer(BigInt::from(scale));
        self.evaluated_palette(x)?
            .iter()
            .map(|v| scaled_integer(v, &s, scale))
            .collect()
    }

    /// Both parts of every palette entry multiplied by `scale`, as integers.
    pub fn scaled_affine_palette(&self, scale: i64) -> Result<Vec<(i64, i64)>, GramError> {
        let s = ExactScalar::from_integer(BigInt::from(scale));
        self.palette
            .iter()
            .map(|v| {
                Ok((
                    scaled_integer(&v.constant, &s, scale)?,
                    scaled_integer(&v.x_coeff, &s, scale)?,
                ))
            })
            .collect()
    }

    /// Least common denominator of the palette at `x`.
    pub fn common_denominator(&self, x: Option<&ExactScalar>) -> Result<BigInt, GramError> {
        Ok(self
            .evaluated_palette(x)?
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom())))
    }

    /// (u, v) for formal combinations of axes, affine in x.
    pub fn pair(&self, u: &RelationVector, v: &RelationVector) -> Result<AffineScalar, GramError> {
        let mut total = AffineScalar::zero();
        for (a, ca) in u.iter() {
            let i = self.index_of(*a).ok_or(GramError::MissingAxis(*a))?;
            for (b, cb) in v.iter() {
                let j = self.index_of(*b).ok_or(GramError::MissingAxis(*b))?;
                total.add_assign_scaled(self.entry(i, j), &(ca * cb));
            }
        }
        Ok(total)
    }

    /// (u, c) for a formal combination u and the axis in row `col`.
    pub fn pair_with_row(&self, u: &RelationVector, col: usize) -> Result<AffineScalar, GramError> {
        let mut total = AffineScalar::zero();
        for (a, ca) in u.iter() {
            let i = self.index_of(*a).ok_or(GramError::MissingAxis(*a))?;
            total.add_assign_scaled(self.entry(i, col), ca);
        }
        Ok(total)
    }
}

fn scaled_integer(v: &ExactScalar, s: &ExactScalar, scale: i64) -> Result<i64, GramError> {
    let w = v * s;
    let err = || GramError::NonIntegral {
        value: crate::exact::format_rational(v),
        scale,
    };
    if !w.is_integer() {
        return Err(err());
    }
    w.to_integer().to_i64().ok_or_else(err)
}

struct Palette(Vec<AffineScalar>);

impl Palette {
    fn code(&mut self, v: AffineScalar) -> u8 {
        match self.0.iter().position(|p| *p == v) {
            Some(c) => c as u8,
            None => {
                self.0.push(v);
                u8::try_from(self.0.len() - 1).expect("palette overflow")
            }
        }
    }
}

/// The Gram matrix of the 525 Majorana axes, followed by the 1750 3A-axes
/// when `include_3a` is set. Entries come from the shape (axis pairs), the
/// (t, ρ) classes and the (ρ, σ) classes; pairs generating the whole group
/// carry the unknown x.
pub fn assemble_gram(
    ctx: &U35Context,
    pairs: &PairClassification,
    shape: &ShapeMap,
    include_3a: bool,
) -> Result<GramMatrix, GramError> {
    let mut palette = Palette(Vec::new());
    let mut order_code = [0u8; 7];
    for (o, slot) in order_code.iter_mut().enumerate().skip(1) {
        *slot = palette.code(AffineScalar::constant(majorana_inner_product(shape, o as u64)?));
    }
    let axis_code: FxHashMap<AxisPairClass, u8> = AxisPairClass::ALL
        .iter()
        .map(|c| (*c, palette.code(AffineScalar::constant(c.inner_product()))))
        .collect();
    let sub_code: FxHashMap<SubgroupPairClass, u8> = SubgroupPairClass::ALL
        .iter()
        .map(|c| (*c, palette.code(c.inner_product())))
        .collect();
    let diag_3a = sub_code[&SubgroupPairClass::C3];

    let ninv = ctx.involutions().len();
    let axes: Vec<AxisId> = (0..ninv)
        .map(AxisId::Majorana)
        .chain((0..if include_3a { ctx.subgroup_count() } else { 0 }).map(AxisId::ThreeA))
        .collect();
    let n = axes.len();
    let invs = ctx.involutions();
    let mut codes = vec![0u8; n * n];
    codes.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        match axes[i] {
            AxisId::Majorana(t) => {
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = match axes[j] {
                        AxisId::Majorana(s) => {
                            let o = invs[t].then(&invs[s]).order() as usize;
                            order_code[o]
                        }
                        AxisId::ThreeA(rho) => axis_code[&pairs.axis_class(ctx, t, rho)],
                    };
                }
            }
            AxisId::ThreeA(rho) => {
                let g = pairs.conjugator_to_base(ctx, rho);
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = match axes[j] {
                        AxisId::Majorana(t) => {
                            axis_code[&pairs.axis[ctx.conjugate_involution(t, g)]]
                        }
                        AxisId::ThreeA(sigma) if sigma == rho => diag_3a,
                        AxisId::ThreeA(sigma) => {
                            sub_code[&pairs.subgroup[ctx.conjugate_subgroup(sigma, g)]]
                        }
                    };
                }
            }
        }
    });
    Ok(GramMatrix::from_codes(axes, palette.0, codes))
}
