//! The eight dihedral Majorana algebras: exact multiplication and inner
//! product tables, eigenspaces of the adjoint action of an axis, fusion
//! rules and automorphism checks.

mod data;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{rat, ExactScalar, FormalVector};

pub use verify::{
    ad_eigenspaces, ad_matrix, norton_inequality_check, sampled_norton_check, verify_algebra,
    verify_fusion, verify_tau_sigma, AlgebraReport, AxisReport, FusionReport, FusionViolation,
    TauSigmaReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NortsakError {
    #[error("algebra data line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown algebra type {0:?}")]
    UnknownType(String),
    #[error("{tag}: unknown basis label {label:?}")]
    UnknownLabel { tag: AlgebraType, label: String },
    #[error("{tag}: symmetry completion inconsistent at ({x}, {y})")]
    InconsistentCompletion { tag: AlgebraType, x: String, y: String },
    #[error("{tag}: table incomplete at ({x}, {y})")]
    Incomplete { tag: AlgebraType, x: String, y: String },
    #[error("{tag}: spectrum violation for ad({axis}): eigenspaces have total dimension {found} of {dim}")]
    SpectrumViolation {
        tag: AlgebraType,
        axis: String,
        found: usize,
        dim: usize,
    },
    #[error("{tag}: {axis} is not a Majorana axis of the basis")]
    NotMajorana { tag: AlgebraType, axis: String },
    #[error("algebra {0} missing from data")]
    Missing(AlgebraType),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AlgebraType {
    #[serde(rename = "2A")]
    A2,
    #[serde(rename = "2B")]
    B2,
    #[serde(rename = "3A")]
    A3,
    #[serde(rename = "3C")]
    C3,
    #[serde(rename = "4A")]
    A4,
    #[serde(rename = "4B")]
    B4,
    #[serde(rename = "5A")]
    A5,
    #[serde(rename = "6A")]
    A6,
}

impl AlgebraType {
    pub const ALL: [AlgebraType; 8] = [
        AlgebraType::A2,
        AlgebraType::B2,
        AlgebraType::A3,
        AlgebraType::C3,
        AlgebraType::A4,
        AlgebraType::B4,
        AlgebraType::A5,
        AlgebraType::A6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgebraType::A2 => "2A",
            AlgebraType::B2 => "2B",
            AlgebraType::A3 => "3A",
            AlgebraType::C3 => "3C",
            AlgebraType::A4 => "4A",
            AlgebraType::B4 => "4B",
            AlgebraType::A5 => "5A",
            AlgebraType::A6 => "6A",
        }
    }

    /// Order of the product of the two generating involutions.
    pub fn rotation_order(self) -> usize {
        match self {
            AlgebraType::A2 | AlgebraType::B2 => 2,
            AlgebraType::A3 | AlgebraType::C3 => 3,
            AlgebraType::A4 | AlgebraType::B4 => 4,
            AlgebraType::A5 => 5,
            AlgebraType::A6 => 6,
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            AlgebraType::A2 => 3,
            AlgebraType::B2 => 2,
            AlgebraType::A3 => 4,
            AlgebraType::C3 => 3,
            AlgebraType::A4 | AlgebraType::B4 => 5,
            AlgebraType::A5 => 6,
            AlgebraType::A6 => 8,
        }
    }
}

impl fmt::Display for AlgebraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgebraType {
    type Err = NortsakError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgebraType::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| NortsakError::UnknownType(s.to_string()))
    }
}

/// Spectrum of the adjoint action of a Majorana axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Eigenvalue {
    One,
    Zero,
    Quarter,
    ThirtySecond,
}

impl Eigenvalue {
    pub const ALL: [Eigenvalue; 4] = [
        Eigenvalue::One,
        Eigenvalue::Zero,
        Eigenvalue::Quarter,
        Eigenvalue::ThirtySecond,
    ];

    pub fn value(self) -> ExactScalar {
        match self {
            Eigenvalue::One => ExactScalar::one(),
            Eigenvalue::Zero => ExactScalar::zero(),
            Eigenvalue::Quarter => rat(1, 4),
            Eigenvalue::ThirtySecond => rat(1, 32),
        }
    }

    pub fn from_value(v: &ExactScalar) -> Option<Eigenvalue> {
        Eigenvalue::ALL.into_iter().find(|e| &e.value() == v)
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Eigenvalue::One => "1",
            Eigenvalue::Zero => "0",
            Eigenvalue::Quarter => "1/4",
            Eigenvalue::ThirtySecond => "1/32",
        })
    }
}

/// Allowed eigenvalues of a product of a λ- and a μ-eigenvector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionTable {
    rules: BTreeMap<(Eigenvalue, Eigenvalue), Vec<Eigenvalue>>,
}

impl FusionTable {
    pub fn majorana() -> Self {
        use Eigenvalue::*;
        let mut rules = BTreeMap::new();
        let mut put = |a: Eigenvalue, b: Eigenvalue, allowed: &[Eigenvalue]| {
            rules.insert((a, b), allowed.to_vec());
            rules.insert((b, a), allowed.to_vec());
        };
        put(One, One, &[One]);
        put(One, Zero, &[Zero]);
        put(One, Quarter, &[Quarter]);
        put(One, ThirtySecond, &[ThirtySecond]);
        put(Zero, Zero, &[Zero]);
        put(Zero, Quarter, &[Quarter]);
        put(Zero, ThirtySecond, &[ThirtySecond]);
        put(Quarter, Quarter, &[One, Zero]);
        put(Quarter, ThirtySecond, &[ThirtySecond]);
        put(ThirtySecond, ThirtySecond, &[One, Zero, Quarter]);
        FusionTable { rules }
    }

    pub fn allowed(&self, a: Eigenvalue, b: Eigenvalue) -> &[Eigenvalue] {
        &self.rules[&(a, b)]
    }

    pub fn is_symmetric(&self) -> bool {
        self.rules
            .iter()
            .all(|(&(a, b), v)| self.rules.get(&(b, a)) == Some(v))
    }
}

/// Dense coordinates with respect to an algebra basis.
pub type Coords = Vec<ExactScalar>;

/// One dihedral algebra with completed tables.
#[derive(Clone)]
pub struct AlgebraSpec {
    tag: AlgebraType,
    basis: Vec<String>,
    majorana: Vec<usize>,
    products: Vec<Coords>,
    gram: Vec<Vec<ExactScalar>>,
    listed_eigenvectors: Vec<(Eigenvalue, FormalVector<String>)>,
}

impl fmt::Debug for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraSpec")
            .field("tag", &self.tag)
            .field("basis", &self.basis)
            .finish_non_exhaustive()
    }
}

impl AlgebraSpec {
    pub fn tag(&self) -> AlgebraType {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn majorana_axes(&self) -> impl Iterator<Item = &str> + '_ {
        self.majorana.iter().map(|&i| self.basis[i].as_str())
    }

    pub fn is_majorana(&self, label: &str) -> bool {
        self.index_of(label).is_some_and(|i| self.majorana.contains(&i))
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }

    fn index(&self, label: &str) -> Result<usize, NortsakError> {
        self.index_of(label).ok_or_else(|| NortsakError::UnknownLabel {
            tag: self.tag,
            label: label.to_string(),
        })
    }

    /// Product of two basis vectors.
    pub fn basis_product(&self, i: usize, j: usize) -> &Coords {
        &self.products[i * self.dim() + j]
    }

    pub fn basis_inner(&self, i: usize, j: usize) -> &ExactScalar {
        &self.gram[i][j]
    }

    pub fn gram(&self) -> &[Vec<ExactScalar>] {
        &self.gram
    }

    pub fn coords(&self, v: &FormalVector<String>) -> Result<Coords, NortsakError> {
        let mut out = vec![ExactScalar::zero(); self.dim()];
        for (k, c) in v.iter() {
            out[self.index(k)?] += c;
        }
        Ok(out)
    }

    pub fn formal(&self, v: &[ExactScalar]) -> FormalVector<String> {
        FormalVector::from_terms(
            self.basis
                .iter()
                .zip(v)
                .map(|(b, c)| (b.clone(), c.clone())),
        )
    }

    pub fn unit(&self, label: &str) -> Result<Coords, NortsakError> {
        let i = self.index(label)?;
        let mut v = vec![ExactScalar::zero(); self.dim()];
        v[i] = ExactScalar::one();
        Ok(v)
    }

    pub fn multiply(&self, u: &[ExactScalar], v: &[ExactScalar]) -> Coords {
        let n = self.dim();
        let mut out = vec![ExactScalar::zero(); n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let c = ui * vj;
                for (o, p) in out.iter_mut().zip(self.basis_product(i, j)) {
                    if !p.is_zero() {
                        *o += &c * p;
                    }
                }
            }
        }
        out
    }

    pub fn inner(&self, u: &[ExactScalar], v: &[ExactScalar]) -> ExactScalar {
        let mut s = ExactScalar::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    s += ui * vj * &self.gram[i][j];
                }
            }
        }
        s
    }

    pub fn product_of(&self, x: &str, y: &str) -> Result<FormalVector<String>, NortsakError> {
        Ok(self.formal(self.basis_product(self.index(x)?, self.index(y)?)))
    }

    pub fn inner_of(&self, x: &str, y: &str) -> Result<ExactScalar, NortsakError> {
        Ok(self.gram[self.index(x)?][self.index(y)?].clone())
    }

    /// Eigenvectors of ad(a0) exactly as listed in the data file.
    pub fn listed_eigenvectors(&self) -> &[(Eigenvalue, FormalVector<String>)] {
        &self.listed_eigenvectors
    }

    /// Inner product of a0 with the axis a_k, when a_k is in the basis.
    pub fn axis_pair_inner(&self, k: i64) -> Option<ExactScalar> {
        let n = self.tag.rotation_order() as i64;
        let label = self
            .basis
            .iter()
            .find(|b| axis_index(b).is_some_and(|i| (i - k).rem_euclid(n) == 0))?;
        self.inner_of("a0", label).ok()
    }
}

/// Index i of an axis label "a{i}", `None` for auxiliary vectors.
pub(crate) fn axis_index(label: &str) -> Option<i64> {
    label.strip_prefix('a')?.parse().ok()
}

pub fn build_algebra(tag: AlgebraType) -> Result<AlgebraSpec, NortsakError> {
    data::all_algebras()?
        .into_iter()
        .find(|a| a.tag == tag)
        .ok_or(NortsakError::Missing(tag))
}

pub fn build_all_algebras() -> Result<Vec<AlgebraSpec>, NortsakError> {
    data::all_algebras()
}

pub use data::{parse_algebras, ALGEBRA_DATA};
