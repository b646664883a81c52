//! Exact rationals, formal linear combinations and small dense rational
//! linear algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type ExactScalar = BigRational;

pub fn rat(numer: i64, denom: i64) -> ExactScalar {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse rational {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<ExactScalar, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(n, d))
}

/// Always `"p/q"`, including `q = 1`.
pub fn format_rational(r: &ExactScalar) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Rational linear combination of labels. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalVector<K: Ord> {
    terms: BTreeMap<K, ExactScalar>,
}

impl<K: Ord + Clone> FormalVector<K> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(key: K) -> Self {
        let mut v = Self::zero();
        v.add_term(key, ExactScalar::one());
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, ExactScalar)>) -> Self {
        let mut v = Self::zero();
        for (k, c) in terms {
            v.add_term(k, c);
        }
        v
    }

    pub fn add_term(&mut self, key: K, coeff: ExactScalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(ExactScalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, key: &K) -> ExactScalar {
        self.terms.get(key).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: &ExactScalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> FormalVector<L> {
        FormalVector::from_terms(self.terms.iter().map(|(k, v)| (f(k), v.clone())))
    }
}

impl<K: Ord + Clone> Default for FormalVector<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Ord + Clone> Add for &FormalVector<K> {
    type Output = FormalVector<K>;
    fn add(self, rhs: Self) -> FormalVector<K> {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl<K: Ord + Clone> Sub for &FormalVector<K> {
    type Output = FormalVector<K>;
    fn sub(self, rhs: Self) -> FormalVector<K> {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }
}

impl<K: Ord + Clone> Neg for &FormalVector<K> {
    type Output = FormalVector<K>;
    fn neg(self) -> FormalVector<K> {
        self.scaled(&-ExactScalar::one())
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Debug for FormalVector<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){k}")?;
        }
        Ok(())
    }
}

/// `constant + x_coeff·x` for the single unknown inner product `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineScalar {
    pub constant: ExactScalar,
    pub x_coeff: ExactScalar,
}

impl AffineScalar {
    pub fn constant(c: ExactScalar) -> Self {
        Self {
            constant: c,
            x_coeff: ExactScalar::zero(),
        }
    }

    /// The unknown itself.
    pub fn unknown() -> Self {
        Self {
            constant: ExactScalar::zero(),
            x_coeff: ExactScalar::one(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(ExactScalar::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.x_coeff.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.x_coeff.is_zero()
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        &self.constant + &self.x_coeff * x
    }

    pub fn scaled(&self, c: &ExactScalar) -> Self {
        Self {
            constant: &self.constant * c,
            x_coeff: &self.x_coeff * c,
        }
    }

    pub fn add_assign_scaled(&mut self, other: &AffineScalar, c: &ExactScalar) {
        self.constant += &other.constant * c;
        self.x_coeff += &other.x_coeff * c;
    }

    /// The root of `constant + x_coeff·x = 0`, if the coefficient is nonzero.
    pub fn root(&self) -> Option<ExactScalar> {
        (!self.x_coeff.is_zero()).then(|| -&self.constant / &self.x_coeff)
    }
}

impl fmt::Display for AffineScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.constant.is_zero(), self.x_coeff.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.constant)),
            (true, false) if self.x_coeff.is_one() => write!(f, "x"),
            (true, false) => write!(f, "{}*x", format_rational(&self.x_coeff)),
            (false, false) => write!(
                f,
                "{} + {}*x",
                format_rational(&self.constant),
                format_rational(&self.x_coeff)
            ),
        }
    }
}

pub type RationalMatrix = Vec<Vec<ExactScalar>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut RationalMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rational_rank(m: &RationalMatrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Basis of `{v : m v = 0}`.
pub fn rational_kernel(m: &RationalMatrix, cols: usize) -> Vec<Vec<ExactScalar>> {
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ExactScalar::zero(); cols];
            v[f] = ExactScalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[row][f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, `None` if singular.
pub fn rational_inverse(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.len();
    let mut aug: RationalMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(m: &RationalMatrix) -> ExactScalar {
    let n = m.len();
    let mut a = m.clone();
    let mut det = ExactScalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return ExactScalar::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            let pivot_row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(pivot_row.iter()).skip(c) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// All leading principal minors of a small square matrix.
pub fn leading_principal_minors(m: &RationalMatrix) -> Vec<ExactScalar> {
    (1..=m.len())
        .map(|k| {
            let block: RationalMatrix = m[..k].iter().map(|row| row[..k].to_vec()).collect();
            determinant(&block)
        })
        .collect()
}

pub fn is_positive(x: &ExactScalar) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("8/5").unwrap(), rat(8, 5));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(4, 81)), "4/81");
        assert_eq!(format_rational(&int(1)), "1/1");
        assert_eq!(format_rational(&rat(-10, 4)), "-5/2");
    }

    #[test]
    fn formal_vector_drops_zeros() {
        let mut v = FormalVector::basis("a");
        v.add_term("b", rat(1, 2));
        v.add_term("a", int(-1));
        assert_eq!(v.len(), 1);
        assert_eq!(v.coeff(&"b"), rat(1, 2));
        let w = &v - &v;
        assert!(w.is_zero());
    }

    #[test]
    fn affine_root() {
        let mut a = AffineScalar::constant(rat(-4, 9));
        a.add_assign_scaled(&AffineScalar::unknown(), &int(9));
        assert_eq!(a.root(), Some(rat(4, 81)));
        assert!(a.eval(&rat(4, 81)).is_zero());
        assert_eq!(AffineScalar::constant(int(1)).root(), None);
        assert_eq!(a.to_string(), "-4/9 + 9/1*x");
    }

    #[test]
    fn kernel_and_inverse() {
        let m = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
        ];
        assert_eq!(rational_rank(&m), 1);
        let k = rational_kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: ExactScalar = m[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
        let sq = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = rational_inverse(&sq).unwrap();
        assert_eq!(inv, vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]);
        assert!(rational_inverse(&vec![vec![int(1), int(1)], vec![int(1), int(1)]]).is_none());
        assert_eq!(determinant(&sq), int(1));
        assert_eq!(leading_principal_minors(&sq), vec![int(2), int(1)]);
    }
}
