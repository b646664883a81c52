use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use rug::{Assign, Integer};
use serde::Serialize;

use super::{GramError, GramMatrix, SCALE};
use crate::exact::ExactScalar;

/// Three primes in (2^20, 2^21): the first prime above 2^20, the
/// 100 000th prime and the last prime below 2^21.
pub const DEFAULT_PRIMES: [u64; 3] = [1_048_583, 1_299_709, 2_097_143];

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn residue(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

/// Residues of the palette scaled by [`SCALE`].
pub fn palette_residues(m: &GramMatrix, x: Option<&ExactScalar>, p: u64) -> Result<Vec<u64>, GramError> {
    if p <= 5 || !is_prime(p) {
        return Err(GramError::InvalidPrime(p));
    }
    let scale = ExactScalar::from_integer(BigInt::from(SCALE));
    m.evaluated_palette(x)?
        .iter()
        .map(|v| {
            let w = v * &scale;
            let den = residue(w.denom(), p);
            if den == 0 {
                return Err(GramError::DenominatorCollision(p));
            }
            Ok(mul_mod(residue(w.numer(), p), inv_mod(den, p), p))
        })
        .collect()
}

/// Rank of the entrywise reduction modulo `p` of the matrix at `x`,
/// scaled by [`SCALE`]. This is a lower bound for the rational rank.
pub fn rank_mod_p(m: &GramMatrix, x: Option<&ExactScalar>, p: u64) -> Result<usize, GramError> {
    let res = palette_residues(m, x, p)?;
    let n = m.dim();
    if lazy_budget(p) > 0 {
        let table: Vec<f64> = res.iter().map(|&r| r as f64).collect();
        let data = (0..n * n).map(|k| table[m.codes[k] as usize]).collect();
        Ok(rank_f64(data, n, n, p))
    } else {
        let data = (0..n * n).map(|k| res[m.codes[k] as usize]).collect();
        Ok(rank_u64(data, n, n, p))
    }
}

/// Rank modulo `p` of a dense row-major matrix of residues.
pub fn rank_mod_p_dense(data: &[u64], rows: usize, cols: usize, p: u64) -> Result<usize, GramError> {
    if p < 2 || !is_prime(p) {
        return Err(GramError::InvalidPrime(p));
    }
    assert_eq!(data.len(), rows * cols, "matrix size");
    let data: Vec<u64> = data.iter().map(|v| v % p).collect();
    if lazy_budget(p) > 0 {
        Ok(rank_f64(data.into_iter().map(|v| v as f64).collect(), rows, cols, p))
    } else {
        Ok(rank_u64(data, rows, cols, p))
    }
}

/// Number of unreduced row updates an f64 entry can absorb while staying
/// an exact integer: |v| ≤ (p-1) + k(p-1)² < 2^53.
fn lazy_budget(p: u64) -> u64 {
    let limit: u128 = 1 << 53;
    let q = (p - 1) as u128;
    if q * q + q >= limit {
        return 0;
    }
    ((limit - 1 - q) / (q * q).max(1)) as u64
}

fn rank_f64(a: Vec<f64>, rows: usize, cols: usize, p: u64) -> usize {
    eliminate_f64(a, rows, cols, p, false).0
}

type PivotRows = Vec<(usize, Vec<u64>)>;

/// Gaussian elimination modulo p < 2^26 on exact f64 integers, reducing
/// lazily. Returns the rank and, if `keep`, the normalized pivot rows.
fn eliminate_f64(mut a: Vec<f64>, rows: usize, cols: usize, p: u64, keep: bool) -> (usize, PivotRows) {
    let pf = p as f64;
    let pinv = 1.0 / pf;
    let red = move |v: f64| -> f64 {
        let r = v - (v * pinv).floor() * pf;
        if r < 0.0 {
            r + pf
        } else if r >= pf {
            r - pf
        } else {
            r
        }
    };
    let budget = lazy_budget(p);
    let mut pending = 0;
    let mut rank = 0;
    let mut kept = Vec::new();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let mut pivot = None;
        for r in rank..rows {
            let v = red(a[r * cols + col]);
            a[r * cols + col] = v;
            if v != 0.0 {
                pivot = Some(r);
                break;
            }
        }
        let Some(pr) = pivot else { continue };
        if pr != rank {
            let (lo, hi) = a.split_at_mut(pr * cols);
            lo[rank * cols..(rank + 1) * cols].swap_with_slice(&mut hi[..cols]);
        }
        let inv = inv_mod(a[rank * cols + col] as u64, p);
        for v in &mut a[rank * cols + col..(rank + 1) * cols] {
            *v = mul_mod(red(*v) as u64, inv, p) as f64;
        }
        if keep {
            let row = &a[rank * cols..(rank + 1) * cols];
            kept.push((col, row.iter().map(|&v| red(v) as u64).collect()));
        }
        let (top, bottom) = a.split_at_mut((rank + 1) * cols);
        let prow = &top[rank * cols + col..];
        bottom.par_chunks_mut(cols).for_each(|row| {
            let f = red(row[col]);
            if f != 0.0 {
                for (x, y) in row[col..].iter_mut().zip(prow) {
                    *x -= f * y;
                }
            }
        });
        rank += 1;
        pending += 1;
        if pending >= budget {
            a[rank * cols..]
                .par_chunks_mut(cols)
                .for_each(|row| row[col + 1..].iter_mut().for_each(|v| *v = red(*v)));
            pending = 0;
        }
    }
    (rank, kept)
}

fn eliminate_u64(mut a: Vec<u64>, rows: usize, cols: usize, p: u64) -> PivotRows {
    let mut kept = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if pr != rank {
            let (lo, hi) = a.split_at_mut(pr * cols);
            lo[rank * cols..(rank + 1) * cols].swap_with_slice(&mut hi[..cols]);
        }
        let inv = inv_mod(a[rank * cols + col], p);
        for v in &mut a[rank * cols + col..(rank + 1) * cols] {
            *v = mul_mod(*v, inv, p);
        }
        kept.push((col, a[rank * cols..(rank + 1) * cols].to_vec()));
        let (top, bottom) = a.split_at_mut((rank + 1) * cols);
        let prow = &top[rank * cols + col..];
        bottom.par_chunks_mut(cols).for_each(|row| {
            let f = row[col];
            if f != 0 {
                for (x, y) in row[col..].iter_mut().zip(prow) {
                    *x = (*x + p - mul_mod(f, *y, p)) % p;
                }
            }
        });
        rank += 1;
    }
    kept
}

fn rank_u64(mut a: Vec<u64>, rows: usize, cols: usize, p: u64) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if pr != rank {
            let (lo, hi) = a.split_at_mut(pr * cols);
            lo[rank * cols..(rank + 1) * cols].swap_with_slice(&mut hi[..cols]);
        }
        let inv = inv_mod(a[rank * cols + col], p);
        for v in &mut a[rank * cols + col..(rank + 1) * cols] {
            *v = mul_mod(*v, inv, p);
        }
        let (top, bottom) = a.split_at_mut((rank + 1) * cols);
        let prow = &top[rank * cols + col..];
        bottom.par_chunks_mut(cols).for_each(|row| {
            let f = row[col];
            if f != 0 {
                for (x, y) in row[col..].iter_mut().zip(prow) {
                    *x = (*x + p - mul_mod(f, *y, p)) % p;
                }
            }
        });
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankConsensus {
    /// (prime, rank) in the order the primes were given.
    pub per_prime: Vec<(u64, usize)>,
}

impl RankConsensus {
    /// The common rank, if every prime gave the same value.
    pub fn agreed(&self) -> Option<usize> {
        let first = self.per_prime.first()?.1;
        self.per_prime
            .iter()
            .all(|&(_, r)| r == first)
            .then_some(first)
    }
}

/// Rank modulo each prime, one prime per worker.
pub fn rank_consensus(
    m: &GramMatrix,
    x: Option<&ExactScalar>,
    primes: &[u64],
) -> Result<RankConsensus, GramError> {
    let per_prime = primes
        .par_iter()
        .map(|&p| rank_mod_p(m, x, p).map(|r| (p, r)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RankConsensus { per_prime })
}

fn to_gmp(v: &BigInt) -> Integer {
    Integer::from_str_radix(&v.to_str_radix(16), 16).expect("hex digits")
}

/// The matrix at `x` multiplied by its least common denominator.
fn integer_matrix(m: &GramMatrix, x: Option<&ExactScalar>) -> Result<Vec<Vec<Integer>>, GramError> {
    let den = ExactScalar::from_integer(m.common_denominator(x)?);
    let values: Vec<Integer> = m
        .evaluated_palette(x)?
        .iter()
        .map(|v| to_gmp(&(v * &den).to_integer()))
        .collect();
    let n = m.dim();
    Ok((0..n)
        .map(|i| m.row_codes(i).iter().map(|&c| values[c as usize].clone()).collect())
        .collect())
}

/// Rational rank by fraction-free elimination. Symmetric matrices go
/// through [`symmetric_exact`]; the rest through row-pivoting Bareiss.
pub fn rank_exact(m: &GramMatrix, x: Option<&ExactScalar>) -> Result<usize, GramError> {
    if m.is_symmetric() {
        return Ok(symmetric_exact(m, x)?.rank);
    }
    Ok(bareiss_rank_gmp(integer_matrix(m, x)?))
}

/// Fraction-free rank of an integer matrix.
pub fn bareiss_rank(a: &[Vec<BigInt>]) -> usize {
    bareiss_rank_gmp(a.iter().map(|r| r.iter().map(to_gmp).collect()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetricExact {
    pub dim: usize,
    pub rank: usize,
    /// Signs (-1, 0, 1) of the leading principal minors, present when every pivot was
    /// taken in natural order (always the case for a definite matrix).
    pub leading_minor_signs: Option<Vec<i8>>,
}

impl SymmetricExact {
    pub fn positive_definite(&self) -> bool {
        self.rank == self.dim
            && self
                .leading_minor_signs
                .as_ref()
                .is_some_and(|s| s.iter().all(|&o| o > 0))
    }
}

/// Symmetric fraction-free elimination with diagonal pivoting on the upper
/// triangle. The pivot is the first remaining index with a nonzero
/// diagonal; when pivots stay in natural order the k-th pivot is the k-th
/// leading principal minor (scaled by a positive constant). If every
/// remaining diagonal entry vanishes while some off-diagonal entry does
/// not, the matrix is indefinite and the rank comes from row-pivoting
/// Bareiss instead.
pub fn symmetric_exact(m: &GramMatrix, x: Option<&ExactScalar>) -> Result<SymmetricExact, GramError> {
    let n = m.dim();
    let mut a = integer_matrix(m, x)?;
    let at = |a: &Vec<Vec<Integer>>, i: usize, j: usize| -> Integer {
        a[i.min(j)][i.max(j)].clone()
    };
    let mut alive = vec![true; n];
    let mut prev = Integer::from(1);
    let mut signs = Vec::with_capacity(n);
    let mut natural = true;
    let mut rank = 0;
    while rank < n {
        let Some(p) = (0..n).find(|&i| alive[i] && a[i][i] != 0) else {
            let remaining: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
            let nonzero = remaining
                .iter()
                .any(|&i| remaining.iter().any(|&j| j > i && a[i][j] != 0));
            if nonzero {
                return Ok(SymmetricExact {
                    dim: n,
                    rank: bareiss_rank_gmp(integer_matrix(m, x)?),
                    leading_minor_signs: None,
                });
            }
            break;
        };
        if (0..p).any(|i| alive[i]) {
            natural = false;
        }
        alive[p] = false;
        let d = a[p][p].clone();
        signs.push(d.cmp0() as i8);
        let column: Vec<Integer> = (0..n)
            .map(|s| if alive[s] { at(&a, p, s) } else { Integer::new() })
            .collect();
        let prev_ref = &prev;
        a.par_iter_mut().enumerate().for_each(|(r, row)| {
            if !alive[r] {
                return;
            }
            let f = &column[r];
            let mut v = Integer::new();
            for s in r..n {
                if !alive[s] {
                    continue;
                }
                v.assign(&d * &row[s]);
                v -= f * &column[s];
                v.div_exact_mut(prev_ref);
                std::mem::swap(&mut row[s], &mut v);
            }
        });
        prev = d;
        rank += 1;
    }
    Ok(SymmetricExact {
        dim: n,
        rank,
        leading_minor_signs: natural.then_some(signs),
    })
}

fn bareiss_rank_gmp(mut a: Vec<Vec<Integer>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = Integer::from(1);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let (top, bottom) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        let pivot = &prow[col];
        bottom.par_iter_mut().for_each(|row| {
            let f = std::mem::take(&mut row[col]);
            let mut v = Integer::new();
            for j in col + 1..cols {
                v.assign(pivot * &row[j]);
                v -= &f * &prow[j];
                v.div_exact_mut(&prev);
                std::mem::swap(&mut row[j], &mut v);
            }
        });
        prev = top[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Row echelon basis of a row space modulo a prime, for membership tests.
pub struct ModpEchelon {
    p: u64,
    cols: usize,
    /// (pivot column, row normalized to 1 at the pivot), by pivot column.
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModpEchelon {
    /// Row space of the matrix at `x`, scaled by [`SCALE`].
    pub fn of_matrix(m: &GramMatrix, x: Option<&ExactScalar>, p: u64) -> Result<Self, GramError> {
        let res = palette_residues(m, x, p)?;
        let n = m.dim();
        let a: Vec<u64> = (0..n * n).map(|k| res[m.codes[k] as usize]).collect();
        Ok(Self::of_dense(a, n, n, p))
    }

    /// Row space of a dense row-major matrix of residues below `p`.
    pub fn of_dense(a: Vec<u64>, rows: usize, cols: usize, p: u64) -> Self {
        let kept = if lazy_budget(p) > 0 {
            eliminate_f64(a.into_iter().map(|v| v as f64).collect(), rows, cols, p, true).1
        } else {
            eliminate_u64(a, rows, cols, p)
        };
        Self { p, cols, rows: kept }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(c, _)| *c)
    }

    pub fn basis(&self) -> &[(usize, Vec<u64>)] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Whether the integer vector `v` reduces to zero modulo the basis.
    pub fn contains(&self, v: &[i128]) -> bool {
        assert_eq!(v.len(), self.cols, "vector length");
        let p = self.p as i128;
        let mut w: Vec<u64> = v.iter().map(|x| x.rem_euclid(p) as u64).collect();
        for (c, row) in &self.rows {
            let f = w[*c];
            if f != 0 {
                for (x, y) in w.iter_mut().zip(row) {
                    *x = (*x + self.p - mul_mod(f, *y, self.p)) % self.p;
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }
}
