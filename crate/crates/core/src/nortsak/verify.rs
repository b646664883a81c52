use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{AlgebraSpec, AlgebraType, Coords, Eigenvalue, FusionTable, NortsakError};
use crate::exact::{
    int, leading_principal_minors, rat, rational_inverse, rational_kernel, rational_rank,
    ExactScalar, FormalVector, RationalMatrix,
};

/// Matrix of ad(axis): column j holds the coordinates of axis * b_j.
pub fn ad_matrix(alg: &AlgebraSpec, axis: &str) -> Result<RationalMatrix, NortsakError> {
    let a = alg.unit(axis)?;
    let n = alg.dim();
    let mut m = vec![vec![ExactScalar::zero(); n]; n];
    for (j, b) in alg.basis().iter().enumerate() {
        let col = alg.multiply(&a, &alg.unit(b)?);
        for (i, c) in col.into_iter().enumerate() {
            m[i][j] = c;
        }
    }
    Ok(m)
}

fn eigenspace_coords(
    alg: &AlgebraSpec,
    axis: &str,
) -> Result<BTreeMap<Eigenvalue, Vec<Coords>>, NortsakError> {
    if !alg.is_majorana(axis) {
        return Err(NortsakError::NotMajorana {
            tag: alg.tag(),
            axis: axis.to_string(),
        });
    }
    let ad = ad_matrix(alg, axis)?;
    let n = alg.dim();
    let mut spaces = BTreeMap::new();
    for ev in Eigenvalue::ALL {
        let lambda = ev.value();
        let mut shifted = ad.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] -= &lambda;
        }
        spaces.insert(ev, rational_kernel(&shifted, n));
    }
    let found: usize = spaces.values().map(Vec::len).sum();
    if found != n {
        return Err(NortsakError::SpectrumViolation {
            tag: alg.tag(),
            axis: axis.to_string(),
            found,
            dim: n,
        });
    }
    Ok(spaces)
}

/// Exact eigenspaces of ad(axis) for the four admissible eigenvalues.
pub fn ad_eigenspaces(
    alg: &AlgebraSpec,
    axis: &str,
) -> Result<BTreeMap<Eigenvalue, Vec<FormalVector<String>>>, NortsakError> {
    Ok(eigenspace_coords(alg, axis)?
        .into_iter()
        .map(|(ev, vs)| (ev, vs.iter().map(|v| alg.formal(v)).collect()))
        .collect())
}

/// Eigenbasis as columns, the eigenvalue of each column, and the inverse
/// change of basis.
struct Eigenbasis {
    vectors: Vec<Coords>,
    values: Vec<Eigenvalue>,
    inverse: RationalMatrix,
}

impl Eigenbasis {
    fn new(spaces: &BTreeMap<Eigenvalue, Vec<Coords>>) -> Self {
        let mut vectors = Vec::new();
        let mut values = Vec::new();
        for (&ev, vs) in spaces {
            for v in vs {
                vectors.push(v.clone());
                values.push(ev);
            }
        }
        let n = vectors.len();
        let columns: RationalMatrix = (0..n)
            .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
            .collect();
        let inverse = rational_inverse(&columns).expect("eigenvectors for distinct eigenvalues");
        Eigenbasis {
            vectors,
            values,
            inverse,
        }
    }

    fn decompose(&self, v: &[ExactScalar]) -> Coords {
        self.inverse
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn support(&self, v: &[ExactScalar]) -> Vec<Eigenvalue> {
        let mut s: Vec<Eigenvalue> = self
            .decompose(v)
            .iter()
            .zip(&self.values)
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, &ev)| ev)
            .collect();
        s.sort();
        s.dedup();
        s
    }

    /// Applies the linear map that multiplies each eigencomponent by `sign(ev)`.
    fn apply_signs(&self, v: &[ExactScalar], sign: impl Fn(Eigenvalue) -> bool) -> Coords {
        let coeffs = self.decompose(v);
        let n = v.len();
        let mut out = vec![ExactScalar::zero(); n];
        for ((c, vec), &ev) in coeffs.iter().zip(&self.vectors).zip(&self.values) {
            if c.is_zero() {
                continue;
            }
            let c = if sign(ev) { c.clone() } else { -c.clone() };
            for (o, x) in out.iter_mut().zip(vec) {
                *o += &c * x;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionViolation {
    pub left: String,
    pub right: String,
    pub left_eigenvalue: Eigenvalue,
    pub right_eigenvalue: Eigenvalue,
    pub found: Vec<Eigenvalue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionReport {
    pub pairs_checked: usize,
    pub violations: Vec<FusionViolation>,
}

impl FusionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_fusion(
    alg: &AlgebraSpec,
    axis: &str,
    table: &FusionTable,
) -> Result<FusionReport, NortsakError> {
    let spaces = eigenspace_coords(alg, axis)?;
    let basis = Eigenbasis::new(&spaces);
    let mut report = FusionReport {
        pairs_checked: 0,
        violations: Vec::new(),
    };
    let n = basis.vectors.len();
    for i in 0..n {
        for j in i..n {
            let (x, y) = (&basis.vectors[i], &basis.vectors[j]);
            let (lx, ly) = (basis.values[i], basis.values[j]);
            let found = basis.support(&alg.multiply(x, y));
            report.pairs_checked += 1;
            let allowed = table.allowed(lx, ly);
            if found.iter().any(|ev| !allowed.contains(ev)) {
                report.violations.push(FusionViolation {
                    left: format!("{:?}", alg.formal(x)),
                    right: format!("{:?}", alg.formal(y)),
                    left_eigenvalue: lx,
                    right_eigenvalue: ly,
                    found,
                });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauSigmaReport {
    pub tau_preserves_product: bool,
    pub tau_preserves_form: bool,
    pub tau_is_involution: bool,
    pub sigma_preserves_product: bool,
    /// Image of each basis vector under τ, as `label -> vector`.
    pub tau_images: Vec<(String, String)>,
    /// Basis vectors fixed by τ.
    pub tau_fixed: Vec<String>,
}

impl TauSigmaReport {
    pub fn passed(&self) -> bool {
        self.tau_preserves_product
            && self.tau_preserves_form
            && self.tau_is_involution
            && self.sigma_preserves_product
    }
}

pub fn verify_tau_sigma(alg: &AlgebraSpec, axis: &str) -> Result<TauSigmaReport, NortsakError> {
    let spaces = eigenspace_coords(alg, axis)?;
    let basis = Eigenbasis::new(&spaces);
    let tau = |v: &[ExactScalar]| basis.apply_signs(v, |ev| ev != Eigenvalue::ThirtySecond);
    let units: Vec<Coords> = alg
        .basis()
        .iter()
        .map(|b| alg.unit(b))
        .collect::<Result<_, _>>()?;
    let images: Vec<Coords> = units.iter().map(|u| tau(u)).collect();

    let mut preserves_product = true;
    let mut preserves_form = true;
    for i in 0..units.len() {
        for j in i..units.len() {
            let lhs = tau(&alg.multiply(&units[i], &units[j]));
            let rhs = alg.multiply(&images[i], &images[j]);
            preserves_product &= lhs == rhs;
            preserves_form &= alg.inner(&images[i], &images[j]) == *alg.basis_inner(i, j);
        }
    }
    let is_involution = units.iter().zip(&images).all(|(u, t)| &tau(t) == u);

    // σ acts on the τ-fixed part, which is spanned by the 1, 0 and 1/4
    // eigenvectors.
    let sigma = |v: &[ExactScalar]| basis.apply_signs(v, |ev| ev != Eigenvalue::Quarter);
    let fixed: Vec<&Coords> = basis
        .vectors
        .iter()
        .zip(&basis.values)
        .filter(|(_, &ev)| ev != Eigenvalue::ThirtySecond)
        .map(|(v, _)| v)
        .collect();
    let mut sigma_ok = true;
    for i in 0..fixed.len() {
        for j in i..fixed.len() {
            let prod = alg.multiply(fixed[i], fixed[j]);
            if basis.support(&prod).contains(&Eigenvalue::ThirtySecond) {
                sigma_ok = false;
                continue;
            }
            sigma_ok &= sigma(&prod) == alg.multiply(&sigma(fixed[i]), &sigma(fixed[j]));
        }
    }

    Ok(TauSigmaReport {
        tau_preserves_product: preserves_product,
        tau_preserves_form: preserves_form,
        tau_is_involution: is_involution,
        sigma_preserves_product: sigma_ok,
        tau_images: alg
            .basis()
            .iter()
            .zip(&images)
            .map(|(b, img)| (b.clone(), format!("{:?}", alg.formal(img))))
            .collect(),
        tau_fixed: alg
            .basis()
            .iter()
            .zip(units.iter().zip(&images))
            .filter(|(_, (u, t))| u == t)
            .map(|(b, _)| b.clone())
            .collect(),
    })
}

/// (u·u, v·v) ≥ (u·v, u·v), exactly.
pub fn norton_inequality_check(alg: &AlgebraSpec, u: &[ExactScalar], v: &[ExactScalar]) -> bool {
    let uu = alg.multiply(u, u);
    let vv = alg.multiply(v, v);
    let uv = alg.multiply(u, v);
    alg.inner(&uu, &vv) >= alg.inner(&uv, &uv)
}

/// Norton inequality on `pairs` seeded pseudorandom vectors with entries
/// in -3..=3. Returns the number of passing pairs.
pub fn sampled_norton_check(alg: &AlgebraSpec, pairs: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| -> Coords {
        (0..alg.dim()).map(|_| int(rng.gen_range(-3..=3))).collect()
    };
    (0..pairs)
        .filter(|_| {
            let u = sample(&mut rng);
            let v = sample(&mut rng);
            norton_inequality_check(alg, &u, &v)
        })
        .count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxisReport {
    pub axis: String,
    pub idempotent: bool,
    pub norm_one: bool,
    pub eigenspace_dimensions: BTreeMap<String, usize>,
    pub semisimple: bool,
    pub one_eigenspace_is_axis: bool,
    pub fusion: Option<FusionReport>,
    pub tau_sigma: Option<TauSigmaReport>,
    pub error: Option<String>,
}

impl AxisReport {
    pub fn passed(&self) -> bool {
        self.idempotent
            && self.norm_one
            && self.semisimple
            && self.one_eigenspace_is_axis
            && self.fusion.as_ref().is_some_and(FusionReport::passed)
            && self.tau_sigma.as_ref().is_some_and(TauSigmaReport::passed)
            && self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub algebra: AlgebraType,
    pub dimension: usize,
    pub product_commutative: bool,
    pub form_symmetric: bool,
    pub form_associative: bool,
    pub gram_positive_definite: bool,
    pub auxiliary_identities: bool,
    pub listed_eigenvectors_valid: bool,
    pub listed_eigenvectors_span: bool,
    pub norton_pairs: usize,
    pub norton_passed: usize,
    pub axes: Vec<AxisReport>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.product_commutative
            && self.form_symmetric
            && self.form_associative
            && self.gram_positive_definite
            && self.auxiliary_identities
            && self.listed_eigenvectors_valid
            && self.listed_eigenvectors_span
            && self.norton_passed == self.norton_pairs
            && self.axes.iter().all(AxisReport::passed)
    }
}

fn check_axis(alg: &AlgebraSpec, axis: &str, table: &FusionTable) -> AxisReport {
    let unit = alg.unit(axis).expect("axis from basis");
    let mut report = AxisReport {
        axis: axis.to_string(),
        idempotent: alg.multiply(&unit, &unit) == unit,
        norm_one: alg.inner(&unit, &unit).is_one(),
        eigenspace_dimensions: BTreeMap::new(),
        semisimple: false,
        one_eigenspace_is_axis: false,
        fusion: None,
        tau_sigma: None,
        error: None,
    };
    match eigenspace_coords(alg, axis) {
        Ok(spaces) => {
            report.semisimple = true;
            report.eigenspace_dimensions =
                spaces.iter().map(|(ev, v)| (ev.to_string(), v.len())).collect();
            let one = &spaces[&Eigenvalue::One];
            report.one_eigenspace_is_axis =
                one.len() == 1 && rational_rank(&vec![one[0].clone(), unit.clone()]) == 1;
        }
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    }
    match verify_fusion(alg, axis, table) {
        Ok(f) => report.fusion = Some(f),
        Err(e) => report.error = Some(e.to_string()),
    }
    match verify_tau_sigma(alg, axis) {
        Ok(t) => report.tau_sigma = Some(t),
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

fn auxiliary_identities(alg: &AlgebraSpec) -> bool {
    let check = |label: &str| -> bool {
        let u = alg.unit(label).expect("label in basis");
        alg.multiply(&u, &u) == u
    };
    match alg.tag() {
        AlgebraType::A3 => check("u_r"),
        AlgebraType::A4 => check("v_r"),
        AlgebraType::A6 => check("u_r2"),
        AlgebraType::A5 => {
            let w = alg.unit("w_r").expect("w in 5A");
            let c = rat(175, 524288);
            let expected: Coords = alg
                .basis()
                .iter()
                .map(|b| if b == "w_r" { ExactScalar::zero() } else { c.clone() })
                .collect();
            alg.multiply(&w, &w) == expected
        }
        _ => true,
    }
}

fn listed_eigenvectors(alg: &AlgebraSpec) -> (bool, bool) {
    let Ok(ad) = ad_matrix(alg, "a0") else {
        return (false, false);
    };
    let Ok(spaces) = eigenspace_coords(alg, "a0") else {
        return (false, false);
    };
    let mut valid = true;
    let mut by_value: BTreeMap<Eigenvalue, Vec<Coords>> = BTreeMap::new();
    for (ev, v) in alg.listed_eigenvectors() {
        let Ok(c) = alg.coords(v) else {
            valid = false;
            continue;
        };
        let image: Coords = ad
            .iter()
            .map(|row| row.iter().zip(&c).map(|(a, b)| a * b).sum())
            .collect();
        let expected: Coords = c.iter().map(|x| x * ev.value()).collect();
        valid &= image == expected;
        by_value.entry(*ev).or_default().push(c);
    }
    let span = spaces.iter().all(|(ev, computed)| {
        if *ev == Eigenvalue::One {
            return true;
        }
        let listed = by_value.get(ev).cloned().unwrap_or_default();
        listed.len() == computed.len() && (listed.is_empty() || rational_rank(&listed) == listed.len())
    });
    (valid, span)
}

/// Runs every check on one algebra, for each of its Majorana basis axes.
pub fn verify_algebra(alg: &AlgebraSpec, norton_pairs: usize, seed: u64) -> AlgebraReport {
    let n = alg.dim();
    let units: Vec<Coords> = alg
        .basis()
        .iter()
        .map(|b| alg.unit(b).expect("basis label"))
        .collect();
    let mut commutative = true;
    let mut symmetric = true;
    for i in 0..n {
        for j in 0..n {
            commutative &= alg.basis_product(i, j) == alg.basis_product(j, i);
            symmetric &= alg.basis_inner(i, j) == alg.basis_inner(j, i);
        }
    }
    let mut associative = true;
    for x in &units {
        for y in &units {
            let xy = alg.multiply(x, y);
            for z in &units {
                associative &= alg.inner(x, &alg.multiply(y, z)) == alg.inner(&xy, z);
            }
        }
    }
    let minors = leading_principal_minors(&alg.gram().to_vec());
    let table = FusionTable::majorana();
    let axes: Vec<String> = alg.majorana_axes().map(str::to_string).collect();
    let (listed_valid, listed_span) = listed_eigenvectors(alg);
    AlgebraReport {
        algebra: alg.tag(),
        dimension: n,
        product_commutative: commutative,
        form_symmetric: symmetric,
        form_associative: associative,
        gram_positive_definite: minors.iter().all(Signed::is_positive),
        auxiliary_identities: auxiliary_identities(alg),
        listed_eigenvectors_valid: listed_valid,
        listed_eigenvectors_span: listed_span,
        norton_pairs,
        norton_passed: sampled_norton_check(alg, norton_pairs, seed),
        axes: axes.iter().map(|a| check_axis(alg, a, &table)).collect(),
    }
}
