use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use num_traits::Zero;
use serde::Serialize;

use super::rank::{palette_residues, rank_mod_p_dense, ModpEchelon, RankConsensus};
use super::relations::integer_row_rank;
use super::{AxisId, GramError, GramMatrix, PairClassification, RelationVector, SCALE};
use crate::context::U35Context;
use crate::exact::{format_rational, int, rat, ExactScalar};
use crate::permcore::Permutation;
use crate::shapes::{SubgroupPairClass, CLOSURE_CAP};

/// The subgroups generating the whole group together with ρ, split into
/// orbits of the normalizer of ⟨ρ⟩.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitDecomposition {
    pub base: usize,
    pub normalizer_order: u64,
    /// Sorted subgroup indices.
    pub gamma_minus: Vec<usize>,
    /// Each orbit sorted; orbits ordered by least member.
    pub orbits: Vec<Vec<usize>>,
    /// Involutions of the normalizer that also normalize some member.
    pub common_normalizing_pairs: usize,
}

impl OrbitDecomposition {
    /// F_i: the indicator of the i-th orbit on the 3A-axes.
    pub fn indicator(&self, i: usize) -> RelationVector {
        RelationVector::from_terms(self.orbits[i].iter().map(|&s| (AxisId::ThreeA(s), int(1))))
    }

    /// The first member of each orbit.
    pub fn representatives(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o[0]).collect()
    }
}

pub fn gamma_minus_orbits(
    ctx: &U35Context,
    pairs: &PairClassification,
    rho: usize,
) -> Result<OrbitDecomposition, GramError> {
    let gamma_minus: Vec<usize> = (0..ctx.subgroup_count())
        .filter(|&s| pairs.subgroup_class(ctx, rho, s) == SubgroupPairClass::Whole)
        .collect();
    let n = ctx.group().normalizer(&ctx.subgroup_handle(rho))?;
    let n_elements = n.elements().expect("normalizer is enumerated").to_vec();
    let mut seen = vec![false; ctx.subgroup_count()];
    let mut orbits = Vec::new();
    for &start in &gamma_minus {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for g in n.generators() {
                let t = ctx.conjugate_subgroup(s, g);
                if !seen[t] {
                    seen[t] = true;
                    orbit.push(t);
                    queue.push_back(t);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    if orbits.iter().flatten().count() != gamma_minus.len() {
        return Err(GramError::OrbitStructure(
            "normalizer moves a member out of the set".into(),
        ));
    }
    orbits.sort();

    let stabilized = gamma_minus
        .iter()
        .filter(|&&s| n_elements.iter().filter(|g| ctx.normalizes(g, s)).count() != 1)
        .count();
    let n_involutions: Vec<&Permutation> = n_elements.iter().filter(|g| g.order() == 2).collect();
    let common_normalizing_pairs = gamma_minus
        .iter()
        .filter(|&&s| n_involutions.iter().any(|t| ctx.normalizes(t, s)))
        .count();

    let dec = OrbitDecomposition {
        base: rho,
        normalizer_order: n.order(),
        gamma_minus,
        orbits,
        common_normalizing_pairs,
    };
    let sizes: Vec<usize> = dec.orbits.iter().map(Vec::len).collect();
    if dec.normalizer_order != 72 || sizes != vec![72; 6] || stabilized != 0 {
        return Err(GramError::OrbitStructure(format!(
            "normalizer order {}, orbit sizes {sizes:?}, {stabilized} members with nontrivial stabilizer",
            dec.normalizer_order
        )));
    }
    if dec.common_normalizing_pairs != 0 {
        return Err(GramError::OrbitStructure(format!(
            "{} members share a normalizing involution with the base",
            dec.common_normalizing_pairs
        )));
    }
    Ok(dec)
}

#[derive(Debug, Clone, Serialize)]
pub struct VDecomposition {
    pub base: usize,
    pub v_plus_size: usize,
    pub v_plus_rank: RankConsensus,
    pub full_rank: RankConsensus,
    /// First pairing in `valid_pairings`, as orbit pairs (a,b), (c,d), (e,f).
    pub pairing: Option<[(usize, usize); 3]>,
    /// Pairings whose formal F-combinations are orthogonal to every axis
    /// outside Γ−.
    pub valid_pairings: Vec<[(usize, usize); 3]>,
    /// Pairings whose F-combinations, read as functions σ ↦ (w, u_σ) on Γ−,
    /// are realized by some w in the span that is orthogonal to V+, for
    /// every prime.
    pub realized_pairings: Vec<[(usize, usize); 3]>,
    /// Rank of the three rows F·Gram over all axes, for `pairing`.
    pub product_rank: Option<usize>,
    /// Rank of the 3×3 Gram matrix of the three vectors, for `pairing`.
    pub vector_gram_rank: Option<usize>,
    pub sums_to_zero: Option<bool>,
    pub complement: ComplementClasses,
}

impl VDecomposition {
    pub fn require_pairing(&self) -> Result<[(usize, usize); 3], GramError> {
        self.pairing.ok_or(GramError::NoValidPairing)
    }
}

/// Structure of the functions σ ↦ (w, u_σ) on Γ− for w ranging over the
/// span orthogonal to V+.
#[derive(Debug, Clone, Serialize)]
pub struct ComplementClasses {
    /// Dimension of that function space, per prime.
    pub dimension: Vec<(u64, usize)>,
    /// Level sets of the function space on Γ−, as sorted subgroup indices,
    /// ordered by least member.
    pub classes: Vec<Vec<usize>>,
    /// The level sets agree for every prime.
    pub classes_agree: bool,
    /// `orbit_class_intersections[i][c]` = |O_i ∩ X_c|.
    pub orbit_class_intersections: Vec<Vec<usize>>,
    /// Dimension of the intersection of the function space with the span
    /// of the six orbit indicators, per prime.
    pub orbit_span_intersection: Vec<(u64, usize)>,
    /// Every function of the space sums to zero over every orbit, for
    /// every prime; equivalently each orbit sum Σ_{σ∈O_i} u_σ lies in V+.
    pub orbit_sums_vanish: bool,
}

/// The 15 ways of splitting six orbits into three unordered pairs.
fn pairings() -> Vec<[(usize, usize); 3]> {
    let mut out = Vec::new();
    for b in 1..6 {
        let rest: Vec<usize> = (1..6).filter(|&i| i != b).collect();
        for k in 1..4 {
            let (c, d) = (rest[0], rest[k]);
            let ef: Vec<usize> = rest[1..].iter().copied().filter(|&i| i != d).collect();
            out.push([(0, b), (c, d), (ef[0], ef[1])]);
        }
    }
    out
}

/// The three combinations F_a+F_b−F_c−F_d, −F_a−F_b+F_e+F_f, F_c+F_d−F_e−F_f.
pub fn f_combinations(pairing: [(usize, usize); 3]) -> [[i64; 6]; 3] {
    let [(a, b), (c, d), (e, f)] = pairing;
    let mut v = [[0i64; 6]; 3];
    for (row, plus, minus) in [(0, (a, b), (c, d)), (1, (e, f), (a, b)), (2, (c, d), (e, f))] {
        v[row][plus.0] += 1;
        v[row][plus.1] += 1;
        v[row][minus.0] -= 1;
        v[row][minus.1] -= 1;
    }
    v
}

/// Ranks of the span V+ of the Majorana axes and the 3A-axes outside Γ−(ρ)
/// and of the full span, the search for an orbit pairing whose
/// F-combinations lie in the complement, and the level-set structure of
/// that complement.
pub fn v_decomposition(
    m: &GramMatrix,
    x: &ExactScalar,
    dec: &OrbitDecomposition,
    primes: &[u64],
) -> Result<VDecomposition, GramError> {
    let n = m.dim();
    let mut in_gamma = vec![false; n];
    let mut gamma = Vec::with_capacity(dec.gamma_minus.len());
    for &s in &dec.gamma_minus {
        let i = m
            .index_of(AxisId::ThreeA(s))
            .ok_or(GramError::MissingAxis(AxisId::ThreeA(s)))?;
        in_gamma[i] = true;
        gamma.push(i);
    }
    let plus: Vec<usize> = (0..n).filter(|&i| !in_gamma[i]).collect();
    // Column order: V+ first, then Γ− in the order of `dec.gamma_minus`.
    let order: Vec<usize> = plus.iter().chain(&gamma).copied().collect();
    let echelons = primes
        .par_iter()
        .map(|&p| {
            let res = palette_residues(m, Some(x), p)?;
            let mut a = Vec::with_capacity(n * n);
            for r in 0..n {
                let row = m.row_codes(r);
                a.extend(order.iter().map(|&c| res[row[c] as usize]));
            }
            Ok(ModpEchelon::of_dense(a, n, n, p))
        })
        .collect::<Result<Vec<_>, GramError>>()?;
    let np = plus.len();
    let v_plus_rank = RankConsensus {
        per_prime: echelons
            .iter()
            .map(|e| (e.prime(), e.pivots().filter(|&c| c < np).count()))
            .collect(),
    };
    let full_rank = RankConsensus {
        per_prime: echelons.iter().map(|e| (e.prime(), e.rank())).collect(),
    };
    let realized = |e: &ModpEchelon, f: &dyn Fn(usize) -> i128| -> bool {
        let mut v = vec![0i128; n];
        for (k, &s) in dec.gamma_minus.iter().enumerate() {
            v[np + k] = f(s);
        }
        e.contains(&v)
    };
    let orbit_of: FxHashMap<usize, usize> = dec
        .orbits
        .iter()
        .enumerate()
        .flat_map(|(i, o)| o.iter().map(move |&s| (s, i)))
        .collect();
    let realized_pairings: Vec<[(usize, usize); 3]> = pairings()
        .into_iter()
        .filter(|&pairing| {
            f_combinations(pairing).iter().all(|w| {
                echelons
                    .iter()
                    .all(|e| realized(e, &|s| w[orbit_of[&s]] as i128))
            })
        })
        .collect();

    let level_sets = |e: &ModpEchelon| -> Vec<Vec<usize>> {
        let funcs: Vec<&[u64]> = e
            .basis()
            .iter()
            .filter(|(c, _)| *c >= np)
            .map(|(_, row)| &row[np..])
            .collect();
        let mut by_value: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
        for (k, &s) in dec.gamma_minus.iter().enumerate() {
            let key = funcs.iter().map(|f| f[k]).collect();
            by_value.entry(key).or_default().push(s);
        }
        let mut sets: Vec<Vec<usize>> = by_value.into_values().collect();
        sets.sort();
        sets
    };
    let classes = echelons.first().map(level_sets).unwrap_or_default();
    let classes_agree = echelons.iter().all(|e| level_sets(e) == classes);
    let orbit_class_intersections = dec
        .orbits
        .iter()
        .map(|o| {
            classes
                .iter()
                .map(|c| o.iter().filter(|s| c.binary_search(s).is_ok()).count())
                .collect()
        })
        .collect();
    let ng = dec.gamma_minus.len();
    let orbit_span_intersection = echelons
        .iter()
        .map(|e| {
            let p = e.prime();
            let funcs: Vec<&[u64]> = e
                .basis()
                .iter()
                .filter(|(c, _)| *c >= np)
                .map(|(_, row)| &row[np..])
                .collect();
            let mut a: Vec<u64> = funcs.iter().flat_map(|f| f.iter().copied()).collect();
            for i in 0..dec.orbits.len() {
                a.extend(dec.gamma_minus.iter().map(|s| u64::from(orbit_of[s] == i)));
            }
            let rows = funcs.len() + dec.orbits.len();
            let r = rank_mod_p_dense(&a, rows, ng, p)?;
            Ok((p, rows - r))
        })
        .collect::<Result<Vec<_>, GramError>>()?;
    let orbit_sums_vanish = echelons.iter().all(|e| {
        let p = e.prime();
        e.basis().iter().filter(|(c, _)| *c >= np).all(|(_, row)| {
            dec.orbits.iter().enumerate().all(|(i, _)| {
                dec.gamma_minus
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| orbit_of[s] == i)
                    .fold(0u64, |acc, (k, _)| (acc + row[np + k]) % p)
                    == 0
            })
        })
    });
    let complement = ComplementClasses {
        dimension: echelons
            .iter()
            .map(|e| (e.prime(), e.pivots().filter(|&c| c >= np).count()))
            .collect(),
        classes,
        classes_agree,
        orbit_class_intersections,
        orbit_span_intersection,
        orbit_sums_vanish,
    };

    let pal = m.scaled_palette(Some(x), SCALE)?;
    // sums[i][c] = SCALE · (F_i, axis c)
    let mut sums = vec![vec![0i128; n]; dec.orbits.len()];
    for (orbit, row_sum) in dec.orbits.iter().zip(sums.iter_mut()) {
        for &s in orbit {
            let i = m.index_of(AxisId::ThreeA(s)).expect("checked above");
            for (slot, &code) in row_sum.iter_mut().zip(m.row_codes(i)) {
                *slot += pal[code as usize] as i128;
            }
        }
    }
    let product = |coeffs: &[i64; 6]| -> Vec<i128> {
        (0..n)
            .map(|c| coeffs.iter().zip(&sums).map(|(&k, s)| k as i128 * s[c]).sum())
            .collect()
    };
    let valid_pairings: Vec<[(usize, usize); 3]> = pairings()
        .into_iter()
        .filter(|&p| {
            f_combinations(p).iter().all(|v| {
                let row = product(v);
                plus.iter().all(|&c| row[c] == 0)
            })
        })
        .collect();
    let pairing = valid_pairings.first().copied();
    let (mut product_rank, mut vector_gram_rank, mut sums_to_zero) = (None, None, None);
    if let Some(pairing) = pairing {
        let combos = f_combinations(pairing);
        let rows: Vec<Vec<i128>> = combos.iter().map(product).collect();
        product_rank = Some(integer_row_rank(&rows));
        // (v_k, v_l) = Σ_i v_l[i] · (v_k, F_i), and (v_k, F_i) = Σ_{σ∈O_i} rows[k][σ].
        let orbit_sum = |row: &[i128], i: usize| -> i128 {
            dec.orbits[i]
                .iter()
                .map(|&s| row[m.index_of(AxisId::ThreeA(s)).expect("checked above")])
                .sum()
        };
        let small: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| {
                combos
                    .iter()
                    .map(|w| (0..6).map(|i| w[i] as i128 * orbit_sum(r, i)).sum())
                    .collect()
            })
            .collect();
        vector_gram_rank = Some(integer_row_rank(&small));
        sums_to_zero = Some((0..6).all(|i| combos.iter().map(|v| v[i]).sum::<i64>() == 0));
    }
    Ok(VDecomposition {
        base: dec.base,
        v_plus_size: np,
        v_plus_rank,
        full_rank,
        pairing,
        valid_pairings,
        realized_pairings,
        product_rank,
        vector_gram_rank,
        sums_to_zero,
        complement,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LinkingInvolution {
    pub rho: usize,
    pub sigma: usize,
    /// Involution index of the first valid t.
    pub t: usize,
    /// Number of valid t.
    pub count: usize,
}

fn inverts(t: &Permutation, g: &Permutation) -> bool {
    g.conjugate_by(t) == g.inverse()
}

/// The first involution t inverting ρ with |⟨σ, t⟩| = 24.
pub fn find_s3_s4_involution(
    ctx: &U35Context,
    rho: usize,
    sigma: usize,
) -> Result<LinkingInvolution, GramError> {
    let r = ctx.subgroup_generator(rho);
    let s = ctx.subgroup_generator(sigma);
    let mut valid = Vec::new();
    for (i, t) in ctx.involutions().iter().enumerate() {
        if !inverts(t, r) {
            continue;
        }
        if ctx.group().subgroup_closure(&[*s, *t], CLOSURE_CAP)?.order() == 24 {
            valid.push(i);
        }
    }
    let t = *valid.first().ok_or(GramError::LinkingInvolutionNotFound)?;
    Ok(LinkingInvolution {
        rho,
        sigma,
        t,
        count: valid.len(),
    })
}

/// Labels of the axes of ⟨σ, t⟩ ≅ S4 by the points 1..4, where the point of
/// a Sylow 3-subgroup is the point it fixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct S4Labelling {
    pub u_i: usize,
    pub u_j: usize,
    pub u_k: usize,
    pub u_l: usize,
    pub a_ij: usize,
    pub a_ik: usize,
    pub a_il: usize,
    pub a_jk: usize,
    pub a_jl: usize,
    pub a_kl: usize,
    pub a_ij_kl: usize,
}

fn label_s4(ctx: &U35Context, sigma: usize, t_index: usize) -> Result<S4Labelling, GramError> {
    let bad = |m: &str| GramError::S4Labelling(m.to_string());
    let t = ctx.involution(t_index);
    let h = ctx
        .group()
        .subgroup_closure(&[*ctx.subgroup_generator(sigma), *t], CLOSURE_CAP)?;
    let elements = h.elements().ok_or_else(|| bad("closure overflow"))?;
    if elements.len() != 24 {
        return Err(bad("<sigma,t> does not have order 24"));
    }
    let mut sylows: Vec<usize> = elements
        .iter()
        .filter(|g| g.order() == 3)
        .map(|g| ctx.subgroup_of(g).expect("order 3"))
        .collect();
    sylows.sort_unstable();
    sylows.dedup();
    if sylows.len() != 4 {
        return Err(bad("expected four Sylow 3-subgroups"));
    }
    let u_i = sigma;
    let u_j = ctx.conjugate_subgroup(sigma, t);
    if u_j == u_i {
        return Err(bad("t normalizes sigma"));
    }
    let rest: Vec<usize> = sylows.iter().copied().filter(|&s| s != u_i && s != u_j).collect();
    let [u_k, u_l] = rest[..] else {
        return Err(bad("sigma^t is not a Sylow 3-subgroup of H"));
    };
    if !ctx.normalizes(t, u_k) || !ctx.normalizes(t, u_l) {
        return Err(bad("t does not normalize u_k and u_l"));
    }
    let points = [u_i, u_j, u_k, u_l];

    // Action of each involution on the four points, and its centralizer in H.
    let mut transpositions = [[None; 4]; 4];
    let mut doubles: Vec<(usize, [usize; 4])> = Vec::new();
    for g in elements.iter().filter(|g| g.order() == 2) {
        let image: Vec<usize> = points
            .iter()
            .map(|&p| {
                let q = ctx.conjugate_subgroup(p, g);
                points.iter().position(|&x| x == q).expect("Sylows are permuted")
            })
            .collect();
        let moved: Vec<usize> = (0..4).filter(|&a| image[a] != a).collect();
        let centralizer = elements.iter().filter(|e| e.commutes_with(g)).count();
        let idx = ctx.involution_index(g).expect("involution");
        match (moved.len(), centralizer) {
            (2, 4) => {
                let (a, b) = (moved[0], moved[1]);
                if transpositions[a][b].is_some() {
                    return Err(bad("two transpositions with the same action"));
                }
                transpositions[a][b] = Some(idx);
                transpositions[b][a] = Some(idx);
            }
            (4, 8) => doubles.push((idx, [image[0], image[1], image[2], image[3]])),
            _ => return Err(bad("involution with unexpected action or centralizer")),
        }
    }
    let tr = |a: usize, b: usize| transpositions[a][b].ok_or_else(|| bad("missing transposition"));
    let (i, j, k, l) = (0, 1, 2, 3);
    let a_ij = tr(i, j)?;
    if a_ij != t_index {
        return Err(bad("t is not the transposition (ij)"));
    }
    let a_kl = tr(k, l)?;
    let a_ij_kl = doubles
        .iter()
        .find(|(_, img)| img[i] == j && img[k] == l)
        .map(|d| d.0)
        .ok_or_else(|| bad("missing (ij)(kl)"))?;

    // The operational description must pick out the same involutions.
    let gi = ctx.subgroup_generator(u_i);
    let gj = ctx.subgroup_generator(u_j);
    let by_property: Vec<usize> = elements
        .iter()
        .filter(|g| g.order() == 2 && inverts(g, gi) && inverts(g, gj) && g.commutes_with(t))
        .map(|g| ctx.involution_index(g).expect("involution"))
        .collect();
    if by_property != [a_kl] {
        return Err(bad("(kl) is not the unique involution inverting u_i, u_j and commuting with t"));
    }
    if ctx.involution_index(&t.then(ctx.involution(a_kl))) != Some(a_ij_kl) {
        return Err(bad("(ij)(kl) differs from t·(kl)"));
    }
    Ok(S4Labelling {
        u_i,
        u_j,
        u_k,
        u_l,
        a_ij,
        a_ik: tr(i, k)?,
        a_il: tr(i, l)?,
        a_jk: tr(j, k)?,
        a_jl: tr(j, l)?,
        a_kl,
        a_ij_kl,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ResurrectionReport {
    pub rho: usize,
    pub sigma: usize,
    pub t: usize,
    pub labelling: S4Labelling,
    /// (α1, β2) as an affine expression in x.
    pub pairing: String,
    pub root: String,
    #[serde(skip)]
    pub root_value: ExactScalar,
}

/// The pairing of the 0-eigenvector α1 of a_t in the S4-algebra with the
/// 1/4-eigenvector β2 of a_t in the 3A-algebra of ⟨ρ, t⟩, and its root in x.
pub fn resurrection_inner_check(
    ctx: &U35Context,
    m: &GramMatrix,
    rho: usize,
    sigma: usize,
    t: usize,
) -> Result<ResurrectionReport, GramError> {
    let lab = label_s4(ctx, sigma, t)?;
    let u = AxisId::ThreeA;
    let a = AxisId::Majorana;
    let c = |n, d| rat(n, d);
    // 1/4-eigenvectors of a_(ij) in ⟨a_(ij), u_k⟩ and ⟨a_(ij), u_l⟩.
    let quarter = |uk: usize, x1: usize, x2: usize| {
        RelationVector::from_terms([
            (u(uk), c(1, 1)),
            (a(lab.a_ij), c(-8, 45)),
            (a(x1), c(-32, 45)),
            (a(x2), c(-32, 45)),
        ])
    };
    let mut alpha1 = RelationVector::from_terms([
        (u(lab.u_i), c(1, 1)),
        (u(lab.u_j), c(1, 1)),
        (a(lab.a_ij), c(-1, 18)),
        (a(lab.a_kl), c(-8, 45)),
        (a(lab.a_ij_kl), c(8, 45)),
    ]);
    let eighth = c(-1, 8);
    alpha1 = &alpha1 + &quarter(lab.u_k, lab.a_il, lab.a_jl).scaled(&eighth);
    alpha1 = &alpha1 + &quarter(lab.u_l, lab.a_ik, lab.a_jk).scaled(&eighth);

    let tp = ctx.involution(t);
    let r = ctx.subgroup_generator(rho);
    if !inverts(tp, r) {
        return Err(GramError::S4Labelling("t does not invert rho".into()));
    }
    let t1 = ctx.involution_index(&tp.then(r)).expect("involution of S3");
    let t2 = ctx.involution_index(&tp.then(&r.pow(2))).expect("involution of S3");
    let beta2 = RelationVector::from_terms([
        (u(rho), c(1, 1)),
        (a(t), c(-8, 45)),
        (a(t1), c(-32, 45)),
        (a(t2), c(-32, 45)),
    ]);
    let pairing = m.pair(&alpha1, &beta2)?;
    let root = pairing.root().ok_or(GramError::Degenerate)?;
    debug_assert!(pairing.eval(&root).is_zero());
    Ok(ResurrectionReport {
        rho,
        sigma,
        t,
        labelling: lab,
        pairing: pairing.to_string(),
        root: format_rational(&root),
        root_value: root,
    })
}
