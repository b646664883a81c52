//! Parser for the algebra data file and completion of the tables under the
//! dihedral symmetry of the axes.

use std::collections::BTreeSet;

use num_traits::Zero;

use super::{axis_index, AlgebraSpec, AlgebraType, Coords, Eigenvalue, NortsakError};
use crate::exact::{parse_rational, ExactScalar, FormalVector};

pub const ALGEBRA_DATA: &str = include_str!("../../data/norton_sakuma.txt");

pub(super) fn all_algebras() -> Result<Vec<AlgebraSpec>, NortsakError> {
    parse_algebras(ALGEBRA_DATA)
}

struct Draft {
    tag: AlgebraType,
    n: i64,
    basis: Vec<String>,
    majorana: Vec<String>,
    prods: Vec<(String, String, FormalVector<String>, usize)>,
    inners: Vec<(String, String, ExactScalar, usize)>,
    eigvecs: Vec<(Eigenvalue, FormalVector<String>)>,
}

fn parse_err(line: usize, message: impl Into<String>) -> NortsakError {
    NortsakError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_terms(line: usize, words: &[&str]) -> Result<FormalVector<String>, NortsakError> {
    if words == ["-"] {
        return Ok(FormalVector::zero());
    }
    if words.is_empty() {
        return Err(parse_err(line, "missing terms"));
    }
    let mut v = FormalVector::zero();
    for w in words {
        let (c, label) = w
            .split_once(':')
            .ok_or_else(|| parse_err(line, format!("bad term {w:?}")))?;
        let c = parse_rational(c).map_err(|e| parse_err(line, e.to_string()))?;
        v.add_term(label.to_string(), c);
    }
    Ok(v)
}

/// Parses every algebra in `text` and completes its tables.
pub fn parse_algebras(text: &str) -> Result<Vec<AlgebraSpec>, NortsakError> {
    let mut drafts: Vec<Draft> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        let Some((&kind, rest)) = words.split_first() else {
            continue;
        };
        if kind == "algebra" {
            let [tag, n] = rest else {
                return Err(parse_err(line, "expected: algebra <type> <n>"));
            };
            let tag: AlgebraType = tag.parse()?;
            let n: i64 = n.parse().map_err(|_| parse_err(line, "bad rotation order"))?;
            if n as usize != tag.rotation_order() {
                return Err(parse_err(line, "rotation order does not match type"));
            }
            drafts.push(Draft {
                tag,
                n,
                basis: Vec::new(),
                majorana: Vec::new(),
                prods: Vec::new(),
                inners: Vec::new(),
                eigvecs: Vec::new(),
            });
            continue;
        }
        let draft = drafts
            .last_mut()
            .ok_or_else(|| parse_err(line, "entry before first algebra"))?;
        match kind {
            "basis" => draft.basis = rest.iter().map(|s| s.to_string()).collect(),
            "majorana" => draft.majorana = rest.iter().map(|s| s.to_string()).collect(),
            "prod" => {
                let [x, y, terms @ ..] = rest else {
                    return Err(parse_err(line, "expected: prod <x> <y> <terms>"));
                };
                draft
                    .prods
                    .push((x.to_string(), y.to_string(), parse_terms(line, terms)?, line));
            }
            "inner" => {
                let [x, y, c] = rest else {
                    return Err(parse_err(line, "expected: inner <x> <y> <value>"));
                };
                let c = parse_rational(c).map_err(|e| parse_err(line, e.to_string()))?;
                draft.inners.push((x.to_string(), y.to_string(), c, line));
            }
            "eigvec" => {
                let [ev, terms @ ..] = rest else {
                    return Err(parse_err(line, "expected: eigvec <value> <terms>"));
                };
                let v = parse_rational(ev).map_err(|e| parse_err(line, e.to_string()))?;
                let ev = Eigenvalue::from_value(&v)
                    .ok_or_else(|| parse_err(line, format!("{ev} is not in the spectrum")))?;
                draft.eigvecs.push((ev, parse_terms(line, terms)?));
            }
            other => return Err(parse_err(line, format!("unknown entry {other:?}"))),
        }
    }
    drafts.into_iter().map(complete).collect()
}

/// Basis permutations induced by i -> s*i + r on axis indices.
fn symmetries(d: &Draft) -> Vec<Vec<usize>> {
    let lookup = |k: i64| {
        d.basis
            .iter()
            .position(|b| axis_index(b).is_some_and(|i| (i - k).rem_euclid(d.n) == 0))
    };
    let mut out = Vec::new();
    for s in [1, -1] {
        for r in 0..d.n {
            let perm: Option<Vec<usize>> = d
                .basis
                .iter()
                .enumerate()
                .map(|(pos, b)| match axis_index(b) {
                    Some(i) => lookup(s * i + r),
                    None => Some(pos),
                })
                .collect();
            if let Some(p) = perm {
                out.push(p);
            }
        }
    }
    out
}

fn complete(d: Draft) -> Result<AlgebraSpec, NortsakError> {
    let dim = d.basis.len();
    if dim != d.tag.dimension() {
        return Err(parse_err(0, format!("{}: basis has {dim} elements", d.tag)));
    }
    let index = |label: &str| {
        d.basis
            .iter()
            .position(|b| b == label)
            .ok_or_else(|| NortsakError::UnknownLabel {
                tag: d.tag,
                label: label.to_string(),
            })
    };
    let to_coords = |v: &FormalVector<String>| -> Result<Coords, NortsakError> {
        let mut out = vec![ExactScalar::zero(); dim];
        for (k, c) in v.iter() {
            out[index(k)?] += c;
        }
        Ok(out)
    };
    let syms = symmetries(&d);
    let inconsistent = |i: usize, j: usize| NortsakError::InconsistentCompletion {
        tag: d.tag,
        x: d.basis[i].clone(),
        y: d.basis[j].clone(),
    };

    let mut products: Vec<Option<Coords>> = vec![None; dim * dim];
    for (x, y, terms, _) in &d.prods {
        let (i, j) = (index(x)?, index(y)?);
        let v = to_coords(terms)?;
        for g in &syms {
            let mut image = vec![ExactScalar::zero(); dim];
            for (k, c) in v.iter().enumerate() {
                image[g[k]] = c.clone();
            }
            for (a, b) in [(g[i], g[j]), (g[j], g[i])] {
                match &products[a * dim + b] {
                    Some(existing) if existing != &image => return Err(inconsistent(a, b)),
                    _ => products[a * dim + b] = Some(image.clone()),
                }
            }
        }
    }

    let mut gram: Vec<Vec<Option<ExactScalar>>> = vec![vec![None; dim]; dim];
    for (x, y, c, _) in &d.inners {
        let (i, j) = (index(x)?, index(y)?);
        for g in &syms {
            for (a, b) in [(g[i], g[j]), (g[j], g[i])] {
                match &gram[a][b] {
                    Some(existing) if existing != c => return Err(inconsistent(a, b)),
                    _ => gram[a][b] = Some(c.clone()),
                }
            }
        }
    }

    let incomplete = |i: usize, j: usize| NortsakError::Incomplete {
        tag: d.tag,
        x: d.basis[i].clone(),
        y: d.basis[j].clone(),
    };
    let mut full_products = Vec::with_capacity(dim * dim);
    for (k, p) in products.into_iter().enumerate() {
        full_products.push(p.ok_or_else(|| incomplete(k / dim, k % dim))?);
    }
    let mut full_gram = Vec::with_capacity(dim);
    for (i, row) in gram.into_iter().enumerate() {
        let row: Result<Vec<_>, _> = row
            .into_iter()
            .enumerate()
            .map(|(j, c)| c.ok_or_else(|| incomplete(i, j)))
            .collect();
        full_gram.push(row?);
    }

    let majorana: BTreeSet<usize> = d
        .majorana
        .iter()
        .map(|m| index(m))
        .collect::<Result<_, _>>()?;
    for (_, v) in &d.eigvecs {
        to_coords(v)?;
    }

    Ok(AlgebraSpec {
        tag: d.tag,
        basis: d.basis,
        majorana: majorana.into_iter().collect(),
        products: full_products,
        gram: full_gram,
        listed_eigenvectors: d.eigvecs,
    })
}
