//! The Hoffman–Singleton graph, strongly regular certificates and the
//! automorphism group on the 50 vertices.

mod autom;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permcore::{enumerate_group, EnumeratedGroup, PermError, Permutation, DEGREE};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph has {0} vertices, at most 64 supported")]
    TooLarge(usize),
    #[error("construction produced an invalid graph: {0}")]
    Construction(String),
    #[error(transparent)]
    Group(#[from] PermError),
}

/// Simple undirected graph on at most 64 vertices, stored as adjacency bit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > 64 {
            return Err(GraphError::TooLarge(n));
        }
        Ok(Self { rows: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(GraphError::Construction(format!("bad edge ({u},{v})")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u] &= !(1 << v);
        self.rows[v] &= !(1 << u);
    }

    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    #[inline]
    pub fn adjacency_mask(&self, v: usize) -> u64 {
        self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&u| self.adjacent(v, u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn common_neighbours(&self, u: usize, v: usize) -> usize {
        (self.rows[u] & self.rows[v]).count_ones() as usize
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        for root in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbours(u) {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Whether `p` (acting on the first `n` points) preserves adjacency.
    pub fn preserves(&self, p: &Permutation) -> bool {
        let n = self.vertex_count();
        (0..n).all(|u| p.image(u) < n)
            && (0..n).all(|u| {
                (0..n).all(|v| self.adjacent(u, v) == self.adjacent(p.image(u), p.image(v)))
            })
    }

    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph {
            rows: vec![0; vertices.len()],
        };
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if i < j && self.adjacent(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn to_adjacency_list(&self) -> AdjacencyList {
        AdjacencyList {
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            adjacency: (0..self.vertex_count()).map(|v| self.neighbours(v)).collect(),
        }
    }
}

/// JSON export shape: sorted neighbour lists.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AdjacencyList {
    pub vertices: usize,
    pub edges: usize,
    pub adjacency: Vec<Vec<usize>>,
}

/// Outcome of an exhaustive strongly-regular check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SrgCertificate {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
    pub vertex_count_ok: bool,
    pub regular_ok: bool,
    pub lambda_ok: bool,
    pub mu_ok: bool,
    /// First offending vertex pair, with `(u, u)` marking a degree failure.
    pub witness: Option<(usize, usize)>,
}

impl SrgCertificate {
    pub fn passed(&self) -> bool {
        self.vertex_count_ok && self.regular_ok && self.lambda_ok && self.mu_ok
    }
}

pub fn verify_srg(g: &Graph, v: usize, k: usize, lambda: usize, mu: usize) -> SrgCertificate {
    let mut cert = SrgCertificate {
        v,
        k,
        lambda,
        mu,
        vertex_count_ok: g.vertex_count() == v,
        regular_ok: true,
        lambda_ok: true,
        mu_ok: true,
        witness: None,
    };
    let n = g.vertex_count();
    for u in 0..n {
        if g.degree(u) != k || g.adjacent(u, u) {
            cert.regular_ok = false;
            cert.witness.get_or_insert((u, u));
        }
    }
    for u in 0..n {
        for w in u + 1..n {
            let common = g.common_neighbours(u, w);
            if g.adjacent(u, w) {
                if common != lambda {
                    cert.lambda_ok = false;
                    cert.witness.get_or_insert((u, w));
                }
            } else if common != mu {
                cert.mu_ok = false;
                cert.witness.get_or_insert((u, w));
            }
        }
    }
    cert
}

/// Robertson's pentagon–pentagram model: `P(h,i)` is vertex `5h + i`,
/// `Q(h,j)` is vertex `25 + 5h + j`.
pub fn build_hs_graph() -> Result<Graph, GraphError> {
    let p = |h: usize, i: usize| 5 * h + i % 5;
    let q = |h: usize, j: usize| 25 + 5 * h + j % 5;
    let mut g = Graph::empty(50)?;
    for h in 0..5 {
        for i in 0..5 {
            g.add_edge(p(h, i), p(h, i + 1));
            g.add_edge(q(h, i), q(h, i + 2));
        }
    }
    for h in 0..5 {
        for i in 0..5 {
            for k in 0..5 {
                g.add_edge(p(h, i), q(k, h * k + i));
            }
        }
    }
    let cert = verify_srg(&g, 50, 7, 0, 1);
    if !cert.passed() {
        return Err(GraphError::Construction(format!("{cert:?}")));
    }
    Ok(g)
}

pub fn petersen_graph() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("valid edges")
}

/// Generators of the automorphism group, as permutations of the 50 points
/// fixing every point beyond the vertex count. Each generator is checked
/// against the adjacency matrix.
pub fn automorphism_group(g: &Graph) -> Result<Vec<Permutation>, GraphError> {
    if g.vertex_count() > DEGREE {
        return Err(GraphError::TooLarge(g.vertex_count()));
    }
    let (maps, _) = autom::automorphism_generators(g);
    let mut gens = Vec::with_capacity(maps.len());
    for map in maps {
        let p = Permutation::from_partial_images(&map)?;
        if !g.preserves(&p) {
            return Err(GraphError::Construction(
                "search produced a non-automorphism".into(),
            ));
        }
        gens.push(p);
    }
    Ok(gens)
}

/// Automorphism group order read off the basic orbits of the search.
pub fn automorphism_group_order(g: &Graph) -> u128 {
    autom::automorphism_generators(g).1
}

/// Derived subgroup, computed as the normal closure of the commutators of
/// the generators (which equals the subgroup generated by all commutators).
pub fn derived_subgroup(g: &EnumeratedGroup) -> Result<EnumeratedGroup, PermError> {
    let cap = g.order() as usize;
    let gens = g.generators();
    let mut sub_gens: Vec<Permutation> = Vec::new();
    let mut members: FxHashSet<Permutation> = FxHashSet::from_iter([Permutation::identity()]);

    let mut add = |x: Permutation, sub_gens: &mut Vec<Permutation>| -> Result<bool, PermError> {
        if members.contains(&x) {
            return Ok(false);
        }
        sub_gens.push(x);
        members = enumerate_group(sub_gens, cap)?
            .elements()
            .iter()
            .copied()
            .collect();
        Ok(true)
    };

    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            add(a.commutator(b), &mut sub_gens)?;
        }
    }
    loop {
        let mut changed = false;
        for s in sub_gens.clone() {
            for a in gens {
                changed |= add(s.conjugate_by(a), &mut sub_gens)?;
            }
        }
        if !changed {
            break;
        }
    }
    enumerate_group(&sub_gens, cap)
}

/// Subgraph induced on the fixed vertices of `t`, with the fixed vertices
/// listed in increasing order.
pub fn fixed_subgraph(t: &Permutation, g: &Graph) -> (Graph, Vec<usize>) {
    let fixed: Vec<usize> = (0..g.vertex_count()).filter(|&v| t.image(v) == v).collect();
    (g.induced_subgraph(&fixed), fixed)
}
