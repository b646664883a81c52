//! The Hoffman–Singleton graph together with U3(5) as a fully enumerated
//! permutation group, and index tables for its involutions and its
//! subgroups of order 3.

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::hsgraph::{self, Graph, GraphError};
use crate::permcore::{enumerate_group, EnumeratedGroup, PermError, Permutation, SubgroupHandle};

pub const GROUP_ORDER: u64 = 126_000;
pub const AUT_ORDER: u64 = 252_000;
pub const INVOLUTION_COUNT: usize = 525;
pub const ORDER3_SUBGROUP_COUNT: usize = 1750;

#[derive(Debug, Error)]
pub enum ContextError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("group has order {found}, expected {expected}")]
    WrongOrder { found: u64, expected: u64 },
    #[error("group element does not preserve the graph")]
    NotAutomorphism,
}

pub struct U35Context {
    graph: Graph,
    aut_order: u64,
    group: EnumeratedGroup,
    involutions: Vec<Permutation>,
    involution_index: FxHashMap<Permutation, u32>,
    subgroups: Vec<[Permutation; 2]>,
    subgroup_index: FxHashMap<Permutation, u32>,
}

impl U35Context {
    /// Builds the graph, enumerates its automorphism group and takes the
    /// derived subgroup.
    pub fn build() -> Result<Self, ContextError> {
        let graph = hsgraph::build_hs_graph()?;
        let aut_gens = hsgraph::automorphism_group(&graph)?;
        let aut = enumerate_group(&aut_gens, AUT_ORDER as usize)?;
        let group = hsgraph::derived_subgroup(&aut)?;
        Self::from_group(graph, aut.order(), group)
    }

    /// Wraps an already enumerated group, for instance one read from a cache.
    pub fn from_group(
        graph: Graph,
        aut_order: u64,
        group: EnumeratedGroup,
    ) -> Result<Self, ContextError> {
        if group.order() != GROUP_ORDER {
            return Err(ContextError::WrongOrder {
                found: group.order(),
                expected: GROUP_ORDER,
            });
        }
        if !group.generators().iter().all(|g| graph.preserves(g)) {
            return Err(ContextError::NotAutomorphism);
        }
        let involutions = group.elements_of_order(2);
        let involution_index = involutions
            .iter()
            .enumerate()
            .map(|(i, p)| (*p, i as u32))
            .collect();
        let mut subgroups = Vec::new();
        let mut subgroup_index = FxHashMap::default();
        for p in group.elements() {
            if p.order() == 3 && !subgroup_index.contains_key(p) {
                let inv = p.inverse();
                let i = subgroups.len() as u32;
                subgroup_index.insert(*p, i);
                subgroup_index.insert(inv, i);
                subgroups.push([*p, inv]);
            }
        }
        Ok(Self {
            graph,
            aut_order,
            group,
            involutions,
            involution_index,
            subgroups,
            subgroup_index,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn aut_order(&self) -> u64 {
        self.aut_order
    }

    pub fn group(&self) -> &EnumeratedGroup {
        &self.group
    }

    /// Involutions in enumeration order.
    pub fn involutions(&self) -> &[Permutation] {
        &self.involutions
    }

    pub fn involution(&self, i: usize) -> &Permutation {
        &self.involutions[i]
    }

    pub fn involution_index(&self, t: &Permutation) -> Option<usize> {
        self.involution_index.get(t).map(|&i| i as usize)
    }

    pub fn subgroup_count(&self) -> usize {
        self.subgroups.len()
    }

    /// The generator of the i-th subgroup of order 3 that comes first in
    /// enumeration order.
    pub fn subgroup_generator(&self, i: usize) -> &Permutation {
        &self.subgroups[i][0]
    }

    pub fn subgroup_elements(&self, i: usize) -> &[Permutation; 2] {
        &self.subgroups[i]
    }

    /// Index of the subgroup generated by an element of order 3.
    pub fn subgroup_of(&self, p: &Permutation) -> Option<usize> {
        self.subgroup_index.get(p).map(|&i| i as usize)
    }

    pub fn subgroup_handle(&self, i: usize) -> SubgroupHandle {
        self.group
            .subgroup_closure(&[self.subgroups[i][0]], 3)
            .expect("order-3 generator is a member")
    }

    /// Index of `σ^g` for the subgroup `σ` with index `i`.
    pub fn conjugate_subgroup(&self, i: usize, g: &Permutation) -> usize {
        self.subgroup_of(&self.subgroups[i][0].conjugate_by(g))
            .expect("conjugate of an order-3 element has order 3")
    }

    pub fn conjugate_involution(&self, i: usize, g: &Permutation) -> usize {
        self.involution_index(&self.involutions[i].conjugate_by(g))
            .expect("conjugate of an involution is an involution")
    }

    /// Whether `g` maps the subgroup with index `i` to itself.
    pub fn normalizes(&self, g: &Permutation, i: usize) -> bool {
        let c = self.subgroups[i][0].conjugate_by(g);
        c == self.subgroups[i][0] || c == self.subgroups[i][1]
    }

    /// For every subgroup `σ` of order 3, the position of the first element
    /// `g` with `σ^g = base`.
    pub fn subgroup_conjugators_to(&self, base: usize) -> Vec<u32> {
        let [x, y] = self.subgroups[base];
        let tx = self.group.conjugators_to(&x);
        let ty = self.group.conjugators_to(&y);
        self.subgroups
            .iter()
            .map(|[s, _]| tx[s].min(ty[s]))
            .collect()
    }

    /// Stabilizer of a vertex of the graph.
    pub fn vertex_stabilizer(&self, v: usize) -> Result<SubgroupHandle, PermError> {
        let elements: Vec<Permutation> = self
            .group
            .elements()
            .iter()
            .filter(|g| g.image(v) == v)
            .copied()
            .collect();
        let mut gens: Vec<Permutation> = Vec::new();
        let mut span = self.group.subgroup_closure_exact(&gens)?;
        for e in &elements {
            if span.order() as usize == elements.len() {
                break;
            }
            if !span.contains(e) {
                gens.push(*e);
                span = self.group.subgroup_closure_exact(&gens)?;
            }
        }
        Ok(span)
    }
}
