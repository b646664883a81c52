//! Automorphism search by individualization and equitable refinement.
//!
//! The search fixes a base (the first vertex of the first non-singleton cell
//! at every level) and, working upwards from the deepest level, finds one
//! automorphism for each point of a target cell that is not yet in the
//! basic orbit. The automorphisms found form a strong generating set, so
//! the group order is the product of the basic orbit lengths.

use super::Graph;

type Cells = Vec<Vec<usize>>;

#[derive(Clone)]
struct Refined {
    cells: Cells,
    trace: Vec<u32>,
}

fn mask_of(cell: &[usize]) -> u64 {
    cell.iter().fold(0u64, |m, &v| m | (1u64 << v))
}

/// Splits cells by neighbour counts into each splitter until the partition
/// is equitable. The trace records every split so two refinements can be
/// compared for compatibility.
fn refine(graph: &Graph, mut cells: Cells, mut trace: Vec<u32>) -> Refined {
    'outer: loop {
        for s in 0..cells.len() {
            let splitter = mask_of(&cells[s]);
            let mut next: Cells = Vec::with_capacity(cells.len());
            let mut split = false;
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(u32, usize)> = cell
                    .iter()
                    .map(|&v| ((graph.adjacency_mask(v) & splitter).count_ones(), v))
                    .collect();
                keyed.sort_unstable();
                let mut start = 0;
                for end in 1..=keyed.len() {
                    if end == keyed.len() || keyed[end].0 != keyed[start].0 {
                        trace.push(keyed[start].0);
                        trace.push((end - start) as u32);
                        next.push(keyed[start..end].iter().map(|&(_, v)| v).collect());
                        start = end;
                    }
                }
                if !next.is_empty() && next.last().map(Vec::len) != Some(cell.len()) {
                    split = true;
                }
            }
            if split {
                trace.push(u32::MAX);
                cells = next;
                continue 'outer;
            }
        }
        break;
    }
    Refined { cells, trace }
}

fn individualize(refined: &Refined, cell_index: usize, vertex: usize) -> Cells {
    let mut cells = Vec::with_capacity(refined.cells.len() + 1);
    for (i, cell) in refined.cells.iter().enumerate() {
        if i == cell_index {
            cells.push(vec![vertex]);
            cells.push(cell.iter().copied().filter(|&v| v != vertex).collect());
        } else {
            cells.push(cell.clone());
        }
    }
    cells
}

fn first_nontrivial(cells: &Cells) -> Option<usize> {
    cells.iter().position(|c| c.len() > 1)
}

fn compatible(a: &Refined, b: &Refined) -> bool {
    a.trace == b.trace
        && a.cells.len() == b.cells.len()
        && a.cells.iter().zip(&b.cells).all(|(x, y)| x.len() == y.len())
}

fn is_automorphism(graph: &Graph, map: &[usize]) -> bool {
    (0..graph.vertex_count()).all(|u| {
        (0..graph.vertex_count()).all(|v| graph.adjacent(u, v) == graph.adjacent(map[u], map[v]))
    })
}

/// Depth-first search for an automorphism taking the left partition to the
/// right one. The left side always follows the base path.
fn extend(graph: &Graph, path: &[Refined], level: usize, right: &Refined) -> Option<Vec<usize>> {
    let left = &path[level];
    match first_nontrivial(&left.cells) {
        None => {
            let mut map = vec![0; graph.vertex_count()];
            for (l, r) in left.cells.iter().zip(&right.cells) {
                map[l[0]] = r[0];
            }
            is_automorphism(graph, &map).then_some(map)
        }
        Some(c) => {
            for &w in &right.cells[c] {
                let next = refine(graph, individualize(right, c, w), right.trace.clone());
                if compatible(&path[level + 1], &next) {
                    if let Some(map) = extend(graph, path, level + 1, &next) {
                        return Some(map);
                    }
                }
            }
            None
        }
    }
}

fn orbit(point: usize, gens: &[Vec<usize>]) -> Vec<usize> {
    let mut orbit = vec![point];
    let mut i = 0;
    while i < orbit.len() {
        let p = orbit[i];
        for g in gens {
            if !orbit.contains(&g[p]) {
                orbit.push(g[p]);
            }
        }
        i += 1;
    }
    orbit
}

/// Strong generating set of the automorphism group, as vertex maps, plus
/// the group order.
pub(super) fn automorphism_generators(graph: &Graph) -> (Vec<Vec<usize>>, u128) {
    let n = graph.vertex_count();
    let unit: Cells = if n == 0 { vec![] } else { vec![(0..n).collect()] };
    let mut path = vec![refine(graph, unit, Vec::new())];
    let mut targets = Vec::new();
    while let Some(c) = first_nontrivial(&path.last().expect("nonempty").cells) {
        let current = path.last().expect("nonempty");
        let b = current.cells[c][0];
        targets.push((c, b));
        let next = refine(graph, individualize(current, c, b), current.trace.clone());
        path.push(next);
    }

    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut order: u128 = 1;
    for level in (0..targets.len()).rev() {
        let (c, b) = targets[level];
        let mut level_orbit = orbit(b, &gens);
        let candidates = path[level].cells[c].clone();
        for w in candidates {
            if level_orbit.contains(&w) {
                continue;
            }
            let right = refine(
                graph,
                individualize(&path[level], c, w),
                path[level].trace.clone(),
            );
            if !compatible(&path[level + 1], &right) {
                continue;
            }
            if let Some(map) = extend(graph, &path, level + 1, &right) {
                gens.push(map);
                level_orbit = orbit(b, &gens);
            }
        }
        order *= level_orbit.len() as u128;
    }
    (gens, order)
}
