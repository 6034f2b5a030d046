//! Plain graphs on integer sites, used as Ising interaction graphs.

use std::collections::{HashMap, HashSet};

use crate::carpet::CarpetGraph;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LatticeGraph {
    pub vertices: Vec<(u32, u32)>,
    pub edges: Vec<[usize; 2]>,
    index: HashMap<(u32, u32), usize>,
}

impl LatticeGraph {
    pub fn new(vertices: Vec<(u32, u32)>, edges: Vec<[usize; 2]>) -> Self {
        let index = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        LatticeGraph {
            vertices,
            edges,
            index,
        }
    }

    /// Nearest-neighbour graph on the given sites.
    pub fn from_sites(sites: Vec<(u32, u32)>) -> Self {
        let index: HashMap<_, _> = sites.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for (i, &(x, y)) in sites.iter().enumerate() {
            if let Some(&j) = index.get(&(x + 1, y)) {
                edges.push([i, j]);
            }
            if let Some(&j) = index.get(&(x, y + 1)) {
                edges.push([i, j]);
            }
        }
        LatticeGraph {
            vertices: sites,
            edges,
            index,
        }
    }

    /// L×L square lattice, optionally wrapped into a torus. A 2×2 torus has
    /// doubled bonds; they are kept as repeated edges.
    pub fn square(side: u32, periodic: bool) -> Self {
        let sites: Vec<(u32, u32)> = (0..side)
            .flat_map(|y| (0..side).map(move |x| (x, y)))
            .collect();
        if !periodic {
            return Self::from_sites(sites);
        }
        let id = |x: u32, y: u32| (y * side + x) as usize;
        let mut edges = Vec::new();
        for y in 0..side {
            for x in 0..side {
                if side > 1 {
                    edges.push(ordered(id(x, y), id((x + 1) % side, y)));
                    edges.push(ordered(id(x, y), id(x, (y + 1) % side)));
                }
            }
        }
        Self::new(sites, edges)
    }

    pub fn vertex_at(&self, x: u32, y: u32) -> Option<usize> {
        self.index.get(&(x, y)).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let e = ordered(a, b);
        self.edges.iter().any(|&f| ordered(f[0], f[1]) == e)
    }

    pub fn edge_set(&self) -> HashSet<[usize; 2]> {
        self.edges.iter().map(|&[a, b]| ordered(a, b)).collect()
    }
}

fn ordered(a: usize, b: usize) -> [usize; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

impl From<&CarpetGraph> for LatticeGraph {
    fn from(g: &CarpetGraph) -> Self {
        LatticeGraph::new(g.vertices.clone(), g.edges.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_lattices() {
        let open = LatticeGraph::square(4, false);
        assert_eq!(open.edges.len(), 24);
        let torus = LatticeGraph::square(4, true);
        assert_eq!(torus.edges.len(), 32);
        assert!(torus.has_edge(0, 3));
    }
}
