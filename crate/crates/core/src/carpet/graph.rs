use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::CarpetSpec;
use crate::error::{Error, Result};

/// The carpet graph: corners and borders of every occupied unit square.
///
/// Vertices are sorted row-major by `(y, x)`. Edges are emitted while
/// walking the vertices in order, rightward edge first, then upward edge.
/// Interior plaquettes follow the cell order of [`CarpetSpec::cells`] and
/// list their edges bottom, right, top, left. Exterior plaquettes bound
/// the deleted regions, one each, traced counterclockwise from the
/// lowest-leftmost corner; the outer boundary is not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarpetGraph {
    pub spec: CarpetSpec,
    pub vertices: Vec<(u32, u32)>,
    pub edges: Vec<[usize; 2]>,
    pub cells: Vec<(u32, u32)>,
    pub interior_plaquettes: Vec<[usize; 4]>,
    pub exterior_plaquettes: Vec<Vec<usize>>,
    vertex_index: HashMap<(u32, u32), usize>,
    horizontal: HashMap<(u32, u32), usize>,
    vertical: HashMap<(u32, u32), usize>,
}

/// On-disk graph layout; all cross references are indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub spec: CarpetSpec,
    pub vertices: Vec<[u32; 2]>,
    pub edges: Vec<[usize; 2]>,
    pub interior_plaquettes: Vec<Vec<usize>>,
    pub exterior_plaquettes: Vec<Vec<usize>>,
}

impl CarpetGraph {
    pub fn build(spec: &CarpetSpec) -> CarpetGraph {
        let cells = spec.cells();
        let side = spec.side();

        let mut vertices: Vec<(u32, u32)> = cells
            .iter()
            .flat_map(|&(x, y)| [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)])
            .collect();
        vertices.sort_unstable_by_key(|&(x, y)| (y, x));
        vertices.dedup();
        let vertex_index: HashMap<_, _> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        let occupied = |x: i64, y: i64| {
            x >= 0 && y >= 0 && spec.is_occupied(x as u32, y as u32)
        };
        let mut edges = Vec::new();
        let mut horizontal = HashMap::new();
        let mut vertical = HashMap::new();
        for (i, &(x, y)) in vertices.iter().enumerate() {
            let (xi, yi) = (x as i64, y as i64);
            if x < side && (occupied(xi, yi) || occupied(xi, yi - 1)) {
                horizontal.insert((x, y), edges.len());
                edges.push([i, vertex_index[&(x + 1, y)]]);
            }
            if y < side && (occupied(xi, yi) || occupied(xi - 1, yi)) {
                vertical.insert((x, y), edges.len());
                edges.push([i, vertex_index[&(x, y + 1)]]);
            }
        }

        let interior_plaquettes = cells
            .iter()
            .map(|&(x, y)| {
                [
                    horizontal[&(x, y)],
                    vertical[&(x + 1, y)],
                    horizontal[&(x, y + 1)],
                    vertical[&(x, y)],
                ]
            })
            .collect();

        let exterior_plaquettes = spec
            .holes()
            .into_iter()
            .map(|(x0, y0, s)| {
                let mut cycle = Vec::with_capacity(4 * s as usize);
                cycle.extend((0..s).map(|i| horizontal[&(x0 + i, y0)]));
                cycle.extend((0..s).map(|i| vertical[&(x0 + s, y0 + i)]));
                cycle.extend((0..s).map(|i| horizontal[&(x0 + s - 1 - i, y0 + s)]));
                cycle.extend((0..s).map(|i| vertical[&(x0, y0 + s - 1 - i)]));
                cycle
            })
            .collect();

        CarpetGraph {
            spec: *spec,
            vertices,
            edges,
            cells,
            interior_plaquettes,
            exterior_plaquettes,
            vertex_index,
            horizontal,
            vertical,
        }
    }

    pub fn vertex_at(&self, x: u32, y: u32) -> Option<usize> {
        self.vertex_index.get(&(x, y)).copied()
    }

    /// Edge from `(x, y)` to `(x + 1, y)`.
    pub fn horizontal_edge(&self, x: u32, y: u32) -> Option<usize> {
        self.horizontal.get(&(x, y)).copied()
    }

    /// Edge from `(x, y)` to `(x, y + 1)`.
    pub fn vertical_edge(&self, x: u32, y: u32) -> Option<usize> {
        self.vertical.get(&(x, y)).copied()
    }

    /// Edge indices of the outer boundary, counterclockwise from the origin.
    pub fn outer_boundary(&self) -> Vec<usize> {
        let n = self.spec.side();
        let mut cycle = Vec::with_capacity(4 * n as usize);
        cycle.extend((0..n).map(|i| self.horizontal[&(i, 0)]));
        cycle.extend((0..n).map(|i| self.vertical[&(n, i)]));
        cycle.extend((0..n).map(|i| self.horizontal[&(n - 1 - i, n)]));
        cycle.extend((0..n).map(|i| self.vertical[&(0, n - 1 - i)]));
        cycle
    }

    pub fn is_on_outer_boundary(&self, v: usize) -> bool {
        let n = self.spec.side();
        let (x, y) = self.vertices[v];
        x == 0 || y == 0 || x == n || y == n
    }

    /// Edge indices incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            inc[a].push(e);
            inc[b].push(e);
        }
        inc
    }

    /// Checks that every plaquette is a closed cycle: each vertex it touches
    /// is met by an even number of its edges.
    pub fn plaquettes_are_cycles(&self) -> bool {
        let closed = |edges: &[usize]| {
            let mut deg: HashMap<usize, u32> = HashMap::new();
            for &e in edges {
                for v in self.edges[e] {
                    *deg.entry(v).or_default() += 1;
                }
            }
            !edges.is_empty() && deg.values().all(|d| d % 2 == 0)
        };
        self.interior_plaquettes.iter().all(|p| closed(p))
            && self.exterior_plaquettes.iter().all(|p| closed(p))
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            spec: self.spec,
            vertices: self.vertices.iter().map(|&(x, y)| [x, y]).collect(),
            edges: self.edges.clone(),
            interior_plaquettes: self.interior_plaquettes.iter().map(|p| p.to_vec()).collect(),
            exterior_plaquettes: self.exterior_plaquettes.clone(),
        }
    }

    /// Rebuilds the graph named by a JSON document and checks that the
    /// document matches it exactly.
    pub fn from_json(doc: &GraphJson) -> Result<CarpetGraph> {
        let spec = CarpetSpec::new(doc.spec.b, doc.spec.c, doc.spec.level)?;
        let g = CarpetGraph::build(&spec);
        if g.to_json() != *doc {
            return Err(Error::Parse(
                "graph document does not match the carpet it names".into(),
            ));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::closed_form_counts;

    fn graph(b: u32, c: u32, l: u32) -> CarpetGraph {
        CarpetGraph::build(&CarpetSpec::new(b, c, l).unwrap())
    }

    fn counts(g: &CarpetGraph) -> (u64, u64, u64, u64) {
        (
            g.vertices.len() as u64,
            g.edges.len() as u64,
            g.interior_plaquettes.len() as u64,
            g.exterior_plaquettes.len() as u64,
        )
    }

    #[test]
    fn unit_square() {
        let g = graph(3, 1, 0);
        assert_eq!(counts(&g), (4, 4, 1, 0));
        assert_eq!(g.outer_boundary().len(), 4);
    }

    #[test]
    fn level_one_examples() {
        assert_eq!(counts(&graph(3, 1, 1)), (16, 24, 8, 1));
        let g = graph(14, 12, 1);
        assert_eq!(counts(&g), (104, 156, 52, 1));
    }

    #[test]
    fn enumeration_matches_closed_forms() {
        for (b, c) in [(3, 1), (5, 1), (5, 3), (14, 12)] {
            for l in 0..=2 {
                let g = graph(b, c, l);
                let cf = closed_form_counts(&g.spec).as_u64().unwrap();
                assert_eq!(counts(&g), cf, "({b},{c},{l})");
            }
        }
    }

    #[test]
    fn euler_identity_and_cycles() {
        for (b, c, l) in [(3, 1, 0), (3, 1, 2), (5, 1, 2), (5, 3, 2), (14, 12, 1)] {
            let g = graph(b, c, l);
            let (v, e, pi, pe) = counts(&g);
            assert_eq!(e, pi + v - 1 + pe);
            assert!(g.plaquettes_are_cycles());
            for &[a, b] in &g.edges {
                assert!(a < g.vertices.len() && b < g.vertices.len() && a < b);
            }
        }
    }

    #[test]
    fn central_hole_of_level_one() {
        let g = graph(3, 1, 1);
        let hole = &g.exterior_plaquettes[0];
        assert_eq!(hole.len(), 4);
        assert_eq!(g.edges[hole[0]], [g.vertex_at(1, 1).unwrap(), g.vertex_at(2, 1).unwrap()]);
    }

    #[test]
    fn self_similar_blocks() {
        // Each occupied level-one block, translated to the origin, is the
        // previous level's graph.
        let g = graph(3, 1, 2);
        let prev = graph(3, 1, 1);
        let block = prev.spec.side();
        let mut prev_edges: Vec<_> = prev
            .edges
            .iter()
            .map(|&[a, b]| (prev.vertices[a], prev.vertices[b]))
            .collect();
        prev_edges.sort_unstable();
        for (bx, by) in CarpetSpec::new(3, 1, 1).unwrap().cells() {
            let (ox, oy) = (bx * block, by * block);
            let inside = |(x, y): (u32, u32)| {
                x >= ox && y >= oy && x <= ox + block && y <= oy + block
            };
            let mut local: Vec<_> = g
                .edges
                .iter()
                .map(|&[a, b]| (g.vertices[a], g.vertices[b]))
                .filter(|&(p, q)| inside(p) && inside(q))
                .map(|((x1, y1), (x2, y2))| ((x1 - ox, y1 - oy), (x2 - ox, y2 - oy)))
                .collect();
            local.sort_unstable();
            assert_eq!(local, prev_edges);
        }
    }

    #[test]
    fn json_round_trip() {
        let g = graph(3, 1, 1);
        let doc = g.to_json();
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.starts_with(r#"{"spec":{"b":3,"c":1,"l":1},"vertices":[[0,0],"#));
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(CarpetGraph::from_json(&back).unwrap(), g);
    }
}
