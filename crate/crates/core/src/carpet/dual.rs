use super::CarpetGraph;

/// A dual edge, indexed like the primal edge it crosses. Edges on the
/// border of a deleted region or of the carpet keep one end dangling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualEdge {
    Full(usize, usize),
    Dangling(usize),
}

impl DualEdge {
    pub fn ends(&self) -> (usize, Option<usize>) {
        match *self {
            DualEdge::Full(a, b) => (a, Some(b)),
            DualEdge::Dangling(a) => (a, None),
        }
    }
}

/// Planar dual restricted to interior plaquettes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    /// Lower-left corner of the unit square behind each dual vertex.
    pub vertices: Vec<(u32, u32)>,
    pub edges: Vec<DualEdge>,
}

impl DualGraph {
    pub fn build(g: &CarpetGraph) -> DualGraph {
        let mut owners: Vec<Vec<usize>> = vec![Vec::new(); g.edges.len()];
        for (p, plaq) in g.interior_plaquettes.iter().enumerate() {
            for &e in plaq {
                owners[e].push(p);
            }
        }
        let edges = owners
            .into_iter()
            .map(|o| match o.as_slice() {
                [a] => DualEdge::Dangling(*a),
                [a, b] => DualEdge::Full(*a, *b),
                other => unreachable!("edge bordering {} interior plaquettes", other.len()),
            })
            .collect();
        DualGraph {
            vertices: g.cells.clone(),
            edges,
        }
    }

    pub fn full_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().filter_map(|e| match *e {
            DualEdge::Full(a, b) => Some((a, b)),
            DualEdge::Dangling(_) => None,
        })
    }

    /// Bounded faces of the dual. Each is a primal vertex surrounded by four
    /// interior plaquettes; the face is returned as the primal vertex index
    /// together with its four bounding dual edges.
    pub fn bounded_faces(&self, g: &CarpetGraph) -> Vec<(usize, Vec<usize>)> {
        g.incidence()
            .into_iter()
            .enumerate()
            .filter(|(_, inc)| {
                inc.len() == 4 && inc.iter().all(|&e| matches!(self.edges[e], DualEdge::Full(..)))
            })
            .collect()
    }
}
