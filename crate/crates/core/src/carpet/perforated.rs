use serde::{Deserialize, Serialize};

use crate::lattice::LatticeGraph;

/// An L×L square lattice cut into blocks of side ≈ L^α whose centres are
/// removed, leaving a frame of width ≈ L^β.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerforatedLatticeSpec {
    pub size: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl PerforatedLatticeSpec {
    pub fn block(&self) -> usize {
        ((self.size as f64).powf(self.alpha).round() as usize).clamp(1, self.size.max(1))
    }

    pub fn border(&self) -> usize {
        ((self.size as f64).powf(self.beta).round() as usize).max(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerforatedLattice {
    pub spec: PerforatedLatticeSpec,
    pub block: usize,
    pub border: usize,
    /// Set when the frame fills every block, so nothing was removed.
    pub degenerate: bool,
    pub graph: LatticeGraph,
}

impl PerforatedLattice {
    /// Whether site `(x, y)` lies in a block frame.
    pub fn keeps(&self, x: usize, y: usize) -> bool {
        if self.degenerate {
            return true;
        }
        let n = self.spec.size;
        let in_frame = |t: usize| {
            let start = t / self.block * self.block;
            let len = self.block.min(n - start);
            let u = t - start;
            u < self.border || u + self.border >= len
        };
        in_frame(x) || in_frame(y)
    }
}

pub fn build_perforated_lattice(spec: PerforatedLatticeSpec) -> PerforatedLattice {
    let block = spec.block();
    let border = spec.border();
    let degenerate = spec.beta >= spec.alpha || 2 * border >= block;
    let mut lattice = PerforatedLattice {
        spec,
        block,
        border,
        degenerate,
        graph: LatticeGraph::default(),
    };
    let n = spec.size;
    let sites: Vec<(u32, u32)> = (0..n)
        .flat_map(|y| (0..n).map(move |x| (x, y)))
        .filter(|&(x, y)| lattice.keeps(x, y))
        .map(|(x, y)| (x as u32, y as u32))
        .collect();
    lattice.graph = LatticeGraph::from_sites(sites);
    lattice
}
