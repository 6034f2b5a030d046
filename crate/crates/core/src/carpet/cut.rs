use num_bigint::BigUint;
use num_traits::{One, Pow};

use super::{CarpetGraph, CarpetSpec};

/// Bonds crossed by a straight vertical cut through one column of squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutResult {
    pub column: u32,
    pub crossed_edges: Vec<usize>,
    pub count: usize,
    /// Set for even `b`, where no closed form backs the cut.
    pub heuristic: bool,
}

/// Cut through the middle of column `column`, crossing every horizontal
/// edge from `x = column` to `x = column + 1`.
pub fn vertical_cut(g: &CarpetGraph, column: u32) -> CutResult {
    let crossed_edges: Vec<usize> = (0..=g.spec.side())
        .filter_map(|y| g.horizontal_edge(column, y))
        .collect();
    CutResult {
        column,
        count: crossed_edges.len(),
        crossed_edges,
        heuristic: g.spec.b % 2 == 0,
    }
}

/// The central vertical cut; for even `b` the column `⌊b^l / 2⌋` is used.
pub fn energy_barrier_cut(g: &CarpetGraph) -> CutResult {
    vertical_cut(g, g.spec.side() / 2)
}

/// Fewest crossed bonds over every straight vertical cut.
pub fn min_vertical_cut(g: &CarpetGraph) -> CutResult {
    (0..g.spec.side())
        .map(|x| vertical_cut(g, x))
        .min_by_key(|c| c.count)
        .expect("carpet has at least one column")
}

/// `((b−c)^{l+1} − 1) / ((b−c) − 1) + 1`, the crossing count of the central
/// cut for odd `b`.
pub fn barrier_closed_form(spec: &CarpetSpec) -> Option<BigUint> {
    if spec.b % 2 == 0 {
        return None;
    }
    let d = BigUint::from(spec.b - spec.c);
    let one = BigUint::one();
    let top: BigUint = Pow::pow(&d, spec.level + 1);
    Some((top - &one) / (d - &one) + one)
}
