//! Sierpinski carpets SC(b, c, l) and the graphs drawn on them.

mod cut;
mod dual;
mod graph;
mod perforated;

pub use cut::{barrier_closed_form, energy_barrier_cut, min_vertical_cut, vertical_cut, CutResult};
pub use dual::{DualEdge, DualGraph};
pub use graph::{CarpetGraph, GraphJson};
pub use perforated::{build_perforated_lattice, PerforatedLattice, PerforatedLatticeSpec};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of SC(b, c, l): a b×b subdivision with the central c×c block
/// removed, iterated `level` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CarpetSpec {
    pub b: u32,
    pub c: u32,
    #[serde(rename = "l")]
    pub level: u32,
}

impl CarpetSpec {
    pub fn new(b: u32, c: u32, level: u32) -> Result<Self> {
        if c < 1 || b <= c {
            return Err(Error::InvalidCarpet(format!(
                "need b > c >= 1, got b={b}, c={c}"
            )));
        }
        if (b - c) % 2 != 0 {
            return Err(Error::InvalidCarpet(format!(
                "b - c must be even, got b={b}, c={c}"
            )));
        }
        if (b as u64).checked_pow(level).is_none_or(|s| s > u32::MAX as u64) {
            return Err(Error::InvalidCarpet(format!(
                "b^l = {b}^{level} exceeds the coordinate range"
            )));
        }
        Ok(CarpetSpec { b, c, level })
    }

    /// Side length b^l of the grid, in unit squares.
    pub fn side(&self) -> u32 {
        self.b.pow(self.level)
    }

    /// b² − c², the number of occupied subsquares per subdivision.
    pub fn kept(&self) -> u64 {
        (self.b as u64).pow(2) - (self.c as u64).pow(2)
    }

    fn hole_range(&self) -> (u32, u32) {
        let lo = (self.b - self.c) / 2;
        (lo, lo + self.c)
    }

    /// Whether unit square `(x, y)` survives every deletion step.
    pub fn is_occupied(&self, x: u32, y: u32) -> bool {
        let side = self.side();
        if x >= side || y >= side {
            return false;
        }
        let (lo, hi) = self.hole_range();
        let (mut x, mut y) = (x, y);
        for _ in 0..self.level {
            let (dx, dy) = (x % self.b, y % self.b);
            if (lo..hi).contains(&dx) && (lo..hi).contains(&dy) {
                return false;
            }
            x /= self.b;
            y /= self.b;
        }
        true
    }

    /// The occupied unit squares, sorted row-major by `(y, x)`.
    pub fn cells(&self) -> Vec<(u32, u32)> {
        let (lo, hi) = self.hole_range();
        let mut cells = vec![(0u32, 0u32)];
        for _ in 0..self.level {
            let mut next = Vec::with_capacity(cells.len() * self.kept() as usize);
            for &(x, y) in &cells {
                for dy in 0..self.b {
                    for dx in 0..self.b {
                        if (lo..hi).contains(&dx) && (lo..hi).contains(&dy) {
                            continue;
                        }
                        next.push((x * self.b + dx, y * self.b + dy));
                    }
                }
            }
            cells = next;
        }
        cells.sort_unstable_by_key(|&(x, y)| (y, x));
        cells
    }

    /// Deleted regions as `(x, y, size)`, one per removed block at every
    /// level, ordered by level and then row-major.
    pub fn holes(&self) -> Vec<(u32, u32, u32)> {
        let (lo, hi) = self.hole_range();
        let mut holes = Vec::new();
        let mut cells = vec![(0u32, 0u32)];
        let mut unit = self.side();
        for _ in 0..self.level {
            let sub = unit / self.b;
            let mut level_holes: Vec<_> = cells
                .iter()
                .map(|&(x, y)| (x + lo * sub, y + lo * sub, self.c * sub))
                .collect();
            level_holes.sort_unstable_by_key(|&(x, y, _)| (y, x));
            holes.extend(level_holes);
            let mut next = Vec::new();
            for &(x, y) in &cells {
                for dy in 0..self.b {
                    for dx in 0..self.b {
                        if (lo..hi).contains(&dx) && (lo..hi).contains(&dy) {
                            continue;
                        }
                        next.push((x + dx * sub, y + dy * sub));
                    }
                }
            }
            cells = next;
            unit = sub;
        }
        holes
    }
}

/// Occupied unit squares of SC(b, c, l).
pub fn build_carpet_cells(spec: &CarpetSpec) -> Vec<(u32, u32)> {
    spec.cells()
}

/// Closed-form vertex, edge, interior and exterior plaquette counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarpetCounts {
    pub vertices: BigUint,
    pub edges: BigUint,
    pub interior: BigUint,
    pub exterior: BigUint,
}

impl CarpetCounts {
    pub fn as_u64(&self) -> Option<(u64, u64, u64, u64)> {
        Some((
            self.vertices.to_u64()?,
            self.edges.to_u64()?,
            self.interior.to_u64()?,
            self.exterior.to_u64()?,
        ))
    }
}

/// Exact quotient of two integers known to divide.
fn exact_div(num: BigInt, den: BigInt) -> BigInt {
    debug_assert!((&num % &den).is_zero());
    num / den
}

pub fn closed_form_counts(spec: &CarpetSpec) -> CarpetCounts {
    let b = BigInt::from(spec.b);
    let c = BigInt::from(spec.c);
    let p = &b * &b - &c * &c;
    let l = spec.level;
    let p_l: BigInt = Pow::pow(&p, l);
    let b_l: BigInt = Pow::pow(&b, l);
    let one = BigInt::one();
    let two = BigInt::from(2);
    let mixed = exact_div(&b_l - &p_l, &b - &p);
    let exterior = exact_div(&one - &p_l, &one - &p);
    let vertices = &p_l + &two * &c * &mixed - &exterior + &two * &b_l + &one;
    let edges = &two * &p_l + &two * &c * &mixed + &two * &b_l;
    let to_u = |v: BigInt| v.to_biguint().expect("carpet counts are non-negative");
    CarpetCounts {
        vertices: to_u(vertices),
        edges: to_u(edges),
        interior: to_u(p_l),
        exterior: to_u(exterior),
    }
}

/// Hausdorff dimension ln(b² − c²) / ln b of the limiting fractal.
pub fn hausdorff_dimension(b: u32, c: u32) -> f64 {
    let kept = (b as f64).powi(2) - (c as f64).powi(2);
    kept.ln() / (b as f64).ln()
}
