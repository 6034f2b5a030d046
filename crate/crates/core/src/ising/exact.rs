//! Exact partition functions and correlations by enumerating all states.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::IsingModel;
use crate::error::{Error, Result};

/// Largest spin count accepted for enumeration.
pub const SPIN_CAP: usize = 24;

/// The state space is cut into this many contiguous blocks; block sums are
/// reduced in block order so results do not depend on the thread count.
const BLOCKS: u64 = 64;

fn masks(m: &IsingModel) -> Result<(Vec<(u32, f64)>, f64)> {
    if m.spins > SPIN_CAP {
        return Err(Error::TooManySpins {
            spins: m.spins,
            cap: SPIN_CAP,
        });
    }
    let terms: Vec<(u32, f64)> = m
        .interactions
        .iter()
        .map(|i| (i.support.iter().fold(0u32, |acc, &s| acc | 1 << s), i.k))
        .collect();
    let shift = terms.iter().map(|t| t.1.abs()).sum();
    Ok((terms, shift))
}

/// `Σ_{R ⊆ Λ} f(R) · exp(E(R) − shift)` for each `f` in `weights`, where bit
/// `i` of `R` set means spin `i` points down.
fn enumerate<F>(m: &IsingModel, columns: usize, f: F) -> Result<(Vec<f64>, f64)>
where
    F: Fn(u32, &mut [f64], f64) + Sync,
{
    let (terms, shift) = masks(m)?;
    let states = 1u64 << m.spins;
    let blocks = BLOCKS.min(states);
    let per = states / blocks;
    let partial: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut acc = vec![0.0; columns];
            for r in blk * per..(blk + 1) * per {
                let r = r as u32;
                let e: f64 = terms
                    .iter()
                    .map(|&(mask, k)| if (r & mask).count_ones() % 2 == 0 { k } else { -k })
                    .sum();
                f(r, &mut acc, (e - shift).exp());
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; columns];
    for p in partial {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    Ok((total, shift))
}

/// `ln Z` with every coupling multiplied by `beta_scale`.
pub fn brute_force_log_z(m: &IsingModel, beta_scale: f64) -> Result<f64> {
    let scaled = m.scaled(beta_scale);
    let (sum, shift) = enumerate(&scaled, 1, |_, acc, w| acc[0] += w)?;
    Ok(sum[0].ln() + shift)
}

pub fn brute_force_z(m: &IsingModel, beta_scale: f64) -> Result<f64> {
    brute_force_log_z(m, beta_scale).map(f64::exp)
}

/// Thermal averages `⟨σ_A⟩` for each spin set `A`.
pub fn expectations(m: &IsingModel, sets: &[Vec<usize>]) -> Result<Vec<f64>> {
    let set_masks: Vec<u32> = sets
        .iter()
        .map(|a| a.iter().fold(0u32, |acc, &s| acc ^ (1 << s)))
        .collect();
    if let Some(s) = sets.iter().flatten().find(|&&s| s >= m.spins) {
        return Err(Error::InvalidModel(format!("spin {s} out of range")));
    }
    let (sums, _) = enumerate(m, sets.len() + 1, |r, acc, w| {
        acc[0] += w;
        for (a, &mask) in acc[1..].iter_mut().zip(&set_masks) {
            if (r & mask).count_ones() % 2 == 0 {
                *a += w;
            } else {
                *a -= w;
            }
        }
    })?;
    Ok(sums[1..].iter().map(|s| s / sums[0]).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GksCheck {
    /// `⟨σ_A σ_B⟩`
    pub lhs: f64,
    /// `⟨σ_A⟩⟨σ_B⟩`
    pub rhs: f64,
    pub satisfied: bool,
}

/// Second Griffiths inequality `⟨σ_A σ_B⟩ ≥ ⟨σ_A⟩⟨σ_B⟩`.
pub fn gks_check(m: &IsingModel, a: &[usize], b: &[usize]) -> Result<GksCheck> {
    let mut ab: Vec<usize> = a.iter().chain(b).copied().collect();
    ab.sort_unstable();
    let mut sym = Vec::new();
    for s in ab {
        if sym.last() == Some(&s) {
            sym.pop();
        } else {
            sym.push(s);
        }
    }
    let e = expectations(m, &[sym, a.to_vec(), b.to_vec()])?;
    let (lhs, rhs) = (e[0], e[1] * e[2]);
    Ok(GksCheck {
        lhs,
        rhs,
        satisfied: lhs >= rhs - 1e-12,
    })
}
