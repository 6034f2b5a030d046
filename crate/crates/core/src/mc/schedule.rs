use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rng::stream_rng, two_body_check, Sampler, SpinConfig};
use crate::error::{Error, Result};
use crate::ising::IsingModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Metropolis,
    Wolff,
}

/// Inverse temperatures and run lengths. One sweep is `|Λ|` Metropolis
/// attempts, or enough Wolff clusters to flip about `|Λ|` spins. Measured
/// Wolff sweeps use a fixed cluster count set from the burn-in mean cluster
/// size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub betas: Vec<f64>,
    pub sweeps: usize,
    pub burn_in: usize,
    pub stride: usize,
    pub replicas: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub blocks: usize,
}

impl Schedule {
    pub const MIN_BLOCKS: usize = 16;

    /// `points` evenly spaced values from `lo` to `hi` inclusive.
    pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
        match points {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..points)
                .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
                .collect(),
        }
    }

    /// β from 0.2 to 1.2 in 26 points, 10⁴ burn-in and 10⁵ measured Wolff
    /// sweeps.
    pub fn carpet_default(seed: u64) -> Self {
        Schedule {
            betas: Self::linspace(0.2, 1.2, 26),
            sweeps: 100_000,
            burn_in: 10_000,
            stride: 1,
            replicas: 1,
            seed,
            algorithm: Algorithm::Wolff,
            blocks: 32,
        }
    }

    pub fn measurements(&self) -> usize {
        self.sweeps / self.stride.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSchedule(msg));
        if self.betas.is_empty() {
            return bad("empty beta grid".into());
        }
        if let Some(b) = self.betas.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
            return bad(format!("beta {b} is not a finite non-negative number"));
        }
        if self.betas.windows(2).any(|w| w[1] <= w[0]) {
            return bad("beta grid must be strictly ascending".into());
        }
        if self.sweeps == 0 || self.burn_in == 0 || self.stride == 0 || self.replicas == 0 {
            return bad("sweeps, burn-in, stride and replicas must be positive".into());
        }
        if self.blocks < Self::MIN_BLOCKS {
            return bad(format!("at least {} blocks required", Self::MIN_BLOCKS));
        }
        if self.measurements() < self.blocks {
            return bad(format!(
                "{} measurements cannot fill {} blocks",
                self.measurements(),
                self.blocks
            ));
        }
        Ok(())
    }
}

/// Averages at one inverse temperature. Field order is the CSV column order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub beta: f64,
    pub abs_m: f64,
    pub m2: f64,
    pub m4: f64,
    /// Energy per spin, `−Σ_B J_B σ_B / |Λ|`.
    pub energy: f64,
    pub susceptibility: f64,
    pub binder: f64,
    pub err_abs_m: f64,
    pub err_binder: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleResult {
    /// `replicas[r][i]` is replica `r` at `betas[i]`.
    pub replicas: Vec<Vec<ObservableRecord>>,
    /// All replicas' blocks pooled per β.
    pub aggregated: Vec<ObservableRecord>,
}

/// Block means of `(|m|, m², m⁴, e)`.
type Block = [f64; 4];

fn binder(m2: f64, m4: f64) -> f64 {
    if m2 > 0.0 {
        1.0 - m4 / (3.0 * m2 * m2)
    } else {
        0.0
    }
}

fn record(beta: f64, spins: usize, blocks: &[Block]) -> ObservableRecord {
    let nb = blocks.len() as f64;
    let mut mean = [0.0; 4];
    for b in blocks {
        for (m, v) in mean.iter_mut().zip(b) {
            *m += v / nb;
        }
    }
    let var_abs = blocks.iter().map(|b| (b[0] - mean[0]).powi(2)).sum::<f64>() / (nb - 1.0);
    // Jackknife over blocks for the cumulant.
    let u = binder(mean[1], mean[2]);
    let jk: f64 = blocks
        .iter()
        .map(|b| {
            let m2 = (mean[1] * nb - b[1]) / (nb - 1.0);
            let m4 = (mean[2] * nb - b[2]) / (nb - 1.0);
            (binder(m2, m4) - u).powi(2)
        })
        .sum();
    ObservableRecord {
        beta,
        abs_m: mean[0],
        m2: mean[1],
        m4: mean[2],
        energy: mean[3],
        susceptibility: beta * spins as f64 * (mean[1] - mean[0] * mean[0]),
        binder: u,
        err_abs_m: (var_abs / nb).sqrt(),
        err_binder: (jk * (nb - 1.0) / nb).sqrt(),
    }
}

fn run_point(
    m: &IsingModel,
    sch: &Schedule,
    replica: usize,
    index: usize,
) -> Result<Vec<Block>> {
    let beta = sch.betas[index];
    let sampler = Sampler::new(m, beta);
    let couplings: Vec<f64> = m.interactions.iter().map(|i| i.k).collect();
    let mut rng = stream_rng(sch.seed, replica as u64, index as u64);
    let mut s = SpinConfig::random(m, &mut rng);
    let (mut clusters, mut flipped) = (0usize, 0usize);
    for _ in 0..sch.burn_in {
        match sch.algorithm {
            Algorithm::Metropolis => {
                sampler.metropolis_sweep(&mut s, &mut rng);
            }
            Algorithm::Wolff => {
                let (c, f) = sampler.wolff_sweep(&mut s, &mut rng)?;
                clusters += c;
                flipped += f;
            }
        }
    }
    debug_assert!(s.cache_is_consistent(m));
    let per_sweep = if flipped == 0 {
        1
    } else {
        ((m.spins as f64 * clusters as f64 / flipped as f64).round() as usize).max(1)
    };
    let sweep = |s: &mut SpinConfig, rng: &mut _| -> Result<()> {
        match sch.algorithm {
            Algorithm::Metropolis => {
                sampler.metropolis_sweep(s, rng);
            }
            Algorithm::Wolff => {
                sampler.wolff_clusters(s, rng, per_sweep)?;
            }
        }
        Ok(())
    };

    let n = m.spins.max(1) as f64;
    let per_block = sch.measurements() / sch.blocks;
    let mut blocks = vec![[0.0; 4]; sch.blocks];
    let mut taken = 0;
    for t in 0..sch.sweeps {
        sweep(&mut s, &mut rng)?;
        if (t + 1) % sch.stride != 0 {
            continue;
        }
        let b = taken / per_block;
        taken += 1;
        if b >= sch.blocks {
            continue;
        }
        let mag = s.magnetization() as f64 / n;
        let m2 = mag * mag;
        let e = -s.weighted_sum(&couplings) / n;
        let blk = &mut blocks[b];
        blk[0] += mag.abs();
        blk[1] += m2;
        blk[2] += m2 * m2;
        blk[3] += e;
    }
    debug_assert!(s.cache_is_consistent(m));
    for blk in &mut blocks {
        for v in blk.iter_mut() {
            *v /= per_block as f64;
        }
    }
    Ok(blocks)
}

/// Runs every (replica, β) pair as an independent stream. The output is
/// determined by the model and schedule alone.
pub fn run_schedule(m: &IsingModel, sch: &Schedule) -> Result<ScheduleResult> {
    sch.validate()?;
    if sch.algorithm == Algorithm::Wolff {
        two_body_check(m)?;
    }
    let points = sch.betas.len();
    let tasks: Vec<(usize, usize)> = (0..sch.replicas)
        .flat_map(|r| (0..points).map(move |i| (r, i)))
        .collect();
    let blocks: Vec<Vec<Block>> = tasks
        .par_iter()
        .map(|&(r, i)| run_point(m, sch, r, i))
        .collect::<Result<_>>()?;

    let replicas = (0..sch.replicas)
        .map(|r| {
            (0..points)
                .map(|i| record(sch.betas[i], m.spins, &blocks[r * points + i]))
                .collect()
        })
        .collect();
    let aggregated = (0..points)
        .map(|i| {
            let pooled: Vec<Block> = (0..sch.replicas)
                .flat_map(|r| blocks[r * points + i].iter().copied())
                .collect();
            record(sch.betas[i], m.spins, &pooled)
        })
        .collect();
    Ok(ScheduleResult {
        replicas,
        aggregated,
    })
}

pub fn write_csv(path: &Path, records: &[ObservableRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<ObservableRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error)?;
    r.deserialize()
        .map(|rec| rec.map_err(csv_error))
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}
