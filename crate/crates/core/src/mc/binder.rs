use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::ObservableRecord;
use crate::error::{Error, Result};

const BOOTSTRAP_SAMPLES: usize = 1000;
const BOOTSTRAP_SEED: u64 = 0x00b1_4de7;

/// Where the Binder cumulant of the larger system overtakes that of the
/// smaller one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub beta: Option<f64>,
    /// Standard deviation of the crossing over bootstrap resamples.
    pub uncertainty: Option<f64>,
    /// Both curves coincide on the whole overlap.
    pub degenerate: bool,
    pub bootstrap_found: usize,
    pub bootstrap_samples: usize,
}

fn interpolate(records: &[ObservableRecord], values: &[f64], beta: f64) -> f64 {
    let i = records.partition_point(|r| r.beta < beta);
    if i < records.len() && records[i].beta == beta {
        return values[i];
    }
    let (a, b) = (&records[i - 1], &records[i]);
    let t = (beta - a.beta) / (b.beta - a.beta);
    values[i - 1] + t * (values[i] - values[i - 1])
}

/// Sign change of `d` from negative to non-negative with the largest jump.
fn crossing_on(grid: &[f64], d: &[f64]) -> Option<f64> {
    (0..grid.len().saturating_sub(1))
        .filter(|&i| d[i] < 0.0 && d[i + 1] >= 0.0)
        .max_by(|&i, &j| (d[i + 1] - d[i]).total_cmp(&(d[j + 1] - d[j])))
        .map(|i| grid[i] + (grid[i + 1] - grid[i]) * (-d[i]) / (d[i + 1] - d[i]))
}

pub fn binder_crossing(small: &[ObservableRecord], large: &[ObservableRecord]) -> Result<Crossing> {
    let sorted = |rs: &[ObservableRecord]| {
        let mut v = rs.to_vec();
        v.sort_by(|a, b| a.beta.total_cmp(&b.beta));
        v
    };
    let (small, large) = (sorted(small), sorted(large));
    let (Some(s0), Some(l0)) = (small.first(), large.first()) else {
        return Err(Error::NoOverlap);
    };
    let lo = s0.beta.max(l0.beta);
    let hi = small.last().unwrap().beta.min(large.last().unwrap().beta);
    if lo > hi {
        return Err(Error::NoOverlap);
    }
    let mut grid: Vec<f64> = small
        .iter()
        .chain(&large)
        .map(|r| r.beta)
        .filter(|b| (lo..=hi).contains(b))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let diff = |us: &[f64], ul: &[f64]| -> Vec<f64> {
        grid.iter()
            .map(|&b| interpolate(&large, ul, b) - interpolate(&small, us, b))
            .collect()
    };
    let us: Vec<f64> = small.iter().map(|r| r.binder).collect();
    let ul: Vec<f64> = large.iter().map(|r| r.binder).collect();
    let d = diff(&us, &ul);
    if d.iter().all(|x| x.abs() <= f64::EPSILON) {
        return Ok(Crossing {
            beta: Some(0.5 * (lo + hi)),
            uncertainty: None,
            degenerate: true,
            bootstrap_found: 0,
            bootstrap_samples: 0,
        });
    }
    let Some(beta) = crossing_on(&grid, &d) else {
        return Ok(Crossing {
            beta: None,
            uncertainty: None,
            degenerate: false,
            bootstrap_found: 0,
            bootstrap_samples: 0,
        });
    };

    // Parametric bootstrap: redraw every cumulant from its error bar.
    let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
    let draw = |rs: &[ObservableRecord], rng: &mut ChaCha8Rng| -> Vec<f64> {
        rs.iter()
            .map(|r| match Normal::new(r.binder, r.err_binder) {
                Ok(n) if r.err_binder > 0.0 => n.sample(rng),
                _ => r.binder,
            })
            .collect()
    };
    let found: Vec<f64> = (0..BOOTSTRAP_SAMPLES)
        .filter_map(|_| {
            let us = draw(&small, &mut rng);
            let ul = draw(&large, &mut rng);
            crossing_on(&grid, &diff(&us, &ul))
        })
        .collect();
    let uncertainty = (found.len() > 1).then(|| {
        let mean = found.iter().sum::<f64>() / found.len() as f64;
        (found.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (found.len() - 1) as f64).sqrt()
    });
    Ok(Crossing {
        beta: Some(beta),
        uncertainty,
        degenerate: false,
        bootstrap_found: found.len(),
        bootstrap_samples: BOOTSTRAP_SAMPLES,
    })
}
