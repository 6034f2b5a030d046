//! Markov chain Monte Carlo for generalized Ising models.
//!
//! Configurations are sampled from `exp(Σ_B K_B σ_B)`. Metropolis works for
//! any supports; Wolff clusters need every support to have two spins.

mod binder;
mod rng;
mod schedule;

use rand::Rng;

pub use binder::{binder_crossing, Crossing};
pub use rng::{splitmix64, stream_rng, stream_seed};
pub use schedule::{
    read_csv, run_schedule, write_csv, Algorithm, ObservableRecord, Schedule, ScheduleResult,
};

use crate::error::{Error, Result};
use crate::ising::IsingModel;

/// Spin values with the sign `σ_B` of every interaction cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinConfig {
    pub values: Vec<i8>,
    parities: Vec<i8>,
    magnetization: i64,
}

impl SpinConfig {
    pub fn all_up(m: &IsingModel) -> Self {
        Self::from_values(m, vec![1; m.spins])
    }

    pub fn random<R: Rng>(m: &IsingModel, rng: &mut R) -> Self {
        let values = (0..m.spins).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        Self::from_values(m, values)
    }

    pub fn from_values(m: &IsingModel, values: Vec<i8>) -> Self {
        assert_eq!(values.len(), m.spins);
        let parities = parities(m, &values);
        let magnetization = values.iter().map(|&v| v as i64).sum();
        SpinConfig {
            values,
            parities,
            magnetization,
        }
    }

    /// `σ_B` for interaction `b`.
    pub fn parity(&self, b: usize) -> i8 {
        self.parities[b]
    }

    pub fn magnetization(&self) -> i64 {
        self.magnetization
    }

    /// Index of the state with bit `i` set when spin `i` is down.
    pub fn state_index(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v < 0)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Whether the cached parities agree with a fresh computation.
    pub fn cache_is_consistent(&self, m: &IsingModel) -> bool {
        self.parities == parities(m, &self.values)
            && self.magnetization == self.values.iter().map(|&v| v as i64).sum::<i64>()
    }

    /// `Σ_B w_B σ_B` for the given per-interaction weights.
    pub fn weighted_sum(&self, weights: &[f64]) -> f64 {
        self.parities
            .iter()
            .zip(weights)
            .map(|(&p, &w)| p as f64 * w)
            .sum()
    }
}

fn parities(m: &IsingModel, values: &[i8]) -> Vec<i8> {
    m.interactions
        .iter()
        .map(|i| i.support.iter().map(|&s| values[s]).product())
        .collect()
}

/// Precomputed incidence of a model at fixed couplings.
#[derive(Clone, Debug)]
pub struct Sampler {
    spins: usize,
    k: Vec<f64>,
    terms_of: Vec<Vec<u32>>,
    /// `(neighbour, bond probability)` lists, present for 2-body models.
    bonds: Option<Vec<Vec<(u32, f64)>>>,
    /// First interaction without exactly two spins, and its size.
    not_two_body: Option<(usize, usize)>,
}

impl Sampler {
    /// Sampler for `exp(Σ_B beta · k_B σ_B)`.
    pub fn new(m: &IsingModel, beta: f64) -> Self {
        let k: Vec<f64> = m.interactions.iter().map(|i| beta * i.k).collect();
        let mut terms_of = vec![Vec::new(); m.spins];
        for (b, i) in m.interactions.iter().enumerate() {
            for &s in &i.support {
                terms_of[s].push(b as u32);
            }
        }
        let bonds = m.is_two_body().then(|| {
            let mut adj = vec![Vec::new(); m.spins];
            for (i, &kb) in m.interactions.iter().zip(&k) {
                let p = -(-2.0 * kb).exp_m1();
                let (a, b) = (i.support[0], i.support[1]);
                adj[a].push((b as u32, p));
                adj[b].push((a as u32, p));
            }
            adj
        });
        Sampler {
            spins: m.spins,
            k,
            terms_of,
            bonds,
            not_two_body: two_body_check(m).err().map(|e| match e {
                Error::NotTwoBody { index, size } => (index, size),
                _ => unreachable!(),
            }),
        }
    }

    fn flip(&self, s: &mut SpinConfig, j: usize) {
        s.values[j] = -s.values[j];
        s.magnetization += 2 * s.values[j] as i64;
        for &b in &self.terms_of[j] {
            s.parities[b as usize] = -s.parities[b as usize];
        }
    }

    /// Exponent change `−2 Σ_{B∋j} K_B σ_B` from flipping spin `j`.
    pub fn flip_delta(&self, s: &SpinConfig, j: usize) -> f64 {
        -2.0 * self.terms_of[j]
            .iter()
            .map(|&b| self.k[b as usize] * s.parities[b as usize] as f64)
            .sum::<f64>()
    }

    /// `|Λ|` Metropolis attempts at uniformly drawn sites. Returns the number
    /// of accepted flips. Visiting sites in a fixed order instead can trap
    /// the chain: on a 4-cycle the fixed-order sweep splits the states into
    /// two closed classes.
    pub fn metropolis_sweep<R: Rng>(&self, s: &mut SpinConfig, rng: &mut R) -> usize {
        let mut accepted = 0;
        for _ in 0..self.spins {
            let j = rng.gen_range(0..self.spins);
            let delta = self.flip_delta(s, j);
            if delta >= 0.0 || rng.gen::<f64>() < delta.exp() {
                self.flip(s, j);
                accepted += 1;
            }
        }
        accepted
    }

    /// Grows and flips one Wolff cluster. Returns its size.
    pub fn wolff_update<R: Rng>(
        &self,
        s: &mut SpinConfig,
        rng: &mut R,
        stack: &mut Vec<u32>,
        mark: &mut [bool],
    ) -> Result<usize> {
        let Some(bonds) = self.bonds.as_ref() else {
            let (index, size) = self.not_two_body.unwrap_or_default();
            return Err(Error::NotTwoBody { index, size });
        };
        if self.spins == 0 {
            return Ok(0);
        }
        let seed = rng.gen_range(0..self.spins);
        let sign = s.values[seed];
        stack.clear();
        stack.push(seed as u32);
        mark[seed] = true;
        let mut cluster = Vec::new();
        while let Some(v) = stack.pop() {
            cluster.push(v);
            for &(w, p) in &bonds[v as usize] {
                let w = w as usize;
                if !mark[w] && s.values[w] == sign && rng.gen::<f64>() < p {
                    mark[w] = true;
                    stack.push(w as u32);
                }
            }
        }
        for &v in &cluster {
            mark[v as usize] = false;
            self.flip(s, v as usize);
        }
        Ok(cluster.len())
    }

    /// Wolff clusters until at least one flip per spin has been made.
    /// Returns `(clusters, flipped)`. The stopping rule depends on the
    /// cluster sizes, so states reached this way are biased towards large
    /// final clusters; use it for equilibration only.
    pub fn wolff_sweep<R: Rng>(&self, s: &mut SpinConfig, rng: &mut R) -> Result<(usize, usize)> {
        let mut stack = Vec::new();
        let mut mark = vec![false; self.spins];
        let mut flipped = 0;
        let mut clusters = 0;
        while flipped < self.spins.max(1) {
            flipped += self.wolff_update(s, rng, &mut stack, &mut mark)?;
            clusters += 1;
        }
        Ok((clusters, flipped))
    }

    /// A fixed number of Wolff cluster flips.
    pub fn wolff_clusters<R: Rng>(&self, s: &mut SpinConfig, rng: &mut R, count: usize) -> Result<usize> {
        let mut stack = Vec::new();
        let mut mark = vec![false; self.spins];
        let mut flipped = 0;
        for _ in 0..count {
            flipped += self.wolff_update(s, rng, &mut stack, &mut mark)?;
        }
        Ok(flipped)
    }
}

fn two_body_check(m: &IsingModel) -> Result<()> {
    match m.interactions.iter().position(|i| i.support.len() != 2) {
        Some(index) => Err(Error::NotTwoBody {
            index,
            size: m.interactions[index].support.len(),
        }),
        None => Ok(()),
    }
}

/// One Metropolis sweep of `m`, whose couplings already include `β`.
pub fn metropolis_sweep<R: Rng>(m: &IsingModel, s: &mut SpinConfig, rng: &mut R) {
    Sampler::new(m, 1.0).metropolis_sweep(s, rng);
    debug_assert!(s.cache_is_consistent(m));
}

/// One Wolff cluster flip of the 2-body model `m`. Returns the cluster size.
pub fn wolff_update<R: Rng>(m: &IsingModel, s: &mut SpinConfig, rng: &mut R) -> Result<usize> {
    two_body_check(m)?;
    let sampler = Sampler::new(m, 1.0);
    let mut mark = vec![false; m.spins];
    let size = sampler.wolff_update(s, rng, &mut Vec::new(), &mut mark)?;
    debug_assert!(s.cache_is_consistent(m));
    Ok(size)
}
