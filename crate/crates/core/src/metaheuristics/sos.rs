//! Symbiotic organism search.
//!
//! Parameter-free beyond the ecosystem size. Every organism passes through
//! three interaction phases per cycle: mutualism (pair moves toward the
//! best, guided by a mutual vector and benefit factors), commensalism
//! (move along the difference between the best and a random partner), and
//! parasitism (a mutated clone tries to displace a random victim). The
//! mutualism and commensalism weights are one uniform draw per move, so
//! every step stays on the line toward its target. All acceptances are
//! greedy, so the incumbent best is never lost.
//!
//! Background: Cheng & Prayogo, "Symbiotic organisms search" (2014).

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::{argmin, init_population, random_mask, Evaluator, TrialReport};
use crate::error::{Error, Result};
use crate::objective::Direction;
use crate::rng::RngStream;
use crate::space::SearchSpace;

/// Symbiotic organism search parameters: only the ecosystem size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SosConfig {
    pub population: usize,
}

impl Default for SosConfig {
    fn default() -> Self {
        SosConfig { population: 50 }
    }
}

impl SosConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 3 {
            return Err(Error::config("sos: population must be at least 3"));
        }
        Ok(())
    }
}

/// Deterministic mutualism core. `bf1`/`bf2` are the benefit factors (1 or
/// 2), `r1`/`r2` the uniform weights of the two update equations:
/// `xi' = xi + r1 (best - mv * bf1)` with `mv = (xi + xj) / 2`, same for j.
pub fn mutualism_kernel(
    xi: &[f64],
    xj: &[f64],
    best: &[f64],
    r1: &[f64],
    r2: &[f64],
    bf1: f64,
    bf2: f64,
) -> (Vec<f64>, Vec<f64>) {
    let dims = xi.len();
    let mut ci = Vec::with_capacity(dims);
    let mut cj = Vec::with_capacity(dims);
    for d in 0..dims {
        let mv = (xi[d] + xj[d]) / 2.0;
        ci.push(xi[d] + r1[d] * (best[d] - mv * bf1));
        cj.push(xj[d] + r2[d] * (best[d] - mv * bf2));
    }
    (ci, cj)
}

/// Mutualism phase: both organisms move toward the best, guided by their
/// mutual vector and independently drawn benefit factors. One uniform
/// weight per organism keeps each move on the line toward its target, so
/// collapsing populations can still slide along curved valleys. Results
/// are clamped to the space.
pub fn sos_mutualism(
    rng: &mut RngStream,
    space: &SearchSpace,
    xi: &[f64],
    xj: &[f64],
    best: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let dims = xi.len();
    let bf1 = 1.0 + rng.index(2) as f64;
    let bf2 = 1.0 + rng.index(2) as f64;
    let r1 = alloc::vec![rng.uniform01(); dims];
    let r2 = alloc::vec![rng.uniform01(); dims];
    let (mut ci, mut cj) = mutualism_kernel(xi, xj, best, &r1, &r2, bf1, bf2);
    space.clamp(&mut ci);
    space.clamp(&mut cj);
    (ci, cj)
}

/// Deterministic commensalism core: `xi' = xi + r (best - xj)` with
/// `r` in [-1, 1] per coordinate.
pub fn commensalism_kernel(xi: &[f64], xj: &[f64], best: &[f64], r: &[f64]) -> Vec<f64> {
    xi.iter()
        .enumerate()
        .map(|(d, &v)| v + r[d] * (best[d] - xj[d]))
        .collect()
}

/// Commensalism phase: the organism rides the gap between the best and a
/// random partner, scaled by one uniform weight in [-1, 1]. Clamped to
/// the space.
pub fn sos_commensalism(
    rng: &mut RngStream,
    space: &SearchSpace,
    xi: &[f64],
    xj: &[f64],
    best: &[f64],
) -> Vec<f64> {
    let r = alloc::vec![rng.uniform_sym(); xi.len()];
    let mut c = commensalism_kernel(xi, xj, best, &r);
    space.clamp(&mut c);
    c
}

/// Parasitism phase: clone the organism, then resample a random non-empty
/// subset of its coordinates uniformly within bounds.
pub fn sos_parasitism(rng: &mut RngStream, space: &SearchSpace, xi: &[f64]) -> Vec<f64> {
    let dims = xi.len();
    let mask = random_mask(rng, dims, 0.5);
    let draws = rng.uniform_vec(dims);
    super::ga::mutate_kernel(xi, &mask, &draws, space)
}

/// Runs symbiotic organism search and returns the best-ever candidate.
///
/// A full cycle spends four evaluations per organism (two in mutualism,
/// one each in commensalism and parasitism); the budget must be at least
/// three times the population so at least a meaningful fraction of the
/// first cycle can run after initialization.
pub fn sos_run<F: FnMut(&[f64]) -> f64>(
    space: &SearchSpace,
    objective: F,
    direction: Direction,
    budget: u64,
    config: &SosConfig,
    seed: u64,
) -> Result<TrialReport> {
    config.validate()?;
    let n = config.population;
    if budget < 3 * n as u64 {
        return Err(Error::config(
            "sos: budget must be at least three times the population",
        ));
    }
    let mut rng = RngStream::new(seed);
    let mut ev = Evaluator::new(objective, direction, budget)?;
    let (mut pop, mut scores) = init_population(space, n, &mut ev, &mut rng)?;
    let mut best = argmin(&scores);

    let other_than = |rng: &mut RngStream, i: usize| loop {
        let k = rng.index(n);
        if k != i {
            break k;
        }
    };

    'run: while ev.remaining() > 0 {
        for i in 0..n {
            // Mutualism.
            if ev.remaining() < 2 {
                break 'run;
            }
            let j = other_than(&mut rng, i);
            let best_pos = pop[best].clone();
            let (ci, cj) = sos_mutualism(&mut rng, space, &pop[i], &pop[j], &best_pos);
            let si = ev.eval(&ci)?;
            if si < scores[i] {
                pop[i] = ci;
                scores[i] = si;
                if si < scores[best] {
                    best = i;
                }
            }
            let sj = ev.eval(&cj)?;
            if sj < scores[j] {
                pop[j] = cj;
                scores[j] = sj;
                if sj < scores[best] {
                    best = j;
                }
            }

            // Commensalism.
            if ev.remaining() == 0 {
                break 'run;
            }
            let j = other_than(&mut rng, i);
            let best_pos = pop[best].clone();
            let c = sos_commensalism(&mut rng, space, &pop[i], &pop[j], &best_pos);
            let s = ev.eval(&c)?;
            if s < scores[i] {
                pop[i] = c;
                scores[i] = s;
                if s < scores[best] {
                    best = i;
                }
            }

            // Parasitism: the parasite attacks a random other organism and
            // replaces it only if strictly better.
            if ev.remaining() == 0 {
                break 'run;
            }
            let parasite = sos_parasitism(&mut rng, space, &pop[i]);
            let victim = other_than(&mut rng, i);
            let s = ev.eval(&parasite)?;
            if s < scores[victim] {
                pop[victim] = parasite;
                scores[victim] = s;
                if s < scores[best] {
                    best = victim;
                }
            }
        }
    }
    ev.into_report(seed)
}
