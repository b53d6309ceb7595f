//! Firefly algorithm.
//!
//! Every firefly is drawn toward each brighter one with strength
//! `beta * exp(-gamma * r^2)` and jitters by a uniform perturbation scaled
//! by the domain width. The random-step coefficient is damped geometrically
//! per generation (`alpha_decay`), the usual practice that lets the swarm
//! settle; with the coefficient fixed the swarm never refines below the
//! jitter scale.
//!
//! Background: Yang, "Nature-inspired metaheuristic algorithms" (2008).

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{init_population, Evaluator, TrialReport};
use crate::error::{Error, Result};
use crate::objective::Direction;
use crate::rng::RngStream;
use crate::space::SearchSpace;

/// Firefly algorithm parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FaConfig {
    pub population: usize,
    /// Random-step coefficient (0.2 is the comparison setting).
    pub alpha: f64,
    /// Attraction at distance zero (1 is the comparison setting).
    pub beta: f64,
    /// Light absorption; higher values localize attraction (1 is the
    /// comparison setting).
    pub gamma: f64,
    /// Geometric damping of the random step per generation. 1 disables
    /// damping and leaves the classic fixed-jitter dynamics.
    pub alpha_decay: f64,
}

impl Default for FaConfig {
    fn default() -> Self {
        FaConfig {
            population: 50,
            alpha: 0.2,
            beta: 1.0,
            gamma: 1.0,
            alpha_decay: 0.97,
        }
    }
}

impl FaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::config("fa: population must be at least 2"));
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::config(alloc::format!(
                    "fa: {name} must be non-negative and finite"
                )));
            }
        }
        if !(self.alpha_decay > 0.0 && self.alpha_decay <= 1.0) {
            return Err(Error::config("fa: alpha_decay must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// One attraction move of `x` toward the brighter `target`:
/// `x += beta exp(-gamma r^2) (target - x) + step * eps`, where `eps` is a
/// uniform [-0.5, 0.5] draw per coordinate scaled by the domain width.
fn attract(
    x: &mut [f64],
    target: &[f64],
    beta: f64,
    gamma: f64,
    step: f64,
    space: &SearchSpace,
    rng: &mut RngStream,
) {
    let r2: f64 = x
        .iter()
        .zip(target)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let pull = beta * (-gamma * r2).exp();
    for (d, v) in x.iter_mut().enumerate() {
        let eps = rng.uniform_in(-0.5, 0.5) * space.width(d);
        *v += pull * (target[d] - *v) + step * eps;
    }
}

/// Runs the firefly algorithm and returns the best-ever candidate.
///
/// Per generation each firefly accumulates one attraction move toward
/// every brighter member of the previous generation and is re-evaluated
/// once; the brightest firefly holds still, so its value is never lost.
pub fn fa_run<F: FnMut(&[f64]) -> f64>(
    space: &SearchSpace,
    objective: F,
    direction: Direction,
    budget: u64,
    config: &FaConfig,
    seed: u64,
) -> Result<TrialReport> {
    config.validate()?;
    let n = config.population;
    if budget < n as u64 {
        return Err(Error::config(
            "fa: budget must cover at least one evaluation per firefly",
        ));
    }
    let mut rng = RngStream::new(seed);
    let mut ev = Evaluator::new(objective, direction, budget)?;
    let (mut pop, mut scores) = init_population(space, n, &mut ev, &mut rng)?;
    let mut step = config.alpha;

    'run: while ev.remaining() > 0 {
        let snapshot = pop.clone();
        let snap_scores = scores.clone();
        let mut any_move = false;
        for i in 0..n {
            let mut x = snapshot[i].clone();
            let mut moved = false;
            for j in 0..n {
                // Lower score = brighter. Equal brightness attracts nobody.
                if snap_scores[j] < snap_scores[i] {
                    attract(
                        &mut x,
                        &snapshot[j],
                        config.beta,
                        config.gamma,
                        step,
                        space,
                        &mut rng,
                    );
                    moved = true;
                }
            }
            if moved {
                space.clamp(&mut x);
                if ev.remaining() == 0 {
                    break 'run;
                }
                let s = ev.eval(&x)?;
                pop[i] = x;
                scores[i] = s;
                any_move = true;
            }
        }
        if !any_move {
            // All fireflies equally bright: the swarm is frozen and no
            // further evaluation would change anything.
            break;
        }
        step *= config.alpha_decay;
    }
    ev.into_report(seed)
}
