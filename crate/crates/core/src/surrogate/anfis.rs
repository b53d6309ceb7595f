//! Sugeno-type adaptive neuro-fuzzy inference system.
//!
//! Each input carries a set of membership functions; the rule base is
//! their full cartesian product. A rule's firing strength is the product
//! of its memberships, strengths are normalized to sum to one, and each
//! rule contributes a first-order linear consequent, so the output is
//!
//! ```text
//! O(x) = sum_k  w_k / sum_j w_j  *  (p_k . x + r_k)
//! ```
//!
//! Training is the classic hybrid rule: with the premise frozen, the
//! consequent coefficients solve a linear least-squares problem exactly;
//! the premise parameters then take a gradient step on the squared error.
//! The two passes alternate every epoch.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::linalg::ridge_least_squares;
use super::{TrainConfig, TrainHistory};

/// Membership function families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MfShape {
    /// Generalized bell `1 / (1 + |(x - c)/a|^(2b))`.
    Bell,
    /// Gaussian `exp(-((x - c)/a)^2)`.
    Gaussian,
}

impl MfShape {
    pub fn name(self) -> &'static str {
        match self {
            MfShape::Bell => "bell",
            MfShape::Gaussian => "gaussian",
        }
    }
}

impl core::str::FromStr for MfShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell" => Ok(MfShape::Bell),
            "gaussian" => Ok(MfShape::Gaussian),
            other => Err(Error::config(alloc::format!(
                "unknown membership shape '{other}' (expected bell or gaussian)"
            ))),
        }
    }
}

/// One parametric membership function. `b` is only meaningful for the
/// bell shape and is carried (but ignored) for gaussians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipFn {
    pub shape: MfShape,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl MembershipFn {
    pub fn new(shape: MfShape, a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::config("membership width a must be positive and finite"));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::config("membership slope b must be positive and finite"));
        }
        if !c.is_finite() {
            return Err(Error::config("membership center c must be finite"));
        }
        Ok(MembershipFn { shape, a, b, c })
    }

    /// Membership degree of `x`, always in (0, 1].
    pub fn mu(&self, x: f64) -> f64 {
        let t = (x - self.c) / self.a;
        match self.shape {
            MfShape::Bell => 1.0 / (1.0 + libm::pow(t.abs(), 2.0 * self.b)),
            MfShape::Gaussian => libm::exp(-t * t),
        }
    }

    /// Partial derivatives of `mu` with respect to (a, b, c).
    pub fn grad(&self, x: f64) -> (f64, f64, f64) {
        let z = x - self.c;
        let t = z / self.a;
        match self.shape {
            MfShape::Bell => {
                // With u = |t|^(2b) and mu = 1/(1 + u), d(mu)/du = -mu^2.
                let u = libm::pow(t.abs(), 2.0 * self.b);
                let m = self.mu(x);
                let m2 = m * m;
                let da = m2 * (2.0 * self.b / self.a) * u;
                // At the center u vanishes and mu sits at its flat top, so
                // every sensitivity is zero; ln|t| is also undefined there.
                let (db, dc) = if z == 0.0 {
                    (0.0, 0.0)
                } else {
                    (-m2 * 2.0 * u * libm::log(t.abs()), m2 * 2.0 * self.b * u / z)
                };
                (da, db, dc)
            }
            MfShape::Gaussian => {
                let m = self.mu(x);
                let da = m * 2.0 * t * t / self.a;
                let dc = m * 2.0 * t / self.a;
                (da, 0.0, dc)
            }
        }
    }
}

/// Single-output Sugeno system over a cartesian rule base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnfisSystem {
    /// Membership functions, indexed `[input][label]`.
    pub mfs: Vec<Vec<MembershipFn>>,
    /// Linear consequents, one per rule: `[p_1, ..., p_n, r]`.
    pub consequents: Vec<Vec<f64>>,
}

// Keeps the dense cartesian rule base from exploding in memory.
const MAX_RULES: usize = 4096;

impl AnfisSystem {
    /// Builds a grid system: `labels` membership functions per input with
    /// centers spread evenly over each input range, widths of half the
    /// center spacing, bell slope 2, and zeroed consequents.
    pub fn grid(ranges: &[(f64, f64)], labels: usize, shape: MfShape) -> Result<Self> {
        if ranges.is_empty() {
            return Err(Error::config("need at least one input"));
        }
        if labels < 2 {
            return Err(Error::config("need at least two membership functions per input"));
        }
        let mut rules = 1usize;
        for _ in ranges {
            rules = rules
                .checked_mul(labels)
                .filter(|&r| r <= MAX_RULES)
                .ok_or_else(|| {
                    Error::config(alloc::format!(
                        "rule base {labels}^{} exceeds the {MAX_RULES} rule cap",
                        ranges.len()
                    ))
                })?;
        }
        let mut mfs = Vec::with_capacity(ranges.len());
        for &(lo, hi) in ranges {
            if !(lo < hi) {
                return Err(Error::config("input range must satisfy lo < hi"));
            }
            let spacing = (hi - lo) / (labels - 1) as f64;
            let column: Result<Vec<MembershipFn>> = (0..labels)
                .map(|l| MembershipFn::new(shape, spacing / 2.0, 2.0, lo + l as f64 * spacing))
                .collect();
            mfs.push(column?);
        }
        let n = ranges.len();
        Ok(AnfisSystem {
            mfs,
            consequents: alloc::vec![alloc::vec![0.0; n + 1]; rules],
        })
    }

    pub fn n_inputs(&self) -> usize {
        self.mfs.len()
    }

    pub fn n_rules(&self) -> usize {
        self.consequents.len()
    }

    /// Label index per input for one rule; the last input varies fastest.
    fn rule_labels(&self, rule: usize) -> Vec<usize> {
        let mut labels = alloc::vec![0usize; self.n_inputs()];
        let mut rest = rule;
        for i in (0..self.n_inputs()).rev() {
            let card = self.mfs[i].len();
            labels[i] = rest % card;
            rest /= card;
        }
        labels
    }

    /// Membership degrees and raw firing strengths for one input row.
    fn fire(&self, x: &[f64]) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        if x.len() != self.n_inputs() {
            return Err(Error::evaluation(alloc::format!(
                "expected {} inputs, got {}",
                self.n_inputs(),
                x.len()
            )));
        }
        let mu: Vec<Vec<f64>> = self
            .mfs
            .iter()
            .zip(x)
            .map(|(col, &xi)| col.iter().map(|mf| mf.mu(xi)).collect())
            .collect();
        let mut w = alloc::vec![0.0f64; self.n_rules()];
        for (k, wk) in w.iter_mut().enumerate() {
            let labels = self.rule_labels(k);
            *wk = labels.iter().enumerate().map(|(i, &l)| mu[i][l]).product();
        }
        Ok((mu, w))
    }

    fn rule_output(&self, rule: usize, x: &[f64]) -> f64 {
        let coeffs = &self.consequents[rule];
        coeffs[..x.len()].iter().zip(x).map(|(p, v)| p * v).sum::<f64>() + coeffs[x.len()]
    }

    /// System output for one input row.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        let (_, w) = self.fire(x)?;
        let total: f64 = w.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::evaluation(
                "no rule fires: every membership degree underflowed to zero",
            ));
        }
        let mut out = 0.0;
        for (k, wk) in w.iter().enumerate() {
            out += wk / total * self.rule_output(k, x);
        }
        Ok(out)
    }

    /// Summed squared error `sum 0.5 (t - O)^2` over the rows.
    pub fn loss(&self, xs: &[Vec<f64>], ts: &[f64]) -> Result<f64> {
        let mut e = 0.0;
        for (x, t) in xs.iter().zip(ts) {
            let o = self.forward(x)?;
            e += 0.5 * (t - o) * (t - o);
        }
        Ok(e)
    }

    /// Least-squares pass: solves for all consequent coefficients with
    /// the premise frozen. Returns false when the system was singular and
    /// the consequents were left untouched.
    fn consequents_least_squares(&mut self, xs: &[Vec<f64>], ts: &[f64]) -> Result<bool> {
        let n = self.n_inputs();
        let cols = self.n_rules() * (n + 1);
        let mut design = Vec::with_capacity(xs.len());
        for x in xs {
            let (_, w) = self.fire(x)?;
            let total: f64 = w.iter().sum();
            if !(total > 0.0) || !total.is_finite() {
                return Err(Error::training(
                    "a training row fires no rule; widen the membership functions",
                ));
            }
            let mut row = alloc::vec![0.0f64; cols];
            for (k, wk) in w.iter().enumerate() {
                let wn = wk / total;
                for (j, xj) in x.iter().enumerate() {
                    row[k * (n + 1) + j] = wn * xj;
                }
                row[k * (n + 1) + n] = wn;
            }
            design.push(row);
        }
        // Tiny ridge scaled to the design keeps the normal equations
        // positive definite when rules overlap or data are scarce.
        let frob: f64 = design.iter().flatten().map(|v| v * v).sum();
        let ridge = 1e-10 * frob / cols as f64;
        match ridge_least_squares(&design, ts, ridge) {
            Some(theta) => {
                for (k, rule) in self.consequents.iter_mut().enumerate() {
                    rule.copy_from_slice(&theta[k * (n + 1)..(k + 1) * (n + 1)]);
                }
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// Full-batch gradient of the loss with respect to the consequents,
    /// same shape as `consequents`. Used only when least squares fails.
    fn consequent_gradient(&self, xs: &[Vec<f64>], ts: &[f64]) -> Result<Vec<Vec<f64>>> {
        let n = self.n_inputs();
        let mut grad = alloc::vec![alloc::vec![0.0f64; n + 1]; self.n_rules()];
        for (x, t) in xs.iter().zip(ts) {
            let (_, w) = self.fire(x)?;
            let total: f64 = w.iter().sum();
            if !(total > 0.0) {
                return Err(Error::training("a training row fires no rule"));
            }
            let o: f64 = w
                .iter()
                .enumerate()
                .map(|(k, wk)| wk / total * self.rule_output(k, x))
                .sum();
            let de = o - t;
            for (k, wk) in w.iter().enumerate() {
                let wn = wk / total;
                for (j, xj) in x.iter().enumerate() {
                    grad[k][j] += de * wn * xj;
                }
                grad[k][n] += de * wn;
            }
        }
        Ok(grad)
    }

    /// Full-batch gradient of the loss with respect to every membership
    /// parameter, as `[input][label] -> (da, db, dc)`.
    pub fn premise_gradient(&self, xs: &[Vec<f64>], ts: &[f64]) -> Result<Vec<Vec<(f64, f64, f64)>>> {
        let mut grad: Vec<Vec<(f64, f64, f64)>> = self
            .mfs
            .iter()
            .map(|col| alloc::vec![(0.0, 0.0, 0.0); col.len()])
            .collect();
        for (x, t) in xs.iter().zip(ts) {
            let (mu, w) = self.fire(x)?;
            let total: f64 = w.iter().sum();
            if !(total > 0.0) {
                return Err(Error::training("a training row fires no rule"));
            }
            let outputs: Vec<f64> = (0..self.n_rules()).map(|k| self.rule_output(k, x)).collect();
            let o: f64 = w
                .iter()
                .zip(&outputs)
                .map(|(wk, fk)| wk / total * fk)
                .sum();
            let de = o - t;
            for (k, wk) in w.iter().enumerate() {
                // dO/dw_k = (f_k - O) / total for the normalized sum.
                let dw = de * (outputs[k] - o) / total;
                if dw == 0.0 {
                    continue;
                }
                for (i, &l) in self.rule_labels(k).iter().enumerate() {
                    // w_k / mu is the product of the other inputs'
                    // memberships; memberships are strictly positive.
                    let partial = wk / mu[i][l].max(1e-300);
                    let (da, db, dc) = self.mfs[i][l].grad(x[i]);
                    let g = &mut grad[i][l];
                    g.0 += dw * partial * da;
                    g.1 += dw * partial * db;
                    g.2 += dw * partial * dc;
                }
            }
        }
        Ok(grad)
    }

    /// Hybrid training: exact least squares on the consequents, then one
    /// gradient step on the premise, repeated each epoch. Epochs whose
    /// least-squares pass fails fall back to gradient updates on the
    /// consequents and are recorded in the history.
    pub fn train_hybrid(&mut self, xs: &[Vec<f64>], ts: &[f64], cfg: &TrainConfig) -> Result<TrainHistory> {
        cfg.validate()?;
        if xs.is_empty() || xs.len() != ts.len() {
            return Err(Error::training("training rows and targets must match and be non-empty"));
        }
        if xs.iter().any(|r| r.len() != self.n_inputs()) {
            return Err(Error::training("row widths do not match the system inputs"));
        }
        let mut history = TrainHistory::default();
        if let Some(w) = cfg.habit_warning() {
            history.warnings.push(w);
        }
        for epoch in 0..cfg.epochs {
            if !self.consequents_least_squares(xs, ts)? {
                history.fallback_epochs.push(epoch);
                let grad = self.consequent_gradient(xs, ts)?;
                for (rule, g) in self.consequents.iter_mut().zip(&grad) {
                    for (c, gc) in rule.iter_mut().zip(g) {
                        *c -= cfg.learning_rate * gc;
                    }
                }
            }
            let grad = self.premise_gradient(xs, ts)?;
            for (col, gcol) in self.mfs.iter_mut().zip(&grad) {
                for (mf, &(da, db, dc)) in col.iter_mut().zip(gcol) {
                    mf.a = (mf.a - cfg.learning_rate * da).max(1e-9);
                    if mf.shape == MfShape::Bell {
                        mf.b = (mf.b - cfg.learning_rate * db).max(1e-3);
                    }
                    mf.c -= cfg.learning_rate * dc;
                }
            }
            let loss = self.loss(xs, ts)?;
            if !loss.is_finite() {
                return Err(Error::training(alloc::format!(
                    "loss diverged at epoch {epoch}; lower the learning rate or rescale the data"
                )));
            }
            history.losses.push(loss);
            if cfg.should_stop(&history.losses) {
                break;
            }
        }
        Ok(history)
    }
}
