//! Reference test functions with known minima.
//!
//! All six functions are implemented exactly as their defining expressions
//! state them, including the Schaffer N4 variant whose inner term is
//! `sin|x^2 + y^2|`; that form depends only on the radius, so its global
//! minimizers form a circle rather than isolated points.

#![allow(clippy::excessive_precision)]

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::space::SearchSpace;

/// Conventional exponent for the happy cat function; the function's usual
/// statement leaves alpha free, and the registry binds this default.
pub const HAPPY_CAT_ALPHA: f64 = 0.125;

/// Schaffer N1: `0.5 + (sin^2((x^2+y^2)^2) - 0.5) / (1 + 0.001(x^2+y^2))^2`.
pub fn schaffer_n1(x: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), 2);
    let s = x[0] * x[0] + x[1] * x[1];
    let num = (s * s).sin().powi(2) - 0.5;
    let den = (1.0 + 0.001 * s).powi(2);
    0.5 + num / den
}

/// Holder table: `-|sin(x) cos(y) exp(|1 - sqrt(x^2+y^2)/pi|)|`.
pub fn holder_table(x: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), 2);
    let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
    -(x[0].sin() * x[1].cos() * (1.0 - r / core::f64::consts::PI).abs().exp()).abs()
}

/// Cross-in-tray: `-0.0001 (|sin(x) sin(y) exp(|100 - sqrt(x^2+y^2)/pi|)| + 1)^0.1`.
pub fn cross_in_tray(x: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), 2);
    let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
    let inner = (x[0].sin() * x[1].sin() * (100.0 - r / core::f64::consts::PI).abs().exp()).abs();
    -0.0001 * (inner + 1.0).powf(0.1)
}

/// Happy cat: `((|x|^2 - n)^2)^alpha + (1/n)(|x|^2 / 2 + sum(x)) + 1/2`.
/// Defined for any dimension; `alpha` controls how sharp the spherical
/// valley `|x|^2 = n` is.
pub fn happy_cat(x: &[f64], alpha: f64) -> f64 {
    let n = x.len() as f64;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let sum: f64 = x.iter().sum();
    ((r2 - n) * (r2 - n)).powf(alpha) + (0.5 * r2 + sum) / n + 0.5
}

/// Schaffer N4 as implemented here:
/// `0.5 + (cos^2(sin|x^2+y^2|) - 0.5) / (1 + 0.001(x^2+y^2))^2`.
pub fn schaffer_n4(x: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), 2);
    let s = x[0] * x[0] + x[1] * x[1];
    let num = s.abs().sin().cos().powi(2) - 0.5;
    let den = (1.0 + 0.001 * s).powi(2);
    0.5 + num / den
}

/// Sphere: `sum(x_i^2)`, any dimension.
pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// How positions are canonicalized before averaging across trials, so that
/// sign-symmetric minimizers do not cancel to zero in the mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionFold {
    /// The function is even in every coordinate: fold into the first orthant.
    AbsCoords,
    /// No symmetry to exploit.
    Identity,
}

impl PositionFold {
    pub fn apply(&self, position: &[f64]) -> Vec<f64> {
        match self {
            PositionFold::AbsCoords => position.iter().map(|v| v.abs()).collect(),
            PositionFold::Identity => position.to_vec(),
        }
    }
}

/// A registered benchmark: the function, its domain, and reference data.
#[derive(Debug, Clone)]
pub struct Benchmark {
    pub name: &'static str,
    pub space: SearchSpace,
    pub known_min_value: f64,
    /// Known minimizers with sign symmetry expanded. For the radially
    /// symmetric Schaffer N4 variant these are representatives of the
    /// minimizing circle, not the only minimizers.
    pub known_min_positions: Vec<Vec<f64>>,
    pub differentiable: bool,
    pub separable: bool,
    pub unimodal: bool,
    pub fold: PositionFold,
    f: fn(&[f64]) -> f64,
}

impl Benchmark {
    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    pub fn dims(&self) -> usize {
        self.space.dims()
    }

    pub fn function(&self) -> fn(&[f64]) -> f64 {
        self.f
    }
}

fn sign_expand(point: &[f64]) -> Vec<Vec<f64>> {
    let mut out = alloc::vec![Vec::new()];
    for &c in point {
        let mut next = Vec::with_capacity(out.len() * 2);
        for prefix in &out {
            let mut a = prefix.clone();
            a.push(c);
            next.push(a);
            if c != 0.0 {
                let mut b = prefix.clone();
                b.push(-c);
                next.push(b);
            }
        }
        out = next;
    }
    out
}

/// All registered benchmarks.
pub fn registry() -> Vec<Benchmark> {
    alloc::vec![
        Benchmark {
            name: "schaffer-n1",
            space: SearchSpace::symmetric(50.0, 2).expect("static bounds"),
            known_min_value: 0.0,
            known_min_positions: alloc::vec![alloc::vec![0.0, 0.0]],
            differentiable: true,
            separable: false,
            unimodal: true,
            fold: PositionFold::AbsCoords,
            f: schaffer_n1,
        },
        Benchmark {
            name: "holder-table",
            space: SearchSpace::symmetric(10.0, 2).expect("static bounds"),
            known_min_value: -19.208502,
            known_min_positions: sign_expand(&[8.05502, 9.66459]),
            differentiable: false,
            separable: false,
            unimodal: false,
            fold: PositionFold::AbsCoords,
            f: holder_table,
        },
        Benchmark {
            name: "cross-in-tray",
            space: SearchSpace::symmetric(10.0, 2).expect("static bounds"),
            known_min_value: -2.062612,
            known_min_positions: sign_expand(&[1.34940, 1.34940]),
            differentiable: false,
            separable: false,
            unimodal: false,
            fold: PositionFold::AbsCoords,
            f: cross_in_tray,
        },
        Benchmark {
            name: "happy-cat",
            space: SearchSpace::symmetric(2.0, 2).expect("static bounds"),
            known_min_value: 0.0,
            known_min_positions: alloc::vec![alloc::vec![-1.0, -1.0]],
            differentiable: true,
            separable: false,
            unimodal: false,
            fold: PositionFold::Identity,
            f: |x| happy_cat(x, HAPPY_CAT_ALPHA),
        },
        Benchmark {
            name: "schaffer-n4",
            space: SearchSpace::symmetric(50.0, 2).expect("static bounds"),
            known_min_value: 0.292579,
            known_min_positions: sign_expand(&[0.0, 1.253115]),
            differentiable: true,
            separable: false,
            unimodal: true,
            fold: PositionFold::AbsCoords,
            f: schaffer_n4,
        },
        Benchmark {
            name: "sphere",
            space: SearchSpace::symmetric(5.12, 6).expect("static bounds"),
            known_min_value: 0.0,
            known_min_positions: alloc::vec![alloc::vec![0.0; 6]],
            differentiable: true,
            separable: true,
            unimodal: true,
            fold: PositionFold::AbsCoords,
            f: sphere,
        },
    ]
}

/// Registry names in their canonical order.
pub fn names() -> Vec<&'static str> {
    registry().iter().map(|b| b.name).collect()
}

/// Looks a benchmark up by name. `schaffer-n2` is accepted as an alias for
/// `schaffer-n1`: both names circulate for the same implemented variant,
/// and the alias keeps older configs working.
pub fn lookup(name: &str) -> Result<Benchmark> {
    let canonical = if name == "schaffer-n2" { "schaffer-n1" } else { name };
    registry()
        .into_iter()
        .find(|b| b.name == canonical)
        .ok_or_else(|| {
            let valid = names().join(", ");
            Error::config(format!("unknown benchmark '{name}'; valid names: {valid}"))
        })
}

/// Convenience: the usual name order used in comparison tables.
pub fn canonical_order() -> [&'static str; 6] {
    [
        "schaffer-n1",
        "holder-table",
        "cross-in-tray",
        "happy-cat",
        "schaffer-n4",
        "sphere",
    ]
}
