//! Goodness-of-fit metrics for comparing model predictions against
//! observed values.

use crate::error::{Error, Result};

/// Pearson's cumulative statistic `sum (E_i - P_i)^2 / E_i` between
/// expected values `E` (the observations) and predicted values `P`.
///
/// A zero expected value makes the term undefined and is reported as an
/// error rather than silently skipped.
pub fn chi_squared(expected: &[f64], predicted: &[f64]) -> Result<f64> {
    if expected.len() != predicted.len() {
        return Err(Error::data("expected and predicted lengths differ"));
    }
    if expected.is_empty() {
        return Err(Error::data("cannot compute a fit statistic on no points"));
    }
    let mut total = 0.0;
    for (i, (e, p)) in expected.iter().zip(predicted).enumerate() {
        if !e.is_finite() || !p.is_finite() {
            return Err(Error::data(alloc::format!("non-finite value at index {i}")));
        }
        if *e == 0.0 {
            return Err(Error::data(alloc::format!(
                "expected value at index {i} is zero; the statistic is undefined there"
            )));
        }
        let d = e - p;
        total += d * d / e;
    }
    Ok(total)
}

/// Mean squared error between two equal-length series.
pub fn mse(expected: &[f64], predicted: &[f64]) -> Result<f64> {
    if expected.len() != predicted.len() {
        return Err(Error::data("expected and predicted lengths differ"));
    }
    if expected.is_empty() {
        return Err(Error::data("cannot compute a fit statistic on no points"));
    }
    let sum: f64 = expected
        .iter()
        .zip(predicted)
        .map(|(e, p)| (e - p) * (e - p))
        .sum();
    Ok(sum / expected.len() as f64)
}
