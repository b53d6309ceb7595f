//! Minimal dense linear algebra for the hybrid training rule: a ridge
//! least-squares solve via normal equations and Cholesky. The systems
//! here are small (rule count times input count plus one), so a dense
//! O(n^3) factorization is entirely adequate.

use alloc::vec::Vec;

/// Solves `min ||A x - b||^2` through the regularized normal equations
/// `(A^T A + ridge I) x = A^T b`. Returns `None` when the factorization
/// breaks down (matrix not positive definite even after the ridge).
pub fn ridge_least_squares(a: &[Vec<f64>], b: &[f64], ridge: f64) -> Option<Vec<f64>> {
    let rows = a.len();
    if rows == 0 || rows != b.len() {
        return None;
    }
    let cols = a[0].len();
    if cols == 0 || a.iter().any(|r| r.len() != cols) {
        return None;
    }

    // Normal matrix and right-hand side.
    let mut ata = alloc::vec![alloc::vec![0.0f64; cols]; cols];
    let mut atb = alloc::vec![0.0f64; cols];
    for (row, &bi) in a.iter().zip(b) {
        for i in 0..cols {
            atb[i] += row[i] * bi;
            for j in i..cols {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..cols {
        for j in 0..i {
            ata[i][j] = ata[j][i];
        }
        ata[i][i] += ridge;
    }

    cholesky_solve(&mut ata, &mut atb).then_some(atb)
}

/// In-place Cholesky factorization and two triangular solves. `m` must be
/// symmetric; on success `rhs` holds the solution. Returns false when a
/// pivot is not strictly positive (matrix not positive definite).
fn cholesky_solve(m: &mut [Vec<f64>], rhs: &mut [f64]) -> bool {
    let n = rhs.len();
    for k in 0..n {
        let mut d = m[k][k];
        for j in 0..k {
            d -= m[k][j] * m[k][j];
        }
        if !(d > 0.0) || !d.is_finite() {
            return false;
        }
        let d = libm::sqrt(d);
        m[k][k] = d;
        for i in k + 1..n {
            let mut s = m[i][k];
            for j in 0..k {
                s -= m[i][j] * m[k][j];
            }
            m[i][k] = s / d;
        }
    }
    // Forward solve L y = rhs.
    for i in 0..n {
        let mut s = rhs[i];
        for j in 0..i {
            s -= m[i][j] * rhs[j];
        }
        rhs[i] = s / m[i][i];
    }
    // Back solve L^T x = y.
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for j in i + 1..n {
            s -= m[j][i] * rhs[j];
        }
        rhs[i] = s / m[i][i];
    }
    true
}
