use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{BoapError, Result};

const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-4;

/// Cholesky factor with an escalating diagonal jitter.
///
/// Jitter starts at `1e-10 · mean(diag)` and grows tenfold up to
/// `1e-4 · mean(diag)`. Returns the factor and the jitter actually added.
pub fn jittered_cholesky(mat: &DMatrix<f64>) -> Result<(Cholesky<f64, Dyn>, f64)> {
    let n = mat.nrows();
    let scale = if n == 0 {
        1.0
    } else {
        let m = mat.diagonal().mean();
        if m > 0.0 && m.is_finite() {
            m
        } else {
            1.0
        }
    };
    let mut rel = JITTER_START;
    while rel <= JITTER_MAX * (1.0 + 1e-9) {
        let jitter = rel * scale;
        let mut m = mat.clone();
        for i in 0..n {
            m[(i, i)] += jitter;
        }
        if let Some(chol) = Cholesky::new(m) {
            return Ok((chol, jitter));
        }
        rel *= 10.0;
    }
    Err(BoapError::Conditioning {
        max_jitter: JITTER_MAX * scale,
    })
}

/// log|A| from a Cholesky factor of A.
pub fn log_det(chol: &Cholesky<f64, Dyn>) -> f64 {
    2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>()
}

/// Solves L v = b for the lower factor.
pub fn solve_lower(chol: &Cholesky<f64, Dyn>, b: &DVector<f64>) -> DVector<f64> {
    let l = chol.l_dirty();
    let mut out = b.clone();
    let ok = l.solve_lower_triangular_mut(&mut out);
    debug_assert!(ok);
    out
}

pub fn solve_lower_mat(chol: &Cholesky<f64, Dyn>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let l = chol.l_dirty();
    let mut out = b.clone();
    let ok = l.solve_lower_triangular_mut(&mut out);
    debug_assert!(ok);
    out
}
