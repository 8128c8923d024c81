//! Standard normal density, distribution and the log-CDF / inverse Mills
//! ratio pair needed by the probit preference likelihood.

use libm::erfc;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Below this the CDF is evaluated through the Mills-ratio continued fraction.
const TAIL_CUTOFF: f64 = -5.0;

pub fn pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

pub fn ln_pdf(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

pub fn cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Mills ratio Φ(z)/φ(z) for z < 0 via Laplace's continued fraction.
fn mills_ratio_lower(z: f64) -> f64 {
    let x = -z;
    let mut acc = x;
    for k in (1..=60).rev() {
        acc = x + k as f64 / acc;
    }
    1.0 / acc
}

/// ln Φ(z), finite for all finite z.
pub fn ln_cdf(z: f64) -> f64 {
    if z < TAIL_CUTOFF {
        ln_pdf(z) + mills_ratio_lower(z).ln()
    } else {
        cdf(z).ln()
    }
}

/// φ(z)/Φ(z), the derivative of ln Φ(z).
pub fn inv_mills(z: f64) -> f64 {
    if z < TAIL_CUTOFF {
        1.0 / mills_ratio_lower(z)
    } else {
        pdf(z) / cdf(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_reference_points() {
        assert!((cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-12);
        assert!((cdf(-1.96) - 0.024_997_895_148_220_43).abs() < 1e-12);
    }

    #[test]
    fn tail_is_continuous_at_cutoff() {
        let below = ln_cdf(TAIL_CUTOFF - 1e-9);
        let above = cdf(TAIL_CUTOFF + 1e-9).ln();
        assert!((below - above).abs() < 1e-7, "{below} vs {above}");
        let r_below = inv_mills(TAIL_CUTOFF - 1e-9);
        let r_above = pdf(TAIL_CUTOFF) / cdf(TAIL_CUTOFF);
        assert!((r_below - r_above).abs() / r_above < 1e-7);
    }

    #[test]
    fn far_tail_stays_finite() {
        for z in [-40.0, -100.0, -1e4] {
            assert!(ln_cdf(z).is_finite());
            let r = inv_mills(z);
            assert!(r.is_finite() && r > -z);
        }
    }
}
