//! Fully-normalised associated Legendre functions.
//!
//! `Lambda_{lm}(theta)` is the colatitude part of the orthonormal spherical
//! harmonic with Condon-Shortley phase,
//! `Y_{lm}(theta, phi) = Lambda_{lm}(theta) exp(i m phi)`, and
//! `Lambda_{l,-m} = (-1)^m Lambda_{lm}` for the negative orders.
//!
//! Evaluation runs the standard three-term recurrence in `l` on the
//! normalised functions.  The diagonal seed `Lambda_{mm}` decays like
//! `sin^m(theta)` and underflows near the poles at large band-limits, so the
//! seed chain carries an explicit power-of-1e280 exponent that is folded back
//! in on output (values that truly underflow round to zero, which is the
//! correct result at these magnitudes).

use std::f64::consts::PI;

const RESCALE: f64 = 1e280;
const RESCALE_INV: f64 = 1e-280;
const RESCALE_THRESHOLD: f64 = 1e-280;

/// Index of `(l, m)`, `0 <= m <= l < L`, in a triangular table.
#[inline]
pub(crate) fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Number of `(l, m)` pairs with `0 <= m <= l < l_max`.
#[inline]
pub(crate) fn tri_len(l_max: usize) -> usize {
    l_max * (l_max + 1) / 2
}

/// Precomputed recurrence coefficients for band-limit `l_max`.
#[derive(Debug, Clone)]
pub(crate) struct LegendreTables {
    l_max: usize,
    /// `a_{lm} = sqrt((4l^2 - 1) / (l^2 - m^2))` for `l >= m + 1`.
    rec_a: Vec<f64>,
    /// `b_{lm} = sqrt(((l-1)^2 - m^2) / (4(l-1)^2 - 1))` for `l >= m + 2`.
    rec_b: Vec<f64>,
}

impl LegendreTables {
    pub(crate) fn new(l_max: usize) -> Self {
        let n = tri_len(l_max);
        let mut rec_a = vec![0.0; n];
        let mut rec_b = vec![0.0; n];
        for m in 0..l_max {
            for l in (m + 1)..l_max {
                let lf = l as f64;
                let mf = m as f64;
                rec_a[tri(l, m)] = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                if l >= m + 2 {
                    let lm1 = lf - 1.0;
                    rec_b[tri(l, m)] = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
                }
            }
        }
        LegendreTables { l_max, rec_a, rec_b }
    }

    /// Fills `out[tri(l, m)] = Lambda_{lm}(theta)` for all `m <= l < l_max`.
    pub(crate) fn fill_ring(&self, theta: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), tri_len(self.l_max));
        let cos_t = theta.cos();
        let sin_t = theta.sin();

        // diagonal seed chain, rescaled to dodge sin^m underflow
        let mut pmm = 1.0 / (4.0 * PI).sqrt();
        let mut exp_mm: i32 = 0;
        for m in 0..self.l_max {
            let mut v_prev = pmm;
            let mut e = exp_mm;
            out[tri(m, m)] = emit(v_prev, e);
            if m + 1 < self.l_max {
                let mut v_curr = self.rec_a[tri(m + 1, m)] * cos_t * v_prev;
                out[tri(m + 1, m)] = emit(v_curr, e);
                for l in (m + 2)..self.l_max {
                    let idx = tri(l, m);
                    let v_next =
                        self.rec_a[idx] * (cos_t * v_curr - self.rec_b[idx] * v_prev);
                    v_prev = v_curr;
                    v_curr = v_next;
                    if e < 0 && v_curr.abs() > RESCALE {
                        v_curr *= RESCALE_INV;
                        v_prev *= RESCALE_INV;
                        e += 1;
                    }
                    out[idx] = emit(v_curr, e);
                }
            }
            // Lambda_{m+1,m+1} = -sqrt((2m+3)/(2m+2)) sin(theta) Lambda_{mm}
            let mf = m as f64;
            pmm *= -((2.0 * mf + 3.0) / (2.0 * mf + 2.0)).sqrt() * sin_t;
            if pmm.abs() < RESCALE_THRESHOLD && pmm != 0.0 {
                pmm *= RESCALE;
                exp_mm -= 1;
            }
        }
    }
}

#[inline]
fn emit(v: f64, e: i32) -> f64 {
    match e {
        0 => v,
        -1 => v * RESCALE_INV,
        _ => 0.0,
    }
}
