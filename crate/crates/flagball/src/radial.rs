//! Spherical Laguerre basis on the radial half-line.
//!
//! The basis functions are
//!
//! ```text
//! K_p(r) = sqrt(p!/(p+2)!) * exp(-r/(2 tau)) / sqrt(tau^3) * L_p^(2)(r / tau)
//! ```
//!
//! where `L_p^(2)` is the generalised Laguerre polynomial of order two and
//! `tau > 0` a radial scale factor.  They are orthonormal with respect to the
//! measure `r^2 dr` on `[0, inf)`.  An exact Gauss-Laguerre quadrature rule
//! turns the continuous transform into a sampling theorem: a signal with
//! radial band-limit `P` is fully described by its values at the `P` nodes.
//!
//! Two weight conventions coexist and both are exposed:
//!
//! * `gauss_weights` are the classical generalised Gauss-Laguerre weights for
//!   the weight function `x^2 e^{-x}` (scaled by `tau^3`); they satisfy
//!   `sum_i gw_i x_i^k = Gamma(k+3) tau^(3+k)` for `k <= 2P-1`.
//! * `weights` are the sampling weights `gw_i * e^{x_i}` used whenever plain
//!   function *values* are summed, as in the forward transform
//!   `f_p = sum_i w_i f(r_i) K_p(r_i)`.  They reproduce basis orthonormality
//!   exactly and, unlike the raw weights, never underflow at large `P`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauss::sym_tridiag_eigenvalues;

/// Parameters of the radial line: band-limit `P` and scale factor `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialParams {
    /// Radial band-limit `P >= 1`; coefficients carry indices `p < P`.
    pub p: usize,
    /// Radial scale factor `tau > 0`, in units of length.
    pub tau: f64,
}

impl RadialParams {
    pub fn new(p: usize, tau: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::domain("radial band-limit P must be >= 1"));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::domain(format!(
                "radial scale tau must be positive and finite, got {tau}"
            )));
        }
        Ok(RadialParams { p, tau })
    }

    /// Parameters whose largest quadrature node equals `radius`.
    ///
    /// Used by the plot emitters, which work on a ball of given radius.
    pub fn with_ball_radius(p: usize, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::domain(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        let unit = RadialParams::new(p, 1.0)?;
        let quad = radial_quadrature(&unit)?;
        let x_max = *quad.nodes.last().unwrap();
        RadialParams::new(p, radius / x_max)
    }
}

/// Exact quadrature rule for the measure `r^2 dr` against the Laguerre basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialQuadrature {
    pub params: RadialParams,
    /// Radii `r_i = tau x_i`, strictly increasing, all positive.
    pub nodes: Vec<f64>,
    /// Sampling weights: `sum_i weights[i] K_p(r_i) K_q(r_i) = delta_pq`.
    pub weights: Vec<f64>,
    /// Raw generalised Gauss-Laguerre weights (`alpha = 2`, scaled by tau^3).
    ///
    /// For very large `P` (roughly `P > 185`) the trailing entries fall below
    /// the smallest positive f64 and round to subnormals or zero; the sampling
    /// `weights` stay well inside the representable range at any `P`.
    pub gauss_weights: Vec<f64>,
}

/// Harmonic coefficients `f_p` of a radial signal.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialCoefficients {
    pub values: Vec<Complex64>,
    pub params: RadialParams,
}

impl RadialCoefficients {
    pub fn new(values: Vec<Complex64>, params: RadialParams) -> Result<Self> {
        if values.len() != params.p {
            return Err(Error::shape(format!(
                "expected {} radial coefficients, got {}",
                params.p,
                values.len()
            )));
        }
        Ok(RadialCoefficients { values, params })
    }

    pub fn zeros(params: RadialParams) -> Self {
        RadialCoefficients {
            values: vec![Complex64::new(0.0, 0.0); params.p],
            params,
        }
    }
}

/// Sample values of a radial signal at the quadrature nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSamples {
    pub values: Vec<Complex64>,
    pub params: RadialParams,
}

impl RadialSamples {
    pub fn new(values: Vec<Complex64>, params: RadialParams) -> Result<Self> {
        if values.len() != params.p {
            return Err(Error::shape(format!(
                "expected {} radial samples, got {}",
                params.p,
                values.len()
            )));
        }
        Ok(RadialSamples { values, params })
    }
}

/// Generalised Laguerre polynomial `L_p^(2)(x)` by the three-term recurrence
/// `L_{k+1} = ((2k+3-x) L_k - (k+2) L_{k-1}) / (k+1)`.
pub fn laguerre_eval(p: usize, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!(
            "Laguerre argument must be finite and non-negative, got {x}"
        )));
    }
    let mut prev = 1.0; // L_0
    if p == 0 {
        return Ok(prev);
    }
    let mut curr = 3.0 - x; // L_1
    for k in 1..p {
        let k = k as f64;
        let next = ((2.0 * k + 3.0 - x) * curr - (k + 2.0) * prev) / (k + 1.0);
        prev = curr;
        curr = next;
    }
    Ok(curr)
}

/// Fills `out[k] = exp(-x/2) L_k^(2)(x)` for all `k < out.len()`.
///
/// Folding the exponential into the recurrence seed keeps every intermediate
/// inside the f64 range for x up to ~1400 (P up to a few hundred), where the
/// plain polynomial values would overflow.
fn damped_laguerre_all(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let damp = (-0.5 * x).exp();
    out[0] = damp;
    if out.len() == 1 {
        return;
    }
    out[1] = (3.0 - x) * damp;
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 3.0 - x) * out[k] - (kf + 2.0) * out[k - 1]) / (kf + 1.0);
    }
}

/// Normalisation `sqrt(p!/(p+2)!) = 1/sqrt((p+1)(p+2))`, overflow-free.
#[inline]
fn norm_factor(p: usize) -> f64 {
    let p = p as f64;
    1.0 / ((p + 1.0) * (p + 2.0)).sqrt()
}

/// Spherical Laguerre basis function `K_p(r)`.
pub fn basis_eval(p: usize, r: f64, tau: f64) -> Result<f64> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::domain(format!(
            "radius must be finite and non-negative, got {r}"
        )));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::domain(format!(
            "radial scale tau must be positive and finite, got {tau}"
        )));
    }
    let x = r / tau;
    let mut buf = vec![0.0; p + 1];
    damped_laguerre_all(x, &mut buf);
    Ok(buf[p] * norm_factor(p) / (tau * tau.sqrt()))
}

/// All basis values `K_p(r)` for `p < params.p` at a single radius.
pub fn basis_all(params: &RadialParams, r: f64) -> Result<Vec<f64>> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::domain(format!(
            "radius must be finite and non-negative, got {r}"
        )));
    }
    let x = r / params.tau;
    let mut buf = vec![0.0; params.p];
    damped_laguerre_all(x, &mut buf);
    let scale = 1.0 / (params.tau * params.tau.sqrt());
    for (p, v) in buf.iter_mut().enumerate() {
        *v *= norm_factor(p) * scale;
    }
    Ok(buf)
}

/// Exact quadrature rule for band-limit `P`: `P` nodes and weights making
/// `int_0^inf dr r^2 g(r)` exact for `g = exp(-r/tau) * (poly of deg <= 2P-1)`.
pub fn radial_quadrature(params: &RadialParams) -> Result<RadialQuadrature> {
    let p = params.p;
    let tau = params.tau;

    // Jacobi matrix of the alpha = 2 Laguerre family:
    // diag_k = 2k + 3, offdiag_k = sqrt(k (k + 2)).
    let diag: Vec<f64> = (0..p).map(|k| 2.0 * k as f64 + 3.0).collect();
    let offdiag: Vec<f64> = (1..p)
        .map(|k| {
            let k = k as f64;
            (k * (k + 2.0)).sqrt()
        })
        .collect();
    let mut xs = sym_tridiag_eigenvalues(&diag, &offdiag);

    // One or two Newton polish steps per node on y_k = exp(-x/2) L_k^(2)(x):
    //   x y_P' = P y_P - (P+2) y_{P-1} - x y_P / 2.
    let mut buf = vec![0.0; p + 1];
    for (i, x) in xs.iter_mut().enumerate() {
        let mut last_step = f64::INFINITY;
        for _ in 0..4 {
            damped_laguerre_all(*x, &mut buf);
            let y_p = buf[p];
            let y_pm1 = buf[p - 1];
            let dy = (p as f64 * y_p - (p as f64 + 2.0) * y_pm1) / *x - 0.5 * y_p;
            if dy == 0.0 {
                break;
            }
            last_step = y_p / dy;
            *x -= last_step;
            if last_step.abs() <= 1e-14 * x.abs().max(1.0) {
                break;
            }
        }
        if !(x.is_finite() && *x > 0.0) || last_step.abs() > 1e-8 * x.abs().max(1.0) {
            return Err(Error::Numeric(format!(
                "Laguerre node {i} of P={p} failed to converge (residual step {last_step:e})"
            )));
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for i in 1..p {
        if xs[i] <= xs[i - 1] {
            return Err(Error::Numeric(format!(
                "Laguerre nodes {} and {} of P={p} are not strictly increasing",
                i - 1,
                i
            )));
        }
    }

    // Christoffel weights: 1 / sum_{k<P} (norm_k y_k)^2 gives the sampling
    // weight e^{x_i} w_gauss_i directly, with no overflowing exponentials.
    let tau3 = tau * tau * tau;
    let mut weights = vec![0.0; p];
    let mut gauss_weights = vec![0.0; p];
    let mut ortho = vec![0.0; p];
    for i in 0..p {
        damped_laguerre_all(xs[i], &mut ortho);
        let s: f64 = ortho
            .iter()
            .enumerate()
            .map(|(k, y)| {
                let v = norm_factor(k) * y;
                v * v
            })
            .sum();
        weights[i] = tau3 / s;
        gauss_weights[i] = weights[i] * (-xs[i]).exp();
        if !weights[i].is_finite() || weights[i] <= 0.0 {
            return Err(Error::Numeric(format!(
                "weight {i} of P={p} is not positive and finite"
            )));
        }
    }

    let nodes = xs.iter().map(|x| tau * x).collect();
    Ok(RadialQuadrature {
        params: *params,
        nodes,
        weights,
        gauss_weights,
    })
}

/// Precomputed tables for repeated radial transforms at fixed parameters.
#[derive(Debug, Clone)]
pub struct RadialPlan {
    quad: RadialQuadrature,
    /// `basis[p * P + i] = K_p(r_i)`.
    basis: Vec<f64>,
}

impl RadialPlan {
    pub fn new(params: &RadialParams) -> Result<Self> {
        let quad = radial_quadrature(params)?;
        let p = params.p;
        let mut basis = vec![0.0; p * p];
        for (i, &r) in quad.nodes.iter().enumerate() {
            let col = basis_all(params, r)?;
            for (pp, v) in col.iter().enumerate() {
                basis[pp * p + i] = *v;
            }
        }
        Ok(RadialPlan { quad, basis })
    }

    pub fn params(&self) -> &RadialParams {
        &self.quad.params
    }

    pub fn quadrature(&self) -> &RadialQuadrature {
        &self.quad
    }

    #[inline]
    pub fn basis_at_node(&self, p: usize, i: usize) -> f64 {
        self.basis[p * self.quad.params.p + i]
    }

    /// `f_p = sum_i w_i f(r_i) K_p(r_i)`; exact for band-limited signals.
    pub fn forward(&self, samples: &RadialSamples) -> Result<RadialCoefficients> {
        if samples.params != self.quad.params {
            return Err(Error::shape(format!(
                "sample parameters {:?} do not match plan parameters {:?}",
                samples.params, self.quad.params
            )));
        }
        let p = self.quad.params.p;
        let mut values = vec![Complex64::new(0.0, 0.0); p];
        for (pp, out) in values.iter_mut().enumerate() {
            let row = &self.basis[pp * p..(pp + 1) * p];
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..p {
                acc += samples.values[i] * (self.quad.weights[i] * row[i]);
            }
            *out = acc;
        }
        RadialCoefficients::new(values, self.quad.params)
    }

    /// Synthesis at the quadrature nodes.
    pub fn inverse(&self, coeffs: &RadialCoefficients) -> Result<RadialSamples> {
        if coeffs.params != self.quad.params {
            return Err(Error::shape(format!(
                "coefficient parameters {:?} do not match plan parameters {:?}",
                coeffs.params, self.quad.params
            )));
        }
        let p = self.quad.params.p;
        let mut values = vec![Complex64::new(0.0, 0.0); p];
        for pp in 0..p {
            let c = coeffs.values[pp];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = &self.basis[pp * p..(pp + 1) * p];
            for i in 0..p {
                values[i] += c * row[i];
            }
        }
        RadialSamples::new(values, self.quad.params)
    }
}

/// Forward radial transform from samples at the quadrature nodes.
pub fn radial_forward(samples: &RadialSamples) -> Result<RadialCoefficients> {
    RadialPlan::new(&samples.params)?.forward(samples)
}

/// Synthesis `sum_p f_p K_p(r)` at arbitrary radii.
pub fn radial_inverse(coeffs: &RadialCoefficients, radii: &[f64]) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let basis = basis_all(&coeffs.params, r)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, b) in coeffs.values.iter().zip(&basis) {
            acc += c * b;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Radial translation by `s`: coefficient `p` is scaled by `K_p(s)`.
///
/// Note that translation by zero is *not* the identity: it multiplies
/// coefficient `p` by `K_p(0)`, exactly as the harmonic definition demands.
pub fn radial_translate(coeffs: &RadialCoefficients, s: f64) -> Result<RadialCoefficients> {
    let basis = basis_all(&coeffs.params, s)?;
    let values = coeffs
        .values
        .iter()
        .zip(&basis)
        .map(|(c, b)| c * b)
        .collect();
    RadialCoefficients::new(values, coeffs.params)
}

/// Band-limited Dirac delta at radius `s`: coefficient `p` equals `K_p(s)`.
pub fn radial_dirac(s: f64, params: &RadialParams) -> Result<RadialCoefficients> {
    let basis = basis_all(params, s)?;
    let values = basis.iter().map(|&b| Complex64::new(b, 0.0)).collect();
    RadialCoefficients::new(values, *params)
}

/// Radial convolution in harmonic space: `(f * h)_p = f_p h_p`.
pub fn radial_convolve(
    f: &RadialCoefficients,
    h: &RadialCoefficients,
) -> Result<RadialCoefficients> {
    if f.params != h.params {
        return Err(Error::shape(format!(
            "operand parameters differ: {:?} vs {:?}",
            f.params, h.params
        )));
    }
    let values = f
        .values
        .iter()
        .zip(&h.values)
        .map(|(a, b)| a * b)
        .collect();
    RadialCoefficients::new(values, f.params)
}
