//! Exact spherical harmonic transform on sampling-theorem grids.
//!
//! Two grids are provided.  The Gauss-Legendre (GL) grid places rings at the
//! Gauss-Legendre colatitudes with `2L-1` equispaced longitudes each; its
//! ring weights integrate products of two band-limited functions exactly, so
//! it is the normative scheme for every exactness statement in this crate.
//! The equiangular (MW) grid uses `L` rings at `theta_t = pi (2t+1)/(2L-1)`
//! with a single sample on the south-pole ring, i.e. `(2L-1)(L-1)+1` samples
//! per sphere.  Its forward transform is made exact by recovering the exact
//! Fourier coefficients of each azimuthal order from the parity-extended
//! rings and resampling onto the GL colatitudes.
//!
//! Sample layouts are ring-major (ascending colatitude), longitude-minor
//! with `phi_j = 2 pi j / n_lon`.

mod legendre;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::gauss::gauss_legendre;
pub(crate) use legendre::{tri, tri_len, LegendreTables};

/// Sphere sampling scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereScheme {
    /// Gauss-Legendre colatitudes, `L (2L-1)` samples.
    Gl,
    /// Equiangular colatitudes with a single pole sample,
    /// `(2L-1)(L-1) + 1` samples.
    Mw,
}

impl std::fmt::Display for SphereScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SphereScheme::Gl => write!(f, "gl"),
            SphereScheme::Mw => write!(f, "mw"),
        }
    }
}

impl std::str::FromStr for SphereScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(SphereScheme::Gl),
            "mw" => Ok(SphereScheme::Mw),
            other => Err(Error::Config(format!(
                "unknown sphere scheme '{other}' (expected 'gl' or 'mw')"
            ))),
        }
    }
}

/// Angular band-limit `L` and sampling scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereParams {
    pub l: usize,
    pub scheme: SphereScheme,
}

impl SphereParams {
    pub fn new(l: usize, scheme: SphereScheme) -> Result<Self> {
        if l == 0 {
            return Err(Error::domain("angular band-limit L must be >= 1"));
        }
        Ok(SphereParams { l, scheme })
    }

    /// Coefficient count `L^2`.
    pub fn coeff_count(&self) -> usize {
        self.l * self.l
    }

    /// Sample count of the sampling grid: `L (2L-1)` for GL,
    /// `(2L-1)(L-1) + 1` for MW.
    pub fn sample_count(&self) -> usize {
        match self.scheme {
            SphereScheme::Gl => self.l * (2 * self.l - 1),
            SphereScheme::Mw => (2 * self.l - 1) * (self.l - 1) + 1,
        }
    }
}

/// Iso-latitude sampling grid on the sphere.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    pub params: SphereParams,
    /// Ring colatitudes, ascending, in `(0, pi]`.
    pub colatitudes: Vec<f64>,
    /// Longitudes per ring (`2L-1`, or 1 on the MW pole ring).
    pub ring_sizes: Vec<usize>,
    /// Colatitude quadrature weight per ring.
    ///
    /// GL weights integrate `poly(cos theta)` of degree `<= 2L-1` exactly;
    /// the MW weights come from the Fourier-space construction and are exact
    /// for single band-limited functions (trigonometric degree `<= L-1`).
    pub ring_weights: Vec<f64>,
    ring_offsets: Vec<usize>,
    total: usize,
}

impl SphereGrid {
    pub fn rings(&self) -> usize {
        self.colatitudes.len()
    }

    pub fn total_samples(&self) -> usize {
        self.total
    }

    pub fn ring_offset(&self, ring: usize) -> usize {
        self.ring_offsets[ring]
    }

    /// Longitude of sample `j` on `ring`.
    pub fn longitude(&self, ring: usize, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.ring_sizes[ring] as f64
    }

    /// Solid-angle weight of each sample on `ring`.
    pub fn sample_weight(&self, ring: usize) -> f64 {
        self.ring_weights[ring] * 2.0 * PI / self.ring_sizes[ring] as f64
    }
}

/// Builds the sampling grid for the requested scheme.
pub fn sphere_grid(params: &SphereParams) -> Result<SphereGrid> {
    let l = params.l;
    let n_lon = 2 * l - 1;
    let (colatitudes, ring_sizes, ring_weights) = match params.scheme {
        SphereScheme::Gl => {
            let (nodes, weights) = gauss_legendre(l)?;
            // ascending colatitude = descending Legendre node
            let colatitudes: Vec<f64> = nodes.iter().rev().map(|x| x.acos()).collect();
            let ring_weights: Vec<f64> = weights.iter().rev().copied().collect();
            (colatitudes, vec![n_lon; l], ring_weights)
        }
        SphereScheme::Mw => {
            let colatitudes: Vec<f64> = (0..l)
                .map(|t| PI * (2 * t + 1) as f64 / n_lon as f64)
                .collect();
            let mut ring_sizes = vec![n_lon; l];
            ring_sizes[l - 1] = 1; // south pole carries a single sample
            (colatitudes, ring_sizes, mw_ring_weights(l))
        }
    };
    let mut ring_offsets = Vec::with_capacity(ring_sizes.len());
    let mut total = 0usize;
    for &n in &ring_sizes {
        ring_offsets.push(total);
        total += n;
    }
    Ok(SphereGrid {
        params: *params,
        colatitudes,
        ring_sizes,
        ring_weights,
        ring_offsets,
        total,
    })
}

/// `int_0^pi exp(i k theta) sin(theta) d theta`.
fn theta_fourier_weight(k: i64) -> Complex64 {
    match k {
        1 => Complex64::new(0.0, PI / 2.0),
        -1 => Complex64::new(0.0, -PI / 2.0),
        k if k % 2 == 0 => Complex64::new(2.0 / (1.0 - (k * k) as f64), 0.0),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// Exact colatitude weights for the MW rings, derived in Fourier space and
/// folded onto `[0, pi]` through the parity extension.
fn mw_ring_weights(l: usize) -> Vec<f64> {
    let n = 2 * l - 1;
    let mut extended = vec![0.0; n];
    for (t, w) in extended.iter_mut().enumerate() {
        let theta = PI * (2 * t + 1) as f64 / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -(l as i64 - 1)..=(l as i64 - 1) {
            acc += theta_fourier_weight(k) * Complex64::new(0.0, k as f64 * theta).exp();
        }
        *w = acc.re / n as f64;
    }
    let mut folded = vec![0.0; l];
    folded[l - 1] = extended[l - 1];
    for t in 0..l - 1 {
        folded[t] = extended[t] + extended[2 * l - 2 - t];
    }
    folded
}

/// Spherical harmonic coefficients `f_lm`, flat index `l^2 + l + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereCoefficients {
    pub values: Vec<Complex64>,
    pub params: SphereParams,
}

impl SphereCoefficients {
    pub fn new(values: Vec<Complex64>, params: SphereParams) -> Result<Self> {
        if values.len() != params.coeff_count() {
            return Err(Error::shape(format!(
                "expected {} sphere coefficients, got {}",
                params.coeff_count(),
                values.len()
            )));
        }
        Ok(SphereCoefficients { values, params })
    }

    pub fn zeros(params: SphereParams) -> Self {
        SphereCoefficients {
            values: vec![Complex64::new(0.0, 0.0); params.coeff_count()],
            params,
        }
    }

    /// Flat index of `(l, m)` with `|m| <= l`.
    #[inline]
    pub fn index(l: usize, m: i64) -> usize {
        (l * l) as i64 as usize + (l as i64 + m) as usize
    }

    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        self.values[Self::index(l, m)]
    }

    pub fn set(&mut self, l: usize, m: i64, v: Complex64) {
        self.values[Self::index(l, m)] = v;
    }
}

/// Sample values on a [`SphereGrid`], ring-major and longitude-minor.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSamples {
    pub values: Vec<Complex64>,
    pub params: SphereParams,
}

impl SphereSamples {
    pub fn new(values: Vec<Complex64>, params: SphereParams) -> Result<Self> {
        let grid = sphere_grid(&params)?;
        if values.len() != grid.total_samples() {
            return Err(Error::shape(format!(
                "expected {} sphere samples, got {}",
                grid.total_samples(),
                values.len()
            )));
        }
        Ok(SphereSamples { values, params })
    }
}

/// Extra tables used by the MW forward transform.
#[derive(Debug)]
struct MwForward {
    /// GL colatitude quadrature (nodes as colatitudes, ascending).
    gl_weights: Vec<f64>,
    /// Legendre tables per GL colatitude.
    gl_ring_leg: Vec<Vec<f64>>,
    /// `eval[s * n + bin] = exp(i k(bin) theta_s)` for GL colatitude s.
    eval: Vec<Complex64>,
    /// Per-bin factor `exp(-i pi k / n) / n` turning the offset-grid FFT
    /// into Fourier coefficients.
    twist: Vec<Complex64>,
}

/// Precomputed plan for repeated transforms at fixed parameters.
pub struct ShtPlan {
    grid: SphereGrid,
    ring_leg: Vec<Vec<f64>>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
    mw: Option<MwForward>,
}

impl ShtPlan {
    pub fn new(params: &SphereParams) -> Result<Self> {
        let grid = sphere_grid(params)?;
        let l = params.l;
        let n = 2 * l - 1;
        let tables = LegendreTables::new(l);
        let ring_leg: Vec<Vec<f64>> = grid
            .colatitudes
            .iter()
            .map(|&theta| {
                let mut row = vec![0.0; tri_len(l)];
                tables.fill_ring(theta, &mut row);
                row
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(n);
        let fft_inv = planner.plan_fft_inverse(n);

        let mw = match params.scheme {
            SphereScheme::Gl => None,
            SphereScheme::Mw => {
                let (nodes, weights) = gauss_legendre(l)?;
                let gl_colatitudes: Vec<f64> = nodes.iter().rev().map(|x| x.acos()).collect();
                let gl_weights: Vec<f64> = weights.iter().rev().copied().collect();
                let gl_ring_leg: Vec<Vec<f64>> = gl_colatitudes
                    .iter()
                    .map(|&theta| {
                        let mut row = vec![0.0; tri_len(l)];
                        tables.fill_ring(theta, &mut row);
                        row
                    })
                    .collect();
                let mut eval = vec![Complex64::new(0.0, 0.0); l * n];
                for (s, &theta) in gl_colatitudes.iter().enumerate() {
                    for bin in 0..n {
                        let k = bin_to_order(bin, n);
                        eval[s * n + bin] = Complex64::new(0.0, k as f64 * theta).exp();
                    }
                }
                let twist: Vec<Complex64> = (0..n)
                    .map(|bin| {
                        let k = bin_to_order(bin, n);
                        Complex64::new(0.0, -PI * k as f64 / n as f64).exp() / n as f64
                    })
                    .collect();
                Some(MwForward {
                    gl_weights,
                    gl_ring_leg,
                    eval,
                    twist,
                })
            }
        };
        Ok(ShtPlan {
            grid,
            ring_leg,
            fft_fwd,
            fft_inv,
            mw,
        })
    }

    pub fn params(&self) -> &SphereParams {
        &self.grid.params
    }

    pub fn grid(&self) -> &SphereGrid {
        &self.grid
    }

    /// Exact forward transform `f_lm = <f | Y_lm>` of band-limited samples.
    pub fn forward(&self, samples: &SphereSamples) -> Result<SphereCoefficients> {
        if samples.params != self.grid.params {
            return Err(Error::shape(format!(
                "sample parameters {:?} do not match plan parameters {:?}",
                samples.params, self.grid.params
            )));
        }
        let l = self.grid.params.l;
        let n = 2 * l - 1;

        // per-ring azimuthal Fourier coefficients G_m = int dphi f e^{-im phi}
        let mut ring_modes = vec![Complex64::new(0.0, 0.0); self.grid.rings() * n];
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for t in 0..self.grid.rings() {
            let offset = self.grid.ring_offset(t);
            let size = self.grid.ring_sizes[t];
            let row = &mut ring_modes[t * n..(t + 1) * n];
            if size == 1 {
                // pole ring: constant in phi, only m = 0 survives
                row[0] = 2.0 * PI * samples.values[offset];
            } else {
                buf.copy_from_slice(&samples.values[offset..offset + n]);
                self.fft_fwd.process(&mut buf);
                let dphi = 2.0 * PI / n as f64;
                for (bin, v) in buf.iter().enumerate() {
                    row[bin] = dphi * v;
                }
            }
        }

        let mut coeffs = SphereCoefficients::zeros(self.grid.params);
        match &self.mw {
            None => {
                for t in 0..self.grid.rings() {
                    accumulate_ring(
                        &mut coeffs,
                        self.grid.ring_weights[t],
                        &self.ring_leg[t],
                        &ring_modes[t * n..(t + 1) * n],
                    );
                }
            }
            Some(mw) => {
                // Parity-extend each azimuthal order over the full circle,
                // take exact theta-Fourier coefficients, resample onto the
                // GL colatitudes, then use the exact GL quadrature.
                let mut ext = vec![Complex64::new(0.0, 0.0); n];
                let mut gl_modes = vec![Complex64::new(0.0, 0.0); l * n];
                for bin in 0..n {
                    let m = bin_to_order(bin, n);
                    let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    for t in 0..l {
                        ext[t] = ring_modes[t * n + bin];
                    }
                    for t in l..n {
                        ext[t] = sign * ring_modes[(2 * l - 2 - t) * n + bin];
                    }
                    self.fft_fwd.process(&mut ext);
                    for kbin in 0..n {
                        ext[kbin] *= mw.twist[kbin];
                    }
                    for s in 0..l {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for kbin in 0..n {
                            acc += ext[kbin] * mw.eval[s * n + kbin];
                        }
                        gl_modes[s * n + bin] = acc;
                    }
                }
                for s in 0..l {
                    accumulate_ring(
                        &mut coeffs,
                        mw.gl_weights[s],
                        &mw.gl_ring_leg[s],
                        &gl_modes[s * n..(s + 1) * n],
                    );
                }
            }
        }
        Ok(coeffs)
    }

    /// Synthesis `f(theta_t, phi_j) = sum_lm f_lm Y_lm` on the grid.
    pub fn inverse(&self, coeffs: &SphereCoefficients) -> Result<SphereSamples> {
        if coeffs.params != self.grid.params {
            return Err(Error::shape(format!(
                "coefficient parameters {:?} do not match plan parameters {:?}",
                coeffs.params, self.grid.params
            )));
        }
        let l = self.grid.params.l;
        let n = 2 * l - 1;
        let mut values = vec![Complex64::new(0.0, 0.0); self.grid.total_samples()];
        let mut bins = vec![Complex64::new(0.0, 0.0); n];
        for t in 0..self.grid.rings() {
            let leg = &self.ring_leg[t];
            bins.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
            for m in 0..l as i64 {
                let mut acc = Complex64::new(0.0, 0.0);
                for ell in m as usize..l {
                    acc += coeffs.get(ell, m) * leg[tri(ell, m as usize)];
                }
                bins[m as usize] = acc;
                if m > 0 {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    let mut acc = Complex64::new(0.0, 0.0);
                    for ell in m as usize..l {
                        acc += coeffs.get(ell, -m) * (sign * leg[tri(ell, m as usize)]);
                    }
                    bins[n - m as usize] = acc;
                }
            }
            let offset = self.grid.ring_offset(t);
            if self.grid.ring_sizes[t] == 1 {
                values[offset] = bins.iter().sum();
            } else {
                self.fft_inv.process(&mut bins);
                values[offset..offset + n].copy_from_slice(&bins);
            }
        }
        SphereSamples::new(values, self.grid.params)
    }
}

/// Maps an FFT bin index to the signed azimuthal order it carries.
#[inline]
fn bin_to_order(bin: usize, n: usize) -> i64 {
    if bin <= (n - 1) / 2 {
        bin as i64
    } else {
        bin as i64 - n as i64
    }
}

/// Adds one ring's contribution `w * Lambda_lm(theta) * G_m` to `coeffs`.
fn accumulate_ring(
    coeffs: &mut SphereCoefficients,
    theta_weight: f64,
    leg: &[f64],
    modes: &[Complex64],
) {
    let l = coeffs.params.l;
    let n = 2 * l - 1;
    for m in 0..l {
        let g_pos = modes[m];
        let scaled_pos = g_pos * theta_weight;
        for ell in m..l {
            let lam = leg[tri(ell, m)];
            coeffs.values[SphereCoefficients::index(ell, m as i64)] += scaled_pos * lam;
        }
        if m > 0 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let scaled_neg = modes[n - m] * (theta_weight * sign);
            for ell in m..l {
                let lam = leg[tri(ell, m)];
                coeffs.values[SphereCoefficients::index(ell, -(m as i64))] += scaled_neg * lam;
            }
        }
    }
}

/// Forward spherical harmonic transform.
pub fn sht_forward(samples: &SphereSamples) -> Result<SphereCoefficients> {
    ShtPlan::new(&samples.params)?.forward(samples)
}

/// Inverse spherical harmonic transform.
pub fn sht_inverse(coeffs: &SphereCoefficients) -> Result<SphereSamples> {
    ShtPlan::new(&coeffs.params)?.inverse(coeffs)
}

/// Axisymmetric convolution in harmonic space:
/// `(f * h)_lm = sqrt(4 pi / (2l+1)) f_lm conj(h_l0)`.
pub fn sphere_convolve_axisym(
    f: &SphereCoefficients,
    h_axisym: &[Complex64],
) -> Result<SphereCoefficients> {
    let l = f.params.l;
    if h_axisym.len() != l {
        return Err(Error::shape(format!(
            "axisymmetric kernel must carry L={l} coefficients, got {}",
            h_axisym.len()
        )));
    }
    let mut out = SphereCoefficients::zeros(f.params);
    for ell in 0..l {
        let factor = (4.0 * PI / (2.0 * ell as f64 + 1.0)).sqrt() * h_axisym[ell].conj();
        for m in -(ell as i64)..=(ell as i64) {
            let idx = SphereCoefficients::index(ell, m);
            out.values[idx] = f.values[idx] * factor;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::legendre;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn random_coeffs(params: SphereParams, seed: u64) -> SphereCoefficients {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let values = (0..params.coeff_count())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        SphereCoefficients::new(values, params).unwrap()
    }

    #[test]
    fn grid_sample_counts() {
        let gl1 = sphere_grid(&SphereParams::new(1, SphereScheme::Gl).unwrap()).unwrap();
        assert_eq!(gl1.total_samples(), 1);
        assert!((gl1.colatitudes[0] - PI / 2.0).abs() < 1e-14);
        assert!((gl1.sample_weight(0) - 4.0 * PI).abs() < 1e-13);

        let gl4 = sphere_grid(&SphereParams::new(4, SphereScheme::Gl).unwrap()).unwrap();
        assert_eq!(gl4.total_samples(), 28);

        let mw4 = sphere_grid(&SphereParams::new(4, SphereScheme::Mw).unwrap()).unwrap();
        assert_eq!(mw4.total_samples(), 22);
        assert!((mw4.colatitudes[3] - PI).abs() < 1e-14);
        assert_eq!(mw4.ring_sizes[3], 1);

        assert!(SphereParams::new(0, SphereScheme::Gl).is_err());
    }

    #[test]
    fn mw_ring_weights_integrate_band_limited_functions() {
        // int f dOmega = sqrt(4 pi) f_00 for band-limited f
        for l in [2usize, 3, 8, 16] {
            let params = SphereParams::new(l, SphereScheme::Mw).unwrap();
            let plan = ShtPlan::new(&params).unwrap();
            let coeffs = random_coeffs(params, 17);
            let samples = plan.inverse(&coeffs).unwrap();
            let grid = plan.grid();
            let mut total = Complex64::new(0.0, 0.0);
            for t in 0..grid.rings() {
                let w = grid.sample_weight(t);
                for j in 0..grid.ring_sizes[t] {
                    total += w * samples.values[grid.ring_offset(t) + j];
                }
            }
            let expect = (4.0 * PI).sqrt() * coeffs.get(0, 0);
            assert!(
                (total - expect).norm() < 1e-12,
                "L={l}: {total} vs {expect}"
            );
        }
    }

    #[test]
    fn forward_of_constant_function() {
        for scheme in [SphereScheme::Gl, SphereScheme::Mw] {
            let params = SphereParams::new(4, scheme).unwrap();
            let grid = sphere_grid(&params).unwrap();
            let samples = SphereSamples::new(
                vec![Complex64::new(1.0, 0.0); grid.total_samples()],
                params,
            )
            .unwrap();
            let coeffs = sht_forward(&samples).unwrap();
            let expect = (4.0 * PI).sqrt();
            assert!(
                (coeffs.get(0, 0) - Complex64::new(expect, 0.0)).norm() < 1e-13,
                "{scheme}: {:?}",
                coeffs.get(0, 0)
            );
            for (i, v) in coeffs.values.iter().enumerate() {
                if i != SphereCoefficients::index(0, 0) {
                    assert!(v.norm() < 1e-13, "{scheme}: index {i} = {v}");
                }
            }
        }
    }

    #[test]
    fn forward_projects_closed_form_y21() {
        // Y_21 = -sqrt(15/(8 pi)) sin(theta) cos(theta) e^{i phi}
        for scheme in [SphereScheme::Gl, SphereScheme::Mw] {
            let params = SphereParams::new(4, scheme).unwrap();
            let grid = sphere_grid(&params).unwrap();
            let mut values = vec![Complex64::new(0.0, 0.0); grid.total_samples()];
            for t in 0..grid.rings() {
                let theta = grid.colatitudes[t];
                let lam = -(15.0 / (8.0 * PI)).sqrt() * theta.sin() * theta.cos();
                for j in 0..grid.ring_sizes[t] {
                    let phi = grid.longitude(t, j);
                    values[grid.ring_offset(t) + j] =
                        lam * Complex64::new(0.0, phi).exp();
                }
            }
            let samples = SphereSamples::new(values, params).unwrap();
            let coeffs = sht_forward(&samples).unwrap();
            for l in 0..4usize {
                for m in -(l as i64)..=(l as i64) {
                    let expect = if (l, m) == (2, 1) { 1.0 } else { 0.0 };
                    assert!(
                        (coeffs.get(l, m) - Complex64::new(expect, 0.0)).norm() <= 1e-12,
                        "{scheme} ({l},{m}): {:?}",
                        coeffs.get(l, m)
                    );
                }
            }
        }
    }

    #[test]
    fn inverse_of_dc_coefficient_is_constant() {
        let params = SphereParams::new(3, SphereScheme::Gl).unwrap();
        let mut coeffs = SphereCoefficients::zeros(params);
        coeffs.set(0, 0, Complex64::new((4.0 * PI).sqrt(), 0.0));
        let samples = sht_inverse(&coeffs).unwrap();
        for v in &samples.values {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }

        let zeros = SphereCoefficients::zeros(params);
        let samples = sht_inverse(&zeros).unwrap();
        assert!(samples.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn quadrature_orthonormality_on_gl_grid() {
        let l = 8;
        let params = SphereParams::new(l, SphereScheme::Gl).unwrap();
        let plan = ShtPlan::new(&params).unwrap();
        let grid = plan.grid();
        // sample every basis function and integrate products
        let mut basis = Vec::new();
        for ell in 0..l {
            for m in -(ell as i64)..=(ell as i64) {
                let mut c = SphereCoefficients::zeros(params);
                c.set(ell, m, Complex64::new(1.0, 0.0));
                basis.push(plan.inverse(&c).unwrap());
            }
        }
        let mut worst = 0.0_f64;
        for a in 0..basis.len() {
            for b in a..basis.len() {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..grid.rings() {
                    let w = grid.sample_weight(t);
                    for j in 0..grid.ring_sizes[t] {
                        let idx = grid.ring_offset(t) + j;
                        acc += w * basis[a].values[idx] * basis[b].values[idx].conj();
                    }
                }
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((acc - Complex64::new(target, 0.0)).norm());
            }
        }
        assert!(worst <= 1e-12, "worst orthonormality residual {worst:e}");
    }

    #[test]
    fn round_trip_gl() {
        for l in [1usize, 2, 8, 32] {
            let params = SphereParams::new(l, SphereScheme::Gl).unwrap();
            let plan = ShtPlan::new(&params).unwrap();
            let coeffs = random_coeffs(params, 5);
            let back = plan.forward(&plan.inverse(&coeffs).unwrap()).unwrap();
            let worst = coeffs
                .values
                .iter()
                .zip(&back.values)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(worst <= 1e-12, "L={l}: round-trip error {worst:e}");
        }
    }

    #[test]
    fn round_trip_mw() {
        for l in [1usize, 2, 3, 8, 16] {
            let params = SphereParams::new(l, SphereScheme::Mw).unwrap();
            let plan = ShtPlan::new(&params).unwrap();
            let coeffs = random_coeffs(params, 9);
            let back = plan.forward(&plan.inverse(&coeffs).unwrap()).unwrap();
            let worst = coeffs
                .values
                .iter()
                .zip(&back.values)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(worst <= 1e-12, "L={l}: round-trip error {worst:e}");
        }
    }

    #[test]
    fn mw_forward_matches_gl_forward() {
        // the same band-limited function, sampled on either grid, must give
        // the same coefficients
        let l = 16;
        let gl = SphereParams::new(l, SphereScheme::Gl).unwrap();
        let mw = SphereParams::new(l, SphereScheme::Mw).unwrap();
        let coeffs = random_coeffs(gl, 21);
        let gl_plan = ShtPlan::new(&gl).unwrap();
        let mw_plan = ShtPlan::new(&mw).unwrap();
        let mut mw_coeffs = coeffs.clone();
        mw_coeffs.params = mw;
        let from_gl = gl_plan.forward(&gl_plan.inverse(&coeffs).unwrap()).unwrap();
        let from_mw = mw_plan
            .forward(&mw_plan.inverse(&mw_coeffs).unwrap())
            .unwrap();
        let worst = from_gl
            .values
            .iter()
            .zip(&from_mw.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-10, "GL/MW coefficient mismatch {worst:e}");
    }

    #[test]
    fn parseval_on_gl_grid() {
        let params = SphereParams::new(16, SphereScheme::Gl).unwrap();
        let plan = ShtPlan::new(&params).unwrap();
        let coeffs = random_coeffs(params, 3);
        let samples = plan.inverse(&coeffs).unwrap();
        let grid = plan.grid();
        let mut grid_energy = 0.0;
        for t in 0..grid.rings() {
            let w = grid.sample_weight(t);
            for j in 0..grid.ring_sizes[t] {
                grid_energy += w * samples.values[grid.ring_offset(t) + j].norm_sqr();
            }
        }
        let coeff_energy: f64 = coeffs.values.iter().map(|v| v.norm_sqr()).sum();
        assert!(
            ((grid_energy - coeff_energy) / coeff_energy).abs() <= 1e-12,
            "{grid_energy} vs {coeff_energy}"
        );
    }

    #[test]
    fn convolution_identity_and_zero_kernels() {
        let params = SphereParams::new(8, SphereScheme::Gl).unwrap();
        let f = random_coeffs(params, 2);
        // h_l0 = sqrt((2l+1)/(4pi)) cancels the convolution factor exactly
        let identity: Vec<Complex64> = (0..8)
            .map(|l| Complex64::new(((2 * l + 1) as f64 / (4.0 * PI)).sqrt(), 0.0))
            .collect();
        let conv = sphere_convolve_axisym(&f, &identity).unwrap();
        let worst = f
            .values
            .iter()
            .zip(&conv.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-15);

        let zero = vec![Complex64::new(0.0, 0.0); 8];
        let conv = sphere_convolve_axisym(&f, &zero).unwrap();
        assert!(conv.values.iter().all(|v| v.norm() == 0.0));

        assert!(sphere_convolve_axisym(&f, &zero[..4]).is_err());
    }

    #[test]
    fn convolution_matches_rotate_and_integrate_oracle() {
        // brute-force oracle: (f * h)(w0) = sum_grid weight f conj(R_{w0} h),
        // with the rotated axisymmetric kernel evaluated through plain
        // Legendre polynomials of the rotated polar angle
        let l = 8;
        let params = SphereParams::new(l, SphereScheme::Gl).unwrap();
        let plan = ShtPlan::new(&params).unwrap();
        let grid = plan.grid();
        let f = random_coeffs(params, 31);
        let mut rng = ChaCha12Rng::seed_from_u64(32);
        let h: Vec<Complex64> = (0..l)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();

        let f_samples = plan.inverse(&f).unwrap();
        let conv = sphere_convolve_axisym(&f, &h).unwrap();
        let conv_samples = plan.inverse(&conv).unwrap();

        for &(t0, j0) in &[(0usize, 0usize), (3, 5), (5, 2), (7, 11)] {
            let theta0 = grid.colatitudes[t0];
            let phi0 = grid.longitude(t0, j0);
            let mut brute = Complex64::new(0.0, 0.0);
            for t in 0..grid.rings() {
                let theta = grid.colatitudes[t];
                let w = grid.sample_weight(t);
                for j in 0..grid.ring_sizes[t] {
                    let phi = grid.longitude(t, j);
                    let cos_gamma = theta0.cos() * theta.cos()
                        + theta0.sin() * theta.sin() * (phi - phi0).cos();
                    let mut kernel = Complex64::new(0.0, 0.0);
                    for ell in 0..l {
                        let zonal = ((2 * ell + 1) as f64 / (4.0 * PI)).sqrt()
                            * legendre(ell, cos_gamma);
                        kernel += h[ell] * zonal;
                    }
                    brute += w * f_samples.values[grid.ring_offset(t) + j] * kernel.conj();
                }
            }
            let harmonic = conv_samples.values[grid.ring_offset(t0) + j0];
            assert!(
                (brute - harmonic).norm() <= 1e-10,
                "({t0},{j0}): {brute} vs {harmonic}"
            );
        }
    }
}
