//! Fourier-Laguerre transform on the ball `B^3 = R^+ x S^2`.
//!
//! The basis functions `Z_lmp(r, theta, phi) = K_p(r) Y_lm(theta, phi)`
//! separate into the spherical Laguerre functions of [`crate::radial`] and
//! the spherical harmonics of [`crate::sphere`], so the transform factors
//! into an angular transform per radial shell followed by a radial transform
//! per `(l, m)`.  Both orders agree; the shell-first order streams through
//! smaller temporaries and is the one implemented.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::radial::{basis_all, RadialParams, RadialPlan, RadialQuadrature};
use crate::sphere::{
    sphere_grid, SphereCoefficients, SphereGrid, SphereParams, SphereSamples, SphereScheme,
    ShtPlan,
};

/// Band-limits, radial scale and sampling scheme of a ball signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallParams {
    /// Angular band-limit `L`.
    pub l: usize,
    /// Radial band-limit `P`.
    pub p: usize,
    /// Radial scale factor `tau`.
    pub tau: f64,
    /// Sphere sampling scheme.
    pub scheme: SphereScheme,
}

impl BallParams {
    pub fn new(l: usize, p: usize, tau: f64, scheme: SphereScheme) -> Result<Self> {
        SphereParams::new(l, scheme)?;
        RadialParams::new(p, tau)?;
        Ok(BallParams { l, p, tau, scheme })
    }

    pub fn sphere(&self) -> SphereParams {
        SphereParams {
            l: self.l,
            scheme: self.scheme,
        }
    }

    pub fn radial(&self) -> RadialParams {
        RadialParams {
            p: self.p,
            tau: self.tau,
        }
    }

    /// Coefficient count `P * L^2`.
    pub fn coeff_count(&self) -> usize {
        self.p * self.l * self.l
    }

    /// Flat coefficient index, radial-major: `p L^2 + l^2 + l + m`.
    #[inline]
    pub fn index(&self, p: usize, l: usize, m: i64) -> usize {
        p * self.l * self.l + SphereCoefficients::index(l, m)
    }
}

/// Harmonic coefficients `f_lmp` of a ball signal.
#[derive(Debug, Clone, PartialEq)]
pub struct FlagCoefficients {
    pub values: Vec<Complex64>,
    pub params: BallParams,
}

impl FlagCoefficients {
    pub fn new(values: Vec<Complex64>, params: BallParams) -> Result<Self> {
        if values.len() != params.coeff_count() {
            return Err(Error::shape(format!(
                "expected {} ball coefficients, got {}",
                params.coeff_count(),
                values.len()
            )));
        }
        Ok(FlagCoefficients { values, params })
    }

    pub fn zeros(params: BallParams) -> Self {
        FlagCoefficients {
            values: vec![Complex64::new(0.0, 0.0); params.coeff_count()],
            params,
        }
    }

    pub fn get(&self, p: usize, l: usize, m: i64) -> Complex64 {
        self.values[self.params.index(p, l, m)]
    }

    pub fn set(&mut self, p: usize, l: usize, m: i64, v: Complex64) {
        let idx = self.params.index(p, l, m);
        self.values[idx] = v;
    }

    /// Coefficient-space energy `sum |f_lmp|^2`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Band-limited signal with independent standard complex Gaussian
    /// coefficients from a seeded generator; reproducible across runs.
    pub fn random(params: BallParams, seed: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let normal = StandardNormal;
        let values = (0..params.coeff_count())
            .map(|_| {
                Complex64::new(
                    normal.sample(&mut rng),
                    normal.sample(&mut rng),
                )
            })
            .collect();
        FlagCoefficients { values, params }
    }
}

/// Sample values on the product grid, radial-shell major then sphere layout.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSignal {
    pub values: Vec<Complex64>,
    pub params: BallParams,
}

impl BallSignal {
    pub fn new(values: Vec<Complex64>, params: BallParams) -> Result<Self> {
        let expected = ball_grid(&params)?.total_samples();
        if values.len() != expected {
            return Err(Error::shape(format!(
                "expected {expected} ball samples, got {}",
                values.len()
            )));
        }
        Ok(BallSignal { values, params })
    }
}

/// Product grid: radial quadrature nodes times a sphere grid.
#[derive(Debug, Clone)]
pub struct BallGrid {
    pub radial: RadialQuadrature,
    pub sphere: SphereGrid,
}

impl BallGrid {
    /// Total sample count `N`; for the MW scheme this is the sampling-theorem
    /// count `P [(2L-1)(L-1) + 1]`.
    pub fn total_samples(&self) -> usize {
        self.radial.nodes.len() * self.sphere.total_samples()
    }

    /// Offset of radial shell `i` in a [`BallSignal`].
    pub fn shell_offset(&self, i: usize) -> usize {
        i * self.sphere.total_samples()
    }

    /// Quadrature weight of sample `(shell, ring, _)`; together these make
    /// inner products of band-limited signals exact on the GL scheme.
    pub fn sample_weight(&self, shell: usize, ring: usize) -> f64 {
        self.radial.weights[shell] * self.sphere.sample_weight(ring)
    }

    /// Ball inner product `<a | b> = sum w a conj(b)` by quadrature.
    pub fn inner_product(&self, a: &BallSignal, b: &BallSignal) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for shell in 0..self.radial.nodes.len() {
            let base = self.shell_offset(shell);
            for ring in 0..self.sphere.rings() {
                let w = self.sample_weight(shell, ring);
                let offset = base + self.sphere.ring_offset(ring);
                for j in 0..self.sphere.ring_sizes[ring] {
                    acc += w * a.values[offset + j] * b.values[offset + j].conj();
                }
            }
        }
        acc
    }
}

/// Builds the ball sampling grid.
pub fn ball_grid(params: &BallParams) -> Result<BallGrid> {
    Ok(BallGrid {
        radial: crate::radial::radial_quadrature(&params.radial())?,
        sphere: sphere_grid(&params.sphere())?,
    })
}

/// Precomputed plan for repeated ball transforms at fixed parameters.
pub struct BallPlan {
    params: BallParams,
    radial: RadialPlan,
    sht: ShtPlan,
}

impl BallPlan {
    pub fn new(params: &BallParams) -> Result<Self> {
        Ok(BallPlan {
            params: *params,
            radial: RadialPlan::new(&params.radial())?,
            sht: ShtPlan::new(&params.sphere())?,
        })
    }

    pub fn params(&self) -> &BallParams {
        &self.params
    }

    pub fn grid(&self) -> BallGrid {
        BallGrid {
            radial: self.radial.quadrature().clone(),
            sphere: self.sht.grid().clone(),
        }
    }

    /// Forward ball transform: angular transform per shell, then radial
    /// transform per `(l, m)`.  Exact for band-limited signals.
    pub fn forward(&self, signal: &BallSignal) -> Result<FlagCoefficients> {
        if signal.params != self.params {
            return Err(Error::shape(format!(
                "signal parameters {:?} do not match plan parameters {:?}",
                signal.params, self.params
            )));
        }
        let l2 = self.params.l * self.params.l;
        let p = self.params.p;
        let n_sphere = self.sht.grid().total_samples();
        let sphere_params = self.params.sphere();

        // angular coefficients per shell, shell-major
        let mut shell_coeffs = vec![Complex64::new(0.0, 0.0); p * l2];
        for shell in 0..p {
            let offset = shell * n_sphere;
            let samples = SphereSamples::new(
                signal.values[offset..offset + n_sphere].to_vec(),
                sphere_params,
            )?;
            let coeffs = self.sht.forward(&samples)?;
            shell_coeffs[shell * l2..(shell + 1) * l2].copy_from_slice(&coeffs.values);
        }

        // radial transform per (l, m)
        let weights = &self.radial.quadrature().weights;
        let mut out = FlagCoefficients::zeros(self.params);
        for pp in 0..p {
            let block = &mut out.values[pp * l2..(pp + 1) * l2];
            for shell in 0..p {
                let scale = weights[shell] * self.radial.basis_at_node(pp, shell);
                let src = &shell_coeffs[shell * l2..(shell + 1) * l2];
                for (o, s) in block.iter_mut().zip(src) {
                    *o += s * scale;
                }
            }
        }
        Ok(out)
    }

    /// Inverse ball transform: radial synthesis onto the nodes per `(l, m)`,
    /// then angular synthesis per shell.
    pub fn inverse(&self, coeffs: &FlagCoefficients) -> Result<BallSignal> {
        if coeffs.params != self.params {
            return Err(Error::shape(format!(
                "coefficient parameters {:?} do not match plan parameters {:?}",
                coeffs.params, self.params
            )));
        }
        let l2 = self.params.l * self.params.l;
        let p = self.params.p;
        let n_sphere = self.sht.grid().total_samples();
        let sphere_params = self.params.sphere();

        let mut shell_coeffs = vec![Complex64::new(0.0, 0.0); p * l2];
        for pp in 0..p {
            let src = &coeffs.values[pp * l2..(pp + 1) * l2];
            for shell in 0..p {
                let k = self.radial.basis_at_node(pp, shell);
                if k == 0.0 {
                    continue;
                }
                let dst = &mut shell_coeffs[shell * l2..(shell + 1) * l2];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += s * k;
                }
            }
        }

        let mut values = vec![Complex64::new(0.0, 0.0); p * n_sphere];
        for shell in 0..p {
            let coeffs = SphereCoefficients::new(
                shell_coeffs[shell * l2..(shell + 1) * l2].to_vec(),
                sphere_params,
            )?;
            let samples = self.sht.inverse(&coeffs)?;
            values[shell * n_sphere..(shell + 1) * n_sphere].copy_from_slice(&samples.values);
        }
        BallSignal::new(values, self.params)
    }
}

/// Forward Fourier-Laguerre transform of a sampled ball signal.
pub fn flag_forward(signal: &BallSignal) -> Result<FlagCoefficients> {
    BallPlan::new(&signal.params)?.forward(signal)
}

/// Inverse Fourier-Laguerre transform onto the sampling grid.
pub fn flag_inverse(coeffs: &FlagCoefficients) -> Result<BallSignal> {
    BallPlan::new(&coeffs.params)?.inverse(coeffs)
}

/// Radial translation on the ball: `f_lmp -> K_p(s) f_lmp` for every `(l,m)`.
///
/// The angular part of the ball translation operator is restricted to the
/// identity here; rotations enter only through axisymmetric convolution.
pub fn ball_translate_radial(coeffs: &FlagCoefficients, s: f64) -> Result<FlagCoefficients> {
    let basis = basis_all(&coeffs.params.radial(), s)?;
    let l2 = coeffs.params.l * coeffs.params.l;
    let mut out = coeffs.clone();
    for pp in 0..coeffs.params.p {
        let k = basis[pp];
        for v in &mut out.values[pp * l2..(pp + 1) * l2] {
            *v *= k;
        }
    }
    Ok(out)
}

/// Largest `|h_lmp|` over `m != 0`; zero for an axisymmetric kernel.
pub fn axisym_residual(h: &FlagCoefficients) -> f64 {
    let mut worst = 0.0_f64;
    for pp in 0..h.params.p {
        for l in 0..h.params.l {
            for m in -(l as i64)..=(l as i64) {
                if m != 0 {
                    worst = worst.max(h.get(pp, l, m).norm());
                }
            }
        }
    }
    worst
}

/// Axisymmetric convolution on the ball in harmonic space:
/// `(f * h)_lmp = sqrt(4 pi / (2l+1)) f_lmp conj(h_l0p)`.
pub fn ball_convolve_axisym(
    f: &FlagCoefficients,
    h: &FlagCoefficients,
) -> Result<FlagCoefficients> {
    if f.params != h.params {
        return Err(Error::shape(format!(
            "operand parameters differ: {:?} vs {:?}",
            f.params, h.params
        )));
    }
    let residual = axisym_residual(h);
    if residual > 1e-12 {
        return Err(Error::Precondition(format!(
            "convolution kernel is not axisymmetric: max |h_lmp| = {residual:e} over m != 0"
        )));
    }
    let mut out = FlagCoefficients::zeros(f.params);
    for pp in 0..f.params.p {
        for l in 0..f.params.l {
            let factor =
                (4.0 * PI / (2.0 * l as f64 + 1.0)).sqrt() * h.get(pp, l, 0).conj();
            for m in -(l as i64)..=(l as i64) {
                let idx = f.params.index(pp, l, m);
                out.values[idx] = f.values[idx] * factor;
            }
        }
    }
    Ok(out)
}
