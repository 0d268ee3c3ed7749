//! Flaglet wavelet transform on the ball.
//!
//! Wavelet kernels tile the `(l, p)` harmonic plane with smooth compactly
//! supported windows.  The generating function
//! `k_lambda(t)` is the normalised integral of `s_lambda^2(s)/s` over
//! `[t, 1]`, built from the Schwartz bump `s(u) = exp(-1/(1-u^2))`; it equals
//! one below `1/lambda`, zero above one, and decreases smoothly in between.
//! The window `kappa_lambda(t) = sqrt(k(t/lambda) - k(t))` then telescopes
//! over dyadic-like scales, so the kernels
//!
//! ```text
//! Psi^{j j'}_{l p} = sqrt((2l+1)/(4 pi)) kappa_lambda(l / lambda^j) kappa_nu(p / nu^j')
//! Phi_{l p}        = sqrt((2l+1)/(4 pi)) sqrt(eta_l^2 + eta_p^2 - eta_l^2 eta_p^2)
//! ```
//!
//! with `eta_l^2 = k_lambda(l / lambda^J0)` and `eta_p^2 = k_nu(p / nu^J0')`
//! satisfy the resolution of the identity
//! `(4 pi / (2l+1)) (|Phi_lp|^2 + sum_jj' |Psi^{jj'}_lp|^2) = 1` for every
//! `(l, p)` inside the band-limits.  Reconstruction from the wavelet and
//! scaling coefficients is therefore exact and the transform is a tight
//! frame with unit bounds.

use std::f64::consts::PI;

use crate::ball::{BallParams, FlagCoefficients};
use crate::error::{Error, Result};
use crate::gauss::gauss_legendre;

/// Harmonic-plane tiling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TilingParams {
    /// Angular dilation factor `lambda > 1`.
    pub lambda: f64,
    /// Radial dilation factor `nu > 1`.
    pub nu: f64,
    /// Minimum angular scale `J0`.
    pub j0: usize,
    /// Minimum radial scale `J0'`.
    pub j0p: usize,
}

impl TilingParams {
    pub fn new(lambda: f64, nu: f64, j0: usize, j0p: usize) -> Result<Self> {
        for (name, v) in [("lambda", lambda), ("nu", nu)] {
            if !(v.is_finite() && v > 1.0) {
                return Err(Error::Config(format!(
                    "dilation {name} must be finite and > 1, got {v}"
                )));
            }
        }
        Ok(TilingParams {
            lambda,
            nu,
            j0,
            j0p,
        })
    }

    /// Dyadic defaults `lambda = nu = 2`, `J0 = J0' = 0`.
    pub fn dyadic() -> Self {
        TilingParams {
            lambda: 2.0,
            nu: 2.0,
            j0: 0,
            j0p: 0,
        }
    }
}

/// Smallest `j >= 0` with `base^j >= band_limit - 1`, i.e.
/// `ceil(log_base(band_limit - 1))` evaluated robustly.
pub fn max_scale(base: f64, band_limit: usize) -> usize {
    let target = band_limit.saturating_sub(1) as f64;
    let mut j = 0usize;
    let mut power = 1.0;
    while power < target {
        power *= base;
        j += 1;
    }
    j
}

/// Smooth generating function `k_lambda` with its normalisation cached.
#[derive(Debug, Clone)]
pub struct GeneratingFunction {
    lambda: f64,
    inv_lambda: f64,
    /// `int_{1/lambda}^1 s_lambda^2(s)/s ds`.
    total: f64,
}

/// Schwartz bump `s(u) = exp(-1/(1-u^2))` on `(-1, 1)`, zero outside.
fn bump(u: f64) -> f64 {
    if u <= -1.0 || u >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

impl GeneratingFunction {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 1.0) {
            return Err(Error::Config(format!(
                "dilation must be finite and > 1, got {lambda}"
            )));
        }
        let inv_lambda = 1.0 / lambda;
        let mut gen = GeneratingFunction {
            lambda,
            inv_lambda,
            total: 1.0,
        };
        gen.total = gen.integrate(inv_lambda);
        if !(gen.total.is_finite() && gen.total > 0.0) {
            return Err(Error::Numeric(format!(
                "tiling normalisation integral is {} for lambda {lambda}",
                gen.total
            )));
        }
        Ok(gen)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Bump rescaled onto `[1/lambda, 1]`.
    fn bump_scaled(&self, t: f64) -> f64 {
        bump(2.0 * self.lambda / (self.lambda - 1.0) * (t - self.inv_lambda) - 1.0)
    }

    /// `int_a^1 s_lambda^2(s)/s ds` by panel-doubling composite quadrature
    /// to absolute tolerance 1e-14 (the integrand is smooth and vanishes to
    /// all orders at both support endpoints).
    fn integrate(&self, a: f64) -> f64 {
        let lo = a.max(self.inv_lambda);
        if lo >= 1.0 {
            return 0.0;
        }
        let (nodes, weights) = gauss_legendre(16).expect("fixed-order rule");
        let mut previous = f64::INFINITY;
        let mut panels = 8usize;
        loop {
            let width = (1.0 - lo) / panels as f64;
            let mut acc = 0.0;
            for panel in 0..panels {
                let left = lo + panel as f64 * width;
                for (x, w) in nodes.iter().zip(&weights) {
                    let s = left + 0.5 * width * (x + 1.0);
                    let b = self.bump_scaled(s);
                    acc += 0.5 * width * w * b * b / s;
                }
            }
            if (acc - previous).abs() <= 1e-14 || panels >= 4096 {
                return acc;
            }
            previous = acc;
            panels *= 2;
        }
    }

    /// `k_lambda(t)`: one below `1/lambda`, zero above one, smoothly
    /// decreasing in between.
    pub fn k(&self, t: f64) -> f64 {
        if t <= self.inv_lambda {
            1.0
        } else if t >= 1.0 {
            0.0
        } else {
            self.integrate(t) / self.total
        }
    }

    /// Tiling window `kappa_lambda(t) = sqrt(k(t/lambda) - k(t))`,
    /// supported on `(1/lambda, lambda)`.
    pub fn kappa(&self, t: f64) -> f64 {
        (self.k(t * self.inv_lambda) - self.k(t)).max(0.0).sqrt()
    }
}

/// Reduced band-limits `(L_j, P_j')` that contain the support of the scale
/// `(j, j')` kernel: `L_j = min(L, floor(lambda^{j+1}) + 1)` and likewise for
/// the radial direction.
pub fn scale_bandlimits(
    j: usize,
    jp: usize,
    tiling: &TilingParams,
    ball: &BallParams,
) -> Result<(usize, usize)> {
    let j_max = max_scale(tiling.lambda, ball.l);
    let jp_max = max_scale(tiling.nu, ball.p);
    if j < tiling.j0 || j > j_max || jp < tiling.j0p || jp > jp_max {
        return Err(Error::domain(format!(
            "scale ({j},{jp}) outside [{}, {j_max}] x [{}, {jp_max}]",
            tiling.j0, tiling.j0p
        )));
    }
    let cap = |base: f64, scale: usize, limit: usize| -> usize {
        let mut power = 1.0_f64;
        for _ in 0..=scale {
            power *= base;
        }
        limit.min(power.floor() as usize + 1)
    };
    Ok((
        cap(tiling.lambda, j, ball.l),
        cap(tiling.nu, jp, ball.p),
    ))
}

/// Harmonic-space wavelet and scaling kernels for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFamily {
    pub ball: BallParams,
    pub tiling: TilingParams,
    /// Maximum angular scale `J`.
    pub j_max: usize,
    /// Maximum radial scale `J'`.
    pub jp_max: usize,
    /// Scaling kernel `Phi_{l0p}`, index `l * P + p`.
    phi: Vec<f64>,
    /// Wavelet kernels `Psi^{jj'}_{l0p}`, scale-major (j outer, j' inner).
    psi: Vec<Vec<f64>>,
}

impl WaveletFamily {
    /// Reassembles a family from stored kernel values (deserialization).
    pub(crate) fn from_parts(
        ball: BallParams,
        tiling: TilingParams,
        phi: Vec<f64>,
        psi: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let j_max = max_scale(tiling.lambda, ball.l);
        let jp_max = max_scale(tiling.nu, ball.p);
        if tiling.j0 > j_max || tiling.j0p > jp_max {
            return Err(Error::Config(format!(
                "minimum scales ({}, {}) exceed maxima ({j_max}, {jp_max})",
                tiling.j0, tiling.j0p
            )));
        }
        let expected_scales = (j_max - tiling.j0 + 1) * (jp_max - tiling.j0p + 1);
        let kernel_len = ball.l * ball.p;
        if phi.len() != kernel_len
            || psi.len() != expected_scales
            || psi.iter().any(|k| k.len() != kernel_len)
        {
            return Err(Error::shape(format!(
                "kernel payload does not match L={} P={} with {expected_scales} scales",
                ball.l, ball.p
            )));
        }
        Ok(WaveletFamily {
            ball,
            tiling,
            j_max,
            jp_max,
            phi,
            psi,
        })
    }

    pub(crate) fn wavelet_kernels_raw(&self) -> &[Vec<f64>] {
        &self.psi
    }

    pub fn scaling_kernel(&self) -> &[f64] {
        &self.phi
    }

    pub fn wavelet_kernel(&self, j: usize, jp: usize) -> &[f64] {
        let idx = (j - self.tiling.j0) * (self.jp_max - self.tiling.j0p + 1)
            + (jp - self.tiling.j0p);
        &self.psi[idx]
    }

    /// Scale pairs in the fixed deterministic order (j outer, j' inner).
    pub fn scales(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let j0 = self.tiling.j0;
        let j0p = self.tiling.j0p;
        let jp_count = self.jp_max - j0p + 1;
        (0..(self.j_max - j0 + 1) * jp_count)
            .map(move |i| (j0 + i / jp_count, j0p + i % jp_count))
    }

    pub fn scale_count(&self) -> usize {
        self.psi.len()
    }
}

/// Values of `k` on the scale grid: `k_tables[j - j0][n] = k(n / base^j)`
/// for `j0 <= j <= j_max + 1`.  Sharing these exact values across adjacent
/// scales makes the admissibility sum telescope in floating point.
fn k_tables(
    gen: &GeneratingFunction,
    j0: usize,
    j_max: usize,
    count: usize,
) -> Vec<Vec<f64>> {
    let mut pow = vec![1.0_f64; j_max + 2];
    for j in 1..=j_max + 1 {
        pow[j] = pow[j - 1] * gen.lambda();
    }
    (j0..=j_max + 1)
        .map(|j| {
            (0..count)
                .map(|n| gen.k(n as f64 / pow[j]))
                .collect()
        })
        .collect()
}

/// Constructs the wavelet family for the given ball and tiling parameters.
pub fn kernel_family(ball: &BallParams, tiling: &TilingParams) -> Result<WaveletFamily> {
    let j_max = max_scale(tiling.lambda, ball.l);
    let jp_max = max_scale(tiling.nu, ball.p);
    if tiling.j0 > j_max {
        return Err(Error::Config(format!(
            "J0 = {} exceeds the maximum angular scale J = {j_max}",
            tiling.j0
        )));
    }
    if tiling.j0p > jp_max {
        return Err(Error::Config(format!(
            "J0' = {} exceeds the maximum radial scale J' = {jp_max}",
            tiling.j0p
        )));
    }
    let gen_l = GeneratingFunction::new(tiling.lambda)?;
    let gen_p = GeneratingFunction::new(tiling.nu)?;
    let k_l = k_tables(&gen_l, tiling.j0, j_max, ball.l);
    let k_p = k_tables(&gen_p, tiling.j0p, jp_max, ball.p);

    let (l, p) = (ball.l, ball.p);
    let mut phi = vec![0.0; l * p];
    for ell in 0..l {
        let norm = ((2.0 * ell as f64 + 1.0) / (4.0 * PI)).sqrt();
        let eta_l = k_l[0][ell];
        for pp in 0..p {
            let eta_p = k_p[0][pp];
            phi[ell * p + pp] = norm * (eta_l + eta_p - eta_l * eta_p).max(0.0).sqrt();
        }
    }

    let mut psi = Vec::with_capacity((j_max - tiling.j0 + 1) * (jp_max - tiling.j0p + 1));
    for j in tiling.j0..=j_max {
        let kappa_l: Vec<f64> = (0..l)
            .map(|ell| {
                let idx = j - tiling.j0;
                (k_l[idx + 1][ell] - k_l[idx][ell]).max(0.0).sqrt()
            })
            .collect();
        for jp in tiling.j0p..=jp_max {
            let idx = jp - tiling.j0p;
            let kappa_p: Vec<f64> = (0..p)
                .map(|pp| (k_p[idx + 1][pp] - k_p[idx][pp]).max(0.0).sqrt())
                .collect();
            let mut kernel = vec![0.0; l * p];
            for ell in 0..l {
                let norm = ((2.0 * ell as f64 + 1.0) / (4.0 * PI)).sqrt() * kappa_l[ell];
                if norm == 0.0 {
                    continue;
                }
                for pp in 0..p {
                    kernel[ell * p + pp] = norm * kappa_p[pp];
                }
            }
            psi.push(kernel);
        }
    }

    Ok(WaveletFamily {
        ball: *ball,
        tiling: *tiling,
        j_max,
        jp_max,
        phi,
        psi,
    })
}

/// Maximum residual of the resolution of the identity,
/// `max_{l,p} | (4 pi / (2l+1)) (|Phi|^2 + sum |Psi|^2) - 1 |`.
pub fn admissibility_check(family: &WaveletFamily) -> f64 {
    let (l, p) = (family.ball.l, family.ball.p);
    let mut worst = 0.0_f64;
    for ell in 0..l {
        let factor = 4.0 * PI / (2.0 * ell as f64 + 1.0);
        for pp in 0..p {
            let idx = ell * p + pp;
            let mut total = family.phi[idx] * family.phi[idx];
            for kernel in &family.psi {
                total += kernel[idx] * kernel[idx];
            }
            worst = worst.max((factor * total - 1.0).abs());
        }
    }
    worst
}

/// Wavelet coefficients of one scale, possibly at reduced band-limits.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletScale {
    pub j: usize,
    pub jp: usize,
    pub coeffs: FlagCoefficients,
}

/// Scaling and wavelet coefficients of a ball signal.
#[derive(Debug, Clone, PartialEq)]
pub struct FlagletCoefficients {
    /// Parameters of the analysed signal (full band-limits).
    pub params: BallParams,
    pub tiling: TilingParams,
    /// Whether wavelet scales are stored at reduced band-limits.
    pub multires: bool,
    /// Scaling coefficients `W^Phi`, always at full band-limits.
    pub scaling: FlagCoefficients,
    /// Wavelet coefficients `W^{Psi^{jj'}}` in scale order (j outer).
    pub wavelets: Vec<WaveletScale>,
}

impl FlagletCoefficients {
    /// Total energy over scaling and wavelet coefficients.
    pub fn energy(&self) -> f64 {
        self.scaling.energy() + self.wavelets.iter().map(|w| w.coeffs.energy()).sum::<f64>()
    }
}

/// Wavelet analysis: harmonic-space convolution of `f` with every kernel.
///
/// With `multires` set, scale `(j, j')` is stored at its reduced band-limits
/// from [`scale_bandlimits`]; the dropped coefficients are exactly zero.
pub fn flaglet_analyze(
    f: &FlagCoefficients,
    family: &WaveletFamily,
    multires: bool,
) -> Result<FlagletCoefficients> {
    if f.params != family.ball {
        return Err(Error::shape(format!(
            "signal parameters {:?} do not match family parameters {:?}",
            f.params, family.ball
        )));
    }
    let params = f.params;
    let p = params.p;

    let mut scaling = FlagCoefficients::zeros(params);
    for ell in 0..params.l {
        let factor = (4.0 * PI / (2.0 * ell as f64 + 1.0)).sqrt();
        for pp in 0..p {
            let kernel = factor * family.phi[ell * p + pp];
            if kernel == 0.0 {
                continue;
            }
            for m in -(ell as i64)..=(ell as i64) {
                let idx = params.index(pp, ell, m);
                scaling.values[idx] = f.values[idx] * kernel;
            }
        }
    }

    let mut wavelets = Vec::with_capacity(family.scale_count());
    for (j, jp) in family.scales() {
        let (l_j, p_jp) = if multires {
            scale_bandlimits(j, jp, &family.tiling, &params)?
        } else {
            (params.l, params.p)
        };
        let sub_params = BallParams::new(l_j, p_jp, params.tau, params.scheme)?;
        let mut out = FlagCoefficients::zeros(sub_params);
        let kernel = family.wavelet_kernel(j, jp);
        for ell in 0..l_j {
            let factor = (4.0 * PI / (2.0 * ell as f64 + 1.0)).sqrt();
            for pp in 0..p_jp {
                let k = factor * kernel[ell * p + pp];
                if k == 0.0 {
                    continue;
                }
                for m in -(ell as i64)..=(ell as i64) {
                    out.values[sub_params.index(pp, ell, m)] =
                        f.values[params.index(pp, ell, m)] * k;
                }
            }
        }
        wavelets.push(WaveletScale {
            j,
            jp,
            coeffs: out,
        });
    }

    Ok(FlagletCoefficients {
        params,
        tiling: family.tiling,
        multires,
        scaling,
        wavelets,
    })
}

/// Exact reconstruction from scaling and wavelet coefficients.
pub fn flaglet_synthesize(
    w: &FlagletCoefficients,
    family: &WaveletFamily,
) -> Result<FlagCoefficients> {
    if w.params != family.ball {
        return Err(Error::shape(format!(
            "coefficient parameters {:?} do not match family parameters {:?}",
            w.params, family.ball
        )));
    }
    if w.tiling != family.tiling {
        return Err(Error::shape(format!(
            "coefficient tiling {:?} does not match family tiling {:?}",
            w.tiling, family.tiling
        )));
    }
    let expected: Vec<(usize, usize)> = family.scales().collect();
    let found: Vec<(usize, usize)> = w.wavelets.iter().map(|s| (s.j, s.jp)).collect();
    if expected != found {
        return Err(Error::shape(format!(
            "scale set {found:?} does not cover the family scales {expected:?}"
        )));
    }

    let params = w.params;
    let p = params.p;
    if w.scaling.params != params {
        return Err(Error::shape(
            "scaling coefficients are not at full band-limits".to_string(),
        ));
    }
    let mut f = FlagCoefficients::zeros(params);
    for ell in 0..params.l {
        let factor = (4.0 * PI / (2.0 * ell as f64 + 1.0)).sqrt();
        for pp in 0..p {
            let kernel = factor * family.phi[ell * p + pp];
            if kernel == 0.0 {
                continue;
            }
            for m in -(ell as i64)..=(ell as i64) {
                let idx = params.index(pp, ell, m);
                f.values[idx] += w.scaling.values[idx] * kernel;
            }
        }
    }
    for scale in &w.wavelets {
        let sub_params = scale.coeffs.params;
        if sub_params.tau != params.tau || sub_params.scheme != params.scheme {
            return Err(Error::shape(format!(
                "scale ({}, {}) carries foreign parameters {:?}",
                scale.j, scale.jp, sub_params
            )));
        }
        let kernel = family.wavelet_kernel(scale.j, scale.jp);
        for ell in 0..sub_params.l.min(params.l) {
            let factor = (4.0 * PI / (2.0 * ell as f64 + 1.0)).sqrt();
            for pp in 0..sub_params.p.min(params.p) {
                let k = factor * kernel[ell * p + pp];
                if k == 0.0 {
                    continue;
                }
                for m in -(ell as i64)..=(ell as i64) {
                    f.values[params.index(pp, ell, m)] +=
                        scale.coeffs.values[sub_params.index(pp, ell, m)] * k;
                }
            }
        }
    }
    Ok(f)
}

/// Total flaglet-space energy; equals the signal energy for an admissible
/// family (tight frame with unit bounds).
pub fn frame_energy(w: &FlagletCoefficients) -> f64 {
    w.energy()
}
