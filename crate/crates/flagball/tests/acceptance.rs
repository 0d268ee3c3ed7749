//! Acceptance suite: one test per headline exactness claim, each printing a
//! pass line with the measured figure (run with `--nocapture` to see them).

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use flagball::ball::{
    ball_convolve_axisym, ball_grid, BallParams, BallPlan, FlagCoefficients,
};
use flagball::flaglet::{
    admissibility_check, flaglet_analyze, flaglet_synthesize, frame_energy, kernel_family,
    TilingParams,
};
use flagball::io::dirac_csv;
use flagball::radial::{
    basis_all, radial_convolve, radial_dirac, radial_quadrature, radial_translate, RadialParams,
    RadialPlan,
};
use flagball::radial::RadialCoefficients;
use flagball::sphere::SphereScheme;

/// Plain Legendre polynomial, independent of the library's implementation.
fn legendre(n: usize, x: f64) -> f64 {
    let mut p_prev = 1.0;
    if n == 0 {
        return p_prev;
    }
    let mut p_curr = x;
    for k in 1..n {
        let k = k as f64;
        let p_next = ((2.0 * k + 1.0) * x * p_curr - k * p_prev) / (k + 1.0);
        p_prev = p_curr;
        p_curr = p_next;
    }
    p_curr
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_1_exact_fourier_laguerre_round_trip() {
    let mut worst_64 = 0.0;
    let mut elapsed_64 = 0.0;
    for (l, tol) in [(16usize, 1e-12), (32, 1e-10), (64, 1e-10)] {
        let params = BallParams::new(l, l, 1.0, SphereScheme::Gl).unwrap();
        let coeffs = FlagCoefficients::random(params, 2024);
        let start = Instant::now();
        let plan = BallPlan::new(&params).unwrap();
        let back = plan.forward(&plan.inverse(&coeffs).unwrap()).unwrap();
        let elapsed = start.elapsed().as_secs_f64();
        let worst = max_abs_diff(&coeffs.values, &back.values);
        assert!(
            worst <= tol,
            "L = P = {l}: round-trip error {worst:e} exceeds {tol:e}"
        );
        if l == 64 {
            worst_64 = worst;
            elapsed_64 = elapsed;
            assert!(
                elapsed <= 60.0,
                "L = P = 64 round-trip took {elapsed:.1} s, budget is 60 s"
            );
        }
    }
    println!(
        "criterion 1 (exact round-trip): PASS - max error {worst_64:e} at L=P=64 in {elapsed_64:.2} s"
    );
}

#[test]
fn criterion_2_sampling_theorem_counts() {
    for (l, expected) in [(2usize, 8usize), (4, 88), (8, 848)] {
        let params = BallParams::new(l, l, 1.0, SphereScheme::Mw).unwrap();
        let n = ball_grid(&params).unwrap().total_samples();
        let formula = l * ((2 * l - 1) * (l - 1) + 1);
        assert_eq!(n, expected, "L = P = {l}");
        assert_eq!(n, formula, "L = P = {l}");
    }
    println!("criterion 2 (sample counts): PASS - N matches P[(2L-1)(L-1)+1] at L=P in {{2,4,8}}");
}

#[test]
fn criterion_3_radial_quadrature_exactness() {
    // moments: sum_i gw_i x_i^k = Gamma(k+3) for k <= 2P-1
    let mut worst_moment = 0.0_f64;
    for p in [1usize, 2, 4, 8, 16, 32] {
        let quad = radial_quadrature(&RadialParams::new(p, 1.0).unwrap()).unwrap();
        let mut gamma = 2.0; // Gamma(3)
        for k in 0..=(2 * p - 1) {
            if k > 0 {
                gamma *= (k + 2) as f64;
            }
            let total: f64 = quad
                .nodes
                .iter()
                .zip(&quad.gauss_weights)
                .map(|(x, w)| w * x.powi(k as i32))
                .sum();
            let rel = ((total - gamma) / gamma).abs();
            worst_moment = worst_moment.max(rel);
            assert!(rel <= 1e-12, "P={p} k={k}: relative error {rel:e}");
        }
    }

    // orthonormality of the first 64 basis functions under the rule
    let mut worst_ortho = 0.0_f64;
    for tau in [0.5, 1.0, 2.0] {
        let plan = RadialPlan::new(&RadialParams::new(64, tau).unwrap()).unwrap();
        let w = &plan.quadrature().weights;
        for p in 0..64 {
            for q in p..64 {
                let sum: f64 = (0..64)
                    .map(|i| w[i] * plan.basis_at_node(p, i) * plan.basis_at_node(q, i))
                    .sum();
                let target = if p == q { 1.0 } else { 0.0 };
                worst_ortho = worst_ortho.max((sum - target).abs());
            }
        }
    }
    assert!(
        worst_ortho <= 1e-12,
        "orthonormality residual {worst_ortho:e}"
    );
    println!(
        "criterion 3 (radial quadrature): PASS - moment error {worst_moment:e}, orthonormality {worst_ortho:e}"
    );
}

#[test]
fn criterion_4_translation_is_convolution_with_dirac() {
    let params = RadialParams::new(128, 1.0).unwrap();
    let coeffs = {
        let basis = basis_all(&params, 1.3).unwrap();
        // deterministic non-trivial complex coefficients
        let values = (0..128)
            .map(|p| Complex64::new(basis[p] + 0.1 * (p as f64).sin(), (p as f64 * 0.3).cos()))
            .collect();
        RadialCoefficients::new(values, params).unwrap()
    };
    let mut worst = 0.0_f64;
    for i in 0..=40 {
        let s = 0.15 * i as f64;
        let translated = radial_translate(&coeffs, s).unwrap();
        let convolved = radial_convolve(&coeffs, &radial_dirac(s, &params).unwrap()).unwrap();
        worst = worst.max(max_abs_diff(&translated.values, &convolved.values));
    }
    assert!(worst <= 1e-14, "identity violated by {worst:e}");
    println!(
        "criterion 4 (translation = convolution with delta): PASS - max deviation {worst:e} at P=128"
    );
}

#[test]
fn criterion_5_ball_convolution_matches_quadrature_oracle() {
    let params = BallParams::new(8, 8, 1.0, SphereScheme::Gl).unwrap();
    let plan = BallPlan::new(&params).unwrap();
    let grid = plan.grid();
    let n_sphere = grid.sphere.total_samples();

    let f = FlagCoefficients::random(params, 55);
    // axisymmetric kernel with complex m = 0 entries
    let mut h = FlagCoefficients::zeros(params);
    let raw = FlagCoefficients::random(params, 56);
    for pp in 0..params.p {
        for ell in 0..params.l {
            h.set(pp, ell, 0, raw.get(pp, ell, 0));
        }
    }

    let f_samples = plan.inverse(&f).unwrap();
    let conv = ball_convolve_axisym(&f, &h).unwrap();
    let conv_samples = plan.inverse(&conv).unwrap();

    // translation points: a spread of grid points (shell, ring, longitude)
    let mut points = Vec::new();
    for &shell in &[0usize, 2, 4, 7] {
        for &ring in &[0usize, 3, 5, 7] {
            for &lon in &[0usize, 6] {
                points.push((shell, ring, lon.min(grid.sphere.ring_sizes[ring] - 1)));
            }
        }
    }
    assert!(points.len() >= 20);

    // radial basis values at every node, K_p(r_i)
    let basis_at_node: Vec<Vec<f64>> = grid
        .radial
        .nodes
        .iter()
        .map(|&r| basis_all(&params.radial(), r).unwrap())
        .collect();
    let zonal_norm: Vec<f64> = (0..params.l)
        .map(|ell| ((2 * ell + 1) as f64 / (4.0 * PI)).sqrt())
        .collect();

    let mut worst = 0.0_f64;
    for &(shell0, ring0, lon0) in &points {
        let r0_basis = &basis_at_node[shell0];
        let theta0 = grid.sphere.colatitudes[ring0];
        let phi0 = grid.sphere.longitude(ring0, lon0);

        // radial part of the translated kernel per (l, shell):
        // c_l(i) = sum_p K_p(r_0) h_l0p K_p(r_i)
        let mut c = vec![Complex64::new(0.0, 0.0); params.l * params.p];
        for ell in 0..params.l {
            for shell in 0..params.p {
                let mut acc = Complex64::new(0.0, 0.0);
                for pp in 0..params.p {
                    acc += h.get(pp, ell, 0) * (r0_basis[pp] * basis_at_node[shell][pp]);
                }
                c[ell * params.p + shell] = acc;
            }
        }

        // brute-force quadrature of <f | T_{r0} h> over the ball grid
        let mut brute = Complex64::new(0.0, 0.0);
        for shell in 0..params.p {
            for ring in 0..grid.sphere.rings() {
                let theta = grid.sphere.colatitudes[ring];
                let w = grid.sample_weight(shell, ring);
                let offset = shell * n_sphere + grid.sphere.ring_offset(ring);
                for j in 0..grid.sphere.ring_sizes[ring] {
                    let phi = grid.sphere.longitude(ring, j);
                    let cos_gamma = theta0.cos() * theta.cos()
                        + theta0.sin() * theta.sin() * (phi - phi0).cos();
                    let mut kernel = Complex64::new(0.0, 0.0);
                    for ell in 0..params.l {
                        kernel += c[ell * params.p + shell]
                            * (zonal_norm[ell] * legendre(ell, cos_gamma));
                    }
                    brute += w * f_samples.values[offset + j] * kernel.conj();
                }
            }
        }

        let harmonic =
            conv_samples.values[shell0 * n_sphere + grid.sphere.ring_offset(ring0) + lon0];
        worst = worst.max((brute - harmonic).norm());
    }
    assert!(worst <= 1e-10, "oracle deviation {worst:e}");
    println!(
        "criterion 5 (convolution oracle): PASS - max deviation {worst:e} over {} points",
        points.len()
    );
}

#[test]
fn criterion_6_admissibility_at_desk_scale() {
    let params = BallParams::new(64, 64, 1.0, SphereScheme::Gl).unwrap();
    let family = kernel_family(&params, &TilingParams::dyadic()).unwrap();
    let residual = admissibility_check(&family);
    assert!(residual <= 1e-12, "admissibility residual {residual:e}");
    println!(
        "criterion 6 (admissibility): PASS - max residual {residual:e} at L=P=64, lambda=nu=2"
    );
}

#[test]
fn criterion_7_tight_frame_and_reconstruction() {
    let params = BallParams::new(32, 32, 1.0, SphereScheme::Gl).unwrap();
    let family = kernel_family(&params, &TilingParams::dyadic()).unwrap();
    let mut worst_ratio = 0.0_f64;
    let mut worst_rt = 0.0_f64;
    let mut worst_mr = 0.0_f64;
    for seed in 0..10u64 {
        let f = FlagCoefficients::random(params, seed);
        let w_full = flaglet_analyze(&f, &family, false).unwrap();
        let w_multi = flaglet_analyze(&f, &family, true).unwrap();

        let ratio = frame_energy(&w_full) / f.energy();
        worst_ratio = worst_ratio.max((ratio - 1.0).abs());

        let back_full = flaglet_synthesize(&w_full, &family).unwrap();
        worst_rt = worst_rt.max(max_abs_diff(&f.values, &back_full.values));

        let back_multi = flaglet_synthesize(&w_multi, &family).unwrap();
        worst_mr = worst_mr.max(max_abs_diff(&back_full.values, &back_multi.values));
    }
    assert!(worst_ratio <= 1e-10, "frame ratio deviation {worst_ratio:e}");
    assert!(worst_rt <= 1e-10, "round-trip error {worst_rt:e}");
    assert!(worst_mr <= 1e-12, "multiresolution mismatch {worst_mr:e}");
    println!(
        "criterion 7 (tight frame): PASS - ratio dev {worst_ratio:e}, round-trip {worst_rt:e}, multires {worst_mr:e}"
    );
}

struct DiracTable {
    radii: Vec<f64>,
    columns: Vec<Vec<f64>>,
}

fn parse_dirac_csv(csv: &str, n_positions: usize) -> DiracTable {
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert_eq!(header.split(',').count(), n_positions + 1);
    let mut radii = Vec::new();
    let mut columns = vec![Vec::new(); n_positions];
    for line in lines {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(fields.len(), n_positions + 1, "ragged CSV row");
        radii.push(fields[0]);
        for (c, col) in columns.iter_mut().enumerate() {
            col.push(fields[c + 1]);
        }
    }
    DiracTable { radii, columns }
}

#[test]
fn criterion_8_band_limited_dirac_profiles() {
    let positions = [0.2, 0.3, 0.4];
    // relative tail oscillation per band-limit, per position
    let mut tail_ratio = vec![Vec::new(); positions.len()];
    let mut peak_dev_worst = 0.0_f64;
    for p in [64usize, 128, 256] {
        let csv = dirac_csv(p, &positions, 1.0, 4096).unwrap();
        let table = parse_dirac_csv(&csv, positions.len());
        let params = RadialParams::with_ball_radius(p, 1.0).unwrap();
        let quad = radial_quadrature(&params).unwrap();
        for (c, &s) in positions.iter().enumerate() {
            // radial node spacing around s
            let hi = quad.nodes.iter().position(|&n| n > s).unwrap();
            let spacing = quad.nodes[hi] - quad.nodes[hi - 1];

            let mut peak = 0.0_f64;
            let mut peak_r = 0.0;
            let mut tail = 0.0_f64;
            for (r, v) in table.radii.iter().zip(&table.columns[c]) {
                let a = v.abs();
                if a > peak {
                    peak = a;
                    peak_r = *r;
                }
                if *r >= 0.6 && a > tail {
                    tail = a;
                }
            }
            let dev = (peak_r - s).abs();
            peak_dev_worst = peak_dev_worst.max(dev / spacing);
            assert!(
                dev < spacing,
                "P={p} s={s}: peak at {peak_r} deviates {dev:.5} >= node spacing {spacing:.5}"
            );
            tail_ratio[c].push(tail / peak);
        }
    }
    for (c, ratios) in tail_ratio.iter().enumerate() {
        assert!(
            ratios[1] < ratios[0] && ratios[2] < ratios[1],
            "s={}: tail oscillation {ratios:?} not decreasing as P doubles",
            positions[c]
        );
    }
    println!(
        "criterion 8 (Dirac profiles): PASS - worst peak deviation {peak_dev_worst:.3} node spacings, oscillations decay with P"
    );
}

#[test]
fn criterion_9_angular_aperture_invariant_under_radial_translation() {
    // Fig. 2 configuration: j = j' = 5 at L = P = 64 on the unit ball
    let p = 64usize;
    let tau = RadialParams::with_ball_radius(p, 1.0).unwrap().tau;
    let params = BallParams::new(64, p, tau, SphereScheme::Gl).unwrap();
    let tiling = TilingParams::dyadic();
    let family = kernel_family(&params, &tiling).unwrap();
    let kernel = family.wavelet_kernel(5, 5);

    let radial = params.radial();
    let n_gamma = 512;
    let mut profiles = Vec::new();
    for &s in &[0.2, 0.4] {
        let k_s = basis_all(&radial, s).unwrap();
        // peak radius of the translated kernel: largest amplitude of the
        // radial density r^2 psi(r, 0) along the symmetry axis
        let mut peak_r = 0.0;
        let mut peak = 0.0_f64;
        for i in 0..2048 {
            let r = i as f64 / 2047.0;
            let basis = basis_all(&radial, r).unwrap();
            let mut axis = 0.0;
            for ell in 0..params.l {
                let mut radial_part = 0.0;
                for pp in 0..p {
                    radial_part += kernel[ell * p + pp] * k_s[pp] * basis[pp];
                }
                axis += radial_part * ((2 * ell + 1) as f64 / (4.0 * PI)).sqrt();
            }
            let amplitude = (r * r * axis).abs();
            if amplitude > peak {
                peak = amplitude;
                peak_r = r;
            }
        }
        // angular coefficients at the peak radius
        let basis_peak = basis_all(&radial, peak_r).unwrap();
        let mut c = vec![0.0_f64; params.l];
        for ell in 0..params.l {
            for pp in 0..p {
                c[ell] += kernel[ell * p + pp] * k_s[pp] * basis_peak[pp];
            }
        }
        // normalise over the sphere: L2 norm via Parseval on the m=0 line
        let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(norm > 0.0, "s={s}: empty angular profile");
        let sign = {
            let at_zero: f64 = (0..params.l)
                .map(|ell| c[ell] * ((2 * ell + 1) as f64 / (4.0 * PI)).sqrt())
                .sum();
            at_zero.signum()
        };
        let profile: Vec<f64> = (0..n_gamma)
            .map(|i| {
                let gamma = PI * i as f64 / (n_gamma - 1) as f64;
                (0..params.l)
                    .map(|ell| {
                        c[ell] / norm
                            * sign
                            * ((2 * ell + 1) as f64 / (4.0 * PI)).sqrt()
                            * legendre(ell, gamma.cos())
                    })
                    .sum()
            })
            .collect();
        profiles.push((s, peak_r, profile));
    }

    let (s1, r1, ref p1) = profiles[0];
    let (s2, r2, ref p2) = profiles[1];
    assert!(r2 > r1, "translated peak did not move outward");
    let worst = p1
        .iter()
        .zip(p2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(
        worst <= 1e-10,
        "normalised angular profiles at s={s1} and s={s2} differ by {worst:e}"
    );
    println!(
        "criterion 9 (aperture invariance): PASS - profiles at s=0.2 (peak r={r1:.3}) and s=0.4 (peak r={r2:.3}) differ by {worst:e}"
    );
}
