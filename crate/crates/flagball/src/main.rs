//! Command-line interface: transforms, checks and plot-data emitters.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use flagball::ball::{ball_convolve_axisym, BallParams, BallPlan, FlagCoefficients};
use flagball::flaglet::{
    admissibility_check, flaglet_analyze, flaglet_synthesize, frame_energy, kernel_family,
    TilingParams,
};
use flagball::io::{
    dirac_csv, kernel_profile_tables, quadrature_csv, read_file, write_file, FileFormat, Object,
};
use flagball::radial::{radial_quadrature, RadialParams};
use flagball::sphere::SphereScheme;

#[derive(Parser)]
#[command(
    name = "flagball",
    version,
    about = "Exact Fourier-Laguerre and flaglet transforms on the 3D ball"
)]
struct Cli {
    /// Write output files as JSON instead of FLGB binary.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forward transform: ball-signal file -> flag-coeffs file.
    Forward {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Expected angular band-limit (checked against the input header).
        #[arg(long = "L")]
        l: Option<usize>,
        /// Expected radial band-limit (checked against the input header).
        #[arg(long = "P")]
        p: Option<usize>,
        /// Expected radial scale (checked against the input header).
        #[arg(long)]
        tau: Option<f64>,
        /// Expected sampling scheme (checked against the input header).
        #[arg(long)]
        scheme: Option<String>,
    },
    /// Inverse transform: flag-coeffs file -> ball-signal file.
    Inverse {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long = "P")]
        p: Option<usize>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        scheme: Option<String>,
    },
    /// Generate random band-limited coefficients and measure the
    /// coefficients -> samples -> coefficients round-trip error.
    Roundtrip {
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "P")]
        p: usize,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value = "gl")]
        scheme: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exit non-zero if the maximum absolute error exceeds this.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Axisymmetric ball convolution in harmonic space.
    Convolve {
        #[arg(long)]
        input: PathBuf,
        /// Axisymmetric kernel (flag-coeffs file with only m = 0 entries).
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Flaglet analysis: flag-coeffs file -> flaglet-coeffs file.
    WaveletAnalyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 2.0)]
        nu: f64,
        #[arg(long = "J0", default_value_t = 0)]
        j0: usize,
        #[arg(long = "J0p", default_value_t = 0)]
        j0p: usize,
        /// Store each scale at its reduced band-limits.
        #[arg(long)]
        multires: bool,
    },
    /// Flaglet synthesis: flaglet-coeffs file -> flag-coeffs file.
    WaveletSynthesize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Verify the resolution of the identity of the wavelet kernels.
    CheckAdmissibility {
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "P")]
        p: usize,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 2.0)]
        nu: f64,
        #[arg(long = "J0", default_value_t = 0)]
        j0: usize,
        #[arg(long = "J0p", default_value_t = 0)]
        j0p: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Verify tight-frame energy conservation on a random signal.
    CheckFrame {
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "P")]
        p: usize,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value = "gl")]
        scheme: String,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 2.0)]
        nu: f64,
        #[arg(long = "J0", default_value_t = 0)]
        j0: usize,
        #[arg(long = "J0p", default_value_t = 0)]
        j0p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        multires: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// CSV of radial quadrature nodes and weights.
    DumpQuadrature {
        #[arg(long = "P")]
        p: usize,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// CSV radial profiles of band-limited Dirac deltas.
    DumpDirac {
        #[arg(long = "P")]
        p: usize,
        /// Comma-separated delta positions.
        #[arg(long, default_value = "0.2,0.3,0.4")]
        positions: String,
        /// Ball radius; the radial scale puts the last node here.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 2048)]
        points: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// CSV radial/angular profiles of one flaglet kernel, before and after
    /// radial translation.
    DumpKernel {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        jp: usize,
        #[arg(long = "L", default_value_t = 64)]
        l: usize,
        #[arg(long = "P", default_value_t = 64)]
        p: usize,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 2.0)]
        nu: f64,
        #[arg(long = "J0", default_value_t = 0)]
        j0: usize,
        #[arg(long = "J0p", default_value_t = 0)]
        j0p: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Comma-separated radial translations.
        #[arg(long, default_value = "0.2,0.4")]
        s: String,
        #[arg(long, default_value_t = 512)]
        points: usize,
        /// Radial-profile CSV path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Angular-profile CSV path; omitted means not written.
        #[arg(long)]
        angular_output: Option<PathBuf>,
    },
    /// CSV of transform timings and round-trip errors over a grid of sizes.
    Bench {
        /// Comma-separated angular band-limits.
        #[arg(long = "L-list", default_value = "8,16,32")]
        l_list: String,
        /// Comma-separated radial band-limits.
        #[arg(long = "P-list", default_value = "8,16,32")]
        p_list: String,
        #[arg(long, default_value = "gl")]
        scheme: String,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum RunError {
    Usage(String),
    Lib(flagball::Error),
}

impl From<flagball::Error> for RunError {
    fn from(e: flagball::Error) -> Self {
        RunError::Lib(e)
    }
}

type RunResult = Result<u8, RunError>;

fn usage(msg: impl Into<String>) -> RunError {
    RunError::Usage(msg.into())
}

fn parse_scheme(s: &str) -> Result<SphereScheme, RunError> {
    s.parse::<SphereScheme>().map_err(|e| usage(e.to_string()))
}

fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>, RunError> {
    s.split(',')
        .map(|item| {
            item.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("invalid {what} entry '{item}'")))
        })
        .collect()
}

fn parse_usize_list(s: &str, what: &str) -> Result<Vec<usize>, RunError> {
    s.split(',')
        .map(|item| {
            item.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("invalid {what} entry '{item}'")))
        })
        .collect()
}

fn check_params(
    params: &BallParams,
    l: Option<usize>,
    p: Option<usize>,
    tau: Option<f64>,
    scheme: Option<String>,
) -> Result<(), RunError> {
    if let Some(l) = l {
        if l != params.l {
            return Err(usage(format!(
                "--L {l} does not match file (L = {})",
                params.l
            )));
        }
    }
    if let Some(p) = p {
        if p != params.p {
            return Err(usage(format!(
                "--P {p} does not match file (P = {})",
                params.p
            )));
        }
    }
    if let Some(tau) = tau {
        if tau != params.tau {
            return Err(usage(format!(
                "--tau {tau} does not match file (tau = {})",
                params.tau
            )));
        }
    }
    if let Some(scheme) = scheme {
        if parse_scheme(&scheme)? != params.scheme {
            return Err(usage(format!(
                "--scheme {scheme} does not match file (scheme = {})",
                params.scheme
            )));
        }
    }
    Ok(())
}

fn output_format(json: bool) -> FileFormat {
    if json {
        FileFormat::Json
    } else {
        FileFormat::Binary
    }
}

fn emit_csv(csv: &str, output: Option<&Path>) -> Result<(), RunError> {
    match output {
        Some(path) => std::fs::write(path, csv).map_err(|e| RunError::Lib(e.into())),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn object_kind_name(object: &Object) -> &'static str {
    match object {
        Object::BallSignal(_) => "ball-signal",
        Object::FlagCoefficients(_) => "flag-coeffs",
        Object::FlagletCoefficients(_) => "flaglet-coeffs",
        Object::WaveletFamily(_) => "wavelet-family",
        Object::RadialQuadrature(_) => "radial-quadrature",
    }
}

fn run(cli: Cli) -> RunResult {
    let format = output_format(cli.json);
    match cli.command {
        Command::Forward {
            input,
            output,
            l,
            p,
            tau,
            scheme,
        } => {
            let signal = match read_file(&input)? {
                Object::BallSignal(s) => s,
                other => {
                    return Err(usage(format!(
                        "forward expects a ball-signal file, got {}",
                        object_kind_name(&other)
                    )))
                }
            };
            check_params(&signal.params, l, p, tau, scheme)?;
            let coeffs = BallPlan::new(&signal.params)?.forward(&signal)?;
            write_file(&output, &Object::FlagCoefficients(coeffs), format)?;
            Ok(0)
        }
        Command::Inverse {
            input,
            output,
            l,
            p,
            tau,
            scheme,
        } => {
            let coeffs = match read_file(&input)? {
                Object::FlagCoefficients(c) => c,
                other => {
                    return Err(usage(format!(
                        "inverse expects a flag-coeffs file, got {}",
                        object_kind_name(&other)
                    )))
                }
            };
            check_params(&coeffs.params, l, p, tau, scheme)?;
            let signal = BallPlan::new(&coeffs.params)?.inverse(&coeffs)?;
            write_file(&output, &Object::BallSignal(signal), format)?;
            Ok(0)
        }
        Command::Roundtrip {
            l,
            p,
            tau,
            scheme,
            seed,
            tol,
        } => {
            let params = BallParams::new(l, p, tau, parse_scheme(&scheme)?)?;
            let coeffs = FlagCoefficients::random(params, seed);
            let start = Instant::now();
            let plan = BallPlan::new(&params)?;
            let back = plan.forward(&plan.inverse(&coeffs)?)?;
            let elapsed = start.elapsed().as_secs_f64();
            let max_error = coeffs
                .values
                .iter()
                .zip(&back.values)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            println!("max_error {max_error:e}");
            println!("elapsed_seconds {elapsed:.3}");
            Ok(if max_error > tol { 1 } else { 0 })
        }
        Command::Convolve {
            input,
            kernel,
            output,
        } => {
            let f = match read_file(&input)? {
                Object::FlagCoefficients(c) => c,
                other => {
                    return Err(usage(format!(
                        "convolve expects a flag-coeffs input, got {}",
                        object_kind_name(&other)
                    )))
                }
            };
            let h = match read_file(&kernel)? {
                Object::FlagCoefficients(c) => c,
                other => {
                    return Err(usage(format!(
                        "convolve expects a flag-coeffs kernel, got {}",
                        object_kind_name(&other)
                    )))
                }
            };
            let conv = ball_convolve_axisym(&f, &h)?;
            write_file(&output, &Object::FlagCoefficients(conv), format)?;
            Ok(0)
        }
        Command::WaveletAnalyze {
            input,
            output,
            lambda,
            nu,
            j0,
            j0p,
            multires,
        } => {
            let f = match read_file(&input)? {
                Object::FlagCoefficients(c) => c,
                other => {
                    return Err(usage(format!(
                        "wavelet-analyze expects a flag-coeffs file, got {}",
                        object_kind_name(&other)
                    )))
                }
            };
            let tiling = TilingParams::new(lambda, nu, j0, j0p)?;
            let family = kernel_family(&f.params, &tiling)?;
            let w = flaglet_analyze(&f, &family, multires)?;
            write_file(&output, &Object::FlagletCoefficients(w), format)?;
            Ok(0)
        }
        Command::WaveletSynthesize { input, output } => {
            let w = match read_file(&input)? {
                Object::FlagletCoefficients(w) => w,
                other => {
                    return Err(usage(format!(
                        "wavelet-synthesize expects a flaglet-coeffs file, got {}",
                        object_kind_name(&other)
                    )))
                }
            };
            let family = kernel_family(&w.params, &w.tiling)?;
            let f = flaglet_synthesize(&w, &family)?;
            write_file(&output, &Object::FlagCoefficients(f), format)?;
            Ok(0)
        }
        Command::CheckAdmissibility {
            l,
            p,
            tau,
            lambda,
            nu,
            j0,
            j0p,
            tol,
        } => {
            let params = BallParams::new(l, p, tau, SphereScheme::Gl)?;
            let tiling = TilingParams::new(lambda, nu, j0, j0p)?;
            let family = kernel_family(&params, &tiling)?;
            let residual = admissibility_check(&family);
            println!("max_residual {residual:e}");
            Ok(if residual > tol { 1 } else { 0 })
        }
        Command::CheckFrame {
            l,
            p,
            tau,
            scheme,
            lambda,
            nu,
            j0,
            j0p,
            seed,
            multires,
            tol,
        } => {
            let params = BallParams::new(l, p, tau, parse_scheme(&scheme)?)?;
            let tiling = TilingParams::new(lambda, nu, j0, j0p)?;
            let family = kernel_family(&params, &tiling)?;
            let f = FlagCoefficients::random(params, seed);
            let w = flaglet_analyze(&f, &family, multires)?;
            let ratio = frame_energy(&w) / f.energy();
            println!("frame_energy_ratio {ratio:.15}");
            Ok(if (ratio - 1.0).abs() > tol { 1 } else { 0 })
        }
        Command::DumpQuadrature { p, tau, output } => {
            let quad = radial_quadrature(&RadialParams::new(p, tau)?)?;
            emit_csv(&quadrature_csv(&quad)?, output.as_deref())?;
            Ok(0)
        }
        Command::DumpDirac {
            p,
            positions,
            radius,
            points,
            output,
        } => {
            let positions = parse_f64_list(&positions, "position")?;
            let csv = dirac_csv(p, &positions, radius, points)?;
            emit_csv(&csv, output.as_deref())?;
            Ok(0)
        }
        Command::DumpKernel {
            j,
            jp,
            l,
            p,
            lambda,
            nu,
            j0,
            j0p,
            radius,
            s,
            points,
            output,
            angular_output,
        } => {
            let translations = parse_f64_list(&s, "translation")?;
            let tau = RadialParams::with_ball_radius(p, radius)?.tau;
            let ball = BallParams::new(l, p, tau, SphereScheme::Gl)?;
            let tiling = TilingParams::new(lambda, nu, j0, j0p)?;
            let tables =
                kernel_profile_tables(&ball, &tiling, j, jp, &translations, points, radius)?;
            emit_csv(&tables.radial_csv, output.as_deref())?;
            if let Some(path) = angular_output {
                emit_csv(&tables.angular_csv, Some(&path))?;
            }
            Ok(0)
        }
        Command::Bench {
            l_list,
            p_list,
            scheme,
            tau,
            seed,
            output,
        } => {
            let ls = parse_usize_list(&l_list, "L-list")?;
            let ps = parse_usize_list(&p_list, "P-list")?;
            let scheme = parse_scheme(&scheme)?;
            let mut csv = String::from(
                "L,P,scheme,samples,plan_seconds,inverse_seconds,forward_seconds,max_error\n",
            );
            for &l in &ls {
                for &p in &ps {
                    let params = BallParams::new(l, p, tau, scheme)?;
                    let coeffs = FlagCoefficients::random(params, seed);
                    let t0 = Instant::now();
                    let plan = BallPlan::new(&params)?;
                    let t_plan = t0.elapsed().as_secs_f64();
                    let t1 = Instant::now();
                    let signal = plan.inverse(&coeffs)?;
                    let t_inv = t1.elapsed().as_secs_f64();
                    let t2 = Instant::now();
                    let back = plan.forward(&signal)?;
                    let t_fwd = t2.elapsed().as_secs_f64();
                    let max_error = coeffs
                        .values
                        .iter()
                        .zip(&back.values)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max);
                    let samples = signal.values.len();
                    csv.push_str(&format!(
                        "{l},{p},{scheme},{samples},{t_plan:.6},{t_inv:.6},{t_fwd:.6},{max_error:e}\n"
                    ));
                }
            }
            emit_csv(&csv, output.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::ExitCode::from(code),
        Err(RunError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            std::process::ExitCode::from(2)
        }
        Err(RunError::Lib(e)) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(1)
        }
    }
}
