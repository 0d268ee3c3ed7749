//! Serialization and plot-data emitters.
//!
//! The binary container starts with the magic bytes `FLGB`, a `u16` format
//! version and a kind tag, followed by a little-endian parameter block and a
//! payload of little-endian `f64` values (interleaved re/im pairs for complex
//! arrays).  Payload lengths are fully determined by the parameter block, so
//! truncation is detected and reported with byte offsets.  Round-trips are
//! bitwise lossless.  A JSON representation of the same content is available
//! for inspection of small objects; readers tell the two apart by sniffing
//! the first byte.
//!
//! CSV emitters use `.` as decimal separator, `,` as delimiter and LF line
//! endings, one header row, and reject non-finite values.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ball::{BallParams, BallSignal, FlagCoefficients};
use crate::error::{Error, Result};
use crate::flaglet::{
    kernel_family, scale_bandlimits, FlagletCoefficients, TilingParams, WaveletFamily,
    WaveletScale,
};
use crate::gauss::legendre;
use crate::radial::{basis_all, RadialParams, RadialQuadrature};
use crate::sphere::SphereScheme;

const MAGIC: [u8; 4] = *b"FLGB";
const VERSION: u16 = 1;

/// Every serializable object kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Object {
    BallSignal(BallSignal),
    FlagCoefficients(FlagCoefficients),
    FlagletCoefficients(FlagletCoefficients),
    WaveletFamily(WaveletFamily),
    RadialQuadrature(RadialQuadrature),
}

/// On-disk representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Binary,
    Json,
}

fn kind_tag(object: &Object) -> u8 {
    match object {
        Object::BallSignal(_) => 1,
        Object::FlagCoefficients(_) => 2,
        Object::FlagletCoefficients(_) => 3,
        Object::WaveletFamily(_) => 4,
        Object::RadialQuadrature(_) => 5,
    }
}

fn scheme_tag(scheme: SphereScheme) -> u8 {
    match scheme {
        SphereScheme::Gl => 0,
        SphereScheme::Mw => 1,
    }
}

fn scheme_from_tag(tag: u8, offset: u64) -> Result<SphereScheme> {
    match tag {
        0 => Ok(SphereScheme::Gl),
        1 => Ok(SphereScheme::Mw),
        other => Err(Error::Format {
            offset,
            message: format!("unknown scheme tag {other}"),
        }),
    }
}

// ---------------------------------------------------------------------------
// binary writer
// ---------------------------------------------------------------------------

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn new() -> Self {
        Writer { buf: Vec::new() }
    }

    fn offset(&self) -> u64 {
        self.buf.len() as u64
    }

    fn put_u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn put_u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn put_u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    fn put_f64(&mut self, v: f64) -> Result<()> {
        if !v.is_finite() {
            return Err(Error::Format {
                offset: self.offset(),
                message: format!("refusing to write non-finite value {v}"),
            });
        }
        self.buf.extend_from_slice(&v.to_le_bytes());
        Ok(())
    }

    fn put_f64_slice(&mut self, vs: &[f64]) -> Result<()> {
        for &v in vs {
            self.put_f64(v)?;
        }
        Ok(())
    }

    fn put_complex_slice(&mut self, vs: &[Complex64]) -> Result<()> {
        for v in vs {
            self.put_f64(v.re)?;
            self.put_f64(v.im)?;
        }
        Ok(())
    }
}

fn write_ball_header(w: &mut Writer, params: &BallParams) -> Result<()> {
    w.put_u8(scheme_tag(params.scheme));
    w.put_u32(params.l as u32);
    w.put_u32(params.p as u32);
    w.put_f64(params.tau)
}

fn write_tiling_block(w: &mut Writer, tiling: &TilingParams, multires: bool) -> Result<()> {
    w.put_f64(tiling.lambda)?;
    w.put_f64(tiling.nu)?;
    w.put_u32(tiling.j0 as u32);
    w.put_u32(tiling.j0p as u32);
    w.put_u8(multires as u8);
    Ok(())
}

/// Serializes an object to bytes in the binary container format.
pub fn to_bytes(object: &Object) -> Result<Vec<u8>> {
    let mut w = Writer::new();
    w.buf.extend_from_slice(&MAGIC);
    w.put_u16(VERSION);
    w.put_u8(kind_tag(object));
    match object {
        Object::BallSignal(signal) => {
            write_ball_header(&mut w, &signal.params)?;
            w.put_complex_slice(&signal.values)?;
        }
        Object::FlagCoefficients(coeffs) => {
            write_ball_header(&mut w, &coeffs.params)?;
            w.put_complex_slice(&coeffs.values)?;
        }
        Object::FlagletCoefficients(fc) => {
            write_ball_header(&mut w, &fc.params)?;
            write_tiling_block(&mut w, &fc.tiling, fc.multires)?;
            w.put_complex_slice(&fc.scaling.values)?;
            for scale in &fc.wavelets {
                w.put_complex_slice(&scale.coeffs.values)?;
            }
        }
        Object::WaveletFamily(family) => {
            write_ball_header(&mut w, &family.ball)?;
            write_tiling_block(&mut w, &family.tiling, false)?;
            w.put_f64_slice(family.scaling_kernel())?;
            for kernel in family.wavelet_kernels_raw() {
                w.put_f64_slice(kernel)?;
            }
        }
        Object::RadialQuadrature(quad) => {
            w.put_u8(0);
            w.put_u32(0);
            w.put_u32(quad.params.p as u32);
            w.put_f64(quad.params.tau)?;
            w.put_f64_slice(&quad.nodes)?;
            w.put_f64_slice(&quad.weights)?;
            w.put_f64_slice(&quad.gauss_weights)?;
        }
    }
    Ok(w.buf)
}

// ---------------------------------------------------------------------------
// binary reader
// ---------------------------------------------------------------------------

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn offset(&self) -> u64 {
        self.pos as u64
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Format {
                offset: self.offset(),
                message: format!(
                    "truncated file: expected {n} more bytes for {what}, found {}",
                    self.buf.len() - self.pos
                ),
            });
        }
        let slice = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn get_u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn get_u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn get_u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn get_f64(&mut self, what: &str) -> Result<f64> {
        let offset = self.offset();
        let v = f64::from_le_bytes(self.take(8, what)?.try_into().unwrap());
        if !v.is_finite() {
            return Err(Error::Format {
                offset,
                message: format!("non-finite value {v} in {what}"),
            });
        }
        Ok(v)
    }

    fn get_f64_vec(&mut self, n: usize, what: &str) -> Result<Vec<f64>> {
        let offset = self.offset();
        if self.pos + 8 * n > self.buf.len() {
            return Err(Error::Format {
                offset,
                message: format!(
                    "truncated payload: expected {} bytes for {what}, found {}",
                    8 * n,
                    self.buf.len() - self.pos
                ),
            });
        }
        (0..n).map(|_| self.get_f64(what)).collect()
    }

    fn get_complex_vec(&mut self, n: usize, what: &str) -> Result<Vec<Complex64>> {
        let offset = self.offset();
        if self.pos + 16 * n > self.buf.len() {
            return Err(Error::Format {
                offset,
                message: format!(
                    "truncated payload: expected {} bytes for {what}, found {}",
                    16 * n,
                    self.buf.len() - self.pos
                ),
            });
        }
        (0..n)
            .map(|_| {
                let re = self.get_f64(what)?;
                let im = self.get_f64(what)?;
                Ok(Complex64::new(re, im))
            })
            .collect()
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Format {
                offset: self.offset(),
                message: format!(
                    "trailing data: payload complete but {} bytes remain",
                    self.buf.len() - self.pos
                ),
            });
        }
        Ok(())
    }
}

fn read_ball_header(r: &mut Reader) -> Result<BallParams> {
    let scheme_offset = r.offset();
    let scheme = scheme_from_tag(r.get_u8("scheme tag")?, scheme_offset)?;
    let header_offset = r.offset();
    let l = r.get_u32("L")? as usize;
    let p = r.get_u32("P")? as usize;
    let tau = r.get_f64("tau")?;
    BallParams::new(l, p, tau, scheme).map_err(|e| Error::Format {
        offset: header_offset,
        message: format!("invalid parameters: {e}"),
    })
}

fn read_tiling_block(r: &mut Reader) -> Result<(TilingParams, bool)> {
    let offset = r.offset();
    let lambda = r.get_f64("lambda")?;
    let nu = r.get_f64("nu")?;
    let j0 = r.get_u32("J0")? as usize;
    let j0p = r.get_u32("J0p")? as usize;
    let multires = match r.get_u8("multires flag")? {
        0 => false,
        1 => true,
        other => {
            return Err(Error::Format {
                offset: r.offset() - 1,
                message: format!("invalid multires flag {other}"),
            })
        }
    };
    let tiling = TilingParams::new(lambda, nu, j0, j0p).map_err(|e| Error::Format {
        offset,
        message: format!("invalid tiling parameters: {e}"),
    })?;
    Ok((tiling, multires))
}

/// Deserializes an object from the binary container format.
pub fn from_bytes(buf: &[u8]) -> Result<Object> {
    let mut r = Reader::new(buf);
    let magic = r.take(4, "magic")?;
    if magic != MAGIC {
        return Err(Error::Format {
            offset: 0,
            message: format!("bad magic bytes {magic:02x?}, expected \"FLGB\""),
        });
    }
    let version = r.get_u16("version")?;
    if version != VERSION {
        return Err(Error::Format {
            offset: 4,
            message: format!("unsupported format version {version}, expected {VERSION}"),
        });
    }
    let kind = r.get_u8("kind tag")?;
    let object = match kind {
        1 => {
            let params = read_ball_header(&mut r)?;
            let n = params.p * params.sphere().sample_count();
            let values = r.get_complex_vec(n, "ball-signal payload")?;
            Object::BallSignal(BallSignal::new(values, params)?)
        }
        2 => {
            let params = read_ball_header(&mut r)?;
            let values = r.get_complex_vec(params.coeff_count(), "flag-coeffs payload")?;
            Object::FlagCoefficients(FlagCoefficients::new(values, params)?)
        }
        3 => {
            let params = read_ball_header(&mut r)?;
            let (tiling, multires) = read_tiling_block(&mut r)?;
            let scaling = FlagCoefficients::new(
                r.get_complex_vec(params.coeff_count(), "scaling payload")?,
                params,
            )?;
            let family = kernel_family(&params, &tiling)?;
            let mut wavelets = Vec::with_capacity(family.scale_count());
            for (j, jp) in family.scales() {
                let (l_j, p_jp) = if multires {
                    scale_bandlimits(j, jp, &tiling, &params)?
                } else {
                    (params.l, params.p)
                };
                let sub = BallParams::new(l_j, p_jp, params.tau, params.scheme)?;
                let values = r.get_complex_vec(
                    sub.coeff_count(),
                    &format!("wavelet scale ({j},{jp}) payload"),
                )?;
                wavelets.push(WaveletScale {
                    j,
                    jp,
                    coeffs: FlagCoefficients::new(values, sub)?,
                });
            }
            r.expect_end()?;
            Object::FlagletCoefficients(FlagletCoefficients {
                params,
                tiling,
                multires,
                scaling,
                wavelets,
            })
        }
        4 => {
            let params = read_ball_header(&mut r)?;
            let (tiling, _) = read_tiling_block(&mut r)?;
            // scale count is fixed by (params, tiling)
            let probe = kernel_family(&params, &tiling)?;
            let kernel_len = params.l * params.p;
            let phi = r.get_f64_vec(kernel_len, "scaling kernel payload")?;
            let mut psi = Vec::with_capacity(probe.scale_count());
            for (j, jp) in probe.scales() {
                psi.push(r.get_f64_vec(
                    kernel_len,
                    &format!("wavelet kernel ({j},{jp}) payload"),
                )?);
            }
            r.expect_end()?;
            Object::WaveletFamily(WaveletFamily::from_parts(params, tiling, phi, psi)?)
        }
        5 => {
            let _scheme = r.get_u8("scheme tag")?;
            let _l = r.get_u32("L")?;
            let header_offset = r.offset();
            let p = r.get_u32("P")? as usize;
            let tau = r.get_f64("tau")?;
            let params = RadialParams::new(p, tau).map_err(|e| Error::Format {
                offset: header_offset,
                message: format!("invalid parameters: {e}"),
            })?;
            let nodes = r.get_f64_vec(p, "quadrature nodes")?;
            let weights = r.get_f64_vec(p, "quadrature weights")?;
            let gauss_weights = r.get_f64_vec(p, "gauss weights")?;
            r.expect_end()?;
            Object::RadialQuadrature(RadialQuadrature {
                params,
                nodes,
                weights,
                gauss_weights,
            })
        }
        other => {
            return Err(Error::Format {
                offset: 6,
                message: format!("unknown kind tag {other}"),
            })
        }
    };
    if matches!(
        object,
        Object::BallSignal(_) | Object::FlagCoefficients(_)
    ) {
        // fixed-size kinds: anything after the payload is an error
        Reader {
            buf,
            pos: buf.len(),
        }
        .expect_end()?;
    }
    Ok(object)
}

// ---------------------------------------------------------------------------
// JSON sidecar
// ---------------------------------------------------------------------------

fn complex_to_pairs(vs: &[Complex64]) -> Vec<[f64; 2]> {
    vs.iter().map(|v| [v.re, v.im]).collect()
}

fn pairs_to_complex(vs: &[[f64; 2]]) -> Result<Vec<Complex64>> {
    vs.iter()
        .map(|[re, im]| {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::Format {
                    offset: 0,
                    message: format!("non-finite value [{re}, {im}] in JSON payload"),
                });
            }
            Ok(Complex64::new(*re, *im))
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct JsonScale {
    j: usize,
    jp: usize,
    l: usize,
    p: usize,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct JsonKernel {
    j: usize,
    jp: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum JsonObject {
    BallSignal {
        l: usize,
        p: usize,
        tau: f64,
        scheme: String,
        values: Vec<[f64; 2]>,
    },
    FlagCoeffs {
        l: usize,
        p: usize,
        tau: f64,
        scheme: String,
        values: Vec<[f64; 2]>,
    },
    FlagletCoeffs {
        l: usize,
        p: usize,
        tau: f64,
        scheme: String,
        lambda: f64,
        nu: f64,
        j0: usize,
        j0p: usize,
        multires: bool,
        scaling: Vec<[f64; 2]>,
        wavelets: Vec<JsonScale>,
    },
    WaveletFamily {
        l: usize,
        p: usize,
        tau: f64,
        scheme: String,
        lambda: f64,
        nu: f64,
        j0: usize,
        j0p: usize,
        phi: Vec<f64>,
        psi: Vec<JsonKernel>,
    },
    RadialQuadrature {
        p: usize,
        tau: f64,
        nodes: Vec<f64>,
        weights: Vec<f64>,
        gauss_weights: Vec<f64>,
    },
}

/// Serializes an object to the JSON sidecar representation.
pub fn to_json(object: &Object) -> Result<String> {
    let json = match object {
        Object::BallSignal(s) => JsonObject::BallSignal {
            l: s.params.l,
            p: s.params.p,
            tau: s.params.tau,
            scheme: s.params.scheme.to_string(),
            values: complex_to_pairs(&s.values),
        },
        Object::FlagCoefficients(c) => JsonObject::FlagCoeffs {
            l: c.params.l,
            p: c.params.p,
            tau: c.params.tau,
            scheme: c.params.scheme.to_string(),
            values: complex_to_pairs(&c.values),
        },
        Object::FlagletCoefficients(fc) => JsonObject::FlagletCoeffs {
            l: fc.params.l,
            p: fc.params.p,
            tau: fc.params.tau,
            scheme: fc.params.scheme.to_string(),
            lambda: fc.tiling.lambda,
            nu: fc.tiling.nu,
            j0: fc.tiling.j0,
            j0p: fc.tiling.j0p,
            multires: fc.multires,
            scaling: complex_to_pairs(&fc.scaling.values),
            wavelets: fc
                .wavelets
                .iter()
                .map(|s| JsonScale {
                    j: s.j,
                    jp: s.jp,
                    l: s.coeffs.params.l,
                    p: s.coeffs.params.p,
                    values: complex_to_pairs(&s.coeffs.values),
                })
                .collect(),
        },
        Object::WaveletFamily(f) => JsonObject::WaveletFamily {
            l: f.ball.l,
            p: f.ball.p,
            tau: f.ball.tau,
            scheme: f.ball.scheme.to_string(),
            lambda: f.tiling.lambda,
            nu: f.tiling.nu,
            j0: f.tiling.j0,
            j0p: f.tiling.j0p,
            phi: f.scaling_kernel().to_vec(),
            psi: f
                .scales()
                .zip(f.wavelet_kernels_raw())
                .map(|((j, jp), values)| JsonKernel {
                    j,
                    jp,
                    values: values.clone(),
                })
                .collect(),
        },
        Object::RadialQuadrature(q) => JsonObject::RadialQuadrature {
            p: q.params.p,
            tau: q.params.tau,
            nodes: q.nodes.clone(),
            weights: q.weights.clone(),
            gauss_weights: q.gauss_weights.clone(),
        },
    };
    serde_json::to_string_pretty(&json).map_err(|e| Error::Format {
        offset: 0,
        message: format!("JSON encoding failed: {e}"),
    })
}

/// Deserializes an object from the JSON sidecar representation.
pub fn from_json(text: &str) -> Result<Object> {
    let json: JsonObject = serde_json::from_str(text).map_err(|e| Error::Format {
        offset: e.column() as u64,
        message: format!("JSON decoding failed: {e}"),
    })?;
    let object = match json {
        JsonObject::BallSignal {
            l,
            p,
            tau,
            scheme,
            values,
        } => {
            let params = BallParams::new(l, p, tau, scheme.parse()?)?;
            Object::BallSignal(BallSignal::new(pairs_to_complex(&values)?, params)?)
        }
        JsonObject::FlagCoeffs {
            l,
            p,
            tau,
            scheme,
            values,
        } => {
            let params = BallParams::new(l, p, tau, scheme.parse()?)?;
            Object::FlagCoefficients(FlagCoefficients::new(pairs_to_complex(&values)?, params)?)
        }
        JsonObject::FlagletCoeffs {
            l,
            p,
            tau,
            scheme,
            lambda,
            nu,
            j0,
            j0p,
            multires,
            scaling,
            wavelets,
        } => {
            let params = BallParams::new(l, p, tau, scheme.parse()?)?;
            let tiling = TilingParams::new(lambda, nu, j0, j0p)?;
            let scaling = FlagCoefficients::new(pairs_to_complex(&scaling)?, params)?;
            let mut scales = Vec::with_capacity(wavelets.len());
            for s in wavelets {
                let sub = BallParams::new(s.l, s.p, tau, params.scheme)?;
                scales.push(WaveletScale {
                    j: s.j,
                    jp: s.jp,
                    coeffs: FlagCoefficients::new(pairs_to_complex(&s.values)?, sub)?,
                });
            }
            Object::FlagletCoefficients(FlagletCoefficients {
                params,
                tiling,
                multires,
                scaling,
                wavelets: scales,
            })
        }
        JsonObject::WaveletFamily {
            l,
            p,
            tau,
            scheme,
            lambda,
            nu,
            j0,
            j0p,
            phi,
            psi,
        } => {
            let params = BallParams::new(l, p, tau, scheme.parse()?)?;
            let tiling = TilingParams::new(lambda, nu, j0, j0p)?;
            let kernels: Vec<Vec<f64>> = psi.into_iter().map(|k| k.values).collect();
            Object::WaveletFamily(WaveletFamily::from_parts(params, tiling, phi, kernels)?)
        }
        JsonObject::RadialQuadrature {
            p,
            tau,
            nodes,
            weights,
            gauss_weights,
        } => {
            let params = RadialParams::new(p, tau)?;
            if nodes.len() != p || weights.len() != p || gauss_weights.len() != p {
                return Err(Error::shape(format!(
                    "quadrature arrays must have length P={p}"
                )));
            }
            Object::RadialQuadrature(RadialQuadrature {
                params,
                nodes,
                weights,
                gauss_weights,
            })
        }
    };
    Ok(object)
}

// ---------------------------------------------------------------------------
// file front end
// ---------------------------------------------------------------------------

/// Writes an object to `path` in the requested format.
pub fn write_file(path: &Path, object: &Object, format: FileFormat) -> Result<()> {
    let bytes = match format {
        FileFormat::Binary => to_bytes(object)?,
        FileFormat::Json => to_json(object)?.into_bytes(),
    };
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Reads an object from `path`, sniffing the format from the first byte.
pub fn read_file(path: &Path) -> Result<Object> {
    let bytes = std::fs::read(path)?;
    match bytes.first() {
        Some(b'{') => from_json(std::str::from_utf8(&bytes).map_err(|e| Error::Format {
            offset: e.valid_up_to() as u64,
            message: "file is neither FLGB binary nor UTF-8 JSON".to_string(),
        })?),
        _ => from_bytes(&bytes),
    }
}

// ---------------------------------------------------------------------------
// CSV emitters
// ---------------------------------------------------------------------------

fn push_row(out: &mut String, values: &[f64]) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Domain(format!(
                "non-finite value {v} in CSV column {i}"
            )));
        }
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("{v}"));
    }
    out.push('\n');
    Ok(())
}

/// CSV table of quadrature nodes and both weight conventions.
pub fn quadrature_csv(quad: &RadialQuadrature) -> Result<String> {
    let mut out = String::from("node,weight,gauss_weight\n");
    for i in 0..quad.params.p {
        push_row(
            &mut out,
            &[quad.nodes[i], quad.weights[i], quad.gauss_weights[i]],
        )?;
    }
    Ok(out)
}

/// Radial profiles of band-limited Dirac deltas at the given positions.
///
/// The radial scale is tied to a ball of the given radius (the largest
/// quadrature node lands on `radius`).  Each column holds the amplitude
/// `r^2 sum_p K_p(s) K_p(r)` on a uniform radius grid: the density with
/// respect to the radial measure `r^2 dr`, which integrates to one in the
/// large-`P` limit.  The unweighted pointwise synthesis is dominated by a
/// measure-zero stack-up of the basis functions at `r = 0` and would hide
/// the delta peaks entirely.
pub fn dirac_csv(p: usize, positions: &[f64], radius: f64, points: usize) -> Result<String> {
    if positions.is_empty() {
        return Err(Error::Domain("no delta positions given".to_string()));
    }
    if points < 2 {
        return Err(Error::Domain("need at least two radial points".to_string()));
    }
    let params = RadialParams::with_ball_radius(p, radius)?;
    for &s in positions {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::Domain(format!("invalid delta position {s}")));
        }
    }
    let coeffs: Vec<Vec<f64>> = positions
        .iter()
        .map(|&s| basis_all(&params, s))
        .collect::<Result<_>>()?;

    let mut out = String::from("r");
    for &s in positions {
        out.push_str(&format!(",amplitude_s{s}"));
    }
    out.push('\n');

    let mut row = vec![0.0; positions.len() + 1];
    for i in 0..points {
        let r = radius * i as f64 / (points - 1) as f64;
        let basis = basis_all(&params, r)?;
        row[0] = r;
        for (c, delta) in coeffs.iter().enumerate() {
            let value: f64 = delta.iter().zip(&basis).map(|(a, b)| a * b).sum();
            row[c + 1] = r * r * value;
        }
        push_row(&mut out, &row)?;
    }
    Ok(out)
}

/// Radial and angular profiles of one flaglet kernel before and after radial
/// translation.
///
/// The kernel is axisymmetric, so its real-space shape is a function of the
/// radius and the polar angle only.  The radial table samples the amplitude
/// `r^2 psi(r, 0)` along the symmetry axis (the density convention of
/// [`dirac_csv`]); the angular table samples the unweighted profile at the
/// radius where each translated amplitude peaks.
pub struct KernelProfileTables {
    pub radial_csv: String,
    pub angular_csv: String,
    /// Peak radius per column (untranslated first, then one per translation).
    pub peak_radii: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn kernel_profile_tables(
    ball: &BallParams,
    tiling: &TilingParams,
    j: usize,
    jp: usize,
    translations: &[f64],
    points: usize,
    radius: f64,
) -> Result<KernelProfileTables> {
    if points < 2 {
        return Err(Error::Domain("need at least two points".to_string()));
    }
    let family = kernel_family(ball, tiling)?;
    if j < tiling.j0 || j > family.j_max || jp < tiling.j0p || jp > family.jp_max {
        return Err(Error::Domain(format!(
            "scale ({j},{jp}) outside the family ranges [{}..{}] x [{}..{}]",
            tiling.j0, family.j_max, tiling.j0p, family.jp_max
        )));
    }
    let kernel = family.wavelet_kernel(j, jp);
    let radial = ball.radial();

    // columns: untranslated kernel, then one per translation
    let mut column_coeffs: Vec<Vec<f64>> = Vec::with_capacity(1 + translations.len());
    column_coeffs.push(kernel.to_vec());
    for &s in translations {
        let k_s = basis_all(&radial, s)?;
        let translated: Vec<f64> = (0..ball.l)
            .flat_map(|ell| (0..ball.p).map(move |pp| (ell, pp)))
            .map(|(ell, pp)| kernel[ell * ball.p + pp] * k_s[pp])
            .collect();
        column_coeffs.push(translated);
    }

    // radial profile along the symmetry axis: gamma = 0, P_l(1) = 1
    let zonal_norm: Vec<f64> = (0..ball.l)
        .map(|ell| ((2.0 * ell as f64 + 1.0) / (4.0 * std::f64::consts::PI)).sqrt())
        .collect();
    let axis_value = |coeffs: &[f64], basis: &[f64], cos_gamma: f64| -> f64 {
        let mut acc = 0.0;
        for ell in 0..ball.l {
            let mut radial_part = 0.0;
            for pp in 0..ball.p {
                radial_part += coeffs[ell * ball.p + pp] * basis[pp];
            }
            acc += radial_part * zonal_norm[ell] * legendre(ell, cos_gamma);
        }
        acc
    };

    let mut radial_csv = String::from("r,psi");
    for &s in translations {
        radial_csv.push_str(&format!(",psi_s{s}"));
    }
    radial_csv.push('\n');

    let mut peak_radii = vec![0.0; column_coeffs.len()];
    let mut peak_values = vec![0.0_f64; column_coeffs.len()];
    let mut row = vec![0.0; column_coeffs.len() + 1];
    for i in 0..points {
        let r = radius * i as f64 / (points - 1) as f64;
        let basis = basis_all(&radial, r)?;
        row[0] = r;
        for (c, coeffs) in column_coeffs.iter().enumerate() {
            let v = r * r * axis_value(coeffs, &basis, 1.0);
            row[c + 1] = v;
            if v.abs() > peak_values[c] {
                peak_values[c] = v.abs();
                peak_radii[c] = r;
            }
        }
        push_row(&mut radial_csv, &row)?;
    }

    // angular profile at each column's own peak radius
    let mut angular_csv = String::from("gamma,psi");
    for &s in translations {
        angular_csv.push_str(&format!(",psi_s{s}"));
    }
    angular_csv.push('\n');
    let peak_bases: Vec<Vec<f64>> = peak_radii
        .iter()
        .map(|&r| basis_all(&radial, r))
        .collect::<Result<_>>()?;
    for i in 0..points {
        let gamma = std::f64::consts::PI * i as f64 / (points - 1) as f64;
        row[0] = gamma;
        for (c, coeffs) in column_coeffs.iter().enumerate() {
            row[c + 1] = axis_value(coeffs, &peak_bases[c], gamma.cos());
        }
        push_row(&mut angular_csv, &row)?;
    }

    Ok(KernelProfileTables {
        radial_csv,
        angular_csv,
        peak_radii,
    })
}
