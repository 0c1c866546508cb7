//! State files, seeded generators and text rendering.
//!
//! A state file is JSON:
//!
//! ```json
//! {"format_version": 1,
//!  "amplitudes": [{"indices": [1, 2, 3], "re": 0.6, "im": 0.0}],
//!  "basis": [[{"re": 1.0, "im": 0.0}, ...], ...],
//!  "metadata": {"source": "..."}}
//! ```
//!
//! Orbital indices are 1-based and strictly increasing; missing triples are
//! zero. `basis` and `metadata` are optional. When present, `basis` is a
//! unitary written row-major whose columns are the orbitals the amplitudes
//! refer to.
//! Floats are written in shortest round-trip form, so save/load is bit-exact.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::TypeTag;
use crate::error::{Error, Result};
use crate::exterior::{slot, CIExpansion, OrbitalBasis, Trivector, TRIPLES};
use crate::qubit3::ThreeQubitState;
use crate::random::{complex_gaussian, haar_unitary, random_trivector, rng_for, Rng};
use crate::{Mat6, C64};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Complex { re: z.re, im: z.im }
    }
}

impl From<Complex> for C64 {
    fn from(z: Complex) -> Self {
        C64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub indices: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: u32,
    pub amplitudes: Vec<Amplitude>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<Complex>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<BTreeMap<String, String>>,
}

impl StateFile {
    /// All 20 amplitudes, including zeros.
    pub fn from_state(t: &Trivector) -> Self {
        let amplitudes = TRIPLES
            .iter()
            .zip(t.amps())
            .map(|(tr, a)| Amplitude { indices: tr.iter().map(|i| i + 1).collect(), re: a.re, im: a.im })
            .collect();
        StateFile { format_version: FORMAT_VERSION, amplitudes, basis: None, metadata: None }
    }

    pub fn with_basis(mut self, b: &OrbitalBasis) -> Self {
        let m = b.matrix();
        self.basis = Some((0..6).map(|i| (0..6).map(|j| m[(i, j)].into()).collect()).collect());
        self
    }

    /// The state in the standard basis.
    pub fn state(&self) -> Result<Trivector> {
        let c = self.coefficients()?;
        match self.basis_matrix()? {
            Some(m) => {
                OrbitalBasis::new(m, Default::default()).map_err(|e| Error::Malformed(format!("basis: {e}")))?;
                Ok(c.transform(&m))
            }
            None => Ok(c),
        }
    }

    /// Amplitudes as written, ignoring `basis`.
    pub fn coefficients(&self) -> Result<Trivector> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::VersionMismatch { found: self.format_version, expected: FORMAT_VERSION });
        }
        let mut t = Trivector::zero();
        let mut seen = [false; 20];
        for a in &self.amplitudes {
            let idx = &a.indices;
            let valid = idx.len() == 3 && idx.iter().all(|&i| (1..=6).contains(&i)) && idx[0] < idx[1] && idx[1] < idx[2];
            if !valid {
                return Err(Error::UnsortedIndices(idx.clone()));
            }
            let n = slot(idx[0] - 1, idx[1] - 1, idx[2] - 1);
            if seen[n] {
                return Err(Error::DuplicateConfiguration([idx[0], idx[1], idx[2]]));
            }
            seen[n] = true;
            t.amps_mut()[n] = C64::new(a.re, a.im);
        }
        Ok(t)
    }

    pub fn basis_matrix(&self) -> Result<Option<Mat6>> {
        let Some(rows) = &self.basis else { return Ok(None) };
        if rows.len() != 6 || rows.iter().any(|r| r.len() != 6) {
            return Err(Error::Malformed("basis must be 6 rows of 6 entries".into()));
        }
        Ok(Some(Mat6::from_fn(|i, j| rows[i][j].into())))
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse_state_file(text: &str) -> Result<StateFile> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

pub fn load_state_file(path: impl AsRef<Path>) -> Result<StateFile> {
    parse_state_file(&read(path.as_ref())?)
}

pub fn load(path: impl AsRef<Path>) -> Result<Trivector> {
    load_state_file(path)?.state()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

pub fn save_state_file(file: &StateFile, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &(to_json(file) + "\n"))
}

pub fn save(t: &Trivector, path: impl AsRef<Path>) -> Result<()> {
    save_state_file(&StateFile::from_state(t), path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitAmplitude {
    pub bits: String,
    pub re: f64,
    pub im: f64,
}

/// `{"format_version": 1, "amplitudes": [{"bits": "000", "re": .., "im": ..}]}`;
/// the first bit is qubit 1. Missing strings are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitFile {
    pub format_version: u32,
    pub amplitudes: Vec<QubitAmplitude>,
}

impl QubitFile {
    pub fn from_state(q: &ThreeQubitState) -> Self {
        let amplitudes = q
            .amps
            .iter()
            .enumerate()
            .map(|(n, a)| QubitAmplitude { bits: format!("{}{}{}", n >> 2 & 1, n >> 1 & 1, n & 1), re: a.re, im: a.im })
            .collect();
        QubitFile { format_version: FORMAT_VERSION, amplitudes }
    }

    pub fn state(&self) -> Result<ThreeQubitState> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::VersionMismatch { found: self.format_version, expected: FORMAT_VERSION });
        }
        let mut amps = [C64::new(0.0, 0.0); 8];
        let mut seen = [false; 8];
        for a in &self.amplitudes {
            let b = a.bits.as_bytes();
            if b.len() != 3 || b.iter().any(|c| !matches!(c, b'0' | b'1')) {
                return Err(Error::Malformed(format!("bad qubit string `{}`", a.bits)));
            }
            let n = b.iter().fold(0, |acc, c| 2 * acc + (c - b'0') as usize);
            if seen[n] {
                return Err(Error::Malformed(format!("duplicate qubit string `{}`", a.bits)));
            }
            seen[n] = true;
            amps[n] = C64::new(a.re, a.im);
        }
        Ok(ThreeQubitState::new(amps))
    }
}

pub fn parse_qubit_file(text: &str) -> Result<QubitFile> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

pub fn load_qubits(path: impl AsRef<Path>) -> Result<ThreeQubitState> {
    parse_qubit_file(&read(path.as_ref())?)?.state()
}

pub fn save_qubits(q: &ThreeQubitState, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &(to_json(&QubitFile::from_state(q)) + "\n"))
}

/// Magnitudes in `[0.2, 1]` with uniform phases, so no coefficient is near zero.
fn coefficient(rng: &mut Rng) -> C64 {
    let z = complex_gaussian(rng);
    let u: f64 = rand::Rng::gen_range(rng, 0.2..1.0);
    C64::from_polar(u, z.arg())
}

fn diagram_state(rng: &mut Rng, rows: &[[usize; 3]]) -> Trivector {
    let mut t = Trivector::zero();
    for r in rows {
        t = t + Trivector::basis(r[0], r[1], r[2]) * coefficient(rng);
    }
    t.normalized()
}

/// A normalized state drawn from stream 0 of `seed`; with a tag, the tag's
/// defining diagram with random coefficients, scrambled by a Haar U(6) from
/// stream 1.
pub fn random_state(seed: u64, class: Option<TypeTag>) -> Trivector {
    let mut rng = rng_for(seed, 0);
    let Some(tag) = class else {
        return random_trivector(&mut rng);
    };
    use TypeTag::*;
    let rows: &[[usize; 3]] = match tag {
        Type1 => &[[0, 1, 2]],
        Type2a | LowRank => &[[0, 1, 2], [0, 3, 4]],
        Type2b | OrthoGHZ => &[[0, 1, 2], [3, 4, 5]],
        Type3a | OrthoW => &[[1, 2, 3], [0, 2, 4], [0, 1, 5]],
        Type3b => &[[0, 1, 2], [2, 3, 4], [3, 4, 5]],
        CIS => &[[0, 1, 2], [1, 2, 3], [0, 2, 4], [0, 1, 5]],
        CID => &[[0, 1, 2], [0, 4, 5], [1, 3, 5], [2, 3, 4]],
    };
    let t = diagram_state(&mut rng, rows);
    t.transform(&haar_unitary(&mut rng_for(seed, 1)))
}

/// Formats like C's `%.12g`.
pub fn fmt_g(x: f64) -> String {
    fmt_sig(x, 12)
}

pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    let p = digits as i32;
    let text = if exp < -5 || exp >= p {
        let s = format!("{:.*e}", (p - 1) as usize, x);
        let (mant, e) = s.split_once('e').expect("scientific format");
        format!("{}e{}", trim_zeros(mant), e)
    } else {
        trim_zeros(&format!("{:.*}", (p - 1 - exp).max(0) as usize, x)).to_string()
    };
    if text == "-0" {
        "0".into()
    } else {
        text
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_complex(z: C64) -> String {
    if z.im == 0.0 {
        fmt_g(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt_g(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{} {} {}i", fmt_g(z.re), sign, fmt_g(z.im.abs()))
    }
}

/// X/O table of an expansion: one column per orbital, one row per term with
/// `|coefficient| > tol`.
pub fn render_diagram(e: &CIExpansion, tol: f64) -> String {
    let labels = e.basis.labels();
    let width = labels.iter().map(|l| l.len()).max().unwrap_or(1).max(1);
    let tag_width = e.terms.iter().map(|t| t.label.len()).max().unwrap_or(0);
    let mut out = String::new();
    let header: Vec<String> = labels.iter().map(|l| format!("{l:>width$}")).collect();
    out.push_str(&header.join(" "));
    out.push('\n');
    for term in e.terms.iter().filter(|t| t.coeff.norm() > tol) {
        let cells: Vec<String> = (0..6)
            .map(|i| format!("{:>width$}", if term.config.contains(&i) { "X" } else { "O" }))
            .collect();
        out.push_str(&format!("{}   {:<tag_width$}  {}\n", cells.join(" "), term.label, fmt_complex(term.coeff)));
    }
    out
}
