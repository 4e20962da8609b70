//! Classical input vectors: validation, normalization, padding and the
//! dense/sparse conversions used by the synthesis pipeline.
//!
//! Dense vectors are zero-padded to the next power of two (minimum length 2).
//! Sparse vectors keep `(index, amplitude)` pairs in strictly increasing index
//! order.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on `|‖x‖ − 1|`.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadOptions {
    /// Divide by the 2-norm instead of rejecting unnormalized input.
    pub normalize: bool,
    pub tol: f64,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            normalize: false,
            tol: NORM_TOL,
        }
    }
}

impl LoadOptions {
    pub fn normalizing() -> Self {
        Self {
            normalize: true,
            ..Self::default()
        }
    }
}

/// A unit-norm vector of `2^n` complex amplitudes, `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    n: usize,
    entries: Vec<Complex64>,
}

impl AmplitudeVector {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `|x_p|²` for every basis pattern `p`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Random vector with standard-normal real and imaginary parts, normalized.
    pub fn random_complex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "at least one qubit required");
        loop {
            let raw: Vec<Complex64> = (0..1usize << n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if let Ok(v) = load_vector(&raw, LoadOptions::normalizing()) {
                return v;
            }
        }
    }

    /// Random vector with standard-normal real entries, normalized.
    pub fn random_real<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "at least one qubit required");
        loop {
            let raw: Vec<Complex64> = (0..1usize << n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), 0.0))
                .collect();
            if let Ok(v) = load_vector(&raw, LoadOptions::normalizing()) {
                return v;
            }
        }
    }
}

/// Validate, pad and (optionally) normalize a raw dense vector.
pub fn load_vector(raw: &[Complex64], options: LoadOptions) -> Result<AmplitudeVector> {
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    if raw.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite amplitude".into()));
    }
    let len = raw.len().next_power_of_two().max(2);
    let n = len.trailing_zeros() as usize;
    let mut entries = raw.to_vec();
    entries.resize(len, Complex64::new(0.0, 0.0));

    let norm = norm(entries.iter());
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    if options.normalize {
        entries.iter_mut().for_each(|a| *a /= norm);
    } else if (norm - 1.0).abs() > options.tol {
        return Err(Error::NotNormalized {
            norm,
            tol: options.tol,
        });
    }
    Ok(AmplitudeVector { n, entries })
}

/// The nonzero support of a `2^n`-dimensional unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseAmplitudeVector {
    n: usize,
    entries: Vec<(usize, Complex64)>,
}

impl SparseAmplitudeVector {
    /// Entries may arrive in any order; they are sorted by index and duplicates rejected.
    pub fn new(
        n: usize,
        mut entries: Vec<(usize, Complex64)>,
        options: LoadOptions,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("sparse vector needs n >= 1".into()));
        }
        if n >= usize::BITS as usize {
            return Err(Error::InvalidInput(format!("n = {n} is too large")));
        }
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        if entries
            .iter()
            .any(|(_, a)| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidInput("non-finite amplitude".into()));
        }
        entries.sort_by_key(|(i, _)| *i);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateIndex(w[0].0));
            }
        }
        if let Some(&(index, _)) = entries.iter().find(|(i, _)| *i >> n != 0) {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let norm = norm(entries.iter().map(|(_, a)| a));
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        if options.normalize {
            entries.iter_mut().for_each(|(_, a)| *a /= norm);
        } else if (norm - 1.0).abs() > options.tol {
            return Err(Error::NotNormalized {
                norm,
                tol: options.tol,
            });
        }
        Ok(Self { n, entries })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Number of stored (nonzero) amplitudes, `M`.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, Complex64)] {
        &self.entries
    }
}

/// Keep the entries with `|amplitude| > eps`, renormalizing when anything was dropped.
pub fn sparsify(v: &AmplitudeVector, eps: f64) -> Result<SparseAmplitudeVector> {
    let kept: Vec<(usize, Complex64)> = v
        .entries
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > eps)
        .map(|(i, a)| (i, *a))
        .collect();
    if kept.is_empty() {
        return Err(Error::ZeroNorm);
    }
    let dropped_mass: f64 = v
        .entries
        .iter()
        .filter(|a| a.norm() <= eps)
        .map(|a| a.norm_sqr())
        .sum();
    if dropped_mass == 0.0 {
        return Ok(SparseAmplitudeVector {
            n: v.n,
            entries: kept,
        });
    }
    SparseAmplitudeVector::new(v.n, kept, LoadOptions::normalizing())
}

pub fn densify(v: &SparseAmplitudeVector) -> AmplitudeVector {
    let mut entries = vec![Complex64::new(0.0, 0.0); 1 << v.n];
    for &(i, a) in &v.entries {
        entries[i] = a;
    }
    AmplitudeVector { n: v.n, entries }
}

fn norm<'a>(it: impl Iterator<Item = &'a Complex64>) -> f64 {
    it.map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// JSON input

/// A complex value written either as `[re, im]` or as a bare real number.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonComplex {
    Pair([f64; 2]),
    Real(f64),
}

impl From<JsonComplex> for Complex64 {
    fn from(c: JsonComplex) -> Self {
        match c {
            JsonComplex::Pair([re, im]) => Complex64::new(re, im),
            JsonComplex::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

impl From<Complex64> for JsonComplex {
    fn from(c: Complex64) -> Self {
        JsonComplex::Pair([c.re, c.im])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonSparseEntry {
    pub index: usize,
    pub amp: JsonComplex,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum JsonInput {
    Dense {
        amplitudes: Vec<JsonComplex>,
    },
    Sparse {
        n: usize,
        entries: Vec<JsonSparseEntry>,
    },
}

/// A parsed input file; the variant is chosen by the JSON shape.
#[derive(Debug, Clone, PartialEq)]
pub enum InputVector {
    Dense(AmplitudeVector),
    Sparse(SparseAmplitudeVector),
}

impl InputVector {
    pub fn num_qubits(&self) -> usize {
        match self {
            InputVector::Dense(v) => v.num_qubits(),
            InputVector::Sparse(v) => v.num_qubits(),
        }
    }

    pub fn to_dense(&self) -> AmplitudeVector {
        match self {
            InputVector::Dense(v) => v.clone(),
            InputVector::Sparse(v) => densify(v),
        }
    }
}

pub fn parse_input(text: &str, options: LoadOptions) -> Result<InputVector> {
    let parsed: JsonInput = serde_json::from_str(text)?;
    match parsed {
        JsonInput::Dense { amplitudes } => {
            let raw: Vec<Complex64> = amplitudes.into_iter().map(Into::into).collect();
            Ok(InputVector::Dense(load_vector(&raw, options)?))
        }
        JsonInput::Sparse { n, entries } => {
            let entries = entries
                .into_iter()
                .map(|e| (e.index, e.amp.into()))
                .collect();
            Ok(InputVector::Sparse(SparseAmplitudeVector::new(
                n, entries, options,
            )?))
        }
    }
}

pub fn dense_to_json(v: &AmplitudeVector) -> JsonInput {
    JsonInput::Dense {
        amplitudes: v.entries.iter().map(|&a| a.into()).collect(),
    }
}

pub fn sparse_to_json(v: &SparseAmplitudeVector) -> JsonInput {
    JsonInput::Sparse {
        n: v.n,
        entries: v
            .entries
            .iter()
            .map(|&(index, a)| JsonSparseEntry {
                index,
                amp: a.into(),
            })
            .collect(),
    }
}
