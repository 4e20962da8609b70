//! Closed-form resource predictions, split selection and measured sweeps.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::amplitudes::AmplitudeVector;
use crate::circuit::metrics;
use crate::error::{Error, Result};
use crate::simulator::{exact_marginals, max_sim_qubits};
use crate::synthesis::synth_bidirectional;
use crate::trees::{build_angle_tree, build_state_tree};

fn check(n: usize, s: usize) -> Result<()> {
    if s == 0 || s > n {
        return Err(Error::SplitOutOfRange { s, n });
    }
    Ok(())
}

/// `(s + 1)·2^(n−s) − 1`
pub fn predicted_width(n: usize, s: usize) -> Result<usize> {
    check(n, s)?;
    Ok((s + 1) * (1 << (n - s)) - 1)
}

/// `2^s + (n² − n − s² + s) / 2`
pub fn predicted_depth(n: usize, s: usize) -> Result<f64> {
    check(n, s)?;
    Ok(depth_real(n as f64, s as f64))
}

fn depth_real(n: f64, s: f64) -> f64 {
    s.exp2() + 0.5 * (n * n - n - s * s + s)
}

fn width_real(n: f64, s: f64) -> f64 {
    (s + 1.0) * (n - s).exp2() - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitPrediction {
    pub n: usize,
    pub s: usize,
    pub predicted_abstract_depth: f64,
    pub predicted_width: usize,
}

/// One prediction per split `s = 1..=n`.
pub fn predictions(n: usize) -> Vec<SplitPrediction> {
    (1..=n)
        .map(|s| SplitPrediction {
            n,
            s,
            predicted_abstract_depth: depth_real(n as f64, s as f64),
            predicted_width: (s + 1) * (1 << (n - s)) - 1,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitMode {
    /// Top-down for up to 3 qubits, sublinear otherwise.
    Auto,
    Sublinear,
    TopDown,
    BottomUp,
    ExactBalance,
}

impl FromStr for SplitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "auto" => Ok(SplitMode::Auto),
            "sublinear" => Ok(SplitMode::Sublinear),
            "top-down" => Ok(SplitMode::TopDown),
            "bottom-up" => Ok(SplitMode::BottomUp),
            "exact-balance" => Ok(SplitMode::ExactBalance),
            other => Err(Error::InvalidInput(format!("unknown split mode '{other}'"))),
        }
    }
}

pub fn choose_split(n: usize, mode: SplitMode) -> usize {
    let n = n.max(1);
    match mode {
        SplitMode::Auto if n <= 3 => n,
        SplitMode::Auto | SplitMode::Sublinear => n.div_ceil(2),
        SplitMode::TopDown => n,
        SplitMode::BottomUp => 1,
        SplitMode::ExactBalance => (1..=n)
            .min_by(|&a, &b| {
                let gap = |s: usize| (width_real(n as f64, s as f64) - depth_real(n as f64, s as f64)).abs();
                gap(a).total_cmp(&gap(b))
            })
            .expect("n ≥ 1"),
    }
}

/// Real `s ∈ [1, n]` where predicted width equals predicted depth, by
/// bisection; clamps to an endpoint when the curves do not cross.
pub fn balance_root(n: usize) -> f64 {
    let nf = n.max(1) as f64;
    let gap = |s: f64| width_real(nf, s) - depth_real(nf, s);
    let (mut lo, mut hi) = (1.0, nf);
    if gap(lo) <= 0.0 {
        return lo;
    }
    if gap(hi) >= 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub s: usize,
    pub qubits: usize,
    /// Stage-1 rotation steps plus stage-2 CSWAP depth.
    pub abstract_depth: usize,
    pub native_depth: usize,
    pub cx_count: usize,
    pub abstract_stage1_steps: usize,
    pub abstract_stage2_cswap_depth: usize,
    pub predicted_width: usize,
    pub predicted_depth: f64,
    /// Worst marginal error over all trials, when simulation was requested.
    pub max_marginal_error: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n_range: RangeInclusive<usize>,
    /// Clipped to `[1, n]` per row; `None` sweeps every split.
    pub s_range: Option<RangeInclusive<usize>>,
    pub trials: usize,
    pub seed: u64,
    /// Check output marginals of every circuit against the input.
    pub simulate: bool,
}

/// Seed for trial `trial` at size `n`.
pub fn trial_seed(seed: u64, n: usize, trial: usize) -> u64 {
    let mut z = seed ^ ((n as u64) << 32) ^ trial as u64;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Synthesize `trials` random complex vectors per `(n, s)` and report the
/// (lower) median of each metric. Rows come out in `(n, s)` order.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for n in cfg.n_range.clone() {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let (s_lo, s_hi) = cfg
            .s_range
            .as_ref()
            .map_or((1, n), |r| (*r.start().max(&1), *r.end().min(&n)));
        let trees: Vec<_> = (0..cfg.trials)
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, n, t));
                let v = AmplitudeVector::random_complex(n, &mut rng);
                (build_angle_tree(&build_state_tree(&v)), v.probabilities())
            })
            .collect();
        for s in s_lo..=s_hi {
            let width = predicted_width(n, s)?;
            if cfg.simulate && width > max_sim_qubits() {
                return Err(Error::TooWide {
                    width,
                    max: max_sim_qubits(),
                });
            }
            let mut samples: Vec<[usize; 6]> = Vec::with_capacity(cfg.trials);
            let mut worst: Option<f64> = None;
            for (tree, probs) in &trees {
                let c = synth_bidirectional(tree, s)?;
                let r = metrics(&c);
                samples.push([
                    r.width,
                    r.abstract_stage1_steps + r.abstract_stage2_cswap_depth,
                    r.native_depth,
                    r.cx_count,
                    r.abstract_stage1_steps,
                    r.abstract_stage2_cswap_depth,
                ]);
                if cfg.simulate {
                    let err = exact_marginals(&c)?.max_abs_diff(probs);
                    worst = Some(worst.map_or(err, |w: f64| w.max(err)));
                }
            }
            let med = |k: usize| {
                let mut col: Vec<usize> = samples.iter().map(|x| x[k]).collect();
                col.sort_unstable();
                col[(col.len() - 1) / 2]
            };
            rows.push(SweepRow {
                n,
                s,
                qubits: med(0),
                abstract_depth: med(1),
                native_depth: med(2),
                cx_count: med(3),
                abstract_stage1_steps: med(4),
                abstract_stage2_cswap_depth: med(5),
                predicted_width: width,
                predicted_depth: predicted_depth(n, s)?,
                max_marginal_error: worst,
            });
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "n,s,qubits,abstract_depth,native_depth,cx_count";

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n, r.s, r.qubits, r.abstract_depth, r.native_depth, r.cx_count
        );
    }
    out
}
