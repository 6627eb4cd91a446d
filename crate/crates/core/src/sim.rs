//! Monte-Carlo logical error rates over the depolarizing channel.

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::code::{CssCode, LoadedCode, StabilizerCode};
use crate::decoder::{
    css_dml_decode, dml_decode, ndml_decode, ChannelModel, DecodeError, DecodeMode, MarginalModel,
    OpCounts,
};
use crate::oracle::{self, OracleError};
use crate::pauli::{Pauli, PauliVector};
use crate::trellis::{
    build_joint_trellis, build_min_trellis_tof, build_multigoal_trellis, Method, Trellis,
    TrellisError,
};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("depolarizing parameter {0} outside (0, 1)")]
    BadProbability(f64),
    #[error("code {0} is not CSS; separate decoding needs a CSS code")]
    NotCss(String),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Trellis(#[from] TrellisError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// i.i.d. draw from `ch` on `n` qubits.
pub fn sample_error<R: Rng + ?Sized>(n: usize, ch: &ChannelModel, rng: &mut R) -> PauliVector {
    let mut e = PauliVector::identity(n);
    for i in 0..n {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut pick = Pauli::Z;
        for a in Pauli::ALL {
            acc += ch.prob(a);
            if u < acc {
                pick = a;
                break;
            }
        }
        e.set(i, pick);
    }
    e
}

/// Generator for trial `trial` at the `p_index`-th parameter: independent of
/// the decoding mode and of the thread count.
pub fn trial_rng(seed: u64, p_index: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&p_index.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// A decoder with its trellises built once.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Decoder {
    Ndml {
        code: StabilizerCode,
        trellis: Trellis,
    },
    Dml {
        code: StabilizerCode,
        trellis: Trellis,
    },
    Css {
        css: CssCode,
        tx: Trellis,
        tz: Trellis,
        marginal: MarginalModel,
    },
    /// Exhaustive degenerate decoding, for cross-checks on small codes.
    OracleDml { code: StabilizerCode },
}

impl Decoder {
    pub fn build(
        code: &LoadedCode,
        mode: DecodeMode,
        marginal: MarginalModel,
    ) -> Result<Self, SimError> {
        Ok(match mode {
            DecodeMode::Ndml => Decoder::Ndml {
                code: code.code.clone(),
                trellis: build_min_trellis_tof(&code.code)?,
            },
            DecodeMode::Dml => Decoder::Dml {
                code: code.code.clone(),
                trellis: build_multigoal_trellis(&code.code, Method::ExtendedShannon)?,
            },
            DecodeMode::Css => {
                let css = code
                    .css
                    .clone()
                    .ok_or_else(|| SimError::NotCss(code.name.clone()))?;
                let tx = build_joint_trellis(&css.joint_x(), Method::ExtendedShannon)?;
                let tz = build_joint_trellis(&css.joint_z(), Method::ExtendedShannon)?;
                Decoder::Css {
                    css,
                    tx,
                    tz,
                    marginal,
                }
            }
        })
    }

    pub fn code(&self) -> &StabilizerCode {
        match self {
            Decoder::Ndml { code, .. }
            | Decoder::Dml { code, .. }
            | Decoder::OracleDml { code } => code,
            Decoder::Css { css, .. } => css.base(),
        }
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            Decoder::Ndml { .. } => "ndml",
            Decoder::Dml { .. } => "dml",
            Decoder::Css { .. } => "css",
            Decoder::OracleDml { .. } => "oracle-dml",
        }
    }

    /// Error estimate from the syndrome of `e`.
    pub fn estimate(
        &self,
        e: &PauliVector,
        ch: &ChannelModel,
    ) -> Result<(PauliVector, OpCounts), SimError> {
        Ok(match self {
            Decoder::Ndml { code, trellis } => {
                let r = ndml_decode(
                    trellis,
                    code,
                    &code.syndrome(e).map_err(DecodeError::from)?,
                    ch,
                )?;
                (r.error_estimate, r.ops)
            }
            Decoder::Dml { code, trellis } => {
                let r = dml_decode(
                    trellis,
                    code,
                    &code.syndrome(e).map_err(DecodeError::from)?,
                    ch,
                )?;
                (r.error_estimate, r.ops)
            }
            Decoder::Css {
                css,
                tx,
                tz,
                marginal,
            } => {
                let sx = css.syndrome_x(e).map_err(DecodeError::from)?;
                let sz = css.syndrome_z(e).map_err(DecodeError::from)?;
                let r = css_dml_decode(tx, tz, css, &sx, &sz, ch, *marginal)?;
                (r.error_estimate, r.ops)
            }
            Decoder::OracleDml { code } => {
                let sigma = code.syndrome(e).map_err(DecodeError::from)?;
                let cosets = oracle::brute_dml(code, &sigma, ch)?;
                let mut win = 0;
                for (i, &p) in cosets.iter().enumerate() {
                    if p > cosets[win] {
                        win = i;
                    }
                }
                let rho = code
                    .representative_from_syndrome(&sigma)
                    .map_err(DecodeError::from)?;
                (
                    rho * code.logical_from_label(win as u64),
                    OpCounts::default(),
                )
            }
        })
    }

    /// Whether decoding `e` leaves a nontrivial logical error.
    pub fn fails(&self, e: &PauliVector, ch: &ChannelModel) -> Result<(bool, OpCounts), SimError> {
        let (est, ops) = self.estimate(e, ch)?;
        Ok((!self.code().in_stabilizer(&(est * *e)), ops))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub p_values: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            p_values: vec![0.1],
            trials: DEFAULT_TRIALS,
            seed: 0,
            threads: None,
        }
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRow {
    pub code: String,
    pub mode: String,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub rows: Vec<SimRow>,
    pub wall_clock_secs: f64,
    pub ops: OpCounts,
}

impl SimReport {
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), SimError> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<(), SimError> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Runs `cfg.trials` trials per parameter. Trial `i` at the `j`-th parameter
/// always sees the same error, whatever the decoder and thread count.
pub fn run_monte_carlo(
    code_name: &str,
    decoder: &Decoder,
    cfg: &SimConfig,
) -> Result<SimReport, SimError> {
    if cfg.trials == 0 {
        return Err(SimError::NoTrials);
    }
    if let Some(&p) = cfg.p_values.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
        return Err(SimError::BadProbability(p));
    }
    let start = Instant::now();
    let run = || -> Result<(Vec<SimRow>, OpCounts), SimError> {
        let n = decoder.code().n();
        let mut rows = Vec::new();
        let mut total_ops = OpCounts::default();
        for (j, &p) in cfg.p_values.iter().enumerate() {
            let ch = ChannelModel::depolarizing(p)?;
            let (failures, ops) = (0..cfg.trials)
                .into_par_iter()
                .map(|i| {
                    let mut rng = trial_rng(cfg.seed, j as u64, i);
                    let e = sample_error(n, &ch, &mut rng);
                    decoder.fails(&e, &ch).map(|(f, ops)| (u64::from(f), ops))
                })
                .try_reduce(
                    || (0, OpCounts::default()),
                    |a, b| {
                        let mut ops = a.1;
                        ops += b.1;
                        Ok((a.0 + b.0, ops))
                    },
                )?;
            total_ops += ops;
            let (ci_lo, ci_hi) = wilson_interval(failures, cfg.trials, Z95);
            rows.push(SimRow {
                code: code_name.to_string(),
                mode: decoder.mode_name().to_string(),
                p,
                trials: cfg.trials,
                failures,
                rate: failures as f64 / cfg.trials as f64,
                ci_lo,
                ci_hi,
            });
        }
        Ok((rows, total_ops))
    };
    let (rows, ops) = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| SimError::Pool(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    Ok(SimReport {
        rows,
        wall_clock_secs: start.elapsed().as_secs_f64(),
        ops,
    })
}

/// Failure indicator of every trial, in trial order (for comparing decoders
/// on identical samples).
pub fn failure_vector(
    decoder: &Decoder,
    p: f64,
    p_index: u64,
    trials: u64,
    seed: u64,
) -> Result<Vec<bool>, SimError> {
    let ch = ChannelModel::depolarizing(p)?;
    let n = decoder.code().n();
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let e = sample_error(n, &ch, &mut trial_rng(seed, p_index, i));
            decoder.fails(&e, &ch).map(|r| r.0)
        })
        .collect()
}
