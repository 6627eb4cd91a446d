//! Maximum-likelihood decoding on trellises.
//!
//! NDML runs a max-sum Viterbi pass over the trellis of N relabelled by a
//! syndrome representative; DML runs a forward sum-product pass over the
//! multi-goal trellis of (N, S) and reads one probability per logical coset
//! off the goals. Probabilities are handled in the natural-log domain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::code::{CodeError, CssCode, JointCode, StabilizerCode};
use crate::pauli::{BinaryVector, Pauli, PauliVector};
use crate::trellis::{Symbol, Trellis};

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("depolarizing parameter {0} outside (0, 1)")]
    BadProbability(f64),
    #[error("symbol probabilities must be positive and sum to 1")]
    BadDistribution,
    #[error("trellis depth {trellis} does not match code length {code}")]
    DepthMismatch { trellis: usize, code: usize },
    #[error("trellis has {found} goals, expected one per coset ({expected})")]
    MissingGoals { expected: usize, found: usize },
    #[error("trellis contains a non-Pauli label")]
    NonPauliLabel,
    #[error("unknown decoding mode {0:?} (expected ndml, dml or css)")]
    UnknownMode(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Independent per-qubit Pauli noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelModel {
    /// Probabilities of `I, X, Y, Z`.
    pub prob: [f64; 4],
}

impl ChannelModel {
    /// Depolarizing channel: `Pr(I) = 1 - p`, `Pr(X) = Pr(Y) = Pr(Z) = p/3`.
    pub fn depolarizing(p: f64) -> Result<Self, DecodeError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(DecodeError::BadProbability(p));
        }
        Ok(ChannelModel {
            prob: [1.0 - p, p / 3.0, p / 3.0, p / 3.0],
        })
    }

    pub fn from_probs(prob: [f64; 4]) -> Result<Self, DecodeError> {
        let sum: f64 = prob.iter().sum();
        if prob.iter().any(|&q| q.is_nan() || q <= 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(DecodeError::BadDistribution);
        }
        Ok(ChannelModel { prob })
    }

    /// Depolarizing parameter `1 - Pr(I)`.
    pub fn p(&self) -> f64 {
        1.0 - self.prob[0]
    }

    pub fn prob(&self, a: Pauli) -> f64 {
        self.prob[a.index()]
    }

    pub fn log_prob(&self, a: Pauli) -> f64 {
        self.prob(a).ln()
    }

    pub fn log_prob_vector(&self, e: &PauliVector) -> f64 {
        (0..e.len()).map(|i| self.log_prob(e.get(i))).sum()
    }
}

/// Probabilities used for the pure X or pure Z component in separate CSS
/// decoding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinaryMarginal {
    pub identity: f64,
    pub flip: f64,
}

impl BinaryMarginal {
    /// `Pr(I) = 1 - p`, `Pr(flip) = p/3`: the component treated as if the
    /// other one were absent.
    pub fn independent(ch: &ChannelModel) -> Self {
        BinaryMarginal {
            identity: ch.prob[0],
            flip: ch.prob[1],
        }
    }

    /// Exact marginal of one component: `Pr(flip) = Pr(X) + Pr(Y)` for the X
    /// part (and `Pr(Z) + Pr(Y)` for the Z part).
    pub fn exact_x(ch: &ChannelModel) -> Self {
        BinaryMarginal {
            identity: ch.prob[0] + ch.prob[3],
            flip: ch.prob[1] + ch.prob[2],
        }
    }

    pub fn exact_z(ch: &ChannelModel) -> Self {
        BinaryMarginal {
            identity: ch.prob[0] + ch.prob[1],
            flip: ch.prob[3] + ch.prob[2],
        }
    }

    fn as_channel(&self) -> ChannelModel {
        // non-identity symbols outside the binary alphabet never occur on the path
        ChannelModel {
            prob: [self.identity, self.flip, self.flip, self.flip],
        }
    }
}

/// Which binary marginal the separate CSS decoder uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum MarginalModel {
    /// `1 - p` and `p/3` per symbol.
    #[default]
    Independent,
    /// `1 - 2p/3` and `2p/3` per symbol.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecodeMode {
    Ndml,
    Dml,
    Css,
}

impl DecodeMode {
    pub const ALL: [DecodeMode; 3] = [DecodeMode::Ndml, DecodeMode::Dml, DecodeMode::Css];

    pub fn name(self) -> &'static str {
        match self {
            DecodeMode::Ndml => "ndml",
            DecodeMode::Dml => "dml",
            DecodeMode::Css => "css",
        }
    }
}

impl std::fmt::Display for DecodeMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DecodeMode {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DecodeMode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| DecodeError::UnknownMode(s.to_string()))
    }
}

/// Tie-breaking among equally likely Viterbi paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smallest error symbol first at every depth.
    #[default]
    Canonical,
    /// Uniformly random among the optimal paths.
    Seeded(u64),
}

/// Sum-product operation counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct OpCounts {
    pub multiplications: u64,
    pub additions: u64,
}

impl std::ops::AddAssign for OpCounts {
    fn add_assign(&mut self, o: OpCounts) {
        self.multiplications += o.multiplications;
        self.additions += o.additions;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeResult {
    pub mode: DecodeMode,
    /// NDML: the most likely error; DML: the most likely error in the winning coset.
    pub error_estimate: PauliVector,
    /// Log probability of `error_estimate`.
    pub log_prob: f64,
    /// Logical coset label relative to the syndrome representative (DML and CSS).
    pub winning_logical: Option<u64>,
    /// `ln Pr` of every logical coset, indexed by label (DML and CSS).
    pub coset_log_probs: Vec<f64>,
    pub ops: OpCounts,
}

/// `ln(exp(a) + exp(b))`
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln sum exp(x)`
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Per-section, per-symbol edge weights `ln Pr(rho_t * a)`.
fn weights(
    t: &Trellis,
    rho: &PauliVector,
    ch: &ChannelModel,
) -> Result<Vec<[f64; 4]>, DecodeError> {
    if t.depth() != rho.len() {
        return Err(DecodeError::DepthMismatch {
            trellis: t.depth(),
            code: rho.len(),
        });
    }
    Ok((0..t.depth())
        .map(|i| {
            let r = rho.get(i);
            let mut w = [0.0; 4];
            for a in Pauli::ALL {
                w[a.index()] = ch.log_prob(r * a);
            }
            w
        })
        .collect())
}

fn pauli_of(s: Symbol) -> Result<Pauli, DecodeError> {
    s.pauli().ok_or(DecodeError::NonPauliLabel)
}

const TIE_RTOL: f64 = 1e-12;

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_RTOL * a.abs().max(b.abs()).max(1.0)
}

/// Most probable path of `t` relabelled by `rho`, optionally restricted to
/// goals accepted by `goal_ok`. Returns the error and its log probability.
fn viterbi_path(
    t: &Trellis,
    rho: &PauliVector,
    ch: &ChannelModel,
    goal_ok: impl Fn(u64) -> bool,
    tie: TieBreak,
) -> Result<(PauliVector, f64), DecodeError> {
    let w = weights(t, rho, ch)?;
    let depth = t.depth();
    // backward max-sum cost-to-go and the number of optimal completions
    let mut best: Vec<Vec<f64>> = t
        .level_sizes()
        .iter()
        .map(|&s| vec![f64::NEG_INFINITY; s])
        .collect();
    let mut count: Vec<Vec<f64>> = t.level_sizes().iter().map(|&s| vec![0.0; s]).collect();
    for (v, &g) in t.goal_labels().iter().enumerate() {
        if goal_ok(g) {
            best[depth][v] = 0.0;
            count[depth][v] = 1.0;
        }
    }
    for s in (0..depth).rev() {
        for e in t.section(s) {
            let cand = best[s + 1][e.to as usize] + w[s][pauli_of(e.label)?.index()];
            let cur = &mut best[s][e.from as usize];
            if cand > *cur {
                *cur = cand;
            }
        }
        for e in t.section(s) {
            let cand = best[s + 1][e.to as usize] + w[s][pauli_of(e.label)?.index()];
            if cand.is_finite() && near(cand, best[s][e.from as usize]) {
                count[s][e.from as usize] += count[s + 1][e.to as usize];
            }
        }
    }
    let total = best[0][0];
    let mut rng = match tie {
        TieBreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        TieBreak::Canonical => None,
    };
    let mut v = 0u32;
    let mut out = PauliVector::identity(depth);
    let offs: Vec<Vec<usize>> = (0..depth).map(|s| t.out_offsets(s)).collect();
    for s in 0..depth {
        let edges = &t.section(s)[offs[s][v as usize]..offs[s][v as usize + 1]];
        let mut opts: Vec<(Pauli, u32, f64)> = Vec::new();
        for e in edges {
            let a = pauli_of(e.label)?;
            let cand = best[s + 1][e.to as usize] + w[s][a.index()];
            if cand.is_finite() && near(cand, best[s][v as usize]) {
                opts.push((rho.get(s) * a, e.to, count[s + 1][e.to as usize]));
            }
        }
        opts.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        let pick = match rng.as_mut() {
            None => opts[0],
            Some(r) => {
                let tot: f64 = opts.iter().map(|o| o.2).sum();
                let mut x = r.random::<f64>() * tot;
                let mut chosen = opts[opts.len() - 1];
                for o in &opts {
                    if x < o.2 {
                        chosen = *o;
                        break;
                    }
                    x -= o.2;
                }
                chosen
            }
        };
        out.set(s, pick.0);
        v = pick.1;
    }
    Ok((out, total))
}

fn check_syndrome(code: &StabilizerCode, sigma: &BinaryVector) -> Result<(), DecodeError> {
    if sigma.len() != code.stab_gens().len() {
        return Err(CodeError::SyndromeLength {
            expected: code.stab_gens().len(),
            found: sigma.len(),
        }
        .into());
    }
    Ok(())
}

/// Most probable error with syndrome `sigma`, by max-sum Viterbi over the
/// trellis of N relabelled by the syndrome representative.
pub fn ndml_decode(
    t: &Trellis,
    code: &StabilizerCode,
    sigma: &BinaryVector,
    ch: &ChannelModel,
) -> Result<DecodeResult, DecodeError> {
    ndml_decode_with(t, code, sigma, ch, TieBreak::Canonical)
}

pub fn ndml_decode_with(
    t: &Trellis,
    code: &StabilizerCode,
    sigma: &BinaryVector,
    ch: &ChannelModel,
    tie: TieBreak,
) -> Result<DecodeResult, DecodeError> {
    check_syndrome(code, sigma)?;
    let rho = code.representative_from_syndrome(sigma)?;
    let (e, lp) = viterbi_path(t, &rho, ch, |_| true, tie)?;
    Ok(DecodeResult {
        mode: DecodeMode::Ndml,
        error_estimate: e,
        log_prob: lp,
        winning_logical: None,
        coset_log_probs: Vec::new(),
        ops: OpCounts::default(),
    })
}

/// Forward sum-product pass: `ln` of the summed path probability into every
/// goal, plus operation counts.
pub fn forward_log(
    t: &Trellis,
    rho: &PauliVector,
    ch: &ChannelModel,
) -> Result<(Vec<f64>, OpCounts), DecodeError> {
    let w = weights(t, rho, ch)?;
    let mut ops = OpCounts::default();
    let mut alpha = vec![0.0f64];
    for (s, sec) in t.sections().iter().enumerate() {
        let size = t.level_sizes()[s + 1];
        // streaming log-sum-exp: running max and scaled sum per target
        let mut max = vec![f64::NEG_INFINITY; size];
        let mut acc = vec![0.0f64; size];
        let mut seen = vec![false; size];
        for e in sec {
            let x = alpha[e.from as usize] + w[s][pauli_of(e.label)?.index()];
            ops.multiplications += 1;
            let to = e.to as usize;
            if !seen[to] {
                seen[to] = true;
                max[to] = x;
                acc[to] = 1.0;
                continue;
            }
            ops.additions += 1;
            if x > max[to] {
                acc[to] = acc[to] * (max[to] - x).exp() + 1.0;
                max[to] = x;
            } else if x > f64::NEG_INFINITY {
                acc[to] += (x - max[to]).exp();
            }
        }
        alpha = max
            .iter()
            .zip(&acc)
            .map(|(m, a)| {
                if *a > 0.0 {
                    m + a.ln()
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
    }
    Ok((alpha, ops))
}

/// The same pass in the linear domain (for cross-checking).
pub fn forward_linear(
    t: &Trellis,
    rho: &PauliVector,
    ch: &ChannelModel,
) -> Result<Vec<f64>, DecodeError> {
    if t.depth() != rho.len() {
        return Err(DecodeError::DepthMismatch {
            trellis: t.depth(),
            code: rho.len(),
        });
    }
    let mut alpha = vec![1.0f64];
    for (s, sec) in t.sections().iter().enumerate() {
        let mut next = vec![0.0f64; t.level_sizes()[s + 1]];
        let r = rho.get(s);
        for e in sec {
            next[e.to as usize] += alpha[e.from as usize] * ch.prob(r * pauli_of(e.label)?);
        }
        alpha = next;
    }
    Ok(alpha)
}

fn coset_table(t: &Trellis, goal_values: &[f64], bits: usize) -> Result<Vec<f64>, DecodeError> {
    let m = 1usize << bits;
    if t.num_goals() != m {
        return Err(DecodeError::MissingGoals {
            expected: m,
            found: t.num_goals(),
        });
    }
    let mut table = vec![f64::NEG_INFINITY; m];
    for (v, &g) in t.goal_labels().iter().enumerate() {
        if g as usize >= m {
            return Err(DecodeError::MissingGoals {
                expected: m,
                found: t.num_goals(),
            });
        }
        table[g as usize] = goal_values[v];
    }
    Ok(table)
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Degenerate decoding over a multi-goal trellis of a joint code relabelled
/// by `rho`: every coset probability, the winning coset and its most likely
/// member.
pub fn dml_decode_joint(
    t: &Trellis,
    joint: &JointCode,
    rho: &PauliVector,
    ch: &ChannelModel,
) -> Result<DecodeResult, DecodeError> {
    let (alpha, ops) = forward_log(t, rho, ch)?;
    let table = coset_table(t, &alpha, joint.label_bits())?;
    let win = argmax(&table) as u64;
    let (e, lp) = viterbi_path(t, rho, ch, |g| g == win, TieBreak::Canonical)?;
    Ok(DecodeResult {
        mode: DecodeMode::Dml,
        error_estimate: e,
        log_prob: lp,
        winning_logical: Some(win),
        coset_log_probs: table,
        ops,
    })
}

/// Degenerate maximum-likelihood decoding of syndrome `sigma`.
pub fn dml_decode(
    t: &Trellis,
    code: &StabilizerCode,
    sigma: &BinaryVector,
    ch: &ChannelModel,
) -> Result<DecodeResult, DecodeError> {
    check_syndrome(code, sigma)?;
    let rho = code.representative_from_syndrome(sigma)?;
    dml_decode_joint(t, &code.joint(), &rho, ch)
}

/// Channels used for the Z part and the X part in separate CSS decoding.
pub fn css_marginal_channels(
    ch: &ChannelModel,
    marginal: MarginalModel,
) -> (ChannelModel, ChannelModel) {
    let (mz, mx) = match marginal {
        MarginalModel::Independent => (
            BinaryMarginal::independent(ch),
            BinaryMarginal::independent(ch),
        ),
        MarginalModel::Exact => (BinaryMarginal::exact_z(ch), BinaryMarginal::exact_x(ch)),
    };
    (mz.as_channel(), mx.as_channel())
}

/// Full logical label from the X-part coset `lx` and the Z-part coset `lz`.
pub fn css_label(k: usize, lx: u64, lz: u64) -> u64 {
    (0..k).fold(0u64, |acc, j| {
        acc | ((lx >> j) & 1) << (2 * j) | ((lz >> j) & 1) << (2 * j + 1)
    })
}

/// Separate CSS decoding: `tx` is the multi-goal trellis of `(N_Z, S_Z)`
/// (decoding the Z part from the X-check syndrome `sigma_x`), `tz` that of
/// `(N_X, S_X)` (the X part from `sigma_z`). The combined label has bit
/// `2j` for `lx_j` and bit `2j+1` for `lz_j`, matching the base code.
pub fn css_dml_decode(
    tx: &Trellis,
    tz: &Trellis,
    css: &CssCode,
    sigma_x: &BinaryVector,
    sigma_z: &BinaryVector,
    ch: &ChannelModel,
    marginal: MarginalModel,
) -> Result<DecodeResult, DecodeError> {
    let (chz, chx) = css_marginal_channels(ch, marginal);
    let rho_z = css.representative_z(sigma_x)?;
    let rho_x = css.representative_x(sigma_z)?;
    let rz = dml_decode_joint(tx, &css.joint_x(), &rho_z, &chz)?;
    let rx = dml_decode_joint(tz, &css.joint_z(), &rho_x, &chx)?;
    let k = css.k();
    let lz = rz.winning_logical.unwrap_or(0);
    let lx = rx.winning_logical.unwrap_or(0);
    let mut table = vec![f64::NEG_INFINITY; 1 << (2 * k)];
    for (cx, px) in rx.coset_log_probs.iter().enumerate() {
        for (cz, pz) in rz.coset_log_probs.iter().enumerate() {
            table[css_label(k, cx as u64, cz as u64) as usize] = px + pz;
        }
    }
    let mut ops = rz.ops;
    ops += rx.ops;
    let e = rx.error_estimate * rz.error_estimate;
    Ok(DecodeResult {
        mode: DecodeMode::Css,
        error_estimate: e,
        log_prob: ch.log_prob_vector(&e),
        winning_logical: Some(css_label(k, lx, lz)),
        coset_log_probs: table,
        ops,
    })
}
