//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::code::{builtin_names, load_code, CodeError, LoadedCode};
use crate::decoder::{
    css_dml_decode, css_label, css_marginal_channels, dml_decode, ndml_decode, ChannelModel,
    DecodeError, DecodeMode, DecodeResult, MarginalModel,
};
use crate::oracle::{self, OracleError};
use crate::pauli::BinaryVector;
use crate::sim::{run_monte_carlo, Decoder, SimConfig, SimError, SimRow, DEFAULT_TRIALS};
use crate::trellis::{
    build_joint_trellis, build_min_trellis_tof, build_multigoal_trellis, from_json, to_dot,
    to_json, ComplexityReport, Method, Trellis, TrellisError,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Trellis(#[from] TrellisError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad syndrome {0:?}: {1}")]
    Syndrome(String, String),
    #[error("bad --p value {0:?}")]
    BadRange(String),
    #[error("code {0} is not CSS")]
    NotCss(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "qtrellis",
    version,
    about = "Trellis construction and decoding for stabilizer codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a trellis, print its complexity and optionally save it.
    BuildTrellis(BuildArgs),
    /// Vertex/edge counts of T, T_X and T_Z for a list of codes.
    ComplexityTable(TableArgs),
    /// Decode one syndrome.
    Decode(DecodeArgs),
    /// Monte-Carlo logical error rates.
    Simulate(SimArgs),
    /// Write a trellis as JSON or Graphviz DOT.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Part {
    /// Binary trellis of (N_Z, S_Z), used with the X-check syndrome.
    X,
    /// Binary trellis of (N_X, S_X), used with the Z-check syndrome.
    Z,
}

#[derive(Debug, Clone, Args)]
pub struct TrellisArgs {
    /// Built-in code name or path to a code file.
    #[arg(long)]
    pub code: String,
    /// Multi-goal trellis of (N, S) instead of the single-goal trellis of N.
    #[arg(long)]
    pub multigoal: bool,
    /// Binary multi-goal trellis of one CSS part.
    #[arg(long, value_enum, conflicts_with = "multigoal")]
    pub css: Option<Part>,
    #[arg(long, default_value = "extended_shannon", value_parser = parse_method)]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub trellis: TrellisArgs,
    /// Write the trellis JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Json,
    Dot,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub trellis: TrellisArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ExportFormat,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Comma-separated codes; all built-in codes when absent.
    #[arg(long, value_delimiter = ',')]
    pub codes: Option<Vec<String>>,
    #[arg(long, default_value = "extended_shannon", value_parser = parse_method)]
    pub method: Method,
    /// CSV with columns code,trellis,vertices,edges,cost to compare against.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Ndml,
    Dml,
    Css,
}

impl From<ModeArg> for DecodeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ndml => DecodeMode::Ndml,
            ModeArg::Dml => DecodeMode::Dml,
            ModeArg::Css => DecodeMode::Css,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MarginalArg {
    Independent,
    Exact,
}

impl From<MarginalArg> for MarginalModel {
    fn from(m: MarginalArg) -> Self {
        match m {
            MarginalArg::Independent => MarginalModel::Independent,
            MarginalArg::Exact => MarginalModel::Exact,
        }
    }
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: String,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Bit string, first bit for the first generator. In css mode,
    /// `<X-check bits>/<Z-check bits>`.
    #[arg(long)]
    pub syndrome: String,
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_enum, default_value = "independent")]
    pub marginal: MarginalArg,
    #[arg(long)]
    pub json: bool,
    /// Also run the brute-force decoder.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimModeArg {
    Ndml,
    Dml,
    Css,
    All,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub code: String,
    #[arg(long, value_enum, default_value = "dml")]
    pub mode: SimModeArg,
    /// `start:stop:step` (inclusive) or a comma-separated list.
    #[arg(long, default_value = "0.05:0.35:0.05")]
    pub p: String,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "QTRELLIS_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value = "independent")]
    pub marginal: MarginalArg,
    /// CSV output; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: TrellisError| e.to_string())
}

/// Parses `a:b:step` (inclusive of `b` up to rounding) or `a,b,c`.
pub fn parse_p_values(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::BadRange(s.to_string());
    let parts: Vec<&str> = s.split(':').collect();
    let out: Vec<f64> = match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step): (f64, f64, f64) = (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
                step.trim().parse().map_err(|_| bad())?,
            );
            if step.is_nan() || step <= 0.0 || b < a {
                return Err(bad());
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            (0..=count)
                .map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12)
                .collect()
        }
        [_] => s
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?,
        _ => return Err(bad()),
    };
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn parse_bits(s: &str) -> Result<BinaryVector, CliError> {
    s.trim()
        .parse()
        .map_err(|e: crate::pauli::PauliError| CliError::Syndrome(s.to_string(), e.to_string()))
}

fn css_of(code: &LoadedCode) -> Result<&crate::code::CssCode, CliError> {
    code.css
        .as_ref()
        .ok_or_else(|| CliError::NotCss(code.name.clone()))
}

pub fn build_selected(args: &TrellisArgs) -> Result<(LoadedCode, Trellis), CliError> {
    let code = load_code(&args.code)?;
    let t = match (args.css, args.multigoal) {
        (Some(Part::X), _) => build_joint_trellis(&css_of(&code)?.joint_x(), args.method)?,
        (Some(Part::Z), _) => build_joint_trellis(&css_of(&code)?.joint_z(), args.method)?,
        (None, true) => build_multigoal_trellis(&code.code, args.method)?,
        (None, false) => build_min_trellis_tof(&code.code)?,
    };
    Ok((code, t))
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::File {
        path: path.clone(),
        source,
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn print_report(out: &mut dyn Write, r: &ComplexityReport) -> std::io::Result<()> {
    writeln!(out, "vertices       {}", r.num_vertices)?;
    writeln!(out, "edges          {}", r.num_edges)?;
    writeln!(out, "2|E|-|V|       {}", r.viterbi_cost)?;
    writeln!(out, "state profile  {}", join(&r.state_profile))?;
    writeln!(out, "edge profile   {}", join(&r.edge_profile))
}

fn build_cmd(a: &BuildArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (_, t) = build_selected(&a.trellis)?;
    if let Some(path) = &a.out {
        write_file(path, &to_json(&t))?;
    }
    let r = t.complexity();
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
    } else {
        print_report(out, &r)?;
    }
    Ok(())
}

fn export_cmd(a: &ExportArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (_, t) = build_selected(&a.trellis)?;
    let text = match a.format {
        ExportFormat::Json => to_json(&t),
        ExportFormat::Dot => to_dot(&t),
    };
    match &a.out {
        Some(path) => write_file(path, &text),
        None => Ok(writeln!(out, "{text}")?),
    }
}

/// One row of the complexity table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub code: String,
    pub trellis: String,
    pub vertices: usize,
    pub edges: usize,
    pub cost: i64,
    /// Reference cells that differ from the computed ones.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mismatches: Vec<String>,
}

#[derive(Debug, serde::Deserialize)]
struct ReferenceRow {
    code: String,
    trellis: String,
    vertices: Option<usize>,
    edges: Option<usize>,
    cost: Option<i64>,
}

/// Complexity rows for T (and T_X, T_Z for CSS codes).
pub fn complexity_rows(codes: &[String], method: Method) -> Result<Vec<TableRow>, CliError> {
    let mut rows = Vec::new();
    for name in codes {
        let code = load_code(name)?;
        let mut push = |label: &str, t: &Trellis| {
            rows.push(TableRow {
                code: code.name.clone(),
                trellis: label.to_string(),
                vertices: t.num_vertices(),
                edges: t.num_edges(),
                cost: 2 * t.num_edges() as i64 - t.num_vertices() as i64,
                mismatches: Vec::new(),
            })
        };
        push("T", &build_multigoal_trellis(&code.code, method)?);
        if let Some(css) = &code.css {
            push("T_X", &build_joint_trellis(&css.joint_x(), method)?);
            push("T_Z", &build_joint_trellis(&css.joint_z(), method)?);
        }
    }
    Ok(rows)
}

fn mark_reference(rows: &mut [TableRow], path: &PathBuf) -> Result<(), CliError> {
    let file = std::fs::File::open(path).map_err(|source| CliError::File {
        path: path.clone(),
        source,
    })?;
    let mut rdr = csv::Reader::from_reader(file);
    for rec in rdr.deserialize() {
        let r: ReferenceRow = rec?;
        let Some(row) = rows
            .iter_mut()
            .find(|x| x.code == r.code && x.trellis == r.trellis)
        else {
            continue;
        };
        let cells = [
            (
                "vertices",
                r.vertices.map(|v| v as i64),
                row.vertices as i64,
            ),
            ("edges", r.edges.map(|v| v as i64), row.edges as i64),
            ("cost", r.cost, row.cost),
        ];
        for (name, want, got) in cells {
            if let Some(w) = want {
                if w != got {
                    row.mismatches.push(format!("{name} {w}"));
                }
            }
        }
    }
    Ok(())
}

fn table_cmd(a: &TableArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let codes: Vec<String> = match &a.codes {
        Some(list) => list
            .iter()
            .filter(|s| !s.trim().is_empty())
            .cloned()
            .collect(),
        None => builtin_names().into_iter().map(String::from).collect(),
    };
    let mut rows = complexity_rows(&codes, a.method)?;
    if let Some(path) = &a.reference {
        mark_reference(&mut rows, path)?;
    }
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
        return Ok(());
    }
    if rows.is_empty() {
        return Ok(());
    }
    writeln!(
        out,
        "{:<12} {:<8} {:>10} {:>10} {:>10}  reference",
        "code", "trellis", "|V|", "|E|", "2|E|-|V|"
    )?;
    for r in &rows {
        let note = if r.mismatches.is_empty() {
            String::new()
        } else {
            format!("differs: {}", r.mismatches.join(", "))
        };
        writeln!(
            out,
            "{:<12} {:<8} {:>10} {:>10} {:>10}  {}",
            r.code, r.trellis, r.vertices, r.edges, r.cost, note
        )?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct DecodeOutput<'a> {
    code: &'a str,
    p: f64,
    result: &'a DecodeResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleOutput>,
}

#[derive(Debug, Serialize)]
struct OracleOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    max_log_prob: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    coset_log_probs: Vec<f64>,
}

fn decode_cmd(a: &DecodeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let code = load_code(&a.code)?;
    let ch = ChannelModel::depolarizing(a.p)?;
    let mode: DecodeMode = a.mode.into();
    let (result, oracle_out) = match mode {
        DecodeMode::Ndml => {
            let sigma = parse_bits(&a.syndrome)?;
            let t = build_min_trellis_tof(&code.code)?;
            let r = ndml_decode(&t, &code.code, &sigma, &ch)?;
            let o = if a.oracle {
                let (_, p) = oracle::brute_ndml(&code.code, &sigma, &ch)?;
                Some(OracleOutput {
                    max_log_prob: Some(p.ln()),
                    coset_log_probs: Vec::new(),
                })
            } else {
                None
            };
            (r, o)
        }
        DecodeMode::Dml => {
            let sigma = parse_bits(&a.syndrome)?;
            let t = build_multigoal_trellis(&code.code, Method::ExtendedShannon)?;
            let r = dml_decode(&t, &code.code, &sigma, &ch)?;
            let o = if a.oracle {
                let c = oracle::brute_dml(&code.code, &sigma, &ch)?;
                Some(OracleOutput {
                    max_log_prob: None,
                    coset_log_probs: c.iter().map(|p| p.ln()).collect(),
                })
            } else {
                None
            };
            (r, o)
        }
        DecodeMode::Css => {
            let css = css_of(&code)?;
            let (sx, sz) = a.syndrome.split_once('/').ok_or_else(|| {
                CliError::Syndrome(
                    a.syndrome.clone(),
                    "css mode expects <X bits>/<Z bits>".into(),
                )
            })?;
            let (sx, sz) = (parse_bits(sx)?, parse_bits(sz)?);
            let tx = build_joint_trellis(&css.joint_x(), Method::ExtendedShannon)?;
            let tz = build_joint_trellis(&css.joint_z(), Method::ExtendedShannon)?;
            let r = css_dml_decode(&tx, &tz, css, &sx, &sz, &ch, a.marginal.into())?;
            let o = if a.oracle {
                let (chz, chx) = css_marginal_channels(&ch, a.marginal.into());
                let (zc, xc) = oracle::brute_css_dml(css, &sx, &sz, &chz, &chx)?;
                let mut table = vec![f64::NEG_INFINITY; 1 << (2 * css.k())];
                for (cx, px) in xc.iter().enumerate() {
                    for (cz, pz) in zc.iter().enumerate() {
                        table[css_label(css.k(), cx as u64, cz as u64) as usize] =
                            px.ln() + pz.ln();
                    }
                }
                Some(OracleOutput {
                    max_log_prob: None,
                    coset_log_probs: table,
                })
            } else {
                None
            };
            (r, o)
        }
    };
    if a.json {
        let doc = DecodeOutput {
            code: &code.name,
            p: a.p,
            result: &result,
            oracle: oracle_out,
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        return Ok(());
    }
    writeln!(out, "code       {}", code.name)?;
    writeln!(out, "mode       {}", result.mode)?;
    writeln!(out, "estimate   {}", result.error_estimate)?;
    writeln!(out, "log prob   {:.12}", result.log_prob)?;
    if let Some(o) = oracle_out.as_ref().and_then(|o| o.max_log_prob) {
        writeln!(out, "oracle     {o:.12}")?;
    }
    if let Some(w) = result.winning_logical {
        writeln!(out, "winning    {w}")?;
        let reference = oracle_out.as_ref().map(|o| &o.coset_log_probs);
        match reference {
            Some(_) => writeln!(out, "{:>6} {:>20} {:>20}", "coset", "log prob", "oracle")?,
            None => writeln!(out, "{:>6} {:>20}", "coset", "log prob")?,
        }
        for (c, lp) in result.coset_log_probs.iter().enumerate() {
            match reference {
                Some(r) => writeln!(out, "{c:>6} {lp:>20.12} {:>20.12}", r[c])?,
                None => writeln!(out, "{c:>6} {lp:>20.12}")?,
            }
        }
    }
    Ok(())
}

fn simulate_cmd(a: &SimArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let code = load_code(&a.code)?;
    let cfg = SimConfig {
        p_values: parse_p_values(&a.p)?,
        trials: a.trials,
        seed: a.seed,
        threads: a.threads,
    };
    let modes: Vec<DecodeMode> = match a.mode {
        SimModeArg::Ndml => vec![DecodeMode::Ndml],
        SimModeArg::Dml => vec![DecodeMode::Dml],
        SimModeArg::Css => vec![DecodeMode::Css],
        SimModeArg::All if code.css.is_some() => DecodeMode::ALL.to_vec(),
        SimModeArg::All => vec![DecodeMode::Ndml, DecodeMode::Dml],
    };
    let mut rows: Vec<SimRow> = Vec::new();
    for mode in modes {
        let dec = Decoder::build(&code, mode, a.marginal.into())?;
        let report = run_monte_carlo(&code.name, &dec, &cfg)?;
        eprintln!("{} {}: {:.2}s", code.name, mode, report.wall_clock_secs);
        rows.extend(report.rows);
    }
    let write = |w: &mut dyn Write| -> Result<(), CliError> {
        let mut csv = csv::Writer::from_writer(w);
        for r in &rows {
            csv.serialize(r)?;
        }
        csv.flush()?;
        Ok(())
    };
    match &a.out {
        Some(path) => {
            let mut f = std::fs::File::create(path).map_err(|source| CliError::File {
                path: path.clone(),
                source,
            })?;
            write(&mut f)
        }
        None => write(out),
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::BuildTrellis(a) => build_cmd(a, out),
        Command::ComplexityTable(a) => table_cmd(a, out),
        Command::Decode(a) => decode_cmd(a, out),
        Command::Simulate(a) => simulate_cmd(a, out),
        Command::Export(a) => export_cmd(a, out),
    }
}

/// Loads a trellis saved by `build-trellis --out` or `export --format json`.
pub fn load_trellis(path: &PathBuf) -> Result<Trellis, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.clone(),
        source,
    })?;
    Ok(from_json(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("qtrellis").chain(args.iter().copied()))
            .expect("parse");
        let mut buf = Vec::new();
        run(&cli, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn p_ranges() {
        assert_eq!(parse_p_values("0.1:0.3:0.1").unwrap(), vec![0.1, 0.2, 0.3]);
        assert_eq!(parse_p_values("0.05,0.2").unwrap(), vec![0.05, 0.2]);
        assert_eq!(parse_p_values("0.05:0.35:0.05").unwrap().len(), 7);
        assert!(parse_p_values("0.3:0.1:0.1").is_err());
        assert!(parse_p_values("a").is_err());
        assert!(parse_p_values("0.1:0.2").is_err());
    }

    #[test]
    fn empty_table() {
        assert_eq!(run_args(&["complexity-table", "--codes", ""]).unwrap(), "");
    }

    #[test]
    fn build_summary() {
        let s = run_args(&["build-trellis", "--code", "code422", "--multigoal"]).unwrap();
        assert!(s.contains("state profile  1,4,16,64,16"), "{s}");
        assert!(s.contains("edge profile   4,16,64,64"), "{s}");
    }

    #[test]
    fn decode_errors() {
        assert!(matches!(
            run_args(&[
                "decode",
                "--code",
                "code422",
                "--mode",
                "css",
                "--syndrome",
                "1",
                "--p",
                "0.1"
            ]),
            Err(CliError::Syndrome(..))
        ));
        assert!(matches!(
            run_args(&[
                "decode",
                "--code",
                "code422",
                "--mode",
                "ndml",
                "--syndrome",
                "1x",
                "--p",
                "0.1"
            ]),
            Err(CliError::Syndrome(..))
        ));
        assert!(matches!(
            run_args(&[
                "decode",
                "--code",
                "code422",
                "--mode",
                "ndml",
                "--syndrome",
                "10",
                "--p",
                "0"
            ]),
            Err(CliError::Decode(DecodeError::BadProbability(_)))
        ));
    }
}
