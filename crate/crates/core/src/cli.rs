//! Experiment config files, (d, p) sweeps, CSV output and bound verification.
//!
//! A config file is TOML:
//!
//! ```toml
//! agents = 20          # K
//! horizon = 1000       # T
//! arms = 10            # optional; checked against the arm list
//! d_values = [2, 10, 19]
//! p_values = [0.5]
//! xi = 1.01            # default 1.01
//! mode = "undirected"  # or "directed"; default undirected
//! zeta = 2.0           # default 2
//! replications = 1000  # default 1000
//! seed = 0             # default 0
//! output = "results"   # optional default for --out
//!
//! [[arm]]
//! kind = "gaussian"
//! mean = 11.0
//! variance = 1.0
//!
//! [[arm]]
//! kind = "gaussian"
//! mean = 10.0
//! variance = 1.0
//! count = 9            # repeat this arm
//! ```
//!
//! Arm kinds: `gaussian` (mean, variance), `bernoulli` (mean), `triangular`
//! (mode, optional low/high defaulting to 0/1) and `constant` (mean).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{self, BoundParams, DEFAULT_ZETA};
use crate::engine::{run_experiment, AggregateTrace, ExperimentConfig};
use crate::env::{ArmKind, ArmSpec, BanditInstance};
use crate::network::{build_regular_graph, is_feasible_degree, EdgeMode, GraphSummary};
use crate::{Error, Result};

pub const DEFAULT_XI: f64 = 1.01;
pub const DEFAULT_REPLICATIONS: usize = 1000;
pub const METADATA_FILE: &str = "metadata.toml";

pub const TRACE_HEADER: [&str; 3] = ["t", "mean_regret", "ci_half_width"];
pub const FINAL_HEADER: [&str; 3] = ["p", "mean_regret_T", "ci_half_width"];
pub const BOUND_HEADER: [&str; 2] = ["t", "bound"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArm {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    low: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    high: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    agents: usize,
    horizon: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arms: Option<usize>,
    d_values: Vec<usize>,
    p_values: Vec<f64>,
    #[serde(default)]
    xi: Option<f64>,
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    zeta: Option<f64>,
    #[serde(default)]
    replications: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output: Option<PathBuf>,
    #[serde(default, rename = "arm")]
    arm: Vec<RawArm>,
    /// Present only in run metadata; ignored on input.
    #[serde(default, skip_serializing)]
    run: Option<toml::Value>,
}

/// A grid of experiments over degrees and link probabilities sharing one
/// base configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Shared settings; `degree` and `p` hold the first cell (or 0 when the
    /// grid is empty) and are overridden per cell.
    pub base: ExperimentConfig,
    pub d_values: Vec<usize>,
    pub p_values: Vec<f64>,
    pub zeta: f64,
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    /// Every `(d, p)` cell, degree-major.
    pub fn cells(&self) -> Vec<(usize, f64)> {
        self.d_values
            .iter()
            .flat_map(|&d| self.p_values.iter().map(move |&p| (d, p)))
            .collect()
    }

    pub fn cell_config(&self, degree: usize, p: f64) -> ExperimentConfig {
        ExperimentConfig {
            degree,
            p,
            ..self.base.clone()
        }
    }

    pub fn bound_params(&self, degree: usize, p: f64) -> BoundParams {
        let b = &self.base;
        BoundParams::new(&b.instance, b.agents, degree, p, b.xi, self.zeta, b.horizon)
    }

    /// Fully explicit config text with every default filled in.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_raw()).expect("config serializes")
    }

    fn to_raw(&self) -> RawConfig {
        let b = &self.base;
        let mut arms: Vec<RawArm> = Vec::new();
        let mut last: Option<ArmSpec> = None;
        for arm in b.instance.arms() {
            if last.as_ref() == Some(arm) {
                let prev = arms.last_mut().expect("run in progress");
                prev.count = Some(prev.count.unwrap_or(1) + 1);
            } else {
                arms.push(raw_arm(arm));
                last = Some(*arm);
            }
        }
        RawConfig {
            agents: b.agents,
            horizon: b.horizon,
            arms: Some(b.instance.len()),
            d_values: self.d_values.clone(),
            p_values: self.p_values.clone(),
            xi: Some(b.xi),
            mode: Some(b.mode.to_string()),
            zeta: Some(self.zeta),
            replications: Some(b.replications),
            seed: Some(b.master_seed),
            output: self.output.clone(),
            arm: arms,
            run: None,
        }
    }
}

fn raw_arm(arm: &ArmSpec) -> RawArm {
    let mut raw = RawArm {
        kind: arm.kind().to_string(),
        mean: None,
        variance: None,
        low: None,
        high: None,
        mode: None,
        count: None,
    };
    match arm.kind() {
        ArmKind::Gaussian => {
            raw.mean = Some(arm.mean());
            raw.variance = Some(arm.variance_proxy());
        }
        ArmKind::Bernoulli | ArmKind::Constant => raw.mean = Some(arm.mean()),
        ArmKind::Triangular => {
            let (low, high) = arm.support().expect("bounded");
            raw.low = Some(low);
            raw.high = Some(high);
            raw.mode = arm.mode();
        }
    }
    raw
}

fn build_arm(index: usize, raw: &RawArm) -> Result<ArmSpec> {
    let key = |field: &str| format!("arm[{index}].{field}");
    let need = |field: &str, v: Option<f64>| {
        v.ok_or_else(|| Error::config(key(field), "required for this kind"))
    };
    let forbid = |field: &str, v: Option<f64>| match v {
        Some(_) => Err(Error::config(
            key(field),
            format!("not used by kind `{}`", raw.kind),
        )),
        None => Ok(()),
    };
    let kind: ArmKind = raw
        .kind
        .parse()
        .map_err(|_| Error::config(key("kind"), format!("unsupported arm kind `{}`", raw.kind)))?;
    let rekey = |e: Error| match e {
        Error::Config { key: field, reason } => Error::config(key(&field), reason),
        other => Error::config(key("kind"), other.to_string()),
    };
    match kind {
        ArmKind::Gaussian => {
            for (f, v) in [("low", raw.low), ("high", raw.high), ("mode", raw.mode)] {
                forbid(f, v)?;
            }
            ArmSpec::gaussian(need("mean", raw.mean)?, need("variance", raw.variance)?)
                .map_err(rekey)
        }
        ArmKind::Bernoulli => {
            for (f, v) in [
                ("variance", raw.variance),
                ("low", raw.low),
                ("high", raw.high),
                ("mode", raw.mode),
            ] {
                forbid(f, v)?;
            }
            ArmSpec::bernoulli(need("mean", raw.mean)?).map_err(rekey)
        }
        ArmKind::Constant => {
            for (f, v) in [
                ("variance", raw.variance),
                ("low", raw.low),
                ("high", raw.high),
                ("mode", raw.mode),
            ] {
                forbid(f, v)?;
            }
            ArmSpec::constant(need("mean", raw.mean)?).map_err(rekey)
        }
        ArmKind::Triangular => {
            for (f, v) in [("mean", raw.mean), ("variance", raw.variance)] {
                forbid(f, v)?;
            }
            ArmSpec::triangular(
                raw.low.unwrap_or(0.0),
                raw.high.unwrap_or(1.0),
                need("mode", raw.mode)?,
            )
            .map_err(rekey)
        }
    }
}

fn build_spec(raw: RawConfig) -> Result<SweepSpec> {
    let mut arms = Vec::new();
    for (i, a) in raw.arm.iter().enumerate() {
        let count = a.count.unwrap_or(1);
        if count == 0 {
            return Err(Error::config(
                format!("arm[{i}].count"),
                "must be at least 1",
            ));
        }
        let spec = build_arm(i, a)?;
        arms.extend(std::iter::repeat_n(spec, count));
    }
    if arms.is_empty() {
        return Err(Error::config(
            "arm",
            "at least one [[arm]] table is required",
        ));
    }
    if let Some(n) = raw.arms {
        if n != arms.len() {
            return Err(Error::config(
                "arms",
                format!("says {n} but {} arms are listed", arms.len()),
            ));
        }
    }
    if raw.agents == 0 {
        return Err(Error::config("agents", "must be at least 1"));
    }
    if raw.horizon == 0 {
        return Err(Error::config("horizon", "must be at least 1"));
    }
    for (i, &d) in raw.d_values.iter().enumerate() {
        if !is_feasible_degree(raw.agents, d) {
            return Err(Error::config(
                format!("d_values[{i}]"),
                Error::InfeasibleDegree {
                    agents: raw.agents,
                    degree: d,
                }
                .to_string(),
            ));
        }
    }
    for (i, &p) in raw.p_values.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::config(
                format!("p_values[{i}]"),
                format!("{p} outside [0, 1]"),
            ));
        }
    }
    let xi = raw.xi.unwrap_or(DEFAULT_XI);
    if !(xi > 1.0) || !xi.is_finite() {
        return Err(Error::config(
            "xi",
            format!("{xi} must be a finite number above 1"),
        ));
    }
    let zeta = raw.zeta.unwrap_or(DEFAULT_ZETA);
    if !(zeta > 1.0) || !zeta.is_finite() {
        return Err(Error::config(
            "zeta",
            format!("{zeta} must be a finite number above 1"),
        ));
    }
    let mode: EdgeMode = raw.mode.as_deref().unwrap_or("undirected").parse()?;
    let replications = raw.replications.unwrap_or(DEFAULT_REPLICATIONS);
    if replications == 0 {
        return Err(Error::config("replications", "must be at least 1"));
    }
    let seed = raw.seed.unwrap_or(0);
    if seed > i64::MAX as u64 {
        return Err(Error::config("seed", "must fit in a signed 64-bit integer"));
    }

    let base = ExperimentConfig {
        agents: raw.agents,
        horizon: raw.horizon,
        degree: raw.d_values.first().copied().unwrap_or(0),
        p: raw.p_values.first().copied().unwrap_or(0.0),
        xi,
        mode,
        replications,
        master_seed: seed,
        instance: BanditInstance::new(arms)?,
    };
    base.validate()?;
    Ok(SweepSpec {
        base,
        d_values: raw.d_values,
        p_values: raw.p_values,
        zeta,
        output: raw.output,
    })
}

/// Parses config text; `origin` only labels diagnostics.
pub fn parse_config_str(text: &str, origin: &Path) -> Result<SweepSpec> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        reason: e.message().to_string(),
    })?;
    build_spec(raw)
}

pub fn parse_config(path: &Path) -> Result<SweepSpec> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::io(path, e),
    })?;
    parse_config_str(&text, path)
}

/// Formats a probability the way file names carry it (`0.5`, `1`, `0.25`).
pub fn format_p(p: f64) -> String {
    format!("{p}")
}

pub fn trace_file_name(degree: usize, p: f64) -> String {
    format!("trace_d{degree}_p{}.csv", format_p(p))
}

pub fn bound_file_name(degree: usize, p: f64) -> String {
    format!("bound_d{degree}_p{}.csv", format_p(p))
}

pub fn final_file_name(degree: usize) -> String {
    format!("final_vs_p_d{degree}.csv")
}

#[derive(Serialize)]
struct RunInfo {
    version: &'static str,
    graphs: Vec<GraphSummary>,
}

#[derive(Serialize)]
struct Metadata {
    #[serde(flatten)]
    config: RawConfig,
    run: RunInfo,
}

/// Config echo plus graph summaries and the crate version. Parses back to
/// the same [`SweepSpec`].
pub fn metadata_toml(spec: &SweepSpec) -> Result<String> {
    let graphs = spec
        .d_values
        .iter()
        .map(|&d| build_regular_graph(spec.base.agents, d).map(|g| g.summary()))
        .collect::<Result<_>>()?;
    let meta = Metadata {
        config: spec.to_raw(),
        run: RunInfo {
            version: env!("CARGO_PKG_VERSION"),
            graphs,
        },
    };
    Ok(toml::to_string(&meta).expect("metadata serializes"))
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub degree: usize,
    pub p: f64,
    pub aggregate: AggregateTrace,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub files: Vec<PathBuf>,
    pub cells: Vec<CellResult>,
}

impl SweepOutcome {
    pub fn cell(&self, degree: usize, p: f64) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.degree == degree && c.p == p)
    }
}

fn write_csv<const W: usize>(
    path: &Path,
    header: [&str; W],
    rows: impl IntoIterator<Item = [String; W]>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            path: path.to_path_buf(),
            reason: format!("{other:?}"),
        },
    })?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Runs every cell of `spec` and writes its CSV files and `metadata.toml`
/// into `out_dir`. The directory is created and the metadata written before
/// any simulation starts.
pub fn run_sweep(spec: &SweepSpec, out_dir: &Path) -> Result<SweepOutcome> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let meta_path = out_dir.join(METADATA_FILE);
    fs::write(&meta_path, metadata_toml(spec)?).map_err(|e| Error::io(&meta_path, e))?;

    let mut files = vec![meta_path];
    let mut cells = Vec::new();
    for &d in &spec.d_values {
        let mut finals = Vec::new();
        for &p in &spec.p_values {
            let aggregate = run_experiment(&spec.cell_config(d, p))?;

            let trace_path = out_dir.join(trace_file_name(d, p));
            write_csv(
                &trace_path,
                TRACE_HEADER,
                aggregate
                    .mean
                    .iter()
                    .zip(&aggregate.ci_half_width)
                    .enumerate()
                    .map(|(i, (m, w))| [(i + 1).to_string(), m.to_string(), w.to_string()]),
            )?;
            files.push(trace_path);

            let bound_path = out_dir.join(bound_file_name(d, p));
            let curve = analysis::bound_curve(&spec.bound_params(d, p), spec.base.horizon)?;
            write_csv(
                &bound_path,
                BOUND_HEADER,
                curve
                    .iter()
                    .enumerate()
                    .map(|(i, b)| [(i + 1).to_string(), b.to_string()]),
            )?;
            files.push(bound_path);

            finals.push([
                format_p(p),
                aggregate.final_mean().to_string(),
                aggregate.final_ci().to_string(),
            ]);
            cells.push(CellResult {
                degree: d,
                p,
                aggregate,
            });
        }
        let final_path = out_dir.join(final_file_name(d));
        write_csv(&final_path, FINAL_HEADER, finals)?;
        files.push(final_path);
    }
    Ok(SweepOutcome { files, cells })
}

/// Outcome of comparing one cell's trace with its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CellCheck {
    pub degree: usize,
    pub p: f64,
    /// `max_t (mean_regret(t) - bound(t))`.
    pub max_excess: f64,
    /// Step at which `max_excess` occurs.
    pub worst_t: u64,
    pub flagged: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub cells: Vec<CellCheck>,
}

impl VerifyReport {
    pub fn has_violations(&self) -> bool {
        self.cells.iter().any(|c| c.flagged)
    }
}

/// Reads `(t, mean_regret)` pairs from a trace file.
pub fn read_trace(path: &Path) -> Result<Vec<(u64, f64)>> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let bad = |reason: String| Error::Parse {
        path: path.to_path_buf(),
        reason,
    };
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().ne(TRACE_HEADER) {
        return Err(bad(format!(
            "unexpected header {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let t: u64 = rec[0]
            .parse()
            .map_err(|_| bad(format!("bad step `{}`", &rec[0])))?;
        let m: f64 = rec[1]
            .parse()
            .map_err(|_| bad(format!("bad mean `{}`", &rec[1])))?;
        if t == 0 {
            return Err(bad("steps are 1-based".into()));
        }
        rows.push((t, m));
    }
    Ok(rows)
}

/// Checks every cell's trace in `out_dir` against the bound with the
/// spec's zeta.
pub fn verify_bounds(spec: &SweepSpec, out_dir: &Path) -> Result<VerifyReport> {
    let mut cells = Vec::new();
    for (d, p) in spec.cells() {
        let rows = read_trace(&out_dir.join(trace_file_name(d, p)))?;
        let params = spec.bound_params(d, p);
        let mut worst = (f64::NEG_INFINITY, 0);
        for (t, mean) in rows {
            let excess = mean - analysis::regret_bound(&params.with_horizon(t))?;
            if excess > worst.0 {
                worst = (excess, t);
            }
        }
        cells.push(CellCheck {
            degree: d,
            p,
            max_excess: worst.0,
            worst_t: worst.1,
            flagged: worst.0 > 0.0,
        });
    }
    Ok(VerifyReport { cells })
}

/// How `bound` picks zeta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZetaChoice {
    Fixed(f64),
    /// Minimize over [`analysis::zeta_grid`].
    Tightest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub degree: usize,
    pub p: f64,
    pub zeta: f64,
    pub prefactor: f64,
    pub log_term: f64,
    pub constant_term: f64,
    pub bound: f64,
}

/// Bound at the horizon for every cell of `spec`.
pub fn bound_table(spec: &SweepSpec, choice: ZetaChoice) -> Result<Vec<BoundRow>> {
    spec.cells()
        .into_iter()
        .map(|(d, p)| {
            let base = spec.bound_params(d, p);
            let zeta = match choice {
                ZetaChoice::Fixed(z) => z,
                ZetaChoice::Tightest => analysis::tightest_zeta(&base)?.0,
            };
            let params = base.with_zeta(zeta);
            let (log_term, constant_term) = analysis::regret_bound_terms(&params)?;
            Ok(BoundRow {
                degree: d,
                p,
                zeta,
                prefactor: analysis::bound_first_term_prefactor(params.agents, p, d),
                log_term,
                constant_term,
                bound: log_term + constant_term,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
agents = 20
horizon = 1000
d_values = [2, 10, 19]
p_values = [0.5]

[[arm]]
kind = "gaussian"
mean = 11.0
variance = 1.0

[[arm]]
kind = "gaussian"
mean = 10.0
variance = 1.0
count = 9
"#;

    fn parse(text: &str) -> Result<SweepSpec> {
        parse_config_str(text, Path::new("test.toml"))
    }

    fn config_key(e: Error) -> String {
        match e {
            Error::Config { key, .. } => key,
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let spec = parse(MINIMAL).unwrap();
        assert_eq!(spec.base.agents, 20);
        assert_eq!(spec.base.arms(), 10);
        assert_eq!(spec.base.horizon, 1000);
        assert_eq!(spec.base.xi, 1.01);
        assert_eq!(spec.base.mode, EdgeMode::Undirected);
        assert_eq!(spec.base.replications, 1000);
        assert_eq!(spec.zeta, 2.0);
        assert_eq!(
            spec.base.instance,
            BanditInstance::gaussian_benchmark(10, 11.0, 10.0, 1.0).unwrap()
        );
        assert_eq!(spec.cells().len(), 3);

        let echo = spec.to_toml();
        for key in [
            "xi = 1.01",
            "mode = \"undirected\"",
            "zeta = 2.0",
            "replications = 1000",
        ] {
            assert!(echo.contains(key), "{key} missing from\n{echo}");
        }
        assert_eq!(parse(&echo).unwrap(), spec);
    }

    #[test]
    fn infeasible_degree_names_the_key() {
        let text = MINIMAL
            .replace("agents = 20", "agents = 5")
            .replace("[2, 10, 19]", "[2, 3]");
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("3-regular"), "{err}");
        assert_eq!(config_key(err), "d_values[1]");
    }

    #[test]
    fn p_grid_round_trips() {
        let text = MINIMAL.replace("[0.5]", "[0, 0.25, 0.5, 0.75, 1.0]");
        let spec = parse(&text).unwrap();
        assert_eq!(spec.p_values, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse(&spec.to_toml()).unwrap().p_values, spec.p_values);
    }

    #[test]
    fn diagnostics() {
        assert_eq!(
            config_key(parse(&MINIMAL.replace("[0.5]", "[0.5, 1.5]")).unwrap_err()),
            "p_values[1]"
        );
        assert_eq!(
            config_key(parse(&format!("xi = 0.9\n{MINIMAL}")).unwrap_err()),
            "xi"
        );
        assert_eq!(
            config_key(parse(&format!("zeta = 1.0\n{MINIMAL}")).unwrap_err()),
            "zeta"
        );
        assert_eq!(
            config_key(parse(&format!("replications = 0\n{MINIMAL}")).unwrap_err()),
            "replications"
        );
        assert_eq!(
            config_key(parse(&format!("arms = 4\n{MINIMAL}")).unwrap_err()),
            "arms"
        );
        assert_eq!(
            config_key(parse(&format!("mode = \"sideways\"\n{MINIMAL}")).unwrap_err()),
            "mode"
        );
        assert_eq!(
            config_key(parse(&MINIMAL.replace("variance = 1.0\ncount", "count")).unwrap_err()),
            "arm[1].variance"
        );
        assert_eq!(
            config_key(parse(&MINIMAL.replacen("gaussian", "cauchy", 1)).unwrap_err()),
            "arm[0].kind"
        );

        let missing = parse(&MINIMAL.replace("horizon = 1000", "")).unwrap_err();
        assert!(
            matches!(&missing, Error::Parse { reason, .. } if reason.contains("horizon")),
            "{missing}"
        );
        let unknown = parse(&format!("horizn = 3\n{MINIMAL}")).unwrap_err();
        assert!(
            matches!(&unknown, Error::Parse { reason, .. } if reason.contains("horizn")),
            "{unknown}"
        );
    }

    #[test]
    fn other_arm_kinds() {
        let text = r#"
agents = 4
horizon = 10
d_values = [2]
p_values = [1.0]
mode = "directed"

[[arm]]
kind = "triangular"
mode = 1.0

[[arm]]
kind = "bernoulli"
mean = 0.4

[[arm]]
kind = "constant"
mean = 0.1
"#;
        let spec = parse(text).unwrap();
        let arms = spec.base.instance.arms();
        assert_eq!(arms[0], ArmSpec::triangular(0.0, 1.0, 1.0).unwrap());
        assert_eq!(arms[1], ArmSpec::bernoulli(0.4).unwrap());
        assert_eq!(arms[2], ArmSpec::constant(0.1).unwrap());
        assert_eq!(spec.base.mode, EdgeMode::Directed);
        assert_eq!(parse(&spec.to_toml()).unwrap(), spec);
    }

    #[test]
    fn metadata_parses_back() {
        let spec = parse(MINIMAL).unwrap();
        let meta = metadata_toml(&spec).unwrap();
        assert!(meta.contains("[run]"), "{meta}");
        assert!(meta.contains("offsets"), "{meta}");
        assert_eq!(parse(&meta).unwrap(), spec);
    }

    #[test]
    fn file_names() {
        assert_eq!(trace_file_name(10, 0.5), "trace_d10_p0.5.csv");
        assert_eq!(bound_file_name(19, 1.0), "bound_d19_p1.csv");
        assert_eq!(trace_file_name(2, 0.0), "trace_d2_p0.csv");
        assert_eq!(final_file_name(2), "final_vs_p_d2.csv");
    }

    #[test]
    fn bound_table_choices() {
        let spec = parse(MINIMAL).unwrap();
        let fixed = bound_table(&spec, ZetaChoice::Fixed(2.0)).unwrap();
        assert_eq!(fixed.len(), 3);
        let d10 = &fixed[1];
        assert!((d10.bound - 4200.656726620689).abs() < 1e-8);
        let tight = bound_table(&spec, ZetaChoice::Tightest).unwrap();
        for (a, b) in fixed.iter().zip(&tight) {
            assert!(b.bound <= a.bound);
        }
    }
}
