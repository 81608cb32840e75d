//! Command-line front end: JSON scenario configs in, CSV out.
//!
//! Configs are flat JSON objects (nested objects are flattened with `.`).
//! Angles may be numbers or strings such as `"pi"`, `"-0.5*pi"` or `"1/3*pi"`.

use crate::detection::DetectionScheme;
use crate::error::{Error, Result};
use crate::fisher::{fisher_matrix, qcrb, qfi, qfi_closed_form, Magnitudes, PhaseSpec, Phases};
use crate::heisenberg::{asymptotic_qfi, heisenberg_optima, PowerFractions};
use crate::interferometer::{BsConvention, MziScenario};
use crate::losses::{lossy_optimal_working_point, lossy_sensitivity};
use crate::oracle::suite::{run_suite, VerifyBox};
use crate::pmc::{boundaries, classify, pmc_phases, single_mode_alpha_lim, PmcSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_TRUNCATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mzi", version, about = "Phase estimation in a Mach-Zehnder interferometer with Gaussian inputs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// JSON config file.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Override one key, e.g. `--set port1.alpha.magnitude=2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Write CSV here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Phi,
    Alpha,
    Beta,
    Eta,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fisher matrix, QFI and QCRB of the configured scenario.
    Qfi {
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Tabulate sensitivities and bounds along one parameter.
    Sweep {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, value_enum)]
        axis: Axis,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
    /// Optimal phase-matching atlas over (|α|, |β|) at the configured r, z.
    Regimes {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value_t = 10.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 10.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 41)]
        steps: usize,
    },
    /// Evaluate F/N² on a grid over the power-fraction simplex.
    Heisenberg {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Grid denominator: fractions are multiples of 1/steps.
        #[arg(long, default_value_t = 12)]
        steps: usize,
        #[arg(long, default_value_t = 1e4)]
        n_tot: f64,
    },
    /// Cross-check closed forms against the Fock-space simulator.
    Verify {
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 5)]
        phases: usize,
        #[arg(long, default_value_t = 1.2)]
        alpha_max: f64,
        #[arg(long, default_value_t = 1.2)]
        beta_max: f64,
        #[arg(long, default_value_t = 0.6)]
        r_max: f64,
        #[arg(long, default_value_t = 0.6)]
        z_max: f64,
        #[arg(long, default_value_t = 60)]
        n_max: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Df,
    Sg,
    Hom,
    DfOpt,
    SgOpt,
    HomOpt,
    Qfi,
    Qcrb,
    QfiPmc1,
    QfiPmc2,
    QfiPmc3,
}

impl Column {
    const ALL: [Column; 11] = [
        Column::Df,
        Column::Sg,
        Column::Hom,
        Column::DfOpt,
        Column::SgOpt,
        Column::HomOpt,
        Column::Qfi,
        Column::Qcrb,
        Column::QfiPmc1,
        Column::QfiPmc2,
        Column::QfiPmc3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Column::Df => "df",
            Column::Sg => "sg",
            Column::Hom => "hom",
            Column::DfOpt => "df_opt",
            Column::SgOpt => "sg_opt",
            Column::HomOpt => "hom_opt",
            Column::Qfi => "qfi",
            Column::Qcrb => "qcrb",
            Column::QfiPmc1 => "qfi_pmc1",
            Column::QfiPmc2 => "qfi_pmc2",
            Column::QfiPmc3 => "qfi_pmc3",
        }
    }

    pub fn parse(s: &str) -> Option<Column> {
        Column::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// A fully resolved config.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub magnitudes: Magnitudes,
    pub phases: Phases,
    pub convention: BsConvention,
    pub phase: f64,
    pub efficiency: f64,
    pub pmc: Option<PmcSet>,
    pub scheme: Option<&'static str>,
    pub local_phase: Option<f64>,
    pub columns: Vec<Column>,
    pub shots: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            magnitudes: Magnitudes::new(0.0, 0.0, 0.0, 0.0),
            phases: Phases::default(),
            convention: BsConvention::Symmetric,
            phase: 0.5 * PI,
            efficiency: 1.0,
            pmc: None,
            scheme: None,
            local_phase: None,
            columns: vec![Column::Df, Column::Sg, Column::Hom, Column::Qcrb],
            shots: 1,
        }
    }
}

impl RunConfig {
    /// Phases actually used: the PMC set (referenced to `θ_α`) if given.
    pub fn effective_phases(&self) -> Phases {
        match self.pmc {
            Some(set) => pmc_phases(set, self.phases.theta_alpha, self.convention),
            None => self.phases,
        }
    }

    pub fn scenario(&self) -> MziScenario {
        self.magnitudes
            .scenario(&self.effective_phases(), self.convention)
            .with_phase(self.phase)
            .with_efficiency(self.efficiency)
    }

    pub fn homodyne(&self) -> DetectionScheme {
        DetectionScheme::Homodyne { local_phase: self.local_phase }
    }

    /// Canonical flat form, written into every CSV comment line.
    pub fn to_flat(&self) -> BTreeMap<String, Value> {
        let m = &self.magnitudes;
        let p = &self.phases;
        let mut out = BTreeMap::new();
        let mut put = |k: &str, v: Value| {
            out.insert(k.to_string(), v);
        };
        put("port1.alpha.magnitude", m.alpha.into());
        put("port1.alpha.phase", p.theta_alpha.into());
        put("port1.zeta.factor", m.z.into());
        put("port1.zeta.phase", p.phi_zeta.into());
        put("port0.beta.magnitude", m.beta.into());
        put("port0.beta.phase", p.theta_beta.into());
        put("port0.xi.factor", m.r.into());
        put("port0.xi.phase", p.theta.into());
        put(
            "convention",
            match self.convention {
                BsConvention::Symmetric => "symmetric",
                BsConvention::Cube => "cube",
            }
            .into(),
        );
        put("phase", self.phase.into());
        put("efficiency", self.efficiency.into());
        put("pmc", self.pmc.map_or(Value::Null, |s| s.name().into()));
        put("scheme", self.scheme.map_or(Value::Null, Value::from));
        put("local_phase", self.local_phase.map_or(Value::Null, Value::from));
        put("columns", self.columns.iter().map(|c| c.name()).collect::<Vec<_>>().join(",").into());
        put("shots", self.shots.into());
        out
    }

    fn comment(&self) -> String {
        let map: Map<String, Value> = self.to_flat().into_iter().collect();
        format!("# config: {}", Value::Object(map))
    }
}

fn config_err(field: &str, message: impl Into<String>) -> Error {
    Error::Config { field: field.to_string(), message: message.into() }
}

/// Parse an angle given as a number, `"pi"`, `"<x>*pi"` or `"<p>/<q>*pi"`.
pub fn parse_angle(field: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| config_err(field, "not a finite number")),
        Value::String(s) => {
            let t = s.trim();
            let (coef, multiple) = match t.strip_suffix("pi") {
                Some(rest) => (rest.trim().trim_end_matches('*').trim(), true),
                None => (t, false),
            };
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => parse_ratio(c).ok_or_else(|| config_err(field, format!("cannot parse angle `{s}`")))?,
            };
            let x = if multiple { c * PI } else { c };
            if x.is_finite() {
                Ok(x)
            } else {
                Err(config_err(field, format!("angle `{s}` is not finite")))
            }
        }
        _ => Err(config_err(field, "expected a number or an angle string")),
    }
}

fn parse_ratio(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

fn parse_number(field: &str, v: &Value) -> Result<f64> {
    let x = match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| config_err(field, "expected a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(config_err(field, "must be finite"))
    }
}

fn parse_nonneg(field: &str, v: &Value) -> Result<f64> {
    let x = parse_number(field, v)?;
    if x < 0.0 {
        return Err(config_err(field, format!("{x} is negative")));
    }
    Ok(x)
}

fn parse_str<'a>(field: &str, v: &'a Value) -> Result<&'a str> {
    v.as_str().ok_or_else(|| config_err(field, "expected a string"))
}

fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, Value>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        _ => {
            out.insert(prefix.to_string(), v.clone());
        }
    }
}

/// Parse config text (JSON) into a flat key map.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, Value>> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| config_err("<file>", format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if !v.is_object() {
        return Err(config_err("<file>", "top level must be a JSON object"));
    }
    let mut out = BTreeMap::new();
    flatten("", &v, &mut out);
    Ok(out)
}

/// Apply one `key=value` override. The value is read as JSON if it parses,
/// otherwise as a plain string.
pub fn apply_override(map: &mut BTreeMap<String, Value>, kv: &str) -> Result<()> {
    let (k, v) = kv.split_once('=').ok_or_else(|| config_err(kv, "override must look like key=value"))?;
    let v = v.trim();
    let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
    map.insert(k.trim().to_string(), value);
    Ok(())
}

pub fn build_config(map: &BTreeMap<String, Value>) -> Result<RunConfig> {
    let mut c = RunConfig::default();
    let mut explicit_columns = false;
    for (key, v) in map {
        let k = key.as_str();
        if v.is_null() {
            continue;
        }
        match k {
            "port1.alpha.magnitude" => c.magnitudes.alpha = parse_nonneg(k, v)?,
            "port1.alpha.phase" => c.phases.theta_alpha = parse_angle(k, v)?,
            "port1.zeta.factor" => c.magnitudes.z = parse_nonneg(k, v)?,
            "port1.zeta.phase" => c.phases.phi_zeta = parse_angle(k, v)?,
            "port0.beta.magnitude" => c.magnitudes.beta = parse_nonneg(k, v)?,
            "port0.beta.phase" => c.phases.theta_beta = parse_angle(k, v)?,
            "port0.xi.factor" => c.magnitudes.r = parse_nonneg(k, v)?,
            "port0.xi.phase" => c.phases.theta = parse_angle(k, v)?,
            "convention" => {
                c.convention = match parse_str(k, v)?.to_ascii_lowercase().as_str() {
                    "symmetric" => BsConvention::Symmetric,
                    "cube" => BsConvention::Cube,
                    other => return Err(config_err(k, format!("unknown convention `{other}`"))),
                }
            }
            "phase" => c.phase = parse_angle(k, v)?,
            "efficiency" => {
                let eta = parse_number(k, v)?;
                if !(eta > 0.0 && eta <= 1.0) {
                    return Err(config_err(k, format!("{eta} is outside (0, 1]")));
                }
                c.efficiency = eta;
            }
            "pmc" => {
                let s = parse_str(k, v)?;
                c.pmc = Some(PmcSet::parse(s).ok_or_else(|| config_err(k, format!("unknown set `{s}`")))?);
            }
            "scheme" => {
                c.scheme = Some(match parse_str(k, v)? {
                    "difference" | "df" => "df",
                    "single" | "sg" => "sg",
                    "homodyne" | "hom" => "hom",
                    other => return Err(config_err(k, format!("unknown scheme `{other}`"))),
                })
            }
            "local_phase" => c.local_phase = Some(parse_angle(k, v)?),
            "columns" => {
                let names: Vec<String> = match v {
                    Value::String(s) => s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect(),
                    Value::Array(a) => a.iter().map(|x| parse_str(k, x).map(str::to_string)).collect::<Result<_>>()?,
                    _ => return Err(config_err(k, "expected a list of column names")),
                };
                c.columns = names
                    .iter()
                    .map(|n| Column::parse(n).ok_or_else(|| config_err(k, format!("unknown column `{n}`"))))
                    .collect::<Result<_>>()?;
                if c.columns.is_empty() {
                    return Err(config_err(k, "no columns requested"));
                }
                explicit_columns = true;
            }
            "shots" => {
                c.shots = v
                    .as_u64()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| config_err(k, "expected a positive integer"))?
            }
            _ => return Err(config_err(k, "unknown key")),
        }
    }
    if let (Some(s), false) = (c.scheme, explicit_columns) {
        let (at, opt) = match s {
            "df" => (Column::Df, Column::DfOpt),
            "sg" => (Column::Sg, Column::SgOpt),
            _ => (Column::Hom, Column::HomOpt),
        };
        c.columns = vec![at, opt, Column::Qcrb];
    }
    Ok(c)
}

pub fn load_config(args: &ConfigArgs) -> Result<RunConfig> {
    let mut map = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_err("<file>", format!("{}: {e}", path.display())))?;
            parse_config_text(&text)?
        }
        None => BTreeMap::new(),
    };
    for kv in &args.overrides {
        apply_override(&mut map, kv)?;
    }
    build_config(&map)
}

/// Twelve significant digits, independent of locale.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

/// Flat sensitivities and vanishing information map to `+∞`.
fn or_inf(r: Result<f64>) -> Result<f64> {
    match r {
        Err(Error::FlatObjective) | Err(Error::NonPositiveInformation(_)) => Ok(f64::INFINITY),
        other => other,
    }
}

pub fn evaluate(c: &RunConfig, column: Column) -> Result<f64> {
    let s = c.scenario();
    let m = &c.magnitudes;
    let pmc_qfi = |set| qfi_closed_form(m, PhaseSpec::Pmc(set), c.convention);
    match column {
        Column::Df => or_inf(lossy_sensitivity(DetectionScheme::DifferenceIntensity, &s).map(|p| p.delta_phi)),
        Column::Sg => or_inf(lossy_sensitivity(DetectionScheme::SingleModeIntensity, &s).map(|p| p.delta_phi)),
        Column::Hom => or_inf(lossy_sensitivity(c.homodyne(), &s).map(|p| p.delta_phi)),
        Column::DfOpt => {
            or_inf(lossy_optimal_working_point(DetectionScheme::DifferenceIntensity, &s).map(|p| p.delta_phi))
        }
        Column::SgOpt => {
            or_inf(lossy_optimal_working_point(DetectionScheme::SingleModeIntensity, &s).map(|p| p.delta_phi))
        }
        Column::HomOpt => or_inf(lossy_optimal_working_point(c.homodyne(), &s).map(|p| p.delta_phi)),
        Column::Qfi => qfi(&fisher_matrix(&s)),
        Column::Qcrb => or_inf(qfi(&fisher_matrix(&s)).and_then(|f| qcrb(f, c.shots))),
        Column::QfiPmc1 => Ok(pmc_qfi(PmcSet::Pmc1)),
        Column::QfiPmc2 => Ok(pmc_qfi(PmcSet::Pmc2)),
        Column::QfiPmc3 => Ok(pmc_qfi(PmcSet::Pmc3)),
    }
}

/// Evenly spaced points, both ends included.
pub fn grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| if i + 1 == steps { to } else { from + (to - from) * i as f64 / (steps - 1) as f64 })
        .collect()
}

fn set_axis(c: &mut RunConfig, axis: Axis, x: f64) -> Result<()> {
    match axis {
        Axis::Phi => c.phase = x,
        Axis::Alpha | Axis::Beta if x < 0.0 => return Err(config_err("from/to", "amplitudes must be non-negative")),
        Axis::Alpha => c.magnitudes.alpha = x,
        Axis::Beta => c.magnitudes.beta = x,
        Axis::Eta if !(x > 0.0 && x <= 1.0) => {
            return Err(config_err("from/to", format!("efficiency {x} is outside (0, 1]")))
        }
        Axis::Eta => c.efficiency = x,
    }
    Ok(())
}

/// CSV text of a sweep.
pub fn sweep_csv(c: &RunConfig, axis: Axis, from: f64, to: f64, steps: usize) -> Result<String> {
    if steps < 2 {
        return Err(config_err("steps", format!("need at least 2 steps, got {steps}")));
    }
    if axis == Axis::Eta && from == to {
        return Err(config_err("from/to", "degenerate efficiency range"));
    }
    let xs = grid(from, to, steps);
    let rows: Vec<Vec<f64>> = xs
        .par_iter()
        .map(|&x| {
            let mut point = c.clone();
            set_axis(&mut point, axis, x)?;
            c.columns.iter().map(|&col| evaluate(&point, col)).collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let axis_name = match axis {
        Axis::Phi => "phi",
        Axis::Alpha => "alpha",
        Axis::Beta => "beta",
        Axis::Eta => "eta",
    };
    let mut out = String::new();
    out.push_str(&c.comment());
    out.push('\n');
    out.push_str(axis_name);
    for col in &c.columns {
        out.push(',');
        out.push_str(col.name());
    }
    out.push('\n');
    for (x, row) in xs.iter().zip(rows) {
        out.push_str(&fmt_num(*x));
        for v in row {
            out.push(',');
            out.push_str(&fmt_num(v));
        }
        out.push('\n');
    }
    Ok(out)
}

fn fmt_result(r: Result<f64>) -> String {
    r.map(fmt_num).unwrap_or_else(|_| "undefined".into())
}

/// Boundary values at `(r, z)` as `# name = value` comment lines.
pub fn boundary_block(r: f64, z: f64) -> String {
    let b = boundaries(r, z);
    format!(
        "# alpha_13 = {}\n# alpha_23 = {}\n# alpha_circ = {}\n# beta_12 = {}\n\
         # beta_13(alpha_circ) = {}\n# beta_23(alpha_circ) = {}\n# single_mode_alpha_lim = {}\n",
        fmt_num(b.alpha_13),
        fmt_num(b.alpha_23),
        fmt_num(b.alpha_circ),
        fmt_num(b.beta_12),
        fmt_result(b.beta_13(b.alpha_circ)),
        fmt_result(b.beta_23(b.alpha_circ)),
        fmt_num(single_mode_alpha_lim(z)),
    )
}

pub fn qfi_csv(c: &RunConfig) -> Result<String> {
    let s = c.scenario();
    let fm = fisher_matrix(&s);
    let f = qfi(&fm)?;
    let mut out = format!("{}\nquantity,value\n", c.comment());
    let mut row = |k: &str, v: f64| out.push_str(&format!("{k},{}\n", fmt_num(v)));
    row("f_ss", fm.f_ss);
    row("f_dd", fm.f_dd);
    row("f_sd", fm.f_sd);
    row("qfi", f);
    row("qcrb", qcrb(f, c.shots)?);
    if let Some(set) = c.pmc {
        row("qfi_closed_form", qfi_closed_form(&c.magnitudes, PhaseSpec::Pmc(set), c.convention));
    }
    out.push_str(&boundary_block(c.magnitudes.r, c.magnitudes.z));
    Ok(out)
}

pub fn regimes_csv(c: &RunConfig, alpha_max: f64, beta_max: f64, steps: usize) -> Result<String> {
    if steps < 2 {
        return Err(config_err("steps", format!("need at least 2 steps, got {steps}")));
    }
    if !(alpha_max >= 0.0 && beta_max >= 0.0) {
        return Err(config_err("alpha_max/beta_max", "must be non-negative"));
    }
    let (r, z) = (c.magnitudes.r, c.magnitudes.z);
    let b = boundaries(r, z);
    let mut out = format!("{}\n# r = {}, z = {}\n", c.comment(), fmt_num(r), fmt_num(z));
    out.push_str(&boundary_block(r, z));
    out.push_str("alpha,beta,pmc,qfi_pmc1,qfi_pmc2,qfi_pmc3,beta_13,beta_23\n");
    for a in grid(0.0, alpha_max, steps) {
        for bb in grid(0.0, beta_max, steps) {
            let m = Magnitudes::new(a, bb, r, z);
            let q = |set| fmt_num(qfi_closed_form(&m, PhaseSpec::Pmc(set), BsConvention::Symmetric));
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt_num(a),
                fmt_num(bb),
                classify(a, bb, r, z),
                q(PmcSet::Pmc1),
                q(PmcSet::Pmc2),
                q(PmcSet::Pmc3),
                fmt_result(b.beta_13(a)),
                fmt_result(b.beta_23(a)),
            ));
        }
    }
    Ok(out)
}

/// Rows of the fraction-simplex scan and the best point found.
pub fn heisenberg_csv(c: &RunConfig, steps: usize, n_tot: f64) -> Result<(String, String)> {
    let set = c.pmc.ok_or_else(|| config_err("pmc", "the heisenberg scan needs a phase-matching set"))?;
    if steps < 1 {
        return Err(config_err("steps", "must be at least 1"));
    }
    if !(n_tot > 0.0 && n_tot.is_finite()) {
        return Err(config_err("n_tot", "must be positive"));
    }
    let optima = heisenberg_optima(set);
    let k = steps as f64;
    let mut out = format!("{}\nf_alpha,f_beta,f_r,f_z,asymptotic_ratio,exact_ratio,on_optimum\n", c.comment());
    let mut best = (f64::NEG_INFINITY, [0.0; 4]);
    for i in 0..=steps {
        for j in 0..=steps - i {
            for l in 0..=steps - i - j {
                let m = steps - i - j - l;
                let fr = [i as f64 / k, j as f64 / k, l as f64 / k, m as f64 / k];
                let f = PowerFractions::new(fr[0], fr[1], fr[2], fr[3], n_tot)?;
                let asym = asymptotic_qfi(set, &f) / (n_tot * n_tot);
                let exact = qfi_closed_form(&f.magnitudes(), PhaseSpec::Pmc(set), BsConvention::Symmetric)
                    / (n_tot * n_tot);
                if asym > best.0 {
                    best = (asym, fr);
                }
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    fmt_num(fr[0]),
                    fmt_num(fr[1]),
                    fmt_num(fr[2]),
                    fmt_num(fr[3]),
                    fmt_num(asym),
                    fmt_num(exact),
                    u8::from(optima.contains(&f, 1e-12)),
                ));
            }
        }
    }
    let f = best.1;
    let report = format!(
        "{set}: max F/N^2 on the grid = {:.6} at (f_alpha, f_beta, f_r, f_z) = ({:.4}, {:.4}, {:.4}, {:.4})",
        best.0, f[0], f[1], f[2], f[3]
    );
    Ok((out, report))
}

fn write_output(path: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| config_err("output", format!("{}: {e}", p.display()))),
        None => match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
            // A closed pipe (`mzi sweep ... | head`) is not an error.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|e| config_err("output", e.to_string())),
        },
    }
}

fn paint(text: &str, ok: bool, color: bool) -> String {
    if color {
        let code = if ok { 32 } else { 31 };
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Truncation { .. } => EXIT_TRUNCATION,
        Error::Config { .. } | Error::InvalidArgument(_) | Error::InvalidEfficiency(_) => EXIT_CONFIG,
        _ => EXIT_VERIFY,
    }
}

/// Run the CLI on `args` (program name first) and return the exit code.
/// `color` enables ANSI colors in the report text.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_CONFIG;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, stdout, stderr, color) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> Result<i32> {
    match cmd {
        Command::Qfi { cfg } => {
            let c = load_config(&cfg)?;
            write_output(&cfg.output, &qfi_csv(&c)?, stdout)?;
        }
        Command::Sweep { cfg, axis, from, to, steps } => {
            let c = load_config(&cfg)?;
            let from = parse_angle("from", &Value::String(from))?;
            let to = parse_angle("to", &Value::String(to))?;
            write_output(&cfg.output, &sweep_csv(&c, axis, from, to, steps)?, stdout)?;
        }
        Command::Regimes { cfg, alpha_max, beta_max, steps } => {
            let c = load_config(&cfg)?;
            write_output(&cfg.output, &regimes_csv(&c, alpha_max, beta_max, steps)?, stdout)?;
        }
        Command::Heisenberg { cfg, steps, n_tot } => {
            let c = load_config(&cfg)?;
            let (csv, report) = heisenberg_csv(&c, steps, n_tot)?;
            write_output(&cfg.output, &csv, stdout)?;
            let _ = writeln!(stderr, "{report}");
        }
        Command::Verify { output, seed, cases, phases, alpha_max, beta_max, r_max, z_max, n_max } => {
            let b = VerifyBox { alpha_max, beta_max, r_max, z_max, cases, phases, n_max, seed };
            return verify(&b, &output, stdout, stderr, color);
        }
    }
    Ok(EXIT_OK)
}

fn verify(b: &VerifyBox, output: &Option<PathBuf>, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> Result<i32> {
    if [b.alpha_max, b.beta_max, b.r_max, b.z_max].iter().any(|x| !(*x >= 0.0)) {
        return Err(config_err("box", "bounds must be non-negative"));
    }
    if b.cases == 0 {
        let _ = writeln!(stderr, "warning: empty box, nothing was verified");
        return Ok(EXIT_OK);
    }
    let report = run_suite(b)?;
    let mut csv = format!(
        "# verify: seed = {}, cases = {}, phases = {}, n_max = {}, alpha_max = {}, beta_max = {}, r_max = {}, z_max = {}\n",
        b.seed, b.cases, b.phases, b.n_max, b.alpha_max, b.beta_max, b.r_max, b.z_max
    );
    csv.push_str("case,phi,quantity,closed_form,oracle,rel_error,tolerance,pass\n");
    for c in &report.checks {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            c.case,
            c.phase.map_or_else(String::new, fmt_num),
            c.quantity,
            fmt_num(c.closed),
            fmt_num(c.oracle),
            fmt_num(c.error()),
            fmt_num(c.tol),
            u8::from(c.passed()),
        ));
    }
    write_output(output, &csv, stdout)?;
    for group in ["fisher", "difference", "single", "homodyne"] {
        let checks: Vec<_> = report.checks.iter().filter(|c| c.quantity.split('.').next() == Some(group)
            || (group == "fisher" && c.quantity.starts_with("fisher_closed"))).collect();
        let ok = checks.iter().all(|c| c.passed());
        let worst = checks.iter().map(|c| c.error()).fold(0.0, f64::max);
        let tag = paint(if ok { "PASS" } else { "FAIL" }, ok, color);
        let _ = writeln!(stderr, "{tag} {group}: {} checks, worst relative error {worst:.3e}", checks.len());
    }
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_VERIFY })
}
