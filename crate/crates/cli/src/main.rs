//! `macroent`: command-line front end to `macroent-core`.
//!
//! Exit codes: 0 success, 1 a claimed bound is violated, 2 configuration
//! error, 3 numerical failure. Nothing is written to `--out` unless the exit
//! code is 0.

mod args;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use macroent_core::bosegas::{condensate_fraction_probe, homes_scaling_exponent, transition_temperatures, BoxGasSpec};
use macroent_core::bosegas::{FractionProbe, TransitionReport};
use macroent_core::models::{Boundary, ChainSpec, Model};
use macroent_core::oracle::{max_abs_over_products, OracleReport, ProductObjective};
use macroent_core::order::{
    classify_decay, correlation_series, CorrelationSeries, CorrelatorKind, DecayClassification,
};
use macroent_core::units::{kelvin_from_mev, mev_from_kelvin};
use macroent_core::witness::{sweep, witness_point, PhaseCell, PhaseDiagram};
use macroent_core::Error;
use serde::Serialize;

use args::{
    parse_axis, BoseArgs, BoundaryKind, CertifyArgs, ChainArgs, Cli, Command, CorrArgs, Format, ModelKind, OpKind,
    OutputArgs, SweepArgs, Units, WitnessArgs,
};

const CSV_HEADER: [&str; 9] =
    ["T", "B", "U", "M", "chi", "energy_margin", "chi_margin", "energy_verdict", "chi_verdict"];

/// Slack allowed above a claimed bound before it counts as violated.
const VIOLATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug)]
enum Failure {
    Violation(String),
    Config(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Violation(m) | Failure::Config(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::InvalidModel(_)
            | Error::InvalidTemperature(_)
            | Error::InvalidSites(_)
            | Error::SiteOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::TooFewPoints { .. } => Failure::Config(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output) = match &cli.command {
        Command::Sweep(a) => (cmd_sweep(a), &a.output),
        Command::Witness(a) => (cmd_witness(a), &a.output),
        Command::Bose(a) => (cmd_bose(a), &a.output),
        Command::Corr(a) => (cmd_corr(a), &a.output),
        Command::Certify(a) => (cmd_certify(a), &a.output),
    };
    match result.and_then(|text| emit(output, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("macroent: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn emit(output: &OutputArgs, text: &str) -> Outcome<()> {
    match &output.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Config(format!("cannot write to standard output: {e}"))),
    }
}

fn chain_spec(chain: &ChainArgs, field: f64) -> Outcome<ChainSpec> {
    let model = match chain.model {
        ModelKind::Xxx => Model::Xxx { j: chain.j },
        ModelKind::Xx => Model::Xx { j: chain.j },
        ModelKind::Alternating => match (chain.j1, chain.j2) {
            (Some(j1), Some(j2)) => Model::Alternating { j1, j2 },
            _ => return Err(Failure::Config("the alternating model needs --j1 and --j2".into())),
        },
    };
    let boundary = match chain.boundary {
        BoundaryKind::Open => Boundary::Open,
        BoundaryKind::Periodic => Boundary::Periodic,
    };
    Ok(ChainSpec::new(chain.sites, model, field, boundary)?)
}

/// Temperature in internal units from a command-line value.
fn temperature_in(units: Units, t: f64) -> f64 {
    match units {
        Units::Natural => t,
        Units::Physical => mev_from_kelvin(t),
    }
}

/// Temperature in reporting units from an internal value.
fn temperature_out(units: Units, t: f64) -> f64 {
    match units {
        Units::Natural => t,
        Units::Physical => kelvin_from_mev(t),
    }
}

fn json<T: Serialize>(value: &T) -> Outcome<String> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Numeric(format!("JSON encoding failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Outcome<String> {
    let encode = |e: csv::Error| Failure::Numeric(format!("CSV encoding failed: {e}"));
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).map_err(encode)?;
    for row in rows {
        writer.write_record(&row).map_err(encode)?;
    }
    let bytes = writer.into_inner().map_err(|e| Failure::Numeric(format!("CSV encoding failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Failure::Numeric(e.to_string()))
}

/// Shortest representation that parses back to the same value.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn cell_row(cell: &PhaseCell) -> Vec<String> {
    let t = &cell.thermo;
    vec![
        num(t.temperature),
        num(t.field_b),
        num(t.u),
        num(t.m),
        num(t.chi),
        num(cell.energy.margin),
        num(cell.susceptibility.margin),
        cell.energy.verdict.as_str().to_string(),
        cell.susceptibility.verdict.as_str().to_string(),
    ]
}

fn cell_for_output(units: Units, mut cell: PhaseCell) -> PhaseCell {
    cell.thermo.temperature = temperature_out(units, cell.thermo.temperature);
    cell
}

fn cmd_sweep(a: &SweepArgs) -> Outcome<String> {
    let spec = chain_spec(&a.chain, 0.0)?;
    let t_axis: Vec<f64> = parse_axis(&a.t_axis)
        .map_err(Failure::Config)?
        .into_iter()
        .map(|t| temperature_in(a.output.units, t))
        .collect();
    let b_axis = parse_axis(&a.b_axis).map_err(Failure::Config)?;
    if let Some(t) = t_axis.iter().find(|t| **t <= 0.0) {
        return Err(Failure::Config(format!("temperatures must be positive, got {t}")));
    }
    let units = a.output.units;
    let diagram = sweep(&spec, &t_axis, &b_axis)?;
    let diagram = PhaseDiagram {
        t_axis: diagram.t_axis.iter().map(|&t| temperature_out(units, t)).collect(),
        cells: diagram.cells.into_iter().map(|c| cell_for_output(units, c)).collect(),
        ..diagram
    };
    match a.format {
        // cells are stored B-major, which is the row order
        Format::Csv => csv_text(&CSV_HEADER, diagram.cells.iter().map(cell_row)),
        Format::Json => json(&diagram),
    }
}

#[derive(Serialize)]
struct WitnessReport {
    spec: ChainSpec,
    #[serde(flatten)]
    cell: PhaseCell,
}

fn cmd_witness(a: &WitnessArgs) -> Outcome<String> {
    let spec = chain_spec(&a.chain, a.field)?;
    let t = temperature_in(a.output.units, a.temp);
    let cell = cell_for_output(a.output.units, witness_point(&spec, t)?);
    match a.format {
        Format::Csv => csv_text(&CSV_HEADER, [cell_row(&cell)]),
        Format::Json => json(&WitnessReport { spec, cell }),
    }
}

#[derive(Serialize)]
struct BoseReport {
    spec: BoxGasSpec,
    #[serde(flatten)]
    transition: TransitionReport,
    /// `t_crit ~ density^density_exponent`
    density_exponent: f64,
    probes: Vec<FractionProbe>,
}

fn cmd_bose(a: &BoseArgs) -> Outcome<String> {
    let spec = BoxGasSpec::new(a.mass, a.volume, a.dim, a.particles, a.regions)?;
    let raw = transition_temperatures(&spec)?;
    let units = a.output.units;
    let transition = TransitionReport {
        t_trans: temperature_out(units, raw.t_trans),
        t_crit: temperature_out(units, raw.t_crit),
        t_bec: temperature_out(units, raw.t_bec),
        ratio_crit_over_bec: raw.ratio_crit_over_bec,
    };
    let probes = (1..=3).map(|d| condensate_fraction_probe(d, a.epsilon, 10.0, 11)).collect::<Result<Vec<_>, _>>()?;
    json(&BoseReport { spec, transition, density_exponent: homes_scaling_exponent(a.dim)?, probes })
}

#[derive(Serialize)]
struct CorrReport {
    spec: ChainSpec,
    temperature: f64,
    kind: CorrelatorKind,
    series: CorrelationSeries,
    classification: DecayClassification,
}

fn cmd_corr(a: &CorrArgs) -> Outcome<String> {
    let spec = chain_spec(&a.chain, a.field)?;
    let t = temperature_in(a.output.units, a.temp);
    let kind = match a.op {
        OpKind::Zz => CorrelatorKind::Zz,
        OpKind::FullDot => CorrelatorKind::FullDot,
    };
    let series = correlation_series(&spec, t, kind, a.connected)?;
    let classification = classify_decay(&series)?;
    let report = CorrReport { spec, temperature: temperature_out(a.output.units, t), kind, series, classification };
    match a.format {
        Format::Json => json(&report),
        Format::Csv => {
            // the series goes to the output, the fit to the diagnostic stream
            eprintln!(
                "{}",
                serde_json::to_string(&report.classification).map_err(|e| Failure::Numeric(e.to_string()))?
            );
            let rows =
                report.series.separations.iter().zip(&report.series.values).map(|(r, c)| vec![r.to_string(), num(*c)]);
            csv_text(&["r", "C"], rows)
        }
    }
}

#[derive(Serialize)]
struct CertifyReport {
    spec: ChainSpec,
    #[serde(flatten)]
    report: OracleReport,
}

fn cmd_certify(a: &CertifyArgs) -> Outcome<String> {
    let spec = chain_spec(&a.chain, 0.0)?;
    let bound = a.bound.unwrap_or(spec.num_sites as f64 * spec.witness_coupling());
    if !bound.is_finite() {
        return Err(Failure::Config(format!("bound must be finite, got {bound}")));
    }
    let objective = ProductObjective::from_chain(&spec)?;
    let report = max_abs_over_products(&objective, bound, a.restarts, a.seed)?;
    let violated = report.best_value > bound + VIOLATION_TOLERANCE;
    let text = json(&CertifyReport { spec, report })?;
    if violated {
        return Err(Failure::Violation(format!("product state exceeds the claimed bound {bound}\n{text}")));
    }
    Ok(text)
}
