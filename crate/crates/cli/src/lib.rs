//! `xlt` command-line interface.
//!
//! Machine-readable results go to stdout (or `--out`), diagnostics to stderr.
//! Exit codes: 0 success, 1 infeasible or unsolvable input, 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use xlt_core::feasibility::{check, check_presentation_standard, connected_pairs, CheckOptions, PresentationMode};
use xlt_core::flow::{
    access_penalty_ftr, assign, capacity_reduction, capacity_report, headway_correction, simulate_loads, ChoiceRule,
};
use xlt_core::metering::{solve_outer, MeteringError, MeteringProblem, Objective, DEFAULT_CAP};
use xlt_core::model::{derive_parts, fr_h, fr_i, ftr, ProtocolSpec};
use xlt_core::rational::{display_q, parse_q};
use xlt_core::render::io::{self, load_chart, load_line, load_rates, load_spec, matrix_csv, profile_csv, to_json};
use xlt_core::render::{check_gate_consistency, derive_gate_signs, render_chart, Overlay};
use xlt_core::routing::{build_graph, build_graph_from_spec, ConnectivityGraph};
use xlt_core::sfamily::{
    build_ftr3, build_s52_2, compose_skip_stop, default_labels, generate_s_labeled, max_connected_classes,
    max_length_with_transfers, train_length_ratio, worst_case_transfers, MultiTrainChart,
};
use xlt_core::Q;

#[derive(Parser, Debug)]
#[command(name = "xlt", version, about = "Operating protocols for extra-long trains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a protocol spec against the feasibility constraints.
    Validate(ValidateArgs),
    /// Build a canonical spec or chart.
    #[command(subcommand)]
    Generate(Generate),
    /// Connectivity, parts, closed-form quantities and access costs.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Section loads and capacity report for a line.
    Simulate(SimulateArgs),
    /// Optimization problems.
    #[command(subcommand)]
    Optimize(Optimize),
    /// Charts and gate signs.
    #[command(subcommand)]
    Render(Render),
}

#[derive(Args, Debug)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    spec: PathBuf,
    /// Also require a presentation standard over every connected type pair.
    #[arg(long)]
    presentation: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum Generate {
    /// Step-family chart S(C, D) on `d`-unit platforms.
    S {
        #[arg(long = "classes", short = 'c')]
        c: u32,
        /// Steps per platform, e.g. 2 or 5/2.
        #[arg(long = "steps", short = 'D')]
        steps: String,
        #[arg(long = "platform", short = 'd')]
        d: u32,
        /// Comma-separated bar labels, bottom to top.
        #[arg(long)]
        labels: Option<String>,
        /// Emit the full protocol spec instead of the chart.
        #[arg(long)]
        protocol: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Three-train F/T/R multi-chart.
    Ftr3 {
        #[command(flatten)]
        output: Output,
    },
    /// Two-train S(5,2) multi-chart.
    S52x2 {
        #[command(flatten)]
        output: Output,
    },
    /// Skip-stop plan from a base chart and one label subset per train.
    Skipstop {
        #[arg(long)]
        base: PathBuf,
        /// Subsets separated by `;`, labels by `,`, bottom to top.
        #[arg(long)]
        subsets: String,
        /// Station types along the line, comma-separated.
        #[arg(long)]
        stations: String,
        #[command(flatten)]
        output: Output,
    },
    /// Static-homogeneous F/R spec.
    Frh {
        #[command(flatten)]
        output: Output,
    },
    /// Dynamic-inhomogeneous F/R spec with section sizes front to rear.
    Fri {
        #[arg(long, value_delimiter = ',', default_value = "3,3,3,3")]
        sizes: Vec<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Static F/T/R spec.
    Ftr {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
enum Analyze {
    /// Minimum-transfer matrix of a chart or spec file.
    Connectivity {
        file: PathBuf,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Fewest-transfer plans between two station types.
    Route {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[command(flatten)]
        output: Output,
    },
    /// Train parts of a spec.
    Parts {
        spec: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Closed-form S(C, D) quantities.
    Formulas {
        #[arg(long = "classes", short = 'c')]
        c: u32,
        #[arg(long = "steps", short = 'D')]
        steps: String,
        #[command(flatten)]
        output: Output,
    },
    /// Extra walking on a cyclic F/T/R station pattern.
    Access {
        /// Comma-separated station types, e.g. F,R,T.
        #[arg(long, default_value = "F,R,T")]
        pattern: String,
        #[command(flatten)]
        output: Output,
    },
    /// Extra headway of longer trains.
    Headway {
        /// Extra train length, metres.
        #[arg(long)]
        extra: f64,
        /// Cruise speed, m/s.
        #[arg(long)]
        speed: f64,
        /// Base headway, seconds.
        #[arg(long)]
        base: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    BalancedFill,
    EndPreference,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    line: PathBuf,
    /// Station types along the line, comma separated; overrides the spec's classification.
    #[arg(long, value_delimiter = ',')]
    classify: Option<Vec<String>>,
    /// Entry rates; defaults to the full demand at every station.
    #[arg(long)]
    entries: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "balanced-fill")]
    rule: RuleArg,
    /// Reference ordinary train length in units.
    #[arg(long)]
    reference: Option<u32>,
    /// Write the load profile as CSV (links by sections).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    Entries,
    PassengerKm,
}

#[derive(Subcommand, Debug)]
enum Optimize {
    /// Entry-rate metering with optional station classification and sizing.
    Metering {
        #[arg(long)]
        line: PathBuf,
        /// Protocol spec of the train.
        #[arg(long)]
        train: PathBuf,
        /// JSON list of station type labels; otherwise classification is searched.
        #[arg(long)]
        fix_delta: Option<PathBuf>,
        /// JSON list of section sizes; otherwise sizing is searched.
        #[arg(long)]
        fix_u: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        #[arg(long, value_enum, default_value = "entries")]
        objective: ObjectiveArg,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChartFormat {
    Text,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GateFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Render {
    Chart {
        chart: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: ChartFormat,
        /// Overlay the first fewest-transfer route, as ORIGIN:DESTINATION.
        #[arg(long)]
        route: Option<String>,
        /// Mark station types where passengers change train type.
        #[arg(long)]
        connectors: bool,
        #[command(flatten)]
        output: Output,
    },
    Gates {
        spec: PathBuf,
        #[arg(long)]
        line: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: GateFormat,
        #[command(flatten)]
        output: Output,
    },
}

/// Input the user got wrong: bad files, labels or parameters.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(Usage(msg.into()).into())
}

/// Outcome of a command: what to print and whether the input was feasible.
struct Done {
    body: String,
    ok: bool,
}

impl Done {
    fn ok(body: String) -> Self {
        Self { body, ok: true }
    }
}

fn load<T>(r: Result<T, io::IoError>) -> anyhow::Result<T> {
    r.map_err(|e| Usage(e.to_string()).into())
}

fn parse_steps(text: &str) -> anyhow::Result<Q> {
    match parse_q(text) {
        Ok(q) => Ok(q),
        Err(e) => usage(format!("bad step count `{text}`: {e}")),
    }
}

fn split_labels(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

/// A chart file, or a spec file whose graph is built from its sections.
fn load_graph(path: &Path) -> anyhow::Result<ConnectivityGraph> {
    let text = load(io::read_text(path))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Usage(e.to_string()))?;
    if value.get("stations").is_some() {
        Ok(build_graph_from_spec(&load(io::parse_spec(&text))?))
    } else {
        Ok(build_graph(&load(io::parse_chart(&text))?))
    }
}

fn validate(args: &ValidateArgs) -> anyhow::Result<Done> {
    let spec = load(load_spec_unchecked(&args.spec))?;
    let mut report = check(&spec, &CheckOptions::default());
    if let Some(mode) = &args.presentation {
        let mode: PresentationMode = match mode.parse() {
            Ok(m) => m,
            Err(e) => return usage(e),
        };
        report = report.merge(check_presentation_standard(&spec, mode, &connected_pairs(&spec)));
    }
    Ok(Done { ok: report.feasible, body: to_json(&report)? })
}

/// Structural errors are reported as violations, so skip `validate` on load.
fn load_spec_unchecked(path: &Path) -> Result<ProtocolSpec, io::IoError> {
    let text = io::read_text(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    match value.get("schema_version").and_then(serde_json::Value::as_u64) {
        Some(v) if v == u64::from(xlt_core::SCHEMA_VERSION) => {}
        Some(v) => return Err(io::IoError::SchemaVersion { found: v, expected: xlt_core::SCHEMA_VERSION }),
        None => return Err(io::IoError::MissingVersion),
    }
    Ok(serde_json::from_value(value)?)
}

fn generate(cmd: &Generate) -> anyhow::Result<(Done, Option<&Output>)> {
    let (body, out) = match cmd {
        Generate::S { c, steps, d, labels, protocol, output } => {
            let steps = parse_steps(steps)?;
            let labels = labels.as_deref().map(split_labels).unwrap_or_else(|| default_labels(*c));
            let chart = match generate_s_labeled(*c, &steps, *d, &labels) {
                Ok(chart) => chart,
                Err(e) => return usage(e.to_string()),
            };
            let multi = MultiTrainChart::single(chart);
            let body = if *protocol {
                to_json(&xlt_core::sfamily::chart_to_protocol(&multi, None)?)?
            } else {
                to_json(&multi)?
            };
            (body, output)
        }
        Generate::Ftr3 { output } => (to_json(&build_ftr3())?, output),
        Generate::S52x2 { output } => (to_json(&build_s52_2())?, output),
        Generate::Skipstop { base, subsets, stations, output } => {
            let base = load(load_chart(base))?;
            let [train] = base.trains.as_slice() else {
                return usage("the base chart must have exactly one train");
            };
            let subsets: Vec<Vec<String>> = subsets.split(';').map(split_labels).collect();
            let plan = match compose_skip_stop(&train.chart, &subsets, &split_labels(stations)) {
                Ok(p) => p,
                Err(e) => return usage(e.to_string()),
            };
            (to_json(&plan)?, output)
        }
        Generate::Frh { output } => (to_json(&fr_h())?, output),
        Generate::Fri { sizes, output } => match fr_i(sizes) {
            Ok(spec) => (to_json(&spec)?, output),
            Err(e) => return usage(e.to_string()),
        },
        Generate::Ftr { output } => (to_json(&ftr())?, output),
    };
    Ok((Done::ok(body), Some(out)))
}

fn analyze(cmd: &Analyze) -> anyhow::Result<(Done, &Output)> {
    match cmd {
        Analyze::Connectivity { file, csv, output } => {
            let g = load_graph(file)?;
            let matrix = g.transfer_matrix();
            let worst = g.worst_pair().ok();
            let body = if *csv {
                matrix_csv(&g.types, &matrix)
            } else {
                let (pair, t) =
                    worst.map_or((None, None), |((o, d), t)| (Some([g.types[o].clone(), g.types[d].clone()]), Some(t)));
                to_json(&json!({
                    "types": g.types,
                    "transfers": matrix,
                    "worst_pair": pair,
                    "worst_transfers": t,
                    "connectors": g.connectors.keys().map(|&i| g.types[i].clone()).collect::<Vec<_>>(),
                }))?
            };
            Ok((Done { ok: worst.is_some(), body }, output))
        }
        Analyze::Route { file, from, to, output } => {
            let g = load_graph(file)?;
            let (Ok(o), Ok(d)) = (g.type_index(from), g.type_index(to)) else {
                return usage(format!("unknown station type {from} or {to}"));
            };
            match g.route_plans(o, d) {
                Ok(plans) => Ok((Done::ok(to_json(&plans)?), output)),
                Err(e) => Ok((Done { ok: false, body: to_json(&json!({ "error": e.to_string() }))? }, output)),
            }
        }
        Analyze::Parts { spec, output } => {
            let spec = load(load_spec(spec))?;
            let parts: Vec<_> = (0..spec.trains.len()).map(|k| derive_parts(&spec, k)).collect();
            Ok((Done::ok(to_json(&parts)?), output))
        }
        Analyze::Formulas { c, steps, output } => {
            let d = parse_steps(steps)?;
            let ratio = train_length_ratio(*c, &d).map_err(|e| Usage(e.to_string()))?;
            let worst = worst_case_transfers(*c, &d).ok();
            let reach: Vec<_> = (0..4).map(|t| max_connected_classes(t, &d).ok()).collect();
            let longest: Vec<_> =
                (0..4).map(|t| max_length_with_transfers(t, &d).ok().map(|x| display_q(&x))).collect();
            let body = to_json(&json!({
                "C": c,
                "D": display_q(&d),
                "train_length_ratio": display_q(&ratio),
                "worst_case_transfers": worst,
                "max_connected_classes_by_transfers": reach,
                "max_length_ratio_by_transfers": longest,
            }))?;
            Ok((Done::ok(body), output))
        }
        Analyze::Access { pattern, output } => {
            let r = access_penalty_ftr(&split_labels(pattern)).map_err(|e| Usage(e.to_string()))?;
            Ok((Done::ok(to_json(&r)?), output))
        }
        Analyze::Headway { extra, speed, base, output } => {
            let h = headway_correction(*extra, *speed).map_err(|e| Usage(e.to_string()))?;
            let body = to_json(&json!({
                "extra_headway_s": h,
                "capacity_reduction": base.map(|b| capacity_reduction(b, h)),
            }))?;
            Ok((Done::ok(body), output))
        }
    }
}

fn simulate(args: &SimulateArgs) -> anyhow::Result<Done> {
    let mut spec = load(load_spec(&args.spec))?;
    let line = load(load_line(&args.line))?;
    if let Some(labels) = &args.classify {
        spec = spec.classify(labels).map_err(|e| Usage(e.to_string()))?;
    }
    if spec.delta.type_indices().map(|t| t.len()) != Some(line.num_stations()) {
        return usage("the spec's station classification does not cover the line");
    }
    let entries = match &args.entries {
        Some(p) => load(load_rates(p))?,
        None => (0..line.num_stations()).map(|s| line.total_demand(s)).collect(),
    };
    let rule = match args.rule {
        RuleArg::BalancedFill => ChoiceRule::BalancedFill,
        RuleArg::EndPreference => ChoiceRule::EndPreference,
    };
    let asg = assign(&spec, &line, &entries, rule)?;
    let caps: Vec<Q> = (0..spec.num_sections(0)).map(|n| spec.section_capacity(0, n)).collect();
    let profile = simulate_loads(&asg, &entries, &line, &caps)?;
    let report = capacity_report(&profile, &spec, &line, args.reference)?;
    if let Some(path) = &args.csv {
        std::fs::write(path, profile_csv(&profile)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Done::ok(to_json(&json!({ "report": report, "profile": profile }))?))
}

fn optimize(cmd: &Optimize) -> anyhow::Result<(Done, &Output)> {
    let Optimize::Metering { line, train, fix_delta, fix_u, cap, objective, output } = cmd;
    let line = load(load_line(line))?;
    let mut spec = load(load_spec(train))?;
    let read_list = |p: &PathBuf| -> anyhow::Result<serde_json::Value> {
        let text = load(io::read_text(p))?;
        serde_json::from_str(&text).map_err(|e| Usage(e.to_string()).into())
    };
    if let Some(p) = fix_delta {
        let labels: Vec<String> = serde_json::from_value(read_list(p)?).map_err(|e| Usage(e.to_string()))?;
        spec = spec.classify(&labels).map_err(|e| Usage(e.to_string()))?;
    } else if spec.delta.type_indices().map(|t| t.len()) != Some(line.num_stations()) {
        // the search replaces the classification; start from any valid one
        let first = spec.stations.labels[0].clone();
        spec = spec.classify(&vec![first; line.num_stations()])?;
    }
    if let Some(p) = fix_u {
        let sizes: Vec<u32> = serde_json::from_value(read_list(p)?).map_err(|e| Usage(e.to_string()))?;
        spec.resize_sections(0, &sizes).map_err(|e| Usage(e.to_string()))?;
    }
    let problem = MeteringProblem::new(line, spec)
        .classify_stations(fix_delta.is_none())
        .size_sections(fix_u.is_none())
        .cap(*cap)
        .objective(match objective {
            ObjectiveArg::Entries => Objective::Entries,
            ObjectiveArg::PassengerKm => Objective::PassengerKm,
        });
    match solve_outer(&problem) {
        Ok(sol) => Ok((Done::ok(to_json(&sol)?), output)),
        Err(MeteringError::InvalidProblem(m)) => usage(m),
        Err(e) => Ok((Done { ok: false, body: to_json(&json!({ "error": e.to_string() }))? }, output)),
    }
}

fn render(cmd: &Render) -> anyhow::Result<(Done, &Output)> {
    match cmd {
        Render::Chart { chart, format, route, connectors, output } => {
            let multi = load(load_chart(chart))?;
            let mut overlays = Vec::new();
            if let Some(r) = route {
                let Some((o, d)) = r.split_once(':') else {
                    return usage("--route expects ORIGIN:DESTINATION");
                };
                let g = build_graph(&multi);
                let (Ok(o), Ok(d)) = (g.type_index(o), g.type_index(d)) else {
                    return usage(format!("unknown station type in {r}"));
                };
                match g.route_plans(o, d) {
                    Ok(plans) => overlays.push(Overlay::Route(plans[0].clone())),
                    Err(e) => return Ok((Done { ok: false, body: format!("{e}\n") }, output)),
                }
            }
            if *connectors {
                overlays.push(Overlay::Connectors);
            }
            let r = render_chart(&multi, &overlays);
            let body = match format {
                ChartFormat::Text => r.text,
                ChartFormat::Svg => r.svg,
            };
            Ok((Done::ok(body), output))
        }
        Render::Gates { spec, line, format, output } => {
            let spec = load(load_spec(spec))?;
            let line = match line {
                Some(p) => Some(load(load_line(p))?),
                None => None,
            };
            let table = derive_gate_signs(&spec, line.as_ref());
            let violations = check_gate_consistency(&spec, &table);
            let body = match format {
                GateFormat::Text => table.to_text(),
                GateFormat::Json => to_json(&table)?,
            };
            Ok((Done { ok: violations.is_empty(), body }, output))
        }
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<(Done, Option<&Output>)> {
    match &cli.command {
        Command::Validate(a) => Ok((validate(a)?, Some(&a.output))),
        Command::Generate(g) => generate(g),
        Command::Analyze(a) => analyze(a).map(|(d, o)| (d, Some(o))),
        Command::Simulate(a) => Ok((simulate(a)?, Some(&a.output))),
        Command::Optimize(o) => optimize(o).map(|(d, o)| (d, Some(o))),
        Command::Render(r) => render(r).map(|(d, o)| (d, Some(o))),
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((done, output)) => {
            let written = match output.and_then(|o| o.out.as_ref()) {
                Some(path) => std::fs::write(path, &done.body).map_err(|e| anyhow!("{}: {e}", path.display())),
                None => stdout.write_all(done.body.as_bytes()).map_err(Into::into),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            if done.ok {
                0
            } else {
                let _ = writeln!(stderr, "infeasible");
                1
            }
        }
        Err(e) if e.downcast_ref::<Usage>().is_some() => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            1
        }
    }
}
