use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use revival_cli::config::{LoadedConfig, Overrides, TuneConfig};
use revival_cli::scenario::{run_tune, to_json, write_json, write_series, Scenario};
use revival_cli::{run_scenario, CliError, Result};
use revival_core::fmt::sig15;
use revival_core::revival::oracle::PointCheck;
use revival_core::ScaleKind;

#[derive(Parser, Debug)]
#[command(
    name = "revivals",
    version,
    about = "Fractional revivals of two-quantum-number wave packets"
)]
struct Cli {
    /// Scenario config (JSON).
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in scenario: figure1, figure2 or stark. Default figure1.
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Evolution mode: exact or second-order.
    #[arg(long, global = true, value_name = "MODE")]
    mode: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    qmax: Option<i64>,
    #[arg(long, global = true, value_name = "N")]
    samples: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print derivatives, time scales and commensurability.
    Timescales,
    /// Sample A(t) and write series.csv.
    Autocorr,
    /// Analyze fractional revivals and write revivals.json.
    Revivals,
    /// Write series.csv, revivals.json and features.json.
    Run,
    /// Check every enumerated revival point against the oracles.
    Verify,
    /// Find parameter values meeting a time-scale target.
    Tune(TuneArgs),
}

#[derive(Args, Debug)]
struct TuneArgs {
    /// box2d-l1, box2d-l2 or stark-field.
    #[arg(long)]
    family: Option<String>,
    /// Family parameters as JSON, e.g. '{"l2": 1.0}'.
    #[arg(long, value_name = "JSON")]
    params: Option<String>,
    /// Parameter range `lo:hi`.
    #[arg(long, value_name = "LO:HI")]
    range: Option<String>,
    /// `trev1/trev2=3/4` or `trev12=1e5`.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
}

macro_rules! outln {
    ($o:expr, $($arg:tt)*) => {
        {
            let _ = writeln!($o, $($arg)*);
        }
    };
}

fn load(cli: &Cli) -> Result<LoadedConfig> {
    let overrides = Overrides {
        mode: cli.mode.clone(),
        qmax: cli.qmax,
        samples: cli.samples,
    };
    match &cli.config {
        Some(path) => LoadedConfig::from_path(&path.to_string_lossy(), &overrides),
        None => LoadedConfig::from_preset(cli.preset.as_deref().unwrap_or("figure1"), &overrides),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "absent".to_string(), sig15)
}

fn timescales(o: &mut String, scenario: &Scenario) -> Result<()> {
    let r = scenario.timescale_report();
    outln!(o, "scenario {}", r.scenario);
    outln!(o, "model {} {}", r.model, r.parameters);
    let d = r.derivatives;
    outln!(
        o,
        "derivatives{} E={} d1={} d2={} d11={} d22={} d12={}",
        if d.analytic {
            " (analytic)"
        } else {
            " (finite difference)"
        },
        sig15(d.e0),
        sig15(d.d1),
        sig15(d.d2),
        sig15(d.d11),
        sig15(d.d22),
        sig15(d.d12)
    );
    for kind in ScaleKind::ALL {
        outln!(o, "{} = {}", kind.as_str(), opt(r.time_scales.get(kind)));
    }
    let frac =
        |f: Option<revival_core::ReducedFraction>| f.map_or("none".into(), |f| f.to_string());
    outln!(o, "trev1/trev2 = {}", frac(r.trev1_over_trev2));
    outln!(o, "trev1/trev12 = {}", frac(r.trev1_over_trev12));
    match (r.commensurability, r.ratio_residual) {
        (Some(c), Some(res)) => outln!(o, "commensurability {c:?} (ratio residual {})", sig15(res)),
        _ => outln!(o, "commensurability none at this resolution"),
    }
    match r.classical_beat {
        Some(b) => outln!(
            o,
            "classical beat {}:{} period {}",
            b.a,
            b.b,
            sig15(b.period)
        ),
        None => outln!(o, "classical beat none"),
    }
    for w in &r.warnings {
        outln!(o, "warning: {w}");
    }
    Ok(())
}

fn revivals(o: &mut String, scenario: &Scenario, out: &std::path::Path) -> Result<()> {
    let report = scenario.revival_report();
    outln!(
        o,
        "{:>18} {:>8} {:>8} {:>8} {:>4} {:>4} {:>6} {:>9} {:>18}",
        "t",
        "p1/q1",
        "p2/q2",
        "p12/q12",
        "l1",
        "l2",
        "waves",
        "separable",
        "abs2"
    );
    for p in &report.points {
        outln!(
            o,
            "{:>18} {:>8} {:>8} {:>8} {:>4} {:>4} {:>6} {:>9} {:>18}",
            sig15(p.t),
            p.fractions.p1q1.to_string(),
            p.fractions.p2q2.to_string(),
            p.fractions.p12q12.map_or("-".into(), |f| f.to_string()),
            p.l1,
            p.l2,
            p.n_waves,
            p.separable,
            sig15(p.abs2)
        );
    }
    let path = write_json(&report, out, "revivals.json")?;
    outln!(o, "wrote {}", path.display());
    Ok(())
}

fn verify(o: &mut String, scenario: &Scenario) -> Result<()> {
    let report = scenario.verify();
    let tol = PointCheck::TOLERANCE;
    if report.passed() {
        outln!(
            o,
            "max residual {} <= {:e}, all {} points pass",
            sig15(report.max_residual),
            tol,
            report.points
        );
        Ok(())
    } else {
        let (t, check) = &report.failures[0];
        Err(CliError::Verify(format!(
            "{} of {} points fail; first at t={}: {}",
            report.failures.len(),
            report.points,
            sig15(*t),
            to_json(check)?.split_whitespace().collect::<String>()
        )))
    }
}

fn tune(o: &mut String, loaded: &LoadedConfig, args: &TuneArgs) -> Result<()> {
    let c = &loaded.config;
    let base = c.tune.clone();
    let family = args
        .family
        .clone()
        .or_else(|| base.as_ref().map(|t| t.family.clone()));
    let Some(family) = family else {
        return Err(CliError::Config(
            "tune needs --family or a `tune` config section".into(),
        ));
    };
    let same_family = base.as_ref().is_some_and(|t| t.family == family);
    let from_base = |f: fn(&TuneConfig) -> String| base.as_ref().filter(|_| same_family).map(f);
    let params = match &args.params {
        Some(s) => serde_json::from_str(s)
            .map_err(|e| CliError::Config(format!("--params is not valid JSON: {e}")))?,
        None => base
            .as_ref()
            .filter(|_| same_family)
            .map_or(serde_json::json!({}), |t| t.params.clone()),
    };
    let range = match &args.range {
        Some(s) => parse_range(s)?,
        None => base
            .as_ref()
            .filter(|_| same_family)
            .map(|t| t.range)
            .ok_or_else(|| CliError::Config("tune needs --range lo:hi".into()))?,
    };
    let target = args
        .target
        .clone()
        .or_else(|| from_base(|t| t.target.clone()))
        .ok_or_else(|| CliError::Config("tune needs --target".into()))?;
    let grid = args.grid.or(base.as_ref().map(|t| t.grid)).unwrap_or(200);
    let config = TuneConfig {
        family,
        params,
        range,
        target,
        grid,
    };
    let hits = run_tune(&c.lattice, &config, c.analysis.tol, c.analysis.max_den)?;
    if hits.is_empty() {
        outln!(
            o,
            "no parameter in [{}, {}] meets {}",
            sig15(range[0]),
            sig15(range[1]),
            config.target
        );
    }
    for h in hits {
        let triple = h.triple.map_or("none".to_string(), |t| {
            [t.f1, t.f2, t.f12]
                .iter()
                .map(|f| f.map_or("-".into(), |f| f.to_string()))
                .collect::<Vec<_>>()
                .join(" : ")
        });
        outln!(
            o,
            "{} = {} residual {} trev1 : trev2 : trev12 = {}",
            config.family,
            sig15(h.param),
            sig15(h.residual),
            triple
        );
    }
    Ok(())
}

fn parse_range(s: &str) -> Result<[f64; 2]> {
    let bad = || CliError::Config(format!("--range `{s}` must look like lo:hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok([
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ])
}

fn execute(o: &mut String, cli: &Cli) -> Result<()> {
    let loaded = load(cli)?;
    if let Command::Tune(args) = &cli.command {
        return tune(o, &loaded, args);
    }
    let scenario = Scenario::new(loaded.config)?;
    let out = scenario.out_dir(cli.out.as_deref());
    match &cli.command {
        Command::Timescales => timescales(o, &scenario),
        Command::Autocorr => {
            let path = write_series(&scenario.series()?, &out)?;
            outln!(o, "wrote {}", path.display());
            Ok(())
        }
        Command::Revivals => revivals(o, &scenario, &out),
        Command::Run => {
            let files = run_scenario(scenario.config.clone(), &out)?;
            for p in [files.series, files.revivals, files.features] {
                outln!(o, "wrote {}", p.display());
            }
            Ok(())
        }
        Command::Verify => verify(o, &scenario),
        Command::Tune(_) => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line = msg
                .lines()
                .next()
                .unwrap_or("invalid usage")
                .trim_start_matches("error: ");
            eprintln!("error[usage]: {line}");
            return ExitCode::from(2);
        }
    };
    let mut o = String::new();
    let result = execute(&mut o, &cli);
    // a closed pipe downstream is not a failure of the run
    let _ = std::io::stdout().write_all(o.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
