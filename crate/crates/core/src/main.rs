use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crownheat::config::{CxSetting, RunConfig, RunModel};
use crownheat::experiments::{calibrate_run, run_suite, Suite, CALIBRATION_STABILITY, SCHEMA};
use crownheat::Error;
use serde_json::json;

const AFTER_HELP: &str = "\
Suites and CSV columns:
  plancherel           index,lhs,rhs,rel_gap                      (h2, h3)
  gutzmer              index,y,direct,spectral,rel_gap            (h2, h3)
  norm-identity        index,lhs,rhs,rel_gap                      (h2, h3)
  image-test           case,index,verdict,value,reference,growth,residual (h2, h3)
  flat-bargmann        check,index,x,y,lhs,rhs,rel_gap            (flat)
  strip-obstruction    y,lhs,rhs,mismatch                         (flat)
  complex-obstruction  band,mu,residual                           (h3)
  crown-boundary       s,sigma,phi                                (h2)
  heat-compare         t,r,spectral,closed,rel_gap                (h3)

Each run writes <out>/<suite>.json (schema v1) and <out>/<suite>.csv.
Exit codes: 0 all tolerances met, 1 tolerance or numerical failure, 2 configuration error.";

#[derive(Parser)]
#[command(name = "crownheat", version, about = "Heat kernel transform experiments on the line, H2 and H3", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fix c_X by Plancherel calibration and check it under grid refinement.
    Calibrate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one verification suite.
    Run {
        suite: String,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the configuration with every default filled in.
    PrintConfig {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Model whose defaults are printed when no config is given.
        #[arg(long, default_value = "h3")]
        model: String,
    },
}

fn load(path: &Path, out: Option<PathBuf>) -> Result<RunConfig, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut config = RunConfig::parse(&text)?;
    if let Some(o) = out {
        config.out = o;
    }
    Ok(config)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), Error> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

fn calibrate(config: &RunConfig) -> Result<bool, Error> {
    let run = calibrate_run(config)?;
    let mut calibrated = config.clone();
    calibrated.cx = CxSetting::Value(run.cx);
    let summary = json!({
        "schema": SCHEMA,
        "suite": "calibrate",
        "anchor": "Plancherel normalization constant c_X",
        "model": config.model.name(),
        "passed": run.stable,
        "config": calibrated,
        "metrics": {
            "cx": run.cx,
            "cx_refined": run.cx_refined,
            "rel_change": run.rel_change,
            "tolerance": CALIBRATION_STABILITY,
        },
    });
    write(&config.out, "calibrate.json", &format!("{:#}\n", summary))?;
    write(&config.out, "calibrate.csv", &format!("grid,cx\nconfigured,{}\nrefined,{}\n", run.cx, run.cx_refined))?;
    write(&config.out, "calibrated.cfg", &calibrated.render())?;
    println!("cx = {} (refined {}, relative change {:e})", run.cx, run.cx_refined, run.rel_change);
    Ok(run.stable)
}

fn run(suite: &str, config: &RunConfig) -> Result<bool, Error> {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, config)?;
    write(&config.out, &format!("{}.json", suite.name()), &format!("{:#}\n", report.summary(config)))?;
    write(&config.out, &format!("{}.csv", suite.name()), &report.csv())?;
    println!("{}: {}", suite.name(), if report.passed { "PASS" } else { "FAIL" });
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Calibrate { config, out } => load(&config, out).and_then(|c| calibrate(&c)),
        Command::Run { suite, config, out } => load(&config, out).and_then(|c| run(&suite, &c)),
        Command::PrintConfig { config, model } => {
            let resolved = match config {
                Some(path) => load(&path, None),
                None => match model.as_str() {
                    "flat" => Ok(RunConfig::defaults(RunModel::Flat)),
                    "h2" => Ok(RunConfig::defaults(RunModel::H2)),
                    "h3" => Ok(RunConfig::defaults(RunModel::H3)),
                    other => Err(Error::Config(format!("unknown model `{other}`"))),
                },
            };
            resolved.map(|c| {
                print!("{}", c.render());
                true
            })
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
