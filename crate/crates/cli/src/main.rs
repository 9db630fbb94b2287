use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use mer_core::experiments::{
    even_workshop_layout, rul_sensitivity, two_workshop_layout, utility_sensitivity,
    workshop_scenario, RulSweep, UtilitySweep,
};
use mer_core::output;
use mer_core::{eer, load_scenario, sweep, ImpactSelection, RiskEngine, Scenario, Workshop};

/// Risk-based choice between repairing now and delivering first.
#[derive(Parser, Debug)]
#[command(name = "mer", version, about)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario TOML file, or the name of a shipped preset.
    #[arg(long, global = true, default_value = "paper-basic")]
    scenario: String,
    /// Directory the CSV files are written to.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Alarm grid spacing in km. Defaults to the scenario's grid step.
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Relative tolerance of the adaptive quadrature.
    #[arg(long, global = true)]
    quad_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Risk of each decision at one alarm location.
    Plan {
        /// Alarm location in km. Defaults to the scenario's.
        #[arg(long)]
        da: Option<f64>,
        #[arg(long, default_value = "both")]
        impacts: ImpactSelection,
    },
    /// Risk of each decision over the whole alarm grid.
    Sweep {
        #[arg(long, default_value = "both")]
        impacts: ImpactSelection,
    },
    /// Expected risk of each fixed decision against the planner.
    Baselines,
    /// Expected minimal risk as the RUL variance changes at fixed mean.
    SensRul,
    /// Expected minimal risk over a grid of delay-penalty caps.
    SensUtility,
    /// Expected minimal risk with a different set of workshops.
    SensWorkshops {
        /// Number of evenly spaced workshops, or a TOML file with `[[workshops]]` entries.
        #[arg(long, default_value = "2")]
        workshops: String,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkshopFile {
    workshops: Vec<Workshop>,
}

fn resolve_scenario(common: &Common) -> Result<Scenario> {
    let mut scenario = match Scenario::preset(&common.scenario) {
        Some(s) => s,
        None => {
            let path = Path::new(&common.scenario);
            if !path.exists() {
                bail!("no scenario file or preset named `{}`", common.scenario);
            }
            load_scenario(path)?
        }
    };
    if let Some(tol) = common.quad_tol {
        scenario.numerics.quadrature.rel_tol = tol;
        scenario.numerics.quadrature.validate()?;
    }
    if let Some(step) = common.step {
        scenario.numerics.grid_step = step;
    }
    scenario.validate()?;
    Ok(scenario)
}

fn resolve_workshops(base: &Scenario, arg: &str) -> Result<Vec<Workshop>> {
    if let Ok(n) = arg.parse::<usize>() {
        if n == 0 {
            bail!("--workshops must be at least 1");
        }
        return Ok(if n == 2 {
            two_workshop_layout(base)
        } else {
            even_workshop_layout(base, n)
        });
    }
    let text = fs::read_to_string(arg).with_context(|| format!("reading workshop file {arg}"))?;
    let file: WorkshopFile =
        toml::from_str(&text).with_context(|| format!("parsing workshop file {arg}"))?;
    Ok(file.workshops)
}

fn write(out: &Path, name: &str, contents: &str) -> Result<()> {
    let path = out.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let scenario = resolve_scenario(&cli.common)?;
    for warning in scenario.warnings() {
        eprintln!("warning: {warning}");
    }
    let out = &cli.common.out;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let step = scenario.numerics.grid_step;

    match cli.command {
        Command::Plan { da, impacts } => {
            let scenario = match da {
                Some(d) => scenario.with_alarm(d)?,
                None => scenario,
            };
            let report = RiskEngine::new(&scenario).report(impacts)?;
            println!(
                "d_a = {} km, impacts = {}",
                output::sig6(report.alarm_location),
                impacts.as_str()
            );
            println!(
                "{:<8} {:>12} {:>12} {:>12}",
                "decision", "E_al", "E_mc", "E_total"
            );
            for r in &report.risks {
                println!(
                    "{:<8} {:>12} {:>12} {:>12}",
                    r.decision.as_str(),
                    output::sig6(r.availability),
                    output::sig6(r.maintenance),
                    output::sig6(r.total)
                );
            }
            println!("chosen: {}", report.chosen);
            write(out, "plan.csv", &output::plan_csv(&report))?;
        }
        Command::Sweep { impacts } => {
            let result = sweep(&scenario, step, impacts)?;
            write(out, "sweep.csv", &output::sweep_csv(&result))?;
        }
        Command::Baselines => {
            let result = sweep(&scenario, step, ImpactSelection::Both)?;
            let report = eer(&result);
            print!("{}", output::baselines_csv(&report));
            write(out, "baselines.csv", &output::baselines_csv(&report))?;
        }
        Command::SensRul => {
            let points = rul_sensitivity(&scenario, &RulSweep::default(), step)?;
            write(out, "sens_rul.csv", &output::rul_sensitivity_csv(&points))?;
        }
        Command::SensUtility => {
            let points = utility_sensitivity(&scenario, &UtilitySweep::default(), step)?;
            write(
                out,
                "sens_utility.csv",
                &output::utility_sensitivity_csv(&points),
            )?;
        }
        Command::SensWorkshops { workshops } => {
            let layout = resolve_workshops(&scenario, &workshops)?;
            let count = layout.len();
            let cmp = workshop_scenario(&scenario, layout, step)?;
            println!(
                "expected MER: {} workshop(s) {}, {} workshop(s) {}, change {}",
                scenario.geometry.workshops.len(),
                output::sig6(cmp.baseline_mer),
                count,
                output::sig6(cmp.variant_mer),
                output::sig6(cmp.relative_change)
            );
            write(
                out,
                "sens_workshops.csv",
                &output::workshops_sweep_csv(&cmp),
            )?;
            write(
                out,
                "sens_workshops_summary.csv",
                &output::workshops_summary_csv(&cmp, scenario.geometry.workshops.len(), count),
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
