use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maintcost::config::ChainConfig;
use maintcost::critical::{CriticalQuery, StrategyPair, TAYLOR_D_MAX};
use maintcost::homogenize::{homogenize, rescale, HomogenizedChain};
use maintcost::oracle::{simulate, SimSettings};
use maintcost::report::{self, Provenance};
use maintcost::solver::{linear_grid, log_grid, superiority_surface, trace_critical_curve, CurveMethod, SolveSettings};
use maintcost::{Chain, Error, Preset, Reputation, Strategy};

/// Unit-cost comparison of zero maintenance, inspection and monitoring.
#[derive(Parser)]
#[command(name = "maintcost", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Chain configuration (JSON).
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled parameter set, used when no config is given.
    #[arg(long, global = true, default_value = "ref50")]
    preset: String,
    /// Output directory; without it results go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exit with status 2 if any solve fails.
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance on unit-cost equality.
    #[arg(long, global = true, default_value_t = 1e-5)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Cost breakdown of the three pure strategies.
    Compare {
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Homogenized parameters as JSON.
    Homogenize {
        #[arg(long, default_value = "general")]
        strategy: String,
        /// Virtual stage count; defaults to the chain length.
        #[arg(long)]
        stages: Option<f64>,
    },
    /// Moves a homogenized record to another stage count.
    Rescale {
        /// Homogenized JSON record; without it the chain is homogenized first.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "general")]
        strategy: String,
        #[arg(long)]
        stages: f64,
    },
    /// Critical effectiveness over a defect-rate grid.
    CriticalCurve {
        #[arg(long, default_value = "monitoring_vs_zero")]
        pair: String,
        /// closed_Nn, closed_N1_rescaled, numeric or all.
        #[arg(long, default_value = "all")]
        method: String,
        #[arg(long)]
        stages: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[command(flatten)]
        grid: DGrid,
    },
    /// Monitoring-versus-inspection critical effectiveness over (d, e_i).
    Surface {
        #[arg(long, default_value = "closed_N1_rescaled")]
        method: String,
        #[arg(long)]
        stages: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[command(flatten)]
        grid: DGrid,
        #[arg(long, default_value_t = 50)]
        ei_points: usize,
    },
    /// Regime boundaries a and b over a monitoring-effectiveness grid.
    Regimes {
        #[arg(long)]
        stages: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, default_value_t = 20)]
        em_points: usize,
    },
    /// Unit-level Monte Carlo of sold and defective sold volume.
    Simulate {
        #[arg(long, default_value = "general")]
        strategy: String,
        #[arg(long, default_value_t = 30)]
        replications: usize,
        #[arg(long)]
        trace: bool,
        /// Upper bound on simulated units over all replications.
        #[arg(long, default_value_t = 1e10)]
        unit_budget: f64,
    },
    /// Data sets behind figures 2 to 8 (all of them unless one is named).
    Figdata {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=8))]
        figure: Option<u8>,
    },
}

#[derive(Args)]
struct DGrid {
    #[arg(long, default_value_t = 1e-4)]
    d_min: f64,
    #[arg(long, default_value_t = 0.5)]
    d_max: f64,
    #[arg(long, default_value_t = 200)]
    d_points: usize,
}

impl DGrid {
    fn values(&self) -> Vec<f64> {
        log_grid(self.d_min, self.d_max, self.d_points)
    }
}

enum Failure {
    Config(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoRoot { .. } | Error::NoConvergence { .. } | Error::DegenerateBracket { .. } => {
                Failure::Solver(e.to_string())
            }
            other => Failure::Config(other.to_string()),
        }
    }
}

struct Context {
    global: Global,
    config: ChainConfig,
    preset: Option<Preset>,
    chain: Chain,
    settings: SolveSettings,
}

impl Context {
    fn load(global: Global) -> Result<Self, Failure> {
        let (config, preset) = match &global.config {
            Some(path) => (ChainConfig::from_path(path)?, None),
            None => {
                let preset: Preset = global.preset.parse()?;
                (preset.config(), Some(preset))
            }
        };
        let chain = config.to_chain()?;
        let settings = SolveSettings {
            tolerance: global.tolerance,
            ..SolveSettings::default()
        };
        settings.validate()?;
        Ok(Self {
            global,
            config,
            preset,
            chain,
            settings,
        })
    }

    /// Chain with an optional reputation-strength override, and its provenance.
    fn chain(&self, kappa: Option<f64>) -> Result<(Chain, Provenance), Failure> {
        match kappa {
            None => Ok((self.chain.clone(), Provenance::new(self.preset, &self.config))),
            Some(k) => {
                let chain = self.chain.with_reputation(Reputation::with_strength(k)?);
                let prov = Provenance::new(self.preset, &ChainConfig::from_chain(&chain));
                Ok((chain, prov))
            }
        }
    }

    fn stages(&self, stages: Option<f64>) -> f64 {
        stages.unwrap_or(self.chain.len() as f64)
    }

    fn strict_check(&self, failures: usize) -> Result<(), Failure> {
        if failures > 0 {
            let msg = format!("{failures} point(s) failed to solve");
            if self.global.strict {
                return Err(Failure::Solver(msg));
            }
            eprintln!("warning: {msg}");
        }
        Ok(())
    }

    /// Writes `files` into `--out`, or concatenates them to stdout.
    fn emit(&self, files: &[(String, String)]) -> Result<(), Failure> {
        match &self.global.out {
            Some(dir) => write_files(dir, files),
            None => {
                for (_, text) in files {
                    print!("{text}");
                }
                Ok(())
            }
        }
    }
}

fn write_files(dir: &Path, files: &[(String, String)]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Config(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    for (name, text) in files {
        std::fs::write(dir.join(name), text).map_err(io)?;
    }
    Ok(())
}

fn methods(spec: &str) -> Result<Vec<CurveMethod>, Failure> {
    if spec == "all" {
        return Ok(CurveMethod::ALL.to_vec());
    }
    spec.split(',').map(|m| Ok(m.trim().parse()?)).collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = Context::load(cli.global)?;
    match cli.command {
        Command::Compare { kappa } => {
            let (chain, prov) = ctx.chain(kappa)?;
            let c = report::compare(&chain, &ctx.settings)?;
            if let Some(t) = c.taylor.filter(|t| !t.within_validity) {
                eprintln!(
                    "warning: d exceeds {TAYLOR_D_MAX}; the small-d estimate {:.6} is outside its validity range, \
                     prefer the single-stage closed form",
                    t.value.value
                );
            }
            eprintln!("cheapest strategy: {}", c.cheapest);
            if let Some(v) = c.em_crit_vs_zero {
                eprintln!("critical e_m vs zero maintenance: {v:.6}");
            }
            if let Some(v) = c.em_crit_vs_inspection {
                eprintln!("critical e_m vs inspection: {v:.6}");
            }
            ctx.emit(&[("compare.csv".into(), report::comparison_csv(&prov, &c))])
        }
        Command::Homogenize { strategy, stages } => {
            let (chain, prov) = ctx.chain(None)?;
            let strategy: Strategy = strategy.parse()?;
            let h = homogenize(&chain, strategy, ctx.stages(stages))?;
            ctx.emit(&[("homogenized.json".into(), report::homogenized_json(&prov, &h))])
        }
        Command::Rescale { input, strategy, stages } => {
            let (chain, prov) = ctx.chain(None)?;
            let h = match input {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
                    serde_json::from_str::<HomogenizedChain>(&text)
                        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
                }
                None => homogenize(&chain, strategy.parse()?, chain.len() as f64)?,
            };
            let r = rescale(&h, stages)?;
            ctx.emit(&[("rescaled.json".into(), report::homogenized_json(&prov, &r))])
        }
        Command::CriticalCurve {
            pair,
            method,
            stages,
            kappa,
            grid,
        } => {
            let (chain, prov) = ctx.chain(kappa)?;
            let pair: StrategyPair = pair.parse()?;
            let q = CriticalQuery::new(pair, &chain, ctx.stages(stages))?;
            let d_grid = grid.values();
            let curves = methods(&method)?
                .into_iter()
                .map(|m| trace_critical_curve(&q, &d_grid, m, &ctx.settings))
                .collect::<maintcost::Result<Vec<_>>>()?;
            ctx.strict_check(curves.iter().map(|c| c.failures()).sum())?;
            ctx.emit(&[("critical_curve.csv".into(), report::curve_csv(&prov, &curves))])
        }
        Command::Surface {
            method,
            stages,
            kappa,
            grid,
            ei_points,
        } => {
            let (chain, prov) = ctx.chain(kappa)?;
            let q = CriticalQuery::new(StrategyPair::MonitoringVsInspection, &chain, ctx.stages(stages))?;
            let s = superiority_surface(
                &q,
                &grid.values(),
                &linear_grid(0.0, 1.0, ei_points),
                method.parse()?,
                &ctx.settings,
            )?;
            ctx.strict_check(s.failures())?;
            ctx.emit(&[("surface.csv".into(), report::surface_csv(&prov, &s))])
        }
        Command::Regimes {
            stages,
            kappa,
            em_points,
        } => {
            let (chain, prov) = ctx.chain(kappa)?;
            let h = homogenize(&chain, Strategy::General, ctx.stages(stages))?;
            let rows = report::regimes(&h, &linear_grid(1.0 / em_points as f64, 1.0, em_points), &ctx.settings)?;
            ctx.emit(&[("regimes.csv".into(), report::regimes_csv(&prov, h.defect_rate, &rows))])
        }
        Command::Simulate {
            strategy,
            replications,
            trace,
            unit_budget,
        } => {
            let (chain, prov) = ctx.chain(None)?;
            let strategy: Strategy = strategy.parse()?;
            let settings = SimSettings {
                replications,
                seed: ctx.global.seed,
                unit_budget,
                trace,
            };
            let r = simulate(&chain, strategy, &settings)?;
            ctx.emit(&[
                ("simulation.csv".into(), report::simulation_csv(&prov, &r)),
                ("simulation.json".into(), report::simulation_json(&prov, &chain, strategy, &r)),
            ])
        }
        Command::Figdata { figure } => {
            let (chain, prov) = ctx.chain(None)?;
            let figures: Vec<u8> = match figure {
                Some(f) => vec![f],
                None => report::FIGURES.collect(),
            };
            let data = figures
                .into_iter()
                .map(|f| report::figure(f, &chain, &prov, &ctx.settings))
                .collect::<maintcost::Result<Vec<_>>>()?;
            ctx.strict_check(data.iter().map(|d| d.failures).sum())?;
            let files: Vec<(String, String)> = data.into_iter().map(|d| (d.file_name, d.csv)).collect();
            let dir = ctx.global.out.clone().unwrap_or_else(|| PathBuf::from("figdata"));
            write_files(&dir, &files)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
