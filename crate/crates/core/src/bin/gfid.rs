use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gfid::pipeline::{self, RunConfig};
use gfid::{bcft, cft2d, Error, Result};

/// Universal g-factors from ground-state fidelities.
#[derive(Parser)]
#[command(name = "gfid", version)]
struct Cli {
    /// key = value config file; defaults apply to missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for runner files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest chain length of the main sweep (sizes 8, 10, ..., lmax).
    #[arg(long, global = true)]
    lmax: Option<usize>,
    /// Worker threads, 0 for all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Extra config override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ED sweeps, closed-form curves, toroidal panel and massive inset.
    Fig1,
    /// Eight-vertex g surface over the c grid.
    Fig2,
    /// Gaussian and six-vertex validation suites.
    Oracle,
    /// Fidelity series and fits for delta1 against the delta2 grid.
    Sweep,
    /// Closed-form predictions.
    #[command(subcommand)]
    Predict(Predict),
    /// Dedekind eta at a real nome.
    Eta(Nome),
    /// Winding/momentum sum I(lambda, q).
    Instanton {
        #[arg(long, allow_hyphen_values = true)]
        lam: f64,
        #[command(flatten)]
        nome: Nome,
    },
    /// Six-vertex lattice fidelities on a small torus (CSV).
    VertexExact {
        #[arg(long)]
        l1: Option<usize>,
        #[arg(long)]
        l2: Option<usize>,
    },
    /// Eight-vertex g surface to stdout (CSV).
    Vertex8Surface {
        #[arg(long, allow_hyphen_values = true)]
        aspect: Option<f64>,
    },
    /// Determinant-route Gaussian fidelities (CSV).
    Gaussian {
        #[arg(long, allow_hyphen_values = true)]
        lam1: f64,
        #[arg(long, allow_hyphen_values = true)]
        lam2: f64,
    },
}

#[derive(Args)]
struct Nome {
    /// Nome q in (0, 1).
    #[arg(long, conflicts_with = "aspect", allow_hyphen_values = true)]
    q: Option<f64>,
    /// L1/L2; q = exp(-2 pi aspect).
    #[arg(long, allow_hyphen_values = true)]
    aspect: Option<f64>,
}

impl Nome {
    fn value(&self) -> Result<f64> {
        match (self.q, self.aspect) {
            (Some(q), _) => Ok(q),
            (None, Some(a)) => cft2d::nome(a),
            (None, None) => cft2d::nome(1.0),
        }
    }
}

#[derive(Subcommand)]
enum Predict {
    /// g between two stiffnesses, or two anisotropies with --delta1/--delta2.
    GCritical {
        #[arg(long, requires = "lam2", allow_hyphen_values = true)]
        lam1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        lam2: Option<f64>,
        #[arg(long, requires = "delta2", conflicts_with = "lam1", allow_hyphen_values = true)]
        delta1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        delta2: Option<f64>,
    },
    /// Stiffness and Luttinger parameter of an anisotropy.
    Lambda {
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
    },
    Dirichlet {
        #[arg(long, allow_hyphen_values = true)]
        lam: f64,
    },
    Neumann {
        #[arg(long, allow_hyphen_values = true)]
        lam: f64,
    },
    /// sqrt(2) K^(1/4) for the critical side at --delta.
    Massive {
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
    },
    Antiperiodic,
    /// Eight-vertex g at weights c, c'.
    EightVertex {
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, allow_hyphen_values = true)]
        c_prime: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        aspect: f64,
    },
    /// g_critical over the curve_delta2 grid (CSV).
    Curve {
        #[arg(long, allow_hyphen_values = true)]
        delta1: Option<f64>,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    cfg.apply_overrides(cli.set.iter().map(String::as_str))?;
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(lmax) = cli.lmax {
        cfg.set("lmax", &lmax.to_string())?;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn number(x: f64) -> Result<()> {
    println!("{}", serde_json::to_string(&x)?);
    Ok(())
}

fn predict(cfg: &RunConfig, p: &Predict) -> Result<()> {
    match p {
        Predict::GCritical {
            lam1,
            lam2,
            delta1,
            delta2,
        } => match (lam1, lam2, delta1, delta2) {
            (Some(a), Some(b), _, _) => number(bcft::g_critical(*a, *b)?),
            (_, _, Some(a), Some(b)) => number(bcft::g_critical_xxz(*a, *b)?),
            _ => Err(Error::Config("give --lam1/--lam2 or --delta1/--delta2".into())),
        },
        Predict::Lambda { delta } => {
            println!("{}", serde_json::to_string(&bcft::lambda_of_delta(*delta)?)?);
            Ok(())
        }
        Predict::Dirichlet { lam } => number(bcft::g_dirichlet(*lam)?),
        Predict::Neumann { lam } => number(bcft::g_neumann(*lam)?),
        Predict::Massive { delta } => number(bcft::g_critical_massive(bcft::lambda_of_delta(*delta)?.k)?),
        Predict::Antiperiodic => number(bcft::g_antiperiodic()),
        Predict::EightVertex { c, c_prime, aspect } => {
            number(cft2d::g_eight_vertex(*c, *c_prime, *aspect)?)
        }
        Predict::Curve { delta1 } => {
            let d1 = delta1.unwrap_or(cfg.delta1);
            let mut table = gfid::output::CsvTable::new(&cfg.digest(), &["delta2", "g"]);
            table.describe(&format!("delta1={d1:?}"));
            for &d2 in &cfg.curve_delta2 {
                match bcft::g_critical_xxz(d1, d2) {
                    Ok(g) => table.row(vec![d2.into(), g.into()]),
                    Err(e) => table.marker(&format!("skipped delta2={d2:?}: {e}")),
                };
            }
            print!("{}", table.render());
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let mut cfg = load_config(cli)?;
    let report = |out: pipeline::RunOutput| {
        for f in out.files {
            println!("{}", f.display());
        }
    };
    match &cli.command {
        Command::Fig1 => report(pipeline::run_fig1(&cfg)?),
        Command::Fig2 => report(pipeline::run_fig2(&cfg)?),
        Command::Oracle => report(pipeline::run_oracle(&cfg)?),
        Command::Sweep => report(pipeline::run_sweep(&cfg)?),
        Command::Predict(p) => predict(&cfg, p)?,
        Command::Eta(nome) => number(cft2d::dedekind_eta(nome.value()?)?)?,
        Command::Instanton { lam, nome } => number(cft2d::instanton_sum(*lam, nome.value()?)?)?,
        Command::VertexExact { l1, l2 } => {
            cfg.vertex_l1 = l1.unwrap_or(cfg.vertex_l1);
            cfg.vertex_l2 = l2.unwrap_or(cfg.vertex_l2);
            print!("{}", pipeline::vertex_table(&cfg)?.render());
        }
        Command::Vertex8Surface { aspect } => {
            cfg.aspect = aspect.unwrap_or(cfg.aspect);
            print!("{}", pipeline::surface_table(&cfg)?.render());
        }
        Command::Gaussian { lam1, lam2 } => {
            print!("{}", pipeline::gaussian_table(&cfg, *lam1, *lam2)?.render());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
