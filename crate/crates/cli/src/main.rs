use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use swc_cli::{
    cmd_bound_entanglement, cmd_distill, cmd_eval, cmd_mppt, cmd_table1, cmd_threshold, DistillSource,
    LiftState, Report, TauChoice, ThresholdRecipe,
};
use swc_core::zoo::FamilyQuery;

#[derive(Parser)]
#[command(name = "swc", version, about = "State-witness contraction experiments")]
struct Cli {
    /// Write the JSON report here ("-" for standard output).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write the CSV report here ("-" for standard output).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isotropic detection thresholds for the three-copy and tailored witnesses.
    Table1 {
        #[arg(long, value_delimiter = ',', default_values_t = vec![3, 4, 5, 6])]
        d: Vec<usize>,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Four-qutrit witness minimized over states with PPT single parties.
    BoundEntanglement {
        /// "bell" or "phi_s:<s>".
        #[arg(long, default_value = "bell")]
        tau: String,
    },
    /// Lifted three-qubit witness minimized over states PPT across all bipartitions.
    Mppt {
        #[arg(long, default_value_t = 3)]
        l: usize,
        /// "ghz", "w" or "haar:<seed>".
        #[arg(long, default_value = "ghz")]
        m: String,
    },
    /// Two-qubit projection distillability test.
    Distill {
        /// Family such as "werner:d=3" (grid sweep) or "werner:d=3,p=0.2".
        #[arg(long, conflicts_with_all = ["state", "random"])]
        family: Option<String>,
        /// Operator file of a two-party state.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Local dimension of Haar-random pure states.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bisection for the sign change of a recipe along a family.
    Threshold {
        /// Family such as "isotropic:d=4".
        #[arg(long, default_value = "isotropic:d=3")]
        family: String,
        /// "three-copy", "tailored" or a recipe file.
        #[arg(long, default_value = "tailored")]
        recipe: String,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Evaluate a state file against a recipe file.
    Eval {
        #[arg(long)]
        recipe: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
}

fn run(command: Command) -> swc_core::Result<Report> {
    match command {
        Command::Table1 { d, tol } => cmd_table1(&d, tol),
        Command::BoundEntanglement { tau } => cmd_bound_entanglement(tau.parse::<TauChoice>()?),
        Command::Mppt { l, m } => cmd_mppt(l, m.parse::<LiftState>()?),
        Command::Distill {
            family,
            state,
            random,
            k,
            samples,
            seed,
        } => {
            let source = match (family, state, random) {
                (Some(f), None, None) => DistillSource::Family(f.parse::<FamilyQuery>()?),
                (None, Some(p), None) => DistillSource::State(p),
                (None, None, Some(d)) => DistillSource::Random { d },
                _ => {
                    return Err(swc_core::Error::Argument(
                        "give exactly one of --family, --state, --random".into(),
                    ))
                }
            };
            cmd_distill(&source, k, samples, seed)
        }
        Command::Threshold {
            family,
            recipe,
            lo,
            hi,
            tol,
        } => {
            let query: FamilyQuery = family.parse()?;
            cmd_threshold(&query.family, &ThresholdRecipe::parse(&recipe), (lo, hi), tol)
        }
        Command::Eval { recipe, state } => cmd_eval(&recipe, &state),
    }
}

fn emit(target: &PathBuf, text: &str) -> std::io::Result<()> {
    if target.as_os_str() == "-" {
        println!("{text}");
        Ok(())
    } else {
        std::fs::write(target, text)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match run(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let to_stdout = |p: &Option<PathBuf>| p.as_ref().is_some_and(|p| p.as_os_str() == "-");
    if !to_stdout(&cli.json) && !to_stdout(&cli.csv) {
        print!("{}", report.to_table());
    }
    let outputs = [
        (cli.json.as_ref(), report.to_json()),
        (cli.csv.as_ref(), report.to_csv()),
    ];
    for (target, text) in outputs {
        if let Some(target) = target {
            let written = text.map_err(|e| e.to_string()).and_then(|t| emit(target, &t).map_err(|e| e.to_string()));
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    eprintln!("wall time: {:.2?}", start.elapsed());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
