use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use moonshine_core::lattice::EnumerationBudget;
use moonshine_core::verify::{self, Config, SERIES_NAMES};

#[derive(Parser)]
#[command(name = "moonshine", version, about = "Exact checks for the moonshine module construction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run named checks (or `all`) and print a JSON report.
    Verify {
        names: Vec<String>,
        #[command(flatten)]
        opts: Opts,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the check catalogue.
    List,
    /// Print a named series in the text format.
    Series {
        name: String,
        #[arg(long, default_value_t = 10)]
        prec: i64,
    },
    /// Count vectors of one norm in `niemeier`, `leech` or `lambda0`.
    Enumerate {
        lattice: String,
        norm: i64,
        #[arg(long)]
        budget_override: bool,
    },
}

#[derive(Args)]
struct Opts {
    /// key=value file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    prec: Option<i64>,
    #[arg(long)]
    nmax: Option<i64>,
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    degree: Option<i64>,
    #[arg(long)]
    window: Option<i64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Seed for the randomized sweeps (default 2024).
    #[arg(long)]
    seed: Option<u64>,
    /// Allow enumerations beyond the default size estimate.
    #[arg(long)]
    budget_override: bool,
}

impl Opts {
    fn config(&self) -> Result<Config> {
        let mut c = Config::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            c.apply_text(&text)?;
        }
        let set = |c: &mut Config, key: &str, v: Option<String>| -> Result<()> {
            if let Some(v) = v {
                c.set(key, &v)?;
            }
            Ok(())
        };
        set(&mut c, "prec", self.prec.map(|v| v.to_string()))?;
        set(&mut c, "nmax", self.nmax.map(|v| v.to_string()))?;
        set(&mut c, "kmax", self.kmax.map(|v| v.to_string()))?;
        set(&mut c, "rank", self.rank.map(|v| v.to_string()))?;
        set(&mut c, "degree", self.degree.map(|v| v.to_string()))?;
        set(&mut c, "window", self.window.map(|v| v.to_string()))?;
        set(&mut c, "trials", self.trials.map(|v| v.to_string()))?;
        set(&mut c, "seed", self.seed.map(|v| v.to_string()))?;
        if self.budget_override {
            c.budget_override = true;
        }
        c.validate()?;
        Ok(c)
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { names, opts, out } => {
            let config = opts.config()?;
            let reports = verify::run(&names, &config)?;
            let json = verify::report_json(&reports);
            match out {
                Some(path) => {
                    std::fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?
                }
                None => println!("{json}"),
            }
            Ok(verify::all_passed(&reports))
        }
        Command::List => {
            for c in verify::catalogue() {
                println!("{:<20} {}", c.name, c.anchor);
            }
            Ok(true)
        }
        Command::Series { name, prec } => {
            if !SERIES_NAMES.contains(&name.as_str()) {
                bail!("unknown series {name:?}; known: {}", SERIES_NAMES.join(", "));
            }
            print!("{}", verify::named_series(&name, prec)?.to_text());
            Ok(true)
        }
        Command::Enumerate { lattice, norm, budget_override } => {
            let l = verify::named_lattice(&lattice)?;
            let budget = if budget_override { EnumerationBudget::unlimited() } else { EnumerationBudget::default() };
            let n = l.count_vectors_of_norm(norm, budget)?;
            println!("{}", serde_json::json!({"lattice": lattice, "norm": norm, "count": n}));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
