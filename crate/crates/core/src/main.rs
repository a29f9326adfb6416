use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use klucb_transfer::config::ExperimentConfig;
use klucb_transfer::error::{Error, Result};
use klucb_transfer::output::{bounds_table, emit_csv};
use klucb_transfer::preset::preset_by_name;
use klucb_transfer::run_experiment;

#[derive(Parser)]
#[command(name = "klucb-transfer", version, about = "KL-UCB-Transfer regret experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its aggregated regret curves as CSV.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Output CSV (defaults to the config's output_path, relative to the config file).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Write the configs of a reference study (sim1, sim2, sim3) as JSON files.
    Preset {
        name: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Print the per-arm regret lower bound table for a config.
    Bounds {
        config: PathBuf,
        #[arg(long)]
        horizon: Option<u64>,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct Overrides {
    #[arg(long)]
    runs: Option<u64>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Overrides {
    fn apply(&self, c: &mut ExperimentConfig) {
        if let Some(r) = self.runs {
            c.runs = r;
        }
        if let Some(h) = self.horizon {
            c.horizon = h;
        }
        if let Some(s) = self.seed {
            c.master_seed = s;
        }
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            overrides,
            out,
            threads,
        } => {
            let mut c = ExperimentConfig::load(&config)?;
            overrides.apply(&mut c);
            c.validate()?;
            let violations = c.prior.radius_violations(&c.instance);
            if !violations.is_empty() {
                let arms: Vec<String> = violations.iter().map(|k| (k + 1).to_string()).collect();
                eprintln!(
                    "warning: |mu_k - mu'_k| > L_k for arm(s) {}",
                    arms.join(", ")
                );
            }
            let out = out.unwrap_or_else(|| {
                config
                    .parent()
                    .unwrap_or_else(|| Path::new(""))
                    .join(&c.output_path)
            });
            let curves = match threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
                    .install(|| run_experiment(&c))?,
                None => run_experiment(&c)?,
            };
            emit_csv(&curves, &out)?;
            for (id, curve) in &curves {
                eprintln!(
                    "{}: {id} final regret {:.3} +- {:.3} ({} runs) -> {}",
                    c.name,
                    curve.final_mean(),
                    curve.final_sem(),
                    curve.runs,
                    out.display()
                );
            }
        }
        Command::Preset {
            name,
            out_dir,
            overrides,
        } => {
            fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
            for mut c in preset_by_name(&name)? {
                overrides.apply(&mut c);
                c.validate()?;
                let path = out_dir.join(format!("{}.json", c.name));
                c.save(&path)?;
                println!("{}", path.display());
            }
        }
        Command::Bounds {
            config,
            horizon,
            out,
        } => {
            let c = ExperimentConfig::load(&config)?;
            let table = bounds_table(&c.instance, &c.prior, horizon.unwrap_or(c.horizon))?;
            let csv = table.to_csv();
            match out {
                Some(path) => write_text(&path, &csv)?,
                None => print!("{csv}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
