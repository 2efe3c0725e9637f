//! Command-line front end: fixture ingestion from a JSON config, per-prime
//! sweeps, and deterministic reports.
//!
//! Exit codes: 0 on success, 2 when a task's verdict is "falsified" or
//! "none found" (a first L-series mismatch, a failed reconstruction, an
//! unexpected twist pattern), and 1 on usage or configuration errors.

mod config;
mod tasks;

use clap::{Args, Parser, Subcommand};

use tasks::TaskResult;

#[derive(Parser)]
#[command(name = "lsiso", version, about = "prime splitting, order-l characters, L-series local data, and prime-bijection reconstruction", disable_help_subcommand = true)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Path to the JSON job configuration.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Prime/coefficient bound; overrides the config default.
    #[arg(long, global = true)]
    bound: Option<u64>,
    /// Seed for randomized splitting; results do not depend on it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format: json or tsv.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Directory to write report files into (reports also go to stdout).
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Splitting table of a field up to the bound.
    Split {
        #[arg(long)]
        field: String,
    },
    /// Dirichlet coefficients of the field's zeta function up to the bound.
    Zeta {
        #[arg(long)]
        field: String,
    },
    /// Local L-factors of a character at every prime up to the bound.
    Lfactor {
        #[arg(long)]
        character: String,
    },
    /// Compare two characters' L-series through local factors.
    Compare {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Reconstruct the prime matchings from a character-map rule and search
    /// for the unique matching field isomorphism.
    Reconstruct {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// identity | induced:N | twist:P
        #[arg(long)]
        rule: String,
    },
    /// Arithmetic-equivalence report for a pair of fields.
    Gassmann {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// The twist counterexample demo over Q.
    Remark {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 30)]
        dmax: u64,
    },
    /// Execute every task in the config, writing one report per task.
    Run,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap's default help/version paths exit 0
            if e.kind() == clap::error::ErrorKind::DisplayHelp
                || e.kind() == clap::error::ErrorKind::DisplayVersion
            {
                print!("{}", e);
                return 0;
            }
            eprint!("{}", e);
            return 1;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            1
        }
    }
}

fn load_config(common: &Common) -> Result<config::Config, String> {
    let path = common
        .config
        .as_deref()
        .ok_or_else(|| "no --config given".to_string())?;
    config::load(path, common.bound, common.seed, common.format.clone())
}

fn dispatch(cli: &Cli) -> Result<i32, String> {
    let cfg = load_config(&cli.common)?;
    match &cli.command {
        Command::Run => {
            if cfg.tasks.is_empty() {
                return Err("config defines no tasks".into());
            }
            let mut worst = 0;
            for task in cfg.tasks.clone() {
                let name = task.name().to_string();
                let result = run_config_task(&cfg, &task)?;
                emit(&cli.common, &cfg, &name, &result)?;
                worst = worst.max(result.exit);
            }
            Ok(worst)
        }
        other => {
            let (name, result) = run_subcommand(&cfg, other)?;
            emit(&cli.common, &cfg, &name, &result)?;
            Ok(result.exit)
        }
    }
}

fn run_subcommand(cfg: &config::Config, cmd: &Command) -> Result<(String, TaskResult), String> {
    let bound = cfg.bound;
    let seed = cfg.seed;
    match cmd {
        Command::Split { field } => Ok((
            "split".into(),
            tasks::split(cfg.field(field)?, bound, seed)?,
        )),
        Command::Zeta { field } => Ok(("zeta".into(), tasks::zeta(cfg.field(field)?, bound)?)),
        Command::Lfactor { character } => Ok((
            "lfactor".into(),
            tasks::lfactor(cfg.character(character)?, bound)?,
        )),
        Command::Compare { first, second } => Ok((
            "compare".into(),
            tasks::compare(cfg.character(first)?, cfg.character(second)?, bound)?,
        )),
        Command::Reconstruct { source, target, rule } => Ok((
            "reconstruct".into(),
            tasks::reconstruct(cfg.field(source)?, cfg.field(target)?, rule, bound, seed)?,
        )),
        Command::Gassmann { first, second } => Ok((
            "gassmann".into(),
            tasks::gassmann(cfg.field(first)?, cfg.field(second)?, bound, seed)?,
        )),
        Command::Remark { p, dmax } => Ok(("remark".into(), tasks::remark(*p, *dmax, bound)?)),
        Command::Run => unreachable!("handled by dispatch"),
    }
}

fn run_config_task(cfg: &config::Config, task: &config::RawTask) -> Result<TaskResult, String> {
    use config::RawTask::*;
    let b = |o: &Option<u64>| o.unwrap_or(cfg.bound);
    match task {
        Split { field, bound, .. } => tasks::split(cfg.field(field)?, b(bound), cfg.seed),
        Zeta { field, bound, .. } => tasks::zeta(cfg.field(field)?, b(bound)),
        LFactor { character, bound, .. } => tasks::lfactor(cfg.character(character)?, b(bound)),
        Compare { first, second, bound, .. } => {
            tasks::compare(cfg.character(first)?, cfg.character(second)?, b(bound))
        }
        Reconstruct { source, target, rule, bound, .. } => tasks::reconstruct(
            cfg.field(source)?,
            cfg.field(target)?,
            rule,
            b(bound),
            cfg.seed,
        ),
        Gassmann { first, second, bound, .. } => {
            tasks::gassmann(cfg.field(first)?, cfg.field(second)?, b(bound), cfg.seed)
        }
        Remark { p, dmax, bound, .. } => tasks::remark(*p, *dmax, b(bound)),
    }
}

fn emit(
    common: &Common,
    cfg: &config::Config,
    name: &str,
    result: &TaskResult,
) -> Result<(), String> {
    let text = match cfg.format.as_str() {
        "json" => {
            let mut s = serde_json::to_string_pretty(&result.json)
                .map_err(|e| format!("serialization failed: {e}"))?;
            s.push('\n');
            s
        }
        _ => result.tsv.clone(),
    };
    print!("{}", text);
    if let Some(dir) = &common.out {
        std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {}", dir, e))?;
        let ext = if cfg.format == "json" { "json" } else { "tsv" };
        let path = format!("{}/{}.{}", dir, name, ext);
        std::fs::write(&path, &text).map_err(|e| format!("cannot write {}: {}", path, e))?;
    }
    Ok(())
}
