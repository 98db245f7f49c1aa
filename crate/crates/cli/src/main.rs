use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hamfix_core::cohomology::cohomology_report;
use hamfix_core::constraints::{check_all, CheckFlags};
use hamfix_core::examples::{builtin, orbit_gkm, project_gkm, Builtin};
use hamfix_core::model::{derive_weight_system, Configuration};
use hamfix_core::search::{
    enumerate, verify_theorem1_at, verify_theorem2, verify_theorem3, verify_theorem4,
    PruningToggles, SearchSpec, TheoremReport, THEOREM2_WIDTH,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "hamfix",
    version,
    about = "Fixed-point data of circle actions with six isolated fixed points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every constraint on a configuration file ("-" for stdin).
    Check {
        file: PathBuf,
        #[arg(long)]
        require_effective: bool,
    },
    /// First Chern class, ring generators, Chern classes and integrals.
    Report { file: PathBuf },
    /// Exhaustive search for valid configurations.
    Enumerate(EnumerateArgs),
    /// Reproduce a classification theorem by search.
    Verify {
        #[command(subcommand)]
        theorem: Theorem,
    },
    /// Built-in configurations.
    Examples {
        #[command(subcommand)]
        action: ExampleAction,
    },
    /// Project the coadjoint-orbit GKM graph along an integer direction.
    ProjectGkm {
        #[arg(long, value_parser = parse_pair_i64, default_value = "1,2")]
        xi: (i64, i64),
    },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    max_weight: i64,
    #[arg(long)]
    max_width: i64,
    #[arg(long)]
    c1: Option<i64>,
    /// Vertex pair `i,j` that must carry the largest weight; repeatable.
    #[arg(long, value_parser = parse_pair_usize)]
    largest_from: Vec<(usize, usize)>,
    #[arg(long)]
    require_effective: bool,
    #[arg(long)]
    symmetry_gaps: bool,
    /// Disable a pruning rule: divisibility, extremal, gamma or flip; repeatable.
    #[arg(long, value_parser = ["divisibility", "extremal", "gamma", "flip"])]
    no_prune: Vec<String>,
    #[arg(long)]
    node_limit: Option<u64>,
    /// Print only the search statistics.
    #[arg(long)]
    seed_stats: bool,
}

#[derive(Subcommand)]
enum Theorem {
    /// No configuration has all weights below 5.
    Thm1 {
        #[arg(long, default_value_t = 40)]
        max_width: i64,
        #[arg(long, default_value_t = 4)]
        max_weight: i64,
    },
    /// Equivalence of the three conditions when the largest weight is 5.
    Thm2 {
        #[arg(long, default_value_t = THEOREM2_WIDTH)]
        max_width: i64,
    },
    /// Uniqueness when weight 5 joins P0 and P5 across width 10.
    Thm3,
    /// The parametric family with gap symmetry.
    Thm4 {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        c: i64,
    },
}

#[derive(Subcommand)]
enum ExampleAction {
    List,
    /// Print a built-in configuration with its check summary.
    Show {
        name: String,
        params: Vec<i64>,
    },
    /// Write a built-in configuration as JSON.
    Export {
        name: String,
        params: Vec<i64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_pair_i64(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got {s:?}"))?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|e| e.to_string());
    Ok((p(a)?, p(b)?))
}

fn parse_pair_usize(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = parse_pair_i64(s)?;
    if a < 0 || b < 0 {
        return Err(format!("vertex indices must be non-negative, got {s:?}"));
    }
    Ok((a as usize, b as usize))
}

/// Usage or input problems, reported with exit code 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

fn read_config(path: &Path) -> Result<Configuration, Fatal> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable output")
    );
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_weights(c: &Configuration) {
    let ws = derive_weight_system(c);
    eprintln!("{c}");
    eprintln!("{:<4} {:>6} {:<28}", "pt", "phi", "weights");
    for (i, w) in ws.weights.iter().enumerate() {
        eprintln!("P{:<3} {:>6} {:?}", i, c.profile().value(i), w);
    }
}

fn print_theorem(r: &TheoremReport) {
    eprintln!(
        "theorem {}: {}",
        r.theorem,
        if r.pass { "PASS" } else { "FAIL" }
    );
    for check in &r.checks {
        eprintln!(
            "  [{}] {:<44} {}",
            if check.pass { "ok" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    eprintln!(
        "  nodes {}, leaves {}, {:.2?}",
        r.stats.nodes, r.stats.leaves, r.stats.wall_time
    );
}

#[derive(Serialize)]
struct FullReport {
    c1: Option<i64>,
    check_pass: bool,
    #[serde(flatten)]
    cohomology: hamfix_core::cohomology::CohomologyReport,
}

fn run(cli: Cli) -> Result<ExitCode, Fatal> {
    match cli.command {
        Command::Check {
            file,
            require_effective,
        } => {
            let c = read_config(&file)?;
            let report = check_all(&c, CheckFlags { require_effective });
            print_weights(&c);
            eprintln!(
                "c1: {}",
                report.c1.map_or("-".to_string(), |k| k.to_string())
            );
            for v in &report.violations {
                eprintln!("  {v}");
            }
            eprintln!("{}", if report.pass { "PASS" } else { "FAIL" });
            emit(&report);
            Ok(status(report.pass))
        }
        Command::Report { file } => {
            let c = read_config(&file)?;
            let check = check_all(&c, CheckFlags::default());
            print_weights(&c);
            match cohomology_report(&c) {
                Ok(coh) => {
                    eprintln!(
                        "c1 = {}[omega]",
                        check.c1.map_or("?".to_string(), |k| k.to_string())
                    );
                    eprintln!("q  = ({})", coh.ring_q.join(", "));
                    eprintln!("c  = ({})", coh.chern_ordinary.join(", "));
                    eprintln!(
                        "int omega^5 = {}, int c5 = {}",
                        coh.integrals.omega5, coh.integrals.euler
                    );
                    let out = FullReport {
                        c1: check.c1,
                        check_pass: check.pass,
                        cohomology: coh,
                    };
                    emit(&out);
                    Ok(status(check.pass))
                }
                Err(e) => {
                    eprintln!("cohomology: {e}");
                    emit(
                        &serde_json::json!({ "c1": check.c1, "check_pass": check.pass, "error": e.to_string() }),
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Enumerate(args) => {
            let mut pruning = PruningToggles::default();
            for rule in &args.no_prune {
                match rule.as_str() {
                    "divisibility" => pruning.divisibility = false,
                    "extremal" => pruning.extremal_edges = false,
                    "gamma" => pruning.gamma_sums = false,
                    _ => pruning.flip_symmetry = false,
                }
            }
            let spec = SearchSpec {
                max_weight: args.max_weight,
                max_width: args.max_width,
                c1: args.c1,
                largest_from: args.largest_from,
                require_effective: args.require_effective,
                symmetry_gaps: args.symmetry_gaps,
                pruning,
                node_limit: args.node_limit,
            };
            let result = enumerate(&spec)?;
            eprintln!(
                "{} configurations, {} weight systems; nodes {}, leaves {}, {:.2?}",
                result.configurations.len(),
                result.weight_systems().len(),
                result.stats.nodes,
                result.stats.leaves,
                result.stats.wall_time
            );
            for (rule, n) in &result.stats.pruned {
                eprintln!("  {rule:<24} {n:>12}");
            }
            if args.seed_stats {
                emit(&result.stats);
            } else {
                emit(&result);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { theorem } => {
            let report = match theorem {
                Theorem::Thm1 {
                    max_width,
                    max_weight,
                } => verify_theorem1_at(max_weight, max_width)?,
                Theorem::Thm2 { max_width } => verify_theorem2(max_width)?,
                Theorem::Thm3 => verify_theorem3()?,
                Theorem::Thm4 { a, c } => verify_theorem4(a, c)?,
            };
            print_theorem(&report);
            emit(&report);
            Ok(status(report.pass))
        }
        Command::Examples { action } => match action {
            ExampleAction::List => {
                for name in Builtin::NAMES {
                    let c = builtin(Builtin::parse(name, &[])?)?;
                    eprintln!("{:<10} {}", name, c);
                }
                emit(&Builtin::NAMES);
                Ok(ExitCode::SUCCESS)
            }
            ExampleAction::Show { name, params } => {
                let c = builtin(Builtin::parse(&name, &params)?)?;
                let report = check_all(&c, CheckFlags::default());
                print_weights(&c);
                eprintln!(
                    "check: {}, c1 = {:?}",
                    if report.pass { "PASS" } else { "FAIL" },
                    report.c1
                );
                emit(&c);
                Ok(ExitCode::SUCCESS)
            }
            ExampleAction::Export {
                name,
                params,
                output,
            } => {
                let c = builtin(Builtin::parse(&name, &params)?)?;
                let json = serde_json::to_string_pretty(&c)?;
                match output {
                    Some(path) => fs::write(&path, json + "\n")
                        .map_err(|e| Fatal(format!("{}: {e}", path.display())))?,
                    None => println!("{json}"),
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::ProjectGkm { xi } => {
            let c = project_gkm(&orbit_gkm(), [xi.0, xi.1])?;
            print_weights(&c);
            emit(&c);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var("HAMFIX_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    eprintln!("hamfix: cannot set thread count: {e}");
                    return ExitCode::from(2);
                }
            }
            _ => {
                eprintln!("hamfix: HAMFIX_THREADS must be a positive integer, got {n:?}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            eprintln!("hamfix: {msg}");
            ExitCode::from(2)
        }
    }
}
