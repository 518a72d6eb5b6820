use std::path::PathBuf;
use std::process::ExitCode;

use boxproj_cli::io::{read_column, write_column, write_table};
use boxproj_cli::{bench, demo_allocation, demo_logistic, project, LogisticArgs, Result};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "boxproj", version, about = "Euclidean projection onto the box-constrained L1 ball")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project a vector read from a file.
    Project {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lower: Option<PathBuf>,
        #[arg(long)]
        upper: Option<PathBuf>,
        #[arg(long)]
        z: f64,
        /// Default a missing lower bound to 0 instead of -inf.
        #[arg(long)]
        nonnegative: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the linear and sort-based solvers.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sparse logistic regression with and without a weight box.
    DemoLogistic {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        m: usize,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long, default_value_t = 0.08)]
        z_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Estimate f(w*) with a run 100 times longer.
        #[arg(long)]
        reference: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Budgeted allocation with and without prior upper bounds.
    DemoAllocation {
        #[arg(long)]
        production: PathBuf,
        #[arg(long)]
        prior: PathBuf,
        #[arg(long)]
        ratio: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Project {
            input,
            lower,
            upper,
            z,
            nonnegative,
            out,
        } => {
            let v = read_column(&input)?;
            let lower = lower.as_deref().map(read_column).transpose()?;
            let upper = upper.as_deref().map(read_column).transpose()?;
            let s = project(v, lower, upper, z, nonnegative)?;
            write_column(&out, &s.x)?;
            println!("theta*      {}", s.theta_star);
            println!("|L|         {}", s.lower);
            println!("|U|         {}", s.upper);
            println!("|C|         {}", s.free);
            println!("norm        {}", s.norm);
            if s.norm_inactive {
                println!("budget      inactive");
            }
            println!("wall time   {:.6} s", s.elapsed.as_secs_f64());
        }
        Command::Bench {
            sizes,
            reps,
            seed,
            out,
        } => {
            let rows = bench(&sizes, reps as usize, seed, boxproj_core::tolerance_from_env())?;
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    println!("{:>9} {:<7} {:.6e} s (sd {:.2e})", r.n, r.method, r.mean_time, r.std_time);
                    vec![
                        r.n.to_string(),
                        r.method.to_string(),
                        r.mean_time.to_string(),
                        r.std_time.to_string(),
                    ]
                })
                .collect();
            write_table(&out, &["n", "method", "mean_time", "std_time"], &table)?;
        }
        Command::DemoLogistic {
            n,
            m,
            iters,
            z_fraction,
            seed,
            reference,
            out,
        } => {
            let report = demo_logistic(&LogisticArgs {
                n,
                m,
                iters,
                z_fraction,
                seed,
                reference,
            })?;
            let table: Vec<Vec<String>> = report
                .rows()
                .into_iter()
                .map(|(k, a, b)| vec![k.to_string(), a.to_string(), b.to_string()])
                .collect();
            write_table(&out, &["iter", "f_L1", "f_UBL1"], &table)?;
            println!("final f      L1 {}  UB_L1 {}", report.l1.final_objective(), report.bounded.final_objective());
            println!("|w - w_true| L1 {}  UB_L1 {}", report.error_l1, report.error_bounded);
            if let (Some(a), Some(b)) = (report.l1.reference, report.bounded.reference) {
                println!("reference f  L1 {a}  UB_L1 {b}");
            }
        }
        Command::DemoAllocation {
            production,
            prior,
            ratio,
            out,
        } => {
            let rows = demo_allocation(&read_column(&production)?, &read_column(&prior)?, ratio)?;
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.unit.to_string(),
                        r.v.to_string(),
                        r.b.to_string(),
                        r.x_l1.to_string(),
                        r.x_bounded.to_string(),
                    ]
                })
                .collect();
            write_table(&out, &["unit", "v", "b", "x_L1", "x_UBL1"], &table)?;
            let zero_l1 = rows.iter().filter(|r| r.x_l1 == 0.0).count();
            let zero_b = rows.iter().filter(|r| r.x_bounded == 0.0).count();
            println!("units {}  zeroed by L1 {zero_l1}  zeroed by UB_L1 {zero_b}", rows.len());
        }
    }
    Ok(())
}


fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
