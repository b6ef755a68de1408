use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wblow_cli::output::Format;
use wblow_cli::{cmd_bounds, cmd_family, cmd_lift, cmd_search, cmd_table, cmd_verify, search_range, Data, EXIT_USAGE};

/// Minimal models as weighted blow-ups of weighted hypersurfaces.
#[derive(Parser)]
#[command(name = "wblow", version)]
struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Md, global = true)]
    format: Format,
    /// Worker threads; all cores by default.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory with replacement tables.json and/or families.json.
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute reference tables and compare cell by cell.
    Verify {
        /// Table ids (A, Ap, C, C+, B, X, D); all when omitted.
        tables: Vec<String>,
        /// Restrict to the row with this number.
        #[arg(long)]
        row: Option<String>,
    },
    /// Run the construction over a range of degrees and weights.
    Search {
        /// Overrides such as alpha=1..1, d=10..18, weight_max=60.
        #[arg(long)]
        range: Vec<String>,
        /// JSON file overriding the default search range.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Evaluate a listed family over a span of r.
    Family {
        /// 6r, 3r+3k or 4r+2k.
        kind: String,
        /// a,b,c for 6r and a,b,k otherwise.
        params: String,
        /// R or LO..HI.
        span: String,
    },
    /// Pad a 3-fold to amplitude one and report the lifted model.
    Lift {
        /// Comma-separated weights of the 3-fold.
        weights: String,
        degree: u64,
    },
    /// Volume lower bounds for canonical dimension n-1 and n-2.
    Bounds { n: u64, p_g: u64 },
    /// List the bundled tables, or print one.
    Table { id: Option<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 || rayon::ThreadPoolBuilder::new().num_threads(j).build_global().is_err() {
            eprintln!("error: invalid --jobs {j}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    let run = || -> anyhow::Result<wblow_cli::Outcome> {
        let data = || Data::load(cli.data.as_deref());
        match &cli.command {
            Command::Verify { tables, row } => cmd_verify(&data()?, tables, row.as_deref(), cli.format),
            Command::Search { range, config } => cmd_search(&search_range(config.as_deref(), range)?, cli.jobs, cli.format),
            Command::Family { kind, params, span } => cmd_family(&data()?, kind, params, span, cli.format),
            Command::Lift { weights, degree } => cmd_lift(weights, *degree, cli.format),
            Command::Bounds { n, p_g } => cmd_bounds(*n, *p_g, cli.format),
            Command::Table { id } => cmd_table(&data()?, id.as_deref(), cli.format),
        }
    };
    match run() {
        Ok(out) => {
            print!("{}", out.stdout);
            if !out.summary.is_empty() {
                eprintln!("{}", out.summary);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
