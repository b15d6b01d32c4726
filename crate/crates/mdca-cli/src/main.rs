use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mdca::cli_io::{self, InputError, Report};

#[derive(Parser)]
#[command(name = "mdca", version, about = "Exact checks of Lie-Rinehart, sh Lie-Rinehart and multi derivation data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the defining identities of an instance.
    Check {
        /// Instance file, or catalog:NAME.
        source: String,
        /// auto, lr, shlr, quasi or mdca.
        #[arg(long, default_value = "auto")]
        kind: String,
        /// Word-length bound (default 4, or the file's policy).
        #[arg(long = "W")]
        w: Option<usize>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build, extract and rebuild, comparing all tables.
    Roundtrip {
        source: String,
        #[arg(long = "W")]
        w: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Betti numbers of the total operator.
    Cohomology {
        source: String,
        /// Upper degrees, as a..b (default 0..W-1).
        #[arg(long)]
        window: Option<String>,
        #[arg(long = "W")]
        w: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List or emit the built-in instances.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Emit { name: String },
}

fn finish(report: Report, json: Option<PathBuf>) -> Result<i32, InputError> {
    print!("{}", report.render_human());
    if let Some(path) = json {
        std::fs::write(&path, report.render_json())
            .map_err(|e| InputError::Io { path: path.display().to_string(), message: e.to_string() })?;
    }
    Ok(report.exit_code())
}

fn run(cli: Cli) -> Result<i32, InputError> {
    match cli.command {
        Command::Check { source, kind, w, json } => {
            finish(cli_io::cmd_check(&source, cli_io::parse_kind(&kind)?, w)?, json)
        }
        Command::Roundtrip { source, w, json } => finish(cli_io::cmd_roundtrip(&source, w)?, json),
        Command::Cohomology { source, window, w, json } => {
            let window = window.as_deref().map(cli_io::parse_window).transpose()?;
            finish(cli_io::cmd_cohomology(&source, window, w)?, json)
        }
        Command::Catalog { action: CatalogAction::List } => {
            print!("{}", cli_io::cmd_catalog_list());
            Ok(0)
        }
        Command::Catalog { action: CatalogAction::Emit { name } } => {
            print!("{}", cli_io::cmd_catalog_emit(&name)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    cli_io::configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli_io::EXIT_INPUT as u8)
        }
    }
}
