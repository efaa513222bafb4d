use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hcolim::commands::{
    self, ClassSpec, ColimitOpts, CounterexampleOpts, LemmaOpts, NormalizeOpts, TensorOpts,
    UniversalOpts, Which,
};
use hcolim::file::ChainFile;
use hcolim::report::Report;
use hcolim::CliError;
use hilbert_colim::normalisation::RFunction;

/// Colimits of chains of finite-dimensional Hilbert spaces.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on an
/// input or evaluation error.
#[derive(Parser)]
#[command(name = "hcolim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the norm-gap inequality on random contractions.
    VerifyLemma {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 16)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limit norms, inner products and zero-class verdicts for classes.
    Colimit {
        file: PathBuf,
        /// A class `INDEX:x0,x1,...`; repeatable. Defaults to the basis of stage 0.
        #[arg(long = "class")]
        classes: Vec<ClassSpec>,
        #[arg(long, default_value_t = 512)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        window: usize,
        /// Stopping tolerance for limits without a closed form.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that tensoring with ℂ^h commutes with the colimit.
    TensorCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        h_dim: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 512)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        window: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalise a chain of bounded maps into a contraction chain.
    Normalize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RArg::UnitAtZero)]
        r: RArg,
        #[arg(long, default_value_t = 32)]
        depth: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also write the normalised chain, in chain-file format, here.
        #[arg(long)]
        chain_out: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the two counterexamples.
    Counterexample {
        #[arg(value_enum)]
        which: WhichArg,
        /// Defaults to 20 for scaling and 16 for embedding.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a cocone and check its induced map on the colimit.
    UniversalMap {
        file: PathBuf,
        #[arg(long, default_value_t = 32)]
        depth: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RArg {
    UnitAtZero,
    ContinuousClamp,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Scaling,
    Embedding,
}

fn write(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.into(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let (report, out) = match cli.command {
        Command::VerifyLemma {
            samples,
            max_dim,
            seed,
            tol,
            out,
        } => {
            let opts = LemmaOpts {
                samples,
                max_dim,
                seed,
                tol,
            };
            (commands::verify_lemma(&opts)?, out)
        }
        Command::Colimit {
            file,
            classes,
            depth,
            window,
            tol,
            out,
        } => {
            let f = ChainFile::read(&file)?;
            let opts = ColimitOpts { depth, window, tol };
            (commands::colimit(&f, &classes, &opts)?, out)
        }
        Command::TensorCheck {
            file,
            h_dim,
            samples,
            seed,
            depth,
            window,
            tol,
            out,
        } => {
            let f = ChainFile::read(&file)?;
            let opts = TensorOpts {
                h_dim,
                samples,
                seed,
                depth,
                window,
                tol,
            };
            (commands::tensor_check(&f, &opts)?, out)
        }
        Command::Normalize {
            file,
            r,
            depth,
            tol,
            chain_out,
            out,
        } => {
            let f = ChainFile::read(&file)?;
            let r = match r {
                RArg::UnitAtZero => RFunction::UnitAtZero,
                RArg::ContinuousClamp => RFunction::ContinuousClamp,
            };
            let (report, chain) = commands::normalize(&f, &NormalizeOpts { r, depth, tol })?;
            if let Some(path) = chain_out {
                write(&chain.to_json(), Some(&path))?;
            }
            (report, out)
        }
        Command::Counterexample {
            which,
            depth,
            tol,
            out,
        } => {
            let (which, default_depth) = match which {
                WhichArg::Scaling => (Which::Scaling, 20),
                WhichArg::Embedding => (Which::Embedding, 16),
            };
            let opts = CounterexampleOpts {
                which,
                depth: depth.unwrap_or(default_depth),
                tol,
            };
            (commands::counterexample(&opts)?, out)
        }
        Command::UniversalMap {
            file,
            depth,
            tol,
            samples,
            seed,
            out,
        } => {
            let f = ChainFile::read(&file)?;
            let opts = UniversalOpts {
                depth,
                tol,
                samples,
                seed,
            };
            (commands::universal_map(&f, &opts)?, out)
        }
    };
    write(&report.to_json(), out.as_deref())?;
    Ok(report)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) if report.passed() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hcolim: {e}");
            ExitCode::from(2)
        }
    }
}
