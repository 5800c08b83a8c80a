use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use dualnorm_core::dualmodel::random_field;
use dualnorm_core::matcore::operator_norm;
use dualnorm_core::norms::family_norm;
use dualnorm_core::suite::{render_reports, resolve_dual};
use dualnorm_core::{
    run_suite, Error, ExponentP, Family, FamilyChoice, Field, FieldDistribution, ReportFormat, SuiteConfig,
    SuiteKind,
};

const EXIT_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "dualnorm", version, about = "Verify lp inequalities over truncated unitary duals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write its reports.
    Verify(VerifyArgs),
    /// Create or inspect field files.
    #[command(subcommand)]
    Field(FieldCommand),
}

#[derive(Args)]
struct VerifyArgs {
    /// norms, holder, adjoint, duality, interpolation, clarkson, two_point,
    /// moduli, type_cotype, kadec_klee or all
    suite: SuiteKind,
    /// Preset (torus:N, su2:N, s3, custom:d1,d2,..) or a dual model JSON file.
    #[arg(long)]
    dual: String,
    /// Comma-separated exponents; fractions and "inf" are accepted.
    #[arg(long = "p", value_delimiter = ',', required = true)]
    p_list: Vec<ExponentP>,
    #[arg(long, default_value = "sch")]
    family: FamilyChoice,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, env = "DUALNORM_SEED", default_value_t = 0)]
    seed: u64,
    /// Relative tolerance replacing the default 1e-10.
    #[arg(long)]
    tol: Option<f64>,
    /// Report path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: ReportFormat,
}

#[derive(Subcommand)]
enum FieldCommand {
    /// Draw a seeded random field.
    Random {
        #[arg(long)]
        dual: String,
        #[arg(long, env = "DUALNORM_SEED", default_value_t = 0)]
        seed: u64,
        /// ginibre, hermitian or psd
        #[arg(long, default_value = "ginibre")]
        dist: FieldDistribution,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print block shapes and norms of a field file.
    Show {
        file: PathBuf,
        #[arg(long)]
        dual: String,
        #[arg(long = "p", value_delimiter = ',', default_value = "1,2,inf")]
        p_list: Vec<ExponentP>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Field(cmd) => field(cmd).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

/// Returns whether every check passed.
fn verify(args: VerifyArgs) -> Result<bool, Error> {
    let config = SuiteConfig {
        suite: args.suite,
        dual: Arc::new(resolve_dual(&args.dual)?),
        p_list: args.p_list,
        family: args.family,
        trials: args.trials,
        seed: args.seed,
        tol_override: args.tol,
    };
    let reports = run_suite(&config)?;
    write_output(args.out.as_deref(), &render_reports(&reports, args.format)?)?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    eprintln!("{}: {} checks, {} failed", config.suite, reports.len(), failed);
    Ok(failed == 0)
}

fn field(cmd: FieldCommand) -> Result<(), Error> {
    match cmd {
        FieldCommand::Random { dual, seed, dist, out } => {
            let model = Arc::new(resolve_dual(&dual)?);
            let mut json = random_field(&model, seed, dist).to_json()?;
            json.push('\n');
            write_output(out.as_deref(), &json)
        }
        FieldCommand::Show { file, dual, p_list } => {
            let model = Arc::new(resolve_dual(&dual)?);
            let text = std::fs::read_to_string(&file).map_err(|source| Error::Io { path: file, source })?;
            let field = Field::from_json(&text, model)?;
            print!("{}", describe(&field, &p_list)?);
            Ok(())
        }
    }
}

fn describe(field: &Field, p_list: &[ExponentP]) -> Result<String, Error> {
    let mut s = format!("model {}\n", field.model().name());
    for (entry, block) in field.model().entries().iter().zip(field.blocks()) {
        s += &format!(
            "  {:<10} dim {:<3} hs {:.6e}  op {:.6e}\n",
            entry.label,
            entry.dim,
            block.hs_norm(),
            operator_norm(block)?
        );
    }
    for &p in p_list {
        s += &format!(
            "p={p}  sch {:.12e}  hs {:.12e}\n",
            family_norm(field, p, Family::Sch)?,
            family_norm(field, p, Family::Hs)?
        );
    }
    Ok(s)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}
