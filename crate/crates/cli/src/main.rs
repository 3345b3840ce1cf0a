use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lmg_cli::config::{parse_methods, ConfigFile, Format, Grid, LambdaSpec};
use lmg_cli::io::write_json;
use lmg_cli::run::{resolve_config, run_figure, run_sweep, run_trace, write_figure, write_table, Figure};
use lmg_cli::validate::run_validate;
use lmg_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "lmg", version, about = "Central-qubit purity in an isotropic LMG bath")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Purity traces at one lambda, one column per method.
    Trace(Common),
    /// Purity over a lambda x t grid in long format.
    Sweep(Common),
    /// Data behind figures 1 to 4.
    Figures(FigureArgs),
    /// Cross-method comparison report; exit status 2 if any row fails.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// A value, or start:stop:count.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// case-i, case-ii or explicit.
    #[arg(long)]
    case: Option<String>,
    /// Coupling for --case explicit.
    #[arg(long, allow_hyphen_values = true)]
    lambda_prime: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_stop: Option<f64>,
    #[arg(long)]
    t_count: Option<usize>,
    /// Comma separated: exact, closed-form, hp-limit, oracle.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Accepted for interface stability; the dynamics are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct FigureArgs {
    /// Subset of fig1,fig2,fig3,fig4; all when absent.
    #[arg(long, value_delimiter = ',')]
    fig: Option<Vec<String>>,
    /// Output directory.
    #[arg(long, default_value = "figures")]
    output: PathBuf,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

impl Common {
    fn overrides(&self, base_t: Option<Grid>) -> CliResult<ConfigFile> {
        let lambda = match &self.lambda {
            Some(s) => Some(match s.parse::<Grid>()? {
                g if g.count == 1 => LambdaSpec::Value(g.start),
                g => LambdaSpec::Grid(g),
            }),
            None => None,
        };
        let t = if self.t_start.is_some() || self.t_stop.is_some() || self.t_count.is_some() {
            let base = base_t.unwrap_or(lmg_cli::RunConfig::default().t);
            Some(Grid {
                start: self.t_start.unwrap_or(base.start),
                stop: self.t_stop.unwrap_or(base.stop),
                count: self.t_count.unwrap_or(base.count),
            })
        } else {
            None
        };
        if let Some(m) = &self.methods {
            parse_methods(m)?;
        }
        Ok(ConfigFile {
            n: self.n,
            lambda,
            case: self.case.clone(),
            lambda_prime: self.lambda_prime,
            qubit_init: None,
            t,
            methods: self.methods.clone(),
            output: self.output.clone(),
            format: self.format.clone(),
            tie_break: None,
        })
    }

    fn resolve(&self) -> CliResult<(lmg_cli::RunConfig, bool)> {
        let base_t = match &self.config {
            Some(p) => ConfigFile::load(p)?.t,
            None => None,
        };
        resolve_config(self.config.as_deref(), self.overrides(base_t)?)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Trace(args) => {
            let (cfg, _) = args.resolve()?;
            write_table(&cfg, &run_trace(&cfg)?)
        }
        Command::Sweep(args) => {
            let (cfg, _) = args.resolve()?;
            write_table(&cfg, &run_sweep(&cfg, args.jobs)?)
        }
        Command::Figures(args) => {
            let format: Format = args.format.parse()?;
            let figs = match &args.fig {
                Some(names) => names.iter().map(|s| s.parse()).collect::<CliResult<Vec<Figure>>>()?,
                None => Figure::ALL.to_vec(),
            };
            for fig in figs {
                let data = run_figure(fig, args.jobs)?;
                let path = write_figure(&data, &args.output, format)?;
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Validate(args) => {
            let (cfg, names_point) = args.resolve()?;
            let report = run_validate(names_point.then_some(&cfg), args.jobs)?;
            write_report(&report, cfg.format, cfg.output.as_deref())?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::ValidationFailed {
                    failed: report.failures(),
                    total: report.rows.len(),
                })
            }
        }
    }
}

fn write_report(
    report: &lmg_cli::ValidationReport,
    format: Format,
    path: Option<&std::path::Path>,
) -> CliResult<()> {
    let render = |w: &mut dyn std::io::Write| -> CliResult<()> {
        match format {
            Format::Csv => report.write_csv(w),
            Format::Json => write_json(
                w,
                &serde_json::to_value(report).map_err(|e| CliError::Format(e.to_string()))?,
            ),
        }
    };
    match path {
        Some(p) => {
            let mut file = std::fs::File::create(p).map_err(|e| CliError::io(p, e))?;
            render(&mut file).map_err(|e| match e {
                CliError::Format(m) => CliError::io(p, std::io::Error::other(m)),
                other => other,
            })
        }
        None => render(&mut std::io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ");
            eprintln!("{}", CliError::config(first).one_line());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.one_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
