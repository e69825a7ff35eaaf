use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use shiftpair::config::{linear_grid, FormConfig, RunConfig};
use shiftpair::correlation::Method;
use shiftpair::dirichlet::build_von_mangoldt;
use shiftpair::figures::{
    adjudicate, cmd_figure1, cmd_figure2, cmd_figure3, coeffs_table, double_sum_table, lg_compare_table,
    load_form_zeros, pair_correlation_table, predict_table, psi_table, sato_tate_table, Adjudication,
    DEFAULT_ALPHA_RANGE,
};
use shiftpair::newform::build_coeff_table;
use shiftpair::output::{Plot, Series, Table};
use shiftpair::sato_tate::{distribution_report, DEFAULT_BINS};
use shiftpair::synthetic::synthetic_lambda_set;
use shiftpair::zeros::{build_lambda_zeros, fetch_zeros, FetchConfig, LambdaZeroSet, ZEROS_URL_ENV};
use shiftpair::Error;

#[derive(Parser)]
#[command(name = "shiftpair", version, about = "Zero statistics of shifted GL(2) L-functions")]
struct Cli {
    /// TOML run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for synthetic zero sets.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FormArgs {
    /// Built-in form: 11.a2 or delta. Defaults to the configured form.
    #[arg(long)]
    form: Option<String>,
}

#[derive(Args, Clone)]
struct ZeroArgs {
    /// Zero file (default data/zeros/<label>.zeros).
    #[arg(long)]
    zeros: Option<PathBuf>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "T")]
    t: Option<f64>,
    /// Use a seeded synthetic set of this many +-pairs instead of zero data.
    #[arg(long)]
    synthetic: Option<usize>,
}

#[derive(Args, Clone)]
struct PairArgs {
    #[arg(long)]
    pair_budget: Option<f64>,
    /// Drop the rho = rho' terms.
    #[arg(long)]
    no_diagonal: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum DoubleMethod {
    Direct,
    IntegralOracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum FMethod {
    Direct,
    Binned,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ConventionArg {
    Paper,
    Derivation,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized coefficients a_n. Columns: n, a_n.
    Coeffs {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Psi_{L_lambda}(x) and its main term. Columns: x, lambda, psi, psi1,
    /// psi2, remainder, main_term, ratio.
    Psi {
        #[command(flatten)]
        form: FormArgs,
        /// Evaluation points: comma list or start:stop:step.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Pair-correlation predictions. Columns: alpha, prediction_paper,
    /// prediction_derivation, A_lambda, theta_lambda.
    Predict {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        alpha_grid: Option<String>,
        #[arg(long = "T")]
        t: f64,
        #[arg(long, value_enum, default_value = "both")]
        convention: ConventionArg,
    },
    /// Histogram of theta_p against the Sato-Tate measure. Columns: bin_lo,
    /// bin_hi, empirical_mass, st_mass.
    SatoTate {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        x_cut: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
    },
    /// Zero sum S(x) against the Landau-Gonek main term. Columns: x, n_x,
    /// lhs_re, lhs_im, lhs_abs, main.
    LgCompare {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        zeros: ZeroArgs,
        #[arg(long)]
        x: Option<String>,
    },
    /// Double zero sum against its main term. Columns: x, re, im, main, ratio.
    DoubleSum {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        zeros: ZeroArgs,
        #[command(flatten)]
        pairs: PairArgs,
        #[arg(long)]
        x: Option<String>,
        #[arg(long, value_enum)]
        method: Option<DoubleMethod>,
    },
    /// F_lambda(alpha) with both predictions. Columns: alpha, f_empirical,
    /// pred_paper, pred_derivation.
    PairCorrelation {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        zeros: ZeroArgs,
        #[command(flatten)]
        pairs: PairArgs,
        #[arg(long)]
        alpha_grid: Option<String>,
        #[arg(long, value_enum)]
        method: Option<FMethod>,
        #[arg(long)]
        bin_width: Option<f64>,
    },
    /// Double sum over (lambda, T) for 11.a2. Columns: lambda, T, x, lhs_re,
    /// main, ratio.
    Figure1,
    /// F_lambda for 11.a2 with both predictions and the adjudication.
    Figure2,
    /// F_lambda for Delta at T = 5000 with both predictions.
    Figure3,
    /// Download a zero list into the cache directory.
    Fetch {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        t_max: f64,
        /// URL template with {label} and {t_max}.
        #[arg(long)]
        url: Option<String>,
    },
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Error> {
    let bad = |p: &str| Error::Config(format!("cannot parse grid {s:?} at {p:?}"));
    let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad(p));
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || b < a {
                return Err(bad(s));
            }
            linear_grid(a, b, step)
        }
        [_] => s.split(',').map(num).collect::<Result<_, _>>()?,
        _ => return Err(bad(s)),
    };
    Ok(grid)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::UnsupportedSpec(_) | Error::BadInterval(..) | Error::IntegerX(_) => 2,
        Error::PairBudgetExceeded { .. } => 4,
        _ => 3,
    }
}

struct Ctx {
    cfg: RunConfig,
}

impl Ctx {
    fn form(&mut self, args: &FormArgs) -> Result<(), Error> {
        if let Some(label) = &args.form {
            let n_max = self.cfg.form.n_max;
            self.cfg.form = FormConfig { n_max, ..FormConfig::named(label)? };
        }
        Ok(())
    }

    fn pairs(&mut self, args: &PairArgs) {
        if let Some(b) = args.pair_budget {
            self.cfg.method.pair_budget = b;
        }
        if args.no_diagonal {
            self.cfg.method.include_diagonal = false;
        }
    }

    fn lambda_set(&self, args: &ZeroArgs) -> Result<LambdaZeroSet, Error> {
        let lambda = args.lambda.unwrap_or(self.cfg.grid.lambda[0]);
        let window = args.t.unwrap_or(self.cfg.grid.t[0]);
        if let Some(n) = args.synthetic {
            return Ok(synthetic_lambda_set(n, window, lambda, self.cfg.output.seed));
        }
        let path = args.zeros.clone().or_else(|| self.cfg.zeros.path.clone());
        let zl = load_form_zeros(&self.cfg.form, path.as_deref(), self.cfg.zeros.coverage)?;
        build_lambda_zeros(&zl, lambda, window)
    }

    fn write(&self, name: &str, table: &Table, plot: Option<Plot>) -> Result<(), Error> {
        let dir = &self.cfg.output.dir;
        let path = dir.join(format!("{name}.csv"));
        table.write_csv(&path, &self.cfg.hash())?;
        println!("{}", path.display());
        if let Some(p) = plot {
            let path = dir.join(format!("{name}.svg"));
            p.write_svg(&path)?;
            println!("{}", path.display());
        }
        Ok(())
    }
}

fn points(table: &Table, x: &str, y: &str) -> Vec<(f64, f64)> {
    let xs = table.column(x).unwrap_or_default();
    let ys = table.column(y).unwrap_or_default();
    xs.into_iter().zip(ys).collect()
}

fn report_verdict(v: &Adjudication) {
    print!("{}", v.render());
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(d) = cli.out_dir {
        cfg.output.dir = d;
    }
    if let Some(t) = cli.threads {
        cfg.output.threads = t;
    }
    if let Some(s) = cli.seed {
        cfg.output.seed = s;
    }
    let mut ctx = Ctx { cfg };
    match cli.command {
        Command::Coeffs { form, n_max } => {
            ctx.form(&form)?;
            if let Some(n) = n_max {
                ctx.cfg.form.n_max = n;
            }
            ctx.cfg.validate()?;
            let table = build_coeff_table(&ctx.cfg.form.spec()?, ctx.cfg.form.n_max)?;
            table.validate()?;
            ctx.write("coeffs", &coeffs_table(&table, ctx.cfg.form.n_max), None)
        }
        Command::Psi { form, x, lambda } => {
            ctx.form(&form)?;
            let xs = match x {
                Some(s) => parse_grid(&s)?,
                None => vec![1e4, 1e5, 1e6],
            };
            if let Some(l) = lambda {
                ctx.cfg.grid.lambda = parse_grid(&l)?;
            }
            shiftpair::config::ascending("x", &xs, |v| v >= 2.0)?;
            ctx.cfg.form.n_max = ctx.cfg.form.n_max.max(xs[xs.len() - 1] as usize);
            ctx.cfg.validate()?;
            let table = build_coeff_table(&ctx.cfg.form.spec()?, ctx.cfg.form.n_max)?;
            let vm = build_von_mangoldt(&table);
            let t = psi_table(&vm, &xs, &ctx.cfg.grid.lambda)?;
            let plot = Plot::new("Psi / main term", "x", "ratio").with(Series::dots("ratio", points(&t, "x", "ratio")));
            ctx.write("psi", &t, Some(plot))
        }
        Command::Predict { lambda, alpha_grid, t, convention } => {
            if let Some(a) = alpha_grid {
                ctx.cfg.grid.alpha = parse_grid(&a)?;
            }
            ctx.cfg.grid.lambda = vec![lambda];
            ctx.cfg.grid.t = vec![t];
            ctx.cfg.validate()?;
            let table = predict_table(lambda, t, &ctx.cfg.grid.alpha);
            let mut plot = Plot::new(format!("predictions, lambda={lambda}, T={t}"), "alpha", "F");
            if convention != ConventionArg::Derivation {
                plot.series.push(Series::line("paper", points(&table, "alpha", "prediction_paper")));
            }
            if convention != ConventionArg::Paper {
                plot.series.push(Series::line("derivation", points(&table, "alpha", "prediction_derivation")));
            }
            ctx.write("predict", &table, Some(plot))
        }
        Command::SatoTate { form, x_cut, bins } => {
            ctx.form(&form)?;
            let x_cut = x_cut.unwrap_or(ctx.cfg.form.n_max as f64);
            ctx.cfg.form.n_max = ctx.cfg.form.n_max.max(x_cut as usize);
            ctx.cfg.validate()?;
            let table = build_coeff_table(&ctx.cfg.form.spec()?, ctx.cfg.form.n_max)?;
            let report = distribution_report(&table, x_cut, bins)?;
            println!(
                "primes = {}\nsup_discrepancy = {}\nsecond_moment_ratio = {}\nerror_band = {}",
                report.prime_count, report.sup_discrepancy, report.second_moment_ratio, report.error_band
            );
            let t = sato_tate_table(&report);
            let width = std::f64::consts::PI / bins as f64;
            let density = |col: &str| -> Vec<(f64, f64)> {
                let lo = t.column("bin_lo").unwrap_or_default();
                let m = t.column(col).unwrap_or_default();
                lo.iter().zip(m).map(|(a, b)| (a + width / 2.0, b / width)).collect()
            };
            let plot = Plot::new(format!("theta_p, {} p <= {x_cut}", ctx.cfg.form.label), "theta", "density")
                .with(Series::dots("empirical", density("empirical_mass")))
                .with(Series::line("Sato-Tate", density("st_mass")));
            ctx.write("sato_tate", &t, Some(plot))
        }
        Command::LgCompare { form, zeros, x } => {
            ctx.form(&form)?;
            if let Some(s) = x {
                ctx.cfg.grid.x = parse_grid(&s)?;
            }
            ctx.cfg.validate()?;
            let lzs = ctx.lambda_set(&zeros)?;
            let n_max = (ctx.cfg.grid.x[ctx.cfg.grid.x.len() - 1].ceil() as usize + 1).max(2);
            let vm = build_von_mangoldt(&build_coeff_table(&ctx.cfg.form.spec()?, n_max)?);
            let t = lg_compare_table(&lzs, &vm, &ctx.cfg.grid.x)?;
            let plot = Plot::new("|S(x)| and main term", "x", "value")
                .with(Series::line("|S(x)|", points(&t, "x", "lhs_abs")))
                .with(Series::line("main", points(&t, "x", "main")));
            ctx.write("lg_compare", &t, Some(plot))
        }
        Command::DoubleSum { form, zeros, pairs, x, method } => {
            ctx.form(&form)?;
            ctx.pairs(&pairs);
            if let Some(m) = method {
                ctx.cfg.method.double_sum = match m {
                    DoubleMethod::Direct => shiftpair::config::DoubleSumMethod::Direct,
                    DoubleMethod::IntegralOracle => shiftpair::config::DoubleSumMethod::IntegralOracle,
                };
            }
            ctx.cfg.validate()?;
            let lzs = ctx.lambda_set(&zeros)?;
            let xs = match x {
                Some(s) => parse_grid(&s)?,
                None => [0.2, 0.3, 0.4, 0.5].iter().map(|e| lzs.window().powf(*e)).collect(),
            };
            shiftpair::config::ascending("x", &xs, |v| v > 1.0)?;
            let t = double_sum_table(&lzs, &xs, ctx.cfg.method.double_sum_method(), &ctx.cfg.pair_options())?;
            let plot = Plot::new("double sum / main term", "x", "ratio").with(Series::line("ratio", points(&t, "x", "ratio")));
            ctx.write("double_sum", &t, Some(plot))
        }
        Command::PairCorrelation { form, zeros, pairs, alpha_grid, method, bin_width } => {
            ctx.form(&form)?;
            ctx.pairs(&pairs);
            if let Some(a) = alpha_grid {
                ctx.cfg.grid.alpha = parse_grid(&a)?;
            }
            if let Some(w) = bin_width {
                ctx.cfg.method.bin_width = w;
            }
            if let Some(m) = method {
                ctx.cfg.method.f_lambda = match m {
                    FMethod::Direct => shiftpair::config::FLambdaMethod::Direct,
                    FMethod::Binned => shiftpair::config::FLambdaMethod::Binned,
                };
            }
            ctx.cfg.validate()?;
            let lzs = ctx.lambda_set(&zeros)?;
            let method: Method = ctx.cfg.method.f_lambda_method();
            let (t, used) = pair_correlation_table(&lzs, &ctx.cfg.grid.alpha, method, &ctx.cfg.pair_options())?;
            println!("method = {}", used.name());
            if let Ok(v) = adjudicate(&t, DEFAULT_ALPHA_RANGE.0, DEFAULT_ALPHA_RANGE.1) {
                report_verdict(&v.with_kernel(&t, lzs.lambda(), lzs.window()));
            }
            let plot = Plot::new("F_lambda", "alpha", "F")
                .with(Series::line("empirical", points(&t, "alpha", "f_empirical")))
                .with(Series::line("paper", points(&t, "alpha", "pred_paper")))
                .with(Series::line("derivation", points(&t, "alpha", "pred_derivation")));
            ctx.write("pair_correlation", &t, Some(plot))
        }
        Command::Figure1 => {
            ctx.cfg.validate()?;
            let out = cmd_figure1(&ctx.cfg)?;
            out.files.iter().for_each(|f| println!("{}", f.display()));
            Ok(())
        }
        Command::Figure2 | Command::Figure3 => {
            ctx.cfg.validate()?;
            let (out, verdict) = if matches!(cli.command, Command::Figure2) {
                cmd_figure2(&ctx.cfg)?
            } else {
                cmd_figure3(&ctx.cfg)?
            };
            out.files.iter().for_each(|f| println!("{}", f.display()));
            report_verdict(&verdict);
            Ok(())
        }
        Command::Fetch { form, t_max, url } => {
            ctx.form(&form)?;
            ctx.cfg.validate()?;
            let fc = FetchConfig {
                url_template: url.or(ctx.cfg.zeros.url.clone()).or_else(|| std::env::var(ZEROS_URL_ENV).ok()),
                timeout: Duration::from_secs_f64(ctx.cfg.zeros.timeout_s),
                retries: ctx.cfg.zeros.retries,
                ..FetchConfig::default()
            };
            let zl = fetch_zeros(&ctx.cfg.form.spec()?, t_max, &ctx.cfg.zeros.cache_dir, &fc)?;
            println!("{} zeros up to {}", zl.len(), zl.coverage());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
