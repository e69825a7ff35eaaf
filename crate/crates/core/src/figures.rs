//! Table builders behind the CLI subcommands and the three figure recipes.

use std::path::Path;

use crate::asymptotics::{kernel_prediction, pair_corr_constants, double_sum_main_term, pair_corr_prediction, Convention, ShiftParams};
use crate::config::{default_zero_path, FigureConfig, FormConfig, RunConfig};
use crate::correlation::{
    double_zero_sum, double_zero_sum_grid, f_lambda, landau_gonek_compare, single_zero_sum, Method, PairSumOptions,
};
use crate::dirichlet::VonMangoldtTable;
use crate::error::{Error, Result};
use crate::newform::CoeffTable;
use crate::output::{Outputs, Plot, Series, Table};
use crate::sato_tate::DistributionReport;
use crate::zeros::{build_lambda_zeros, load_zeros, LambdaZeroSet, ZeroList};

pub fn coeffs_table(table: &CoeffTable, n_max: usize) -> Table {
    let mut t = Table::new(["n", "a_n"]);
    for n in 1..=n_max.min(table.max_index()) {
        t.push(vec![n as f64, table.values()[n]]);
    }
    t
}

pub fn psi_table(vm: &VonMangoldtTable, xs: &[f64], lambdas: &[f64]) -> Result<Table> {
    let mut t = Table::new(["x", "lambda", "psi", "psi1", "psi2", "remainder", "main_term", "ratio"]);
    for &lambda in lambdas {
        let params = ShiftParams::new(lambda);
        for &x in xs {
            let v = vm.psi(x, lambda)?;
            let main = crate::asymptotics::psi_main_term(x, &params);
            t.push(vec![x, lambda, v.value, v.psi1, v.psi2, v.remainder, main, v.value / main]);
        }
    }
    Ok(t)
}

pub fn predict_table(lambda: f64, window: f64, alphas: &[f64]) -> Table {
    let c = pair_corr_constants(lambda);
    let mut t = Table::new(["alpha", "prediction_paper", "prediction_derivation", "A_lambda", "theta_lambda"]);
    for &a in alphas {
        t.push(vec![
            a,
            pair_corr_prediction(a, window, lambda, Convention::Paper),
            pair_corr_prediction(a, window, lambda, Convention::Derivation),
            c.amplitude,
            c.phase,
        ]);
    }
    t
}

pub fn sato_tate_table(report: &DistributionReport) -> Table {
    let mut t = Table::new(["bin_lo", "bin_hi", "empirical_mass", "st_mass"]);
    for k in 0..report.empirical_mass.len() {
        t.push(vec![report.edges[k], report.edges[k + 1], report.empirical_mass[k], report.st_mass[k]]);
    }
    t
}

/// `S(x)` and the Landau–Gonek main term on a grid. Integer `x`, where the
/// main term is undefined, get `NaN` in the `main` column.
pub fn lg_compare_table(lzs: &LambdaZeroSet, vm: &VonMangoldtTable, xs: &[f64]) -> Result<Table> {
    let mut t = Table::new(["x", "n_x", "lhs_re", "lhs_im", "lhs_abs", "main"]);
    for &x in xs {
        match landau_gonek_compare(lzs, vm, x) {
            Ok(c) => t.push(vec![x, c.nearest as f64, c.lhs.re, c.lhs.im, c.lhs.norm(), c.main]),
            Err(Error::IntegerX(_)) => {
                let s = single_zero_sum(lzs, x);
                t.push(vec![x, x.round(), s.re, s.im, s.norm(), f64::NAN]);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(t)
}

pub fn double_sum_table(lzs: &LambdaZeroSet, xs: &[f64], method: Method, opts: &PairSumOptions) -> Result<Table> {
    let params = ShiftParams::new(lzs.lambda());
    let values = match method {
        Method::Direct => double_zero_sum_grid(lzs, xs, opts)?.values,
        _ => xs
            .iter()
            .map(|&x| double_zero_sum(lzs, x, method, opts).map(|r| r.values[0]))
            .collect::<Result<Vec<_>>>()?,
    };
    let mut t = Table::new(["x", "re", "im", "main", "ratio"]);
    for (&x, v) in xs.iter().zip(values) {
        let main = double_sum_main_term(x, lzs.window(), &params);
        t.push(vec![x, v.re, v.im, main, v.re / main]);
    }
    Ok(t)
}

/// Empirical `F_lambda` next to both predictions.
pub fn pair_correlation_table(lzs: &LambdaZeroSet, alphas: &[f64], method: Method, opts: &PairSumOptions) -> Result<(Table, Method)> {
    let r = f_lambda(lzs, alphas, method, opts)?;
    let mut t = Table::new(["alpha", "f_empirical", "pred_paper", "pred_derivation"]);
    for (&a, v) in alphas.iter().zip(&r.values) {
        t.push(vec![
            a,
            v.re,
            pair_corr_prediction(a, lzs.window(), lzs.lambda(), Convention::Paper),
            pair_corr_prediction(a, lzs.window(), lzs.lambda(), Convention::Derivation),
        ]);
    }
    Ok((t, r.method))
}

/// RMS distances of the empirical pair correlation to the two predictions
/// over an `alpha` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adjudication {
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub points: usize,
    pub rms_paper: f64,
    pub rms_derivation: f64,
    pub winner: Convention,
    /// The winner's distance is at most half the loser's.
    pub decisive: bool,
    /// RMS distance to [`kernel_prediction`], when computed.
    pub rms_kernel: Option<f64>,
}

impl Adjudication {
    pub fn render(&self) -> String {
        format!(
            "alpha_range = [{}, {}]\npoints = {}\nrms_paper = {}\nrms_derivation = {}\nwinner = {}\ndecisive = {}\n",
            self.alpha_lo,
            self.alpha_hi,
            self.points,
            self.rms_paper,
            self.rms_derivation,
            self.winner.name(),
            self.decisive
        ) + &self.rms_kernel.map(|r| format!("rms_kernel_form = {r}\n")).unwrap_or_default()
    }

    /// Adds the RMS distance of the same points to [`kernel_prediction`].
    pub fn with_kernel(mut self, table: &Table, lambda: f64, window: f64) -> Self {
        let (Some(alpha), Some(f)) = (table.column("alpha"), table.column("f_empirical")) else {
            return self;
        };
        let d: Vec<f64> = alpha
            .iter()
            .zip(&f)
            .filter(|(a, _)| **a >= self.alpha_lo - 1e-12 && **a <= self.alpha_hi + 1e-12)
            .map(|(&a, &v)| (v - kernel_prediction(a, window, lambda)).powi(2))
            .collect();
        self.rms_kernel = Some((d.iter().sum::<f64>() / d.len() as f64).sqrt());
        self
    }
}

pub fn adjudicate(table: &Table, alpha_lo: f64, alpha_hi: f64) -> Result<Adjudication> {
    let col = |name: &str| table.column(name).ok_or_else(|| Error::Config(format!("missing column {name}")));
    let (alpha, f, paper, derivation) = (col("alpha")?, col("f_empirical")?, col("pred_paper")?, col("pred_derivation")?);
    let idx: Vec<usize> = (0..alpha.len()).filter(|&k| alpha[k] >= alpha_lo - 1e-12 && alpha[k] <= alpha_hi + 1e-12).collect();
    if idx.is_empty() {
        return Err(Error::Config(format!("no alpha in [{alpha_lo}, {alpha_hi}]")));
    }
    let rms = |pred: &[f64]| (idx.iter().map(|&k| (f[k] - pred[k]).powi(2)).sum::<f64>() / idx.len() as f64).sqrt();
    let (rp, rd) = (rms(&paper), rms(&derivation));
    let (winner, best, worst) = if rp <= rd { (Convention::Paper, rp, rd) } else { (Convention::Derivation, rd, rp) };
    Ok(Adjudication {
        alpha_lo,
        alpha_hi,
        points: idx.len(),
        rms_paper: rp,
        rms_derivation: rd,
        winner,
        decisive: best <= 0.5 * worst,
        rms_kernel: None,
    })
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len()) as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    sab / (saa * sbb).sqrt()
}

/// Loads the zero list of a built-in form from `path`, or from the default
/// location under `data/zeros`.
pub fn load_form_zeros(form: &FormConfig, path: Option<&Path>, coverage: Option<f64>) -> Result<ZeroList> {
    let spec = form.spec()?;
    let path = path.map(Path::to_path_buf).unwrap_or_else(|| default_zero_path(&form.label));
    load_zeros(&path, &spec, coverage)
}

/// Zero list of a built-in form; a missing file means no coverage at all.
fn figure_zero_list(cfg: &RunConfig, fig: &FigureConfig, label: &str, needed: f64) -> Result<ZeroList> {
    let form = FormConfig::named(label)?;
    let path = fig.zeros.clone().unwrap_or_else(|| default_zero_path(label));
    if !path.exists() {
        return Err(Error::InsufficientCoverage { needed, available: 0.0 });
    }
    load_form_zeros(&form, Some(&path), cfg.zeros.coverage)
}

pub const FIGURE1_LAMBDAS: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
pub const FIGURE1_TS: [f64; 4] = [500.0, 1000.0, 1500.0, 2000.0];
pub const FIGURE1_EXPONENTS: [f64; 4] = [0.2, 0.3, 0.4, 0.5];

/// Rows `lambda, T, x, lhs_re, main, ratio` of the double sum against its
/// main term, `x = T^e`.
pub fn figure1_table(zl: &ZeroList, lambdas: &[f64], ts: &[f64], exponents: &[f64], opts: &PairSumOptions) -> Result<Table> {
    let mut t = Table::new(["lambda", "T", "x", "lhs_re", "main", "ratio"]);
    for &lambda in lambdas {
        let params = ShiftParams::new(lambda);
        for &window in ts {
            let lzs = build_lambda_zeros(zl, lambda, window)?;
            let xs: Vec<f64> = exponents.iter().map(|e| window.powf(*e)).collect();
            let r = double_zero_sum_grid(&lzs, &xs, opts)?;
            for (&x, v) in xs.iter().zip(&r.values) {
                let main = double_sum_main_term(x, window, &params);
                t.push(vec![lambda, window, x, v.re, main, v.re / main]);
            }
        }
    }
    Ok(t)
}

fn grid_or<'a>(v: &'a Option<Vec<f64>>, default: &'a [f64], name: &str) -> Result<&'a [f64]> {
    let g = v.as_deref().unwrap_or(default);
    if g.is_empty() {
        return Err(Error::Config(format!("{name} grid is empty")));
    }
    Ok(g)
}

pub fn cmd_figure1(cfg: &RunConfig) -> Result<Outputs> {
    let fig = &cfg.figure1;
    let lambdas = grid_or(&fig.lambda, &FIGURE1_LAMBDAS, "figure1.lambda")?;
    let ts = grid_or(&fig.t, &FIGURE1_TS, "figure1.T")?;
    let exps = grid_or(&fig.x_exponents, &FIGURE1_EXPONENTS, "figure1.x_exponents")?;
    let needed = ts[ts.len() - 1] + lambdas[lambdas.len() - 1] / 2.0;
    let zl = figure_zero_list(cfg, fig, "11.a2", needed)?;
    let table = figure1_table(&zl, lambdas, ts, exps, &cfg.pair_options())?;
    let mut plot = Plot::new("double sum / main term, 11.a2", "lambda", "ratio");
    for &window in ts {
        for &e in exps {
            let pts = table
                .rows
                .iter()
                .filter(|r| r[1] == window && (r[2] - window.powf(e)).abs() < 1e-9 * r[2])
                .map(|r| (r[0], r[5]))
                .collect();
            plot.series.push(Series::line(format!("T={window} x=T^{e}"), pts));
        }
    }
    write_outputs(cfg, "figure1", &table, &plot, None)
}

pub const DEFAULT_ALPHA_RANGE: (f64, f64) = (0.1, 0.2);

/// Pair correlation of one form with its predictions and the adjudication.
pub fn pair_correlation_figure(
    cfg: &RunConfig,
    fig: &FigureConfig,
    label: &str,
    default_t: f64,
    name: &str,
) -> Result<(Outputs, Adjudication)> {
    let lambda = grid_or(&fig.lambda, &[1.0], &format!("{name}.lambda"))?[0];
    if !(lambda > 0.0) {
        return Err(Error::Config(format!("{name} needs lambda > 0, got {lambda}")));
    }
    let window = grid_or(&fig.t, &[default_t], &format!("{name}.T"))?[0];
    let alphas = grid_or(&fig.alpha, &cfg.grid.alpha, &format!("{name}.alpha"))?;
    let zl = figure_zero_list(cfg, fig, label, window + lambda / 2.0)?;
    let lzs = build_lambda_zeros(&zl, lambda, window)?;
    let (table, _) = pair_correlation_table(&lzs, alphas, cfg.method.f_lambda_method(), &cfg.pair_options())?;
    let verdict = adjudicate(&table, DEFAULT_ALPHA_RANGE.0, DEFAULT_ALPHA_RANGE.1)?.with_kernel(&table, lambda, window);
    let col = |c: &str| -> Vec<(f64, f64)> {
        let ys = table.column(c).expect("column");
        alphas.iter().copied().zip(ys).collect()
    };
    let plot = Plot::new(format!("F_lambda, {label}, lambda={lambda}, T={window}"), "alpha", "F")
        .with(Series::line("empirical", col("f_empirical")))
        .with(Series::line("2 alpha (1 + A cos)", col("pred_paper")))
        .with(Series::line("alpha (1 + A cos)", col("pred_derivation")));
    let out = write_outputs(cfg, name, &table, &plot, Some(&verdict))?;
    Ok((out, verdict))
}

pub fn cmd_figure2(cfg: &RunConfig) -> Result<(Outputs, Adjudication)> {
    pair_correlation_figure(cfg, &cfg.figure2, "11.a2", 2000.0, "figure2")
}

pub fn cmd_figure3(cfg: &RunConfig) -> Result<(Outputs, Adjudication)> {
    pair_correlation_figure(cfg, &cfg.figure3, "delta", 5000.0, "figure3")
}

fn write_outputs(cfg: &RunConfig, name: &str, table: &Table, plot: &Plot, verdict: Option<&Adjudication>) -> Result<Outputs> {
    let dir = &cfg.output.dir;
    let hash = cfg.hash();
    let csv = dir.join(format!("{name}.csv"));
    let svg = dir.join(format!("{name}.svg"));
    table.write_csv(&csv, &hash)?;
    plot.write_svg(&svg)?;
    let mut files = vec![csv, svg];
    if let Some(v) = verdict {
        let path = dir.join(format!("{name}_adjudication.txt"));
        crate::output::write_file(&path, format!("# config_hash={hash}\n{}", v.render()).as_bytes())?;
        files.push(path);
    }
    Ok(Outputs { files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pearson_basics() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&a, &[2.0, 4.0, 6.0, 8.0]) - 1.0).abs() < 1e-15);
        assert!((pearson(&a, &[-1.0, -2.0, -3.0, -4.0]) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn adjudication_picks_closer() {
        let mut t = Table::new(["alpha", "f_empirical", "pred_paper", "pred_derivation"]);
        for k in 0..11 {
            let a = 0.1 + 0.01 * k as f64;
            t.push(vec![a, a * 1.02, 2.0 * a, a]);
        }
        let v = adjudicate(&t, 0.1, 0.2).unwrap();
        assert_eq!(v.winner, Convention::Derivation);
        assert!(v.decisive);
        assert_eq!(v.points, 11);
    }

    #[test]
    fn predict_rows() {
        let t = predict_table(0.0, 100.0, &[0.25]);
        assert_eq!(t.rows, vec![vec![0.25, 1.0, 0.5, 1.0, 0.0]]);
    }
}
