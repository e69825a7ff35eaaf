//! Run configuration, read from a TOML file and overridden by CLI flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::correlation::{Method, PairSumOptions, DEFAULT_BIN_WIDTH, DEFAULT_PAIR_BUDGET};
use crate::error::{Error, Result};
use crate::newform::{CoeffSource, NewformSpec, WeierstrassCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormSource {
    Tau,
    Curve,
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FormConfig {
    pub label: String,
    pub source: FormSource,
    pub weight: u32,
    pub level: u64,
    /// Weierstrass coefficients `[a1, a2, a3, a4, a6]`.
    pub curve: Option<[i64; 5]>,
    pub coeff_file: Option<PathBuf>,
    pub n_max: usize,
}

impl Default for FormConfig {
    fn default() -> Self {
        Self {
            label: "11.a2".into(),
            source: FormSource::Curve,
            weight: 2,
            level: 11,
            curve: Some([0, -1, 1, -10, -20]),
            coeff_file: None,
            n_max: 100_000,
        }
    }
}

impl FormConfig {
    pub fn delta() -> Self {
        Self { label: "delta".into(), source: FormSource::Tau, weight: 12, level: 1, curve: None, ..Self::default() }
    }

    /// The built-in forms by label: `11.a2` and `delta`.
    pub fn named(label: &str) -> Result<Self> {
        match label {
            "11.a2" => Ok(Self::default()),
            "delta" => Ok(Self::delta()),
            other => Err(Error::Config(format!("unknown form label {other:?}; use 11.a2 or delta"))),
        }
    }

    pub fn spec(&self) -> Result<NewformSpec> {
        let source = match self.source {
            FormSource::Tau => CoeffSource::RamanujanTau,
            FormSource::Curve => {
                let a = self.curve.ok_or_else(|| Error::Config("form.curve is required for source = curve".into()))?;
                CoeffSource::EllipticCurve(WeierstrassCurve::new(a))
            }
            FormSource::File => CoeffSource::CoeffFile(
                self.coeff_file
                    .clone()
                    .ok_or_else(|| Error::Config("form.coeff_file is required for source = file".into()))?,
            ),
        };
        NewformSpec::new(self.weight, self.level, source, self.label.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZeroConfig {
    /// Zero file; defaults to `data/zeros/<label>.zeros`.
    pub path: Option<PathBuf>,
    pub cache_dir: PathBuf,
    /// URL template with `{label}` and `{t_max}` placeholders.
    pub url: Option<String>,
    pub timeout_s: f64,
    pub retries: u32,
    /// Height to which the zero list is complete, when the file has no header.
    pub coverage: Option<f64>,
}

impl Default for ZeroConfig {
    fn default() -> Self {
        Self { path: None, cache_dir: "data/cache".into(), url: None, timeout_s: 30.0, retries: 3, coverage: None }
    }
}

impl ZeroConfig {
    pub fn path_for(&self, label: &str) -> PathBuf {
        self.path.clone().unwrap_or_else(|| default_zero_path(label))
    }
}

pub fn default_zero_path(label: &str) -> PathBuf {
    PathBuf::from("data/zeros").join(format!("{label}.zeros"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub lambda: Vec<f64>,
    #[serde(rename = "T")]
    pub t: Vec<f64>,
    pub alpha: Vec<f64>,
    pub x: Vec<f64>,
}

/// `start, start + step, ...` up to `stop`, computed by index.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    // 12 decimals strips the representation noise of `k * step`
    (0..=n).map(|k| format!("{:.12}", start + k as f64 * step).parse().expect("finite grid point")).collect()
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            lambda: vec![1.0],
            t: vec![2000.0],
            alpha: linear_grid(0.01, 0.5, 0.01),
            x: linear_grid(1.5, 10.5, 0.01),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoubleSumMethod {
    Direct,
    IntegralOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FLambdaMethod {
    Direct,
    Binned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MethodConfig {
    pub double_sum: DoubleSumMethod,
    pub f_lambda: FLambdaMethod,
    pub bin_width: f64,
    pub pair_budget: f64,
    pub include_diagonal: bool,
}

impl Default for MethodConfig {
    fn default() -> Self {
        Self {
            double_sum: DoubleSumMethod::Direct,
            f_lambda: FLambdaMethod::Direct,
            bin_width: DEFAULT_BIN_WIDTH,
            pair_budget: DEFAULT_PAIR_BUDGET as f64,
            include_diagonal: true,
        }
    }
}

impl MethodConfig {
    pub fn double_sum_method(&self) -> Method {
        match self.double_sum {
            DoubleSumMethod::Direct => Method::Direct,
            DoubleSumMethod::IntegralOracle => Method::IntegralOracle,
        }
    }

    pub fn f_lambda_method(&self) -> Method {
        match self.f_lambda {
            FLambdaMethod::Direct => Method::Direct,
            FLambdaMethod::Binned => Method::Binned { bin_width: self.bin_width },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Worker threads; 0 uses every core.
    pub threads: usize,
    pub seed: u64,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: "out".into(), threads: 0, seed: 1 }
    }
}

/// Per-figure overrides. Unset fields fall back to the figure's own defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FigureConfig {
    pub zeros: Option<PathBuf>,
    pub lambda: Option<Vec<f64>>,
    #[serde(rename = "T")]
    pub t: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    /// Exponents `e` of the evaluation points `x = T^e`.
    pub x_exponents: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub form: FormConfig,
    pub zeros: ZeroConfig,
    pub grid: GridConfig,
    pub method: MethodConfig,
    pub output: OutputConfig,
    pub figure1: FigureConfig,
    pub figure2: FigureConfig,
    pub figure3: FigureConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// First 16 hex digits of the SHA-256 of the canonical TOML form, with
    /// the output directory and thread count reset since neither changes
    /// results.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output.dir = OutputConfig::default().dir;
        canonical.output.threads = 0;
        let digest = Sha256::digest(canonical.to_toml().as_bytes());
        hex::encode(digest)[..16].to_string()
    }

    pub fn pair_options(&self) -> PairSumOptions {
        PairSumOptions {
            pair_budget: self.method.pair_budget as u128,
            threads: self.output.threads,
            include_diagonal: self.method.include_diagonal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ascending("grid.lambda", &self.grid.lambda, |l| l >= 0.0)?;
        ascending("grid.T", &self.grid.t, |t| t > 0.0)?;
        ascending("grid.alpha", &self.grid.alpha, |a| a > 0.0 && a <= 0.5)?;
        ascending("grid.x", &self.grid.x, |x| x > 1.0)?;
        for (name, fig) in [("figure1", &self.figure1), ("figure2", &self.figure2), ("figure3", &self.figure3)] {
            if let Some(v) = &fig.lambda {
                ascending(&format!("{name}.lambda"), v, |l| l >= 0.0)?;
            }
            if let Some(v) = &fig.t {
                ascending(&format!("{name}.T"), v, |t| t > 0.0)?;
            }
            if let Some(v) = &fig.alpha {
                ascending(&format!("{name}.alpha"), v, |a| a > 0.0 && a <= 0.5)?;
            }
            if let Some(v) = &fig.x_exponents {
                ascending(&format!("{name}.x_exponents"), v, |e| e > 0.0)?;
            }
        }
        if !(self.method.bin_width > 0.0) {
            return Err(Error::Config("method.bin_width must be positive".into()));
        }
        if !(self.method.pair_budget >= 1.0) {
            return Err(Error::Config("method.pair_budget must be at least 1".into()));
        }
        if self.form.n_max < 2 {
            return Err(Error::Config("form.n_max must be at least 2".into()));
        }
        if !(self.zeros.timeout_s > 0.0) {
            return Err(Error::Config("zeros.timeout_s must be positive".into()));
        }
        Ok(())
    }
}

/// Checks that `values` is nonempty, strictly ascending and admissible.
pub fn ascending(name: &str, values: &[f64], ok: impl Fn(f64) -> bool) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Config(format!("{name} is empty")));
    }
    if let Some(&v) = values.iter().find(|&&v| !v.is_finite() || !ok(v)) {
        return Err(Error::Config(format!("{name} contains inadmissible value {v}")));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(format!("{name} is not strictly ascending")));
    }
    Ok(())
}
