//! Remote zero lists with an on-disk cache.
//!
//! The server is addressed through a URL template containing `{label}` and
//! `{t_max}` placeholders and must answer with a zero file (header optional).
//! Cache entries are keyed by `(label, t_max)` and carry a checksum header.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, Instant};

use super::format::{parse_zero_text, render_zero_file};
use super::ZeroList;
use crate::error::{Error, Result};
use crate::newform::NewformSpec;

/// Environment variable holding the URL template.
pub const ZEROS_URL_ENV: &str = "SHIFTPAIR_ZEROS_URL";

#[derive(Debug, Clone)]
pub struct FetchConfig {
    pub url_template: Option<String>,
    pub timeout: Duration,
    pub retries: u32,
    pub lock_timeout: Duration,
}

impl Default for FetchConfig {
    fn default() -> Self {
        Self {
            url_template: std::env::var(ZEROS_URL_ENV).ok(),
            timeout: Duration::from_secs(60),
            retries: 3,
            lock_timeout: Duration::from_secs(60),
        }
    }
}

pub fn cache_path(cache_dir: &Path, label: &str, t_max: f64) -> PathBuf {
    let safe: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect();
    cache_dir.join(format!("{safe}__{t_max}.zeros"))
}

struct CacheLock {
    path: PathBuf,
}

impl CacheLock {
    fn acquire(dir: &Path, timeout: Duration) -> Result<Self> {
        let path = dir.join(".lock");
        let start = Instant::now();
        loop {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(mut f) => {
                    let _ = writeln!(f, "{}", std::process::id());
                    return Ok(Self { path });
                }
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    if start.elapsed() > timeout {
                        return Err(Error::Io(std::io::Error::new(
                            std::io::ErrorKind::TimedOut,
                            format!("cache lock {} held too long", path.display()),
                        )));
                    }
                    thread::sleep(Duration::from_millis(25));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
}

impl Drop for CacheLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

fn http_get(url: &str, cfg: &FetchConfig) -> Result<String> {
    let agent = ureq::AgentBuilder::new().timeout(cfg.timeout).build();
    let mut last = String::new();
    for attempt in 0..=cfg.retries {
        match agent.get(url).call() {
            Ok(resp) => {
                return resp.into_string().map_err(|e| Error::Network(format!("{url}: {e}")));
            }
            Err(ureq::Error::Status(404, _)) => return Err(Error::NotFound(url.to_string())),
            Err(ureq::Error::Status(code, _)) if code < 500 => {
                return Err(Error::Network(format!("{url}: HTTP {code}")));
            }
            Err(e) => {
                last = e.to_string();
                if attempt < cfg.retries {
                    thread::sleep(Duration::from_millis(200 * (attempt as u64 + 1)));
                }
            }
        }
    }
    Err(Error::Network(format!("{url}: {last}")))
}

/// Returns the zero list of `spec` up to `t_max`, from the cache when
/// present, otherwise from the configured server (and then cached).
pub fn fetch_zeros(spec: &NewformSpec, t_max: f64, cache_dir: &Path, cfg: &FetchConfig) -> Result<ZeroList> {
    fs::create_dir_all(cache_dir)?;
    let path = cache_path(cache_dir, &spec.label, t_max);
    let _lock = CacheLock::acquire(cache_dir, cfg.lock_timeout)?;
    if path.exists() {
        let text = fs::read_to_string(&path)?;
        let parsed = parse_zero_text(&text, &path)?;
        if parsed.header.is_none() {
            return Err(Error::CacheCorrupt(format!("{}: missing header", path.display())));
        }
        return ZeroList::new(spec.clone(), parsed.ordinates, t_max);
    }
    let template = cfg
        .url_template
        .as_deref()
        .ok_or_else(|| Error::Network(format!("no zero server configured (set {ZEROS_URL_ENV})")))?;
    let url = template.replace("{label}", &spec.label).replace("{t_max}", &t_max.to_string());
    let body = http_get(&url, cfg)?;
    let parsed = parse_zero_text(&body, Path::new(&url))?;
    let ordinates: Vec<f64> = parsed.ordinates.into_iter().filter(|&g| g <= t_max).collect();
    let list = ZeroList::new(spec.clone(), ordinates, t_max)?;
    let text = render_zero_file(&spec.label, spec.weight, spec.level, t_max, list.ordinates());
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, &path)?;
    Ok(list)
}
