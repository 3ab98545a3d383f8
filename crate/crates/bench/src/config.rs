//! `key = value` run configuration for `compare`.

use std::path::{Path, PathBuf};
use std::time::Duration;

use hcluster::cost::CostFunction;
use hcluster::cut::OracleKind;
use hcluster::exact::DEFAULT_OPT_CAP;
use hcluster::generate::{FamilyTemplate, GeneratorSpec};
use hcluster::spreading::DEFAULT_LP_CAP;

use crate::error::{BenchError, Result};

/// Default size cap for the level LP; it grows as n^3 rows per round.
pub const DEFAULT_SDP_CAP: usize = 12;
pub const DEFAULT_TIMEOUT_S: f64 = 60.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub families: Vec<(String, FamilyTemplate)>,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Oracle behind the `rsc-spectral` rows.
    pub oracle: OracleKind,
    pub f: CostFunction,
    pub opt_cap: usize,
    pub exact_cap: usize,
    pub lp_cap: usize,
    pub sdp_cap: usize,
    pub timeout: Duration,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            families: Vec::new(),
            sizes: Vec::new(),
            seeds: vec![0],
            oracle: OracleKind::SpectralSweep,
            f: CostFunction::Identity,
            opt_cap: DEFAULT_OPT_CAP,
            exact_cap: DEFAULT_OPT_CAP,
            lp_cap: DEFAULT_LP_CAP,
            sdp_cap: DEFAULT_SDP_CAP,
            timeout: Duration::from_secs_f64(DEFAULT_TIMEOUT_S),
            csv: None,
            json: None,
        }
    }
}

const KEYS: &[&str] = &[
    "families", "sizes", "seeds", "oracle", "f", "opt_cap", "exact_cap", "lp_cap", "sdp_cap", "timeout_s", "csv",
    "json",
];

/// One generated graph to run.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub id: String,
    pub spec: GeneratorSpec,
}

impl RunConfig {
    /// Parse config text. Relative output paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| BenchError::Config { line, msg };
            let (key, value) = content.split_once('=').ok_or_else(|| err(format!("expected key = value, got {content:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let key = *KEYS.iter().find(|&&k| k == key).ok_or_else(|| err(format!("unknown key {key:?}")))?;
            if seen.contains(&key) {
                return Err(err(format!("duplicate key {key:?}")));
            }
            seen.push(key);
            let int = |v: &str| v.parse::<usize>().map_err(|_| err(format!("{key}: {v:?} is not a non-negative integer")));
            match key {
                "families" => {
                    cfg.families = value
                        .split(';')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<FamilyTemplate>().map(|t| (s.to_string(), t)).map_err(|e| err(e.to_string())))
                        .collect::<Result<_>>()?;
                }
                "sizes" => cfg.sizes = list(value, |v| int(v))?,
                "seeds" => cfg.seeds = seeds(value).map_err(err)?,
                "oracle" => cfg.oracle = value.parse().map_err(|e: hcluster::HcError| err(e.to_string()))?,
                "f" => cfg.f = value.parse().map_err(|e: hcluster::HcError| err(e.to_string()))?,
                "opt_cap" => cfg.opt_cap = int(value)?,
                "exact_cap" => cfg.exact_cap = int(value)?,
                "lp_cap" => cfg.lp_cap = int(value)?,
                "sdp_cap" => cfg.sdp_cap = int(value)?,
                "timeout_s" => {
                    let s: f64 = value.parse().map_err(|_| err(format!("timeout_s: {value:?} is not a number")))?;
                    if !(s > 0.0 && s.is_finite()) {
                        return Err(err("timeout_s must be positive".into()));
                    }
                    cfg.timeout = Duration::from_secs_f64(s);
                }
                "csv" => cfg.csv = Some(base.join(value)),
                "json" => cfg.json = Some(base.join(value)),
                _ => unreachable!(),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = crate::error::read_file(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        RunConfig::parse(&text, base)
    }

    /// Expand families x sizes x seeds, in that nesting order.
    pub fn instances(&self) -> Result<Vec<InstanceSpec>> {
        if self.families.is_empty() {
            return Err(BenchError::NothingToRun("empty family list".into()));
        }
        if self.seeds.is_empty() {
            return Err(BenchError::NothingToRun("empty seed list".into()));
        }
        let mut out = Vec::new();
        for (text, t) in &self.families {
            let sizes: Vec<Option<usize>> = if t.needs_size() {
                if self.sizes.is_empty() {
                    return Err(BenchError::NothingToRun(format!("{text} needs sizes")));
                }
                self.sizes.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            for size in sizes {
                for &seed in &self.seeds {
                    let spec = t.instantiate(size, seed)?;
                    out.push(InstanceSpec { id: format!("i{:04}", out.len()), spec });
                }
            }
        }
        Ok(out)
    }
}

fn list<T>(value: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(item).collect()
}

/// `a..b` (half open) or a comma list.
fn seeds(value: &str) -> std::result::Result<Vec<u64>, String> {
    if let Some((a, b)) = value.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| format!("bad seed range {value:?}"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad seed range {value:?}"))?;
        return Ok((a..b).collect());
    }
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("seed {s:?} is not an integer")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let text = "# demo\nfamilies = path; planted_partition:k=2,s=3,p_in=1,p_out=0\nsizes = 3, 4\nseeds = 0..3\n\
                    oracle = spectral_plus_local\nf = square\nopt_cap = 8\nexact_cap = 9\nlp_cap = 10\nsdp_cap = 5\n\
                    timeout_s = 2.5\ncsv = out.csv # trailing\njson = out.json\n";
        let c = RunConfig::parse(text, Path::new("/tmp/x")).unwrap();
        assert_eq!(c.families.len(), 2);
        assert_eq!(c.sizes, vec![3, 4]);
        assert_eq!(c.seeds, vec![0, 1, 2]);
        assert_eq!(c.oracle, OracleKind::SpectralPlusLocal);
        assert_eq!(c.f, CostFunction::Square);
        assert_eq!((c.opt_cap, c.exact_cap, c.lp_cap, c.sdp_cap), (8, 9, 10, 5));
        assert_eq!(c.csv.as_deref(), Some(Path::new("/tmp/x/out.csv")));
        // path x 2 sizes x 3 seeds + planted x 3 seeds
        let inst = c.instances().unwrap();
        assert_eq!(inst.len(), 9);
        assert_eq!(inst[8].id, "i0008");
    }

    #[test]
    fn rejects_typos_and_duplicates() {
        for bad in ["familes = path", "seeds = 1\nseeds = 2", "opt_cap = -1", "no equals", "timeout_s = 0", "f = cube"] {
            assert!(matches!(RunConfig::parse(bad, Path::new(".")), Err(BenchError::Config { .. })), "{bad}");
        }
    }

    #[test]
    fn empty_families_is_nothing_to_run() {
        let c = RunConfig::parse("families = \nsizes = 4", Path::new(".")).unwrap();
        assert!(matches!(c.instances(), Err(BenchError::NothingToRun(_))));
    }
}
