//! Parameter tables, the key=value config format and flag > config > default resolution.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// One named parameter of a subcommand, mirrored as `--name` and as a config key.
pub struct Param {
    pub name: &'static str,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const fn p(name: &'static str, default: &'static str, help: &'static str) -> Param {
    Param { name, default: Some(default), help }
}

const fn required(name: &'static str, help: &'static str) -> Param {
    Param { name, default: None, help }
}

pub struct Subcommand {
    pub name: &'static str,
    pub about: &'static str,
    /// Parameter that may also be given as the first positional argument.
    pub positional: Option<&'static str>,
    pub params: &'static [Param],
}

pub const SUBCOMMANDS: &[Subcommand] = &[
    Subcommand {
        name: "simulate",
        about: "Integrate an ensemble of paths of one of the interacting SDE models",
        positional: None,
        params: &[
            p("model", "finite-n-ou", "bulk | soft-edge | bessel | ginibre | finite-n | finite-n-ou"),
            p("n", "8", "number of particles"),
            p("beta", "2", "inverse temperature β"),
            p("alpha", "1", "Bessel parameter α"),
            p("r", "20", "drift truncation radius (infinite-system models)"),
            p("dt", "0.001", "base time step"),
            p("horizon", "1", "final time T"),
            p("max-halvings", "40", "consecutive step halvings before a step fails"),
            p("record-stride", "100", "record every this many base steps"),
            p("paths", "10", "number of independent paths"),
            p("seed", "0", "master seed"),
        ],
    },
    Subcommand {
        name: "sample-gibbs",
        about: "Sample the finite-N log-gas by Metropolis or by the tridiagonal model",
        positional: None,
        params: &[
            p("method", "mcmc", "mcmc | tridiag"),
            p("n", "8", "number of particles"),
            p("beta", "2", "inverse temperature β"),
            p("samples", "1000", "number of output states"),
            p("thinning", "50", "sweeps between output states (mcmc)"),
            p("burn-in", "2000", "sweeps discarded before output (mcmc)"),
            p("proposal-scale", "1", "initial proposal standard deviation (mcmc)"),
            p("scaling", "bulk", "bulk | edge: coordinate scaling of tridiagonal samples"),
            p("seed", "0", "master seed"),
        ],
    },
    Subcommand {
        name: "sample-dpp",
        about: "Sample a determinantal point process by spectral decomposition",
        positional: None,
        params: &[
            p("kernel", "sine", "sine | airy | bessel | ginibre"),
            p("alpha", "1", "Bessel kernel order α"),
            p("a", "0", "left end of the interval window (1D kernels)"),
            p("b", "31.41592653589793", "right end of the interval window (1D kernels)"),
            p("radius", "2", "disk window radius (ginibre)"),
            p("nodes", "96", "quadrature nodes discretizing the window"),
            p("samples", "1000", "number of samples"),
            p("seed", "0", "master seed"),
        ],
    },
    Subcommand {
        name: "kernel-eval",
        about: "Evaluate a correlation kernel on all pairs of a mesh",
        positional: Some("kernel"),
        params: &[
            p("kernel", "sine", "sine | airy | bessel | ginibre | pearcey | tacnode"),
            p("mesh", "", "comma-separated points; x:y for ginibre. Overrides from/to/points"),
            p("from", "-2", "first mesh point"),
            p("to", "2", "last mesh point"),
            p("points", "5", "number of equally spaced mesh points"),
            p("alpha", "1", "Bessel kernel order α"),
            p("tacnode-length", "12", "resolvent truncation length L (tacnode)"),
            p("tacnode-nodes", "64", "resolvent quadrature nodes (tacnode)"),
        ],
    },
    Subcommand {
        name: "audit",
        about: "Gaussian-tail integrability audits of a one-point density",
        positional: None,
        params: &[
            p("kind", "a2", "a2 | a5"),
            p("density", "sine", "sine (1/π) | airy (√(−x)/π on x < 0) | zero"),
            p("t", "1", "time horizon T"),
            p("big-r", "1", "offset R (a2)"),
            p("grid", "0.5,1,2,5,10,20,50", "radii r (a2)"),
            p("r", "1", "radius r (a5)"),
            p("c", "1", "variance constant c (a5)"),
        ],
    },
    Subcommand {
        name: "stats",
        about: "Correlation, spacing or semicircle statistics of stored samples",
        positional: None,
        params: &[
            required("input", "samples CSV written by sample-gibbs or sample-dpp"),
            p("kind", "correlation", "correlation | spacing | semicircle"),
            p("k", "1", "correlation order, 1 or 2"),
            p("from", "0", "left end of the histogram range (correlation)"),
            p("to", "10", "right end of the histogram range (correlation)"),
            p("bins", "10", "number of bins (correlation)"),
            p("lo", "-1", "left end of the spacing window"),
            p("hi", "1", "right end of the spacing window"),
            p("reference", "wigner", "wigner | exponential (spacing)"),
            p("radius", "", "semicircle radius; default 2√N with N the largest sample size"),
        ],
    },
    Subcommand {
        name: "experiment",
        about: "Run a named acceptance experiment (ac1 … ac12)",
        positional: Some("id"),
        params: &[p("id", "ac1", "experiment identifier")],
    },
];

/// Keys accepted by every subcommand.
pub const COMMON: &[&str] = &["out"];

pub fn subcommand(name: &str) -> Option<&'static Subcommand> {
    SUBCOMMANDS.iter().find(|s| s.name == name)
}

/// Parsed config file: global keys and per-section keys, with line numbers.
#[derive(Debug, Default)]
pub struct ConfigFile {
    global: BTreeMap<String, (String, usize)>,
    sections: BTreeMap<String, BTreeMap<String, (String, usize)>>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

impl ConfigFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config { line: 0, reason: format!("{}: {e}", path.display()) })?;
        Self::parse(&text)
    }

    /// `# comment`, `[section]`, `key = value`. Keys before any section are global.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = ConfigFile::default();
        let mut section: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let ln = i + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim();
                if subcommand(name).is_none() {
                    return Err(CliError::Config { line: ln, reason: format!("unknown section [{name}]") });
                }
                section = Some(name.to_string());
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(CliError::Config { line: ln, reason: format!("expected key = value, got `{line}`") })?;
            let key = normalize(k);
            let known = match &section {
                Some(s) => COMMON.contains(&key.as_str()) || subcommand(s).is_some_and(|c| c.params.iter().any(|p| p.name == key)),
                None => COMMON.contains(&key.as_str()) || SUBCOMMANDS.iter().any(|c| c.params.iter().any(|p| p.name == key)),
            };
            if !known {
                return Err(CliError::Config { line: ln, reason: format!("unknown key `{key}`") });
            }
            let map = match &section {
                Some(s) => cfg.sections.entry(s.clone()).or_default(),
                None => &mut cfg.global,
            };
            map.insert(key, (v.trim().to_string(), ln));
        }
        Ok(cfg)
    }

    /// Output directory from the config, if set.
    pub fn out(&self, sub: &str) -> Option<&str> {
        self.lookup(sub, "out")
    }

    fn lookup(&self, sub: &str, key: &str) -> Option<&str> {
        self.sections.get(sub).and_then(|m| m.get(key)).or_else(|| self.global.get(key)).map(|(v, _)| v.as_str())
    }
}

/// Where a resolved value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Flag,
    Config,
    Default,
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone)]
pub struct Params {
    pub subcommand: &'static str,
    pub values: BTreeMap<String, (String, Source)>,
}

impl Params {
    /// Flags override config entries, which override defaults.
    pub fn resolve(sub: &'static Subcommand, flags: &BTreeMap<String, String>, config: &ConfigFile) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for param in sub.params {
            let v = if let Some(v) = flags.get(param.name) {
                Some((v.clone(), Source::Flag))
            } else if let Some(v) = config.lookup(sub.name, param.name) {
                Some((v.to_string(), Source::Config))
            } else {
                param.default.map(|d| (d.to_string(), Source::Default))
            };
            match v {
                Some(v) => {
                    values.insert(param.name.to_string(), v);
                }
                None => return Err(CliError::Invalid { field: param.name.to_string(), reason: "is required".into() }),
            }
        }
        Ok(Params { subcommand: sub.name, values })
    }

    pub fn str(&self, key: &str) -> &str {
        self.values.get(key).map(|(v, _)| v.as_str()).unwrap_or_else(|| panic!("parameter `{key}` is not declared for {}", self.subcommand))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.str(key);
        raw.parse::<T>().map_err(|e| CliError::Invalid { field: key.to_string(), reason: format!("cannot parse `{raw}`: {e}") })
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.str(key)
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<T>().map_err(|e| CliError::Invalid { field: key.to_string(), reason: format!("cannot parse `{s}`: {e}") }))
            .collect()
    }

    /// Rejects zero, negative and NaN values.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn positive<T: FromStr + PartialOrd + Default>(&self, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let v: T = self.get(key)?;
        if !(v > T::default()) {
            return Err(CliError::Invalid { field: key.to_string(), reason: format!("must be positive, got {}", self.str(key)) });
        }
        Ok(v)
    }

    /// `{key: value}` for the manifest.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.values.iter().map(|(k, (v, _))| (k.clone(), v.clone())).collect()
    }

    pub fn sources(&self) -> BTreeMap<String, Source> {
        self.values.iter().map(|(k, (_, s))| (k.clone(), *s)).collect()
    }
}
