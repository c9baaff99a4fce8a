//! Flat `key = value` run configuration.
//!
//! Lines are `key = value` (or `key: value`); `#` starts a comment. Later
//! assignments win, so command-line overrides are applied after the file.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::linalg::{SolverConfig, SolverMethod};
use crate::manufactured::CaseId;
use crate::nonlocal::{GuardPolicy, DEFAULT_CEILING, DEFAULT_FLOOR};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: CaseId,
    pub dim: usize,
    /// Polynomial degree.
    pub k: usize,
    /// Subdivisions per side of the domain.
    pub n: usize,
    pub delta: f64,
    pub t_end: f64,
    pub solver_tol: f64,
    pub solver_method: SolverMethod,
    pub guard_floor: f64,
    pub guard_ceiling: f64,
    pub guard_policy: GuardPolicy,
    pub out_dir: PathBuf,
    /// Snapshot times; empty means `0` and `t_end`.
    pub snapshots: Vec<f64>,
    /// Resolution ladder for `sweep-h`.
    pub ns: Vec<usize>,
    /// Step ladder for `sweep-dt`.
    pub deltas: Vec<f64>,
}

pub const KEYS: &[&str] = &[
    "case",
    "dim",
    "k",
    "n",
    "h",
    "delta",
    "t_end",
    "solver_tol",
    "solver_method",
    "guard_floor",
    "guard_ceiling",
    "guard_policy",
    "out_dir",
    "snapshots",
    "ns",
    "deltas",
];

impl RunConfig {
    /// Reference settings of each case.
    pub fn for_case(case: CaseId) -> Self {
        let base = RunConfig {
            case,
            dim: 1,
            k: 2,
            n: 100,
            delta: 1e-3,
            t_end: 10.0,
            solver_tol: SolverConfig::default().tolerance,
            solver_method: SolverMethod::ConjugateGradient,
            guard_floor: DEFAULT_FLOOR,
            guard_ceiling: DEFAULT_CEILING,
            guard_policy: GuardPolicy::Warn,
            out_dir: PathBuf::from("out"),
            snapshots: Vec::new(),
            ns: vec![8, 16, 32, 64],
            deltas: vec![0.1, 0.05, 0.025, 0.0125],
        };
        match case {
            CaseId::Example1 => base,
            // A ceiling of 1e3 on a(U) makes the regime exit at the
            // extinction time visible in the guard log.
            CaseId::Example2 => RunConfig {
                t_end: 2.0,
                guard_ceiling: 1e3,
                ..base
            },
            CaseId::Example3 => RunConfig {
                dim: 2,
                k: 3,
                n: 16,
                delta: 1e-2,
                t_end: 1.0,
                ns: vec![2, 4, 8, 16],
                deltas: vec![0.2, 0.1, 0.05, 0.025],
                ..base
            },
        }
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.solver_tol,
            max_iterations: None,
            method: self.solver_method,
        }
    }

    pub fn snapshot_times(&self) -> Vec<f64> {
        if self.snapshots.is_empty() {
            vec![0.0, self.t_end]
        } else {
            self.snapshots.clone()
        }
    }

    /// Grid spacing `1 / n` along each axis.
    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "case" => {
                let case: CaseId = value.parse()?;
                if case != self.case {
                    // switching case resets every case-dependent default
                    let out_dir = std::mem::take(&mut self.out_dir);
                    *self = RunConfig {
                        out_dir,
                        ..RunConfig::for_case(case)
                    };
                }
            }
            "dim" => self.dim = parse_num(key, value)?,
            "k" => self.k = parse_num(key, value)?,
            "n" => self.n = parse_num(key, value)?,
            "h" => {
                let h: f64 = parse_num(key, value)?;
                if !(h > 0.0 && h <= 1.0) {
                    return Err(Error::Config(format!("h must lie in (0, 1], got {h}")));
                }
                self.n = (1.0 / h).round() as usize;
            }
            "delta" => self.delta = parse_num(key, value)?,
            "t_end" => self.t_end = parse_num(key, value)?,
            "solver_tol" => self.solver_tol = parse_num(key, value)?,
            "solver_method" => self.solver_method = value.parse()?,
            "guard_floor" => self.guard_floor = parse_num(key, value)?,
            "guard_ceiling" => self.guard_ceiling = parse_num(key, value)?,
            "guard_policy" => self.guard_policy = value.parse()?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "snapshots" => self.snapshots = parse_list(key, value)?,
            "ns" => self.ns = parse_list(key, value)?,
            "deltas" => self.deltas = parse_list(key, value)?,
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Applies assignments in order, `case` first so that it cannot reset
    /// the others. Call [`RunConfig::validate`] once all layers are applied.
    pub fn apply<'a>(&mut self, pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<()> {
        let pairs: Vec<_> = pairs.into_iter().collect();
        for (k, v) in pairs.iter().filter(|(k, _)| *k == "case") {
            self.set(k, v)?;
        }
        for (k, v) in pairs.iter().filter(|(k, _)| *k != "case") {
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let expected_dim = if self.case == CaseId::Example3 { 2 } else { 1 };
        if self.dim != expected_dim {
            return Err(Error::Config(format!(
                "{} is a {expected_dim}D case, got dim = {}",
                self.case, self.dim
            )));
        }
        if !(1..=3).contains(&self.k) {
            return Err(Error::Config(format!("k must be 1, 2 or 3, got {}", self.k)));
        }
        if self.n == 0 || self.ns.contains(&0) {
            return Err(Error::Config("resolutions must be positive".into()));
        }
        for (name, v) in [
            ("delta", self.delta),
            ("t_end", self.t_end),
            ("solver_tol", self.solver_tol),
            ("guard_floor", self.guard_floor),
            ("guard_ceiling", self.guard_ceiling),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.deltas.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::Config("deltas must be positive".into()));
        }
        if self.guard_ceiling <= self.guard_floor {
            return Err(Error::Config("guard_ceiling must exceed guard_floor".into()));
        }
        if self.snapshots.iter().any(|&t| !(0.0..=self.t_end).contains(&t)) {
            return Err(Error::Config("snapshot times must lie in [0, t_end]".into()));
        }
        if self.solver_method == SolverMethod::DirectBanded && self.dim != 1 {
            return Err(Error::Config("direct-banded solves need a 1D node ordering".into()));
        }
        Ok(())
    }

    /// Reads a config file on top of the defaults of the case it names.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let pairs = parse_pairs(text)?;
        let mut config = RunConfig::for_case(CaseId::Example1);
        config.apply(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))?;
        config.validate()?;
        Ok(config)
    }

    /// The config as `key = value` lines, in the order of [`KEYS`].
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        let method = match self.solver_method {
            SolverMethod::ConjugateGradient => "cg",
            SolverMethod::DirectBanded => "banded",
        };
        let mut out = String::new();
        out += &format!("case = {}\n", self.case);
        out += &format!("dim = {}\n", self.dim);
        out += &format!("k = {}\n", self.k);
        out += &format!("n = {}\n", self.n);
        out += &format!("delta = {}\n", self.delta);
        out += &format!("t_end = {}\n", self.t_end);
        out += &format!("solver_tol = {:e}\n", self.solver_tol);
        out += &format!("solver_method = {method}\n");
        out += &format!("guard_floor = {:e}\n", self.guard_floor);
        out += &format!("guard_ceiling = {:e}\n", self.guard_ceiling);
        out += &format!("guard_policy = {}\n", self.guard_policy);
        out += &format!("out_dir = {}\n", self.out_dir.display());
        out += &format!("snapshots = {}\n", list(&self.snapshots));
        out += &format!(
            "ns = {}\n",
            self.ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
        );
        out += &format!("deltas = {}\n", list(&self.deltas));
        out
    }
}

/// Splits config text into `(key, value)` pairs.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=').or_else(|| line.split_once(':')) else {
            return Err(Error::Config(format!("line {}: expected `key = value`", lineno + 1)));
        };
        let key = k.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("line {}: unknown key `{key}`", lineno + 1)));
        }
        pairs.push((key.to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_file_text() {
        let cfg = RunConfig::from_text(
            "# example 3 run\ncase = example3\nk = 2\nh = 0.0625\ndelta: 0.02\nsnapshots = 0, 0.5\n",
        )
        .unwrap();
        assert_eq!(cfg.case, CaseId::Example3);
        assert_eq!(cfg.dim, 2);
        assert_eq!(cfg.k, 2);
        assert_eq!(cfg.n, 16);
        assert_eq!(cfg.delta, 0.02);
        assert_eq!(cfg.snapshots, vec![0.0, 0.5]);
    }

    #[test]
    fn case_key_is_applied_first() {
        let mut cfg = RunConfig::for_case(CaseId::Example1);
        cfg.apply([("k", "3"), ("case", "example2")]).unwrap();
        cfg.validate().unwrap();
        assert_eq!((cfg.case, cfg.k, cfg.t_end), (CaseId::Example2, 3, 2.0));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_text("k = 4").is_err());
        assert!(RunConfig::from_text("delta = -1").is_err());
        assert!(RunConfig::from_text("bogus = 1").is_err());
        assert!(RunConfig::from_text("just text").is_err());
        assert!(RunConfig::from_text("case = example3\ndim = 1").is_err());
        assert!(RunConfig::from_text("case = example3\nsolver_method = banded").is_err());
        assert!(RunConfig::from_text("guard_policy = maybe").is_err());
        assert!(RunConfig::from_text("snapshots = 11").is_err());
    }

    #[test]
    fn text_round_trip() {
        for id in CaseId::ALL {
            let cfg = RunConfig::for_case(id);
            cfg.validate().unwrap();
            assert_eq!(RunConfig::from_text(&cfg.to_text()).unwrap(), cfg);
        }
    }
}
