use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::preset::DiseasePreset;
use crate::epidemic::Model;
use crate::error::{check_probability, check_rate, Error, Result};
use crate::interventions::Strategy;
use crate::netgen::NetworkKind;

/// A sweep: the Cartesian product of every grid list, each cell run on
/// `networks_per_cell` networks with `replicas_per_network` epidemics each.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub n: Vec<usize>,
    pub i0: Vec<usize>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub kappa: Vec<f64>,
    pub r0: Vec<f64>,
    pub k: Vec<f64>,
    pub p_h: Vec<f64>,
    pub daily_tests: Vec<usize>,
    pub strategy: Vec<Strategy>,
    pub network_kind: Vec<NetworkKind>,
    pub model: Vec<Model>,
    pub mixed: Vec<bool>,
    pub networks_per_cell: usize,
    pub replicas_per_network: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    pub p_c: f64,
    pub p_q: f64,
    pub emit_trajectories: bool,
    /// Worker threads; 0 uses every core.
    pub parallel: usize,
    /// Infected nodes (in order) whose secondary counts feed the dispersion estimate.
    pub first_m: usize,
}

impl Default for ExperimentSpec {
    /// Full scale: N = 100 000, 15 networks with 30 replicas each.
    fn default() -> Self {
        Self {
            n: vec![100_000],
            i0: vec![10],
            beta: vec![0.6],
            gamma: vec![0.05],
            kappa: vec![0.2],
            r0: vec![2.5],
            k: vec![0.1],
            p_h: vec![0.05],
            daily_tests: vec![100],
            strategy: Strategy::ALL.to_vec(),
            network_kind: vec![NetworkKind::Superspreading],
            model: vec![Model::Sir],
            mixed: vec![false],
            networks_per_cell: 15,
            replicas_per_network: 30,
            base_seed: 1,
            output_dir: PathBuf::from("out"),
            p_c: 1.0,
            p_q: 1.0,
            emit_trajectories: false,
            parallel: 0,
            first_m: 100,
        }
    }
}

fn join<T: Display>(values: &[T]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<Vec<T>>
where
    T::Err: Display,
{
    let values = raw
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>().map_err(|e| Error::Config {
                line,
                reason: format!("{key}: cannot parse `{s}`: {e}"),
            })
        })
        .collect::<Result<Vec<T>>>()?;
    if values.is_empty() {
        return Err(Error::Config {
            line,
            reason: format!("{key}: empty list"),
        });
    }
    Ok(values)
}

fn parse_one<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T>
where
    T::Err: Display,
{
    raw.trim().parse::<T>().map_err(|e| Error::Config {
        line,
        reason: format!("{key}: cannot parse `{}`: {e}", raw.trim()),
    })
}

impl ExperimentSpec {
    /// Desk scale: N = 10 000, 5 networks with 6 replicas each.
    pub fn desk() -> Self {
        Self {
            n: vec![10_000],
            networks_per_cell: 5,
            replicas_per_network: 6,
            ..Self::default()
        }
    }

    pub fn total_cells(&self) -> usize {
        [
            self.n.len(),
            self.i0.len(),
            self.beta.len(),
            self.gamma.len(),
            self.kappa.len(),
            self.r0.len(),
            self.k.len(),
            self.p_h.len(),
            self.daily_tests.len(),
            self.strategy.len(),
            self.network_kind.len(),
            self.model.len(),
            self.mixed.len(),
        ]
        .iter()
        .product()
    }

    /// Overrides the epidemic parameters with a disease preset.
    pub fn apply_preset(&mut self, preset: &DiseasePreset) {
        self.model = vec![preset.model];
        self.r0 = vec![preset.r0];
        self.beta = vec![preset.beta];
        self.gamma = vec![preset.gamma];
        self.kappa = vec![preset.kappa];
        self.p_h = vec![preset.p_h];
        self.k = vec![preset.k];
    }

    /// Applies `key=value` lines on top of `self`. Blank lines and `#`
    /// comments are ignored.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
                line,
                reason: format!("expected key=value, got `{content}`"),
            })?;
            self.set(line, key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        match key {
            "N" => self.n = parse_list(line, key, value)?,
            "I0" => self.i0 = parse_list(line, key, value)?,
            "beta" => self.beta = parse_list(line, key, value)?,
            "gamma" => self.gamma = parse_list(line, key, value)?,
            "kappa" => self.kappa = parse_list(line, key, value)?,
            "R0" => self.r0 = parse_list(line, key, value)?,
            "k" => self.k = parse_list(line, key, value)?,
            "p_H" => self.p_h = parse_list(line, key, value)?,
            "daily_tests" => self.daily_tests = parse_list(line, key, value)?,
            "strategy" => self.strategy = parse_list(line, key, value)?,
            "network_kind" => self.network_kind = parse_list(line, key, value)?,
            "model" => self.model = parse_list(line, key, value)?,
            "mixed" => self.mixed = parse_list(line, key, value)?,
            "networks_per_cell" => self.networks_per_cell = parse_one(line, key, value)?,
            "replicas_per_network" => self.replicas_per_network = parse_one(line, key, value)?,
            "base_seed" => self.base_seed = parse_one(line, key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "P_c" => self.p_c = parse_one(line, key, value)?,
            "P_q" => self.p_q = parse_one(line, key, value)?,
            "emit_trajectories" => self.emit_trajectories = parse_one(line, key, value)?,
            "parallel" => self.parallel = parse_one(line, key, value)?,
            "first_m" => self.first_m = parse_one(line, key, value)?,
            _ => {
                return Err(Error::Config {
                    line,
                    reason: format!("unknown key `{key}`"),
                })
            }
        }
        Ok(())
    }

    /// Defaults overridden by the config file at `path`.
    pub fn load(path: &Path, base: ExperimentSpec) -> Result<Self> {
        let mut spec = base;
        spec.apply_config(&fs::read_to_string(path)?)?;
        Ok(spec)
    }

    /// The effective spec as config text; parsing it back reproduces `self`.
    pub fn dump(&self) -> String {
        let lines = [
            ("N", join(&self.n)),
            ("I0", join(&self.i0)),
            ("beta", join(&self.beta)),
            ("gamma", join(&self.gamma)),
            ("kappa", join(&self.kappa)),
            ("R0", join(&self.r0)),
            ("k", join(&self.k)),
            ("p_H", join(&self.p_h)),
            ("daily_tests", join(&self.daily_tests)),
            ("strategy", join(&self.strategy)),
            ("network_kind", join(&self.network_kind)),
            ("model", join(&self.model)),
            ("mixed", join(&self.mixed)),
            ("networks_per_cell", self.networks_per_cell.to_string()),
            ("replicas_per_network", self.replicas_per_network.to_string()),
            ("base_seed", self.base_seed.to_string()),
            ("output_dir", self.output_dir.display().to_string()),
            ("P_c", self.p_c.to_string()),
            ("P_q", self.p_q.to_string()),
            ("emit_trajectories", self.emit_trajectories.to_string()),
            ("parallel", self.parallel.to_string()),
            ("first_m", self.first_m.to_string()),
        ];
        lines.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// Domain checks on every grid value.
    pub fn validate(&self) -> Result<()> {
        let lists_nonempty = self.total_cells() > 0;
        if !lists_nonempty {
            return Err(Error::param("grid", "every grid list needs at least one value"));
        }
        for &n in &self.n {
            if n < 2 {
                return Err(Error::param("N", format!("must be >= 2, got {n}")));
            }
        }
        for (name, values) in [
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("kappa", &self.kappa),
            ("R0", &self.r0),
            ("k", &self.k),
        ] {
            for &v in values {
                check_rate(name, v)?;
            }
        }
        for &v in &self.p_h {
            check_probability("p_H", v)?;
            if v >= 1.0 {
                return Err(Error::param("p_H", "must be < 1"));
            }
        }
        check_probability("P_c", self.p_c)?;
        check_probability("P_q", self.p_q)?;
        if self.networks_per_cell == 0 || self.replicas_per_network == 0 {
            return Err(Error::param("networks_per_cell", "networks and replicas must be >= 1"));
        }
        if self.first_m == 0 {
            return Err(Error::param("first_m", "must be >= 1"));
        }
        Ok(())
    }
}
