use std::fmt;
use std::str::FromStr;

use crate::error::{check_probability, check_rate, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Sir,
    Seir,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Sir => "SIR",
            Model::Seir => "SEIR",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SIR" => Ok(Model::Sir),
            "SEIR" => Ok(Model::Seir),
            _ => Err(Error::param("model", format!("unknown model `{s}` (expected SIR|SEIR)"))),
        }
    }
}

/// Rate `eta` of I → H such that `eta / (eta + gamma) = p_H`.
pub fn hospitalization_rate(p_h: f64, gamma: f64) -> Result<f64> {
    check_rate("gamma", gamma)?;
    if !p_h.is_finite() || !(0.0..1.0).contains(&p_h) {
        return Err(Error::param("p_H", format!("must lie in [0, 1), got {p_h}")));
    }
    if p_h == 0.0 {
        return Ok(0.0);
    }
    if gamma <= 0.0 {
        return Err(Error::param("gamma", "must be > 0 when p_H > 0"));
    }
    Ok(gamma * p_h / (1.0 - p_h))
}

/// Compartment model and rates, all per day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpidemicParams {
    pub model: Model,
    /// Infection rate per infectious–susceptible edge.
    pub beta: f64,
    /// I → R rate.
    pub gamma: f64,
    /// E → I rate; ignored under SIR.
    pub kappa: f64,
    /// Probability an infectious node ends up hospitalised.
    pub p_h: f64,
    /// I → H rate, derived from `p_h` and `gamma`.
    pub eta: f64,
    pub initial_infected: usize,
}

impl EpidemicParams {
    pub fn new(
        model: Model,
        beta: f64,
        gamma: f64,
        kappa: f64,
        p_h: f64,
        initial_infected: usize,
    ) -> Result<Self> {
        check_rate("beta", beta)?;
        check_rate("gamma", gamma)?;
        check_rate("kappa", kappa)?;
        check_probability("p_H", p_h)?;
        // Without an exit from I the run would never terminate.
        if gamma <= 0.0 {
            return Err(Error::param("gamma", "must be > 0"));
        }
        if model == Model::Seir && kappa <= 0.0 {
            return Err(Error::param("kappa", "must be > 0 for SEIR"));
        }
        let eta = hospitalization_rate(p_h, gamma)?;
        Ok(Self {
            model,
            beta,
            gamma,
            kappa,
            p_h,
            eta,
            initial_infected,
        })
    }

    pub fn sir(beta: f64, gamma: f64, p_h: f64, initial_infected: usize) -> Result<Self> {
        Self::new(Model::Sir, beta, gamma, 0.0, p_h, initial_infected)
    }

    pub fn seir(beta: f64, gamma: f64, kappa: f64, p_h: f64, initial_infected: usize) -> Result<Self> {
        Self::new(Model::Seir, beta, gamma, kappa, p_h, initial_infected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hospitalization_rate_examples() {
        assert_eq!(hospitalization_rate(0.0, 0.25).unwrap(), 0.0);
        assert_eq!(hospitalization_rate(0.5, 0.25).unwrap(), 0.25);
        let eta = hospitalization_rate(0.05, 0.05).unwrap();
        assert!((eta - 0.002_631_578_947_368).abs() < 1e-15);
        assert!((eta / (eta + 0.05) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn hospitalization_rate_rejects_certain_hospitalization() {
        assert!(hospitalization_rate(1.0, 0.25).is_err());
        assert!(hospitalization_rate(-0.1, 0.25).is_err());
        assert!(hospitalization_rate(0.3, 0.0).is_err());
    }

    #[test]
    fn params_validate() {
        assert!(EpidemicParams::sir(0.6, 0.0, 0.0, 10).is_err());
        assert!(EpidemicParams::seir(0.6, 0.25, 0.0, 0.0, 10).is_err());
        assert!(EpidemicParams::sir(-0.6, 0.25, 0.0, 10).is_err());
        let p = EpidemicParams::sir(0.6, 0.25, 0.05, 10).unwrap();
        assert!((p.eta - 0.25 * 0.05 / 0.95).abs() < 1e-12);
    }

    #[test]
    fn model_names() {
        assert_eq!("seir".parse::<Model>().unwrap(), Model::Seir);
        assert_eq!(Model::Sir.to_string(), "SIR");
        assert!("SIS".parse::<Model>().is_err());
    }
}
