use crate::epidemic::Model;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiseasePreset {
    pub name: &'static str,
    pub model: Model,
    pub r0: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Zero for SIR presets.
    pub kappa: f64,
    pub p_h: f64,
    pub k: f64,
}

pub const PRESETS: [DiseasePreset; 5] = [
    DiseasePreset {
        name: "covid19",
        model: Model::Seir,
        r0: 2.5,
        beta: 1.0,
        gamma: 0.4,
        kappa: 0.2,
        p_h: 0.008372,
        k: 0.1,
    },
    DiseasePreset {
        name: "sars",
        model: Model::Seir,
        r0: 1.2,
        beta: 0.15,
        gamma: 0.125,
        kappa: 0.1,
        p_h: 0.333,
        k: 0.16,
    },
    DiseasePreset {
        name: "h1n1",
        model: Model::Sir,
        r0: 1.33,
        beta: 0.19,
        gamma: 0.143,
        kappa: 0.0,
        p_h: 0.294,
        k: 8.092,
    },
    DiseasePreset {
        name: "ebola",
        model: Model::Seir,
        r0: 1.4,
        beta: 0.2,
        gamma: 0.143,
        kappa: 0.2,
        p_h: 0.0,
        k: 0.18,
    },
    DiseasePreset {
        name: "measles",
        model: Model::Sir,
        r0: 18.0,
        beta: 4.932,
        gamma: 0.274,
        kappa: 0.0,
        p_h: 0.079,
        k: 0.32,
    },
];

pub fn load_preset(name: &str) -> Result<DiseasePreset> {
    PRESETS
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .copied()
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}
