//! Grids of (t, statistic) samples shared by the decay fit and the argument
//! scans.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayModel {
    /// log|I| = c - α log T
    #[serde(rename = "pure_power")]
    PurePower,
    /// log|I| = c + log log T - 2 log T
    #[serde(rename = "logT_over_T2")]
    LogTOverT2,
    /// log|I| = c + (1/2) log log T - 2 log T
    #[serde(rename = "sqrtlog_T2")]
    SqrtLogT2,
}

impl DecayModel {
    pub fn arity(self) -> usize {
        match self {
            DecayModel::PurePower => 2,
            DecayModel::LogTOverT2 | DecayModel::SqrtLogT2 => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DecayModel::PurePower => "pure_power",
            DecayModel::LogTOverT2 => "logT_over_T2",
            DecayModel::SqrtLogT2 => "sqrtlog_T2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pure_power" => Some(DecayModel::PurePower),
            "logT_over_T2" => Some(DecayModel::LogTOverT2),
            "sqrtlog_T2" => Some(DecayModel::SqrtLogT2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub t: f64,
    pub stat: f64,
    pub normalized: f64,
    /// Sample excluded from fits (e.g. close to a sign change of the statistic).
    pub flagged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrema {
    pub max: f64,
    pub argmax: f64,
    pub min: f64,
    pub argmin: f64,
}

impl Extrema {
    /// Extrema of the normalized statistic.
    pub fn of(samples: &[ScanSample]) -> Option<Extrema> {
        let first = samples.first()?;
        let mut e = Extrema {
            max: first.normalized,
            argmax: first.t,
            min: first.normalized,
            argmin: first.t,
        };
        for s in samples {
            if s.normalized > e.max {
                e.max = s.normalized;
                e.argmax = s.t;
            }
            if s.normalized < e.min {
                e.min = s.normalized;
                e.argmin = s.t;
            }
        }
        Some(e)
    }

    pub fn sup_abs(&self) -> f64 {
        self.max.abs().max(self.min.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub samples: Vec<ScanSample>,
    pub model: Option<DecayModel>,
    pub fitted_params: Vec<f64>,
    pub residual_rms: f64,
    pub extrema: Option<Extrema>,
}

impl ScanReport {
    pub fn from_samples(samples: Vec<ScanSample>) -> Self {
        let extrema = Extrema::of(&samples);
        ScanReport {
            samples,
            model: None,
            fitted_params: Vec::new(),
            residual_rms: f64::NAN,
            extrema,
        }
    }

    /// `t,stat,normalized` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,stat,normalized\n");
        for x in &self.samples {
            let _ = writeln!(s, "{:.16e},{:.16e},{:.16e}", x.t, x.stat, x.normalized);
        }
        s
    }
}
