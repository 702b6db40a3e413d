use serde::{Deserialize, Serialize};

/// Named numerical tolerances. Hermiticity and trace tolerances are absolute
/// but get scaled by `max(1, ‖·‖_max)` of the matrix being checked.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub trace: f64,
    pub psd: f64,
    pub spectra: f64,
    pub commutator: f64,
    pub classify: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            trace: 1e-10,
            psd: 1e-9,
            spectra: 1e-8,
            commutator: 1e-8,
            classify: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> {
        [
            ("herm", self.herm),
            ("trace", self.trace),
            ("psd", self.psd),
            ("spectra", self.spectra),
            ("commutator", self.commutator),
            ("classify", self.classify),
        ]
        .into_iter()
    }

    /// Sets a tolerance by name. Returns `false` for unknown names.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "herm" => &mut self.herm,
            "trace" => &mut self.trace,
            "psd" => &mut self.psd,
            "spectra" => &mut self.spectra,
            "commutator" => &mut self.commutator,
            "classify" => &mut self.classify,
            _ => return false,
        };
        *slot = value;
        true
    }
}

pub(crate) fn scaled(tol: f64, magnitude: f64) -> f64 {
    tol * magnitude.max(1.0)
}
