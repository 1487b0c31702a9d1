use serde::Serialize;

/// Measured outcome of one correction.
///
/// `input_defect` is the hypothesis quantity ε, `correction_distance` is
/// ‖x − x̂‖ and `structural_residual` the violation of the output's defining
/// identity. `bound_claimed` is present when the construction carries an
/// explicit bound on the distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectionCertificate {
    pub input_defect: f64,
    pub correction_distance: f64,
    pub structural_residual: f64,
    pub bound_claimed: Option<f64>,
    /// Intermediate measurements, in the order they were taken.
    pub stages: Vec<StageMeasurement>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageMeasurement {
    pub name: String,
    pub value: f64,
}

impl CorrectionCertificate {
    pub fn new(input_defect: f64, correction_distance: f64, structural_residual: f64) -> Self {
        Self {
            input_defect,
            correction_distance,
            structural_residual,
            bound_claimed: None,
            stages: Vec::new(),
        }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound_claimed = Some(bound);
        self
    }

    pub(crate) fn with_stage(mut self, name: impl Into<String>, value: f64) -> Self {
        self.stages.push(StageMeasurement {
            name: name.into(),
            value,
        });
        self
    }

    /// Looks up a stage measurement by name.
    pub fn stage(&self, name: &str) -> Option<f64> {
        self.stages.iter().find(|s| s.name == name).map(|s| s.value)
    }

    /// Whether the residual is within `tol` and the claimed bound, if any,
    /// holds up to `slack`.
    pub fn is_sound(&self, tol: f64, slack: f64) -> bool {
        self.structural_residual <= tol
            && self
                .bound_claimed
                .is_none_or(|b| self.correction_distance <= b + slack)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}
