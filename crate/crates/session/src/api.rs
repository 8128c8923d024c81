//! Request and response bodies. The JSON shapes are frozen in
//! `contracts/session-api.json`.

use boap_core::engine::{Method, RunTrace};
use serde::{Deserialize, Serialize};

/// One named design variable and its box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignVariable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    pub name: String,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default)]
    pub seed: u64,
    pub design: Vec<DesignVariable>,
    /// Property labels the expert compares designs on.
    #[serde(default)]
    pub properties: Vec<String>,
    /// Known optimum, enabling regret in the trace.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_max: Option<f64>,
    /// Finite candidate designs. Switches to the discrete-pool protocol.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pool: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_per_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holdout_fraction: Option<f64>,
}

fn default_method() -> Method {
    Method::Boap
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    AwaitingObservation,
    AwaitingPreferences,
    Suggesting,
    Finished,
}

/// A design waiting for its measured objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PendingObservation {
    pub id: String,
    /// Index of the observation this design becomes.
    pub index: usize,
    pub design: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignRef {
    pub index: usize,
    pub design: Vec<f64>,
}

/// "Which of these two designs has more of this property?"
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub id: String,
    pub property: usize,
    pub property_label: String,
    pub left: DesignRef,
    pub right: DesignRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// An answer names the winning side, or abstains with `cannot_judge`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Answer {
    pub query_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winner: Option<Side>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub cannot_judge: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationInput {
    pub id: String,
    /// Measured objective value.
    pub y: f64,
    /// Noise-free value when known; defaults to `y`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmitAnswers {
    #[serde(default)]
    pub answers: Vec<Answer>,
    #[serde(default)]
    pub observations: Vec<ObservationInput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub name: String,
    pub method: Method,
    pub phase: Phase,
    pub observations: usize,
    pub budget: usize,
    pub design: Vec<DesignVariable>,
    pub properties: Vec<String>,
    pub pending_observations: Vec<PendingObservation>,
    pub open_queries: Vec<Query>,
    pub answered_queries: usize,
    pub skipped_queries: usize,
    pub trace: RunTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub id: String,
    pub name: String,
    pub method: Method,
    pub phase: Phase,
    pub observations: usize,
    pub budget: usize,
}

impl From<&SessionView> for SessionSummary {
    fn from(v: &SessionView) -> Self {
        Self {
            id: v.id.clone(),
            name: v.name.clone(),
            method: v.method,
            phase: v.phase,
            observations: v.observations,
            budget: v.budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldError>,
}
