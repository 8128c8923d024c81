#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use boap_core::engine::Method;
use boap_core::oracles::{ObservationNoise, Problem, SimulatedExpert, Winner};
use boap_session::api::{
    Answer, CreateSession, DesignVariable, ObservationInput, Phase, SessionView, Side, SubmitAnswers,
};
use boap_session::{router, Store};
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

pub struct Reply {
    pub status: StatusCode,
    pub content_type: String,
    pub body: String,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.body).expect("json body")
    }

    pub fn view(&self) -> SessionView {
        assert!(self.status.is_success(), "{}: {}", self.status, self.body);
        serde_json::from_str(&self.body).expect("session view")
    }
}

pub fn app() -> Router {
    router(Arc::new(Store::in_memory()))
}

pub async fn call(app: &Router, method: &str, path: &str, body: Option<&Value>) -> Reply {
    let mut req = Request::builder().method(method).uri(path);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(serde_json::to_vec(v).unwrap())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let content_type = resp
        .headers()
        .get("content-type")
        .map(|v| v.to_str().unwrap().to_string())
        .unwrap_or_default();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    Reply {
        status,
        content_type,
        body: String::from_utf8(bytes.to_vec()).unwrap(),
    }
}

pub fn create_request(problem: &dyn Problem, method: Method, seed: u64) -> CreateSession {
    let space = problem.space();
    CreateSession {
        name: problem.name().to_string(),
        method,
        seed,
        design: (0..space.dim())
            .map(|i| DesignVariable {
                name: format!("x{}", i + 1),
                lower: space.lower()[i],
                upper: space.upper()[i],
            })
            .collect(),
        properties: problem.property_labels(),
        true_max: problem.true_max(),
        pool: problem.candidate_pool().map(|p| p.to_vec()),
        initial: None,
        budget: None,
        grid_per_dim: None,
        holdout_fraction: None,
    }
}

/// Everything currently asked of the human, answered by a simulated
/// expert and measured with the run's noise stream.
pub fn respond(
    view: &SessionView,
    problem: &dyn Problem,
    expert: &mut SimulatedExpert,
    noise: &mut ObservationNoise,
) -> SubmitAnswers {
    let observations = view
        .pending_observations
        .iter()
        .map(|p| {
            let (y, exact) = noise.evaluate(problem, &p.design).unwrap();
            ObservationInput {
                id: p.id.clone(),
                y,
                value: Some(exact),
            }
        })
        .collect();
    let answers = view
        .open_queries
        .iter()
        .map(|q| {
            let w = expert
                .compare(problem, q.property, &q.left.design, &q.right.design)
                .unwrap();
            Answer {
                query_id: q.id.clone(),
                winner: Some(if w == Winner::First { Side::Left } else { Side::Right }),
                cannot_judge: false,
            }
        })
        .collect();
    SubmitAnswers { answers, observations }
}

/// Drives a session to completion over HTTP and returns the final view.
pub async fn drive(
    app: &Router,
    create: &CreateSession,
    problem: &dyn Problem,
    expert: &mut SimulatedExpert,
    noise: &mut ObservationNoise,
) -> SessionView {
    let mut view = call(app, "POST", "/sessions", Some(&serde_json::to_value(create).unwrap()))
        .await
        .view();
    while view.phase != Phase::Finished {
        let sub = respond(&view, problem, expert, noise);
        let path = format!("/sessions/{}/answers", view.id);
        view = call(app, "POST", &path, Some(&serde_json::to_value(&sub).unwrap()))
            .await
            .view();
    }
    view
}
