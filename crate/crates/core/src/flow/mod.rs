//! Forward-Euler piecewise flat Ricci flow.
//!
//! Every edge length changes by its own Ricci curvature, computed for all
//! edges from the same frozen state. Cubic and skew triangulations re-solve
//! their body diagonals after each step so those edges stay flat.

mod flatten;
mod state;
mod trace;

pub use flatten::{flat_length, flatten_body_diagonals, FLATTEN_TOL};
pub use state::EdgeLengthState;
pub use trace::{FlowRecord, FlowTrace};

use serde::{Deserialize, Serialize};

use crate::complex::{EdgeId, SimplicialComplex3};
use crate::curvature::CurvatureReport;
use crate::error::{Error, Result};
use crate::flat_geometry::Geometry;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub dt: f64,
    pub steps: usize,
    pub normalized: bool,
    pub flatten: bool,
    pub stride: usize,
}

impl FlowConfig {
    pub fn new(dt: f64, steps: usize) -> Self {
        Self { dt, steps, normalized: false, flatten: true, stride: 1 }
    }

    pub fn normalized(mut self, yes: bool) -> Self {
        self.normalized = yes;
        self
    }

    pub fn flatten(mut self, yes: bool) -> Self {
        self.flatten = yes;
        self
    }

    pub fn stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        Ok(())
    }
}

fn geometry_at(complex: &SimplicialComplex3, state: &EdgeLengthState, step: usize) -> Result<Geometry> {
    Geometry::new(complex, state).map_err(|e| match e {
        Error::DegenerateTet { tet, .. } => Error::FlowNonRealizable { tet, step },
        other => other,
    })
}

/// New lengths after one Euler step from the frozen `report`.
pub fn step_lengths(
    state: &EdgeLengthState,
    report: &CurvatureReport,
    dt: f64,
    normalized: bool,
    step: usize,
) -> Result<EdgeLengthState> {
    let shift = if normalized { report.global_scalar / 3.0 } else { 0.0 };
    let mut out = Vec::with_capacity(state.len());
    for (e, (&l, &rc)) in state.lengths().iter().zip(&report.ricci).enumerate() {
        let next = l * (1.0 + dt * (shift - rc));
        if !(next > 0.0) {
            return Err(Error::NonPositiveLength { edge: e, length: next, step });
        }
        out.push(next);
    }
    Ok(EdgeLengthState::new(out))
}

pub fn euler_step(
    complex: &SimplicialComplex3,
    state: &EdgeLengthState,
    dt: f64,
    normalized: bool,
    flatten: bool,
) -> Result<EdgeLengthState> {
    let geo = geometry_at(complex, state, 0)?;
    let report = CurvatureReport::from_geometry(complex, state, &geo);
    let next = step_lengths(state, &report, dt, normalized, 1)?;
    geometry_at(complex, &next, 1)?;
    if flatten {
        flatten_body_diagonals(complex, &next)
    } else {
        Ok(next)
    }
}

/// Runs the flow. A failing step ends the trace early and is stored in it.
pub fn evolve(complex: &SimplicialComplex3, initial: &EdgeLengthState, config: &FlowConfig) -> FlowTrace {
    let mut trace = FlowTrace::new(*config);
    if let Err(e) = config.validate() {
        trace.error = Some(e);
        return trace;
    }
    let start = if config.flatten && complex.body_diagonals().next().is_some() {
        flatten_body_diagonals(complex, initial)
    } else {
        Ok(initial.clone())
    };
    let mut state = match start {
        Ok(s) => s,
        Err(e) => {
            trace.error = Some(e);
            return trace;
        }
    };
    for step in 0..=config.steps {
        let geo = match geometry_at(complex, &state, step) {
            Ok(g) => g,
            Err(e) => {
                trace.error = Some(e);
                return trace;
            }
        };
        let report = CurvatureReport::from_geometry(complex, &state, &geo);
        let t = step as f64 * config.dt;
        log::debug!("step {step} t={t} R~={:e} max|eps|={:e}", report.global_scalar, report.max_abs_deficit());
        if step == config.steps {
            trace.push(step, t, state, report);
            break;
        }
        let next = step_lengths(&state, &report, config.dt, config.normalized, step + 1).and_then(|n| {
            if config.flatten {
                flatten_body_diagonals(complex, &n)
            } else {
                Ok(n)
            }
        });
        if step % config.stride == 0 {
            trace.push(step, t, state, report);
        }
        state = match next {
            Ok(n) => n,
            Err(e) => {
                trace.error = Some(e);
                return trace;
            }
        };
    }
    trace
}

/// Lengths that a flattening pass would not change.
pub fn is_flattened(complex: &SimplicialComplex3, state: &EdgeLengthState, tol: f64) -> bool {
    complex.body_diagonals().all(|e: EdgeId| {
        crate::curvature::deficit_angle(complex, state, e).map(|d| d.abs() < tol).unwrap_or(false)
    })
}
