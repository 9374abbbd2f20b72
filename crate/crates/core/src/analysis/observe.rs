//! Observables of piecewise flat states compared against smooth references.

use std::f64::consts::PI;

use super::curves::aligned_cycles;
use super::gowdy::{GowdyCurvatures, GowdyState};
use crate::complex::{EdgeId, SimplicialComplex3, VertexId};
use crate::curvature::CurvatureReport;
use crate::error::{Error, Result};
use crate::flow::FlowTrace;

/// Length-weighted means of `|Rc|` and `|epsilon|` over the edges.
pub fn weighted_averages(report: &CurvatureReport) -> (f64, f64) {
    report.weighted_means()
}

fn same_angle(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d) < 1e-9
}

/// A vertex and a y-aligned edge sitting at `theta` (the third coordinate).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaProbe {
    pub vertex: VertexId,
    pub y_edge: EdgeId,
}

impl ThetaProbe {
    pub fn find(complex: &SimplicialComplex3, theta: f64) -> Result<Self> {
        let vertex = complex
            .vertices
            .iter()
            .position(|v| same_angle(v.position[2], theta))
            .map(VertexId)
            .ok_or_else(|| Error::Config(format!("no vertex at theta = {theta}")))?;
        let y_edge = aligned_cycles(complex, 1)
            .iter()
            .flat_map(|c| c.edges.iter().copied())
            .find(|&e| complex.edge_endpoints(e).iter().all(|p| same_angle(p[2], theta)))
            .ok_or(Error::NoAlignedCycle { axis: 1 })?;
        Ok(Self { vertex, y_edge })
    }

    /// `(t, R_v, Rc_y)` at every recorded state.
    pub fn series(&self, trace: &FlowTrace) -> Vec<(f64, f64, f64)> {
        trace
            .records
            .iter()
            .map(|r| (r.t, r.report.vertex_scalar[self.vertex.0], r.report.ricci[self.y_edge.0]))
            .collect()
    }
}

/// Smooth `Rc(u, u)` along every edge, with `u` the coordinate displacement at the midpoint.
pub fn smooth_edge_ricci(complex: &SimplicialComplex3, state: &GowdyState) -> Vec<f64> {
    let curv = GowdyCurvatures::of(state);
    (0..complex.num_edges())
        .map(|e| {
            let [p, q] = complex.edge_endpoints(EdgeId(e));
            let u = std::array::from_fn(|k| q[k] - p[k]);
            curv.ricci_along(state, 0.5 * (p[2] + q[2]), u)
        })
        .collect()
}

/// Mean absolute edge Ricci error as a percentage of the mean smooth magnitude.
pub fn rc_error_percent(complex: &SimplicialComplex3, report: &CurvatureReport, state: &GowdyState) -> f64 {
    let smooth = smooth_edge_ricci(complex, state);
    let mean_err = report.ricci.iter().zip(&smooth).map(|(a, b)| (a - b).abs()).sum::<f64>() / smooth.len() as f64;
    100.0 * mean_err / GowdyCurvatures::of(state).mean_magnitude()
}

/// Percentage errors at each requested time; both sources must hold that time.
pub fn rc_error_table(
    complex: &SimplicialComplex3,
    trace: &FlowTrace,
    pde: &[GowdyState],
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    times
        .iter()
        .map(|&t| {
            let record = trace.at_time(t).ok_or(Error::MissingTime(t))?;
            let state = pde.iter().find(|s| (s.t - t).abs() < 1e-9).ok_or(Error::MissingTime(t))?;
            Ok((t, rc_error_percent(complex, &record.report, state)))
        })
        .collect()
}
