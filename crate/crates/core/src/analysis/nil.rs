//! Homogeneous Nil flows: closed-form solutions and metric extraction from a mesh.

use serde::{Deserialize, Serialize};

use super::curves::aligned_cycles;
use crate::error::{Error, Result};
use crate::flow::{EdgeLengthState, FlowTrace};
use crate::manifolds::ManifoldBuild;

/// Metric components in the left-invariant frame `(dz, dy + lambda x dz, dx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NilAbc {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl NilAbc {
    pub const UNIT: Self = Self { a: 1.0, b: 1.0, c: 1.0 };

    pub fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Scalar curvature `-lambda^2 A / (2 B C)`.
    pub fn scalar_curvature(&self, lambda: f64) -> f64 {
        -lambda * lambda * self.a / (2.0 * self.b * self.c)
    }
}

/// Exact flow of unit initial data.
pub fn nil_analytic(t: f64, lambda: f64, normalized: bool) -> Result<NilAbc> {
    let r0 = NilAbc::UNIT.scalar_curvature(lambda);
    let (rate, pa, pbc) = if normalized { (16.0 / 3.0, -0.5, 0.25) } else { (6.0, -1.0 / 3.0, 1.0 / 3.0) };
    let s = 1.0 - rate * r0 * t;
    if !(s > 0.0) {
        return Err(Error::Domain(format!("1 - {rate:.4} R0 t = {s} at t = {t}")));
    }
    Ok(NilAbc { a: s.powf(pa), b: s.powf(pbc), c: s.powf(pbc) })
}

/// The `(a, b)` of `(1 + a t)^b` that the analytic solution follows, per component.
pub fn nil_analytic_params(lambda: f64, normalized: bool) -> [[f64; 2]; 3] {
    let r0 = NilAbc::UNIT.scalar_curvature(lambda);
    if normalized {
        let a = -16.0 / 3.0 * r0;
        [[a, -0.5], [a, 0.25], [a, 0.25]]
    } else {
        let a = -6.0 * r0;
        [[a, -1.0 / 3.0], [a, 1.0 / 3.0], [a, 1.0 / 3.0]]
    }
}

/// Squared lengths per unit coordinate length: `A` along z, `B` along y at x = 0, `C` along x.
pub fn nil_extract_abc(build: &ManifoldBuild, state: &EdgeLengthState) -> Result<NilAbc> {
    let component = |axis: usize| -> Result<f64> {
        let cycles = aligned_cycles(&build.complex, axis);
        let cycle = cycles.first().ok_or(Error::NoAlignedCycle { axis })?;
        Ok((cycle.length(state) / cycle.extent).powi(2))
    };
    Ok(NilAbc { a: component(2)?, b: component(1)?, c: component(0)? })
}

/// `(t, A, B, C)` at every recorded state of a trace.
pub fn nil_abc_series(build: &ManifoldBuild, trace: &FlowTrace) -> Result<Vec<(f64, NilAbc)>> {
    trace.records.iter().map(|r| Ok((r.t, nil_extract_abc(build, &r.state)?))).collect()
}
