//! Closed chains of coordinate-aligned edges and their summed lengths.

use std::collections::BTreeSet;

use crate::complex::{EdgeId, Lift, SimplicialComplex3};
use crate::error::{Error, Result};
use crate::flow::EdgeLengthState;
use crate::manifolds::ManifoldBuild;

/// A closed edge path whose every edge points along one coordinate axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedCycle {
    pub axis: usize,
    /// The vertex of the cycle with the smallest reduced lift.
    pub anchor: Lift,
    /// Coordinates of the anchor.
    pub position: [f64; 3],
    pub edges: Vec<EdgeId>,
    /// Coordinate distance travelled along the axis before the path closes.
    pub extent: f64,
}

impl AlignedCycle {
    pub fn length(&self, state: &EdgeLengthState) -> f64 {
        self.edges.iter().map(|&e| state.length(e)).sum()
    }
}

fn aligned_steps(complex: &SimplicialComplex3, axis: usize) -> BTreeSet<Lift> {
    let mut steps = BTreeSet::new();
    for e in &complex.edges {
        let d = complex.chart.displacement(e.lift[0], e.lift[1]);
        let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        let off_axis = (0..3).filter(|&a| a != axis).map(|a| d[a].abs()).fold(0.0, f64::max);
        if off_axis > 1e-12 * norm {
            continue;
        }
        let step: Lift = std::array::from_fn(|c| e.lift[1][c] - e.lift[0][c]);
        steps.insert(if d[axis] > 0.0 { step } else { step.map(|x| -x) });
    }
    steps
}

/// Every distinct closed chain of edges aligned with coordinate `axis`, sorted by anchor.
pub fn aligned_cycles(complex: &SimplicialComplex3, axis: usize) -> Vec<AlignedCycle> {
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for step in aligned_steps(complex, axis) {
        for v in &complex.vertices {
            let start = v.lift;
            let Some(v0) = complex.vertex_of(start) else { continue };
            let mut edges = Vec::new();
            let mut p = start;
            let closed = loop {
                let q: Lift = std::array::from_fn(|c| p[c] + step[c]);
                let Some((e, _)) = complex.edge_of([p, q]) else { break false };
                edges.push(e);
                p = q;
                if complex.vertex_of(p) == Some(v0) {
                    break true;
                }
                if edges.len() > complex.num_vertices() {
                    break false;
                }
            };
            if !closed {
                continue;
            }
            let mut key = edges.clone();
            key.sort();
            if !seen.insert(key) {
                continue;
            }
            let anchor = (0..edges.len() as i64)
                .map(|k| complex.deck.reduce(std::array::from_fn(|c| start[c] + k * step[c])).0)
                .min()
                .expect("cycle has edges");
            let extent = complex.chart.displacement(start, p)[axis];
            cycles.push(AlignedCycle { axis, anchor, position: complex.chart.position(anchor), edges, extent });
        }
    }
    cycles.sort_by(|a, b| a.anchor.cmp(&b.anchor).then(a.edges.cmp(&b.edges)));
    cycles
}

/// Shortest and longest aligned cycle, scaled by the copies that tile the full domain.
pub fn integral_curve_lengths(build: &ManifoldBuild, state: &EdgeLengthState, axis: usize) -> Result<(f64, f64)> {
    let cycles = aligned_cycles(&build.complex, axis);
    extreme_lengths(&cycles, state, build.copies[axis] as f64).ok_or(Error::NoAlignedCycle { axis })
}

pub(crate) fn extreme_lengths(cycles: &[AlignedCycle], state: &EdgeLengthState, scale: f64) -> Option<(f64, f64)> {
    cycles.iter().map(|c| c.length(state) * scale).fold(None, |acc, l| match acc {
        None => Some((l, l)),
        Some((lo, hi)) => Some((f64::min(lo, l), f64::max(hi, l))),
    })
}
