use std::f64::consts::PI;

use crate::complex::{EdgeId, SimplicialComplex3};
use crate::error::{Error, Result};
use crate::flat_geometry::{dihedral_angle, TetLengths};

use super::EdgeLengthState;

/// Target for the deficit of a flattened diagonal.
pub const FLATTEN_TOL: f64 = 1e-12;

struct Ring {
    tets: Vec<(TetLengths, usize)>,
}

impl Ring {
    fn new(complex: &SimplicialComplex3, state: &EdgeLengthState, e: EdgeId) -> Self {
        let tets = complex.edge_tets[e.0]
            .iter()
            .map(|&(t, k)| (TetLengths::of_tet(complex, state, t), k as usize))
            .collect();
        Self { tets }
    }

    fn deficit(&self, l: f64) -> Option<f64> {
        let mut sum = 0.0;
        for (lengths, k) in &self.tets {
            let mut t = *lengths;
            t.0[*k] = l;
            sum += dihedral_angle(&t, *k).ok()?;
        }
        Some(2.0 * PI - sum)
    }

    /// Range of lengths for which every tet in the ring stays realizable.
    fn realizable_range(&self) -> Option<(f64, f64)> {
        let mut lo: f64 = 0.0;
        let mut hi = f64::INFINITY;
        for (lengths, k) in &self.tets {
            let s = lengths.0[*k].powi(2);
            let cm = |x: f64| {
                let mut t = *lengths;
                t.0[*k] = x.sqrt();
                t.cayley_menger()
            };
            // the Cayley-Menger determinant is quadratic in the squared length
            let (c0, c1, c2) = (cm(0.0), cm(s), cm(2.0 * s));
            let a = (c2 - 2.0 * c1 + c0) / (2.0 * s * s);
            let b = (c1 - c0) / s - a * s;
            let c = c0;
            if a >= 0.0 {
                return None;
            }
            let disc = b * b - 4.0 * a * c;
            if disc <= 0.0 {
                return None;
            }
            let r = disc.sqrt();
            let (x1, x2) = ((-b + r) / (2.0 * a), (-b - r) / (2.0 * a));
            let (xa, xb) = (x1.min(x2).max(0.0), x1.max(x2));
            lo = lo.max(xa.sqrt());
            hi = hi.min(xb.sqrt());
        }
        (lo < hi).then_some((lo, hi))
    }
}

/// Length of `e` that makes its deficit vanish, all other lengths fixed.
pub fn flat_length(complex: &SimplicialComplex3, state: &EdgeLengthState, e: EdgeId) -> Result<f64> {
    let ring = Ring::new(complex, state, e);
    let fail = |reason: &str| Error::NonFlattenable { edge: e.0, reason: reason.to_string() };
    let (lo, hi) = ring.realizable_range().ok_or_else(|| fail("no realizable length"))?;
    let pad = 1e-9 * (hi - lo);
    let (mut a, mut b) = (lo + pad, hi - pad);
    let fa = ring.deficit(a).ok_or_else(|| fail("degenerate lower bracket"))?;
    let fb = ring.deficit(b).ok_or_else(|| fail("degenerate upper bracket"))?;
    if !(fa > 0.0 && fb < 0.0) {
        return Err(fail(&format!("no sign change on [{a}, {b}] ({fa}, {fb})")));
    }
    let current = state.length(e);
    let mut x = if current > a && current < b { current } else { 0.5 * (a + b) };
    for _ in 0..200 {
        let fx = ring.deficit(x).ok_or_else(|| fail("degenerate iterate"))?;
        if fx.abs() < FLATTEN_TOL {
            return Ok(x);
        }
        if fx > 0.0 {
            a = x;
        } else {
            b = x;
        }
        let h = 1e-7 * x;
        let slope = match (ring.deficit(x + h), ring.deficit(x - h)) {
            (Some(p), Some(m)) => (p - m) / (2.0 * h),
            _ => f64::NAN,
        };
        let newton = x - fx / slope;
        x = if newton.is_finite() && newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if b - a < 1e-15 * x {
            break;
        }
    }
    let fx = ring.deficit(x).ok_or_else(|| fail("degenerate iterate"))?;
    if fx.abs() < 1e-10 {
        Ok(x)
    } else {
        Err(fail(&format!("root finder stalled with deficit {fx:e}")))
    }
}

/// Replaces every body-diagonal length by its flat value.
pub fn flatten_body_diagonals(complex: &SimplicialComplex3, state: &EdgeLengthState) -> Result<EdgeLengthState> {
    let mut out = state.clone();
    for e in complex.body_diagonals() {
        out.set(e, flat_length(complex, state, e)?);
    }
    Ok(out)
}
