//! Shortest paths between two coordinate points by polyline relaxation.

use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use super::MetricField;

type P = Vector3<f64>;

/// Gauss-Legendre nodes and weights on [0, 1].
const GAUSS4: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_93),
    (0.330_009_478_207_571_87, 0.326_072_577_431_273_07),
    (0.669_990_521_792_428_1, 0.326_072_577_431_273_07),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_93),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    pub length: f64,
    /// Length of the straight coordinate segment under the same quadrature.
    pub straight_length: f64,
    pub converged: bool,
    pub iterations: usize,
    pub gradient_norm: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct GeodesicSolver {
    /// Interior polyline nodes.
    pub nodes: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Combine `nodes` and `2 * nodes` relaxations to cancel the leading polyline bias.
    pub extrapolate: bool,
}

impl Default for GeodesicSolver {
    fn default() -> Self {
        Self { nodes: 8, tolerance: 1e-10, max_iterations: 100, extrapolate: true }
    }
}

fn segment_length(field: &MetricField, a: &P, b: &P) -> f64 {
    let v = b - a;
    GAUSS4
        .iter()
        .map(|&(s, w)| {
            let x = a + v * s;
            w * v.dot(&(field.eval(x.into()) * v)).max(0.0).sqrt()
        })
        .sum()
}

/// Gradients of a segment length with respect to both ends.
fn segment_gradient(field: &MetricField, a: &P, b: &P) -> (P, P) {
    let v = b - a;
    let mut ga = P::zeros();
    let mut gb = P::zeros();
    for &(s, w) in &GAUSS4 {
        let x: [f64; 3] = (a + v * s).into();
        let g = field.eval(x);
        let gv = g * v;
        let f = v.dot(&gv).sqrt();
        if f == 0.0 {
            continue;
        }
        let d = field.partials(x);
        let dk = P::new(v.dot(&(d[0] * v)), v.dot(&(d[1] * v)), v.dot(&(d[2] * v)));
        ga += (gv * -2.0 + dk * (1.0 - s)) * (w / (2.0 * f));
        gb += (gv * 2.0 + dk * s) * (w / (2.0 * f));
    }
    (ga, gb)
}

struct Path<'a> {
    field: &'a MetricField,
    p: P,
    q: P,
    e: [P; 2],
    k: usize,
}

impl Path<'_> {
    fn points(&self, y: &DVector<f64>) -> Vec<P> {
        let n = self.k + 1;
        let mut pts = Vec::with_capacity(n + 1);
        pts.push(self.p);
        for i in 1..n {
            let base = self.p + (self.q - self.p) * (i as f64 / n as f64);
            pts.push(base + self.e[0] * y[2 * (i - 1)] + self.e[1] * y[2 * (i - 1) + 1]);
        }
        pts.push(self.q);
        pts
    }

    fn length(&self, y: &DVector<f64>) -> f64 {
        let pts = self.points(y);
        pts.windows(2).map(|w| segment_length(self.field, &w[0], &w[1])).sum()
    }

    fn gradient(&self, y: &DVector<f64>) -> DVector<f64> {
        let pts = self.points(y);
        let mut node = vec![P::zeros(); pts.len()];
        for j in 0..pts.len() - 1 {
            let (ga, gb) = segment_gradient(self.field, &pts[j], &pts[j + 1]);
            node[j] += ga;
            node[j + 1] += gb;
        }
        DVector::from_fn(2 * self.k, |r, _| node[r / 2 + 1].dot(&self.e[r % 2]))
    }

    fn hessian(&self, y: &DVector<f64>, h: f64) -> DMatrix<f64> {
        let n = y.len();
        let mut hess = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut yp = y.clone();
            let mut ym = y.clone();
            yp[j] += h;
            ym[j] -= h;
            let col = (self.gradient(&yp) - self.gradient(&ym)) / (2.0 * h);
            hess.set_column(j, &col);
        }
        (&hess + hess.transpose()) * 0.5
    }
}

impl GeodesicSolver {
    pub fn solve(&self, field: &MetricField, p: [f64; 3], q: [f64; 3]) -> Geodesic {
        let coarse = self.relax(field, p, q, self.nodes);
        if !self.extrapolate || !coarse.converged || coarse.iterations == 0 {
            return coarse;
        }
        let fine = self.relax(field, p, q, 2 * self.nodes);
        if !fine.converged {
            return fine;
        }
        Geodesic {
            length: ((4.0 * fine.length - coarse.length) / 3.0).min(coarse.straight_length),
            iterations: coarse.iterations + fine.iterations,
            gradient_norm: coarse.gradient_norm.max(fine.gradient_norm),
            ..coarse
        }
    }

    fn relax(&self, field: &MetricField, p: [f64; 3], q: [f64; 3], nodes: usize) -> Geodesic {
        let (p, q) = (P::from(p), P::from(q));
        let chord = q - p;
        let scale = chord.norm();
        if scale == 0.0 {
            return Geodesic { length: 0.0, straight_length: 0.0, converged: true, iterations: 0, gradient_norm: 0.0 };
        }
        // nodes move in the plane metric-orthogonal to the chord at its midpoint
        let mid: [f64; 3] = ((p + q) * 0.5).into();
        let n = (field.eval(mid) * chord).normalize();
        let trial = if n.x.abs() < 0.9 { P::x() } else { P::y() };
        let e0 = (trial - n * n.dot(&trial)).normalize();
        let e1 = n.cross(&e0);
        let path = Path { field, p, q, e: [e0, e1], k: nodes };
        let mut y = DVector::zeros(2 * nodes);
        let straight = path.length(&y);
        if matches!(field, MetricField::Flat) || nodes == 0 {
            return Geodesic { length: straight, straight_length: straight, converged: true, iterations: 0, gradient_norm: 0.0 };
        }

        let mut len = straight;
        let mut grad = path.gradient(&y);
        let mut mu = 1e-10;
        let mut iterations = 0;
        let roundoff = 8.0 * f64::EPSILON * straight;
        while grad.norm() >= self.tolerance && iterations < self.max_iterations {
            iterations += 1;
            let hess = path.hessian(&y, 1e-5 * scale);
            let mut accepted = false;
            for _ in 0..30 {
                let damped = &hess + DMatrix::identity(y.len(), y.len()) * (mu * (1.0 + hess.diagonal().amax()));
                let Some(step) = damped.cholesky().map(|c| c.solve(&-&grad)) else {
                    mu = (mu * 10.0).max(1e-8);
                    continue;
                };
                let cand = &y + step;
                let cand_len = path.length(&cand);
                let cand_grad = path.gradient(&cand);
                if cand_len < len - roundoff || (cand_len <= len + roundoff && cand_grad.norm() < grad.norm()) {
                    y = cand;
                    len = cand_len;
                    grad = cand_grad;
                    mu = (mu * 0.1).max(1e-14);
                    accepted = true;
                    break;
                }
                mu = (mu * 10.0).max(1e-8);
            }
            if !accepted {
                break;
            }
        }
        let gradient_norm = grad.norm();
        let converged = gradient_norm < self.tolerance;
        if !converged {
            log::warn!(
                "geodesic relaxation stalled at |grad| = {gradient_norm:e}; using the straight segment"
            );
            return Geodesic { length: straight, straight_length: straight, converged, iterations, gradient_norm };
        }
        Geodesic { length: len.min(straight), straight_length: straight, converged, iterations, gradient_norm }
    }
}

/// Geodesic length with the default solver.
pub fn geodesic_length(field: &MetricField, p: [f64; 3], q: [f64; 3]) -> Geodesic {
    GeodesicSolver::default().solve(field, p, q)
}
