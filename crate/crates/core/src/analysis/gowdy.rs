//! Reference Ricci flow of the Gowdy family by the method of lines.
//!
//! The metric `e^(f+W) dx^2 + e^(f-W) dy^2 + e^(2a) dtheta^2` with `f`
//! constant evolves through
//! `a_t = e^(-2a) W_theta^2 / 2` and `W_t = e^(-2a) (W_theta_theta - a_theta W_theta)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GowdyState {
    pub t: f64,
    pub f: f64,
    /// Values at `theta_i = 2 pi i / n`.
    pub a: Vec<f64>,
    pub w: Vec<f64>,
}

impl GowdyState {
    pub fn initial(n: usize, amplitude: f64) -> Self {
        Self {
            t: 0.0,
            f: 0.0,
            a: vec![0.0; n],
            w: (0..n).map(|i| amplitude * (2.0 * PI * i as f64 / n as f64).sin()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.len() as f64
    }

    pub fn theta(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    /// Time derivatives `(a_t, W_t)` on the grid.
    pub fn rates(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.len();
        let h = self.spacing();
        let mut at = vec![0.0; n];
        let mut wt = vec![0.0; n];
        // fourth-order periodic central differences
        let d1 = |f: &[f64], i: usize| {
            let at = |k: usize| f[(i + n + k - 2) % n];
            (8.0 * (at(3) - at(1)) - (at(4) - at(0))) / (12.0 * h)
        };
        let d2 = |f: &[f64], i: usize| {
            let at = |k: usize| f[(i + n + k - 2) % n];
            let c = at(2);
            (16.0 * ((at(1) - c) + (at(3) - c)) - ((at(0) - c) + (at(4) - c))) / (12.0 * h * h)
        };
        for i in 0..n {
            let w1 = d1(&self.w, i);
            let w2 = d2(&self.w, i);
            let a1 = d1(&self.a, i);
            let e = (-2.0 * self.a[i]).exp();
            at[i] = 0.5 * e * w1 * w1;
            wt[i] = e * (w2 - a1 * w1);
        }
        (at, wt)
    }

    /// Periodic four-point Lagrange interpolation of a grid field.
    pub fn interpolate(values: &[f64], theta: f64) -> f64 {
        let n = values.len();
        let h = 2.0 * PI / n as f64;
        let x = theta.rem_euclid(2.0 * PI) / h;
        let i0 = x.floor() as i64;
        let s = x - i0 as f64;
        let nodes = [-1.0, 0.0, 1.0, 2.0];
        let mut acc = 0.0;
        for (k, &xk) in nodes.iter().enumerate() {
            let mut wgt = 1.0;
            for (m, &xm) in nodes.iter().enumerate() {
                if m != k {
                    wgt *= (s - xm) / (xk - xm);
                }
            }
            acc += wgt * values[(i0 + xk as i64).rem_euclid(n as i64) as usize];
        }
        acc
    }

    /// Metric diagonal `(g_xx, g_yy, g_theta_theta)` at `theta`.
    pub fn metric_at(&self, theta: f64) -> [f64; 3] {
        let w = Self::interpolate(&self.w, theta);
        let a = Self::interpolate(&self.a, theta);
        [(self.f + w).exp(), (self.f - w).exp(), (2.0 * a).exp()]
    }

    fn axpy(&self, k: &(Vec<f64>, Vec<f64>), h: f64) -> Self {
        Self {
            t: self.t + h,
            f: self.f,
            a: self.a.iter().zip(&k.0).map(|(x, d)| x + h * d).collect(),
            w: self.w.iter().zip(&k.1).map(|(x, d)| x + h * d).collect(),
        }
    }

    /// One classical Runge-Kutta step.
    pub fn rk4_step(&self, dt: f64) -> Self {
        let k1 = self.rates();
        let k2 = self.axpy(&k1, 0.5 * dt).rates();
        let k3 = self.axpy(&k2, 0.5 * dt).rates();
        let k4 = self.axpy(&k3, dt).rates();
        let n = self.len();
        let mut next = self.clone();
        next.t = self.t + dt;
        for i in 0..n {
            next.a[i] += dt / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]);
            next.w[i] += dt / 6.0 * (k1.1[i] + 2.0 * k2.1[i] + 2.0 * k3.1[i] + k4.1[i]);
        }
        next
    }

    /// Largest step for which classical RK4 damps the stiffest diffusive mode.
    pub fn stable_step(&self) -> f64 {
        let h = self.spacing();
        let speed = self.a.iter().map(|a| (-2.0 * a).exp()).fold(0.0, f64::max);
        2.78 * h * h / (16.0 / 3.0 * speed)
    }

    fn blown_up(&self) -> bool {
        self.a.iter().chain(&self.w).any(|x| !x.is_finite() || x.abs() > 1e6)
    }
}

/// Integrates the initial data `W = 0.1 sin(theta)` on `n` points, returning the
/// state at each of the (non-decreasing) requested times.
pub fn gowdy_pde_solve(n: usize, dt: f64, times: &[f64]) -> Result<Vec<GowdyState>> {
    if n < 8 {
        return Err(Error::Config(format!("PDE grid needs at least 8 points, got {n}")));
    }
    if !(dt > 0.0) {
        return Err(Error::Config(format!("time step must be positive, got {dt}")));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::Config("requested times must be non-negative and sorted".into()));
    }
    let mut state = GowdyState::initial(n, 0.1);
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while state.t < target - 1e-12 {
            let h = dt.min(target - state.t);
            if h > state.stable_step() {
                return Err(Error::Config(format!(
                    "time step {h} exceeds the stability limit {} at t = {}",
                    state.stable_step(),
                    state.t
                )));
            }
            state = state.rk4_step(h);
            if state.blown_up() {
                return Err(Error::PdeBlowUp { t: state.t });
            }
        }
        state.t = target;
        out.push(state.clone());
    }
    Ok(out)
}

/// Default step for an `n`-point grid, well inside the diffusive stability limit.
pub fn default_pde_step(n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    0.2 * h * h
}

/// Observed order of the solver from grids of `n`, `2n` and `4n` points at `t_end`.
pub fn pde_self_convergence(n: usize, t_end: f64) -> Result<f64> {
    let solve = |m: usize| gowdy_pde_solve(m, default_pde_step(4 * n), &[t_end]).map(|mut s| s.remove(0));
    let (c, m, f) = (solve(n)?, solve(2 * n)?, solve(4 * n)?);
    let mut e1 = 0.0f64;
    let mut e2 = 0.0f64;
    for i in 0..n {
        e1 = e1.max((c.w[i] - m.w[2 * i]).abs()).max((c.a[i] - m.a[2 * i]).abs());
        e2 = e2.max((m.w[2 * i] - f.w[4 * i]).abs()).max((m.a[2 * i] - f.a[4 * i]).abs());
    }
    Ok((e1 / e2).log2())
}

/// Orthonormal-frame Ricci components of a Gowdy state, on its grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GowdyCurvatures {
    pub scalar: Vec<f64>,
    /// `Rc(x^, x^)`, `Rc(y^, y^)`, `Rc(theta^, theta^)`.
    pub ricci: [Vec<f64>; 3],
}

impl GowdyCurvatures {
    /// Reads the curvature off the flow equation `dg/dt = -2 Rc`.
    pub fn of(state: &GowdyState) -> Self {
        let (at, wt) = state.rates();
        let rxx: Vec<f64> = wt.iter().map(|w| -0.5 * w).collect();
        let ryy: Vec<f64> = wt.iter().map(|w| 0.5 * w).collect();
        let rtt: Vec<f64> = at.iter().map(|a| -a).collect();
        Self { scalar: rtt.clone(), ricci: [rxx, ryy, rtt] }
    }

    pub fn scalar_at(&self, theta: f64) -> f64 {
        GowdyState::interpolate(&self.scalar, theta)
    }

    /// Frame components at `theta`.
    pub fn ricci_at(&self, theta: f64) -> [f64; 3] {
        std::array::from_fn(|k| GowdyState::interpolate(&self.ricci[k], theta))
    }

    /// `Rc(u, u) / g(u, u)` for a coordinate direction `u` at `theta`.
    pub fn ricci_along(&self, state: &GowdyState, theta: f64, u: [f64; 3]) -> f64 {
        let g = state.metric_at(theta);
        let rc = self.ricci_at(theta);
        let norm: f64 = (0..3).map(|k| g[k] * u[k] * u[k]).sum();
        (0..3).map(|k| rc[k] * g[k] * u[k] * u[k]).sum::<f64>() / norm
    }

    /// `(1 / 2 pi) * integral of sqrt(Rc^i_j Rc^j_i) over theta`.
    pub fn mean_magnitude(&self) -> f64 {
        let n = self.scalar.len();
        (0..n)
            .map(|i| self.ricci.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
            .sum::<f64>()
            / n as f64
    }
}
