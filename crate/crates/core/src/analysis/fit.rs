//! Two-parameter nonlinear least squares for the decay and power-law models.

use std::collections::BTreeMap;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitModel {
    /// `(1 + a t)^b`
    Power,
    /// `c exp(-k t)`
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    /// `[a, b]` for the power model, `[c, k]` for the exponential one.
    pub params: [f64; 2],
    pub r_squared: f64,
}

impl FitResult {
    pub fn a(&self) -> f64 {
        self.params[0]
    }

    pub fn b(&self) -> f64 {
        self.params[1]
    }

    /// Decay rate `k` of an exponential fit.
    pub fn rate(&self) -> f64 {
        self.params[1]
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.model {
            FitModel::Power => (1.0 + self.params[0] * t).powf(self.params[1]),
            FitModel::Exponential => self.params[0] * (-self.params[1] * t).exp(),
        }
    }

    pub fn record(&self, series: impl Into<String>) -> FitRecord {
        let names = match self.model {
            FitModel::Power => ["a", "b"],
            FitModel::Exponential => ["c", "k"],
        };
        FitRecord {
            series: series.into(),
            model: self.model,
            params: names.iter().map(|n| n.to_string()).zip(self.params).collect(),
            r_squared: self.r_squared,
        }
    }
}

/// A named fit, as written to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub series: String,
    pub model: FitModel,
    pub params: BTreeMap<String, f64>,
    pub r_squared: f64,
}

fn check_samples(t: &[f64], f: &[f64]) -> Result<()> {
    if t.len() != f.len() {
        return Err(Error::FitFailed(format!("{} times but {} values", t.len(), f.len())));
    }
    if t.len() < 3 {
        return Err(Error::FitFailed(format!("need at least 3 samples, got {}", t.len())));
    }
    if t.iter().chain(f).any(|x| !x.is_finite()) {
        return Err(Error::FitFailed("non-finite sample".into()));
    }
    Ok(())
}

fn r_squared(f: &[f64], model: impl Fn(usize) -> f64) -> f64 {
    let mean = f.iter().sum::<f64>() / f.len() as f64;
    let ss_tot: f64 = f.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = f.iter().enumerate().map(|(i, y)| (y - model(i)).powi(2)).sum();
    if ss_tot <= f64::EPSILON * f64::EPSILON * mean * mean * f.len() as f64 {
        return if ss_res <= ss_tot.max(1e-30) { 1.0 } else { 0.0 };
    }
    (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
}

/// Damped Gauss-Newton on a two-parameter model.
///
/// `model(p, i)` returns the prediction at sample `i` and its parameter
/// gradient, or `None` when `p` leaves the admissible region.
fn levenberg_marquardt<M>(f: &[f64], mut p: Vector2<f64>, model: M) -> Result<Vector2<f64>>
where
    M: Fn(&Vector2<f64>, usize) -> Option<(f64, Vector2<f64>)>,
{
    let cost = |p: &Vector2<f64>| -> Option<f64> {
        let mut s = 0.0;
        for (i, y) in f.iter().enumerate() {
            s += (y - model(p, i)?.0).powi(2);
        }
        Some(s)
    };
    let mut c = cost(&p).ok_or_else(|| Error::FitFailed("initial guess outside the model domain".into()))?;
    let mut mu = 1e-3;
    for _ in 0..500 {
        let mut jtj = Matrix2::zeros();
        let mut jtr = Vector2::zeros();
        for (i, y) in f.iter().enumerate() {
            let (m, g) = model(&p, i).expect("current point is admissible");
            jtj += g * g.transpose();
            jtr += g * (y - m);
        }
        if jtr.norm() <= 1e-15 * (1.0 + jtj.norm()) {
            return Ok(p);
        }
        let mut improved = false;
        for _ in 0..40 {
            let damped = jtj + Matrix2::from_diagonal(&jtj.diagonal()) * mu + Matrix2::identity() * (1e-300);
            let Some(step) = damped.try_inverse().map(|inv| inv * jtr) else {
                mu *= 10.0;
                continue;
            };
            let cand = p + step;
            match cost(&cand) {
                Some(cc) if cc <= c => {
                    let done = step.norm() <= 1e-14 * (1.0 + p.norm()) || c - cc <= 1e-15 * c.max(1e-300);
                    p = cand;
                    c = cc;
                    mu = (mu * 0.3).max(1e-12);
                    improved = true;
                    if done {
                        return Ok(p);
                    }
                    break;
                }
                _ => mu *= 10.0,
            }
        }
        if !improved {
            return Ok(p);
        }
    }
    Err(Error::FitFailed("iteration cap reached".into()))
}

/// Fits `f(t) = (1 + a t)^b`.
///
/// Starting values come from a scan over `a` with `b` solved by least squares
/// on the log-log linearization. A constant series gives `a = b = 0`.
pub fn fit_power(t: &[f64], f: &[f64]) -> Result<FitResult> {
    check_samples(t, f)?;
    if f.iter().any(|&y| y <= 0.0) {
        return Err(Error::FitFailed("power model needs positive values".into()));
    }
    let logs: Vec<f64> = f.iter().map(|y| y.ln()).collect();
    if logs.iter().all(|l| l.abs() < 1e-15) {
        return Ok(FitResult { model: FitModel::Power, params: [0.0, 0.0], r_squared: 1.0 });
    }
    let t_max = t.iter().cloned().fold(0.0, f64::max);
    let t_min = t.iter().cloned().fold(0.0, f64::min);
    let admissible = |a: f64| t.iter().all(|&ti| 1.0 + a * ti > 0.0);
    let log_b = |a: f64| {
        let (num, den) = t.iter().zip(&logs).fold((0.0, 0.0), |(n, d), (&ti, &l)| {
            let x = (a * ti).ln_1p();
            (n + x * l, d + x * x)
        });
        num / den
    };
    let scale = 1.0 / (t_max - t_min).max(f64::MIN_POSITIVE);
    let mut best: Option<(f64, f64, f64)> = None;
    for e in -400..=400 {
        for sign in [1.0, -1.0] {
            let a = sign * scale * 10f64.powf(e as f64 / 100.0);
            if !admissible(a) {
                continue;
            }
            let b = log_b(a);
            let ssr: f64 = t.iter().zip(f).map(|(&ti, &y)| (y - ((a * ti).ln_1p() * b).exp()).powi(2)).sum();
            if ssr.is_finite() && best.is_none_or(|(_, _, s)| ssr < s) {
                best = Some((a, b, ssr));
            }
        }
    }
    let (a0, b0, _) = best.ok_or_else(|| Error::FitFailed("no admissible starting point".into()))?;
    let p = levenberg_marquardt(f, Vector2::new(a0, b0), |p, i| {
        let base = 1.0 + p[0] * t[i];
        if base <= 0.0 {
            return None;
        }
        let v = base.powf(p[1]);
        Some((v, Vector2::new(p[1] * t[i] * v / base, base.ln() * v)))
    })?;
    let params = [p[0], p[1]];
    let r2 = r_squared(f, |i| (1.0 + params[0] * t[i]).powf(params[1]));
    Ok(FitResult { model: FitModel::Power, params, r_squared: r2 })
}

/// Fits `f(t) = c exp(-k t)`, starting from a linear fit of `ln |f|`.
pub fn fit_exponential(t: &[f64], f: &[f64]) -> Result<FitResult> {
    check_samples(t, f)?;
    let sign = f[0].signum();
    if f.iter().any(|&y| y == 0.0 || y.signum() != sign) {
        return Err(Error::FitFailed("exponential model needs values of one sign".into()));
    }
    let n = t.len() as f64;
    let logs: Vec<f64> = f.iter().map(|y| y.abs().ln()).collect();
    let (mt, ml) = (t.iter().sum::<f64>() / n, logs.iter().sum::<f64>() / n);
    let sxx: f64 = t.iter().map(|ti| (ti - mt).powi(2)).sum();
    let sxy: f64 = t.iter().zip(&logs).map(|(ti, l)| (ti - mt) * (l - ml)).sum();
    if sxx == 0.0 {
        return Err(Error::FitFailed("all samples at one time".into()));
    }
    let k0 = -sxy / sxx;
    let c0 = sign * (ml + k0 * mt).exp();
    let p = levenberg_marquardt(f, Vector2::new(c0, k0), |p, i| {
        let e = (-p[1] * t[i]).exp();
        Some((p[0] * e, Vector2::new(e, -t[i] * p[0] * e)))
    })?;
    let params = [p[0], p[1]];
    let r2 = r_squared(f, |i| params[0] * (-params[1] * t[i]).exp());
    Ok(FitResult { model: FitModel::Exponential, params, r_squared: r2 })
}
