use std::f64::consts::PI;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

/// Smooth coordinate metrics of the reference geometries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MetricField {
    Flat,
    /// `dx^2 + dy^2 + (dz + lambda x dy)^2`
    Nil { lambda: f64 },
    /// `e^W dx^2 + e^-W dy^2 + dtheta^2` with `W = amplitude sin(theta)`, theta the third axis.
    Gowdy { amplitude: f64 },
    /// Three-torus embedded in four-space, coordinates (theta, phi, psi).
    Torus4 { r_theta: f64, r_phi: f64, r_psi: f64 },
    /// Conformally flat, factor `1 + amplitude |sin(pi x) sin(pi y) sin(pi z)|`.
    Perturbed { amplitude: f64 },
}

impl MetricField {
    pub const GOWDY: Self = Self::Gowdy { amplitude: 0.1 };
    pub const TORUS4: Self = Self::Torus4 { r_theta: 1.0, r_phi: 2.0, r_psi: 4.0 };
    pub const PERTURBED: Self = Self::Perturbed { amplitude: 0.2 };

    pub fn eval(&self, x: [f64; 3]) -> Matrix3<f64> {
        match *self {
            Self::Flat => Matrix3::identity(),
            Self::Nil { lambda } => {
                let lx = lambda * x[0];
                Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0 + lx * lx, lx, 0.0, lx, 1.0)
            }
            Self::Gowdy { amplitude } => {
                let w = amplitude * x[2].sin();
                Matrix3::from_diagonal(&[w.exp(), (-w).exp(), 1.0].into())
            }
            Self::Torus4 { r_theta, r_phi, r_psi } => {
                let a = r_phi + r_theta * x[0].cos();
                let b = r_psi + a * x[1].cos();
                Matrix3::from_diagonal(&[r_theta * r_theta, a * a, b * b].into())
            }
            Self::Perturbed { amplitude } => {
                let s = (PI * x[0]).sin() * (PI * x[1]).sin() * (PI * x[2]).sin();
                Matrix3::identity() * (1.0 + amplitude * s.abs())
            }
        }
    }

    /// Partial derivatives of the metric along each coordinate.
    pub fn partials(&self, x: [f64; 3]) -> [Matrix3<f64>; 3] {
        let zero = Matrix3::zeros();
        match *self {
            Self::Flat => [zero; 3],
            Self::Nil { lambda } => {
                let lx = lambda * x[0];
                let dx = Matrix3::new(0.0, 0.0, 0.0, 0.0, 2.0 * lambda * lx, lambda, 0.0, lambda, 0.0);
                [dx, zero, zero]
            }
            Self::Gowdy { amplitude } => {
                let w = amplitude * x[2].sin();
                let dw = amplitude * x[2].cos();
                let d = Matrix3::from_diagonal(&[dw * w.exp(), -dw * (-w).exp(), 0.0].into());
                [zero, zero, d]
            }
            Self::Torus4 { r_theta, r_phi, r_psi } => {
                let a = r_phi + r_theta * x[0].cos();
                let b = r_psi + a * x[1].cos();
                let da_dt = -r_theta * x[0].sin();
                let d0 = Matrix3::from_diagonal(&[0.0, 2.0 * a * da_dt, 2.0 * b * da_dt * x[1].cos()].into());
                let d1 = Matrix3::from_diagonal(&[0.0, 0.0, -2.0 * b * a * x[1].sin()].into());
                [d0, d1, zero]
            }
            Self::Perturbed { amplitude } => {
                let s = x.map(|c| (PI * c).sin());
                let c = x.map(|c| PI * (PI * c).cos());
                // zero on the fold planes, where the factor is minimal
                let prod = s[0] * s[1] * s[2];
                let sign = if prod.abs() < 1e-12 { 0.0 } else { prod.signum() };
                [
                    Matrix3::identity() * (amplitude * sign * c[0] * s[1] * s[2]),
                    Matrix3::identity() * (amplitude * sign * s[0] * c[1] * s[2]),
                    Matrix3::identity() * (amplitude * sign * s[0] * s[1] * c[2]),
                ]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(MetricField::Nil { lambda: 1.0 }.eval([0.0, 0.3, 0.2]), Matrix3::identity());
        assert!((MetricField::TORUS4.eval([0.0, 0.0, 1.0])[(2, 2)] - 49.0).abs() < 1e-14);
        let g = MetricField::PERTURBED.eval([0.5; 3]);
        assert!((g - Matrix3::identity() * 1.2).norm() < 1e-15);
    }

    #[test]
    fn partials_match_finite_differences() {
        let fields = [
            MetricField::Nil { lambda: -2.0 },
            MetricField::GOWDY,
            MetricField::TORUS4,
            MetricField::PERTURBED,
        ];
        let x = [0.3, 0.7, 0.45];
        for f in fields {
            let d = f.partials(x);
            for k in 0..3 {
                let h = 1e-6;
                let mut p = x;
                let mut m = x;
                p[k] += h;
                m[k] -= h;
                let fd = (f.eval(p) - f.eval(m)) / (2.0 * h);
                assert!((fd - d[k]).norm() < 1e-8, "{f:?} axis {k}");
            }
        }
    }
}
