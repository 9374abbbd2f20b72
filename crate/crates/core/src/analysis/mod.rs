//! Reference solutions and observables for comparing flows against the smooth theory.

mod curves;
mod fit;
mod gowdy;
mod nil;
mod observe;

pub use curves::{aligned_cycles, integral_curve_lengths, AlignedCycle};
pub use fit::{fit_exponential, fit_power, FitModel, FitRecord, FitResult};
pub use nil::{nil_abc_series, nil_analytic, nil_analytic_params, nil_extract_abc, NilAbc};
pub use gowdy::{default_pde_step, gowdy_pde_solve, pde_self_convergence, GowdyCurvatures, GowdyState};
pub use observe::{rc_error_percent, rc_error_table, smooth_edge_ricci, weighted_averages, ThetaProbe};
