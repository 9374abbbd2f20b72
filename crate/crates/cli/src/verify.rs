//! The invariant suite behind `ricci-mesh verify`.

use std::fmt;

use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ricci_mesh::analysis::pde_self_convergence;
use ricci_mesh::flat_geometry::{edge_neighbourhood, monte_carlo_edge_volume, Geometry};
use ricci_mesh::flow::evolve;
use ricci_mesh::manifolds::build_flat;
use ricci_mesh::{BlockKind, EdgeId, EdgeLengthState, FlowConfig};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub block: BlockKind,
    pub n: usize,
    /// Relative amplitude of seeded random length noise; 0 keeps the flat lattice.
    pub perturb: f64,
    pub seed: u64,
    pub samples: usize,
    pub steps: usize,
    pub dt: f64,
    /// Coarsest grid of the PDE self-convergence check; 0 skips it.
    pub pde_points: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            block: BlockKind::Cubic,
            n: 3,
            perturb: 0.0,
            seed: 0,
            samples: 1_000_000,
            steps: 100,
            dt: 0.01,
            pde_points: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    /// `value` must stay below `limit` when true, reach it otherwise.
    pub upper: bool,
}

impl Check {
    pub fn passed(&self) -> bool {
        if self.upper {
            self.value < self.limit
        } else {
            self.value >= self.limit
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let op = if self.upper { "<" } else { ">=" };
        write!(f, "{verdict} {:<24} {:.6e} {op} {:e}", self.name, self.value, self.limit)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<Check>,
    /// Monte-Carlo estimate of the first edge volume.
    pub monte_carlo_volume: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

fn jiggle(state: &EdgeLengthState, amount: f64, seed: u64) -> EdgeLengthState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    EdgeLengthState::new(
        state
            .lengths()
            .iter()
            .map(|l| l * (1.0 + amount * rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

pub fn verify(config: &VerifyConfig) -> Result<VerifyReport> {
    let build = build_flat(config.block, config.n)?;
    let complex = &build.complex;
    let perturbed = config.perturb > 0.0;
    let initial = if perturbed {
        jiggle(&build.initial, config.perturb, config.seed)
    } else {
        build.initial.clone()
    };
    // a jiggled state is not flat, so only the identities are checked on it
    let flow = FlowConfig::new(config.dt, config.steps).flatten(!perturbed && config.block != BlockKind::Diamond);
    let trace = evolve(complex, &initial, &flow);
    let mut checks = Vec::new();

    if !perturbed {
        let first = trace.records.first().context("flow produced no records")?;
        checks.push(Check { name: "flat_max_deficit", value: first.report.max_abs_deficit(), limit: 1e-12, upper: true });
        checks.push(Check { name: "flat_max_ricci", value: first.report.max_abs_ricci(), limit: 1e-12, upper: true });
        let drift = trace
            .records
            .windows(2)
            .flat_map(|w| w[0].state.lengths().iter().zip(w[1].state.lengths()).map(|(a, b)| (b / a - 1.0).abs()))
            .fold(0.0, f64::max);
        let drift = if trace.is_complete() { drift } else { f64::INFINITY };
        checks.push(Check { name: "flat_step_drift", value: drift, limit: 1e-12, upper: true });
    }

    let regge = trace.records.iter().map(|r| r.report.regge_residual()).fold(0.0, f64::max);
    checks.push(Check { name: "regge_identity", value: regge, limit: 1e-10, upper: true });
    let partition = trace
        .records
        .iter()
        .map(|r| {
            let dual: f64 = r.report.vertex_volumes.iter().sum();
            (dual - r.report.total_volume).abs() / r.report.total_volume
        })
        .fold(0.0, f64::max);
    checks.push(Check { name: "volume_partition", value: partition, limit: 1e-10, upper: true });

    let geo = Geometry::new(complex, &initial)?;
    let exact = edge_neighbourhood(complex, &geo, EdgeId(0)).volume;
    let monte_carlo_volume = monte_carlo_edge_volume(complex, &geo, EdgeId(0), config.samples, config.seed);
    checks.push(Check {
        name: "edge_volume_monte_carlo",
        value: (monte_carlo_volume - exact).abs() / exact,
        limit: 5e-3,
        upper: true,
    });

    if config.pde_points > 0 {
        let order = pde_self_convergence(config.pde_points, 0.7)?;
        checks.push(Check { name: "pde_self_convergence", value: order, limit: 2.0, upper: false });
    }
    Ok(VerifyReport { config: config.clone(), checks, monte_carlo_volume })
}
