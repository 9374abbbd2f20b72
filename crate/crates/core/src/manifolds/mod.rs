//! Reference geometries, their block triangulations and geodesic edge lengths.

mod geodesic;
mod metric;

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use geodesic::{geodesic_length, Geodesic, GeodesicSolver};
pub use metric::MetricField;

use crate::complex::{tile_and_identify, BlockKind, BlockSpec, EdgeId, GridSpec, Identification, SimplicialComplex3};
use crate::error::{Error, Result};
use crate::flow::{EdgeLengthState, FlowConfig};
use crate::numfmt::sig17;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "manifold", rename_all = "lowercase")]
pub enum ManifoldKind {
    Nil { lambda: f64, blocks: usize },
    Gowdy { blocks: usize },
    Torus4 { grid: [usize; 2] },
    Perturbed { n: usize },
    Flat { n: usize },
}

/// A triangulated manifold with its initial edge lengths.
#[derive(Debug, Clone)]
pub struct ManifoldBuild {
    pub kind: ManifoldKind,
    pub block: BlockKind,
    pub complex: SimplicialComplex3,
    pub initial: EdgeLengthState,
    pub metric: MetricField,
    /// Coordinate extents of the triangulated domain.
    pub extents: [f64; 3],
    /// Copies of the domain along each axis that tile the full manifold.
    pub copies: [usize; 3],
    /// Edges whose geodesic relaxation fell back to the straight segment.
    pub geodesic_fallbacks: usize,
}

impl ManifoldBuild {
    pub fn total_copies(&self) -> usize {
        self.copies.iter().product()
    }

    /// Flow settings for this build; diamond grids are not flattened.
    pub fn flow_config(&self, dt: f64, steps: usize) -> FlowConfig {
        FlowConfig::new(dt, steps).flatten(self.block != BlockKind::Diamond)
    }

    pub fn edge_coordinates(&self, e: EdgeId) -> [[f64; 3]; 2] {
        self.complex.edge_endpoints(e)
    }

    pub fn write_lengths_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "edge_id,length")?;
        for (e, l) in self.initial.lengths().iter().enumerate() {
            writeln!(w, "{e},{}", sig17(*l))?;
        }
        Ok(())
    }
}

/// Geodesic lengths of every edge between the coordinates of its canonical lift.
pub fn geodesic_lengths(complex: &SimplicialComplex3, metric: &MetricField) -> (EdgeLengthState, usize) {
    let solver = GeodesicSolver::default();
    let results: Vec<Geodesic> = (0..complex.num_edges())
        .into_par_iter()
        .map(|e| {
            let [p, q] = complex.edge_endpoints(EdgeId(e));
            solver.solve(metric, p, q)
        })
        .collect();
    let fallbacks = results.iter().filter(|g| !g.converged).count();
    (EdgeLengthState::new(results.iter().map(|g| g.length).collect()), fallbacks)
}

fn assemble(
    kind: ManifoldKind,
    spec: BlockSpec,
    grid: GridSpec,
    metric: MetricField,
    copies: [usize; 3],
) -> Result<ManifoldBuild> {
    let complex = tile_and_identify(&spec, &grid)?;
    let (initial, geodesic_fallbacks) = geodesic_lengths(&complex, &metric);
    Ok(ManifoldBuild {
        kind,
        block: spec.kind,
        extents: grid.extents,
        complex,
        initial,
        metric,
        copies,
        geodesic_fallbacks,
    })
}

/// Nil geometry on a row of cubic blocks along x.
///
/// For lambda > 0 the domain is `[0,1] x [0,1/n]^2`; otherwise it is
/// `[0,1/2] x [0,1/(2n)]^2` with the z-reflected decomposition.
pub fn build_nil(blocks: usize, lambda: f64) -> Result<ManifoldBuild> {
    if blocks == 0 {
        return Err(Error::InvalidGrid("Nil grid needs at least one block".into()));
    }
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::Config(format!("Nil twist lambda must be non-zero, got {lambda}")));
    }
    let n = blocks as f64;
    let (x_extent, side) = if lambda > 0.0 { (1.0, 1.0 / n) } else { (0.5, 0.5 / n) };
    let grid = GridSpec {
        counts: [blocks, 1, 1],
        extents: [x_extent, side, side],
        origin: [0.0; 3],
        identification: Identification::NilTwist { lambda },
    };
    // copies recovering x, y in [0,1] and z in [0,|lambda|]
    let copies = [
        (1.0 / x_extent).round() as usize,
        (1.0 / side).round() as usize,
        (lambda.abs() / side).round() as usize,
    ];
    assemble(
        ManifoldKind::Nil { lambda, blocks },
        BlockSpec::nil_matched(),
        grid,
        MetricField::Nil { lambda },
        copies,
    )
}

/// Gowdy initial data on `[0,s]^2 x [0,2pi]` with `blocks` blocks along theta.
pub fn build_gowdy(kind: BlockKind, blocks: usize) -> Result<ManifoldBuild> {
    if blocks == 0 {
        return Err(Error::InvalidGrid("Gowdy grid needs at least one block".into()));
    }
    let s = 6.0 / blocks as f64;
    let spec = BlockSpec::of_kind(kind);
    let grid = GridSpec::periodic([1, 1, blocks], [s, s, 2.0 * PI]);
    let copies = [(2.0 / s).round().max(1.0) as usize, (2.0 / s).round().max(1.0) as usize, 1];
    assemble(ManifoldKind::Gowdy { blocks }, spec, grid, MetricField::GOWDY, copies)
}

/// Three-torus from four-space on an `n_theta x n_phi` grid, one block thick in psi.
pub fn build_torus4(kind: BlockKind, grid: [usize; 2]) -> Result<ManifoldBuild> {
    if kind == BlockKind::Skew {
        return Err(Error::Unsupported(
            "skew blocks need at least three layers in psi; use cubic or diamond".into(),
        ));
    }
    if grid.contains(&0) {
        return Err(Error::InvalidGrid(format!("torus grid must be non-empty, got {grid:?}")));
    }
    let psi_copies = 2 * grid[0];
    let spec = GridSpec::periodic([grid[0], grid[1], 1], [2.0 * PI, 2.0 * PI, 2.0 * PI / psi_copies as f64]);
    assemble(
        ManifoldKind::Torus4 { grid },
        BlockSpec::of_kind(kind),
        spec,
        MetricField::TORUS4,
        [1, 1, psi_copies],
    )
}

/// Perturbed flat torus on an `n^3` grid over the unit cube.
pub fn build_perturbed(kind: BlockKind, n: usize) -> Result<ManifoldBuild> {
    build_unit_cube(kind, n, MetricField::PERTURBED, ManifoldKind::Perturbed { n })
}

/// Flat unit torus on an `n^3` grid.
pub fn build_flat(kind: BlockKind, n: usize) -> Result<ManifoldBuild> {
    build_unit_cube(kind, n, MetricField::Flat, ManifoldKind::Flat { n })
}

fn build_unit_cube(kind: BlockKind, n: usize, metric: MetricField, tag: ManifoldKind) -> Result<ManifoldBuild> {
    if n == 0 {
        return Err(Error::InvalidGrid("grid needs at least one block".into()));
    }
    let (spec, identification) = match kind {
        BlockKind::Skew if n % 2 == 1 => {
            return Err(Error::Unsupported(format!(
                "skew blocks need an even grid on the unit torus, got {n}^3"
            )))
        }
        BlockKind::Skew => (BlockSpec::skew_even(), Identification::Coordinate),
        other => (BlockSpec::of_kind(other), Identification::Grid),
    };
    let grid = GridSpec { counts: [n; 3], extents: [1.0; 3], origin: [0.0; 3], identification };
    assemble(tag, spec, grid, metric, [1, 1, 1])
}
