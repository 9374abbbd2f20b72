use std::collections::BTreeSet;

use super::block::{cubic_template, diamond_template, nil_matched_template, BlockTemplate};
use super::{
    BlockKind, BlockSpec, Chart, DeckGroup, Decomposition, EdgeId, GridSpec, Identification, Lift,
    SimplicialComplex3, TetId, TriId, VertexId,
};
use crate::error::{Error, Result};

/// The template of a single block as described by `spec`.
pub fn build_block(spec: &BlockSpec) -> Result<BlockTemplate> {
    spec.validate()?;
    Ok(match (spec.kind, spec.decomposition) {
        (BlockKind::Diamond, _) => diamond_template(),
        (_, Decomposition::NilMatched) => nil_matched_template(),
        _ => cubic_template(),
    })
}

fn near_integer(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() < 1e-9 * x.abs().max(1.0)).then_some(r as i64)
}

fn chart_for(spec: &BlockSpec, grid: &GridSpec, scale: i64) -> Chart {
    let size = grid.block_size();
    Chart {
        origin: grid.origin,
        axes: std::array::from_fn(|c| {
            std::array::from_fn(|r| size[r] * spec.basis[c][r] / scale as f64)
        }),
    }
}

fn deck_for(spec: &BlockSpec, grid: &GridSpec, chart: &Chart, scale: i64) -> Result<DeckGroup> {
    let n = grid.counts.map(|c| c as i64 * scale);
    match grid.identification {
        Identification::Grid => {
            DeckGroup::translations([[n[0], 0, 0], [0, n[1], 0], [0, 0, n[2]]])
        }
        Identification::Coordinate => {
            // Solve axes * idx = extent * e_a for each coordinate period.
            let m = nalgebra::Matrix3::from_fn(|r, c| chart.axes[c][r]);
            let inv = m
                .try_inverse()
                .ok_or_else(|| Error::InvalidBlock("singular block basis".into()))?;
            let mut periods = [[0i64; 3]; 3];
            for (a, period) in periods.iter_mut().enumerate() {
                let mut target = nalgebra::Vector3::zeros();
                target[a] = grid.extents[a];
                let idx = inv * target;
                for c in 0..3 {
                    period[c] = near_integer(idx[c]).ok_or_else(|| {
                        Error::IncompatibleGrid(format!(
                            "{} grid {:?}: coordinate period {a} is not a lattice vector",
                            spec.kind, grid.counts
                        ))
                    })?;
                }
            }
            DeckGroup::translations(periods)
        }
        Identification::NilTwist { lambda } => {
            if spec.kind != BlockKind::Cubic {
                return Err(Error::Unsupported(format!(
                    "Nil twist identification requires cubic blocks, got {}",
                    spec.kind
                )));
            }
            let size = grid.block_size();
            let twist = near_integer(lambda * grid.extents[0] * size[1] / size[2]).ok_or_else(|| {
                Error::IncompatibleGrid(format!(
                    "twist lambda * X * dy / dz = {} is not an integer",
                    lambda * grid.extents[0] * size[1] / size[2]
                ))
            })?;
            DeckGroup::twisted(n, twist)
        }
    }
}

fn template_for_cell(
    spec: &BlockSpec,
    grid: &GridSpec,
    base_counts: [usize; 3],
    cell: [usize; 3],
) -> Result<BlockTemplate> {
    let mut t = match spec.decomposition {
        Decomposition::NilMatched if cell[0].is_multiple_of(base_counts[0]) => nil_matched_template(),
        Decomposition::NilMatched => cubic_template().reflect_y(),
        _ => build_block(&BlockSpec {
            decomposition: Decomposition::Standard,
            ..spec.clone()
        })?,
    };
    if let Identification::NilTwist { lambda } = grid.identification {
        if lambda < 0.0 {
            t = t.reflect_z();
        }
    }
    Ok(t)
}

/// Tiles a grid of blocks and glues its boundary faces.
pub fn tile_and_identify(spec: &BlockSpec, grid: &GridSpec) -> Result<SimplicialComplex3> {
    spec.validate()?;
    grid.validate()?;
    let scale = build_block(spec)?.scale;
    let chart = chart_for(spec, grid, scale);
    let deck = deck_for(spec, grid, &chart, scale)?;

    let mut tets = Vec::new();
    let mut diagonals = Vec::new();
    let mut seen = BTreeSet::new();
    for i in 0..grid.counts[0] {
        for j in 0..grid.counts[1] {
            for k in 0..grid.counts[2] {
                let t = template_for_cell(spec, grid, grid.counts, [i, j, k])?
                    .translated([i as i64, j as i64, k as i64]);
                for tet in t.tets {
                    if !seen.insert(deck.canonical_simplex(&tet).0) {
                        return Err(Error::IncompatibleGrid(format!(
                            "{} grid {:?} overlaps itself under its identification",
                            spec.kind, grid.counts
                        )));
                    }
                    tets.push(tet);
                }
                diagonals.extend(t.body_diagonals);
            }
        }
    }
    let cells = grid.counts.iter().product::<usize>() as i64;
    if deck.index() != cells * scale.pow(3) {
        return Err(Error::IncompatibleGrid(format!(
            "{} grid {:?} does not cover one fundamental domain",
            spec.kind, grid.counts
        )));
    }

    let complex =
        SimplicialComplex3::assemble(spec.clone(), grid.clone(), deck, chart, &tets, &diagonals);
    let report = complex.validate();
    if !report.is_valid() {
        return Err(Error::InvalidComplex(report.summary()));
    }
    Ok(complex)
}

/// A larger covering complex with maps back to the simplices it covers.
#[derive(Debug, Clone)]
pub struct Covering {
    pub complex: SimplicialComplex3,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
    pub triangle_map: Vec<TriId>,
    pub tet_map: Vec<TetId>,
}

impl Covering {
    /// Pulls an edge-indexed quantity back onto the covering complex.
    pub fn lift_edge_values<T: Clone>(&self, values: &[T]) -> Vec<T> {
        self.edge_map.iter().map(|e| values[e.0].clone()).collect()
    }
}

/// Unrolls the quotient `factors[a]` times along each deck generator.
pub fn covering_duplicate(
    complex: &SimplicialComplex3,
    factors: [usize; 3],
) -> Result<Covering> {
    if factors.contains(&0) {
        return Err(Error::InvalidGrid("duplication factors must be >= 1".into()));
    }
    let f = factors.map(|x| x as i64);
    let sub = complex.deck.power(f)?;
    let deck = &complex.deck;

    let mut tets = Vec::with_capacity(complex.num_tets() * factors.iter().product::<usize>());
    let mut diagonals = Vec::new();
    let shift = |p: Lift, a: i64, b: i64, c: i64| {
        let rows = deck.rows();
        let mut q = p;
        for (gen, pow) in [(2usize, c), (1, b), (0, a)] {
            let r = rows[gen];
            let twist = if gen == 0 { deck.twist() * pow * q[1] } else { 0 };
            q = [q[0] + pow * r[0], q[1] + pow * r[1], q[2] + pow * r[2] - twist];
        }
        q
    };
    let mut seen = BTreeSet::new();
    for a in 0..f[0] {
        for b in 0..f[1] {
            for c in 0..f[2] {
                for t in &complex.tets {
                    let moved = t.lift.map(|p| shift(p, a, b, c));
                    if seen.insert(sub.canonical_simplex(&moved).0) {
                        tets.push(moved);
                    }
                }
                for e in complex.edges.iter().filter(|e| e.body_diagonal) {
                    diagonals.push(e.lift.map(|p| shift(p, a, b, c)));
                }
            }
        }
    }
    if tets.len() != complex.num_tets() * factors.iter().product::<usize>() {
        return Err(Error::IncompatibleGrid(
            "duplication factors do not give a covering".into(),
        ));
    }

    let mut grid = complex.grid.clone();
    for a in 0..3 {
        grid.counts[a] *= factors[a];
        grid.extents[a] *= factors[a] as f64;
    }
    let dup = SimplicialComplex3::assemble(
        complex.block.clone(),
        grid,
        sub,
        complex.chart.clone(),
        &tets,
        &diagonals,
    );
    let vertex_map = dup
        .vertices
        .iter()
        .map(|v| complex.vertex_of(v.lift).expect("covered vertex"))
        .collect();
    let edge_map = dup
        .edges
        .iter()
        .map(|e| complex.edge_of(e.lift).expect("covered edge").0)
        .collect();
    let triangle_map = dup
        .triangles
        .iter()
        .map(|t| complex.triangle_of(t.lift).expect("covered triangle"))
        .collect();
    let tet_map = dup
        .tets
        .iter()
        .map(|t| complex.tet_of(t.lift).expect("covered tet"))
        .collect();
    Ok(Covering {
        complex: dup,
        vertex_map,
        edge_map,
        triangle_map,
        tet_map,
    })
}

/// Smallest per-axis factors that leave at least three vertex labels along every axis.
pub fn unambiguous_factors(complex: &SimplicialComplex3) -> [usize; 3] {
    let per_axis = complex.vertices_per_axis();
    per_axis.map(|n| 3usize.div_ceil(n.max(1)))
}
