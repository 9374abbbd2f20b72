//! Deficit angles and the edge, vertex and global curvatures built from them.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{EdgeId, SimplicialComplex3, VertexId};
use crate::error::Result;
use crate::flat_geometry::{edge_neighbourhood, vertex_volumes, EdgeNeighbourhood, Geometry};
use crate::flow::EdgeLengthState;
use crate::numfmt::sig17;

/// Incident edges count toward the orthogonal sectional curvature when their
/// direction has at least this cosine with the edge.
pub const MEMBERSHIP_COS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub lengths: Vec<f64>,
    pub deficits: Vec<f64>,
    pub edge_volumes: Vec<f64>,
    pub k_perp: Vec<f64>,
    pub ricci: Vec<f64>,
    pub vertex_volumes: Vec<f64>,
    pub vertex_scalar: Vec<f64>,
    pub total_volume: f64,
    pub global_scalar: f64,
}

pub fn deficits(complex: &SimplicialComplex3, geo: &Geometry) -> Vec<f64> {
    complex
        .edge_tets
        .iter()
        .map(|ring| 2.0 * PI - ring.iter().map(|&(t, k)| geo.dihedrals[t.0][k as usize]).sum::<f64>())
        .collect()
}

fn regge_weights(state: &EdgeLengthState, deficits: &[f64]) -> Vec<f64> {
    deficits.iter().zip(state.lengths()).map(|(e, l)| e * l).collect()
}

fn vertex_scalars(complex: &SimplicialComplex3, weights: &[f64], volumes: &[f64]) -> Vec<f64> {
    let mut sums = vec![0.0; complex.num_vertices()];
    for (e, w) in weights.iter().enumerate() {
        for v in complex.edges[e].vertices {
            sums[v.0] += w;
        }
    }
    sums.iter().zip(volumes).map(|(s, v)| s / v).collect()
}

fn k_perp_of(nb: &EdgeNeighbourhood, state: &EdgeLengthState, weights: &[f64], deficits: &[f64]) -> f64 {
    let mut sum = weights[nb.edge.0];
    for end in &nb.incident {
        for j in end {
            if j.cos_theta > MEMBERSHIP_COS {
                sum += 0.5 * state.length(j.edge) * j.cos_theta * j.cos_theta * deficits[j.edge.0];
            }
        }
    }
    sum / nb.volume
}

impl CurvatureReport {
    pub fn from_geometry(complex: &SimplicialComplex3, state: &EdgeLengthState, geo: &Geometry) -> Self {
        let deficits = deficits(complex, geo);
        let weights = regge_weights(state, &deficits);
        let vertex_volumes = vertex_volumes(complex, geo);
        let vertex_scalar = vertex_scalars(complex, &weights, &vertex_volumes);
        let total_volume = geo.total_volume();
        let global_scalar = 2.0 * weights.iter().sum::<f64>() / total_volume;
        let per_edge: Vec<(f64, f64, f64)> = (0..complex.num_edges())
            .into_par_iter()
            .map(|e| {
                let nb = edge_neighbourhood(complex, geo, EdgeId(e));
                let k = k_perp_of(&nb, state, &weights, &deficits);
                let [a, b] = complex.edges[e].vertices;
                let rc = 0.25 * (vertex_scalar[a.0] + vertex_scalar[b.0]) - k;
                (nb.volume, k, rc)
            })
            .collect();
        Self {
            lengths: state.lengths().to_vec(),
            edge_volumes: per_edge.iter().map(|x| x.0).collect(),
            k_perp: per_edge.iter().map(|x| x.1).collect(),
            ricci: per_edge.iter().map(|x| x.2).collect(),
            deficits,
            vertex_volumes,
            vertex_scalar,
            total_volume,
            global_scalar,
        }
    }

    /// Sum of |l| eps over all edges.
    pub fn regge_sum(&self) -> f64 {
        self.lengths.iter().zip(&self.deficits).map(|(l, e)| l * e).sum()
    }

    /// Relative mismatch of sum V_v R_v against twice the Regge sum.
    pub fn regge_residual(&self) -> f64 {
        let lhs: f64 = self.vertex_volumes.iter().zip(&self.vertex_scalar).map(|(v, r)| v * r).sum();
        let rhs = 2.0 * self.regge_sum();
        let scale: f64 = self
            .lengths
            .iter()
            .zip(&self.deficits)
            .map(|(l, e)| (l * e).abs())
            .sum::<f64>()
            .max(f64::MIN_POSITIVE);
        (lhs - rhs).abs() / (2.0 * scale)
    }

    /// Length-weighted means of |Rc| and |eps|.
    pub fn weighted_means(&self) -> (f64, f64) {
        let total: f64 = self.lengths.iter().sum();
        let rc: f64 = self.lengths.iter().zip(&self.ricci).map(|(l, r)| l * r.abs()).sum();
        let eps: f64 = self.lengths.iter().zip(&self.deficits).map(|(l, e)| l * e.abs()).sum();
        (rc / total, eps / total)
    }

    pub fn max_abs_deficit(&self) -> f64 {
        self.deficits.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_ricci(&self) -> f64 {
        self.ricci.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn write_edge_csv<W: Write>(&self, complex: &SimplicialComplex3, mut w: W) -> std::io::Result<()> {
        writeln!(w, "edge_id,v1,v2,length,deficit,K_perp,Rc")?;
        for e in 0..self.lengths.len() {
            let [a, b] = complex.edges[e].vertices;
            writeln!(
                w,
                "{e},{},{},{},{},{},{}",
                a.0,
                b.0,
                sig17(self.lengths[e]),
                sig17(self.deficits[e]),
                sig17(self.k_perp[e]),
                sig17(self.ricci[e])
            )?;
        }
        Ok(())
    }

    pub fn write_vertex_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "vertex_id,V_v,R_v")?;
        for v in 0..self.vertex_volumes.len() {
            writeln!(w, "{v},{},{}", sig17(self.vertex_volumes[v]), sig17(self.vertex_scalar[v]))?;
        }
        Ok(())
    }
}

pub fn full_report(complex: &SimplicialComplex3, state: &EdgeLengthState) -> Result<CurvatureReport> {
    let geo = Geometry::new(complex, state)?;
    Ok(CurvatureReport::from_geometry(complex, state, &geo))
}

pub fn deficit_angle(complex: &SimplicialComplex3, state: &EdgeLengthState, e: EdgeId) -> Result<f64> {
    let mut sum = 0.0;
    for &(t, k) in &complex.edge_tets[e.0] {
        let l = crate::flat_geometry::TetLengths::of_tet(complex, state, t);
        sum += crate::flat_geometry::dihedral_angle(&l, k as usize)?;
    }
    Ok(2.0 * PI - sum)
}

pub fn sectional_orthogonal(complex: &SimplicialComplex3, state: &EdgeLengthState, e: EdgeId) -> Result<f64> {
    let geo = Geometry::new(complex, state)?;
    let d = deficits(complex, &geo);
    let w = regge_weights(state, &d);
    Ok(k_perp_of(&edge_neighbourhood(complex, &geo, e), state, &w, &d))
}

pub fn vertex_scalar(complex: &SimplicialComplex3, state: &EdgeLengthState, v: VertexId) -> Result<f64> {
    let geo = Geometry::new(complex, state)?;
    let d = deficits(complex, &geo);
    let w = regge_weights(state, &d);
    Ok(vertex_scalars(complex, &w, &vertex_volumes(complex, &geo))[v.0])
}

pub fn global_scalar(complex: &SimplicialComplex3, state: &EdgeLengthState) -> Result<f64> {
    let geo = Geometry::new(complex, state)?;
    let d = deficits(complex, &geo);
    Ok(2.0 * regge_weights(state, &d).iter().sum::<f64>() / geo.total_volume())
}

pub fn edge_ricci(complex: &SimplicialComplex3, state: &EdgeLengthState, e: EdgeId) -> Result<f64> {
    let [a, b] = complex.edges[e.0].vertices;
    let k = sectional_orthogonal(complex, state, e)?;
    Ok(0.25 * (vertex_scalar(complex, state, a)? + vertex_scalar(complex, state, b)?) - k)
}
