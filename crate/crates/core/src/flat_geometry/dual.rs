//! Barycentric vertex volumes and orthogonally truncated edge volumes.
//!
//! Vertex stars are unfolded into one flat chart by gluing tets across shared
//! triangles, breadth first from a tet containing the edge.

use std::collections::{HashMap, VecDeque};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::cell::{corner_cell_of_points, ConvexCell};
use super::tet::{dihedral_angles_of_points, embed_tet, law_of_cosines, TetLengths};
use crate::complex::{local_edge_index, EdgeId, SimplicialComplex3, TetId, VertexId, LOCAL_EDGES};
use crate::error::{Error, Result};
use crate::flow::EdgeLengthState;

type P = Vector3<f64>;

/// Per-tet geometry of one length state.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub lengths: Vec<TetLengths>,
    pub volumes: Vec<f64>,
    pub dihedrals: Vec<[f64; 6]>,
    pub embeddings: Vec<[P; 4]>,
}

impl Geometry {
    pub fn new(complex: &SimplicialComplex3, state: &EdgeLengthState) -> Result<Self> {
        let per_tet: Vec<Result<(TetLengths, f64, [f64; 6], [P; 4])>> = (0..complex.num_tets())
            .into_par_iter()
            .map(|t| {
                let l = TetLengths::of_tet(complex, state, TetId(t));
                let p = embed_tet(&l).map_err(|e| match e {
                    Error::NonRealizable { cm } => Error::DegenerateTet { tet: t, cm },
                    other => other,
                })?;
                let vol = (l.cayley_menger() / 288.0).sqrt();
                Ok((l, vol, dihedral_angles_of_points(&p), p))
            })
            .collect();
        let mut g = Geometry {
            lengths: Vec::with_capacity(per_tet.len()),
            volumes: Vec::with_capacity(per_tet.len()),
            dihedrals: Vec::with_capacity(per_tet.len()),
            embeddings: Vec::with_capacity(per_tet.len()),
        };
        for r in per_tet {
            let (l, v, d, p) = r?;
            g.lengths.push(l);
            g.volumes.push(v);
            g.dihedrals.push(d);
            g.embeddings.push(p);
        }
        Ok(g)
    }

    pub fn total_volume(&self) -> f64 {
        self.volumes.iter().sum()
    }
}

pub fn vertex_volumes(complex: &SimplicialComplex3, geo: &Geometry) -> Vec<f64> {
    complex
        .vertex_corners
        .iter()
        .map(|corners| corners.iter().map(|&(t, _)| geo.volumes[t.0] / 4.0).sum())
        .collect()
}

pub fn vertex_dual_volume(
    complex: &SimplicialComplex3,
    state: &EdgeLengthState,
    v: VertexId,
) -> Result<f64> {
    let mut sum = 0.0;
    for &(t, _) in &complex.vertex_corners[v.0] {
        sum += super::tet::tet_volume(&TetLengths::of_tet(complex, state, t))? / 4.0;
    }
    Ok(sum)
}

/// One tet corner of a vertex star placed in the star's chart.
#[derive(Debug, Clone)]
pub struct StarPiece {
    pub tet: TetId,
    pub corner: usize,
    pub pos: [P; 4],
    pub depth: u32,
}

/// Unfolds the star of the vertex at `corner` of `root`, starting from the
/// tet's standard embedding.
pub fn unfold_star(
    complex: &SimplicialComplex3,
    geo: &Geometry,
    root: TetId,
    corner: usize,
) -> Vec<StarPiece> {
    let v = complex.tet(root).vertices[corner];
    let mut pieces = Vec::with_capacity(complex.vertex_corners[v.0].len());
    let mut seen: HashMap<(TetId, usize), ()> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert((root, corner), ());
    queue.push_back(StarPiece { tet: root, corner, pos: geo.embeddings[root.0], depth: 0 });
    while let Some(piece) = queue.pop_front() {
        for f in (0..4).filter(|&f| f != piece.corner) {
            let Some((t2, f2)) = complex.across_face(piece.tet, f) else { continue };
            let c2 = complex.glued_corner(piece.tet, f, piece.corner, t2, f2);
            if seen.contains_key(&(t2, c2)) {
                continue;
            }
            seen.insert((t2, c2), ());
            let mut pos = [P::zeros(); 4];
            let mut shared = [(0usize, P::zeros()); 3];
            let mut n = 0;
            for a in (0..4).filter(|&a| a != f) {
                let a2 = complex.glued_corner(piece.tet, f, a, t2, f2);
                pos[a2] = piece.pos[a];
                shared[n] = (a2, piece.pos[a]);
                n += 1;
            }
            let l2 = &geo.lengths[t2.0];
            pos[f2] = trilaterate(
                [shared[0].1, shared[1].1, shared[2].1],
                [l2.get(shared[0].0, f2), l2.get(shared[1].0, f2), l2.get(shared[2].0, f2)],
                &piece.pos[f],
            );
            queue.push_back(StarPiece { tet: t2, corner: c2, pos, depth: piece.depth + 1 });
        }
        pieces.push(piece);
    }
    pieces
}

/// Point at distances `d` from `p`, on the far side of plane `p` from `avoid`.
fn trilaterate(p: [P; 3], d: [f64; 3], avoid: &P) -> P {
    let ab = p[1] - p[0];
    let dab = ab.norm();
    let ex = ab / dab;
    let ac = p[2] - p[0];
    let i = ex.dot(&ac);
    let ey = (ac - ex * i).normalize();
    let j = ey.dot(&ac);
    let ez = ex.cross(&ey);
    let x = (d[0] * d[0] - d[1] * d[1] + dab * dab) / (2.0 * dab);
    let y = (d[0] * d[0] - d[2] * d[2] + i * i + j * j) / (2.0 * j) - i / j * x;
    let z = (d[0] * d[0] - x * x - y * y).max(0.0).sqrt();
    let side = if (avoid - p[0]).dot(&ez) > 0.0 { -1.0 } else { 1.0 };
    p[0] + ex * x + ey * y + ez * (side * z)
}

/// A lifted edge leaving one endpoint of an edge, seen from that endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentEdge {
    pub edge: EdgeId,
    /// Slot of the shared endpoint in the edge's canonical lift.
    pub slot: u8,
    /// Cosine of the angle to the direction toward the opposite endpoint.
    pub cos_theta: f64,
}

/// Vertex-star charts of both endpoints of an edge.
#[derive(Debug, Clone)]
pub struct EdgeNeighbourhood {
    pub edge: EdgeId,
    pub volume: f64,
    pub incident: [Vec<IncidentEdge>; 2],
}

/// The star of one endpoint together with the chart positions of both ends.
struct EndChart {
    pieces: Vec<StarPiece>,
    here: P,
    there: P,
    slot: u8,
}

fn end_chart(complex: &SimplicialComplex3, geo: &Geometry, e: EdgeId, slot: u8) -> EndChart {
    // root: the ring tet with the smallest lattice offsets from this endpoint
    let (t, c_here, c_there) = complex.edge_tets[e.0]
        .iter()
        .map(|&(t, k)| {
            let [a, b] = LOCAL_EDGES[k as usize];
            let slots = complex.tet(t).edge_slots[k as usize];
            let (here, there) = if slots[0] == slot { (a, b) } else { (b, a) };
            let lift = complex.tet(t).lift;
            let mut key = lift.map(|p| [0, 1, 2].map(|i| p[i] - lift[here][i]));
            key.sort();
            (key, t, here, there)
        })
        .min()
        .map(|(_, t, here, there)| (t, here, there))
        .expect("edge lies in a tet");
    let pieces = unfold_star(complex, geo, t, c_here);
    let p = &pieces[0].pos;
    EndChart { here: p[c_here], there: p[c_there], pieces, slot }
}

fn slab_volume(chart: &EndChart, geo: &Geometry) -> f64 {
    let u = (chart.there - chart.here).normalize();
    let len = (chart.there - chart.here).norm();
    let mut total = 0.0;
    for piece in &chart.pieces {
        let s = piece.pos.map(|x| (x - chart.here).dot(&u));
        let tol = 1e-12 * len;
        if s.iter().all(|&x| x >= -tol && x <= len + tol) {
            total += geo.volumes[piece.tet.0] / 4.0;
            continue;
        }
        let cell: ConvexCell = corner_cell_of_points(&piece.pos, piece.corner);
        total += cell.clip(&chart.here, &u).clip(&chart.there, &-u).volume();
    }
    total
}

fn incident_edges(complex: &SimplicialComplex3, geo: &Geometry, chart: &EndChart, e: EdgeId) -> Vec<IncidentEdge> {
    let u = (chart.there - chart.here).normalize();
    // lifted edge key at this endpoint -> (cosine, found in a tet containing the edge)
    let mut found: Vec<((EdgeId, u8), f64, bool)> = Vec::new();
    let mut index: HashMap<(EdgeId, u8), usize> = HashMap::new();
    for piece in &chart.pieces {
        let tet = complex.tet(piece.tet);
        let c = piece.corner;
        let slot_at = |x: usize| -> (EdgeId, u8) {
            let k = local_edge_index(c, x);
            let [a, _] = LOCAL_EDGES[k];
            let s = tet.edge_slots[k];
            (tet.edges[k], if a == c { s[0] } else { s[1] })
        };
        let own = (0..4).filter(|&x| x != c).find(|&x| slot_at(x) == (e, chart.slot));
        for x in (0..4).filter(|&x| x != c) {
            let key = slot_at(x);
            if key == (e, chart.slot) {
                continue;
            }
            let exact = own.map(|o| {
                let l = &geo.lengths[piece.tet.0];
                law_of_cosines(l.get(c, o), l.get(c, x), l.get(o, x)).cos()
            });
            let cos = exact.unwrap_or_else(|| {
                let d = piece.pos[x] - piece.pos[c];
                (d.dot(&u) / d.norm()).clamp(-1.0, 1.0)
            });
            match index.get(&key) {
                None => {
                    index.insert(key, found.len());
                    found.push((key, cos, exact.is_some()));
                }
                Some(&i) if exact.is_some() && !found[i].2 => found[i] = (key, cos, true),
                _ => {}
            }
        }
    }
    found.sort_by_key(|a| a.0);
    found
        .into_iter()
        .map(|((edge, slot), cos_theta, _)| IncidentEdge { edge, slot, cos_theta })
        .collect()
}

pub fn edge_neighbourhood(complex: &SimplicialComplex3, geo: &Geometry, e: EdgeId) -> EdgeNeighbourhood {
    let ends = [0u8, 1u8].map(|s| end_chart(complex, geo, e, s));
    EdgeNeighbourhood {
        edge: e,
        volume: ends.iter().map(|c| slab_volume(c, geo)).sum(),
        incident: [0, 1].map(|i| incident_edges(complex, geo, &ends[i], e)),
    }
}

pub fn edge_volume(complex: &SimplicialComplex3, state: &EdgeLengthState, e: EdgeId) -> Result<f64> {
    let geo = Geometry::new(complex, state)?;
    Ok(edge_neighbourhood(complex, &geo, e).volume)
}

/// Monte-Carlo estimate of an edge volume by sampling each unfolded star tet.
pub fn monte_carlo_edge_volume(
    complex: &SimplicialComplex3,
    geo: &Geometry,
    e: EdgeId,
    samples: usize,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ends = [0u8, 1u8].map(|s| end_chart(complex, geo, e, s));
    let star_volume: f64 = ends
        .iter()
        .flat_map(|c| c.pieces.iter())
        .map(|p| geo.volumes[p.tet.0])
        .sum();
    let mut estimate = 0.0;
    for chart in &ends {
        let u = (chart.there - chart.here).normalize();
        let len = (chart.there - chart.here).norm();
        for piece in &chart.pieces {
            let vol = geo.volumes[piece.tet.0];
            let n = ((samples as f64) * vol / star_volume).ceil() as usize;
            let mut hits = 0usize;
            for _ in 0..n {
                let mut cuts = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
                cuts.sort_by(f64::total_cmp);
                let mut lambda = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], 1.0 - cuts[2]];
                // moving the largest weight onto the corner samples its cell uniformly
                let top = (0..4).fold(0, |k, j| if lambda[j] > lambda[k] { j } else { k });
                lambda.swap(top, piece.corner);
                let x: P = (0..4).map(|j| piece.pos[j] * lambda[j]).sum();
                let s = (x - chart.here).dot(&u);
                if s >= 0.0 && s <= len {
                    hits += 1;
                }
            }
            estimate += 0.25 * vol * hits as f64 / n as f64;
        }
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trilateration_picks_the_far_side() {
        let p = [P::zeros(), P::x(), P::y()];
        let target = P::new(0.3, 0.2, 0.7);
        let d = p.map(|a| (target - a).norm());
        let x = trilaterate(p, d, &P::new(0.0, 0.0, -1.0));
        assert!((x - target).norm() < 1e-14);
        let y = trilaterate(p, d, &P::new(0.0, 0.0, 1.0));
        assert!((y - P::new(0.3, 0.2, -0.7)).norm() < 1e-14);
    }
}
