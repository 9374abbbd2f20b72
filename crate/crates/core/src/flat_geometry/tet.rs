//! Euclidean geometry of a single tetrahedron given its six edge lengths.

use nalgebra::Vector3;

use crate::complex::{EdgeId, SimplicialComplex3, TetId, LOCAL_EDGES};
use crate::error::{Error, Result};
use crate::flow::EdgeLengthState;

/// Six edge lengths of one tet in [`LOCAL_EDGES`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetLengths(pub [f64; 6]);

impl TetLengths {
    pub fn regular(l: f64) -> Self {
        Self([l; 6])
    }

    /// Lengths of the tet spanned by four points.
    pub fn from_points(p: &[Vector3<f64>; 4]) -> Self {
        Self(LOCAL_EDGES.map(|[a, b]| (p[b] - p[a]).norm()))
    }

    pub fn of_tet(complex: &SimplicialComplex3, state: &EdgeLengthState, t: TetId) -> Self {
        Self(complex.tet(t).edges.map(|e: EdgeId| state.length(e)))
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.0[crate::complex::local_edge_index(a, b)]
    }

    fn sq(&self, a: usize, b: usize) -> f64 {
        let l = self.get(a, b);
        l * l
    }

    pub fn max_length(&self) -> f64 {
        self.0.iter().fold(0.0, |m, &x| m.max(x))
    }

    /// Gram matrix of the edge vectors leaving corner 0.
    fn gram(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let (i, j) = (i + 1, j + 1);
                if i == j {
                    self.sq(0, i)
                } else {
                    0.5 * (self.sq(0, i) + self.sq(0, j) - self.sq(i, j))
                }
            })
        })
    }

    /// Cayley-Menger determinant, equal to 288 V^2.
    pub fn cayley_menger(&self) -> f64 {
        let g = self.gram();
        let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
        8.0 * det
    }

    /// Fails unless the lengths bound a non-degenerate Euclidean tetrahedron.
    pub fn check_realizable(&self) -> Result<()> {
        let cm = self.cayley_menger();
        let scale = self.max_length().powi(6);
        let g = self.gram();
        let face_ok = g[0][0] > 0.0 && g[0][0] * g[1][1] - g[0][1] * g[0][1] > 0.0;
        if !(cm > 1e-14 * scale) || !face_ok || self.0.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::NonRealizable { cm });
        }
        Ok(())
    }
}

/// Standard realization: corner 0 at the origin, corner 1 on the x-axis,
/// corner 2 in the xy-plane, corner 3 with positive z.
pub fn embed_tet(lengths: &TetLengths) -> Result<[Vector3<f64>; 4]> {
    lengths.check_realizable()?;
    let g = lengths.gram();
    let l11 = g[0][0].sqrt();
    let l21 = g[1][0] / l11;
    let l22 = (g[1][1] - l21 * l21).max(0.0).sqrt();
    let l31 = g[2][0] / l11;
    let l32 = (g[2][1] - l31 * l21) / l22;
    let l33 = (g[2][2] - l31 * l31 - l32 * l32).max(0.0).sqrt();
    Ok([
        Vector3::zeros(),
        Vector3::new(l11, 0.0, 0.0),
        Vector3::new(l21, l22, 0.0),
        Vector3::new(l31, l32, l33),
    ])
}

pub fn tet_volume(lengths: &TetLengths) -> Result<f64> {
    lengths.check_realizable()?;
    Ok((lengths.cayley_menger() / 288.0).sqrt())
}

/// Dihedral angles at all six local edges, from one embedding.
pub fn dihedral_angles(lengths: &TetLengths) -> Result<[f64; 6]> {
    let p = embed_tet(lengths)?;
    Ok(dihedral_angles_of_points(&p))
}

pub fn dihedral_angles_of_points(p: &[Vector3<f64>; 4]) -> [f64; 6] {
    LOCAL_EDGES.map(|[a, b]| {
        let [c, d] = other_two(a, b);
        let e = (p[b] - p[a]).normalize();
        let u = p[c] - p[a];
        let w = p[d] - p[a];
        let u = u - e * e.dot(&u);
        let w = w - e * e.dot(&w);
        u.cross(&w).norm().atan2(u.dot(&w))
    })
}

pub fn dihedral_angle(lengths: &TetLengths, local_edge: usize) -> Result<f64> {
    Ok(dihedral_angles(lengths)?[local_edge])
}

pub(crate) fn other_two(a: usize, b: usize) -> [usize; 2] {
    let mut o = [0; 2];
    let mut n = 0;
    for c in 0..4 {
        if c != a && c != b {
            o[n] = c;
            n += 1;
        }
    }
    o
}

/// Angle between two local edges that meet at a corner, by the law of cosines.
pub fn angle_between_edges(lengths: &TetLengths, edge: usize, other: usize) -> Result<f64> {
    let [a, b] = LOCAL_EDGES[edge];
    let [c, d] = LOCAL_EDGES[other];
    if edge == other {
        return Err(Error::EdgesNotAdjacent);
    }
    let (apex, p, q) = if a == c {
        (a, b, d)
    } else if a == d {
        (a, b, c)
    } else if b == c {
        (b, a, d)
    } else if b == d {
        (b, a, c)
    } else {
        return Err(Error::EdgesNotAdjacent);
    };
    Ok(law_of_cosines(lengths.get(apex, p), lengths.get(apex, q), lengths.get(p, q)))
}

/// Angle opposite side `c` in a triangle with sides `a`, `b`, `c`.
pub fn law_of_cosines(a: f64, b: f64, c: f64) -> f64 {
    ((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn cube_corner() -> TetLengths {
        TetLengths::from_points(&[
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(1.0, 1.0, 0.0),
            Vector3::new(1.0, 1.0, 1.0),
        ])
    }

    #[test]
    fn regular_tet() {
        let t = TetLengths::regular(1.0);
        let p = embed_tet(&t).unwrap();
        for [a, b] in LOCAL_EDGES {
            assert!(((p[a] - p[b]).norm() - 1.0).abs() < 1e-14);
        }
        assert!((tet_volume(&t).unwrap() - 1.0 / (6.0 * 2f64.sqrt())).abs() < 1e-15);
        for k in 0..6 {
            assert!((dihedral_angle(&t, k).unwrap() - (1.0f64 / 3.0).acos()).abs() < 1e-14);
        }
    }

    #[test]
    fn cube_corner_tet() {
        let t = cube_corner();
        assert!((tet_volume(&t).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((dihedral_angle(&t, 0).unwrap() - FRAC_PI_4).abs() < 1e-14);
        // x-edge against y-edge and against the xy face diagonal, at corner 1 / 0
        assert!((angle_between_edges(&t, 0, 3).unwrap() - FRAC_PI_2).abs() < 1e-14);
        assert!((angle_between_edges(&t, 0, 1).unwrap() - FRAC_PI_4).abs() < 1e-14);
        assert!(angle_between_edges(&t, 0, 5).is_err());
    }

    #[test]
    fn coplanar_is_rejected() {
        let t = TetLengths::from_points(&[
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(1.0, 1.0, 0.0),
        ]);
        assert!(matches!(embed_tet(&t), Err(Error::NonRealizable { .. })));
        assert!(tet_volume(&t).is_err());
        // triangle inequality violated on one face
        let mut bad = TetLengths::regular(1.0);
        bad.0[0] = 2.5;
        assert!(tet_volume(&bad).is_err());
    }

    #[test]
    fn dihedrals_sum_around_the_cube_diagonal() {
        // the six path tets of the unit cube all contain (0,0,0)-(1,1,1) as local edge 2
        let t = cube_corner();
        let total = 6.0 * dihedral_angle(&t, 2).unwrap();
        assert!((total - 2.0 * PI).abs() < 1e-13);
    }
}
