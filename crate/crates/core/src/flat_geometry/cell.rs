//! Convex polyhedra stored as outward-oriented face polygons.

use nalgebra::Vector3;

use super::tet::{embed_tet, TetLengths};
use crate::complex::face_corners;
use crate::error::Result;

type P = Vector3<f64>;

/// Volumes below this are reported as zero.
pub const VOLUME_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Default)]
pub struct ConvexCell {
    /// Face polygons, counter-clockwise seen from outside.
    pub faces: Vec<Vec<P>>,
}

impl ConvexCell {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn tetrahedron(p: &[P; 4]) -> Self {
        let faces = (0..4)
            .map(|f| {
                let [a, b, c] = face_corners(f);
                let n = (p[b] - p[a]).cross(&(p[c] - p[a]));
                if n.dot(&(p[f] - p[a])) > 0.0 {
                    vec![p[a], p[c], p[b]]
                } else {
                    vec![p[a], p[b], p[c]]
                }
            })
            .collect();
        Self { faces }
    }

    pub fn axis_box(lo: [f64; 3], hi: [f64; 3]) -> Self {
        let v = |i: usize| P::new(
            if i & 1 == 0 { lo[0] } else { hi[0] },
            if i & 2 == 0 { lo[1] } else { hi[1] },
            if i & 4 == 0 { lo[2] } else { hi[2] },
        );
        let quads = [
            [0, 4, 6, 2],
            [1, 3, 7, 5],
            [0, 1, 5, 4],
            [2, 6, 7, 3],
            [0, 2, 3, 1],
            [4, 5, 7, 6],
        ];
        Self { faces: quads.iter().map(|q| q.iter().map(|&i| v(i)).collect()).collect() }
    }

    pub fn vertices(&self) -> impl Iterator<Item = &P> {
        self.faces.iter().flatten()
    }

    fn scale(&self) -> f64 {
        let mut lo = P::repeat(f64::INFINITY);
        let mut hi = P::repeat(f64::NEG_INFINITY);
        for v in self.vertices() {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (hi - lo).amax().max(f64::MIN_POSITIVE)
    }

    pub fn volume(&self) -> f64 {
        let Some(r) = self.vertices().next().copied() else {
            return 0.0;
        };
        let mut v = 0.0;
        for f in &self.faces {
            for i in 1..f.len().saturating_sub(1) {
                v += (f[0] - r).dot(&(f[i] - r).cross(&(f[i + 1] - r)));
            }
        }
        let v = v / 6.0;
        if v < VOLUME_FLOOR * self.scale().powi(3) {
            0.0
        } else {
            v
        }
    }

    /// Intersection with the halfspace `(x - p) . n >= 0`.
    pub fn clip(&self, p: &P, n: &P) -> Self {
        if self.is_empty() {
            return Self::empty();
        }
        let n = n.normalize();
        let eps = 1e-12 * self.scale();
        let dist = |x: &P| (x - p).dot(&n);
        let (mut any_in, mut any_out) = (false, false);
        for x in self.vertices() {
            let d = dist(x);
            any_in |= d > eps;
            any_out |= d < -eps;
        }
        if !any_out {
            return self.clone();
        }
        if !any_in {
            return Self::empty();
        }

        let mut faces = Vec::with_capacity(self.faces.len() + 1);
        let mut cap: Vec<P> = Vec::new();
        for f in &self.faces {
            let d: Vec<f64> = f.iter().map(dist).collect();
            if d.iter().all(|x| x.abs() <= eps) {
                cap.extend(f.iter().copied());
                continue;
            }
            let mut out = Vec::with_capacity(f.len() + 1);
            for i in 0..f.len() {
                let j = (i + 1) % f.len();
                let (a, b) = (f[i], f[j]);
                let (da, db) = (d[i], d[j]);
                if da >= -eps {
                    out.push(a);
                    if da.abs() <= eps {
                        cap.push(a);
                    }
                }
                if (da > eps && db < -eps) || (da < -eps && db > eps) {
                    let x = a + (b - a) * (da / (da - db));
                    out.push(x);
                    cap.push(x);
                }
            }
            if out.len() >= 3 {
                faces.push(out);
            }
        }

        let cap = ordered_polygon(cap, &(-n), eps);
        if cap.len() >= 3 {
            faces.push(cap);
        }
        Self { faces }
    }
}

/// Deduplicates coplanar points and orders them counter-clockwise about `normal`.
fn ordered_polygon(mut pts: Vec<P>, normal: &P, eps: f64) -> Vec<P> {
    let mut uniq: Vec<P> = Vec::with_capacity(pts.len());
    for x in pts.drain(..) {
        if !uniq.iter().any(|u| (u - x).norm() <= 4.0 * eps) {
            uniq.push(x);
        }
    }
    if uniq.len() < 3 {
        return uniq;
    }
    let c = uniq.iter().sum::<P>() / uniq.len() as f64;
    let e1 = {
        let trial = if normal.x.abs() < 0.9 { P::x() } else { P::y() };
        (trial - normal * normal.dot(&trial)).normalize()
    };
    let e2 = normal.cross(&e1);
    let mut keyed: Vec<(f64, P)> = uniq
        .into_iter()
        .map(|x| {
            let d = x - c;
            (d.dot(&e2).atan2(d.dot(&e1)), x)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    keyed.into_iter().map(|(_, x)| x).collect()
}

pub fn clip_cell(cell: &ConvexCell, p: &P, n: &P) -> ConvexCell {
    cell.clip(p, n)
}

/// Points of the tet whose barycentric coordinate at `corner` is the largest.
pub fn corner_cell_of_points(p: &[P; 4], corner: usize) -> ConvexCell {
    let mut cell = ConvexCell::tetrahedron(p);
    for j in (0..4).filter(|&j| j != corner) {
        let [k, l] = super::tet::other_two(corner, j);
        let m = (p[corner] + p[j]) * 0.5;
        let mut n = (p[l] - p[k]).cross(&(m - p[k]));
        if n.dot(&(p[corner] - p[k])) < 0.0 {
            n = -n;
        }
        cell = cell.clip(&p[k], &n);
    }
    cell
}

pub fn barycentric_corner_cell(lengths: &TetLengths, corner: usize) -> Result<ConvexCell> {
    let p = embed_tet(lengths)?;
    Ok(corner_cell_of_points(&p, corner))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cube_halves() {
        let c = ConvexCell::axis_box([0.0; 3], [1.0; 3]);
        assert!((c.volume() - 1.0).abs() < 1e-15);
        let h = c.clip(&P::new(0.5, 0.0, 0.0), &P::x());
        assert!((h.volume() - 0.5).abs() < 1e-15);
        assert_eq!(c.clip(&P::new(-1.0, 0.0, 0.0), &P::x()).volume(), 1.0);
        assert_eq!(c.clip(&P::new(2.0, 0.0, 0.0), &P::x()).volume(), 0.0);
    }

    #[test]
    fn clip_through_a_face_is_identity() {
        let c = ConvexCell::axis_box([0.0; 3], [1.0; 3]);
        let same = c.clip(&P::zeros(), &P::x());
        assert!((same.volume() - 1.0).abs() < 1e-15);
        assert_eq!(c.clip(&P::new(1.0, 0.0, 0.0), &P::x()).volume(), 0.0);
    }

    #[test]
    fn diagonal_cut_of_cube() {
        let c = ConvexCell::axis_box([0.0; 3], [1.0; 3]);
        let n = P::new(1.0, 1.0, 1.0);
        let corner = c.clip(&P::new(1.0, 0.0, 0.0), &-n);
        assert!((corner.volume() - 1.0 / 6.0).abs() < 1e-14);
        let middle = c.clip(&P::new(0.5, 0.5, 0.5), &n);
        assert!((middle.volume() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn regular_tet_corner_cells() {
        let t = TetLengths::regular(1.0);
        let v = 1.0 / (6.0 * 2f64.sqrt());
        for c in 0..4 {
            let cell = barycentric_corner_cell(&t, c).unwrap();
            assert!((cell.volume() - v / 4.0).abs() < 1e-14);
            assert!(cell.vertices().count() > 0);
        }
    }
}
