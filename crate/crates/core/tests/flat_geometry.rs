use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ricci_mesh::complex::block::cubic_template;
use ricci_mesh::complex::LOCAL_EDGES;
use ricci_mesh::flat_geometry::*;
use ricci_mesh::{BlockSpec, EdgeId, EdgeLengthState, GridSpec, SimplicialComplex3, VertexId};

type P = Vector3<f64>;

fn coordinate_lengths(c: &SimplicialComplex3) -> EdgeLengthState {
    EdgeLengthState::new(
        (0..c.num_edges())
            .map(|e| P::from(c.edge_displacement(EdgeId(e))).norm())
            .collect(),
    )
}

fn cubic_torus(n: usize) -> SimplicialComplex3 {
    let grid = GridSpec::periodic([n; 3], [n as f64; 3]);
    ricci_mesh::complex::tile_and_identify(&BlockSpec::cubic(), &grid).unwrap()
}

fn point() -> impl Strategy<Value = P> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y, z)| P::new(x, y, z))
}

fn fat_tet() -> impl Strategy<Value = [P; 4]> {
    [point(), point(), point(), point()].prop_filter("well shaped", |p| {
        let v = (p[1] - p[0]).dot(&(p[2] - p[0]).cross(&(p[3] - p[0]))).abs() / 6.0;
        let l = TetLengths::from_points(p).max_length();
        v > 0.02 * l.powi(3)
    })
}

fn signed_volume(p: &[P; 4]) -> f64 {
    (p[1] - p[0]).dot(&(p[2] - p[0]).cross(&(p[3] - p[0]))) / 6.0
}

fn normal_dihedral(p: &[P; 4], a: usize, b: usize) -> f64 {
    let o: Vec<usize> = (0..4).filter(|&x| x != a && x != b).collect();
    let n1 = (p[b] - p[a]).cross(&(p[o[0]] - p[a]));
    let n2 = (p[b] - p[a]).cross(&(p[o[1]] - p[a]));
    // interior angle between the two faces is pi minus the angle between outward normals
    let n1 = if n1.dot(&(p[o[1]] - p[a])) > 0.0 { -n1 } else { n1 };
    let n2 = if n2.dot(&(p[o[0]] - p[a])) > 0.0 { -n2 } else { n2 };
    std::f64::consts::PI - n1.angle(&n2)
}

proptest! {
    #[test]
    fn embedding_reproduces_lengths(p in fat_tet()) {
        let l = TetLengths::from_points(&p);
        let q = embed_tet(&l).unwrap();
        for (k, [a, b]) in LOCAL_EDGES.iter().enumerate() {
            prop_assert!(((q[*a] - q[*b]).norm() - l.0[k]).abs() <= 1e-12 * l.0[k]);
        }
        prop_assert!((signed_volume(&q) - tet_volume(&l).unwrap()).abs() < 1e-12);
        prop_assert!((signed_volume(&p).abs() - tet_volume(&l).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn dihedrals_match_face_normals(p in fat_tet()) {
        let d = dihedral_angles(&TetLengths::from_points(&p)).unwrap();
        for (k, [a, b]) in LOCAL_EDGES.iter().enumerate() {
            prop_assert!(d[k] > 0.0 && d[k] < std::f64::consts::PI);
            prop_assert!((d[k] - normal_dihedral(&p, *a, *b)).abs() < 1e-10);
        }
    }

    #[test]
    fn corner_cells_partition_the_tet(p in fat_tet()) {
        let l = TetLengths::from_points(&p);
        let v = tet_volume(&l).unwrap();
        let mut sum = 0.0;
        for c in 0..4 {
            let cv = barycentric_corner_cell(&l, c).unwrap().volume();
            prop_assert!((cv - v / 4.0).abs() < 1e-12);
            sum += cv;
        }
        prop_assert!((sum - v).abs() < 1e-12);
    }

    #[test]
    fn complementary_clips_partition(p in fat_tet(), q in point(), n in point()) {
        prop_assume!(n.norm() > 1e-3);
        let cell = ConvexCell::tetrahedron(&p);
        let v = cell.volume();
        let a = clip_cell(&cell, &q, &n).volume();
        let b = clip_cell(&cell, &q, &-n).volume();
        prop_assert!(a <= v + 1e-12 && b <= v + 1e-12);
        prop_assert!((a + b - v).abs() < 1e-12);
    }
}

fn uniform_in_tet(rng: &mut ChaCha8Rng, q: &[P; 4]) -> P {
    let mut cuts = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
    cuts.sort_by(f64::total_cmp);
    let w = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], 1.0 - cuts[2]];
    (0..4).map(|i| q[i] * w[i]).sum()
}

fn largest_barycentric(q: &[P; 4], x: &P) -> usize {
    let m = Matrix3::from_columns(&[q[1] - q[0], q[2] - q[0], q[3] - q[0]]);
    let b = m.try_inverse().unwrap() * (x - q[0]);
    let lam = [1.0 - b.sum(), b[0], b[1], b[2]];
    (0..4).max_by(|&i, &j| lam[i].total_cmp(&lam[j])).unwrap()
}

#[test]
fn corner_cells_match_monte_carlo() {
    let p = [
        P::new(0.1, -0.2, 0.0),
        P::new(1.3, 0.1, 0.2),
        P::new(0.4, 0.9, -0.1),
        P::new(0.5, 0.3, 1.1),
    ];
    let l = TetLengths::from_points(&p);
    let q = embed_tet(&l).unwrap();
    let vol = tet_volume(&l).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 1_000_000;
    let mut hits = [0usize; 4];
    for _ in 0..n {
        let x = uniform_in_tet(&mut rng, &q);
        hits[largest_barycentric(&q, &x)] += 1;
    }
    for c in 0..4 {
        let mc = vol * hits[c] as f64 / n as f64;
        let exact = barycentric_corner_cell(&l, c).unwrap().volume();
        assert!((mc - exact).abs() < 0.005 * exact, "corner {c}: {mc} vs {exact}");
    }
}

#[test]
fn clipped_corner_cell_matches_monte_carlo() {
    let l = TetLengths([1.0, 1.2, 0.9, 1.1, 1.3, 1.05]);
    let q = embed_tet(&l).unwrap();
    let vol = tet_volume(&l).unwrap();
    let plane_p = (q[0] + q[1]) * 0.3;
    let plane_n = P::new(0.4, -1.0, 0.3);
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let n = 4_000_000;
    let mut hits = [0usize; 4];
    for _ in 0..n {
        let x = uniform_in_tet(&mut rng, &q);
        if (x - plane_p).dot(&plane_n) >= 0.0 {
            hits[largest_barycentric(&q, &x)] += 1;
        }
    }
    for c in 0..4 {
        let mc = vol * hits[c] as f64 / n as f64;
        let cell = barycentric_corner_cell(&l, c).unwrap();
        let exact = clip_cell(&cell, &plane_p, &plane_n).volume();
        assert!((mc - exact).abs() < 0.005 * exact.max(0.05 * vol), "corner {c}: {mc} vs {exact}");
    }
}

#[test]
fn angle_agrees_across_tets_sharing_the_triangle() {
    let c = cubic_torus(3);
    let state = coordinate_lengths(&c);
    let geo = Geometry::new(&c, &state).unwrap();
    let mut checked = 0;
    for tri in 0..c.num_triangles() {
        let inc = &c.tri_tets[tri];
        let angles: Vec<f64> = inc
            .iter()
            .map(|&(t, opp)| {
                let others: Vec<usize> = (0..4).filter(|&x| x != opp as usize).collect();
                let k1 = ricci_mesh::complex::local_edge_index(others[0], others[1]);
                let k2 = ricci_mesh::complex::local_edge_index(others[0], others[2]);
                angle_between_edges(&geo.lengths[t.0], k1, k2).unwrap()
            })
            .collect();
        // same corner of the same triangle seen from both sides
        let (t0, o0) = inc[0];
        let (t1, o1) = inc[1];
        let f0: Vec<usize> = (0..4).filter(|&x| x != o0 as usize).collect();
        let c1 = c.glued_corner(t0, o0 as usize, f0[0], t1, o1 as usize);
        let f1: Vec<usize> = (0..4).filter(|&x| x != o1 as usize).collect();
        if c1 == f1[0] {
            assert!((angles[0] - angles[1]).abs() < 1e-12);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn vertex_volumes_partition_total_volume() {
    for (spec, grid) in [
        (BlockSpec::cubic(), GridSpec::periodic([3, 2, 1], [3.0, 2.0, 1.0])),
        (BlockSpec::diamond(), GridSpec::periodic([2, 1, 3], [2.0, 1.0, 3.0])),
        (BlockSpec::skew_standard(), GridSpec::periodic([2, 2, 2], [2.0, 2.0, 2.0])),
    ] {
        let c = ricci_mesh::complex::tile_and_identify(&spec, &grid).unwrap();
        let state = coordinate_lengths(&c);
        let geo = Geometry::new(&c, &state).unwrap();
        let vv = vertex_volumes(&c, &geo);
        let total = geo.total_volume();
        assert!((vv.iter().sum::<f64>() - total).abs() < 1e-10 * total);
        for v in 0..c.num_vertices() {
            let direct = vertex_dual_volume(&c, &state, VertexId(v)).unwrap();
            assert!((direct - vv[v]).abs() < 1e-12);
        }
    }
}

#[test]
fn unit_cube_lattice_vertex_volumes() {
    let c = cubic_torus(3);
    let geo = Geometry::new(&c, &coordinate_lengths(&c)).unwrap();
    for v in vertex_volumes(&c, &geo) {
        assert!((v - 1.0).abs() < 1e-12);
    }
    let single = cubic_torus(1);
    let geo = Geometry::new(&single, &coordinate_lengths(&single)).unwrap();
    assert!((vertex_volumes(&single, &geo)[0] - 1.0).abs() < 1e-12);
}

/// Point location in the unit-cube covering lattice: the lattice vertex whose
/// barycentric coordinate is largest in the containing tet.
fn owning_vertex(x: &P) -> [i64; 3] {
    let template = cubic_template();
    let cell = [x.x.floor(), x.y.floor(), x.z.floor()];
    let y = x - P::from(cell);
    for tet in &template.tets {
        let q = tet.map(|c| P::new(c[0] as f64, c[1] as f64, c[2] as f64));
        let m = Matrix3::from_columns(&[q[1] - q[0], q[2] - q[0], q[3] - q[0]]);
        let b = m.try_inverse().unwrap() * (y - q[0]);
        let lam = [1.0 - b.sum(), b[0], b[1], b[2]];
        if lam.iter().all(|&t| t >= -1e-12) {
            let best = (0..4).max_by(|&i, &j| lam[i].total_cmp(&lam[j])).unwrap();
            let c = tet[best];
            return [cell[0] as i64 + c[0], cell[1] as i64 + c[1], cell[2] as i64 + c[2]];
        }
    }
    unreachable!("point not located")
}

fn covering_oracle(p1: [i64; 3], p2: [i64; 3], samples: usize, seed: u64) -> f64 {
    let a = P::new(p1[0] as f64, p1[1] as f64, p1[2] as f64);
    let b = P::new(p2[0] as f64, p2[1] as f64, p2[2] as f64);
    let u = (b - a).normalize();
    let len = (b - a).norm();
    let lo = a.inf(&b) - P::repeat(1.0);
    let hi = a.sup(&b) + P::repeat(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..samples {
        let x = P::from_fn(|i, _| rng.random_range(lo[i]..hi[i]));
        let s = (x - a).dot(&u);
        if s < 0.0 || s > len {
            continue;
        }
        let owner = owning_vertex(&x);
        if owner == p1 || owner == p2 {
            hits += 1;
        }
    }
    (hi - lo).product() * hits as f64 / samples as f64
}

#[test]
fn flat_lattice_edge_volumes_match_covering_space_sampling() {
    let c = cubic_torus(3);
    let state = coordinate_lengths(&c);
    let geo = Geometry::new(&c, &state).unwrap();
    let vv = vertex_volumes(&c, &geo);
    let mut kinds_seen = std::collections::BTreeSet::new();
    for e in 0..c.num_edges() {
        let edge = c.edge(EdgeId(e));
        let d = c.edge_displacement(EdgeId(e));
        let kind: Vec<i64> = d.iter().map(|x| x.round() as i64).collect();
        let nb = edge_neighbourhood(&c, &geo, EdgeId(e));
        assert!(nb.volume > 0.0);
        assert!(nb.volume <= vv[edge.vertices[0].0] + vv[edge.vertices[1].0] + 1e-12);
        if !kinds_seen.insert(kind) {
            continue;
        }
        let [p1, p2] = edge.lift;
        let oracle = covering_oracle(p1, p2, 1_000_000, 11 + e as u64);
        assert!(
            (nb.volume - oracle).abs() < 0.005 * oracle,
            "edge {e} {d:?}: {} vs {oracle}",
            nb.volume
        );
        let mc = monte_carlo_edge_volume(&c, &geo, EdgeId(e), 1_000_000, 3);
        assert!((nb.volume - mc).abs() < 0.005 * nb.volume);
    }
    assert_eq!(kinds_seen.len(), 7);
}

#[test]
fn single_block_edge_volume_equals_lattice_value() {
    let big = cubic_torus(3);
    let small = cubic_torus(1);
    let gb = Geometry::new(&big, &coordinate_lengths(&big)).unwrap();
    let gs = Geometry::new(&small, &coordinate_lengths(&small)).unwrap();
    for e in 0..small.num_edges() {
        let d = small.edge_displacement(EdgeId(e));
        let twin = (0..big.num_edges())
            .find(|&f| big.edge_displacement(EdgeId(f)) == d)
            .unwrap();
        let a = edge_neighbourhood(&small, &gs, EdgeId(e));
        let b = edge_neighbourhood(&big, &gb, EdgeId(twin));
        assert!((a.volume - b.volume).abs() < 1e-12);
        assert_eq!(a.incident[0].len(), b.incident[0].len());
    }
}

#[test]
fn stars_cover_every_corner_once() {
    let c = cubic_torus(1);
    let geo = Geometry::new(&c, &coordinate_lengths(&c)).unwrap();
    let star = unfold_star(&c, &geo, ricci_mesh::TetId(0), 0);
    assert_eq!(star.len(), 24);
    for piece in &star {
        let l = TetLengths::from_points(&piece.pos);
        for k in 0..6 {
            assert!((l.0[k] - geo.lengths[piece.tet.0].0[k]).abs() < 1e-12);
        }
    }
}
