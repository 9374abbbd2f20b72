use nalgebra::{Matrix3, Vector3};
use ricci_mesh::complex::{BlockKind, EdgeId};
use ricci_mesh::manifolds::{
    build_flat, build_gowdy, build_nil, build_perturbed, build_torus4, geodesic_length, GeodesicSolver, MetricField,
};
use ricci_mesh::Error;

fn metric_partials_fd(field: &MetricField, x: [f64; 3]) -> [Matrix3<f64>; 3] {
    let h = 1e-5;
    std::array::from_fn(|a| {
        let mut p = x;
        let mut m = x;
        p[a] += h;
        m[a] -= h;
        (field.eval(p) - field.eval(m)) / (2.0 * h)
    })
}

fn acceleration(field: &MetricField, x: Vector3<f64>, v: Vector3<f64>) -> Vector3<f64> {
    let xs = [x[0], x[1], x[2]];
    let g_inv = field.eval(xs).try_inverse().unwrap();
    let dg = metric_partials_fd(field, xs);
    // lowered Christoffel contraction: c_l = sum_ij (d_i g_lj - 1/2 d_l g_ij) v^i v^j
    let mut c = Vector3::zeros();
    for l in 0..3 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += (dg[i][(l, j)] - 0.5 * dg[l][(i, j)]) * v[i] * v[j];
            }
        }
        c[l] = s;
    }
    -(g_inv * c)
}

fn shoot(field: &MetricField, p: Vector3<f64>, v0: Vector3<f64>, steps: usize) -> Vector3<f64> {
    let h = 1.0 / steps as f64;
    let (mut x, mut v) = (p, v0);
    for _ in 0..steps {
        let k1x = v;
        let k1v = acceleration(field, x, v);
        let k2x = v + 0.5 * h * k1v;
        let k2v = acceleration(field, x + 0.5 * h * k1x, k2x);
        let k3x = v + 0.5 * h * k2v;
        let k3v = acceleration(field, x + 0.5 * h * k2x, k3x);
        let k4x = v + h * k3v;
        let k4v = acceleration(field, x + h * k3x, k4x);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    x
}

/// Geodesic distance by Newton shooting on the initial velocity.
fn shooting_length(field: &MetricField, p: [f64; 3], q: [f64; 3]) -> f64 {
    let (p, q) = (Vector3::from(p), Vector3::from(q));
    let mut v = q - p;
    for _ in 0..30 {
        let r = shoot(field, p, v, 1024) - q;
        if r.norm() < 1e-13 {
            break;
        }
        let h = 1e-7;
        let mut jac = Matrix3::zeros();
        for a in 0..3 {
            let mut dv = v;
            dv[a] += h;
            let col = (shoot(field, p, dv, 1024) - q - r) / h;
            jac.set_column(a, &col);
        }
        let step = jac.try_inverse().unwrap() * r;
        // backtrack so the shot never lands farther from q
        let mut damp = 1.0;
        while damp > 1e-3 && (shoot(field, p, v - step * damp, 1024) - q).norm() >= r.norm() {
            damp *= 0.5;
        }
        v -= step * damp;
    }
    let g = field.eval([p[0], p[1], p[2]]);
    (v.transpose() * g * v)[(0, 0)].sqrt()
}

fn sample_edges(n: usize, count: usize) -> impl Iterator<Item = EdgeId> {
    let stride = (n / count).max(1);
    (0..n).step_by(stride).map(EdgeId)
}

#[test]
fn relaxation_matches_geodesic_shooting() {
    let builds = [
        build_nil(2, 1.0).unwrap(),
        build_nil(1, -2.0).unwrap(),
        build_gowdy(BlockKind::Cubic, 6).unwrap(),
        build_torus4(BlockKind::Cubic, [3, 3]).unwrap(),
        build_perturbed(BlockKind::Cubic, 2).unwrap(),
    ];
    for b in &builds {
        assert_eq!(b.geodesic_fallbacks, 0, "{:?}", b.kind);
        for e in sample_edges(b.complex.num_edges(), 6) {
            let [p, q] = b.edge_coordinates(e);
            let oracle = shooting_length(&b.metric, p, q);
            let got = b.initial.length(e);
            assert!(
                (got - oracle).abs() < 3e-4 * oracle,
                "{:?} edge {}: {got} vs {oracle}",
                b.kind,
                e.0
            );
        }
    }
}

#[test]
fn theta_edge_of_gowdy_data_is_straight() {
    let g = geodesic_length(&MetricField::GOWDY, [0.4, 0.7, 0.0], [0.4, 0.7, std::f64::consts::FRAC_PI_3]);
    let oracle = shooting_length(&MetricField::GOWDY, [0.4, 0.7, 0.0], [0.4, 0.7, std::f64::consts::FRAC_PI_3]);
    assert!((g.length - oracle).abs() < 1e-6 * oracle);
}

#[test]
fn lengths_are_symmetric_in_the_endpoints() {
    for field in [MetricField::Nil { lambda: -2.0 }, MetricField::GOWDY, MetricField::TORUS4, MetricField::PERTURBED] {
        let (p, q) = ([0.13, 0.52, 0.31], [0.61, 0.18, 0.77]);
        let a = geodesic_length(&field, p, q);
        let b = geodesic_length(&field, q, p);
        assert!(a.converged && b.converged);
        assert!((a.length - b.length).abs() < 1e-12, "{field:?}");
        assert!(a.length <= a.straight_length);
    }
}

#[test]
fn flat_metric_gives_euclidean_lengths() {
    let b = build_flat(BlockKind::Skew, 2).unwrap();
    for e in 0..b.complex.num_edges() {
        let [p, q] = b.edge_coordinates(EdgeId(e));
        let d = ((0..3).map(|a| (q[a] - p[a]).powi(2)).sum::<f64>()).sqrt();
        assert!((b.initial.length(EdgeId(e)) - d).abs() < 1e-13);
    }
}

#[test]
fn nil_lengths_respect_the_twisted_gluing() {
    // the image under (x, y, z) -> (x + 1, y, z - y) of an edge has the same geodesic length
    let b = build_nil(3, 1.0).unwrap();
    let n = 3;
    for e in 0..b.complex.num_edges() {
        let lift = b.complex.edge(EdgeId(e)).lift;
        let moved = lift.map(|p| [p[0] + n, p[1], p[2] - p[1]]);
        let [p, q] = moved.map(|p| b.complex.chart.position(p));
        let shifted = geodesic_length(&b.metric, p, q).length;
        assert!((shifted - b.initial.length(EdgeId(e))).abs() < 1e-10, "edge {e}");
        assert!(b.complex.edge_of(moved).is_some());
    }
}

#[test]
fn gowdy_lengths_depend_only_on_theta_and_displacement() {
    let b = build_gowdy(BlockKind::Cubic, 6).unwrap();
    for e1 in 0..b.complex.num_edges() {
        for e2 in e1 + 1..b.complex.num_edges() {
            let [p1, q1] = b.edge_coordinates(EdgeId(e1));
            let [p2, q2] = b.edge_coordinates(EdgeId(e2));
            let same = (0..3).all(|a| ((q1[a] - p1[a]) - (q2[a] - p2[a])).abs() < 1e-12)
                && (p1[2] - p2[2]).abs() < 1e-12;
            if same {
                assert!((b.initial.length(EdgeId(e1)) - b.initial.length(EdgeId(e2))).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn polyline_bias_shrinks_quadratically() {
    let field = MetricField::TORUS4;
    let (p, q) = ([0.3, 1.1, 0.0], [1.4, 2.0, 0.5]);
    let lengths: Vec<f64> = [8, 16, 32]
        .iter()
        .map(|&nodes| {
            let g = GeodesicSolver { nodes, extrapolate: false, ..GeodesicSolver::default() }.solve(&field, p, q);
            assert!(g.converged && g.length <= g.straight_length);
            g.length
        })
        .collect();
    let oracle = shooting_length(&field, p, q);
    assert!(lengths[0] >= lengths[1] && lengths[1] >= lengths[2] && lengths[2] >= oracle);
    let ratio = (lengths[0] - lengths[1]) / (lengths[1] - lengths[2]);
    assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn unsupported_and_invalid_builds_are_rejected() {
    assert!(matches!(build_torus4(BlockKind::Skew, [4, 4]), Err(Error::Unsupported(_))));
    assert!(matches!(build_perturbed(BlockKind::Skew, 3), Err(Error::Unsupported(_))));
    assert!(matches!(build_gowdy(BlockKind::Cubic, 0), Err(Error::InvalidGrid(_))));
    assert!(build_nil(2, 0.0).is_err());
}

#[test]
fn build_is_deterministic() {
    let a = build_perturbed(BlockKind::Diamond, 2).unwrap();
    let b = build_perturbed(BlockKind::Diamond, 2).unwrap();
    assert_eq!(a.initial, b.initial);
    let mut csv = Vec::new();
    a.write_lengths_csv(&mut csv).unwrap();
    assert!(String::from_utf8(csv).unwrap().starts_with("edge_id,length\n0,"));
}

#[test]
fn refinement_shrinks_the_deficits() {
    use ricci_mesh::curvature::full_report;
    use ricci_mesh::ManifoldBuild;
    #[derive(Clone, Copy, Debug)]
    enum Measure {
        Max,
        WeightedMean,
    }
    let measure = |b: ManifoldBuild, m: Measure| {
        let report = full_report(&b.complex, &b.initial).unwrap();
        match m {
            Measure::Max => report.max_abs_deficit(),
            Measure::WeightedMean => report.weighted_means().1,
        }
    };
    // coarse diamond grids on the torus and the folded perturbation keep one outlying edge
    let families: Vec<(Measure, Vec<ManifoldBuild>)> = vec![
        (Measure::Max, [1, 2, 3].iter().map(|&n| build_nil(n, 1.0).unwrap()).collect()),
        (Measure::Max, [1, 2, 3].iter().map(|&n| build_nil(n, -2.0).unwrap()).collect()),
        (Measure::Max, [6, 12, 24].iter().map(|&n| build_gowdy(BlockKind::Cubic, n).unwrap()).collect()),
        (Measure::Max, [6, 12, 24].iter().map(|&n| build_gowdy(BlockKind::Skew, n).unwrap()).collect()),
        (Measure::Max, [3, 6, 12].iter().map(|&n| build_gowdy(BlockKind::Diamond, n).unwrap()).collect()),
        (Measure::Max, [[4, 6], [6, 6], [6, 8]].iter().map(|&g| build_torus4(BlockKind::Cubic, g).unwrap()).collect()),
        (
            Measure::WeightedMean,
            [[3, 4], [4, 4], [4, 5]].iter().map(|&g| build_torus4(BlockKind::Diamond, g).unwrap()).collect(),
        ),
        (Measure::Max, [2, 3, 4].iter().map(|&n| build_perturbed(BlockKind::Cubic, n).unwrap()).collect()),
        (Measure::Max, [2, 4].iter().map(|&n| build_perturbed(BlockKind::Skew, n).unwrap()).collect()),
        (Measure::WeightedMean, [1, 2, 3].iter().map(|&n| build_perturbed(BlockKind::Diamond, n).unwrap()).collect()),
    ];
    for (m, family) in families {
        let kind = (family[0].kind, family[0].block);
        let eps: Vec<f64> = family.into_iter().map(|b| measure(b, m)).collect();
        assert!(eps.windows(2).all(|w| w[1] < w[0]), "{kind:?} {m:?}: {eps:?}");
    }
}
