use ricci_mesh::complex::{
    covering_duplicate, tile_and_identify, unambiguous_factors, BlockSpec, GridSpec,
    Identification, Violation,
};
use ricci_mesh::{BlockKind, TetId};

fn counts(c: &ricci_mesh::SimplicialComplex3) -> [usize; 4] {
    [c.num_vertices(), c.num_edges(), c.num_triangles(), c.num_tets()]
}

fn nil_grid(n: usize, lambda: f64) -> GridSpec {
    let (x, yz) = if lambda > 0.0 {
        (1.0, 1.0 / n as f64)
    } else {
        (0.5, 1.0 / (2.0 * n as f64))
    };
    GridSpec {
        counts: [n, 1, 1],
        extents: [x, yz, yz],
        origin: [0.0; 3],
        identification: Identification::NilTwist { lambda },
    }
}

#[test]
fn single_cubic_block() {
    let c = tile_and_identify(&BlockSpec::cubic(), &GridSpec::periodic([1, 1, 1], [1.0; 3])).unwrap();
    assert_eq!(counts(&c), [1, 7, 12, 6]);
    assert_eq!(c.euler_characteristic(), 0);
    assert_eq!(c.body_diagonals().count(), 1);
}

#[test]
fn single_diamond_block() {
    let c = tile_and_identify(&BlockSpec::diamond(), &GridSpec::periodic([1, 1, 1], [1.0; 3])).unwrap();
    assert_eq!(counts(&c), [2, 14, 24, 12]);
    assert_eq!(c.body_diagonals().count(), 0);
}

#[test]
fn skew_block_matches_cubic_combinatorics() {
    let c = tile_and_identify(&BlockSpec::skew_standard(), &GridSpec::periodic([1, 1, 1], [1.0; 3])).unwrap();
    assert_eq!(counts(&c), [1, 7, 12, 6]);
}

#[test]
fn cubic_row_counts() {
    // enumerated: each block adds one vertex, seven edges and six tets
    for n in 1..=5 {
        let c = tile_and_identify(&BlockSpec::cubic(), &GridSpec::periodic([n, 1, 1], [n as f64, 1.0, 1.0])).unwrap();
        assert_eq!(counts(&c), [n, 7 * n, 12 * n, 6 * n]);
    }
}

#[test]
fn diamond_two_cubed() {
    let c = tile_and_identify(&BlockSpec::diamond(), &GridSpec::periodic([2, 2, 2], [1.0; 3])).unwrap();
    assert_eq!(counts(&c), [16, 112, 192, 96]);
}

#[test]
fn nil_twist_complexes_validate() {
    for lambda in [1.0, -2.0] {
        for n in 1..=3 {
            let c = tile_and_identify(&BlockSpec::nil_matched(), &nil_grid(n, lambda)).unwrap();
            assert_eq!(c.num_tets(), 6 * n);
            assert!(c.validate().is_valid());
        }
    }
}

#[test]
fn nil_twist_needs_matched_block() {
    let err = tile_and_identify(&BlockSpec::cubic(), &nil_grid(1, 1.0)).unwrap_err();
    assert!(matches!(err, ricci_mesh::Error::InvalidComplex(_)), "{err}");
}

#[test]
fn deleting_a_tet_is_reported() {
    let c = tile_and_identify(&BlockSpec::cubic(), &GridSpec::periodic([2, 2, 2], [1.0; 3])).unwrap();
    let broken = c.without_tet(TetId(3));
    let report = broken.validate();
    let degree = report
        .violations
        .iter()
        .filter(|v| matches!(v, Violation::TriangleDegree { tets: 1, .. }))
        .count();
    assert_eq!(degree, 4);
}

#[test]
fn diamond_torus_grid() {
    let grid = GridSpec::periodic([3, 4, 1], [std::f64::consts::TAU, std::f64::consts::TAU, 1.0]);
    assert!(tile_and_identify(&BlockSpec::diamond(), &grid).unwrap().validate().is_valid());
}

#[test]
fn skew_even_grids_on_the_coordinate_torus() {
    for n in [2, 4] {
        let grid = GridSpec {
            identification: Identification::Coordinate,
            ..GridSpec::periodic([n; 3], [1.0; 3])
        };
        let c = tile_and_identify(&BlockSpec::skew_even(), &grid).unwrap();
        assert_eq!(c.num_tets(), 6 * n * n * n);
    }
    let grid = GridSpec {
        identification: Identification::Coordinate,
        ..GridSpec::periodic([3; 3], [1.0; 3])
    };
    assert!(matches!(
        tile_and_identify(&BlockSpec::skew_even(), &grid),
        Err(ricci_mesh::Error::IncompatibleGrid(_))
    ));
}

#[test]
fn covering_of_single_block() {
    let c = tile_and_identify(&BlockSpec::cubic(), &GridSpec::periodic([1, 1, 1], [1.0; 3])).unwrap();
    assert_eq!(unambiguous_factors(&c), [3, 3, 3]);
    let cov = covering_duplicate(&c, [3, 3, 3]).unwrap();
    assert_eq!(cov.complex.num_vertices(), 27);
    assert!(cov.vertex_map.iter().all(|v| v.0 == 0));
    assert!(cov.complex.labels_unambiguous());
    assert!(cov.complex.validate().is_valid());
    assert!(!c.labels_unambiguous());
}

#[test]
fn covering_identity() {
    let c = tile_and_identify(&BlockSpec::cubic(), &GridSpec::periodic([3, 3, 3], [1.0; 3])).unwrap();
    let cov = covering_duplicate(&c, [1, 1, 1]).unwrap();
    assert_eq!(cov.edge_map.iter().map(|e| e.0).collect::<Vec<_>>(), (0..c.num_edges()).collect::<Vec<_>>());
    assert!(c.labels_unambiguous());
}

#[test]
fn covering_of_two_block_row() {
    let c = tile_and_identify(&BlockSpec::cubic(), &GridSpec::periodic([2, 1, 1], [2.0, 1.0, 1.0])).unwrap();
    let cov = covering_duplicate(&c, [1, 3, 3]).unwrap();
    assert!(cov.complex.validate().is_valid());
    assert_eq!(cov.complex.num_vertices(), 18);
    // two labels along x still pair up the two x-edges of each row
    assert!(!cov.complex.labels_unambiguous());
    let cov = covering_duplicate(&c, [2, 3, 3]).unwrap();
    assert!(cov.complex.labels_unambiguous());
}

#[test]
fn covering_preserves_incidence_degrees() {
    let c = tile_and_identify(&BlockSpec::nil_matched(), &nil_grid(2, 1.0)).unwrap();
    let cov = covering_duplicate(&c, [2, 3, 3]).unwrap();
    assert!(cov.complex.validate().is_valid());
    for (e, orig) in cov.edge_map.iter().enumerate() {
        assert_eq!(cov.complex.edge_tets[e].len(), c.edge_tets[orig.0].len());
    }
    for (v, orig) in cov.vertex_map.iter().enumerate() {
        assert_eq!(cov.complex.vertex_corners[v].len(), c.vertex_corners[orig.0].len());
    }
}

#[test]
fn identification_is_idempotent() {
    // assembling the already-identified tets again yields the same complex
    let c = tile_and_identify(&BlockSpec::diamond(), &GridSpec::periodic([2, 1, 3], [1.0; 3])).unwrap();
    let lifts: Vec<_> = c.tets.iter().map(|t| t.lift).collect();
    let again = ricci_mesh::SimplicialComplex3::assemble(
        c.block.clone(), c.grid.clone(), c.deck.clone(), c.chart.clone(), &lifts, &[],
    );
    assert_eq!(again.tets, c.tets);
    assert_eq!(again.edges, c.edges);
}

#[test]
fn mesh_dump_is_sorted() {
    let c = tile_and_identify(&BlockSpec::cubic(), &GridSpec::periodic([3, 3, 3], [1.0; 3])).unwrap();
    let d = c.mesh_dump();
    assert!(d.edges.windows(2).all(|w| w[0] <= w[1]));
    assert!(d.tets.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(d.body_diagonals.len(), 27);
    let back: ricci_mesh::complex::MeshDump = serde_json::from_str(&c.to_json()).unwrap();
    assert_eq!(back, d);
    let _ = BlockKind::Cubic;
}
