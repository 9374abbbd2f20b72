//! Simplicial 3-complexes built from periodic block grids.
//!
//! Simplices are orbits of lifted simplices under the deck group, so a single
//! self-identified block (where every vertex carries the same label) is as
//! well defined as a large grid. Ids are dense and ordered lexicographically
//! by vertex-id tuple, ties broken by the canonical lift.

pub mod block;
mod build;
mod json;
pub mod lattice;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use block::{BlockKind, BlockTemplate, Decomposition};
pub use build::{build_block, covering_duplicate, tile_and_identify, unambiguous_factors, Covering};
pub use json::MeshDump;
pub use lattice::{DeckGroup, Lift};
pub use validate::{ValidationReport, Violation};

macro_rules! id_type {
    ($name:ident) => {
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
        )]
        pub struct $name(pub usize);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0
            }
        }
    };
}

id_type!(VertexId);
id_type!(EdgeId);
id_type!(TriId);
id_type!(TetId);

/// Corner pairs of the six local edges of a tetrahedron.
pub const LOCAL_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

pub fn local_edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    LOCAL_EDGES
        .iter()
        .position(|e| *e == [a, b])
        .expect("distinct corners of a tetrahedron")
}

/// Corners of the face opposite corner `f`, ascending.
pub fn face_corners(f: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut n = 0;
    for c in 0..4 {
        if c != f {
            out[n] = c;
            n += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub kind: BlockKind,
    /// Lattice basis vectors, `basis[c]` spanning block axis `c`, in units of the block extents.
    pub basis: [[f64; 3]; 3],
    pub decomposition: Decomposition,
}

impl BlockSpec {
    const IDENTITY: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

    pub fn cubic() -> Self {
        Self {
            kind: BlockKind::Cubic,
            basis: Self::IDENTITY,
            decomposition: Decomposition::Standard,
        }
    }

    pub fn diamond() -> Self {
        Self {
            kind: BlockKind::Diamond,
            basis: Self::IDENTITY,
            decomposition: Decomposition::Standard,
        }
    }

    /// Skewed cube with `v_y = (0,1,0)`.
    pub fn skew(v_x: [f64; 3], v_z: [f64; 3]) -> Self {
        Self {
            kind: BlockKind::Skew,
            basis: [v_x, [0.0, 1.0, 0.0], v_z],
            decomposition: Decomposition::Standard,
        }
    }

    /// The strongly Delaunay skew block, `v_x = (1,-1/3,0)`, `v_z = (-1/3,-2/9,1)`.
    pub fn skew_standard() -> Self {
        Self::skew([1.0, -1.0 / 3.0, 0.0], [-1.0 / 3.0, -2.0 / 9.0, 1.0])
    }

    /// Skew block adapted to small even grids, `v_x = (1,-1/2,0)`, `v_z = (-1/2,-1/4,1)`.
    pub fn skew_even() -> Self {
        Self::skew([1.0, -0.5, 0.0], [-0.5, -0.25, 1.0])
    }

    pub fn nil_matched() -> Self {
        Self {
            decomposition: Decomposition::NilMatched,
            ..Self::cubic()
        }
    }

    pub fn of_kind(kind: BlockKind) -> Self {
        match kind {
            BlockKind::Cubic => Self::cubic(),
            BlockKind::Skew => Self::skew_standard(),
            BlockKind::Diamond => Self::diamond(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.basis;
        let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
            - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        if !(det.abs() > 1e-12) {
            return Err(Error::InvalidBlock("basis vectors are linearly dependent".into()));
        }
        if self.kind == BlockKind::Diamond && self.basis != Self::IDENTITY {
            return Err(Error::InvalidBlock("diamond blocks use the coordinate basis".into()));
        }
        if self.decomposition == Decomposition::NilMatched && self.kind != BlockKind::Cubic {
            return Err(Error::InvalidBlock("the Nil-matched variant is cubic only".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identification {
    /// Opposite faces of the block grid are glued; periods follow the block lattice.
    Grid,
    /// Periods are the coordinate box edges, whatever the block basis.
    Coordinate,
    /// Coordinate box with the x-faces glued by `(0,y,z) ~ (X, y, z - lambda X y)`.
    NilTwist { lambda: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub counts: [usize; 3],
    /// Coordinate extent of the whole grid along each axis.
    pub extents: [f64; 3],
    pub origin: [f64; 3],
    pub identification: Identification,
}

impl GridSpec {
    pub fn periodic(counts: [usize; 3], extents: [f64; 3]) -> Self {
        Self {
            counts,
            extents,
            origin: [0.0; 3],
            identification: Identification::Grid,
        }
    }

    pub fn block_size(&self) -> [f64; 3] {
        std::array::from_fn(|a| self.extents[a] / self.counts[a] as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.counts.contains(&0) {
            return Err(Error::InvalidGrid(format!("block counts must be >= 1: {:?}", self.counts)));
        }
        if self.extents.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
            return Err(Error::InvalidGrid(format!("extents must be > 0: {:?}", self.extents)));
        }
        Ok(())
    }
}

/// Affine map from index-lattice points to manifold coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub origin: [f64; 3],
    /// Coordinate displacement of one index step along each lattice axis.
    pub axes: [[f64; 3]; 3],
}

impl Chart {
    pub fn position(&self, p: Lift) -> [f64; 3] {
        std::array::from_fn(|r| {
            self.origin[r] + (0..3).map(|c| p[c] as f64 * self.axes[c][r]).sum::<f64>()
        })
    }

    pub fn displacement(&self, from: Lift, to: Lift) -> [f64; 3] {
        let d = [to[0] - from[0], to[1] - from[1], to[2] - from[2]];
        std::array::from_fn(|r| (0..3).map(|c| d[c] as f64 * self.axes[c][r]).sum::<f64>())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub lift: Lift,
    pub position: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Endpoint classes, in the order of `lift`.
    pub vertices: [VertexId; 2],
    pub lift: [Lift; 2],
    pub body_diagonal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triangle {
    pub vertices: [VertexId; 3],
    pub lift: [Lift; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tet {
    pub vertices: [VertexId; 4],
    pub lift: [Lift; 4],
    /// Edge class of each local edge (see [`LOCAL_EDGES`]).
    pub edges: [EdgeId; 6],
    /// Slot in the edge's canonical lift taken by each corner of the local edge.
    pub edge_slots: [[u8; 2]; 6],
    /// Triangle class of the face opposite each corner.
    pub faces: [TriId; 4],
    /// Slot in the triangle's canonical lift of each corner in [`face_corners`] order.
    pub face_slots: [[u8; 3]; 4],
}

impl Tet {
    /// Slot of corner `c` within face `f`'s canonical triangle.
    pub fn face_slot_of(&self, f: usize, c: usize) -> usize {
        let fc = face_corners(f);
        let i = fc.iter().position(|&x| x == c).expect("corner lies on face");
        self.face_slots[f][i] as usize
    }

    /// Corner of face `f` occupying triangle slot `slot`.
    pub fn face_corner_at_slot(&self, f: usize, slot: usize) -> usize {
        let fc = face_corners(f);
        let i = self.face_slots[f]
            .iter()
            .position(|&s| s as usize == slot)
            .expect("slot in range");
        fc[i]
    }

    /// Local edges of this tet in class `e`.
    pub fn local_edges_of(&self, e: EdgeId) -> impl Iterator<Item = usize> + '_ {
        (0..6).filter(move |&k| self.edges[k] == e)
    }
}

#[derive(Debug, Clone)]
pub struct SimplicialComplex3 {
    pub block: BlockSpec,
    pub grid: GridSpec,
    pub deck: DeckGroup,
    pub chart: Chart,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub triangles: Vec<Triangle>,
    pub tets: Vec<Tet>,
    /// Incidences (tet, local edge) around each edge, cyclically ordered when the link closes.
    pub edge_tets: Vec<Vec<(TetId, u8)>>,
    /// Incidences (tet, opposite corner) of each triangle.
    pub tri_tets: Vec<Vec<(TetId, u8)>>,
    /// Corners (tet, local corner) in the class of each vertex.
    pub vertex_corners: Vec<Vec<(TetId, u8)>>,
    edge_index: HashMap<[Lift; 2], EdgeId>,
    tri_index: HashMap<[Lift; 3], TriId>,
    tet_index: HashMap<[Lift; 4], TetId>,
    vertex_index: HashMap<Lift, VertexId>,
}

impl SimplicialComplex3 {
    /// Assembles a complex from lifted tetrahedra. No validation is performed.
    pub fn assemble(
        block: BlockSpec,
        grid: GridSpec,
        deck: DeckGroup,
        chart: Chart,
        tets: &[[Lift; 4]],
        body_diagonals: &[[Lift; 2]],
    ) -> Self {
        let canon_tets: BTreeSet<[Lift; 4]> =
            tets.iter().map(|t| deck.canonical_simplex(t).0).collect();

        let vertex_lifts: BTreeSet<Lift> = canon_tets
            .iter()
            .flat_map(|t| t.iter().map(|p| deck.reduce(*p).0))
            .collect();
        let vertex_index: HashMap<Lift, VertexId> = vertex_lifts
            .iter()
            .enumerate()
            .map(|(i, p)| (*p, VertexId(i)))
            .collect();
        let vid = |p: &Lift| vertex_index[&deck.reduce(*p).0];

        let mut edge_set = BTreeSet::new();
        let mut tri_set = BTreeSet::new();
        for t in &canon_tets {
            for [a, b] in LOCAL_EDGES {
                edge_set.insert(deck.canonical_simplex(&[t[a], t[b]]).0);
            }
            for f in 0..4 {
                let fc = face_corners(f);
                tri_set.insert(deck.canonical_simplex(&fc.map(|c| t[c])).0);
            }
        }

        fn ordered<const N: usize>(
            set: impl IntoIterator<Item = [Lift; N]>,
            vid: impl Fn(&Lift) -> VertexId,
        ) -> Vec<([VertexId; N], [Lift; N])> {
            let mut v: Vec<_> = set
                .into_iter()
                .map(|l| {
                    let ids = l.map(|p| vid(&p));
                    let mut key = ids;
                    key.sort();
                    (key, ids, l)
                })
                .collect();
            v.sort_by_key(|a| (a.0, a.2));
            v.into_iter().map(|(_, ids, l)| (ids, l)).collect()
        }

        let diag_set: BTreeSet<[Lift; 2]> = body_diagonals
            .iter()
            .map(|d| deck.canonical_simplex(d).0)
            .collect();

        let edges: Vec<Edge> = ordered(edge_set, vid)
            .into_iter()
            .map(|(vertices, lift)| Edge {
                vertices,
                lift,
                body_diagonal: diag_set.contains(&lift),
            })
            .collect();
        let triangles: Vec<Triangle> = ordered(tri_set, vid)
            .into_iter()
            .map(|(vertices, lift)| Triangle { vertices, lift })
            .collect();
        let edge_index: HashMap<_, _> =
            edges.iter().enumerate().map(|(i, e)| (e.lift, EdgeId(i))).collect();
        let tri_index: HashMap<_, _> = triangles
            .iter()
            .enumerate()
            .map(|(i, t)| (t.lift, TriId(i)))
            .collect();

        let tets: Vec<Tet> = ordered(canon_tets, vid)
            .into_iter()
            .map(|(vertices, lift)| {
                let mut edges = [EdgeId(0); 6];
                let mut edge_slots = [[0u8; 2]; 6];
                for (k, [a, b]) in LOCAL_EDGES.iter().enumerate() {
                    let (key, slot) = deck.canonical_simplex(&[lift[*a], lift[*b]]);
                    edges[k] = edge_index[&key];
                    edge_slots[k] = [slot[0] as u8, slot[1] as u8];
                }
                let mut faces = [TriId(0); 4];
                let mut face_slots = [[0u8; 3]; 4];
                for f in 0..4 {
                    let fc = face_corners(f);
                    let (key, slot) = deck.canonical_simplex(&fc.map(|c| lift[c]));
                    faces[f] = tri_index[&key];
                    face_slots[f] = slot.map(|s| s as u8);
                }
                Tet {
                    vertices,
                    lift,
                    edges,
                    edge_slots,
                    faces,
                    face_slots,
                }
            })
            .collect();
        let tet_index = tets.iter().enumerate().map(|(i, t)| (t.lift, TetId(i))).collect();

        let vertices: Vec<Vertex> = vertex_lifts
            .iter()
            .map(|&p| Vertex {
                lift: p,
                position: chart.position(p),
            })
            .collect();

        let mut edge_tets = vec![Vec::new(); edges.len()];
        let mut tri_tets = vec![Vec::new(); triangles.len()];
        let mut vertex_corners = vec![Vec::new(); vertices.len()];
        for (ti, t) in tets.iter().enumerate() {
            for k in 0..6 {
                edge_tets[t.edges[k].0].push((TetId(ti), k as u8));
            }
            for f in 0..4 {
                tri_tets[t.faces[f].0].push((TetId(ti), f as u8));
            }
            for c in 0..4 {
                vertex_corners[t.vertices[c].0].push((TetId(ti), c as u8));
            }
        }

        let mut complex = Self {
            block,
            grid,
            deck,
            chart,
            vertices,
            edges,
            triangles,
            tets,
            edge_tets,
            tri_tets,
            vertex_corners,
            edge_index,
            tri_index,
            tet_index,
            vertex_index,
        };
        for e in 0..complex.edges.len() {
            if let Ok(cycle) = complex.walk_edge_link(EdgeId(e)) {
                complex.edge_tets[e] = cycle;
            }
        }
        complex
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_triangles() as i64
            - self.num_tets() as i64
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn tet(&self, t: TetId) -> &Tet {
        &self.tets[t.0]
    }

    pub fn body_diagonals(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.body_diagonal)
            .map(|(i, _)| EdgeId(i))
    }

    /// Vertex class of a lifted point, if it is a vertex of the complex.
    pub fn vertex_of(&self, p: Lift) -> Option<VertexId> {
        self.vertex_index.get(&self.deck.reduce(p).0).copied()
    }

    /// Edge class of a lifted segment; the flag is true when `pts[0]` sits in slot 0.
    pub fn edge_of(&self, pts: [Lift; 2]) -> Option<(EdgeId, bool)> {
        let (key, slot) = self.deck.canonical_simplex(&pts);
        self.edge_index.get(&key).map(|&e| (e, slot[0] == 0))
    }

    pub fn triangle_of(&self, pts: [Lift; 3]) -> Option<TriId> {
        self.tri_index.get(&self.deck.canonical_simplex(&pts).0).copied()
    }

    pub fn tet_of(&self, pts: [Lift; 4]) -> Option<TetId> {
        self.tet_index.get(&self.deck.canonical_simplex(&pts).0).copied()
    }

    /// Coordinate displacement from the slot-0 to the slot-1 end of an edge.
    pub fn edge_displacement(&self, e: EdgeId) -> [f64; 3] {
        let l = self.edges[e.0].lift;
        self.chart.displacement(l[0], l[1])
    }

    /// Coordinate endpoints of the canonical lift of an edge.
    pub fn edge_endpoints(&self, e: EdgeId) -> [[f64; 3]; 2] {
        self.edges[e.0].lift.map(|p| self.chart.position(p))
    }

    /// The tet incidence across face `f` of tet `t`, if the face is glued to exactly one other.
    pub fn across_face(&self, t: TetId, f: usize) -> Option<(TetId, usize)> {
        let tri = self.tets[t.0].faces[f];
        let inc = &self.tri_tets[tri.0];
        if inc.len() != 2 {
            return None;
        }
        inc.iter()
            .find(|&&(tt, ff)| !(tt == t && ff as usize == f))
            .map(|&(tt, ff)| (tt, ff as usize))
    }

    /// Corner of `t2` glued to corner `c` of `t` across face `f` (whose partner is `f2` in `t2`).
    pub fn glued_corner(&self, t: TetId, f: usize, c: usize, t2: TetId, f2: usize) -> usize {
        let slot = self.tets[t.0].face_slot_of(f, c);
        self.tets[t2.0].face_corner_at_slot(f2, slot)
    }

    /// Walks the ring of tets around an edge through shared faces.
    pub(crate) fn walk_edge_link(&self, e: EdgeId) -> std::result::Result<Vec<(TetId, u8)>, String> {
        let incidences = &self.edge_tets[e.0];
        let Some(&(t0, k0)) = incidences.first() else {
            return Err("edge has no tets".into());
        };
        let mut cycle = Vec::with_capacity(incidences.len());
        let (mut t, mut k) = (t0, k0 as usize);
        let [mut a, mut b] = LOCAL_EDGES[k];
        let others = |a: usize, b: usize| -> [usize; 2] {
            let mut o = [0; 2];
            let mut n = 0;
            for c in 0..4 {
                if c != a && c != b {
                    o[n] = c;
                    n += 1;
                }
            }
            o
        };
        let mut exit = others(a, b)[1];
        for _ in 0..=incidences.len() {
            cycle.push((t, k as u8));
            let (t2, f2) = self
                .across_face(t, exit)
                .ok_or_else(|| format!("face {exit} of tet {} is not glued to one tet", t.0))?;
            let a2 = self.glued_corner(t, exit, a, t2, f2);
            let b2 = self.glued_corner(t, exit, b, t2, f2);
            let o2 = others(a2, b2);
            let next_exit = if o2[0] == f2 { o2[1] } else { o2[0] };
            t = t2;
            k = local_edge_index(a2, b2);
            a = a2;
            b = b2;
            exit = next_exit;
            if t == t0 && k == k0 as usize {
                break;
            }
        }
        if !(t == t0 && k == k0 as usize) {
            return Err("link walk did not return".into());
        }
        if cycle.len() != incidences.len() {
            return Err(format!(
                "link splits into several cycles ({} of {} tets reached)",
                cycle.len(),
                incidences.len()
            ));
        }
        Ok(cycle)
    }

    /// Rebuilds the complex without one tetrahedron (for exercising validation).
    pub fn without_tet(&self, t: TetId) -> Self {
        let lifts: Vec<[Lift; 4]> = self
            .tets
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != t.0)
            .map(|(_, x)| x.lift)
            .collect();
        let diags: Vec<[Lift; 2]> = self
            .edges
            .iter()
            .filter(|e| e.body_diagonal)
            .map(|e| e.lift)
            .collect();
        Self::assemble(
            self.block.clone(),
            self.grid.clone(),
            self.deck.clone(),
            self.chart.clone(),
            &lifts,
            &diags,
        )
    }

    /// Vertex classes along each lattice axis of the fundamental domain.
    pub fn vertices_per_axis(&self) -> [usize; 3] {
        std::array::from_fn(|a| {
            self.vertices
                .iter()
                .map(|v| v.lift[a])
                .collect::<BTreeSet<_>>()
                .len()
        })
    }

    /// True when every simplex is determined by its set of vertex labels.
    pub fn labels_unambiguous(&self) -> bool {
        fn distinct<const N: usize>(items: impl Iterator<Item = [VertexId; N]>) -> bool {
            let mut seen = BTreeMap::new();
            for ids in items {
                let mut key = ids;
                key.sort();
                if key.windows(2).any(|w| w[0] == w[1]) {
                    return false;
                }
                if seen.insert(key, ()).is_some() {
                    return false;
                }
            }
            true
        }
        distinct(self.edges.iter().map(|e| e.vertices))
            && distinct(self.triangles.iter().map(|t| t.vertices))
            && distinct(self.tets.iter().map(|t| t.vertices))
    }
}
