use serde::{Deserialize, Serialize};

use super::SimplicialComplex3;

/// Serializable mesh description; simplex arrays are sorted vertex-id tuples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshDump {
    pub vertices: Vec<[f64; 3]>,
    pub edges: Vec<[usize; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub tets: Vec<[usize; 4]>,
    pub body_diagonals: Vec<usize>,
}

fn sorted<const N: usize>(ids: [super::VertexId; N]) -> [usize; N] {
    let mut out = ids.map(|v| v.0);
    out.sort();
    out
}

impl SimplicialComplex3 {
    pub fn mesh_dump(&self) -> MeshDump {
        MeshDump {
            vertices: self.vertices.iter().map(|v| v.position).collect(),
            edges: self.edges.iter().map(|e| sorted(e.vertices)).collect(),
            triangles: self.triangles.iter().map(|t| sorted(t.vertices)).collect(),
            tets: self.tets.iter().map(|t| sorted(t.vertices)).collect(),
            body_diagonals: self.body_diagonals().map(|e| e.0).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.mesh_dump()).expect("mesh dump serializes")
    }
}
