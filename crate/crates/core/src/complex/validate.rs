use serde::Serialize;

use super::{EdgeId, SimplicialComplex3, TriId};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A triangle that is not shared by exactly two tet faces.
    TriangleDegree { triangle: TriId, tets: usize },
    /// The tets around an edge do not close into a single ring.
    EdgeLink { edge: EdgeId, reason: String },
    EulerCharacteristic { chi: i64 },
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        let tri = self
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::TriangleDegree { .. }))
            .count();
        let link = self
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::EdgeLink { .. }))
            .count();
        let chi = self.violations.iter().find_map(|v| match v {
            Violation::EulerCharacteristic { chi } => Some(*chi),
            _ => None,
        });
        let mut s = format!("{tri} triangle-degree and {link} edge-link violations");
        if let Some(chi) = chi {
            s.push_str(&format!(", Euler characteristic {chi}"));
        }
        s
    }
}

impl SimplicialComplex3 {
    /// Checks the closed-manifold invariants and lists every failure.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, inc) in self.tri_tets.iter().enumerate() {
            if inc.len() != 2 {
                violations.push(Violation::TriangleDegree {
                    triangle: TriId(i),
                    tets: inc.len(),
                });
            }
        }
        for e in 0..self.num_edges() {
            if let Err(reason) = self.walk_edge_link(EdgeId(e)) {
                violations.push(Violation::EdgeLink {
                    edge: EdgeId(e),
                    reason,
                });
            }
        }
        let chi = self.euler_characteristic();
        if chi != 0 {
            violations.push(Violation::EulerCharacteristic { chi });
        }
        ValidationReport { violations }
    }
}
