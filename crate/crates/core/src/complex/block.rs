//! Tetrahedral templates for one block, in index-lattice coordinates.

use super::lattice::Lift;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Cubic,
    Skew,
    Diamond,
}

impl std::str::FromStr for BlockKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cubic" => Ok(Self::Cubic),
            "skew" => Ok(Self::Skew),
            "diamond" => Ok(Self::Diamond),
            other => Err(format!("unknown block type `{other}`")),
        }
    }
}

impl std::fmt::Display for BlockKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Cubic => "cubic",
            Self::Skew => "skew",
            Self::Diamond => "diamond",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decomposition {
    Standard,
    /// First block along x re-cut so the twist glues its near yz-face to the
    /// far face of the grid; the other blocks are y-mirrored cubic blocks.
    NilMatched,
}

/// One block's tetrahedra relative to the block origin.
#[derive(Debug, Clone)]
pub struct BlockTemplate {
    /// Index-lattice steps per block edge (2 for diamond, whose centers sit at odd points).
    pub scale: i64,
    pub tets: Vec<[Lift; 4]>,
    pub body_diagonals: Vec<[Lift; 2]>,
}

/// Six tets around the main diagonal: one per monotone lattice path 0 -> (1,1,1).
pub fn cubic_template() -> BlockTemplate {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let tets = perms
        .iter()
        .map(|p| {
            let mut v = [[0i64; 3]; 4];
            for s in 0..3 {
                v[s + 1] = v[s];
                v[s + 1][p[s]] += 1;
            }
            v
        })
        .collect();
    BlockTemplate {
        scale: 1,
        tets,
        body_diagonals: vec![[[0, 0, 0], [1, 1, 1]]],
    }
}

/// Cube cut into two prisms by the plane x = y, each prism into three tets.
///
/// The x = 0 face keeps the standard (0,0,0)-(0,1,1) diagonal while the x = 1
/// face carries (1,1,0)-(1,0,1); all other faces match [`cubic_template`].
pub fn nil_matched_template() -> BlockTemplate {
    let c = |s: &str| {
        let b: Vec<i64> = s.bytes().map(|ch| (ch - b'0') as i64).collect();
        [b[0], b[1], b[2]]
    };
    let tets = [
        ["000", "100", "110", "101"],
        ["000", "110", "101", "111"],
        ["000", "001", "101", "111"],
        ["000", "010", "110", "111"],
        ["000", "010", "011", "111"],
        ["000", "001", "011", "111"],
    ]
    .iter()
    .map(|t| [c(t[0]), c(t[1]), c(t[2]), c(t[3])])
    .collect();
    BlockTemplate {
        scale: 1,
        tets,
        body_diagonals: vec![[[0, 0, 0], [1, 1, 1]]],
    }
}

/// Body-centred cubic cell in doubled coordinates: corners at even points,
/// the centre at (1,1,1). Four tets sit around each corner-lattice coordinate
/// edge, their outer ring made of centre-lattice edges.
pub fn diamond_template() -> BlockTemplate {
    let mut tets = Vec::with_capacity(12);
    for axis in 0..3 {
        let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
        let mut end = [0i64; 3];
        end[axis] = 2;
        let ring: Vec<Lift> = [(1, 1), (-1, 1), (-1, -1), (1, -1)]
            .iter()
            .map(|&(sb, sc)| {
                let mut p = [0i64; 3];
                p[axis] = 1;
                p[b] = sb;
                p[c] = sc;
                p
            })
            .collect();
        for i in 0..4 {
            tets.push([[0, 0, 0], end, ring[i], ring[(i + 1) % 4]]);
        }
    }
    BlockTemplate {
        scale: 2,
        tets,
        body_diagonals: Vec::new(),
    }
}

impl BlockTemplate {
    /// Mirror image in the xz-plane (y -> scale - y).
    pub fn reflect_y(&self) -> Self {
        let flip = |p: Lift| [p[0], self.scale - p[1], p[2]];
        Self {
            scale: self.scale,
            tets: self.tets.iter().map(|t| t.map(flip)).collect(),
            body_diagonals: self.body_diagonals.iter().map(|d| d.map(flip)).collect(),
        }
    }

    /// Mirror image in the xy-plane (z -> scale - z).
    pub fn reflect_z(&self) -> Self {
        let flip = |p: Lift| [p[0], p[1], self.scale - p[2]];
        Self {
            scale: self.scale,
            tets: self.tets.iter().map(|t| t.map(flip)).collect(),
            body_diagonals: self.body_diagonals.iter().map(|d| d.map(flip)).collect(),
        }
    }

    pub fn translated(&self, cell: [i64; 3]) -> Self {
        let shift = |p: Lift| {
            [
                p[0] + self.scale * cell[0],
                p[1] + self.scale * cell[1],
                p[2] + self.scale * cell[2],
            ]
        };
        Self {
            scale: self.scale,
            tets: self.tets.iter().map(|t| t.map(shift)).collect(),
            body_diagonals: self.body_diagonals.iter().map(|d| d.map(shift)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed_volume6(t: &[Lift; 4]) -> i64 {
        let d = |a: Lift, b: Lift| [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let (u, v, w) = (d(t[0], t[1]), d(t[0], t[2]), d(t[0], t[3]));
        u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0])
    }

    #[test]
    fn cube_templates_fill_the_cube() {
        for t in [cubic_template(), nil_matched_template()] {
            let total: i64 = t.tets.iter().map(|x| signed_volume6(x).abs()).sum();
            assert_eq!(total, 6);
            assert!(t.tets.iter().all(|x| signed_volume6(x) != 0));
        }
    }

    #[test]
    fn diamond_fills_a_doubled_cell() {
        let t = diamond_template();
        assert_eq!(t.tets.len(), 12);
        // each tet has volume (2*2*2)/12 in doubled units -> 6V = 4
        assert!(t.tets.iter().all(|x| signed_volume6(x).abs() == 4));
    }

    #[test]
    fn nil_template_face_diagonals() {
        let t = nil_matched_template();
        let has_edge = |a: Lift, b: Lift| {
            t.tets
                .iter()
                .any(|x| x.contains(&a) && x.contains(&b))
        };
        assert!(has_edge([0, 0, 0], [0, 1, 1]));
        assert!(has_edge([1, 1, 0], [1, 0, 1]));
        assert!(!has_edge([1, 0, 0], [1, 1, 1]));
    }
}
