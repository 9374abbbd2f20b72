//! Integer lattice coordinates and the deck group of a periodic tiling.
//!
//! Every vertex of a tiling lives at an integer point of the covering space.
//! The deck group is generated by three periods; the first may carry a shear
//! `k -> k - twist * j`, which realises the Nil face gluing. Orbits of lifted
//! simplices under the group are the simplices of the quotient complex.

use crate::error::{Error, Result};

/// A point of the covering-space index lattice.
pub type Lift = [i64; 3];

/// Product of inverse generator powers that maps a point into the fundamental box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reduction {
    powers: [i64; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeckGroup {
    /// Upper-triangular period rows: rows[a][b] = 0 for b < a, rows[a][a] > 0.
    rows: [[i64; 3]; 3],
    twist: i64,
}

impl DeckGroup {
    /// Pure translation group generated by the given period vectors.
    pub fn translations(periods: [[i64; 3]; 3]) -> Result<Self> {
        let rows = echelon(periods)?;
        Ok(Self { rows, twist: 0 })
    }

    /// Axis-aligned periods with the first generator sheared by `twist`.
    pub fn twisted(periods: [i64; 3], twist: i64) -> Result<Self> {
        if periods.iter().any(|&p| p <= 0) {
            return Err(Error::InvalidGrid(format!("non-positive period {periods:?}")));
        }
        // The commutator of the first two generators is a shift of twist * n_y
        // along k, which must itself be a period.
        if (twist * periods[1]).rem_euclid(periods[2]) != 0 {
            return Err(Error::IncompatibleGrid(format!(
                "twist {twist} with periods {periods:?} does not close"
            )));
        }
        Ok(Self {
            rows: [[periods[0], 0, 0], [0, periods[1], 0], [0, 0, periods[2]]],
            twist,
        })
    }

    pub fn rows(&self) -> [[i64; 3]; 3] {
        self.rows
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    /// Number of lattice points per fundamental domain.
    pub fn index(&self) -> i64 {
        self.rows[0][0] * self.rows[1][1] * self.rows[2][2]
    }

    /// The subgroup generated by the `factors`-th powers of each generator.
    pub fn power(&self, factors: [i64; 3]) -> Result<Self> {
        if self.twist != 0 {
            Self::twisted(
                [
                    self.rows[0][0] * factors[0],
                    self.rows[1][1] * factors[1],
                    self.rows[2][2] * factors[2],
                ],
                self.twist * factors[0],
            )
        } else {
            let mut periods = self.rows;
            for (row, f) in periods.iter_mut().zip(factors) {
                row.iter_mut().for_each(|x| *x *= f);
            }
            Self::translations(periods)
        }
    }

    fn step(&self, p: Lift, gen: usize, power: i64) -> Lift {
        let r = self.rows[gen];
        let mut q = [p[0] + power * r[0], p[1] + power * r[1], p[2] + power * r[2]];
        if gen == 0 && self.twist != 0 {
            // g0 does not move j, so its powers compose linearly.
            q[2] -= power * self.twist * p[1];
        }
        q
    }

    /// Maps `p` into the box `[0,rows[0][0]) x [0,rows[1][1]) x [0,rows[2][2])`.
    pub fn reduce(&self, p: Lift) -> (Lift, Reduction) {
        let mut q = p;
        let mut powers = [0; 3];
        for (a, power) in powers.iter_mut().enumerate() {
            let m = q[a].div_euclid(self.rows[a][a]);
            q = self.step(q, a, -m);
            *power = m;
        }
        (q, Reduction { powers })
    }

    /// Applies the same group element that `reduce` applied to another point.
    pub fn apply(&self, red: &Reduction, p: Lift) -> Lift {
        let mut q = p;
        for a in 0..3 {
            q = self.step(q, a, -red.powers[a]);
        }
        q
    }

    /// Canonical representative of a lifted simplex.
    ///
    /// Returns the sorted canonical points and, for each input point, its slot
    /// in that sorted list.
    pub fn canonical_simplex<const N: usize>(&self, pts: &[Lift; N]) -> ([Lift; N], [usize; N]) {
        let mut best: Option<([Lift; N], [usize; N])> = None;
        for anchor in pts {
            let (_, red) = self.reduce(*anchor);
            let moved: [Lift; N] = std::array::from_fn(|i| self.apply(&red, pts[i]));
            let mut order: [usize; N] = std::array::from_fn(|i| i);
            order.sort_by_key(|&i| moved[i]);
            let sorted: [Lift; N] = std::array::from_fn(|s| moved[order[s]]);
            let mut slot = [0; N];
            for (s, &i) in order.iter().enumerate() {
                slot[i] = s;
            }
            if best.as_ref().is_none_or(|(b, _)| sorted < *b) {
                best = Some((sorted, slot));
            }
        }
        best.expect("simplex has at least one vertex")
    }
}

/// Integer row echelon form with positive pivots.
fn echelon(mut m: [[i64; 3]; 3]) -> Result<[[i64; 3]; 3]> {
    for col in 0..3 {
        loop {
            let pivot = (col..3)
                .filter(|&r| m[r][col] != 0)
                .min_by_key(|&r| m[r][col].abs());
            let Some(p) = pivot else {
                return Err(Error::InvalidGrid("degenerate period lattice".into()));
            };
            m.swap(col, p);
            let mut done = true;
            for r in col + 1..3 {
                let q = m[r][col].div_euclid(m[col][col]);
                if q != 0 {
                    for c in 0..3 {
                        m[r][c] -= q * m[col][c];
                    }
                }
                if m[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[col][col] < 0 {
            m[col].iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(m)
}
