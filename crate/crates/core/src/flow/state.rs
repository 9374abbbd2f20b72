use serde::{Deserialize, Serialize};

use crate::complex::EdgeId;

/// One positive length per edge class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeLengthState {
    lengths: Vec<f64>,
}

impl EdgeLengthState {
    pub fn new(lengths: Vec<f64>) -> Self {
        Self { lengths }
    }

    pub fn uniform(num_edges: usize, l: f64) -> Self {
        Self::new(vec![l; num_edges])
    }

    #[inline]
    pub fn length(&self, e: EdgeId) -> f64 {
        self.lengths[e.0]
    }

    pub fn set(&mut self, e: EdgeId, l: f64) {
        self.lengths[e.0] = l;
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.lengths.iter().map(|l| l * s).collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.lengths
    }
}
