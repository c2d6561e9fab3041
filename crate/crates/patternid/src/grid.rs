//! Uniform spatial grids for the method-of-lines discretisations.

use serde::{Deserialize, Serialize};

/// A uniform grid on an interval (dim 1) or a square (dim 2) with
/// `nodes_per_axis` nodes per axis, including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub dim: usize,
    pub nodes_per_axis: usize,
    pub length: f64,
}

impl Grid {
    pub fn line(nodes_per_axis: usize, length: f64) -> Self {
        Self { dim: 1, nodes_per_axis, length }
    }

    pub fn square(nodes_per_axis: usize, length: f64) -> Self {
        Self { dim: 2, nodes_per_axis, length }
    }

    /// Node spacing h = L / (M - 1).
    pub fn spacing(&self) -> f64 {
        self.length / (self.nodes_per_axis - 1) as f64
    }

    /// Total number of nodes (per field component).
    pub fn node_count(&self) -> usize {
        match self.dim {
            1 => self.nodes_per_axis,
            2 => self.nodes_per_axis * self.nodes_per_axis,
            d => panic!("unsupported grid dimension {d}"),
        }
    }
}
