//! Uniform node grids covering a region's bounding box with padding.

use crate::region::{Point, RegionSpec};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("resolution must be >= 2 per axis, got {0}")]
    BadResolution(usize),
    #[error("padding factor must be >= 1 bounding-box diameter, got {0}")]
    BadPadding(f64),
}

/// A uniform grid of nodes. Spacing `h` is identical on every axis; the grid
/// covers the region's bounding box inflated by at least one box diameter so
/// distance values near the region never see the grid edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dimension: usize,
    origin: [f64; 2],
    dims: [usize; 2],
    h: f64,
}

impl Grid {
    /// Build a grid for `region` with `resolution` nodes along the longest
    /// axis and `padding_factor` bounding-box diameters of padding per side.
    pub fn for_region(
        region: &RegionSpec,
        resolution: usize,
        padding_factor: f64,
    ) -> Result<Grid, GridError> {
        if resolution < 2 {
            return Err(GridError::BadResolution(resolution));
        }
        if padding_factor < 1.0 {
            return Err(GridError::BadPadding(padding_factor));
        }
        let (lo, hi) = region.bounding_box();
        let pad = padding_factor * region.bounding_diameter();
        let n = region.dimension();
        let mut extent = [0.0f64; 2];
        for a in 0..n {
            extent[a] = (hi[a] - lo[a]) + 2.0 * pad;
        }
        let max_extent = extent[..n].iter().cloned().fold(0.0, f64::max);
        let h = max_extent / (resolution - 1) as f64;
        let mut dims = [1usize; 2];
        let mut origin = [0.0f64; 2];
        for a in 0..n {
            dims[a] = ((extent[a] / h).ceil() as usize + 1).max(2);
            origin[a] = lo[a] - pad;
        }
        Ok(Grid {
            dimension: n,
            origin,
            dims,
            h,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn node_count(&self) -> usize {
        self.dims[0] * self.dims[1]
    }

    /// Flat index, row-major with x fastest.
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.dims[0] + ix
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.dims[0], idx / self.dims[0])
    }

    pub fn position(&self, idx: usize) -> Point {
        let (ix, iy) = self.coords(idx);
        [
            self.origin[0] + ix as f64 * self.h,
            self.origin[1] + iy as f64 * self.h,
            0.0,
        ]
    }

    /// Index of the node nearest to `p`, clamped to the grid.
    pub fn nearest_node(&self, p: &Point) -> usize {
        let mut idx = [0usize; 2];
        for a in 0..self.dimension {
            let f = ((p[a] - self.origin[a]) / self.h).round();
            idx[a] = f.clamp(0.0, (self.dims[a] - 1) as f64) as usize;
        }
        self.index(idx[0], idx[1])
    }
}

/// A sampled nonnegative scalar function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Self {
        assert_eq!(grid.node_count(), values.len());
        ScalarField { grid, values }
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    /// Maximum value over nodes inside the open region.
    pub fn max_inside(&self, region: &RegionSpec) -> f64 {
        let mut m = 0.0f64;
        for idx in 0..self.values.len() {
            if region.contains(&self.grid.position(idx)) {
                m = m.max(self.values[idx]);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_covers_padded_box() {
        let u = RegionSpec::interval(0.0, 1.0).unwrap();
        let g = Grid::for_region(&u, 64, 1.0).unwrap();
        assert_eq!(g.dimension(), 1);
        assert!(g.origin()[0] <= -1.0 + 1e-12);
        let last = g.position(g.node_count() - 1);
        assert!(last[0] >= 2.0 - 1e-12);
        assert_eq!(g.dims()[1], 1);
    }

    #[test]
    fn rejects_degenerate_parameters() {
        let u = RegionSpec::interval(0.0, 1.0).unwrap();
        assert!(matches!(
            Grid::for_region(&u, 1, 1.0),
            Err(GridError::BadResolution(1))
        ));
        assert!(matches!(
            Grid::for_region(&u, 8, 0.5),
            Err(GridError::BadPadding(_))
        ));
    }

    #[test]
    fn nearest_node_roundtrip() {
        let u = RegionSpec::disk([0.0, 0.0], 1.0).unwrap();
        let g = Grid::for_region(&u, 33, 1.0).unwrap();
        for idx in (0..g.node_count()).step_by(17) {
            let p = g.position(idx);
            assert_eq!(g.nearest_node(&p), idx);
        }
    }
}
