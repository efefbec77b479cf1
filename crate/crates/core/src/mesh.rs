//! Polyline and triangle meshes for lifted boundaries.

use crate::region::Point;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("mesh is empty")]
    Empty,
    #[error("mesh component is not a single closed loop")]
    NotAClosedLoop,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeshCells {
    /// Polyline segments (base dimension 1).
    Segments(Vec<[usize; 2]>),
    /// Triangles (base dimension 2), consistently wound so the right-hand
    /// normal points out of the enclosed lifted set.
    Triangles(Vec<[usize; 3]>),
}

/// A mesh of the lifted boundary: the graph of +/-d over the closure of U.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMesh {
    /// Base dimension n (ambient dimension is n + 1).
    pub base_dimension: usize,
    /// Grid spacing the mesh was extracted at.
    pub h: f64,
    pub vertices: Vec<Point>,
    /// Unsnapped lift height |t| per vertex (rim vertices are snapped to
    /// t = 0 in `vertices` but keep their raw height here).
    pub heights: Vec<f64>,
    pub cells: MeshCells,
    /// Connected-component label per cell; filled by the topology pass,
    /// zero before that.
    pub component_id: Vec<u32>,
}

impl BoundaryMesh {
    pub fn cell_count(&self) -> usize {
        match &self.cells {
            MeshCells::Segments(s) => s.len(),
            MeshCells::Triangles(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() || self.cell_count() == 0
    }

    /// Total length (segments) or area (triangles).
    pub fn measure(&self) -> f64 {
        match &self.cells {
            MeshCells::Segments(segs) => segs
                .iter()
                .map(|&[a, b]| dist(&self.vertices[a], &self.vertices[b]))
                .sum(),
            MeshCells::Triangles(tris) => tris
                .iter()
                .map(|&[a, b, c]| {
                    triangle_area(&self.vertices[a], &self.vertices[b], &self.vertices[c])
                })
                .sum(),
        }
    }

    /// Vertices of one connected component as an ordered closed loop,
    /// projected to the (x, t) plane. Every vertex must have degree 2.
    pub fn closed_loop(&self, component: u32) -> Result<Vec<[f64; 2]>, MeshError> {
        let segs = match &self.cells {
            MeshCells::Segments(s) => s,
            MeshCells::Triangles(_) => return Err(MeshError::NotAClosedLoop),
        };
        if segs.is_empty() {
            return Err(MeshError::Empty);
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (ci, &[a, b]) in segs.iter().enumerate() {
            if self.component_id.get(ci).copied().unwrap_or(0) != component {
                continue;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let start = match adj.iter().position(|v| !v.is_empty()) {
            Some(s) => s,
            None => return Err(MeshError::Empty),
        };
        for v in adj.iter().filter(|v| !v.is_empty()) {
            if v.len() != 2 {
                return Err(MeshError::NotAClosedLoop);
            }
        }
        let mut order = vec![start];
        let mut prev = start;
        let mut cur = adj[start][0];
        while cur != start {
            order.push(cur);
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
        }
        let total: usize = adj.iter().filter(|v| !v.is_empty()).count();
        if order.len() != total {
            return Err(MeshError::NotAClosedLoop);
        }
        Ok(order
            .into_iter()
            .map(|i| {
                let v = self.vertices[i];
                // Base dimension 1: plane coordinates are (x, t).
                [v[0], v[2]]
            })
            .collect())
    }
}

pub(crate) fn dist(a: &Point, b: &Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

pub(crate) fn triangle_area(a: &Point, b: &Point, c: &Point) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let n = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    0.5 * (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
}

/// Unit sphere triangulated by subdividing an icosahedron `subdivisions`
/// times: 20 * 4^s triangles, outward winding. Used as the calibration
/// surface for the quaternionic operator layer.
pub fn icosphere(subdivisions: u32) -> BoundaryMesh {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut vertices: Vec<Point> = vec![
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    for v in &mut vertices {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        *v = [v[0] / n, v[1] / n, v[2] / n];
    }
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut midpoint = std::collections::HashMap::new();
        let mut next = Vec::with_capacity(tris.len() * 4);
        for &[a, b, c] in &tris {
            let mut mid = |i: usize, j: usize, vertices: &mut Vec<Point>| -> usize {
                let key = (i.min(j), i.max(j));
                *midpoint.entry(key).or_insert_with(|| {
                    let p = vertices[i];
                    let q = vertices[j];
                    let mut m = [
                        (p[0] + q[0]) / 2.0,
                        (p[1] + q[1]) / 2.0,
                        (p[2] + q[2]) / 2.0,
                    ];
                    let n = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
                    m = [m[0] / n, m[1] / n, m[2] / n];
                    vertices.push(m);
                    vertices.len() - 1
                })
            };
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        tris = next;
    }
    let heights = vec![0.0; vertices.len()];
    let n_cells = tris.len();
    BoundaryMesh {
        base_dimension: 2,
        h: (4.0 * std::f64::consts::PI / n_cells as f64).sqrt(),
        vertices,
        heights,
        cells: MeshCells::Triangles(tris),
        component_id: vec![0; n_cells],
    }
}

/// Sample points on every cell at spacing at most `spacing`, for box counting.
pub fn sample_cells(mesh: &BoundaryMesh, spacing: f64) -> Vec<Point> {
    let mut out = Vec::new();
    match &mesh.cells {
        MeshCells::Segments(segs) => {
            for &[a, b] in segs {
                let p = mesh.vertices[a];
                let q = mesh.vertices[b];
                let n = (dist(&p, &q) / spacing).ceil().max(1.0) as usize;
                for i in 0..=n {
                    let s = i as f64 / n as f64;
                    out.push([
                        p[0] + s * (q[0] - p[0]),
                        p[1] + s * (q[1] - p[1]),
                        p[2] + s * (q[2] - p[2]),
                    ]);
                }
            }
        }
        MeshCells::Triangles(tris) => {
            for &[a, b, c] in tris {
                let p = mesh.vertices[a];
                let q = mesh.vertices[b];
                let r = mesh.vertices[c];
                let edge = dist(&p, &q).max(dist(&q, &r)).max(dist(&r, &p));
                let n = (edge / spacing).ceil().max(1.0) as usize;
                for i in 0..=n {
                    for j in 0..=(n - i) {
                        let u = i as f64 / n as f64;
                        let v = j as f64 / n as f64;
                        let w = 1.0 - u - v;
                        out.push([
                            w * p[0] + u * q[0] + v * r[0],
                            w * p[1] + u * q[1] + v * r[1],
                            w * p[2] + u * q[2] + v * r[2],
                        ]);
                    }
                }
            }
        }
    }
    out
}
