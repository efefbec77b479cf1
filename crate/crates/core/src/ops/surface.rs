//! Quaternionic Cauchy integrals and the Hardy projection on closed
//! surfaces.
//!
//! The Cauchy kernel is e(v) = conj(v) / (4*pi*|v|^3) with v embedded as a
//! pure quaternion; the conjugate is what makes e(y - x) * n(y) integrate to
//! +1 over a surface enclosing x (for the unit sphere at the origin,
//! conj(y) * y = |y|^2). Products are evaluated kernel * normal * density in
//! that fixed order.

use crate::mesh::{BoundaryMesh, MeshCells};
use crate::ops::qmatrix::QMatrix;
use crate::ops::quaternion::{Quaternion, ONE};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SurfaceError {
    #[error("surface sampling needs a triangle mesh")]
    NotTriangles,
    #[error("triangle {0} is degenerate (area {1:.3e} of total)")]
    DegenerateTriangle(usize, f64),
    #[error("surface has no triangles")]
    Empty,
    #[error("evaluation point within one mesh size of triangle {0}")]
    PointTooClose(usize),
    #[error("density length {got} does not match sampling {expected}")]
    DensityLength { expected: usize, got: usize },
}

/// Centroid-rule sampling of a watertight closed surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSampling {
    pub centroids: Vec<[f64; 3]>,
    /// Outward unit normals.
    pub normals: Vec<[f64; 3]>,
    pub areas: Vec<f64>,
}

impl SurfaceSampling {
    /// Build from a consistently wound triangle mesh. Normals come from the
    /// winding; if the net flux of the position field is negative the whole
    /// orientation is flipped, so normals always end up outward.
    pub fn from_mesh(mesh: &BoundaryMesh) -> Result<SurfaceSampling, SurfaceError> {
        let tris = match &mesh.cells {
            MeshCells::Triangles(t) => t,
            MeshCells::Segments(_) => return Err(SurfaceError::NotTriangles),
        };
        if tris.is_empty() {
            return Err(SurfaceError::Empty);
        }
        let mut centroids = Vec::with_capacity(tris.len());
        let mut normals = Vec::with_capacity(tris.len());
        let mut areas = Vec::with_capacity(tris.len());
        for &[a, b, c] in tris {
            let p = mesh.vertices[a];
            let q = mesh.vertices[b];
            let r = mesh.vertices[c];
            let u = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
            let v = [r[0] - p[0], r[1] - p[1], r[2] - p[2]];
            let n = [
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ];
            let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            centroids.push([
                (p[0] + q[0] + r[0]) / 3.0,
                (p[1] + q[1] + r[1]) / 3.0,
                (p[2] + q[2] + r[2]) / 3.0,
            ]);
            areas.push(0.5 * len);
            if len > 0.0 {
                normals.push([n[0] / len, n[1] / len, n[2] / len]);
            } else {
                normals.push([0.0, 0.0, 0.0]);
            }
        }
        let total: f64 = areas.iter().sum();
        for (i, &a) in areas.iter().enumerate() {
            if a <= 1e-12 * total {
                return Err(SurfaceError::DegenerateTriangle(i, a / total));
            }
        }
        let flux: f64 = centroids
            .iter()
            .zip(&normals)
            .zip(&areas)
            .map(|((c, n), &a)| (c[0] * n[0] + c[1] * n[1] + c[2] * n[2]) * a)
            .sum();
        if flux < 0.0 {
            for n in &mut normals {
                *n = [-n[0], -n[1], -n[2]];
            }
        }
        Ok(SurfaceSampling {
            centroids,
            normals,
            areas,
        })
    }

    pub fn len(&self) -> usize {
        self.centroids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centroids.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }
}

/// Cauchy kernel e(v) = conj(v) / (4 pi |v|^3) as a quaternion.
fn cauchy_kernel(v: [f64; 3]) -> Quaternion {
    let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let r = r2.sqrt();
    let s = 1.0 / (4.0 * std::f64::consts::PI * r2 * r);
    Quaternion::pure(v).conj().scale(s)
}

/// Discrete Cauchy-Pompeiu integral of `density` evaluated at `point`.
pub fn cauchy_integral_surface(
    surface: &SurfaceSampling,
    density: &[Quaternion],
    point: [f64; 3],
) -> Result<Quaternion, SurfaceError> {
    if surface.is_empty() {
        return Err(SurfaceError::Empty);
    }
    if density.len() != surface.len() {
        return Err(SurfaceError::DensityLength {
            expected: surface.len(),
            got: density.len(),
        });
    }
    let mut acc = Quaternion::real(0.0);
    for j in 0..surface.len() {
        let y = surface.centroids[j];
        let v = [y[0] - point[0], y[1] - point[1], y[2] - point[2]];
        let d2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if d2 < surface.areas[j] {
            return Err(SurfaceError::PointTooClose(j));
        }
        let term = cauchy_kernel(v) * Quaternion::pure(surface.normals[j]) * density[j];
        acc = acc + term.scale(surface.areas[j]);
    }
    Ok(acc)
}

/// Quaternionic Hardy projection P = (I + S)/2 with S[i][j] =
/// 2 e(y_j - y_i) n_j area_j off the diagonal, diagonal fixed so rows of S
/// reproduce constants.
pub fn hardy_projection_surface(surface: &SurfaceSampling) -> Result<QMatrix, SurfaceError> {
    let n = surface.len();
    if n == 0 {
        return Err(SurfaceError::Empty);
    }
    let mut s = QMatrix::zeros(n, n);
    for i in 0..n {
        let xi = surface.centroids[i];
        let mut row_sum = Quaternion::real(0.0);
        for j in 0..n {
            if j == i {
                continue;
            }
            let y = surface.centroids[j];
            let v = [y[0] - xi[0], y[1] - xi[1], y[2] - xi[2]];
            let e = cauchy_kernel(v) * Quaternion::pure(surface.normals[j]);
            let entry = e.scale(2.0 * surface.areas[j]);
            s.set(i, j, entry);
            row_sum = row_sum + entry;
        }
        s.set(i, i, ONE - row_sum);
    }
    Ok(QMatrix::identity(n).add(&s).scale(0.5))
}

/// Idempotence defect of a projection candidate, measured on resolved
/// densities: the worst area-weighted relative error of (P^2 - P) f over the
/// coordinate probe densities f = x, y, z. The raw matrix norm of P^2 - P is
/// pinned near 1/4 for any pointwise Nystrom family (densities oscillating at
/// the mesh scale always defeat the quadrature, exactly as the punctured
/// trapezoid rule does on curves), so convergence under refinement is visible
/// only on densities the mesh can represent.
pub fn idempotence_defect(surface: &SurfaceSampling, p: &QMatrix) -> f64 {
    let mut worst = 0.0f64;
    for axis in 0..3 {
        let f: Vec<Quaternion> = surface
            .centroids
            .iter()
            .map(|c| Quaternion::real(c[axis]))
            .collect();
        let pf = p.apply(&f);
        let ppf = p.apply(&pf);
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..f.len() {
            num += (ppf[j] - pf[j]).norm_sq() * surface.areas[j];
            den += f[j].norm_sq() * surface.areas[j];
        }
        worst = worst.max((num / den).sqrt());
    }
    worst
}
