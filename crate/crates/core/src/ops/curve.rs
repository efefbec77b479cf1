//! Discrete Cauchy singular integral, Hardy projection, and Toeplitz
//! operators on closed planar curves.
//!
//! The singular operator uses the alternating-point (parity) trapezoid rule:
//! row i only sees nodes j with j - i odd, at doubled weight. Unlike the
//! naive punctured trapezoid sum, this quadrature is spectrally accurate for
//! the principal-value Cauchy integral on smooth curves (on the circle it is
//! exact on the sampled Fourier modes), which is what makes P = (I + S)/2 an
//! idempotent to near machine precision.

use crate::ops::cmatrix::CMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CurveError {
    #[error("need at least {min} sample points, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("parity quadrature needs an even sample count, got {0}")]
    OddSampleCount(usize),
    #[error("loop is degenerate (zero length or zero area)")]
    DegenerateLoop,
    #[error("duplicate sample points at indices {0} and {1}")]
    DuplicatePoints(usize, usize),
    #[error("symbol vanishes: min modulus {0:.3e}")]
    VanishingSymbol(f64),
    #[error("symbol length {got} does not match sampling {expected}")]
    SymbolLength { expected: usize, got: usize },
}

/// Equi-arclength samples of a counterclockwise closed curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSampling {
    pub points: Vec<Complex64>,
    /// Unit tangents, consistent with the counterclockwise orientation.
    pub tangents: Vec<Complex64>,
    /// Arclength weight per node.
    pub weights: Vec<f64>,
}

/// Curve source for [`sample_closed_curve`].
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSource {
    Circle { radius: f64 },
    /// Closed polyline in the (x, t) plane; last vertex connects to first.
    Loop(Vec<[f64; 2]>),
}

impl CurveSampling {
    /// Exact samples of the circle |z| = radius.
    pub fn circle(radius: f64, n: usize) -> Result<CurveSampling, CurveError> {
        if n < 4 {
            return Err(CurveError::TooFewPoints { min: 4, got: n });
        }
        if n % 2 != 0 {
            return Err(CurveError::OddSampleCount(n));
        }
        let mut points = Vec::with_capacity(n);
        let mut tangents = Vec::with_capacity(n);
        for j in 0..n {
            let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let z = Complex64::from_polar(radius, th);
            points.push(z);
            tangents.push(Complex64::new(0.0, 1.0) * z / radius);
        }
        let w = 2.0 * std::f64::consts::PI * radius / n as f64;
        Ok(CurveSampling {
            points,
            tangents,
            weights: vec![w; n],
        })
    }

    /// Resample a closed polyline at n equi-arclength nodes, normalizing the
    /// orientation to counterclockwise.
    pub fn from_loop(loop_xy: &[[f64; 2]], n: usize) -> Result<CurveSampling, CurveError> {
        if n < 4 {
            return Err(CurveError::TooFewPoints { min: 4, got: n });
        }
        if n % 2 != 0 {
            return Err(CurveError::OddSampleCount(n));
        }
        if loop_xy.len() < 3 {
            return Err(CurveError::TooFewPoints {
                min: 3,
                got: loop_xy.len(),
            });
        }
        let mut verts: Vec<[f64; 2]> = loop_xy.to_vec();
        let mut area2 = 0.0;
        for i in 0..verts.len() {
            let a = verts[i];
            let b = verts[(i + 1) % verts.len()];
            area2 += a[0] * b[1] - b[0] * a[1];
        }
        if area2.abs() < 1e-300 {
            return Err(CurveError::DegenerateLoop);
        }
        if area2 < 0.0 {
            verts.reverse();
        }
        let m = verts.len();
        let mut cum = vec![0.0f64; m + 1];
        for i in 0..m {
            let a = verts[i];
            let b = verts[(i + 1) % m];
            cum[i + 1] = cum[i] + ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        }
        let total = cum[m];
        if total < 1e-300 {
            return Err(CurveError::DegenerateLoop);
        }
        let at = |s: f64| -> Complex64 {
            let s = s.rem_euclid(total);
            let seg = cum.partition_point(|&c| c <= s).min(m) - 1;
            let a = verts[seg];
            let b = verts[(seg + 1) % m];
            let len = cum[seg + 1] - cum[seg];
            let f = if len > 0.0 { (s - cum[seg]) / len } else { 0.0 };
            Complex64::new(a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]))
        };
        let ds = total / n as f64;
        let points: Vec<Complex64> = (0..n).map(|j| at(j as f64 * ds)).collect();
        let mut tangents = Vec::with_capacity(n);
        for j in 0..n {
            let fwd = points[(j + 1) % n];
            let bwd = points[(j + n - 1) % n];
            let t = fwd - bwd;
            let nrm = t.norm();
            if nrm < 1e-300 {
                return Err(CurveError::DegenerateLoop);
            }
            tangents.push(t / nrm);
        }
        Ok(CurveSampling {
            points,
            tangents,
            weights: vec![ds; n],
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn centroid(&self) -> Complex64 {
        let total: f64 = self.weights.iter().sum();
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(z, &w)| z * w)
            .sum::<Complex64>()
            / total
    }
}

pub fn sample_closed_curve(source: &CurveSource, n: usize) -> Result<CurveSampling, CurveError> {
    match source {
        CurveSource::Circle { radius } => CurveSampling::circle(*radius, n),
        CurveSource::Loop(xy) => CurveSampling::from_loop(xy, n),
    }
}

/// Nyström matrix of the singular Cauchy integral S, alternating-point rule,
/// diagonal fixed so every row sums to 1 (exactness on constants).
pub fn cauchy_singular_curve(curve: &CurveSampling) -> Result<CMatrix, CurveError> {
    let n = curve.len();
    if n < 4 {
        return Err(CurveError::TooFewPoints { min: 4, got: n });
    }
    if n % 2 != 0 {
        return Err(CurveError::OddSampleCount(n));
    }
    let inv_pi_i = Complex64::new(0.0, -1.0 / std::f64::consts::PI);
    let mut s = CMatrix::zeros(n, n);
    for i in 0..n {
        let zi = curve.points[i];
        let mut row_sum = Complex64::new(0.0, 0.0);
        for j in 0..n {
            if (j + n - i) % 2 == 0 {
                continue;
            }
            let dz = curve.points[j] - zi;
            if dz.norm() < 1e-300 {
                return Err(CurveError::DuplicatePoints(i, j));
            }
            let v = inv_pi_i * curve.tangents[j] * (2.0 * curve.weights[j]) / dz;
            s.set(i, j, v);
            row_sum += v;
        }
        s.set(i, i, Complex64::new(1.0, 0.0) - row_sum);
    }
    Ok(s)
}

/// Discrete Hardy projection P = (I + S)/2.
pub fn cauchy_projection_curve(curve: &CurveSampling) -> Result<CMatrix, CurveError> {
    let s = cauchy_singular_curve(curve)?;
    let n = s.rows;
    let half = Complex64::new(0.5, 0.0);
    Ok(CMatrix::identity(n).add(&s).scale(half))
}

/// Symbol of a Toeplitz operator: a nonvanishing function on the curve.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolSpec {
    /// z -> ((z - c)/|z - c|)^k around the curve centroid c.
    Winding(i32),
    Explicit(Vec<Complex64>),
}

pub fn symbol_values(
    curve: &CurveSampling,
    symbol: &SymbolSpec,
) -> Result<Vec<Complex64>, CurveError> {
    let vals = match symbol {
        SymbolSpec::Winding(k) => {
            let c = curve.centroid();
            curve
                .points
                .iter()
                .map(|z| {
                    let u = (z - c) / (z - c).norm();
                    u.powi(*k)
                })
                .collect::<Vec<_>>()
        }
        SymbolSpec::Explicit(v) => {
            if v.len() != curve.len() {
                return Err(CurveError::SymbolLength {
                    expected: curve.len(),
                    got: v.len(),
                });
            }
            v.clone()
        }
    };
    let min_mod = vals.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if min_mod < 1e-12 {
        return Err(CurveError::VanishingSymbol(min_mod));
    }
    Ok(vals)
}

/// Toeplitz compression T = P M_a P together with the projection P.
pub fn toeplitz_curve(
    curve: &CurveSampling,
    symbol: &SymbolSpec,
) -> Result<(CMatrix, CMatrix), CurveError> {
    let p = cauchy_projection_curve(curve)?;
    let vals = symbol_values(curve, symbol)?;
    let n = p.rows;
    let mut mp = p.clone();
    for i in 0..n {
        for j in 0..n {
            let v = mp.get(i, j) * vals[i];
            mp.set(i, j, v);
        }
    }
    Ok((p.mul(&mp), p))
}
