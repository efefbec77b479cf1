//! Constructive bounded open sets in R^1 and R^2.
//!
//! A [`RegionSpec`] is a finite union of open primitives. Membership is exact
//! for every primitive; for the pre-Cantor family it is exact with respect to
//! the chosen truncation depth (interval endpoints are kept as integer
//! numerators over a power of three).

use thiserror::Error;

/// Points are stored with three slots; coordinates beyond the region
/// dimension are zero. The third slot carries the lift coordinate `t`.
pub type Point = [f64; 3];

#[derive(Debug, Error, PartialEq)]
pub enum RegionError {
    #[error("point dimension {point} does not match region dimension {region}")]
    DimensionMismatch { point: usize, region: usize },
    #[error("region dimension must be 1 or 2, got {0}")]
    BadDimension(usize),
    #[error("primitive dimension {prim} does not match region dimension {region}")]
    PrimitiveDimension { prim: usize, region: usize },
    #[error("region must contain at least one primitive")]
    Empty,
    #[error("degenerate primitive: {0}")]
    Degenerate(String),
    #[error("cantor depth must be >= 1, got {0}")]
    BadDepth(u32),
}

/// One open primitive of a union.
#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    /// Open interval (a, b) on the line.
    Interval { a: f64, b: f64 },
    /// Open disk of radius `r`.
    Disk { center: [f64; 2], r: f64 },
    /// Open axis-aligned box (lo, hi) x (lo, hi).
    Box { lo: [f64; 2], hi: [f64; 2] },
    /// Open annulus r_in < |x - c| < r_out.
    Annulus { center: [f64; 2], r_in: f64, r_out: f64 },
    /// Union of the open middle-third intervals removed from [0,1] through
    /// stage `depth`. Gap endpoints are exact numerators over `scale` = 3^depth.
    CantorComplement {
        depth: u32,
        scale: i64,
        /// Sorted open gaps (lo, hi) as numerators over `scale`.
        gaps: Vec<(i64, i64)>,
    },
}

fn pow3(k: u32) -> i64 {
    3i64.pow(k)
}

/// Closed depth-`depth` pre-Cantor intervals as numerators over 3^depth,
/// sorted left to right.
pub fn pre_cantor_intervals(depth: u32) -> Vec<(i64, i64)> {
    let scale = pow3(depth);
    let mut intervals = vec![(0i64, scale)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for &(a, b) in &intervals {
            let w = (b - a) / 3;
            next.push((a, a + w));
            next.push((b - w, b));
        }
        intervals = next;
    }
    intervals
}

/// Open middle-third gaps removed through stage `depth`, sorted left to right,
/// as numerators over 3^depth.
pub fn cantor_gaps(depth: u32) -> Vec<(i64, i64)> {
    let scale = pow3(depth);
    let mut intervals = vec![(0i64, scale)];
    let mut gaps = Vec::new();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for &(a, b) in &intervals {
            let w = (b - a) / 3;
            next.push((a, a + w));
            next.push((b - w, b));
            gaps.push((a + w, b - w));
        }
        intervals = next;
    }
    gaps.sort_unstable();
    gaps
}

impl Primitive {
    pub fn interval(a: f64, b: f64) -> Result<Self, RegionError> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(RegionError::Degenerate(format!("interval ({a}, {b})")));
        }
        Ok(Primitive::Interval { a, b })
    }

    pub fn disk(center: [f64; 2], r: f64) -> Result<Self, RegionError> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(RegionError::Degenerate(format!("disk radius {r}")));
        }
        Ok(Primitive::Disk { center, r })
    }

    pub fn rect(lo: [f64; 2], hi: [f64; 2]) -> Result<Self, RegionError> {
        if !(lo[0] < hi[0] && lo[1] < hi[1]) {
            return Err(RegionError::Degenerate(format!("box {lo:?}..{hi:?}")));
        }
        Ok(Primitive::Box { lo, hi })
    }

    pub fn annulus(center: [f64; 2], r_in: f64, r_out: f64) -> Result<Self, RegionError> {
        if !(0.0 < r_in && r_in < r_out) || !r_out.is_finite() {
            return Err(RegionError::Degenerate(format!("annulus {r_in}..{r_out}")));
        }
        Ok(Primitive::Annulus { center, r_in, r_out })
    }

    pub fn cantor_complement(depth: u32) -> Result<Self, RegionError> {
        if depth < 1 {
            return Err(RegionError::BadDepth(depth));
        }
        Ok(Primitive::CantorComplement {
            depth,
            scale: pow3(depth),
            gaps: cantor_gaps(depth),
        })
    }

    pub fn dimension(&self) -> usize {
        match self {
            Primitive::Interval { .. } | Primitive::CantorComplement { .. } => 1,
            _ => 2,
        }
    }

    /// Open membership, exact per primitive.
    fn contains(&self, p: &Point) -> bool {
        match self {
            Primitive::Interval { a, b } => p[0] > *a && p[0] < *b,
            Primitive::Disk { center, r } => {
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                dx * dx + dy * dy < r * r
            }
            Primitive::Box { lo, hi } => {
                p[0] > lo[0] && p[0] < hi[0] && p[1] > lo[1] && p[1] < hi[1]
            }
            Primitive::Annulus { center, r_in, r_out } => {
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                let d2 = dx * dx + dy * dy;
                d2 > r_in * r_in && d2 < r_out * r_out
            }
            Primitive::CantorComplement { scale, gaps, .. } => {
                let x = p[0] * *scale as f64;
                // Gaps are sorted; find the last gap starting left of x.
                let idx = gaps.partition_point(|&(lo, _)| (lo as f64) < x);
                if idx == 0 {
                    return false;
                }
                let (lo, hi) = gaps[idx - 1];
                x > lo as f64 && x < (hi as f64)
            }
        }
    }

    /// Open membership with the set shrunk by `tol`, so points that sit on
    /// the boundary up to roundoff are never reported as interior.
    fn contains_with_margin(&self, p: &Point, tol: f64) -> bool {
        match self {
            Primitive::Interval { a, b } => p[0] > *a + tol && p[0] < *b - tol,
            Primitive::Disk { center, r } => {
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                let rs = (r - tol).max(0.0);
                dx * dx + dy * dy < rs * rs
            }
            Primitive::Box { lo, hi } => {
                p[0] > lo[0] + tol && p[0] < hi[0] - tol && p[1] > lo[1] + tol && p[1] < hi[1] - tol
            }
            Primitive::Annulus { center, r_in, r_out } => {
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                let d2 = dx * dx + dy * dy;
                let ri = r_in + tol;
                let ro = (r_out - tol).max(0.0);
                d2 > ri * ri && d2 < ro * ro
            }
            Primitive::CantorComplement { scale, gaps, .. } => {
                let s = *scale as f64;
                let x = p[0] * s;
                let t = tol * s;
                let idx = gaps.partition_point(|&(lo, _)| (lo as f64) < x);
                if idx == 0 {
                    return false;
                }
                let (lo, hi) = gaps[idx - 1];
                x > lo as f64 + t && x < hi as f64 - t
            }
        }
    }

    /// Membership in the closure of the idealized set the primitive truncates.
    /// For the pre-Cantor family this is the full unit interval: the closure
    /// of the complement of the Cantor set in (0, 1).
    fn closure_contains(&self, p: &Point) -> bool {
        match self {
            Primitive::Interval { a, b } => p[0] >= *a && p[0] <= *b,
            Primitive::Disk { center, r } => {
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                dx * dx + dy * dy <= r * r
            }
            Primitive::Box { lo, hi } => {
                p[0] >= lo[0] && p[0] <= hi[0] && p[1] >= lo[1] && p[1] <= hi[1]
            }
            Primitive::Annulus { center, r_in, r_out } => {
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                let d2 = dx * dx + dy * dy;
                d2 >= r_in * r_in && d2 <= r_out * r_out
            }
            Primitive::CantorComplement { .. } => p[0] >= 0.0 && p[0] <= 1.0,
        }
    }

    fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        match self {
            Primitive::Interval { a, b } => ([*a, 0.0], [*b, 0.0]),
            Primitive::Disk { center, r } => (
                [center[0] - r, center[1] - r],
                [center[0] + r, center[1] + r],
            ),
            Primitive::Box { lo, hi } => (*lo, *hi),
            Primitive::Annulus { center, r_out, .. } => (
                [center[0] - r_out, center[1] - r_out],
                [center[0] + r_out, center[1] + r_out],
            ),
            Primitive::CantorComplement { .. } => ([0.0, 0.0], [1.0, 0.0]),
        }
    }

    /// Raw boundary samples of this primitive alone, before union filtering.
    fn boundary_samples(&self, spacing: f64, out: &mut Vec<Point>) {
        match self {
            Primitive::Interval { a, b } => {
                out.push([*a, 0.0, 0.0]);
                out.push([*b, 0.0, 0.0]);
            }
            Primitive::Disk { center, r } => {
                circle_samples(*center, *r, spacing, out);
            }
            Primitive::Box { lo, hi } => {
                let corners = [
                    [lo[0], lo[1]],
                    [hi[0], lo[1]],
                    [hi[0], hi[1]],
                    [lo[0], hi[1]],
                ];
                for e in 0..4 {
                    let p = corners[e];
                    let q = corners[(e + 1) % 4];
                    let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
                    let n = (len / spacing).ceil().max(1.0) as usize;
                    // Omit the far corner; the next edge supplies it.
                    for i in 0..n {
                        let s = i as f64 / n as f64;
                        out.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1]), 0.0]);
                    }
                }
            }
            Primitive::Annulus { center, r_in, r_out } => {
                circle_samples(*center, *r_in, spacing, out);
                circle_samples(*center, *r_out, spacing, out);
            }
            Primitive::CantorComplement { depth, scale, .. } => {
                // All endpoints of the remaining closed intervals, 0 and 1
                // included: the depth-k truncation of the Cantor set itself.
                let s = *scale as f64;
                for (a, b) in pre_cantor_intervals(*depth) {
                    out.push([a as f64 / s, 0.0, 0.0]);
                    out.push([b as f64 / s, 0.0, 0.0]);
                }
            }
        }
    }
}

fn circle_samples(center: [f64; 2], r: f64, spacing: f64, out: &mut Vec<Point>) {
    let n = (std::f64::consts::TAU * r / spacing).ceil().max(8.0) as usize;
    for i in 0..n {
        let a = std::f64::consts::TAU * i as f64 / n as f64;
        out.push([center[0] + r * a.cos(), center[1] + r * a.sin(), 0.0]);
    }
}

/// A bounded open set U given as a finite union of open primitives.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSpec {
    dimension: usize,
    primitives: Vec<Primitive>,
}

impl RegionSpec {
    pub fn new(dimension: usize, primitives: Vec<Primitive>) -> Result<Self, RegionError> {
        if dimension != 1 && dimension != 2 {
            return Err(RegionError::BadDimension(dimension));
        }
        if primitives.is_empty() {
            return Err(RegionError::Empty);
        }
        for p in &primitives {
            if p.dimension() != dimension {
                return Err(RegionError::PrimitiveDimension {
                    prim: p.dimension(),
                    region: dimension,
                });
            }
        }
        Ok(RegionSpec { dimension, primitives })
    }

    /// Single open interval (a, b).
    pub fn interval(a: f64, b: f64) -> Result<Self, RegionError> {
        Self::new(1, vec![Primitive::interval(a, b)?])
    }

    /// Union of the open middle-third gaps of [0,1] through stage `depth`.
    pub fn cantor_complement(depth: u32) -> Result<Self, RegionError> {
        Self::new(1, vec![Primitive::cantor_complement(depth)?])
    }

    pub fn disk(center: [f64; 2], r: f64) -> Result<Self, RegionError> {
        Self::new(2, vec![Primitive::disk(center, r)?])
    }

    pub fn annulus(center: [f64; 2], r_in: f64, r_out: f64) -> Result<Self, RegionError> {
        Self::new(2, vec![Primitive::annulus(center, r_in, r_out)?])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    /// True iff the point lies in the open set U.
    pub fn contains(&self, p: &Point) -> bool {
        self.primitives.iter().any(|prim| prim.contains(p))
    }

    /// Checked variant of [`RegionSpec::contains`] for callers holding
    /// points of unknown dimension.
    pub fn contains_checked(&self, p: &[f64]) -> Result<bool, RegionError> {
        if p.len() != self.dimension {
            return Err(RegionError::DimensionMismatch {
                point: p.len(),
                region: self.dimension,
            });
        }
        let mut q = [0.0; 3];
        q[..p.len()].copy_from_slice(p);
        Ok(self.contains(&q))
    }

    /// Membership in the closure of the (idealized) set. The lifted boundary
    /// is a graph over this closure.
    pub fn closure_contains(&self, p: &Point) -> bool {
        self.primitives.iter().any(|prim| prim.closure_contains(p))
    }

    /// Axis-aligned bounding box of the closure.
    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &self.primitives {
            let (l, h) = p.bounding_box();
            for a in 0..2 {
                lo[a] = lo[a].min(l[a]);
                hi[a] = hi[a].max(h[a]);
            }
        }
        if self.dimension == 1 {
            lo[1] = 0.0;
            hi[1] = 0.0;
        }
        (lo, hi)
    }

    /// Euclidean diameter of the bounding box.
    pub fn bounding_diameter(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt()
    }

    /// A `spacing`-net of E = ∂U. Primitive boundary points swallowed by the
    /// interior of another primitive are dropped; what remains lies exactly
    /// on ∂U (for the pre-Cantor family, on the depth-k endpoint set).
    pub fn boundary_samples(&self, spacing: f64) -> PointSet {
        assert!(spacing > 0.0, "spacing must be positive");
        let mut raw = Vec::new();
        for prim in &self.primitives {
            prim.boundary_samples(spacing, &mut raw);
        }
        let tol = 1e-9 * self.bounding_diameter().max(1.0);
        let mut points: Vec<Point> = raw
            .into_iter()
            .filter(|p| !self.primitives.iter().any(|q| q.contains_with_margin(p, tol)))
            .collect();
        // Deterministic order and exact-duplicate removal.
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        points.dedup();
        PointSet {
            dimension: self.dimension,
            spacing,
            points,
        }
    }
}

/// A finite point cloud tagged with the spacing it was generated at.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub dimension: usize,
    pub spacing: f64,
    pub points: Vec<Point>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
