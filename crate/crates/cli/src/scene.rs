//! Scene file schema and validation with field-path error messages.

use lift_core::region::{Primitive, RegionSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub region: RegionSection,
    pub grid: GridSection,
    pub lift: LiftSection,
    pub analyses: Vec<Analysis>,
    pub output: OutputSection,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    pub dimension: i64,
    pub primitives: Vec<PrimitiveSpec>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PrimitiveSpec {
    Interval { a: f64, b: f64 },
    CantorComplement { depth: i64 },
    Disk { center: [f64; 2], r: f64 },
    Rect { lo: [f64; 2], hi: [f64; 2] },
    Annulus { center: [f64; 2], r_in: f64, r_out: f64 },
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub resolution: i64,
    pub padding_factor: f64,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LiftSection {
    pub t_resolution: i64,
    #[serde(default)]
    pub regularize_epsilon: Option<f64>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Analysis {
    Components,
    Dimension { scales: Vec<f64> },
    Euler,
    Operators { winding: i64, n: i64 },
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: String,
    pub formats: Vec<String>,
}

impl SceneConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.region.dimension != 1 && self.region.dimension != 2 {
            return Err(format!(
                "region.dimension: must be 1 or 2, got {}",
                self.region.dimension
            ));
        }
        if self.region.primitives.is_empty() {
            return Err("region.primitives: must not be empty".into());
        }
        for (i, p) in self.region.primitives.iter().enumerate() {
            let pdim = match p {
                PrimitiveSpec::Interval { .. } | PrimitiveSpec::CantorComplement { .. } => 1,
                _ => 2,
            };
            if pdim != self.region.dimension {
                return Err(format!(
                    "region.primitives[{i}]: dimension {pdim} does not match region.dimension {}",
                    self.region.dimension
                ));
            }
            if let PrimitiveSpec::CantorComplement { depth } = p {
                if !(1..=12).contains(depth) {
                    return Err(format!(
                        "region.primitives[{i}].depth: must be in 1..=12, got {depth}"
                    ));
                }
            }
        }
        if !(2..=8192).contains(&self.grid.resolution) {
            return Err(format!(
                "grid.resolution: must be in 2..=8192, got {}",
                self.grid.resolution
            ));
        }
        if !(self.grid.padding_factor >= 1.0) {
            return Err(format!(
                "grid.padding_factor: must be >= 1, got {}",
                self.grid.padding_factor
            ));
        }
        if !(2..=4096).contains(&self.lift.t_resolution) {
            return Err(format!(
                "lift.t_resolution: must be in 2..=4096, got {}",
                self.lift.t_resolution
            ));
        }
        if let Some(eps) = self.lift.regularize_epsilon {
            if !(eps > 0.0 && eps < 0.5) {
                return Err(format!(
                    "lift.regularize_epsilon: must lie in (0, 0.5), got {eps}"
                ));
            }
        }
        for (i, a) in self.analyses.iter().enumerate() {
            match a {
                Analysis::Dimension { scales } => {
                    if scales.len() < 4 {
                        return Err(format!(
                            "analyses[{i}].scales: need at least 4 scales, got {}",
                            scales.len()
                        ));
                    }
                    if scales.iter().any(|&s| !(s > 0.0)) {
                        return Err(format!("analyses[{i}].scales: must be positive"));
                    }
                    if scales.windows(2).any(|w| w[1] >= w[0]) {
                        return Err(format!(
                            "analyses[{i}].scales: must be strictly decreasing"
                        ));
                    }
                }
                Analysis::Operators { n, .. } => {
                    if self.region.dimension != 1 {
                        return Err(format!(
                            "analyses[{i}]: operators need a dimension-1 region"
                        ));
                    }
                    if !(16..=4096).contains(n) || n % 2 != 0 {
                        return Err(format!(
                            "analyses[{i}].n: must be even and in 16..=4096, got {n}"
                        ));
                    }
                }
                Analysis::Components | Analysis::Euler => {}
            }
        }
        for (i, f) in self.output.formats.iter().enumerate() {
            if !matches!(f.as_str(), "obj" | "ply" | "csv" | "rle") {
                return Err(format!(
                    "output.formats[{i}]: unknown format {f:?} (expected obj, ply, csv, rle)"
                ));
            }
        }
        Ok(())
    }

    pub fn build_region(&self) -> Result<RegionSpec, String> {
        let mut prims = Vec::with_capacity(self.region.primitives.len());
        for p in &self.region.primitives {
            let prim = match p {
                PrimitiveSpec::Interval { a, b } => Primitive::interval(*a, *b),
                PrimitiveSpec::CantorComplement { depth } => {
                    Primitive::cantor_complement(*depth as u32)
                }
                PrimitiveSpec::Disk { center, r } => Primitive::disk(*center, *r),
                PrimitiveSpec::Rect { lo, hi } => Primitive::rect(*lo, *hi),
                PrimitiveSpec::Annulus { center, r_in, r_out } => {
                    Primitive::annulus(*center, *r_in, *r_out)
                }
            }
            .map_err(|e| e.to_string())?;
            prims.push(prim);
        }
        RegionSpec::new(self.region.dimension as usize, prims).map_err(|e| e.to_string())
    }
}
