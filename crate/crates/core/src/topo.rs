//! Connected components, box-counting dimension, and Euler characteristics.

use crate::lift::LiftedIndicator;
use crate::mesh::{sample_cells, BoundaryMesh, MeshCells};
use crate::region::Point;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TopoError {
    #[error("component map is not a bijection: {0}")]
    NotBijective(String),
    #[error("fewer than 2 usable box-counting scales")]
    TooFewScales,
    #[error("scales must be strictly decreasing and at least 4")]
    BadScales,
    #[error("mesh is not watertight; offending edges: {0:?}")]
    NotWatertight(Vec<(usize, usize)>),
    #[error("mesh is empty")]
    EmptyMesh,
}

/// Face-adjacency component labels over a node lattice. Label 0 marks
/// unoccupied nodes; occupied nodes carry 1..=component_count, ordered by the
/// lexicographically smallest (row-major first) node of each component.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelField {
    pub dims: Vec<usize>,
    pub labels: Vec<u32>,
    pub component_count: u32,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Smaller root wins, keeping labels tied to the first scan order.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Union-find labeling with face adjacency (4-/6-connectivity): components
/// of open sets whose closures merely touch must stay distinct.
pub fn label_components(occupancy: &[bool], dims: &[usize]) -> LabelField {
    let full_dims: Vec<usize> = dims.to_vec();
    let n: usize = full_dims.iter().product();
    assert_eq!(n, occupancy.len(), "dims do not match occupancy length");
    let mut strides = vec![1usize; full_dims.len()];
    for a in 1..full_dims.len() {
        strides[a] = strides[a - 1] * full_dims[a - 1];
    }
    let mut uf = UnionFind::new(n);
    for idx in 0..n {
        if !occupancy[idx] {
            continue;
        }
        for a in 0..full_dims.len() {
            let coord = (idx / strides[a]) % full_dims[a];
            if coord + 1 < full_dims[a] && occupancy[idx + strides[a]] {
                uf.union(idx, idx + strides[a]);
            }
        }
    }
    let mut labels = vec![0u32; n];
    let mut next = 0u32;
    let mut root_label: BTreeMap<usize, u32> = BTreeMap::new();
    for idx in 0..n {
        if !occupancy[idx] {
            continue;
        }
        let root = uf.find(idx);
        let label = *root_label.entry(root).or_insert_with(|| {
            next += 1;
            next
        });
        labels[idx] = label;
    }
    LabelField {
        dims: full_dims,
        labels,
        component_count: next,
    }
}

/// Map from base components V of U to the lifted components their lifts
/// intersect, verified to be a bijection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentBijection {
    /// (base label, lifted labels hit by that base component).
    pub map: Vec<(u32, Vec<u32>)>,
}

pub fn lifted_component_bijection(
    labels_base: &LabelField,
    labels_lifted: &LabelField,
    indicator: &LiftedIndicator,
) -> Result<ComponentBijection, TopoError> {
    let [nx, ny] = indicator.base_dims;
    let nt = indicator.t_nodes();
    assert_eq!(labels_base.labels.len(), nx * ny);
    assert_eq!(labels_lifted.labels.len(), nx * ny * nt);
    let mut map: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for base in 1..=labels_base.component_count {
        map.insert(base, Vec::new());
    }
    for it in 0..nt {
        for idx in 0..nx * ny {
            let lifted_idx = it * nx * ny + idx;
            let l = labels_lifted.labels[lifted_idx];
            if l == 0 {
                continue;
            }
            let b = labels_base.labels[idx];
            if b == 0 {
                return Err(TopoError::NotBijective(format!(
                    "lifted label {l} occupies a node over unlabeled base node {idx}"
                )));
            }
            let hits = map.get_mut(&b).unwrap();
            if !hits.contains(&l) {
                hits.push(l);
            }
        }
    }
    // Bijection: every base component hits exactly one lifted label, and
    // every lifted label is hit exactly once.
    let mut seen: BTreeMap<u32, u32> = BTreeMap::new();
    for (&b, hits) in &map {
        if hits.len() != 1 {
            return Err(TopoError::NotBijective(format!(
                "base component {b} maps to lifted labels {hits:?}"
            )));
        }
        if let Some(prev) = seen.insert(hits[0], b) {
            return Err(TopoError::NotBijective(format!(
                "lifted label {} hit by base components {prev} and {b}",
                hits[0]
            )));
        }
    }
    if seen.len() != labels_lifted.component_count as usize {
        return Err(TopoError::NotBijective(format!(
            "{} of {} lifted components unmatched",
            labels_lifted.component_count as usize - seen.len(),
            labels_lifted.component_count
        )));
    }
    Ok(ComponentBijection {
        map: map.into_iter().collect(),
    })
}

/// Number of connected components of the vertex-edge graph; fills
/// `component_id` per cell with labels ordered by smallest vertex id.
pub fn mesh_component_count(mesh: &mut BoundaryMesh) -> Result<usize, TopoError> {
    if mesh.is_empty() {
        return Err(TopoError::EmptyMesh);
    }
    let nv = mesh.vertices.len();
    let mut uf = UnionFind::new(nv);
    match &mesh.cells {
        MeshCells::Segments(segs) => {
            for &[a, b] in segs {
                uf.union(a, b);
            }
        }
        MeshCells::Triangles(tris) => {
            for &[a, b, c] in tris {
                uf.union(a, b);
                uf.union(b, c);
            }
        }
    }
    let mut used = vec![false; nv];
    match &mesh.cells {
        MeshCells::Segments(segs) => {
            for &[a, b] in segs {
                used[a] = true;
                used[b] = true;
            }
        }
        MeshCells::Triangles(tris) => {
            for &t in tris {
                for v in t {
                    used[v] = true;
                }
            }
        }
    }
    let mut root_label: BTreeMap<usize, u32> = BTreeMap::new();
    let mut next = 0u32;
    for v in 0..nv {
        if used[v] {
            let root = uf.find(v);
            root_label.entry(root).or_insert_with(|| {
                let label = next;
                next += 1;
                label
            });
        }
    }
    let ids: Vec<u32> = match &mesh.cells {
        MeshCells::Segments(segs) => segs
            .iter()
            .map(|&[a, _]| root_label[&uf.find(a)])
            .collect(),
        MeshCells::Triangles(tris) => tris
            .iter()
            .map(|&[a, _, _]| root_label[&uf.find(a)])
            .collect(),
    };
    mesh.component_id = ids;
    Ok(next as usize)
}

/// Least-squares fit of log(count) against log(1/scale).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionFit {
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    pub slope: f64,
    pub residual: f64,
}

/// Count axis-aligned boxes of each scale meeting the target point cloud and
/// fit the box-counting slope. Box lattices are anchored at the cloud's
/// coordinate minimum.
pub fn box_counting_dimension(
    points: &[Point],
    dimension: usize,
    scales: &[f64],
) -> Result<DimensionFit, TopoError> {
    if scales.len() < 4 || scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(TopoError::BadScales);
    }
    if points.is_empty() {
        return Err(TopoError::TooFewScales);
    }
    let mut min = [f64::INFINITY; 3];
    for p in points {
        for a in 0..dimension {
            min[a] = min[a].min(p[a]);
        }
    }
    let mut counts = Vec::with_capacity(scales.len());
    for &s in scales {
        let mut boxes: std::collections::HashSet<[i64; 3]> = std::collections::HashSet::new();
        for p in points {
            let mut key = [0i64; 3];
            for a in 0..dimension {
                key[a] = ((p[a] - min[a]) / s).floor() as i64;
            }
            boxes.insert(key);
        }
        counts.push(boxes.len());
    }
    let usable: Vec<(f64, f64)> = scales
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c > 0)
        .map(|(&s, &c)| ((1.0 / s).ln(), (c as f64).ln()))
        .collect();
    if usable.len() < 2 {
        return Err(TopoError::TooFewScales);
    }
    let n = usable.len() as f64;
    let sx: f64 = usable.iter().map(|p| p.0).sum();
    let sy: f64 = usable.iter().map(|p| p.1).sum();
    let sxx: f64 = usable.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = usable.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let residual = (usable
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(DimensionFit {
        scales: scales.to_vec(),
        counts,
        slope,
        residual,
    })
}

/// Box-counting slope of a mesh: cells are sampled at spacing at most
/// `min_scale / 4` and the point cloud is counted.
pub fn box_counting_dimension_mesh(
    mesh: &BoundaryMesh,
    scales: &[f64],
) -> Result<DimensionFit, TopoError> {
    let min_scale = scales.iter().cloned().fold(f64::INFINITY, f64::min);
    let pts = sample_cells(mesh, min_scale / 4.0);
    box_counting_dimension(&pts, mesh.base_dimension + 1, scales)
}

/// Euler characteristic V - E + F for a watertight triangle mesh, or V - E
/// for closed polylines (0 per closed loop).
pub fn euler_characteristic(mesh: &BoundaryMesh) -> Result<i64, TopoError> {
    if mesh.is_empty() {
        return Err(TopoError::EmptyMesh);
    }
    match &mesh.cells {
        MeshCells::Segments(segs) => {
            let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
            let mut edges: std::collections::BTreeSet<(usize, usize)> =
                std::collections::BTreeSet::new();
            for &[a, b] in segs {
                *degree.entry(a).or_insert(0) += 1;
                *degree.entry(b).or_insert(0) += 1;
                edges.insert((a.min(b), a.max(b)));
            }
            let bad: Vec<(usize, usize)> = degree
                .iter()
                .filter(|(_, &d)| d != 2)
                .map(|(&v, &d)| (v, d))
                .collect();
            if !bad.is_empty() {
                return Err(TopoError::NotWatertight(bad));
            }
            let v = degree.len() as i64;
            let e = edges.len() as i64;
            Ok(v - e)
        }
        MeshCells::Triangles(tris) => {
            let mut edge_use: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            let mut verts: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
            for &[a, b, c] in tris {
                for v in [a, b, c] {
                    verts.insert(v);
                }
                for (p, q) in [(a, b), (b, c), (c, a)] {
                    *edge_use.entry((p.min(q), p.max(q))).or_insert(0) += 1;
                }
            }
            let bad: Vec<(usize, usize)> = edge_use
                .iter()
                .filter(|(_, &n)| n != 2)
                .map(|(&e, _)| e)
                .collect();
            if !bad.is_empty() {
                return Err(TopoError::NotWatertight(bad));
            }
            let v = verts.len() as i64;
            let e = edge_use.len() as i64;
            let f = tris.len() as i64;
            Ok(v - e + f)
        }
    }
}

/// Symmetric Hausdorff distance between two point clouds.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> f64 {
    let one_sided = |from: &[Point], to: &[Point]| -> f64 {
        let mut worst = 0.0f64;
        for p in from {
            let mut best = f64::INFINITY;
            for q in to {
                let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2);
                if d2 < best {
                    best = d2;
                }
            }
            worst = worst.max(best.sqrt());
        }
        worst
    };
    one_sided(a, b).max(one_sided(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfield::distance_transform;
    use crate::grid::Grid;
    use crate::lift::{extract_lifted_boundary, lift_open_set};
    use crate::region::{Primitive, RegionSpec};

    fn rasterize(region: &RegionSpec, res: usize) -> (Grid, Vec<bool>) {
        let g = Grid::for_region(region, res, 1.0).unwrap();
        let occ = (0..g.node_count())
            .map(|i| region.contains(&g.position(i)))
            .collect();
        (g, occ)
    }

    #[test]
    fn two_intervals_two_components() {
        let u = RegionSpec::new(
            1,
            vec![
                Primitive::interval(0.0, 1.0).unwrap(),
                Primitive::interval(2.0, 3.0).unwrap(),
            ],
        )
        .unwrap();
        let (g, occ) = rasterize(&u, 257);
        let labels = label_components(&occ, &[g.dims()[0], g.dims()[1]]);
        assert_eq!(labels.component_count, 2);
    }

    #[test]
    fn cantor_depth3_has_seven_components() {
        let u = RegionSpec::cantor_complement(3).unwrap();
        let (g, occ) = rasterize(&u, 513);
        let labels = label_components(&occ, &[g.dims()[0], g.dims()[1]]);
        assert_eq!(labels.component_count, 7);
    }

    #[test]
    fn empty_lattice_has_no_components() {
        let labels = label_components(&[false; 12], &[4, 3]);
        assert_eq!(labels.component_count, 0);
        assert!(labels.labels.iter().all(|&l| l == 0));
    }

    #[test]
    fn labels_form_partition() {
        let u = RegionSpec::cantor_complement(4).unwrap();
        let (g, occ) = rasterize(&u, 1025);
        let labels = label_components(&occ, &[g.dims()[0], g.dims()[1]]);
        for (i, &o) in occ.iter().enumerate() {
            assert_eq!(o, labels.labels[i] > 0);
        }
    }

    #[test]
    fn diagonal_touch_does_not_merge() {
        // Two cells meeting only at a corner stay separate components.
        let occ = vec![true, false, false, true];
        let labels = label_components(&occ, &[2, 2]);
        assert_eq!(labels.component_count, 2);
    }

    #[test]
    fn single_diamond_bijection() {
        let u = RegionSpec::interval(-1.0, 1.0).unwrap();
        let g = Grid::for_region(&u, 257, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        let ind = lift_open_set(&u, &d, 64).unwrap();
        let occ_base: Vec<bool> = (0..g.node_count())
            .map(|i| u.contains(&g.position(i)))
            .collect();
        let labels_base = label_components(&occ_base, &[g.dims()[0], g.dims()[1]]);
        let labels_lift = label_components(&ind.occupancy, &ind.lattice_dims());
        let bij = lifted_component_bijection(&labels_base, &labels_lift, &ind).unwrap();
        assert_eq!(bij.map, vec![(1, vec![1])]);
    }

    #[test]
    fn two_disks_bijection() {
        let u = RegionSpec::new(
            2,
            vec![
                Primitive::disk([-1.0, 0.0], 0.6).unwrap(),
                Primitive::disk([1.0, 0.0], 0.6).unwrap(),
            ],
        )
        .unwrap();
        let g = Grid::for_region(&u, 97, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        let ind = lift_open_set(&u, &d, 16).unwrap();
        let occ_base: Vec<bool> = (0..g.node_count())
            .map(|i| u.contains(&g.position(i)))
            .collect();
        let labels_base = label_components(&occ_base, &[g.dims()[0], g.dims()[1]]);
        assert_eq!(labels_base.component_count, 2);
        let labels_lift = label_components(&ind.occupancy, &ind.lattice_dims());
        let bij = lifted_component_bijection(&labels_base, &labels_lift, &ind).unwrap();
        assert_eq!(bij.map.len(), 2);
    }

    #[test]
    fn cantor_mesh_connected_two_interval_control_split() {
        for depth in [1u32, 3] {
            let u = RegionSpec::cantor_complement(depth).unwrap();
            let g = Grid::for_region(&u, 513, 1.0).unwrap();
            let d = distance_transform(&g, &u).unwrap();
            let mut mesh = extract_lifted_boundary(&u, &d).unwrap();
            assert_eq!(mesh_component_count(&mut mesh).unwrap(), 1, "depth {depth}");
        }
        let u = RegionSpec::new(
            1,
            vec![
                Primitive::interval(0.0, 1.0).unwrap(),
                Primitive::interval(2.0, 3.0).unwrap(),
            ],
        )
        .unwrap();
        let g = Grid::for_region(&u, 513, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        let mut mesh = extract_lifted_boundary(&u, &d).unwrap();
        assert_eq!(mesh_component_count(&mut mesh).unwrap(), 2);
    }

    #[test]
    fn box_count_monotone_and_segment_dimension() {
        // Dense samples of a straight unit segment.
        let pts: Vec<Point> = (0..=4096).map(|i| [i as f64 / 4096.0, 0.0, 0.0]).collect();
        let scales: Vec<f64> = (5..=10).map(|k| 0.5f64.powi(k)).collect();
        let fit = box_counting_dimension(&pts, 1, &scales).unwrap();
        for w in fit.counts.windows(2) {
            assert!(w[1] >= w[0]);
        }
        assert!((fit.slope - 1.0).abs() <= 0.02, "slope {}", fit.slope);
    }

    #[test]
    fn pre_cantor_endpoint_dimension() {
        // Oracle: level-k boxes of size 3^-k cover the depth-7 endpoint set
        // with exactly 2^k boxes, so the exact-count slope is log 2 / log 3.
        let oracle_scales: Vec<f64> = (2..=6).map(|k| 3.0f64.powi(-k)).collect();
        let oracle_counts: Vec<f64> = (2..=6).map(|k| 2.0f64.powi(k)).collect();
        let xs: Vec<f64> = oracle_scales.iter().map(|s| (1.0 / s).ln()).collect();
        let ys: Vec<f64> = oracle_counts.iter().map(|c| c.ln()).collect();
        let n = xs.len() as f64;
        let sx: f64 = xs.iter().sum();
        let sy: f64 = ys.iter().sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let oracle_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let expected = 2.0f64.ln() / 3.0f64.ln();
        assert!((oracle_slope - expected).abs() < 1e-12);

        let u = RegionSpec::cantor_complement(7).unwrap();
        let pts: Vec<Point> = u.boundary_samples(1.0).points;
        assert_eq!(pts.len(), 256);
        let fit = box_counting_dimension(&pts, 1, &oracle_scales).unwrap();
        assert!(
            (fit.slope - expected).abs() <= 0.03,
            "slope {} vs {}",
            fit.slope,
            expected
        );
    }

    #[test]
    fn closed_polyline_euler_zero() {
        let u = RegionSpec::interval(0.0, 1.0).unwrap();
        let g = Grid::for_region(&u, 257, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        let mesh = extract_lifted_boundary(&u, &d).unwrap();
        assert_eq!(euler_characteristic(&mesh).unwrap(), 0);
    }

    #[test]
    fn doubled_disk_is_sphere() {
        let u = RegionSpec::disk([0.0, 0.0], 1.0).unwrap();
        for res in [97usize, 193] {
            let g = Grid::for_region(&u, res, 1.0).unwrap();
            let d = distance_transform(&g, &u).unwrap();
            let mesh = extract_lifted_boundary(&u, &d).unwrap();
            assert_eq!(euler_characteristic(&mesh).unwrap(), 2, "res {res}");
        }
    }

    #[test]
    fn doubled_annulus_is_torus() {
        let u = RegionSpec::annulus([0.0, 0.0], 0.5, 1.0).unwrap();
        for res in [129usize, 257] {
            let g = Grid::for_region(&u, res, 1.0).unwrap();
            let d = distance_transform(&g, &u).unwrap();
            let mesh = extract_lifted_boundary(&u, &d).unwrap();
            assert_eq!(euler_characteristic(&mesh).unwrap(), 0, "res {res}");
        }
    }

    #[test]
    fn icosphere_euler_is_two() {
        let mesh = crate::mesh::icosphere(2);
        assert_eq!(euler_characteristic(&mesh).unwrap(), 2);
    }
}
