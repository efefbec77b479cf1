//! The lifted open set in R^{n+1} and its boundary mesh.
//!
//! A node (x, t) of the lifted lattice is occupied iff x lies in U and
//! |t| < d(x). The lifted boundary is built directly as the graph of the two
//! sheets t = +d(x) and t = -d(x) over the closure of U, not by isosurfacing
//! the occupancy; the occupancy is kept for volume and component checks.

use crate::grid::ScalarField;
use crate::mesh::{BoundaryMesh, MeshCells};
use crate::region::{Point, PointSet, RegionSpec};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LiftError {
    #[error("t resolution must be >= 2, got {0}")]
    BadTResolution(usize),
    #[error("region has no occupied nodes at this resolution")]
    NoOccupiedNodes,
    #[error("mesh is empty: region has no closure nodes")]
    EmptyMesh,
}

/// Occupancy of the lifted set on an (n+1)-dimensional node lattice.
/// The t-axis holds 2 * t_resolution + 1 nodes at spacing t_max /
/// t_resolution, symmetric about t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedIndicator {
    pub base_dims: [usize; 2],
    pub base_origin: [f64; 2],
    pub h: f64,
    pub t_resolution: usize,
    pub t_max: f64,
    /// Flat occupancy, index ((it * ny) + iy) * nx + ix with it in
    /// 0..2*t_resolution+1 and t = (it - t_resolution) * dt.
    pub occupancy: Vec<bool>,
}

impl LiftedIndicator {
    pub fn t_nodes(&self) -> usize {
        2 * self.t_resolution + 1
    }

    pub fn dt(&self) -> f64 {
        self.t_max / self.t_resolution as f64
    }

    pub fn lattice_dims(&self) -> [usize; 3] {
        [self.base_dims[0], self.base_dims[1], self.t_nodes()]
    }

    pub fn node_count(&self) -> usize {
        self.occupancy.len()
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.iter().filter(|&&b| b).count()
    }

    /// Lattice cell volume h^n * dt.
    pub fn cell_volume(&self, base_dimension: usize) -> f64 {
        self.h.powi(base_dimension as i32) * self.dt()
    }
}

/// Rasterize the lifted open set {(x, t) : x in U, |t| < d(x)}.
pub fn lift_open_set(
    region: &RegionSpec,
    dfield: &ScalarField,
    t_resolution: usize,
) -> Result<LiftedIndicator, LiftError> {
    if t_resolution < 2 {
        return Err(LiftError::BadTResolution(t_resolution));
    }
    let grid = &dfield.grid;
    let [nx, ny] = grid.dims();
    let mut inside = vec![false; grid.node_count()];
    let mut t_max = 0.0f64;
    let mut any = false;
    for idx in 0..grid.node_count() {
        if region.contains(&grid.position(idx)) {
            inside[idx] = true;
            any = true;
            t_max = t_max.max(dfield.values[idx]);
        }
    }
    if !any || t_max <= 0.0 {
        return Err(LiftError::NoOccupiedNodes);
    }
    let nt = 2 * t_resolution + 1;
    let dt = t_max / t_resolution as f64;
    let mut occupancy = vec![false; nx * ny * nt];
    for it in 0..nt {
        let t = (it as f64 - t_resolution as f64) * dt;
        let plane = it * ny * nx;
        for idx in 0..nx * ny {
            occupancy[plane + idx] = inside[idx] && t.abs() < dfield.values[idx];
        }
    }
    Ok(LiftedIndicator {
        base_dims: [nx, ny],
        base_origin: grid.origin(),
        h: grid.spacing(),
        t_resolution,
        t_max,
        occupancy,
    })
}

/// Fraction of lattice nodes on the discrete boundary of the occupancy:
/// occupied nodes with an unoccupied face-neighbor plus unoccupied nodes with
/// an occupied one. Out-of-lattice counts as unoccupied. The fraction shrinks
/// linearly with h: the boundary has codimension one, hence measure zero.
pub fn empty_interior_check(indicator: &LiftedIndicator) -> f64 {
    let [nx, ny, nt] = indicator.lattice_dims();
    let occ = &indicator.occupancy;
    let at = |ix: i64, iy: i64, it: i64| -> bool {
        if ix < 0 || iy < 0 || it < 0 || ix >= nx as i64 || iy >= ny as i64 || it >= nt as i64 {
            return false;
        }
        occ[((it as usize * ny) + iy as usize) * nx + ix as usize]
    };
    let mut boundary = 0usize;
    for it in 0..nt as i64 {
        for iy in 0..ny as i64 {
            for ix in 0..nx as i64 {
                let c = at(ix, iy, it);
                let mut neighbors = [
                    at(ix - 1, iy, it),
                    at(ix + 1, iy, it),
                    at(ix, iy, it - 1),
                    at(ix, iy, it + 1),
                ]
                .iter()
                .any(|&b| b != c);
                if ny > 1 {
                    neighbors = neighbors || at(ix, iy - 1, it) != c || at(ix, iy + 1, it) != c;
                }
                if neighbors {
                    boundary += 1;
                }
            }
        }
    }
    boundary as f64 / occ.len() as f64
}

/// Which field supplies the lift height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LiftHeight {
    /// The exact distance d(x): boundary has a crease along t = 0.
    Distance,
    /// A regularized field comparable to d, smooth away from t = 0.
    Regularized,
}

/// Extract the lifted boundary as the graph of +/-heights over grid nodes in
/// the closure of U (a node is kept if it is in the closure or has an
/// axis-neighbor in U). The two sheets are glued along the rim of the kept
/// node complex, realizing the doubling combinatorially.
pub fn extract_lifted_boundary(
    region: &RegionSpec,
    heights: &ScalarField,
) -> Result<BoundaryMesh, LiftError> {
    let grid = &heights.grid;
    let [nx, ny] = grid.dims();
    let h = grid.spacing();
    let mut kept = vec![false; grid.node_count()];
    for idx in 0..grid.node_count() {
        let p = grid.position(idx);
        if region.closure_contains(&p) {
            kept[idx] = true;
            continue;
        }
        let (ix, iy) = grid.coords(idx);
        let mut near = false;
        let mut check = |jx: i64, jy: i64| {
            if jx >= 0 && jy >= 0 && (jx as usize) < nx && (jy as usize) < ny {
                let q = grid.position(grid.index(jx as usize, jy as usize));
                if region.contains(&q) {
                    near = true;
                }
            }
        };
        check(ix as i64 - 1, iy as i64);
        check(ix as i64 + 1, iy as i64);
        if ny > 1 {
            check(ix as i64, iy as i64 - 1);
            check(ix as i64, iy as i64 + 1);
        }
        kept[idx] = near;
    }
    if region.dimension() == 1 {
        extract_1d(grid_hvals(heights), &kept, nx, h, grid)
    } else {
        extract_2d(heights, &kept, nx, ny, h)
    }
}

fn grid_hvals(f: &ScalarField) -> &[f64] {
    &f.values
}

fn extract_1d(
    values: &[f64],
    kept: &[bool],
    nx: usize,
    h: f64,
    grid: &crate::grid::Grid,
) -> Result<BoundaryMesh, LiftError> {
    let mut vertices: Vec<Point> = Vec::new();
    let mut raw_heights: Vec<f64> = Vec::new();
    let mut segments: Vec<[usize; 2]> = Vec::new();
    // Scan maximal runs of kept nodes.
    let mut i = 0usize;
    while i < nx {
        if !kept[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < nx && kept[i] {
            i += 1;
        }
        let mut start = start;
        let mut end = i - 1; // inclusive
        // Two consecutive single-sheet nodes at a run end form a dangling
        // chain along t = 0 (this happens when a closure endpoint falls a
        // roundoff ulp inside U, pulling in one extra adjacent node); trim
        // the outer node until the run ends in a genuine rim.
        let single = |j: usize| 2.0 * values[j] <= h / 2.0;
        while end > start + 1 && single(end - 1) {
            end -= 1;
        }
        while end > start + 1 && single(start + 1) {
            start += 1;
        }
        if end == start {
            continue; // isolated node, no cell
        }
        // Merge +/- sheets at the rim and wherever the height is within the
        // dedup tolerance h/2 of zero sheet separation (2d <= h/2).
        let mut top_ids = Vec::with_capacity(end - start + 1);
        let mut bot_ids = Vec::with_capacity(end - start + 1);
        for j in start..=end {
            let x = grid.position(j)[0];
            let d = values[j];
            let rim = j == start || j == end;
            let merged = rim || 2.0 * d <= h / 2.0;
            if merged {
                let t = if rim { 0.0 } else { d };
                vertices.push([x, 0.0, t]);
                raw_heights.push(d);
                let id = vertices.len() - 1;
                top_ids.push(id);
                bot_ids.push(id);
            } else {
                vertices.push([x, 0.0, d]);
                raw_heights.push(d);
                top_ids.push(vertices.len() - 1);
                vertices.push([x, 0.0, -d]);
                raw_heights.push(d);
                bot_ids.push(vertices.len() - 1);
            }
        }
        for j in 0..top_ids.len() - 1 {
            segments.push([top_ids[j], top_ids[j + 1]]);
            let bot = [bot_ids[j], bot_ids[j + 1]];
            // Both sheets coincide over merged stretches; emit once.
            if bot != [top_ids[j], top_ids[j + 1]] {
                segments.push(bot);
            }
        }
    }
    if segments.is_empty() {
        return Err(LiftError::EmptyMesh);
    }
    let n_cells = segments.len();
    Ok(BoundaryMesh {
        base_dimension: 1,
        h,
        vertices,
        heights: raw_heights,
        cells: MeshCells::Segments(segments),
        component_id: vec![0; n_cells],
    })
}

fn extract_2d(
    heights: &ScalarField,
    kept: &[bool],
    nx: usize,
    ny: usize,
    h: f64,
) -> Result<BoundaryMesh, LiftError> {
    let grid = &heights.grid;
    // Cells with all four corners kept.
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for cy in 0..ny - 1 {
        for cx in 0..nx - 1 {
            let c = [
                grid.index(cx, cy),
                grid.index(cx + 1, cy),
                grid.index(cx, cy + 1),
                grid.index(cx + 1, cy + 1),
            ];
            if c.iter().all(|&i| kept[i]) {
                cells.push((cx, cy));
            }
        }
    }
    // Stabilize the complex so the double is watertight: no cell may have all
    // rim corners, and no interior edge may join two rim nodes.
    let mut cell_set: std::collections::BTreeSet<(usize, usize)> = cells.into_iter().collect();
    loop {
        let (rim, edge_cells) = rim_nodes(&cell_set, grid);
        let mut removed = false;
        let mut to_remove: Vec<(usize, usize)> = Vec::new();
        for &(cx, cy) in &cell_set {
            let corners = [
                grid.index(cx, cy),
                grid.index(cx + 1, cy),
                grid.index(cx, cy + 1),
                grid.index(cx + 1, cy + 1),
            ];
            if corners.iter().all(|&i| rim[i]) {
                to_remove.push((cx, cy));
            }
        }
        if to_remove.is_empty() {
            // Interior edges joining two rim nodes pinch the double; peel the
            // lexicographically smallest adjacent cell.
            'outer: for (&(a, b), cells_on_edge) in &edge_cells {
                if cells_on_edge.len() == 2 && rim[a] && rim[b] {
                    to_remove.push(cells_on_edge[0]);
                    break 'outer;
                }
            }
        }
        for c in to_remove {
            if cell_set.remove(&c) {
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }
    if cell_set.is_empty() {
        return Err(LiftError::EmptyMesh);
    }
    let (rim, _) = rim_nodes(&cell_set, grid);

    // Vertex ids: rim nodes share one vertex across sheets (snapped to t=0);
    // other nodes get one vertex per sheet.
    let mut top_id = vec![usize::MAX; grid.node_count()];
    let mut bot_id = vec![usize::MAX; grid.node_count()];
    let mut vertices: Vec<Point> = Vec::new();
    let mut raw_heights: Vec<f64> = Vec::new();
    let id_for = |node: usize,
                      sheet_top: bool,
                      vertices: &mut Vec<Point>,
                      raw: &mut Vec<f64>,
                      top_id: &mut Vec<usize>,
                      bot_id: &mut Vec<usize>|
     -> usize {
        let d = heights.values[node];
        let p = grid.position(node);
        if rim[node] {
            if top_id[node] == usize::MAX {
                vertices.push([p[0], p[1], 0.0]);
                raw.push(d);
                top_id[node] = vertices.len() - 1;
                bot_id[node] = vertices.len() - 1;
            }
            top_id[node]
        } else if sheet_top {
            if top_id[node] == usize::MAX {
                vertices.push([p[0], p[1], d]);
                raw.push(d);
                top_id[node] = vertices.len() - 1;
            }
            top_id[node]
        } else {
            if bot_id[node] == usize::MAX {
                vertices.push([p[0], p[1], -d]);
                raw.push(d);
                bot_id[node] = vertices.len() - 1;
            }
            bot_id[node]
        }
    };

    let mut tris: Vec<[usize; 3]> = Vec::new();
    for &(cx, cy) in &cell_set {
        let n00 = grid.index(cx, cy);
        let n10 = grid.index(cx + 1, cy);
        let n01 = grid.index(cx, cy + 1);
        let n11 = grid.index(cx + 1, cy + 1);
        // Choose the diagonal that avoids joining two rim nodes if possible.
        let diag_main_ok = !(rim[n00] && rim[n11]);
        let quads: [[usize; 3]; 2] = if diag_main_ok {
            [[n00, n10, n11], [n00, n11, n01]]
        } else {
            [[n10, n11, n01], [n10, n01, n00]]
        };
        for sheet_top in [true, false] {
            for q in quads {
                let mut ids = [0usize; 3];
                for (slot, &node) in q.iter().enumerate() {
                    ids[slot] = id_for(
                        node,
                        sheet_top,
                        &mut vertices,
                        &mut raw_heights,
                        &mut top_id,
                        &mut bot_id,
                    );
                }
                // Counterclockwise in xy gives an upward normal; flip the
                // lower sheet so normals point out of the lifted set.
                if sheet_top {
                    tris.push(ids);
                } else {
                    tris.push([ids[0], ids[2], ids[1]]);
                }
            }
        }
    }
    let n_cells = tris.len();
    Ok(BoundaryMesh {
        base_dimension: 2,
        h,
        vertices,
        heights: raw_heights,
        cells: MeshCells::Triangles(tris),
        component_id: vec![0; n_cells],
    })
}

type EdgeCells = std::collections::BTreeMap<(usize, usize), Vec<(usize, usize)>>;

/// Rim nodes of a cell complex: endpoints of edges used by exactly one cell.
fn rim_nodes(
    cell_set: &std::collections::BTreeSet<(usize, usize)>,
    grid: &crate::grid::Grid,
) -> (Vec<bool>, EdgeCells) {
    let mut edge_cells: EdgeCells = EdgeCells::new();
    for &(cx, cy) in cell_set {
        let n00 = grid.index(cx, cy);
        let n10 = grid.index(cx + 1, cy);
        let n01 = grid.index(cx, cy + 1);
        let n11 = grid.index(cx + 1, cy + 1);
        for (a, b) in [(n00, n10), (n10, n11), (n01, n11), (n00, n01)] {
            edge_cells
                .entry((a.min(b), a.max(b)))
                .or_default()
                .push((cx, cy));
        }
    }
    let mut rim = vec![false; grid.node_count()];
    for (&(a, b), cells) in &edge_cells {
        if cells.len() == 1 {
            rim[a] = true;
            rim[b] = true;
        }
    }
    (rim, edge_cells)
}

/// Mesh vertices meeting the t = 0 hyperplane: raw height at most h/2.
pub fn slice_t_zero(mesh: &BoundaryMesh) -> Result<PointSet, LiftError> {
    if mesh.is_empty() {
        return Err(LiftError::EmptyMesh);
    }
    let mut points: Vec<Point> = Vec::new();
    for (i, v) in mesh.vertices.iter().enumerate() {
        if mesh.heights[i] <= mesh.h / 2.0 {
            points.push([v[0], v[1], 0.0]);
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();
    Ok(PointSet {
        dimension: mesh.base_dimension,
        spacing: mesh.h,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfield::distance_transform;
    use crate::grid::Grid;
    use crate::region::{Primitive, RegionSpec};

    fn setup(region: &RegionSpec, res: usize) -> (Grid, ScalarField) {
        let g = Grid::for_region(region, res, 1.0).unwrap();
        let d = distance_transform(&g, region).unwrap();
        (g, d)
    }

    #[test]
    fn diamond_volume() {
        let u = RegionSpec::interval(-1.0, 1.0).unwrap();
        let (g, d) = setup(&u, 257);
        let ind = lift_open_set(&u, &d, 128).unwrap();
        let vol = ind.occupied_count() as f64 * ind.cell_volume(1);
        assert!((vol - 2.0).abs() <= 4.0 * g.spacing(), "volume {vol}");
    }

    #[test]
    fn pointwise_occupancy() {
        let u = RegionSpec::interval(-1.0, 1.0).unwrap();
        let (_, d) = setup(&u, 257);
        let ind = lift_open_set(&u, &d, 64).unwrap();
        // (x, t) = (0, 0.5): d(0) = 1 > 0.5, occupied.
        let ix = ((0.0 - ind.base_origin[0]) / ind.h).round() as usize;
        let it = ind.t_resolution + (0.5 / ind.dt()).round() as usize;
        assert!(ind.occupancy[it * ind.base_dims[0] + ix]);
    }

    #[test]
    fn tent_extremes() {
        // U = (0,1): extremal occupied nodes near (0,0), (0.5, +-0.5), (1,0).
        let u = RegionSpec::interval(0.0, 1.0).unwrap();
        let (g, d) = setup(&u, 513);
        let ind = lift_open_set(&u, &d, 256).unwrap();
        let h = g.spacing();
        let nx = ind.base_dims[0];
        let mut max_t: f64 = 0.0;
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut x_at_max_t = 0.0;
        for it in 0..ind.t_nodes() {
            let t = (it as f64 - ind.t_resolution as f64) * ind.dt();
            for ix in 0..nx {
                if ind.occupancy[it * nx + ix] {
                    let x = ind.base_origin[0] + ix as f64 * ind.h;
                    if t > max_t {
                        max_t = t;
                        x_at_max_t = x;
                    }
                    min_x = min_x.min(x);
                    max_x = max_x.max(x);
                }
            }
        }
        assert!((max_t - 0.5).abs() <= 2.0 * h);
        assert!((x_at_max_t - 0.5).abs() <= 2.0 * h);
        assert!(min_x > -2.0 * h && min_x < 2.0 * h);
        assert!((max_x - 1.0).abs() <= 2.0 * h);
    }

    #[test]
    fn occupancy_symmetric_in_t() {
        let u = RegionSpec::cantor_complement(3).unwrap();
        let (_, d) = setup(&u, 257);
        let ind = lift_open_set(&u, &d, 32).unwrap();
        let nx = ind.base_dims[0];
        let nt = ind.t_nodes();
        for it in 0..nt {
            for ix in 0..nx {
                assert_eq!(
                    ind.occupancy[it * nx + ix],
                    ind.occupancy[(nt - 1 - it) * nx + ix]
                );
            }
        }
    }

    #[test]
    fn union_of_component_lifts_equals_whole_lift() {
        // Eq-union property on the two-interval region, node for node.
        let u = RegionSpec::new(
            1,
            vec![
                Primitive::interval(0.0, 1.0).unwrap(),
                Primitive::interval(2.0, 3.0).unwrap(),
            ],
        )
        .unwrap();
        let (_, d) = setup(&u, 257);
        let ind = lift_open_set(&u, &d, 64).unwrap();
        let v1 = RegionSpec::interval(0.0, 1.0).unwrap();
        let v2 = RegionSpec::interval(2.0, 3.0).unwrap();
        // Component lifts on the same grid and t lattice.
        let grid = &d.grid;
        let nx = ind.base_dims[0];
        for it in 0..ind.t_nodes() {
            let t = (it as f64 - ind.t_resolution as f64) * ind.dt();
            for ix in 0..nx {
                let p = grid.position(grid.index(ix, 0));
                let in_v1 = v1.contains(&p) && t.abs() < d.values[ix];
                let in_v2 = v2.contains(&p) && t.abs() < d.values[ix];
                assert_eq!(ind.occupancy[it * nx + ix], in_v1 || in_v2);
            }
        }
    }

    #[test]
    fn monotone_under_primitive_removal() {
        let both = RegionSpec::new(
            1,
            vec![
                Primitive::interval(0.0, 1.0).unwrap(),
                Primitive::interval(2.0, 3.0).unwrap(),
            ],
        )
        .unwrap();
        let (g, d_both) = setup(&both, 257);
        let ind_both = lift_open_set(&both, &d_both, 64).unwrap();
        let one = RegionSpec::interval(0.0, 1.0).unwrap();
        // Same grid: distance field of `one` on `both`'s grid.
        let d_one = distance_transform(&g, &one).unwrap();
        let ind_one = lift_open_set(&one, &d_one, 64).unwrap();
        // d to a subset's boundary differs, but occupancy of the smaller
        // region never exceeds the union's within the shared diamond over
        // (0,1) ... restrict the claim to the base-projection: occupied
        // columns of `one` are a subset of occupied columns of `both`.
        let nx = ind_both.base_dims[0];
        for ix in 0..nx {
            let col_one = (0..ind_one.t_nodes()).any(|it| ind_one.occupancy[it * nx + ix]);
            let col_both = (0..ind_both.t_nodes()).any(|it| ind_both.occupancy[it * nx + ix]);
            if col_one {
                assert!(col_both);
            }
        }
    }

    #[test]
    fn rhombus_polyline() {
        let u = RegionSpec::interval(0.0, 1.0).unwrap();
        let (g, d) = setup(&u, 257);
        let mesh = extract_lifted_boundary(&u, &d).unwrap();
        let h = g.spacing();
        // One closed loop through (0,0), (0.5, 0.5), (1, 0), (0.5, -0.5).
        let loop_pts = mesh.closed_loop(0).unwrap();
        for target in [[0.0, 0.0], [0.5, 0.5], [1.0, 0.0], [0.5, -0.5]] {
            let near = loop_pts
                .iter()
                .any(|p| ((p[0] - target[0]).powi(2) + (p[1] - target[1]).powi(2)).sqrt() <= 2.0 * h);
            assert!(near, "no loop vertex near {target:?}");
        }
        // Perimeter approximates 2*sqrt(2).
        let mut len = 0.0;
        for i in 0..loop_pts.len() {
            let a = loop_pts[i];
            let b = loop_pts[(i + 1) % loop_pts.len()];
            len += ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        }
        assert!((len - 2.0 * 2.0f64.sqrt()).abs() < 0.05, "perimeter {len}");
    }

    #[test]
    fn slice_of_rhombus_is_endpoints() {
        let u = RegionSpec::interval(0.0, 1.0).unwrap();
        let (g, d) = setup(&u, 257);
        let mesh = extract_lifted_boundary(&u, &d).unwrap();
        let slice = slice_t_zero(&mesh).unwrap();
        let h = g.spacing();
        for p in &slice.points {
            let near0 = p[0].abs() <= h;
            let near1 = (p[0] - 1.0).abs() <= h;
            assert!(near0 || near1, "slice point {p:?} away from endpoints");
        }
        assert!(slice.points.iter().any(|p| p[0].abs() <= h));
        assert!(slice.points.iter().any(|p| (p[0] - 1.0).abs() <= h));
    }

    #[test]
    fn cantor_slice_depth2() {
        // Depth-2 pre-Cantor endpoints: 8 of them; every slice point is near
        // one and every endpoint has a nearby slice point.
        let u = RegionSpec::cantor_complement(2).unwrap();
        let (g, d) = setup(&u, 513);
        let mesh = extract_lifted_boundary(&u, &d).unwrap();
        let slice = slice_t_zero(&mesh).unwrap();
        let h = g.spacing();
        let endpoints: Vec<f64> = u.boundary_samples(h).points.iter().map(|p| p[0]).collect();
        assert_eq!(endpoints.len(), 8);
        for p in &slice.points {
            assert!(
                endpoints.iter().any(|e| (p[0] - e).abs() <= h),
                "slice point {p:?}"
            );
        }
        for e in &endpoints {
            assert!(slice.points.iter().any(|p| (p[0] - e).abs() <= h));
        }
    }

    #[test]
    fn disk_mesh_area_is_doubled_cone() {
        let u = RegionSpec::disk([0.0, 0.0], 1.0).unwrap();
        let (_, d) = setup(&u, 513);
        let mesh = extract_lifted_boundary(&u, &d).unwrap();
        let expected = 2.0 * std::f64::consts::PI * 2.0f64.sqrt();
        let area = mesh.measure();
        assert!(
            (area - expected).abs() / expected < 0.05,
            "area {area}, expected {expected}"
        );
    }

    #[test]
    fn empty_interior_fraction_halves() {
        let u = RegionSpec::interval(-1.0, 1.0).unwrap();
        let mut fractions = Vec::new();
        for res in [65usize, 129, 257] {
            let (_, d) = setup(&u, res);
            let ind = lift_open_set(&u, &d, (res - 1) / 2).unwrap();
            fractions.push(empty_interior_check(&ind));
        }
        for w in fractions.windows(2) {
            let ratio = w[1] / w[0];
            assert!((ratio - 0.5).abs() <= 0.15, "ratio {ratio}");
        }
    }

    #[test]
    fn full_lattice_counts_outer_shell() {
        let ind = LiftedIndicator {
            base_dims: [8, 1],
            base_origin: [0.0, 0.0],
            h: 1.0,
            t_resolution: 4,
            t_max: 1.0,
            occupancy: vec![true; 8 * 9],
        };
        let frac = empty_interior_check(&ind);
        // Shell of an 8 x 9 lattice: total minus interior 6 x 7.
        let expected = (72 - 42) as f64 / 72.0;
        assert!((frac - expected).abs() < 1e-12);
    }

    #[test]
    fn mesh_vertices_satisfy_height_bound() {
        let u = RegionSpec::disk([0.0, 0.0], 1.0).unwrap();
        let (g, d) = setup(&u, 129);
        let mesh = extract_lifted_boundary(&u, &d).unwrap();
        let h = g.spacing();
        for (i, v) in mesh.vertices.iter().enumerate() {
            let node = g.nearest_node(v);
            let dval = d.values[node];
            // Rim vertices are snapped to t = 0 while their nodes can sit a
            // diagonal step from E, so the slack is 2h rather than h.
            assert!(
                (v[2].abs() - dval).abs() <= 2.0 * h + 1e-12,
                "vertex {i} height {} vs d {}",
                v[2],
                dval
            );
        }
    }
}
