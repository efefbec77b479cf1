//! Exact Euclidean distance transforms and the regularized distance variant.
//!
//! The boundary E is represented by a sample net at spacing <= h/2, rasterized
//! to its nearest grid nodes; the two-pass lower-envelope-of-parabolas
//! transform is then exact with respect to that node set.

use crate::grid::{Grid, ScalarField};
use crate::region::RegionSpec;
use crate::topo;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DistFieldError {
    #[error("region produced no boundary samples")]
    EmptyBoundary,
    #[error("region has no interior grid nodes")]
    NoInteriorNodes,
    #[error("epsilon must lie in (0, 1/2), got {0}")]
    BadEpsilon(f64),
}

const INF: f64 = 1e308;

/// One-dimensional squared-distance transform (lower envelope of parabolas).
/// `f` holds squared values at integer abscissae; the result is
/// `min_j f[j] + (i - j)^2` for every i.
fn edt_1d_sq(f: &[f64], out: &mut [f64]) {
    let n = f.len();
    let mut v = vec![0usize; n]; // parabola apex indices
    let mut z = vec![0.0f64; n + 1]; // envelope breakpoints
    let mut k = 0usize;
    let first = match f.iter().position(|&x| x < INF) {
        Some(i) => i,
        None => {
            out.fill(INF);
            return;
        }
    };
    v[0] = first;
    z[0] = -INF;
    z[1] = INF;
    for q in (first + 1)..n {
        if f[q] >= INF {
            continue;
        }
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64))
                / (2.0 * q as f64 - 2.0 * p as f64);
            // s is finite and z[0] = -inf, so k never underflows.
            if s <= z[k] {
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = INF;
                break;
            }
        }
    }
    let mut k = 0usize;
    for i in 0..n {
        while z[k + 1] < i as f64 {
            k += 1;
        }
        let p = v[k];
        let d = i as f64 - p as f64;
        out[i] = d * d + f[p];
    }
}

/// Exact Euclidean distance from every grid node to the rasterized boundary
/// net of E = ∂U.
pub fn distance_transform(grid: &Grid, region: &RegionSpec) -> Result<ScalarField, DistFieldError> {
    let spacing = grid.spacing() / 2.0;
    let samples = region.boundary_samples(spacing);
    if samples.is_empty() {
        return Err(DistFieldError::EmptyBoundary);
    }
    let mut sq = vec![INF; grid.node_count()];
    for p in &samples.points {
        sq[grid.nearest_node(p)] = 0.0;
    }
    let [nx, ny] = grid.dims();
    if grid.dimension() == 1 || ny == 1 {
        let mut out = vec![0.0; nx];
        edt_1d_sq(&sq[..nx], &mut out);
        sq[..nx].copy_from_slice(&out);
    } else {
        // Pass 1: along x within each row.
        let mut row_out = vec![0.0; nx];
        for iy in 0..ny {
            let row = &sq[iy * nx..(iy + 1) * nx];
            edt_1d_sq(row, &mut row_out);
            sq[iy * nx..(iy + 1) * nx].copy_from_slice(&row_out);
        }
        // Pass 2: along y within each column.
        let mut col = vec![0.0; ny];
        let mut col_out = vec![0.0; ny];
        for ix in 0..nx {
            for iy in 0..ny {
                col[iy] = sq[iy * nx + ix];
            }
            edt_1d_sq(&col, &mut col_out);
            for iy in 0..ny {
                sq[iy * nx + ix] = col_out[iy];
            }
        }
    }
    let h = grid.spacing();
    let values = sq.into_iter().map(|d2| d2.sqrt() * h).collect();
    Ok(ScalarField::new(grid.clone(), values))
}

/// Maximum |value difference| / h over axis-adjacent node pairs.
pub fn lipschitz_constant(field: &ScalarField) -> f64 {
    let [nx, ny] = field.grid.dims();
    let h = field.grid.spacing();
    let mut lip = 0.0f64;
    for iy in 0..ny {
        for ix in 0..nx {
            let v = field.values[iy * nx + ix];
            if ix + 1 < nx {
                lip = lip.max((field.values[iy * nx + ix + 1] - v).abs() / h);
            }
            if iy + 1 < ny {
                lip = lip.max((field.values[(iy + 1) * nx + ix] - v).abs() / h);
            }
        }
    }
    lip
}

/// Brute-force check of the complement-distance identities: at sampled nodes
/// x inside U, dist(x, complement of U) and dist(x, ∂V) for x's component V
/// must both agree with the stored distance field. Returns the maximum
/// absolute deviation (contract: <= 2h).
pub fn complement_distance_identity(
    field: &ScalarField,
    region: &RegionSpec,
    sample_count: usize,
) -> Result<f64, DistFieldError> {
    let grid = &field.grid;
    let n = grid.node_count();
    let mut inside = vec![false; n];
    let mut inside_nodes = Vec::new();
    for idx in 0..n {
        if region.contains(&grid.position(idx)) {
            inside[idx] = true;
            inside_nodes.push(idx);
        }
    }
    if inside_nodes.is_empty() {
        return Err(DistFieldError::NoInteriorNodes);
    }
    let complement: Vec<usize> = (0..n).filter(|&i| !inside[i]).collect();
    let [nx, ny] = grid.dims();
    let labels = topo::label_components(&inside, &[nx, ny]);
    // Component boundary nodes: complement nodes face-adjacent to each label.
    let mut comp_boundary: Vec<Vec<usize>> = vec![Vec::new(); labels.component_count as usize + 1];
    for &c in &complement {
        let ix = c % nx;
        let iy = c / nx;
        let push_for = |nb: usize, store: &mut Vec<Vec<usize>>| {
            let l = labels.labels[nb];
            if l > 0 && !store[l as usize].contains(&c) {
                store[l as usize].push(c);
            }
        };
        if ix > 0 && inside[c - 1] {
            push_for(c - 1, &mut comp_boundary);
        }
        if ix + 1 < nx && inside[c + 1] {
            push_for(c + 1, &mut comp_boundary);
        }
        if iy > 0 && inside[c - nx] {
            push_for(c - nx, &mut comp_boundary);
        }
        if iy + 1 < ny && inside[c + nx] {
            push_for(c + nx, &mut comp_boundary);
        }
    }
    let stride = (inside_nodes.len() / sample_count.max(1)).max(1);
    let mut max_dev = 0.0f64;
    for &x_idx in inside_nodes.iter().step_by(stride) {
        let x = grid.position(x_idx);
        let dist_to = |set: &[usize]| -> f64 {
            let mut best = f64::INFINITY;
            for &c in set {
                let q = grid.position(c);
                let d2 = (q[0] - x[0]).powi(2) + (q[1] - x[1]).powi(2);
                if d2 < best {
                    best = d2;
                }
            }
            best.sqrt()
        };
        let d_complement = dist_to(&complement);
        let label = labels.labels[x_idx] as usize;
        let d_component = dist_to(&comp_boundary[label]);
        let f = field.values[x_idx];
        max_dev = max_dev.max((d_complement - f).abs());
        max_dev = max_dev.max((d_component - f).abs());
    }
    Ok(max_dev)
}

/// Stein-style regularized distance: the average of the field over the ball
/// of radius `epsilon * field(x)` centered at x. Pointwise comparable to the
/// distance: (1-eps) d <= rho <= (1+eps) d, with rho = 0 exactly where d = 0.
pub fn regularized_distance(
    field: &ScalarField,
    epsilon: f64,
) -> Result<ScalarField, DistFieldError> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(DistFieldError::BadEpsilon(epsilon));
    }
    let grid = &field.grid;
    let [nx, ny] = grid.dims();
    let h = grid.spacing();
    let mut out = vec![0.0; field.values.len()];
    for iy in 0..ny {
        for ix in 0..nx {
            let idx = iy * nx + ix;
            let d = field.values[idx];
            let r = epsilon * d;
            let k = (r / h).floor() as i64;
            if k == 0 {
                out[idx] = d;
                continue;
            }
            let mut sum = 0.0;
            let mut count = 0u64;
            let r2 = r * r;
            for dy in -k..=k {
                let jy = iy as i64 + dy;
                if jy < 0 || jy >= ny as i64 {
                    continue;
                }
                for dx in -k..=k {
                    let jx = ix as i64 + dx;
                    if jx < 0 || jx >= nx as i64 {
                        continue;
                    }
                    let off2 = ((dx * dx + dy * dy) as f64) * h * h;
                    if off2 <= r2 {
                        sum += field.values[jy as usize * nx + jx as usize];
                        count += 1;
                    }
                }
            }
            out[idx] = sum / count as f64;
        }
    }
    Ok(ScalarField::new(grid.clone(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::region::RegionSpec;
    use rand::{Rng, SeedableRng};

    fn field_at(field: &ScalarField, x: f64) -> f64 {
        // Value at the node nearest to (x, 0).
        field.values[field.grid.nearest_node(&[x, 0.0, 0.0])]
    }

    #[test]
    fn symmetric_interval_tent() {
        let u = RegionSpec::interval(-1.0, 1.0).unwrap();
        let g = Grid::for_region(&u, 257, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        let h = g.spacing();
        assert!((field_at(&d, 0.0) - 1.0).abs() <= h);
        assert!((field_at(&d, 0.5) - 0.5).abs() <= h);
    }

    #[test]
    fn deep_cantor_midpoint() {
        // Nearest truncated-Cantor points to 0.5 are 1/3 and 2/3.
        let u = RegionSpec::cantor_complement(8).unwrap();
        let g = Grid::for_region(&u, 512, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        assert!((field_at(&d, 0.5) - 1.0 / 6.0).abs() <= g.spacing());
    }

    #[test]
    fn matches_brute_force_on_random_sites() {
        // Oracle: exhaustive nearest-neighbor scan over the rasterized net.
        let u = RegionSpec::disk([0.5, 0.5], 0.5).unwrap();
        let g = Grid::for_region(&u, 96, 1.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let sites: Vec<usize> = (0..50)
            .map(|_| {
                let ix = rng.gen_range(0..g.dims()[0]);
                let iy = rng.gen_range(0..g.dims()[1]);
                g.index(ix, iy)
            })
            .collect();
        // Drive the transform directly on these sites through a synthetic
        // seed raster to compare like for like.
        let mut sq = vec![super::INF; g.node_count()];
        for &s in &sites {
            sq[s] = 0.0;
        }
        let [nx, ny] = g.dims();
        let mut row_out = vec![0.0; nx];
        for iy in 0..ny {
            let row: Vec<f64> = sq[iy * nx..(iy + 1) * nx].to_vec();
            super::edt_1d_sq(&row, &mut row_out);
            sq[iy * nx..(iy + 1) * nx].copy_from_slice(&row_out);
        }
        let mut col = vec![0.0; ny];
        let mut col_out = vec![0.0; ny];
        for ix in 0..nx {
            for iy in 0..ny {
                col[iy] = sq[iy * nx + ix];
            }
            super::edt_1d_sq(&col, &mut col_out);
            for iy in 0..ny {
                sq[iy * nx + ix] = col_out[iy];
            }
        }
        for idx in 0..g.node_count() {
            let p = g.position(idx);
            let mut best = f64::INFINITY;
            for &s in &sites {
                let q = g.position(s);
                best = best.min(((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt());
            }
            let got = sq[idx].sqrt() * g.spacing();
            assert!(
                (got - best).abs() < 1e-12 * (1.0 + best),
                "node {idx}: {got} vs {best}"
            );
        }
    }

    #[test]
    fn lipschitz_bound_holds() {
        for u in [
            RegionSpec::interval(-1.0, 1.0).unwrap(),
            RegionSpec::cantor_complement(4).unwrap(),
        ] {
            let g = Grid::for_region(&u, 257, 1.0).unwrap();
            let d = distance_transform(&g, &u).unwrap();
            assert!(lipschitz_constant(&d) <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn tent_slope_is_one() {
        let u = RegionSpec::interval(-1.0, 1.0).unwrap();
        let g = Grid::for_region(&u, 257, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        let lip = lipschitz_constant(&d);
        assert!((lip - 1.0).abs() < 1e-9, "tent slope {lip}");
    }

    #[test]
    fn constant_field_has_zero_variation() {
        let u = RegionSpec::interval(0.0, 1.0).unwrap();
        let g = Grid::for_region(&u, 32, 1.0).unwrap();
        let f = ScalarField::new(g.clone(), vec![2.5; g.node_count()]);
        assert_eq!(lipschitz_constant(&f), 0.0);
    }

    #[test]
    fn complement_identity_exact_cases() {
        let u = RegionSpec::interval(-1.0, 1.0).unwrap();
        let g = Grid::for_region(&u, 257, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        let dev = complement_distance_identity(&d, &u, 64).unwrap();
        assert!(dev <= 2.0 * g.spacing(), "deviation {dev}");
    }

    #[test]
    fn complement_identity_two_components() {
        use crate::region::Primitive;
        let u = RegionSpec::new(
            1,
            vec![
                Primitive::interval(0.0, 1.0).unwrap(),
                Primitive::interval(2.0, 3.0).unwrap(),
            ],
        )
        .unwrap();
        let g = Grid::for_region(&u, 257, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        let dev = complement_distance_identity(&d, &u, 100).unwrap();
        assert!(dev <= 2.0 * g.spacing(), "deviation {dev}");
    }

    #[test]
    fn regularized_distance_comparable() {
        let u = RegionSpec::interval(-1.0, 1.0).unwrap();
        let g = Grid::for_region(&u, 257, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        for eps in [0.1, 0.2] {
            let rho = regularized_distance(&d, eps).unwrap();
            for i in 0..d.values.len() {
                let dv = d.values[i];
                assert!(rho.values[i] >= (1.0 - eps) * dv - 1e-12);
                assert!(rho.values[i] <= (1.0 + eps) * dv + 1e-12);
                if dv == 0.0 {
                    assert_eq!(rho.values[i], 0.0);
                }
            }
            assert!(lipschitz_constant(&rho) <= 1.0 + 2.0 * eps + 1e-9);
        }
    }

    #[test]
    fn regularized_tent_center_average() {
        // Average of the tent 1-|y| over [-0.2, 0.2] is 0.9.
        let u = RegionSpec::interval(-1.0, 1.0).unwrap();
        let g = Grid::for_region(&u, 1025, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        let rho = regularized_distance(&d, 0.2).unwrap();
        let v = rho.values[g.nearest_node(&[0.0, 0.0, 0.0])];
        assert!((v - 0.9).abs() < 2.0 * g.spacing(), "rho(0) = {v}");
        assert!(v < 1.0);
        assert!(v >= 0.8 && v <= 1.2);
    }

    #[test]
    fn bad_epsilon_rejected() {
        let u = RegionSpec::interval(0.0, 1.0).unwrap();
        let g = Grid::for_region(&u, 32, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        assert!(matches!(
            regularized_distance(&d, 0.5),
            Err(DistFieldError::BadEpsilon(_))
        ));
        assert!(matches!(
            regularized_distance(&d, 0.0),
            Err(DistFieldError::BadEpsilon(_))
        ));
    }
}
