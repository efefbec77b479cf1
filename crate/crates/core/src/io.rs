//! Artifact serialization: OBJ/PLY meshes, CSV tables, RLE occupancy dumps.

use crate::grid::ScalarField;
use crate::lift::LiftedIndicator;
use crate::mesh::{BoundaryMesh, MeshCells};
use crate::ops::cmatrix::CMatrix;
use crate::ops::qmatrix::QMatrix;
use crate::topo::DimensionFit;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("mesh is empty, refusing to write")]
    EmptyMesh,
    #[error("table is empty, refusing to write")]
    EmptyTable,
    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),
    #[error("parse error at line {0}: {1}")]
    Parse(usize, String),
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// ASCII OBJ with `v` records plus `l` (polylines) or `f` (triangles).
pub fn export_obj(mesh: &BoundaryMesh, path: &Path) -> Result<(), IoError> {
    if mesh.is_empty() {
        return Err(IoError::EmptyMesh);
    }
    let mut out = String::new();
    for v in &mesh.vertices {
        out.push_str(&format!("v {} {} {}\n", fmt17(v[0]), fmt17(v[1]), fmt17(v[2])));
    }
    match &mesh.cells {
        MeshCells::Segments(segs) => {
            for &[a, b] in segs {
                out.push_str(&format!("l {} {}\n", a + 1, b + 1));
            }
        }
        MeshCells::Triangles(tris) => {
            for &[a, b, c] in tris {
                out.push_str(&format!("f {} {} {}\n", a + 1, b + 1, c + 1));
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Minimal OBJ reader for round-trip checks: `v`, `l`, `f` records only.
pub fn import_obj(path: &Path) -> Result<BoundaryMesh, IoError> {
    let text = std::fs::read_to_string(path)?;
    let mut vertices = Vec::new();
    let mut segs: Vec<[usize; 2]> = Vec::new();
    let mut tris: Vec<[usize; 3]> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let mut p = [0.0f64; 3];
                for slot in &mut p {
                    *slot = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| IoError::Parse(ln + 1, "bad vertex".into()))?;
                }
                vertices.push(p);
            }
            Some("l") => {
                let a: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| IoError::Parse(ln + 1, "bad line".into()))?;
                let b: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| IoError::Parse(ln + 1, "bad line".into()))?;
                segs.push([a - 1, b - 1]);
            }
            Some("f") => {
                let mut t = [0usize; 3];
                for slot in &mut t {
                    let v: usize = it
                        .next()
                        .and_then(|s| s.split('/').next().unwrap().parse().ok())
                        .ok_or_else(|| IoError::Parse(ln + 1, "bad face".into()))?;
                    *slot = v - 1;
                }
                tris.push(t);
            }
            _ => {}
        }
    }
    let (cells, base_dimension) = if !tris.is_empty() {
        (MeshCells::Triangles(tris), 2)
    } else {
        (MeshCells::Segments(segs), 1)
    };
    let n = vertices.len();
    let cell_count = match &cells {
        MeshCells::Segments(s) => s.len(),
        MeshCells::Triangles(t) => t.len(),
    };
    Ok(BoundaryMesh {
        base_dimension,
        h: 0.0,
        heights: vec![0.0; n],
        vertices,
        cells,
        component_id: vec![0; cell_count],
    })
}

/// Binary little-endian PLY 1.0 with vertex and face (or edge) elements.
pub fn export_ply(mesh: &BoundaryMesh, path: &Path) -> Result<(), IoError> {
    if mesh.is_empty() {
        return Err(IoError::EmptyMesh);
    }
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(b"ply\nformat binary_little_endian 1.0\n");
    buf.extend_from_slice(format!("element vertex {}\n", mesh.vertices.len()).as_bytes());
    buf.extend_from_slice(b"property double x\nproperty double y\nproperty double z\n");
    match &mesh.cells {
        MeshCells::Segments(segs) => {
            buf.extend_from_slice(format!("element edge {}\n", segs.len()).as_bytes());
            buf.extend_from_slice(b"property int vertex1\nproperty int vertex2\n");
        }
        MeshCells::Triangles(tris) => {
            buf.extend_from_slice(format!("element face {}\n", tris.len()).as_bytes());
            buf.extend_from_slice(b"property list uchar int vertex_indices\n");
        }
    }
    buf.extend_from_slice(b"end_header\n");
    for v in &mesh.vertices {
        for a in 0..3 {
            buf.extend_from_slice(&v[a].to_le_bytes());
        }
    }
    match &mesh.cells {
        MeshCells::Segments(segs) => {
            for &[a, b] in segs {
                buf.extend_from_slice(&(a as i32).to_le_bytes());
                buf.extend_from_slice(&(b as i32).to_le_bytes());
            }
        }
        MeshCells::Triangles(tris) => {
            for &t in tris {
                buf.push(3u8);
                for v in t {
                    buf.extend_from_slice(&(v as i32).to_le_bytes());
                }
            }
        }
    }
    std::fs::write(path, buf)?;
    Ok(())
}

/// CSV of a scalar field: one row per node, coordinates then value.
pub fn csv_scalar_field(field: &ScalarField) -> String {
    let dim = field.grid.dimension();
    let mut out = String::new();
    if dim == 1 {
        out.push_str("x,value\r\n");
    } else {
        out.push_str("x,y,value\r\n");
    }
    for idx in 0..field.values.len() {
        let p = field.grid.position(idx);
        if dim == 1 {
            out.push_str(&format!("{},{}\r\n", fmt17(p[0]), fmt17(field.values[idx])));
        } else {
            out.push_str(&format!(
                "{},{},{}\r\n",
                fmt17(p[0]),
                fmt17(p[1]),
                fmt17(field.values[idx])
            ));
        }
    }
    out
}

pub fn csv_dimension_fit(fit: &DimensionFit) -> String {
    let mut out = String::from("scale,count,log_inv_scale,log_count\r\n");
    for (&s, &c) in fit.scales.iter().zip(&fit.counts) {
        out.push_str(&format!(
            "{},{},{},{}\r\n",
            fmt17(s),
            c,
            fmt17((1.0 / s).ln()),
            fmt17((c as f64).ln())
        ));
    }
    out
}

/// Dense complex matrix, row-major, each entry as a re/im column pair.
pub fn csv_cmatrix(m: &CMatrix) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..m.cols)
        .flat_map(|j| [format!("col{j}_re"), format!("col{j}_im")])
        .collect();
    out.push_str(&header.join(","));
    out.push_str("\r\n");
    for i in 0..m.rows {
        let row: Vec<String> = (0..m.cols)
            .flat_map(|j| {
                let z = m.get(i, j);
                [fmt17(z.re), fmt17(z.im)]
            })
            .collect();
        out.push_str(&row.join(","));
        out.push_str("\r\n");
    }
    out
}

/// Dense quaternion matrix, row-major, each entry as a w/x/y/z 4-tuple.
pub fn csv_qmatrix(m: &QMatrix) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..m.cols)
        .flat_map(|j| {
            [
                format!("col{j}_w"),
                format!("col{j}_x"),
                format!("col{j}_y"),
                format!("col{j}_z"),
            ]
        })
        .collect();
    out.push_str(&header.join(","));
    out.push_str("\r\n");
    for i in 0..m.rows {
        let row: Vec<String> = (0..m.cols)
            .flat_map(|j| {
                let q = m.get(i, j);
                [fmt17(q.w), fmt17(q.x), fmt17(q.y), fmt17(q.z)]
            })
            .collect();
        out.push_str(&row.join(","));
        out.push_str("\r\n");
    }
    out
}

/// Run-length-encoded occupancy dump.
///
/// Layout, all little-endian:
///   bytes 0..6    magic "ULIFT1"
///   byte 6        format version (1)
///   byte 7        base dimension
///   bytes 8..16   u16 nx, u16 ny, u16 nt, u16 reserved (zero)
///   bytes 16..32  f64 h, f64 t_max
///   bytes 32..    alternating u32 run lengths over the flat node order,
///                 starting with an unoccupied run (possibly length 0).
pub fn export_occupancy_rle(ind: &LiftedIndicator, path: &Path) -> Result<(), IoError> {
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(b"ULIFT1");
    buf.push(1u8);
    buf.push(if ind.base_dims[1] > 1 { 2 } else { 1 });
    buf.extend_from_slice(&(ind.base_dims[0] as u16).to_le_bytes());
    buf.extend_from_slice(&(ind.base_dims[1] as u16).to_le_bytes());
    buf.extend_from_slice(&(ind.t_nodes() as u16).to_le_bytes());
    buf.extend_from_slice(&0u16.to_le_bytes());
    buf.extend_from_slice(&ind.h.to_le_bytes());
    buf.extend_from_slice(&ind.t_max.to_le_bytes());
    let mut current = false;
    let mut run: u32 = 0;
    for &occ in &ind.occupancy {
        if occ == current {
            run += 1;
        } else {
            buf.extend_from_slice(&run.to_le_bytes());
            current = occ;
            run = 1;
        }
    }
    buf.extend_from_slice(&run.to_le_bytes());
    let mut f = std::fs::File::create(path)?;
    f.write_all(&buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::icosphere;
    use num_complex::Complex64;

    fn tmp(name: &str) -> std::path::PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("lift-io-test-{}-{name}", std::process::id()));
        p
    }

    #[test]
    fn obj_round_trip_triangles() {
        let mesh = icosphere(1);
        let path = tmp("sphere.obj");
        export_obj(&mesh, &path).unwrap();
        let back = import_obj(&path).unwrap();
        assert_eq!(back.vertices.len(), mesh.vertices.len());
        for (a, b) in back.vertices.iter().zip(&mesh.vertices) {
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-9);
            }
        }
        assert_eq!(back.cells, mesh.cells);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn ply_header_and_sizes() {
        let mesh = icosphere(0);
        let path = tmp("sphere.ply");
        export_ply(&mesh, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let header_end = bytes
            .windows(11)
            .position(|w| w == b"end_header\n")
            .unwrap()
            + 11;
        let header = std::str::from_utf8(&bytes[..header_end]).unwrap();
        assert!(header.starts_with("ply\nformat binary_little_endian 1.0\n"));
        assert!(header.contains("element vertex 12\n"));
        assert!(header.contains("element face 20\n"));
        let payload = bytes.len() - header_end;
        assert_eq!(payload, 12 * 24 + 20 * 13);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn empty_mesh_rejected() {
        let mesh = BoundaryMesh {
            base_dimension: 1,
            h: 0.1,
            vertices: vec![],
            heights: vec![],
            cells: MeshCells::Segments(vec![]),
            component_id: vec![],
        };
        assert!(matches!(
            export_obj(&mesh, &tmp("empty.obj")),
            Err(IoError::EmptyMesh)
        ));
        assert!(matches!(
            export_ply(&mesh, &tmp("empty.ply")),
            Err(IoError::EmptyMesh)
        ));
    }

    #[test]
    fn csv_matrix_shape() {
        let mut m = CMatrix::zeros(2, 2);
        m.set(0, 0, Complex64::new(1.0, -2.0));
        m.set(1, 1, Complex64::new(0.5, 0.25));
        let csv = csv_cmatrix(&m);
        let lines: Vec<&str> = csv.trim_end().split("\r\n").collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "col0_re,col0_im,col1_re,col1_im");
        assert_eq!(lines[1].split(',').count(), 4);
        assert!(lines[1].starts_with("1.0000000000000000e0"));
    }

    #[test]
    fn rle_round_trip_by_hand() {
        use crate::distfield::distance_transform;
        use crate::grid::Grid;
        use crate::lift::lift_open_set;
        use crate::region::RegionSpec;
        let u = RegionSpec::interval(0.0, 1.0).unwrap();
        let g = Grid::for_region(&u, 65, 1.0).unwrap();
        let d = distance_transform(&g, &u).unwrap();
        let ind = lift_open_set(&u, &d, 16).unwrap();
        let path = tmp("occ.rle");
        export_occupancy_rle(&ind, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[..6], b"ULIFT1");
        let mut decoded: Vec<bool> = Vec::new();
        let mut val = false;
        let mut off = 32;
        while off < bytes.len() {
            let run = u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap());
            decoded.extend(std::iter::repeat(val).take(run as usize));
            val = !val;
            off += 4;
        }
        assert_eq!(decoded, ind.occupancy);
        std::fs::remove_file(&path).ok();
    }
}
