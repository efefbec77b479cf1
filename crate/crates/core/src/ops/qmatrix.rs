//! Dense quaternion matrices for the surface operator layer.

use crate::ops::quaternion::{Quaternion, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Row-major storage.
    pub data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Quaternion) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sq() == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(row) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|q| q.scale(s)).collect(),
        }
    }

    pub fn adjoint(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Spectral norm via power iteration on A^H A with a deterministic
    /// start vector.
    pub fn operator_norm(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        let ah = self.adjoint();
        let mut v: Vec<Quaternion> = (0..self.cols)
            .map(|j| {
                Quaternion::new(
                    1.0 + (j % 7) as f64 * 0.1,
                    (j % 3) as f64 * 0.05,
                    (j % 5) as f64 * 0.02,
                    0.0,
                )
            })
            .collect();
        let mut lambda = 0.0f64;
        for _ in 0..300 {
            let w = ah.apply(&self.apply(&v));
            let n = w.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt();
            if n == 0.0 {
                return 0.0;
            }
            let next: Vec<Quaternion> = w.iter().map(|q| q.scale(1.0 / n)).collect();
            if (n - lambda).abs() <= 1e-12 * n.max(1.0) {
                return n.sqrt();
            }
            lambda = n;
            v = next;
        }
        lambda.sqrt()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt()
    }

    pub fn apply(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = ZERO;
                for j in 0..self.cols {
                    acc = acc + self.get(i, j) * v[j];
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_neutral() {
        let mut m = QMatrix::zeros(2, 2);
        m.set(0, 0, Quaternion::new(1.0, 2.0, 3.0, 4.0));
        m.set(0, 1, Quaternion::new(0.0, -1.0, 0.5, 0.0));
        m.set(1, 0, Quaternion::new(2.0, 0.0, 0.0, -3.0));
        m.set(1, 1, Quaternion::new(0.5, 0.5, 0.5, 0.5));
        let id = QMatrix::identity(2);
        assert!(m.mul(&id).sub(&m).frobenius_norm() < 1e-15);
        assert!(id.mul(&m).sub(&m).frobenius_norm() < 1e-15);
    }

    #[test]
    fn noncommutative_product() {
        let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
        let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        let mut a = QMatrix::zeros(1, 1);
        a.set(0, 0, i);
        let mut b = QMatrix::zeros(1, 1);
        b.set(0, 0, j);
        let ab = a.mul(&b).get(0, 0);
        let ba = b.mul(&a).get(0, 0);
        assert_eq!(ab, -ba);
    }
}
