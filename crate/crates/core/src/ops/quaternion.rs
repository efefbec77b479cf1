//! Minimal quaternion arithmetic for the surface operator layer.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO: Quaternion = Quaternion {
    w: 0.0,
    x: 0.0,
    y: 0.0,
    z: 0.0,
};
pub const ONE: Quaternion = Quaternion {
    w: 1.0,
    x: 0.0,
    y: 0.0,
    z: 0.0,
};

impl Quaternion {
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    /// Pure quaternion from a 3-vector.
    pub fn pure(v: [f64; 3]) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    pub fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn inverse(self) -> Self {
        self.conj().scale(1.0 / self.norm_sq())
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn hamilton_table() {
        let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
        let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        let k = Quaternion::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, -ONE);
        assert_eq!(j * j, -ONE);
        assert_eq!(k * k, -ONE);
        assert_eq!(i * j * k, -ONE);
    }

    #[test]
    fn inverse_recovers_identity() {
        let q = Quaternion::new(0.3, -1.2, 0.7, 2.5);
        assert!(close(q * q.inverse(), ONE, 1e-14));
        assert!(close(q.inverse() * q, ONE, 1e-14));
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(
            a in proptest::array::uniform4(-10.0f64..10.0),
            b in proptest::array::uniform4(-10.0f64..10.0),
        ) {
            let p = Quaternion::new(a[0], a[1], a[2], a[3]);
            let q = Quaternion::new(b[0], b[1], b[2], b[3]);
            let lhs = (p * q).norm();
            let rhs = p.norm() * q.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs));
        }

        #[test]
        fn multiplication_is_associative(
            a in proptest::array::uniform4(-5.0f64..5.0),
            b in proptest::array::uniform4(-5.0f64..5.0),
            c in proptest::array::uniform4(-5.0f64..5.0),
        ) {
            let p = Quaternion::new(a[0], a[1], a[2], a[3]);
            let q = Quaternion::new(b[0], b[1], b[2], b[3]);
            let r = Quaternion::new(c[0], c[1], c[2], c[3]);
            prop_assert!(close((p * q) * r, p * (q * r), 1e-9));
        }

        #[test]
        fn conjugate_reverses_products(
            a in proptest::array::uniform4(-5.0f64..5.0),
            b in proptest::array::uniform4(-5.0f64..5.0),
        ) {
            let p = Quaternion::new(a[0], a[1], a[2], a[3]);
            let q = Quaternion::new(b[0], b[1], b[2], b[3]);
            prop_assert!(close((p * q).conj(), q.conj() * p.conj(), 1e-9));
        }
    }
}
