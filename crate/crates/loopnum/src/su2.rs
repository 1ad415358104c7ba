//! SU(2) as unit quaternions and its Lie algebra as pure quaternions.
//!
//! In the fundamental representation a pure quaternion `v` is a traceless
//! anti-Hermitian matrix, and `tr(XY) = -2 x·y`, `tr(q) = 2 w`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Inputs closer than this to `-1` are rejected by `log`.
pub const ANTIPODE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        let (a, b) = (self.0, o.0);
        Vec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3(self.0.map(|x| x * s))
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// `det(a, b, c) = a · (b × c)`.
    pub fn det(a: Vec3, b: Vec3, c: Vec3) -> f64 {
        a.dot(b.cross(c))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        self + o.scale(-1.0)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self.scale(-1.0)
    }
}

/// Quaternion `w + v`. Unit quaternions are SU(2) elements; general ones appear
/// as derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quat {
    pub w: f64,
    pub v: Vec3,
}

impl Quat {
    pub const ONE: Quat = Quat {
        w: 1.0,
        v: Vec3::ZERO,
    };
    pub const ZERO: Quat = Quat {
        w: 0.0,
        v: Vec3::ZERO,
    };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat {
            w,
            v: Vec3([x, y, z]),
        }
    }

    pub fn pure(v: Vec3) -> Self {
        Quat { w: 0.0, v }
    }

    pub fn conj(self) -> Quat {
        Quat {
            w: self.w,
            v: -self.v,
        }
    }

    pub fn norm(self) -> f64 {
        (self.w * self.w + self.v.dot(self.v)).sqrt()
    }

    /// Inverse of a unit quaternion.
    pub fn inv(self) -> Quat {
        self.conj()
    }

    pub fn scale(self, s: f64) -> Quat {
        Quat {
            w: self.w * s,
            v: self.v.scale(s),
        }
    }

    /// Trace in the fundamental representation.
    pub fn trace(self) -> f64 {
        2.0 * self.w
    }

    pub fn is_unit(self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_NORM_TOL
    }

    /// `exp(v) = cos|v| + sin|v| v/|v|`.
    pub fn exp(v: Vec3) -> Quat {
        let th = v.norm();
        Quat {
            w: th.cos(),
            v: v.scale(sinc(th)),
        }
    }

    /// Principal logarithm; `None` near the antipode `-1`.
    pub fn log(self) -> Option<Vec3> {
        if self.w <= -1.0 + ANTIPODE_TOL {
            return None;
        }
        let s = self.v.norm();
        let th = s.atan2(self.w);
        Some(if s < 1e-300 {
            Vec3::ZERO
        } else {
            self.v.scale(th / s)
        })
    }

    pub fn dist(self, o: Quat) -> f64 {
        (self - o).norm()
    }
}

/// `sin(x)/x`, with its series near 0.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Derivative of `sinc`.
pub fn sinc_prime(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        -x / 3.0 + x * x * x / 30.0
    } else {
        (x * x.cos() - x.sin()) / (x * x)
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, o: Quat) -> Quat {
        Quat {
            w: self.w * o.w - self.v.dot(o.v),
            v: o.v.scale(self.w) + self.v.scale(o.w) + self.v.cross(o.v),
        }
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat {
            w: self.w + o.w,
            v: self.v + o.v,
        }
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        Quat {
            w: self.w - o.w,
            v: self.v - o.v,
        }
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        self.scale(-1.0)
    }
}

/// `tr(XY)` for algebra elements.
pub fn trace_pairing(x: Vec3, y: Vec3) -> f64 {
    -2.0 * x.dot(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_log_round_trip() {
        let v = Vec3::new(0.3, -1.1, 0.7);
        let q = Quat::exp(v);
        assert!(q.is_unit());
        let back = q.log().unwrap();
        assert!((back - v).norm() < 1e-12);
    }

    #[test]
    fn trace_of_product_matches_pairing() {
        let x = Vec3::new(1.0, 2.0, -0.5);
        let y = Vec3::new(-0.3, 0.4, 2.0);
        let tr = (Quat::pure(x) * Quat::pure(y)).trace();
        assert!((tr - trace_pairing(x, y)).abs() < 1e-14);
    }

    #[test]
    fn antipode_is_rejected() {
        assert!(Quat::new(-1.0, 0.0, 0.0, 0.0).log().is_none());
    }

    #[test]
    fn sinc_derivative_is_continuous() {
        for x in [9e-4, 1.1e-3] {
            let h = 1e-6;
            let fd = (sinc(x + h) - sinc(x - h)) / (2.0 * h);
            assert!((fd - sinc_prime(x)).abs() < 1e-8);
        }
    }
}
