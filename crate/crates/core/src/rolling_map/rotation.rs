use std::ops::Mul;

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

pub type Vec3 = Vector3<f64>;

/// A rotation of 3-space stored as a unit quaternion `(w, x, y, z)`.
///
/// Products are renormalized after every composition. The sign of the
/// quaternion is preserved (not canonicalized) so that a family of
/// rotations depending continuously on a parameter stays continuous; use
/// [`Rotation::canonical`] for the `w ≥ 0` representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rotation {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Default for Rotation {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Rotation by `angle` (right-handed) about `axis`. A zero axis gives the identity.
    pub fn from_axis_angle(axis: &Vec3, angle: f64) -> Self {
        let n = axis.norm();
        if n == 0.0 {
            return Self::IDENTITY;
        }
        let (s, c) = (0.5 * angle).sin_cos();
        let k = s / n;
        Rotation {
            w: c,
            x: axis.x * k,
            y: axis.y * k,
            z: axis.z * k,
        }
        .normalized()
    }

    fn normalized(self) -> Self {
        let n = (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        Rotation {
            w: self.w / n,
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        }
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn vector(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn inverse(&self) -> Self {
        Rotation {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Representative with non-negative scalar part.
    pub fn canonical(&self) -> Self {
        if self.w < 0.0 {
            Rotation {
                w: -self.w,
                x: -self.x,
                y: -self.y,
                z: -self.z,
            }
        } else {
            *self
        }
    }

    /// Rotation angle in `[0, π]`, from the half-angle `atan2(|v|, |w|)`.
    pub fn angle(&self) -> f64 {
        2.0 * self.vector().norm().atan2(self.w.abs())
    }

    /// Unit rotation axis of the canonical representative; `None` for the identity.
    pub fn axis(&self) -> Option<Vec3> {
        let c = self.canonical();
        let v = c.vector();
        let n = v.norm();
        (n > 0.0).then(|| v / n)
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        let u = self.vector();
        let t = 2.0 * u.cross(v);
        v + self.w * t + u.cross(&t)
    }

    /// Distance of the quaternion from ±1; half the rotation angle for small angles.
    pub fn distance_to_identity(&self) -> f64 {
        let d_plus = ((self.w - 1.0).powi(2) + self.vector().norm_squared()).sqrt();
        let d_minus = ((self.w + 1.0).powi(2) + self.vector().norm_squared()).sqrt();
        d_plus.min(d_minus)
    }

    /// `self` composed with itself `n` times; `n = 0` is the identity.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::IDENTITY;
        let mut base = *self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = base * acc;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        Matrix3::new(
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        )
    }
}

/// `a * b` applies `b` first, then `a`.
impl Mul for Rotation {
    type Output = Rotation;

    fn mul(self, b: Rotation) -> Rotation {
        let a = self;
        Rotation {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        }
        .normalized()
    }
}
