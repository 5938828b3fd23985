//! Coordinates, free-space path loss, departure-angle sines and ULA responses.
//!
//! Angle convention for every x-aligned ULA: `sin(angle) = dx / distance`,
//! where `dx` is the x-displacement toward the far end of the link.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn with_z(self, z: f64) -> Vec3 {
        Vec3::new(self.x, self.y, z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dist(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    pub fn xy(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

/// Free-space gain `beta0 / |a - b|^2`, with `beta0` the gain at 1 m.
pub fn path_loss(beta0: f64, a: Vec3, b: Vec3) -> Result<f64> {
    let d = a.dist(b);
    if d == 0.0 || !d.is_finite() {
        return Err(Error::Domain("path loss needs distinct finite endpoints"));
    }
    Ok(beta0 / (d * d))
}

/// Sine of the departure angle from a RIS at `[q, h]` toward `target`.
pub fn sin_aod(q: Vec2, h: f64, target: Vec3) -> Result<f64> {
    sin_between(q.with_z(h), target)
}

/// Sine of the angle from `from` toward `to` measured off broadside of an x-aligned ULA.
pub fn sin_between(from: Vec3, to: Vec3) -> Result<f64> {
    let d = from.dist(to);
    if d == 0.0 || !d.is_finite() {
        return Err(Error::Domain("angle needs distinct finite endpoints"));
    }
    Ok(((to.x - from.x) / d).clamp(-1.0, 1.0))
}

/// ULA steering vector: entry `k` is `exp(-j 2 pi k spacing sin)`, `k = 0..count`.
pub fn array_response(count: usize, spacing_wavelengths: f64, sin_angle: f64) -> Vec<Complex64> {
    let step = -2.0 * PI * spacing_wavelengths * sin_angle;
    (0..count)
        .map(|k| Complex64::from_polar(1.0, step * k as f64))
        .collect()
}
