//! Möbius maps acting on the boundary sphere of hyperbolic 3-space.
//!
//! A [`MoebiusMap`] is a unimodular 2×2 complex matrix considered up to sign.
//! Its conformal derivative `1/(cz + d)²` carries both the expansion rate
//! (modulus) and the rotation (argument) that the coding turns into the
//! return-time and holonomy cocycles.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Tolerance on `|ad − bc − 1|` after every normalization.
pub const DET_TOL: f64 = 1e-12;
/// `|cz + d|` below this is treated as hitting the pole.
pub const POLE_TOL: f64 = 1e-14;

/// Reduce an angle to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Distance between two angles on the circle.
pub fn angle_distance(x: f64, y: f64) -> f64 {
    wrap_angle(x - y).abs()
}

fn finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Complex,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex, radius: f64) -> Result<Self> {
        if !finite(center) || !radius.is_finite() {
            return Err(Error::NonFinite("disk"));
        }
        if radius <= 0.0 {
            return Err(Error::InvalidDisk(format!("radius {radius} is not positive")));
        }
        Ok(Disk { center, radius })
    }

    pub fn contains(&self, z: Complex, slack: f64) -> bool {
        (z - self.center).norm() <= self.radius + slack
    }

    /// Euclidean gap between the two disks; negative when they overlap.
    pub fn gap(&self, other: &Disk) -> f64 {
        (self.center - other.center).norm() - self.radius - other.radius
    }

    pub fn boundary_point(&self, angle: f64) -> Complex {
        self.center + Complex::from_polar(self.radius, angle)
    }

    /// `n` equally spaced points on the boundary circle.
    pub fn boundary_samples(&self, n: usize) -> impl Iterator<Item = Complex> + '_ {
        (0..n).map(move |i| self.boundary_point(2.0 * PI * i as f64 / n as f64))
    }
}

/// Translation length and rotation angle of a loxodromic element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoxodromicData {
    pub translation_length: f64,
    pub rotation_angle: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct MoebiusMap {
    a: Complex,
    b: Complex,
    c: Complex,
    d: Complex,
}

impl MoebiusMap {
    /// Builds the map `z ↦ (az + b)/(cz + d)`, rescaling so that `ad − bc = 1`.
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Self> {
        if ![a, b, c, d].iter().all(|z| finite(*z)) {
            return Err(Error::NonFinite("matrix entries"));
        }
        let det = a * d - b * c;
        let scale = [a, b, c, d].iter().map(|z| z.norm()).fold(0.0, f64::max);
        if det.norm() <= f64::MIN_POSITIVE || det.norm() < 1e-28 * scale * scale {
            return Err(Error::Degenerate(det.norm()));
        }
        let s = det.sqrt();
        Ok(MoebiusMap { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub fn identity() -> Self {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        MoebiusMap { a: one, b: zero, c: zero, d: one }
    }

    /// `diag(μ, 1/μ)`, i.e. `z ↦ μ² z`.
    pub fn diagonal(mu: Complex) -> Result<Self> {
        Self::new(mu, Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), mu.inv())
    }

    /// The pairing map `z ↦ c₊ − r²/(z − c₋)`, which carries the circle
    /// `|z − c₋| = r` onto `|w − c₊| = r` and the outside of the first disk
    /// into the inside of the second.
    pub fn pairing(source: Complex, target: Complex, radius: f64) -> Result<Self> {
        let r2 = Complex::new(radius * radius, 0.0);
        Self::new(target, -target * source - r2, Complex::new(1.0, 0.0), -source)
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex {
        self.a + self.d
    }

    /// `self ∘ other`. Both factors have unit determinant, so the product
    /// does too; recomputing `ad − bc` from large entries would only add
    /// cancellation error.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `g m g⁻¹`.
    pub fn conjugate_by(&self, g: &MoebiusMap) -> MoebiusMap {
        g.compose(self).compose(&g.inverse())
    }

    /// Location of the pole `−d/c`, or `None` for affine maps.
    pub fn pole(&self) -> Option<Complex> {
        if self.c.norm() == 0.0 {
            None
        } else {
            Some(-self.d / self.c)
        }
    }

    fn denominator(&self, z: Complex) -> Result<Complex> {
        if !finite(z) {
            return Err(Error::NonFinite("point"));
        }
        let den = self.c * z + self.d;
        if den.norm() < POLE_TOL {
            return Err(Error::PoleAt(z));
        }
        Ok(den)
    }

    pub fn apply(&self, z: Complex) -> Result<Complex> {
        let den = self.denominator(z)?;
        Ok((self.a * z + self.b) / den)
    }

    /// Complex derivative `1/(cz + d)²`.
    pub fn derivative(&self, z: Complex) -> Result<Complex> {
        let den = self.denominator(z)?;
        Ok((den * den).inv())
    }

    /// Applies the map and returns the derivative at `z` in one pass.
    pub fn apply_with_derivative(&self, z: Complex) -> Result<(Complex, Complex)> {
        let den = self.denominator(z)?;
        let inv = den.inv();
        Ok(((self.a * z + self.b) * inv, inv * inv))
    }

    /// Fixed points, attracting first. Errors unless the map is loxodromic.
    pub fn fixed_points(&self) -> Result<(Complex, Complex)> {
        self.loxodromic_data()?;
        // c z² + (d − a) z − b = 0
        if self.c.norm() < 1e-300 {
            // affine: z ↦ (a z + b)/d, fixed points ∞ and b/(d − a)
            return Err(Error::InvalidArgument("fixed point at infinity".into()));
        }
        let disc = ((self.d - self.a) * (self.d - self.a) + 4.0 * self.b * self.c).sqrt();
        let z1 = (self.a - self.d + disc) / (2.0 * self.c);
        let z2 = (self.a - self.d - disc) / (2.0 * self.c);
        let d1 = self.derivative(z1)?.norm();
        let d2 = self.derivative(z2)?.norm();
        Ok(if d1 <= d2 { (z1, z2) } else { (z2, z1) })
    }

    pub fn attracting_fixed_point(&self) -> Result<Complex> {
        Ok(self.fixed_points()?.0)
    }

    /// Translation length `2 log|μ|` and rotation `2 arg μ` for the eigenvalue
    /// `|μ| > 1`.
    pub fn loxodromic_data(&self) -> Result<LoxodromicData> {
        let t = self.trace();
        let scale = t.norm().max(1.0);
        if t.im.abs() <= 1e-12 * scale && t.re.abs() <= 2.0 + 1e-12 {
            return Err(Error::NotLoxodromic(t));
        }
        let root = (t * t - 4.0).sqrt();
        let m1 = (t + root) / 2.0;
        let m2 = (t - root) / 2.0;
        let mu = if m1.norm() >= m2.norm() { m1 } else { m2 };
        if mu.norm() <= 1.0 {
            return Err(Error::NotLoxodromic(t));
        }
        Ok(LoxodromicData {
            translation_length: 2.0 * mu.norm().ln(),
            rotation_angle: wrap_angle(2.0 * mu.arg()),
        })
    }

    /// Image of a disk, as the circumcircle of three boundary images.
    pub fn image_disk(&self, disk: &Disk) -> Result<Disk> {
        if let Some(p) = self.pole() {
            let dist = (p - disk.center).norm();
            if (dist - disk.radius).abs() <= 1e-12 * disk.radius.max(1.0) {
                return Err(Error::PoleOnBoundary);
            }
            if dist < disk.radius {
                return Err(Error::PoleInside);
            }
        }
        let pts = [
            self.apply(disk.boundary_point(0.0))?,
            self.apply(disk.boundary_point(2.0 * PI / 3.0))?,
            self.apply(disk.boundary_point(4.0 * PI / 3.0))?,
        ];
        let image = circumcircle(pts[0], pts[1], pts[2])?;
        let mut worst = 0.0f64;
        for z in disk.boundary_samples(64) {
            let w = self.apply(z)?;
            worst = worst.max(((w - image.center).norm() - image.radius).abs());
        }
        if worst > 1e-8 * image.radius.max(1.0) {
            return Err(Error::InvalidDisk(format!(
                "boundary images miss the circumcircle by {worst:e}"
            )));
        }
        Ok(image)
    }

    /// True when, after removing a global phase, all four entries are real.
    pub fn is_real(&self) -> bool {
        let entries = self.entries();
        let pivot = entries
            .iter()
            .copied()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap();
        let phase = Complex::from_polar(1.0, -pivot.arg());
        entries.iter().all(|z| (z * phase).im.abs() <= 1e-12)
    }

    /// Equality as elements of PSL(2, ℂ).
    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        let x = self.entries();
        let y = other.entries();
        let same = x.iter().zip(&y).all(|(p, q)| (p - q).norm() <= tol);
        let flipped = x.iter().zip(&y).all(|(p, q)| (p + q).norm() <= tol);
        same || flipped
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

fn circumcircle(p: Complex, q: Complex, r: Complex) -> Result<Disk> {
    let (ax, ay) = (p.re, p.im);
    let (bx, by) = (q.re, q.im);
    let (cx, cy) = (r.re, r.im);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d.abs() < 1e-300 {
        return Err(Error::InvalidDisk("collinear boundary images".into()));
    }
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    let uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    let center = Complex::new(ux, uy);
    Disk::new(center, (p - center).norm())
}
