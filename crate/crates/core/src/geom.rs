//! Floating-point predicates shared by every construction in the crate.
//!
//! The empty region of a segment `ab` is always treated as open: a point that
//! sees `ab` under an angle equal to the threshold does not block the edge.
//! Angle comparisons allow [`ANGLE_TOL`] of slack in that direction, so a
//! configuration that is exactly on the boundary (the far corners of a square
//! for the Gabriel graph, say) resolves to "not blocking" even after rounding.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul, Sub};

use crate::error::{invalid, Error, Result};

/// Absolute slack, in radians, applied to every angle comparison.
pub const ANGLE_TOL: f64 = 1e-9;

/// Two points closer than this are considered the same point.
pub const COINCIDENCE_TOL: f64 = 1e-12;

/// A point in the plane with finite coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    x: f64,
    y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(Error::NonFinite { x, y })
        }
    }

    #[inline]
    pub fn x(self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(self) -> f64 {
        self.y
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    #[inline]
    pub fn dist_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn midpoint(self, other: Point) -> Point {
        Point {
            x: 0.5 * (self.x + other.x),
            y: 0.5 * (self.y + other.y),
        }
    }

    #[inline]
    pub fn coincides(self, other: Point) -> bool {
        self.dist(other) <= COINCIDENCE_TOL
    }

    #[inline]
    pub(crate) fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub(crate) fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Rotates about the origin by `angle` radians.
    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
        }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
        }
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point {
            x: self.x - rhs.x,
            y: self.y - rhs.y,
        }
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, rhs: Point) -> Point {
        Point {
            x: self * rhs.x,
            y: self * rhs.y,
        }
    }
}

impl TryFrom<(f64, f64)> for Point {
    type Error = Error;
    fn try_from((x, y): (f64, f64)) -> Result<Self> {
        Point::new(x, y)
    }
}

/// Interior angle `a`-`apex`-`b` in `[0, π]`.
///
/// Uses `atan2(|cross|, dot)`, which stays accurate near `0` and `π` where
/// `acos` of a normalized dot product loses most of its digits.
pub fn angle_at(apex: Point, a: Point, b: Point) -> Result<f64> {
    if apex.coincides(a) || apex.coincides(b) {
        return Err(Error::DegenerateAngle);
    }
    let u = a - apex;
    let v = b - apex;
    Ok(u.cross(v).abs().atan2(u.dot(v)))
}

/// Whether an observed angle is large enough to block a segment.
#[inline]
pub fn exceeds_threshold(angle: f64, threshold: f64) -> bool {
    angle > threshold + ANGLE_TOL
}

/// The skeleton parameter together with the angle a witness must exceed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleParams {
    beta: f64,
    theta_threshold: f64,
}

impl AngleParams {
    pub fn new(beta: f64) -> Result<Self> {
        Ok(AngleParams {
            beta,
            theta_threshold: angle_threshold(beta)?,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta_threshold(&self) -> f64 {
        self.theta_threshold
    }

    pub fn blocks(&self, angle: f64) -> bool {
        exceeds_threshold(angle, self.theta_threshold)
    }
}

/// `asin(1/β)` for `β > 1`, `π - asin(β)` for `0 < β <= 1`.
pub fn angle_threshold(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta > 1.0 {
        Ok((1.0 / beta).asin())
    } else {
        Ok(PI - beta.asin())
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(invalid("beta", beta, "must be finite and > 0"))
    }
}

/// Whether `p` lies strictly inside the empty region of segment `ab`.
///
/// * `β > 1`: union of the two circles of diameter `β·|ab|` through `a` and `b`.
/// * `β = 1`: the open disk with diameter `ab`.
/// * `β < 1`: intersection of the two circles of diameter `|ab|/β` through `a` and `b`.
///
/// Points within roughly `ANGLE_TOL·|ab|` of the boundary count as outside,
/// matching the slack used by the angle predicate.
pub fn region_contains(a: Point, b: Point, beta: f64, p: Point) -> Result<bool> {
    check_beta(beta)?;
    if a.coincides(b) {
        return Err(Error::DegenerateSegment);
    }
    let d = a.dist(b);
    let half = 0.5 * d;
    let axis = (1.0 / d) * (b - a);
    let rel = p - a.midpoint(b);
    let along = rel.dot(axis);
    let across = axis.cross(rel).abs();
    let slack = ANGLE_TOL * d * d;

    let inside = if beta == 1.0 {
        along * along + across * across < half * half - slack
    } else if beta > 1.0 {
        // Nearer circle center sits on the same side of ab as p.
        let radius = beta * half;
        let offset = half * (beta * beta - 1.0).sqrt();
        let dv = across - offset;
        along * along + dv * dv < radius * radius - slack
    } else {
        // The lens is bounded by the circle whose center is on the far side.
        let radius = half / beta;
        let offset = half * (1.0 / (beta * beta) - 1.0).sqrt();
        let dv = across + offset;
        along * along + dv * dv < radius * radius - slack
    };
    Ok(inside)
}

/// Radius of a disk around the midpoint of `ab` that contains the whole
/// empty region for `beta`. Used as a cheap prefilter.
pub(crate) fn region_bounding_radius(d: f64, beta: f64) -> f64 {
    let half = 0.5 * d;
    if beta > 1.0 {
        half * (beta + (beta * beta - 1.0).sqrt())
    } else {
        half
    }
}

/// Closed quadrilateral symmetric about segment `ab`, with interior angle
/// `apex_angle` at both `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diamond {
    endpoint_a: Point,
    endpoint_b: Point,
    apex_angle: f64,
}

impl Diamond {
    pub fn new(endpoint_a: Point, endpoint_b: Point, apex_angle: f64) -> Result<Self> {
        if endpoint_a.coincides(endpoint_b) {
            return Err(Error::DegenerateSegment);
        }
        if !(apex_angle > 0.0 && apex_angle < PI) {
            return Err(invalid("apex_angle", apex_angle, "must lie in (0, π)"));
        }
        Ok(Diamond {
            endpoint_a,
            endpoint_b,
            apex_angle,
        })
    }

    pub fn endpoint_a(&self) -> Point {
        self.endpoint_a
    }

    pub fn endpoint_b(&self) -> Point {
        self.endpoint_b
    }

    pub fn apex_angle(&self) -> f64 {
        self.apex_angle
    }

    /// Corners in order `a`, left apex, `b`, right apex.
    pub fn corners(&self) -> [Point; 4] {
        let (a, b) = (self.endpoint_a, self.endpoint_b);
        let m = a.midpoint(b);
        let height = 0.5 * a.dist(b) * (0.5 * self.apex_angle).tan();
        let normal = (height / a.dist(b)) * (b - a).rotated(FRAC_PI_2);
        [a, m + normal, b, m - normal]
    }

    /// Closed containment; boundary points (within `1e-9·|ab|`) are inside.
    pub fn contains(&self, p: Point) -> bool {
        let (a, b) = (self.endpoint_a, self.endpoint_b);
        let d = a.dist(b);
        let axis = (1.0 / d) * (b - a);
        let rel = p - a;
        let along = rel.dot(axis);
        let across = axis.cross(rel).abs();
        let tol = 1e-9 * d;
        if along < -tol || along > d + tol {
            return false;
        }
        let reach = along.min(d - along).max(0.0);
        across <= reach * (0.5 * self.apex_angle).tan() + tol
    }
}
