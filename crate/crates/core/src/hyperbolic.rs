//! The hyperbolic plane in affine-group coordinates: a point is the pair
//! (t, s) with the group element a(t)n(s) carrying the base point i to
//! z = s·e^{2t} + i·e^{2t} in the upper half-plane (curvature −1 metric).
//! Also the rank-one quasi-path construction toward a boundary point.

use serde::{Deserialize, Serialize};

/// A point of ℍ², stored as affine coordinates (t, s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    pub t: f64,
    pub s: f64,
}

impl HyperbolicPoint {
    pub fn base() -> Self {
        HyperbolicPoint { t: 0.0, s: 0.0 }
    }

    /// Upper half-plane coordinates (x, y) with z = x + iy, y > 0.
    pub fn half_plane(&self) -> (f64, f64) {
        let y = (2.0 * self.t).exp();
        (self.s * y, y)
    }

    /// The point with the given half-plane coordinates.
    pub fn from_half_plane(x: f64, y: f64) -> Self {
        assert!(y > 0.0, "not an upper half-plane point");
        HyperbolicPoint {
            t: 0.5 * y.ln(),
            s: x / y,
        }
    }

    /// Group composition: (t₁,s₁)∘(t₂,s₂) = (t₁+t₂, s₂ + s₁e^{−2t₂}).
    pub fn compose(&self, other: &HyperbolicPoint) -> HyperbolicPoint {
        HyperbolicPoint {
            t: self.t + other.t,
            s: other.s + self.s * (-2.0 * other.t).exp(),
        }
    }

    pub fn inverse(&self) -> HyperbolicPoint {
        HyperbolicPoint {
            t: -self.t,
            s: -self.s * (2.0 * self.t).exp(),
        }
    }

    /// The isometry of this group element applied to a half-plane point:
    /// z ↦ e^{2t}·z + s·e^{2t}.
    pub fn act(&self, z: (f64, f64)) -> (f64, f64) {
        let e2t = (2.0 * self.t).exp();
        (e2t * (z.0 + self.s), e2t * z.1)
    }

    /// The point at hyperbolic distance `d` from `self`, in the direction
    /// making angle `theta` with the upward vertical at `self` (exact
    /// construction: rotate the vertical geodesic about i, then translate).
    pub fn at_distance(&self, d: f64, theta: f64) -> HyperbolicPoint {
        // Rotation about i by angle theta (Möbius with cos/sin of theta/2):
        // w = (c·z + s)/(−s·z + c), applied to z = e^d i.
        let (c, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let ed = d.exp();
        // (c·(i e^d) + sn) / (−sn·(i e^d) + c), complex division.
        let (nx, ny) = (sn, c * ed);
        let (dx, dy) = (c, -sn * ed);
        let den = dx * dx + dy * dy;
        let w = ((nx * dx + ny * dy) / den, (ny * dx - nx * dy) / den);
        let z = self.act(w);
        HyperbolicPoint::from_half_plane(z.0, z.1)
    }
}

/// Curvature −1 distance: d = arccosh(1 + |z_a − z_b|² / (2 y_a y_b)).
pub fn hyperbolic_distance(a: &HyperbolicPoint, b: &HyperbolicPoint) -> f64 {
    let (xa, ya) = a.half_plane();
    let (xb, yb) = b.half_plane();
    // arccosh(1 + u) = ln(1 + u + sqrt(u² + 2u)) computed via asinh for
    // accuracy at small separations.
    let u = ((xa - xb).powi(2) + (ya - yb).powi(2)) / (2.0 * ya * yb);
    (u + (u * (u + 2.0)).sqrt()).ln_1p()
}

/// Busemann function of the boundary point ∞, normalized at the base
/// point: b_∞(z) = −ln(Im z).
pub fn busemann_infinity(p: &HyperbolicPoint) -> f64 {
    -2.0 * p.t
}

/// A quasi-path from `a` to `b` relative to the boundary
/// direction ∞: ascend from the lower point to the Busemann level of the
/// higher one, flow both endpoints toward ∞ by the horospherical distance
/// between them, and connect across the top.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiPath {
    /// Segment endpoints x, x″, y″, y (x is the lower endpoint).
    pub points: Vec<HyperbolicPoint>,
    pub length: f64,
    /// Geodesic distance between the endpoints.
    pub geodesic: f64,
    /// max(0, length − 3·geodesic), the measured additive defect.
    pub delta: f64,
    /// Whether the inputs were swapped to meet the Busemann orientation.
    pub swapped: bool,
}

/// Construct the four-point path x → x″ → y″ → y with η = ∞.
pub fn rank_one_quasi_path(a: &HyperbolicPoint, b: &HyperbolicPoint) -> QuasiPath {
    let swapped = busemann_infinity(a) < busemann_infinity(b);
    let (x, y) = if swapped { (*b, *a) } else { (*a, *b) };
    let (xx, _xy) = x.half_plane();
    let (yx, yy) = y.half_plane();
    // x′ on [x, ∞) at the Busemann level of y.
    let xp = HyperbolicPoint::from_half_plane(xx, yy);
    let big_d = hyperbolic_distance(&xp, &y);
    // Flowing toward ∞ by distance D multiplies the height by e^D.
    let top = yy * big_d.exp();
    let xpp = HyperbolicPoint::from_half_plane(xx, top);
    let ypp = HyperbolicPoint::from_half_plane(yx, top);
    let length = hyperbolic_distance(&x, &xpp)
        + hyperbolic_distance(&xpp, &ypp)
        + hyperbolic_distance(&ypp, &y);
    let geodesic = hyperbolic_distance(&x, &y);
    QuasiPath {
        points: vec![x, xpp, ypp, y],
        length,
        geodesic,
        delta: (length - 3.0 * geodesic).max(0.0),
        swapped,
    }
}
