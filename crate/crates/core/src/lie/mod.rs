//! The group PSL(2,R), its Lie algebra psl(2,R), and the hyperbolic plane.
//!
//! Group elements are stored as determinant-one matrices with a fixed sign
//! convention, so projective equality becomes entry-wise comparison. Algebra
//! elements are traceless matrices. Points of the hyperbolic plane live in
//! the upper half-plane chart and the group acts by Moebius transformations.

pub mod geodesic;

use crate::error::{Error, Result};
use crate::tol;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Small complex-arithmetic helper for Moebius differentials.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Cx {
    pub re: f64,
    pub im: f64,
}

impl Cx {
    pub fn new(re: f64, im: f64) -> Self {
        Cx { re, im }
    }

    pub fn mul(self, o: Cx) -> Cx {
        Cx::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }

    pub fn conj(self) -> Cx {
        Cx::new(self.re, -self.im)
    }

    pub fn norm_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn div(self, o: Cx) -> Cx {
        let d = o.norm_sq();
        let n = self.mul(o.conj());
        Cx::new(n.re / d, n.im / d)
    }
}

/// Point of the upper half-plane (y > 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    /// Basepoint i of the half-plane.
    pub const I: HPoint = HPoint { x: 0.0, y: 1.0 };

    /// Validating constructor.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidInput(format!(
                "half-plane point needs finite coordinates with y > 0, got ({x}, {y})"
            )));
        }
        Ok(HPoint { x, y })
    }

}

impl Serialize for HPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(s)
    }
}

impl<'de> Deserialize<'de> for HPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[f64; 2]>::deserialize(d)?;
        HPoint::new(x, y).map_err(D::Error::custom)
    }
}

/// Hyperbolic distance in the upper half-plane.
///
/// Uses the asinh form, which is stable for nearby points.
pub fn hyp_dist(p: HPoint, q: HPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let r = ((dx * dx + dy * dy) / (4.0 * p.y * q.y)).sqrt();
    2.0 * r.asinh()
}

/// Tangent vector at a half-plane point, in chart components.
#[derive(Debug, Clone, Copy)]
pub struct TangentVector {
    pub base: HPoint,
    pub vx: f64,
    pub vy: f64,
}

impl TangentVector {
    pub fn new(base: HPoint, vx: f64, vy: f64) -> Self {
        TangentVector { base, vx, vy }
    }

    /// Hyperbolic norm at the base point.
    pub fn norm(&self) -> f64 {
        (self.vx * self.vx + self.vy * self.vy).sqrt() / self.base.y
    }

    /// Hyperbolic inner product with another vector at the same base point.
    pub fn inner(&self, other: &TangentVector) -> f64 {
        (self.vx * other.vx + self.vy * other.vy) / (self.base.y * self.base.y)
    }

    pub fn scale(&self, s: f64) -> TangentVector {
        TangentVector::new(self.base, s * self.vx, s * self.vy)
    }

    pub fn add(&self, other: &TangentVector) -> TangentVector {
        TangentVector::new(self.base, self.vx + other.vx, self.vy + other.vy)
    }

    pub fn sub(&self, other: &TangentVector) -> TangentVector {
        TangentVector::new(self.base, self.vx - other.vx, self.vy - other.vy)
    }
}

/// Conjugacy class of an isometry of the hyperbolic plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl std::fmt::Display for IsometryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            IsometryClass::Identity => "identity",
            IsometryClass::Elliptic => "elliptic",
            IsometryClass::Parabolic => "parabolic",
            IsometryClass::Hyperbolic => "hyperbolic",
        };
        f.write_str(s)
    }
}

/// Element of PSL(2,R), stored as a normalized determinant-one matrix.
///
/// Normalization: determinant one, trace >= 0; for trace zero the sign is
/// fixed by c > 0, and by b > 0 if c also vanishes. Equality of group
/// elements is projective equality of the underlying matrices.
#[derive(Debug, Clone, Copy)]
pub struct GroupElement {
    m: [[f64; 2]; 2],
}

impl GroupElement {
    /// Identity element.
    pub const IDENTITY: GroupElement = GroupElement {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    /// Builds an element from a matrix with positive determinant.
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self> {
        for row in &m {
            for v in row {
                if !v.is_finite() {
                    return Err(Error::InvalidInput("non-finite matrix entry".into()));
                }
            }
        }
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !(det > 0.0) {
            return Err(Error::NonPositiveDeterminant(det));
        }
        let s = det.sqrt();
        let mut g = GroupElement {
            m: [[m[0][0] / s, m[0][1] / s], [m[1][0] / s, m[1][1] / s]],
        };
        g.fix_sign();
        debug_assert!((g.det() - 1.0).abs() <= 1e4 * tol::DET_TOL);
        Ok(g)
    }

    fn fix_sign(&mut self) {
        let tr = self.m[0][0] + self.m[1][1];
        let flip = if tr.abs() > tol::CLASS_TOL {
            tr < 0.0
        } else if self.m[1][0].abs() > tol::CLASS_TOL {
            self.m[1][0] < 0.0
        } else {
            self.m[0][1] < 0.0
        };
        if flip {
            for row in &mut self.m {
                for v in row.iter_mut() {
                    *v = -*v;
                }
            }
        }
    }

    /// Matrix entries of the normalized representative.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Group inverse.
    pub fn inverse(&self) -> GroupElement {
        let mut g = GroupElement {
            m: [
                [self.m[1][1], -self.m[0][1]],
                [-self.m[1][0], self.m[0][0]],
            ],
        };
        g.fix_sign();
        g
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, n: i32) -> GroupElement {
        if n == 0 {
            return GroupElement::IDENTITY;
        }
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut k = n.unsigned_abs();
        let mut acc = GroupElement::IDENTITY;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// Projective equality within an absolute tolerance.
    pub fn approx_eq(&self, other: &GroupElement, tol: f64) -> bool {
        let mut d_plus: f64 = 0.0;
        let mut d_minus: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d_plus = d_plus.max((self.m[i][j] - other.m[i][j]).abs());
                d_minus = d_minus.max((self.m[i][j] + other.m[i][j]).abs());
            }
        }
        d_plus.min(d_minus) <= tol
    }

    pub fn is_identity(&self) -> bool {
        self.approx_eq(&GroupElement::IDENTITY, tol::CLASS_TOL)
    }

    /// Moebius action on the upper half-plane.
    pub fn apply(&self, p: HPoint) -> HPoint {
        let [[a, b], [c, d]] = self.m;
        let cxd = c * p.x + d;
        let cy = c * p.y;
        let den = cxd * cxd + cy * cy;
        let x = ((a * p.x + b) * cxd + a * c * p.y * p.y) / den;
        let y = p.y / den;
        HPoint { x, y }
    }

    /// Pushforward of a tangent vector under the Moebius action.
    pub fn push(&self, v: &TangentVector) -> TangentVector {
        let [[_, _], [c, d]] = self.m;
        let den = Cx::new(c * v.base.x + d, c * v.base.y);
        // Derivative of the Moebius map: 1/(cz+d)^2.
        let deriv = Cx::new(1.0, 0.0).div(den.mul(den));
        let w = deriv.mul(Cx::new(v.vx, v.vy));
        TangentVector::new(self.apply(v.base), w.re, w.im)
    }

    /// Conjugacy classification by trace.
    pub fn classify(&self) -> IsometryClass {
        if self.is_identity() {
            return IsometryClass::Identity;
        }
        let t = self.trace().abs() / 2.0;
        if (t - 1.0).abs() <= tol::CLASS_TOL {
            IsometryClass::Parabolic
        } else if t > 1.0 {
            IsometryClass::Hyperbolic
        } else {
            IsometryClass::Elliptic
        }
    }

    /// Translation length: 2 arccosh(|tr|/2) for hyperbolic elements, else 0.
    pub fn translation_length(&self) -> f64 {
        if self.classify() == IsometryClass::Hyperbolic {
            2.0 * (self.trace().abs() / 2.0).acosh()
        } else {
            0.0
        }
    }

    /// Displacement of the basepoint: d(i, g.i).
    pub fn mu(&self) -> f64 {
        hyp_dist(HPoint::I, self.apply(HPoint::I))
    }

    /// Principal logarithm.
    ///
    /// Fails with `NoPrincipalLog` for trace-zero elements, whose two lifts
    /// are rotations by +pi and -pi around the same point.
    pub fn principal_log(&self) -> Result<AlgebraElement> {
        let t = self.trace() / 2.0;
        if t.abs() <= tol::CLASS_TOL {
            return Err(Error::NoPrincipalLog);
        }
        // exp(X) = c0(q) Id + c1(q) X with q = -det X, so X = (g - t Id)/c1.
        let c1 = if (t - 1.0).abs() <= tol::SERIES_EPS * tol::SERIES_EPS {
            1.0
        } else if t > 1.0 {
            let s = t.acosh();
            s.sinh() / s
        } else {
            let s = t.acos();
            s.sin() / s
        };
        Ok(AlgebraElement::new(
            (self.m[0][0] - t) / c1,
            self.m[0][1] / c1,
            self.m[1][0] / c1,
        ))
    }

    /// Adjoint action on the Lie algebra: X -> g X g^{-1}.
    pub fn adjoint(&self, x: &AlgebraElement) -> AlgebraElement {
        let g = self.m;
        let inv = [[g[1][1], -g[0][1]], [-g[1][0], g[0][0]]];
        let xm = x.matrix();
        let mut gx = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                gx[i][j] = g[i][0] * xm[0][j] + g[i][1] * xm[1][j];
            }
        }
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = gx[i][0] * inv[0][j] + gx[i][1] * inv[1][j];
            }
        }
        // The conjugate of a traceless matrix is traceless; rebuild to purge
        // floating-point trace drift.
        AlgebraElement::new((out[0][0] - out[1][1]) / 2.0, out[0][1], out[1][0])
    }
}

impl std::ops::Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        let a = self.m;
        let b = rhs.m;
        let mut m = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        // No determinant renormalization here: the factors have determinant
        // one, so the product does too, up to entrywise rounding. Recomputing
        // the determinant of a product with large entries cancels
        // catastrophically and must not feed back into the entries.
        let mut g = GroupElement { m };
        g.fix_sign();
        g
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = <[[f64; 2]; 2]>::deserialize(d)?;
        GroupElement::new(m).map_err(D::Error::custom)
    }
}

/// Element of psl(2,R): a traceless 2x2 matrix [[a, b], [c, -a]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraElement {
    a: f64,
    b: f64,
    c: f64,
}

impl AlgebraElement {
    pub const ZERO: AlgebraElement = AlgebraElement { a: 0.0, b: 0.0, c: 0.0 };

    /// Infinitesimal rotation fixing the basepoint i.
    pub const ROTATION: AlgebraElement = AlgebraElement { a: 0.0, b: -1.0, c: 1.0 };

    pub fn new(a: f64, b: f64, c: f64) -> Self {
        AlgebraElement { a, b, c }
    }

    /// Builds from a full matrix, which must be traceless.
    pub fn from_matrix(m: [[f64; 2]; 2]) -> Result<Self> {
        let scale = m.iter().flatten().fold(1.0_f64, |s, v| s.max(v.abs()));
        if (m[0][0] + m[1][1]).abs() > 1e-9 * scale {
            return Err(Error::InvalidInput(format!(
                "algebra element must be traceless, got trace {}",
                m[0][0] + m[1][1]
            )));
        }
        Ok(AlgebraElement::new((m[0][0] - m[1][1]) / 2.0, m[0][1], m[1][0]))
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, -self.a]]
    }

    pub fn det(&self) -> f64 {
        -self.a * self.a - self.b * self.c
    }

    /// Largest absolute entry; a cheap scale measure.
    pub fn sup_norm(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    pub fn approx_eq(&self, other: &AlgebraElement, tol: f64) -> bool {
        (self.a - other.a).abs() <= tol
            && (self.b - other.b).abs() <= tol
            && (self.c - other.c).abs() <= tol
    }

    /// Exponential map to the group.
    ///
    /// With q = -det X the closed form is cosh(sqrt q) Id + sinhc(sqrt q) X,
    /// valid for both signs of q; a power series takes over for small q.
    pub fn exp(&self) -> GroupElement {
        let q = -self.det();
        let (c0, c1) = exp_coeffs(q);
        let m = [
            [c0 + c1 * self.a, c1 * self.b],
            [c1 * self.c, c0 - c1 * self.a],
        ];
        // det(exp X) = exp(tr X) = 1, so this cannot fail.
        GroupElement::new(m).expect("exponential of a traceless matrix has determinant one")
    }

    /// Value of the Killing vector field of X at a half-plane point.
    ///
    /// In the complex chart the field is z -> -c z^2 + 2 a z + b.
    pub fn eval_at(&self, p: HPoint) -> TangentVector {
        let (x, y) = (p.x, p.y);
        let vx = -self.c * (x * x - y * y) + 2.0 * self.a * x + self.b;
        let vy = 2.0 * y * (self.a - self.c * x);
        TangentVector::new(p, vx, vy)
    }
}

/// Coefficients (cosh-like, sinhc-like) of the exponential at q = -det X.
fn exp_coeffs(q: f64) -> (f64, f64) {
    if q.abs() < tol::SERIES_EPS * tol::SERIES_EPS {
        let c0 = 1.0 + q / 2.0 + q * q / 24.0 + q * q * q / 720.0;
        let c1 = 1.0 + q / 6.0 + q * q / 120.0 + q * q * q / 5040.0;
        (c0, c1)
    } else if q > 0.0 {
        let s = q.sqrt();
        (s.cosh(), s.sinh() / s)
    } else {
        let s = (-q).sqrt();
        (s.cos(), s.sin() / s)
    }
}

impl std::ops::Add for AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c)
    }
}

impl std::ops::Sub for AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c)
    }
}

impl std::ops::Neg for AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        AlgebraElement::new(-self.a, -self.b, -self.c)
    }
}

impl std::ops::Mul<f64> for AlgebraElement {
    type Output = AlgebraElement;

    fn mul(self, s: f64) -> AlgebraElement {
        AlgebraElement::new(s * self.a, s * self.b, s * self.c)
    }
}

impl std::fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            self.a, self.b, self.c, -self.a
        )
    }
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = <[[f64; 2]; 2]>::deserialize(d)?;
        AlgebraElement::from_matrix(m).map_err(D::Error::custom)
    }
}

/// Isometry moving the basepoint i to p (horizontal shift and scaling).
pub(crate) fn translate_to(p: HPoint) -> GroupElement {
    let s = p.y.sqrt();
    GroupElement::new([[s, p.x / s], [0.0, 1.0 / s]])
        .expect("upper-triangular translation matrix has determinant one")
}

/// Unit tangent vector at i pointing toward z, for z != i.
fn direction_at_i(z: HPoint) -> (f64, f64) {
    if z.x.abs() < 1e-14 {
        (0.0, if z.y >= 1.0 { 1.0 } else { -1.0 })
    } else {
        // Geodesic through i and z: semicircle centered at (m, 0).
        let m = (z.x * z.x + z.y * z.y - 1.0) / (2.0 * z.x);
        let n = (1.0 + m * m).sqrt();
        let sign = z.x.signum();
        (sign / n, sign * m / n)
    }
}

/// Riemannian exponential: the point at distance |v| along the geodesic
/// issued from the base of v in its direction.
pub fn hyp_exp(v: &TangentVector) -> HPoint {
    let t = v.norm();
    if t < 1e-300 {
        return v.base;
    }
    let p = v.base;
    // Pull the vector back to the basepoint i. There the flow factors as a
    // rotation fixing i followed by the vertical flow z -> e^t z, which
    // stays accurate for large t where a generic matrix exponential would
    // cancel catastrophically.
    let (ux, uy) = (v.vx / (p.y * t), v.vy / (p.y * t));
    let alpha = f64::atan2(ux, uy) / 2.0;
    let rot = GroupElement::new([[alpha.cos(), -alpha.sin()], [alpha.sin(), alpha.cos()]])
        .expect("rotation matrix has determinant one");
    (translate_to(p) * rot).apply(HPoint { x: 0.0, y: t.exp() })
}

/// Riemannian logarithm: the vector at p whose exponential is q.
pub fn hyp_log(p: HPoint, q: HPoint) -> TangentVector {
    let t = translate_to(p);
    let z = t.inverse().apply(q);
    let d = hyp_dist(HPoint::I, z);
    let (ux, uy) = direction_at_i(z);
    // The differential of translate_to at i scales by y.
    TangentVector::new(p, d * ux * p.y, d * uy * p.y)
}

/// Point at parameter t along the geodesic from p to q (t = 1 gives q).
pub fn hyp_interp(p: HPoint, q: HPoint, t: f64) -> HPoint {
    let v = hyp_log(p, q);
    hyp_exp(&v.scale(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EPS: f64 = 1e-12;

    fn elem(m: [[f64; 2]; 2]) -> GroupElement {
        GroupElement::new(m).unwrap()
    }

    /// Twenty-term power series for exp, used as an independent oracle.
    fn exp_series(x: &AlgebraElement) -> [[f64; 2]; 2] {
        let xm = x.matrix();
        let mut acc = [[1.0, 0.0], [0.0, 1.0]];
        let mut term = [[1.0, 0.0], [0.0, 1.0]];
        for k in 1..=20 {
            let mut next = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    next[i][j] = (term[i][0] * xm[0][j] + term[i][1] * xm[1][j]) / k as f64;
                }
            }
            term = next;
            for i in 0..2 {
                for j in 0..2 {
                    acc[i][j] += term[i][j];
                }
            }
        }
        acc
    }

    #[test]
    fn normalization_fixes_scale_and_sign() {
        let g = elem([[-2.0, 0.0], [0.0, -2.0]]);
        assert!(g.approx_eq(&GroupElement::IDENTITY, EPS));
        let h = elem([[0.0, 3.0], [-3.0, 0.0]]);
        // Trace zero: representative must have c > 0.
        assert!(h.matrix()[1][0] > 0.0);
        assert!((h.det() - 1.0).abs() < EPS);
    }

    #[test]
    fn moebius_action_matches_hand_computation() {
        let g = elem([[1.0, 1.0], [0.0, 1.0]]);
        let p = g.apply(HPoint::I);
        assert!((p.x - 1.0).abs() < EPS && (p.y - 1.0).abs() < EPS);

        let r = elem([[0.0, -1.0], [1.0, 0.0]]);
        let q = r.apply(HPoint { x: 0.0, y: 2.0 });
        // z -> -1/z maps 2i to i/2.
        assert!((q.x).abs() < EPS && (q.y - 0.5).abs() < EPS);
    }

    #[test]
    fn distance_examples() {
        let d = hyp_dist(HPoint::I, HPoint { x: 0.0, y: std::f64::consts::E.powi(2) });
        assert!((d - 2.0).abs() < 1e-12);
        assert_eq!(hyp_dist(HPoint::I, HPoint::I), 0.0);
    }

    /// Independent arc-length oracle: Simpson quadrature of |dz|/y along the
    /// circular geodesic arc through the two points.
    fn dist_by_quadrature(p: HPoint, q: HPoint) -> f64 {
        if (p.x - q.x).abs() < 1e-12 {
            return (p.y / q.y).ln().abs();
        }
        let c = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * (q.x - p.x));
        let t0 = f64::atan2(p.y, p.x - c);
        let t1 = f64::atan2(q.y, q.x - c);
        // Arc length of ds = |dz|/y with z = c + r e^{it}: integrand r/(r sin t) = 1/sin t.
        let n = 20_000;
        let h = (t1 - t0) / n as f64;
        let f = |t: f64| 1.0 / t.sin();
        let mut s = f(t0) + f(t1);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(t0 + h * k as f64);
        }
        (s * h / 3.0).abs()
    }

    #[test]
    fn distance_matches_quadrature_oracle() {
        let pts = [
            (HPoint { x: 0.3, y: 1.0 }, HPoint { x: -1.2, y: 2.5 }),
            (HPoint { x: 2.0, y: 0.2 }, HPoint { x: -0.5, y: 0.7 }),
            (HPoint { x: 0.0, y: 1.0 }, HPoint { x: 4.0, y: 1.0 }),
        ];
        for (p, q) in pts {
            assert!((hyp_dist(p, q) - dist_by_quadrature(p, q)).abs() < 1e-8);
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(elem([[2.0, 0.0], [0.0, 0.5]]).classify(), IsometryClass::Hyperbolic);
        assert_eq!(elem([[1.0, 0.0], [1.0, 1.0]]).classify(), IsometryClass::Parabolic);
        assert_eq!(elem([[1.0, 1.0], [0.0, 1.0]]).classify(), IsometryClass::Parabolic);
        let th = 0.4_f64;
        let rot = elem([[th.cos(), -th.sin()], [th.sin(), th.cos()]]);
        assert_eq!(rot.classify(), IsometryClass::Elliptic);
        assert_eq!(GroupElement::IDENTITY.classify(), IsometryClass::Identity);
    }

    #[test]
    fn translation_length_examples() {
        let g = elem([[2.0, 0.0], [0.0, 0.5]]);
        assert!((g.translation_length() - 2.0 * 2.0_f64.ln()).abs() < 1e-12);
        assert_eq!(elem([[1.0, 1.0], [0.0, 1.0]]).translation_length(), 0.0);
    }

    #[test]
    fn mu_example() {
        let e = std::f64::consts::E;
        let g = elem([[e, 0.0], [0.0, 1.0 / e]]);
        assert!((g.mu() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mu_over_n_approaches_translation_length() {
        let g = elem([[1.9, 0.3], [0.4, 0.7]]);
        let lam = g.translation_length();
        let n = 64;
        assert!((g.pow(n).mu() / n as f64 - lam).abs() < 0.1);
    }

    #[test]
    fn exp_matches_series_oracle() {
        let samples = [
            AlgebraElement::new(1.0, 0.0, 0.0),
            AlgebraElement::new(0.0, -1.0, 1.0),
            AlgebraElement::new(0.3, 0.7, -0.2),
            AlgebraElement::new(0.0, 1.0, 0.0),
            AlgebraElement::new(1e-6, -2e-6, 3e-6),
        ];
        for x in samples {
            let expected = GroupElement::new(exp_series(&x)).unwrap();
            assert!(x.exp().approx_eq(&expected, 1e-12), "exp mismatch for {x}");
        }
    }

    #[test]
    fn exp_of_rotation_generator() {
        let x = AlgebraElement::ROTATION * (std::f64::consts::PI / 4.0);
        let g = x.exp();
        let c = (std::f64::consts::PI / 4.0).cos();
        let s = (std::f64::consts::PI / 4.0).sin();
        assert!(g.approx_eq(&elem([[c, -s], [s, c]]), 1e-12));
    }

    #[test]
    fn log_of_trace_zero_fails() {
        let r = elem([[0.0, -1.0], [1.0, 0.0]]);
        assert!(matches!(r.principal_log(), Err(Error::NoPrincipalLog)));
    }

    #[test]
    fn log_exp_round_trip() {
        let g = elem([[1.8, 0.2], [0.3, 0.6]]);
        let x = g.principal_log().unwrap();
        assert!(x.exp().approx_eq(&g, 1e-9));
        let p = elem([[1.0, 0.0], [2.5, 1.0]]);
        assert!(p.principal_log().unwrap().exp().approx_eq(&p, 1e-9));
    }

    #[test]
    fn killing_field_vanishes_at_fixed_point() {
        let k = AlgebraElement::ROTATION;
        let v = k.eval_at(HPoint::I);
        assert!(v.norm() < EPS);
        let x = AlgebraElement::new(1.0, 0.0, 0.0);
        let v = x.eval_at(HPoint::I);
        assert!((v.vx).abs() < EPS && (v.vy - 2.0).abs() < EPS);
    }

    #[test]
    fn killing_field_matches_flow_derivative() {
        let x = AlgebraElement::new(0.4, -0.3, 0.8);
        let p = HPoint { x: 0.7, y: 1.9 };
        let h = 1e-6;
        let plus = (x * h).exp().apply(p);
        let minus = (x * (-h)).exp().apply(p);
        let v = x.eval_at(p);
        assert!(((plus.x - minus.x) / (2.0 * h) - v.vx).abs() < 1e-6);
        assert!(((plus.y - minus.y) / (2.0 * h) - v.vy).abs() < 1e-6);
    }

    #[test]
    fn adjoint_matches_matrix_conjugation() {
        let g = elem([[1.4, 0.3], [0.2, 0.9]]);
        let x = AlgebraElement::new(0.5, -1.0, 2.0);
        let ad = g.adjoint(&x);
        // Conjugating the flow must match the flow of the conjugated field.
        let lhs = g * x.exp() * g.inverse();
        assert!(lhs.approx_eq(&ad.exp(), 1e-10));
    }

    #[test]
    fn exp_log_vector_round_trip() {
        let p = HPoint { x: -0.4, y: 2.2 };
        let q = HPoint { x: 1.7, y: 0.5 };
        let v = hyp_log(p, q);
        assert!((v.norm() - hyp_dist(p, q)).abs() < 1e-10);
        let q2 = hyp_exp(&v);
        assert!(hyp_dist(q, q2) < 1e-9);
    }

    #[test]
    fn interpolation_endpoints_and_midpoint() {
        let p = HPoint { x: 0.0, y: 1.0 };
        let q = HPoint { x: 3.0, y: 0.4 };
        assert!(hyp_dist(hyp_interp(p, q, 0.0), p) < 1e-10);
        assert!(hyp_dist(hyp_interp(p, q, 1.0), q) < 1e-9);
        let m = hyp_interp(p, q, 0.5);
        assert!((hyp_dist(p, m) - hyp_dist(m, q)).abs() < 1e-9);
        assert!((hyp_dist(p, m) + hyp_dist(m, q) - hyp_dist(p, q)).abs() < 1e-9);
    }

    fn matrix_strategy() -> impl Strategy<Value = [[f64; 2]; 2]> {
        let entry = -3.0..3.0_f64;
        [
            [entry.clone(), entry.clone()],
            [entry.clone(), entry],
        ]
        .prop_filter("positive determinant", |m| {
            m[0][0] * m[1][1] - m[0][1] * m[1][0] > 0.05
        })
    }

    fn point_strategy() -> impl Strategy<Value = HPoint> {
        (-5.0..5.0_f64, 0.05..5.0_f64).prop_map(|(x, y)| HPoint { x, y })
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(m in matrix_strategy()) {
            let g = elem(m);
            prop_assert!((g * g.inverse()).approx_eq(&GroupElement::IDENTITY, 1e-9));
        }

        #[test]
        fn action_is_by_homomorphism(m in matrix_strategy(), n in matrix_strategy(), p in point_strategy()) {
            let g = elem(m);
            let h = elem(n);
            let lhs = (g * h).apply(p);
            let rhs = g.apply(h.apply(p));
            prop_assert!(hyp_dist(lhs, rhs) < 1e-7);
        }

        #[test]
        fn action_preserves_distance(m in matrix_strategy(), p in point_strategy(), q in point_strategy()) {
            let g = elem(m);
            let d0 = hyp_dist(p, q);
            let d1 = hyp_dist(g.apply(p), g.apply(q));
            prop_assert!((d0 - d1).abs() < 1e-8 * (1.0 + d0));
        }

        #[test]
        fn exp_log_round_trip_random(m in matrix_strategy()) {
            let g = elem(m);
            if g.trace().abs() > 1e-3 {
                let x = g.principal_log().unwrap();
                prop_assert!(x.exp().approx_eq(&g, 1e-8));
            }
        }

        #[test]
        fn pushforward_preserves_norm(m in matrix_strategy(), p in point_strategy()) {
            let g = elem(m);
            let v = TangentVector::new(p, 0.3, -0.8);
            let w = g.push(&v);
            prop_assert!((v.norm() - w.norm()).abs() < 1e-8 * (1.0 + v.norm()));
        }

        #[test]
        fn riemannian_exp_travels_requested_distance(p in point_strategy(), vx in -2.0..2.0_f64, vy in -2.0..2.0_f64) {
            prop_assume!(vx.abs() + vy.abs() > 1e-3);
            let v = TangentVector::new(p, vx, vy);
            let q = hyp_exp(&v);
            prop_assert!((hyp_dist(p, q) - v.norm()).abs() < 1e-8);
        }
    }
}
