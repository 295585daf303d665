//! Oriented geodesics of the hyperbolic plane and Fermi coordinates.
//!
//! A geodesic is stored through its two ideal endpoints, kept as
//! homogeneous pairs so the boundary point at infinity needs no special
//! casing and the group acts linearly. Fermi frames provide
//! arclength/offset coordinates adapted to a geodesic, the translation
//! flow along it, and its perpendicular foliation.

use super::{translate_to, AlgebraElement, GroupElement, HPoint};
use crate::error::{Error, Result};
use crate::tol;
use serde::{Deserialize, Serialize};

/// Oriented complete geodesic, from the first ideal endpoint to the second.
///
/// Endpoints are homogeneous pairs `[p, q]` representing the boundary
/// point p/q, with `[1, 0]` the point at infinity.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Geodesic {
    e1: [f64; 2],
    e2: [f64; 2],
}

/// Normalizes a homogeneous boundary pair to unit length and canonical sign.
fn canon(e: [f64; 2]) -> Result<[f64; 2]> {
    let n = (e[0] * e[0] + e[1] * e[1]).sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidInput(format!(
            "degenerate homogeneous boundary pair [{}, {}]",
            e[0], e[1]
        )));
    }
    let mut v = [e[0] / n, e[1] / n];
    if v[1] < 0.0 || (v[1] == 0.0 && v[0] < 0.0) {
        v = [-v[0], -v[1]];
    }
    Ok(v)
}

/// Angle in [0, pi) parameterizing a canonical boundary pair.
fn boundary_angle(e: [f64; 2]) -> f64 {
    let th = f64::atan2(e[1], e[0]);
    if th >= std::f64::consts::PI - 1e-15 {
        0.0
    } else if th < 0.0 {
        th + std::f64::consts::PI
    } else {
        th
    }
}

/// Strict membership of angle `a` in the open cyclic arc from `lo` to `hi`.
fn in_open_arc(a: f64, lo: f64, hi: f64) -> bool {
    if lo < hi {
        lo < a && a < hi
    } else {
        a > lo || a < hi
    }
}

impl Geodesic {
    /// Geodesic through two homogeneous boundary points, oriented from the
    /// first to the second.
    pub fn from_homogeneous(e1: [f64; 2], e2: [f64; 2]) -> Result<Self> {
        let e1 = canon(e1)?;
        let e2 = canon(e2)?;
        if (e1[0] * e2[1] - e1[1] * e2[0]).abs() < 1e-14 {
            return Err(Error::SamePoint);
        }
        Ok(Geodesic { e1, e2 })
    }

    /// Geodesic between two real boundary values; use `f64::INFINITY` for
    /// the boundary point at infinity.
    pub fn from_endpoint_values(x1: f64, x2: f64) -> Result<Self> {
        let h = |x: f64| if x.is_infinite() { [1.0, 0.0] } else { [x, 1.0] };
        Geodesic::from_homogeneous(h(x1), h(x2))
    }

    /// Geodesic through two interior points, oriented from `p` to `q`.
    pub fn through_points(p: HPoint, q: HPoint) -> Result<Self> {
        if (p.x - q.x).abs() < 1e-13 * (1.0 + p.x.abs()) {
            return if (p.y - q.y).abs() < 1e-13 * p.y.max(q.y) {
                Err(Error::SamePoint)
            } else if q.y > p.y {
                Geodesic::from_endpoint_values(p.x, f64::INFINITY)
            } else {
                Geodesic::from_endpoint_values(f64::INFINITY, p.x)
            };
        }
        let m = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * (q.x - p.x));
        let r = ((p.x - m) * (p.x - m) + p.y * p.y).sqrt();
        if q.x > p.x {
            Geodesic::from_endpoint_values(m - r, m + r)
        } else {
            Geodesic::from_endpoint_values(m + r, m - r)
        }
    }

    /// Translation axis of a hyperbolic element, oriented from the
    /// repelling to the attracting fixed point.
    pub fn axis(g: &GroupElement) -> Result<Self> {
        let [[a, b], [c, d]] = g.matrix();
        let t = g.trace().abs();
        if t <= 2.0 + tol::CLASS_TOL {
            return Err(Error::NonHyperbolicBase(format!(
                "axis requires a hyperbolic element, got trace {t:.6}"
            )));
        }
        let root = (t * t / 4.0 - 1.0).sqrt();
        let fixed = |lam: f64| -> [f64; 2] {
            // Eigenvector from whichever row is better conditioned.
            let v1 = [b, lam - a];
            let v2 = [lam - d, c];
            if v1[0].abs() + v1[1].abs() >= v2[0].abs() + v2[1].abs() {
                v1
            } else {
                v2
            }
        };
        let attracting = fixed(t / 2.0 + root);
        let repelling = fixed(t / 2.0 - root);
        Geodesic::from_homogeneous(repelling, attracting)
    }

    /// Homogeneous endpoint pairs, first then second.
    pub fn endpoints(&self) -> [[f64; 2]; 2] {
        [self.e1, self.e2]
    }

    /// Endpoint boundary values p/q; infinite for the point at infinity.
    pub fn endpoint_values(&self) -> [f64; 2] {
        let v = |e: [f64; 2]| {
            if e[1].abs() < 1e-15 {
                f64::INFINITY
            } else {
                e[0] / e[1]
            }
        };
        [v(self.e1), v(self.e2)]
    }

    /// Same geodesic with the opposite orientation.
    pub fn reversed(&self) -> Geodesic {
        Geodesic { e1: self.e2, e2: self.e1 }
    }

    /// Image geodesic under an isometry.
    pub fn apply(&self, g: &GroupElement) -> Geodesic {
        let m = g.matrix();
        let act = |e: [f64; 2]| {
            canon([
                m[0][0] * e[0] + m[0][1] * e[1],
                m[1][0] * e[0] + m[1][1] * e[1],
            ])
            .expect("isometry keeps boundary pairs non-degenerate")
        };
        Geodesic { e1: act(self.e1), e2: act(self.e2) }
    }

    /// Equality as oriented geodesics, comparing endpoints projectively.
    pub fn approx_eq(&self, other: &Geodesic, tol: f64) -> bool {
        let close = |a: [f64; 2], b: [f64; 2]| {
            let plus = (a[0] - b[0]).abs().max((a[1] - b[1]).abs());
            let minus = (a[0] + b[0]).abs().max((a[1] + b[1]).abs());
            plus.min(minus) <= tol
        };
        close(self.e1, other.e1) && close(self.e2, other.e2)
    }

    /// Whether the two geodesics intersect transversally in the interior,
    /// i.e. their endpoint pairs strictly interleave on the boundary circle.
    pub fn crosses(&self, other: &Geodesic) -> bool {
        let a1 = boundary_angle(self.e1);
        let a2 = boundary_angle(self.e2);
        let b1 = boundary_angle(other.e1);
        let b2 = boundary_angle(other.e2);
        // Strict interleaving: one endpoint in each open complementary arc.
        // A shared endpoint lies in neither open arc and never counts.
        (in_open_arc(b1, a1, a2) && in_open_arc(b2, a2, a1))
            || (in_open_arc(b2, a1, a2) && in_open_arc(b1, a2, a1))
    }

    /// Whether the two geodesics have a common ideal endpoint.
    pub fn shares_endpoint(&self, other: &Geodesic, tol: f64) -> bool {
        let close = |a: [f64; 2], b: [f64; 2]| {
            (a[0] * b[1] - a[1] * b[0]).abs() <= tol
        };
        close(self.e1, other.e1)
            || close(self.e1, other.e2)
            || close(self.e2, other.e1)
            || close(self.e2, other.e2)
    }

    /// Isometry taking this geodesic to the upward vertical axis, first
    /// endpoint to 0 and second to infinity.
    pub fn to_axis_map(&self) -> GroupElement {
        let mut m = [
            [self.e1[1], -self.e1[0]],
            [self.e2[1], -self.e2[0]],
        ];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det < 0.0 {
            m[1][0] = -m[1][0];
            m[1][1] = -m[1][1];
        }
        GroupElement::new(m).expect("distinct endpoints give an invertible map")
    }

    /// Signed offset of a point: its distance to the geodesic, positive on
    /// the right of the orientation.
    pub fn signed_offset(&self, p: HPoint) -> f64 {
        let z = self.to_axis_map().apply(p);
        (z.x / z.y).asinh()
    }

    /// Distance from a point to the geodesic.
    pub fn distance_to_point(&self, p: HPoint) -> f64 {
        self.signed_offset(p).abs()
    }

    /// Orthogonal projection of a point onto the geodesic.
    pub fn foot_of(&self, p: HPoint) -> HPoint {
        let m = self.to_axis_map();
        let z = m.apply(p);
        let r = (z.x * z.x + z.y * z.y).sqrt();
        m.inverse().apply(HPoint { x: 0.0, y: r })
    }

    /// Hyperbolic translation by signed length `s` along the geodesic, in
    /// the direction of its orientation.
    pub fn translation_along(&self, s: f64) -> GroupElement {
        FermiFrame::new(self).translation(s)
    }

    /// Distance between two geodesics: zero when they cross or share an
    /// endpoint, otherwise the length of the common perpendicular.
    pub fn distance_between(a: &Geodesic, b: &Geodesic) -> f64 {
        match common_perpendicular(a, b) {
            Ok(perp) => perp.distance,
            Err(_) => 0.0,
        }
    }
}

/// Common perpendicular of two disjoint geodesics, with its feet.
#[derive(Debug, Clone, Copy)]
pub struct Perpendicular {
    /// The perpendicular geodesic, oriented from the first input's foot to
    /// the second input's foot.
    pub geodesic: Geodesic,
    /// Foot on the first input.
    pub foot_first: HPoint,
    /// Foot on the second input.
    pub foot_second: HPoint,
    /// Distance between the two inputs along the perpendicular.
    pub distance: f64,
}

/// Computes the common perpendicular of two disjoint geodesics.
///
/// Fails when the geodesics cross or are asymptotic, since no common
/// perpendicular exists there.
pub fn common_perpendicular(a: &Geodesic, b: &Geodesic) -> Result<Perpendicular> {
    if a.shares_endpoint(b, 1e-12) {
        return Err(Error::InvalidInput(
            "geodesics share an ideal endpoint; no common perpendicular".into(),
        ));
    }
    if a.crosses(b) {
        return Err(Error::InvalidInput(
            "geodesics cross; no common perpendicular".into(),
        ));
    }
    let m = a.to_axis_map();
    let minv = m.inverse();
    let bm = b.apply(&m);
    let [u, v] = bm.endpoint_values();
    debug_assert!(u.is_finite() && v.is_finite() && u * v > 0.0);
    let r = (u * v).sqrt();
    let foot_first = minv.apply(HPoint { x: 0.0, y: r });
    let x = 2.0 * u * v / (u + v);
    let y = (u * v - x * x).max(0.0).sqrt();
    let foot_second = minv.apply(HPoint { x, y });
    let (lo, hi) = (u.abs().min(v.abs()), u.abs().max(v.abs()));
    let distance = ((hi + lo) / (hi - lo)).acosh();
    Ok(Perpendicular {
        geodesic: Geodesic::through_points(foot_first, foot_second)?,
        foot_first,
        foot_second,
        distance,
    })
}

/// Coordinate frame adapted to a geodesic: `s` is arclength along it, `t`
/// the signed offset, positive to the right of the orientation.
#[derive(Debug, Clone, Copy)]
pub struct FermiFrame {
    to_axis: GroupElement,
    from_axis: GroupElement,
}

impl FermiFrame {
    /// Frame with a canonical (endpoint-determined) arclength origin.
    pub fn new(g: &Geodesic) -> Self {
        let to_axis = g.to_axis_map();
        FermiFrame { to_axis, from_axis: to_axis.inverse() }
    }

    /// Frame whose arclength origin is the foot of `p` on the geodesic.
    pub fn centered_at(g: &Geodesic, p: HPoint) -> Self {
        let m = g.to_axis_map();
        let z = m.apply(p);
        let r = (z.x * z.x + z.y * z.y).sqrt();
        let shift = GroupElement::new([[1.0 / r.sqrt(), 0.0], [0.0, r.sqrt()]])
            .expect("positive diagonal matrix");
        let to_axis = shift * m;
        FermiFrame { to_axis, from_axis: to_axis.inverse() }
    }

    /// Coordinates (s, t) of a point.
    pub fn coords(&self, p: HPoint) -> (f64, f64) {
        let z = self.to_axis.apply(p);
        let s = (z.x * z.x + z.y * z.y).sqrt().ln();
        let t = (z.x / z.y).asinh();
        (s, t)
    }

    /// Point with coordinates (s, t).
    pub fn point(&self, s: f64, t: f64) -> HPoint {
        let e = s.exp();
        self.from_axis.apply(HPoint { x: e * t.tanh(), y: e / t.cosh() })
    }

    /// Point on the geodesic at arclength s.
    pub fn geodesic_point(&self, s: f64) -> HPoint {
        self.point(s, 0.0)
    }

    /// Translation by signed arclength s along the geodesic.
    pub fn translation(&self, s: f64) -> GroupElement {
        let d = GroupElement::new([[(s / 2.0).exp(), 0.0], [0.0, (-s / 2.0).exp()]])
            .expect("positive diagonal matrix");
        self.from_axis * d * self.to_axis
    }

    /// The perpendicular geodesic leaf at arclength s, oriented from its
    /// endpoint on the t < 0 side to its endpoint on the t > 0 side; the
    /// forward region of the base geodesic (larger s) lies on its left.
    pub fn perpendicular_at(&self, s: f64) -> Geodesic {
        let e = s.exp();
        Geodesic::from_endpoint_values(-e, e)
            .expect("distinct endpoints")
            .apply(&self.from_axis)
    }

    /// Isometry mapping the basepoint i to the point (s, t) with the
    /// geodesic direction as horizontal reference.
    pub fn chart_map(&self, s: f64, t: f64) -> GroupElement {
        self.from_axis * translate_to(self.to_axis.apply(self.point(s, t)))
    }

    /// Generator of unit-speed translation along the base geodesic: its
    /// exponential at time s equals `translation(s)`.
    pub fn translation_generator(&self) -> AlgebraElement {
        self.from_axis.adjoint(&AlgebraElement::new(0.5, 0.0, 0.0))
    }
}

/// Closed half-plane: the right side (positive offset) of its oriented wall.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HalfPlane {
    /// Boundary geodesic; the half-plane is on its right.
    pub wall: Geodesic,
}

impl HalfPlane {
    pub fn right_of(wall: Geodesic) -> Self {
        HalfPlane { wall }
    }

    /// Signed distance to the wall, positive inside the half-plane.
    pub fn signed_distance(&self, p: HPoint) -> f64 {
        self.wall.signed_offset(p)
    }

    /// Membership with a tolerance: nonnegative signed distance up to `slack`.
    pub fn contains(&self, p: HPoint, slack: f64) -> bool {
        self.signed_distance(p) >= -slack
    }

    /// Image half-plane under an isometry.
    pub fn apply(&self, g: &GroupElement) -> HalfPlane {
        HalfPlane { wall: self.wall.apply(g) }
    }

    /// The complementary (open) side, as a closed half-plane.
    pub fn flipped(&self) -> HalfPlane {
        HalfPlane { wall: self.wall.reversed() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::hyp_dist;
    use proptest::prelude::*;

    fn elem(m: [[f64; 2]; 2]) -> GroupElement {
        GroupElement::new(m).unwrap()
    }

    #[test]
    fn vertical_geodesic_through_stacked_points() {
        let g = Geodesic::through_points(HPoint::I, HPoint { x: 0.0, y: 3.0 }).unwrap();
        let [a, b] = g.endpoint_values();
        assert_eq!(a, 0.0);
        assert!(b.is_infinite());
    }

    #[test]
    fn axis_of_diagonal_element_is_vertical() {
        let g = elem([[2.0, 0.0], [0.0, 0.5]]);
        let ax = Geodesic::axis(&g).unwrap();
        let [r, a] = ax.endpoint_values();
        assert_eq!(r, 0.0);
        assert!(a.is_infinite());
    }

    #[test]
    fn axis_of_symmetric_element_is_unit_circle() {
        let m = 0.8_f64;
        let g = elem([[m.cosh(), m.sinh()], [m.sinh(), m.cosh()]]);
        let ax = Geodesic::axis(&g).unwrap();
        let [r, a] = ax.endpoint_values();
        assert!((r + 1.0).abs() < 1e-12, "repelling endpoint at -1, got {r}");
        assert!((a - 1.0).abs() < 1e-12, "attracting endpoint at +1, got {a}");
    }

    #[test]
    fn axis_requires_hyperbolic() {
        let r = elem([[0.9_f64.cos(), -0.9_f64.sin()], [0.9_f64.sin(), 0.9_f64.cos()]]);
        assert!(matches!(Geodesic::axis(&r), Err(Error::NonHyperbolicBase(_))));
    }

    #[test]
    fn crossing_detection() {
        let vertical = Geodesic::from_endpoint_values(0.0, f64::INFINITY).unwrap();
        let unit = Geodesic::from_endpoint_values(-1.0, 1.0).unwrap();
        let far = Geodesic::from_endpoint_values(2.0, 3.0).unwrap();
        assert!(vertical.crosses(&unit));
        assert!(unit.crosses(&vertical));
        assert!(!vertical.crosses(&far));
        assert!(!unit.crosses(&far));
        // Shared endpoint is not a transversal crossing.
        let asym = Geodesic::from_endpoint_values(1.0, 5.0).unwrap();
        assert!(!unit.crosses(&asym));
        assert!(unit.shares_endpoint(&asym, 1e-12));
    }

    #[test]
    fn signed_offset_orientation() {
        let vertical = Geodesic::from_endpoint_values(0.0, f64::INFINITY).unwrap();
        // Travelling upward, the right side is x > 0.
        assert!(vertical.signed_offset(HPoint { x: 1.0, y: 1.0 }) > 0.0);
        assert!(vertical.signed_offset(HPoint { x: -1.0, y: 1.0 }) < 0.0);
        let d = vertical.distance_to_point(HPoint { x: 1.0, y: 1.0 });
        assert!((d - 1.0_f64.asinh()).abs() < 1e-12);
        assert!(vertical.reversed().signed_offset(HPoint { x: 1.0, y: 1.0 }) < 0.0);
    }

    #[test]
    fn common_perpendicular_of_axis_and_semicircle() {
        let vertical = Geodesic::from_endpoint_values(0.0, f64::INFINITY).unwrap();
        let other = Geodesic::from_endpoint_values(1.0, 4.0).unwrap();
        let perp = common_perpendicular(&vertical, &other).unwrap();
        assert!(hyp_dist(perp.foot_first, HPoint { x: 0.0, y: 2.0 }) < 1e-10);
        assert!(hyp_dist(perp.foot_second, HPoint { x: 1.6, y: 1.2 }) < 1e-10);
        assert!((perp.distance - (5.0_f64 / 3.0).acosh()).abs() < 1e-12);
        // The perpendicular meets both inputs at right angles, so its feet
        // realize the distance between the geodesics.
        assert!((hyp_dist(perp.foot_first, perp.foot_second) - perp.distance).abs() < 1e-10);
        assert!(perp.geodesic.crosses(&vertical) && perp.geodesic.crosses(&other));
    }

    #[test]
    fn common_perpendicular_rejects_crossing_inputs() {
        let vertical = Geodesic::from_endpoint_values(0.0, f64::INFINITY).unwrap();
        let unit = Geodesic::from_endpoint_values(-1.0, 1.0).unwrap();
        assert!(common_perpendicular(&vertical, &unit).is_err());
    }

    #[test]
    fn fermi_round_trip() {
        let g = Geodesic::from_endpoint_values(-2.0, 5.0).unwrap();
        let frame = FermiFrame::new(&g);
        for &(s, t) in &[(0.0, 0.0), (1.2, -0.7), (-2.0, 1.5), (0.3, 0.01)] {
            let p = frame.point(s, t);
            let (s2, t2) = frame.coords(p);
            assert!((s - s2).abs() < 1e-10 && (t - t2).abs() < 1e-10);
        }
    }

    #[test]
    fn fermi_offset_matches_signed_offset() {
        let g = Geodesic::from_endpoint_values(-2.0, 5.0).unwrap();
        let frame = FermiFrame::new(&g);
        let p = HPoint { x: 3.0, y: 0.5 };
        let (_, t) = frame.coords(p);
        assert!((t - g.signed_offset(p)).abs() < 1e-12);
    }

    #[test]
    fn centered_frame_puts_origin_at_foot() {
        let g = Geodesic::from_endpoint_values(-1.0, 1.0).unwrap();
        let p = HPoint { x: 0.3, y: 2.0 };
        let frame = FermiFrame::centered_at(&g, p);
        let (s, _) = frame.coords(p);
        assert!(s.abs() < 1e-12);
        assert!(hyp_dist(frame.geodesic_point(0.0), g.foot_of(p)) < 1e-10);
    }

    #[test]
    fn translation_moves_along_geodesic() {
        let g = Geodesic::from_endpoint_values(-1.0, 1.0).unwrap();
        let frame = FermiFrame::new(&g);
        let tr = frame.translation(0.9);
        let p = frame.geodesic_point(0.2);
        let q = tr.apply(p);
        let (s, t) = frame.coords(q);
        assert!((s - 1.1).abs() < 1e-10);
        assert!(t.abs() < 1e-10);
        assert!((tr.translation_length() - 0.9).abs() < 1e-10);
    }

    #[test]
    fn perpendicular_leaf_meets_geodesic_orthogonally() {
        let g = Geodesic::from_endpoint_values(-3.0, 0.5).unwrap();
        let frame = FermiFrame::new(&g);
        let perp = frame.perpendicular_at(0.7);
        assert!(perp.crosses(&g));
        assert!(perp.distance_to_point(frame.geodesic_point(0.7)) < 1e-10);
        // The leaf is the constant-arclength curve, so points with the same
        // s lie on it; points further along the base geodesic sit on its left.
        let p = frame.point(0.7, 0.4);
        assert!((perp.signed_offset(p) - 0.0).abs() < 1e-9);
        let ahead = frame.point(1.5, 0.0);
        assert!(perp.signed_offset(ahead) < 0.0);
    }

    #[test]
    fn half_plane_membership() {
        let wall = Geodesic::from_endpoint_values(0.0, f64::INFINITY).unwrap();
        let h = HalfPlane::right_of(wall);
        assert!(h.contains(HPoint { x: 2.0, y: 1.0 }, 0.0));
        assert!(!h.contains(HPoint { x: -2.0, y: 1.0 }, 0.0));
        assert!(h.flipped().contains(HPoint { x: -2.0, y: 1.0 }, 0.0));
    }

    fn matrix_strategy() -> impl Strategy<Value = [[f64; 2]; 2]> {
        let entry = -2.0..2.0_f64;
        [
            [entry.clone(), entry.clone()],
            [entry.clone(), entry],
        ]
        .prop_filter("positive determinant", |m| {
            m[0][0] * m[1][1] - m[0][1] * m[1][0] > 0.05
        })
    }

    proptest! {
        #[test]
        fn signed_offset_is_equivariant(m in matrix_strategy(), x in -3.0..3.0_f64, y in 0.1..3.0_f64) {
            let g = elem(m);
            let geo = Geodesic::from_endpoint_values(-1.0, 2.0).unwrap();
            let p = HPoint { x, y };
            let lhs = geo.apply(&g).signed_offset(g.apply(p));
            let rhs = geo.signed_offset(p);
            prop_assert!((lhs - rhs).abs() < 1e-8);
        }

        #[test]
        fn perpendicular_distance_is_equivariant(m in matrix_strategy()) {
            let g = elem(m);
            let a = Geodesic::from_endpoint_values(0.0, 1.0).unwrap();
            let b = Geodesic::from_endpoint_values(3.0, f64::INFINITY).unwrap();
            let d0 = common_perpendicular(&a, &b).unwrap().distance;
            let d1 = common_perpendicular(&a.apply(&g), &b.apply(&g)).unwrap().distance;
            prop_assert!((d0 - d1).abs() < 1e-8);
        }

        #[test]
        fn foot_minimizes_distance(x in -3.0..3.0_f64, y in 0.1..3.0_f64, s in -2.0..2.0_f64) {
            let geo = Geodesic::from_endpoint_values(-1.5, 0.5).unwrap();
            let p = HPoint { x, y };
            let foot = geo.foot_of(p);
            let frame = FermiFrame::new(&geo);
            let other = frame.geodesic_point(s);
            prop_assert!(hyp_dist(p, foot) <= hyp_dist(p, other) + 1e-9);
        }
    }
}
