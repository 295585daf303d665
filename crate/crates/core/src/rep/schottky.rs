//! Discrete free holonomies certified by ping-pong.
//!
//! The certificates store, for every generator and its inverse, a closed
//! half-plane target. When the 2k half-planes are pairwise disjoint and
//! each generator maps the complement of its inverse's target into its own
//! target, the represented group is free and acts properly discontinuously;
//! the complement of all targets is a convex fundamental domain, and any
//! point folds into it by a finite word. Holonomies of the three-holed
//! sphere and the one-holed torus are built here with prescribed boundary
//! lengths and exact Fermi-shift certificates.

use super::{Representation, Word};
use crate::error::{Error, Result};
use crate::lie::geodesic::{common_perpendicular, FermiFrame, Geodesic, HalfPlane};
use crate::lie::{GroupElement, HPoint};
use crate::tol;

/// Result of comparing two half-planes: disjoint with a separation margin,
/// equal as sets, or overlapping.
enum HalfPlaneRelation {
    Disjoint(f64),
    Equal,
    Overlapping,
}

/// Classifies the relative position of two closed half-planes.
fn relate_half_planes(h1: &HalfPlane, h2: &HalfPlane) -> HalfPlaneRelation {
    let w1 = &h1.wall;
    let w2 = &h2.wall;
    if w1.approx_eq(w2, 1e-9) {
        return HalfPlaneRelation::Equal;
    }
    if w1.approx_eq(&w2.reversed(), 1e-9) {
        // Same wall, opposite sides: closed half-planes overlap in the wall
        // only. Treat as disjoint interiors with zero margin.
        return HalfPlaneRelation::Disjoint(0.0);
    }
    if w1.crosses(w2) {
        return HalfPlaneRelation::Overlapping;
    }
    if w1.shares_endpoint(w2, 1e-12) {
        // Asymptotic walls: disjoint when each wall lies outside the other
        // half-plane; the separation margin is zero.
        let p1 = FermiFrame::new(w1).geodesic_point(0.0);
        let p2 = FermiFrame::new(w2).geodesic_point(0.0);
        return if h1.signed_distance(p2) < 0.0 && h2.signed_distance(p1) < 0.0 {
            HalfPlaneRelation::Disjoint(0.0)
        } else {
            HalfPlaneRelation::Overlapping
        };
    }
    match common_perpendicular(w1, w2) {
        Ok(perp) => {
            if h1.signed_distance(perp.foot_second) < 0.0
                && h2.signed_distance(perp.foot_first) < 0.0
            {
                HalfPlaneRelation::Disjoint(perp.distance)
            } else {
                HalfPlaneRelation::Overlapping
            }
        }
        Err(_) => HalfPlaneRelation::Overlapping,
    }
}

/// Ping-pong certificate: per generator, the targets of the generator and
/// of its inverse, validated on construction.
#[derive(Debug, Clone)]
pub struct PingPongCertificate {
    plus: Vec<HalfPlane>,
    minus: Vec<HalfPlane>,
    /// Least separation between distinct target half-planes.
    separation: f64,
}

impl PingPongCertificate {
    /// Validates the ping-pong data for a representation.
    ///
    /// `plus[i]` must be the target of generator i, `minus[i]` the target
    /// of its inverse. Checks that distinct targets are pairwise disjoint
    /// and that each generator maps the complement of its inverse target
    /// into its own target.
    pub fn verify(
        rep: &Representation,
        plus: Vec<HalfPlane>,
        minus: Vec<HalfPlane>,
    ) -> Result<Self> {
        let k = rep.rank();
        if plus.len() != k || minus.len() != k {
            return Err(Error::InvalidInput(format!(
                "need one target pair per generator: rank {k}, got {} plus and {} minus",
                plus.len(),
                minus.len()
            )));
        }
        if k == 0 {
            return Err(Error::InvalidInput("rank-zero representation".into()));
        }
        let all: Vec<&HalfPlane> = plus.iter().chain(minus.iter()).collect();
        let mut separation = f64::INFINITY;
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                match relate_half_planes(all[i], all[j]) {
                    HalfPlaneRelation::Disjoint(m) => separation = separation.min(m),
                    _ => {
                        return Err(Error::NotPingPong(format!(
                            "targets {i} and {j} are not disjoint"
                        )));
                    }
                }
            }
        }
        // Mapping property: g_i . complement(minus[i]) inside plus[i], i.e.
        // the image half-plane is disjoint from the complement of plus[i]
        // (or coincides with plus[i] exactly).
        for i in 0..k {
            let g = rep.generator(i)?;
            for (source, target, label) in [
                (&minus[i], &plus[i], "generator"),
                (&plus[i], &minus[i], "inverse"),
            ] {
                let image = source.flipped().apply(
                    &(if label == "generator" { g } else { g.inverse() }),
                );
                match relate_half_planes(&image, &target.flipped()) {
                    HalfPlaneRelation::Disjoint(_) | HalfPlaneRelation::Equal => {}
                    HalfPlaneRelation::Overlapping => {
                        return Err(Error::NotPingPong(format!(
                            "{label} {i} does not map the complement of its \
                             source target into its target"
                        )));
                    }
                }
            }
        }
        Ok(PingPongCertificate { plus, minus, separation })
    }

    pub fn rank(&self) -> usize {
        self.plus.len()
    }

    /// Least separation between distinct target half-planes.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Target half-plane of a signed letter.
    pub fn target(&self, letter: i32) -> Result<&HalfPlane> {
        let idx = (letter.unsigned_abs() as usize)
            .checked_sub(1)
            .ok_or(Error::InvalidInput("letter 0 has no target".into()))?;
        if idx >= self.plus.len() {
            return Err(Error::BadIndex { index: idx, rank: self.plus.len() });
        }
        Ok(if letter > 0 { &self.plus[idx] } else { &self.minus[idx] })
    }

    /// Whether a point lies in the closed fundamental domain, i.e. in no
    /// open target half-plane (with `slack` loosening the walls).
    pub fn in_fundamental_domain(&self, p: HPoint, slack: f64) -> bool {
        self.plus
            .iter()
            .chain(self.minus.iter())
            .all(|h| h.signed_distance(p) <= slack)
    }

    /// Folds a point into the closed fundamental domain.
    ///
    /// Returns the word w and the domain point x0 with rho(w) x0 = p.
    pub fn fold(&self, rep: &Representation, p: HPoint) -> Result<(Word, HPoint)> {
        let mut x = p;
        let mut letters: Vec<i32> = Vec::new();
        let k = self.rank() as i32;
        for _ in 0..tol::SOLVER_MAX_ITERS {
            let mut moved = false;
            for idx in 1..=k {
                for letter in [idx, -idx] {
                    if self.target(letter)?.signed_distance(x) > 1e-12 {
                        x = rep.letter_element(-letter)?.apply(x);
                        letters.push(letter);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    break;
                }
            }
            if !moved {
                return Ok((Word::new(&letters)?, x));
            }
        }
        Err(Error::MaxIterations(tol::SOLVER_MAX_ITERS))
    }
}

/// Hyperbolic translation of given length whose axis is the unit
/// half-circle oriented from -1 to +1.
fn unit_circle_translation(length: f64) -> GroupElement {
    let m = length / 2.0;
    GroupElement::new([[m.cosh(), m.sinh()], [m.sinh(), m.cosh()]])
        .expect("translation matrix has determinant one")
}

/// Certificate walls for a generator: perpendiculars to its axis at
/// arclength +-half, bounding the far half-planes.
fn axis_targets(axis: &Geodesic, half: f64) -> (HalfPlane, HalfPlane) {
    let frame = FermiFrame::new(axis);
    // Forward target {s >= half}: the forward region lies left of the
    // perpendicular leaf, so take the right side of the reversed leaf.
    let plus = HalfPlane::right_of(frame.perpendicular_at(half).reversed());
    let minus = HalfPlane::right_of(frame.perpendicular_at(-half));
    (plus, minus)
}

/// Holonomy of the three-holed sphere with boundary lengths
/// (len_a, len_b, len_ab), together with its ping-pong certificate.
///
/// The generators translate along disjoint axes: the first along the unit
/// half-circle, the second along a half-circle |z| = e^D run against the
/// first's orientation, with D chosen so the product class has the third
/// boundary length.
pub fn pants_holonomy(
    len_a: f64,
    len_b: f64,
    len_ab: f64,
) -> Result<(Representation, PingPongCertificate)> {
    for (name, v) in [("first", len_a), ("second", len_b), ("product", len_ab)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{name} boundary length must be positive, got {v}"
            )));
        }
    }
    let m = len_a / 2.0;
    let n = len_b / 2.0;
    let a = unit_circle_translation(len_a);
    // Distance between the two axes, from the trace identity
    // tr(ab) = 2 cosh m cosh n - 2 cosh(D) sinh m sinh n = -2 cosh(len_ab/2).
    let cosh_d = ((len_ab / 2.0).cosh() + m.cosh() * n.cosh()) / (m.sinh() * n.sinh());
    let d = cosh_d.acosh();
    let ed = d.exp();
    let b = GroupElement::new([
        [n.cosh(), -ed * n.sinh()],
        [-n.sinh() / ed, n.cosh()],
    ])
    .expect("translation matrix has determinant one");
    let rep = Representation::new(vec![a, b]);

    let axis_a = Geodesic::axis(&a)?;
    let axis_b = Geodesic::axis(&b)?;
    let (plus_a, minus_a) = axis_targets(&axis_a, m);
    let (plus_b, minus_b) = axis_targets(&axis_b, n);
    let cert = PingPongCertificate::verify(&rep, vec![plus_a, plus_b], vec![minus_a, minus_b])?;
    Ok((rep, cert))
}

/// Holonomy of the one-holed torus whose generators translate along
/// perpendicular axes through the basepoint, with the given translation
/// lengths, together with its ping-pong certificate.
///
/// The boundary is the commutator of the generators. The certificate
/// walls exist when sinh(len_a/2) sinh(len_b/2) > 1.
pub fn torus_holonomy(len_a: f64, len_b: f64) -> Result<(Representation, PingPongCertificate)> {
    for (name, v) in [("first", len_a), ("second", len_b)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{name} translation length must be positive, got {v}"
            )));
        }
    }
    let a = unit_circle_translation(len_a);
    let h = len_b / 2.0;
    let b = GroupElement::new([[h.exp(), 0.0], [0.0, (-h).exp()]])
        .expect("diagonal matrix has determinant one");
    let rep = Representation::new(vec![a, b]);
    let (plus_a, minus_a) = axis_targets(&Geodesic::axis(&a)?, len_a / 2.0);
    let (plus_b, minus_b) = axis_targets(&Geodesic::axis(&b)?, len_b / 2.0);
    let cert = PingPongCertificate::verify(&rep, vec![plus_a, plus_b], vec![minus_a, minus_b])?;
    Ok((rep, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::hyp_dist;

    #[test]
    fn pants_holonomy_has_prescribed_boundary_lengths() {
        let (rep, cert) = pants_holonomy(2.0, 2.2, 2.4).unwrap();
        let a = rep.generator(0).unwrap();
        let b = rep.generator(1).unwrap();
        assert!((a.translation_length() - 2.0).abs() < 1e-10);
        assert!((b.translation_length() - 2.2).abs() < 1e-10);
        assert!(((a * b).translation_length() - 2.4).abs() < 1e-10);
        assert!(cert.separation() > 0.0, "walls should be strictly separated");
    }

    #[test]
    fn pants_product_trace_is_negative_before_normalization() {
        // The two axes run against each other, so the product's raw trace
        // comes out negative; the stored representative flips the sign.
        let m: f64 = 1.0;
        let n: f64 = 1.1;
        let c: f64 = 1.2;
        let cosh_d = (c.cosh() + m.cosh() * n.cosh()) / (m.sinh() * n.sinh());
        let raw = 2.0 * m.cosh() * n.cosh() - 2.0 * cosh_d * m.sinh() * n.sinh();
        assert!((raw + 2.0 * c.cosh()).abs() < 1e-12);
    }

    #[test]
    fn torus_holonomy_certificate_and_boundary() {
        let (rep, cert) = torus_holonomy(2.4, 2.6).unwrap();
        let a = rep.generator(0).unwrap();
        let b = rep.generator(1).unwrap();
        assert!((a.translation_length() - 2.4).abs() < 1e-10);
        assert!((b.translation_length() - 2.6).abs() < 1e-10);
        assert!(cert.separation() > 0.0);
        let boundary = rep.evaluate(&Word::parse("abAB").unwrap()).unwrap();
        assert!(boundary.translation_length() > 0.0, "boundary is hyperbolic");
    }

    #[test]
    fn torus_with_short_generators_fails_ping_pong() {
        // sinh(0.3) sinh(0.3) << 1: the certificate walls must cross.
        match torus_holonomy(0.6, 0.6) {
            Err(Error::NotPingPong(_)) => {}
            other => panic!("expected ping-pong failure, got {other:?}"),
        }
    }

    #[test]
    fn basepoint_is_interior_to_the_fundamental_domain() {
        let (_, cert) = pants_holonomy(2.0, 2.2, 2.4).unwrap();
        assert!(cert.in_fundamental_domain(HPoint::I, 0.0));
        let (_, cert) = torus_holonomy(2.4, 2.6).unwrap();
        assert!(cert.in_fundamental_domain(HPoint::I, 0.0));
    }

    #[test]
    fn fold_recovers_the_translating_word() {
        let (rep, cert) = pants_holonomy(2.0, 2.2, 2.4).unwrap();
        for s in ["a", "b", "ab", "aB", "abA", "baB", "aabAB"] {
            let w = Word::parse(s).unwrap();
            let p = rep.act(&w, HPoint::I).unwrap();
            let (folded, x0) = cert.fold(&rep, p).unwrap();
            assert_eq!(folded, w, "fold should recover '{s}'");
            assert!(hyp_dist(x0, HPoint::I) < 1e-9);
        }
    }

    #[test]
    fn fold_lands_in_the_fundamental_domain_and_is_consistent() {
        let (rep, cert) = torus_holonomy(2.4, 2.6).unwrap();
        let samples = [
            HPoint { x: 0.0, y: 1.0 },
            HPoint { x: 3.0, y: 0.2 },
            HPoint { x: -1.7, y: 0.05 },
            HPoint { x: 0.9, y: 12.0 },
            HPoint { x: -0.33, y: 0.71 },
        ];
        for p in samples {
            let (w, x0) = cert.fold(&rep, p).unwrap();
            assert!(cert.in_fundamental_domain(x0, 1e-9));
            let back = rep.act(&w, x0).unwrap();
            assert!(hyp_dist(back, p) < 1e-8, "rho(w) x0 should reproduce p");
        }
    }

    #[test]
    fn fold_is_equivariant() {
        let (rep, cert) = pants_holonomy(2.0, 2.2, 2.4).unwrap();
        let p = HPoint { x: 0.4, y: 0.8 };
        let g = Word::parse("aB").unwrap();
        let (w1, x1) = cert.fold(&rep, p).unwrap();
        let (w2, x2) = cert.fold(&rep, rep.act(&g, p).unwrap()).unwrap();
        // Same domain point, words differing by the applied element.
        assert!(hyp_dist(x1, x2) < 1e-9);
        assert_eq!(g.concat(&w1), w2);
    }
}
