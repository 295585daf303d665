//! Strip deformations over the arc complex of a hyperbolic surface.
//!
//! An arc system on the three-holed sphere or the once-holed torus is
//! realized geodesically in the universal cover, and each arc is widened
//! into a strip: the region between the arc's complete geodesic and its
//! translate along the perpendicular at the arc's waist. Collapsing every
//! strip back onto its near wall yields a distance-nonincreasing map that
//! intertwines the base holonomy with a deformed one; its derivative in
//! the widths is an explicit cocycle supported on the crossed strips.
//! Running the construction over the finitely many filling triangles of
//! the arc complex inverts the assignment: a cocycle certified to
//! uniformly contract lengths is written as a positively weighted strip
//! deformation.

use crate::contraction::sweeps::{admissibility_test, dlambda, AdmissibilityVerdict};
use crate::error::{Error, Result};
use crate::lie::geodesic::{common_perpendicular, FermiFrame, Geodesic};
use crate::lie::{hyp_dist, hyp_exp, hyp_interp, AlgebraElement, GroupElement, HPoint, TangentVector};
use crate::rep::{reduced_words, Cocycle, Representation, Word};
use serde::{Deserialize, Serialize};

/// Names of the three boundary classes of the three-holed sphere, as words
/// in the two-generator holonomy.
pub const BOUNDARY_WORDS: [&str; 3] = ["a", "b", "ab"];

/// Surface carrying the arc system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Surface {
    /// Three-holed sphere with boundary classes a, b, ab.
    Pants,
    /// Once-holed torus with boundary class the commutator of a and b.
    OnceHoledTorus,
}

/// Topological type of a simple arc, endpoints on the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArcSpec {
    /// Arc of the three-holed sphere joining two distinct boundaries.
    Seam { from: usize, to: usize },
    /// Arc of the three-holed sphere with both endpoints on one boundary,
    /// separating the other two.
    #[serde(rename = "loop")]
    SelfArc { boundary: usize },
    /// Arc of the once-holed torus winding p times around the first
    /// generator curve and q times around the second.
    Slope { p: i64, q: i64 },
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl ArcSpec {
    /// Seam between two distinct boundaries, stored with ordered indices.
    pub fn seam(from: usize, to: usize) -> Result<ArcSpec> {
        if from == to || from > 2 || to > 2 {
            return Err(Error::InvalidInput(format!(
                "seam needs two distinct boundary indices below 3, got ({from}, {to})"
            )));
        }
        Ok(ArcSpec::Seam { from: from.min(to), to: from.max(to) })
    }

    /// Arc returning to the given boundary of the three-holed sphere.
    pub fn self_arc(boundary: usize) -> Result<ArcSpec> {
        if boundary > 2 {
            return Err(Error::InvalidInput(format!(
                "boundary index must be below 3, got {boundary}"
            )));
        }
        Ok(ArcSpec::SelfArc { boundary })
    }

    /// Torus arc of primitive slope (p, q), canonicalized to q > 0 or
    /// (q, p) = (0, 1).
    pub fn slope(p: i64, q: i64) -> Result<ArcSpec> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidInput("slope (0, 0) is not a direction".into()));
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(ArcSpec::Slope { p, q })
    }

    /// Canonical form of the spec, validating its fields.
    pub fn normalized(&self) -> Result<ArcSpec> {
        match *self {
            ArcSpec::Seam { from, to } => ArcSpec::seam(from, to),
            ArcSpec::SelfArc { boundary } => ArcSpec::self_arc(boundary),
            ArcSpec::Slope { p, q } => ArcSpec::slope(p, q),
        }
    }

    /// Surface the arc lives on.
    pub fn surface(&self) -> Surface {
        match self {
            ArcSpec::Seam { .. } | ArcSpec::SelfArc { .. } => Surface::Pants,
            ArcSpec::Slope { .. } => Surface::OnceHoledTorus,
        }
    }

    /// Boundary classes the arc touches (used by the filling test).
    fn covers(&self) -> Vec<usize> {
        match *self {
            ArcSpec::Seam { from, to } => vec![from, to],
            ArcSpec::SelfArc { boundary } => vec![boundary],
            ArcSpec::Slope { .. } => vec![0],
        }
    }

    /// Whether two distinct arcs of one surface can be realized disjointly.
    fn compatible(&self, other: &ArcSpec) -> bool {
        match (*self, *other) {
            (ArcSpec::Seam { .. }, ArcSpec::Seam { .. }) => true,
            (ArcSpec::Seam { from, to }, ArcSpec::SelfArc { boundary })
            | (ArcSpec::SelfArc { boundary }, ArcSpec::Seam { from, to }) => {
                boundary == from || boundary == to
            }
            (ArcSpec::SelfArc { .. }, ArcSpec::SelfArc { .. }) => false,
            (ArcSpec::Slope { p, q }, ArcSpec::Slope { p: r, q: s }) => {
                (p * s - q * r).abs() == 1
            }
            _ => false,
        }
    }
}

impl std::fmt::Display for ArcSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ArcSpec::Seam { from, to } => {
                write!(f, "seam({},{})", BOUNDARY_WORDS[from], BOUNDARY_WORDS[to])
            }
            ArcSpec::SelfArc { boundary } => {
                write!(f, "loop({})", BOUNDARY_WORDS[boundary])
            }
            ArcSpec::Slope { p, q } => write!(f, "slope({p},{q})"),
        }
    }
}

/// Collection of pairwise disjoint simple arcs on one surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcSystem {
    surface: Surface,
    arcs: Vec<ArcSpec>,
}

impl ArcSystem {
    /// Validates that the arcs share a surface, are pairwise distinct, and
    /// are pairwise realizable disjointly.
    pub fn new(arcs: Vec<ArcSpec>) -> Result<ArcSystem> {
        let arcs: Vec<ArcSpec> =
            arcs.iter().map(ArcSpec::normalized).collect::<Result<_>>()?;
        let surface = match arcs.first() {
            Some(a) => a.surface(),
            None => return Err(Error::InvalidInput("empty arc system".into())),
        };
        for (i, a) in arcs.iter().enumerate() {
            if a.surface() != surface {
                return Err(Error::InvalidInput(
                    "arc system mixes arcs of different surfaces".into(),
                ));
            }
            for (j, b) in arcs.iter().enumerate().take(i) {
                if a == b {
                    return Err(Error::InvalidInput(format!(
                        "arcs {j} and {i} repeat the class {a}"
                    )));
                }
                if !a.compatible(b) {
                    return Err(Error::InvalidInput(format!(
                        "arcs {b} and {a} cross; no disjoint realization"
                    )));
                }
            }
        }
        Ok(ArcSystem { surface, arcs })
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn arcs(&self) -> &[ArcSpec] {
        &self.arcs
    }

    /// Whether the complement of the arcs is a union of disks, so that
    /// every essential curve crosses some arc.
    pub fn is_filling(&self) -> bool {
        match self.surface {
            Surface::Pants => {
                let mut covered = [false; 3];
                for arc in &self.arcs {
                    for b in arc.covers() {
                        covered[b] = true;
                    }
                }
                covered.iter().all(|c| *c)
            }
            Surface::OnceHoledTorus => self.arcs.len() >= 2,
        }
    }

    /// Compact label listing the arc classes.
    pub fn label(&self) -> String {
        self.arcs
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Cancels adjacent inverse letters until none remain.
fn free_reduce(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Development word of the once-holed-torus arc of slope (p, q): the arc
/// runs between the boundary lift and its image under this word.
///
/// The arc develops along the straight lattice segment from (0, 0) to
/// (p, q), whose ends are hole corners. Reading off the grid walls it
/// crosses — nudged by a generic offset so near-endpoint coincidences
/// resolve harmlessly — and conjugating by the corner marking of the
/// start hole gives the translate; powers of the boundary word on either
/// side then shorten it to a canonical representative.
pub fn slope_word(p: i64, q: i64) -> Result<Word> {
    if (p == 0 && q == 0) || gcd(p, q) != 1 {
        return Err(Error::InvalidInput(format!(
            "({p}, {q}) is not a primitive direction"
        )));
    }
    // Offsets with an irrational ratio: interior walls never tie (the
    // open segment misses the lattice), and endpoint near-ties resolve
    // consistently.
    let (e1, e2) = (0.618e-9, 0.382e-9);
    let mut events: Vec<(f64, i32)> = Vec::new();
    if p != 0 {
        let la: i32 = if p > 0 { 1 } else { -1 };
        for k in 1..=p.abs() {
            let wall = if p > 0 { k } else { 1 - k } as f64;
            events.push(((wall - e1) / p as f64, la));
        }
    }
    if q != 0 {
        let lb: i32 = if q > 0 { 2 } else { -2 };
        for m in 1..=q.abs() {
            let wall = if q > 0 { m } else { 1 - m } as f64;
            events.push(((wall - e2) / q as f64, lb));
        }
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));

    // Develop from the start hole's corner marking: ba · crossings · AB.
    let mut v: Vec<i32> = vec![2, 1];
    v.extend(events.iter().map(|&(_, l)| l));
    v.extend([-1, -2]);
    let v = free_reduce(&v);

    // The boundary word abAB stabilizes the base lift and its inverse
    // marks the far one, so multiplying by its powers on either side
    // leaves the arc unchanged; take the shortest representative.
    let c: Vec<i32> = vec![1, 2, -1, -2];
    let c_inv: Vec<i32> = vec![2, 1, -2, -1];
    let power = |n: i32| -> Vec<i32> {
        let base = if n >= 0 { &c } else { &c_inv };
        std::iter::repeat_with(|| base.iter().copied())
            .take(n.unsigned_abs() as usize)
            .flatten()
            .collect()
    };
    let mut best = v.clone();
    for j in -2..=2 {
        for k in -2..=2 {
            let mut cand = power(j);
            cand.extend(&v);
            cand.extend(power(k));
            let cand = free_reduce(&cand);
            if cand.len() < best.len() {
                best = cand;
            }
        }
    }
    Word::new(&best)
}

/// An arc class realized as a complete geodesic in the cover.
#[derive(Debug, Clone)]
pub struct RealizedArc {
    pub spec: ArcSpec,
    /// Complete geodesic extending the orthogeodesic segment.
    pub geodesic: Geodesic,
    /// Midpoint of the orthogeodesic segment; the strip collapses toward it.
    pub waist: HPoint,
    /// Length of the orthogeodesic segment between the boundary lifts.
    pub length: f64,
}

/// Realizes an arc class as the common perpendicular between two lifts of
/// the boundary components it joins.
///
/// Seams and self arcs of the three-holed sphere are the shortest
/// orthogeodesics between the corresponding boundary lifts, minimized over
/// translates of word length at most two. The torus arc of slope (p, q)
/// joins the boundary lift to its translate by the Christoffel word of
/// (p, q). The holonomy is assumed convex cocompact on two generators.
pub fn realize_arc(rep: &Representation, spec: &ArcSpec) -> Result<RealizedArc> {
    if rep.rank() != 2 {
        return Err(Error::InvalidInput(
            "arc realization expects a two-generator holonomy".into(),
        ));
    }
    let spec = spec.normalized()?;
    let boundary_axis = |idx: usize| -> Result<Geodesic> {
        Geodesic::axis(&rep.evaluate(&Word::parse(BOUNDARY_WORDS[idx])?)?)
    };
    let perp = match spec {
        ArcSpec::Seam { from, to } => {
            let ax_from = boundary_axis(from)?;
            let ax_to = boundary_axis(to)?;
            let mut best: Option<crate::lie::geodesic::Perpendicular> = None;
            for g in reduced_words(2, 2) {
                let cand = ax_to.apply(&rep.evaluate(&g)?);
                if let Ok(perp) = common_perpendicular(&ax_from, &cand) {
                    if best.as_ref().is_none_or(|b| perp.distance < b.distance) {
                        best = Some(perp);
                    }
                }
            }
            best.ok_or_else(|| {
                Error::InvalidInput(format!("no disjoint lifts found for {spec}"))
            })?
        }
        ArcSpec::SelfArc { boundary } => {
            let ax = boundary_axis(boundary)?;
            let mut best: Option<crate::lie::geodesic::Perpendicular> = None;
            for g in reduced_words(2, 2) {
                if g.is_empty() {
                    continue;
                }
                let cand = ax.apply(&rep.evaluate(&g)?);
                if cand.approx_eq(&ax, 1e-9) || cand.approx_eq(&ax.reversed(), 1e-9) {
                    continue;
                }
                if let Ok(perp) = common_perpendicular(&ax, &cand) {
                    if best.as_ref().is_none_or(|b| perp.distance < b.distance) {
                        best = Some(perp);
                    }
                }
            }
            best.ok_or_else(|| {
                Error::InvalidInput(format!("no disjoint lifts found for {spec}"))
            })?
        }
        ArcSpec::Slope { p, q } => {
            let k = rep.evaluate(&Word::parse("abAB")?)?;
            let ax = Geodesic::axis(&k)?;
            let cand = ax.apply(&rep.evaluate(&slope_word(p, q)?)?);
            common_perpendicular(&ax, &cand)?
        }
    };
    Ok(RealizedArc {
        spec,
        waist: hyp_interp(perp.foot_first, perp.foot_second, 0.5),
        geodesic: perp.geodesic,
        length: perp.distance,
    })
}

/// One lift of a widened arc: the region between the arc's geodesic (the
/// s = 0 leaf of the frame) and its translate at arclength `width` along
/// the perpendicular at the waist.
#[derive(Debug, Clone)]
pub struct StripLift {
    /// Index into the arc system of the class this lift covers.
    pub arc_index: usize,
    /// Frame of the collapse direction: base geodesic perpendicular to the
    /// arc, origin at the waist, so the arc is the s = 0 leaf.
    pub frame: FermiFrame,
    /// The arc's complete geodesic (the near wall of the strip).
    pub wall: Geodesic,
    /// Signed strip width; nonpositive widths keep only the wall.
    pub width: f64,
    /// Lifted waist point.
    pub waist: HPoint,
    /// Half the arc length: the core of the lift is the chord of the
    /// wall within this distance of the waist, ending on the two
    /// boundary lifts the arc connects.
    pub half_extent: f64,
}

impl StripLift {
    fn effective_width(&self, degenerate: bool) -> f64 {
        if degenerate {
            0.0
        } else {
            self.width.max(0.0)
        }
    }
}

/// Enumeration depth, retention radius, and basepoint for strip lifts.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StripParams {
    /// Word length up to which deck translates of each arc are enumerated.
    pub lift_depth: usize,
    /// Keep lifts whose wall passes within this distance of the basepoint;
    /// None derives a radius from the generator displacements.
    pub keep_radius: Option<f64>,
    /// Fixed basepoint; None searches for one clear of the strips. Pinning
    /// it keeps a family of widths in a single conjugation frame.
    pub basepoint: Option<HPoint>,
}

impl Default for StripParams {
    fn default() -> Self {
        StripParams { lift_depth: 4, keep_radius: None, basepoint: None }
    }
}

/// A weighted arc system realized as strips in the cover, ready to
/// evaluate the collapse map, its deformed holonomy, and its cocycle.
#[derive(Debug, Clone)]
pub struct StripMapData {
    rep: Representation,
    system: ArcSystem,
    weights: Vec<f64>,
    lifts: Vec<StripLift>,
    basepoint: HPoint,
    keep_radius: f64,
    /// Whether the basepoint clears the widened strips, not just the arcs;
    /// the collapse map and the deformed holonomy require it.
    widened_clear: bool,
}

/// Whether the compact cores of two lifts cross. Only the chord between
/// an arc's feet carries the surface — the feet lie on boundary lifts, so
/// the extensions beyond them have left the lifted surface, and crossings
/// out there are meaningless.
fn chords_overlap(a: &StripLift, b: &StripLift) -> bool {
    let lo = b.frame.point(0.0, -b.half_extent);
    let hi = b.frame.point(0.0, b.half_extent);
    let (s_lo, _) = a.frame.coords(lo);
    let (s_hi, _) = a.frame.coords(hi);
    if s_lo.abs() < 1e-9 && s_hi.abs() < 1e-9 {
        // Same complete geodesic: the chords overlap exactly when the
        // waists are closer than the two half extents combined.
        return hyp_dist(a.waist, b.waist) < a.half_extent + b.half_extent;
    }
    if (s_lo < 0.0) == (s_hi < 0.0) {
        return false;
    }
    // b's chord crosses a's geodesic once; bisect for the crossing point
    // and ask whether it falls inside a's chord.
    let (mut t_lo, mut t_hi) = (-b.half_extent, b.half_extent);
    for _ in 0..60 {
        let mid = 0.5 * (t_lo + t_hi);
        let (s, _) = a.frame.coords(b.frame.point(0.0, mid));
        if (s < 0.0) == (s_lo < 0.0) {
            t_lo = mid;
        } else {
            t_hi = mid;
        }
    }
    let crossing = b.frame.point(0.0, 0.5 * (t_lo + t_hi));
    let (_, t) = a.frame.coords(crossing);
    t.abs() <= a.half_extent + 1e-6
}

impl StripMapData {
    /// Builds the strip datum with default enumeration parameters.
    pub fn new(
        rep: Representation,
        system: &ArcSystem,
        weights: &[f64],
    ) -> Result<StripMapData> {
        StripMapData::with_params(rep, system, weights, StripParams::default())
    }

    /// Builds the strip datum: realizes the arcs, enumerates their lifts
    /// near the basepoint, widens them by the weights, and checks that the
    /// resulting strips are pairwise disjoint.
    pub fn with_params(
        rep: Representation,
        system: &ArcSystem,
        weights: &[f64],
        params: StripParams,
    ) -> Result<StripMapData> {
        if weights.len() != system.arcs().len() {
            return Err(Error::InvalidInput(format!(
                "{} weights for {} arcs",
                weights.len(),
                system.arcs().len()
            )));
        }
        if !weights.iter().all(|w| w.is_finite()) {
            return Err(Error::InvalidInput("weights must be finite".into()));
        }
        let keep_radius = match params.keep_radius {
            Some(r) => r,
            None => {
                let reach = (0..rep.rank())
                    .map(|k| rep.generator(k).map(|g| g.mu()))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .fold(0.0_f64, f64::max);
                reach + 2.5
            }
        };

        let mut lifts: Vec<StripLift> = Vec::new();
        let words = reduced_words(rep.rank(), params.lift_depth);
        for (k, spec) in system.arcs().iter().enumerate() {
            let arc = realize_arc(&rep, spec)?;
            let arc_frame = FermiFrame::centered_at(&arc.geodesic, arc.waist);
            let sigma = arc_frame.perpendicular_at(0.0);
            for g in &words {
                let el = rep.evaluate(g)?;
                let wall = arc.geodesic.apply(&el);
                if wall.distance_to_point(HPoint::I) > keep_radius {
                    continue;
                }
                let waist = el.apply(arc.waist);
                let duplicate = lifts.iter().any(|l| {
                    (l.wall.approx_eq(&wall, 1e-9)
                        || l.wall.approx_eq(&wall.reversed(), 1e-9))
                        && hyp_dist(l.waist, waist) < 1e-9
                });
                if duplicate {
                    continue;
                }
                let frame = FermiFrame::centered_at(&sigma.apply(&el), waist);
                lifts.push(StripLift {
                    arc_index: k,
                    frame,
                    wall,
                    width: weights[k],
                    waist,
                    half_extent: 0.5 * arc.length,
                });
            }
        }
        // The compact cores of the realized arcs must be pairwise
        // disjoint; widened strips are validated along every segment an
        // operation actually walks.
        for i in 0..lifts.len() {
            for j in 0..i {
                if chords_overlap(&lifts[i], &lifts[j]) {
                    return Err(Error::StripsOverlap(j, i));
                }
            }
        }

        // Deterministic spiral sweep for a basepoint: prefer a point clear
        // of the widened strips; fall back to one clear of the arcs alone,
        // which still supports the cocycle (its crossings are degenerate).
        let clearance = |p: HPoint, degenerate: bool| -> f64 {
            lifts
                .iter()
                .map(|l| {
                    let w = l.effective_width(degenerate);
                    let (s, _) = l.frame.coords(p);
                    if s < 0.0 {
                        -s
                    } else if s > w {
                        s - w
                    } else {
                        -s.min(w - s)
                    }
                })
                .fold(f64::INFINITY, f64::min)
        };
        let (basepoint, widened_clear) = if let Some(p) = params.basepoint {
            if clearance(p, true) <= 1e-9 {
                return Err(Error::InvalidInput(
                    "the pinned basepoint sits on an arc lift".into(),
                ));
            }
            (p, clearance(p, false) > 1e-9)
        } else {
            let mut candidates = vec![HPoint::I];
            for step in 1..=12 {
                let r = 0.25 * step as f64;
                for k in 0..16 {
                    let th = std::f64::consts::TAU * (k as f64) / 16.0;
                    candidates.push(hyp_exp(&TangentVector::new(
                        HPoint::I,
                        r * th.sin(),
                        r * th.cos(),
                    )));
                }
            }
            let pick = |degenerate: bool| {
                candidates
                    .iter()
                    .copied()
                    .find(|p| clearance(*p, degenerate) > 1e-3)
            };
            match pick(false) {
                Some(p) => (p, true),
                None => match pick(true) {
                    Some(p) => (p, false),
                    None => {
                        return Err(Error::InvalidInput(
                            "could not place a basepoint clear of the arcs".into(),
                        ))
                    }
                },
            }
        };

        Ok(StripMapData {
            rep,
            system: system.clone(),
            weights: weights.to_vec(),
            lifts,
            basepoint,
            keep_radius,
            widened_clear,
        })
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn system(&self) -> &ArcSystem {
        &self.system
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn lifts(&self) -> &[StripLift] {
        &self.lifts
    }

    pub fn basepoint(&self) -> HPoint {
        self.basepoint
    }

    /// Radius around the basepoint within which arc lifts were enumerated;
    /// evaluation is only trusted comfortably inside this ball.
    pub fn keep_radius(&self) -> f64 {
        self.keep_radius
    }

    /// The same arc system with every width scaled by `t`, realized in
    /// the same frames: the basepoint and keep radius are pinned so the
    /// whole family shares one chart and one basepoint orbit.
    pub fn rescaled(&self, t: f64) -> Result<StripMapData> {
        if !(t > 0.0) {
            return Err(Error::InvalidInput(format!(
                "width scales must be positive, got {t}"
            )));
        }
        let weights: Vec<f64> = self.weights.iter().map(|w| w * t).collect();
        StripMapData::with_params(
            self.rep.clone(),
            &self.system,
            &weights,
            StripParams {
                keep_radius: Some(self.keep_radius),
                basepoint: Some(self.basepoint),
                ..StripParams::default()
            },
        )
    }

    /// Bisection for the segment parameter where the Fermi arclength
    /// coordinate of the frame reaches `wall_s`; the sign of s - wall_s
    /// changes exactly once along a segment crossing the leaf.
    fn crossing_parameter(
        from: HPoint,
        to: HPoint,
        frame: &FermiFrame,
        wall_s: f64,
        s_from: f64,
    ) -> f64 {
        let from_sign = (s_from - wall_s).is_sign_negative();
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            let (s, _) = frame.coords(hyp_interp(from, to, mid));
            if (s - wall_s).is_sign_negative() == from_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Full strip crossings of the oriented segment, ordered along it as
    /// (entry parameter, exit parameter, lift index, +1 entering at the
    /// arc wall / -1 at the far wall). With `degenerate` set, strips are
    /// replaced by their arcs. Fails when two crossing intervals
    /// interleave: the strips then collide on this very segment and no
    /// consistent crossing order exists.
    fn crossing_events(
        &self,
        from: HPoint,
        to: HPoint,
        degenerate: bool,
    ) -> Result<Vec<(f64, f64, usize, i32)>> {
        let mut events = Vec::new();
        for (idx, lift) in self.lifts.iter().enumerate() {
            let w = lift.effective_width(degenerate);
            let (sf, _) = lift.frame.coords(from);
            let (st, _) = lift.frame.coords(to);
            let (dir, entry_s, exit_s) = if sf < 0.0 && st > w {
                (1, 0.0, w)
            } else if sf > w && st < 0.0 {
                (-1, w, 0.0)
            } else {
                continue;
            };
            let entry = StripMapData::crossing_parameter(from, to, &lift.frame, entry_s, sf);
            let exit = StripMapData::crossing_parameter(from, to, &lift.frame, exit_s, sf);
            events.push((entry, exit, idx, dir));
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        for pair in events.windows(2) {
            if pair[1].0 < pair[0].1 - 1e-12 {
                return Err(Error::StripsOverlap(pair[0].2, pair[1].2));
            }
        }
        Ok(events)
    }

    /// Isometry accumulated by the collapse map along a segment: one
    /// translation by the (negated) width per strip fully crossed.
    fn walk(&self, from: HPoint, to: HPoint) -> Result<GroupElement> {
        let mut a = GroupElement::IDENTITY;
        for (_, _, idx, dir) in self.crossing_events(from, to, false)? {
            let lift = &self.lifts[idx];
            a = a * lift.frame.translation(-lift.width * dir as f64);
        }
        Ok(a)
    }

    /// The unique strip containing the point, if any; two strips claiming
    /// it means they overlap there.
    fn lift_containing(&self, p: HPoint) -> Result<Option<usize>> {
        let mut found = None;
        for (idx, lift) in self.lifts.iter().enumerate() {
            let (s, _) = lift.frame.coords(p);
            if s >= 0.0 && s <= lift.effective_width(false) {
                if let Some(prev) = found {
                    return Err(Error::StripsOverlap(prev, idx));
                }
                found = Some(idx);
            }
        }
        Ok(found)
    }

    /// The collapse map: fixes the basepoint's piece, collapses each strip
    /// onto the wall facing the basepoint, and translates the pieces
    /// beyond. Distance-nonincreasing, and intertwines the base holonomy
    /// with the deformed one.
    pub fn evaluate(&self, x: HPoint) -> Result<HPoint> {
        if self.weights.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidInput(
                "the collapse map needs nonnegative strip widths".into(),
            ));
        }
        if !self.widened_clear {
            return Err(Error::InvalidInput(
                "no basepoint clears the widened strips; use smaller widths".into(),
            ));
        }
        if hyp_dist(HPoint::I, x) > self.keep_radius - 1.0 {
            return Err(Error::OutsideDomain);
        }
        let events = self.crossing_events(self.basepoint, x, false)?;
        let mut a = GroupElement::IDENTITY;
        for &(_, _, idx, dir) in &events {
            let lift = &self.lifts[idx];
            a = a * lift.frame.translation(-lift.width * dir as f64);
        }
        if let Some(idx) = self.lift_containing(x)? {
            let lift = &self.lifts[idx];
            let (_, t) = lift.frame.coords(x);
            let (s0, _) = lift.frame.coords(self.basepoint);
            let wall_s = if s0 < 0.0 { 0.0 } else { lift.width };
            // The half-finished crossing into this strip must start after
            // every completed one, or two strips meet on this segment.
            let entry =
                StripMapData::crossing_parameter(self.basepoint, x, &lift.frame, wall_s, s0);
            if let Some(last) = events.last() {
                if entry < last.1 - 1e-12 {
                    return Err(Error::StripsOverlap(last.2, idx));
                }
            }
            return Ok(a.apply(lift.frame.point(wall_s, t)));
        }
        Ok(a.apply(x))
    }

    /// Holonomy of the deformed structure: the generator action composed
    /// with the strip translations its basepoint segment picks up.
    pub fn deformed_holonomy(&self) -> Result<Representation> {
        if !self.widened_clear {
            return Err(Error::InvalidInput(
                "no basepoint clears the widened strips; use smaller widths".into(),
            ));
        }
        let mut gens = Vec::new();
        for k in 0..self.rep.rank() {
            let g = self.rep.generator(k)?;
            let target = g.apply(self.basepoint);
            if self.lift_containing(target)?.is_some() {
                return Err(Error::InvalidInput(
                    "a generator moves the basepoint into a strip; deepen the lift enumeration"
                        .into(),
                ));
            }
            gens.push(self.walk(self.basepoint, target)? * g);
        }
        Ok(Representation::new(gens))
    }

    /// Derivative of the collapse map in the common width scale at zero,
    /// as a vector field: zero at the basepoint, jumping by a weighted
    /// unit translation generator across each arc lift the basepoint
    /// segment crosses.
    pub fn infinitesimal_field(&self, p: HPoint) -> Result<TangentVector> {
        let mut u = AlgebraElement::ZERO;
        for (_, _, idx, dir) in self.crossing_events(self.basepoint, p, true)? {
            let lift = &self.lifts[idx];
            let scale = -(dir as f64) * self.weights[lift.arc_index];
            u = u + lift.frame.translation_generator() * scale;
        }
        Ok(u.eval_at(p))
    }

    /// Derivative of the deformed holonomy in the widths at width zero:
    /// each arc crossed by the basepoint segment of a generator
    /// contributes its weight times the unit translation along its
    /// collapse direction.
    pub fn strip_cocycle(&self) -> Result<Cocycle> {
        let mut values = Vec::new();
        for k in 0..self.rep.rank() {
            let g = self.rep.generator(k)?;
            let target = g.apply(self.basepoint);
            let mut u = AlgebraElement::ZERO;
            for (_, _, idx, dir) in self.crossing_events(self.basepoint, target, true)? {
                let lift = &self.lifts[idx];
                let scale = -(dir as f64) * self.weights[lift.arc_index];
                u = u + lift.frame.translation_generator() * scale;
            }
            values.push(u);
        }
        Ok(Cocycle::new(values))
    }
}

/// Length derivatives of the three probe classes a, b, ab under a cocycle:
/// coordinates separating deformation classes near a convex cocompact
/// holonomy.
pub fn class_vector(rep: &Representation, cocycle: &Cocycle) -> Result<[f64; 3]> {
    let mut v = [0.0; 3];
    for (i, w) in BOUNDARY_WORDS.iter().enumerate() {
        v[i] = dlambda(rep, cocycle, &Word::parse(w)?)?;
    }
    Ok(v)
}

/// Scales a class vector so its first coordinate of significant size
/// equals -1; None when all coordinates are negligible.
pub fn projectivize(v: [f64; 3], tol: f64) -> Option<[f64; 3]> {
    let lead = v.iter().find(|c| c.abs() > tol)?;
    let scale = -1.0 / lead;
    Some([v[0] * scale, v[1] * scale, v[2] * scale])
}

/// The filling triangles of the arc complex: all maximal systems for the
/// three-holed sphere, and the Farey triangles of slope size at most
/// `max_slope` for the once-holed torus.
pub fn filling_triangles(surface: Surface, max_slope: i64) -> Result<Vec<ArcSystem>> {
    match surface {
        Surface::Pants => {
            let seam = |i, j| ArcSpec::seam(i, j).expect("valid indices");
            let selfa = |i| ArcSpec::self_arc(i).expect("valid index");
            [
                vec![seam(0, 1), seam(1, 2), seam(0, 2)],
                vec![selfa(0), seam(0, 1), seam(0, 2)],
                vec![selfa(1), seam(0, 1), seam(1, 2)],
                vec![selfa(2), seam(0, 2), seam(1, 2)],
            ]
            .into_iter()
            .map(ArcSystem::new)
            .collect()
        }
        Surface::OnceHoledTorus => {
            let mut slopes = Vec::new();
            for p in -max_slope..=max_slope {
                for q in 0..=max_slope {
                    if p.abs() + q > max_slope || (q == 0 && p != 1) {
                        continue;
                    }
                    if (p != 0 || q != 0) && gcd(p, q) == 1 {
                        slopes.push((p, q));
                    }
                }
            }
            let mut out = Vec::new();
            for i in 0..slopes.len() {
                for j in 0..i {
                    for k in 0..j {
                        let mut tri = [slopes[i], slopes[j], slopes[k]];
                        let farey = tri.iter().enumerate().all(|(x, a)| {
                            tri.iter().take(x).all(|b| (a.0 * b.1 - a.1 * b.0).abs() == 1)
                        });
                        if farey {
                            // Canonical order: directions counterclockwise
                            // in the upper half lattice.
                            tri.sort_by(|a, b| (a.1 * b.0).cmp(&(a.0 * b.1)));
                            out.push(ArcSystem::new(vec![
                                ArcSpec::slope(tri[0].0, tri[0].1)?,
                                ArcSpec::slope(tri[1].0, tri[1].1)?,
                                ArcSpec::slope(tri[2].0, tri[2].1)?,
                            ])?);
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1])
        + c[0] * (a[1] * b[2] - a[2] * b[1])
}

/// Solves the 3x3 system with the given columns by Cramer's rule; None
/// when the columns are numerically dependent.
fn solve3(cols: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = det3(cols[0], cols[1], cols[2]);
    let scale: f64 = cols
        .iter()
        .map(|c| c.iter().map(|x| x.abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    if det.abs() <= 1e-12 * scale.powi(3).max(f64::MIN_POSITIVE) {
        return None;
    }
    Some([
        det3(rhs, cols[1], cols[2]) / det,
        det3(cols[0], rhs, cols[2]) / det,
        det3(cols[0], cols[1], rhs) / det,
    ])
}

/// Options for inverting a cocycle into strip weights.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InversionOptions {
    /// Class length swept when certifying admissibility of the input.
    pub admissibility_len: usize,
    /// Negative margin required of every swept length ratio.
    pub admissibility_threshold: f64,
    /// Slope size bound for torus Farey triangles.
    pub max_slope: i64,
    /// Weights must exceed this to count as positive.
    pub positivity_tol: f64,
}

impl Default for InversionOptions {
    fn default() -> Self {
        InversionOptions {
            admissibility_len: 4,
            admissibility_threshold: 1e-6,
            max_slope: 3,
            positivity_tol: 1e-7,
        }
    }
}

/// A cocycle realized as a positively weighted filling arc system.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Inversion {
    pub system: ArcSystem,
    pub weights: Vec<f64>,
    /// Length derivatives of the probe classes realized by the weights.
    pub class_vector: [f64; 3],
    /// Number of filling triangles carrying an all-positive solution.
    pub candidates: usize,
    /// Solved weights for every candidate triangle, by label.
    pub patterns: Vec<(String, Vec<f64>)>,
}

/// Writes an admissible cocycle as a positively weighted strip deformation.
///
/// The cocycle must first pass the admissibility sweep; its class vector
/// is then solved against the unit-weight strip cocycles of each filling
/// triangle of the arc complex, and a triangle with all-positive weights
/// is returned.
pub fn invert_strip_map(
    rep: &Representation,
    surface: Surface,
    cocycle: &Cocycle,
    opts: &InversionOptions,
) -> Result<Inversion> {
    let report = admissibility_test(
        rep,
        cocycle,
        opts.admissibility_len,
        opts.admissibility_threshold,
    )?;
    if report.verdict != AdmissibilityVerdict::Certified {
        return Err(Error::NotAdmissible(format!(
            "sweep verdict is {} with largest length ratio {:.6} on class '{}'",
            report.verdict, report.max_ratio, report.max_word
        )));
    }
    let target = class_vector(rep, cocycle)?;

    let mut unit_vectors: Vec<(ArcSpec, [f64; 3])> = Vec::new();
    let mut unit_vector = |spec: &ArcSpec| -> Result<[f64; 3]> {
        if let Some((_, v)) = unit_vectors.iter().find(|(s, _)| s == spec) {
            return Ok(*v);
        }
        let single = ArcSystem::new(vec![*spec])?;
        let data = StripMapData::new(rep.clone(), &single, &[1.0])?;
        let v = class_vector(rep, &data.strip_cocycle()?)?;
        unit_vectors.push((*spec, v));
        Ok(v)
    };

    let mut patterns = Vec::new();
    let mut solutions = Vec::new();
    for tri in filling_triangles(surface, opts.max_slope)? {
        let mut cols = [[0.0; 3]; 3];
        for (c, spec) in tri.arcs().iter().enumerate() {
            cols[c] = unit_vector(spec)?;
        }
        match solve3(cols, target) {
            Some(w) => {
                patterns.push((tri.label(), w.to_vec()));
                if w.iter().all(|x| *x > opts.positivity_tol) {
                    solutions.push((tri, w));
                }
            }
            None => patterns.push((tri.label(), vec![f64::NAN; 3])),
        }
    }
    match solutions.into_iter().next() {
        Some((system, weights)) => Ok(Inversion {
            system,
            weights: weights.to_vec(),
            class_vector: target,
            candidates: patterns
                .iter()
                .filter(|(_, w)| w.iter().all(|x| *x > opts.positivity_tol))
                .count(),
            patterns,
        }),
        None => Err(Error::NoPositiveSolution { patterns }),
    }
}
