//! Contracting equivariant maps and vector fields.
//!
//! Properness of a deformed action is certified here in two equivalent
//! ways: at the group level by an equivariant map of the hyperbolic plane
//! whose Lipschitz constant is strictly below one, and at the algebra
//! level by an equivariant vector field whose flow uniformly shrinks
//! distances. [`domain`] provides the sampling grids and pair samplers
//! the certificates are measured on, [`sweeps`] the word sweeps that
//! bound length ratios, and this module the map and field types, the
//! constructors that sharpen raw strip data into uniform contractions,
//! and the fixed-point and zero solvers that turn a certified
//! contraction into the center of a fibration by timelike lines.
//!
//! The sharpened objects are built by extension from orbit anchors. The
//! raw collapse map is only piecewise contracting — it is an isometry on
//! each complementary piece — but its restriction to an orbit of the
//! basepoint contracts every pair strictly, because the geodesic between
//! distinct orbit points crosses the (filling) arc system. Extending the
//! anchored values to arbitrary points, one point at a time, by minimax
//! extension spreads that contraction everywhere. The field case is the
//! infinitesimal analog: anchor values come from the cocycle, and the
//! extension solves a small feasibility problem asking every anchored
//! pair derivative to stay below a negative rate.
//!
//! Sampled maps and fields store the extension on a chart rectangle
//! covering the fundamental domain and a collar, and reach the whole
//! plane by the defining equivariance: every query is first folded into
//! the domain, read there, and mapped back. The fold is deterministic,
//! so the extension satisfies its equivariance law to rounding error.
//! Every Lipschitz or contraction bound stored on these objects is a
//! measured maximum over a declared sampler — a certificate on the
//! sampled set, not a closed-form proof.

pub mod domain;
pub mod sweeps;

pub use domain::{max_stretch, ChartGrid, ChartRect, PairSampler, SampledField, SampledMap};
pub use sweeps::{
    admissibility_test, dlambda, length_ratio, length_ratio_sup, properness_violation_search,
    AdmissibilityReport, AdmissibilityVerdict, PropernessWitness,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{
    hyp_dist, hyp_exp, hyp_interp, hyp_log, AlgebraElement, GroupElement, HPoint, TangentVector,
};
use crate::rep::schottky::PingPongCertificate;
use crate::rep::{reduced_words, Cocycle, Representation, Word};
use crate::strip::StripMapData;
use crate::tol;

/// Orbit anchors of a map: images of one basepoint orbit, the values the
/// equivariant extension must respect.
#[derive(Debug, Clone)]
pub struct MapAnchors {
    points: Vec<HPoint>,
    images: Vec<HPoint>,
}

impl MapAnchors {
    /// Pins one more constraint, e.g. a freshly extended grid node.
    fn push(&mut self, p: HPoint, q: HPoint) {
        self.points.push(p);
        self.images.push(q);
    }

    /// Largest pair stretch ratio among the anchors.
    fn pair_ratio(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.points.len() {
            for k in 0..i {
                let d = hyp_dist(self.points[i], self.points[k]);
                if d < 1e-9 {
                    continue;
                }
                worst = worst.max(hyp_dist(self.images[i], self.images[k]) / d);
            }
        }
        worst
    }

    /// Minimax extension at one point: the image minimizing the largest
    /// stretch ratio against every anchor. The descent works on the
    /// nearest anchors and then verifies against all of them, pulling in
    /// any violated far anchor and re-solving.
    fn extend(&self, p: HPoint) -> HPoint {
        let mut dists = Vec::with_capacity(self.points.len());
        let mut nearest = (f64::INFINITY, 0usize);
        for (i, &a) in self.points.iter().enumerate() {
            let d = hyp_dist(p, a);
            if d < nearest.0 {
                nearest = (d, i);
            }
            dists.push(d.max(1e-9));
        }
        if nearest.0 < 1e-7 {
            return self.images[nearest.1];
        }
        let mut active: Vec<usize> = (0..self.points.len()).collect();
        if active.len() > 96 {
            active.sort_by(|&i, &k| dists[i].total_cmp(&dists[k]));
            active.truncate(96);
        }
        let mut q = self.images[nearest.1];
        for _ in 0..4 {
            let objective = |c: HPoint| -> f64 {
                active
                    .iter()
                    .map(|&i| hyp_dist(c, self.images[i]) / dists[i])
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            q = nelder_mead(objective, q, 0.3);
            let val = objective(q);
            let mut worst = (val + 1e-9, usize::MAX);
            for i in 0..self.points.len() {
                let r = hyp_dist(q, self.images[i]) / dists[i];
                if r > worst.0 {
                    worst = (r, i);
                }
            }
            if worst.1 == usize::MAX {
                break;
            }
            active.push(worst.1);
        }
        q
    }
}

/// Orbit anchors of a field: cocycle values along one basepoint orbit.
#[derive(Debug, Clone)]
pub struct FieldAnchors {
    points: Vec<HPoint>,
    values: Vec<TangentVector>,
    /// Contraction rate the extension asks for: pair derivatives against
    /// every anchor at most -kappa.
    kappa: f64,
}

impl FieldAnchors {
    /// Pins one more constraint, e.g. a freshly extended grid node.
    fn push(&mut self, p: HPoint, v: TangentVector) {
        self.points.push(p);
        self.values.push(v);
    }

    /// Largest pair derivative among the anchors.
    fn pair_rate(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..self.points.len() {
            for k in 0..i {
                let d = hyp_dist(self.points[i], self.points[k]);
                if d < 1e-9 {
                    continue;
                }
                let ei = unit_toward(self.points[i], self.points[k]);
                let ek = unit_away(self.points[k], self.points[i]);
                worst = worst.max((self.values[k].inner(&ek) - self.values[i].inner(&ei)) / d);
            }
        }
        worst
    }

    /// Extension at one point: the smallest vector whose pair derivative
    /// against every anchor stays below -kappa, retreating on the rate
    /// when the constraints pinch. The solve works on the nearest
    /// anchors and then verifies against all of them, pulling in any
    /// violated far anchor and re-solving.
    fn extend(&self, p: HPoint) -> TangentVector {
        let mut normals = Vec::with_capacity(self.points.len());
        let mut slopes = Vec::with_capacity(self.points.len());
        for (i, &a) in self.points.iter().enumerate() {
            let d = hyp_dist(p, a);
            if d < 1e-7 {
                return TangentVector::new(p, self.values[i].vx, self.values[i].vy);
            }
            // Pair (a, p): require (<Y(p), e_p> - <Y_i, e_a>)/d <= -kappa.
            let ep = unit_away(p, a);
            let ea = unit_toward(a, p);
            normals.push((ep.vx / p.y, ep.vy / p.y));
            slopes.push((self.values[i].inner(&ea), d));
        }
        let mut active: Vec<usize> = (0..self.points.len()).collect();
        if active.len() > 96 {
            active.sort_by(|&i, &k| slopes[i].1.total_cmp(&slopes[k].1));
            active.truncate(96);
        }
        let mut best = (0.0, 0.0);
        for _ in 0..4 {
            let sub_normals: Vec<(f64, f64)> = active.iter().map(|&i| normals[i]).collect();
            let mut kappa = self.kappa;
            let mut found = None;
            for _ in 0..8 {
                let rhs: Vec<f64> = active
                    .iter()
                    .map(|&i| slopes[i].0 - kappa * slopes[i].1)
                    .collect();
                if let Some(v) = min_norm_in_halfplanes(&sub_normals, &rhs) {
                    found = Some((v, kappa));
                    break;
                }
                kappa *= 0.5;
            }
            let (v, kappa) = found.unwrap_or_else(|| {
                let rhs: Vec<f64> = active.iter().map(|&i| slopes[i].0 + 1e-9).collect();
                (
                    min_norm_in_halfplanes(&sub_normals, &rhs).unwrap_or((0.0, 0.0)),
                    0.0,
                )
            });
            best = v;
            let mut worst = (1e-9, usize::MAX);
            for i in 0..self.points.len() {
                let gap = normals[i].0 * v.0 + normals[i].1 * v.1
                    - (slopes[i].0 - kappa * slopes[i].1);
                if gap > worst.0 {
                    worst = (gap, i);
                }
            }
            if worst.1 == usize::MAX {
                break;
            }
            active.push(worst.1);
        }
        TangentVector::new(p, best.0 * p.y, best.1 * p.y)
    }
}

/// Unit tangent at p pointing toward q.
fn unit_toward(p: HPoint, q: HPoint) -> TangentVector {
    let v = hyp_log(p, q);
    v.scale(1.0 / v.norm())
}

/// Unit tangent at p pointing away from q.
fn unit_away(p: HPoint, q: HPoint) -> TangentVector {
    let v = hyp_log(p, q);
    v.scale(-1.0 / v.norm())
}

/// The point of the intersection of half-planes n_i . v <= b_i closest
/// to the origin, in orthonormal coordinates; None when empty. Exact
/// active-set enumeration: the minimizer is the origin, sits on one
/// boundary line, or on the intersection of two.
fn min_norm_in_halfplanes(normals: &[(f64, f64)], rhs: &[f64]) -> Option<(f64, f64)> {
    let feasible = |v: (f64, f64)| -> bool {
        normals
            .iter()
            .zip(rhs)
            .all(|(&(nx, ny), &b)| nx * v.0 + ny * v.1 <= b + 1e-10)
    };
    if feasible((0.0, 0.0)) {
        return Some((0.0, 0.0));
    }
    let mut best: Option<((f64, f64), f64)> = None;
    let mut consider = |v: (f64, f64)| {
        if feasible(v) {
            let n = v.0 * v.0 + v.1 * v.1;
            if best.map_or(true, |(_, bn)| n < bn) {
                best = Some((v, n));
            }
        }
    };
    for (i, &(nx, ny)) in normals.iter().enumerate() {
        let n2 = nx * nx + ny * ny;
        if n2 < 1e-18 {
            continue;
        }
        let t = rhs[i] / n2;
        consider((nx * t, ny * t));
        for (k, &(mx, my)) in normals.iter().enumerate().take(i) {
            let det = nx * my - ny * mx;
            if det.abs() < 1e-14 {
                continue;
            }
            let v = (
                (rhs[i] * my - ny * rhs[k]) / det,
                (nx * rhs[k] - rhs[i] * mx) / det,
            );
            let _ = k;
            consider(v);
        }
    }
    best.map(|(v, _)| v)
}

/// Nelder–Mead descent over the chart, used for the minimax extensions;
/// deterministic, with one restart at the incumbent to sharpen kinks.
fn nelder_mead<F>(objective: F, seed: HPoint, scale: f64) -> HPoint
where
    F: Fn(HPoint) -> f64,
{
    let eval = |z: (f64, f64)| -> f64 {
        match HPoint::new(z.0, z.1.exp()) {
            Ok(p) => objective(p),
            Err(_) => f64::INFINITY,
        }
    };
    let mut start = (seed.x, seed.y.ln());
    let mut step = scale;
    for _ in 0..2 {
        let mut simplex = [
            (start, eval(start)),
            ((start.0 + step, start.1), f64::NAN),
            ((start.0, start.1 + step), f64::NAN),
        ];
        simplex[1].1 = eval(simplex[1].0);
        simplex[2].1 = eval(simplex[2].0);
        for _ in 0..160 {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = hypot2(simplex[0].0, simplex[2].0);
            if spread < 1e-12 {
                break;
            }
            let c = (
                0.5 * (simplex[0].0 .0 + simplex[1].0 .0),
                0.5 * (simplex[0].0 .1 + simplex[1].0 .1),
            );
            let worst = simplex[2];
            let refl = (2.0 * c.0 - worst.0 .0, 2.0 * c.1 - worst.0 .1);
            let fr = eval(refl);
            if fr < simplex[0].1 {
                let exp = (c.0 + 2.0 * (refl.0 - c.0), c.1 + 2.0 * (refl.1 - c.1));
                let fe = eval(exp);
                simplex[2] = if fe < fr { (exp, fe) } else { (refl, fr) };
            } else if fr < simplex[1].1 {
                simplex[2] = (refl, fr);
            } else {
                let con = (
                    c.0 + 0.5 * (worst.0 .0 - c.0),
                    c.1 + 0.5 * (worst.0 .1 - c.1),
                );
                let fc = eval(con);
                if fc < worst.1 {
                    simplex[2] = (con, fc);
                } else {
                    for k in 1..3 {
                        simplex[k].0 = (
                            0.5 * (simplex[k].0 .0 + simplex[0].0 .0),
                            0.5 * (simplex[k].0 .1 + simplex[0].0 .1),
                        );
                        simplex[k].1 = eval(simplex[k].0);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        start = simplex[0].0;
        step = scale * 0.05;
    }
    HPoint::new(start.0, start.1.exp()).unwrap_or(seed)
}

fn hypot2(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, du) = (a.0 - b.0, a.1 - b.1);
    (dx * dx + du * du).sqrt()
}

/// How an equivariant map stores its values.
#[derive(Debug, Clone)]
pub enum MapKind {
    /// Constant map to one point; equivariant for the trivial target.
    Constant(HPoint),
    /// A single isometry; equivariant for the conjugated target.
    Isometry(GroupElement),
    /// The piecewise-isometric strip collapse map.
    Collapse(Box<StripMapData>),
    /// Pointwise geodesic interpolation between two maps with the same
    /// equivariance pair.
    Blend {
        a: Box<EquivariantMap>,
        b: Box<EquivariantMap>,
        t: f64,
    },
    /// Grid samples of the anchored extension over a fundamental-domain
    /// chart, extended everywhere by folding queries into the domain;
    /// reads that fall off the grid re-run the extension directly.
    Sampled {
        samples: SampledMap,
        cert: PingPongCertificate,
        anchors: MapAnchors,
    },
    /// A fixed isometry after another map.
    PostComposed {
        post: GroupElement,
        inner: Box<EquivariantMap>,
    },
}

/// A map of the hyperbolic plane intertwining two holonomies: f(j(w)p) =
/// rho(w) f(p), carrying the Lipschitz bound it was last measured at.
#[derive(Debug, Clone)]
pub struct EquivariantMap {
    base: Representation,
    target: Representation,
    kind: MapKind,
    bound: f64,
}

impl EquivariantMap {
    /// The constant map to `value`, intertwining `base` with the trivial
    /// holonomy of the same rank. Lipschitz bound 0.
    pub fn constant(base: Representation, value: HPoint) -> EquivariantMap {
        let target = Representation::new(vec![GroupElement::IDENTITY; base.rank()]);
        EquivariantMap { base, target, kind: MapKind::Constant(value), bound: 0.0 }
    }

    /// The isometry `g` as a map intertwining `base` with its conjugate
    /// by `g`. Lipschitz bound 1.
    pub fn isometry(base: Representation, g: GroupElement) -> Result<EquivariantMap> {
        let gi = g.inverse();
        let gens = (0..base.rank())
            .map(|k| Ok(g * base.generator(k)? * gi))
            .collect::<Result<Vec<_>>>()?;
        Ok(EquivariantMap {
            base,
            target: Representation::new(gens),
            kind: MapKind::Isometry(g),
            bound: 1.0,
        })
    }

    /// The strip collapse map of a widened arc system, intertwining the
    /// base holonomy with the deformed one. Distance-nonincreasing but an
    /// isometry on each complementary piece, so it carries bound 1;
    /// [`EquivariantMap::sampled_contraction`] sharpens that below 1.
    pub fn collapse(data: StripMapData) -> Result<EquivariantMap> {
        let target = data.deformed_holonomy()?;
        Ok(EquivariantMap {
            base: data.rep().clone(),
            target,
            kind: MapKind::Collapse(Box::new(data)),
            bound: 1.0,
        })
    }

    /// Post-composes with a fixed isometry; the target holonomy is
    /// conjugated and the bound is unchanged.
    pub fn post_compose(self, g: GroupElement) -> Result<EquivariantMap> {
        let gi = g.inverse();
        let gens = (0..self.target.rank())
            .map(|k| Ok(g * self.target.generator(k)? * gi))
            .collect::<Result<Vec<_>>>()?;
        Ok(EquivariantMap {
            base: self.base.clone(),
            target: Representation::new(gens),
            bound: self.bound,
            kind: MapKind::PostComposed { post: g, inner: Box::new(self) },
        })
    }

    /// Builds a uniformly contracting sampled map from strip data. The
    /// collapse map restricted to the basepoint orbit contracts every
    /// pair strictly — orbit segments are essential loops downstairs and
    /// must cross the arc system — so its minimax extension off the orbit
    /// inherits the contraction. Grid values cache the extension; the
    /// carried bound is the largest stretch measured on the options'
    /// pair sampler.
    pub fn sampled_contraction(
        data: StripMapData,
        cert: &PingPongCertificate,
        opts: &SamplingOptions,
    ) -> Result<EquivariantMap> {
        let base = data.rep().clone();
        let target = data.deformed_holonomy()?;
        let b = data.basepoint();
        let words = reduced_words(base.rank(), opts.anchor_depth);
        let mut points = Vec::with_capacity(words.len());
        let mut images = Vec::with_capacity(words.len());
        for w in &words {
            points.push(base.evaluate(w)?.apply(b));
            images.push(target.evaluate(w)?.apply(b));
        }
        let mut anchors = MapAnchors { points, images };
        let ratio = anchors.pair_ratio();
        if !(ratio < 1.0) {
            return Err(Error::NoContraction(ratio));
        }

        // Sequential extension, nearest nodes first: each assigned node
        // becomes a constraint for the later ones. Independent per-node
        // extension would leave nearby nodes free to equalize against
        // different anchors and jump; pinning restores the Lipschitz
        // control the anchors certify. Each assignment is also pinned at
        // its generator translates inside the chart, keeping the
        // constraint cloud equivariant where fundamental-domain walls
        // cross the grid — evaluation folds at those walls, and without
        // the translated pins the folded map would jump there.
        let rect = opts.rect.unwrap_or_else(|| auto_rect(&data));
        let letters: Vec<(GroupElement, GroupElement)> = reduced_words(base.rank(), 1)
            [1..]
            .iter()
            .map(|w| Ok((base.evaluate(w)?, target.evaluate(w)?)))
            .collect::<Result<Vec<_>>>()?;
        let pin_zone = rect.inset(-0.6);
        let grid = ChartGrid::new(rect, opts.spacing)?;
        let mut order: Vec<usize> = (0..grid.len()).collect();
        order.sort_by(|&m, &n| {
            hyp_dist(grid.node(m), b).total_cmp(&hyp_dist(grid.node(n), b))
        });
        let mut values = vec![b; grid.len()];
        for n in order {
            let node = grid.node(n);
            let v = anchors.extend(node);
            anchors.push(node, v);
            values[n] = v;
            for (j, r) in &letters {
                let tn = j.apply(node);
                if pin_zone.contains(tn) {
                    anchors.push(tn, r.apply(v));
                }
            }
        }
        let samples = SampledMap::new(grid, values)?;

        let sampler = PairSampler::new(
            rect.inset(opts.measure_margin),
            opts.pair_count,
            &opts.separations,
            opts.seed,
        );
        let mut map = EquivariantMap {
            base,
            target,
            kind: MapKind::Sampled { samples, cert: cert.clone(), anchors },
            bound: 1.0,
        };
        map.bound = map_lipschitz_sampled(&map, &sampler)?;
        Ok(map)
    }

    pub fn base(&self) -> &Representation {
        &self.base
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    /// The Lipschitz bound this map currently carries: declared for exact
    /// kinds, measured on a sampler for sampled ones.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Replaces the carried bound, e.g. after re-measuring on a sampler.
    pub fn with_bound(mut self, bound: f64) -> EquivariantMap {
        self.bound = bound;
        self
    }

    /// A point well inside the region where evaluation is trusted; the
    /// solvers start their iterations here.
    pub fn start_point(&self) -> HPoint {
        match &self.kind {
            MapKind::Constant(p) => *p,
            MapKind::Isometry(_) => HPoint::I,
            MapKind::Collapse(d) => d.basepoint(),
            MapKind::Blend { a, .. } => a.start_point(),
            MapKind::Sampled { anchors, .. } => anchors.points[0],
            MapKind::PostComposed { inner, .. } => inner.start_point(),
        }
    }

    pub fn evaluate(&self, p: HPoint) -> Result<HPoint> {
        match &self.kind {
            MapKind::Constant(q) => Ok(*q),
            MapKind::Isometry(g) => Ok(g.apply(p)),
            MapKind::Collapse(d) => d.evaluate(p),
            MapKind::Blend { a, b, t } => Ok(hyp_interp(a.evaluate(p)?, b.evaluate(p)?, *t)),
            MapKind::Sampled { samples, cert, anchors } => {
                let (w, x0) = cert.fold(&self.base, p)?;
                let v = match samples.interp(x0) {
                    Some(v) => v,
                    None => anchors.extend(x0),
                };
                Ok(self.target.evaluate(&w)?.apply(v))
            }
            MapKind::PostComposed { post, inner } => Ok(post.apply(inner.evaluate(p)?)),
        }
    }
}

/// How an equivariant field stores its values.
#[derive(Debug, Clone)]
pub enum FieldKind {
    /// A single Killing field; its cocycle is the matching coboundary.
    Killing(AlgebraElement),
    /// Unit vectors pointing at a center: the negative gradient of the
    /// distance to it. Not equivariant; a calibration field.
    RadialUnit { center: HPoint },
    /// Inward pull proportional to the distance from a center: the
    /// negative gradient of half the squared distance. Not equivariant;
    /// uniformly contracting with rate equal to its strength.
    RadialPull { center: HPoint, strength: f64 },
    /// Derivative of a strip deformation: piecewise Killing, jumping
    /// across each arc lift by a weighted translation generator.
    Strip(Box<StripMapData>),
    /// Grid samples of the anchored extension, reached by folding queries
    /// into the fundamental domain and correcting with the cocycle.
    Sampled {
        samples: SampledField,
        cert: PingPongCertificate,
        anchors: FieldAnchors,
    },
    /// Pointwise sum of two fields over compatible bases.
    Sum(Box<EquivariantField>, Box<EquivariantField>),
}

/// A vector field on the hyperbolic plane transforming by Y(j(w)p) =
/// j(w)_* Y(p) + u(w)(j(w)p) for a cocycle u, carrying the contraction
/// bound it was last measured at (negative bounds certify contraction).
#[derive(Debug, Clone)]
pub struct EquivariantField {
    base: Representation,
    cocycle: Option<Cocycle>,
    kind: FieldKind,
    bound: f64,
}

impl EquivariantField {
    /// A Killing field: infinitesimal isometry, so its pair derivative
    /// vanishes identically and the bound is 0. Its cocycle is the
    /// coboundary w -> X - Ad(j(w)) X.
    pub fn killing(base: Representation, x: AlgebraElement) -> Result<EquivariantField> {
        let values = (0..base.rank())
            .map(|k| Ok(x - base.generator(k)?.adjoint(&x)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EquivariantField {
            base,
            cocycle: Some(Cocycle::new(values)),
            kind: FieldKind::Killing(x),
            bound: 0.0,
        })
    }

    /// The unit field pointing at `center`; pair derivatives are never
    /// positive, so it carries bound 0.
    pub fn radial_unit(center: HPoint) -> EquivariantField {
        EquivariantField {
            base: Representation::new(Vec::new()),
            cocycle: None,
            kind: FieldKind::RadialUnit { center },
            bound: 0.0,
        }
    }

    /// The field pulling toward `center` with speed `strength` times the
    /// distance; uniformly contracting at rate `-strength`.
    pub fn radial_pull(center: HPoint, strength: f64) -> Result<EquivariantField> {
        if !(strength > 0.0) {
            return Err(Error::InvalidInput(format!(
                "pull strength must be positive, got {strength}"
            )));
        }
        Ok(EquivariantField {
            base: Representation::new(Vec::new()),
            cocycle: None,
            kind: FieldKind::RadialPull { center, strength },
            bound: -strength,
        })
    }

    /// The infinitesimal strip deformation field of a weighted arc
    /// system, with its cocycle. Piecewise Killing: contraction lives
    /// entirely in the jumps, so the honest uniform bound is 0 until
    /// [`EquivariantField::sampled_contraction`] spreads it.
    pub fn strip(data: StripMapData) -> Result<EquivariantField> {
        let cocycle = data.strip_cocycle()?;
        Ok(EquivariantField {
            base: data.rep().clone(),
            cocycle: Some(cocycle),
            kind: FieldKind::Strip(Box::new(data)),
            bound: 0.0,
        })
    }

    /// Pointwise sum. Pair derivatives add, so the bounds add; cocycles
    /// add when both sides have one. Bases must agree unless one side is
    /// a baseless calibration field.
    pub fn sum(self, other: EquivariantField) -> Result<EquivariantField> {
        let base = match (self.base.rank(), other.base.rank()) {
            (_, 0) => self.base.clone(),
            (0, _) => other.base.clone(),
            (r, s) => {
                if r != s {
                    return Err(Error::InvalidInput(
                        "summed fields must share the base holonomy".into(),
                    ));
                }
                for k in 0..r {
                    if !self.base.generator(k)?.approx_eq(&other.base.generator(k)?, 1e-8) {
                        return Err(Error::InvalidInput(
                            "summed fields must share the base holonomy".into(),
                        ));
                    }
                }
                self.base.clone()
            }
        };
        let cocycle = match (&self.cocycle, &other.cocycle) {
            (Some(u), Some(v)) => Some(add_cocycles(u, v)?),
            (Some(u), None) | (None, Some(u)) => Some(u.clone()),
            (None, None) => None,
        };
        let bound = self.bound + other.bound;
        Ok(EquivariantField {
            base,
            cocycle,
            kind: FieldKind::Sum(Box::new(self), Box::new(other)),
            bound,
        })
    }

    /// Builds a uniformly contracting sampled field from strip data. The
    /// cocycle values along the basepoint orbit have strictly negative
    /// pair derivatives — the first variation of an essential loop's
    /// length under the deformation — and the anchored extension asks
    /// every off-orbit value to keep those derivatives below the measured
    /// orbit rate. The carried bound is the largest pair derivative
    /// measured on the options' sampler; certification needs it strictly
    /// negative.
    pub fn sampled_contraction(
        data: StripMapData,
        cert: &PingPongCertificate,
        opts: &SamplingOptions,
    ) -> Result<EquivariantField> {
        let base = data.rep().clone();
        let cocycle = data.strip_cocycle()?;
        let b = data.basepoint();
        let words = reduced_words(base.rank(), opts.anchor_depth);
        let mut points = Vec::with_capacity(words.len());
        let mut values = Vec::with_capacity(words.len());
        for w in &words {
            let p = base.evaluate(w)?.apply(b);
            points.push(p);
            values.push(cocycle.evaluate(&base, w)?.eval_at(p));
        }
        let mut anchors = FieldAnchors { points, values, kappa: 0.0 };
        let rate = anchors.pair_rate();
        if !(rate < 0.0) {
            return Err(Error::NoContraction(rate));
        }
        anchors.kappa = -rate;

        // Sequential extension mirroring the map builder: every assigned
        // node enters the rate constraints of the nodes after it, and is
        // pinned at its generator translates (transformed by the cocycle
        // law) so the folded field stays continuous across wall crossings.
        let rect = opts.rect.unwrap_or_else(|| auto_rect(&data));
        let letters: Vec<(GroupElement, AlgebraElement)> = reduced_words(base.rank(), 1)
            [1..]
            .iter()
            .map(|w| Ok((base.evaluate(w)?, cocycle.evaluate(&base, w)?)))
            .collect::<Result<Vec<_>>>()?;
        let pin_zone = rect.inset(-0.6);
        let grid = ChartGrid::new(rect, opts.spacing)?;
        let mut order: Vec<usize> = (0..grid.len()).collect();
        order.sort_by(|&m, &n| {
            hyp_dist(grid.node(m), b).total_cmp(&hyp_dist(grid.node(n), b))
        });
        let mut values = vec![TangentVector::new(b, 0.0, 0.0); grid.len()];
        for n in order {
            let node = grid.node(n);
            let v = anchors.extend(node);
            anchors.push(node, v);
            values[n] = v;
            for (j, u) in &letters {
                let tn = j.apply(node);
                if pin_zone.contains(tn) {
                    let pushed = j.push(&v);
                    let corr = u.eval_at(tn);
                    anchors.push(
                        tn,
                        TangentVector::new(tn, pushed.vx + corr.vx, pushed.vy + corr.vy),
                    );
                }
            }
        }
        let samples = SampledField::new(grid, values)?;

        let sampler = PairSampler::new(
            rect.inset(opts.measure_margin),
            opts.pair_count,
            &opts.separations,
            opts.seed,
        );
        let mut field = EquivariantField {
            base,
            cocycle: Some(cocycle),
            kind: FieldKind::Sampled { samples, cert: cert.clone(), anchors },
            bound: 0.0,
        };
        field.bound = field_lipschitz_sampled(&field, &sampler)?;
        Ok(field)
    }

    pub fn base(&self) -> &Representation {
        &self.base
    }

    /// The cocycle this field transforms by; None for the calibration
    /// fields, which are not equivariant.
    pub fn cocycle(&self) -> Option<&Cocycle> {
        self.cocycle.as_ref()
    }

    /// The contraction bound this field currently carries: largest pair
    /// derivative, declared for exact kinds and measured for sampled
    /// ones. Negative values certify contraction on the sampled set.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn with_bound(mut self, bound: f64) -> EquivariantField {
        self.bound = bound;
        self
    }

    /// A point well inside the region where evaluation is trusted.
    pub fn start_point(&self) -> HPoint {
        match &self.kind {
            FieldKind::Killing(_) => HPoint::I,
            FieldKind::RadialUnit { center } | FieldKind::RadialPull { center, .. } => *center,
            FieldKind::Strip(d) => d.basepoint(),
            FieldKind::Sampled { anchors, .. } => anchors.points[0],
            FieldKind::Sum(a, _) => a.start_point(),
        }
    }

    pub fn evaluate(&self, p: HPoint) -> Result<TangentVector> {
        match &self.kind {
            FieldKind::Killing(x) => Ok(x.eval_at(p)),
            FieldKind::RadialUnit { center } => {
                let v = hyp_log(p, *center);
                let n = v.norm();
                if n < 1e-12 {
                    return Ok(TangentVector::new(p, 0.0, 0.0));
                }
                Ok(v.scale(1.0 / n))
            }
            FieldKind::RadialPull { center, strength } => {
                Ok(hyp_log(p, *center).scale(*strength))
            }
            FieldKind::Strip(d) => d.infinitesimal_field(p),
            FieldKind::Sampled { samples, cert, anchors } => {
                let (w, x0) = cert.fold(&self.base, p)?;
                let v = match samples.interp(x0) {
                    Some(v) => v,
                    None => anchors.extend(x0),
                };
                let pushed = self.base.evaluate(&w)?.push(&v);
                let u = self
                    .cocycle
                    .as_ref()
                    .expect("sampled fields carry their strip cocycle")
                    .evaluate(&self.base, &w)?
                    .eval_at(p);
                Ok(TangentVector::new(p, pushed.vx + u.vx, pushed.vy + u.vy))
            }
            FieldKind::Sum(a, b) => {
                let va = a.evaluate(p)?;
                let vb = b.evaluate(p)?;
                Ok(TangentVector::new(p, va.vx + vb.vx, va.vy + vb.vy))
            }
        }
    }
}

fn add_cocycles(u: &Cocycle, v: &Cocycle) -> Result<Cocycle> {
    if u.rank() != v.rank() {
        return Err(Error::InvalidInput(
            "summed cocycles must share the generator count".into(),
        ));
    }
    let values = (0..u.rank())
        .map(|k| Ok(u.generator_value(k)? + v.generator_value(k)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Cocycle::new(values))
}

/// Default chart rectangle for sampling a strip datum: as wide as the
/// keep radius allows while staying clear of the untrusted fringe.
fn auto_rect(data: &StripMapData) -> ChartRect {
    let r = (data.keep_radius() - 1.1).max(1.0);
    let u_hi = (0.8 * r).min(2.2);
    let u_lo = -(0.55 * r).min(1.5);
    let y0 = u_lo.exp();
    let reach = (2.0 * y0 * (r.cosh() - 1.0) - (1.0 - y0) * (1.0 - y0)).max(1.0);
    let xr = reach.sqrt().min(7.0);
    ChartRect { x: (-xr, xr), u: (u_lo, u_hi) }
}

/// Knobs for the anchored-extension builders and the bound measurement.
#[derive(Debug, Clone)]
pub struct SamplingOptions {
    /// Chart rectangle to sample; None derives one from the keep radius.
    pub rect: Option<ChartRect>,
    /// Grid spacing in chart units.
    pub spacing: f64,
    /// Word length up to which orbit anchors are enumerated.
    pub anchor_depth: usize,
    /// Pairs per separation for the bound measurement.
    pub pair_count: usize,
    /// Pair separations to measure at.
    pub separations: Vec<f64>,
    pub seed: u64,
    /// Margin insetting the measurement region away from the grid edge.
    pub measure_margin: f64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions {
            rect: None,
            spacing: 0.14,
            anchor_depth: 3,
            pair_count: 300,
            separations: vec![0.15, 0.4, 1.0],
            seed: 7,
            measure_margin: 1.0,
        }
    }
}

/// First-variation derivative of the distance between flow lines,
/// normalized by the distance: the rate at which the field stretches the
/// pair (p, q). Uniformly negative values certify contraction.
pub fn field_lipschitz_pair(y: &EquivariantField, p: HPoint, q: HPoint) -> Result<f64> {
    let d = hyp_dist(p, q);
    if d < 1e-12 {
        return Err(Error::CoincidentPoints);
    }
    let ep = unit_toward(p, q);
    let eq = unit_away(q, p);
    Ok((y.evaluate(q)?.inner(&eq) - y.evaluate(p)?.inner(&ep)) / d)
}

/// Largest stretch ratio of the map over the sampler's pairs.
pub fn map_lipschitz_sampled(f: &EquivariantMap, sampler: &PairSampler) -> Result<f64> {
    max_stretch(sampler, |p| f.evaluate(p))
}

/// Largest pair derivative of the field over the sampler's pairs.
pub fn field_lipschitz_sampled(y: &EquivariantField, sampler: &PairSampler) -> Result<f64> {
    let pairs = sampler.pairs();
    if pairs.is_empty() {
        return Err(Error::InvalidInput("the sampler produced no pairs".into()));
    }
    let mut worst = f64::NEG_INFINITY;
    for (p, q) in pairs {
        worst = worst.max(field_lipschitz_pair(y, p, q)?);
    }
    Ok(worst)
}

/// Largest equivariance defect of the map over the given words and
/// points: distance between f(j(w)p) and rho(w) f(p).
pub fn map_equivariance_residual(
    f: &EquivariantMap,
    words: &[Word],
    points: &[HPoint],
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for w in words {
        let jw = f.base().evaluate(w)?;
        let rw = f.target().evaluate(w)?;
        for &p in points {
            let lhs = f.evaluate(jw.apply(p))?;
            let rhs = rw.apply(f.evaluate(p)?);
            worst = worst.max(hyp_dist(lhs, rhs));
        }
    }
    Ok(worst)
}

/// Largest equivariance defect of the field over the given words and
/// points: norm of Y(j(w)p) - j(w)_* Y(p) - u(w)(j(w)p).
pub fn field_equivariance_residual(
    y: &EquivariantField,
    words: &[Word],
    points: &[HPoint],
) -> Result<f64> {
    let u = y
        .cocycle()
        .ok_or_else(|| Error::InvalidInput("the field carries no cocycle".into()))?;
    let mut worst = 0.0_f64;
    for w in words {
        let jw = y.base().evaluate(w)?;
        let uw = u.evaluate(y.base(), w)?;
        for &p in points {
            let moved = jw.apply(p);
            let lhs = y.evaluate(moved)?;
            let pushed = jw.push(&y.evaluate(p)?);
            let corr = uw.eval_at(moved);
            let dx = lhs.vx - pushed.vx - corr.vx;
            let dy = lhs.vy - pushed.vy - corr.vy;
            worst = worst.max(TangentVector::new(moved, dx, dy).norm());
        }
    }
    Ok(worst)
}

/// Stopping rules shared by the fixed-point and zero solvers.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings { tol: tol::SOLVER_TOL, max_iters: tol::SOLVER_MAX_ITERS }
    }
}

fn chart(p: HPoint) -> (f64, f64) {
    (p.x, p.y.ln())
}

fn unchart(z: (f64, f64)) -> Option<HPoint> {
    if !z.0.is_finite() || !z.1.is_finite() || z.1.abs() > 30.0 {
        return None;
    }
    HPoint::new(z.0, z.1.exp()).ok()
}

/// Aitken extrapolation of three iterates in the chart read as complex
/// numbers, which also resolves rotating (spiraling) linear tails.
fn aitken_complex(z0: (f64, f64), z1: (f64, f64), z2: (f64, f64)) -> Option<(f64, f64)> {
    let d1 = (z1.0 - z0.0, z1.1 - z0.1);
    let d2 = (z2.0 - z1.0, z2.1 - z1.1);
    let den = (d2.0 - d1.0, d2.1 - d1.1);
    let n2 = den.0 * den.0 + den.1 * den.1;
    if n2 < 1e-28 {
        return None;
    }
    let num = (d2.0 * d2.0 - d2.1 * d2.1, 2.0 * d2.0 * d2.1);
    let q = (
        (num.0 * den.0 + num.1 * den.1) / n2,
        (num.1 * den.0 - num.0 * den.1) / n2,
    );
    let out = (z2.0 - q.0, z2.1 - q.1);
    if out.0.is_finite() && out.1.is_finite() {
        Some(out)
    } else {
        None
    }
}

/// Iterates `step` to a fixed point, extrapolating every third iterate
/// and damping the tail if plain iteration is not making progress.
fn iterate_to_fixed_point<F>(mut step: F, start: HPoint, s: &SolverSettings) -> Result<HPoint>
where
    F: FnMut(HPoint) -> Result<HPoint>,
{
    let mut p = start;
    let mut trail: Vec<(f64, f64)> = Vec::new();
    for it in 0..s.max_iters {
        let q = step(p)?;
        let resid = hyp_dist(p, q);
        if resid < s.tol {
            return Ok(q);
        }
        let next = if 2 * it > s.max_iters {
            hyp_interp(p, q, 0.5)
        } else {
            q
        };
        trail.push(chart(next));
        if trail.len() == 3 {
            if let Some(z) = aitken_complex(trail[0], trail[1], trail[2]) {
                if let Some(c) = unchart(z) {
                    if let Ok(c2) = step(c) {
                        if hyp_dist(c, c2) < 0.5 * resid {
                            p = c;
                            trail.clear();
                            continue;
                        }
                    }
                }
            }
            trail.clear();
        }
        p = next;
    }
    Err(Error::MaxIterations(s.max_iters))
}

/// The unique fixed point of g^{-1} after the contracting map: Banach
/// iteration from the map's start point.
pub fn fixed_point(
    g: &GroupElement,
    f: &EquivariantMap,
    settings: &SolverSettings,
) -> Result<HPoint> {
    if !(f.bound() < 1.0) {
        return Err(Error::NoContraction(f.bound()));
    }
    let gi = g.inverse();
    iterate_to_fixed_point(|p| Ok(gi.apply(f.evaluate(p)?)), f.start_point(), settings)
}

/// The unique zero of Y - X for a uniformly contracting field Y: damped
/// flow along the residual, with step size capped by the contraction
/// rate and an extrapolation escape for rotating tails. The zero is
/// checked against its a-priori ball around the start.
pub fn zero_of_field(
    x: &AlgebraElement,
    y: &EquivariantField,
    settings: &SolverSettings,
) -> Result<HPoint> {
    if !(y.bound() < 0.0) {
        return Err(Error::NoContraction(y.bound()));
    }
    let c = -y.bound();
    let start = y.start_point();
    let residual = |p: HPoint| -> Result<TangentVector> {
        let yv = y.evaluate(p)?;
        let xv = x.eval_at(p);
        Ok(TangentVector::new(p, yv.vx - xv.vx, yv.vy - xv.vy))
    };
    let radius = residual(start)?.norm() / c;
    let accept = |p: HPoint| -> Result<HPoint> {
        if hyp_dist(start, p) > radius + 1e-6 {
            return Err(Error::InvalidInput(
                "the zero escaped its a-priori ball; the carried bound is not honest".into(),
            ));
        }
        Ok(p)
    };
    let mut p = start;
    let mut trail: Vec<(f64, f64)> = Vec::new();
    for _ in 0..settings.max_iters {
        let v = residual(p)?;
        let n = v.norm();
        if n < settings.tol {
            return accept(p);
        }
        let eta = (0.5_f64).min(0.5 * c / n);
        p = hyp_exp(&v.scale(eta));
        trail.push(chart(p));
        if trail.len() == 3 {
            if let Some(z) = aitken_complex(trail[0], trail[1], trail[2]) {
                if let Some(cand) = unchart(z) {
                    if let Ok(w) = residual(cand) {
                        if w.norm() < 0.5 * n {
                            p = cand;
                            if w.norm() < settings.tol {
                                return accept(p);
                            }
                        }
                    }
                }
            }
            trail.clear();
        }
    }
    Err(Error::MaxIterations(settings.max_iters))
}

/// Newton iteration for a zero of a vector field, with finite-difference
/// Jacobian in the chart; used where no contraction gate applies.
fn field_zero_newton<F>(field: F, start: HPoint, s: &SolverSettings) -> Result<HPoint>
where
    F: Fn(HPoint) -> Result<TangentVector>,
{
    let mut p = start;
    let h = 1e-6;
    for _ in 0..s.max_iters.min(200) {
        let v = field(p)?;
        if v.norm() < s.tol {
            return Ok(p);
        }
        let (x, u) = chart(p);
        let at = |x: f64, u: f64| -> Result<(f64, f64)> {
            let q = HPoint::new(x, u.exp())?;
            let w = field(q)?;
            Ok((w.vx, w.vy))
        };
        let f0 = (v.vx, v.vy);
        let fx = at(x + h, u)?;
        let fu = at(x, u + h)?;
        let j = [
            [(fx.0 - f0.0) / h, (fu.0 - f0.0) / h],
            [(fx.1 - f0.1) / h, (fu.1 - f0.1) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-18 {
            return Err(Error::InvalidInput(
                "singular field Jacobian in the zero search".into(),
            ));
        }
        let mut dx = (-f0.0 * j[1][1] + f0.1 * j[0][1]) / det;
        let mut du = (-f0.1 * j[0][0] + f0.0 * j[1][0]) / det;
        let norm = (dx * dx + du * du).sqrt();
        if norm > 0.5 {
            dx *= 0.5 / norm;
            du *= 0.5 / norm;
        }
        p = HPoint::new(x + dx, (u + du).exp())?;
    }
    Err(Error::MaxIterations(s.max_iters.min(200)))
}

/// A fibration of the group or of the algebra by the fibers of a
/// certified contraction: each group element (each algebra element) is
/// projected to the base point its fiber sits over.
#[derive(Debug, Clone)]
pub enum FibrationHandle {
    /// Group-level: fibers of g -> fixed point of g^{-1} after the map.
    Macro {
        map: EquivariantMap,
        settings: SolverSettings,
    },
    /// Algebra-level: fibers of X -> zero of Y - X.
    Micro {
        field: EquivariantField,
        settings: SolverSettings,
    },
}

impl FibrationHandle {
    /// Wraps a map whose measured bound is strictly below 1.
    pub fn of_map(map: EquivariantMap, settings: SolverSettings) -> Result<FibrationHandle> {
        if !(map.bound() < 1.0) {
            return Err(Error::NoContraction(map.bound()));
        }
        Ok(FibrationHandle::Macro { map, settings })
    }

    /// Wraps a field whose measured bound is strictly negative and that
    /// carries a cocycle.
    pub fn of_field(field: EquivariantField, settings: SolverSettings) -> Result<FibrationHandle> {
        if !(field.bound() < 0.0) {
            return Err(Error::NoContraction(field.bound()));
        }
        if field.cocycle().is_none() {
            return Err(Error::InvalidInput(
                "an algebra fibration needs an equivariant field with a cocycle".into(),
            ));
        }
        Ok(FibrationHandle::Micro { field, settings })
    }

    /// Base point of the fiber through a group element.
    pub fn project_group(&self, g: &GroupElement) -> Result<HPoint> {
        match self {
            FibrationHandle::Macro { map, settings } => fixed_point(g, map, settings),
            FibrationHandle::Micro { .. } => Err(Error::InvalidInput(
                "group projection needs the map-level fibration".into(),
            )),
        }
    }

    /// Base point of the fiber through an algebra element.
    pub fn project_algebra(&self, x: &AlgebraElement) -> Result<HPoint> {
        match self {
            FibrationHandle::Micro { field, settings } => zero_of_field(x, field, settings),
            FibrationHandle::Macro { .. } => Err(Error::InvalidInput(
                "algebra projection needs the field-level fibration".into(),
            )),
        }
    }

    /// Whether g lies in the fiber over p: g moves p exactly to f(p).
    pub fn group_fiber_contains(&self, g: &GroupElement, p: HPoint, tol: f64) -> Result<bool> {
        match self {
            FibrationHandle::Macro { map, .. } => {
                Ok(hyp_dist(g.apply(p), map.evaluate(p)?) < tol)
            }
            FibrationHandle::Micro { .. } => Err(Error::InvalidInput(
                "group fibers need the map-level fibration".into(),
            )),
        }
    }

    /// Whether X lies in the fiber over p: X matches the field at p.
    pub fn algebra_fiber_contains(
        &self,
        x: &AlgebraElement,
        p: HPoint,
        tol: f64,
    ) -> Result<bool> {
        match self {
            FibrationHandle::Micro { field, .. } => {
                let yv = field.evaluate(p)?;
                let xv = x.eval_at(p);
                Ok(TangentVector::new(p, yv.vx - xv.vx, yv.vy - xv.vy).norm() < tol)
            }
            FibrationHandle::Macro { .. } => Err(Error::InvalidInput(
                "algebra fibers need the field-level fibration".into(),
            )),
        }
    }

    /// The affine line of algebra elements sharing X's fiber: X plus
    /// multiples of the rotation generator fixing the projected point.
    pub fn algebra_fiber_line(&self, x: &AlgebraElement) -> Result<(HPoint, AlgebraElement)> {
        let p = self.project_algebra(x)?;
        Ok((p, elliptic_generator_at(p)))
    }

    pub fn settings(&self) -> SolverSettings {
        match self {
            FibrationHandle::Macro { settings, .. } | FibrationHandle::Micro { settings, .. } => {
                *settings
            }
        }
    }
}

/// The rotation generator vanishing at p: the Killing fields taking a
/// prescribed value at p are exactly one coset of its span.
pub fn elliptic_generator_at(p: HPoint) -> AlgebraElement {
    let s = p.y.sqrt();
    let g = GroupElement::new([[s, p.x / s], [0.0, 1.0 / s]])
        .expect("upper triangular frame has determinant one");
    g.adjoint(&AlgebraElement::new(0.0, 1.0, -1.0))
}

/// Pointwise geodesic interpolation of two maps with the same
/// equivariance pair; the bound never exceeds the larger input bound.
pub fn interpolate_maps(
    f0: &EquivariantMap,
    f1: &EquivariantMap,
    t: f64,
) -> Result<EquivariantMap> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!(
            "interpolation parameter must lie in [0, 1], got {t}"
        )));
    }
    if f0.base().rank() != f1.base().rank() || f0.target().rank() != f1.target().rank() {
        return Err(Error::InvalidInput(
            "interpolated maps must share the equivariance pair".into(),
        ));
    }
    for k in 0..f0.base().rank() {
        if !f0.base().generator(k)?.approx_eq(&f1.base().generator(k)?, 1e-8)
            || !f0.target().generator(k)?.approx_eq(&f1.target().generator(k)?, 1e-8)
        {
            return Err(Error::InvalidInput(
                "interpolated maps must share the equivariance pair".into(),
            ));
        }
    }
    Ok(EquivariantMap {
        base: f0.base.clone(),
        target: f0.target.clone(),
        bound: f0.bound.max(f1.bound),
        kind: MapKind::Blend {
            a: Box::new(f0.clone()),
            b: Box::new(f1.clone()),
            t,
        },
    })
}

/// Extends a pointwise-constrained Lipschitz map to one more point:
/// returns the point minimizing the worst stretch ratio against the
/// constraints. The allowance covers extensions of nonexpanding data;
/// anchored interior extension handles allowances below 1 separately.
pub fn kirszbraun_extend_point(
    constraints: &[(HPoint, HPoint)],
    p: HPoint,
    c0: f64,
) -> Result<HPoint> {
    if !(c0 >= 1.0) {
        return Err(Error::InvalidInput(format!(
            "extension needs a stretch allowance of at least 1, got {c0}"
        )));
    }
    if constraints.is_empty() {
        return Ok(p);
    }
    for (i, (pi, qi)) in constraints.iter().enumerate() {
        for (pj, qj) in constraints.iter().take(i) {
            if hyp_dist(*qi, *qj) > c0 * hyp_dist(*pi, *pj) + 1e-9 {
                return Err(Error::Infeasible);
            }
        }
    }
    let anchors = MapAnchors {
        points: constraints.iter().map(|c| c.0).collect(),
        images: constraints.iter().map(|c| c.1).collect(),
    };
    Ok(anchors.extend(p))
}

/// Sampled points whose local stretch under the map comes within `eps`
/// of the threshold `c0`, probing a ring of directions at the sampler's
/// smallest separation. Diagnostic: no claim beyond the sampled set.
pub fn stretch_locus_sample(
    f: &EquivariantMap,
    c0: f64,
    eps: f64,
    sampler: &PairSampler,
) -> Result<Vec<HPoint>> {
    let h = sampler
        .separations
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidInput(
            "the sampler must declare a positive probe separation".into(),
        ));
    }
    let mut out = Vec::new();
    for p in sampler.points() {
        let fp = f.evaluate(p)?;
        let mut local = 0.0_f64;
        for k in 0..8 {
            let th = std::f64::consts::TAU * (k as f64) / 8.0;
            let dir = TangentVector::new(p, th.cos(), th.sin());
            let q = hyp_exp(&dir.scale(h / dir.norm()));
            local = local.max(hyp_dist(fp, f.evaluate(q)?) / hyp_dist(p, q));
        }
        if local > c0 - eps {
            out.push(p);
        }
    }
    Ok(out)
}

/// Whether stretching two legs of a hinge by `c0` spreads their tips
/// apart by strictly more than `c0` times: the comparison inequality of
/// pinched negative curvature that powers the extension argument.
pub fn toponogov_check(
    p: HPoint,
    v: TangentVector,
    w: TangentVector,
    r: f64,
    c0: f64,
) -> Result<bool> {
    if !(c0 > 1.0) || !(r > 0.0) {
        return Err(Error::InvalidInput(
            "the hinge comparison needs r > 0 and a stretch factor above 1".into(),
        ));
    }
    let rebase = |t: &TangentVector| TangentVector::new(p, t.vx, t.vy);
    let (v, w) = (rebase(&v), rebase(&w));
    if v.norm() < 1e-12 || w.norm() < 1e-12 {
        return Err(Error::InvalidInput(
            "the hinge comparison needs nonzero directions".into(),
        ));
    }
    let (v, w) = (v.scale(1.0 / v.norm()), w.scale(1.0 / w.norm()));
    let near = hyp_dist(hyp_exp(&v.scale(r)), hyp_exp(&w.scale(r)));
    let far = hyp_dist(hyp_exp(&v.scale(c0 * r)), hyp_exp(&w.scale(c0 * r)));
    Ok(far > c0 * near)
}

/// One row of the scaling report: the family at width scale t.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransitionRow {
    pub t: f64,
    /// Largest mismatch between the collapse displacement per unit width
    /// and the infinitesimal field, over the probe points.
    pub derivative_gap: f64,
    /// Distance between the group-level projection of exp(tX) under the
    /// width-t map and the algebra-level projection of X.
    pub fiber_gap: f64,
}

/// Drives the width-t strip family against its infinitesimal limit: at
/// each t the collapse map is rebuilt at scaled widths in the same
/// frame, its displacements are compared with the field, and the fiber
/// over exp(tX) is compared with the fiber over X. Both gaps should
/// shrink to zero linearly in t.
///
/// The solvers here run ungated: the raw family is only piecewise
/// contracting, so the limit fiber is located by damped flow with
/// extrapolation and polished by Newton on the exact field.
pub fn transition_fiber_check(
    base: &StripMapData,
    x: &AlgebraElement,
    ts: &[f64],
    probes: &[HPoint],
    settings: &SolverSettings,
) -> Result<Vec<TransitionRow>> {
    if probes.is_empty() {
        return Err(Error::InvalidInput("the scaling check needs probe points".into()));
    }
    let exact = |p: HPoint| -> Result<TangentVector> {
        let yv = base.infinitesimal_field(p)?;
        let xv = x.eval_at(p);
        Ok(TangentVector::new(p, yv.vx - xv.vx, yv.vy - xv.vy))
    };
    let coarse = iterate_to_fixed_point(
        |p| Ok(hyp_exp(&exact(p)?.scale(0.5))),
        base.basepoint(),
        settings,
    )?;
    let limit = field_zero_newton(exact, coarse, settings)?;

    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        if !(t > 0.0) {
            return Err(Error::InvalidInput(format!(
                "width scales must be positive, got {t}"
            )));
        }
        let data = base.rescaled(t)?;
        let mut derivative_gap = 0.0_f64;
        for &p in probes {
            let moved = data.evaluate(p)?;
            let quotient = hyp_log(p, moved).scale(1.0 / t);
            let yv = base.infinitesimal_field(p)?;
            let diff = TangentVector::new(p, quotient.vx - yv.vx, quotient.vy - yv.vy);
            derivative_gap = derivative_gap.max(diff.norm());
        }
        let g = (*x * t).exp();
        let gi = g.inverse();
        let fiber =
            iterate_to_fixed_point(|p| Ok(gi.apply(data.evaluate(p)?)), data.basepoint(), settings)?;
        rows.push(TransitionRow {
            t,
            derivative_gap,
            fiber_gap: hyp_dist(fiber, limit),
        });
    }
    Ok(rows)
}
