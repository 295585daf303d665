//! Length-function derivatives and uniform-contraction sweeps over
//! conjugacy classes.
//!
//! For a representation j and a deformation cocycle u, each hyperbolic
//! conjugacy class w carries the derivative dlambda(w) of its translation
//! length and the normalized ratio dlambda(w)/lambda(w). Admissibility —
//! every class ratio uniformly negative — is the infinitesimal form of the
//! length contraction that makes the deformed action properly
//! discontinuous; sweeping ratios over all short classes certifies it,
//! refutes it, or reports the sweep as inconclusive. At the group level
//! the same comparison runs on two representations, and bounded
//! displacement gaps along mixed-sign word families witness properness
//! failures.

use crate::error::{Error, Result};
use crate::rep::{cyclic_classes, Cocycle, Representation, Word};
use crate::tol;
use serde::{Deserialize, Serialize};

/// Derivative of the translation length of the class of w under the
/// deformation cocycle u.
///
/// With j = rep(w) hyperbolic and u(w) the cocycle value,
/// dlambda = 2 sign(tr j) tr(u(w) j) / sqrt(tr(j)^2 - 4),
/// the derivative of 2 arccosh(|tr|/2) along tr_t = tr(exp(t u(w)) j).
pub fn dlambda(rep: &Representation, cocycle: &Cocycle, w: &Word) -> Result<f64> {
    let j = rep.evaluate(w)?;
    let tr = j.trace();
    if tr.abs() <= 2.0 + tol::CLASS_TOL {
        return Err(Error::NonHyperbolicBase(w.to_string()));
    }
    let u = cocycle.evaluate(rep, w)?;
    let [[p, q], [r, _]] = u.matrix();
    let m = j.matrix();
    let tr_uj = p * (m[0][0] - m[1][1]) + q * m[1][0] + r * m[0][1];
    Ok(2.0 * tr.signum() * tr_uj / (tr * tr - 4.0).sqrt())
}

/// Normalized length derivative dlambda(w) / lambda(w) of a class.
pub fn length_ratio(rep: &Representation, cocycle: &Cocycle, w: &Word) -> Result<f64> {
    let lambda = rep.evaluate(w)?.translation_length();
    if lambda <= tol::CLASS_TOL {
        return Err(Error::NonHyperbolicBase(w.to_string()));
    }
    Ok(dlambda(rep, cocycle, w)? / lambda)
}

/// Supremum of lambda_rho(w) / lambda_j(w) over conjugacy classes of
/// length at most max_len, with the class realizing it.
pub fn length_ratio_sup(
    j: &Representation,
    rho: &Representation,
    max_len: usize,
) -> Result<(f64, Word)> {
    if j.rank() != rho.rank() {
        return Err(Error::InvalidInput(
            "representations must share the generator count".into(),
        ));
    }
    let mut best: Option<(f64, Word)> = None;
    for w in cyclic_classes(j.rank(), max_len) {
        let lj = j.evaluate(&w)?.translation_length();
        if lj <= tol::CLASS_TOL {
            return Err(Error::NonHyperbolicBase(w.to_string()));
        }
        let lr = rho.evaluate(&w)?.translation_length();
        let ratio = lr / lj;
        if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
            best = Some((ratio, w));
        }
    }
    best.ok_or_else(|| Error::InvalidInput("empty class sweep".into()))
}

/// Verdict of an admissibility sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdmissibilityVerdict {
    /// Every swept ratio sits below the negative threshold: uniform length
    /// contraction, certified at this depth.
    Certified,
    /// Ratios beyond the threshold occur on both sides of zero: no
    /// rescaling of the cocycle contracts uniformly, so the deformed
    /// action cannot be proper.
    Violated,
    /// Neither certified nor refuted at this depth.
    Inconclusive,
}

impl std::fmt::Display for AdmissibilityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AdmissibilityVerdict::Certified => "certified",
            AdmissibilityVerdict::Violated => "violated",
            AdmissibilityVerdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Outcome of sweeping normalized length derivatives over short classes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub verdict: AdmissibilityVerdict,
    /// Negative margin required of every ratio for certification.
    pub threshold: f64,
    pub max_ratio: f64,
    pub min_ratio: f64,
    /// Class achieving the largest ratio.
    pub max_word: Word,
    /// Class achieving the smallest ratio.
    pub min_word: Word,
    /// Every swept class with its ratio, in enumeration order.
    pub ratios: Vec<(Word, f64)>,
}

/// Sweeps dlambda/lambda over all primitive conjugacy classes of length at
/// most max_len and classifies the cocycle.
pub fn admissibility_test(
    rep: &Representation,
    cocycle: &Cocycle,
    max_len: usize,
    threshold: f64,
) -> Result<AdmissibilityReport> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidInput(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    let mut ratios = Vec::new();
    for w in cyclic_classes(rep.rank(), max_len) {
        ratios.push((w.clone(), length_ratio(rep, cocycle, &w)?));
    }
    let (max_word, max_ratio) = ratios
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(w, r)| (w.clone(), *r))
        .ok_or_else(|| Error::InvalidInput("empty class sweep".into()))?;
    let (min_word, min_ratio) = ratios
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(w, r)| (w.clone(), *r))
        .expect("nonempty by the max computation");
    let verdict = if max_ratio < -threshold {
        AdmissibilityVerdict::Certified
    } else if max_ratio > threshold && min_ratio < -threshold {
        AdmissibilityVerdict::Violated
    } else {
        AdmissibilityVerdict::Inconclusive
    };
    Ok(AdmissibilityReport {
        verdict,
        threshold,
        max_ratio,
        min_ratio,
        max_word,
        min_word,
        ratios,
    })
}

/// A certified properness failure: a family of words along which the
/// displacement gap between the two representations stays bounded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropernessWitness {
    /// The expanding and contracting classes the family is built from.
    pub grower: Word,
    pub shrinker: Word,
    /// One witness word per power, with its displacement gap.
    pub words: Vec<(Word, f64)>,
    /// Bound the gaps stay under.
    pub bound: f64,
}

/// Searches for a properness failure of the pair action of (j, rho).
///
/// Proper discontinuity forces |mu(rho(w)) - mu(j(w))| to grow along every
/// infinite family of distinct classes. The search picks the classes of
/// largest and smallest length ratio (at selection depth select_len) and,
/// for each power n of the shrinking class, balances it against powers of
/// the growing class, minimizing the gap. If the minimized gaps stay below
/// `bound` for every n up to max_power, the family witnesses
/// non-properness and is returned; otherwise None.
pub fn properness_violation_search(
    j: &Representation,
    rho: &Representation,
    max_power: u32,
    bound: f64,
    select_len: usize,
) -> Result<Option<PropernessWitness>> {
    let (_, grower) = length_ratio_sup(j, rho, select_len)?;
    let (neg_sup, shrinker) = {
        // Smallest ratio: the largest ratio of the swap (j, rho) is not it;
        // rerun the sweep with an inverted comparison.
        let mut best: Option<(f64, Word)> = None;
        for w in cyclic_classes(j.rank(), select_len) {
            let lj = j.evaluate(&w)?.translation_length();
            if lj <= tol::CLASS_TOL {
                return Err(Error::NonHyperbolicBase(w.to_string()));
            }
            let ratio = rho.evaluate(&w)?.translation_length() / lj;
            if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                best = Some((ratio, w));
            }
        }
        best.ok_or_else(|| Error::InvalidInput("empty class sweep".into()))?
    };
    let _ = neg_sup;

    let gap = |w: &Word| -> Result<f64> {
        Ok((rho.evaluate(w)?.mu() - j.evaluate(w)?.mu()).abs())
    };

    let mut words = Vec::new();
    for n in 1..=max_power {
        let base = shrinker.pow(n as i32);
        let mut best_word = base.clone();
        let mut best_gap = gap(&base)?;
        let mut rising = 0;
        let mut psi = 1;
        // Balance with powers of the growing class until the gap has
        // clearly passed its minimum.
        while rising < 4 && psi < 64 * (n as i32 + 1) {
            let cand = base.concat(&grower.pow(psi));
            let g = gap(&cand)?;
            if g < best_gap {
                best_gap = g;
                best_word = cand;
                rising = 0;
            } else {
                rising += 1;
            }
            psi += 1;
        }
        if best_gap > bound {
            return Ok(None);
        }
        words.push((best_word, best_gap));
    }
    Ok(Some(PropernessWitness {
        grower,
        shrinker,
        words,
        bound,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{AlgebraElement, GroupElement};
    use crate::rep::schottky::pants_holonomy;

    fn exact_dlambda_oracle(
        rep: &Representation,
        cocycle: &Cocycle,
        w: &Word,
        h: f64,
    ) -> f64 {
        // Deform each generator by its cocycle value and differentiate the
        // word length by central differences.
        let deformed = |t: f64| -> Representation {
            let gens = (0..rep.rank())
                .map(|i| {
                    let u = cocycle.generator_value(i).unwrap();
                    (u * t).exp() * rep.generator(i).unwrap()
                })
                .collect();
            Representation::new(gens)
        };
        let lp = deformed(h).evaluate(w).unwrap().translation_length();
        let lm = deformed(-h).evaluate(w).unwrap().translation_length();
        (lp - lm) / (2.0 * h)
    }

    #[test]
    fn dlambda_matches_finite_difference_oracle() {
        let (rep, _) = pants_holonomy(2.0, 2.2, 2.4).unwrap();
        let u = Cocycle::new(vec![
            AlgebraElement::new(0.3, -0.1, 0.2),
            AlgebraElement::new(-0.2, 0.4, 0.1),
        ]);
        for s in ["a", "b", "ab", "aB", "abb", "aabB"] {
            let w = Word::parse(s).unwrap();
            let exact = dlambda(&rep, &u, &w).unwrap();
            let fd = exact_dlambda_oracle(&rep, &u, &w, 1e-6);
            assert!(
                (exact - fd).abs() < 1e-5 * (1.0 + exact.abs()),
                "word {s}: formula {exact} vs finite difference {fd}"
            );
        }
    }

    #[test]
    fn dlambda_requires_hyperbolic_class() {
        let rep = Representation::new(vec![
            GroupElement::new([[0.9_f64.cos(), -0.9_f64.sin()], [0.9_f64.sin(), 0.9_f64.cos()]])
                .unwrap(),
        ]);
        let u = Cocycle::zero(1);
        let w = Word::parse("a").unwrap();
        assert!(matches!(
            dlambda(&rep, &u, &w),
            Err(Error::NonHyperbolicBase(_))
        ));
    }

    #[test]
    fn coboundary_has_zero_dlambda() {
        // u(w) = X - Ad(rho(w)) X is tangent to a conjugation family, which
        // never moves translation lengths.
        let (rep, _) = pants_holonomy(2.0, 2.2, 2.4).unwrap();
        let x = AlgebraElement::new(0.5, -0.7, 0.3);
        let u = Cocycle::new(vec![
            x - rep.generator(0).unwrap().adjoint(&x),
            x - rep.generator(1).unwrap().adjoint(&x),
        ]);
        for s in ["a", "b", "ab", "abB", "aaB"] {
            let w = Word::parse(s).unwrap();
            let d = dlambda(&rep, &u, &w).unwrap();
            assert!(d.abs() < 1e-9, "coboundary moved lambda({s}) by {d}");
        }
    }

    #[test]
    fn admissibility_of_uniform_shrink_is_certified() {
        // u(gen) = -X_gen / 2 with rho(gen) = exp(X_gen): shrinks every
        // generator length at rate -1/2, and all mixed classes follow.
        let (rep, _) = pants_holonomy(2.0, 2.2, 2.4).unwrap();
        let u = Cocycle::new(vec![
            rep.generator(0).unwrap().principal_log().unwrap() * -0.5,
            rep.generator(1).unwrap().principal_log().unwrap() * -0.5,
        ]);
        let report = admissibility_test(&rep, &u, 4, 1e-6).unwrap();
        assert_eq!(report.verdict, AdmissibilityVerdict::Certified);
        assert!(report.max_ratio < 0.0);
        // The negated cocycle uniformly grows lengths: refuted but not
        // sign-mixed, hence inconclusive rather than violated.
        let report = admissibility_test(&rep, &u.negated(), 4, 1e-6).unwrap();
        assert_eq!(report.verdict, AdmissibilityVerdict::Inconclusive);
        assert!(report.min_ratio > 0.0);
    }

    #[test]
    fn admissibility_of_mixed_signs_is_violated() {
        // Shrink one generator, grow the other: the sweep sees both signs.
        let (rep, _) = pants_holonomy(2.0, 2.2, 2.4).unwrap();
        let u = Cocycle::new(vec![
            rep.generator(0).unwrap().principal_log().unwrap() * -0.5,
            rep.generator(1).unwrap().principal_log().unwrap() * 0.5,
        ]);
        let report = admissibility_test(&rep, &u, 3, 1e-6).unwrap();
        assert_eq!(report.verdict, AdmissibilityVerdict::Violated);
        assert!(report.max_ratio > 0.0 && report.min_ratio < 0.0);
    }

    #[test]
    fn ratio_sup_of_conjugate_representation_is_one() {
        let (rep, _) = pants_holonomy(2.0, 2.2, 2.4).unwrap();
        let g = GroupElement::new([[1.3, 0.4], [0.2, 1.0]]).unwrap();
        let conj = Representation::new(vec![
            g * rep.generator(0).unwrap() * g.inverse(),
            g * rep.generator(1).unwrap() * g.inverse(),
        ]);
        let (sup, _) = length_ratio_sup(&rep, &conj, 4).unwrap();
        assert!((sup - 1.0).abs() < 1e-10);
    }

    #[test]
    fn properness_search_finds_witness_for_mixed_deformation() {
        // Grow one generator, shrink the other by a comparable factor: the
        // length spectra straddle and balanced words keep bounded gaps.
        let (rep, _) = pants_holonomy(2.0, 2.2, 2.4).unwrap();
        let scale = |g: GroupElement, f: f64| -> GroupElement {
            (g.principal_log().unwrap() * f).exp()
        };
        let rho = Representation::new(vec![
            scale(rep.generator(0).unwrap(), 1.1),
            scale(rep.generator(1).unwrap(), 0.9),
        ]);
        let witness = properness_violation_search(&rep, &rho, 8, 6.0, 2)
            .unwrap()
            .expect("mixed deformation should yield bounded gaps");
        assert_eq!(witness.words.len(), 8);
        for (_, gap) in &witness.words {
            assert!(*gap <= 6.0);
        }
    }

    #[test]
    fn properness_search_reports_none_for_uniform_shrink() {
        let (rep, _) = pants_holonomy(2.0, 2.2, 2.4).unwrap();
        let scale = |g: GroupElement, f: f64| -> GroupElement {
            (g.principal_log().unwrap() * f).exp()
        };
        let rho = Representation::new(vec![
            scale(rep.generator(0).unwrap(), 0.8),
            scale(rep.generator(1).unwrap(), 0.8),
        ]);
        let witness = properness_violation_search(&rep, &rho, 6, 3.0, 2).unwrap();
        assert!(witness.is_none(), "uniform shrink keeps gaps growing");
    }
}
