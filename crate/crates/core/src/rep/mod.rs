//! Free-group words, their evaluations in the group, and cocycles.
//!
//! A representation assigns a group element to each free generator; words
//! evaluate through it. Infinitesimal deformations of a representation are
//! recorded as algebra-valued cocycles twisted by the adjoint action, which
//! is exactly the data of an affine isometric action on the Lie algebra.

pub mod schottky;

use crate::error::{Error, Result};
use crate::lie::{AlgebraElement, GroupElement, HPoint};
use serde::{Deserialize, Serialize};

/// Reduced word in a free group.
///
/// Letters are nonzero integers: `k > 0` is the k-th generator (1-based),
/// `-k` its inverse. The stored sequence is always freely reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct Word {
    letters: Vec<i32>,
}

impl TryFrom<Vec<i32>> for Word {
    type Error = Error;

    fn try_from(letters: Vec<i32>) -> Result<Word> {
        Word::new(&letters)
    }
}

impl From<Word> for Vec<i32> {
    fn from(w: Word) -> Vec<i32> {
        w.letters
    }
}

impl Word {
    /// Builds a word from letters, freely reducing adjacent inverses.
    pub fn new(letters: &[i32]) -> Result<Word> {
        let mut out: Vec<i32> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 {
                return Err(Error::InvalidInput("word letter 0 is not allowed".into()));
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(Word { letters: out })
    }

    pub fn identity() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn letter(l: i32) -> Result<Word> {
        Word::new(&[l])
    }

    /// Parses letters from a string: 'a'..'z' are generators 1..26,
    /// 'A'..'Z' their inverses.
    pub fn parse(s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for ch in s.chars() {
            if ch.is_whitespace() {
                continue;
            }
            if ch.is_ascii_lowercase() {
                letters.push(ch as i32 - 'a' as i32 + 1);
            } else if ch.is_ascii_uppercase() {
                letters.push(-(ch as i32 - 'A' as i32 + 1));
            } else {
                return Err(Error::InvalidInput(format!(
                    "unexpected character '{ch}' in word"
                )));
            }
        }
        Word::new(&letters)
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(&letters).expect("letters of reduced words are nonzero")
    }

    pub fn pow(&self, n: i32) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => f != -l,
            _ => true,
        }
    }

    /// Cyclically reduced core: strips matching first/last inverse pairs.
    pub fn cyclic_reduction(&self) -> Word {
        let mut letters = self.letters.clone();
        while letters.len() >= 2 && letters[0] == -letters[letters.len() - 1] {
            letters.pop();
            letters.remove(0);
        }
        Word { letters }
    }

    /// Least rotation among all rotations of this word and of its inverse,
    /// ordering letters as a < A < b < B < ...; a canonical key for
    /// conjugacy-and-inversion classes of cyclically reduced words.
    fn cyclic_key(&self) -> Vec<i32> {
        fn rank(l: i32) -> (u32, bool) {
            (l.unsigned_abs(), l < 0)
        }
        let mut best: Option<Vec<i32>> = None;
        for w in [self.clone(), self.inverse()] {
            let n = w.letters.len();
            for r in 0..n.max(1) {
                let mut rot: Vec<i32> = Vec::with_capacity(n);
                rot.extend_from_slice(&w.letters[r..]);
                rot.extend_from_slice(&w.letters[..r]);
                let better = best.as_ref().is_none_or(|b| {
                    rot.iter().map(|&l| rank(l)).lt(b.iter().map(|&l| rank(l)))
                });
                if better {
                    best = Some(rot);
                }
            }
        }
        best.unwrap_or_default()
    }

    /// Whether the word is a proper power of a shorter word (tested on the
    /// cyclic structure: some nontrivial rotation equals the word itself).
    pub fn is_proper_power(&self) -> bool {
        let n = self.letters.len();
        if n < 2 {
            return false;
        }
        'period: for p in 1..n {
            if n % p != 0 {
                continue;
            }
            for i in 0..n {
                if self.letters[i] != self.letters[(i + p) % n] {
                    continue 'period;
                }
            }
            return true;
        }
        false
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.letters {
            let idx = (l.unsigned_abs() - 1) as u8;
            let ch = if l > 0 {
                (b'a' + idx) as char
            } else {
                (b'A' + idx) as char
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// Enumerates one representative per conjugacy-and-inversion class of
/// primitive cyclically reduced words of length 1..=max_len in the free
/// group of the given rank.
pub fn cyclic_classes(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|i| [i, -i]).collect();
    let mut stack: Vec<Vec<i32>> = letters.iter().map(|&l| vec![l]).collect();
    while let Some(current) = stack.pop() {
        let w = Word { letters: current.clone() };
        if w.is_cyclically_reduced() && !w.is_proper_power() {
            let key = w.cyclic_key();
            if seen.insert(key.clone()) {
                out.push(Word { letters: key });
            }
        }
        if current.len() < max_len {
            for &l in &letters {
                if *current.last().expect("stack words are nonempty") != -l {
                    let mut next = current.clone();
                    next.push(l);
                    stack.push(next);
                }
            }
        }
    }
    out.sort_by(|a, b| (a.len(), &a.letters).cmp(&(b.len(), &b.letters)));
    out
}

/// Enumerates every reduced word of length at most max_len in the free
/// group of the given rank, the identity included, shortest first.
pub fn reduced_words(rank: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|i| [i, -i]).collect();
    let mut out = vec![Word::identity()];
    let mut frontier: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next_frontier = Vec::new();
        for current in &frontier {
            for &l in &letters {
                if current.last() != Some(&-l) {
                    let mut next = current.clone();
                    next.push(l);
                    next_frontier.push(next);
                }
            }
        }
        out.extend(
            next_frontier
                .iter()
                .map(|letters| Word { letters: letters.clone() }),
        );
        frontier = next_frontier;
    }
    out
}

/// Assignment of a group element to each free generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Representation {
    generators: Vec<GroupElement>,
}

impl Representation {
    pub fn new(generators: Vec<GroupElement>) -> Self {
        Representation { generators }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, index: usize) -> Result<GroupElement> {
        self.generators
            .get(index)
            .copied()
            .ok_or(Error::BadIndex { index, rank: self.generators.len() })
    }

    /// Image of a single signed letter.
    pub fn letter_element(&self, letter: i32) -> Result<GroupElement> {
        let g = self.generator((letter.unsigned_abs() - 1) as usize)?;
        Ok(if letter < 0 { g.inverse() } else { g })
    }

    /// Image of a word.
    pub fn evaluate(&self, w: &Word) -> Result<GroupElement> {
        let mut acc = GroupElement::IDENTITY;
        for &l in w.letters() {
            acc = acc * self.letter_element(l)?;
        }
        Ok(acc)
    }

    /// Action of a word on a half-plane point.
    pub fn act(&self, w: &Word, p: HPoint) -> Result<HPoint> {
        Ok(self.evaluate(w)?.apply(p))
    }
}

/// Algebra-valued cocycle twisted by the adjoint: determined by its values
/// on the generators through u(vw) = u(v) + Ad(rho(v)) u(w).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cocycle {
    values: Vec<AlgebraElement>,
}

impl Cocycle {
    pub fn new(values: Vec<AlgebraElement>) -> Self {
        Cocycle { values }
    }

    pub fn zero(rank: usize) -> Self {
        Cocycle { values: vec![AlgebraElement::ZERO; rank] }
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn generator_value(&self, index: usize) -> Result<AlgebraElement> {
        self.values
            .get(index)
            .copied()
            .ok_or(Error::BadIndex { index, rank: self.values.len() })
    }

    /// Negated cocycle, valid for the same representation.
    pub fn negated(&self) -> Cocycle {
        Cocycle { values: self.values.iter().map(|v| -*v).collect() }
    }

    /// Scaled cocycle.
    pub fn scaled(&self, s: f64) -> Cocycle {
        Cocycle { values: self.values.iter().map(|v| *v * s).collect() }
    }

    /// Value on a single signed letter.
    fn letter_value(&self, rep: &Representation, letter: i32) -> Result<AlgebraElement> {
        let idx = (letter.unsigned_abs() - 1) as usize;
        let v = self.generator_value(idx)?;
        if letter > 0 {
            Ok(v)
        } else {
            // u(g^{-1}) = -Ad(rho(g)^{-1}) u(g), from u(1) = 0.
            let g = rep.generator(idx)?;
            Ok(-g.inverse().adjoint(&v))
        }
    }

    /// Value on a word, via the twisted cocycle rule.
    pub fn evaluate(&self, rep: &Representation, w: &Word) -> Result<AlgebraElement> {
        let mut value = AlgebraElement::ZERO;
        let mut prefix = GroupElement::IDENTITY;
        for &l in w.letters() {
            let lv = self.letter_value(rep, l)?;
            value = value + prefix.adjoint(&lv);
            prefix = prefix * self.letter_element(rep, l)?;
        }
        Ok(value)
    }

    fn letter_element(&self, rep: &Representation, letter: i32) -> Result<GroupElement> {
        rep.letter_element(letter)
    }
}

/// Isometry of the group model in two-sided form: x -> left x right^{-1}.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PairIsometry {
    pub left: GroupElement,
    pub right: GroupElement,
}

impl PairIsometry {
    pub fn identity() -> Self {
        PairIsometry { left: GroupElement::IDENTITY, right: GroupElement::IDENTITY }
    }

    pub fn compose(&self, other: &PairIsometry) -> PairIsometry {
        PairIsometry { left: self.left * other.left, right: self.right * other.right }
    }

    pub fn inverse(&self) -> PairIsometry {
        PairIsometry { left: self.left.inverse(), right: self.right.inverse() }
    }

    pub fn act(&self, x: &GroupElement) -> GroupElement {
        self.left * *x * self.right.inverse()
    }

    /// Rewrites as a conjugation-plus-translation isometry.
    pub fn to_twisted(&self) -> TwistedIsometry {
        TwistedIsometry {
            translation: self.left * self.right.inverse(),
            conjugator: self.right,
        }
    }
}

/// Isometry of the group model in twisted form: x -> t (a x a^{-1}).
///
/// Composition is the semidirect rule
/// (t, a)(s, b) = (t (a s a^{-1}), a b).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TwistedIsometry {
    pub translation: GroupElement,
    pub conjugator: GroupElement,
}

impl TwistedIsometry {
    pub fn identity() -> Self {
        TwistedIsometry {
            translation: GroupElement::IDENTITY,
            conjugator: GroupElement::IDENTITY,
        }
    }

    pub fn compose(&self, other: &TwistedIsometry) -> TwistedIsometry {
        let a = self.conjugator;
        TwistedIsometry {
            translation: self.translation * (a * other.translation * a.inverse()),
            conjugator: a * other.conjugator,
        }
    }

    pub fn inverse(&self) -> TwistedIsometry {
        let a_inv = self.conjugator.inverse();
        TwistedIsometry {
            translation: a_inv * self.translation.inverse() * self.conjugator,
            conjugator: a_inv,
        }
    }

    pub fn act(&self, x: &GroupElement) -> GroupElement {
        self.translation * (self.conjugator * *x * self.conjugator.inverse())
    }

    /// Rewrites in two-sided form: (t, a) acts as x -> (t a) x a^{-1}.
    pub fn to_pair(&self) -> PairIsometry {
        PairIsometry { left: self.translation * self.conjugator, right: self.conjugator }
    }
}

/// Affine isometry of the algebra model: X -> translation + Ad(linear) X.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AffineIsometry {
    pub translation: AlgebraElement,
    pub linear: GroupElement,
}

impl AffineIsometry {
    pub fn identity() -> Self {
        AffineIsometry { translation: AlgebraElement::ZERO, linear: GroupElement::IDENTITY }
    }

    /// Affine holonomy of a word under a representation paired with a
    /// deformation cocycle.
    pub fn from_cocycle(rep: &Representation, cocycle: &Cocycle, w: &Word) -> Result<Self> {
        Ok(AffineIsometry {
            translation: cocycle.evaluate(rep, w)?,
            linear: rep.evaluate(w)?,
        })
    }

    pub fn compose(&self, other: &AffineIsometry) -> AffineIsometry {
        AffineIsometry {
            translation: self.translation + self.linear.adjoint(&other.translation),
            linear: self.linear * other.linear,
        }
    }

    pub fn inverse(&self) -> AffineIsometry {
        let inv = self.linear.inverse();
        AffineIsometry { translation: -inv.adjoint(&self.translation), linear: inv }
    }

    pub fn act(&self, x: &AlgebraElement) -> AlgebraElement {
        self.translation + self.linear.adjoint(x)
    }
}

/// Numerical derivative cocycle of a one-parameter family of
/// representations at parameter zero.
///
/// For each generator the first-order deformation is
/// u_i = d/dh [ rho_h(g_i) rho_0(g_i)^{-1} ] at h = 0, estimated from the
/// principal logarithm at steps h and h/2 with one Richardson
/// extrapolation, so the error is O(h^2).
pub fn derivative_cocycle<F>(family: F, h: f64) -> Result<Cocycle>
where
    F: Fn(f64) -> Result<Representation>,
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidInput(format!("step must be positive, got {h}")));
    }
    let base = family(0.0)?;
    let probe = |hh: f64| -> Result<Vec<AlgebraElement>> {
        let moved = family(hh)?;
        if moved.rank() != base.rank() {
            return Err(Error::InvalidInput(
                "family changes the number of generators".into(),
            ));
        }
        (0..base.rank())
            .map(|i| {
                let d = moved.generator(i)? * base.generator(i)?.inverse();
                Ok(d.principal_log()? * (1.0 / hh))
            })
            .collect()
    };
    let coarse = probe(h)?;
    let fine = probe(h / 2.0)?;
    let values = coarse
        .iter()
        .zip(fine.iter())
        .map(|(c, f)| *f * 2.0 - *c)
        .collect();
    Ok(Cocycle::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn elem(m: [[f64; 2]; 2]) -> GroupElement {
        GroupElement::new(m).unwrap()
    }

    fn sample_rep() -> Representation {
        Representation::new(vec![
            elem([[1.9, 0.3], [0.4, 0.7]]),
            elem([[1.2, -0.7], [0.5, 0.6]]),
        ])
    }

    #[test]
    fn words_reduce_and_round_trip() {
        let w = Word::parse("abBA").unwrap();
        assert!(w.is_empty());
        let w = Word::parse("aabAB").unwrap();
        assert_eq!(w.to_string(), "aabAB");
        assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
        assert_eq!(w.inverse().to_string(), "baBAA");
        assert_eq!(w.concat(&w.inverse()), Word::identity());
        assert_eq!(Word::identity().to_string(), "1");
    }

    #[test]
    fn cyclic_reduction_strips_conjugating_letters() {
        let w = Word::parse("Aba").unwrap();
        assert!(!w.is_cyclically_reduced());
        assert_eq!(w.cyclic_reduction().to_string(), "b");
        assert!(Word::parse("ab").unwrap().is_cyclically_reduced());
    }

    #[test]
    fn proper_power_detection() {
        assert!(Word::parse("abab").unwrap().is_proper_power());
        assert!(Word::parse("aaa").unwrap().is_proper_power());
        assert!(!Word::parse("aab").unwrap().is_proper_power());
        assert!(!Word::parse("a").unwrap().is_proper_power());
    }

    #[test]
    fn cyclic_class_enumeration_in_rank_two() {
        let classes = cyclic_classes(2, 2);
        // Length 1: {a}, {b} (inverses folded in). Length 2: {ab}, {aB}.
        assert_eq!(classes.len(), 4);
        let strings: Vec<String> = classes.iter().map(|w| w.to_string()).collect();
        assert!(strings.contains(&"a".to_string()));
        assert!(strings.contains(&"b".to_string()));
        for w in &classes {
            assert!(w.is_cyclically_reduced() && !w.is_proper_power());
        }
        // Every cyclically reduced length-2 word lands in one of the classes.
        for s in ["ab", "ba", "AB", "aB", "Ab", "BA"] {
            let key = Word::parse(s).unwrap().cyclic_key();
            assert!(classes.iter().any(|c| c.letters() == key));
        }
    }

    #[test]
    fn evaluation_respects_inverses() {
        let rep = sample_rep();
        let w = Word::parse("abA").unwrap();
        let g = rep.evaluate(&w).unwrap();
        let manual = rep.generator(0).unwrap()
            * rep.generator(1).unwrap()
            * rep.generator(0).unwrap().inverse();
        assert!(g.approx_eq(&manual, 1e-12));
        let idx_err = rep.generator(5);
        assert!(matches!(idx_err, Err(Error::BadIndex { index: 5, rank: 2 })));
    }

    #[test]
    fn twisted_and_pair_forms_agree() {
        let u = TwistedIsometry {
            translation: elem([[1.1, 0.2], [0.1, 1.0]]),
            conjugator: elem([[0.9, -0.4], [0.3, 1.0]]),
        };
        let v = TwistedIsometry {
            translation: elem([[1.4, 0.0], [0.2, 0.8]]),
            conjugator: elem([[1.0, 0.6], [-0.2, 0.9]]),
        };
        let x = elem([[2.0, 0.5], [0.3, 0.6]]);
        // The rewriting map is a homomorphism intertwining the actions.
        let lhs = u.compose(&v).to_pair();
        let rhs = u.to_pair().compose(&v.to_pair());
        assert!(lhs.left.approx_eq(&rhs.left, 1e-10));
        assert!(lhs.right.approx_eq(&rhs.right, 1e-10));
        assert!(u.act(&x).approx_eq(&u.to_pair().act(&x), 1e-10));
        // Round trip through the two forms.
        let back = u.to_pair().to_twisted();
        assert!(back.translation.approx_eq(&u.translation, 1e-10));
        assert!(back.conjugator.approx_eq(&u.conjugator, 1e-10));
        // Inverses compose to the identity.
        let id = u.compose(&u.inverse());
        assert!(id.translation.approx_eq(&GroupElement::IDENTITY, 1e-10));
        assert!(id.conjugator.approx_eq(&GroupElement::IDENTITY, 1e-10));
    }

    #[test]
    fn affine_isometries_compose_like_their_action() {
        let u = AffineIsometry {
            translation: AlgebraElement::new(0.3, -0.2, 0.5),
            linear: elem([[1.3, 0.1], [0.2, 0.9]]),
        };
        let v = AffineIsometry {
            translation: AlgebraElement::new(-0.1, 0.4, 0.2),
            linear: elem([[0.8, -0.3], [0.4, 1.1]]),
        };
        let x = AlgebraElement::new(1.0, 0.5, -0.7);
        let lhs = u.compose(&v).act(&x);
        let rhs = u.act(&v.act(&x));
        assert!(lhs.approx_eq(&rhs, 1e-10));
        let id = u.compose(&u.inverse());
        assert!(id.translation.approx_eq(&AlgebraElement::ZERO, 1e-10));
        assert!(id.linear.approx_eq(&GroupElement::IDENTITY, 1e-10));
    }

    #[test]
    fn derivative_cocycle_recovers_exact_deformation() {
        let base = sample_rep();
        let x0 = AlgebraElement::new(0.4, -0.1, 0.3);
        let x1 = AlgebraElement::new(-0.2, 0.6, 0.1);
        // rho_h(g_i) = exp(h X_i) g_i has derivative cocycle exactly X_i.
        let family = |h: f64| -> Result<Representation> {
            Ok(Representation::new(vec![
                (x0 * h).exp() * base.generator(0)?,
                (x1 * h).exp() * base.generator(1)?,
            ]))
        };
        let u = derivative_cocycle(family, 1e-3).unwrap();
        assert!(u.generator_value(0).unwrap().approx_eq(&x0, 1e-8));
        assert!(u.generator_value(1).unwrap().approx_eq(&x1, 1e-8));
    }

    #[test]
    fn richardson_step_beats_single_step() {
        let base = sample_rep();
        // A family with genuine curvature in h, so the O(h) term of the
        // one-step estimate is visible.
        let x0 = AlgebraElement::new(0.4, -0.1, 0.3);
        let y0 = AlgebraElement::new(0.1, 0.5, 0.2);
        let family = |h: f64| -> Result<Representation> {
            Ok(Representation::new(vec![
                (x0 * h).exp() * (y0 * (h * h)).exp() * base.generator(0)?,
                base.generator(1)?,
            ]))
        };
        let h = 1e-2;
        let single = {
            let d = family(h).unwrap().generator(0).unwrap()
                * base.generator(0).unwrap().inverse();
            d.principal_log().unwrap() * (1.0 / h)
        };
        let richardson = derivative_cocycle(family, h)
            .unwrap()
            .generator_value(0)
            .unwrap();
        let err_single = (single - x0).sup_norm();
        let err_rich = (richardson - x0).sup_norm();
        assert!(
            err_rich < err_single / 10.0,
            "richardson error {err_rich} should beat single-step {err_single}"
        );
    }

    fn small_algebra() -> impl Strategy<Value = AlgebraElement> {
        (-0.8..0.8_f64, -0.8..0.8_f64, -0.8..0.8_f64)
            .prop_map(|(a, b, c)| AlgebraElement::new(a, b, c))
    }

    fn short_word() -> impl Strategy<Value = Word> {
        proptest::collection::vec(
            prop_oneof![Just(1), Just(-1), Just(2), Just(-2)],
            0..6,
        )
        .prop_map(|ls| Word::new(&ls).unwrap())
    }

    proptest! {
        #[test]
        fn cocycle_rule_holds(v in short_word(), w in short_word(), x0 in small_algebra(), x1 in small_algebra()) {
            let rep = sample_rep();
            let u = Cocycle::new(vec![x0, x1]);
            let lhs = u.evaluate(&rep, &v.concat(&w)).unwrap();
            let rhs = u.evaluate(&rep, &v).unwrap()
                + rep.evaluate(&v).unwrap().adjoint(&u.evaluate(&rep, &w).unwrap());
            prop_assert!(lhs.approx_eq(&rhs, 1e-8), "{lhs} vs {rhs}");
        }

        #[test]
        fn cocycle_of_inverse_word(w in short_word(), x0 in small_algebra(), x1 in small_algebra()) {
            let rep = sample_rep();
            let u = Cocycle::new(vec![x0, x1]);
            let g = rep.evaluate(&w).unwrap();
            let lhs = u.evaluate(&rep, &w.inverse()).unwrap();
            let rhs = -g.inverse().adjoint(&u.evaluate(&rep, &w).unwrap());
            prop_assert!(lhs.approx_eq(&rhs, 1e-8));
        }

        #[test]
        fn evaluation_is_homomorphism(v in short_word(), w in short_word()) {
            let rep = sample_rep();
            let lhs = rep.evaluate(&v.concat(&w)).unwrap();
            let rhs = rep.evaluate(&v).unwrap() * rep.evaluate(&w).unwrap();
            prop_assert!(lhs.approx_eq(&rhs, 1e-7));
        }
    }
}
