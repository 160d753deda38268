//! Chord-diagram monomials in canonical signed normal form.
//!
//! A monomial on `p` labeled points is a product of chord generators
//! `α_ab`. The generators obey
//!
//! * `α_aa = 0` and `α_ab² = 0`,
//! * `α_ba = (−1)^n α_ab` (reversing a chord),
//! * `α_ab α_cd = (−1)^(n+1) α_cd α_ab` (graded commutativity),
//!
//! so only the parity of the ambient dimension `n` enters the signs.
//! Every relabeling map between point sets (codegeneracies, vertex
//! contractions) is realized through [`relabel`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("point index {index} outside 1..={points}")]
    IndexOutOfRange { index: u32, points: u32 },
    #[error("monomials live on different point counts ({left} vs {right})")]
    PointMismatch { left: u32, right: u32 },
    #[error("relabeling map has {got} entries, expected {expected}")]
    MapLength { got: usize, expected: usize },
    #[error("malformed diagram {text:?}: {reason}")]
    Malformed { text: String, reason: String },
    #[error("ambient dimension n = {0} is below 3")]
    DimensionTooSmall(u32),
}

/// Residue of the ambient dimension `n` modulo 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u32) -> Result<Parity, DiagramError> {
        if n < 3 {
            return Err(DiagramError::DimensionTooSmall(n));
        }
        Ok(if n.is_multiple_of(2) { Parity::Even } else { Parity::Odd })
    }

    /// `(−1)^n`, the sign picked up by reversing one chord.
    pub fn reversal_sign(self) -> Sign {
        match self {
            Parity::Even => Sign::Plus,
            Parity::Odd => Sign::Minus,
        }
    }

    /// `(−1)^(n+1)`, the sign of swapping two adjacent chords.
    pub fn transposition_sign(self) -> Sign {
        -self.reversal_sign()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn to_scalar<T: Scalar>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// `(−1)^i`.
    pub fn alternating(i: u32) -> Sign {
        if i.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A chord `α_ab` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    a: u32,
    b: u32,
}

impl Chord {
    /// Panics unless `a < b`; use [`normalize`] for raw input.
    pub fn new(a: u32, b: u32) -> Chord {
        assert!(0 < a && a < b, "chord endpoints must satisfy 0 < a < b, got ({a}, {b})");
        Chord { a, b }
    }

    pub fn a(self) -> u32 {
        self.a
    }

    pub fn b(self) -> u32 {
        self.b
    }

    pub fn touches(self, v: u32) -> bool {
        self.a == v || self.b == v
    }
}

pub(crate) type ChordList = SmallVec<[Chord; 8]>;

/// A canonical chord monomial: chords strictly increasing in `(a, b)` order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    points: u32,
    chords: ChordList,
}

impl Monomial {
    /// The degree-0 class on `points` points.
    pub fn empty(points: u32) -> Monomial {
        Monomial { points, chords: ChordList::new() }
    }

    /// Builds a monomial from chords that are already canonical.
    ///
    /// Returns `None` if the chords are not strictly increasing or leave
    /// `1..=points`.
    pub fn from_canonical(points: u32, chords: impl IntoIterator<Item = Chord>) -> Option<Monomial> {
        let chords: ChordList = chords.into_iter().collect();
        let in_range = chords.iter().all(|c| c.b <= points);
        let sorted = chords.windows(2).all(|w| w[0] < w[1]);
        (in_range && sorted).then_some(Monomial { points, chords })
    }

    pub fn points(&self) -> u32 {
        self.points
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn degree(&self) -> usize {
        self.chords.len()
    }

    pub fn touches(&self, v: u32) -> bool {
        self.chords.iter().any(|c| c.touches(v))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.chords.iter().map(|c| (c.a, c.b))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.points)?;
        for c in &self.chords {
            write!(f, " {}-{}", c.a, c.b)?;
        }
        Ok(())
    }
}

/// Result of normalizing a product of generators: zero, or a signed
/// canonical monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SignedMonomial {
    Zero,
    Term { sign: Sign, monomial: Monomial },
}

impl SignedMonomial {
    pub fn plus(monomial: Monomial) -> SignedMonomial {
        SignedMonomial::Term { sign: Sign::Plus, monomial }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SignedMonomial::Zero)
    }

    pub fn sign(&self) -> Option<Sign> {
        match self {
            SignedMonomial::Zero => None,
            SignedMonomial::Term { sign, .. } => Some(*sign),
        }
    }

    pub fn monomial(&self) -> Option<&Monomial> {
        match self {
            SignedMonomial::Zero => None,
            SignedMonomial::Term { monomial, .. } => Some(monomial),
        }
    }

    pub fn negate(self) -> SignedMonomial {
        match self {
            SignedMonomial::Zero => SignedMonomial::Zero,
            SignedMonomial::Term { sign, monomial } => SignedMonomial::Term { sign: -sign, monomial },
        }
    }
}

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignedMonomial::Zero => f.write_str("0"),
            SignedMonomial::Term { sign: Sign::Plus, monomial } => write!(f, "+({monomial})"),
            SignedMonomial::Term { sign: Sign::Minus, monomial } => write!(f, "-({monomial})"),
        }
    }
}

/// Brings a raw product `α_{a1 b1} α_{a2 b2} …` on `points` points to
/// canonical form.
///
/// Each reversed pair contributes `(−1)^n`; each adjacent transposition of
/// the insertion sort contributes `(−1)^(n+1)`.
pub fn normalize(points: u32, raw: &[(u32, u32)], parity: Parity) -> Result<SignedMonomial, DiagramError> {
    for &(a, b) in raw {
        for index in [a, b] {
            if index == 0 || index > points {
                return Err(DiagramError::IndexOutOfRange { index, points });
            }
        }
    }
    if raw.iter().any(|&(a, b)| a == b) {
        return Ok(SignedMonomial::Zero);
    }

    let mut sign = Sign::Plus;
    let mut chords = ChordList::with_capacity(raw.len());
    for &(a, b) in raw {
        let chord = if a < b {
            Chord { a, b }
        } else {
            sign = sign * parity.reversal_sign();
            Chord { a: b, b: a }
        };
        chords.push(chord);
        // insertion sort by adjacent swaps
        let mut j = chords.len() - 1;
        while j > 0 {
            match chords[j - 1].cmp(&chords[j]) {
                std::cmp::Ordering::Less => break,
                std::cmp::Ordering::Equal => return Ok(SignedMonomial::Zero),
                std::cmp::Ordering::Greater => {
                    chords.swap(j - 1, j);
                    sign = sign * parity.transposition_sign();
                    j -= 1;
                }
            }
        }
    }
    Ok(SignedMonomial::Term { sign, monomial: Monomial { points, chords } })
}

/// Product of two signed monomials on the same point set.
pub fn product(left: &SignedMonomial, right: &SignedMonomial, parity: Parity) -> Result<SignedMonomial, DiagramError> {
    let (SignedMonomial::Term { sign: s1, monomial: m1 }, SignedMonomial::Term { sign: s2, monomial: m2 }) =
        (left, right)
    else {
        return Ok(SignedMonomial::Zero);
    };
    if m1.points != m2.points {
        return Err(DiagramError::PointMismatch { left: m1.points, right: m2.points });
    }
    let raw: Vec<(u32, u32)> = m1.pairs().chain(m2.pairs()).collect();
    Ok(match normalize(m1.points, &raw, parity)? {
        SignedMonomial::Zero => SignedMonomial::Zero,
        SignedMonomial::Term { sign, monomial } => SignedMonomial::Term { sign: sign * *s1 * *s2, monomial },
    })
}

/// Applies the label map `map` (`map[i - 1]` is the image of point `i`) to
/// every chord endpoint and normalizes on `target_points` points.
pub fn relabel(
    monomial: &Monomial,
    map: &[u32],
    target_points: u32,
    parity: Parity,
) -> Result<SignedMonomial, DiagramError> {
    if map.len() != monomial.points as usize {
        return Err(DiagramError::MapLength { got: map.len(), expected: monomial.points as usize });
    }
    if let Some(&index) = map.iter().find(|&&v| v == 0 || v > target_points) {
        return Err(DiagramError::IndexOutOfRange { index, points: target_points });
    }
    let raw: SmallVec<[(u32, u32); 8]> =
        monomial.pairs().map(|(a, b)| (map[a as usize - 1], map[b as usize - 1])).collect();
    normalize(target_points, &raw, parity)
}

/// True iff every point is an endpoint of some chord.
pub fn covers(monomial: &Monomial) -> bool {
    let mut seen = vec![false; monomial.points as usize];
    for c in &monomial.chords {
        seen[c.a as usize - 1] = true;
        seen[c.b as usize - 1] = true;
    }
    seen.into_iter().all(|s| s)
}

/// Label map of the `i`-th vertex contraction on `points` points: identify
/// `i` and `i + 1`. Valid for `1 <= i < points`.
pub fn contraction_map(points: u32, i: u32) -> Vec<u32> {
    debug_assert!(1 <= i && i < points);
    (1..=points).map(|x| if x <= i { x } else { x - 1 }).collect()
}

/// Label map of the order-preserving injection `1..=points` into
/// `1..=points + 1` that skips `skip`.
pub fn insertion_map(points: u32, skip: u32) -> Vec<u32> {
    debug_assert!(1 <= skip && skip <= points + 1);
    (1..=points).map(|x| if x < skip { x } else { x + 1 }).collect()
}

/// Parses the grammar `"p: a-b a-b …"` through [`normalize`].
pub fn parse(text: &str, parity: Parity) -> Result<SignedMonomial, DiagramError> {
    let malformed = |reason: &str| DiagramError::Malformed { text: text.to_string(), reason: reason.to_string() };
    let (head, tail) = text.split_once(':').ok_or_else(|| malformed("missing ':' after point count"))?;
    let points: u32 = head.trim().parse().map_err(|_| malformed("point count is not a non-negative integer"))?;
    let mut raw = Vec::new();
    for token in tail.split_whitespace() {
        let (a, b) = token.split_once('-').ok_or_else(|| malformed("chord must look like a-b"))?;
        let a: u32 = a.parse().map_err(|_| malformed("chord endpoint is not an integer"))?;
        let b: u32 = b.parse().map_err(|_| malformed("chord endpoint is not an integer"))?;
        raw.push((a, b));
    }
    normalize(points, &raw, parity)
}

/// Parses text that must already be in canonical form.
impl FromStr for Monomial {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Monomial, DiagramError> {
        // parity is irrelevant when no reordering happens
        match parse(s, Parity::Odd)? {
            SignedMonomial::Term { sign: Sign::Plus, monomial } if monomial.to_string() == canonical_text(s) => {
                Ok(monomial)
            }
            _ => Err(DiagramError::Malformed { text: s.to_string(), reason: "not in canonical form".into() }),
        }
    }
}

fn canonical_text(s: &str) -> String {
    let (head, tail) = s.split_once(':').unwrap_or((s, ""));
    let mut out = format!("{}:", head.trim());
    for t in tail.split_whitespace() {
        out.push(' ');
        out.push_str(t);
    }
    out
}

/// A finite linear combination of monomials sharing a point count and
/// chord count. No stored coefficient is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCombo<T> {
    points: u32,
    chords: usize,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> LinearCombo<T> {
    pub fn zero(points: u32, chords: usize) -> Self {
        LinearCombo { points, chords, terms: BTreeMap::new() }
    }

    pub fn from_monomial(monomial: Monomial) -> Self {
        let mut combo = Self::zero(monomial.points, monomial.degree());
        combo.terms.insert(monomial, T::one());
        combo
    }

    pub fn points(&self) -> u32 {
        self.points
    }

    pub fn chords(&self) -> usize {
        self.chords
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, monomial: &Monomial) -> T {
        self.terms.get(monomial).cloned().unwrap_or_else(T::zero)
    }

    /// Adds `coeff · monomial`.
    ///
    /// Panics if the monomial lives in a different `(p, k)` grading.
    pub fn add_term(&mut self, monomial: Monomial, coeff: T) {
        assert!(
            monomial.points == self.points && monomial.degree() == self.chords,
            "monomial {monomial} outside grading (p={}, k={})",
            self.points,
            self.chords
        );
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Adds `coeff · term` for a signed monomial; zero terms are dropped.
    pub fn add_signed(&mut self, term: SignedMonomial, coeff: T) {
        if let SignedMonomial::Term { sign, monomial } = term {
            self.add_term(monomial, sign.to_scalar::<T>() * coeff);
        }
    }

    pub fn add_combo(&mut self, other: &LinearCombo<T>, coeff: &T) {
        for (m, c) in other.terms() {
            self.add_term(m.clone(), c.clone() * coeff.clone());
        }
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for LinearCombo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})[{m}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn mono(text: &str) -> Monomial {
        text.parse().unwrap()
    }

    #[test]
    fn reversal_with_even_parity_is_free() {
        let r = normalize(3, &[(2, 1)], Parity::Even).unwrap();
        assert_eq!(r, SignedMonomial::plus(mono("3: 1-2")));
        let r = normalize(3, &[(2, 1)], Parity::Odd).unwrap();
        assert_eq!(r.sign(), Some(Sign::Minus));
    }

    #[test]
    fn loops_and_duplicates_vanish() {
        assert!(normalize(2, &[(1, 1)], Parity::Odd).unwrap().is_zero());
        assert!(normalize(3, &[(1, 2), (2, 1)], Parity::Even).unwrap().is_zero());
        assert!(normalize(4, &[(1, 2), (3, 4), (1, 2)], Parity::Odd).unwrap().is_zero());
    }

    #[test]
    fn transposition_signs() {
        let even = normalize(4, &[(3, 4), (1, 2)], Parity::Even).unwrap();
        assert_eq!(even, SignedMonomial::Term { sign: Sign::Minus, monomial: mono("4: 1-2 3-4") });
        let odd = normalize(4, &[(3, 4), (1, 2)], Parity::Odd).unwrap();
        assert_eq!(odd, SignedMonomial::plus(mono("4: 1-2 3-4")));
    }

    #[test]
    fn out_of_range_is_an_error() {
        assert_eq!(normalize(3, &[(1, 4)], Parity::Even), Err(DiagramError::IndexOutOfRange { index: 4, points: 3 }));
        assert!(normalize(3, &[(0, 1)], Parity::Even).is_err());
    }

    #[test]
    fn products() {
        let a12 = SignedMonomial::plus(mono("4: 1-2"));
        let a34 = SignedMonomial::plus(mono("4: 3-4"));
        assert_eq!(product(&a12, &a34, Parity::Even).unwrap(), SignedMonomial::plus(mono("4: 1-2 3-4")));
        assert_eq!(
            product(&a34, &a12, Parity::Even).unwrap(),
            SignedMonomial::Term { sign: Sign::Minus, monomial: mono("4: 1-2 3-4") }
        );
        let b12 = SignedMonomial::plus(mono("2: 1-2"));
        for parity in [Parity::Even, Parity::Odd] {
            assert!(product(&b12, &b12, parity).unwrap().is_zero());
        }
        assert!(matches!(product(&a12, &b12, Parity::Odd), Err(DiagramError::PointMismatch { .. })));
        assert!(product(&SignedMonomial::Zero, &a12, Parity::Odd).unwrap().is_zero());
    }

    #[test]
    fn relabel_examples() {
        let m = mono("4: 1-3 2-4");
        let r = relabel(&m, &[1, 2, 2, 3], 3, Parity::Even).unwrap();
        assert_eq!(r, SignedMonomial::plus(mono("3: 1-2 2-3")));
        assert!(relabel(&mono("2: 1-2"), &[1, 1], 1, Parity::Odd).unwrap().is_zero());
        assert!(relabel(&mono("4: 1-2 3-4"), &[1, 1, 2, 3], 3, Parity::Even).unwrap().is_zero());
        assert!(relabel(&m, &[1, 2, 3, 5], 4, Parity::Even).is_err());
        assert!(relabel(&m, &[1, 2, 3], 4, Parity::Even).is_err());
    }

    #[test]
    fn coverage() {
        assert!(covers(&mono("4: 1-2 3-4")));
        assert!(!covers(&mono("3: 1-2")));
        assert!(covers(&Monomial::empty(0)));
        assert!(!covers(&Monomial::empty(1)));
    }

    #[test]
    fn parse_and_format() {
        let m = parse("4: 1-3 2-4", Parity::Even).unwrap();
        assert_eq!(m.monomial().unwrap().to_string(), "4: 1-3 2-4");
        assert!(parse("2: 1-1", Parity::Even).unwrap().is_zero());
        assert_eq!(parse("3: 2-1", Parity::Even).unwrap(), SignedMonomial::plus(mono("3: 1-2")));
        assert_eq!(parse("0:", Parity::Odd).unwrap(), SignedMonomial::plus(Monomial::empty(0)));
        for bad in ["4 1-2", "x: 1-2", "4: 1=2", "4: 1-b", "3: 1-4"] {
            assert!(parse(bad, Parity::Odd).is_err(), "{bad}");
        }
        assert!("4: 3-4 1-2".parse::<Monomial>().is_err());
    }

    #[test]
    fn maps() {
        assert_eq!(contraction_map(4, 2), vec![1, 2, 2, 3]);
        assert_eq!(insertion_map(3, 1), vec![2, 3, 4]);
        assert_eq!(insertion_map(3, 4), vec![1, 2, 3]);
    }

    #[test]
    fn combos_cancel() {
        let mut c = LinearCombo::<Rational>::zero(3, 1);
        c.add_term(mono("3: 1-2"), Rational::from_integer(2.into()));
        c.add_signed(
            SignedMonomial::Term { sign: Sign::Minus, monomial: mono("3: 1-2") },
            Rational::from_integer(2.into()),
        );
        assert!(c.is_zero());
    }
}
