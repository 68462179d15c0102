//! The string module of bracket words and its ring structure.
//!
//! A *bracket word* is a nonempty alternating sequence of two kinds of
//! letters: square letters `[x]` carrying a group word, and curly letters
//! `{α}` carrying a class of the peripheral (boundary) subgroup, recorded
//! as a pair of longitude/meridian exponents. Words are classified by the
//! kinds of their end letters — `KK` (curly/curly), `Kp` (curly/square),
//! `pK` (square/curly), `pp` (square/square) — and finite integer
//! combinations of words of one classification form the four module
//! pieces of the string module.
//!
//! The bridge to group-ring arithmetic is the linear map [`phi`]: squares
//! map to their group words, a curly letter in the leading position maps
//! to its peripheral word `ᾱ`, and every later curly letter maps to
//! `ᾱ(1−m)` where `m` is the meridian. The string relations
//! ([`apply_relation`]) leave `phi`-images unchanged, [`normalize_s`]
//! rewrites elements to a normal shape with curly letters only at the
//! ends, and the concatenation products ([`mu`], [`pp_mul`]) correspond
//! under `phi` to ring multiplication.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fpgroup::{Answer, FreeWord, PeripheralSystem};
use crate::groupring::{GroupRingElement, RingContext};
use crate::{Error, Result};

/// An element of the peripheral subgroup, written `l^a · m^b`.
///
/// The peripheral subgroup of a knot group is free abelian on the
/// longitude `l` and meridian `m`, so composition adds exponent pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PeripheralClass {
    /// Longitude exponent `a`.
    pub l_exp: i64,
    /// Meridian exponent `b`.
    pub m_exp: i64,
}

impl PeripheralClass {
    /// The class `l^a m^b`.
    pub fn new(l_exp: i64, m_exp: i64) -> Self {
        PeripheralClass { l_exp, m_exp }
    }

    /// The identity class.
    pub fn identity() -> Self {
        PeripheralClass { l_exp: 0, m_exp: 0 }
    }

    /// The meridian class `m`.
    pub fn meridian() -> Self {
        PeripheralClass { l_exp: 0, m_exp: 1 }
    }

    /// The longitude class `l`.
    pub fn longitude() -> Self {
        PeripheralClass { l_exp: 1, m_exp: 0 }
    }

    /// Group composition: exponents add.
    pub fn compose(&self, other: &Self) -> Self {
        PeripheralClass {
            l_exp: self.l_exp + other.l_exp,
            m_exp: self.m_exp + other.m_exp,
        }
    }

    /// The inverse class.
    pub fn inverse(&self) -> Self {
        PeripheralClass {
            l_exp: -self.l_exp,
            m_exp: -self.m_exp,
        }
    }

    /// Whether this is the identity class.
    pub fn is_identity(&self) -> bool {
        self.l_exp == 0 && self.m_exp == 0
    }
}

impl fmt::Display for PeripheralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        if self.l_exp == 1 {
            parts.push("l".to_string());
        } else if self.l_exp != 0 {
            parts.push(format!("l^{}", self.l_exp));
        }
        if self.m_exp == 1 {
            parts.push("m".to_string());
        } else if self.m_exp != 0 {
            parts.push(format!("m^{}", self.m_exp));
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Embed a peripheral class into the ambient group as the word
/// `l^a · m^b` in the given peripheral system (freely reduced).
pub fn hat_embed(class: &PeripheralClass, ps: &PeripheralSystem) -> FreeWord {
    ps.longitude
        .pow(class.l_exp)
        .concat(&ps.meridian.pow(class.m_exp))
}

/// One letter of a bracket word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BracketLetter {
    /// `[x]`: a group word.
    Square(FreeWord),
    /// `{α}`: a peripheral class.
    Curly(PeripheralClass),
}

impl BracketLetter {
    /// Whether this is a square letter.
    pub fn is_square(&self) -> bool {
        matches!(self, BracketLetter::Square(_))
    }

    /// Whether this is a curly letter.
    pub fn is_curly(&self) -> bool {
        matches!(self, BracketLetter::Curly(_))
    }
}

/// Classification of a bracket word by the kinds of its end letters
/// (`K` = curly end, `p` = square end, first end written first).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Classification {
    /// Starts and ends with a curly letter.
    #[serde(rename = "KK")]
    Kk,
    /// Starts curly, ends square.
    #[serde(rename = "Kp")]
    Kp,
    /// Starts square, ends curly.
    #[serde(rename = "pK")]
    Pk,
    /// Starts and ends with a square letter.
    #[serde(rename = "pp")]
    Pp,
}

impl Classification {
    /// Whether words of this classification start with a curly letter.
    pub fn starts_curly(&self) -> bool {
        matches!(self, Classification::Kk | Classification::Kp)
    }

    /// Whether words of this classification end with a curly letter.
    pub fn ends_curly(&self) -> bool {
        matches!(self, Classification::Kk | Classification::Pk)
    }

    /// The classification whose words start like `first` and end like
    /// `last` — the classification of a concatenation.
    pub fn join(first: Classification, last: Classification) -> Classification {
        match (first.starts_curly(), last.ends_curly()) {
            (true, true) => Classification::Kk,
            (true, false) => Classification::Kp,
            (false, true) => Classification::Pk,
            (false, false) => Classification::Pp,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::Kk => "KK",
            Classification::Kp => "Kp",
            Classification::Pk => "pK",
            Classification::Pp => "pp",
        };
        write!(f, "{s}")
    }
}

/// A nonempty alternating sequence of square and curly letters.
///
/// No two adjacent letters have the same kind; square letters may carry
/// the identity word (`[1]`) and curly letters the identity class (`{1}`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BracketWord {
    letters: Vec<BracketLetter>,
}

impl BracketWord {
    /// Build a bracket word, validating nonemptiness and alternation.
    pub fn new(letters: Vec<BracketLetter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Validation("bracket word must be nonempty".into()));
        }
        for pair in letters.windows(2) {
            if pair[0].is_square() == pair[1].is_square() {
                return Err(Error::Validation(
                    "adjacent bracket letters must alternate between square and curly".into(),
                ));
            }
        }
        Ok(BracketWord { letters })
    }

    /// The single curly word `{α}`.
    pub fn curly(class: PeripheralClass) -> Self {
        BracketWord {
            letters: vec![BracketLetter::Curly(class)],
        }
    }

    /// The single square word `[x]`.
    pub fn square(word: FreeWord) -> Self {
        BracketWord {
            letters: vec![BracketLetter::Square(word)],
        }
    }

    /// The letters, in order.
    pub fn letters(&self) -> &[BracketLetter] {
        &self.letters
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Bracket words are never empty.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// End-letter classification.
    pub fn classification(&self) -> Classification {
        let first = self.letters.first().is_some_and(BracketLetter::is_curly);
        let last = self.letters.last().is_some_and(BracketLetter::is_curly);
        match (first, last) {
            (true, true) => Classification::Kk,
            (true, false) => Classification::Kp,
            (false, true) => Classification::Pk,
            (false, false) => Classification::Pp,
        }
    }
}

impl fmt::Display for BracketWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in &self.letters {
            match letter {
                BracketLetter::Square(x) => write!(f, "[{x}]")?,
                BracketLetter::Curly(c) => write!(f, "{{{c}}}")?,
            }
        }
        Ok(())
    }
}

/// Concatenate two bracket words, merging the junction letters when they
/// have the same kind (square·square multiplies the group words,
/// curly·curly composes the classes) and appending otherwise.
///
/// This single operation realizes all the module products: the pairing of
/// `Kp` with `pK` words ([`mu`]), the action of `KK` words on `Kp`/`pK`
/// words through curly junctions, and the `pp` word product.
pub fn concat_merge(a: &BracketWord, b: &BracketWord) -> BracketWord {
    let mut letters = a.letters.clone();
    let tail = &b.letters;
    let merged = match (letters.last_mut().expect("nonempty"), &tail[0]) {
        (BracketLetter::Square(x), BracketLetter::Square(y)) => {
            *x = x.concat(y);
            true
        }
        (BracketLetter::Curly(c), BracketLetter::Curly(d)) => {
            *c = c.compose(d);
            true
        }
        _ => false,
    };
    if !merged {
        letters.push(tail[0].clone());
    }
    letters.extend_from_slice(&tail[1..]);
    BracketWord { letters }
}

/// A finite integer combination of bracket words, all of one
/// classification. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SElement {
    classification: Classification,
    terms: BTreeMap<BracketWord, i64>,
}

impl SElement {
    /// The zero element of the given classification.
    pub fn zero(classification: Classification) -> Self {
        SElement {
            classification,
            terms: BTreeMap::new(),
        }
    }

    /// The element with a single term of coefficient one.
    pub fn from_word(word: BracketWord) -> Self {
        let classification = word.classification();
        let mut terms = BTreeMap::new();
        terms.insert(word, 1);
        SElement {
            classification,
            terms,
        }
    }

    /// Build from coefficient/word pairs, validating that every word has
    /// the stated classification. Like terms combine; zero sums drop.
    pub fn from_terms(
        classification: Classification,
        pairs: impl IntoIterator<Item = (i64, BracketWord)>,
    ) -> Result<Self> {
        let mut terms: BTreeMap<BracketWord, i64> = BTreeMap::new();
        for (coeff, word) in pairs {
            if word.classification() != classification {
                return Err(Error::Classification(format!(
                    "term {word} has classification {}, expected {classification}",
                    word.classification()
                )));
            }
            let entry = terms.entry(word).or_insert(0);
            *entry += coeff;
            if *entry == 0 {
                terms.retain(|_, c| *c != 0);
            }
        }
        terms.retain(|_, c| *c != 0);
        Ok(SElement {
            classification,
            terms,
        })
    }

    /// The common classification of all terms.
    pub fn classification(&self) -> Classification {
        self.classification
    }

    /// Iterate over `(word, coefficient)` pairs in a deterministic order.
    pub fn terms(&self) -> impl Iterator<Item = (&BracketWord, i64)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Whether this is the zero element.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum. Classifications must agree unless one side is zero.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.is_zero() && !other.is_zero() && self.classification != other.classification {
            return Err(Error::Classification(format!(
                "cannot add {} and {} elements",
                self.classification, other.classification
            )));
        }
        let classification = if self.is_zero() {
            other.classification
        } else {
            self.classification
        };
        let mut terms = self.terms.clone();
        for (word, coeff) in &other.terms {
            let entry = terms.entry(word.clone()).or_insert(0);
            *entry += coeff;
        }
        terms.retain(|_, c| *c != 0);
        Ok(SElement {
            classification,
            terms,
        })
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    /// Multiply every coefficient by `n`.
    pub fn scale(&self, n: i64) -> Self {
        if n == 0 {
            return SElement::zero(self.classification);
        }
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c * n))
            .collect();
        SElement {
            classification: self.classification,
            terms,
        }
    }
}

impl fmt::Display for SElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (word, coeff)) in self.terms().enumerate() {
            let mag = coeff.abs();
            if i == 0 {
                if coeff < 0 {
                    write!(f, "-")?;
                }
            } else if coeff < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{word}")?;
        }
        Ok(())
    }
}

/// The four defining relations of the string module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StringRelation {
    /// A square letter absorbs the following curly letter:
    /// `[x]{α} → [x·ᾱ]{1}`.
    Str1,
    /// A square letter absorbs the preceding curly letter:
    /// `{α}[x] → {1}[ᾱ·x]`.
    Str2,
    /// Splitting a square letter:
    /// `[x₁x₂] → [x₁]{1}[x₂] + [x₁·m·x₂]`.
    Str3,
    /// Splitting a curly letter:
    /// `{α} → {α·m} + {α₁}[1]{α₂}` where `α = α₁·α₂`.
    Str4,
}

impl fmt::Display for StringRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StringRelation::Str1 => "str1",
            StringRelation::Str2 => "str2",
            StringRelation::Str3 => "str3",
            StringRelation::Str4 => "str4",
        };
        write!(f, "{s}")
    }
}

/// Where and how to apply a string relation.
///
/// `index` addresses the letter the relation acts on. `split` is used
/// only by [`StringRelation::Str3`] (how many letters of the square word
/// fall left of the cut); `left_class` only by [`StringRelation::Str4`]
/// (the left factor `α₁` of the curly split).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Site {
    /// Index of the letter the relation pattern starts at.
    pub index: usize,
    /// Cut position inside a square word (str3).
    pub split: usize,
    /// Left factor of a curly split (str4).
    pub left_class: PeripheralClass,
}

impl Site {
    /// A site at `index` with default split data.
    pub fn at(index: usize) -> Self {
        Site {
            index,
            split: 0,
            left_class: PeripheralClass::identity(),
        }
    }

    /// Set the str3 cut position.
    pub fn with_split(mut self, split: usize) -> Self {
        self.split = split;
        self
    }

    /// Set the str4 left factor.
    pub fn with_left_class(mut self, left_class: PeripheralClass) -> Self {
        self.left_class = left_class;
        self
    }
}

/// Apply one string relation at a site, returning the equivalent element.
///
/// Every relation preserves the `phi`-image and the classification. The
/// site must match the relation's pattern: str1 wants a square letter at
/// `index` followed by a curly letter, str2 a curly letter at `index`
/// followed by a square letter, str3 a square letter at `index` with
/// `split` at most its length, str4 a curly letter at `index`.
pub fn apply_relation(
    w: &BracketWord,
    site: Site,
    which: StringRelation,
    ps: &PeripheralSystem,
) -> Result<SElement> {
    let letters = w.letters();
    let idx = site.index;
    let mismatch = |msg: String| Err(Error::PatternMismatch(msg));
    match which {
        StringRelation::Str1 => {
            let (x, class) = match (letters.get(idx), letters.get(idx + 1)) {
                (Some(BracketLetter::Square(x)), Some(BracketLetter::Curly(c))) => (x, *c),
                _ => {
                    return mismatch(format!(
                        "str1 needs a square letter at {idx} followed by a curly letter in {w}"
                    ))
                }
            };
            let mut out = letters.to_vec();
            out[idx] = BracketLetter::Square(x.concat(&hat_embed(&class, ps)));
            out[idx + 1] = BracketLetter::Curly(PeripheralClass::identity());
            Ok(SElement::from_word(BracketWord::new(out)?))
        }
        StringRelation::Str2 => {
            let (class, x) = match (letters.get(idx), letters.get(idx + 1)) {
                (Some(BracketLetter::Curly(c)), Some(BracketLetter::Square(x))) => (*c, x),
                _ => {
                    return mismatch(format!(
                        "str2 needs a curly letter at {idx} followed by a square letter in {w}"
                    ))
                }
            };
            let mut out = letters.to_vec();
            out[idx] = BracketLetter::Curly(PeripheralClass::identity());
            out[idx + 1] = BracketLetter::Square(hat_embed(&class, ps).concat(x));
            Ok(SElement::from_word(BracketWord::new(out)?))
        }
        StringRelation::Str3 => {
            let x = match letters.get(idx) {
                Some(BracketLetter::Square(x)) => x,
                _ => return mismatch(format!("str3 needs a square letter at {idx} in {w}")),
            };
            if site.split > x.len() {
                return mismatch(format!(
                    "str3 cut {} exceeds square word length {} in {w}",
                    site.split,
                    x.len()
                ));
            }
            let x1 = FreeWord::from_letters(&x.letters()[..site.split])?;
            let x2 = FreeWord::from_letters(&x.letters()[site.split..])?;
            let mut split_letters = letters.to_vec();
            split_letters.splice(
                idx..=idx,
                [
                    BracketLetter::Square(x1.clone()),
                    BracketLetter::Curly(PeripheralClass::identity()),
                    BracketLetter::Square(x2.clone()),
                ],
            );
            let mut merged_letters = letters.to_vec();
            merged_letters[idx] = BracketLetter::Square(x1.concat(&ps.meridian).concat(&x2));
            SElement::from_terms(
                w.classification(),
                [
                    (1, BracketWord::new(split_letters)?),
                    (1, BracketWord::new(merged_letters)?),
                ],
            )
        }
        StringRelation::Str4 => {
            let class = match letters.get(idx) {
                Some(BracketLetter::Curly(c)) => *c,
                _ => return mismatch(format!("str4 needs a curly letter at {idx} in {w}")),
            };
            let left = site.left_class;
            let right = class.compose(&left.inverse());
            let mut shifted = letters.to_vec();
            shifted[idx] = BracketLetter::Curly(class.compose(&PeripheralClass::meridian()));
            let mut split_letters = letters.to_vec();
            split_letters.splice(
                idx..=idx,
                [
                    BracketLetter::Curly(left),
                    BracketLetter::Square(FreeWord::identity()),
                    BracketLetter::Curly(right),
                ],
            );
            SElement::from_terms(
                w.classification(),
                [
                    (1, BracketWord::new(shifted)?),
                    (1, BracketWord::new(split_letters)?),
                ],
            )
        }
    }
}

/// Index of the leftmost internal curly letter (not first, not last).
fn internal_curly(w: &BracketWord) -> Option<usize> {
    let letters = w.letters();
    (1..letters.len().saturating_sub(1)).find(|&i| letters[i].is_curly())
}

/// Rewrite an element to normal shape.
///
/// Internal curly letters are eliminated through
/// `[x₁]{α}[x₂] → [x₁·ᾱ·x₂] − [x₁·ᾱ·m·x₂]`, and end curly letters are
/// absorbed into the adjacent square (`{α}[x]… → {1}[ᾱx]…` and
/// `…[x]{α} → …[xᾱ]{1}`), so every normalized term is `[x]`, `{1}[x]`,
/// `[x]{1}`, `{1}[x]{1}`, or a single `{α}`. The map is idempotent and
/// preserves `phi`-images and classification.
pub fn normalize_s(e: &SElement, ps: &PeripheralSystem) -> SElement {
    let mut out: BTreeMap<BracketWord, i64> = BTreeMap::new();
    let mut stack: Vec<(BracketWord, i64)> = e.terms().map(|(w, c)| (w.clone(), c)).collect();
    while let Some((w, coeff)) = stack.pop() {
        if let Some(i) = internal_curly(&w) {
            let letters = w.letters();
            let (x1, class, x2) = match (&letters[i - 1], &letters[i], &letters[i + 1]) {
                (
                    BracketLetter::Square(x1),
                    BracketLetter::Curly(c),
                    BracketLetter::Square(x2),
                ) => (x1, c, x2),
                _ => unreachable!("internal curly letters are flanked by squares"),
            };
            let left = x1.concat(&hat_embed(class, ps));
            let plain = left.concat(x2);
            let shifted = left.concat(&ps.meridian).concat(x2);
            for (word, c) in [(plain, coeff), (shifted, -coeff)] {
                let mut next = letters.to_vec();
                next.splice(i - 1..=i + 1, [BracketLetter::Square(word)]);
                stack.push((
                    BracketWord {
                        letters: next,
                    },
                    c,
                ));
            }
            continue;
        }
        let mut letters = w.letters().to_vec();
        let n = letters.len();
        if n > 1 {
            if let BracketLetter::Curly(c) = letters[0] {
                if !c.is_identity() {
                    if let BracketLetter::Square(x) = &letters[1] {
                        letters[1] = BracketLetter::Square(hat_embed(&c, ps).concat(x));
                        letters[0] = BracketLetter::Curly(PeripheralClass::identity());
                    }
                }
            }
            if let BracketLetter::Curly(c) = letters[n - 1] {
                if !c.is_identity() {
                    if let BracketLetter::Square(x) = &letters[n - 2] {
                        letters[n - 2] = BracketLetter::Square(x.concat(&hat_embed(&c, ps)));
                        letters[n - 1] = BracketLetter::Curly(PeripheralClass::identity());
                    }
                }
            }
        }
        let entry = out.entry(BracketWord { letters }).or_insert(0);
        *entry += coeff;
    }
    out.retain(|_, c| *c != 0);
    SElement {
        classification: e.classification,
        terms: out,
    }
}

/// `ᾱ(1−m)` as a group-ring element.
fn curly_factor(
    ctx: &Arc<RingContext>,
    class: &PeripheralClass,
    leading: bool,
) -> Result<GroupRingElement> {
    let bar = hat_embed(class, &ctx.group.peripheral);
    if leading {
        Ok(GroupRingElement::group_element(ctx, &bar))
    } else {
        GroupRingElement::from_terms(
            ctx,
            &[
                (BigInt::from(1), bar.clone()),
                (BigInt::from(-1), bar.concat(ctx.meridian())),
            ],
        )
    }
}

/// The linear map from the string module into the group ring.
///
/// A term maps to the product of its letters in order: `[x] ↦ x`, a
/// leading `{α} ↦ ᾱ`, and every later `{α} ↦ ᾱ(1−m)`. Under this map the
/// four classifications land in `Ẑ + R(1−m)`, `R`, `R(1−m)` and
/// `R(1−m)R` respectively, the string relations become identities, and
/// the concatenation products become ring multiplication.
pub fn phi(e: &SElement, ctx: &Arc<RingContext>) -> Result<GroupRingElement> {
    let mut sum = GroupRingElement::zero(ctx);
    for (word, coeff) in e.terms() {
        let mut acc = GroupRingElement::integer(ctx, coeff);
        for (pos, letter) in word.letters().iter().enumerate() {
            let factor = match letter {
                BracketLetter::Square(x) => GroupRingElement::group_element(ctx, x),
                BracketLetter::Curly(c) => curly_factor(ctx, c, pos == 0)?,
            };
            acc = acc.mul(&factor)?;
        }
        sum = sum.add(&acc)?;
    }
    Ok(sum)
}

/// [`phi`] of a single bracket word.
pub fn phi_word(w: &BracketWord, ctx: &Arc<RingContext>) -> Result<GroupRingElement> {
    phi(&SElement::from_word(w.clone()), ctx)
}

/// Bilinear extension of [`concat_merge`] to elements.
///
/// The operands may have any classifications; the result's is determined
/// by the first operand's leading end and the second's trailing end.
pub fn module_concat(u: &SElement, v: &SElement) -> Result<SElement> {
    let classification = Classification::join(u.classification, v.classification);
    let mut pairs = Vec::new();
    for (wu, cu) in u.terms() {
        for (wv, cv) in v.terms() {
            pairs.push((cu * cv, concat_merge(wu, wv)));
        }
    }
    SElement::from_terms(classification, pairs)
}

/// The pairing `μ`: a `Kp` element times a `pK` element, concatenated
/// through the square junction, yields a `KK` element. Under [`phi`]
/// this is ring multiplication: `φ(μ(u,v)) = φ(u)·φ(v)`.
pub fn mu(u: &SElement, v: &SElement) -> Result<SElement> {
    if u.classification != Classification::Kp {
        return Err(Error::Classification(format!(
            "mu expects a Kp left operand, got {}",
            u.classification
        )));
    }
    if v.classification != Classification::Pk {
        return Err(Error::Classification(format!(
            "mu expects a pK right operand, got {}",
            v.classification
        )));
    }
    module_concat(u, v)
}

/// Multiply in `Z ⊕ S_pp`: the unit is `(1, 0)` and
/// `(n₁,e₁)·(n₂,e₂) = (n₁n₂, n₁e₂ + n₂e₁ + e₁e₂)`, where `e₁e₂`
/// concatenates through the square junction. The additive shift makes
/// `(n, e) ↦ n + φ(e)` a ring homomorphism into the group ring.
pub fn pp_mul(a: &(i64, SElement), b: &(i64, SElement)) -> Result<(i64, SElement)> {
    for (_, e) in [a, b] {
        if e.classification != Classification::Pp {
            return Err(Error::Classification(format!(
                "pp_mul operands must be pp elements, got {}",
                e.classification
            )));
        }
    }
    let cross = module_concat(&a.1, &b.1)?;
    let e = b.1.scale(a.0).add(&a.1.scale(b.0))?.add(&cross)?;
    Ok((a.0 * b.0, e))
}

/// `(n, e) ↦ n + φ(e)`, the ring map realizing `Z ⊕ S_pp` inside the
/// group ring.
pub fn phi_hat(a: &(i64, SElement), ctx: &Arc<RingContext>) -> Result<GroupRingElement> {
    GroupRingElement::integer(ctx, a.0).add(&phi(&a.1, ctx)?)
}

/// Strip the meridian framing from a group word: `x ↦ m^(−deg x) · x`,
/// where `deg` is the exponent sum (the meridional abelianization degree
/// when the presentation's generators are all meridian conjugates). The
/// result has exponent sum zero; the meridian maps to the identity and
/// the longitude is fixed.
pub fn unframe(x: &FreeWord, ps: &PeripheralSystem) -> FreeWord {
    ps.meridian.pow(-x.exponent_sum()).concat(x)
}

/// Pass/fail/unknown tallies for one checked identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckLine {
    /// Which identity was sampled.
    pub name: String,
    /// Instances the backend certified as holding.
    pub pass: u64,
    /// Instances the backend certified as violated.
    pub fail: u64,
    /// Instances the backend could not decide.
    pub unknown: u64,
}

impl CheckLine {
    /// Fresh zeroed tally for one named identity.
    pub fn new(name: &str) -> Self {
        CheckLine {
            name: name.to_string(),
            pass: 0,
            fail: 0,
            unknown: 0,
        }
    }

    /// Record one three-valued verdict.
    pub fn tally(&mut self, answer: Answer) {
        match answer {
            Answer::Yes => self.pass += 1,
            Answer::No => self.fail += 1,
            Answer::Unknown => self.unknown += 1,
        }
    }
}

/// A seeded randomized-identity report: one [`CheckLine`] per identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    /// Seed the instance stream was drawn from.
    pub seed: u64,
    /// Sample count per identity.
    pub samples: u64,
    /// Per-identity tallies.
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    /// Total certified violations across all lines.
    pub fn total_failures(&self) -> u64 {
        self.lines.iter().map(|l| l.fail).sum()
    }

    /// Total undecided instances across all lines.
    pub fn total_unknowns(&self) -> u64 {
        self.lines.iter().map(|l| l.unknown).sum()
    }

    /// Total certified passes across all lines.
    pub fn total_passes(&self) -> u64 {
        self.lines.iter().map(|l| l.pass).sum()
    }
}

fn random_word(rng: &mut ChaCha8Rng, generators: usize, max_len: usize) -> FreeWord {
    let len = rng.random_range(0..=max_len);
    let mut w = FreeWord::identity();
    for _ in 0..len {
        let g = FreeWord::generator(rng.random_range(0..generators));
        let g = if rng.random_bool(0.5) { g } else { g.inverse() };
        w = w.concat(&g);
    }
    w
}

fn random_class(rng: &mut ChaCha8Rng, bound: i64) -> PeripheralClass {
    PeripheralClass::new(
        rng.random_range(-bound..=bound),
        rng.random_range(-bound..=bound),
    )
}

fn random_bracket_word(
    rng: &mut ChaCha8Rng,
    generators: usize,
    classification: Classification,
) -> BracketWord {
    let squares = match classification {
        Classification::Kk => rng.random_range(0..=2usize),
        _ => rng.random_range(1..=2usize),
    };
    if squares == 0 {
        return BracketWord::curly(random_class(rng, 2));
    }
    let mut letters = Vec::new();
    if classification.starts_curly() {
        letters.push(BracketLetter::Curly(random_class(rng, 2)));
    }
    for s in 0..squares {
        letters.push(BracketLetter::Square(random_word(rng, generators, 3)));
        if s + 1 < squares {
            letters.push(BracketLetter::Curly(random_class(rng, 2)));
        }
    }
    if classification.ends_curly() {
        letters.push(BracketLetter::Curly(random_class(rng, 2)));
    }
    BracketWord::new(letters).expect("constructed alternating")
}

fn random_selement(
    rng: &mut ChaCha8Rng,
    generators: usize,
    classification: Classification,
) -> SElement {
    let count = rng.random_range(1..=2usize);
    let mut pairs = Vec::new();
    for _ in 0..count {
        let coeff = *[-2i64, -1, 1, 2]
            .get(rng.random_range(0..4usize))
            .expect("in range");
        pairs.push((coeff, random_bracket_word(rng, generators, classification)));
    }
    SElement::from_terms(classification, pairs).expect("homogeneous by construction")
}

fn one_minus_m(ctx: &Arc<RingContext>) -> Result<GroupRingElement> {
    GroupRingElement::from_terms(
        ctx,
        &[
            (BigInt::from(1), FreeWord::identity()),
            (BigInt::from(-1), ctx.meridian().clone()),
        ],
    )
}

/// Sample the four skein-style identities satisfied by `phi`-images and
/// tally backend verdicts.
///
/// Per sample: (1) a trivial cord pattern `{α}[1]{α⁻¹}` maps to `1−m`;
/// (2) longitude powers absorb into an end class — `φ({l^k·α}[x])`
/// equals `l^k·φ({α}[x])`; (3) the meridian skein identity
/// `x₁x₂(1−m) − x₁mx₂(1−m) = x₁(1−m)x₂(1−m)` holds in the ring; (4) the
/// curly split `φ({α}) = φ({α·m}) + φ({α₁}[1]{α₂})` holds for any
/// factorization `α = α₁α₂`.
pub fn skein_check(ctx: &Arc<RingContext>, samples: u64, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generators = ctx.group.presentation.generator_count;
    let ps = ctx.group.peripheral.clone();
    let one_m = one_minus_m(ctx)?;
    let mut lines = [
        CheckLine::new("trivial_cord"),
        CheckLine::new("end_absorption"),
        CheckLine::new("meridian_skein"),
        CheckLine::new("curly_split"),
    ];
    for _ in 0..samples {
        let alpha = random_class(&mut rng, 2);

        let trivial = BracketWord::new(vec![
            BracketLetter::Curly(alpha),
            BracketLetter::Square(FreeWord::identity()),
            BracketLetter::Curly(alpha.inverse()),
        ])?;
        lines[0].tally(phi_word(&trivial, ctx)?.equal(&one_m)?);

        let k = rng.random_range(1..=2i64);
        let x = random_word(&mut rng, generators, 3);
        let base = BracketWord::new(vec![
            BracketLetter::Curly(alpha),
            BracketLetter::Square(x.clone()),
        ])?;
        let shifted = BracketWord::new(vec![
            BracketLetter::Curly(alpha.compose(&PeripheralClass::new(k, 0))),
            BracketLetter::Square(x),
        ])?;
        let l_power = GroupRingElement::group_element(ctx, &ps.longitude.pow(k));
        lines[1].tally(
            phi_word(&shifted, ctx)?
                .equal(&l_power.mul(&phi_word(&base, ctx)?)?)?,
        );

        let x1 = GroupRingElement::group_element(ctx, &random_word(&mut rng, generators, 3));
        let x2 = GroupRingElement::group_element(ctx, &random_word(&mut rng, generators, 3));
        let m_elt = GroupRingElement::group_element(ctx, ctx.meridian());
        let lhs = x1
            .mul(&x2)?
            .mul(&one_m)?
            .sub(&x1.mul(&m_elt)?.mul(&x2)?.mul(&one_m)?)?;
        let rhs = x1.mul(&one_m)?.mul(&x2)?.mul(&one_m)?;
        lines[2].tally(lhs.equal(&rhs)?);

        let left = random_class(&mut rng, 2);
        let right = alpha.compose(&left.inverse());
        let split = BracketWord::new(vec![
            BracketLetter::Curly(left),
            BracketLetter::Square(FreeWord::identity()),
            BracketLetter::Curly(right),
        ])?;
        let shifted_class =
            BracketWord::curly(alpha.compose(&PeripheralClass::meridian()));
        let rhs4 = phi_word(&shifted_class, ctx)?.add(&phi_word(&split, ctx)?)?;
        lines[3].tally(phi_word(&BracketWord::curly(alpha), ctx)?.equal(&rhs4)?);
    }
    Ok(CheckReport {
        seed,
        samples,
        lines: lines.to_vec(),
    })
}

/// Sample random bracket words of every classification, apply a random
/// applicable string relation at a random site, and tally whether the
/// `phi`-image is unchanged. One line per relation.
pub fn phi_invariance_check(
    ctx: &Arc<RingContext>,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generators = ctx.group.presentation.generator_count;
    let ps = ctx.group.peripheral.clone();
    let mut lines = [
        CheckLine::new("str1"),
        CheckLine::new("str2"),
        CheckLine::new("str3"),
        CheckLine::new("str4"),
    ];
    let classes = [
        Classification::Kk,
        Classification::Kp,
        Classification::Pk,
        Classification::Pp,
    ];
    for classification in classes {
        for _ in 0..samples {
            let w = random_bracket_word(&mut rng, generators, classification);
            let mut options: Vec<(StringRelation, Site)> = Vec::new();
            for (i, letter) in w.letters().iter().enumerate() {
                match letter {
                    BracketLetter::Square(x) => {
                        if w.letters().get(i + 1).is_some_and(BracketLetter::is_curly) {
                            options.push((StringRelation::Str1, Site::at(i)));
                        }
                        let split = rng.random_range(0..=x.len());
                        options.push((StringRelation::Str3, Site::at(i).with_split(split)));
                    }
                    BracketLetter::Curly(_) => {
                        if w.letters().get(i + 1).is_some_and(BracketLetter::is_square) {
                            options.push((StringRelation::Str2, Site::at(i)));
                        }
                        options.push((
                            StringRelation::Str4,
                            Site::at(i).with_left_class(random_class(&mut rng, 1)),
                        ));
                    }
                }
            }
            let (relation, site) = options[rng.random_range(0..options.len())];
            let rewritten = apply_relation(&w, site, relation, &ps)?;
            debug_assert_eq!(rewritten.classification(), classification);
            let before = phi_word(&w, ctx)?;
            let after = phi(&rewritten, ctx)?;
            let line = match relation {
                StringRelation::Str1 => &mut lines[0],
                StringRelation::Str2 => &mut lines[1],
                StringRelation::Str3 => &mut lines[2],
                StringRelation::Str4 => &mut lines[3],
            };
            line.tally(before.equal(&after)?);
        }
    }
    Ok(CheckReport {
        seed,
        samples,
        lines: lines.to_vec(),
    })
}

/// Sample the multiplicative structure: `μ` intertwines with ring
/// multiplication, `(n,e) ↦ n+φ(e)` is multiplicative for [`pp_mul`],
/// concatenation through curly junctions is balanced (associative) over
/// `KK` middles, and [`normalize_s`] preserves `phi`-images.
pub fn product_check(ctx: &Arc<RingContext>, samples: u64, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generators = ctx.group.presentation.generator_count;
    let ps = ctx.group.peripheral.clone();
    let mut lines = [
        CheckLine::new("mu_multiplicative"),
        CheckLine::new("pp_ring_map"),
        CheckLine::new("tensor_balance"),
        CheckLine::new("normalize_phi"),
    ];
    for _ in 0..samples {
        let u = random_selement(&mut rng, generators, Classification::Kp);
        let v = random_selement(&mut rng, generators, Classification::Pk);
        let product = phi(&mu(&u, &v)?, ctx)?;
        lines[0].tally(product.equal(&phi(&u, ctx)?.mul(&phi(&v, ctx)?)?)?);

        let a = (
            rng.random_range(-2..=2i64),
            random_selement(&mut rng, generators, Classification::Pp),
        );
        let b = (
            rng.random_range(-2..=2i64),
            random_selement(&mut rng, generators, Classification::Pp),
        );
        let lhs = phi_hat(&pp_mul(&a, &b)?, ctx)?;
        let rhs = phi_hat(&a, ctx)?.mul(&phi_hat(&b, ctx)?)?;
        lines[1].tally(lhs.equal(&rhs)?);

        let left = random_bracket_word(&mut rng, generators, Classification::Pk);
        let middle = random_bracket_word(&mut rng, generators, Classification::Kk);
        let right = random_bracket_word(&mut rng, generators, Classification::Kp);
        let assoc_left = concat_merge(&concat_merge(&left, &middle), &right);
        let assoc_right = concat_merge(&left, &concat_merge(&middle, &right));
        if assoc_left != assoc_right {
            lines[2].tally(Answer::No);
        } else {
            lines[2].tally(
                phi_word(&assoc_left, ctx)?.equal(&phi_word(&assoc_right, ctx)?)?,
            );
        }

        let classification = classes_cycle(&mut rng);
        let e = random_selement(&mut rng, generators, classification);
        let normalized = normalize_s(&e, &ps);
        lines[3].tally(phi(&normalized, ctx)?.equal(&phi(&e, ctx)?)?);
    }
    Ok(CheckReport {
        seed,
        samples,
        lines: lines.to_vec(),
    })
}

fn classes_cycle(rng: &mut ChaCha8Rng) -> Classification {
    [
        Classification::Kk,
        Classification::Kp,
        Classification::Pk,
        Classification::Pp,
    ][rng.random_range(0..4usize)]
}

/// Wire form of one bracket letter.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum LetterWire {
    /// A square letter with its free-word letter list.
    #[serde(rename = "sq")]
    Sq {
        /// Signed generator indices.
        word: Vec<i32>,
    },
    /// A curly letter with its exponent pair.
    #[serde(rename = "cu")]
    Cu {
        /// Longitude exponent.
        l: i64,
        /// Meridian exponent.
        m: i64,
    },
}

/// Wire form of one term of an [`SElement`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct STermWire {
    /// Integer coefficient.
    pub coeff: i64,
    /// The bracket word's letters.
    pub letters: Vec<LetterWire>,
}

impl SElement {
    /// Serializable form: one entry per term, deterministic order.
    pub fn to_wire(&self) -> Vec<STermWire> {
        self.terms()
            .map(|(word, coeff)| STermWire {
                coeff,
                letters: word
                    .letters()
                    .iter()
                    .map(|letter| match letter {
                        BracketLetter::Square(x) => LetterWire::Sq {
                            word: x.letters().to_vec(),
                        },
                        BracketLetter::Curly(c) => LetterWire::Cu {
                            l: c.l_exp,
                            m: c.m_exp,
                        },
                    })
                    .collect(),
            })
            .collect()
    }

    /// Parse the wire form; all terms must share one classification and
    /// the list must be nonempty (the zero element has no self-describing
    /// classification).
    pub fn from_wire(wire: &[STermWire]) -> Result<Self> {
        if wire.is_empty() {
            return Err(Error::Validation(
                "cannot classify an element with no terms".into(),
            ));
        }
        let mut pairs = Vec::new();
        for term in wire {
            let letters = term
                .letters
                .iter()
                .map(|letter| match letter {
                    LetterWire::Sq { word } => {
                        Ok(BracketLetter::Square(FreeWord::from_letters(word)?))
                    }
                    LetterWire::Cu { l, m } => {
                        Ok(BracketLetter::Curly(PeripheralClass::new(*l, *m)))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            pairs.push((term.coeff, BracketWord::new(letters)?));
        }
        let classification = pairs[0].1.classification();
        SElement::from_terms(classification, pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::{knot_group, BackendConfig};
    use crate::knotio::{census_lookup, parse_pd};

    fn trefoil_ctx() -> Arc<RingContext> {
        let diagram = parse_pd(&census_lookup("3_1").expect("census").pd).expect("pd");
        RingContext::new(knot_group(&diagram), BackendConfig::default()).expect("context")
    }

    fn sq(letters: &[i32]) -> BracketLetter {
        BracketLetter::Square(FreeWord::from_letters(letters).expect("reduced"))
    }

    fn cu(l: i64, m: i64) -> BracketLetter {
        BracketLetter::Curly(PeripheralClass::new(l, m))
    }

    fn word(letters: Vec<BracketLetter>) -> BracketWord {
        BracketWord::new(letters).expect("alternating")
    }

    #[test]
    fn bracket_word_validation_and_classification() {
        assert!(BracketWord::new(vec![]).is_err());
        assert!(BracketWord::new(vec![sq(&[1]), sq(&[2])]).is_err());
        assert!(BracketWord::new(vec![cu(0, 1), cu(1, 0)]).is_err());

        assert_eq!(
            word(vec![cu(0, 0)]).classification(),
            Classification::Kk
        );
        assert_eq!(
            word(vec![cu(0, 0), sq(&[1])]).classification(),
            Classification::Kp
        );
        assert_eq!(
            word(vec![sq(&[1]), cu(0, 0)]).classification(),
            Classification::Pk
        );
        assert_eq!(word(vec![sq(&[1])]).classification(), Classification::Pp);
        assert_eq!(
            word(vec![sq(&[1]), cu(1, 1), sq(&[-2])]).to_string(),
            "[g0]{l*m}[g1^-1]"
        );
    }

    #[test]
    fn hat_embed_examples() {
        let ps = PeripheralSystem {
            meridian: FreeWord::generator(0),
            longitude: FreeWord::generator(1),
        };
        assert!(hat_embed(&PeripheralClass::identity(), &ps).is_identity());
        assert_eq!(hat_embed(&PeripheralClass::meridian(), &ps), ps.meridian);
        assert_eq!(
            hat_embed(&PeripheralClass::new(2, -1), &ps),
            FreeWord::from_letters(&[2, 2, -1]).unwrap()
        );
    }

    #[test]
    fn phi_matches_ring_products_on_basic_shapes() {
        let ctx = trefoil_ctx();
        let ps = ctx.group.peripheral.clone();
        let alpha = PeripheralClass::new(1, -1);
        let bar = hat_embed(&alpha, &ps);

        let single = phi_word(&BracketWord::curly(alpha), &ctx).unwrap();
        assert_eq!(single, GroupRingElement::group_element(&ctx, &bar));

        let x = FreeWord::generator(0).concat(&FreeWord::generator(1));
        let marked = word(vec![cu(0, 0), BracketLetter::Square(x.clone()), cu(0, 0)]);
        let expected = GroupRingElement::group_element(&ctx, &x)
            .mul(&one_minus_m(&ctx).unwrap())
            .unwrap();
        assert_eq!(
            phi_word(&marked, &ctx).unwrap().equal(&expected).unwrap(),
            Answer::Yes
        );

        let y = FreeWord::generator(1);
        let middle = word(vec![
            BracketLetter::Square(x.clone()),
            BracketLetter::Curly(alpha),
            BracketLetter::Square(y.clone()),
        ]);
        let expected = GroupRingElement::group_element(&ctx, &x)
            .mul(&GroupRingElement::group_element(&ctx, &bar))
            .unwrap()
            .mul(&one_minus_m(&ctx).unwrap())
            .unwrap()
            .mul(&GroupRingElement::group_element(&ctx, &y))
            .unwrap();
        assert_eq!(
            phi_word(&middle, &ctx).unwrap().equal(&expected).unwrap(),
            Answer::Yes
        );
    }

    #[test]
    fn apply_relation_examples_and_mismatches() {
        let ctx = trefoil_ctx();
        let ps = ctx.group.peripheral.clone();
        let alpha = PeripheralClass::new(0, 1);
        let x = FreeWord::generator(0);

        let pk = word(vec![BracketLetter::Square(x.clone()), BracketLetter::Curly(alpha)]);
        let absorbed = apply_relation(&pk, Site::at(0), StringRelation::Str1, &ps).unwrap();
        let expected = SElement::from_word(word(vec![
            BracketLetter::Square(x.concat(&hat_embed(&alpha, &ps))),
            cu(0, 0),
        ]));
        assert_eq!(absorbed, expected);

        let kp = word(vec![BracketLetter::Curly(alpha), BracketLetter::Square(x.clone())]);
        let absorbed = apply_relation(&kp, Site::at(0), StringRelation::Str2, &ps).unwrap();
        let expected = SElement::from_word(word(vec![
            cu(0, 0),
            BracketLetter::Square(hat_embed(&alpha, &ps).concat(&x)),
        ]));
        assert_eq!(absorbed, expected);

        let xy = FreeWord::from_letters(&[1, 2]).unwrap();
        let pp = BracketWord::square(xy);
        let split = apply_relation(&pp, Site::at(0).with_split(1), StringRelation::Str3, &ps)
            .unwrap();
        assert_eq!(split.term_count(), 2);
        let three_letter = word(vec![sq(&[1]), cu(0, 0), sq(&[2])]);
        assert_eq!(split.terms().find(|(w, _)| **w == three_letter), Some((&three_letter, 1)));

        let singleton = BracketWord::curly(PeripheralClass::new(1, 1));
        let split = apply_relation(
            &singleton,
            Site::at(0).with_left_class(PeripheralClass::new(1, 0)),
            StringRelation::Str4,
            &ps,
        )
        .unwrap();
        let shifted = BracketWord::curly(PeripheralClass::new(1, 2));
        let split_word = word(vec![cu(1, 0), sq(&[]), cu(0, 1)]);
        assert_eq!(split.terms().find(|(w, _)| **w == shifted), Some((&shifted, 1)));
        assert_eq!(
            split.terms().find(|(w, _)| **w == split_word),
            Some((&split_word, 1))
        );

        assert!(matches!(
            apply_relation(&pk, Site::at(1), StringRelation::Str1, &ps),
            Err(Error::PatternMismatch(_))
        ));
        assert!(matches!(
            apply_relation(&pk, Site::at(0), StringRelation::Str2, &ps),
            Err(Error::PatternMismatch(_))
        ));
        assert!(matches!(
            apply_relation(&pk, Site::at(0).with_split(5), StringRelation::Str3, &ps),
            Err(Error::PatternMismatch(_))
        ));
        assert!(matches!(
            apply_relation(&pk, Site::at(0), StringRelation::Str4, &ps),
            Err(Error::PatternMismatch(_))
        ));
    }

    #[test]
    fn relations_preserve_phi_on_random_words() {
        let ctx = trefoil_ctx();
        let report = phi_invariance_check(&ctx, 40, 11).unwrap();
        assert_eq!(report.total_failures(), 0, "{report:?}");
        assert_eq!(report.total_unknowns(), 0, "{report:?}");
        assert_eq!(report.total_passes(), 160);
    }

    #[test]
    fn normalize_examples() {
        let ctx = trefoil_ctx();
        let ps = ctx.group.peripheral.clone();
        let alpha = PeripheralClass::new(0, 1);
        let bar = hat_embed(&alpha, &ps);
        let x1 = FreeWord::generator(0);
        let x2 = FreeWord::generator(1);

        let internal = word(vec![
            BracketLetter::Square(x1.clone()),
            BracketLetter::Curly(alpha),
            BracketLetter::Square(x2.clone()),
        ]);
        let normalized = normalize_s(&SElement::from_word(internal), &ps);
        let plain = BracketWord::square(x1.concat(&bar).concat(&x2));
        let shifted = BracketWord::square(x1.concat(&bar).concat(&ps.meridian).concat(&x2));
        let expected =
            SElement::from_terms(Classification::Pp, [(1, plain), (-1, shifted)]).unwrap();
        assert_eq!(normalized, expected);

        let lone = SElement::from_word(BracketWord::curly(PeripheralClass::new(2, -1)));
        assert_eq!(normalize_s(&lone, &ps), lone);

        let beta = PeripheralClass::new(1, 0);
        let kk = word(vec![
            BracketLetter::Curly(alpha),
            BracketLetter::Square(x1.clone()),
            BracketLetter::Curly(beta),
        ]);
        let normalized = normalize_s(&SElement::from_word(kk), &ps);
        let absorbed = word(vec![
            cu(0, 0),
            BracketLetter::Square(bar.concat(&x1).concat(&hat_embed(&beta, &ps))),
            cu(0, 0),
        ]);
        assert_eq!(normalized, SElement::from_word(absorbed));
    }

    #[test]
    fn normalize_is_idempotent_and_phi_preserving() {
        let ctx = trefoil_ctx();
        let ps = ctx.group.peripheral.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let classes = [
            Classification::Kk,
            Classification::Kp,
            Classification::Pk,
            Classification::Pp,
        ];
        for classification in classes {
            for _ in 0..15 {
                let e = random_selement(&mut rng, 2, classification);
                let n1 = normalize_s(&e, &ps);
                assert_eq!(n1.classification(), classification);
                assert_eq!(normalize_s(&n1, &ps), n1);
                for (w, _) in n1.terms() {
                    assert!(internal_curly(w).is_none());
                }
                assert_eq!(
                    phi(&n1, &ctx).unwrap().equal(&phi(&e, &ctx).unwrap()).unwrap(),
                    Answer::Yes
                );
            }
        }
    }

    #[test]
    fn mu_merges_through_the_square_junction() {
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        let u = SElement::from_word(word(vec![cu(0, 0), BracketLetter::Square(x.clone())]));
        let v = SElement::from_word(word(vec![BracketLetter::Square(y.clone()), cu(0, 0)]));
        let product = mu(&u, &v).unwrap();
        let expected = SElement::from_word(word(vec![
            cu(0, 0),
            BracketLetter::Square(x.concat(&y)),
            cu(0, 0),
        ]));
        assert_eq!(product, expected);

        let unit = SElement::from_word(word(vec![cu(0, 0), sq(&[])]));
        let co_unit = SElement::from_word(word(vec![sq(&[]), cu(0, 0)]));
        let trivial = mu(&unit, &co_unit).unwrap();
        assert_eq!(
            trivial,
            SElement::from_word(word(vec![cu(0, 0), sq(&[]), cu(0, 0)]))
        );

        assert!(matches!(
            mu(&co_unit, &unit),
            Err(Error::Classification(_))
        ));
    }

    #[test]
    fn pp_square_of_marked_unit_is_one_minus_m_squared() {
        let ctx = trefoil_ctx();
        let ps = ctx.group.peripheral.clone();
        let marked = SElement::from_word(word(vec![sq(&[]), cu(0, 0), sq(&[])]));
        let square = pp_mul(&(0, marked.clone()), &(0, marked)).unwrap();
        assert_eq!(square.0, 0);

        let one_m = one_minus_m(&ctx).unwrap();
        let expected = one_m.mul(&one_m).unwrap();
        assert_eq!(
            phi_hat(&square, &ctx).unwrap().equal(&expected).unwrap(),
            Answer::Yes
        );

        let normalized = normalize_s(&square.1, &ps);
        let m = ps.meridian.clone();
        let expected_words = SElement::from_terms(
            Classification::Pp,
            [
                (1, BracketWord::square(FreeWord::identity())),
                (-2, BracketWord::square(m.clone())),
                (1, BracketWord::square(m.concat(&ps.meridian))),
            ],
        )
        .unwrap();
        assert_eq!(normalized, expected_words);
    }

    #[test]
    fn product_identities_hold_on_random_samples() {
        let ctx = trefoil_ctx();
        let report = product_check(&ctx, 25, 5).unwrap();
        assert_eq!(report.total_failures(), 0, "{report:?}");
        assert_eq!(report.total_unknowns(), 0, "{report:?}");
    }

    #[test]
    fn unframe_kills_the_meridian_and_fixes_the_longitude() {
        let ctx = trefoil_ctx();
        let ps = ctx.group.peripheral.clone();
        assert!(unframe(&ps.meridian, &ps).is_identity());
        assert_eq!(unframe(&ps.longitude, &ps), ps.longitude);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = random_word(&mut rng, 2, 6);
            let stripped = unframe(&x, &ps);
            assert_eq!(stripped.exponent_sum(), 0);
            assert_eq!(unframe(&stripped, &ps), stripped);
        }
    }

    #[test]
    fn skein_identities_hold_on_trefoil_samples() {
        let ctx = trefoil_ctx();
        let report = skein_check(&ctx, 500, 2026).unwrap();
        assert_eq!(report.total_failures(), 0, "{report:?}");
        assert_eq!(report.total_unknowns(), 0, "{report:?}");
        assert_eq!(report.total_passes(), 2000);
        assert_eq!(report.lines.len(), 4);
    }

    #[test]
    fn selement_wire_round_trip() {
        let e = SElement::from_terms(
            Classification::Kp,
            [
                (2, word(vec![cu(1, -1), sq(&[1, 2])])),
                (-1, word(vec![cu(0, 0), sq(&[-2])])),
            ],
        )
        .unwrap();
        let wire = e.to_wire();
        let json = serde_json::to_string(&wire).unwrap();
        let parsed: Vec<STermWire> = serde_json::from_str(&json).unwrap();
        assert_eq!(SElement::from_wire(&parsed).unwrap(), e);

        let pinned = r#"[{"coeff":1,"letters":[{"kind":"cu","l":0,"m":0},{"kind":"sq","word":[1,-2]}]}]"#;
        let parsed: Vec<STermWire> = serde_json::from_str(pinned).unwrap();
        let decoded = SElement::from_wire(&parsed).unwrap();
        assert_eq!(decoded.classification(), Classification::Kp);
        assert_eq!(serde_json::to_string(&decoded.to_wire()).unwrap(), pinned);

        let mixed = vec![
            STermWire {
                coeff: 1,
                letters: vec![LetterWire::Cu { l: 0, m: 0 }],
            },
            STermWire {
                coeff: 1,
                letters: vec![LetterWire::Sq { word: vec![1] }],
            },
        ];
        assert!(SElement::from_wire(&mixed).is_err());
        assert!(SElement::from_wire(&[]).is_err());
    }

    #[test]
    fn selement_arithmetic_respects_classification() {
        let kk = SElement::from_word(BracketWord::curly(PeripheralClass::meridian()));
        let pp = SElement::from_word(BracketWord::square(FreeWord::generator(0)));
        assert!(kk.add(&pp).is_err());
        assert_eq!(
            kk.add(&SElement::zero(Classification::Pp)).unwrap(),
            kk.clone()
        );
        assert_eq!(
            SElement::zero(Classification::Pp).add(&kk).unwrap(),
            kk.clone()
        );
        assert!(kk.sub(&kk).unwrap().is_zero());
        assert_eq!(kk.scale(3).terms().next().unwrap().1, 3);
        assert!(kk.scale(0).is_zero());
    }
}
