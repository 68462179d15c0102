//! Integral group rings of knot groups.
//!
//! Elements are finite `Z`-linear combinations of group elements, stored as
//! backend-normalized words with arbitrary-precision coefficients. Because
//! the word problem is only semi-decided, two stored terms may secretly name
//! the same group element; every operation therefore runs a certified merge
//! pass (backend `Yes` answers merge terms, `No` keeps them apart, `Unknown`
//! keeps them apart and marks the element inexact). Soundness never rests
//! on the backend being complete: merging by identical normal forms or by a
//! certified `Yes` is always valid.
//!
//! The distinguished left ideal `R(1−m)` generated by one minus the meridian
//! is the kernel of the map onto the free `Z`-module on right cosets
//! `x⟨m⟩`, which gives a decision procedure for membership; an explicit
//! witness `a = Σ ±γ(1−m)δ` comes from telescoping `ab−1 = a(b−1) + (a−1)`
//! down to conjugates `g−1 = −w(1−m)w⁻¹` of the meridian.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fpgroup::{
    Answer, Backend, BackendConfig, FreeWord, GroupPresentation, KnotGroup, PeripheralSystem,
};
use crate::stringmod::{CheckLine, CheckReport};
use crate::{Error, Result};

fn big_is_zero(c: &BigInt) -> bool {
    c.sign() == Sign::NoSign
}

/// Shared context for group-ring arithmetic: a knot group plus a word
/// backend bound to its reduced presentation. Elements belonging to
/// different contexts cannot be combined.
#[derive(Debug)]
pub struct RingContext {
    /// The knot group (presentations, peripheral system, conjugators).
    pub group: KnotGroup,
    /// Word-problem backend over the reduced presentation.
    pub backend: Backend,
}

impl RingContext {
    /// Build a context by binding a backend to the group's reduced
    /// presentation.
    pub fn new(group: KnotGroup, config: BackendConfig) -> Result<Arc<RingContext>> {
        let backend = Backend::new(&group.presentation, config)?;
        Ok(Arc::new(RingContext { group, backend }))
    }

    /// The meridian in reduced coordinates.
    pub fn meridian(&self) -> &FreeWord {
        &self.group.peripheral.meridian
    }

    /// Build a context directly from a presentation and peripheral system,
    /// without diagram-derived data.
    ///
    /// The resulting context supports ring arithmetic and equality but has
    /// no meridian-conjugator words, so [`ideal_witness`] is unavailable
    /// on it.
    pub fn from_presentation(
        presentation: GroupPresentation,
        peripheral: PeripheralSystem,
        config: BackendConfig,
    ) -> Result<Arc<RingContext>> {
        presentation.validate_word(&peripheral.meridian)?;
        presentation.validate_word(&peripheral.longitude)?;
        let generators: Vec<FreeWord> = (0..presentation.generator_count)
            .map(FreeWord::generator)
            .collect();
        let group = KnotGroup {
            wirtinger: presentation.clone(),
            wirtinger_peripheral: peripheral.clone(),
            presentation,
            peripheral,
            arc_images: generators,
            retained_arcs: Vec::new(),
            meridian_conjugators: Vec::new(),
        };
        RingContext::new(group, config)
    }

    /// A context over the free group of the given rank, with the first
    /// generator playing the meridian. Used by desk-scale enumerative
    /// checks where only free reduction is needed.
    pub fn free_group(rank: usize, config: BackendConfig) -> Result<Arc<RingContext>> {
        if rank == 0 {
            return Err(Error::Validation("free context needs at least one generator".into()));
        }
        RingContext::from_presentation(
            GroupPresentation::new(rank, Vec::new())?,
            PeripheralSystem {
                meridian: FreeWord::generator(0),
                longitude: FreeWord::identity(),
            },
            config,
        )
    }
}

/// An element of the integral group ring `Z[π]`.
///
/// Structural equality (`==`) compares stored term maps within the same
/// context; semantic equality in the ring is [`GroupRingElement::equal`].
#[derive(Debug, Clone)]
pub struct GroupRingElement {
    ctx: Arc<RingContext>,
    terms: BTreeMap<FreeWord, BigInt>,
    exact: bool,
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for GroupRingElement {}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffWire {
    Int(i64),
    Big(String),
}

/// Wire form of one term: `{"coeff": …, "word": [signed indices]}`; the
/// coefficient is a JSON integer when it fits and a decimal string beyond.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermWire {
    coeff: CoeffWire,
    word: Vec<i32>,
}

impl GroupRingElement {
    /// The zero element.
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        GroupRingElement { ctx: ctx.clone(), terms: BTreeMap::new(), exact: true }
    }

    /// The multiplicative identity.
    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Self::monomial(ctx, BigInt::from(1), &FreeWord::identity())
    }

    /// The integer `n·1`.
    pub fn integer(ctx: &Arc<RingContext>, n: i64) -> Self {
        Self::monomial(ctx, BigInt::from(n), &FreeWord::identity())
    }

    /// A single group element scaled by a coefficient.
    pub fn monomial(ctx: &Arc<RingContext>, coeff: BigInt, word: &FreeWord) -> Self {
        let mut terms = BTreeMap::new();
        if !big_is_zero(&coeff) {
            terms.insert(ctx.backend.normalize(word), coeff);
        }
        GroupRingElement { ctx: ctx.clone(), terms, exact: true }
    }

    /// The group element `w` as a ring element.
    pub fn group_element(ctx: &Arc<RingContext>, word: &FreeWord) -> Self {
        Self::monomial(ctx, BigInt::from(1), word)
    }

    /// Build from raw (coefficient, word) pairs; words are validated against
    /// the presentation and normalized, coefficients on one group element
    /// are combined.
    pub fn from_terms(ctx: &Arc<RingContext>, pairs: &[(BigInt, FreeWord)]) -> Result<Self> {
        let mut terms: BTreeMap<FreeWord, BigInt> = BTreeMap::new();
        for (c, w) in pairs {
            ctx.group.presentation.validate_word(w)?;
            let key = ctx.backend.normalize(w);
            let entry = terms.entry(key).or_insert_with(|| BigInt::from(0));
            *entry += c;
        }
        terms.retain(|_, c| !big_is_zero(c));
        let mut el = GroupRingElement { ctx: ctx.clone(), terms, exact: true };
        el.merge_pass();
        Ok(el)
    }

    /// The context this element lives in.
    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    /// Stored terms in shortlex key order.
    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, &BigInt)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Whether every certified merge succeeded; when false, distinct stored
    /// terms may name equal group elements undetectably.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Structurally zero (no stored terms).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(
                "group-ring elements belong to different contexts".into(),
            ))
        }
    }

    /// Certified merge pass: within each meridian degree, combine term pairs
    /// the backend proves equal; an `Unknown` on such a pair marks the
    /// element inexact. Distinct degrees can never merge.
    fn merge_pass(&mut self) {
        if self.terms.len() < 2 {
            return;
        }
        let mut by_degree: BTreeMap<i64, Vec<FreeWord>> = BTreeMap::new();
        for w in self.terms.keys() {
            by_degree.entry(w.exponent_sum()).or_default().push(w.clone());
        }
        for (_, words) in by_degree {
            if words.len() < 2 {
                continue;
            }
            // words arrive in shortlex order; fold later words into the
            // earliest provably equal representative
            for i in 0..words.len() {
                for j in i + 1..words.len() {
                    let (wi, wj) = (&words[i], &words[j]);
                    if !self.terms.contains_key(wi) || !self.terms.contains_key(wj) {
                        continue;
                    }
                    match self.ctx.backend.equal(wi, wj) {
                        Answer::Yes => {
                            let c = self.terms.remove(wj).unwrap();
                            let entry =
                                self.terms.entry(wi.clone()).or_insert_with(|| BigInt::from(0));
                            *entry += c;
                            if big_is_zero(self.terms.get(wi).unwrap()) {
                                self.terms.remove(wi);
                            }
                        }
                        Answer::No => {}
                        Answer::Unknown => self.exact = false,
                    }
                }
            }
        }
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let entry = terms.entry(w.clone()).or_insert_with(|| BigInt::from(0));
            *entry += c;
        }
        terms.retain(|_, c| !big_is_zero(c));
        let mut el = GroupRingElement {
            ctx: self.ctx.clone(),
            terms,
            exact: self.exact && other.exact,
        };
        el.merge_pass();
        Ok(el)
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        GroupRingElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
            exact: self.exact,
        }
    }

    /// Product (convolution of supports, re-normalized).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut terms: BTreeMap<FreeWord, BigInt> = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let w = self.ctx.backend.normalize(&u.concat(v));
                let entry = terms.entry(w).or_insert_with(|| BigInt::from(0));
                *entry += a * b;
            }
        }
        terms.retain(|_, c| !big_is_zero(c));
        let mut el = GroupRingElement {
            ctx: self.ctx.clone(),
            terms,
            exact: self.exact && other.exact,
        };
        el.merge_pass();
        Ok(el)
    }

    /// Scale by an integer.
    pub fn scale(&self, n: &BigInt) -> Self {
        if big_is_zero(n) {
            return Self::zero(&self.ctx);
        }
        GroupRingElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * n)).collect(),
            exact: self.exact,
        }
    }

    /// Left-translate by a group element: `g·self`.
    pub fn translate_left(&self, g: &FreeWord) -> Self {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            let key = self.ctx.backend.normalize(&g.concat(w));
            terms.insert(key, c.clone());
        }
        let mut el =
            GroupRingElement { ctx: self.ctx.clone(), terms, exact: self.exact };
        el.merge_pass();
        el
    }

    /// The augmentation: sum of coefficients (ring homomorphism to `Z`).
    pub fn augmentation(&self) -> BigInt {
        let mut s = BigInt::from(0);
        for c in self.terms.values() {
            s += c;
        }
        s
    }

    /// Membership in the augmentation ideal (kernel of the augmentation).
    pub fn in_augmentation_ideal(&self) -> bool {
        big_is_zero(&self.augmentation())
    }

    /// Certified semantic equality in the ring.
    pub fn equal(&self, other: &Self) -> Result<Answer> {
        let diff = self.sub(other)?;
        if diff.terms.is_empty() {
            return Ok(Answer::Yes);
        }
        // nonzero iff the remaining terms are pairwise-distinct group
        // elements; any unresolved pair forces Unknown
        if diff.exact {
            let words: Vec<&FreeWord> = diff.terms.keys().collect();
            for i in 0..words.len() {
                for j in i + 1..words.len() {
                    if diff.ctx.backend.equal(words[i], words[j]) != Answer::No {
                        return Ok(Answer::Unknown);
                    }
                }
            }
            Ok(Answer::No)
        } else {
            Ok(Answer::Unknown)
        }
    }

    /// Decide membership in the left ideal `R(1−m)` by pushing the element
    /// into the free `Z`-module on right cosets `x⟨m⟩`: the ideal is
    /// exactly the kernel. Coset equality `x⟨m⟩ = y⟨m⟩` reduces to one
    /// backend query: `y⁻¹x` must equal `m^k` for the unique candidate
    /// `k = abelianize(y⁻¹x)`.
    pub fn in_left_ideal(&self) -> Answer {
        let m = self.ctx.meridian().clone();
        // coset classes with their coefficient sums
        let mut classes: Vec<(FreeWord, BigInt)> = Vec::new();
        let mut sound = true;
        'terms: for (w, c) in &self.terms {
            for (rep, sum) in classes.iter_mut() {
                let q = rep.inverse().concat(w);
                let k = q.exponent_sum();
                match self.ctx.backend.equal(&q, &m.pow(k)) {
                    Answer::Yes => {
                        *sum += c;
                        continue 'terms;
                    }
                    Answer::No => {}
                    Answer::Unknown => {
                        sound = false;
                    }
                }
            }
            classes.push((w.clone(), c.clone()));
        }
        let all_zero = classes.iter().all(|(_, s)| big_is_zero(s));
        match (all_zero, sound) {
            (true, true) => Answer::Yes,
            (false, true) => Answer::No,
            // with unresolved coset queries the class sums are unreliable
            _ => Answer::Unknown,
        }
    }
}

/// One summand of an ideal witness: `sign · left · (1−m) · right`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTriple {
    /// `+1` or `−1`.
    pub sign: i8,
    /// Left cofactor `γ`.
    pub left: FreeWord,
    /// Right cofactor `δ`.
    pub right: FreeWord,
}

/// Witness for `g^ε − 1` as `±γ(1−m)δ`, using the stored conjugator
/// `g = w m w⁻¹`: `g − 1 = −w(1−m)w⁻¹` and `g⁻¹ − 1 = g⁻¹·w(1−m)w⁻¹`.
fn letter_witness(ctx: &RingContext, letter: i32) -> WitnessTriple {
    let g = letter.unsigned_abs() as usize - 1;
    let w = &ctx.group.meridian_conjugators[g];
    if letter > 0 {
        WitnessTriple { sign: -1, left: w.clone(), right: w.inverse() }
    } else {
        let ginv = FreeWord::generator(g).inverse();
        WitnessTriple { sign: 1, left: ginv.concat(w), right: w.inverse() }
    }
}

/// Witness for `x − 1` by telescoping `ab − 1 = a(b − 1) + (a − 1)` over the
/// letters of `x`.
fn word_witness(ctx: &RingContext, x: &FreeWord) -> Vec<WitnessTriple> {
    let mut out = Vec::new();
    let mut prefix = FreeWord::identity();
    for &letter in x.letters() {
        // x = prefix · letter · rest; peel letters left to right:
        // (prefix·l·…) − 1 = prefix·(l·… − 1) + (prefix − 1)
        let mut t = letter_witness(ctx, letter);
        t.left = prefix.concat(&t.left);
        out.push(t);
        prefix = prefix.concat(&FreeWord::from_letters(&[letter]).unwrap());
    }
    out
}

/// Express an augmentation-zero element as `Σ sign·γ(1−m)δ`.
///
/// Every generator carries a conjugating word `w` with `g = w m w⁻¹`
/// (recorded during the diagram walk and Tietze moves), so each `x − 1`
/// telescopes into such triples; with zero augmentation the whole element
/// is a sum of `c·(x − 1)`. Fails with `WitnessUnavailable` when the
/// augmentation is nonzero.
pub fn ideal_witness(a: &GroupRingElement) -> Result<Vec<WitnessTriple>> {
    if !a.in_augmentation_ideal() {
        return Err(Error::WitnessUnavailable(
            "element has nonzero augmentation".into(),
        ));
    }
    if a.ctx.group.meridian_conjugators.len() < a.ctx.group.presentation.generator_count {
        return Err(Error::WitnessUnavailable(
            "context lacks meridian-conjugator data for its generators".into(),
        ));
    }
    let mut out = Vec::new();
    for (w, c) in &a.terms {
        let triples = word_witness(&a.ctx, w);
        let (copies, flip) = match c.sign() {
            Sign::Plus => (c.clone(), false),
            Sign::Minus => (-c.clone(), true),
            Sign::NoSign => continue,
        };
        // emit |c| copies (coefficients are tiny in practice)
        let mut k = BigInt::from(0);
        while k < copies {
            for t in &triples {
                let mut t = t.clone();
                if flip {
                    t.sign = -t.sign;
                }
                out.push(t);
            }
            k += 1;
        }
    }
    Ok(out)
}

/// Expand `Σ sign·γ(1−m)δ` back into a ring element (for verifying a
/// witness against the original element).
pub fn expand_witness(
    ctx: &Arc<RingContext>,
    triples: &[WitnessTriple],
) -> Result<GroupRingElement> {
    let m = ctx.meridian().clone();
    let mut acc = GroupRingElement::zero(ctx);
    for t in triples {
        let pos = t.left.concat(&t.right);
        let neg = t.left.concat(&m).concat(&t.right);
        let part = GroupRingElement::from_terms(
            ctx,
            &[
                (BigInt::from(t.sign as i64), pos),
                (BigInt::from(-(t.sign as i64)), neg),
            ],
        )?;
        acc = acc.add(&part)?;
    }
    Ok(acc)
}

/// Split `a` as `ε(a)·1 + (a − ε(a)·1)` and witness the augmentation-zero
/// part; returns the scalar and the witness triples.
pub fn augmentation_decomposition(
    a: &GroupRingElement,
) -> Result<(BigInt, Vec<WitnessTriple>)> {
    let eps = a.augmentation();
    let scalar = GroupRingElement::monomial(a.context(), eps.clone(), &FreeWord::identity());
    let rest = a.sub(&scalar)?;
    Ok((eps, ideal_witness(&rest)?))
}

/// Sample random ring elements and verify the complementarity
/// decomposition: every `a` splits as `ε(a)·1` plus an augmentation-ideal
/// part carried by explicit witness triples, and the witness re-expands
/// exactly to that part.
pub fn complementarity_check(
    ctx: &Arc<RingContext>,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generators = ctx.group.presentation.generator_count;
    let mut line = CheckLine::new("complementarity");
    for _ in 0..samples {
        let term_count = rng.random_range(1..=3usize);
        let mut pairs = Vec::new();
        for _ in 0..term_count {
            let coeff = loop {
                let c = rng.random_range(-3i64..=3);
                if c != 0 {
                    break c;
                }
            };
            let len = rng.random_range(0..=4usize);
            let mut w = FreeWord::identity();
            for _ in 0..len {
                let g = FreeWord::generator(rng.random_range(0..generators));
                let g = if rng.random_bool(0.5) { g } else { g.inverse() };
                w = w.concat(&g);
            }
            pairs.push((BigInt::from(coeff), w));
        }
        let a = GroupRingElement::from_terms(ctx, &pairs)?;
        let (eps, triples) = augmentation_decomposition(&a)?;
        let scalar = GroupRingElement::monomial(ctx, eps, &FreeWord::identity());
        let ideal_part = a.sub(&scalar)?;
        let expanded = expand_witness(ctx, &triples)?;
        line.tally(ideal_part.equal(&expanded)?);
    }
    Ok(CheckReport { seed, samples, lines: vec![line] })
}

impl GroupRingElement {
    /// Serialize to the wire form (list of `{coeff, word}` terms).
    pub fn to_wire(&self) -> Vec<TermWire> {
        self.terms
            .iter()
            .map(|(w, c)| {
                let coeff = match i64::try_from(c.clone()) {
                    Ok(v) => CoeffWire::Int(v),
                    Err(_) => CoeffWire::Big(c.to_string()),
                };
                TermWire { coeff, word: w.letters().to_vec() }
            })
            .collect()
    }

    /// Rebuild from the wire form.
    pub fn from_wire(ctx: &Arc<RingContext>, wire: &[TermWire]) -> Result<Self> {
        let mut pairs = Vec::new();
        for t in wire {
            let coeff = match &t.coeff {
                CoeffWire::Int(v) => BigInt::from(*v),
                CoeffWire::Big(s) => s
                    .parse::<BigInt>()
                    .map_err(|e| Error::Syntax(format!("bad coefficient {s:?}: {e}")))?,
            };
            pairs.push((coeff, FreeWord::from_letters(&t.word)?));
        }
        Self::from_terms(ctx, &pairs)
    }
}

impl std::fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let mag = c.magnitude();
            if i == 0 {
                if c.sign() == Sign::Minus {
                    write!(f, "-")?;
                }
            } else if c.sign() == Sign::Minus {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if w.is_identity() {
                write!(f, "{mag}")?;
            } else if *mag == num_bigint::BigUint::from(1u32) {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::{knot_group, BackendKind};
    use crate::knotio::{census_lookup, parse_pd};
    use rand::{Rng, SeedableRng};

    fn trefoil_ctx() -> Arc<RingContext> {
        let d = parse_pd(&census_lookup("3_1").unwrap().pd).unwrap();
        RingContext::new(knot_group(&d), BackendConfig::default()).unwrap()
    }

    fn random_element(
        ctx: &Arc<RingContext>,
        rng: &mut impl Rng,
        nterms: usize,
        maxlen: usize,
    ) -> GroupRingElement {
        let ngens = ctx.group.presentation.generator_count as i32;
        let mut pairs = Vec::new();
        for _ in 0..nterms {
            let letters: Vec<i32> = (0..rng.random_range(0..=maxlen))
                .map(|_| {
                    let g = rng.random_range(1..=ngens);
                    if rng.random_bool(0.5) { g } else { -g }
                })
                .collect();
            let c = rng.random_range(-3i64..=3);
            pairs.push((BigInt::from(c), FreeWord::from_letters(&letters).unwrap()));
        }
        GroupRingElement::from_terms(ctx, &pairs).unwrap()
    }

    #[test]
    fn construction_merges_and_drops_zeros() {
        let ctx = trefoil_ctx();
        let w = FreeWord::from_letters(&[1, 2]).unwrap();
        let a = GroupRingElement::from_terms(
            &ctx,
            &[
                (BigInt::from(2), w.clone()),
                (BigInt::from(-2), w.clone()),
            ],
        )
        .unwrap();
        assert!(a.is_zero());
        // a word and its relator-conjugated twin merge into one term
        let r = &ctx.group.presentation.relators[0];
        let wr = w.concat(&r.conjugated_by(&FreeWord::generator(0)));
        let b = GroupRingElement::from_terms(
            &ctx,
            &[(BigInt::from(1), w.clone()), (BigInt::from(1), wr)],
        )
        .unwrap();
        assert_eq!(b.term_count(), 1);
        assert_eq!(b.terms().next().unwrap().1, &BigInt::from(2));
        assert!(b.is_exact());
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let ctx = trefoil_ctx();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..1000 {
            let a = random_element(&ctx, &mut rng, 2, 6);
            let b = random_element(&ctx, &mut rng, 2, 6);
            let c = random_element(&ctx, &mut rng, 2, 6);
            let assoc_l = a.mul(&b).unwrap().mul(&c).unwrap();
            let assoc_r = a.mul(&b.mul(&c).unwrap()).unwrap();
            assert_eq!(assoc_l.equal(&assoc_r).unwrap(), Answer::Yes);
            let dist_l = a.mul(&b.add(&c).unwrap()).unwrap();
            let dist_r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            assert_eq!(dist_l.equal(&dist_r).unwrap(), Answer::Yes);
            let comm_add = a.add(&b).unwrap();
            let comm_add2 = b.add(&a).unwrap();
            assert_eq!(comm_add.equal(&comm_add2).unwrap(), Answer::Yes);
            let one = GroupRingElement::one(&ctx);
            assert_eq!(a.mul(&one).unwrap().equal(&a).unwrap(), Answer::Yes);
            assert_eq!(one.mul(&a).unwrap().equal(&a).unwrap(), Answer::Yes);
        }
    }

    #[test]
    fn augmentation_is_a_ring_homomorphism() {
        let ctx = trefoil_ctx();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        for _ in 0..200 {
            let a = random_element(&ctx, &mut rng, 3, 5);
            let b = random_element(&ctx, &mut rng, 3, 5);
            assert_eq!(
                a.mul(&b).unwrap().augmentation(),
                a.augmentation() * b.augmentation()
            );
            assert_eq!(
                a.add(&b).unwrap().augmentation(),
                a.augmentation() + b.augmentation()
            );
        }
    }

    #[test]
    fn left_ideal_membership_examples() {
        let ctx = trefoil_ctx();
        let m = ctx.meridian().clone();
        let one = GroupRingElement::one(&ctx);
        let melt = GroupRingElement::group_element(&ctx, &m);
        let one_minus_m = one.sub(&melt).unwrap();
        // x(1−m) for a generic x
        let x = GroupRingElement::group_element(
            &ctx,
            &FreeWord::from_letters(&[2, -1, 2]).unwrap(),
        );
        assert_eq!(x.mul(&one_minus_m).unwrap().in_left_ideal(), Answer::Yes);
        // 1 is not in the ideal
        assert_eq!(one.in_left_ideal(), Answer::No);
        // (1 + m⁵)(1−m)
        let m5 = GroupRingElement::group_element(&ctx, &m.pow(5));
        let sum = one.add(&m5).unwrap();
        assert_eq!(sum.mul(&one_minus_m).unwrap().in_left_ideal(), Answer::Yes);
        // membership is meridian-degree blind: m⁵ alone is not in it
        assert_eq!(m5.in_left_ideal(), Answer::No);
    }

    #[test]
    fn witness_for_meridian_and_generators() {
        let ctx = trefoil_ctx();
        let m = ctx.meridian().clone();
        let one = GroupRingElement::one(&ctx);
        // m − 1 → [(−1, 1, 1)]
        let a = GroupRingElement::group_element(&ctx, &m).sub(&one).unwrap();
        let w = ideal_witness(&a).unwrap();
        assert_eq!(
            w,
            vec![WitnessTriple {
                sign: -1,
                left: FreeWord::identity(),
                right: FreeWord::identity()
            }]
        );
        assert_eq!(expand_witness(&ctx, &w).unwrap().equal(&a).unwrap(), Answer::Yes);
        // g − 1 → [(−1, w, w⁻¹)] for a generator with conjugator w
        for g in 0..ctx.group.presentation.generator_count {
            let el = GroupRingElement::group_element(&ctx, &FreeWord::generator(g))
                .sub(&one)
                .unwrap();
            let wit = ideal_witness(&el).unwrap();
            let conj = &ctx.group.meridian_conjugators[g];
            assert_eq!(
                wit,
                vec![WitnessTriple { sign: -1, left: conj.clone(), right: conj.inverse() }]
            );
            assert_eq!(
                expand_witness(&ctx, &wit).unwrap().equal(&el).unwrap(),
                Answer::Yes
            );
        }
    }

    #[test]
    fn nonzero_augmentation_has_no_witness() {
        let ctx = trefoil_ctx();
        let err = ideal_witness(&GroupRingElement::one(&ctx)).unwrap_err();
        assert!(matches!(err, Error::WitnessUnavailable(_)));
    }

    #[test]
    fn complementarity_decomposition_random() {
        let ctx = trefoil_ctx();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        for _ in 0..100 {
            let a = random_element(&ctx, &mut rng, 3, 5);
            let (eps, triples) = augmentation_decomposition(&a).unwrap();
            let scalar = GroupRingElement::monomial(&ctx, eps, &FreeWord::identity());
            let rebuilt = scalar.add(&expand_witness(&ctx, &triples).unwrap()).unwrap();
            assert_eq!(rebuilt.equal(&a).unwrap(), Answer::Yes);
        }
    }

    #[test]
    fn wire_round_trip() {
        let ctx = trefoil_ctx();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        let a = random_element(&ctx, &mut rng, 4, 5);
        let json = serde_json::to_string(&a.to_wire()).unwrap();
        let wire: Vec<TermWire> = serde_json::from_str(&json).unwrap();
        let b = GroupRingElement::from_wire(&ctx, &wire).unwrap();
        assert_eq!(a, b);
        // big coefficients round-trip through strings
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let c = GroupRingElement::monomial(&ctx, big.clone(), &FreeWord::generator(0));
        let json = serde_json::to_string(&c.to_wire()).unwrap();
        assert!(json.contains("123456789012345678901234567890"));
        let wire: Vec<TermWire> = serde_json::from_str(&json).unwrap();
        let d = GroupRingElement::from_wire(&ctx, &wire).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn context_mismatch_is_rejected() {
        let ctx1 = trefoil_ctx();
        let ctx2 = trefoil_ctx();
        let a = GroupRingElement::one(&ctx1);
        let b = GroupRingElement::one(&ctx2);
        assert!(matches!(a.add(&b), Err(Error::ContextMismatch(_))));
        assert!(matches!(a.mul(&b), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn weak_backend_marks_inexact_merges() {
        let d = parse_pd(&census_lookup("3_1").unwrap().pd).unwrap();
        let ctx = RingContext::new(
            knot_group(&d),
            BackendConfig { kind: BackendKind::FreeReduce, ..BackendConfig::default() },
        )
        .unwrap();
        // two words equal in the group but not freely: their merge is
        // undecidable for the free-reduction backend
        let r = &ctx.group.presentation.relators[0];
        let w = FreeWord::from_letters(&[1, 2]).unwrap();
        let wr = w.concat(r);
        let a = GroupRingElement::from_terms(
            &ctx,
            &[(BigInt::from(1), w), (BigInt::from(1), wr)],
        )
        .unwrap();
        assert_eq!(a.term_count(), 2);
        assert!(!a.is_exact());
    }
}
