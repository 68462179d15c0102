//! Finitely presented knot groups.
//!
//! The Wirtinger presentation of a diagram (one generator per arc, one
//! conjugation relator per crossing) comes with a peripheral system: the
//! meridian is the base arc's generator and the longitude is the product of
//! over-arc generators met while walking the knot, read against the walk
//! direction so that it pairs with the relator convention
//! `g_out = g_over^{±1} g_in g_over^{∓1}`, corrected by `m^{−writhe}` to the
//! Seifert framing.
//!
//! The word problem is only semi-decided: every equality query returns
//! `Yes`, `No`, or `Unknown`, and `Yes`/`No` are sound — `Yes` is backed by
//! a rewriting proof, `No` by an abelianization or finite-quotient
//! certificate that callers can re-check. Backends: plain free reduction,
//! bounded Knuth–Bendix completion over shortlex, an exact normal form for
//! the torus presentations `⟨x,y | x^p = y^q⟩`, and finite-quotient
//! separation.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::knotio::KnotDiagram;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Free words.
// ---------------------------------------------------------------------------

/// A freely reduced word in a free group.
///
/// Letters are nonzero integers: `+(i+1)` is generator `i`, `−(i+1)` its
/// inverse. The total order is shortlex with `g₀ < g₀⁻¹ < g₁ < g₁⁻¹ < …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct FreeWord {
    letters: Vec<i32>,
}

/// Shortlex rank of a letter: generator `i` ranks `2i`, its inverse `2i+1`.
fn letter_rank(letter: i32) -> usize {
    if letter > 0 {
        2 * (letter as usize - 1)
    } else {
        2 * ((-letter) as usize - 1) + 1
    }
}

fn push_reduced(acc: &mut Vec<i32>, letter: i32) {
    if acc.last() == Some(&-letter) {
        acc.pop();
    } else {
        acc.push(letter);
    }
}

fn reduce_letters(letters: &[i32]) -> Vec<i32> {
    let mut acc = Vec::with_capacity(letters.len());
    for &l in letters {
        push_reduced(&mut acc, l);
    }
    acc
}

impl FreeWord {
    /// The empty word.
    pub fn identity() -> Self {
        FreeWord { letters: Vec::new() }
    }

    /// The word consisting of generator `i`.
    pub fn generator(i: usize) -> Self {
        FreeWord { letters: vec![i as i32 + 1] }
    }

    /// Build from signed letters, freely reducing. Letter 0 is rejected.
    pub fn from_letters(letters: &[i32]) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::Validation("word letter 0 is not a generator".into()));
        }
        Ok(FreeWord { letters: reduce_letters(letters) })
    }

    /// The underlying reduced letters.
    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Word length after free reduction.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Whether the word has no letters (same as [`FreeWord::is_identity`]).
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Whether this is the identity.
    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Inverse word.
    pub fn inverse(&self) -> Self {
        FreeWord { letters: self.letters.iter().rev().map(|&l| -l).collect() }
    }

    /// Concatenation with free reduction at the seam.
    pub fn concat(&self, other: &Self) -> Self {
        let mut acc = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut acc, l);
        }
        FreeWord { letters: acc }
    }

    /// `self^n` (negative exponents invert).
    pub fn pow(&self, n: i64) -> Self {
        let base = if n >= 0 { self.clone() } else { self.inverse() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `w · self · w⁻¹`.
    pub fn conjugated_by(&self, w: &Self) -> Self {
        w.concat(self).concat(&w.inverse())
    }

    /// Image under the homomorphism sending generator `i` to `images[i]`.
    pub fn substitute(&self, images: &[FreeWord]) -> Self {
        let mut acc = Vec::new();
        for &l in &self.letters {
            let img = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                for &x in &img.letters {
                    push_reduced(&mut acc, x);
                }
            } else {
                for &x in img.letters.iter().rev() {
                    push_reduced(&mut acc, -x);
                }
            }
        }
        FreeWord { letters: acc }
    }

    /// Sum of letter exponents (the meridian degree on knot groups).
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&l| if l > 0 { 1 } else { -1 }).sum()
    }

    /// Exponent sum per generator.
    pub fn exponent_vector(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0i64; ngens];
        for &l in &self.letters {
            v[l.unsigned_abs() as usize - 1] += if l > 0 { 1 } else { -1 };
        }
        v
    }

    /// Largest generator index used.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&l| l.unsigned_abs() as usize - 1).max()
    }

    /// Cyclically reduced form (conjugate of minimal length).
    pub fn cyclically_reduced(&self) -> Self {
        let mut l = self.letters.clone();
        while l.len() >= 2 && *l.first().unwrap() == -*l.last().unwrap() {
            l.pop();
            l.remove(0);
        }
        FreeWord { letters: l }
    }

    /// Shortlex comparison (length first, then letter ranks).
    pub fn shortlex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        shortlex(&self.letters, &other.letters)
    }
}

fn shortlex(a: &[i32], b: &[i32]) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().map(|&l| letter_rank(l)).cmp(b.iter().map(|&l| letter_rank(l))))
}

impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.shortlex_cmp(other)
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<i32>> for FreeWord {
    type Error = Error;
    fn try_from(v: Vec<i32>) -> Result<Self> {
        FreeWord::from_letters(&v)
    }
}

impl From<FreeWord> for Vec<i32> {
    fn from(w: FreeWord) -> Vec<i32> {
        w.letters
    }
}

impl std::fmt::Display for FreeWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, &l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if l > 0 {
                write!(f, "g{}", l - 1)?;
            } else {
                write!(f, "g{}^-1", -l - 1)?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Presentations and the peripheral system.
// ---------------------------------------------------------------------------

/// A finite group presentation; relators are freely and cyclically reduced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationWire", into = "PresentationWire")]
pub struct GroupPresentation {
    /// Number of generators.
    pub generator_count: usize,
    /// Defining relators.
    pub relators: Vec<FreeWord>,
}

#[derive(Serialize, Deserialize)]
struct PresentationWire {
    generators: usize,
    relators: Vec<Vec<i32>>,
}

impl TryFrom<PresentationWire> for GroupPresentation {
    type Error = Error;
    fn try_from(w: PresentationWire) -> Result<Self> {
        let relators = w
            .relators
            .iter()
            .map(|r| FreeWord::from_letters(r))
            .collect::<Result<Vec<_>>>()?;
        GroupPresentation::new(w.generators, relators)
    }
}

impl From<GroupPresentation> for PresentationWire {
    fn from(p: GroupPresentation) -> PresentationWire {
        PresentationWire {
            generators: p.generator_count,
            relators: p.relators.into_iter().map(Vec::from).collect(),
        }
    }
}

impl GroupPresentation {
    /// Build a presentation, validating generator ranges and reducing
    /// relators cyclically; trivial relators are dropped.
    pub fn new(generator_count: usize, relators: Vec<FreeWord>) -> Result<Self> {
        let mut rels = Vec::new();
        for r in relators {
            if let Some(g) = r.max_generator() {
                if g >= generator_count {
                    return Err(Error::Validation(format!(
                        "relator uses generator {g} but presentation has {generator_count}"
                    )));
                }
            }
            let r = r.cyclically_reduced();
            if !r.is_identity() {
                rels.push(r);
            }
        }
        Ok(GroupPresentation { generator_count, relators: rels })
    }

    /// Check that a word only uses this presentation's generators.
    pub fn validate_word(&self, w: &FreeWord) -> Result<()> {
        if let Some(g) = w.max_generator() {
            if g >= self.generator_count {
                return Err(Error::Validation(format!(
                    "word uses generator {g} but presentation has {}",
                    self.generator_count
                )));
            }
        }
        Ok(())
    }
}

/// Meridian and longitude of a knot group, with the Seifert framing
/// (longitude abelianizes to 0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeripheralSystem {
    /// Class of a small loop around the knot at the base arc.
    pub meridian: FreeWord,
    /// Class of a parallel copy of the knot, Seifert-framed.
    pub longitude: FreeWord,
}

/// The Wirtinger presentation and peripheral system of a diagram.
///
/// One generator per arc; per crossing of sign `ε` the relator
/// `g_over^ε · g_in · g_over^{−ε} · g_out^{−1}`. The meridian is the base
/// arc's generator. The longitude multiplies the over-arc generators (with
/// crossing-sign exponents) collected while walking the knot from the base
/// arc, read in reverse walk order to match the relator convention, then
/// `meridian^{−writhe}` so that it abelianizes to 0.
pub fn wirtinger(d: &KnotDiagram) -> (GroupPresentation, PeripheralSystem) {
    let n = d.crossing_count();
    if n == 0 {
        return (
            GroupPresentation { generator_count: 1, relators: Vec::new() },
            PeripheralSystem {
                meridian: FreeWord::generator(0),
                longitude: FreeWord::identity(),
            },
        );
    }
    let mut relators = Vec::new();
    for c in &d.crossings {
        let over = FreeWord::generator(d.arc_of_edge(c.edges[1]));
        let g_in = FreeWord::generator(d.arc_of_edge(c.edges[0]));
        let g_out = FreeWord::generator(d.arc_of_edge(c.edges[2]));
        let e = c.sign as i64;
        let r = over
            .pow(e)
            .concat(&g_in)
            .concat(&over.pow(-e))
            .concat(&g_out.inverse())
            .cyclically_reduced();
        if !r.is_identity() {
            relators.push(r);
        }
    }
    let presentation = GroupPresentation { generator_count: d.arc_count(), relators };

    let meridian = FreeWord::generator(d.base_arc);
    let mut contributions = Vec::new();
    for e in d.walk() {
        if let Some(c) = d.crossings.iter().find(|c| c.edges[0] == e) {
            contributions.push((d.arc_of_edge(c.edges[1]), c.sign as i64));
        }
    }
    contributions.reverse();
    let mut longitude = FreeWord::identity();
    for (arc, sign) in contributions {
        longitude = longitude.concat(&FreeWord::generator(arc).pow(sign));
    }
    longitude = longitude.concat(&meridian.pow(-d.writhe()));
    (presentation, PeripheralSystem { meridian, longitude })
}

// ---------------------------------------------------------------------------
// Abelianization.
// ---------------------------------------------------------------------------

/// Smith normal form diagonal of an integer matrix: nonzero invariant
/// factors in divisibility order, all positive.
#[allow(clippy::needless_range_loop)] // index pairs mirror the matrix notation
fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // find a nonzero pivot
        let mut pivot = None;
        'find: for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 {
                    pivot = Some((i, j));
                    break 'find;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in &mut m {
            row.swap(t, pj);
        }
        // euclidean clearing of row and column t
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = m[i][t].div_euclid(m[t][t]);
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    if m[i][t] != 0 {
                        m.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = m[t][j].div_euclid(m[t][t]);
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    if m[t][j] != 0 {
                        for row in &mut m {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    // enforce divisibility d₁ | d₂ | …
    let mut stable = false;
    while !stable {
        stable = true;
        for i in 1..diag.len() {
            if diag[i] % diag[i - 1] != 0 {
                let g = gcd_i64(diag[i - 1], diag[i]);
                let l = diag[i - 1] / g * diag[i];
                diag[i - 1] = g;
                diag[i] = l;
                stable = false;
            }
        }
    }
    diag
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Invariant factors and free rank of the abelianization, from the Smith
/// normal form of the relator exponent matrix.
pub fn abelianization_invariants(p: &GroupPresentation) -> (Vec<i64>, usize) {
    let rows: Vec<Vec<i64>> = p
        .relators
        .iter()
        .map(|r| r.exponent_vector(p.generator_count))
        .collect();
    let diag: Vec<i64> = smith_diagonal(rows).into_iter().filter(|&d| d != 0).collect();
    let free_rank = p.generator_count - diag.len();
    (diag, free_rank)
}

fn abelianization_is_meridional(p: &GroupPresentation) -> bool {
    if p.relators.iter().any(|r| r.exponent_sum() != 0) {
        return false;
    }
    let (torsion, free_rank) = abelianization_invariants(p);
    free_rank == 1 && torsion.iter().all(|&d| d == 1)
}

/// The meridian degree of a word: its total exponent sum, which is the
/// image in the abelianization for knot group presentations.
///
/// Errors with `Invariant` if the abelianization is not infinite cyclic
/// with every generator mapping to the same generator class (the situation
/// in which the exponent sum would not be the abelianization).
pub fn abelianize(w: &FreeWord, p: &GroupPresentation) -> Result<i64> {
    if !abelianization_is_meridional(p) {
        return Err(Error::Invariant(
            "abelianization is not infinite cyclic on the generator class".into(),
        ));
    }
    Ok(w.exponent_sum())
}

// ---------------------------------------------------------------------------
// Tietze reduction and the knot group bundle.
// ---------------------------------------------------------------------------

/// A knot group: the raw Wirtinger presentation, a Tietze-reduced copy, the
/// peripheral system in both coordinate sets, and per-generator meridian
/// conjugators powering constructive ideal membership.
#[derive(Debug, Clone)]
pub struct KnotGroup {
    /// Arc-generator Wirtinger presentation.
    pub wirtinger: GroupPresentation,
    /// Peripheral system in arc generators.
    pub wirtinger_peripheral: PeripheralSystem,
    /// Tietze-reduced presentation (generator-eliminated).
    pub presentation: GroupPresentation,
    /// Peripheral system in the reduced generators.
    pub peripheral: PeripheralSystem,
    /// Image of each arc generator as a word in the reduced generators.
    pub arc_images: Vec<FreeWord>,
    /// Arc index of each retained (reduced) generator.
    pub retained_arcs: Vec<usize>,
    /// For each reduced generator `gᵢ`: a word `wᵢ` with
    /// `gᵢ = wᵢ · m · wᵢ⁻¹` in the group (reduced coordinates).
    pub meridian_conjugators: Vec<FreeWord>,
}

impl KnotGroup {
    /// The meridian in reduced coordinates.
    pub fn meridian(&self) -> &FreeWord {
        &self.peripheral.meridian
    }

    /// The longitude in reduced coordinates.
    pub fn longitude(&self) -> &FreeWord {
        &self.peripheral.longitude
    }
}

/// Meridian conjugators in arc coordinates: breadth-first search over the
/// crossing relations from the base arc. The relator
/// `g_out = g_over^ε g_in g_over^{−ε}` turns a conjugator for one under-arc
/// into one for the other.
fn arc_conjugators(d: &KnotDiagram) -> Vec<FreeWord> {
    let n_arcs = d.arc_count();
    let mut conj: Vec<Option<FreeWord>> = vec![None; n_arcs];
    conj[d.base_arc] = Some(FreeWord::identity());
    let mut queue = VecDeque::from([d.base_arc]);
    while let Some(a) = queue.pop_front() {
        for c in &d.crossings {
            let over = d.arc_of_edge(c.edges[1]);
            let g_in = d.arc_of_edge(c.edges[0]);
            let g_out = d.arc_of_edge(c.edges[2]);
            let e = c.sign as i64;
            if g_in == a && conj[g_out].is_none() {
                let w = FreeWord::generator(over).pow(e).concat(conj[a].as_ref().unwrap());
                conj[g_out] = Some(w);
                queue.push_back(g_out);
            }
            if g_out == a && conj[g_in].is_none() {
                let w = FreeWord::generator(over).pow(-e).concat(conj[a].as_ref().unwrap());
                conj[g_in] = Some(w);
                queue.push_back(g_in);
            }
        }
    }
    conj.into_iter()
        .map(|w| w.expect("arc graph of a knot diagram is connected"))
        .collect()
}

/// Substitute `def` for generator `g` (0-based) throughout a word.
fn substitute_single(w: &FreeWord, g: usize, def: &FreeWord) -> FreeWord {
    let target = g as i32 + 1;
    let mut acc = Vec::new();
    for &l in w.letters() {
        if l == target {
            for &x in def.letters() {
                push_reduced(&mut acc, x);
            }
        } else if l == -target {
            for &x in def.letters().iter().rev() {
                push_reduced(&mut acc, -x);
            }
        } else {
            push_reduced(&mut acc, l);
        }
    }
    FreeWord { letters: acc }
}

/// Deterministic Tietze generator elimination.
///
/// Repeatedly pick the shortest relator (ties by relator then generator
/// index) in which some non-protected generator occurs exactly once, solve
/// for that generator, substitute everywhere, and drop the relator.
/// Definitions of eliminated generators are retained so peripheral words
/// can be rewritten into the reduced generating set.
///
/// Returns the reduced presentation, the image of each original generator
/// in reduced coordinates, and the original indices of retained generators.
fn tietze_reduce(
    p: &GroupPresentation,
    protect: usize,
) -> (GroupPresentation, Vec<FreeWord>, Vec<usize>) {
    let n = p.generator_count;
    let mut alive = vec![true; n];
    let mut rels: Vec<FreeWord> = p.relators.clone();
    let mut defs: Vec<Option<FreeWord>> = vec![None; n];
    loop {
        let mut best: Option<(usize, usize, usize)> = None; // (len, relator, generator)
        for (ri, r) in rels.iter().enumerate() {
            if r.is_identity() {
                continue;
            }
            let mut counts = vec![0usize; n];
            for &l in r.letters() {
                counts[l.unsigned_abs() as usize - 1] += 1;
            }
            for (g, &c) in counts.iter().enumerate() {
                if c == 1 && g != protect && alive[g] {
                    let cand = (r.len(), ri, g);
                    if best.map_or(true, |b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
        let Some((_, ri, g)) = best else { break };
        let r = rels.remove(ri);
        let target = g as i32 + 1;
        let pos = r.letters().iter().position(|&l| l.abs() == target).unwrap();
        let a = FreeWord { letters: r.letters()[..pos].to_vec() };
        let b = FreeWord { letters: r.letters()[pos + 1..].to_vec() };
        // r = A g^s B = 1 solves to g = A⁻¹B⁻¹ (s = +1) or g = B·A (s = −1)
        let def = if r.letters()[pos] > 0 {
            a.inverse().concat(&b.inverse())
        } else {
            b.concat(&a)
        };
        alive[g] = false;
        for rel in &mut rels {
            *rel = substitute_single(rel, g, &def).cyclically_reduced();
        }
        rels.retain(|r| !r.is_identity());
        for d in defs.iter_mut().flatten() {
            *d = substitute_single(d, g, &def);
        }
        defs[g] = Some(def);
    }
    let retained: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let rename: Vec<FreeWord> = {
        let mut map = vec![FreeWord::identity(); n];
        for (new, &old) in retained.iter().enumerate() {
            map[old] = FreeWord::generator(new);
        }
        map
    };
    let arc_images: Vec<FreeWord> = (0..n)
        .map(|i| {
            if alive[i] {
                rename[i].clone()
            } else {
                defs[i].as_ref().unwrap().substitute(&rename)
            }
        })
        .collect();
    let relators: Vec<FreeWord> = rels
        .iter()
        .map(|r| r.substitute(&rename).cyclically_reduced())
        .filter(|r| !r.is_identity())
        .collect();
    let reduced = GroupPresentation { generator_count: retained.len(), relators };
    (reduced, arc_images, retained)
}

/// Build the full knot group bundle from a diagram.
pub fn knot_group(d: &KnotDiagram) -> KnotGroup {
    let (wp, wps) = wirtinger(d);
    if d.crossing_count() == 0 {
        return KnotGroup {
            wirtinger: wp.clone(),
            wirtinger_peripheral: wps.clone(),
            presentation: wp,
            peripheral: wps,
            arc_images: vec![FreeWord::generator(0)],
            retained_arcs: vec![0],
            meridian_conjugators: vec![FreeWord::identity()],
        };
    }
    let conj = arc_conjugators(d);
    // one Wirtinger relator is always a consequence of the others; drop the
    // last before simplifying
    let trimmed = GroupPresentation {
        generator_count: wp.generator_count,
        relators: wp.relators[..wp.relators.len().saturating_sub(1)].to_vec(),
    };
    let (reduced, arc_images, retained_arcs) = tietze_reduce(&trimmed, d.base_arc);
    let peripheral = PeripheralSystem {
        meridian: wps.meridian.substitute(&arc_images),
        longitude: wps.longitude.substitute(&arc_images),
    };
    let meridian_conjugators: Vec<FreeWord> = retained_arcs
        .iter()
        .map(|&arc| conj[arc].substitute(&arc_images))
        .collect();
    KnotGroup {
        wirtinger: wp,
        wirtinger_peripheral: wps,
        presentation: reduced,
        peripheral,
        arc_images,
        retained_arcs,
        meridian_conjugators,
    }
}

// ---------------------------------------------------------------------------
// Bounded Knuth–Bendix completion.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Rule {
    lhs: Vec<i32>,
    rhs: Vec<i32>,
}

/// A string rewriting system over the letters of a presentation (including
/// explicit free-cancellation rules), built by bounded Knuth–Bendix
/// completion under shortlex.
#[derive(Debug)]
struct KbSystem {
    rules: Vec<Option<Rule>>,
    by_first: Vec<Vec<usize>>, // letter rank → rule indices
    max_lhs: usize,
    complete: bool,
}

impl KbSystem {
    fn build(p: &GroupPresentation, rule_limit: usize, length_limit: usize) -> KbSystem {
        let nletters = 2 * p.generator_count;
        let mut kb = KbSystem {
            rules: Vec::new(),
            by_first: vec![Vec::new(); nletters.max(1)],
            max_lhs: 0,
            complete: true,
        };
        let mut eqs: VecDeque<(Vec<i32>, Vec<i32>)> = VecDeque::new();
        for g in 0..p.generator_count {
            let l = g as i32 + 1;
            eqs.push_back((vec![l, -l], Vec::new()));
            eqs.push_back((vec![-l, l], Vec::new()));
        }
        for r in &p.relators {
            eqs.push_back((r.letters().to_vec(), Vec::new()));
        }
        let mut pairs: VecDeque<(usize, usize)> = VecDeque::new();
        loop {
            if let Some((u, v)) = eqs.pop_front() {
                kb.handle_equation(u, v, rule_limit, length_limit, &mut eqs, &mut pairs);
                // bound both the live rule set and total churn
                if kb.rules.iter().flatten().count() >= rule_limit
                    || kb.rules.len() >= 20 * rule_limit
                {
                    kb.complete = false;
                    break;
                }
                continue;
            }
            let Some((i, j)) = pairs.pop_front() else { break };
            if kb.rules[i].is_none() || kb.rules[j].is_none() {
                continue;
            }
            let mut found = Vec::new();
            superpose(
                kb.rules[i].as_ref().unwrap(),
                kb.rules[j].as_ref().unwrap(),
                &mut found,
            );
            eqs.extend(found);
        }
        kb
    }

    fn handle_equation(
        &mut self,
        u: Vec<i32>,
        v: Vec<i32>,
        _rule_limit: usize,
        length_limit: usize,
        eqs: &mut VecDeque<(Vec<i32>, Vec<i32>)>,
        pairs: &mut VecDeque<(usize, usize)>,
    ) {
        let u = self.reduce(&u);
        let v = self.reduce(&v);
        if u == v {
            return;
        }
        let (lhs, rhs) = if shortlex(&u, &v) == std::cmp::Ordering::Greater {
            (u, v)
        } else {
            (v, u)
        };
        if lhs.len() > length_limit {
            self.complete = false;
            return;
        }
        let id = self.rules.len();
        self.max_lhs = self.max_lhs.max(lhs.len());
        self.by_first[letter_rank(lhs[0])].push(id);
        let new_lhs = lhs.clone();
        self.rules.push(Some(Rule { lhs, rhs }));
        // interreduce: requeue rules whose lhs the new rule can rewrite
        for i in 0..id {
            let Some(r) = self.rules[i].clone() else { continue };
            if contains_subword(&r.lhs, &new_lhs) {
                self.rules[i] = None;
                eqs.push_back((r.lhs, r.rhs));
            } else if contains_subword(&r.rhs, &new_lhs) {
                let reduced = self.reduce(&r.rhs);
                self.rules[i] = Some(Rule { lhs: r.lhs, rhs: reduced });
            }
        }
        for i in 0..=id {
            if self.rules[i].is_some() {
                pairs.push_back((i, id));
                if i != id {
                    pairs.push_back((id, i));
                }
            }
        }
    }

    /// Rewrite to an irreducible word. Terminates because every rule is
    /// shortlex-decreasing; on a confluent system the result is canonical.
    fn reduce(&self, w: &[i32]) -> Vec<i32> {
        let mut out = w.to_vec();
        let mut pos = 0;
        while pos < out.len() {
            let mut applied = false;
            for &ri in &self.by_first[letter_rank(out[pos])] {
                let Some(rule) = self.rules[ri].as_ref() else { continue };
                let l = rule.lhs.len();
                if pos + l <= out.len() && out[pos..pos + l] == rule.lhs[..] {
                    out.splice(pos..pos + l, rule.rhs.iter().copied());
                    pos = pos.saturating_sub(self.max_lhs);
                    applied = true;
                    break;
                }
            }
            if !applied {
                pos += 1;
            }
        }
        out
    }
}

fn contains_subword(hay: &[i32], needle: &[i32]) -> bool {
    needle.len() <= hay.len()
        && (0..=hay.len() - needle.len()).any(|s| &hay[s..s + needle.len()] == needle)
}

/// Critical pairs of two rules: proper suffix/prefix overlaps and full
/// containment of `b.lhs` inside `a.lhs`.
fn superpose(a: &Rule, b: &Rule, out: &mut Vec<(Vec<i32>, Vec<i32>)>) {
    let (la, lb) = (&a.lhs, &b.lhs);
    for k in 1..la.len().min(lb.len()) {
        if la[la.len() - k..] == lb[..k] {
            // la ++ lb[k..] reduces two ways
            let mut left = a.rhs.clone();
            left.extend_from_slice(&lb[k..]);
            let mut right = la[..la.len() - k].to_vec();
            right.extend_from_slice(&b.rhs);
            out.push((left, right));
        }
    }
    if lb.len() <= la.len() {
        for s in 0..=la.len() - lb.len() {
            if la[s..s + lb.len()] == lb[..] {
                let mut right = la[..s].to_vec();
                right.extend_from_slice(&b.rhs);
                right.extend_from_slice(&la[s + lb.len()..]);
                out.push((a.rhs.clone(), right));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Torus-knot normal form.
// ---------------------------------------------------------------------------

/// Exact normal form for `⟨x, y | x^p = y^q⟩`: the center is generated by
/// `z = x^p = y^q`, the central quotient is `Z/p * Z/q`, and every element
/// is uniquely `z^k · (alternating word with x-exponents in (0,p) and
/// y-exponents in (0,q))`.
#[derive(Debug, Clone)]
struct TorusForm {
    p: i64,
    q: i64,
}

impl TorusForm {
    /// Recognize a two-generator one-relator presentation as
    /// `⟨x, y | x^p y^{−q}⟩` (up to rotation and inversion of the relator).
    fn detect(pres: &GroupPresentation) -> Option<TorusForm> {
        if pres.generator_count != 2 || pres.relators.len() != 1 {
            return None;
        }
        let r = pres.relators[0].cyclically_reduced();
        let letters = r.letters();
        if letters.len() < 4 {
            return None;
        }
        // maximal runs of equal letters, cyclically
        let mut runs: Vec<(i32, i64)> = Vec::new();
        for &l in letters {
            match runs.last_mut() {
                Some((last, count)) if *last == l => *count += 1,
                _ => runs.push((l, 1)),
            }
        }
        if runs.len() > 1 && runs.first().unwrap().0 == runs.last().unwrap().0 {
            let (_, c) = runs.pop().unwrap();
            runs[0].1 += c;
        }
        if runs.len() != 2 {
            return None;
        }
        let ((la, a), (lb, b)) = (runs[0], runs[1]);
        // two blocks on distinct generators with opposite signs: x^p = y^q
        if la.unsigned_abs() == lb.unsigned_abs() || la.signum() == lb.signum() || a < 2 || b < 2 {
            return None;
        }
        let (p, q) = if la.abs() == 1 { (a, b) } else { (b, a) };
        Some(TorusForm { p, q })
    }

    fn order(&self, gen: u8) -> i64 {
        if gen == 0 {
            self.p
        } else {
            self.q
        }
    }

    /// Normal form: central exponent plus alternating blocks.
    fn normal_form(&self, w: &FreeWord) -> (i64, Vec<(u8, i64)>) {
        let mut k = 0i64;
        let mut stack: Vec<(u8, i64)> = Vec::new();
        for &l in w.letters() {
            let gen = (l.unsigned_abs() - 1) as u8;
            let e: i64 = if l > 0 { 1 } else { -1 };
            if let Some(&(top, te)) = stack.last() {
                if top == gen {
                    stack.pop();
                    let total = te + e;
                    let ord = self.order(gen);
                    k += total.div_euclid(ord);
                    let r = total.rem_euclid(ord);
                    if r != 0 {
                        stack.push((gen, r));
                    }
                    continue;
                }
            }
            let ord = self.order(gen);
            k += e.div_euclid(ord);
            let r = e.rem_euclid(ord);
            if r != 0 {
                stack.push((gen, r));
            }
        }
        (k, stack)
    }

    /// Canonical word for a normal form: `x^{p·k}` then the blocks.
    fn to_word(&self, k: i64, blocks: &[(u8, i64)]) -> FreeWord {
        let mut w = FreeWord::generator(0).pow(self.p * k);
        for &(gen, e) in blocks {
            w = w.concat(&FreeWord::generator(gen as usize).pow(e));
        }
        w
    }
}

// ---------------------------------------------------------------------------
// Finite quotients.
// ---------------------------------------------------------------------------

/// A transitive permutation representation: one permutation (as an image
/// table) per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermRep {
    /// Number of points.
    pub degree: usize,
    /// `images[g][x]` is the image of point `x` under generator `g`.
    pub images: Vec<Vec<usize>>,
}

impl PermRep {
    /// Permutation image of a word (identity for the empty word).
    pub fn eval(&self, w: &FreeWord) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.degree).collect();
        // ρ(l₁…l_k) = ρ(l₁)∘…∘ρ(l_k) as functions
        for &l in w.letters().iter().rev() {
            let g = l.unsigned_abs() as usize - 1;
            let img = &self.images[g];
            perm = if l > 0 {
                perm.iter().map(|&x| img[x]).collect()
            } else {
                let mut inv = vec![0usize; self.degree];
                for (a, &b) in img.iter().enumerate() {
                    inv[b] = a;
                }
                perm.iter().map(|&x| inv[x]).collect()
            };
        }
        perm
    }

    fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for img in &self.images {
                for y in [img[x], img.iter().position(|&v| v == x).unwrap()] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
        }
        count == self.degree
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All transitive permutation representations of a presentation up to the
/// degree bound, by backtracking over generator images and verifying every
/// relator. Exhaustive and deterministic; intended for small degree bounds
/// on presentations with few generators.
pub fn finite_quotients(p: &GroupPresentation, degree_bound: usize) -> Vec<PermRep> {
    let mut reps = Vec::new();
    for degree in 1..=degree_bound {
        let perms = permutations(degree);
        let mut images: Vec<Vec<usize>> = Vec::new();
        assign(p, degree, &perms, &mut images, &mut reps);
    }
    reps
}

fn assign(
    p: &GroupPresentation,
    degree: usize,
    perms: &[Vec<usize>],
    images: &mut Vec<Vec<usize>>,
    reps: &mut Vec<PermRep>,
) {
    if images.len() == p.generator_count {
        let rep = PermRep { degree, images: images.clone() };
        let ok = p
            .relators
            .iter()
            .all(|r| rep.eval(r) == (0..degree).collect::<Vec<_>>());
        if ok && rep.is_transitive() {
            reps.push(rep);
        }
        return;
    }
    for perm in perms {
        images.push(perm.clone());
        // prune with relators fully supported on assigned generators
        let g = images.len();
        let rep = PermRep { degree, images: images.clone() };
        let ok = p.relators.iter().all(|r| {
            r.max_generator().map_or(true, |m| m >= g)
                || rep.eval(r) == (0..degree).collect::<Vec<_>>()
        });
        if ok {
            assign(p, degree, perms, images, reps);
        }
        images.pop();
    }
}

// ---------------------------------------------------------------------------
// Word-problem backend.
// ---------------------------------------------------------------------------

/// Three-valued answer of a sound decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    /// Provably equal.
    Yes,
    /// Provably distinct (a certificate exists).
    No,
    /// Undecided within resource limits.
    Unknown,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Answer::Yes => write!(f, "yes"),
            Answer::No => write!(f, "no"),
            Answer::Unknown => write!(f, "unknown"),
        }
    }
}

/// Selectable normalization/equality strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    /// Free reduction only; `No` via abelianization.
    FreeReduce,
    /// Bounded Knuth–Bendix completion; exact once completion converges.
    KnuthBendixBounded,
    /// Exact normal form for `⟨x,y | x^p = y^q⟩`.
    TorusKnotNormalForm,
    /// Free reduction plus separation by finite permutation quotients.
    FiniteQuotientSeparator,
}

/// Backend parameters: rewriting budgets and the quotient degree bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendConfig {
    /// Which strategy to run.
    pub kind: BackendKind,
    /// Maximum number of rewrite rules kept during completion.
    pub rule_limit: usize,
    /// Maximum rule length during completion.
    pub length_limit: usize,
    /// Degree bound for finite-quotient search.
    pub degree_bound: usize,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            kind: BackendKind::KnuthBendixBounded,
            rule_limit: 200,
            length_limit: 32,
            degree_bound: 4,
        }
    }
}

/// Why an equality answer is sound; re-checkable by callers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The words are identical after free reduction.
    FreeEqual,
    /// Both words rewrite to the same irreducible word.
    RewriteEqual,
    /// `u·v⁻¹` rewrites to the empty word.
    RewriteToIdentity,
    /// Completion converged and the normal forms differ.
    ConfluentNormalForms,
    /// The exact torus normal forms agree/differ.
    TorusNormalForm,
    /// The abelianization degrees differ.
    AbelianizationDegrees(i64, i64),
    /// Quotient representation at this index separates the words.
    QuotientSeparation(usize),
}

/// A word-problem backend bound to one presentation. Construction runs all
/// the expensive precomputation (completion, quotient search); the value is
/// immutable afterwards and safe to share across threads.
#[derive(Debug)]
pub struct Backend {
    presentation: GroupPresentation,
    config: BackendConfig,
    kb: Option<KbSystem>,
    torus: Option<TorusForm>,
    quotients: Vec<PermRep>,
    ab_meridional: bool,
}

impl Backend {
    /// Bind a backend to a presentation; for `TorusKnotNormalForm` the
    /// presentation must literally be `⟨x,y | x^p = y^q⟩`.
    pub fn new(p: &GroupPresentation, config: BackendConfig) -> Result<Backend> {
        let mut kb = None;
        let mut torus = None;
        let mut quotients = Vec::new();
        match config.kind {
            BackendKind::FreeReduce => {}
            BackendKind::KnuthBendixBounded => {
                kb = Some(KbSystem::build(p, config.rule_limit, config.length_limit));
                if config.degree_bound >= 1 && p.generator_count <= 4 {
                    quotients = finite_quotients(p, config.degree_bound);
                }
            }
            BackendKind::TorusKnotNormalForm => {
                torus = Some(TorusForm::detect(p).ok_or_else(|| {
                    Error::Backend(
                        "torus backend requires a presentation of the form ⟨x,y | x^p = y^q⟩"
                            .into(),
                    )
                })?);
            }
            BackendKind::FiniteQuotientSeparator => {
                quotients = finite_quotients(p, config.degree_bound.max(1));
            }
        }
        Ok(Backend {
            presentation: p.clone(),
            config,
            kb,
            torus,
            quotients,
            ab_meridional: abelianization_is_meridional(p),
        })
    }

    /// The presentation this backend is bound to.
    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    /// The configuration used to build this backend.
    pub fn config(&self) -> &BackendConfig {
        &self.config
    }

    /// Whether equality is fully decided: torus normal form, or converged
    /// Knuth–Bendix completion.
    pub fn is_deciding(&self) -> bool {
        match self.config.kind {
            BackendKind::TorusKnotNormalForm => true,
            BackendKind::KnuthBendixBounded => self.kb.as_ref().is_some_and(|kb| kb.complete),
            _ => false,
        }
    }

    /// The finite quotients this backend computed (possibly empty).
    pub fn quotients(&self) -> &[PermRep] {
        &self.quotients
    }

    /// Canonical-or-best-effort normal form. Idempotent for every backend;
    /// canonical (equal words ↦ identical results) for deciding backends.
    pub fn normalize(&self, w: &FreeWord) -> FreeWord {
        if let Some(t) = &self.torus {
            let (k, blocks) = t.normal_form(w);
            return t.to_word(k, &blocks);
        }
        if let Some(kb) = &self.kb {
            return FreeWord { letters: kb.reduce(w.letters()) };
        }
        w.clone()
    }

    /// Sound three-valued equality.
    pub fn equal(&self, u: &FreeWord, v: &FreeWord) -> Answer {
        self.equal_certified(u, v).0
    }

    /// Sound three-valued equality with the certificate that makes the
    /// answer sound (None only for Unknown).
    pub fn equal_certified(&self, u: &FreeWord, v: &FreeWord) -> (Answer, Option<Certificate>) {
        if u == v {
            return (Answer::Yes, Some(Certificate::FreeEqual));
        }
        if let Some(t) = &self.torus {
            return if t.normal_form(u) == t.normal_form(v) {
                (Answer::Yes, Some(Certificate::TorusNormalForm))
            } else {
                (Answer::No, Some(Certificate::TorusNormalForm))
            };
        }
        let mut kb_distinct_nf = false;
        if let Some(kb) = &self.kb {
            let nu = kb.reduce(u.letters());
            let nv = kb.reduce(v.letters());
            if nu == nv {
                return (Answer::Yes, Some(Certificate::RewriteEqual));
            }
            if kb.reduce(&u.concat(&v.inverse()).letters).is_empty()
                || kb.reduce(&v.inverse().concat(u).letters).is_empty()
            {
                return (Answer::Yes, Some(Certificate::RewriteToIdentity));
            }
            kb_distinct_nf = kb.complete;
        }
        if kb_distinct_nf {
            return (Answer::No, Some(Certificate::ConfluentNormalForms));
        }
        if self.ab_meridional {
            let (du, dv) = (u.exponent_sum(), v.exponent_sum());
            if du != dv {
                return (Answer::No, Some(Certificate::AbelianizationDegrees(du, dv)));
            }
        }
        for (i, rep) in self.quotients.iter().enumerate() {
            if rep.eval(u) != rep.eval(v) {
                return (Answer::No, Some(Certificate::QuotientSeparation(i)));
            }
        }
        (Answer::Unknown, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotio::{bundled_census, census_lookup, parse_pd};
    use rand::{Rng, SeedableRng};

    fn word(letters: &[i32]) -> FreeWord {
        FreeWord::from_letters(letters).unwrap()
    }

    fn trefoil_group() -> KnotGroup {
        knot_group(&parse_pd(&census_lookup("3_1").unwrap().pd).unwrap())
    }

    fn fig8_group() -> KnotGroup {
        knot_group(&parse_pd(&census_lookup("4_1").unwrap().pd).unwrap())
    }

    #[test]
    fn free_word_basics() {
        assert_eq!(word(&[1, -1]), FreeWord::identity());
        assert_eq!(word(&[1, 2, -2, -1]), FreeWord::identity());
        let w = word(&[1, 2]);
        assert_eq!(w.inverse(), word(&[-2, -1]));
        assert!(w.concat(&w.inverse()).is_identity());
        assert_eq!(w.pow(2), word(&[1, 2, 1, 2]));
        assert_eq!(w.pow(-1), w.inverse());
        assert_eq!(w.exponent_sum(), 2);
        assert_eq!(word(&[-1, 2, 1]).cyclically_reduced(), word(&[2]));
        assert_eq!(
            word(&[1]).conjugated_by(&word(&[2])),
            word(&[2, 1, -2])
        );
    }

    #[test]
    fn shortlex_order() {
        // g0 < g0⁻¹ < g1 < g1⁻¹, length first
        assert!(FreeWord::identity() < word(&[1]));
        assert!(word(&[1]) < word(&[-1]));
        assert!(word(&[-1]) < word(&[2]));
        assert!(word(&[2]) < word(&[-2]));
        assert!(word(&[-2]) < word(&[1, 1]));
    }

    #[test]
    fn substitute_is_homomorphism() {
        let images = [word(&[2, 1]), word(&[-1])];
        let u = word(&[1, 2]);
        let v = word(&[-2, 1]);
        assert_eq!(
            u.concat(&v).substitute(&images),
            u.substitute(&images).concat(&v.substitute(&images))
        );
    }

    #[test]
    fn wirtinger_unknot() {
        let (p, ps) = wirtinger(&parse_pd("PD[]").unwrap());
        assert_eq!(p.generator_count, 1);
        assert!(p.relators.is_empty());
        assert_eq!(ps.meridian, FreeWord::generator(0));
        assert!(ps.longitude.is_identity());
    }

    #[test]
    fn wirtinger_trefoil_shape() {
        let d = parse_pd(&census_lookup("3_1").unwrap().pd).unwrap();
        let (p, ps) = wirtinger(&d);
        assert_eq!(p.generator_count, 3);
        assert_eq!(p.relators.len(), 3);
        let (torsion, free_rank) = abelianization_invariants(&p);
        assert_eq!((torsion, free_rank), (vec![1, 1], 1));
        assert_eq!(abelianize(&ps.meridian, &p).unwrap(), 1);
        assert_eq!(abelianize(&ps.longitude, &p).unwrap(), 0);
    }

    #[test]
    fn census_longitudes_abelianize_to_zero() {
        for entry in bundled_census() {
            let d = parse_pd(&entry.pd).unwrap();
            let (p, ps) = wirtinger(&d);
            assert_eq!(abelianize(&ps.longitude, &p).unwrap(), 0, "{}", entry.name);
            assert_eq!(abelianize(&ps.meridian, &p).unwrap(), 1, "{}", entry.name);
            for g in 0..p.generator_count {
                assert_eq!(abelianize(&FreeWord::generator(g), &p).unwrap(), 1);
            }
        }
    }

    #[test]
    fn abelianize_rejects_unbalanced_presentation() {
        // ⟨x,y | x²y⁻³⟩ has infinite cyclic abelianization but the
        // generators map to different powers
        let p = GroupPresentation::new(2, vec![word(&[1, 1, -2, -2, -2])]).unwrap();
        assert!(abelianize(&word(&[1]), &p).is_err());
    }

    #[test]
    fn tietze_reduces_trefoil_to_two_generators() {
        let g = trefoil_group();
        assert_eq!(g.presentation.generator_count, 2);
        assert!(!g.presentation.relators.is_empty());
        assert_eq!(g.peripheral.meridian.len(), 1);
        assert_eq!(abelianize(&g.peripheral.longitude, &g.presentation).unwrap(), 0);
        // arc images respect the Wirtinger relators at the abelianized level
        for r in &g.wirtinger.relators {
            assert_eq!(r.substitute(&g.arc_images).exponent_sum(), 0);
        }
    }

    #[test]
    fn knuth_bendix_decides_trefoil_identities() {
        let g = trefoil_group();
        let b = Backend::new(&g.presentation, BackendConfig::default()).unwrap();
        let m = g.meridian();
        let l = g.longitude();
        // peripheral commutation
        let comm = m.concat(l).concat(&m.inverse()).concat(&l.inverse());
        assert_eq!(b.equal(&comm, &FreeWord::identity()), Answer::Yes);
        // relator conjugates die
        for r in &g.presentation.relators {
            let c = r.conjugated_by(&word(&[2, -1, 2]));
            assert_eq!(b.equal(&c, &FreeWord::identity()), Answer::Yes);
        }
        // abelianization-distinct words separate
        let (ans, cert) = b.equal_certified(m, &m.pow(2));
        assert_eq!(ans, Answer::No);
        assert!(matches!(cert, Some(Certificate::AbelianizationDegrees(1, 2))));
    }

    #[test]
    fn knuth_bendix_decides_figure_eight_identities() {
        let g = fig8_group();
        let b = Backend::new(&g.presentation, BackendConfig::default()).unwrap();
        let m = g.meridian();
        let l = g.longitude();
        let comm = m.concat(l).concat(&m.inverse()).concat(&l.inverse());
        assert_eq!(b.equal(&comm, &FreeWord::identity()), Answer::Yes);
        for r in &g.presentation.relators {
            let c = r.conjugated_by(&word(&[-2, 1, 1]));
            assert_eq!(b.equal(&c, &FreeWord::identity()), Answer::Yes);
        }
    }

    #[test]
    fn meridian_conjugators_verify() {
        for name in ["3_1", "4_1"] {
            let d = parse_pd(&census_lookup(name).unwrap().pd).unwrap();
            let g = knot_group(&d);
            let b = Backend::new(&g.presentation, BackendConfig::default()).unwrap();
            let m = g.meridian();
            for (i, w) in g.meridian_conjugators.iter().enumerate() {
                let claimed = m.conjugated_by(w);
                assert_eq!(
                    b.equal(&FreeWord::generator(i), &claimed),
                    Answer::Yes,
                    "{name}: generator {i}"
                );
            }
        }
    }

    #[test]
    fn normalize_is_idempotent() {
        let g = trefoil_group();
        let backends = [
            Backend::new(&g.presentation, BackendConfig {
                kind: BackendKind::FreeReduce,
                ..BackendConfig::default()
            })
            .unwrap(),
            Backend::new(&g.presentation, BackendConfig::default()).unwrap(),
            Backend::new(&g.presentation, BackendConfig {
                kind: BackendKind::FiniteQuotientSeparator,
                degree_bound: 3,
                ..BackendConfig::default()
            })
            .unwrap(),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let letters: Vec<i32> = (0..rng.random_range(0..12))
                .map(|_| {
                    let g = rng.random_range(1..=2);
                    if rng.random_bool(0.5) { g } else { -g }
                })
                .collect();
            let w = word(&letters);
            for b in &backends {
                let n1 = b.normalize(&w);
                assert_eq!(b.normalize(&n1), n1);
            }
        }
    }

    #[test]
    fn torus_backend_exact() {
        // ⟨x,y | x² = y³⟩
        let p = GroupPresentation::new(2, vec![word(&[1, 1, -2, -2, -2])]).unwrap();
        let b = Backend::new(&p, BackendConfig {
            kind: BackendKind::TorusKnotNormalForm,
            ..BackendConfig::default()
        })
        .unwrap();
        assert!(b.is_deciding());
        let x = word(&[1]);
        let y = word(&[2]);
        let z = x.pow(2);
        assert_eq!(b.equal(&z, &y.pow(3)), Answer::Yes);
        assert_eq!(b.equal(&x, &y), Answer::No);
        // the center commutes with everything
        let w = word(&[1, -2, 1, 2, 2]);
        assert_eq!(b.equal(&z.concat(&w), &w.concat(&z)), Answer::Yes);
        assert_eq!(b.equal(&x.concat(&y), &y.concat(&x)), Answer::No);
        // trefoil group maps in via a ↦ y⁻¹x, b ↦ x⁻¹y²
        let images = [word(&[-2, 1]), word(&[-1, 2, 2])];
        let braid_relator = word(&[1, 2, 1, -2, -1, -2]);
        assert_eq!(
            b.equal(&braid_relator.substitute(&images), &FreeWord::identity()),
            Answer::Yes
        );
    }

    #[test]
    fn unknot_quotients_are_cyclic() {
        let p = GroupPresentation::new(1, vec![]).unwrap();
        let reps = finite_quotients(&p, 3);
        // degree 1: identity; degree 2: the transposition; degree 3: two
        // 3-cycles — every image is cyclic
        assert_eq!(reps.len(), 4);
        for rep in &reps {
            assert!(rep.is_transitive());
        }
    }

    #[test]
    fn trefoil_has_s3_quotient_figure_eight_does_not() {
        let tre = trefoil_group();
        let reps = finite_quotients(&tre.presentation, 3);
        let is_transposition = |perm: &[usize]| {
            perm.iter().enumerate().filter(|&(i, &v)| i != v).count() == 2
        };
        assert!(
            reps.iter()
                .any(|r| r.degree == 3 && is_transposition(&r.eval(tre.meridian()))),
            "trefoil is 3-colorable"
        );
        let f8 = fig8_group();
        let reps8 = finite_quotients(&f8.presentation, 3);
        assert!(
            reps8
                .iter()
                .all(|r| r.degree != 3 || !is_transposition(&r.eval(f8.meridian()))),
            "figure-eight is not 3-colorable"
        );
    }

    #[test]
    fn soundness_audit_on_random_pairs() {
        let g = trefoil_group();
        let b = Backend::new(&g.presentation, BackendConfig::default()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let letters: Vec<i32> = (0..rng.random_range(0..8))
                .map(|_| {
                    let g = rng.random_range(1..=2);
                    if rng.random_bool(0.5) { g } else { -g }
                })
                .collect();
            let u = word(&letters);
            let r = &g.presentation.relators[0];
            let v = u.concat(&r.conjugated_by(&u));
            // u and v differ by a relator conjugate: Yes answers only
            let (ans, _) = b.equal_certified(&u, &v);
            assert_ne!(ans, Answer::No);
            // every Yes must agree on every quotient
            if ans == Answer::Yes {
                for rep in b.quotients() {
                    assert_eq!(rep.eval(&u), rep.eval(&v));
                }
            }
        }
    }
}
