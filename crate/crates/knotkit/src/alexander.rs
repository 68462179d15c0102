//! Alexander invariants from the quandle relation matrix.
//!
//! Every crossing of an oriented diagram imposes the relation
//! `γ₁ − mγ₂ = (1−m)γ₃` on the arcs (γ₁ under-in, γ₂ under-out, γ₃ over);
//! assembling one row per crossing over `Z[m^{±1}]` presents the Alexander
//! module. The Alexander polynomial is the gcd of the maximal minors of the
//! presentation matrix with one column deleted, and the elementary-ideal
//! ladder refines it. A Fox-calculus route over the Wirtinger presentation
//! computes the same polynomial independently and serves as the oracle for
//! the quandle route.

use serde::{Deserialize, Serialize};

use crate::fpgroup::GroupPresentation;
use crate::knotio::KnotDiagram;
use crate::{Error, Result};

/// A Laurent polynomial in one variable with integer coefficients.
///
/// Stored as the minimal exponent plus a dense coefficient vector whose
/// first and last entries are nonzero (the zero polynomial has an empty
/// vector and minimal exponent 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    min: i64,
    coeffs: Vec<i64>,
}

/// Serialization form of [`LaurentPoly`]: minimal exponent and coefficient
/// run. Used by the census file and the CLI JSON reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyWire {
    /// Exponent of the first coefficient.
    pub min: i64,
    /// Coefficients for exponents `min, min+1, …`.
    pub coeffs: Vec<i64>,
}

impl LaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        LaurentPoly { min: 0, coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        LaurentPoly::constant(1)
    }

    /// A constant polynomial.
    pub fn constant(c: i64) -> Self {
        LaurentPoly::from_parts(0, vec![c])
    }

    /// `c·t^k`.
    pub fn monomial(k: i64, c: i64) -> Self {
        LaurentPoly::from_parts(k, vec![c])
    }

    /// Build from a minimal exponent and coefficient run, trimming zeros.
    pub fn from_parts(min: i64, coeffs: Vec<i64>) -> Self {
        let mut c = coeffs;
        while c.last() == Some(&0) {
            c.pop();
        }
        let skip = c.iter().take_while(|&&x| x == 0).count();
        let min = min + skip as i64;
        c.drain(..skip);
        if c.is_empty() {
            LaurentPoly::zero()
        } else {
            LaurentPoly { min, coeffs: c }
        }
    }

    /// Minimal exponent (0 for the zero polynomial).
    pub fn min_exp(&self) -> i64 {
        self.min
    }

    /// Maximal exponent (0 for the zero polynomial).
    pub fn max_exp(&self) -> i64 {
        if self.coeffs.is_empty() {
            0
        } else {
            self.min + self.coeffs.len() as i64 - 1
        }
    }

    /// Coefficient vector (ascending exponent).
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether this equals the constant 1.
    pub fn is_one(&self) -> bool {
        self.min == 0 && self.coeffs == [1]
    }

    /// Whether this is a unit of `Z[t^{±1}]`, i.e. `±t^k`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].abs() == 1
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: i64) -> i64 {
        if k < self.min {
            return 0;
        }
        let i = (k - self.min) as usize;
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        LaurentPoly::from_parts(self.min, self.coeffs.iter().map(|&c| -c).collect())
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let min = self.min.min(other.min);
        let max = self.max_exp().max(other.max_exp());
        let mut c = vec![0i64; (max - min + 1) as usize];
        for (i, &v) in self.coeffs.iter().enumerate() {
            c[(self.min - min) as usize + i] += v;
        }
        for (i, &v) in other.coeffs.iter().enumerate() {
            c[(other.min - min) as usize + i] += v;
        }
        LaurentPoly::from_parts(min, c)
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        let mut c = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        LaurentPoly::from_parts(self.min + other.min, c)
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { min: self.min + k, coeffs: self.coeffs.clone() }
    }

    /// Exact division; panics if `other` does not divide `self` (internal
    /// callers only divide when exactness is guaranteed).
    fn div_exact(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let da = self.coeffs.len() - 1;
        let db = other.coeffs.len() - 1;
        assert!(da >= db, "exact division with smaller numerator degree");
        let mut rem = self.coeffs.clone();
        let mut q = vec![0i64; da - db + 1];
        let lead = other.coeffs[db];
        for i in (0..q.len()).rev() {
            let num = rem[i + db];
            assert!(num % lead == 0, "inexact polynomial division");
            let qi = num / lead;
            q[i] = qi;
            for (j, &b) in other.coeffs.iter().enumerate() {
                rem[i + j] -= qi * b;
            }
        }
        assert!(rem.iter().all(|&r| r == 0), "inexact polynomial division");
        LaurentPoly::from_parts(self.min - other.min, q)
    }

    /// Gcd of the absolute values of the coefficients (0 for zero).
    pub fn content(&self) -> i64 {
        self.coeffs.iter().fold(0i64, |g, &c| gcd_i64(g, c))
    }

    /// Evaluate at an integer point (useful for `Δ(±1)` checks).
    pub fn eval(&self, t: i64) -> i64 {
        assert!(
            self.min >= 0 || t == 1 || t == -1,
            "negative exponents need t = ±1"
        );
        let mut acc = 0i64;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let e = self.min + i as i64;
            let p = if t == 1 {
                1
            } else if t == -1 {
                if e.rem_euclid(2) == 0 { 1 } else { -1 }
            } else {
                t.pow(e as u32)
            };
            acc += c * p;
        }
        acc
    }

    /// Canonical representative up to units `±t^k` and rational scaling:
    /// minimal exponent 0, primitive integer coefficients, positive leading
    /// coefficient. The zero polynomial normalizes to itself.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let content = self.content();
        let mut c: Vec<i64> = self.coeffs.iter().map(|&v| v / content).collect();
        if *c.last().unwrap() < 0 {
            for v in &mut c {
                *v = -*v;
            }
        }
        LaurentPoly { min: 0, coeffs: c }
    }

    /// Wire form.
    pub fn to_wire(&self) -> PolyWire {
        PolyWire { min: self.min, coeffs: self.coeffs.clone() }
    }

    /// From wire form (zeros trimmed).
    pub fn from_wire(w: &PolyWire) -> Self {
        LaurentPoly::from_parts(w.min, w.coeffs.clone())
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = self.min + i as i64;
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a != 1 || e == 0 {
                write!(f, "{a}")?;
                if e != 0 {
                    write!(f, "*")?;
                }
            }
            if e == 1 {
                write!(f, "t")?;
            } else if e != 0 {
                write!(f, "t^{e}")?;
            }
        }
        Ok(())
    }
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

/// Primitive gcd of two Laurent polynomials, up to units: the result is
/// normalized (minimal exponent 0, primitive, positive leading
/// coefficient). Contents are discarded — the gcd is taken over `Q[t]` and
/// rescaled primitive.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let mut u = a.normalized();
    let mut v = b.normalized();
    while !v.is_zero() {
        let r = pseudo_rem(&u, &v);
        u = v;
        v = r.normalized();
        if v.is_zero() {
            break;
        }
    }
    u.normalized()
}

/// Pseudo-remainder of plain (min-0) normalized polynomials: repeatedly
/// scale by the divisor's leading coefficient and subtract.
fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let mut r = a.clone();
    if r.coeffs.len() < b.coeffs.len() {
        return r;
    }
    let lead_b = *b.coeffs.last().unwrap();
    while !r.is_zero() && r.coeffs.len() >= b.coeffs.len() {
        let shift = (r.coeffs.len() - b.coeffs.len()) as i64 + r.min - b.min;
        let lead_r = *r.coeffs.last().unwrap();
        // lead_b·r − lead_r·t^shift·b kills the top term
        let scaled_r = LaurentPoly::from_parts(r.min, r.coeffs.iter().map(|&c| c * lead_b).collect());
        let sub = b.shift(shift);
        let scaled_sub =
            LaurentPoly::from_parts(sub.min, sub.coeffs.iter().map(|&c| c * lead_r).collect());
        r = scaled_r.sub(&scaled_sub);
    }
    r
}

/// Determinant of a square matrix over `Z[t^{±1}]` by fraction-free
/// (Bareiss) elimination, up to the unit `t^k` introduced by clearing row
/// denominators. Callers always normalize afterwards, so the unit is
/// harmless.
fn det_up_to_unit(mat: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = mat.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    // clear negative exponents row-wise (changes det only by a unit)
    let mut m: Vec<Vec<LaurentPoly>> = mat
        .iter()
        .map(|row| {
            let shift = row
                .iter()
                .filter(|p| !p.is_zero())
                .map(|p| p.min_exp())
                .min()
                .unwrap_or(0)
                .min(0);
            row.iter().map(|p| p.shift(-shift)).collect()
        })
        .collect();
    let mut sign = 1i64;
    let mut prev = LaurentPoly::one();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][k].is_zero());
        let Some(p) = pivot else {
            return LaurentPoly::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev);
            }
            m[i][k] = LaurentPoly::zero();
        }
        prev = m[k][k].clone();
    }
    if sign < 0 {
        m[n - 1][n - 1].neg()
    } else {
        m[n - 1][n - 1].clone()
    }
}

/// The quandle relation matrix of a diagram: one row per crossing, one
/// column per arc, over `Z[m^{±1}]`.
///
/// A positive crossing contributes the row `γ₁ − mγ₂ − (1−m)γ₃ = 0`
/// (γ₁ under-in arc, γ₂ under-out arc, γ₃ over arc); a negative crossing
/// contributes its negation with the roles of the under arcs transposed by
/// the inverse relation, i.e. `mγ₂ − γ₁ + (1−m)γ₃ = 0`.
pub fn quandle_matrix(d: &KnotDiagram) -> Vec<Vec<LaurentPoly>> {
    let n = d.crossing_count();
    let mut mat = vec![vec![LaurentPoly::zero(); n]; n];
    let m = LaurentPoly::monomial(1, 1);
    let one = LaurentPoly::one();
    for c in &d.crossings {
        let row = &mut mat[c.id];
        let under_in = d.arc_of_edge(c.edges[0]);
        let under_out = d.arc_of_edge(c.edges[2]);
        let over = d.arc_of_edge(c.edges[1]);
        let (a, b, o) = if c.sign > 0 {
            // t·γ_in − γ_out + (1−t)·γ_over
            (m.clone(), one.neg(), one.sub(&m))
        } else {
            // γ_in − t·γ_out + (t−1)·γ_over
            (one.clone(), m.neg(), m.sub(&one))
        };
        row[under_in] = row[under_in].add(&a);
        row[under_out] = row[under_out].add(&b);
        row[over] = row[over].add(&o);
    }
    mat
}

/// The Alexander polynomial via the quandle route: delete the base arc's
/// column of the quandle matrix, take the gcd of the row-deleted maximal
/// minors, and normalize. The unknot yields 1.
pub fn alexander_polynomial(d: &KnotDiagram) -> Result<LaurentPoly> {
    let n = d.crossing_count();
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let mat = quandle_matrix(d);
    let col = d.base_arc;
    let mut g = LaurentPoly::zero();
    for skip_row in 0..n {
        let minor: Vec<Vec<LaurentPoly>> = (0..n)
            .filter(|&i| i != skip_row)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != col)
                    .map(|j| mat[i][j].clone())
                    .collect()
            })
            .collect();
        g = poly_gcd(&g, &det_up_to_unit(&minor));
    }
    if g.is_zero() {
        return Err(Error::DegenerateMatrix(
            "all maximal minors of the quandle matrix vanish".into(),
        ));
    }
    let g = g.normalized();
    if g.eval(1).abs() != 1 {
        return Err(Error::Invariant(format!(
            "alexander polynomial {g} violates Δ(1) = ±1"
        )));
    }
    Ok(g)
}

/// The elementary-ideal ladder of the Alexander module.
///
/// `E_k` is the gcd over `Q[t]` (rescaled primitive, positive leading
/// coefficient) of all `k×k` minors of the full quandle matrix. Returned in
/// descending `k` starting at `n−1`, stopping before the first unit ideal;
/// the unknot yields an empty ladder.
pub fn module_invariants(d: &KnotDiagram) -> Result<Vec<LaurentPoly>> {
    let n = d.crossing_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > 16 {
        return Err(Error::Validation(
            "elementary ideals limited to 16 crossings (minor enumeration)".into(),
        ));
    }
    let mat = quandle_matrix(d);
    let subsets_of_size = |k: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
            .collect()
    };
    let mut ladder = Vec::new();
    for k in (1..n).rev() {
        let subsets = subsets_of_size(k);
        let mut g = LaurentPoly::zero();
        'minors: for rows in &subsets {
            for cols in &subsets {
                let minor: Vec<Vec<LaurentPoly>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| mat[i][j].clone()).collect())
                    .collect();
                g = poly_gcd(&g, &det_up_to_unit(&minor));
                if g.is_one() {
                    break 'minors;
                }
            }
        }
        if g.is_zero() {
            return Err(Error::Invariant(format!(
                "elementary ideal E_{k} is zero on a knot diagram"
            )));
        }
        if g.is_one() {
            break;
        }
        ladder.push(g);
    }
    Ok(ladder)
}

/// The Alexander polynomial via Fox calculus on a presentation whose
/// abelianization sends every generator to `t` (true for Wirtinger and
/// Tietze-reduced knot group presentations).
///
/// The Fox Jacobian `∂r_i/∂g_j` is abelianized to `Z[t^{±1}]`; one
/// generator column is deleted and the gcd of all maximal minors is
/// normalized. This route never looks at the diagram and is the oracle for
/// [`alexander_polynomial`].
pub fn fox_oracle(p: &GroupPresentation) -> Result<LaurentPoly> {
    let g = p.generator_count;
    if g == 0 {
        return Err(Error::Validation("presentation has no generators".into()));
    }
    if g == 1 {
        // infinite cyclic: unknot
        return Ok(LaurentPoly::one());
    }
    let r = p.relators.len();
    if r + 1 < g {
        return Err(Error::Validation(
            "deficiency too large for a knot group presentation".into(),
        ));
    }
    // Fox derivative rows, abelianized: ∂(uv) = ∂u + ab(u)·∂v,
    // ∂g = 1, ∂g⁻¹ = −t⁻¹ at the point where the prefix has degree ab(u).
    let mut jac = vec![vec![LaurentPoly::zero(); g]; r];
    for (i, rel) in p.relators.iter().enumerate() {
        let mut prefix = 0i64;
        for &letter in rel.letters() {
            let j = letter.unsigned_abs() as usize - 1;
            if letter > 0 {
                jac[i][j] = jac[i][j].add(&LaurentPoly::monomial(prefix, 1));
                prefix += 1;
            } else {
                jac[i][j] = jac[i][j].sub(&LaurentPoly::monomial(prefix - 1, 1));
                prefix -= 1;
            }
        }
    }
    // delete generator column 0; gcd over all (g−1)-row selections
    let cols: Vec<usize> = (1..g).collect();
    let k = g - 1;
    if r > 20 {
        return Err(Error::Validation(
            "fox oracle limited to 20 relators (minor enumeration)".into(),
        ));
    }
    let mut gcd = LaurentPoly::zero();
    for mask in 0u32..1 << r {
        if mask.count_ones() as usize != k {
            continue;
        }
        let rows: Vec<usize> = (0..r).filter(|&i| mask & (1 << i) != 0).collect();
        let minor: Vec<Vec<LaurentPoly>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| jac[i][j].clone()).collect())
            .collect();
        gcd = poly_gcd(&gcd, &det_up_to_unit(&minor));
        if gcd.is_one() {
            break;
        }
    }
    if gcd.is_zero() {
        return Err(Error::DegenerateMatrix(
            "all maximal minors of the Fox Jacobian vanish".into(),
        ));
    }
    let gcd = gcd.normalized();
    if gcd.eval(1).abs() != 1 {
        return Err(Error::Invariant(format!(
            "fox polynomial {gcd} violates Δ(1) = ±1"
        )));
    }
    Ok(gcd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotio::{braid_closure, bundled_census, mirror, parse_braid, parse_pd};

    fn poly(min: i64, coeffs: &[i64]) -> LaurentPoly {
        LaurentPoly::from_parts(min, coeffs.to_vec())
    }

    #[test]
    fn laurent_arithmetic() {
        let a = poly(0, &[1, 1]); // 1 + t
        let b = poly(0, &[1, -1]); // 1 − t
        assert_eq!(a.mul(&b), poly(0, &[1, 0, -1]));
        assert_eq!(a.add(&b), poly(0, &[2]));
        assert_eq!(a.sub(&a), LaurentPoly::zero());
        assert_eq!(a.shift(-1), poly(-1, &[1, 1]));
        assert_eq!(poly(-2, &[3, 0, 6]).content(), 3);
        assert_eq!(a.mul(&b).eval(1), 0);
        assert_eq!(poly(-1, &[1, 0, 1]).eval(-1), -2);
    }

    #[test]
    fn laurent_normalization() {
        // −2t⁻¹ + 2t: primitive positive-leading with min exponent 0
        assert_eq!(poly(-1, &[-2, 0, 2]).normalized(), poly(0, &[-1, 0, 1]));
        assert_eq!(poly(3, &[5]).normalized(), LaurentPoly::one());
        assert!(poly(-7, &[-1]).is_unit());
        assert!(!poly(0, &[2]).is_unit());
    }

    #[test]
    fn laurent_gcd() {
        let p = poly(0, &[1, -1, 1]); // t² − t + 1
        let q = poly(0, &[1, 1]); // t + 1
        let prod = p.mul(&q);
        assert_eq!(poly_gcd(&prod, &p.mul(&p)), p);
        assert_eq!(poly_gcd(&prod, &q.shift(5)), q);
        assert_eq!(poly_gcd(&p, &q), LaurentPoly::one());
        assert_eq!(poly_gcd(&LaurentPoly::zero(), &p.neg()), p);
    }

    #[test]
    fn laurent_display() {
        assert_eq!(poly(0, &[1, -1, 1]).to_string(), "1 - t + t^2");
        assert_eq!(poly(-1, &[-1, 3]).to_string(), "-t^-1 + 3");
        assert_eq!(poly(1, &[2]).to_string(), "2*t");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn unknot_invariants() {
        let d = parse_pd("PD[]").unwrap();
        assert!(alexander_polynomial(&d).unwrap().is_one());
        assert!(module_invariants(&d).unwrap().is_empty());
    }

    #[test]
    fn quandle_rows_sum_to_zero() {
        let d = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
        for row in quandle_matrix(&d) {
            let sum = row.iter().fold(LaurentPoly::zero(), |s, p| s.add(p));
            assert!(sum.is_zero());
        }
    }

    #[test]
    fn trefoil_alexander() {
        let d = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
        assert_eq!(alexander_polynomial(&d).unwrap(), poly(0, &[1, -1, 1]));
    }

    #[test]
    fn alexander_is_mirror_invariant() {
        let d = parse_pd("PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]").unwrap();
        let m = mirror(&d);
        assert_eq!(
            alexander_polynomial(&d).unwrap(),
            alexander_polynomial(&m).unwrap()
        );
    }

    #[test]
    fn census_alexander_matches_expected() {
        for entry in bundled_census() {
            let d = parse_pd(&entry.pd).unwrap();
            let a = alexander_polynomial(&d).unwrap();
            assert_eq!(
                a.to_wire(),
                entry.expected_alexander,
                "{}: got {a}",
                entry.name
            );
        }
    }

    #[test]
    fn trefoil_module_invariants() {
        let d = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
        let ladder = module_invariants(&d).unwrap();
        assert_eq!(ladder, vec![poly(0, &[1, -1, 1])]);
    }

    #[test]
    fn granny_module_invariants() {
        // granny knot: closure of (σ₁)³(σ₂)³, a connected sum of two
        // like-handed trefoils
        let d = braid_closure(&parse_braid("1 1 1 2 2 2").unwrap()).unwrap();
        let tref = poly(0, &[1, -1, 1]);
        let ladder = module_invariants(&d).unwrap();
        assert_eq!(ladder, vec![tref.mul(&tref), tref]);
    }
}
