//! Exact arithmetic for Galois fields GF(p^m), their additive characters, and
//! quadratic extensions GF(p^{2m}).
//!
//! Fields are represented by complete lookup tables, which is the right trade
//! for the dimensions this crate works in (d ≤ 256): every operation is a
//! table read, and the tables themselves are verified against the field axioms
//! at construction time. Element labels are integers in `[0, d)`; the p-ary
//! digits of a label (least-significant first) are the coordinates of the
//! element over the prime field, and addition acts componentwise on digits.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

/// Errors from field construction and arithmetic.
#[derive(Debug, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("supplied modulus is reducible over F_{p}")]
    ReducibleModulus { p: usize },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field order {0} exceeds the supported maximum of 256")]
    TooLarge(usize),
}

/// A prime power d = p^m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    pub p: usize,
    pub m: usize,
    pub d: usize,
}

impl PrimePower {
    pub fn new(p: usize, m: usize) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        assert!(m >= 1, "extension degree must be positive");
        let d = p
            .checked_pow(m as u32)
            .ok_or(FieldError::TooLarge(usize::MAX))?;
        if d > 256 {
            return Err(FieldError::TooLarge(d));
        }
        Ok(Self { p, m, d })
    }
}

/// Deterministic primality check by trial division (sufficient for p ≤ 256).
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// An element of a finite field, identified by its integer label in `[0, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FieldElement(pub usize);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Complete arithmetic tables for GF(p^m).
///
/// `add` and `mul` are d×d row-major label tables; `neg` and `inv` are
/// d-vectors (`inv[0]` is a sentinel and must never be read). `char_weights`
/// fixes the additive character: γ^x = exp(2πi·c(x)/p) with
/// c(x) = Σ_n weights[n]·digit_n(x) mod p. Directly built fields use the
/// digit-sum character (all weights 1); quadratic extensions weight only the
/// base-field digit block so that composite operators split over the two
/// subsystems (see [`QuadExtension`]).
#[derive(Debug, Clone)]
pub struct FieldTables {
    pub pp: PrimePower,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// Monic modulus polynomial (little-endian coefficients), when the field
    /// was built from one.
    pub modulus: Option<Vec<usize>>,
    /// Per-digit weights of the additive character functional.
    pub char_weights: Vec<usize>,
}

/// Serializable view of a field's tables.
#[derive(Debug, Serialize)]
pub struct FieldTablesExport {
    pub p: usize,
    pub m: usize,
    pub modulus: Vec<usize>,
    pub modulus_rule: &'static str,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

impl FieldTables {
    pub fn d(&self) -> usize {
        self.pp.d
    }

    pub fn p(&self) -> usize {
        self.pp.p
    }

    /// All elements in label order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.pp.d).map(FieldElement)
    }

    /// p-ary digits of a label, least-significant first.
    pub fn digits(&self, x: FieldElement) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.pp.m);
        let mut t = x.0;
        for _ in 0..self.pp.m {
            v.push(t % self.pp.p);
            t /= self.pp.p;
        }
        v
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.add[x.0 * self.pp.d + y.0] as usize)
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.mul[x.0 * self.pp.d + y.0] as usize)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.neg[x.0] as usize)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        if x.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FieldElement(self.inv[x.0] as usize))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// The element 1 ⊕ 1 (equals 0 in characteristic 2).
    pub fn two(&self) -> FieldElement {
        self.add(FieldElement::ONE, FieldElement::ONE)
    }

    /// The additive character value c(x) = Σ_n w_n·digit_n(x) mod p.
    pub fn char_value(&self, x: FieldElement) -> usize {
        self.weighted_digit_sum(x) % self.pp.p
    }

    /// Σ_n w_n·digit_n(x) as a plain integer (not reduced mod p).
    pub fn weighted_digit_sum(&self, x: FieldElement) -> usize {
        self.digits(x)
            .iter()
            .zip(&self.char_weights)
            .map(|(d, w)| d * w)
            .sum()
    }

    /// γ^x, or a fixed square-root branch of it when `half` is set.
    ///
    /// γ = exp(2πi/p). With `half`: for odd p the branch is γ^{x⊘2} (field
    /// division by 2 = 1⊕1); for p = 2 it is i^{s(x)} with s(x) the plain
    /// integer digit sum. Either way the result squares to γ^x.
    pub fn char_phase(&self, x: FieldElement, half: bool) -> Complex64 {
        let p = self.pp.p;
        if !half {
            return root_of_unity(p, self.char_value(x));
        }
        if p == 2 {
            quarter_phase(self.weighted_digit_sum(x) % 4)
        } else {
            let half_x = self
                .div(x, self.two())
                .expect("2 is invertible in odd characteristic");
            root_of_unity(p, self.char_value(half_x))
        }
    }

    /// Serializable export of the tables.
    pub fn export(&self) -> FieldTablesExport {
        let d = self.pp.d;
        let grid = |t: &[u16]| {
            (0..d)
                .map(|r| (0..d).map(|c| t[r * d + c] as usize).collect())
                .collect()
        };
        FieldTablesExport {
            p: self.pp.p,
            m: self.pp.m,
            modulus: self.modulus.clone().unwrap_or_default(),
            modulus_rule: "smallest monic irreducible by little-endian label order",
            add: grid(&self.add),
            mul: grid(&self.mul),
        }
    }
}

/// exp(2πi·k/p), exact for p = 2.
pub fn root_of_unity(p: usize, k: usize) -> Complex64 {
    let k = k % p;
    if p == 2 {
        return Complex64::new(if k == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64)
}

/// i^s for s in 0..4, exact.
pub fn quarter_phase(s: usize) -> Complex64 {
    match s % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

// Dense little-endian polynomial arithmetic over F_p, used only while
// constructing tables.
fn poly_trim(v: &mut Vec<usize>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(a: &[usize], b: &[usize], p: usize) -> Vec<usize> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0usize; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_rem(a: &[usize], m: &[usize], p: usize) -> Vec<usize> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let factor = (r[r.len() - 1] * lead_inv) % p;
        for (i, &mi) in m.iter().enumerate() {
            let idx = i + k;
            r[idx] = (r[idx] + p - (factor * mi) % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: usize, p: usize) -> usize {
    // p is prime and a ≠ 0 mod p
    let mut result = 1usize;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn is_irreducible(m: &[usize], p: usize) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for k in 1..=deg / 2 {
        let count = p.pow(k as u32);
        for enc in 0..count {
            let mut div = Vec::with_capacity(k + 1);
            let mut t = enc;
            for _ in 0..k {
                div.push(t % p);
                t /= p;
            }
            div.push(1);
            if poly_rem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn label_to_poly(label: usize, p: usize, m: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(m);
    let mut t = label;
    for _ in 0..m {
        v.push(t % p);
        t /= p;
    }
    poly_trim(&mut v);
    v
}

fn poly_to_label(poly: &[usize], p: usize) -> usize {
    poly.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Build the arithmetic tables of GF(p^m).
///
/// When no modulus is supplied, the monic irreducible polynomial with the
/// smallest little-endian label encoding of its lower coefficients is selected
/// by exhaustive search, so construction is deterministic. A supplied modulus
/// must be monic of degree m with coefficients in `[0, p)`.
#[allow(clippy::needless_range_loop)]
pub fn build_field(
    p: usize,
    m: usize,
    modulus: Option<&[usize]>,
) -> Result<FieldTables, FieldError> {
    let pp = PrimePower::new(p, m)?;
    let d = pp.d;

    let modulus: Vec<usize> = match modulus {
        Some(coeffs) => {
            if coeffs.len() != m + 1 {
                return Err(FieldError::InvalidModulus(format!(
                    "expected {} coefficients, got {}",
                    m + 1,
                    coeffs.len()
                )));
            }
            if coeffs.iter().any(|&c| c >= p) {
                return Err(FieldError::InvalidModulus(format!(
                    "coefficients must lie in [0, {p})"
                )));
            }
            if coeffs[m] != 1 {
                return Err(FieldError::InvalidModulus("modulus must be monic".into()));
            }
            if !is_irreducible(coeffs, p) {
                return Err(FieldError::ReducibleModulus { p });
            }
            coeffs.to_vec()
        }
        None => {
            // Lexicographic scan over the lower coefficients, encoded as a label.
            let mut found = None;
            for enc in 0..d {
                let mut cand = label_to_poly(enc, p, m);
                cand.resize(m, 0);
                cand.push(1);
                if is_irreducible(&cand, p) {
                    found = Some(cand);
                    break;
                }
            }
            found.expect("an irreducible monic polynomial of every degree exists over F_p")
        }
    };

    let mut add = vec![0u16; d * d];
    let mut mul = vec![0u16; d * d];
    let mut neg = vec![0u16; d];

    for x in 0..d {
        // Componentwise negation of digits.
        let mut t = x;
        let mut w = 1;
        let mut nx = 0;
        for _ in 0..m {
            let digit = t % p;
            nx += ((p - digit) % p) * w;
            w *= p;
            t /= p;
        }
        neg[x] = nx as u16;
    }

    for x in 0..d {
        for y in 0..d {
            // Addition: componentwise mod p on digits.
            let (mut tx, mut ty, mut w, mut s) = (x, y, 1usize, 0usize);
            for _ in 0..m {
                s += ((tx % p) + (ty % p)) % p * w;
                w *= p;
                tx /= p;
                ty /= p;
            }
            add[x * d + y] = s as u16;

            // Multiplication: polynomial product reduced by the modulus.
            let prod = poly_mul(&label_to_poly(x, p, m), &label_to_poly(y, p, m), p);
            let red = poly_rem(&prod, &modulus, p);
            mul[x * d + y] = poly_to_label(&red, p) as u16;
        }
    }

    let mut inv = vec![0u16; d];
    for x in 1..d {
        let z = (0..d)
            .find(|&z| mul[x * d + z] == 1)
            .expect("every nonzero element of a field has an inverse");
        inv[x] = z as u16;
    }

    Ok(FieldTables {
        pp,
        add,
        mul,
        neg,
        inv,
        modulus: Some(modulus),
        char_weights: vec![1; m],
    })
}

/// GF(d²) built over GF(d) by an irreducible quadratic t² − Q·t − R.
///
/// Extension elements are pairs (a, b) = a + b·t of base elements, stored at
/// label a + d·b, so the multiplicative identity keeps label 1 and addition
/// stays componentwise on p-ary digits. The extension's additive character
/// weights only the base-component digits: with that choice the composite
/// displacement and Wigner operators factor over the two d-dimensional
/// subsystems, with the t-component occupying the most significant digit
/// block (the left Kronecker factor).
#[derive(Debug, Clone)]
pub struct QuadExtension {
    pub base: FieldTables,
    pub ext: FieldTables,
    pub r: FieldElement,
    pub q: FieldElement,
}

impl QuadExtension {
    /// Label of the pair (a, b) = a + b·t.
    pub fn pair_to_elt(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 + self.base.d() * b.0)
    }

    /// The pair (a, b) of an extension label.
    pub fn elt_to_pair(&self, x: FieldElement) -> (FieldElement, FieldElement) {
        let d = self.base.d();
        (FieldElement(x.0 % d), FieldElement(x.0 / d))
    }
}

/// Construct the quadratic extension of a field.
///
/// The defining quadratic t² − Q·t − R is the first irreducible one in
/// lexicographic (R, Q) label order with R ≠ 0; the search always succeeds
/// over a finite field. All extension invariants (componentwise addition,
/// block products, R ≠ 0) are verified exhaustively before returning.
pub fn build_quadratic_extension(base: &FieldTables) -> QuadExtension {
    let (r, q) = find_irreducible_quadratic(base);
    build_extension_tables(base, r, q)
}

/// Quadratic extension with an explicitly chosen defining quadratic
/// t² − Q·t − R, which must be irreducible over the base field.
pub fn build_quadratic_extension_with(
    base: &FieldTables,
    r: FieldElement,
    q: FieldElement,
) -> Result<QuadExtension, FieldError> {
    if r == FieldElement::ZERO {
        return Err(FieldError::InvalidModulus("R must be nonzero".into()));
    }
    let has_root = base
        .elements()
        .any(|x| base.sub(base.sub(base.mul(x, x), base.mul(q, x)), r) == FieldElement::ZERO);
    if has_root {
        return Err(FieldError::ReducibleModulus { p: base.p() });
    }
    Ok(build_extension_tables(base, r, q))
}

fn build_extension_tables(base: &FieldTables, r: FieldElement, q: FieldElement) -> QuadExtension {
    let d = base.d();
    let dd = d * d;
    let pp = PrimePower {
        p: base.pp.p,
        m: 2 * base.pp.m,
        d: dd,
    };
    assert!(
        dd <= 256,
        "extension order {dd} exceeds the supported maximum"
    );

    let pair = |x: usize| (FieldElement(x % d), FieldElement(x / d));
    let unpair = |a: FieldElement, b: FieldElement| a.0 + d * b.0;

    let mut add = vec![0u16; dd * dd];
    let mut mul = vec![0u16; dd * dd];
    let mut neg = vec![0u16; dd];

    for x in 0..dd {
        let (xa, xb) = pair(x);
        neg[x] = unpair(base.neg(xa), base.neg(xb)) as u16;
        for y in 0..dd {
            let (ya, yb) = pair(y);
            add[x * dd + y] = unpair(base.add(xa, ya), base.add(xb, yb)) as u16;
            // (xa + xb t)(ya + yb t) with t² = Q t + R
            let cross = base.mul(xb, yb);
            let lo = base.add(base.mul(xa, ya), base.mul(cross, r));
            let hi = base.add(
                base.add(base.mul(xa, yb), base.mul(xb, ya)),
                base.mul(cross, q),
            );
            mul[x * dd + y] = unpair(lo, hi) as u16;
        }
    }

    let mut inv = vec![0u16; dd];
    for x in 1..dd {
        let z = (0..dd)
            .find(|&z| mul[x * dd + z] == 1)
            .expect("irreducible quadratic yields a field");
        inv[x] = z as u16;
    }

    let mut char_weights = base.char_weights.clone();
    char_weights.extend(std::iter::repeat_n(0, base.pp.m));

    let ext = FieldTables {
        pp,
        add,
        mul,
        neg,
        inv,
        modulus: None,
        char_weights,
    };

    let out = QuadExtension {
        base: base.clone(),
        ext,
        r,
        q,
    };
    verify_extension(&out);
    out
}

fn find_irreducible_quadratic(base: &FieldTables) -> (FieldElement, FieldElement) {
    for r in 1..base.d() {
        for q in 0..base.d() {
            let (r, q) = (FieldElement(r), FieldElement(q));
            // Irreducible iff x² − Qx − R has no root.
            let has_root = base.elements().any(|x| {
                base.sub(base.sub(base.mul(x, x), base.mul(q, x)), r) == FieldElement::ZERO
            });
            if !has_root {
                return (r, q);
            }
        }
    }
    unreachable!("an irreducible quadratic exists over every finite field")
}

fn verify_extension(qe: &QuadExtension) {
    let (b, e) = (&qe.base, &qe.ext);
    assert!(qe.r != FieldElement::ZERO, "R must be nonzero");
    for a1 in b.elements() {
        for a2 in b.elements() {
            let lhs = e.mul(
                qe.pair_to_elt(a1, FieldElement::ZERO),
                qe.pair_to_elt(a2, FieldElement::ZERO),
            );
            assert_eq!(lhs, qe.pair_to_elt(b.mul(a1, a2), FieldElement::ZERO));

            let lhs = e.mul(
                qe.pair_to_elt(a1, FieldElement::ZERO),
                qe.pair_to_elt(FieldElement::ZERO, a2),
            );
            assert_eq!(lhs, qe.pair_to_elt(FieldElement::ZERO, b.mul(a1, a2)));

            let lhs = e.mul(
                qe.pair_to_elt(FieldElement::ZERO, a1),
                qe.pair_to_elt(FieldElement::ZERO, a2),
            );
            let prod = b.mul(a1, a2);
            assert_eq!(lhs, qe.pair_to_elt(b.mul(prod, qe.r), b.mul(prod, qe.q)));

            for b1 in b.elements() {
                for b2 in b.elements() {
                    let lhs = e.add(qe.pair_to_elt(a1, b1), qe.pair_to_elt(a2, b2));
                    assert_eq!(lhs, qe.pair_to_elt(b.add(a1, a2), b.add(b1, b2)));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() < tol, "{a} vs {b}");
    }

    #[test]
    fn gf4_tables_match_the_published_ones() {
        let f = build_field(2, 2, None).unwrap();
        // Multiplication table of GF(4).
        let mul: Vec<Vec<usize>> = f.export().mul;
        assert_eq!(
            mul,
            vec![
                vec![0, 0, 0, 0],
                vec![0, 1, 2, 3],
                vec![0, 2, 3, 1],
                vec![0, 3, 1, 2],
            ]
        );
        // Addition table of GF(4): componentwise XOR.
        let add: Vec<Vec<usize>> = f.export().add;
        assert_eq!(
            add,
            vec![
                vec![0, 1, 2, 3],
                vec![1, 0, 3, 2],
                vec![2, 3, 0, 1],
                vec![3, 2, 1, 0],
            ]
        );
    }

    #[test]
    fn gf2_is_xor_and_and() {
        let f = build_field(2, 1, None).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(f.add(FieldElement(x), FieldElement(y)).0, x ^ y);
                assert_eq!(f.mul(FieldElement(x), FieldElement(y)).0, x & y);
            }
        }
    }

    fn check_field_axioms(f: &FieldTables) {
        let els: Vec<_> = f.elements().collect();
        for &x in &els {
            assert_eq!(f.add(x, FieldElement::ZERO), x);
            assert_eq!(f.mul(x, FieldElement::ONE), x);
            assert_eq!(f.add(x, f.neg(x)), FieldElement::ZERO);
            if x != FieldElement::ZERO {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElement::ONE);
            }
            for &y in &els {
                assert_eq!(f.add(x, y), f.add(y, x));
                assert_eq!(f.mul(x, y), f.mul(y, x));
                if x != FieldElement::ZERO && y != FieldElement::ZERO {
                    assert_ne!(f.mul(x, y), FieldElement::ZERO, "zero divisor");
                }
                for &z in &els {
                    assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                    assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    assert_eq!(
                        f.mul(x, f.add(y, z)),
                        f.add(f.mul(x, y), f.mul(x, z)),
                        "distributivity"
                    );
                }
            }
        }
    }

    #[test]
    fn axioms_hold_for_small_fields() {
        for (p, m) in [
            (2, 1),
            (3, 1),
            (2, 2),
            (5, 1),
            (7, 1),
            (2, 3),
            (3, 2),
            (11, 1),
            (13, 1),
            (2, 4),
        ] {
            let f = build_field(p, m, None).unwrap();
            check_field_axioms(&f);
        }
    }

    #[test]
    fn gf9_inverse_of_two() {
        let f = build_field(3, 2, None).unwrap();
        let two = FieldElement(2);
        let z = f.inv(two).unwrap();
        assert_eq!(f.mul(two, z), FieldElement::ONE);
        // cross-check by exhaustive search
        let brute = f.elements().find(|&w| f.mul(two, w) == FieldElement::ONE);
        assert_eq!(brute, Some(z));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            build_field(4, 1, None),
            Err(FieldError::NotPrime(4))
        ));
        assert!(matches!(
            build_field(6, 2, None),
            Err(FieldError::NotPrime(6))
        ));
        // t² + 1 factors over F_2
        assert!(matches!(
            build_field(2, 2, Some(&[1, 0, 1])),
            Err(FieldError::ReducibleModulus { .. })
        ));
        assert!(matches!(
            build_field(2, 2, Some(&[1, 1])),
            Err(FieldError::InvalidModulus(_))
        ));
        assert!(matches!(
            build_field(2, 9, None),
            Err(FieldError::TooLarge(_))
        ));
        let f = build_field(2, 2, None).unwrap();
        assert!(matches!(
            f.inv(FieldElement::ZERO),
            Err(FieldError::DivisionByZero)
        ));
        assert!(matches!(
            f.div(FieldElement(2), FieldElement::ZERO),
            Err(FieldError::DivisionByZero)
        ));
    }

    #[test]
    fn character_at_zero_is_one() {
        let f = build_field(2, 1, None).unwrap();
        assert_close(
            f.char_phase(FieldElement::ZERO, false),
            Complex64::new(1.0, 0.0),
            1e-15,
        );
    }

    #[test]
    fn half_character_squares_to_character() {
        for (p, m) in [(2, 1), (2, 2), (3, 1), (2, 3), (3, 2), (5, 1), (7, 1)] {
            let f = build_field(p, m, None).unwrap();
            for x in f.elements() {
                let h = f.char_phase(x, true);
                assert_close(h * h, f.char_phase(x, false), 1e-12);
            }
        }
    }

    #[test]
    fn gf2_half_character_is_i() {
        let f = build_field(2, 1, None).unwrap();
        assert_close(
            f.char_phase(FieldElement::ONE, true),
            Complex64::new(0.0, 1.0),
            1e-15,
        );
    }

    #[test]
    fn character_sum_identity() {
        // Σ_j γ^{j⊙i} = d·δ_{i,0}, for every prime power d ≤ 16
        for (p, m) in [
            (2, 1),
            (3, 1),
            (2, 2),
            (5, 1),
            (7, 1),
            (2, 3),
            (3, 2),
            (11, 1),
            (13, 1),
            (2, 4),
        ] {
            let f = build_field(p, m, None).unwrap();
            for i in f.elements() {
                let sum: Complex64 = f.elements().map(|j| f.char_phase(f.mul(j, i), false)).sum();
                let expected = if i == FieldElement::ZERO {
                    Complex64::new(f.d() as f64, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert_close(sum, expected, 1e-12);
            }
        }
    }

    #[test]
    fn character_additivity() {
        // γ^i·γ^j = γ^{i⊕j}, for every prime power d ≤ 16
        for (p, m) in [
            (2, 1),
            (3, 1),
            (2, 2),
            (5, 1),
            (7, 1),
            (2, 3),
            (3, 2),
            (11, 1),
            (13, 1),
            (2, 4),
        ] {
            let f = build_field(p, m, None).unwrap();
            for i in f.elements() {
                for j in f.elements() {
                    assert_close(
                        f.char_phase(i, false) * f.char_phase(j, false),
                        f.char_phase(f.add(i, j), false),
                        1e-12,
                    );
                }
            }
        }
    }

    #[test]
    fn quadratic_extension_of_gf3() {
        let base = build_field(3, 1, None).unwrap();
        let qe = build_quadratic_extension(&base);
        assert_eq!(qe.ext.d(), 9);
        check_field_axioms(&qe.ext);
        // the extended inverse of 2 = (2, 0) is (2⁻¹, 0)
        let two = qe.pair_to_elt(FieldElement(2), FieldElement::ZERO);
        let inv2_base = base.inv(FieldElement(2)).unwrap();
        assert_eq!(
            qe.ext.inv(two).unwrap(),
            qe.pair_to_elt(inv2_base, FieldElement::ZERO)
        );
    }

    #[test]
    fn quadratic_extension_of_gf2_has_zero_two() {
        let base = build_field(2, 1, None).unwrap();
        let qe = build_quadratic_extension(&base);
        let one = qe.pair_to_elt(FieldElement::ONE, FieldElement::ZERO);
        assert_eq!(qe.ext.add(one, one), FieldElement::ZERO);
        check_field_axioms(&qe.ext);
    }

    #[test]
    fn quadratic_extension_of_gf4_and_gf5() {
        for (p, m) in [(2, 2), (5, 1)] {
            let base = build_field(p, m, None).unwrap();
            let qe = build_quadratic_extension(&base);
            assert_eq!(qe.ext.d(), base.d() * base.d());
            check_field_axioms(&qe.ext);
        }
    }

    #[test]
    fn extension_character_weights_base_block_only() {
        let base = build_field(3, 1, None).unwrap();
        let qe = build_quadratic_extension(&base);
        // character of (a, b) depends only on a
        for a in base.elements() {
            for b in base.elements() {
                let x = qe.pair_to_elt(a, b);
                assert_close(
                    qe.ext.char_phase(x, false),
                    base.char_phase(a, false),
                    1e-12,
                );
            }
        }
    }
}
