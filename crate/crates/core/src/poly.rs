//! Polynomials over F_q in the variable T: the ring A = F_q[T].
//!
//! Coefficients are little-endian (index = degree) with no trailing zeros;
//! the zero polynomial is the empty coefficient vector. Every polynomial
//! carries its field configuration, so arithmetic is self-contained.
//!
//! # Conventions
//! - Text format: sparse sums like `T^3+2*T+1`, coefficients as integer
//!   literals (see the field module for how literals denote elements).
//!   Display emits descending-degree terms joined by `+`; parse accepts
//!   `-` as field negation of the following coefficient.
//! - Canonical order on polynomials: degree first, then coefficient
//!   indices compared from the top degree down (used for canonical orbit
//!   representatives).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::fq::{FqConfig, FqElem};
use crate::{Error, Result};

/// Cap on exponents accepted by the text parsers. Generous for every real
/// input here (degrees stay below ~50); keeps hostile inputs from forcing
/// huge dense allocations.
pub(crate) const MAX_PARSE_EXPONENT: i64 = 4096;

/// A polynomial in F_q[T].
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    fq: FqConfig,
    coeffs: Vec<FqElem>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero(fq: &FqConfig) -> Poly {
        Poly {
            fq: fq.clone(),
            coeffs: Vec::new(),
        }
    }

    /// The constant polynomial 1.
    pub fn one(fq: &FqConfig) -> Poly {
        Poly::constant(fq, FqElem::one())
    }

    /// The variable T.
    pub fn t(fq: &FqConfig) -> Poly {
        Poly::from_coeffs(fq, vec![FqElem::zero(), FqElem::one()])
    }

    /// A constant polynomial.
    pub fn constant(fq: &FqConfig, c: FqElem) -> Poly {
        Poly::from_coeffs(fq, vec![c])
    }

    /// Build from little-endian coefficients, trimming trailing zeros.
    pub fn from_coeffs(fq: &FqConfig, mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last() == Some(&FqElem::zero()) {
            coeffs.pop();
        }
        Poly {
            fq: fq.clone(),
            coeffs,
        }
    }

    /// Build from integer literals per coefficient (little-endian).
    pub fn from_int_coeffs(fq: &FqConfig, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(fq, coeffs.iter().map(|&c| fq.from_int(c)).collect())
    }

    /// The owning field configuration.
    pub fn fq(&self) -> &FqConfig {
        &self.fq
    }

    /// Little-endian coefficients (no trailing zeros).
    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    /// Coefficient of T^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FqElem::one()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient (zero polynomial has none).
    pub fn leading_coeff(&self) -> Option<FqElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == Some(FqElem::one())
    }

    fn assert_same_field(&self, other: &Poly) {
        assert!(
            self.fq == other.fq,
            "polynomial arithmetic across different field configurations"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.fq.add(self.coeff(i), other.coeff(i)));
        }
        Poly::from_coeffs(&self.fq, out)
    }

    pub fn neg(&self) -> Poly {
        Poly::from_coeffs(
            &self.fq,
            self.coeffs.iter().map(|&c| self.fq.neg(c)).collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_same_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.fq);
        }
        let mut out = vec![FqElem::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.fq.add(out[i + j], self.fq.mul(a, b));
            }
        }
        Poly::from_coeffs(&self.fq, out)
    }

    pub fn mul_scalar(&self, c: FqElem) -> Poly {
        Poly::from_coeffs(
            &self.fq,
            self.coeffs.iter().map(|&a| self.fq.mul(a, c)).collect(),
        )
    }

    /// Multiply by T^k.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![FqElem::zero(); k];
        out.extend_from_slice(&self.coeffs);
        Poly::from_coeffs(&self.fq, out)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.fq);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division: self = q * divisor + r with deg r < deg divisor.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.assert_same_field(divisor);
        if divisor.is_zero() {
            return Err(Error::ZeroInput);
        }
        let dd = divisor.degree().unwrap();
        let dlead_inv = self.fq.inv(divisor.leading_coeff().unwrap())?;
        // Invariant: rem has no trailing zero coefficient.
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FqElem::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() >= dd + 1 {
            let shift = rem.len() - 1 - dd;
            let factor = self.fq.mul(*rem.last().unwrap(), dlead_inv);
            quot[shift] = factor;
            for (k, &dk) in divisor.coeffs.iter().enumerate() {
                rem[shift + k] = self.fq.sub(rem[shift + k], self.fq.mul(factor, dk));
            }
            debug_assert_eq!(rem.last(), Some(&FqElem::zero()));
            while rem.last() == Some(&FqElem::zero()) {
                rem.pop();
            }
        }
        Ok((
            Poly::from_coeffs(&self.fq, quot),
            Poly::from_coeffs(&self.fq, rem),
        ))
    }

    /// Remainder of Euclidean division.
    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Monic greatest common divisor (gcd(0,0) = 0).
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.assert_same_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic_associate()
    }

    /// The monic scalar multiple (zero maps to zero).
    pub fn monic_associate(&self) -> Poly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(l) => self.mul_scalar(self.fq.inv(l).expect("nonzero leading coefficient")),
        }
    }

    /// True iff self and other generate the same ideal (associates).
    pub fn is_associate(&self, other: &Poly) -> bool {
        self.monic_associate() == other.monic_associate()
    }

    /// Degree-then-lexicographic comparison: lower degree first; at equal
    /// degree, compare coefficient indices from the top degree down.
    pub fn cmp_deg_lex(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| {
                for i in (0..self.coeffs.len()).rev() {
                    let c = self.coeffs[i].index().cmp(&other.coeffs[i].index());
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            })
    }

    /// Parse the sparse text format (variable `T`).
    pub fn parse(fq: &FqConfig, text: &str) -> Result<Poly> {
        let terms = parse_sparse_terms(text, "T")?;
        let mut out = Poly::zero(fq);
        for (exp, c) in terms {
            if exp < 0 {
                return Err(Error::Parse(format!(
                    "negative exponent {exp} in a polynomial"
                )));
            }
            let coeff = reduce_literal(fq, c);
            let term = Poly::constant(fq, coeff).shift_up(exp as usize);
            out = out.add(&term);
        }
        Ok(out)
    }
}

/// Reduce a (possibly huge or negative) integer literal into F_q per the
/// literal convention in the field module.
pub(crate) fn reduce_literal(fq: &FqConfig, c: i128) -> FqElem {
    let q = i128::from(fq.q());
    if c >= 0 {
        fq.from_int((c % q) as i64)
    } else {
        fq.from_int(-((-c % q) as i64))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            if i == 0 {
                write!(f, "{}", c.index())?;
            } else if c == FqElem::one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", c.index())?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// True iff f is irreducible over F_q.
///
/// Uses the Frobenius-based irreducibility criterion: with n = deg f,
/// f is irreducible iff T^{q^n} = T mod f and, for every prime divisor
/// l of n, gcd(T^{q^{n/l}} - T, f) = 1. Frobenius iterates are computed
/// by repeated exponentiation by q mod f, so the cost is polynomial in
/// deg f. Cross-checked against exhaustive trial division in the tests.
pub fn is_prime_poly(f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = f.degree().unwrap();
    if n == 0 {
        return Ok(false); // units are not prime
    }
    let fq = f.fq().clone();
    let q = u64::from(fq.q());
    let t = Poly::t(&fq);

    let pow_mod = |base: &Poly, mut e: u64, m: &Poly| -> Poly {
        let mut acc = Poly::one(&fq);
        let mut b = base.rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).rem(m).expect("nonzero modulus");
            }
            b = b.mul(&b).rem(m).expect("nonzero modulus");
            e >>= 1;
        }
        acc
    };

    // frob[i] = T^{q^i} mod f, built by iterating x -> x^q mod f.
    let mut frob = Vec::with_capacity(n + 1);
    frob.push(t.rem(f)?);
    for _ in 0..n {
        let next = pow_mod(frob.last().unwrap(), q, f);
        frob.push(next);
    }
    if frob[n] != t.rem(f)? {
        return Ok(false);
    }
    let mut primes = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for l in primes {
        let g = frob[n / l].sub(&t).gcd(f);
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// |f| = q^{deg f}, the absolute norm of the ideal (f).
pub fn absolute_norm(f: &Poly) -> Result<BigInt> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(BigInt::from(f.fq().q()).pow(f.degree().unwrap() as u32))
}

/// All monic polynomials of exactly the given degree, in deg-lex order.
pub fn monic_polys_of_degree(fq: &FqConfig, deg: usize) -> Vec<Poly> {
    let mut out = Vec::new();
    let q = fq.q() as u64;
    let count = q.pow(deg as u32);
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(deg + 1);
        let mut t = idx;
        for _ in 0..deg {
            coeffs.push(FqElem((t % q) as u32));
            t /= q;
        }
        coeffs.push(FqElem::one());
        out.push(Poly::from_coeffs(fq, coeffs));
    }
    out.sort_by(|a, b| a.cmp_deg_lex(b));
    out
}

/// All polynomials of degree < bound (including zero), in deg-lex order.
pub fn polys_of_degree_below(fq: &FqConfig, bound: usize) -> Vec<Poly> {
    let q = fq.q() as u64;
    let count = q.pow(bound as u32);
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(bound);
        let mut t = idx;
        for _ in 0..bound {
            coeffs.push(FqElem((t % q) as u32));
            t /= q;
        }
        out.push(Poly::from_coeffs(fq, coeffs));
    }
    out.sort_by(|a, b| a.cmp_deg_lex(b));
    out
}

/// Parse a sparse polynomial-style sum in the named variable, returning
/// (exponent, signed integer coefficient) pairs. Accepts whitespace,
/// leading sign, `c`, `v`, `v^k`, `c*v`, `c*v^k`; exponent may be negative
/// (callers reject that where it is not meaningful). Repeated exponents
/// accumulate.
pub(crate) fn parse_sparse_terms(text: &str, var: &str) -> Result<Vec<(i64, i128)>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial text".into()));
    }
    let bytes = compact.as_bytes();
    let mut terms = Vec::new();
    let mut pos = 0usize;
    let mut sign: i128 = 1;
    // Optional leading sign.
    if bytes[0] == b'+' {
        pos = 1;
    } else if bytes[0] == b'-' {
        sign = -1;
        pos = 1;
    }
    loop {
        if pos >= bytes.len() {
            return Err(Error::Parse("dangling operator in polynomial text".into()));
        }
        // ---- one term ----
        let mut coeff: Option<i128> = None;
        let mut exp: Option<i64> = None;
        // Integer factor?
        if bytes[pos].is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let lit: i128 = compact[start..pos]
                .parse()
                .map_err(|_| Error::Parse("integer literal out of range".into()))?;
            coeff = Some(lit);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                if pos >= bytes.len() {
                    return Err(Error::Parse("dangling `*` in polynomial text".into()));
                }
            } else if pos < bytes.len() && compact[pos..].starts_with(var) {
                return Err(Error::Parse(
                    "missing `*` between coefficient and variable".into(),
                ));
            }
        }
        // Variable factor?
        if pos < bytes.len() && compact[pos..].starts_with(var) {
            pos += var.len();
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let mut esign: i64 = 1;
                if pos < bytes.len() && bytes[pos] == b'-' {
                    esign = -1;
                    pos += 1;
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(Error::Parse("missing exponent after `^`".into()));
                }
                let mag: i64 = compact[start..pos]
                    .parse()
                    .map_err(|_| Error::Parse("exponent out of range".into()))?;
                if mag > MAX_PARSE_EXPONENT {
                    return Err(Error::Budget(format!(
                        "exponent {mag} exceeds the parser bound {MAX_PARSE_EXPONENT}"
                    )));
                }
                exp = Some(esign * mag);
            } else {
                exp = Some(1);
            }
        } else if coeff.is_none() {
            return Err(Error::Parse(format!(
                "expected a term at offset {pos} in {compact:?}"
            )));
        }
        terms.push((exp.unwrap_or(0), sign * coeff.unwrap_or(1)));
        // ---- separator ----
        if pos >= bytes.len() {
            break;
        }
        match bytes[pos] {
            b'+' => {
                sign = 1;
                pos += 1;
            }
            b'-' => {
                sign = -1;
                pos += 1;
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {:?} at offset {pos}",
                    other as char
                )))
            }
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FqConfig {
        FqConfig::prime_field(2).unwrap()
    }

    fn f3() -> FqConfig {
        FqConfig::prime_field(3).unwrap()
    }

    #[test]
    fn parse_display_roundtrip() {
        let cases = [
            ("q=3", "T^3+2*T+1"),
            ("q=2", "T^2+T+1"),
            ("q=2", "T"),
            ("q=3", "2*T^2+2"),
            ("q=2", "0"),
            ("q=4;modulus=x^2+x+1", "3*T^2+2*T+1"),
        ];
        for (cfg, text) in cases {
            let fq = FqConfig::parse(cfg).unwrap();
            let p = Poly::parse(&fq, text).unwrap();
            assert_eq!(p.to_string(), text);
            assert_eq!(Poly::parse(&fq, &p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn parse_reduces_and_negates() {
        let fq = f3();
        // 4*T = T, and -T = 2*T over F_3.
        assert_eq!(Poly::parse(&fq, "4*T").unwrap().to_string(), "T");
        assert_eq!(Poly::parse(&fq, "-T").unwrap().to_string(), "2*T");
        assert_eq!(Poly::parse(&fq, "T^2 - 1").unwrap().to_string(), "T^2+2");
        // Repeated exponents accumulate: T + T = 2T.
        assert_eq!(Poly::parse(&fq, "T+T").unwrap().to_string(), "2*T");
    }

    #[test]
    fn parse_rejects_malformed() {
        let fq = f2();
        for bad in ["", "T^", "T^^2", "2T", "T+", "x^2", "T^-1", "*T", "T^5000"] {
            assert!(Poly::parse(&fq, bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn irreducibility_known_cases() {
        let fq2 = f2();
        let fq3 = f3();
        let t = Poly::t(&fq2);
        assert!(is_prime_poly(&t).unwrap());
        assert!(is_prime_poly(&Poly::parse(&fq2, "T^2+T+1").unwrap()).unwrap());
        assert!(!is_prime_poly(&Poly::parse(&fq2, "T^2+1").unwrap()).unwrap());
        assert!(is_prime_poly(&Poly::parse(&fq3, "T^2+1").unwrap()).unwrap());
        assert!(is_prime_poly(&Poly::parse(&fq2, "T^3+T+1").unwrap()).unwrap());
        assert!(!is_prime_poly(&Poly::parse(&fq2, "T^2").unwrap()).unwrap());
        assert!(!is_prime_poly(&Poly::one(&fq2)).unwrap());
        assert!(is_prime_poly(&Poly::zero(&fq2)).is_err());
    }

    #[test]
    fn norm_known_values() {
        let fq2 = f2();
        let fq3 = f3();
        assert_eq!(absolute_norm(&Poly::t(&fq2)).unwrap(), BigInt::from(2));
        assert_eq!(
            absolute_norm(&Poly::parse(&fq2, "T^2+T+1").unwrap()).unwrap(),
            BigInt::from(4)
        );
        assert_eq!(absolute_norm(&Poly::t(&fq3)).unwrap(), BigInt::from(3));
        assert!(absolute_norm(&Poly::zero(&fq2)).is_err());
    }

    #[test]
    fn division_and_gcd() {
        let fq = f3();
        let a = Poly::parse(&fq, "T^4+2*T^2+T+1").unwrap();
        let b = Poly::parse(&fq, "T^2+1").unwrap();
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));

        // Cofactors are coprime: T^2+1 is irreducible over F_3 and the
        // other factor has degree 1.
        let g = Poly::parse(&fq, "T+1").unwrap();
        let x = g.mul(&Poly::parse(&fq, "T^2+1").unwrap());
        let y = g.mul(&Poly::parse(&fq, "T+2").unwrap());
        assert_eq!(x.gcd(&y), g);
        assert!(x.gcd(&y).is_monic());
    }

    #[test]
    fn monic_associate_and_order() {
        let fq = f3();
        let p = Poly::parse(&fq, "2*T+1").unwrap();
        assert_eq!(p.monic_associate().to_string(), "T+2");
        assert!(p.is_associate(&p.monic_associate()));

        // deg-lex: 0 < 1 < 2 < T < T+1 ... and degree dominates.
        let smaller = Poly::parse(&fq, "2*T+2").unwrap();
        let bigger = Poly::parse(&fq, "T^2").unwrap();
        assert_eq!(smaller.cmp_deg_lex(&bigger), Ordering::Less);
        let (a, b) = (
            Poly::parse(&fq, "T+2").unwrap(),
            Poly::parse(&fq, "2*T").unwrap(),
        );
        assert_eq!(a.cmp_deg_lex(&b), Ordering::Less);
    }

    #[test]
    fn enumeration_counts() {
        let fq = f2();
        assert_eq!(monic_polys_of_degree(&fq, 2).len(), 4);
        assert_eq!(polys_of_degree_below(&fq, 2).len(), 4);
        assert_eq!(polys_of_degree_below(&fq, 0), vec![Poly::zero(&fq)]);
        let fq3 = f3();
        assert_eq!(monic_polys_of_degree(&fq3, 0), vec![Poly::one(&fq3)]);
        assert_eq!(monic_polys_of_degree(&fq3, 3).len(), 27);
    }
}
