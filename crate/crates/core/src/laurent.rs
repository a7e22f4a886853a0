//! Truncated Laurent series over F_q in the uniformizer pi = 1/T: the
//! local field K_inf = F_q((pi)) at the place at infinity.
//!
//! Values carry explicit precision. A precision of `At(k)` means terms at
//! exponent >= k are unknown; `Exact` means every term is known (the value
//! is a finite sum, e.g. the image of a polynomial). Arithmetic tracks
//! precision pessimistically, and any read beyond the known precision is
//! a hard error — there is no silent truncation anywhere.
//!
//! # Conventions
//! - The polynomial T maps to pi^{-1}; v(T) = -1 and |T| = q.
//! - Text format: sparse sums in `pi` with integer exponents, optionally
//!   suffixed by `;prec=k`, e.g. `pi^-1+pi^2;prec=8`. Display emits terms
//!   in ascending exponent order.
//! - Stored coefficients are canonical: no leading or trailing zeros, and
//!   nothing at or above the precision bound.

use std::fmt;

use crate::fq::{FqConfig, FqElem};
use crate::poly::Poly;
use crate::{Error, Result};

/// Precision of a Laurent value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Prec {
    /// All terms known (finite exact value).
    Exact,
    /// Terms at exponent >= the bound are unknown.
    At(i64),
}

impl Prec {
    /// The numeric bound, or None for exact values.
    pub fn bound(self) -> Option<i64> {
        match self {
            Prec::Exact => None,
            Prec::At(k) => Some(k),
        }
    }

    fn min(self, other: Prec) -> Prec {
        match (self.bound(), other.bound()) {
            (None, None) => Prec::Exact,
            (Some(a), None) => Prec::At(a),
            (None, Some(b)) => Prec::At(b),
            (Some(a), Some(b)) => Prec::At(a.min(b)),
        }
    }

    fn shifted(self, delta: i64) -> Prec {
        match self {
            Prec::Exact => Prec::Exact,
            Prec::At(k) => Prec::At(k + delta),
        }
    }

    /// True iff terms at the given exponent are known.
    fn knows(self, exponent: i64) -> bool {
        match self {
            Prec::Exact => true,
            Prec::At(k) => exponent < k,
        }
    }
}

/// The valuation of a Laurent value, as far as its precision can tell.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    /// Nonzero value with this pi-adic valuation.
    Finite(i64),
    /// Exactly zero.
    Infinite,
    /// Zero modulo pi^k for the given k, with unknown terms beyond.
    Undetermined(i64),
}

/// A Laurent series over F_q in pi with explicit precision.
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    fq: FqConfig,
    /// Exponent of coeffs[0]. Canonically 0 when coeffs is empty.
    valuation: i64,
    coeffs: Vec<FqElem>,
    prec: Prec,
}

impl Laurent {
    /// Build from a coefficient run starting at the given exponent,
    /// truncating to the precision and normalizing.
    pub fn from_terms(fq: &FqConfig, start: i64, coeffs: Vec<FqElem>, prec: Prec) -> Laurent {
        Laurent {
            fq: fq.clone(),
            valuation: start,
            coeffs,
            prec,
        }
        .normalized()
    }

    fn normalized(mut self) -> Laurent {
        if let Prec::At(k) = self.prec {
            let keep = (k - self.valuation).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last() == Some(&FqElem::zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self
            .coeffs
            .iter()
            .take_while(|c| c.is_zero())
            .count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.valuation += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.valuation = 0;
        }
        self
    }

    /// The exact zero.
    pub fn zero(fq: &FqConfig) -> Laurent {
        Laurent::from_terms(fq, 0, Vec::new(), Prec::Exact)
    }

    /// A value known only to be divisible by pi^k (zero mod pi^k).
    pub fn zero_mod(fq: &FqConfig, k: i64) -> Laurent {
        Laurent::from_terms(fq, 0, Vec::new(), Prec::At(k))
    }

    /// The exact constant 1.
    pub fn one(fq: &FqConfig) -> Laurent {
        Laurent::constant(fq, FqElem::one())
    }

    /// An exact constant.
    pub fn constant(fq: &FqConfig, c: FqElem) -> Laurent {
        Laurent::from_terms(fq, 0, vec![c], Prec::Exact)
    }

    /// The exact monomial pi^k.
    pub fn pi_pow(fq: &FqConfig, k: i64) -> Laurent {
        Laurent::from_terms(fq, k, vec![FqElem::one()], Prec::Exact)
    }

    /// Image of a polynomial in T under T -> pi^{-1} (exact).
    pub fn from_poly(p: &Poly) -> Laurent {
        let coeffs: Vec<FqElem> = p.coeffs().iter().rev().copied().collect();
        let start = -(p.degree().unwrap_or(0) as i64);
        Laurent::from_terms(p.fq(), start, coeffs, Prec::Exact)
    }

    pub fn fq(&self) -> &FqConfig {
        &self.fq
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    /// True iff the value is exactly zero (not merely zero mod precision).
    pub fn is_exactly_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec == Prec::Exact
    }

    /// True iff all known terms vanish.
    pub fn is_zero_within_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The valuation, as far as precision permits.
    pub fn valuation(&self) -> Valuation {
        if self.coeffs.is_empty() {
            match self.prec {
                Prec::Exact => Valuation::Infinite,
                Prec::At(k) => Valuation::Undetermined(k),
            }
        } else {
            Valuation::Finite(self.valuation)
        }
    }

    /// Largest exponent with a known (possibly zero) coefficient; None if
    /// no coefficient is stored.
    fn stored_end(&self) -> i64 {
        self.valuation + self.coeffs.len() as i64
    }

    /// A lower bound for the valuation; None means +infinity (exact zero).
    fn val_lower_bound(&self) -> Option<i64> {
        match self.valuation() {
            Valuation::Finite(v) => Some(v),
            Valuation::Undetermined(k) => Some(k),
            Valuation::Infinite => None,
        }
    }

    fn coeff_raw(&self, exponent: i64) -> FqElem {
        if exponent < self.valuation || exponent >= self.stored_end() {
            FqElem::zero()
        } else {
            self.coeffs[(exponent - self.valuation) as usize]
        }
    }

    /// Coefficient of pi^exponent; reading at or beyond the precision
    /// bound is an error.
    pub fn coeff(&self, exponent: i64) -> Result<FqElem> {
        if !self.prec.knows(exponent) {
            return Err(Error::InsufficientPrecision(format!(
                "coefficient of pi^{exponent} requested, precision is {:?}",
                self.prec
            )));
        }
        Ok(self.coeff_raw(exponent))
    }

    fn assert_same_field(&self, other: &Laurent) {
        assert!(
            self.fq == other.fq,
            "Laurent arithmetic across different field configurations"
        );
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        self.assert_same_field(other);
        let prec = self.prec.min(other.prec);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return Laurent::from_terms(&self.fq, 0, Vec::new(), prec);
        }
        let start = self.valuation.min(other.valuation);
        let mut end = self.stored_end().max(other.stored_end());
        if let Prec::At(k) = prec {
            end = end.min(k);
        }
        let mut coeffs = Vec::new();
        for e in start..end {
            coeffs.push(self.fq.add(self.coeff_raw(e), other.coeff_raw(e)));
        }
        Laurent::from_terms(&self.fq, start, coeffs, prec)
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            fq: self.fq.clone(),
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|&c| self.fq.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        self.assert_same_field(other);
        // Exact zero annihilates regardless of the other precision.
        if self.is_exactly_zero() || other.is_exactly_zero() {
            return Laurent::zero(&self.fq);
        }
        let prec = match (self.prec.bound(), other.prec.bound()) {
            (None, None) => Prec::Exact,
            (pa, pb) => {
                // Unknown tail of one factor enters at its precision bound
                // plus the valuation lower bound of the other factor.
                let va = self.val_lower_bound().expect("not exactly zero");
                let vb = other.val_lower_bound().expect("not exactly zero");
                let mut bound = i64::MAX;
                if let Some(pa) = pa {
                    bound = bound.min(pa + vb);
                }
                if let Some(pb) = pb {
                    bound = bound.min(pb + va);
                }
                Prec::At(bound)
            }
        };
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Laurent::from_terms(&self.fq, 0, Vec::new(), prec);
        }
        let mut coeffs = vec![FqElem::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = self.fq.add(coeffs[i + j], self.fq.mul(a, b));
            }
        }
        Laurent::from_terms(&self.fq, self.valuation + other.valuation, coeffs, prec)
    }

    pub fn mul_scalar(&self, c: FqElem) -> Laurent {
        Laurent::from_terms(
            &self.fq,
            self.valuation,
            self.coeffs.iter().map(|&a| self.fq.mul(a, c)).collect(),
            self.prec,
        )
    }

    /// Multiply by pi^k.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent {
            fq: self.fq.clone(),
            valuation: if self.coeffs.is_empty() { 0 } else { self.valuation + k },
            coeffs: self.coeffs.clone(),
            prec: self.prec.shifted(k),
        }
    }

    /// Multiplicative inverse, computed out to the target precision.
    ///
    /// Errors: exact zero input; input indistinguishable from zero at its
    /// precision; input precision insufficient to pin the result down to
    /// the target (the recurrence reads exactly the coefficients whose
    /// perturbation would move the inverse below the target).
    pub fn inv(&self, target: i64) -> Result<Laurent> {
        let v = match self.valuation() {
            Valuation::Infinite => return Err(Error::ZeroInput),
            Valuation::Undetermined(k) => {
                return Err(Error::InsufficientPrecision(format!(
                    "cannot invert a value that is zero mod pi^{k}"
                )))
            }
            Valuation::Finite(v) => v,
        };
        let n = target + v; // number of result coefficients, exponents -v .. -v+n-1
        if n <= 0 {
            return Ok(Laurent::from_terms(&self.fq, 0, Vec::new(), Prec::At(target)));
        }
        let n = n as usize;
        let a0 = self.coeff(v)?;
        let a0_inv = self.fq.inv(a0)?;
        let mut b = Vec::with_capacity(n);
        b.push(a0_inv);
        for k in 1..n {
            let mut acc = FqElem::zero();
            for i in 1..=k {
                let ai = self.coeff(v + i as i64)?;
                acc = self.fq.add(acc, self.fq.mul(ai, b[k - i]));
            }
            b.push(self.fq.neg(self.fq.mul(a0_inv, acc)));
        }
        Ok(Laurent::from_terms(&self.fq, -v, b, Prec::At(target)))
    }

    /// self / divisor, computed out to the target precision.
    pub fn div(&self, divisor: &Laurent, target: i64) -> Result<Laurent> {
        self.assert_same_field(divisor);
        if self.is_exactly_zero() {
            // 0 / x = 0 exactly (division by zero still rejected).
            if matches!(divisor.valuation(), Valuation::Infinite) {
                return Err(Error::ZeroInput);
            }
            return Ok(Laurent::zero(&self.fq));
        }
        let va = self.val_lower_bound().expect("not exactly zero");
        let inv = divisor.inv(target - va)?;
        self.mul(&inv).truncate(target)
    }

    /// Restrict the precision to At(k). Errors if the value does not
    /// actually know its terms below k.
    pub fn truncate(&self, k: i64) -> Result<Laurent> {
        if let Prec::At(have) = self.prec {
            if have < k {
                return Err(Error::InsufficientPrecision(format!(
                    "cannot truncate to pi^{k}: precision is only pi^{have}"
                )));
            }
        }
        Ok(Laurent::from_terms(
            &self.fq,
            self.valuation,
            self.coeffs.clone(),
            Prec::At(k),
        ))
    }

    /// The exact finite sum of all terms below pi^k — the canonical
    /// representative of this value mod pi^k. Requires precision >= k.
    pub fn representative_mod(&self, k: i64) -> Result<Laurent> {
        if let Prec::At(have) = self.prec {
            if have < k {
                return Err(Error::InsufficientPrecision(format!(
                    "representative mod pi^{k} needs precision {k}, have {have}"
                )));
            }
        }
        let mut coeffs = self.coeffs.clone();
        let keep = (k - self.valuation).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        Ok(Laurent::from_terms(&self.fq, self.valuation, coeffs, Prec::Exact))
    }

    /// Parse the text format `<sparse sum in pi>[;prec=<int>]`.
    pub fn parse(fq: &FqConfig, text: &str) -> Result<Laurent> {
        let (body, prec) = match text.split_once(';') {
            None => (text, Prec::Exact),
            Some((body, rest)) => {
                let rest = rest.trim();
                let value = rest.strip_prefix("prec=").ok_or_else(|| {
                    Error::Parse(format!("expected `prec=<int>` after `;`, got {rest:?}"))
                })?;
                let k: i64 = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse("precision must be an integer".into()))?;
                if k.abs() > crate::poly::MAX_PARSE_EXPONENT {
                    return Err(Error::Budget(format!(
                        "precision {k} exceeds the parser bound"
                    )));
                }
                (body, Prec::At(k))
            }
        };
        let terms = crate::poly::parse_sparse_terms(body, "pi")?;
        let mut out = Laurent::from_terms(fq, 0, Vec::new(), prec);
        for (exp, c) in terms {
            let coeff = crate::poly::reduce_literal(fq, c);
            let term = Laurent::from_terms(fq, exp, vec![coeff], prec);
            out = out.add(&term);
        }
        Ok(out)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (i, &c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, "+")?;
                }
                first = false;
                let e = self.valuation + i as i64;
                let var = match e {
                    0 => String::new(),
                    1 => "pi".to_string(),
                    _ => format!("pi^{e}"),
                };
                if e == 0 {
                    write!(f, "{}", c.index())?;
                } else if c == FqElem::one() {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{}*{var}", c.index())?;
                }
            }
        }
        if let Prec::At(k) = self.prec {
            write!(f, ";prec={k}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
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
    fn t_maps_to_inverse_uniformizer() {
        let fq = f2();
        let t = Laurent::from_poly(&Poly::t(&fq));
        assert_eq!(t.valuation(), Valuation::Finite(-1));
        assert_eq!(t.to_string(), "pi^-1");
        // deg-2 polynomial: T^2+T+1 -> pi^-2+pi^-1+1.
        let p = Laurent::from_poly(&Poly::parse(&fq, "T^2+T+1").unwrap());
        assert_eq!(p.to_string(), "pi^-2+pi^-1+1");
        assert_eq!(p.coeff(0).unwrap(), FqElem::one());
    }

    #[test]
    fn parse_display_roundtrip() {
        let fq = f2();
        for text in ["pi^-1+pi^2;prec=8", "0", "pi", "1+pi^3", "0;prec=3"] {
            let v = Laurent::parse(&fq, text).unwrap();
            assert_eq!(v.to_string(), text);
        }
        let fq3 = f3();
        let v = Laurent::parse(&fq3, "2*pi^-2+pi+2*pi^4;prec=6").unwrap();
        assert_eq!(v.to_string(), "2*pi^-2+pi+2*pi^4;prec=6");
        // Terms at or beyond the precision bound are simply unknown.
        let w = Laurent::parse(&fq3, "pi^9;prec=8").unwrap();
        assert_eq!(w.to_string(), "0;prec=8");
        assert_eq!(w.valuation(), Valuation::Undetermined(8));
    }

    #[test]
    fn inverse_geometric_series() {
        let fq3 = f3();
        // 1/(1 - pi) = 1 + pi + pi^2 + pi^3 mod pi^4.
        let one_minus_pi = Laurent::parse(&fq3, "1+2*pi").unwrap();
        let inv = one_minus_pi.inv(4).unwrap();
        assert_eq!(inv.to_string(), "1+pi+pi^2+pi^3;prec=4");
        // Check a * a^{-1} = 1 to the available precision.
        let prod = one_minus_pi.mul(&inv);
        assert_eq!(prod.truncate(4).unwrap(), Laurent::one(&fq3).truncate(4).unwrap());
    }

    #[test]
    fn mul_then_divide_recovers_factor() {
        let fq = f2();
        let a = Laurent::parse(&fq, "pi^-1+1+pi^3").unwrap();
        let b = Laurent::parse(&fq, "pi^-2+pi").unwrap();
        let ab = a.mul(&b);
        let back = ab.div(&a, 5).unwrap();
        assert_eq!(back, b.truncate(5).unwrap());
        let ainv = a.inv(7).unwrap();
        assert_eq!(ab.mul(&ainv).truncate(4).unwrap(), b.truncate(4).unwrap());
    }

    #[test]
    fn precision_is_never_silently_exceeded() {
        let fq = f2();
        let v = Laurent::parse(&fq, "pi;prec=3").unwrap();
        assert!(v.coeff(2).is_ok());
        assert!(matches!(
            v.coeff(3),
            Err(Error::InsufficientPrecision(_))
        ));
        assert!(v.truncate(4).is_err());
        assert!(v.truncate(3).is_ok());
        assert!(Laurent::zero_mod(&fq, 2).inv(5).is_err());
        assert!(Laurent::zero(&fq).inv(5).is_err());
        // Dividing by something only known mod pi^2 cannot reach prec 5.
        let short = Laurent::parse(&fq, "1+pi;prec=2").unwrap();
        assert!(Laurent::one(&fq).div(&short, 5).is_err());
    }

    #[test]
    fn precision_propagates_through_mul() {
        let fq = f2();
        let unknown = Laurent::zero_mod(&fq, 3);
        let shifted = unknown.mul(&Laurent::pi_pow(&fq, -1));
        assert_eq!(shifted.prec(), Prec::At(2));
        assert_eq!(shifted.valuation(), Valuation::Undetermined(2));
        // Exact zero really annihilates.
        let z = Laurent::zero(&fq).mul(&unknown);
        assert!(z.is_exactly_zero());
    }

    #[test]
    fn representative_mod_is_exact() {
        let fq = f2();
        let v = Laurent::parse(&fq, "pi+pi^3+pi^5").unwrap();
        let r = v.representative_mod(4).unwrap();
        assert_eq!(r.to_string(), "pi+pi^3");
        assert_eq!(r.prec(), Prec::Exact);
        let w = Laurent::parse(&fq, "pi;prec=3").unwrap();
        assert!(w.representative_mod(4).is_err());
        assert_eq!(w.representative_mod(3).unwrap().to_string(), "pi");
    }

    #[test]
    fn valuation_comparisons() {
        let fq = f3();
        assert_eq!(Laurent::zero(&fq).valuation(), Valuation::Infinite);
        assert_eq!(
            Laurent::zero_mod(&fq, 4).valuation(),
            Valuation::Undetermined(4)
        );
        assert_eq!(
            Laurent::pi_pow(&fq, -2).valuation(),
            Valuation::Finite(-2)
        );
    }
}
