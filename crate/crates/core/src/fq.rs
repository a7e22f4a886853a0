//! Arithmetic in a finite field F_q, q = p^e, backed by precomputed tables.
//!
//! Elements are packed indices: the element with coordinate vector
//! (c_0, ..., c_{e-1}) over Z/p (coordinates in the power basis of the
//! chosen modulus) has index c_0 + c_1 p + ... + c_{e-1} p^{e-1}.
//! For e = 1 the index is just the least residue mod p.
//!
//! # Conventions
//! - Integer literals denote elements via `from_int`: a nonnegative n is
//!   reduced mod q and unpacked base p; a negative literal is the field
//!   negation of its absolute value (so `-1` is the additive inverse of 1
//!   for every q, and for e = 1 everything coincides with reduction mod p).
//! - Elements display as their index, which `from_int` parses back; the
//!   display/parse pair roundtrips exactly.
//! - Configuration text: `q=4;modulus=x^2+x+1` (modulus required iff e > 1,
//!   written in the variable `x` with integer coefficients mod p).

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Largest supported field size. Tables are O(q^2); desk-scale fields only.
pub const MAX_Q: u32 = 512;

/// An element of F_q, stored as its packed base-p index (see module docs).
///
/// Elements carry no pointer to their field; all arithmetic goes through
/// the owning [`FqConfig`]. The derived order (by index) is the total
/// order used for canonical representatives throughout the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    /// Packed base-p index of this element, in 0..q.
    pub fn index(self) -> u32 {
        self.0
    }

    /// The zero element (index 0 in every configuration).
    pub fn zero() -> FqElem {
        FqElem(0)
    }

    /// The one element (index 1 in every configuration).
    pub fn one() -> FqElem {
        FqElem(1)
    }

    /// True iff this is the zero element.
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    /// Modulus coefficients over Z/p, little-endian, length e+1, monic.
    /// Empty for e = 1 (no modulus needed).
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    /// Trace to Z/p, as a value in 0..p.
    trace: Vec<u32>,
}

/// A finite field F_q with all arithmetic tables precomputed.
///
/// Cheap to clone (shared immutable tables). Two configurations compare
/// equal iff they have the same characteristic, degree, and modulus.
#[derive(Clone)]
pub struct FqConfig(Arc<Tables>);

impl PartialEq for FqConfig {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.e == other.0.e
                && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FqConfig {}

impl fmt::Debug for FqConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqConfig(q={})", self.0.q)
    }
}

fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense little-endian polynomial arithmetic over Z/p (u32 coefficients
/// in 0..p), used only while building field tables and validating moduli.
mod zp {
    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] += u64::from(ai) * u64::from(bj);
            }
        }
        let mut out: Vec<u32> = out.iter().map(|&c| (c % u64::from(p)) as u32).collect();
        trim(&mut out);
        out
    }

    /// Remainder of a by a monic divisor m (m nonempty, leading coeff 1).
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        debug_assert_eq!(*m.last().unwrap(), 1);
        let mut a = a.to_vec();
        trim(&mut a);
        let dm = m.len() - 1;
        while a.len() > dm {
            let lead = *a.last().unwrap();
            let shift = a.len() - 1 - dm;
            for (k, &mk) in m.iter().enumerate() {
                let idx = shift + k;
                let sub = (u64::from(lead) * u64::from(mk)) % u64::from(p);
                let cur = u64::from(a[idx]) + u64::from(p) - sub % u64::from(p);
                a[idx] = (cur % u64::from(p)) as u32;
            }
            trim(&mut a);
            if a.len() == shift + dm + 1 {
                // Leading term must have been cancelled.
                unreachable!("monic reduction failed to lower degree");
            }
        }
        a
    }

    /// True iff f (monic, degree >= 1) is irreducible over Z/p, by trial
    /// division with every monic polynomial of degree 1..=deg(f)/2.
    pub fn is_irreducible_monic(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        if deg == 0 {
            return false;
        }
        for d in 1..=deg / 2 {
            // Enumerate monic degree-d polynomials by base-p counter on
            // the d low coefficients.
            let count = u64::from(p).pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut t = idx;
                for _ in 0..d {
                    g.push((t % u64::from(p)) as u32);
                    t /= u64::from(p);
                }
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FqConfig {
    /// The prime field F_p.
    pub fn prime_field(p: u32) -> Result<FqConfig> {
        FqConfig::new(p, 1, &[])
    }

    /// The field F_{p^e} defined by a monic irreducible modulus over Z/p,
    /// given little-endian (constant coefficient first, length e+1).
    pub fn extension(p: u32, e: u32, modulus: &[u32]) -> Result<FqConfig> {
        FqConfig::new(p, e, modulus)
    }

    fn new(p: u32, e: u32, modulus_in: &[u32]) -> Result<FqConfig> {
        if !is_prime_u32(p) {
            return Err(Error::FieldConfig(format!("characteristic {p} is not prime")));
        }
        if e < 1 {
            return Err(Error::FieldConfig("extension degree must be >= 1".into()));
        }
        let q = (0..e).try_fold(1u32, |acc, _| {
            acc.checked_mul(p).filter(|&v| v <= MAX_Q)
        });
        let q = match q {
            Some(q) => q,
            None => {
                return Err(Error::FieldConfig(format!(
                    "field size p^e = {p}^{e} exceeds the supported bound {MAX_Q}"
                )))
            }
        };

        let modulus: Vec<u32> = if e == 1 {
            if !modulus_in.is_empty() {
                return Err(Error::FieldConfig(
                    "modulus must be omitted for prime fields".into(),
                ));
            }
            Vec::new()
        } else {
            let mut m: Vec<u32> = modulus_in.iter().map(|&c| c % p).collect();
            zp::trim(&mut m);
            if m.len() != (e + 1) as usize {
                return Err(Error::FieldConfig(format!(
                    "modulus must have degree {e}"
                )));
            }
            if *m.last().unwrap() != 1 {
                return Err(Error::FieldConfig("modulus must be monic".into()));
            }
            if !zp::is_irreducible_monic(&m, p) {
                return Err(Error::FieldConfig("modulus is reducible".into()));
            }
            m
        };

        let qe = q as usize;
        let digits = |i: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(e as usize);
            let mut t = i;
            for _ in 0..e {
                v.push(t % p);
                t /= p;
            }
            v
        };
        let pack = |v: &[u32]| -> u32 {
            let mut acc = 0u32;
            for &c in v.iter().rev() {
                acc = acc * p + c;
            }
            acc
        };

        let mut add = vec![0u32; qe * qe];
        let mut mul = vec![0u32; qe * qe];
        let mut neg = vec![0u32; qe];
        for a in 0..q {
            let da = digits(a);
            let n: Vec<u32> = da.iter().map(|&c| (p - c) % p).collect();
            neg[a as usize] = pack(&n);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = pack(&s);
                let prod = if e == 1 {
                    vec![(a * b) % p]
                } else {
                    let mut m = zp::mul(&da, &db, p);
                    m = zp::rem(&m, &modulus, p);
                    m.resize(e as usize, 0);
                    m
                };
                mul[(a * q + b) as usize] = pack(&prod);
            }
        }

        let mut inv = vec![0u32; qe];
        for a in 1..q {
            let mut found = false;
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b;
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(Error::Inconsistent(format!(
                    "element {a} has no inverse; modulus not irreducible?"
                )));
            }
        }

        // Tr(x) = x + x^p + ... + x^{p^{e-1}}; each summand via table powers.
        let powv = |x: u32, mut n: u64| -> u32 {
            let mut base = x;
            let mut acc = 1u32;
            while n > 0 {
                if n & 1 == 1 {
                    acc = mul[(acc * q + base) as usize];
                }
                base = mul[(base * q + base) as usize];
                n >>= 1;
            }
            acc
        };
        let mut trace = vec![0u32; qe];
        for a in 0..q {
            let mut t = 0u32;
            for i in 0..e {
                let s = powv(a, u64::from(p).pow(i));
                t = add[(t * q + s) as usize];
            }
            // The trace lands in the prime subfield, whose elements are
            // exactly the indices 0..p.
            assert!(t < p, "trace left the prime subfield");
            trace[a as usize] = t;
        }

        Ok(FqConfig(Arc::new(Tables {
            p,
            e,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            trace,
        })))
    }

    /// Field size q = p^e.
    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Characteristic p.
    pub fn p(&self) -> u32 {
        self.0.p
    }

    /// Extension degree e.
    pub fn e(&self) -> u32 {
        self.0.e
    }

    /// The element with the given packed index.
    pub fn element(&self, index: u32) -> Result<FqElem> {
        if index < self.0.q {
            Ok(FqElem(index))
        } else {
            Err(Error::OutOfRange(format!(
                "element index {index} not below q = {}",
                self.0.q
            )))
        }
    }

    /// Element denoted by an integer literal (see module docs): n >= 0 is
    /// reduced mod q and unpacked base p; n < 0 is the negation of |n|.
    pub fn from_int(&self, n: i64) -> FqElem {
        let q = i128::from(self.0.q);
        let m = (i128::from(n).rem_euclid(q)) as u32;
        if n >= 0 {
            FqElem(m)
        } else {
            let abs = ((-i128::from(n)).rem_euclid(q)) as u32;
            self.neg(FqElem(abs))
        }
    }

    /// All elements of the field, in index order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.0.q).map(FqElem)
    }

    /// All nonzero elements, in index order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FqElem> {
        (1..self.0.q).map(FqElem)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.0.add[(a.0 * self.0.q + b.0) as usize])
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.0.mul[(a.0 * self.0.q + b.0) as usize])
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.0.neg[a.0 as usize])
    }

    /// Multiplicative inverse; zero input is an error.
    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            Err(Error::ZeroInput)
        } else {
            Ok(FqElem(self.0.inv[a.0 as usize]))
        }
    }

    /// a / b; zero divisor is an error.
    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^n for n >= 0 (0^0 = 1).
    pub fn pow(&self, a: FqElem, mut n: u64) -> FqElem {
        let mut base = a;
        let mut acc = FqElem::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Trace to the prime field, Tr(x) = sum of x^{p^i} for i < e,
    /// returned as a residue in 0..p.
    pub fn trace_to_prime_field(&self, a: FqElem) -> u32 {
        self.0.trace[a.0 as usize]
    }

    /// Canonical configuration text, e.g. `q=4;modulus=x^2+x+1` or `q=3`.
    pub fn to_config_string(&self) -> String {
        if self.0.e == 1 {
            format!("q={}", self.0.q)
        } else {
            let mut terms = Vec::new();
            for (i, &c) in self.0.modulus.iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                let var = match i {
                    0 => String::new(),
                    1 => "x".to_string(),
                    _ => format!("x^{i}"),
                };
                let term = if i == 0 {
                    format!("{c}")
                } else if c == 1 {
                    var
                } else {
                    format!("{c}*{var}")
                };
                terms.push(term);
            }
            format!("q={};modulus={}", self.0.q, terms.join("+"))
        }
    }

    /// Parse configuration text: `q=<int>` with an optional
    /// `;modulus=<poly in x>` part (required iff q is not prime).
    pub fn parse(text: &str) -> Result<FqConfig> {
        let mut q_part: Option<&str> = None;
        let mut modulus_part: Option<&str> = None;
        for piece in text.split(';') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let (key, value) = piece
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {piece:?}")))?;
            match key.trim() {
                "q" => q_part = Some(value.trim()),
                "modulus" => modulus_part = Some(value.trim()),
                other => {
                    return Err(Error::Parse(format!(
                        "unknown field-config key {other:?}"
                    )))
                }
            }
        }
        let q: u32 = q_part
            .ok_or_else(|| Error::Parse("field config is missing q=...".into()))?
            .parse()
            .map_err(|_| Error::Parse("q must be a positive integer".into()))?;
        if q < 2 || q > MAX_Q {
            return Err(Error::FieldConfig(format!(
                "q = {q} outside the supported range 2..={MAX_Q}"
            )));
        }
        // Factor q = p^e.
        let mut p = 0u32;
        for d in 2..=q {
            if q % d == 0 {
                p = d;
                break;
            }
        }
        let mut e = 0u32;
        let mut t = q;
        while t > 1 {
            if t % p != 0 {
                return Err(Error::FieldConfig(format!("q = {q} is not a prime power")));
            }
            t /= p;
            e += 1;
        }
        match (e, modulus_part) {
            (1, None) => FqConfig::prime_field(p),
            (1, Some(_)) => Err(Error::FieldConfig(
                "modulus must be omitted for prime fields".into(),
            )),
            (_, None) => Err(Error::FieldConfig(format!(
                "q = {q} requires a modulus polynomial"
            ))),
            (_, Some(m)) => {
                let coeffs = parse_zp_poly(m, p)?;
                FqConfig::extension(p, e, &coeffs)
            }
        }
    }
}

/// Parse a sparse polynomial in the variable `x` with integer coefficients
/// reduced mod p, returning little-endian coefficients over Z/p.
fn parse_zp_poly(text: &str, p: u32) -> Result<Vec<u32>> {
    let terms = crate::poly::parse_sparse_terms(text, "x")?;
    let deg = terms.iter().map(|&(e, _)| e).max().unwrap_or(0);
    let mut coeffs = vec![0u32; deg as usize + 1];
    for (exp, c) in terms {
        let red = (c.rem_euclid(i128::from(p))) as u32;
        coeffs[exp as usize] = (coeffs[exp as usize] + red) % p;
    }
    zp::trim(&mut coeffs);
    Ok(coeffs)
}
