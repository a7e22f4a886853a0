//! Prime-power levels n = p^r over A = F_q[T], the Eisenstein constants
//! M(p), N(p), and the cusps of X_0(p^r).
//!
//! Cusps of X_0(p^r) are classified by a height divisor d = p^i of the
//! level together with a unit residue class: two representatives [a; p^i]
//! and [a'; p^i'] name the same cusp iff i = i' and alpha * a' = a
//! mod p^{min(i, r-i)} for some alpha in F_q^*. For i in {0, r} the class
//! is trivial — the unique cusps [0] and [infinity].
//!
//! # Conventions
//! - Canonical representative of a residue orbit: the deg-lex least
//!   element of {alpha * a mod p^s : alpha in F_q^*} (taking 1 when the
//!   modulus is trivial), which makes serialization deterministic.
//! - Height-i cusp counts: 1 for i in {0, r}, otherwise
//!   (|p|^s - |p|^{s-1})/(q-1) with s = min(i, r-i); the closed form is
//!   cross-checked against brute orbit enumeration in the tests.
//! - Text formats: level `q=...;p=...;r=...` (with `modulus=` inserted
//!   after `q` for non-prime q) and cusp `a=<poly>;i=<int>`.

use std::cmp::Ordering;
use std::fmt;

use crate::fq::FqConfig;
use crate::poly::{is_prime_poly, Poly};
use crate::{Error, Result};

/// A level n = p^r with p monic irreducible in F_q[T] and r >= 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Level {
    fq: FqConfig,
    prime: Poly,
    r: u32,
    /// |p| = q^{deg p}.
    norm_p: u64,
}

/// Bound on |p|^r for a usable level; keeps every downstream enumeration
/// at desk scale.
const MAX_NORM_POW_R: u64 = 1 << 40;

impl Level {
    /// The field configuration.
    pub fn fq(&self) -> &FqConfig {
        &self.fq
    }

    /// The monic irreducible p.
    pub fn prime(&self) -> &Poly {
        &self.prime
    }

    /// The exponent r of the level p^r.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// deg p.
    pub fn deg_p(&self) -> u32 {
        self.prime.degree().unwrap() as u32
    }

    /// |p| = q^{deg p}.
    pub fn norm_p(&self) -> u64 {
        self.norm_p
    }

    /// q.
    pub fn q(&self) -> u32 {
        self.fq.q()
    }

    /// The polynomial p^i.
    pub fn prime_pow(&self, i: u32) -> Poly {
        self.prime.pow(i)
    }

    /// The level ideal generator n = p^r.
    pub fn modulus(&self) -> Poly {
        self.prime_pow(self.r)
    }

    /// The level with the same prime and a different exponent.
    pub fn with_r(&self, r: u32) -> Result<Level> {
        make_level(&self.fq, &self.prime, r)
    }

    /// Canonical text form `q=...[;modulus=...];p=...;r=...`.
    pub fn to_level_string(&self) -> String {
        format!(
            "{};p={};r={}",
            self.fq.to_config_string(),
            self.prime,
            self.r
        )
    }

    /// Parse the level text format.
    pub fn parse(text: &str) -> Result<Level> {
        let mut fq_parts: Vec<&str> = Vec::new();
        let mut p_part: Option<&str> = None;
        let mut r_part: Option<&str> = None;
        for piece in text.split(';') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let (key, _) = piece
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {piece:?}")))?;
            match key.trim() {
                "q" | "modulus" => fq_parts.push(piece),
                "p" => p_part = Some(piece.split_once('=').unwrap().1),
                "r" => r_part = Some(piece.split_once('=').unwrap().1),
                other => return Err(Error::Parse(format!("unknown level key {other:?}"))),
            }
        }
        let fq = FqConfig::parse(&fq_parts.join(";"))?;
        let p_text = p_part.ok_or_else(|| Error::Parse("level is missing p=...".into()))?;
        let r_text = r_part.ok_or_else(|| Error::Parse("level is missing r=...".into()))?;
        let p = Poly::parse(&fq, p_text)?;
        let r: u32 = r_text
            .trim()
            .parse()
            .map_err(|_| Error::Parse("r must be a nonnegative integer".into()))?;
        make_level(&fq, &p, r)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_level_string())
    }
}

/// Construct and validate a level p^r. A non-monic p is silently replaced
/// by its monic associate; a reducible p or r < 1 is an error.
pub fn make_level(fq: &FqConfig, p: &Poly, r: u32) -> Result<Level> {
    if r < 1 {
        return Err(Error::BadExponent(format!(
            "level exponent r = {r} must be >= 1"
        )));
    }
    let p = p.monic_associate();
    // Bound the working range before the primality test: the range check
    // is O(1) while irreducibility testing grows with deg p.
    let deg_usize = p.degree().ok_or(Error::ZeroInput)?;
    if deg_usize < 1 {
        return Err(Error::NotPrime(p.to_string()));
    }
    let deg = u32::try_from(deg_usize).map_err(|_| {
        Error::Budget(format!(
            "deg p = {deg_usize} exceeds the supported working range"
        ))
    })?;
    let norm_p = (fq.q() as u64)
        .checked_pow(deg)
        .filter(|&n| {
            n.checked_pow(r)
                .map(|nr| nr <= MAX_NORM_POW_R)
                .unwrap_or(false)
        })
        .ok_or_else(|| {
            Error::Budget(format!(
                "|p|^r = {}^({}*{}) exceeds the supported working range",
                fq.q(),
                deg,
                r
            ))
        })?;
    if !is_prime_poly(&p)? {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(Level {
        fq: fq.clone(),
        prime: p,
        r,
        norm_p,
    })
}

/// The Eisenstein constants (M(p), N(p)):
/// M = (|p|^2 - 1)/(q^2 - 1), and N = (|p| - 1)/(q^2 - 1) when deg p is
/// even, N = (|p| - 1)/(q - 1) when deg p is odd. Both are integers; the
/// divisions are asserted exact.
pub fn eisenstein_constants(level: &Level) -> (u64, u64) {
    let q = level.q() as u64;
    let np = level.norm_p();
    let m_num = np * np - 1;
    let m_den = q * q - 1;
    assert_eq!(m_num % m_den, 0, "M(p) must be an integer");
    let m = m_num / m_den;
    let n_den = if level.deg_p() % 2 == 0 { q * q - 1 } else { q - 1 };
    let n_num = np - 1;
    assert_eq!(n_num % n_den, 0, "N(p) must be an integer");
    let n = n_num / n_den;
    (m, n)
}

/// A cusp of X_0(p^r), stored in canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cusp {
    /// Height exponent i: the cusp lies over the divisor p^i of the level.
    i: u32,
    /// Canonical residue representative (see module docs); the constant 1
    /// when the residue modulus is trivial (i in {0, r}).
    a: Poly,
}

impl Cusp {
    pub fn height_exponent(&self) -> u32 {
        self.i
    }

    pub fn a_class(&self) -> &Poly {
        &self.a
    }

    /// Deterministic order: by height exponent, then deg-lex on a.
    pub fn cmp_canonical(&self, other: &Cusp) -> Ordering {
        self.i
            .cmp(&other.i)
            .then_with(|| self.a.cmp_deg_lex(&other.a))
    }

    /// Canonical text form `a=<poly>;i=<int>`.
    pub fn to_cusp_string(&self) -> String {
        format!("a={};i={}", self.a, self.i)
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cusp_string())
    }
}

/// The residue modulus exponent for height i: s = min(i, r - i).
fn residue_exponent(level: &Level, i: u32) -> u32 {
    i.min(level.r() - i)
}

fn check_height(level: &Level, i: u32) -> Result<()> {
    if i > level.r() {
        return Err(Error::OutOfRange(format!(
            "height exponent {i} outside 0..={}",
            level.r()
        )));
    }
    Ok(())
}

/// Construct the cusp of height p^i containing the representative [a; p^i].
/// Requires gcd(a, p) = 1 whenever the residue class matters (s >= 1).
pub fn make_cusp(level: &Level, a: &Poly, i: u32) -> Result<Cusp> {
    check_height(level, i)?;
    let s = residue_exponent(level, i);
    if s == 0 {
        return Ok(Cusp {
            i,
            a: Poly::one(level.fq()),
        });
    }
    let modulus = level.prime_pow(s);
    let a_red = a.rem(&modulus)?;
    if !a_red.gcd(level.prime()).is_one() {
        return Err(Error::OutOfRange(format!(
            "representative {a} is not coprime to the prime {}",
            level.prime()
        )));
    }
    // Least element of the F_q^*-orbit under deg-lex.
    let mut best = a_red.clone();
    for alpha in level.fq().nonzero_elements() {
        let candidate = a_red.mul_scalar(alpha);
        if candidate.cmp_deg_lex(&best) == Ordering::Less {
            best = candidate;
        }
    }
    Ok(Cusp { i, a: best })
}

/// Parse the cusp text format `a=<poly>;i=<int>` (canonicalizing).
pub fn parse_cusp(level: &Level, text: &str) -> Result<Cusp> {
    let mut a_part: Option<&str> = None;
    let mut i_part: Option<&str> = None;
    for piece in text.split(';') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (key, value) = piece
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {piece:?}")))?;
        match key.trim() {
            "a" => a_part = Some(value),
            "i" => i_part = Some(value),
            other => return Err(Error::Parse(format!("unknown cusp key {other:?}"))),
        }
    }
    let a_text = a_part.ok_or_else(|| Error::Parse("cusp is missing a=...".into()))?;
    let i_text = i_part.ok_or_else(|| Error::Parse("cusp is missing i=...".into()))?;
    let a = Poly::parse(level.fq(), a_text)?;
    let i: u32 = i_text
        .trim()
        .parse()
        .map_err(|_| Error::Parse("cusp height must be a nonnegative integer".into()))?;
    make_cusp(level, &a, i)
}

/// Number of cusps of height p^i: 1 for i in {0, r}, otherwise
/// (|p|^s - |p|^{s-1})/(q - 1) with s = min(i, r-i). The formula rests on
/// the group F_q^* acting freely on units mod p^s for s >= 1, which the
/// enumeration tests check independently.
pub fn cusp_count(level: &Level, i: u32) -> Result<u64> {
    check_height(level, i)?;
    let s = residue_exponent(level, i);
    if s == 0 {
        return Ok(1);
    }
    let np = level.norm_p();
    let units = np.pow(s) - np.pow(s - 1);
    let q1 = level.q() as u64 - 1;
    assert_eq!(units % q1, 0, "unit count must be divisible by q-1");
    Ok(units / q1)
}

/// All cusps of X_0(p^r), grouped by ascending height, each canonical,
/// in the deterministic cusp order.
pub fn enumerate_cusps(level: &Level) -> Vec<Cusp> {
    let mut out: Vec<Cusp> = Vec::new();
    for i in 0..=level.r() {
        let s = residue_exponent(level, i);
        if s == 0 {
            out.push(Cusp {
                i,
                a: Poly::one(level.fq()),
            });
            continue;
        }
        let deg_bound = (s * level.deg_p()) as usize;
        let mut reps: Vec<Cusp> = Vec::new();
        for a in crate::poly::polys_of_degree_below(level.fq(), deg_bound) {
            if !a.gcd(level.prime()).is_one() {
                continue;
            }
            let c = make_cusp(level, &a, i).expect("coprime representative");
            reps.push(c);
        }
        reps.sort_by(|x, y| x.cmp_canonical(y));
        reps.dedup();
        out.extend(reps);
    }
    out
}

/// Whether [a; p^i] and [a2; p^i2] name the same cusp:
/// i = i2 and alpha * a2 = a mod p^{min(i, r-i)} for some alpha in F_q^*.
/// Both representatives must be coprime to p.
pub fn cusp_equal(level: &Level, a: &Poly, i: u32, a2: &Poly, i2: u32) -> Result<bool> {
    check_height(level, i)?;
    check_height(level, i2)?;
    for rep in [a, a2] {
        if !rep.gcd(level.prime()).is_one() {
            return Err(Error::OutOfRange(format!(
                "representative {rep} is not coprime to the prime {}",
                level.prime()
            )));
        }
    }
    if i != i2 {
        return Ok(false);
    }
    let s = residue_exponent(level, i);
    if s == 0 {
        return Ok(true);
    }
    let modulus = level.prime_pow(s);
    let a_red = a.rem(&modulus)?;
    let a2_red = a2.rem(&modulus)?;
    for alpha in level.fq().nonzero_elements() {
        if a2_red.mul_scalar(alpha).rem(&modulus)? == a_red {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(q_text: &str, p_text: &str, r: u32) -> Level {
        let fq = FqConfig::parse(q_text).unwrap();
        let p = Poly::parse(&fq, p_text).unwrap();
        make_level(&fq, &p, r).unwrap()
    }

    #[test]
    fn make_level_validates() {
        let l = level("q=2", "T^2+T+1", 2);
        assert_eq!(l.norm_p(), 4);
        assert_eq!(l.modulus().to_string(), "T^4+T^2+1");

        let fq = FqConfig::parse("q=2").unwrap();
        let square = Poly::parse(&fq, "T^2+1").unwrap();
        assert!(matches!(
            make_level(&fq, &square, 2),
            Err(Error::NotPrime(_))
        ));
        assert!(matches!(
            make_level(&fq, &Poly::t(&fq), 0),
            Err(Error::BadExponent(_))
        ));

        let l3 = level("q=3", "T", 5);
        assert_eq!(l3.norm_p(), 3);

        // Non-monic input is normalized silently.
        let fq3 = FqConfig::parse("q=3").unwrap();
        let p = Poly::parse(&fq3, "2*T+2").unwrap();
        let l = make_level(&fq3, &p, 1).unwrap();
        assert_eq!(l.prime().to_string(), "T+1");
    }

    #[test]
    fn eisenstein_constants_known_values() {
        assert_eq!(eisenstein_constants(&level("q=2", "T^2+T+1", 2)), (5, 1));
        assert_eq!(eisenstein_constants(&level("q=2", "T^3+T+1", 2)), (21, 7));
        assert_eq!(eisenstein_constants(&level("q=3", "T", 2)), (1, 1));
        assert_eq!(eisenstein_constants(&level("q=2", "T", 1)), (1, 1));
        // M(p) = 1 exactly when deg p = 1.
        for (l, expect_one) in [
            (level("q=2", "T", 3), true),
            (level("q=3", "T+1", 2), true),
            (level("q=2", "T^2+T+1", 2), false),
            (level("q=3", "T^2+1", 2), false),
        ] {
            assert_eq!(eisenstein_constants(&l).0 == 1, expect_one);
        }
    }

    #[test]
    fn cusp_counts_known_values() {
        let l = level("q=2", "T", 4);
        assert_eq!(cusp_count(&l, 2).unwrap(), 2);
        assert_eq!(cusp_count(&l, 0).unwrap(), 1);
        assert_eq!(cusp_count(&l, 4).unwrap(), 1);
        assert_eq!(cusp_count(&level("q=3", "T", 2), 1).unwrap(), 1);
        assert!(cusp_count(&l, 5).is_err());
    }

    #[test]
    fn enumerate_matches_counts() {
        for l in [
            level("q=2", "T", 1),
            level("q=2", "T", 4),
            level("q=2", "T^2+T+1", 2),
            level("q=3", "T", 3),
            level("q=3", "T^2+1", 2),
            level("q=4;modulus=x^2+x+1", "T", 3),
        ] {
            let cusps = enumerate_cusps(&l);
            let total: u64 = (0..=l.r()).map(|i| cusp_count(&l, i).unwrap()).sum();
            assert_eq!(cusps.len() as u64, total, "level {l}");
            // Counts per height match, and the list is sorted and unique.
            for i in 0..=l.r() {
                let n = cusps.iter().filter(|c| c.height_exponent() == i).count();
                assert_eq!(n as u64, cusp_count(&l, i).unwrap(), "level {l}, i={i}");
            }
            for w in cusps.windows(2) {
                assert_eq!(w[0].cmp_canonical(&w[1]), Ordering::Less);
            }
        }
    }

    #[test]
    fn enumerate_known_shapes() {
        // r = 1: just [0] and [infinity].
        let l = level("q=2", "T", 1);
        let cusps = enumerate_cusps(&l);
        assert_eq!(cusps.len(), 2);
        assert_eq!(cusps[0].height_exponent(), 0);
        assert_eq!(cusps[1].height_exponent(), 1);

        // q=2, p=T, r=4: multiplicities (1,1,2,1,1).
        let l = level("q=2", "T", 4);
        let counts: Vec<usize> = (0..=4)
            .map(|i| {
                enumerate_cusps(&l)
                    .iter()
                    .filter(|c| c.height_exponent() == i)
                    .count()
            })
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 1, 1]);

        // q=2, p=T^2+T+1, r=2: heights 1, p (x3), p^2.
        let l = level("q=2", "T^2+T+1", 2);
        let counts: Vec<usize> = (0..=2)
            .map(|i| {
                enumerate_cusps(&l)
                    .iter()
                    .filter(|c| c.height_exponent() == i)
                    .count()
            })
            .collect();
        assert_eq!(counts, vec![1, 3, 1]);
    }

    #[test]
    fn cusp_equality_and_canonical_form() {
        // q=2, n=T^2: [1;T] and [1+T;T] are the same cusp (both = 1 mod T).
        let l = level("q=2", "T", 2);
        let fq = l.fq().clone();
        let one = Poly::one(&fq);
        let one_plus_t = Poly::parse(&fq, "T+1").unwrap();
        assert!(cusp_equal(&l, &one, 1, &one_plus_t, 1).unwrap());
        assert!(!cusp_equal(&l, &one, 0, &one, 1).unwrap());

        // q=3, n=T^2: [1;T] = [2;T] via alpha=2.
        let l3 = level("q=3", "T", 2);
        let fq3 = l3.fq().clone();
        let two = Poly::constant(&fq3, fq3.from_int(2));
        let one3 = Poly::one(&fq3);
        assert!(cusp_equal(&l3, &one3, 1, &two, 1).unwrap());

        // Equality corresponds exactly to identical canonical forms.
        let c1 = make_cusp(&l3, &one3, 1).unwrap();
        let c2 = make_cusp(&l3, &two, 1).unwrap();
        assert_eq!(c1, c2);

        // Non-coprime representative is rejected.
        let t = Poly::t(&fq3);
        assert!(cusp_equal(&l3, &t, 1, &one3, 1).is_err());
        assert!(make_cusp(&l3, &t, 1).is_err());
    }

    #[test]
    fn text_formats_roundtrip() {
        for text in [
            "q=2;p=T;r=4",
            "q=3;p=T^2+1;r=2",
            "q=4;modulus=x^2+x+1;p=T;r=3",
        ] {
            let l = Level::parse(text).unwrap();
            assert_eq!(l.to_level_string(), text);
            assert_eq!(Level::parse(&l.to_level_string()).unwrap(), l);
        }
        let l = Level::parse("q=2;p=T;r=4").unwrap();
        for c in enumerate_cusps(&l) {
            let back = parse_cusp(&l, &c.to_cusp_string()).unwrap();
            assert_eq!(back, c);
        }
        assert!(Level::parse("q=2;p=T^2+1;r=2").is_err());
        assert!(Level::parse("q=2;r=2").is_err());
        assert!(parse_cusp(&l, "a=T;i=1").is_err()); // not coprime
        assert!(parse_cusp(&l, "a=1;i=9").is_err());
    }
}
