//! Exact computer algebra for the cuspidal divisor calculus of Drinfeld
//! modular curves X_0(p^r) over F_q(T).
//!
//! The crate provides, with no floating point anywhere:
//!
//! - [`fq`]: arithmetic in a finite field F_q, q = p^e, via lookup tables;
//! - [`poly`]: polynomials A = F_q[T], irreducibility, norms, enumeration;
//! - [`laurent`]: truncated Laurent series over F_q in pi = 1/T with
//!   explicit precision tracking (the local field K_inf = F_q((pi)));
//! - [`cyclo`]: the cyclotomic field Q(zeta_p) for exact character sums;
//! - [`intmat`]: integer matrices and Smith normal form;
//! - [`level`]: prime-power levels n = p^r, Eisenstein constants M, N,
//!   and the cusps of X_0(p^r) with canonical representatives;
//! - [`divisors`]: height divisors, degeneracy maps alpha^*/beta_*, U_p,
//!   divisors of the discriminant family Delta_{p^i}, and the beta_*
//!   cokernel;
//! - [`classgroup`]: the closed-form structure of the cuspidal divisor
//!   class group C(p^r), ell-primary parts, and consistency checks;
//! - [`tree`]: oriented edges of the Bruhat-Tits tree of PGL(2, K_inf)
//!   in normal coordinates, vertex stars, and translation;
//! - [`cochain`]: Gamma_inf-invariant harmonic cochains via Fourier data,
//!   Hecke operators as coset sums, and the Eisenstein family;
//! - [`verify`]: seeded, deterministic verification suites over a
//!   parameter grid.
//!
//! All public arithmetic is exact: rationals are arbitrary-precision,
//! character sums are computed in Q(zeta_p) and asserted rational, and
//! Laurent precision is tracked pessimistically (reads beyond known
//! precision are hard errors, never silent truncations).

pub mod classgroup;
pub mod cochain;
pub mod cyclo;
pub mod divisors;
pub mod fq;
pub mod intmat;
pub mod laurent;
pub mod level;
pub mod poly;
pub mod tree;
pub mod verify;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational number used throughout the crate.
pub type Rat = BigRational;

/// Build a rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Build a rational n/d (d must be nonzero).
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// q^n as an exact rational, for any integer n (negative exponents allowed).
pub fn rat_pow(base: u64, n: i64) -> Rat {
    let b = BigInt::from(base);
    if n >= 0 {
        Rat::from_integer(b.pow(n as u32))
    } else {
        Rat::new(BigInt::from(1), b.pow((-n) as u32))
    }
}

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zero input")]
    ZeroInput,
    #[error("not prime: {0}")]
    NotPrime(String),
    #[error("bad exponent: {0}")]
    BadExponent(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("singular matrix")]
    Singular,
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("field configuration error: {0}")]
    FieldConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-rational character sum: {0}")]
    NonRational(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("computation budget exceeded: {0}")]
    Budget(String),
}

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
