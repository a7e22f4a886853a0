//! Closed-form structure of the cuspidal divisor class group C(p^r),
//! its l-primary parts, the torsion prediction, the order of the class
//! of C', and arithmetic consistency checks tying these together.
//!
//! The group C(p^r) is realized purely through its closed form:
//!
//! ```text
//! C(p^r) ~ (+)_{i=1..m} Z/(|p|^{r-i} M)  (+)  (+)_{i=m+1..r-2} Z/(|p|^i M)
//!          (+) Z/M (+) Z/N,            m = floor((r-1)/2), r >= 2,
//! ```
//!
//! with M = M(p), N = N(p) the Eisenstein constants; for r = 1 the group
//! is cyclic of order N(p). For primes l not dividing q(q-1) the l-part
//! is predicted to be (Z/M)^{r-1} x Z/N, and the order of the class of
//! C' is M |p|^{r-2}.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::intmat::{smith_normal_form, IntMatrix};
use crate::level::{eisenstein_constants, Level};
use crate::{Error, Result};

/// A finite abelian group in divisibility-chain canonical form: invariant
/// factors d_1 | d_2 | ... with every d_i >= 2 (1-factors dropped).
/// Stored ascending; displayed descending, e.g. `[16,8,8]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AbelianStructure {
    factors: Vec<BigInt>,
}

impl AbelianStructure {
    /// The trivial group.
    pub fn trivial() -> AbelianStructure {
        AbelianStructure { factors: Vec::new() }
    }

    /// Canonicalize a multiset of cyclic orders (each >= 1) into the
    /// divisibility-chain form, via the Smith normal form of the diagonal
    /// stack.
    pub fn from_orders(orders: &[BigInt]) -> Result<AbelianStructure> {
        if orders.iter().any(|n| n.is_zero() || n.sign() == num_bigint::Sign::Minus) {
            return Err(Error::OutOfRange(
                "cyclic orders must be positive integers".into(),
            ));
        }
        let n = orders.len();
        let mut m = IntMatrix::zero(n, n);
        for (i, d) in orders.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        let snf = smith_normal_form(&m);
        let factors: Vec<BigInt> = snf
            .factors
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        debug_assert!(factors.iter().all(|d| !d.is_zero()));
        Ok(AbelianStructure { factors })
    }

    /// Convenience constructor from machine integers.
    pub fn from_orders_u64(orders: &[u64]) -> Result<AbelianStructure> {
        let big: Vec<BigInt> = orders.iter().map(|&d| BigInt::from(d)).collect();
        AbelianStructure::from_orders(&big)
    }

    /// Invariant factors, ascending (d_1 | d_2 | ...), all >= 2.
    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// Invariant factors largest-first, the display order.
    pub fn factors_descending(&self) -> Vec<BigInt> {
        let mut f = self.factors.clone();
        f.reverse();
        f
    }

    /// The group order (product of the invariant factors).
    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors_descending()
            .iter()
            .map(|d| d.to_string())
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn require_prime_u64(ell: u64) -> Result<()> {
    if ell < 2 || (2..ell).take_while(|d| d * d <= ell).any(|d| ell % d == 0) {
        return Err(Error::NotPrime(format!("{ell} (expected a prime number)")));
    }
    Ok(())
}

/// The largest power of l dividing n (n >= 1).
fn ell_part(n: &BigInt, ell: u64) -> BigInt {
    let ell = BigInt::from(ell);
    let mut part = BigInt::one();
    let mut rest = n.clone();
    while (&rest % &ell).is_zero() {
        rest /= &ell;
        part *= &ell;
    }
    part
}

/// The l-primary component of a finite abelian group structure.
pub fn ell_primary(s: &AbelianStructure, ell: u64) -> Result<AbelianStructure> {
    require_prime_u64(ell)?;
    let parts: Vec<BigInt> = s.factors().iter().map(|d| ell_part(d, ell)).collect();
    AbelianStructure::from_orders(&parts)
}

/// The closed-form structure of C(p^r) (cyclic of order N(p) when r = 1).
pub fn class_group_structure(level: &Level) -> AbelianStructure {
    let (m_const, n_const) = eisenstein_constants(level);
    let m_const = BigInt::from(m_const);
    let n_const = BigInt::from(n_const);
    let r = level.r();
    if r == 1 {
        return AbelianStructure::from_orders(&[n_const]).expect("positive order");
    }
    let np = BigInt::from(level.norm_p());
    let m = (r - 1) / 2;
    let mut orders: Vec<BigInt> = Vec::new();
    for i in 1..=m {
        orders.push(np.pow(r - i) * &m_const);
    }
    for i in m + 1..=r.saturating_sub(2) {
        orders.push(np.pow(i) * &m_const);
    }
    orders.push(m_const);
    orders.push(n_const);
    AbelianStructure::from_orders(&orders).expect("positive orders")
}

/// The predicted l-part of the cuspidal torsion for l not dividing
/// q(q-1): the l-part of (Z/M)^{r-1} x Z/N. Requires r >= 2.
pub fn torsion_prediction(level: &Level, ell: u64) -> Result<AbelianStructure> {
    require_prime_u64(ell)?;
    if level.r() < 2 {
        return Err(Error::BadExponent(
            "torsion prediction needs r >= 2".into(),
        ));
    }
    let q = level.q() as u64;
    if (q * (q - 1)) % ell == 0 {
        return Err(Error::OutOfRange(format!(
            "ell = {ell} divides q(q-1) = {}; outside the supported hypothesis",
            q * (q - 1)
        )));
    }
    let (m_const, n_const) = eisenstein_constants(level);
    let m_part = ell_part(&BigInt::from(m_const), ell);
    let n_part = ell_part(&BigInt::from(n_const), ell);
    let mut orders = vec![m_part; (level.r() - 1) as usize];
    orders.push(n_part);
    AbelianStructure::from_orders(&orders)
}

/// ord(class of C') = M(p) |p|^{r-2}. Requires r >= 2.
pub fn order_of_cprime(level: &Level) -> Result<BigInt> {
    if level.r() < 2 {
        return Err(Error::BadExponent("order of C' needs r >= 2".into()));
    }
    let (m_const, _) = eisenstein_constants(level);
    Ok(BigInt::from(m_const) * BigInt::from(level.norm_p()).pow(level.r() - 2))
}

/// One named arithmetic check in a consistency report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConsistencyCheck {
    pub name: String,
    pub params: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

/// Outcome of the cross-identity checks for one level.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub level: String,
    pub checks: Vec<ConsistencyCheck>,
}

impl ConsistencyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Verify, for every prime l <= 50 with l not dividing q(q-1):
/// (i) the l-primary part of the closed-form structure equals the
/// torsion prediction; (ii) the l-part of |C(p^r)| equals the l-part of
/// |C(p^{r-1})| times the l-part of M(p); (iii) the l-part of
/// ord(class of C') divides the l-part of |C(p^r)|. Requires r >= 2.
pub fn consistency_report(level: &Level) -> Result<ConsistencyReport> {
    if level.r() < 2 {
        return Err(Error::BadExponent(
            "consistency report needs r >= 2".into(),
        ));
    }
    let q = level.q() as u64;
    let (m_const, _) = eisenstein_constants(level);
    let structure = class_group_structure(level);
    let lower = class_group_structure(&level.with_r(level.r() - 1)?);
    let cprime = order_of_cprime(level)?;
    let mut checks = Vec::new();
    for ell in (2u64..=50).filter(|&e| require_prime_u64(e).is_ok()) {
        if (q * (q - 1)) % ell == 0 {
            continue;
        }
        let params = format!("ell={ell}");

        let got_i = ell_primary(&structure, ell)?;
        let expect_i = torsion_prediction(level, ell)?;
        checks.push(ConsistencyCheck {
            name: "ell-primary part matches torsion prediction".into(),
            params: params.clone(),
            expected: expect_i.to_string(),
            got: got_i.to_string(),
            pass: got_i == expect_i,
        });

        let got_ii = ell_part(&structure.order(), ell);
        let expect_ii = ell_part(&lower.order(), ell) * ell_part(&BigInt::from(m_const), ell);
        checks.push(ConsistencyCheck {
            name: "order splits into lower-level and new parts".into(),
            params: params.clone(),
            expected: expect_ii.to_string(),
            got: got_ii.to_string(),
            pass: got_ii == expect_ii,
        });

        let cprime_part = ell_part(&cprime, ell);
        let group_part = ell_part(&structure.order(), ell);
        checks.push(ConsistencyCheck {
            name: "order of C' class divides the group order".into(),
            params,
            expected: format!("{cprime_part} | {group_part}"),
            got: (&group_part % &cprime_part).to_string(),
            pass: (&group_part % &cprime_part).is_zero(),
        });
    }
    Ok(ConsistencyReport {
        level: level.to_level_string(),
        checks,
    })
}
