//! Harmonic cochains on the tree, invariant under the upper-triangular
//! integral subgroup, represented by exact Fourier data: the eta
//! character, evaluation at edges via the expansion theorem, recovery of
//! coefficients via the defining finite sums, B-shifts, Hecke operators
//! as coset sums, the discriminant family, and the Eisenstein element.
//!
//! # The model
//! Every cochain here is a finite rational combination
//! f = sum_d lambda_d * (w | B_d) over monic polynomials d, where w is
//! the cochain of the discriminant form. Its Fourier data is
//!
//! - constant part: f0(pi^k) = -(q-1) q^{1-k} * sum_d lambda_d q^{deg d},
//! - coefficient at the index (m, j) for monic m != 0 and j >= deg m:
//!   c(m) * q^{deg m - j} with c(m) = sum_{d | m} lambda_d c_w(m/d) and
//!   c_w(n) = sigma(n) (q^2-1)(q-1) / (q |n|), sigma(n) = sum of |e| over
//!   monic e | n.
//!
//! The geometric law in k is forced by harmonicity; the sigma multiplier
//! is pinned by the Hecke eigenvalue recursion. Both are gated here by
//! closed-form edge evaluations and by roundtrip, harmonicity, and
//! invariance tests, which fail for any other choice.
//!
//! # Evaluation
//! f((pi^k, y; 0, 1)) = f0(pi^k) + sum over nonzero m with deg m <= k-2
//! of F(m, k-2) eta(m y), where eta(x) = eta0(Tr(a1(x))) reads the pi^1
//! coefficient. Grouping each m with its F_q^* multiples leaves one
//! orbit character sum per monic m, computed honestly in Q(zeta_p) once
//! per field and asserted rational. eps = 1 edges get the negated value.

use num_traits::Zero;

use crate::cyclo::CycRat;
use crate::fq::{FqConfig, FqElem};
use crate::laurent::Laurent;
use crate::level::Level;
use crate::poly::{monic_polys_of_degree, polys_of_degree_below, Poly};
use crate::tree::{translate, Edge, GMatrix};
use crate::{rat_int, rat_pow, Error, Rat, Result};

/// Hard cap on the number of expansion terms (and on the sigma-table
/// size) a single evaluation may use: q^{k-1} must stay below this.
const MAX_EVAL_TERMS: u64 = 5_000_000;

/// eta of a Laurent tail: eta0(Tr(coefficient of pi^1)). Needs that
/// coefficient to be determined (precision >= 2 when inexact).
pub fn eta(x: &Laurent) -> Result<CycRat> {
    let a1 = x.coeff(1)?;
    let fq = x.fq();
    Ok(CycRat::eta0(fq.p(), fq.trace_to_prime_field(a1)))
}

/// A cochain sum_d lambda_d * (w | B_d): monic shift polynomials with
/// rational weights, tagged with the level it lives on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FourierCochain {
    level: Level,
    shifts: Vec<(Poly, Rat)>,
}

impl FourierCochain {
    /// Build from explicit (monic shift, weight) pairs; merges duplicate
    /// shifts and drops zero weights.
    pub fn from_shifts(level: &Level, shifts: Vec<(Poly, Rat)>) -> Result<FourierCochain> {
        for (d, _) in &shifts {
            if !d.is_monic() {
                return Err(Error::OutOfRange(format!(
                    "shift polynomial {d} must be monic"
                )));
            }
        }
        let mut shifts = shifts;
        shifts.sort_by(|(a, _), (b, _)| a.cmp_deg_lex(b));
        let mut merged: Vec<(Poly, Rat)> = Vec::with_capacity(shifts.len());
        for (d, w) in shifts {
            match merged.last_mut() {
                Some((prev, acc)) if *prev == d => *acc += w,
                _ => merged.push((d, w)),
            }
        }
        merged.retain(|(_, w)| !w.is_zero());
        Ok(FourierCochain {
            level: level.clone(),
            shifts: merged,
        })
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn fq(&self) -> &FqConfig {
        self.level.fq()
    }

    pub fn shifts(&self) -> &[(Poly, Rat)] {
        &self.shifts
    }

    pub fn scale(&self, c: &Rat) -> FourierCochain {
        FourierCochain::from_shifts(
            &self.level,
            self.shifts.iter().map(|(d, w)| (d.clone(), w * c)).collect(),
        )
        .expect("shifts stay monic")
    }

    pub fn add(&self, other: &FourierCochain) -> FourierCochain {
        assert!(
            self.level == other.level,
            "cochain arithmetic across different levels"
        );
        let mut shifts = self.shifts.clone();
        shifts.extend_from_slice(&other.shifts);
        FourierCochain::from_shifts(&self.level, shifts).expect("shifts stay monic")
    }

    /// The constant Fourier part f0(pi^k) = -(q-1) q^{1-k} sum_d
    /// lambda_d q^{deg d}.
    pub fn constant_coefficient(&self, k: i64) -> Rat {
        let q = self.fq().q() as u64;
        let mut acc = Rat::zero();
        for (d, w) in &self.shifts {
            let deg = d.degree().expect("monic shifts are nonzero") as i64;
            acc += w * rat_pow(q, 1 - k + deg);
        }
        acc * rat_int(-((self.fq().q() as i64) - 1))
    }

    /// The Fourier coefficient at the index (m, j): zero when j < deg m,
    /// otherwise c(monic associate of m) * q^{deg m - j}.
    pub fn coefficient(&self, m: &Poly, j: i64) -> Result<Rat> {
        if m.is_zero() {
            return Err(Error::ZeroInput);
        }
        let m = m.monic_associate();
        let deg_m = m.degree().unwrap() as i64;
        if j < deg_m {
            return Ok(Rat::zero());
        }
        let q = self.fq().q() as u64;
        let mut c = Rat::zero();
        for (d, w) in &self.shifts {
            let (quot, rem) = m.divrem(d)?;
            if rem.is_zero() {
                c += w * base_coefficient(self.fq(), &quot);
            }
        }
        Ok(c * rat_pow(q, deg_m - j))
    }
}

/// c_w(n) = sigma(n) (q^2-1)(q-1) / (q |n|) for monic n, by direct
/// divisor enumeration (the evaluator uses a sieve instead).
fn base_coefficient(fq: &FqConfig, n: &Poly) -> Rat {
    let q = fq.q() as u64;
    let deg_n = n.degree().expect("monic input") as usize;
    let mut sigma: u64 = 0;
    for d in 0..=deg_n {
        for cand in monic_polys_of_degree(fq, d) {
            if n.rem(&cand).expect("monic divisor").is_zero() {
                sigma += q.pow(d as u32);
            }
        }
    }
    let w = ((q * q - 1) * (q - 1)) as i64;
    Rat::from_integer((sigma as i64 * w).into()) * rat_pow(q, -1 - deg_n as i64)
}

/// The cochain of the discriminant form shifted by p^i (i = 0 gives the
/// discriminant itself).
pub fn delta_cochain(i: u32, level: &Level) -> Result<FourierCochain> {
    if i as u64 * level.prime().degree().unwrap() as u64 > 64 {
        return Err(Error::Budget(format!("shift exponent {i} is too large")));
    }
    FourierCochain::from_shifts(level, vec![(level.prime().pow(i), rat_int(1))])
}

/// Shift a cochain by a monic polynomial: (f|B_m) has constant part
/// f0(pi^{k - deg m}) and coefficients looked up at the index divided
/// by m.
pub fn b_shift(f: &FourierCochain, m: &Poly) -> Result<FourierCochain> {
    if m.is_zero() || !m.is_monic() {
        return Err(Error::OutOfRange("B-shift needs a monic polynomial".into()));
    }
    FourierCochain::from_shifts(
        f.level(),
        f.shifts
            .iter()
            .map(|(d, w)| (d.mul(m), w.clone()))
            .collect(),
    )
}

/// The Eisenstein element E = (|p| w - (|p|+1) (w|B_p) + (w|B_{p^2}))
/// / ((q-1)(q^2-1)) at a level with r >= 2.
pub fn eisenstein_en(level: &Level) -> Result<FourierCochain> {
    if level.r() < 2 {
        return Err(Error::BadExponent(
            "the Eisenstein element needs r >= 2".into(),
        ));
    }
    let q = level.q() as i64;
    let scale = Rat::new(1.into(), ((q - 1) * (q * q - 1)).into());
    eisenstein_numerator(level, &scale)
}

/// The evaluation model of the image of C' under the modular-unit map:
/// the same numerator as the Eisenstein element, scaled by
/// 1/((q-1)(|p|^2-1)|p|^{r-2}).
pub fn g_of_cprime(level: &Level) -> Result<FourierCochain> {
    if level.r() < 2 {
        return Err(Error::BadExponent(
            "the modular-unit image of C' needs r >= 2".into(),
        ));
    }
    let q = level.q() as i64;
    let np = level.norm_p();
    let denom = Rat::from_integer(((q - 1) * ((np * np) as i64 - 1)).into())
        * rat_pow(np, level.r() as i64 - 2);
    eisenstein_numerator(level, &denom.recip())
}

fn eisenstein_numerator(level: &Level, scale: &Rat) -> Result<FourierCochain> {
    let np = level.norm_p() as i64;
    let p = level.prime().clone();
    FourierCochain::from_shifts(
        level,
        vec![
            (Poly::one(level.fq()), rat_int(np) * scale),
            (p.clone(), rat_int(-(np + 1)) * scale),
            (p.pow(2), scale.clone()),
        ],
    )
}

/// Exact edge evaluation with per-field caches: the F_q^*-orbit
/// character sums (computed once, in Q(zeta_p), asserted rational) and a
/// sigma table over monic polynomials, grown on demand.
pub struct Evaluator {
    fq: FqConfig,
    /// orbit_sums[t] = sum over alpha in F_q^* of eta0(Tr(alpha t)),
    /// indexed by element index.
    orbit_sums: Vec<Rat>,
    /// sigma[enc(n)] = sum of |e| over monic e | n, for monic n with
    /// deg n <= sigma_degree.
    sigma: Vec<i64>,
    sigma_degree: i64,
}

fn encode(m: &Poly, q: usize) -> usize {
    let mut acc = 0usize;
    for &c in m.coeffs().iter().rev() {
        acc = acc * q + c.index() as usize;
    }
    acc
}

impl Evaluator {
    pub fn new(fq: &FqConfig) -> Evaluator {
        let p = fq.p();
        let mut orbit_sums = Vec::with_capacity(fq.q() as usize);
        for t in fq.elements() {
            let mut acc = CycRat::zero(p);
            for alpha in fq.nonzero_elements() {
                acc = acc.add(&CycRat::eta0(p, fq.trace_to_prime_field(fq.mul(alpha, t))));
            }
            orbit_sums.push(
                acc.as_rational()
                    .expect("full multiplicative orbit sums are rational"),
            );
        }
        Evaluator {
            fq: fq.clone(),
            orbit_sums,
            sigma: Vec::new(),
            sigma_degree: -1,
        }
    }

    pub fn fq(&self) -> &FqConfig {
        &self.fq
    }

    fn ensure_sigma(&mut self, degree: i64) -> Result<()> {
        if degree <= self.sigma_degree {
            return Ok(());
        }
        let q = self.fq.q() as u64;
        let size = q
            .checked_pow(degree as u32 + 1)
            .filter(|&s| s <= MAX_EVAL_TERMS)
            .ok_or_else(|| {
                Error::Budget(format!(
                    "sigma table for degree {degree} at q={q} exceeds the evaluation budget"
                ))
            })?;
        let mut sigma = vec![0i64; size as usize];
        for d_deg in 0..=degree as usize {
            let norm_d = q.pow(d_deg as u32) as i64;
            for d in monic_polys_of_degree(&self.fq, d_deg) {
                for e_deg in 0..=(degree as usize - d_deg) {
                    for e in monic_polys_of_degree(&self.fq, e_deg) {
                        sigma[encode(&d.mul(&e), q as usize)] += norm_d;
                    }
                }
            }
        }
        self.sigma = sigma;
        self.sigma_degree = degree;
        Ok(())
    }

    /// The pi^1 coefficient of m*y for a polynomial m and an exact tail
    /// y: sum_i m_i y_{1+i}.
    fn a1_of_product(&self, m: &Poly, y: &Laurent) -> Result<FqElem> {
        let mut acc = FqElem::zero();
        for (i, &mi) in m.coeffs().iter().enumerate() {
            if mi.is_zero() {
                continue;
            }
            let yi = y.coeff(1 + i as i64)?;
            acc = self.fq.add(acc, self.fq.mul(mi, yi));
        }
        Ok(acc)
    }

    /// Evaluate a cochain at an edge, exactly.
    pub fn eval(&mut self, f: &FourierCochain, e: &Edge) -> Result<Rat> {
        if f.fq() != &self.fq || e.fq() != &self.fq {
            return Err(Error::LevelMismatch(
                "cochain, edge, and evaluator must share one base field".into(),
            ));
        }
        let k = e.k();
        let mut total = f.constant_coefficient(k);
        if k >= 2 {
            let cap = k - 2;
            let q = self.fq.q() as u64;
            if cap >= 63
                || q
                    .checked_pow(cap as u32 + 1)
                    .is_none_or(|terms| terms > MAX_EVAL_TERMS)
            {
                return Err(Error::Budget(format!(
                    "evaluation at edge level {k} needs q^{} expansion terms",
                    k - 1
                )));
            }
            self.ensure_sigma(cap)?;
            let w = ((q * q - 1) * (q - 1)) as i64;
            for (d, weight) in &f.shifts {
                let deg_d = d.degree().unwrap() as i64;
                if deg_d > cap {
                    continue;
                }
                // Per monic cofactor n: the index coefficient at
                // (d*n, cap) is weight * sigma(n) W q^{-1-deg n} scaled by
                // q^{deg d + deg n - cap}, so the power of q collapses to
                // deg d - cap - 1, independent of n.
                let coeff_scale =
                    weight * Rat::from_integer(w.into()) * rat_pow(q, deg_d - cap - 1);
                for n_deg in 0..=(cap - deg_d) as usize {
                    for n in monic_polys_of_degree(&self.fq, n_deg) {
                        let sigma = self.sigma[encode(&n, q as usize)];
                        let m = d.mul(&n);
                        let t = self.a1_of_product(&m, e.y())?;
                        let orbit = &self.orbit_sums[t.index() as usize];
                        if !orbit.is_zero() {
                            total += &coeff_scale * rat_int(sigma) * orbit;
                        }
                    }
                }
            }
        }
        if e.eps() == 1 {
            total = -total;
        }
        Ok(total)
    }
}

/// Enumerate the tails u = sum_{e=1}^{k-1} c_e pi^e, i.e. the classes of
/// (pi)/(pi^k), calling the visitor on each.
fn for_each_tail<F>(fq: &FqConfig, k: i64, mut visit: F) -> Result<()>
where
    F: FnMut(&Laurent) -> Result<()>,
{
    if k < 1 {
        return Err(Error::OutOfRange(format!(
            "tail classes mod pi^{k} need k >= 1"
        )));
    }
    let q = fq.q() as u64;
    let len = (k - 1) as usize;
    if len >= 64 || q.checked_pow(len as u32).is_none_or(|n| n > MAX_EVAL_TERMS) {
        return Err(Error::Budget(format!(
            "enumerating q^{len} tails exceeds the evaluation budget"
        )));
    }
    let mut digits = vec![0u32; len];
    loop {
        let coeffs: Result<Vec<FqElem>> = digits.iter().map(|&i| fq.element(i)).collect();
        let u = Laurent::from_terms(fq, 1, coeffs?, crate::laurent::Prec::Exact);
        visit(&u)?;
        let mut pos = 0;
        loop {
            if pos == len {
                return Ok(());
            }
            digits[pos] += 1;
            if digits[pos] < q as u32 {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Recover the constant Fourier part f0(pi^k) from edge values by the
/// defining sum q^{1-k} * sum over u in (pi)/(pi^k) of f((pi^k, u; 0,1)).
pub fn constant_from_values<F>(fq: &FqConfig, k: i64, mut value: F) -> Result<Rat>
where
    F: FnMut(&Edge) -> Result<Rat>,
{
    let mut acc = Rat::zero();
    for_each_tail(fq, k, |u| {
        acc += value(&Edge::new(k, u, 0)?)?;
        Ok(())
    })?;
    Ok(acc * rat_pow(fq.q() as u64, 1 - k))
}

/// Recover the anchor coefficient c(m) = F(m, deg m) from edge values by
/// the defining sum q^{-1-deg m} * sum over u in (pi)/(pi^{2+deg m}) of
/// f((pi^{2+deg m}, u; 0,1)) eta(-m u). The cyclotomic accumulation is
/// asserted rational.
pub fn coefficient_from_values<F>(fq: &FqConfig, m: &Poly, mut value: F) -> Result<Rat>
where
    F: FnMut(&Edge) -> Result<Rat>,
{
    if m.is_zero() {
        return Err(Error::ZeroInput);
    }
    let deg_m = m.degree().unwrap() as i64;
    let k = deg_m + 2;
    let p = fq.p();
    let mut acc = CycRat::zero(p);
    for_each_tail(fq, k, |u| {
        let v = value(&Edge::new(k, u, 0)?)?;
        let mut a1 = FqElem::zero();
        for (i, &mi) in m.coeffs().iter().enumerate() {
            a1 = fq.add(a1, fq.mul(mi, u.coeff(1 + i as i64)?));
        }
        let character = CycRat::eta0(p, fq.trace_to_prime_field(fq.neg(a1)));
        acc = acc.add(&character.mul_rat(&v));
        Ok(())
    })?;
    acc.mul_rat(&rat_pow(fq.q() as u64, -1 - deg_m)).as_rational()
}

/// A Hecke operator: U uses the level's prime; T(m) sums over the
/// upper-triangular cosets of a monic m prime to the level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeckeOp {
    U,
    T(Poly),
}

/// The coset representatives [[a, b],[0, d]] of an operator at a level.
pub fn hecke_cosets(level: &Level, op: &HeckeOp) -> Result<Vec<GMatrix>> {
    let fq = level.fq();
    let mut out = Vec::new();
    match op {
        HeckeOp::U => {
            let d = level.prime();
            for b in polys_of_degree_below(fq, d.degree().unwrap()) {
                out.push(GMatrix::from_polys(&Poly::one(fq), &b, &Poly::zero(fq), d));
            }
        }
        HeckeOp::T(m) => {
            if m.is_zero() || !m.is_monic() {
                return Err(Error::OutOfRange(
                    "Hecke index must be a monic nonzero polynomial".into(),
                ));
            }
            let deg_m = m.degree().unwrap();
            for a_deg in 0..=deg_m {
                for a in monic_polys_of_degree(fq, a_deg) {
                    let (d, rem) = m.divrem(&a)?;
                    if !rem.is_zero() || !a.gcd(level.prime()).is_one() {
                        continue;
                    }
                    for b in polys_of_degree_below(fq, d.degree().unwrap()) {
                        out.push(GMatrix::from_polys(&a, &b, &Poly::zero(fq), &d));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Apply a Hecke operator to a cochain at one edge, value-wise:
/// sum over cosets M of eval(f, normal form of M * representative(e)).
pub fn hecke_apply(
    ev: &mut Evaluator,
    f: &FourierCochain,
    op: &HeckeOp,
    e: &Edge,
) -> Result<Rat> {
    let mut acc = Rat::zero();
    for m in hecke_cosets(f.level(), op)? {
        acc += ev.eval(f, &translate(&m, e)?)?;
    }
    Ok(acc)
}
