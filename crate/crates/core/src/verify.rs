//! The runnable verification catalog: every closed-form identity and
//! every sampled structural property, organized into named suites that
//! produce stable, machine-comparable check records.
//!
//! Determinism: each check derives its random stream from
//! sha256(global seed, check name, case tag), so execution order and
//! parallel scheduling cannot change which cases are sampled, and the
//! sorted record list is byte-stable for a fixed (config, seed).

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::classgroup::{
    class_group_structure, consistency_report, ell_primary, order_of_cprime, torsion_prediction,
    AbelianStructure,
};
use crate::cochain::{
    b_shift, coefficient_from_values, constant_from_values, delta_cochain, eisenstein_en, eta,
    g_of_cprime, hecke_apply, hecke_cosets, Evaluator, FourierCochain, HeckeOp,
};
use crate::divisors::{
    alpha_pull, beta_cokernel, beta_push, degree, delta_divisor, standard_divisors, up_action,
    HeightDivisor,
};
use crate::fq::{FqConfig, FqElem};
use crate::intmat::{smith_normal_form, IntMatrix};
use crate::laurent::{Laurent, Prec};
use crate::level::{
    cusp_count, cusp_equal, eisenstein_constants, enumerate_cusps, make_level, Level,
};
use crate::poly::{is_prime_poly, monic_polys_of_degree, polys_of_degree_below, Poly};
use crate::tree::{
    edge_normal_form, end_edge, origin, reverse, terminus, translate, vertex_star, Edge, GMatrix,
    Vertex,
};
use crate::{rat_int, rat_pow, Error, Rat, Result};

/// The suite names accepted by `run_suites` (and the CLI), in report order.
pub const SUITE_NAMES: &[&str] = &[
    "algebra",
    "classgroup",
    "cusps",
    "degeneracy",
    "eisenstein",
    "fourier",
    "hecke",
    "tree",
];

/// One verified statement: `pass` is exact equality of the `expected`
/// and `got` strings, both rendered canonically.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub params: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl CheckRecord {
    fn exact(suite: &str, name: &str, params: &str, expected: String, got: String) -> CheckRecord {
        CheckRecord {
            suite: suite.to_string(),
            name: name.to_string(),
            params: params.to_string(),
            pass: expected == got,
            expected,
            got,
        }
    }
}

/// Knobs shared by all suites: the global sampling seed and the largest
/// edge exponent k the samplers may touch.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub depth: i64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 42, depth: 8 }
    }
}

/// Resolve a requested suite name ("all" or one catalog entry) to the
/// static names it covers.
pub fn expand_suites(requested: &str) -> Result<Vec<&'static str>> {
    if requested == "all" {
        return Ok(SUITE_NAMES.to_vec());
    }
    SUITE_NAMES
        .iter()
        .find(|n| **n == requested)
        .map(|n| vec![*n])
        .ok_or_else(|| {
            Error::OutOfRange(format!(
                "unknown suite '{requested}' (expected one of: all, {})",
                SUITE_NAMES.join(", ")
            ))
        })
}

/// Run the named suites and return their records sorted by
/// (suite, name, params).
pub fn run_suites(names: &[&str], cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    if cfg.depth < 4 {
        return Err(Error::OutOfRange(format!(
            "depth {} is below the minimum of 4",
            cfg.depth
        )));
    }
    let mut expanded: Vec<&'static str> = Vec::new();
    for n in names {
        for s in expand_suites(n)? {
            if !expanded.contains(&s) {
                expanded.push(s);
            }
        }
    }
    let nested: Result<Vec<Vec<CheckRecord>>> = expanded
        .par_iter()
        .map(|name| run_one_suite(name, cfg))
        .collect();
    let mut records: Vec<CheckRecord> = nested?.into_iter().flatten().collect();
    records.sort_by(|a, b| {
        (&a.suite, &a.name, &a.params).cmp(&(&b.suite, &b.name, &b.params))
    });
    Ok(records)
}

fn run_one_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    match name {
        "algebra" => suite_algebra(cfg),
        "classgroup" => suite_classgroup(cfg),
        "cusps" => suite_cusps(cfg),
        "degeneracy" => suite_degeneracy(cfg),
        "eisenstein" => suite_eisenstein(cfg),
        "fourier" => suite_fourier(cfg),
        "hecke" => suite_hecke(cfg),
        "tree" => suite_tree(cfg),
        other => Err(Error::OutOfRange(format!("unknown suite '{other}'"))),
    }
}

// ---------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------

/// Per-check deterministic random stream.
fn rng_for(cfg: &SuiteConfig, check: &str, case: &str) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(cfg.seed.to_le_bytes());
    h.update(check.as_bytes());
    h.update([0u8]);
    h.update(case.as_bytes());
    let digest = h.finalize();
    ChaCha8Rng::seed_from_u64(u64::from_le_bytes(digest[..8].try_into().unwrap()))
}

/// Aggregates many sampled cases into one record.
struct Tally {
    total: u64,
    failed: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            total: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn case(&mut self, pass: bool, detail: impl FnOnce() -> String) {
        self.total += 1;
        if !pass {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn record(self, suite: &str, name: &str, params: &str) -> CheckRecord {
        let expected = format!("{} cases pass", self.total);
        let got = if self.failed == 0 {
            expected.clone()
        } else {
            format!(
                "{} of {} cases fail; first: {}",
                self.failed,
                self.total,
                self.first_failure.unwrap_or_default()
            )
        };
        CheckRecord::exact(suite, name, params, expected, got)
    }
}

/// The working grid of base fields and primes: q = 2 with T and
/// T^2+T+1, q = 3 with T and T^2+1.
fn grid_pairs() -> Vec<(FqConfig, Poly)> {
    let f2 = FqConfig::prime_field(2).expect("F_2");
    let f3 = FqConfig::prime_field(3).expect("F_3");
    let pairs = vec![
        (f2.clone(), Poly::t(&f2)),
        (f2.clone(), Poly::parse(&f2, "T^2+T+1").expect("prime over F_2")),
        (f3.clone(), Poly::t(&f3)),
        (f3.clone(), Poly::parse(&f3, "T^2+1").expect("prime over F_3")),
    ];
    pairs
}

fn grid_levels(r_lo: u32, r_hi: u32) -> Vec<Level> {
    let mut out = Vec::new();
    for (fq, p) in grid_pairs() {
        for r in r_lo..=r_hi {
            out.push(make_level(&fq, &p, r).expect("grid level"));
        }
    }
    out
}

fn level_tag(l: &Level) -> String {
    l.to_level_string()
}

fn random_element(fq: &FqConfig, rng: &mut ChaCha8Rng) -> FqElem {
    fq.element(rng.gen_range(0..fq.q())).expect("element index in range")
}

fn random_unit(fq: &FqConfig, rng: &mut ChaCha8Rng) -> FqElem {
    fq.element(rng.gen_range(1..fq.q())).expect("unit index in range")
}

/// Random polynomial of degree <= max_deg (possibly zero).
fn random_poly(fq: &FqConfig, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let coeffs: Vec<i64> = (0..=max_deg)
        .map(|_| rng.gen_range(0..fq.q()) as i64)
        .collect();
    Poly::from_int_coeffs(fq, &coeffs)
}

/// Random exact tail with support in [lo, hi).
fn random_tail(fq: &FqConfig, rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Laurent {
    if lo >= hi {
        return Laurent::zero(fq);
    }
    let coeffs: Vec<FqElem> = (lo..hi).map(|_| random_element(fq, rng)).collect();
    Laurent::from_terms(fq, lo, coeffs, Prec::Exact)
}

fn random_edge(fq: &FqConfig, rng: &mut ChaCha8Rng, k_lo: i64, k_hi: i64) -> Edge {
    let k = rng.gen_range(k_lo..=k_hi);
    let y = random_tail(fq, rng, k - 5, k);
    let eps = rng.gen_range(0..2u8);
    Edge::new(k, &y, eps).expect("sampled edge is valid")
}

/// Monic primes over fq of degree 1..=2, excluding `avoid`.
fn small_primes(fq: &FqConfig, avoid: &Poly) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for d in 1..=2usize {
        for f in monic_polys_of_degree(fq, d) {
            if f != *avoid && is_prime_poly(&f)? {
                out.push(f);
            }
        }
    }
    Ok(out)
}

fn fmt_structure(s: &AbelianStructure) -> String {
    let parts: Vec<String> = s.factors_descending().iter().map(|f| f.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

// ---------------------------------------------------------------------
// algebra: foundation arithmetic obeys its laws
// ---------------------------------------------------------------------

fn algebra_fields() -> Vec<FqConfig> {
    vec![
        FqConfig::prime_field(2).expect("F_2"),
        FqConfig::prime_field(3).expect("F_3"),
        FqConfig::parse("q=4;modulus=x^2+x+1").expect("F_4"),
    ]
}

fn suite_algebra(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let suite = "algebra";
    let mut records = Vec::new();

    for fq in algebra_fields() {
        let tag = format!("q={}", fq.q());
        let mut rng = rng_for(cfg, "algebra/poly-ring-axioms", &tag);
        let mut tally = Tally::new();
        for _ in 0..150 {
            let a = random_poly(&fq, &mut rng, 6);
            let b = random_poly(&fq, &mut rng, 6);
            let c = random_poly(&fq, &mut rng, 6);
            let comm = a.mul(&b) == b.mul(&a);
            let assoc = a.mul(&b).mul(&c) == a.mul(&b.mul(&c));
            let dist = a.add(&b).mul(&c) == a.mul(&c).add(&b.mul(&c));
            tally.case(comm && assoc && dist, || format!("a={a} b={b} c={c}"));
        }
        records.push(tally.record(suite, "poly-ring-axioms", &tag));

        let mut rng = rng_for(cfg, "algebra/poly-divrem", &tag);
        let mut tally = Tally::new();
        for _ in 0..120 {
            let a = random_poly(&fq, &mut rng, 7);
            let mut b = random_poly(&fq, &mut rng, 4);
            if b.is_zero() {
                b = Poly::one(&fq);
            }
            let (quot, rem) = a.divrem(&b)?;
            let recompose = quot.mul(&b).add(&rem) == a;
            let small = rem.is_zero() || rem.degree() < b.degree();
            tally.case(recompose && small, || format!("a={a} b={b}"));
        }
        records.push(tally.record(suite, "poly-divrem", &tag));

        let mut rng = rng_for(cfg, "algebra/poly-gcd", &tag);
        let mut tally = Tally::new();
        for _ in 0..120 {
            let a = random_poly(&fq, &mut rng, 5);
            let b = random_poly(&fq, &mut rng, 5);
            let g = a.gcd(&b);
            if a.is_zero() && b.is_zero() {
                tally.case(g.is_zero(), || "gcd(0,0) must be 0".to_string());
                continue;
            }
            let divides = a.rem(&g)?.is_zero() && b.rem(&g)?.is_zero();
            let mut m = random_poly(&fq, &mut rng, 2).monic_associate();
            if m.is_zero() {
                m = Poly::one(&fq);
            }
            let scaled = a.mul(&m).gcd(&b.mul(&m)) == g.mul(&m);
            tally.case(g.is_monic() && divides && scaled, || format!("a={a} b={b}"));
        }
        records.push(tally.record(suite, "poly-gcd", &tag));

        let mut rng = rng_for(cfg, "algebra/laurent-arithmetic", &tag);
        let mut tally = Tally::new();
        for _ in 0..100 {
            let x = random_tail(&fq, &mut rng, -3, 3).truncate(3)?;
            let y = random_tail(&fq, &mut rng, -2, 4).truncate(4)?;
            let z = random_tail(&fq, &mut rng, 0, 5);
            let lhs = x.add(&y).mul(&z);
            let rhs = x.mul(&z).add(&y.mul(&z));
            let dist = lhs.sub(&rhs).is_zero_within_precision();
            // A unit: nonzero constant term, exact tail.
            let mut u = random_tail(&fq, &mut rng, 1, 4);
            u = u.add(&Laurent::constant(&fq, random_unit(&fq, &mut rng)));
            let inv_ok = match u.inv(6) {
                Ok(ui) => u.mul(&ui).sub(&Laurent::one(&fq)).is_zero_within_precision(),
                Err(_) => false,
            };
            tally.case(dist && inv_ok, || format!("x={x} y={y} z={z} u={u}"));
        }
        records.push(tally.record(suite, "laurent-arithmetic", &tag));

        let mut rng = rng_for(cfg, "algebra/eta-multiplicative", &tag);
        let mut tally = Tally::new();
        for _ in 0..100 {
            let x = random_tail(&fq, &mut rng, 1, 6);
            let y = random_tail(&fq, &mut rng, 1, 6);
            let ok = eta(&x.add(&y))? == eta(&x)?.mul(&eta(&y)?);
            tally.case(ok, || format!("x={x} y={y}"));
        }
        records.push(tally.record(suite, "eta-multiplicative", &tag));
    }

    for fq in [
        FqConfig::prime_field(2).expect("F_2"),
        FqConfig::prime_field(3).expect("F_3"),
    ] {
        let tag = format!("q={}", fq.q());
        let mut tally = Tally::new();
        for d in 1..=4usize {
            for f in monic_polys_of_degree(&fq, d) {
                let mut has_factor = false;
                'outer: for e in 1..d {
                    for g in monic_polys_of_degree(&fq, e) {
                        if f.rem(&g)?.is_zero() {
                            has_factor = true;
                            break 'outer;
                        }
                    }
                }
                tally.case(is_prime_poly(&f)? == !has_factor, || format!("f={f}"));
            }
        }
        records.push(tally.record(suite, "irreducibility-bruteforce", &tag));
    }

    let mut rng = rng_for(cfg, "algebra/smith-postconditions", "global");
    let mut tally = Tally::new();
    for _ in 0..25 {
        let rows = rng.gen_range(2..=5usize);
        let cols = rng.gen_range(2..=5usize);
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9i64)).collect())
            .collect();
        let m = IntMatrix::from_rows(&data)?;
        let snf = smith_normal_form(&m);
        let mut diag = IntMatrix::zero(rows, cols);
        for (i, f) in snf.factors.iter().enumerate() {
            diag.set(i, i, f.clone());
        }
        let product_ok = snf.u.mul(&m)?.mul(&snf.v)? == diag;
        let chain_ok = snf
            .factors
            .windows(2)
            .all(|w| w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        let unimodular = snf.u.det()?.abs().is_one() && snf.v.det()?.abs().is_one();
        let det_ok = if rows == cols {
            let prod = snf.factors.iter().fold(num_bigint::BigInt::one(), |acc, f| acc * f);
            m.det()?.abs() == prod.abs()
        } else {
            true
        };
        tally.case(product_ok && chain_ok && unimodular && det_ok, || {
            format!("matrix {data:?}")
        });
    }
    records.push(tally.record(suite, "smith-postconditions", "random 2..=5 square and rectangular"));

    Ok(records)
}

// ---------------------------------------------------------------------
// classgroup: structure theorem, predictions, orders
// ---------------------------------------------------------------------

const SMALL_PRIMES_TO_50: &[u64] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

fn suite_classgroup(_cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let suite = "classgroup";
    let mut records = Vec::new();

    // Frozen structure instances.
    let f2 = FqConfig::prime_field(2)?;
    let f3 = FqConfig::prime_field(3)?;
    let frozen: Vec<(Level, &str)> = vec![
        (
            make_level(&f2, &Poly::parse(&f2, "T^2+T+1")?, 2)?,
            "[5]",
        ),
        (make_level(&f2, &Poly::t(&f2), 5)?, "[16,8,8]"),
        (make_level(&f3, &Poly::t(&f3), 2)?, "[]"),
    ];
    for (level, expected) in frozen {
        let got = fmt_structure(&class_group_structure(&level));
        records.push(CheckRecord::exact(
            suite,
            "frozen-structure",
            &level_tag(&level),
            expected.to_string(),
            got,
        ));
    }

    let level_records: Result<Vec<Vec<CheckRecord>>> = grid_levels(1, 5)
        .par_iter()
        .map(|level| {
            let mut recs = Vec::new();
            let tag = level_tag(level);
            let q = level.q() as u64;
            let structure = class_group_structure(level);

            if level.r() == 1 {
                // Base level: the group is cyclic of the small constant's order.
                let (_, n_const) = eisenstein_constants(level);
                let expected = AbelianStructure::from_orders_u64(&[n_const])?;
                recs.push(CheckRecord::exact(
                    suite,
                    "base-level-structure",
                    &tag,
                    fmt_structure(&expected),
                    fmt_structure(&structure),
                ));
            }

            if level.r() >= 2 {
                let mut tally = Tally::new();
                for &ell in SMALL_PRIMES_TO_50 {
                    if (q * (q - 1)) % ell == 0 {
                        continue;
                    }
                    let got = ell_primary(&structure, ell)?;
                    let predicted = torsion_prediction(level, ell)?;
                    tally.case(got == predicted, || {
                        format!(
                            "ell={ell}: structure part {} vs prediction {}",
                            fmt_structure(&got),
                            fmt_structure(&predicted)
                        )
                    });
                }
                recs.push(tally.record(suite, "ell-primary-matches-prediction", &tag));

                let report = consistency_report(level)?;
                recs.push(CheckRecord::exact(
                    suite,
                    "consistency-report",
                    &tag,
                    "all checks pass".to_string(),
                    if report.all_pass() {
                        "all checks pass".to_string()
                    } else {
                        "some check fails".to_string()
                    },
                ));
            }

            if level.r() >= 2 {
                let (m, _) = eisenstein_constants(level);
                let np = level.norm_p();
                let expected = num_bigint::BigInt::from(m)
                    * num_bigint::BigInt::from(np).pow(level.r() - 2);
                recs.push(CheckRecord::exact(
                    suite,
                    "cprime-order",
                    &tag,
                    expected.to_string(),
                    order_of_cprime(level)?.to_string(),
                ));
            }
            Ok(recs)
        })
        .collect();
    records.extend(level_records?.into_iter().flatten());
    Ok(records)
}

// ---------------------------------------------------------------------
// cusps: closed-form counts vs brute-force orbit enumeration
// ---------------------------------------------------------------------

fn suite_cusps(_cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let suite = "cusps";
    let mut jobs = Vec::new();
    for (fq, p) in grid_pairs() {
        let np = fq.q().pow(p.degree().unwrap() as u32) as u64;
        let mut r = 1u32;
        while np.pow(r) <= 243 {
            jobs.push(make_level(&fq, &p, r)?);
            r += 1;
        }
    }
    let records: Result<Vec<CheckRecord>> = jobs
        .par_iter()
        .map(|level| {
            let tag = level_tag(level);
            let fq = level.fq();
            let p = level.prime();
            let ambient = level.r() as usize * p.degree().unwrap();
            let mut tally = Tally::new();
            let mut total = 0u64;
            for i in 0..=level.r() {
                // Brute force: all residues coprime to p, classified by
                // the pairwise equivalence test.
                let mut reps: Vec<Poly> = Vec::new();
                for a in polys_of_degree_below(fq, ambient) {
                    if !a.gcd(p).is_one() {
                        continue;
                    }
                    let mut found = false;
                    for rep in &reps {
                        if cusp_equal(level, &a, i, rep, i)? {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        reps.push(a);
                    }
                }
                let closed = cusp_count(level, i)?;
                total += reps.len() as u64;
                tally.case(reps.len() as u64 == closed, || {
                    format!("height {i}: brute {} vs closed form {closed}", reps.len())
                });
            }
            let enumerated = enumerate_cusps(level).len() as u64;
            tally.case(total == enumerated, || {
                format!("total {total} vs enumerated {enumerated}")
            });
            Ok(tally.record(suite, "counts-vs-bruteforce", &tag))
        })
        .collect();
    records
}

// ---------------------------------------------------------------------
// degeneracy: degree laws, pushforward identities, cokernel
// ---------------------------------------------------------------------

fn random_divisor(level: &Level, rng: &mut ChaCha8Rng) -> HeightDivisor {
    let coeffs: Vec<Rat> = (0..=level.r())
        .map(|_| {
            let num = rng.gen_range(-9..=9i64);
            let den = rng.gen_range(1..=4i64);
            Rat::new(num.into(), den.into())
        })
        .collect();
    HeightDivisor::from_rat_coeffs(level, coeffs).expect("coefficient count matches level")
}

fn suite_degeneracy(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let suite = "degeneracy";
    let pair_records: Result<Vec<Vec<CheckRecord>>> = grid_pairs()
        .par_iter()
        .map(|(fq, p)| {
            let mut recs = Vec::new();
            let pair_tag = format!("q={} p={}", fq.q(), p);
            let np = fq.q().pow(p.degree().unwrap() as u32) as i64;

            let mut tally = Tally::new();
            for r in 1..=4u32 {
                let level = make_level(fq, p, r)?;
                let mut rng =
                    rng_for(cfg, "degeneracy/degree-laws-alpha", &format!("{pair_tag} r={r}"));
                for _ in 0..100 {
                    let d = random_divisor(&level, &mut rng);
                    let pulled = alpha_pull(&d)?;
                    tally.case(degree(&pulled) == degree(&d) * rat_int(np), || {
                        format!("r={r} divisor {d}")
                    });
                }
            }
            for r in 2..=5u32 {
                let level = make_level(fq, p, r)?;
                let mut rng =
                    rng_for(cfg, "degeneracy/degree-laws-beta", &format!("{pair_tag} r={r}"));
                for _ in 0..100 {
                    let d = random_divisor(&level, &mut rng);
                    let pushed = beta_push(&d)?;
                    tally.case(degree(&pushed) == degree(&d), || format!("r={r} divisor {d}"));
                }
            }
            recs.push(tally.record(suite, "degree-laws", &pair_tag));

            let mut tally = Tally::new();
            for r in 2..=5u32 {
                let level = make_level(fq, p, r)?;
                let below = level.with_r(r - 1)?;
                let pushed = beta_push(&delta_divisor(1, &level)?)?;
                let scaled = delta_divisor(0, &below)?.scale_int(np);
                tally.case(pushed == scaled, || format!("r={r}: {pushed} vs {scaled}"));
            }
            recs.push(tally.record(suite, "discriminant-pushforward", &pair_tag));

            let mut tally = Tally::new();
            for r in 2..=5u32 {
                let level = make_level(fq, p, r)?;
                let (_, cprime) = standard_divisors(&level)?;
                tally.case(up_action(&cprime)?.is_zero(), || format!("r={r}"));
            }
            recs.push(tally.record(suite, "up-annihilates-cprime", &pair_tag));

            for r in 2..=6u32 {
                let level = make_level(fq, p, r)?;
                let expected = AbelianStructure::from_orders_u64(&vec![
                    np as u64;
                    (r as usize / 2).saturating_sub(1)
                ])?;
                let got = beta_cokernel(&level)?;
                recs.push(CheckRecord::exact(
                    suite,
                    "beta-cokernel",
                    &level_tag(&level),
                    fmt_structure(&expected),
                    fmt_structure(&got),
                ));
            }
            Ok(recs)
        })
        .collect();
    Ok(pair_records?.into_iter().flatten().collect())
}

// ---------------------------------------------------------------------
// eisenstein: closed forms along the end, the element's identities,
// annihilation, integrality
// ---------------------------------------------------------------------

fn suite_eisenstein(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let suite = "eisenstein";
    let mut records = Vec::new();

    // Closed forms along the standard end, for the three (q, p) pairs
    // with hand-checkable sizes.
    let f2 = FqConfig::prime_field(2)?;
    let f3 = FqConfig::prime_field(3)?;
    let closed_form_pairs = vec![
        (f2.clone(), Poly::t(&f2)),
        (f3.clone(), Poly::t(&f3)),
        (f2.clone(), Poly::parse(&f2, "T^2+T+1")?),
    ];
    let cf_records: Result<Vec<CheckRecord>> = closed_form_pairs
        .par_iter()
        .map(|(fq, p)| {
            let level = make_level(fq, p, 3)?;
            let tag = format!("q={} p={}", fq.q(), p);
            let q = fq.q() as i64;
            let np = level.norm_p();
            let degp = p.degree().unwrap() as i64;
            let mut ev = Evaluator::new(fq);
            let mut tally = Tally::new();
            let w = delta_cochain(0, &level)?;
            for j in 0..=5u32 {
                let e = end_edge(&level, j)?;
                let expected = rat_int(-(q - 1) * (q.pow(j + 1) - q - 1));
                let got = ev.eval(&w, &e)?;
                tally.case(got == expected, || format!("plain j={j}: {got} vs {expected}"));
            }
            for c in 1..=3u32 {
                let wc = delta_cochain(c, &level)?;
                let j_lo = ((c as i64 - 2) * degp).max(0) as u32;
                for j in j_lo..=5 {
                    let e = end_edge(&level, j)?;
                    let expected = rat_int(-(q - 1))
                        * (rat_pow(q as u64, j as i64 + 1) * rat_pow(np, 2 - c as i64)
                            - rat_int(q + 1));
                    let got = ev.eval(&wc, &e)?;
                    tally.case(got == expected, || {
                        format!("shift c={c} j={j}: {got} vs {expected}")
                    });
                }
            }
            Ok(tally.record(suite, "end-closed-forms", &tag))
        })
        .collect();
    records.extend(cf_records?);

    // Hand anchor.
    {
        let level = make_level(&f2, &Poly::t(&f2), 2)?;
        let mut ev = Evaluator::new(&f2);
        let got = ev.eval(&delta_cochain(0, &level)?, &end_edge(&level, 0)?)?;
        records.push(CheckRecord::exact(
            suite,
            "end-anchor",
            "q=2 p=T j=0",
            "1".to_string(),
            fmt_rat(&got),
        ));
    }

    // Per grid level: the Eisenstein element and the modular-unit image.
    let level_records: Result<Vec<Vec<CheckRecord>>> = grid_levels(2, 5)
        .par_iter()
        .map(|level| {
            let mut recs = Vec::new();
            let tag = level_tag(level);
            let fq = level.fq();
            let q = level.q() as u64;
            let np = level.norm_p();
            let (m_const, _) = eisenstein_constants(level);
            let en = eisenstein_en(level)?;
            let g = g_of_cprime(level)?;
            let mut ev = Evaluator::new(fq);

            let mut tally = Tally::new();
            for k in -3..=cfg.depth {
                tally.case(en.constant_coefficient(k).is_zero(), || format!("k={k}"));
            }
            let low_edge = Edge::new(1, &Laurent::zero(fq), 0)?;
            tally.case(ev.eval(&en, &low_edge)?.is_zero(), || "low edge".to_string());
            recs.push(tally.record(suite, "en-constant-vanishes", &tag));

            recs.push(CheckRecord::exact(
                suite,
                "en-unit-coefficient",
                &tag,
                fmt_rat(&Rat::new(np.into(), q.into())),
                fmt_rat(&en.coefficient(&Poly::one(fq), 0)?),
            ));

            let mut tally = Tally::new();
            for j in 0..=5u32 {
                let e = end_edge(level, j)?;
                let expected = rat_pow(q, j as i64 + 1) * rat_int(m_const as i64);
                let got = ev.eval(&en, &e)?;
                tally.case(got == expected, || format!("j={j}: {got} vs {expected}"));
            }
            recs.push(tally.record(suite, "en-end-values", &tag));

            let probe = Edge::parse(fq, "k=2;y=pi^1;eps=0")?;
            recs.push(CheckRecord::exact(
                suite,
                "en-distinguished-edge",
                &tag,
                fmt_rat(&-Rat::new(np.into(), q.into())),
                fmt_rat(&ev.eval(&en, &probe)?),
            ));

            // The C' identity at the distinguished edge.
            let got = ev.eval(&g, &probe)? * rat_pow(np, level.r() as i64 - 2);
            recs.push(CheckRecord::exact(
                suite,
                "gcprime-distinguished-edge",
                &tag,
                fmt_rat(&-Rat::new(np.into(), (q * m_const).into())),
                fmt_rat(&got),
            ));

            // Annihilation by the Eisenstein ideal at sampled edges.
            let primes = small_primes(fq, level.prime())?;
            let mut rng = rng_for(cfg, "eisenstein/annihilation", &tag);
            let mut tally = Tally::new();
            for _ in 0..10 {
                let e = random_edge(fq, &mut rng, 1, 4.min(cfg.depth));
                let u_val = hecke_apply(&mut ev, &en, &HeckeOp::U, &e)?;
                tally.case(u_val.is_zero(), || format!("U at {e}: {u_val}"));
                let base = ev.eval(&en, &e)?;
                for qp in &primes {
                    let eig = rat_int(q.pow(qp.degree().unwrap() as u32) as i64 + 1);
                    let got = hecke_apply(&mut ev, &en, &HeckeOp::T(qp.clone()), &e)?;
                    let expected = &eig * &base;
                    tally.case(got == expected, || {
                        format!("T_({qp}) at {e}: {got} vs {expected}")
                    });
                }
            }
            recs.push(tally.record(suite, "eisenstein-ideal-annihilation", &tag));

            // Integrality of M |p|^{r-2} g(C') at sampled edges.
            let scale = rat_int(m_const as i64) * rat_pow(np, level.r() as i64 - 2);
            let mut rng = rng_for(cfg, "eisenstein/integrality", &tag);
            let mut tally = Tally::new();
            for _ in 0..50 {
                let e = random_edge(fq, &mut rng, 1, 5.min(cfg.depth));
                let v = ev.eval(&g, &e)? * &scale;
                tally.case(v.is_integer(), || format!("{e}: {v}"));
            }
            recs.push(tally.record(suite, "gcprime-integrality", &tag));

            Ok(recs)
        })
        .collect();
    records.extend(level_records?.into_iter().flatten());
    Ok(records)
}

// ---------------------------------------------------------------------
// fourier: inversion recovers the model; eta anchors
// ---------------------------------------------------------------------

fn suite_fourier(_cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let suite = "fourier";
    let mut records = Vec::new();

    // Anchored recoveries at q=2.
    {
        let f2 = FqConfig::prime_field(2)?;
        let level = make_level(&f2, &Poly::t(&f2), 2)?;
        let w = delta_cochain(0, &level)?;
        let mut ev = Evaluator::new(&f2);
        let e0 = Edge::parse(&f2, "k=2;y=0;eps=0")?;
        let e1 = Edge::parse(&f2, "k=2;y=pi^1;eps=0")?;
        records.push(CheckRecord::exact(
            suite,
            "anchor-values",
            "q=2 p=T",
            "1 and -2".to_string(),
            format!("{} and {}", ev.eval(&w, &e0)?, ev.eval(&w, &e1)?),
        ));
        let f0 = constant_from_values(&f2, 2, |e| ev.eval(&w, e))?;
        records.push(CheckRecord::exact(
            suite,
            "anchor-constant-recovery",
            "q=2 p=T k=2",
            "-1/2".to_string(),
            fmt_rat(&f0),
        ));
        let mut ev = Evaluator::new(&f2);
        let c1 = coefficient_from_values(&f2, &Poly::one(&f2), |e| ev.eval(&w, e))?;
        records.push(CheckRecord::exact(
            suite,
            "anchor-unit-recovery",
            "q=2 p=T",
            "3/2".to_string(),
            fmt_rat(&c1),
        ));
    }

    // Eta anchors.
    {
        let f2 = FqConfig::prime_field(2)?;
        let vals = [
            (Laurent::pi_pow(&f2, 1), "-1"),
            (Laurent::pi_pow(&f2, 2), "1"),
            (Laurent::zero(&f2), "1"),
        ];
        let mut tally = Tally::new();
        for (x, expected) in vals {
            let got = eta(&x)?.as_rational()?;
            tally.case(got.to_string() == expected, || format!("eta({x}) = {got}"));
        }
        records.push(tally.record(suite, "eta-anchors", "q=2"));
    }

    // Roundtrips on the family, all grid pairs at r = 2.
    let rt_records: Result<Vec<Vec<CheckRecord>>> = grid_pairs()
        .par_iter()
        .map(|(fq, p)| {
            let level = make_level(fq, p, 2)?;
            let tag = format!("q={} p={}", fq.q(), p);
            let family = [
                ("delta", delta_cochain(0, &level)?),
                ("delta-shift", delta_cochain(1, &level)?),
                ("eisenstein", eisenstein_en(&level)?),
            ];
            let mut recs = Vec::new();
            for (fname, f) in &family {
                let mut ev = Evaluator::new(fq);
                let mut tally = Tally::new();
                for k in 1..=6i64 {
                    let got = constant_from_values(fq, k, |e| ev.eval(f, e))?;
                    let expected = f.constant_coefficient(k);
                    tally.case(got == expected, || format!("k={k}: {got} vs {expected}"));
                }
                for d in 0..=2usize {
                    for m in monic_polys_of_degree(fq, d) {
                        let got = coefficient_from_values(fq, &m, |e| ev.eval(f, e))?;
                        let expected = f.coefficient(&m, d as i64)?;
                        tally.case(got == expected, || format!("m={m}: {got} vs {expected}"));
                    }
                }
                recs.push(tally.record(suite, &format!("roundtrip-{fname}"), &tag));
            }
            Ok(recs)
        })
        .collect();
    records.extend(rt_records?.into_iter().flatten());
    Ok(records)
}

// ---------------------------------------------------------------------
// hecke: eigen-identities at sampled edges
// ---------------------------------------------------------------------

fn suite_hecke(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let suite = "hecke";
    let pair_records: Result<Vec<Vec<CheckRecord>>> = grid_pairs()
        .par_iter()
        .map(|(fq, p)| {
            let level = make_level(fq, p, 2)?;
            let tag = format!("q={} p={}", fq.q(), p);
            let q = fq.q() as u64;
            let np = level.norm_p();
            let mut ev = Evaluator::new(fq);
            let mut recs = Vec::new();

            let w = delta_cochain(0, &level)?;
            let primes = small_primes(fq, level.prime())?;
            let mut rng = rng_for(cfg, "hecke/t-eigenvalue", &tag);
            let mut tally = Tally::new();
            for _ in 0..8 {
                let e = random_edge(fq, &mut rng, 1, 4.min(cfg.depth));
                let base = ev.eval(&w, &e)?;
                for qp in &primes {
                    let eig = rat_int(q.pow(qp.degree().unwrap() as u32) as i64 + 1);
                    let got = hecke_apply(&mut ev, &w, &HeckeOp::T(qp.clone()), &e)?;
                    let expected = &eig * &base;
                    tally.case(got == expected, || {
                        format!("T_({qp}) at {e}: {got} vs {expected}")
                    });
                }
            }
            recs.push(tally.record(suite, "t-eigenvalue-discriminant", &tag));

            let mut rng = rng_for(cfg, "hecke/u-degeneration", &tag);
            let mut tally = Tally::new();
            for c in 1..=3u32 {
                let upper = delta_cochain(c, &level)?;
                let lower = delta_cochain(c - 1, &level)?;
                for _ in 0..6 {
                    let e = random_edge(fq, &mut rng, 1, 4.min(cfg.depth));
                    let got = hecke_apply(&mut ev, &upper, &HeckeOp::U, &e)?;
                    let expected = rat_int(np as i64) * ev.eval(&lower, &e)?;
                    tally.case(got == expected, || {
                        format!("c={c} at {e}: {got} vs {expected}")
                    });
                }
            }
            recs.push(tally.record(suite, "u-degeneration-chain", &tag));

            let mut rng = rng_for(cfg, "hecke/u-squared", &tag);
            let mut tally = Tally::new();
            let p2 = level.prime().pow(2);
            for _ in 0..5 {
                let e = random_edge(fq, &mut rng, 1, 3.min(cfg.depth));
                let direct = hecke_apply(&mut ev, &w, &HeckeOp::T(p2.clone()), &e)?;
                let mut twice = Rat::zero();
                for m1 in hecke_cosets(&level, &HeckeOp::U)? {
                    let inner = translate(&m1, &e)?;
                    twice += hecke_apply(&mut ev, &w, &HeckeOp::U, &inner)?;
                }
                tally.case(direct == twice, || format!("{e}: {direct} vs {twice}"));
            }
            recs.push(tally.record(suite, "u-squared-is-prime-square", &tag));

            // B-shift degeneration on the Eisenstein element.
            let en = eisenstein_en(&level)?;
            let shifted = b_shift(&en, level.prime())?;
            let mut rng = rng_for(cfg, "hecke/b-shift-degeneration", &tag);
            let mut tally = Tally::new();
            for _ in 0..6 {
                let e = random_edge(fq, &mut rng, 1, 4.min(cfg.depth));
                let got = hecke_apply(&mut ev, &shifted, &HeckeOp::U, &e)?;
                let expected = rat_int(np as i64) * ev.eval(&en, &e)?;
                tally.case(got == expected, || format!("{e}: {got} vs {expected}"));
            }
            recs.push(tally.record(suite, "b-shift-u-degeneration", &tag));

            Ok(recs)
        })
        .collect();

    let mut records: Vec<CheckRecord> = pair_records?.into_iter().flatten().collect();

    // Frozen anchor: the U-image of the shifted discriminant cochain.
    let f2 = FqConfig::prime_field(2)?;
    let level = make_level(&f2, &Poly::t(&f2), 2)?;
    let mut ev = Evaluator::new(&f2);
    let w1 = delta_cochain(1, &level)?;
    let e = Edge::parse(&f2, "k=3;y=pi^1;eps=0")?;
    records.push(CheckRecord::exact(
        suite,
        "frozen-u-anchor",
        "q=2 p=T edge (3,pi,0)",
        "-2".to_string(),
        fmt_rat(&hecke_apply(&mut ev, &w1, &HeckeOp::U, &e)?),
    ));
    Ok(records)
}

// ---------------------------------------------------------------------
// tree: normal form, orientation, and the cochain structural axioms
// ---------------------------------------------------------------------

/// A random Iwahori element: integral, invertible, lower-left entry of
/// positive valuation.
fn random_iwahori(fq: &FqConfig, rng: &mut ChaCha8Rng) -> GMatrix {
    let s = random_tail(fq, rng, 0, 4);
    let t = random_tail(fq, rng, 1, 4);
    let u = Laurent::constant(fq, random_unit(fq, rng));
    let w = Laurent::constant(fq, random_unit(fq, rng));
    let zero = Laurent::zero(fq);
    let one = Laurent::one(fq);
    let upper = GMatrix::new(one.clone(), s, zero.clone(), one.clone());
    let lower = GMatrix::new(one.clone(), zero.clone(), t, one);
    let diag = GMatrix::new(u, zero.clone(), zero, w);
    upper.mul(&lower).mul(&diag)
}

/// A random central element: a unit scalar times a power of pi.
fn random_center(fq: &FqConfig, rng: &mut ChaCha8Rng) -> GMatrix {
    let m = rng.gen_range(-2..=2i64);
    let z = Laurent::pi_pow(fq, m).mul_scalar(random_unit(fq, rng));
    let zero = Laurent::zero(fq);
    GMatrix::new(z.clone(), zero.clone(), zero, z)
}

/// A random element of the congruence group of the level: entries in A,
/// unit determinant, lower-left entry divisible by p^r, each entry of
/// degree <= 4. Built from elementary factors; candidates whose entries
/// exceed the degree bound are rejected and redrawn.
fn random_gamma0(level: &Level, rng: &mut ChaCha8Rng, allow_lower: bool) -> GMatrix {
    let fq = level.fq();
    let pr = level.prime_pow(level.r());
    let pr_deg = pr.degree().unwrap();
    for _ in 0..400 {
        let c = if allow_lower && pr_deg <= 4 && rng.gen_range(0..5) > 0 {
            let mut b = random_poly(fq, rng, 4 - pr_deg);
            if b.is_zero() {
                b = Poly::one(fq);
            }
            b.mul(&pr)
        } else {
            Poly::zero(fq)
        };
        // Upper-triangular candidates can afford rich translation parts;
        // lower ones need small cofactors to fit the degree budget.
        let elem_deg = if c.is_zero() { 4 } else { 1 };
        let a = random_poly(fq, rng, elem_deg);
        let a2 = random_poly(fq, rng, elem_deg);
        // [[1,a],[0,1]] * [[1,0],[c,1]] * [[1,a2],[0,1]] * diag(u, w)
        let top_left = Poly::one(fq).add(&a.mul(&c));
        let top_right = top_left.mul(&a2).add(&a);
        let bottom_right = c.mul(&a2).add(&Poly::one(fq));
        let u = random_unit(fq, rng);
        let w = random_unit(fq, rng);
        let entries = [
            top_left.mul_scalar(u),
            top_right.mul_scalar(w),
            c.mul_scalar(u),
            bottom_right.mul_scalar(w),
        ];
        if entries
            .iter()
            .all(|e| e.degree().map_or(true, |d| d <= 4))
        {
            return GMatrix::from_polys(&entries[0], &entries[1], &entries[2], &entries[3]);
        }
    }
    // The identity is always a valid member.
    GMatrix::from_polys(
        &Poly::one(fq),
        &Poly::zero(fq),
        &Poly::zero(fq),
        &Poly::one(fq),
    )
}

/// Random edge whose tail lies in (pi)/(pi^k): nonnegative-degree parts
/// cleared, the shape every edge reduces to modulo polynomial
/// translations.
fn random_residue_edge(fq: &FqConfig, rng: &mut ChaCha8Rng, k_lo: i64, k_hi: i64) -> Edge {
    let k = rng.gen_range(k_lo..=k_hi);
    let y = random_tail(fq, rng, 1, k);
    let eps = rng.gen_range(0..2u8);
    Edge::new(k, &y, eps).expect("sampled residue edge is valid")
}

fn suite_tree(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let suite = "tree";
    let mut records = Vec::new();

    // Normal-form soundness and orientation, per base field.
    for (fq, p) in grid_pairs() {
        let pair_tag = format!("q={} p={}", fq.q(), p);
        if p.degree() == Some(1) {
            // One run per field is enough for field-level properties.
            let mut rng = rng_for(cfg, "tree/normal-form-soundness", &pair_tag);
            let mut tally = Tally::new();
            for _ in 0..200 {
                let e = random_edge(&fq, &mut rng, -2, cfg.depth.min(6));
                let g = e
                    .representative()
                    .mul(&random_iwahori(&fq, &mut rng))
                    .mul(&random_center(&fq, &mut rng));
                let back = edge_normal_form(&g)?;
                tally.case(back == e, || format!("{e} came back as {back}"));
            }
            records.push(tally.record(suite, "normal-form-soundness", &pair_tag));

            let mut rng = rng_for(cfg, "tree/orientation", &pair_tag);
            let mut tally = Tally::new();
            for _ in 0..100 {
                let e = random_edge(&fq, &mut rng, -2, cfg.depth.min(6));
                tally.case(terminus(&reverse(&e))? == origin(&e)?, || format!("{e}"));
            }
            records.push(tally.record(suite, "orientation-convention", &pair_tag));
        }
    }

    // Cochain structural axioms per grid level.
    let level_records: Result<Vec<Vec<CheckRecord>>> = grid_levels(2, 5)
        .par_iter()
        .map(|level| {
            let mut recs = Vec::new();
            let tag = level_tag(level);
            let fq = level.fq();
            let mut ev = Evaluator::new(fq);
            let named: Vec<(&str, FourierCochain)> = vec![
                ("delta", delta_cochain(0, level)?),
                ("delta-shift", delta_cochain(1, level)?),
                ("delta-top", delta_cochain(level.r(), level)?),
                ("eisenstein", eisenstein_en(level)?),
                ("gcprime", g_of_cprime(level)?),
            ];

            let k_hi = cfg.depth.min(6);
            let mut tally = Tally::new();
            for (fname, f) in &named {
                let mut rng = rng_for(cfg, "tree/alternating", &format!("{tag} {fname}"));
                for _ in 0..100 {
                    let e = random_edge(fq, &mut rng, -2, k_hi);
                    let ok = ev.eval(f, &reverse(&e))? == -ev.eval(f, &e)?;
                    tally.case(ok, || format!("{fname} at {e}"));
                }
            }
            recs.push(tally.record(suite, "alternating", &tag));

            let mut tally = Tally::new();
            for (fname, f) in &named {
                let mut rng = rng_for(cfg, "tree/harmonicity", &format!("{tag} {fname}"));
                for _ in 0..50 {
                    let k = rng.gen_range(-2..=(k_hi - 1));
                    let y = random_tail(fq, &mut rng, k - 5, k);
                    let v = Vertex::new(k, &y)?;
                    let mut star_sum = Rat::zero();
                    for e in vertex_star(&v)? {
                        star_sum += ev.eval(f, &e)?;
                    }
                    tally.case(star_sum.is_zero(), || {
                        format!("{fname} at vertex (k={k}): {star_sum}")
                    });
                }
            }
            recs.push(tally.record(suite, "harmonicity", &tag));

            // Invariance: the whole family under the upper-triangular
            // part; the weight-balanced elements under the full
            // congruence group.
            let mut tally = Tally::new();
            for (fname, f) in &named {
                let mut rng = rng_for(cfg, "tree/upper-invariance", &format!("{tag} {fname}"));
                for _ in 0..100 {
                    let gamma = random_gamma0(level, &mut rng, false);
                    let e = random_edge(fq, &mut rng, 1, 3);
                    let moved = translate(&gamma, &e)?;
                    if moved.k() > cfg.depth {
                        tally.case(true, String::new);
                        continue;
                    }
                    let ok = ev.eval(f, &moved)? == ev.eval(f, &e)?;
                    tally.case(ok, || format!("{fname} gamma={gamma} edge={e}"));
                }
            }
            recs.push(tally.record(suite, "upper-triangular-invariance", &tag));

            let mut tally = Tally::new();
            for (fname, f) in &named {
                if *fname != "eisenstein" && *fname != "gcprime" {
                    continue;
                }
                let mut rng = rng_for(cfg, "tree/gamma0-invariance", &format!("{tag} {fname}"));
                let mut accepted = 0u32;
                let mut draws = 0u32;
                while accepted < 100 && draws < 4000 {
                    draws += 1;
                    let gamma = random_gamma0(level, &mut rng, true);
                    let e = random_residue_edge(fq, &mut rng, 1, 3);
                    let moved = translate(&gamma, &e)?;
                    if moved.k() > cfg.depth {
                        continue;
                    }
                    accepted += 1;
                    let ok = ev.eval(f, &moved)? == ev.eval(f, &e)?;
                    tally.case(ok, || format!("{fname} gamma={gamma} edge={e}"));
                }
                tally.case(accepted == 100, || {
                    format!("{fname}: only {accepted} of 100 samples accepted")
                });
            }
            recs.push(tally.record(suite, "congruence-invariance-balanced", &tag));

            // Well-definedness: evaluation only sees the normal form.
            let mut tally = Tally::new();
            let f = eisenstein_en(level)?;
            let mut rng = rng_for(cfg, "tree/well-definedness", &tag);
            for _ in 0..30 {
                let e = random_edge(fq, &mut rng, -1, k_hi);
                let g = e
                    .representative()
                    .mul(&random_iwahori(fq, &mut rng))
                    .mul(&random_center(fq, &mut rng));
                let ok = ev.eval(&f, &edge_normal_form(&g)?)? == ev.eval(&f, &e)?;
                tally.case(ok, || format!("{e}"));
            }
            recs.push(tally.record(suite, "well-defined-evaluation", &tag));

            Ok(recs)
        })
        .collect();
    records.extend(level_records?.into_iter().flatten());
    Ok(records)
}
