//! Exact arithmetic in the cyclotomic field Q(zeta_p), p prime.
//!
//! Elements are stored as p-1 rational coordinates in the power basis
//! 1, zeta, ..., zeta^{p-2} of Q[zeta]/(Phi_p). Canonical form uses the
//! relation 1 + zeta + ... + zeta^{p-1} = 0 to eliminate zeta^{p-1}.
//!
//! Character values eta_0(c) = zeta^c of the additive group Z/p live
//! here; every character sum the library produces is computed in this
//! field and then *asserted* rational, never assumed.

use num_traits::Zero;

use crate::{rat_int, Error, Rat, Result};

/// An element of Q(zeta_p).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycRat {
    p: u32,
    /// Coordinates on 1, zeta, ..., zeta^{p-2}; length p-1.
    coords: Vec<Rat>,
}

impl CycRat {
    /// The zero element of Q(zeta_p).
    pub fn zero(p: u32) -> CycRat {
        assert!(p >= 2, "cyclotomic order must be a prime >= 2");
        CycRat {
            p,
            coords: vec![Rat::zero(); (p - 1) as usize],
        }
    }

    /// A rational number embedded in Q(zeta_p).
    pub fn from_rat(p: u32, value: Rat) -> CycRat {
        let mut out = CycRat::zero(p);
        out.coords[0] = value;
        out
    }

    /// The root of unity power zeta^k (k taken mod p).
    pub fn zeta_pow(p: u32, k: i64) -> CycRat {
        let k = k.rem_euclid(i64::from(p)) as u32;
        let mut out = CycRat::zero(p);
        if k == p - 1 {
            // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2}).
            for c in &mut out.coords {
                *c = -rat_int(1);
            }
        } else {
            out.coords[k as usize] = rat_int(1);
        }
        out
    }

    /// The additive character value eta_0(c) = zeta^c for c in Z/p.
    pub fn eta0(p: u32, c: u32) -> CycRat {
        CycRat::zeta_pow(p, i64::from(c))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn assert_same_order(&self, other: &CycRat) {
        assert!(
            self.p == other.p,
            "cyclotomic arithmetic across different orders"
        );
    }

    pub fn add(&self, other: &CycRat) -> CycRat {
        self.assert_same_order(other);
        CycRat {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> CycRat {
        CycRat {
            p: self.p,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn sub(&self, other: &CycRat) -> CycRat {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CycRat) -> CycRat {
        self.assert_same_order(other);
        let p = self.p as usize;
        // Accumulate on zeta^0..zeta^{p-1} (exponents mod p), then
        // canonicalize via zeta^{p-1} = -(1 + ... + zeta^{p-2}).
        let mut acc = vec![Rat::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc[(i + j) % p] += a * b;
            }
        }
        let top = acc[p - 1].clone();
        CycRat {
            p: self.p,
            coords: acc[..p - 1].iter().map(|c| c - &top).collect(),
        }
    }

    pub fn mul_rat(&self, scalar: &Rat) -> CycRat {
        CycRat {
            p: self.p,
            coords: self.coords.iter().map(|c| c * scalar).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// True iff the element lies in Q (all non-constant coordinates vanish).
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// Extract the rational value; errors if the element is not rational.
    pub fn as_rational(&self) -> Result<Rat> {
        if self.is_rational() {
            Ok(self.coords[0].clone())
        } else {
            Err(Error::NonRational(format!(
                "element of Q(zeta_{}) with nonzero zeta-coordinates",
                self.p
            )))
        }
    }
}
