//! The Bruhat–Tits tree of PGL(2, K_infinity) in canonical coordinates:
//! oriented edges and vertices as normal forms, reduction of invertible
//! 2x2 matrices to edge normal form, edge reversal, vertex stars, the
//! standard end edges e_j, and left translation by group elements.
//!
//! # Coordinates
//! An oriented edge is a triple (k, y, eps) with k an integer, y an exact
//! Laurent tail with no terms of exponent >= k (a representative of
//! K_infinity mod pi^k O_infinity), and eps in {0,1}. The triple labels
//! the coset of [[pi^k, y],[0,1]] * iota^eps modulo the Iwahori subgroup
//! and the center, where iota = [[0,1],[pi,0]]. A vertex drops eps and
//! works modulo the full maximal compact subgroup.
//!
//! # Orientation
//! eps=0 edges point away from the standard end:
//! o((k,y,0)) = v(k-1, y mod pi^{k-1}) and t((k,y,0)) = v(k,y).
//! Reversal toggles eps. The star of a vertex collects the q+1 edges
//! with that terminus.

use std::fmt;

use crate::fq::FqConfig;
use crate::laurent::{Laurent, Valuation};
use crate::level::Level;
use crate::poly::Poly;
use crate::{Error, Result};

/// A vertex of the tree: the class of [[pi^k, y],[0,1]].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vertex {
    k: i64,
    y: Laurent,
}

impl Vertex {
    /// Normalize y mod pi^k; y must carry enough precision to know its
    /// representative.
    pub fn new(k: i64, y: &Laurent) -> Result<Vertex> {
        Ok(Vertex {
            k,
            y: y.representative_mod(k)?,
        })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn y(&self) -> &Laurent {
        &self.y
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={};y={}", self.k, self.y)
    }
}

/// An oriented edge of the tree: the class of [[pi^k, y],[0,1]] * iota^eps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    k: i64,
    y: Laurent,
    eps: u8,
}

impl Edge {
    /// Normalize y mod pi^k; eps must be 0 or 1.
    pub fn new(k: i64, y: &Laurent, eps: u8) -> Result<Edge> {
        if eps > 1 {
            return Err(Error::OutOfRange(format!(
                "orientation bit must be 0 or 1, got {eps}"
            )));
        }
        Ok(Edge {
            k,
            y: y.representative_mod(k)?,
            eps,
        })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn y(&self) -> &Laurent {
        &self.y
    }

    pub fn eps(&self) -> u8 {
        self.eps
    }

    pub fn fq(&self) -> &FqConfig {
        self.y.fq()
    }

    /// The exact matrix representative [[pi^k, y],[0,1]] * iota^eps.
    pub fn representative(&self) -> GMatrix {
        let fq = self.fq();
        let base = GMatrix::new(
            Laurent::pi_pow(fq, self.k),
            self.y.clone(),
            Laurent::zero(fq),
            Laurent::one(fq),
        );
        if self.eps == 0 {
            base
        } else {
            base.mul(&GMatrix::iota(fq))
        }
    }

    /// Parse the literal `k=<int>;y=<laurent>;eps=<0|1>`. The y part must
    /// be exact (no `prec=` suffix).
    pub fn parse(fq: &FqConfig, text: &str) -> Result<Edge> {
        let parts: Vec<&str> = text.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "edge literal must be `k=<int>;y=<laurent>;eps=<0|1>`, got {text:?}"
            )));
        }
        let k_text = parts[0]
            .trim()
            .strip_prefix("k=")
            .ok_or_else(|| Error::Parse("edge literal must start with `k=`".into()))?;
        let k: i64 = k_text
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad edge level {k_text:?}")))?;
        if k.abs() > crate::poly::MAX_PARSE_EXPONENT {
            return Err(Error::Budget(format!("edge level {k} exceeds the parser bound")));
        }
        let y_text = parts[1]
            .trim()
            .strip_prefix("y=")
            .ok_or_else(|| Error::Parse("edge literal needs a `y=` part".into()))?;
        let y = Laurent::parse(fq, y_text)?;
        let eps_text = parts[2]
            .trim()
            .strip_prefix("eps=")
            .ok_or_else(|| Error::Parse("edge literal needs an `eps=` part".into()))?;
        let eps: u8 = match eps_text.trim() {
            "0" => 0,
            "1" => 1,
            other => {
                return Err(Error::Parse(format!(
                    "orientation bit must be 0 or 1, got {other:?}"
                )))
            }
        };
        Edge::new(k, &y, eps)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={};y={};eps={}", self.k, self.y, self.eps)
    }
}

/// Reverse orientation: toggle eps, keep (k, y).
pub fn reverse(e: &Edge) -> Edge {
    Edge {
        k: e.k,
        y: e.y.clone(),
        eps: e.eps ^ 1,
    }
}

/// The origin vertex of an edge.
pub fn origin(e: &Edge) -> Result<Vertex> {
    if e.eps == 0 {
        Vertex::new(e.k - 1, &e.y)
    } else {
        Vertex::new(e.k, &e.y)
    }
}

/// The terminus vertex of an edge.
pub fn terminus(e: &Edge) -> Result<Vertex> {
    if e.eps == 0 {
        Vertex::new(e.k, &e.y)
    } else {
        Vertex::new(e.k - 1, &e.y)
    }
}

/// The q+1 edges with terminus v(k, y): the edge (k, y, 0) together with
/// reverse((k+1, y + u*pi^k, 0)) for each u in F_q.
pub fn vertex_star(v: &Vertex) -> Result<Vec<Edge>> {
    let fq = v.y.fq().clone();
    let mut star = Vec::with_capacity(fq.q() as usize + 1);
    star.push(Edge::new(v.k, &v.y, 0)?);
    for u in fq.elements() {
        let bump = Laurent::pi_pow(&fq, v.k).mul_scalar(u);
        let y = v.y.add(&bump);
        star.push(reverse(&Edge::new(v.k + 1, &y, 0)?));
    }
    Ok(star)
}

/// An invertible 2x2 matrix over K_infinity, row-major [[a,b],[c,d]].
/// Polynomial entries embed through T = pi^{-1}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GMatrix {
    a: Laurent,
    b: Laurent,
    c: Laurent,
    d: Laurent,
}

impl GMatrix {
    pub fn new(a: Laurent, b: Laurent, c: Laurent, d: Laurent) -> GMatrix {
        assert!(
            a.fq() == b.fq() && a.fq() == c.fq() && a.fq() == d.fq(),
            "matrix entries over different fields"
        );
        GMatrix { a, b, c, d }
    }

    pub fn identity(fq: &FqConfig) -> GMatrix {
        GMatrix::new(
            Laurent::one(fq),
            Laurent::zero(fq),
            Laurent::zero(fq),
            Laurent::one(fq),
        )
    }

    /// iota = [[0,1],[pi,0]].
    pub fn iota(fq: &FqConfig) -> GMatrix {
        GMatrix::new(
            Laurent::zero(fq),
            Laurent::one(fq),
            Laurent::pi_pow(fq, 1),
            Laurent::zero(fq),
        )
    }

    pub fn from_polys(a: &Poly, b: &Poly, c: &Poly, d: &Poly) -> GMatrix {
        GMatrix::new(
            Laurent::from_poly(a),
            Laurent::from_poly(b),
            Laurent::from_poly(c),
            Laurent::from_poly(d),
        )
    }

    pub fn fq(&self) -> &FqConfig {
        self.a.fq()
    }

    pub fn entries(&self) -> [&Laurent; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn mul(&self, rhs: &GMatrix) -> GMatrix {
        GMatrix::new(
            self.a.mul(&rhs.a).add(&self.b.mul(&rhs.c)),
            self.a.mul(&rhs.b).add(&self.b.mul(&rhs.d)),
            self.c.mul(&rhs.a).add(&self.d.mul(&rhs.c)),
            self.c.mul(&rhs.b).add(&self.d.mul(&rhs.d)),
        )
    }

    pub fn det(&self) -> Laurent {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }
}

impl fmt::Display for GMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Decide whether v(c) > v(d), erroring when the available precision
/// cannot settle the comparison (or when both are exactly zero, which
/// means the matrix is singular).
fn valuation_exceeds(c: &Laurent, d: &Laurent) -> Result<bool> {
    use Valuation::*;
    match (c.valuation(), d.valuation()) {
        (Infinite, Infinite) => Err(Error::Singular),
        (Infinite, Finite(_)) => Ok(true),
        (Finite(_), Infinite) => Ok(false),
        (Finite(vc), Finite(vd)) => Ok(vc > vd),
        (Finite(vc), Undetermined(kd)) if vc < kd => Ok(false),
        (Undetermined(kc), Finite(vd)) if kc > vd => Ok(true),
        _ => Err(Error::InsufficientPrecision(
            "bottom-row valuations cannot be compared at this precision".into(),
        )),
    }
}

/// Reduce an invertible matrix to its unique edge normal form (k, y, eps):
/// with bottom row (c, d), if v(c) > v(d) the class has eps = 0,
/// k = v(det) - 2 v(d) and y = b/d mod pi^k; otherwise multiply by
/// iota^{-1} on the right, which strictly lowers v(d) below v(c), and
/// read off the eps = 1 form.
pub fn edge_normal_form(g: &GMatrix) -> Result<Edge> {
    let det = g.det();
    let vdet = match det.valuation() {
        Valuation::Finite(v) => v,
        Valuation::Infinite => return Err(Error::Singular),
        Valuation::Undetermined(_) => {
            return Err(Error::InsufficientPrecision(
                "determinant valuation is undetermined".into(),
            ))
        }
    };
    let (m, eps);
    if valuation_exceeds(&g.c, &g.d)? {
        m = g.clone();
        eps = 0;
    } else {
        // g * iota^{-1} with iota^{-1} = [[0, pi^{-1}],[1, 0]].
        let pi_inv = Laurent::pi_pow(g.fq(), -1);
        m = GMatrix::new(
            g.b.clone(),
            g.a.mul(&pi_inv),
            g.d.clone(),
            g.c.mul(&pi_inv),
        );
        eps = 1;
        debug_assert!(matches!(valuation_exceeds(&m.c, &m.d), Ok(true)));
    }
    let vd = match m.d.valuation() {
        Valuation::Finite(v) => v,
        _ => {
            return Err(Error::InsufficientPrecision(
                "pivot entry valuation is undetermined".into(),
            ))
        }
    };
    // det(m) = +/- det(g); only its valuation enters.
    let vdet = if eps == 0 { vdet } else { vdet - 1 };
    let k = vdet - 2 * vd;
    let y = m.b.div(&m.d, k)?;
    Edge::new(k, &y, eps)
}

/// The edge e_j of the end approaching the cusp [1 : p], defined as the
/// normal form of [[1,0],[p,1]] * [[pi^{-j}, 0],[0, 1]]; in coordinates
/// this is (j + 1 + 2 deg p, p^{-1} mod pi^k, 1).
pub fn end_edge(level: &Level, j: u32) -> Result<Edge> {
    let fq = level.fq();
    let p = Laurent::from_poly(level.prime());
    let lower = GMatrix::new(
        Laurent::one(fq),
        Laurent::zero(fq),
        p,
        Laurent::one(fq),
    );
    let scale = GMatrix::new(
        Laurent::pi_pow(fq, -(j as i64)),
        Laurent::zero(fq),
        Laurent::zero(fq),
        Laurent::one(fq),
    );
    edge_normal_form(&lower.mul(&scale))
}

/// Left-translate an edge by a group element: the normal form of
/// gamma * representative(e).
pub fn translate(gamma: &GMatrix, e: &Edge) -> Result<Edge> {
    edge_normal_form(&gamma.mul(&e.representative()))
}
