//! Vertices and edges of the Bruhat-Tits tree as polynomial matrices, and their
//! position relative to the standard half-line v_k = diag(T^k, 1).
//!
//! A matrix M names the vertex M·Z·GL_2(O) and the edge M·Z·I_∞ (origin M,
//! terminus M·diag(1, π)). Matrices are kept in M_2(A) by scaling with powers of T.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff_base::{Poly, PrimeField, RationalFunction};
use crate::laurent::Laurent;
use crate::matrix::Mat2;

/// M = g · T^s · v_k · u with g ∈ GL_2(A), u ∈ GL_2(O).
#[derive(Clone, Debug)]
pub struct Reduced {
    pub g: Mat2,
    pub k: usize,
    /// first column of u modulo π
    pub direction: (u32, u32),
}

fn row_deg(a: &Poly, b: &Poly) -> i64 {
    a.deg_i().max(b.deg_i())
}

fn coeff_at(p: &Poly, d: i64) -> u32 {
    if d < 0 {
        0
    } else {
        p.coeff(d as usize)
    }
}

/// Left GL_2(A)-reduction of a nonsingular polynomial matrix.
pub fn reduce(m: &Mat2) -> Reduced {
    let f = m.field();
    assert!(!m.det().is_zero(), "singular matrix does not name a vertex");
    let mut r = m.clone();
    let mut gamma = Mat2::identity(f);
    let swap = Mat2::constant(f, 0, 1, 1, 0);
    loop {
        let mut d1 = row_deg(&r.a, &r.b);
        let mut d2 = row_deg(&r.c, &r.d);
        if d1 < d2 {
            r = swap.mul(&r);
            gamma = swap.mul(&gamma);
            std::mem::swap(&mut d1, &mut d2);
        }
        let l1 = (coeff_at(&r.a, d1), coeff_at(&r.b, d1));
        let l2 = (coeff_at(&r.c, d2), coeff_at(&r.d, d2));
        let det = f.sub(f.mul(l1.0, l2.1), f.mul(l1.1, l2.0));
        if det != 0 {
            let g = gamma.inverse().expect("row operations are invertible");
            return Reduced { g, k: (d1 - d2) as usize, direction: (l1.0, l2.0) };
        }
        // l1 = λ·l2: subtract λ·T^{d1-d2}·row2 from row1
        let lam = if l2.0 != 0 { f.mul(l1.0, f.inv(l2.0)) } else { f.mul(l1.1, f.inv(l2.1)) };
        let op = Mat2::new(
            Poly::one(f),
            Poly::monomial(f, f.neg(lam), (d1 - d2) as usize),
            Poly::zero(f),
            Poly::one(f),
        );
        r = op.mul(&r);
        gamma = op.mul(&gamma);
    }
}

/// Position of an edge relative to the standard half-line: it equals g·e_k (`up`)
/// or the reverse of g·e_k, where e_k is the edge v_k → v_{k+1}.
#[derive(Clone, Debug)]
pub struct EdgeLocation {
    pub g: Mat2,
    pub k: usize,
    pub up: bool,
}

pub fn locate_edge(m: &Mat2) -> EdgeLocation {
    let f = m.field();
    let red = reduce(m);
    let (u11, u21) = red.direction;
    if red.k == 0 {
        let h = if u11 != 0 {
            Mat2::constant(f, u11, 0, u21, 1)
        } else {
            Mat2::constant(f, 0, 1, u21, 0)
        };
        return EdgeLocation { g: red.g.mul(&h), k: 0, up: true };
    }
    if u21 == 0 {
        return EdgeLocation { g: red.g, k: red.k, up: true };
    }
    let rev = locate_edge(&reverse_edge(m));
    debug_assert!(rev.up && rev.k + 1 == red.k);
    EdgeLocation { g: rev.g, k: rev.k, up: false }
}

/// The opposite edge M·[[0,1],[π,0]], scaled into M_2(A).
pub fn reverse_edge(m: &Mat2) -> Mat2 {
    let f = m.field();
    m.mul(&Mat2::new(Poly::zero(f), Poly::t(f), Poly::one(f), Poly::zero(f)))
}

pub fn terminus(m: &Mat2) -> Mat2 {
    let f = m.field();
    m.mul(&Mat2::diag(Poly::t(f), Poly::one(f)))
}

/// The q+1 edges with origin M: M·[[x,1],[1,0]] for x ∈ F_q, then M itself.
pub fn edges_from(m: &Mat2) -> Vec<Mat2> {
    let f = m.field();
    let mut out: Vec<Mat2> = (0..f.p()).map(|x| m.mul(&Mat2::constant(f, x, 1, 1, 0))).collect();
    out.push(m.clone());
    out
}

/// Distance in the tree between the vertices named by M1 and M2.
pub fn distance(m1: &Mat2, m2: &Mat2) -> u64 {
    let n = m1.adj().mul(m2);
    (2 * n.max_deg() - n.det().deg_i()) as u64
}

/// Edges of the geodesic from vertex M1 to vertex M2, in order.
pub fn geodesic(m1: &Mat2, m2: &Mat2) -> Vec<Mat2> {
    let mut out = Vec::new();
    let mut cur = m1.clone();
    let mut d = distance(&cur, m2);
    while d > 0 {
        let next = edges_from(&cur)
            .into_iter()
            .find(|e| distance(&terminus(e), m2) < d)
            .expect("some neighbour is closer");
        cur = terminus(&next);
        out.push(next);
        d -= 1;
    }
    out
}

/// The normal form [[π^j, y], [0, 1]] of a vertex, y ∈ K_∞ mod π^j·O; it also names
/// the unique positive edge (pointing toward the end ∞) leaving that vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeRep {
    pub j: i64,
    pub y: Laurent,
}

impl EdgeRep {
    pub fn new(j: i64, y: Laurent) -> Self {
        Self { j, y: y.truncate(j) }
    }

    pub fn origin_of_standard_line(f: PrimeField) -> Self {
        Self::new(0, Laurent::zero(f))
    }

    /// Normal form of the vertex named by a polynomial matrix.
    pub fn of_vertex(m: &Mat2) -> Self {
        let det = m.det();
        let (top, bottom) = if m.d.deg_i() >= m.c.deg_i() { (&m.b, &m.d) } else { (&m.a, &m.c) };
        let j = 2 * bottom.deg_i() - det.deg_i();
        let r = RationalFunction::new(top.clone(), bottom.clone()).expect("nonzero bottom entry");
        Self::new(j, Laurent::from_rational(&r, j))
    }

    /// Normal form of a positive edge; fails for edges pointing away from ∞.
    pub fn of_edge(m: &Mat2) -> Result<Self> {
        let o = Self::of_vertex(m);
        let t = Self::of_vertex(&terminus(m));
        if t.j == o.j - 1 {
            Ok(o)
        } else {
            Err(Error::InvalidInput(format!("edge {m} is not positive")))
        }
    }

    /// Polynomial matrix T^K·[[π^j, y], [0, 1]] with K = max(j, 0).
    pub fn to_matrix(&self) -> Mat2 {
        let f = self.y.field();
        let kk = self.j.max(0);
        let mut top = Poly::zero(f);
        if !self.y.is_zero_at_prec() {
            for e in self.y.val()..self.j {
                let c = self.y.coeff(e).unwrap_or(0);
                if c != 0 {
                    top = &top + &Poly::monomial(f, c, (kk - e) as usize);
                }
            }
        }
        Mat2::new(
            Poly::monomial(f, 1, (kk - self.j) as usize),
            top,
            Poly::zero(f),
            Poly::monomial(f, 1, kk as usize),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn vk(f: PrimeField, k: usize) -> Mat2 {
        Mat2::diag(Poly::monomial(f, 1, k), Poly::one(f))
    }

    #[test]
    fn standard_line() {
        let f = f2();
        for k in 0..5 {
            let r = reduce(&vk(f, k));
            assert_eq!(r.k, k);
            let e = locate_edge(&vk(f, k));
            assert!(e.up);
            assert_eq!(e.k, k);
            assert_eq!(distance(&vk(f, 0), &vk(f, k)), k as u64);
            let rep = EdgeRep::of_edge(&vk(f, k)).unwrap();
            assert_eq!(rep.j, -(k as i64));
        }
    }

    #[test]
    fn star_has_q_plus_one_distinct_neighbours() {
        let f = PrimeField::new(3).unwrap();
        let m = Mat2::parse(f, "[[T^2+1, T], [T^3, 2]]").unwrap();
        let nbrs: Vec<Mat2> = edges_from(&m).iter().map(terminus).collect();
        for (i, a) in nbrs.iter().enumerate() {
            assert_eq!(distance(&m, a), 1);
            for b in &nbrs[i + 1..] {
                assert_eq!(distance(a, b), 2);
            }
        }
        // exactly one neighbour is on the positive side
        let positive = edges_from(&m).iter().filter(|e| EdgeRep::of_edge(e).is_ok()).count();
        assert_eq!(positive, 1);
    }

    #[test]
    fn normal_form_round_trip() {
        let f = PrimeField::new(3).unwrap();
        for s in ["[[T^2+1, T], [T^3, 2]]", "[[1, 0], [0, T^4]]", "[[T, 1], [1, 0]]"] {
            let m = Mat2::parse(f, s).unwrap();
            let rep = EdgeRep::of_vertex(&m);
            assert_eq!(distance(&m, &rep.to_matrix()), 0, "{s}");
        }
    }

    #[test]
    fn geodesic_reaches_target() {
        let f = f2();
        let a = Mat2::parse(f, "[[T^2+T+1, 1], [T^3, T+1]]").unwrap();
        let path = geodesic(&Mat2::identity(f), &a);
        assert_eq!(path.len() as u64, distance(&Mat2::identity(f), &a));
        assert_eq!(distance(&terminus(path.last().unwrap()), &a), 0);
    }

    #[test]
    fn reversed_edges_locate_as_down() {
        let f = f2();
        for k in 1..4 {
            let e = reverse_edge(&vk(f, k - 1));
            let loc = locate_edge(&e);
            assert!(!loc.up);
            assert_eq!(loc.k, k - 1);
        }
    }
}
