//! The projective line over A/n and the right action of the vertex and edge
//! stabilizers of the standard half-line.

use std::collections::VecDeque;

use crate::ff_base::{enumerate_below, Poly, PrimeField};
use crate::matrix::Mat2;

/// P^1(A/n): pairs (c, d) mod n generating the unit ideal, modulo (A/n)^*.
#[derive(Clone, Debug)]
pub struct P1Mod {
    n: Poly,
    /// residues of degree < deg n, by index
    residues: Vec<Poly>,
    /// pair index c·Q + d → point id (`u32::MAX` when not primitive)
    canon: Vec<u32>,
    /// canonical pair (c, d) per point id
    points: Vec<(u32, u32)>,
}

impl P1Mod {
    pub fn new(n: &Poly) -> Self {
        let f = n.field();
        let dn = n.deg().expect("nonzero modulus");
        let residues: Vec<Poly> = enumerate_below(f, dn).collect();
        let qn = residues.len();
        let units: Vec<usize> = (0..qn).filter(|&i| residues[i].gcd(n).is_one()).collect();
        let mut canon = vec![u32::MAX; qn * qn];
        let mut points = Vec::new();
        // multiplication table is too large in general; multiply on demand
        for c in 0..qn {
            for d in 0..qn {
                if canon[c * qn + d] != u32::MAX {
                    continue;
                }
                if !residues[c].gcd(&residues[d]).gcd(n).is_one() {
                    continue;
                }
                let id = points.len() as u32;
                points.push((c as u32, d as u32));
                for &u in &units {
                    let cu = (&residues[c] * &residues[u]).rem(n).to_index() as usize;
                    let du = (&residues[d] * &residues[u]).rem(n).to_index() as usize;
                    canon[cu * qn + du] = id;
                }
            }
        }
        Self { n: n.clone(), residues, canon, points }
    }

    pub fn modulus(&self) -> &Poly {
        &self.n
    }

    pub fn field(&self) -> PrimeField {
        self.n.field()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point id of (c : d) for arbitrary c, d ∈ A; `None` when (c, d, n) ≠ (1).
    pub fn point(&self, c: &Poly, d: &Poly) -> Option<u32> {
        let qn = self.residues.len();
        let ci = c.rem(&self.n).to_index() as usize;
        let di = d.rem(&self.n).to_index() as usize;
        let id = self.canon[ci * qn + di];
        (id != u32::MAX).then_some(id)
    }

    /// Canonical residues (c, d) of a point.
    pub fn pair(&self, id: u32) -> (&Poly, &Poly) {
        let (c, d) = self.points[id as usize];
        (&self.residues[c as usize], &self.residues[d as usize])
    }

    /// The point (c : d)·h.
    pub fn act(&self, id: u32, h: &Mat2) -> u32 {
        let (c, d) = self.pair(id);
        let c2 = &(c * &h.a) + &(d * &h.c);
        let d2 = &(c * &h.b) + &(d * &h.d);
        self.point(&c2, &d2).expect("GL_2 action preserves primitivity")
    }

    /// A lift g ∈ SL_2(A) whose bottom row reduces to the point.
    pub fn lift(&self, id: u32) -> Mat2 {
        let f = self.field();
        let (c, d) = self.pair(id);
        let c = if c.is_zero() { self.n.clone() } else { c.clone() };
        let mut d1 = d.clone();
        if !c.gcd(&d1).is_one() {
            // d + t·n coprime to c for some t; search by increasing degree
            let mut found = None;
            'search: for k in 0.. {
                for t in enumerate_below(f, k + 1) {
                    let cand = d + &(&t * &self.n);
                    if c.gcd(&cand).is_one() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
            d1 = found.unwrap();
        }
        let (_, u, v) = c.xgcd(&d1);
        // u·c + v·d1 = 1  ⇒  [[v, -u], [c, d1]] has determinant 1
        Mat2::new(v, -&u, c, d1)
    }
}

/// Stabilizers of the standard half-line in GL_2(A): `Vertex(k)` fixes v_k,
/// `Edge(k)` fixes the edge v_k → v_{k+1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelGroup {
    Vertex(usize),
    Edge(usize),
}

impl LevelGroup {
    fn is_full_gl2(self) -> bool {
        self == LevelGroup::Vertex(0)
    }

    /// Upper-triangular bound on deg b (for k ≥ 1 both groups agree).
    fn b_degree(self) -> usize {
        match self {
            LevelGroup::Vertex(k) | LevelGroup::Edge(k) => k,
        }
    }

    pub fn order(self, q: u64) -> u64 {
        if self.is_full_gl2() {
            (q * q - 1) * (q * q - q)
        } else {
            (q - 1) * (q - 1) * q.pow(self.b_degree() as u32 + 1)
        }
    }

    pub fn generators(self, f: PrimeField) -> Vec<Mat2> {
        let g = f.primitive_root();
        let mut out = vec![Mat2::constant(f, g, 0, 0, 1), Mat2::constant(f, 1, 0, 0, g)];
        if self.is_full_gl2() {
            out.push(Mat2::constant(f, 1, 1, 0, 1));
            out.push(Mat2::constant(f, 0, 1, 1, 0));
        } else {
            for i in 0..=self.b_degree() {
                out.push(Mat2::new(Poly::one(f), Poly::monomial(f, 1, i), Poly::zero(f), Poly::one(f)));
            }
        }
        out
    }

    /// Every element of the group.
    pub fn elements(self, f: PrimeField) -> Vec<Mat2> {
        let units: Vec<u32> = f.units().collect();
        let mut out = Vec::new();
        if self.is_full_gl2() {
            let p = f.p();
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        for d in 0..p {
                            if f.sub(f.mul(a, d), f.mul(b, c)) != 0 {
                                out.push(Mat2::constant(f, a, b, c, d));
                            }
                        }
                    }
                }
            }
            return out;
        }
        for &a in &units {
            for &d in &units {
                for b in enumerate_below(f, self.b_degree() + 1) {
                    out.push(Mat2::new(Poly::constant(f, a), b, Poly::zero(f), Poly::constant(f, d)));
                }
            }
        }
        out
    }
}

/// Orbit decomposition of P^1(A/n) under a level group.
#[derive(Clone, Debug)]
pub struct Orbits {
    /// orbit id per point
    pub orbit_of: Vec<u32>,
    /// smallest point id per orbit, orbits sorted by it
    pub reps: Vec<u32>,
    pub sizes: Vec<u64>,
}

impl Orbits {
    pub fn compute(p1: &P1Mod, group: LevelGroup) -> Self {
        let gens = group.generators(p1.field());
        let n = p1.len();
        let mut orbit_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for start in 0..n {
            if orbit_of[start] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(start as u32);
            orbit_of[start] = id;
            let mut size = 1;
            let mut queue = VecDeque::from([start as u32]);
            while let Some(x) = queue.pop_front() {
                for g in &gens {
                    let y = p1.act(x, g);
                    if orbit_of[y as usize] == u32::MAX {
                        orbit_of[y as usize] = id;
                        size += 1;
                        queue.push_back(y);
                    }
                }
            }
            sizes.push(size);
        }
        Self { orbit_of, reps, sizes }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Some h in the group with x·h = y, by breadth-first search over generators.
pub fn transporter(p1: &P1Mod, group: LevelGroup, x: u32, y: u32) -> Option<Mat2> {
    let f = p1.field();
    let gens = group.generators(f);
    let mut prev: Vec<Option<(u32, usize)>> = vec![None; p1.len()];
    let mut seen = vec![false; p1.len()];
    seen[x as usize] = true;
    let mut queue = VecDeque::from([x]);
    while let Some(z) = queue.pop_front() {
        if z == y {
            let mut word = Vec::new();
            let mut cur = z;
            while let Some((from, g)) = prev[cur as usize] {
                word.push(g);
                cur = from;
            }
            // x·g_{i1}·g_{i2}··· = y with the word read from x outward
            let mut h = Mat2::identity(f);
            for &g in word.iter().rev() {
                h = h.mul(&gens[g]);
            }
            return Some(h);
        }
        for (gi, g) in gens.iter().enumerate() {
            let w = p1.act(z, g);
            if !seen[w as usize] {
                seen[w as usize] = true;
                prev[w as usize] = Some((z, gi));
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line_sizes() {
        // |P^1(A/n)| = |n| Π (1 + 1/|P|)
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(P1Mod::new(&Poly::parse(f2, "T^3").unwrap()).len(), 12);
        assert_eq!(P1Mod::new(&Poly::parse(f2, "T").unwrap()).len(), 3);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(P1Mod::new(&Poly::parse(f3, "T^3-T^2").unwrap()).len(), 27 * 4 * 4 / 9);
    }

    #[test]
    fn orbit_sizes_divide_group_order() {
        let f = PrimeField::new(3).unwrap();
        let p1 = P1Mod::new(&Poly::parse(f, "T^3-T^2").unwrap());
        for g in [LevelGroup::Vertex(0), LevelGroup::Edge(0), LevelGroup::Vertex(1), LevelGroup::Vertex(2)] {
            let o = Orbits::compute(&p1, g);
            assert_eq!(o.sizes.iter().sum::<u64>(), p1.len() as u64);
            for &s in &o.sizes {
                assert_eq!(g.order(3) % s, 0);
            }
            assert_eq!(g.elements(f).len() as u64, g.order(3));
        }
    }

    #[test]
    fn lifts_and_transporters() {
        let f = PrimeField::new(2).unwrap();
        let n = Poly::parse(f, "T^3").unwrap();
        let p1 = P1Mod::new(&n);
        for id in 0..p1.len() as u32 {
            let g = p1.lift(id);
            assert!(g.det().is_one());
            assert_eq!(p1.point(&g.c, &g.d), Some(id));
        }
        let grp = LevelGroup::Vertex(1);
        let o = Orbits::compute(&p1, grp);
        for x in 0..p1.len() as u32 {
            let rep = o.reps[o.orbit_of[x as usize] as usize];
            let h = transporter(&p1, grp, rep, x).unwrap();
            assert_eq!(p1.act(rep, &h), x);
        }
    }
}
