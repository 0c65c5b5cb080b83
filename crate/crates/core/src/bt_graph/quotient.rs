use std::collections::VecDeque;

use serde::Serialize;

use super::p1::{transporter, LevelGroup, Orbits, P1Mod};
use super::tree::{edges_from, locate_edge, reduce, terminus, EdgeRep};
use crate::error::{Error, Result};
use crate::ff_base::{monic_divisors, enumerate_below, P1Point, Poly, PrimeField};
use crate::matrix::Mat2;

pub const GRAPH_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct QVertex {
    pub id: usize,
    /// index k of the standard vertex v_k this orbit is GL_2(A)-equivalent to
    pub level: usize,
    pub rep: EdgeRep,
    pub matrix: Mat2,
    /// |Γ_v| modulo scalars
    pub stabilizer: u64,
    #[serde(skip)]
    pub point: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct QEdge {
    pub id: usize,
    pub level: usize,
    pub origin: usize,
    pub terminus: usize,
    pub matrix: Mat2,
    /// |Γ_e| modulo scalars
    pub stabilizer: u64,
    /// [Γ_{o(e)} : Γ_e]
    pub m_origin: u64,
    /// [Γ_{t(e)} : Γ_e]
    pub m_terminus: u64,
    #[serde(skip)]
    pub point: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct End {
    pub cusp: P1Point,
    /// vertex of the finite part the half-line is attached to
    pub vertex: usize,
    /// cusp witness g ∈ GL_2(A) with g·∞ = cusp
    pub matrix: Mat2,
}

/// A non-tree edge of the finite part with γ ∈ Γ_0(n) gluing its far end back to
/// the lifted spanning tree.
#[derive(Clone, Debug, Serialize)]
pub struct Identification {
    pub edge: usize,
    pub gamma: Mat2,
}

/// Which side of an edge orbit a tree edge lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeHit {
    /// `None` for edges on the ends (outside the finite part)
    pub edge: Option<usize>,
    /// end index for edges beyond the finite part
    pub end: Option<usize>,
    pub positive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientGraph {
    pub schema_version: u32,
    pub q: u32,
    pub n: Poly,
    /// levels 0..=end_level carry the finite part; edges at end_level start the ends
    pub end_level: usize,
    pub genus: usize,
    pub vertices: Vec<QVertex>,
    pub edges: Vec<QEdge>,
    pub ends: Vec<End>,
    pub spanning_tree: Vec<usize>,
    pub identifications: Vec<Identification>,
    /// vertex lifts along the spanning tree; lift of the root is the identity
    pub lifts: Vec<Mat2>,
    #[serde(skip)]
    p1: P1Mod,
    #[serde(skip)]
    vertex_orbits: Vec<Orbits>,
    #[serde(skip)]
    edge_orbits: Vec<Orbits>,
    #[serde(skip)]
    vertex_index: Vec<Vec<usize>>,
    #[serde(skip)]
    edge_index: Vec<Vec<usize>>,
}

impl QuotientGraph {
    pub fn build(n: &Poly) -> Result<Self> {
        let f = n.field();
        let dn = n.deg().unwrap_or(0);
        if dn == 0 || !n.is_monic() {
            return Err(Error::InvalidInput(format!("level {n} must be monic and non-constant")));
        }
        let q = f.p() as u64;
        let p1 = P1Mod::new(n);
        let top = (dn - 1).max(1);
        let vertex_orbits: Vec<Orbits> = (0..=top).map(|k| Orbits::compute(&p1, LevelGroup::Vertex(k))).collect();
        let edge_orbits: Vec<Orbits> = (0..=top).map(|k| Orbits::compute(&p1, LevelGroup::Edge(k))).collect();
        let stab = |g: LevelGroup, orbits: &Orbits, x: u32| g.order(q) / orbits.sizes[orbits.orbit_of[x as usize] as usize];

        let mut vertices = Vec::new();
        let mut vertex_index = Vec::new();
        for (k, orb) in vertex_orbits.iter().enumerate() {
            let mut idx = Vec::new();
            for &x in &orb.reps {
                let matrix = p1.lift(x).mul(&Mat2::diag(Poly::monomial(f, 1, k), Poly::one(f)));
                idx.push(vertices.len());
                vertices.push(QVertex {
                    id: vertices.len(),
                    level: k,
                    rep: EdgeRep::of_vertex(&matrix),
                    matrix,
                    stabilizer: stab(LevelGroup::Vertex(k), orb, x) / (q - 1),
                    point: x,
                });
            }
            vertex_index.push(idx);
        }
        let vid = |k: usize, x: u32| vertex_index[k][vertex_orbits[k].orbit_of[x as usize] as usize];

        let mut edges = Vec::new();
        let mut edge_index = Vec::new();
        for (k, orb) in edge_orbits.iter().enumerate().take(top) {
            let mut idx = Vec::new();
            for &x in &orb.reps {
                let se = stab(LevelGroup::Edge(k), orb, x);
                let so = stab(LevelGroup::Vertex(k), &vertex_orbits[k], x);
                let st = stab(LevelGroup::Vertex(k + 1), &vertex_orbits[k + 1], x);
                idx.push(edges.len());
                edges.push(QEdge {
                    id: edges.len(),
                    level: k,
                    origin: vid(k, x),
                    terminus: vid(k + 1, x),
                    matrix: p1.lift(x).mul(&Mat2::diag(Poly::monomial(f, 1, k), Poly::one(f))),
                    stabilizer: se / (q - 1),
                    m_origin: so / se,
                    m_terminus: st / se,
                    point: x,
                });
            }
            edge_index.push(idx);
        }

        let genus = edges.len() + 1 - vertices.len();
        let mut g = Self {
            schema_version: GRAPH_SCHEMA_VERSION,
            q: f.p(),
            n: n.clone(),
            end_level: top,
            genus,
            vertices,
            edges,
            ends: Vec::new(),
            spanning_tree: Vec::new(),
            identifications: Vec::new(),
            lifts: Vec::new(),
            p1,
            vertex_orbits,
            edge_orbits,
            vertex_index,
            edge_index,
        };
        g.ends = g.compute_ends()?;
        g.compute_tree()?;
        Ok(g)
    }

    pub fn field(&self) -> PrimeField {
        self.n.field()
    }

    pub fn p1(&self) -> &P1Mod {
        &self.p1
    }

    /// Graphviz rendering: finite part as solid edges labelled by |Γ_e|, each end as a
    /// dashed edge to a node named after its cusp.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph \"Gamma0({})\" {{\n", self.n);
        for v in &self.vertices {
            out += &format!("  v{} [label=\"v{} k={} |G|={}\"];\n", v.id, v.id, v.level, v.stabilizer);
        }
        for e in &self.edges {
            let style = if self.spanning_tree.contains(&e.id) { "solid" } else { "bold" };
            out += &format!(
                "  v{} -> v{} [label=\"e{} |G|={}\", style={style}];\n",
                e.origin, e.terminus, e.id, e.stabilizer
            );
        }
        for (i, end) in self.ends.iter().enumerate() {
            out += &format!("  c{i} [label=\"{}\", shape=box];\n", end.cusp);
            out += &format!("  v{} -> c{i} [style=dashed];\n", end.vertex);
        }
        out += "}\n";
        out
    }

    pub fn cusps(&self) -> Vec<P1Point> {
        self.ends.iter().map(|e| e.cusp.clone()).collect()
    }

    fn end_group(&self) -> LevelGroup {
        LevelGroup::Vertex(self.end_level)
    }

    /// Index of the end (cusp class) containing s.
    pub fn cusp_class(&self, s: &P1Point) -> usize {
        let x = self.cusp_point(s);
        let orb = &self.vertex_orbits[self.end_level];
        let vertex = self.vertex_index[self.end_level][orb.orbit_of[x as usize] as usize];
        self.ends.iter().position(|e| e.vertex == vertex).expect("every orbit has an end")
    }

    fn cusp_point(&self, s: &P1Point) -> u32 {
        let g = cusp_matrix(s);
        self.p1.point(&g.c, &g.d).expect("primitive bottom row")
    }

    fn compute_ends(&self) -> Result<Vec<End>> {
        let f = self.field();
        let orb = &self.vertex_orbits[self.end_level];
        let mut found: Vec<Option<P1Point>> = vec![None; orb.len()];
        let mut candidates = vec![P1Point::infinity(f), P1Point::new(Poly::zero(f), Poly::one(f))?];
        for den in monic_divisors(&self.n).into_iter().filter(|d| d.deg() > Some(0)) {
            let dd = den.deg().unwrap();
            let mut nums: Vec<Poly> = enumerate_below(f, dd).filter(|a| !a.is_zero() && a.gcd(&den).is_one()).collect();
            nums.sort_by(|a, b| (!a.is_one()).cmp(&!b.is_one()).then(a.cmp_canonical(b)));
            for a in nums {
                candidates.push(P1Point::new(a, den.clone())?);
            }
        }
        for s in candidates {
            let o = orb.orbit_of[self.cusp_point(&s) as usize] as usize;
            if found[o].is_none() {
                found[o] = Some(s);
            }
        }
        let mut ends = Vec::new();
        for (o, s) in found.into_iter().enumerate() {
            let s = s.ok_or_else(|| Error::Consistency(format!("no cusp representative for end {o}")))?;
            ends.push(End { matrix: cusp_matrix(&s), cusp: s, vertex: self.vertex_index[self.end_level][o] });
        }
        // ∞, 0, then by denominator degree and coefficients
        ends.sort_by_key(|a| cusp_order_key(&a.cusp));
        Ok(ends)
    }

    /// Quotient vertex of a tree vertex.
    pub fn vertex_of(&self, m: &Mat2) -> usize {
        let r = reduce(m);
        let k = r.k.min(self.end_level);
        let x = self.p1.point(&r.g.c, &r.g.d).expect("GL_2(A) element");
        self.vertex_index[k][self.vertex_orbits[k].orbit_of[x as usize] as usize]
    }

    /// Quotient edge (with orientation) of a tree edge.
    pub fn edge_of(&self, m: &Mat2) -> EdgeHit {
        let loc = locate_edge(m);
        let x = self.p1.point(&loc.g.c, &loc.g.d).expect("GL_2(A) element");
        if loc.k >= self.end_level {
            let orb = &self.vertex_orbits[self.end_level];
            let v = self.vertex_index[self.end_level][orb.orbit_of[x as usize] as usize];
            let end = self.ends.iter().position(|e| e.vertex == v);
            return EdgeHit { edge: None, end, positive: loc.up };
        }
        let orb = &self.edge_orbits[loc.k];
        let e = self.edge_index[loc.k][orb.orbit_of[x as usize] as usize];
        EdgeHit { edge: Some(e), end: None, positive: loc.up }
    }

    /// γ ∈ Γ_0(n) with γ·v1 = v2 for tree vertices, if they are equivalent.
    pub fn vertex_equiv(&self, m1: &Mat2, m2: &Mat2) -> Option<Mat2> {
        let (r1, r2) = (reduce(m1), reduce(m2));
        if r1.k != r2.k {
            return None;
        }
        let k = r1.k.min(self.end_level);
        let x1 = self.p1.point(&r1.g.c, &r1.g.d)?;
        let x2 = self.p1.point(&r2.g.c, &r2.g.d)?;
        let h = transporter(&self.p1, LevelGroup::Vertex(k), x1, x2)?;
        let gamma = r2.g.mul(&h.inverse()?).mul(&r1.g.inverse()?);
        Some(gamma.normalized())
    }

    /// γ ∈ Γ_0(n) with γ·s1 = s2, if the cusps are equivalent.
    pub fn cusp_equiv(&self, s1: &P1Point, s2: &P1Point) -> Option<Mat2> {
        let (g1, g2) = (cusp_matrix(s1), cusp_matrix(s2));
        let h = transporter(&self.p1, self.end_group(), self.cusp_point(s1), self.cusp_point(s2))?;
        Some(g2.mul(&h.inverse()?).mul(&g1.inverse()?).normalized())
    }

    /// Stabilizer in Γ_0(n)/(scalars) of the tree vertex named by m.
    pub fn vertex_stabilizer(&self, m: &Mat2) -> Vec<Mat2> {
        let r = reduce(m);
        self.conjugated_stabilizer(&r.g, LevelGroup::Vertex(r.k))
    }

    /// Stabilizer in Γ_0(n)/(scalars) of the tree edge named by m.
    pub fn edge_stabilizer(&self, m: &Mat2) -> Vec<Mat2> {
        let loc = locate_edge(m);
        self.conjugated_stabilizer(&loc.g, LevelGroup::Edge(loc.k))
    }

    fn conjugated_stabilizer(&self, g: &Mat2, group: LevelGroup) -> Vec<Mat2> {
        let f = self.field();
        let x = self.p1.point(&g.c, &g.d).expect("GL_2(A) element");
        let ginv = g.inverse().expect("GL_2(A) element");
        let mut out: Vec<Mat2> = group
            .elements(f)
            .into_iter()
            .filter(|h| self.p1.act(x, h) == x)
            .map(|h| g.mul(&h).mul(&ginv).normalized())
            .collect();
        out.sort_by_key(|m| m.to_string());
        out.dedup();
        out
    }

    /// Edges of the finite part incident to v as (edge, leaves v along the edge's orientation).
    pub fn incident(&self, v: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.origin == v {
                out.push((e.id, true));
            }
            if e.terminus == v {
                out.push((e.id, false));
            }
        }
        out
    }

    /// A tree edge leaving the vertex `lift` that lies over `edge` with the given
    /// orientation.
    pub fn lift_edge(&self, lift: &Mat2, edge: usize, positive: bool) -> Option<Mat2> {
        edges_from(lift).into_iter().find(|e| {
            let hit = self.edge_of(e);
            hit.edge == Some(edge) && hit.positive == positive
        })
    }

    fn compute_tree(&mut self) -> Result<()> {
        let f = self.field();
        let root = self.vertex_of(&Mat2::identity(f));
        let nv = self.vertices.len();
        let mut lifts: Vec<Option<Mat2>> = vec![None; nv];
        lifts[root] = Some(Mat2::identity(f));
        let mut in_tree = vec![false; self.edges.len()];
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let lv = lifts[v].clone().unwrap();
            for (e, outgoing) in self.incident(v) {
                let other = if outgoing { self.edges[e].terminus } else { self.edges[e].origin };
                if lifts[other].is_some() {
                    continue;
                }
                let te = self
                    .lift_edge(&lv, e, outgoing)
                    .ok_or_else(|| Error::Consistency(format!("edge {e} has no lift at vertex {v}")))?;
                lifts[other] = Some(terminus(&te));
                in_tree[e] = true;
                queue.push_back(other);
            }
        }
        let lifts: Vec<Mat2> = lifts
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Consistency("finite part is disconnected".into()))?;
        let mut ids = Vec::new();
        for e in 0..self.edges.len() {
            if in_tree[e] {
                continue;
            }
            let (o, t) = (self.edges[e].origin, self.edges[e].terminus);
            let te = self
                .lift_edge(&lifts[o], e, true)
                .ok_or_else(|| Error::Consistency(format!("edge {e} has no lift")))?;
            let gamma = self
                .vertex_equiv(&lifts[t], &terminus(&te))
                .ok_or_else(|| Error::Consistency(format!("edge {e} does not close up")))?;
            ids.push(Identification { edge: e, gamma });
        }
        if ids.len() != self.genus {
            return Err(Error::Consistency(format!("{} non-tree edges for genus {}", ids.len(), self.genus)));
        }
        self.spanning_tree = (0..self.edges.len()).filter(|&e| in_tree[e]).collect();
        self.identifications = ids;
        self.lifts = lifts;
        Ok(())
    }
}

/// g ∈ SL_2(A) with g·∞ = s.
pub fn cusp_matrix(s: &P1Point) -> Mat2 {
    let f = s.field();
    if s.is_infinity() {
        return Mat2::identity(f);
    }
    let (a, c) = (s.num(), s.den());
    let (_, u, v) = a.xgcd(c);
    // u·a + v·c = 1
    Mat2::new(a.clone(), -&v, c.clone(), u)
}

fn cusp_order_key(s: &P1Point) -> (u8, i64, Vec<u32>, Vec<u32>) {
    if s.is_infinity() {
        return (0, 0, vec![], vec![]);
    }
    if s.num().is_zero() {
        return (1, 0, vec![], vec![]);
    }
    let rev = |p: &Poly| p.coeffs().iter().rev().copied().collect::<Vec<_>>();
    (2, s.den().deg_i(), rev(s.den()), rev(s.num()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(p: u32, n: &str) -> QuotientGraph {
        let f = PrimeField::new(p).unwrap();
        QuotientGraph::build(&Poly::parse(f, n).unwrap()).unwrap()
    }

    #[test]
    fn dot_lists_every_vertex_edge_and_end() {
        let g = graph(3, "T^3-T^2");
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph") && dot.trim_end().ends_with('}'));
        assert_eq!(dot.matches(" -> v").count(), g.edges.len());
        assert_eq!(dot.matches("style=dashed").count(), g.ends.len());
        assert_eq!(dot.matches("[label=\"v").count(), g.vertices.len());
    }

    #[test]
    fn worked_examples() {
        let g = graph(2, "T^3");
        assert_eq!(g.genus, 1);
        let cusps: Vec<String> = g.cusps().iter().map(|c| c.to_string()).collect();
        assert_eq!(cusps, ["inf", "0", "1/T", "1/T^2"]);
        let g = graph(3, "T^3-T^2");
        assert_eq!(g.genus, 2);
        let cusps: Vec<String> = g.cusps().iter().map(|c| c.to_string()).collect();
        assert_eq!(cusps, ["inf", "0", "1/T", "1/(T+2)", "1/T^2", "1/(T^2+2*T)"]);
        assert_eq!(graph(2, "T").genus, 0);
        assert_eq!(graph(2, "T").ends.len(), 2);
    }

    #[test]
    fn weighted_stars_have_q_plus_one_edges() {
        for (p, n) in [(2, "T^3"), (3, "T^3-T^2"), (2, "T^4+T"), (3, "T^2+1")] {
            let g = graph(p, n);
            for v in &g.vertices {
                let mut total: u64 = g
                    .incident(v.id)
                    .iter()
                    .map(|&(e, out)| if out { g.edges[e].m_origin } else { g.edges[e].m_terminus })
                    .sum();
                if v.level == g.end_level {
                    total += 1; // the end leaving upward
                }
                assert_eq!(total, p as u64 + 1, "{n} vertex {}", v.id);
                for &(e, out) in &g.incident(v.id) {
                    let m = if out { g.edges[e].m_origin } else { g.edges[e].m_terminus };
                    assert_eq!(v.stabilizer % m, 0);
                }
            }
        }
    }

    #[test]
    fn identifications_lie_in_gamma0() {
        for (p, n) in [(2, "T^3"), (3, "T^3-T^2")] {
            let g = graph(p, n);
            for id in &g.identifications {
                assert!(id.gamma.in_gamma0(&g.n), "{}", id.gamma);
            }
        }
    }

    #[test]
    fn cusp_equivalence() {
        let g = graph(2, "T^3");
        let f = g.field();
        let s = P1Point::parse(f, "1/(T^2+T)").unwrap();
        let class = g.cusp_class(&s);
        let rep = g.ends[class].cusp.clone();
        let gamma = g.cusp_equiv(&s, &rep).unwrap();
        assert!(gamma.in_gamma0(&g.n));
        assert_eq!(gamma.apply(&s).unwrap(), rep);
        let g1 = graph(2, "T");
        let zero = P1Point::parse(f, "0").unwrap();
        assert!(g1.cusp_equiv(&zero, &P1Point::infinity(f)).is_none());
    }

    #[test]
    fn stabilizer_orders_match() {
        let g = graph(3, "T^3-T^2");
        for v in &g.vertices {
            assert_eq!(g.vertex_stabilizer(&v.matrix).len() as u64, v.stabilizer);
        }
        for e in &g.edges {
            let st = g.edge_stabilizer(&e.matrix);
            assert_eq!(st.len() as u64, e.stabilizer);
            for s in &st {
                assert!(s.in_gamma0(&g.n));
            }
        }
    }
}
