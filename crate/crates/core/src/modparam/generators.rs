use std::collections::VecDeque;

use serde::Serialize;

use crate::bt_graph::{geodesic, QuotientGraph};
use crate::cochain::HarmonicCochain;
use crate::error::{Error, Result};
use crate::matrix::Mat2;

/// α = Π α_i^{exponents[i]} over the cycle generators of Γ̄.
#[derive(Clone, Debug, Serialize)]
pub struct GroupWord {
    pub generators: Vec<Mat2>,
    pub exponents: Vec<i64>,
}

impl GroupWord {
    pub fn pairs(&self) -> Vec<(Mat2, i64)> {
        self.generators.iter().cloned().zip(self.exponents.iter().copied()).collect()
    }
}

/// Edge path between two quotient vertices inside the spanning tree, as
/// (edge, traversed along its orientation).
fn tree_path(g: &QuotientGraph, from: usize, to: usize) -> Vec<(usize, bool)> {
    let nv = g.vertices.len();
    let mut prev: Vec<Option<(usize, usize, bool)>> = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &e in &g.spanning_tree {
            let edge = &g.edges[e];
            let (w, forward) = if edge.origin == v {
                (edge.terminus, true)
            } else if edge.terminus == v {
                (edge.origin, false)
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, e, forward));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (v, e, forward) = prev[cur].expect("spanning tree is connected");
        path.push((e, forward));
        cur = v;
    }
    path.reverse();
    path
}

/// Cochain of the i-th fundamental cycle: the tree path from t(e_i) to o(e_i), then
/// e_i, each edge weighted by |Γ̃_e|.
pub fn cycle_cochain(g: &QuotientGraph, i: usize) -> HarmonicCochain {
    let id = &g.identifications[i];
    let e = &g.edges[id.edge];
    let mut phi = HarmonicCochain::zero(g.edges.len());
    for (f, forward) in tree_path(g, e.terminus, e.origin) {
        let w = g.edges[f].stabilizer as i64;
        phi.values[f] += if forward { w } else { -w };
    }
    phi.values[id.edge] += e.stabilizer as i64;
    phi
}

/// The generators α_i of Γ̄ read off the non-tree edges, with their cycle cochains.
pub fn generator_basis(g: &QuotientGraph) -> Vec<(Mat2, HarmonicCochain)> {
    (0..g.identifications.len()).map(|i| (g.identifications[i].gamma.clone(), cycle_cochain(g, i))).collect()
}

/// j(α)(e) computed from the tree: the signed number of γ ∈ Γ̃ with γe on the
/// geodesic from v to αv. Each geodesic edge over the orbit of e accounts for the
/// |Γ̃_e| elements of a stabilizer coset.
pub fn phi_alpha_direct(g: &QuotientGraph, alpha: &Mat2, e: &Mat2, v: &Mat2) -> Result<i64> {
    let target = g.edge_of(e);
    let Some(te) = target.edge else {
        return Err(Error::InvalidInput(format!("{e} is not an edge of the finite part")));
    };
    let weight = g.edge_stabilizer(e).len() as i64;
    let mut total = 0;
    for f in geodesic(v, &alpha.mul(v)) {
        let hit = g.edge_of(&f);
        if hit.edge == Some(te) {
            total += if hit.positive == target.positive { weight } else { -weight };
        }
    }
    Ok(total)
}

/// j(α) on every finite edge orbit from a single geodesic; path segments inside the
/// ends must cancel.
pub fn j_image(g: &QuotientGraph, alpha: &Mat2) -> Result<HarmonicCochain> {
    let f = g.field();
    let v = Mat2::identity(f);
    let weights: Vec<i64> = g.edges.iter().map(|e| g.edge_stabilizer(&e.matrix).len() as i64).collect();
    let mut phi = HarmonicCochain::zero(g.edges.len());
    let mut on_ends = vec![0i64; g.ends.len()];
    for edge in geodesic(&v, &alpha.mul(&v)) {
        let hit = g.edge_of(&edge);
        let sign = if hit.positive { 1 } else { -1 };
        match (hit.edge, hit.end) {
            (Some(e), _) => phi.values[e] += sign * weights[e],
            (None, Some(k)) => on_ends[k] += sign,
            (None, None) => return Err(Error::Consistency(format!("edge {edge} lies in no orbit"))),
        }
    }
    if on_ends.iter().any(|&x| x != 0) {
        return Err(Error::Consistency(format!("geodesic of {alpha} does not return from an end")));
    }
    Ok(phi)
}

/// Exponents n_i with φ = Σ n_i·j(α_i). Each cycle cochain is the only one that is
/// nonzero on its own non-tree edge, which makes the solve triangular.
pub fn j_inverse(g: &QuotientGraph, phi: &HarmonicCochain) -> Result<GroupWord> {
    let basis = generator_basis(g);
    let mut exponents = Vec::with_capacity(basis.len());
    let mut rest = phi.clone();
    for (id, (_, cyc)) in g.identifications.iter().zip(&basis) {
        let w = cyc.values[id.edge];
        let x = phi.values[id.edge];
        if w == 0 || x % w != 0 {
            return Err(Error::Consistency(format!("cochain is not an integral combination of cycles at edge {}", id.edge)));
        }
        exponents.push(x / w);
        rest = rest.add(&cyc.scale(-(x / w)));
    }
    if !rest.is_zero() {
        return Err(Error::Consistency("cochain is not in the span of the cycle cochains".into()));
    }
    Ok(GroupWord { generators: basis.into_iter().map(|(m, _)| m).collect(), exponents })
}
