//! Γ_0(n)-invariant cuspidal harmonic cochains on the quotient graph: integral
//! basis, Petersson product, Hecke operators, Fourier coefficients and newforms.

mod fourier;
mod newform;

pub use fourier::{fourier_coefficient, fourier_expansion_value, nu, FourierTable, NuConvention};
pub use newform::{degeneracy_map, new_subspace, newform, Newform};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::bt_graph::QuotientGraph;
use crate::error::{Error, Result};
use crate::ff_base::{enumerate_below, monic_divisors, Poly};
use crate::linalg::{coordinates, integer_kernel, IntVec};
use crate::matrix::Mat2;

/// Integer values on the finite-part edge orbits, in the stored orientation; zero
/// on the ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HarmonicCochain {
    pub values: Vec<i64>,
}

impl HarmonicCochain {
    pub fn zero(len: usize) -> Self {
        Self { values: vec![0; len] }
    }

    pub fn neg(&self) -> Self {
        Self { values: self.values.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self { values: self.values.iter().map(|x| k * x).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    pub fn content(&self) -> i64 {
        self.values.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
    }

    fn to_big(&self) -> IntVec {
        self.values.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn to_rational(&self) -> Vec<BigRational> {
        self.values.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    /// Value on an arbitrary edge of the tree.
    pub fn eval(&self, g: &QuotientGraph, edge: &Mat2) -> i64 {
        let hit = g.edge_of(edge);
        match hit.edge {
            Some(e) if hit.positive => self.values[e],
            Some(e) => -self.values[e],
            None => 0,
        }
    }
}

/// Σ m(ẽ)·φ(ẽ) over edges leaving each vertex orbit; all zero iff φ is harmonic.
pub fn harmonicity_defects(g: &QuotientGraph, phi: &HarmonicCochain) -> Vec<i64> {
    g.vertices
        .iter()
        .map(|v| {
            g.incident(v.id)
                .into_iter()
                .map(|(e, out)| {
                    let ed = &g.edges[e];
                    if out {
                        ed.m_origin as i64 * phi.values[e]
                    } else {
                        -(ed.m_terminus as i64) * phi.values[e]
                    }
                })
                .sum()
        })
        .collect()
}

pub fn is_harmonic(g: &QuotientGraph, phi: &HarmonicCochain) -> bool {
    harmonicity_defects(g, phi).iter().all(|&x| x == 0)
}

/// Saturated Z-basis of the cuspidal harmonic cochains, in Hermite normal form.
pub fn cuspidal_basis(g: &QuotientGraph) -> Result<Vec<HarmonicCochain>> {
    let ne = g.edges.len();
    let rows: Vec<IntVec> = g
        .vertices
        .iter()
        .map(|v| {
            let mut row = vec![BigInt::zero(); ne];
            for (e, out) in g.incident(v.id) {
                let ed = &g.edges[e];
                row[e] += if out { ed.m_origin as i64 } else { -(ed.m_terminus as i64) };
            }
            row
        })
        .collect();
    let kernel = integer_kernel(&rows, ne);
    if kernel.len() != g.genus {
        return Err(Error::Consistency(format!("cuspidal rank {} but genus {}", kernel.len(), g.genus)));
    }
    kernel
        .into_iter()
        .map(|v| {
            let values = v
                .iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::Consistency("cochain value overflow".into())))
                .collect::<Result<Vec<_>>>()?;
            Ok(HarmonicCochain { values })
        })
        .collect()
}

/// ⟨φ, ψ⟩ = Σ over unoriented edge orbits of (q-1)/|Γ_e| · φψ = Σ φψ / |Γ_e mod scalars|.
pub fn petersson(g: &QuotientGraph, phi: &HarmonicCochain, psi: &HarmonicCochain) -> BigRational {
    g.edges.iter().fold(BigRational::zero(), |acc, e| {
        let term = BigInt::from(phi.values[e.id]) * BigInt::from(psi.values[e.id]);
        acc + BigRational::new(term, BigInt::from(e.stabilizer))
    })
}

pub fn gram_matrix(g: &QuotientGraph, basis: &[HarmonicCochain]) -> Vec<Vec<BigRational>> {
    basis.iter().map(|a| basis.iter().map(|b| petersson(g, a, b)).collect()).collect()
}

/// The matrices [[a, b], [0, d]] with ad = m, a monic, (a, n) = 1, deg b < deg d.
pub fn hecke_matrices(m: &Poly, n: &Poly) -> Vec<Mat2> {
    let f = m.field();
    let mut out = Vec::new();
    for a in monic_divisors(m) {
        if !a.gcd(n).is_one() {
            continue;
        }
        let d = m.div_exact(&a).expect("a divides m");
        for b in enumerate_below(f, d.deg().unwrap()) {
            out.push(Mat2::new(a.clone(), b, Poly::zero(f), d.clone()));
        }
    }
    out
}

/// (T_m φ)(e) = Σ φ([[a, b], [0, d]]·e).
pub fn hecke(g: &QuotientGraph, m: &Poly, phi: &HarmonicCochain) -> Result<HarmonicCochain> {
    if !m.gcd(&g.n).is_one() || !m.is_monic() {
        return Err(Error::InvalidInput(format!("Hecke index {m} must be monic and coprime to {}", g.n)));
    }
    let mats = hecke_matrices(m, &g.n);
    let values = g
        .edges
        .iter()
        .map(|e| mats.iter().map(|h| phi.eval(g, &h.mul(&e.matrix))).sum())
        .collect();
    let out = HarmonicCochain { values };
    if !is_harmonic(g, &out) {
        return Err(Error::Consistency(format!("T_{m} image is not harmonic")));
    }
    Ok(out)
}

/// Matrix of T_m on a basis: column i holds the coordinates of T_m(basis[i]).
pub fn hecke_matrix(g: &QuotientGraph, basis: &[HarmonicCochain], m: &Poly) -> Result<Vec<Vec<BigRational>>> {
    let rows: Vec<IntVec> = basis.iter().map(|b| b.to_big()).collect();
    let mut cols = Vec::new();
    for b in basis {
        let img = hecke(g, m, b)?;
        let c = coordinates(&rows, &img.to_rational())
            .ok_or_else(|| Error::Consistency(format!("T_{m} leaves the cuspidal space")))?;
        cols.push(c);
    }
    Ok(crate::linalg::transpose(&cols))
}
