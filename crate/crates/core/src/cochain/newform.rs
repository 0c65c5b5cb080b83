use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::fourier::{fourier_coefficient, NuConvention};
use super::{cuspidal_basis, hecke_matrix, petersson, HarmonicCochain};
use crate::bt_graph::QuotientGraph;
use crate::error::{Error, Result};
use crate::ff_base::{monic_divisors, Poly};
use crate::linalg::{content, integer_kernel, IntVec};
use crate::matrix::Mat2;

/// i_{a,n'}(φ)(e) = φ(diag(a, 1)·e), from level n' up to level n.
pub fn degeneracy_map(
    big: &QuotientGraph,
    small: &QuotientGraph,
    a: &Poly,
    phi: &HarmonicCochain,
) -> Result<HarmonicCochain> {
    let quotient = big
        .n
        .div_exact(&small.n)
        .filter(|_| small.n != big.n)
        .ok_or_else(|| Error::InvalidInput(format!("{} is not a proper divisor of {}", small.n, big.n)))?;
    if !a.is_monic() || !a.divides(&quotient) {
        return Err(Error::InvalidInput(format!("{a} does not divide {quotient}")));
    }
    let f = big.field();
    let da = Mat2::diag(a.clone(), Poly::one(f));
    let values = big.edges.iter().map(|e| phi.eval(small, &da.mul(&e.matrix))).collect();
    Ok(HarmonicCochain { values })
}

/// Clear denominators of a rational row.
fn integral_row(row: &[BigRational]) -> IntVec {
    let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
}

fn combine(basis: &[HarmonicCochain], coords: &[BigInt]) -> Result<HarmonicCochain> {
    let len = basis.first().map_or(0, |b| b.values.len());
    let mut acc = vec![BigInt::zero(); len];
    for (b, c) in basis.iter().zip(coords) {
        for (x, &v) in acc.iter_mut().zip(&b.values) {
            *x += c * BigInt::from(v);
        }
    }
    let values = acc
        .iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Consistency("cochain value overflow".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(HarmonicCochain { values })
}

/// Saturated basis of the Petersson-orthogonal complement of all old forms, i.e.
/// images of the degeneracy maps from proper divisors n' of n.
pub fn new_subspace(g: &QuotientGraph, basis: &[HarmonicCochain]) -> Result<Vec<HarmonicCochain>> {
    let mut old = Vec::new();
    for np in monic_divisors(&g.n) {
        if np.deg() == Some(0) || np == g.n {
            continue;
        }
        let small = QuotientGraph::build(&np)?;
        if small.genus == 0 {
            continue;
        }
        let quotient = g.n.div_exact(&np).unwrap();
        for b in cuspidal_basis(&small)? {
            for a in monic_divisors(&quotient) {
                old.push(degeneracy_map(g, &small, &a, &b)?);
            }
        }
    }
    if old.is_empty() {
        return Ok(basis.to_vec());
    }
    let rows: Vec<IntVec> = old
        .iter()
        .map(|o| integral_row(&basis.iter().map(|b| petersson(g, b, o)).collect::<Vec<_>>()))
        .collect();
    integer_kernel(&rows, basis.len()).iter().map(|x| combine(basis, x)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Newform {
    pub phi: HarmonicCochain,
    /// ν convention under which c(φ, 1) = 1 and c(φ, p) = λ_p q^{-deg p}
    pub convention: NuConvention,
    /// (p, λ_p) pairs used to cut out the eigenline
    pub eigenvalues: Vec<(Poly, i64)>,
    pub petersson_norm: String,
}

/// The primitive common eigenvector of T_p with eigenvalues λ_p in the new space,
/// signed so that c(φ, 1) = 1.
pub fn newform(g: &QuotientGraph, eigen: &[(Poly, i64)]) -> Result<Newform> {
    let basis = cuspidal_basis(g)?;
    let new = new_subspace(g, &basis)?;
    if new.is_empty() {
        return Err(Error::Consistency(format!("no new forms at level {}", g.n)));
    }
    let dim = new.len();
    let mut rows: Vec<IntVec> = Vec::new();
    for (p, lam) in eigen {
        let t = hecke_matrix(g, &new, p)?;
        for (i, row) in t.iter().enumerate() {
            let mut r = row.clone();
            r[i] -= BigRational::from_integer((*lam).into());
            rows.push(integral_row(&r));
        }
    }
    let kernel = integer_kernel(&rows, dim);
    if kernel.len() != 1 {
        return Err(Error::Consistency(format!(
            "common eigenspace for the supplied eigenvalues has dimension {} (expected 1); is the conductor right?",
            kernel.len()
        )));
    }
    let x: IntVec = {
        let c = content(&kernel[0]);
        kernel[0].iter().map(|v| v / &c).collect()
    };
    let phi = combine(&new, &x)?;
    let f = g.field();
    let one = Poly::one(f);
    for conv in [NuConvention::CharacterSum, NuConvention::MinusOneOnZero] {
        let c1 = fourier_coefficient(g, &phi, &one, conv)?;
        if c1.abs() != BigRational::one() {
            continue;
        }
        let signed = if c1.is_negative() { phi.neg() } else { phi.clone() };
        let consistent = eigen.iter().all(|(p, lam)| {
            let expect = BigRational::new((*lam).into(), BigInt::from(f.p()).pow(p.deg().unwrap() as u32));
            fourier_coefficient(g, &signed, p, conv).map(|c| c == expect).unwrap_or(false)
        });
        if consistent {
            let norm = petersson(g, &signed, &signed);
            return Ok(Newform { phi: signed, convention: conv, eigenvalues: eigen.to_vec(), petersson_norm: norm.to_string() });
        }
    }
    Err(Error::Consistency("no nu convention gives c(phi,1) = 1 and c(phi,p) = lambda_p q^-deg p".into()))
}
