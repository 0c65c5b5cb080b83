use num_integer::Integer;
use serde::Serialize;

use super::{Theta, ThetaOptions, ThetaValue};
use crate::error::{Error, Result};
use crate::ff_base::{P1Point, Poly};
use crate::laurent::{Laurent, OmegaPoint};
use crate::matrix::Mat2;

/// C[i][j] = c_{α_i}(α_j) = u_{α_i}(α_j ∞), or exactly 1 when α_j fixes ∞.
pub fn multiplier_matrix(
    n: &Poly,
    gens: &[Mat2],
    omega: &OmegaPoint,
    opts: &ThetaOptions,
) -> Result<Vec<Vec<ThetaValue>>> {
    let f = n.field();
    let mut out = Vec::with_capacity(gens.len());
    for a in gens {
        let th = Theta::new(n, a, omega)?;
        let mut row = Vec::with_capacity(gens.len());
        for b in gens {
            let s = P1Point::new(b.a.clone(), b.c.clone())?;
            row.push(if s.is_infinity() {
                ThetaValue { value: Laurent::one(f), eps_exp: opts.eps_exp, members: 0, candidates: 0 }
            } else {
                th.evaluate(&s, opts)?
            });
        }
        out.push(row);
    }
    Ok(out)
}

/// The period lattice t^Z of a cochain Σ k_j j(α_j) inside K_∞^*.
#[derive(Clone, Debug, Serialize)]
pub struct TateLattice {
    /// generator with |t| < 1
    pub t: Laurent,
    /// v(t)
    pub mu: i64,
    /// c_φ(α_i) for each generator α_i
    pub periods: Vec<Laurent>,
    /// t = Π periods[i]^{exponents[i]}
    pub exponents: Vec<i64>,
}

fn power(x: &Laurent, k: i64) -> Result<Laurent> {
    x.pow(k, x.rel_prec().max(1) as usize)
}

/// The lattice of φ = Σ_j coeffs[j]·j(α_j) from the multiplier matrix of the α_j.
pub fn lattice_generator(coeffs: &[i64], matrix: &[Vec<Laurent>]) -> Result<TateLattice> {
    let g = coeffs.len();
    if matrix.len() != g || matrix.iter().any(|r| r.len() != g) {
        return Err(Error::InvalidInput("multiplier matrix shape does not match the cochain".into()));
    }
    let f = matrix.first().and_then(|r| r.first()).map(|x| x.field()).ok_or_else(|| {
        Error::InvalidInput("empty lattice".into())
    })?;
    let mut periods = Vec::with_capacity(g);
    for i in 0..g {
        let mut c = Laurent::one(f);
        for (j, &k) in coeffs.iter().enumerate() {
            c = c.mul(&power(&matrix[j][i], k)?);
        }
        periods.push(c);
    }
    let vals: Vec<i64> = periods.iter().map(Laurent::valuation).collect::<Result<_>>()?;
    // extended gcd over the valuations
    let (mut mu, mut exponents) = (0i64, vec![0i64; g]);
    for (i, &v) in vals.iter().enumerate() {
        let e = mu.extended_gcd(&v);
        for x in exponents.iter_mut() {
            *x *= e.x;
        }
        exponents[i] = e.y;
        mu = e.gcd;
    }
    if mu == 0 {
        return Err(Error::Consistency("all periods are units; the cochain is not a newform".into()));
    }
    if mu < 0 {
        mu = -mu;
        exponents.iter_mut().for_each(|x| *x = -*x);
    }
    let mut t = Laurent::one(f);
    for (c, &k) in periods.iter().zip(&exponents) {
        t = t.mul(&power(c, k)?);
    }
    for (c, &v) in periods.iter().zip(&vals) {
        let w = c.mul(&power(&t, -v / mu)?);
        if !is_one(&w) {
            return Err(Error::Consistency(format!("period {c} is not a power of t = {t}")));
        }
    }
    Ok(TateLattice { t, mu, periods, exponents })
}

fn is_one(w: &Laurent) -> bool {
    w.is_constant() && w.lead() == 1
}

/// Order of the image of u in K_∞^*/t^Z.
#[derive(Clone, Debug, Serialize)]
pub struct CuspOrder {
    pub order: u64,
    pub bound: u64,
    /// v(u)
    pub valuation: i64,
    /// digits of u^k·t^{-m} confirmed to be a constant
    pub checked_digits: i64,
}

/// Smallest k | bound with u^k ∈ t^Z. For every k with μ | k·v(u) the quotient
/// w = u^k·t^{-k·v(u)/μ} is a root of unity of K_∞, hence a constant of F_q^*, so its
/// leading coefficient decides membership; the remaining known digits are checked to
/// vanish.
pub fn reduce_mod_lattice(u: &Laurent, lattice: &TateLattice, bound: u64) -> Result<CuspOrder> {
    if bound == 0 {
        return Err(Error::InvalidInput("torsion bound must be positive".into()));
    }
    let v = u.valuation()?;
    let mu = lattice.mu;
    for k in (1..=bound).filter(|k| bound.is_multiple_of(*k)) {
        if (k as i64 * v) % mu != 0 {
            continue;
        }
        let m = k as i64 * v / mu;
        let w = power(u, k as i64)?.mul(&power(&lattice.t, -m)?);
        if !w.is_constant() {
            return Err(Error::Consistency(format!(
                "u^{k} t^{} = {w} is not a constant; the point is not torsion of order dividing {bound}",
                -m
            )));
        }
        if w.lead() == 1 {
            return Ok(CuspOrder { order: k, bound, valuation: v, checked_digits: w.rel_prec() });
        }
    }
    Err(Error::Consistency(format!("no k dividing {bound} puts u in the lattice")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_base::PrimeField;

    fn lp(f: PrimeField, s: &str) -> Laurent {
        Laurent::parse(f, s).unwrap()
    }

    #[test]
    fn orders_in_a_synthetic_lattice() {
        let f = PrimeField::new(3).unwrap();
        let t = lp(f, "pi^4 + 2*pi^5 + pi^7 + O(pi^12)");
        let lat = lattice_generator(&[1], &[vec![t.clone()]]).unwrap();
        assert_eq!(lat.mu, 4);
        // u = 2·t^{1/2}-like: u^2 = t exactly is not available, so use u = 2·t: order 2 (2^2 = 1)
        let u = t.scale(2);
        assert_eq!(reduce_mod_lattice(&u, &lat, 8).unwrap().order, 2);
        assert_eq!(reduce_mod_lattice(&t, &lat, 8).unwrap().order, 1);
        // a non-constant unit is flagged
        let bad = lp(f, "1 + pi + O(pi^6)");
        assert!(reduce_mod_lattice(&bad, &lat, 8).is_err());
    }

    #[test]
    fn inverse_period_gives_positive_valuation() {
        let f = PrimeField::new(2).unwrap();
        let c = lp(f, "pi^-4 + pi^-3 + O(pi^2)");
        let lat = lattice_generator(&[1], &[vec![c.clone()]]).unwrap();
        assert_eq!(lat.mu, 4);
        assert_eq!(lat.exponents, vec![-1]);
        assert!(lat.t.mul(&c).agrees_to(&Laurent::one(f), 2));
    }
}
