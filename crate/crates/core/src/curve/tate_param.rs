use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ff_base::RationalFunction;
use crate::laurent::Laurent;

/// Most terms of the reversed j-series used.
pub const MAX_TERMS: usize = 20;

fn series_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// e_0..e_{n-1} with u·j(u) = Σ e_k u^k = E4(u)³ / Π(1 - u^m)^24.
pub fn j_series_coefficients(n: usize) -> Vec<BigInt> {
    let sigma3 = |m: usize| -> BigInt { (1..=m).filter(|d| m.is_multiple_of(*d)).map(|d| BigInt::from(d).pow(3)).sum() };
    let mut e4 = vec![BigInt::one()];
    e4.extend((1..n).map(|m| BigInt::from(240) * sigma3(m)));
    let e4c = series_mul(&series_mul(&e4, &e4, n), &e4, n);
    // 1 / Π(1 - u^m)^24 = Π (Σ_k u^{mk})^24
    let mut inv_eta = vec![BigInt::zero(); n];
    inv_eta[0] = BigInt::one();
    for m in 1..n {
        let geo: Vec<BigInt> = (0..n).map(|k| if k % m == 0 { BigInt::one() } else { BigInt::zero() }).collect();
        for _ in 0..24 {
            inv_eta = series_mul(&inv_eta, &geo, n);
        }
    }
    series_mul(&e4c, &inv_eta, n)
}

/// d(1)..d(n) with u = Σ d(k) j^{-k}, by Lagrange inversion of 1/j = u / (u·j(u)).
pub fn reversed_j_coefficients(n: usize) -> Vec<BigInt> {
    let g = j_series_coefficients(n);
    let mut out = Vec::with_capacity(n);
    let mut gk = vec![BigInt::one()];
    for k in 1..=n {
        gk = series_mul(&gk, &g, n);
        // d(k) = [u^{k-1}] g^k / k
        let (q, r) = gk[k - 1].div_rem(&BigInt::from(k));
        assert!(r.is_zero(), "Lagrange coefficient not integral");
        out.push(q);
    }
    out
}

fn reduce(x: &BigInt, p: u32) -> u32 {
    x.mod_floor(&BigInt::from(p)).to_u32().unwrap()
}

/// t_E = Σ d(k) j_E^{-k} to absolute precision `prec` in π = 1/T.
pub fn tate_parameter_from_j(j: &RationalFunction, prec: i64) -> Result<Laurent> {
    let f = j.field();
    let v = -j.val_inf();
    if v <= 0 {
        return Err(Error::InvalidInput(format!("j = {j} has no pole at infinity")));
    }
    let terms = (prec + v - 1) / v;
    if terms as usize > MAX_TERMS {
        return Err(Error::CapExceeded(format!("{terms} terms of the reversed j-series (cap {MAX_TERMS})")));
    }
    let w = Laurent::from_rational(&j.inv()?, prec);
    let d = reversed_j_coefficients(terms as usize);
    let mut t = Laurent::zero_at(f, prec);
    let mut wk = w.clone();
    for dk in &d {
        t = t.add(&wk.scale(reduce(dk, f.p())));
        wk = wk.mul(&w).truncate(prec);
    }
    Ok(t.truncate(prec))
}

/// j(t) = 1/t + Σ e_k t^{k-1} with integer coefficients reduced mod p.
pub fn j_of_parameter(t: &Laurent, terms: usize) -> Result<Laurent> {
    let f = t.field();
    let e = j_series_coefficients(terms);
    let inv = t.inv(t.rel_prec().max(1) as usize)?;
    let mut out = inv.clone();
    let mut tk = Laurent::one(f);
    for ek in e.iter().skip(1) {
        out = out.add(&tk.scale(reduce(ek, f.p())));
        tk = tk.mul(t);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::WeierstrassCurve;
    use crate::ff_base::PrimeField;

    #[test]
    fn classical_coefficients() {
        let e = j_series_coefficients(4);
        assert_eq!(e, [1, 744, 196884, 21493760].map(BigInt::from));
        let d = reversed_j_coefficients(4);
        assert_eq!(d, [1, 744, 750420, 872769632].map(BigInt::from));
    }

    #[test]
    fn second_example_parameter() {
        let f = PrimeField::new(3).unwrap();
        let e = WeierstrassCurve::parse(f, "a2=T^2+T;a4=T^2").unwrap();
        let t = tate_parameter_from_j(&e.j_invariant(), 11).unwrap();
        assert!(t.agrees_to(&Laurent::parse(f, "pi^4 + 2*pi^5 + pi^7 + 2*pi^8 + O(pi^11)").unwrap(), 11));
        let jt = j_of_parameter(&t, 10).unwrap();
        let je = Laurent::from_rational(&e.j_invariant(), 20);
        // relative precision of t is 7, so j(t) is known to π^{-4+7}
        assert!(jt.agrees_to(&je, jt.prec()));
        assert!(jt.prec() >= 3);
    }
}
