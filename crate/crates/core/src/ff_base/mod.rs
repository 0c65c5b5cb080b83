//! Exact arithmetic in F_p, F_p[T], F_p(T) and residue fields A/P.

mod field;
mod poly;
mod rational;
mod residue;

pub use field::PrimeField;
pub use poly::{Poly, PolyJson};
pub use rational::{P1Point, RationalFunction};
pub use residue::ResidueField;

pub(crate) use field::prime_factors;

use crate::error::{Error, Result};

pub fn poly_gcd(f: &Poly, g: &Poly) -> Poly {
    f.gcd(g)
}

/// All monic polynomials of degree exactly `d`, ordered by their lower coefficients
/// read as base-p digits.
pub fn enumerate_monic(field: PrimeField, d: usize) -> Vec<Poly> {
    let count = (field.p() as u64).pow(d as u32);
    let top = Poly::monomial(field, 1, d);
    (0..count)
        .map(|i| &top + &Poly::from_index(field, i))
        .collect()
}

/// All polynomials of degree < `d` (including zero), by index.
pub fn enumerate_below(field: PrimeField, d: usize) -> impl Iterator<Item = Poly> {
    let count = (field.p() as u64).pow(d as u32);
    (0..count).map(move |i| Poly::from_index(field, i))
}

/// Trial-division irreducibility test.
pub fn is_irreducible(p: &Poly) -> bool {
    let Some(d) = p.deg() else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let f = p.field();
    (1..=d / 2).all(|k| enumerate_monic(f, k).iter().all(|m| !m.divides(p)))
}

/// Monic irreducibles of degree exactly `d`, via Rabin's test (T^{q^d} = T mod P and
/// gcd(T^{q^{d/r}} - T, P) = 1 for every prime r | d).
pub fn monic_irreducibles(field: PrimeField, d: usize) -> Vec<Poly> {
    enumerate_monic(field, d)
        .into_iter()
        .filter(is_irreducible_fast)
        .collect()
}

/// Rabin's irreducibility test; agrees with [`is_irreducible`] (cross-checked in tests).
pub fn is_irreducible_fast(p: &Poly) -> bool {
    let Some(d) = p.deg() else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let f = p.field();
    let q = f.p() as u64;
    let t = Poly::t(f);
    // frob(k) = T^{q^k} mod P by repeated q-th powering
    let frob = |k: usize| {
        let mut x = t.rem(p);
        for _ in 0..k {
            x = x.pow_mod(q, p);
        }
        x
    };
    if frob(d) != t.rem(p) {
        return false;
    }
    for r in prime_factors(d as u64) {
        let x = frob(d / r as usize);
        if !(&x - &t).gcd(p).is_one() {
            return false;
        }
    }
    true
}

/// Monic irreducible P with deg P <= `max_degree` and P = `residue` mod `modulus`,
/// ascending degree. An empty result is legal.
pub fn irreducibles_with_condition(
    field: PrimeField,
    max_degree: usize,
    modulus: &Poly,
    residue: &Poly,
) -> Result<Vec<Poly>> {
    if !residue.gcd(modulus).is_one() {
        return Err(Error::InvalidInput(format!(
            "residue {residue} is not a unit modulo {modulus}"
        )));
    }
    let m = modulus.deg().unwrap_or(0);
    let r = residue.rem(modulus);
    let mut out = Vec::new();
    for d in 1..=max_degree {
        if d < m {
            // only P = r itself can qualify
            if r.deg() == Some(d) && r.is_monic() && is_irreducible_fast(&r) {
                out.push(r.clone());
            }
            continue;
        }
        // P = r + modulus*h with h of degree d - m and leading coeff fixed to make P monic
        let lead = field.inv(modulus.lead());
        let top = Poly::monomial(field, lead, d - m);
        for low in enumerate_below(field, d - m) {
            let h = &top + &low;
            let cand = &r + &(modulus * &h);
            if is_irreducible_fast(&cand) {
                out.push(cand);
            }
        }
    }
    Ok(out)
}

/// Monic divisors of `n`, ascending canonical order.
pub fn monic_divisors(n: &Poly) -> Vec<Poly> {
    let f = n.field();
    let d = n.deg().unwrap_or(0);
    let mut out = Vec::new();
    for k in 0..=d {
        for m in enumerate_monic(f, k) {
            if m.divides(n) {
                out.push(m);
            }
        }
    }
    out
}

/// Distinct monic irreducible factors with multiplicities, by trial division.
pub fn factor(n: &Poly) -> Vec<(Poly, u32)> {
    let f = n.field();
    let mut rest = n.monic();
    let mut out = Vec::new();
    let mut k = 1;
    while rest.deg().unwrap_or(0) >= 2 * k {
        for m in enumerate_monic(f, k) {
            if !is_irreducible_fast(&m) {
                continue;
            }
            let mut e = 0;
            while let Some(q) = rest.div_exact(&m) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((m, e));
            }
        }
        k += 1;
    }
    if rest.deg().unwrap_or(0) >= 1 {
        match out.iter_mut().find(|(m, _)| *m == rest) {
            Some((_, e)) => *e += 1,
            None => out.push((rest, 1)),
        }
    }
    out.sort_by(|a, b| a.0.cmp_canonical(&b.0));
    out
}
