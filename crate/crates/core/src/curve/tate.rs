use std::fmt;

use serde::{Serialize, Serializer};

use super::{raw_invariants, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::ff_base::{factor, Poly, ResidueField};

/// A place of F_q(T): a monic irreducible polynomial or ∞ (uniformizer 1/T).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionKind {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionData {
    pub place: Place,
    pub kind: ReductionKind,
    pub conductor_exponent: u32,
    /// Kodaira symbol such as "I4", "I0*", "IV"
    pub kodaira: String,
    /// valuation of the minimal discriminant
    pub disc_valuation: u32,
}

const BIG: i64 = i64::MAX / 4;

/// Local arithmetic at a finite place P of F_q[T].
struct Local {
    p: Poly,
    k: ResidueField,
    char: u32,
}

impl Local {
    fn v(&self, x: &Poly) -> i64 {
        if x.is_zero() {
            return BIG;
        }
        let mut x = x.clone();
        let mut n = 0;
        while let Some(q) = x.div_exact(&self.p) {
            x = q;
            n += 1;
        }
        n
    }

    fn divides(&self, k: u32, x: &Poly) -> bool {
        self.v(x) >= k as i64
    }

    /// x / P^k reduced mod P (requires P^k | x).
    fn res(&self, x: &Poly, k: u32) -> Poly {
        let pk = self.p.pow(k as u64);
        self.k.reduce(&x.div_exact(&pk).expect("valuation checked"))
    }

    fn inv(&self, x: &Poly) -> Poly {
        self.k.inv(x).expect("unit in residue field")
    }

    fn sqrt(&self, x: &Poly) -> Poly {
        self.k.root(x, 2).expect("square root in a perfect field of characteristic 2")
    }

    fn cbrt(&self, x: &Poly) -> Poly {
        self.k.root(x, 3).expect("cube root in a perfect field of characteristic 3")
    }

    fn cnst(&self, x: i64) -> Poly {
        let f = self.p.field();
        Poly::constant(f, f.reduce(x))
    }

    /// Apply x = x' + r, y = y' + s·x' + t.
    fn transform(&self, a: &mut [Poly; 5], r: &Poly, s: &Poly, t: &Poly) {
        let k = |x| self.cnst(x);
        let [a1, a2, a3, a4, a6] = a.clone();
        let n1 = &a1 + &(&k(2) * s);
        let n2 = &(&(&a2 - &(s * &a1)) + &(&k(3) * r)) - &(s * s);
        let n3 = &(&a3 + &(r * &a1)) + &(&k(2) * t);
        let n4 = &(&(&(&(&a4 - &(s * &a3)) + &(&(&k(2) * r) * &a2)) - &(&(t + &(r * s)) * &a1)) + &(&(&k(3) * r) * r))
            - &(&(&k(2) * s) * t);
        let n6 = &(&(&(&(&(&a6 + &(r * &a4)) + &(&(r * r) * &a2)) + &(&(r * r) * r)) - &(t * &a3)) - &(t * t))
            - &(&(r * t) * &a1);
        *a = [n1, n2, n3, n4, n6];
    }

    /// Does X² + bX + c have a root in the residue field?
    fn quadratic_splits(&self, b: &Poly, c: &Poly) -> bool {
        let kf = &self.k;
        if self.char == 2 {
            if kf.reduce(b).is_zero() {
                return true;
            }
            // X = bU: U² + U = c/b², solvable iff the absolute trace vanishes
            let z = kf.mul(c, &kf.inv(&kf.mul(b, b)).unwrap());
            let mut tr = Poly::zero(self.p.field());
            let mut cur = z;
            for _ in 0..kf.degree() {
                tr = kf.add(&tr, &cur);
                cur = kf.mul(&cur, &cur);
            }
            tr.is_zero()
        } else {
            let disc = kf.reduce(&(&(b * b) - &(&self.cnst(4) * c)));
            disc.is_zero() || kf.pow(&disc, (kf.size() - 1) / 2).is_one()
        }
    }
}

/// Tate's algorithm at a finite place P on an integral model.
fn tate_local(a: &[Poly; 5], place: &Poly) -> Result<(ReductionKind, u32, String, u32)> {
    let f = place.field();
    let loc = Local { p: place.clone(), k: ResidueField::new(place)?, char: f.p() };
    let p = f.p();
    let pi = place.clone();
    let zero = Poly::zero(f);
    let mut a = a.clone();
    for _ in 0..64 {
        let (b2, _b4, _b6, _b8, c4, c6, disc) = raw_invariants(&a);
        let n = loc.v(&disc);
        if n >= BIG {
            return Err(Error::SingularCurve);
        }
        let n = n as u32;
        if n == 0 {
            return Ok((ReductionKind::Good, 0, "I0".into(), 0));
        }
        // move the singular point of the reduction to (0, 0)
        let (r, t) = match p {
            2 => {
                let [a1, a2, a3, a4, a6] = a.clone().map(|x| loc.k.reduce(&x));
                if loc.k.reduce(&b2).is_zero() {
                    let r = loc.sqrt(&a4);
                    let rhs = &(&(&(&(&r * &r) * &r) + &(&a2 * &(&r * &r))) + &(&a4 * &r)) + &a6;
                    (r.clone(), loc.sqrt(&loc.k.reduce(&rhs)))
                } else {
                    let i1 = loc.inv(&a1);
                    let r = loc.k.mul(&a3, &i1);
                    let t = loc.k.mul(&loc.k.add(&loc.k.mul(&r, &r), &a4), &i1);
                    (r, t)
                }
            }
            3 => {
                let (_, b4, b6, ..) = raw_invariants(&a);
                let b2r = loc.k.reduce(&b2);
                let r = if b2r.is_zero() {
                    // x³ + b6/4 = (x - r)³
                    loc.k.reduce(&loc.cbrt(&loc.k.reduce(&(&loc.cnst(-1) * &b6))))
                } else {
                    loc.k.mul(&loc.k.reduce(&(&loc.cnst(-1) * &b4)), &loc.inv(&b2r))
                };
                let t = loc.k.reduce(&(&(&loc.cnst(-1) * &(&(&a[0] * &r) + &a[2])) * &loc.cnst(f.inv(2) as i64)));
                (r, t)
            }
            _ => {
                let k12 = loc.cnst(12);
                let r = if loc.divides(1, &c4) {
                    loc.k.mul(&loc.k.reduce(&(&loc.cnst(-1) * &b2)), &loc.inv(&k12))
                } else {
                    let num = loc.k.reduce(&(&loc.cnst(-1) * &(&c6 + &(&b2 * &c4))));
                    loc.k.mul(&num, &loc.inv(&loc.k.mul(&k12, &loc.k.reduce(&c4))))
                };
                let t = loc.k.reduce(&(&(&loc.cnst(-1) * &(&(&a[0] * &r) + &a[2])) * &loc.cnst(f.inv(2) as i64)));
                (r, t)
            }
        };
        loc.transform(&mut a, &r, &zero, &t);
        if !(loc.divides(1, &a[2]) && loc.divides(1, &a[3]) && loc.divides(1, &a[4])) {
            return Err(Error::Consistency(format!("singular point not moved to the origin at {place}")));
        }
        let [a1, a2, _, _, a6] = a.clone();
        let (b2, _, b6, b8, ..) = raw_invariants(&a);
        if !loc.divides(1, &b2) {
            // multiplicative: tangent lines y² + a1·xy - a2·x²
            let split = loc.quadratic_splits(&a1, &(&loc.cnst(-1) * &a2));
            let kind = if split { ReductionKind::SplitMultiplicative } else { ReductionKind::NonsplitMultiplicative };
            return Ok((kind, 1, format!("I{n}"), n));
        }
        if !loc.divides(2, &a6) {
            return Ok((ReductionKind::Additive, n, "II".into(), n));
        }
        if !loc.divides(3, &b8) {
            return Ok((ReductionKind::Additive, n - 1, "III".into(), n));
        }
        if !loc.divides(3, &b6) {
            return Ok((ReductionKind::Additive, n - 2, "IV".into(), n));
        }
        // arrange π | a1, a2; π² | a3, a4; π³ | a6
        let (s, t) = if p == 2 {
            let s = loc.sqrt(&loc.k.reduce(&a2));
            let t = &pi * &loc.sqrt(&loc.res(&a6, 2));
            (s, t)
        } else {
            let h = loc.cnst(f.inv(2) as i64);
            (&(&loc.cnst(-1) * &a1) * &h, &(&loc.cnst(-1) * &a[2]) * &h)
        };
        loc.transform(&mut a, &zero, &s, &t);
        let [_, a2, _, a4, a6] = a.clone();
        if !(loc.divides(1, &a[0]) && loc.divides(1, &a2) && loc.divides(2, &a[2]) && loc.divides(2, &a4) && loc.divides(3, &a6)) {
            return Err(Error::Consistency(format!("normalization failed at {place}")));
        }
        // cubic X³ + b X² + c X + d
        let b = loc.res(&a2, 1);
        let c = loc.res(&a4, 2);
        let d = loc.res(&a6, 3);
        let kf = &loc.k;
        let k = |x| loc.cnst(x);
        let w = kf.reduce(
            &(&(&(&(&(&k(27) * &(&d * &d)) - &(&(&b * &b) * &(&c * &c))) + &(&(&k(4) * &(&(&b * &b) * &b)) * &d))
                - &(&(&(&k(18) * &b) * &c) * &d))
                + &(&k(4) * &(&(&c * &c) * &c))),
        );
        let x = kf.reduce(&(&(&k(3) * &c) - &(&b * &b)));
        if !w.is_zero() {
            return Ok((ReductionKind::Additive, n - 4, "I0*".into(), n));
        }
        if !x.is_zero() {
            // move the double root to 0
            let r = match p {
                2 => loc.sqrt(&c),
                3 => kf.mul(&c, &loc.inv(&b)),
                _ => kf.mul(
                    &kf.reduce(&(&(&b * &c) - &(&k(9) * &d))),
                    &loc.inv(&kf.reduce(&(&k(2) * &x))),
                ),
            };
            loc.transform(&mut a, &(&pi * &r), &zero, &zero);
            let (mut ix, mut iy) = (3u32, 3u32);
            let mut mx = &pi * &pi;
            let mut my = &pi * &pi;
            loop {
                let xa3 = a[2].div_exact(&my).expect("valuation");
                let xa6 = a[4].div_exact(&(&mx * &my)).expect("valuation");
                if !loc.divides(1, &(&(&xa3 * &xa3) + &(&k(4) * &xa6))) {
                    break;
                }
                let t = if p == 2 {
                    &my * &loc.sqrt(&kf.reduce(&xa6))
                } else {
                    &my * &kf.reduce(&(&(&k(-1) * &xa3) * &k(f.inv(2) as i64)))
                };
                loc.transform(&mut a, &zero, &zero, &t);
                my = &my * &pi;
                iy += 1;
                let xa2 = a[1].div_exact(&pi).expect("valuation");
                let xa4 = a[3].div_exact(&(&pi * &mx)).expect("valuation");
                let xa6 = a[4].div_exact(&(&mx * &my)).expect("valuation");
                if !loc.divides(1, &(&(&xa4 * &xa4) - &(&(&k(4) * &xa2) * &xa6))) {
                    break;
                }
                let ixa2 = loc.inv(&kf.reduce(&xa2));
                let r = if p == 2 {
                    &mx * &loc.sqrt(&kf.mul(&kf.reduce(&xa6), &ixa2))
                } else {
                    &mx * &kf.mul(&kf.reduce(&(&k(-1) * &xa4)), &kf.mul(&ixa2, &k(f.inv(2) as i64)))
                };
                loc.transform(&mut a, &r, &zero, &zero);
                mx = &mx * &pi;
                ix += 1;
            }
            let m = ix + iy - 5;
            return Ok((ReductionKind::Additive, n - m - 4, format!("I{m}*"), n));
        }
        // triple root: move it to 0
        let r = match p {
            2 => b.clone(),
            3 => loc.cbrt(&kf.reduce(&(&k(-1) * &d))),
            _ => kf.mul(&kf.reduce(&(&k(-1) * &b)), &loc.inv(&k(3))),
        };
        loc.transform(&mut a, &(&pi * &r), &zero, &zero);
        let pp = &pi * &pi;
        let x3 = a[2].div_exact(&pp).expect("valuation");
        let x6 = a[4].div_exact(&(&pp * &pp)).expect("valuation");
        if !loc.divides(1, &(&(&x3 * &x3) + &(&k(4) * &x6))) {
            return Ok((ReductionKind::Additive, n - 6, "IV*".into(), n));
        }
        let t = if p == 2 {
            &pp * &loc.sqrt(&kf.reduce(&x6))
        } else {
            &pp * &kf.reduce(&(&(&k(-1) * &x3) * &k(f.inv(2) as i64)))
        };
        loc.transform(&mut a, &zero, &zero, &t);
        if !loc.divides(4, &a[3]) {
            return Ok((ReductionKind::Additive, n - 7, "III*".into(), n));
        }
        if !loc.divides(6, &a[4]) {
            return Ok((ReductionKind::Additive, n - 8, "II*".into(), n));
        }
        // not minimal: scale by π
        let pw = [1u64, 2, 3, 4, 6];
        for (x, e) in a.iter_mut().zip(pw) {
            *x = x.div_exact(&pi.pow(e)).expect("non-minimal model divides");
        }
    }
    Err(Error::Consistency(format!("Tate's algorithm did not terminate at {place}")))
}

/// Integral model at ∞ in the variable s = 1/T (returned as a polynomial in T).
pub(crate) fn model_at_infinity(e: &WeierstrassCurve) -> [Poly; 5] {
    let pw = [1usize, 2, 3, 4, 6];
    let k = e
        .a
        .iter()
        .zip(pw)
        .filter_map(|(c, i)| c.deg().map(|d| d.div_ceil(i)))
        .max()
        .unwrap_or(0);
    std::array::from_fn(|i| {
        let c = &e.a[i];
        match c.deg() {
            None => c.clone(),
            Some(d) => {
                // s^{i k} c(1/s) = s^{ik - d} · reverse(c)
                let rev: Vec<u32> = c.coeffs().iter().rev().copied().collect();
                Poly::from_coeffs(c.field(), rev).shift(pw[i] * k - d)
            }
        }
    })
}

pub fn reduction_type(e: &WeierstrassCurve, place: &Place) -> Result<ReductionData> {
    let f = e.field();
    let (model, p) = match place {
        Place::Finite(p) => {
            if !p.is_monic() || !crate::ff_base::is_irreducible(p) {
                return Err(Error::InvalidInput(format!("{p} is not a monic irreducible")));
            }
            (e.a.clone(), p.clone())
        }
        Place::Infinity => (model_at_infinity(e), Poly::t(f)),
    };
    let (kind, exp, kodaira, dv) = tate_local(&model, &p)?;
    Ok(ReductionData { place: place.clone(), kind, conductor_exponent: exp, kodaira, disc_valuation: dv })
}

/// Local data at every bad place (finite places dividing Δ, then ∞ if bad).
pub fn conductor(e: &WeierstrassCurve) -> Result<Vec<ReductionData>> {
    let disc = e.invariants().discriminant;
    let mut out = Vec::new();
    for (p, _) in factor(&disc) {
        let r = reduction_type(e, &Place::Finite(p))?;
        if r.conductor_exponent > 0 {
            out.push(r);
        }
    }
    let inf = reduction_type(e, &Place::Infinity)?;
    if inf.conductor_exponent > 0 {
        out.push(inf);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_base::PrimeField;

    fn curve(p: u32, s: &str) -> WeierstrassCurve {
        WeierstrassCurve::parse(PrimeField::new(p).unwrap(), s).unwrap()
    }

    #[test]
    fn first_example() {
        let e = curve(2, "a1=T;a6=T^2");
        let c = conductor(&e).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!((c[0].place.to_string(), c[0].conductor_exponent, c[0].kind), ("T".into(), 3, ReductionKind::Additive));
        assert_eq!((c[1].place.clone(), c[1].conductor_exponent, c[1].kind), (Place::Infinity, 1, ReductionKind::SplitMultiplicative));
        assert_eq!(c[1].kodaira, "I4");
    }

    #[test]
    fn second_example() {
        let e = curve(3, "a2=T^2+T;a4=T^2");
        let c = conductor(&e).unwrap();
        let got: Vec<_> = c.iter().map(|r| (r.place.to_string(), r.conductor_exponent)).collect();
        assert_eq!(got, [("T".to_string(), 2), ("T+2".to_string(), 1), ("inf".to_string(), 1)]);
        assert_eq!(c[2].kind, ReductionKind::SplitMultiplicative);
        assert_eq!(c[2].kodaira, "I4");
    }

    #[test]
    fn textbook_kodaira_types() {
        // y² = x³ + T over F_5: cusp at T, type II
        let e = curve(5, "a6=T");
        assert_eq!(reduction_type(&e, &Place::Finite(Poly::parse(e.field(), "T").unwrap())).unwrap().kodaira, "II");
        // y² = x³ + T^5 x... type with Δ valuation checks: y² = x³ + T² over F_5 is IV
        let e = curve(5, "a6=T^2");
        assert_eq!(reduction_type(&e, &Place::Finite(Poly::parse(e.field(), "T").unwrap())).unwrap().kodaira, "IV");
        // y² = x(x-1)(x-T) over F_5: I2 at T (split: tangents y² = x² - ... )
        let e = curve(5, "a2=-T-1;a4=T");
        let r = reduction_type(&e, &Place::Finite(Poly::parse(e.field(), "T").unwrap())).unwrap();
        assert_eq!((r.kodaira.as_str(), r.conductor_exponent), ("I2", 1));
        // y² = x³ + T^6 is non-minimal: good after scaling
        let e = curve(5, "a6=T^6+T^7");
        let r = reduction_type(&e, &Place::Finite(Poly::parse(e.field(), "T").unwrap())).unwrap();
        assert_eq!(r.kodaira, "I0");
    }
}
