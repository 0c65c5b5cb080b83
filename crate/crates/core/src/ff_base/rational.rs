use std::fmt;

use serde::{Serialize, Serializer};

use super::field::PrimeField;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Element of K = F_p(T) in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if num.is_zero() {
            (num.clone(), Poly::one(den.field()))
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lead = d.lead();
        if lead != 1 {
            let inv = d.field().inv(lead);
            n = n.scale(inv);
            d = d.scale(inv);
        }
        Ok(Self { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        let f = p.field();
        Self { num: p, den: Poly::one(f) }
    }

    pub fn zero(field: PrimeField) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: PrimeField) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn field(&self) -> PrimeField {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
        .unwrap()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }

    pub fn scale(&self, a: u32) -> Self {
        Self::new(self.num.scale(a), self.den.clone()).unwrap()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("inverse of zero in F_q(T)".into()));
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self { num: self.num.pow(e as u64), den: self.den.pow(e as u64) }
    }

    /// Valuation at the place ∞: deg(den) - deg(num); `i64::MAX` for zero.
    pub fn val_inf(&self) -> i64 {
        if self.is_zero() {
            return i64::MAX;
        }
        self.den.deg_i() - self.num.deg_i()
    }

    /// Valuation at the finite place given by the irreducible `p`; `i64::MAX` for zero.
    pub fn val_at(&self, p: &Poly) -> i64 {
        if self.is_zero() {
            return i64::MAX;
        }
        poly_val(&self.num, p) - poly_val(&self.den, p)
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.deg().unwrap_or(0) == 0
    }
}

/// Multiplicity of the irreducible `p` in `a` (a != 0).
pub(crate) fn poly_val(a: &Poly, p: &Poly) -> i64 {
    let mut v = 0;
    let mut x = a.clone();
    while let Some(q) = x.div_exact(p) {
        x = q;
        v += 1;
    }
    v
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if s.contains('+') {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

/// A point of P^1(K): coprime (num, den) with den monic, or ∞ = (1, 0).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct P1Point {
    num: Poly,
    den: Poly,
}

impl P1Point {
    pub fn infinity(field: PrimeField) -> Self {
        Self { num: Poly::one(field), den: Poly::zero(field) }
    }

    /// Canonicalize (num : den); fails on (0 : 0).
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        let field = num.field();
        if den.is_zero() {
            if num.is_zero() {
                return Err(Error::InvalidInput("(0:0) is not a point of P^1".into()));
            }
            return Ok(Self::infinity(field));
        }
        let r = RationalFunction::new(num, den)?;
        Ok(Self { num: r.num, den: r.den })
    }

    pub fn from_rational(r: &RationalFunction) -> Self {
        Self { num: r.num.clone(), den: r.den.clone() }
    }

    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> PrimeField {
        self.num.field()
    }

    pub fn as_rational(&self) -> Option<RationalFunction> {
        (!self.is_infinity()).then(|| RationalFunction { num: self.num.clone(), den: self.den.clone() })
    }

    /// Parse `inf`, `0`, `1/T`, `1/(T^2-T)`, `T+1`, `(T+1)/(T^2)`.
    pub fn parse(field: PrimeField, s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "∞" | "infinity" | "oo") {
            return Ok(Self::infinity(field));
        }
        let strip = |x: &str| -> String {
            let x = x.trim();
            x.strip_prefix('(')
                .and_then(|y| y.strip_suffix(')'))
                .unwrap_or(x)
                .to_string()
        };
        let (n, d) = match split_top_level_slash(s) {
            Some((a, b)) => (strip(a), strip(b)),
            None => (strip(s), "1".to_string()),
        };
        let num = Poly::parse(field, &n)?;
        let den = Poly::parse(field, &d)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Self::new(num, den)
    }
}

fn split_top_level_slash(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            None => write!(f, "inf"),
            Some(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for P1Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let f = PrimeField::new(3).unwrap();
        let a = Poly::parse(f, "2*T^2+2*T").unwrap();
        let b = Poly::parse(f, "2*T").unwrap();
        let r = RationalFunction::new(a, b).unwrap();
        assert_eq!(r.to_string(), "T+1");
        let s = P1Point::parse(f, "1/(T^2-T)").unwrap();
        assert_eq!(s.to_string(), "1/(T^2+2*T)");
        assert_eq!(P1Point::parse(f, "2/(2*T)").unwrap().to_string(), "1/T");
        assert!(P1Point::parse(f, "inf").unwrap().is_infinity());
    }

    #[test]
    fn valuations() {
        let f = PrimeField::new(2).unwrap();
        let r = RationalFunction::new(Poly::parse(f, "T^3").unwrap(), Poly::parse(f, "T^2+1").unwrap()).unwrap();
        assert_eq!(r.val_inf(), -1);
        assert_eq!(r.val_at(&Poly::t(f)), 3);
        assert_eq!(r.val_at(&Poly::parse(f, "T+1").unwrap()), -2);
    }
}
