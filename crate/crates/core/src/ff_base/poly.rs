use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::PrimeField;
use crate::error::{Error, Result};

/// Polynomial in F_p[T], coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    c: Vec<u32>,
}

impl Poly {
    pub fn zero(field: PrimeField) -> Self {
        Self { field, c: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, a: u32) -> Self {
        Self::from_coeffs(field, vec![a % field.p()])
    }

    /// The variable T.
    pub fn t(field: PrimeField) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn monomial(field: PrimeField, a: u32, k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = a % field.p();
        Self::from_coeffs(field, c)
    }

    pub fn from_coeffs(field: PrimeField, mut c: Vec<u32>) -> Self {
        for x in c.iter_mut() {
            *x %= field.p();
        }
        let mut p = Self { field, c };
        p.trim();
        p
    }

    pub fn from_i64(field: PrimeField, c: &[i64]) -> Self {
        Self::from_coeffs(field, c.iter().map(|&x| field.reduce(x)).collect())
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree, `None` for the zero polynomial.
    #[inline]
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree as a signed integer with `i64::MIN` for zero; handy for norm comparisons.
    pub fn deg_i(&self) -> i64 {
        self.deg().map_or(i64::MIN, |d| d as i64)
    }

    pub fn lead(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn is_unit(&self) -> bool {
        self.c.len() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead());
        self.scale(inv)
    }

    pub fn scale(&self, a: u32) -> Self {
        let f = self.field;
        Self::from_coeffs(f, self.c.iter().map(|&x| f.mul(x, a)).collect())
    }

    /// Multiply by T^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Self { field: self.field, c }
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = self.field;
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let inv = f.inv(d.lead());
        let mut r = self.c.clone();
        let mut q = vec![0; r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = f.mul(r[i + dd], inv);
            q[i] = coef;
            if coef != 0 {
                for (j, &dj) in d.c.iter().enumerate() {
                    r[i + j] = f.sub(r[i + j], f.mul(coef, dj));
                }
            }
        }
        r.truncate(dd);
        (Poly::from_coeffs(f, q), Poly::from_coeffs(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Exact quotient; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, u, v) with u*self + v*other = g, g monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, u, _) = self.rem(m).xgcd(m);
        g.is_one().then(|| u.rem(m))
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut r = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        r
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut r = Poly::one(self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = (&r * &base).rem(m);
            }
            base = (&base * &base).rem(m);
            e >>= 1;
        }
        r
    }

    /// Canonical total order: by degree, then coefficients from the top down.
    pub fn cmp_canonical(&self, other: &Poly) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }

    /// Index of this polynomial among all polynomials of degree < `bound`, reading
    /// coefficients as base-p digits (lowest degree = least significant).
    pub fn to_index(&self) -> u64 {
        let p = self.field.p() as u64;
        self.c.iter().rev().fold(0, |acc, &a| acc * p + a as u64)
    }

    pub fn from_index(field: PrimeField, mut idx: u64) -> Poly {
        let p = field.p() as u64;
        let mut c = Vec::new();
        while idx > 0 {
            c.push((idx % p) as u32);
            idx /= p;
        }
        Poly::from_coeffs(field, c)
    }

    /// Parse `"T^3+2*T^2+1"`; coefficients reduced mod p, `*` optional, terms in any order.
    pub fn parse(field: PrimeField, s: &str) -> Result<Poly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(i64, String)> = Vec::new();
        let mut sign = 1i64;
        let mut cur = String::new();
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(i > 0 && cur.ends_with('^')) {
                if !cur.is_empty() {
                    terms.push((sign, std::mem::take(&mut cur)));
                } else if i > 0 {
                    return Err(Error::Parse(format!("dangling sign in {s:?}")));
                }
                sign = if ch == '-' { -1 } else { 1 };
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("trailing sign in {s:?}")));
        }
        terms.push((sign, cur));
        let mut out = Poly::zero(field);
        for (sign, term) in terms {
            let (coef, power) = parse_term(&term)?;
            let c = field.reduce(sign * coef.rem_euclid(field.p() as i64));
            out = &out + &Poly::monomial(field, c, power);
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Result<(i64, usize)> {
    let err = || Error::Parse(format!("bad polynomial term {term:?}"));
    let (coef_str, var_part) = match term.find('T') {
        None => return Ok((term.parse::<i64>().map_err(|_| err())?, 0)),
        Some(pos) => (&term[..pos], &term[pos..]),
    };
    let coef_str = coef_str.trim_end_matches('*');
    let coef = if coef_str.is_empty() {
        1
    } else {
        coef_str.parse::<i64>().map_err(|_| err())?
    };
    let power = if var_part == "T" {
        1
    } else if let Some(e) = var_part.strip_prefix("T^") {
        e.parse::<usize>().map_err(|_| err())?
    } else {
        return Err(err());
    };
    Ok((coef, power))
}

impl fmt::Display for Poly {
    /// Highest degree first: `T^3+2*T^2+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "T")?,
                (1, _) => write!(f, "{a}*T")?,
                (_, 1) => write!(f, "T^{i}")?,
                _ => write!(f, "{a}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({self})", self.field.p())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Deserialization needs the field; JSON carries `{"p": .., "poly": ".."}` pairs.
#[derive(Serialize, Deserialize)]
pub struct PolyJson {
    pub p: u32,
    pub poly: String,
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pj = PolyJson::deserialize(d)?;
        let field = PrimeField::new(pj.p).map_err(serde::de::Error::custom)?;
        Poly::parse(field, &pj.poly).map_err(serde::de::Error::custom)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let f = self.field;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect();
        Poly::from_coeffs(f, c)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let f = self.field;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect();
        Poly::from_coeffs(f, c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly::from_coeffs(f, self.c.iter().map(|&x| f.neg(x)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let f = self.field;
        if self.is_zero() || o.is_zero() {
            return Poly::zero(f);
        }
        let p = f.p() as u64;
        let mut acc = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] += (a * b) as u64;
            }
        }
        Poly::from_coeffs(f, acc.into_iter().map(|x| (x % p) as u32).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
