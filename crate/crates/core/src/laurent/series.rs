use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff_base::{Poly, PrimeField, RationalFunction};

/// Precision value standing for "exact" (no O-term).
pub const EXACT: i64 = i64::MAX / 4;

#[inline]
fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        (a + b).min(EXACT)
    }
}

/// Truncated Laurent series in π = 1/T over F_p, known modulo π^prec.
///
/// Stored coefficients start at `val` with `c[0] != 0`; coefficients between the
/// last stored one and `prec` are zero. A series with no nonzero known
/// coefficient is "zero at precision" and has `val == prec`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent {
    field: PrimeField,
    val: i64,
    c: Vec<u32>,
    prec: i64,
}

impl Laurent {
    pub fn new(field: PrimeField, val: i64, coeffs: Vec<u32>, prec: i64) -> Self {
        let mut c = coeffs;
        for x in c.iter_mut() {
            *x %= field.p();
        }
        let keep = if prec >= EXACT { c.len() } else { (prec - val).max(0) as usize };
        c.truncate(keep);
        let lead = c.iter().position(|&x| x != 0);
        match lead {
            None => Self::zero_at(field, prec),
            Some(k) => {
                c.drain(..k);
                while c.last() == Some(&0) {
                    c.pop();
                }
                Self { field, val: val + k as i64, c, prec }
            }
        }
    }

    /// Zero known modulo π^prec (exact zero for `prec == EXACT`).
    pub fn zero_at(field: PrimeField, prec: i64) -> Self {
        Self { field, val: prec, c: Vec::new(), prec }
    }

    pub fn zero(field: PrimeField) -> Self {
        Self::zero_at(field, EXACT)
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, a: u32) -> Self {
        Self::new(field, 0, vec![a], EXACT)
    }

    /// a·π^k, exact.
    pub fn monomial(field: PrimeField, a: u32, k: i64) -> Self {
        Self::new(field, k, vec![a], EXACT)
    }

    /// Exact image of a polynomial: T^k = π^{-k}.
    pub fn from_poly(p: &Poly) -> Self {
        let f = p.field();
        match p.deg() {
            None => Self::zero(f),
            Some(d) => {
                let c: Vec<u32> = p.coeffs().iter().rev().copied().collect();
                Self::new(f, -(d as i64), c, EXACT)
            }
        }
    }

    /// Expansion at ∞ of a rational function, correct modulo π^prec; exact when the
    /// denominator is a monomial in T.
    pub fn from_rational(x: &RationalFunction, prec: i64) -> Self {
        let num = Self::from_poly(x.num());
        let den = x.den();
        if den.coeffs().iter().filter(|&&a| a != 0).count() == 1 {
            let k = den.deg().unwrap() as i64;
            let inv = x.field().inv(den.lead());
            return num.scale(inv).shift(k);
        }
        let d = Self::from_poly(den);
        let rel = (prec - (num.val - d.val)).max(1) as usize;
        num.mul(&d.inv(rel).expect("nonzero denominator")).truncate(prec)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Exponent of the first known nonzero coefficient (equals `prec` if none).
    #[inline]
    pub fn val(&self) -> i64 {
        self.val
    }

    #[inline]
    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// True if no known coefficient is nonzero.
    pub fn is_zero_at_prec(&self) -> bool {
        self.c.is_empty()
    }

    /// Number of known digits starting at the valuation.
    pub fn rel_prec(&self) -> i64 {
        if self.is_exact() {
            EXACT
        } else {
            self.prec - self.val
        }
    }

    /// Valuation v with |x| = q^{-v}; fails when x is zero at its precision.
    pub fn valuation(&self) -> Result<i64> {
        if self.c.is_empty() {
            return Err(Error::Precision(format!("series is zero modulo pi^{}", self.prec)));
        }
        Ok(self.val)
    }

    /// Coefficient of π^i; `None` when i is beyond the known precision.
    pub fn coeff(&self, i: i64) -> Option<u32> {
        if i >= self.prec {
            return None;
        }
        if i < self.val {
            return Some(0);
        }
        Some(self.c.get((i - self.val) as usize).copied().unwrap_or(0))
    }

    pub fn lead(&self) -> u32 {
        self.c.first().copied().unwrap_or(0)
    }

    /// Highest exponent that carries a stored coefficient, plus one.
    fn stored_end(&self) -> i64 {
        if self.c.is_empty() {
            return i64::MIN;
        }
        self.val + self.c.len() as i64
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::new(self.field, self.val, self.c.clone(), prec)
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self { field: f, val: self.val, c: self.c.iter().map(|&x| f.neg(x)).collect(), prec: self.prec }
    }

    pub fn scale(&self, a: u32) -> Self {
        let f = self.field;
        if a.is_multiple_of(f.p()) {
            return Self::zero_at(f, self.prec.min(EXACT));
        }
        Self { field: f, val: self.val, c: self.c.iter().map(|&x| f.mul(x, a)).collect(), prec: self.prec }
    }

    /// Multiply by π^k.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            field: self.field,
            val: if self.c.is_empty() { sat_add(self.val, k) } else { self.val + k },
            c: self.c.clone(),
            prec: sat_add(self.prec, k),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = self.field;
        let prec = self.prec.min(o.prec);
        let lo = self.val.min(o.val).min(prec);
        let hi = prec.min(self.stored_end().max(o.stored_end()));
        if hi <= lo {
            return Self::zero_at(f, prec);
        }
        let mut c = vec![0u32; (hi - lo) as usize];
        for (i, &x) in self.c.iter().enumerate() {
            let k = self.val + i as i64 - lo;
            if k < c.len() as i64 {
                c[k as usize] = x;
            }
        }
        for (i, &x) in o.c.iter().enumerate() {
            let k = o.val + i as i64 - lo;
            if k < c.len() as i64 {
                c[k as usize] = f.add(c[k as usize], x);
            }
        }
        Self::new(f, lo, c, prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = self.field;
        let prec = sat_add(self.prec, o.val).min(sat_add(o.prec, self.val));
        if self.c.is_empty() || o.c.is_empty() {
            return Self::zero_at(f, prec);
        }
        let val = self.val + o.val;
        let full = self.c.len() + o.c.len() - 1;
        let len = if prec >= EXACT { full } else { full.min((prec - val).max(0) as usize) };
        let p = f.p() as u64;
        let mut acc = vec![0u64; len];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 || i >= len {
                continue;
            }
            let lim = (len - i).min(o.c.len());
            for (j, &b) in o.c[..lim].iter().enumerate() {
                acc[i + j] += (a * b) as u64;
            }
            if i % 64 == 63 {
                for x in acc.iter_mut() {
                    *x %= p;
                }
            }
        }
        Self::new(f, val, acc.into_iter().map(|x| (x % p) as u32).collect(), prec)
    }

    /// Multiplicative inverse. The result carries the relative precision of the
    /// input, capped at `rel_cap` digits (exact inputs get exactly `rel_cap`).
    pub fn inv(&self, rel_cap: usize) -> Result<Self> {
        let v = self.valuation()?;
        let f = self.field;
        let rel = (self.rel_prec().min(rel_cap as i64)).max(1) as usize;
        // unit part u = c0 + c1 π + ...; solve u·w = 1 coefficientwise
        let u = &self.c;
        let inv0 = f.inv(u[0]);
        let mut w = vec![0u32; rel];
        w[0] = inv0;
        for k in 1..rel {
            let mut s = 0u32;
            for i in 1..=k.min(u.len() - 1) {
                s = f.add(s, f.mul(u[i], w[k - i]));
            }
            w[k] = f.mul(f.neg(s), inv0);
        }
        Ok(Self::new(f, -v, w, -v + rel as i64))
    }

    pub fn div(&self, o: &Self, rel_cap: usize) -> Result<Self> {
        Ok(self.mul(&o.inv(rel_cap)?))
    }

    pub fn pow(&self, e: i64, rel_cap: usize) -> Result<Self> {
        let base = if e < 0 { self.inv(rel_cap)? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut b = base;
        let mut r = Self::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(r)
    }

    /// True when both agree on every coefficient below `n` and both are known there.
    pub fn agrees_to(&self, o: &Self, n: i64) -> bool {
        if self.prec < n || o.prec < n {
            return false;
        }
        let lo = self.val.min(o.val);
        let hi = n.min(self.stored_end().max(o.stored_end()));
        (lo..hi).all(|i| self.coeff(i) == o.coeff(i))
    }

    /// Nonzero constant with every other known digit zero.
    pub fn is_constant(&self) -> bool {
        self.val == 0 && self.c.len() == 1
    }

    /// Coefficients of π^lo..π^{hi-1} (unknown ones omitted).
    pub fn coeffs_range(&self, lo: i64, hi: i64) -> Vec<u32> {
        (lo..hi).map_while(|i| self.coeff(i)).collect()
    }

    /// Parse `pi^4 + 2*pi^5 + O(pi^6)`; without an O-term the value is exact.
    pub fn parse(field: PrimeField, s: &str) -> Result<Self> {
        let err = |m: &str| Error::Parse(format!("series {s:?}: {m}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty"));
        }
        let mut prec = EXACT;
        let mut terms: Vec<(i64, u32)> = Vec::new();
        let mut sign = 1i64;
        let mut cur = String::new();
        let flush = |cur: &mut String, sign: i64, terms: &mut Vec<(i64, u32)>, prec: &mut i64| -> Result<()> {
            if cur.is_empty() {
                return Err(err("empty term"));
            }
            let t = std::mem::take(cur);
            if let Some(inner) = t.strip_prefix("O(").and_then(|x| x.strip_suffix(')')) {
                *prec = parse_pi_power(inner).ok_or_else(|| err("bad O-term"))?;
                return Ok(());
            }
            let (coef, exp) = match t.find("pi") {
                None => (t.parse::<i64>().map_err(|_| err("bad constant"))?, 0),
                Some(pos) => {
                    let cs = t[..pos].trim_end_matches('*');
                    let coef = if cs.is_empty() { 1 } else { cs.parse::<i64>().map_err(|_| err("bad coefficient"))? };
                    (coef, parse_pi_power(&t[pos..]).ok_or_else(|| err("bad power"))?)
                }
            };
            terms.push((exp, field.reduce(sign * coef)));
            Ok(())
        };
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !cur.ends_with('^') && i > 0 {
                flush(&mut cur, sign, &mut terms, &mut prec)?;
                sign = if ch == '-' { -1 } else { 1 };
            } else if ch == '-' && i == 0 {
                sign = -1;
            } else {
                cur.push(ch);
            }
        }
        flush(&mut cur, sign, &mut terms, &mut prec)?;
        let mut out = Self::zero_at(field, prec);
        for (e, a) in terms {
            out = out.add(&Self::monomial(field, a, e).truncate(prec));
        }
        Ok(out)
    }
}

fn parse_pi_power(s: &str) -> Option<i64> {
    if s == "pi" {
        Some(1)
    } else {
        s.strip_prefix("pi^")?.parse().ok()
    }
}

fn fmt_pi(f: &mut fmt::Formatter<'_>, e: i64) -> fmt::Result {
    match e {
        1 => write!(f, "pi"),
        _ => write!(f, "pi^{e}"),
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let e = self.val + i as i64;
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{a}")?;
            } else {
                if a != 1 {
                    write!(f, "{a}*")?;
                }
                fmt_pi(f, e)?;
            }
        }
        if !self.is_exact() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "O(")?;
            fmt_pi(f, self.prec)?;
            write!(f, ")")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent[F_{}]({self})", self.field.p())
    }
}

/// JSON form of a series: `{valuation, coeffs, precision}`; `precision` is `null`
/// for exact values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentJson {
    pub p: u32,
    pub valuation: i64,
    pub coeffs: Vec<u32>,
    pub precision: Option<i64>,
}

impl From<&Laurent> for LaurentJson {
    fn from(x: &Laurent) -> Self {
        LaurentJson {
            p: x.field.p(),
            valuation: x.val,
            coeffs: x.c.clone(),
            precision: (!x.is_exact()).then_some(x.prec),
        }
    }
}

impl TryFrom<&LaurentJson> for Laurent {
    type Error = Error;
    fn try_from(j: &LaurentJson) -> Result<Self> {
        let f = PrimeField::new(j.p)?;
        Ok(Laurent::new(f, j.valuation, j.coeffs.clone(), j.precision.unwrap_or(EXACT)))
    }
}

impl Serialize for Laurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentJson::from(self).serialize(s)
    }
}
