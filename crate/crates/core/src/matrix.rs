//! 2×2 matrices over A = F_p[T].

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff_base::{P1Point, Poly, PrimeField};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub d: Poly,
}

impl Mat2 {
    pub fn new(a: Poly, b: Poly, c: Poly, d: Poly) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity(f: PrimeField) -> Self {
        Self::diag(Poly::one(f), Poly::one(f))
    }

    pub fn diag(a: Poly, d: Poly) -> Self {
        let f = a.field();
        Self { a, b: Poly::zero(f), c: Poly::zero(f), d }
    }

    /// Matrix with constant entries.
    pub fn constant(f: PrimeField, a: u32, b: u32, c: u32, d: u32) -> Self {
        Self::new(Poly::constant(f, a), Poly::constant(f, b), Poly::constant(f, c), Poly::constant(f, d))
    }

    /// Parse `[[a,b],[c,d]]` with polynomial entries.
    pub fn parse(f: PrimeField, s: &str) -> Result<Self> {
        let inner: String = s.chars().filter(|c| !c.is_whitespace() && *c != '[' && *c != ']').collect();
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("matrix {s:?} must have four entries")));
        }
        let e = parts.iter().map(|p| Poly::parse(f, p)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()))
    }

    pub fn field(&self) -> PrimeField {
        self.a.field()
    }

    pub fn entries(&self) -> [&Poly; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> Poly {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    /// Adjugate: adj(M)·M = det(M)·I.
    pub fn adj(&self) -> Self {
        Self { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn scale(&self, x: u32) -> Self {
        Self { a: self.a.scale(x), b: self.b.scale(x), c: self.c.scale(x), d: self.d.scale(x) }
    }

    /// Inverse in GL_2(A); `None` unless the determinant is a nonzero constant.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if !det.is_unit() {
            return None;
        }
        Some(self.adj().scale(self.field().inv(det.lead())))
    }

    /// Largest entry degree (-∞ as `i64::MIN` for the zero matrix).
    pub fn max_deg(&self) -> i64 {
        self.entries().iter().map(|e| e.deg_i()).max().unwrap()
    }

    /// Representative modulo scalars: first nonzero entry of the bottom row, else of the
    /// top row, made monic.
    pub fn normalized(&self) -> Self {
        let lead = [&self.c, &self.d, &self.a, &self.b]
            .into_iter()
            .find(|e| !e.is_zero())
            .map(|e| e.lead())
            .unwrap_or(1);
        self.scale(self.field().inv(lead))
    }

    pub fn apply(&self, s: &P1Point) -> Result<P1Point> {
        let (x, y) = (s.num(), s.den());
        P1Point::new(&(&self.a * x) + &(&self.b * y), &(&self.c * x) + &(&self.d * y))
    }

    pub fn in_gamma0(&self, n: &Poly) -> bool {
        self.det().is_unit() && n.divides(&self.c)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = [[self.a.to_string(), self.b.to_string()], [self.c.to_string(), self.d.to_string()]];
        rows.serialize(s)
    }
}
