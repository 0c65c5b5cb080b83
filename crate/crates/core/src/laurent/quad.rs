use std::fmt;

use serde::Serialize;

use super::series::{Laurent, LaurentJson};
use crate::error::{Error, Result};
use crate::ff_base::{enumerate_monic, Poly, PrimeField};

/// The quadratic extension F_{p^2} = F_p[ρ] with ρ^2 = r1·ρ + r0, using the first
/// irreducible monic quadratic in index order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    field: PrimeField,
    r1: u32,
    r0: u32,
}

impl QuadExt {
    pub fn new(field: PrimeField) -> Self {
        let m = enumerate_monic(field, 2)
            .into_iter()
            .find(crate::ff_base::is_irreducible)
            .expect("an irreducible quadratic exists");
        Self { field, r1: field.neg(m.coeff(1)), r0: field.neg(m.coeff(0)) }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// (r1, r0) with ρ^2 = r1·ρ + r0.
    pub fn relation(&self) -> (u32, u32) {
        (self.r1, self.r0)
    }
}

/// Element a + b·ρ of K_∞(ρ) with a, b truncated Laurent series.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadLaurent {
    ext: QuadExt,
    a: Laurent,
    b: Laurent,
}

/// A point of the Drinfeld upper half plane (nonzero imaginary part).
pub type OmegaPoint = QuadLaurent;

impl QuadLaurent {
    pub fn new(ext: QuadExt, a: Laurent, b: Laurent) -> Self {
        Self { ext, a, b }
    }

    pub fn from_real(ext: QuadExt, a: Laurent) -> Self {
        let b = Laurent::zero(ext.field);
        Self { ext, a, b }
    }

    pub fn from_poly(ext: QuadExt, p: &Poly) -> Self {
        Self::from_real(ext, Laurent::from_poly(p))
    }

    /// The point π^2·ρ = T^{-2}ρ, known modulo π^prec in each coordinate.
    pub fn default_omega(field: PrimeField, prec: i64) -> Self {
        let ext = QuadExt::new(field);
        Self {
            ext,
            a: Laurent::zero_at(field, prec),
            b: Laurent::monomial(field, 1, 2).truncate(prec),
        }
    }

    pub fn ext(&self) -> QuadExt {
        self.ext
    }

    pub fn re(&self) -> &Laurent {
        &self.a
    }

    pub fn im(&self) -> &Laurent {
        &self.b
    }

    pub fn prec(&self) -> i64 {
        self.a.prec().min(self.b.prec())
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self { ext: self.ext, a: self.a.truncate(prec), b: self.b.truncate(prec) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { ext: self.ext, a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { ext: self.ext, a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }

    pub fn neg(&self) -> Self {
        Self { ext: self.ext, a: self.a.neg(), b: self.b.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (r1, r0) = (self.ext.r1, self.ext.r0);
        let bd = self.b.mul(&o.b);
        let a = self.a.mul(&o.a).add(&bd.scale(r0));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a)).add(&bd.scale(r1));
        Self { ext: self.ext, a, b }
    }

    pub fn mul_real(&self, x: &Laurent) -> Self {
        Self { ext: self.ext, a: self.a.mul(x), b: self.b.mul(x) }
    }

    pub fn conj(&self) -> Self {
        Self { ext: self.ext, a: self.a.add(&self.b.scale(self.ext.r1)), b: self.b.neg() }
    }

    /// The field norm z·z̄ = a^2 + r1·ab - r0·b^2.
    pub fn field_norm(&self) -> Laurent {
        let (r1, r0) = (self.ext.r1, self.ext.r0);
        let f = self.ext.field;
        self.a
            .mul(&self.a)
            .add(&self.a.mul(&self.b).scale(r1))
            .add(&self.b.mul(&self.b).scale(f.neg(r0)))
    }

    /// v(z) with |z| = q^{-v} = max(|a|, |b|).
    pub fn norm_val(&self) -> Result<i64> {
        match (self.a.valuation(), self.b.valuation()) {
            (Ok(x), Ok(y)) => Ok(x.min(y)),
            (Ok(x), Err(_)) if x < self.b.prec() => Ok(x),
            (Err(_), Ok(y)) if y < self.a.prec() => Ok(y),
            _ => Err(Error::Precision(format!("|z| for z = {self}"))),
        }
    }

    /// v with |z|_i = q^{-v} = |b|.
    pub fn im_val(&self) -> Result<i64> {
        self.b
            .valuation()
            .map_err(|_| Error::Precision(format!("imaginary part indeterminate for {self}")))
    }

    pub fn inv(&self, rel_cap: usize) -> Result<Self> {
        self.norm_val()?;
        let n = self.field_norm();
        let ninv = n.inv(rel_cap)?;
        Ok(self.conj().mul_real(&ninv))
    }

    pub fn div(&self, o: &Self, rel_cap: usize) -> Result<Self> {
        Ok(self.mul(&o.inv(rel_cap)?))
    }

    /// c·z + d for polynomial c, d.
    pub fn affine(&self, c: &Poly, d: &Poly) -> Self {
        self.mul_real(&Laurent::from_poly(c)).add(&Self::from_poly(self.ext, d))
    }

    /// Möbius action (a·z + b)/(c·z + d) of a polynomial matrix.
    pub fn mobius(&self, m: [&Poly; 4], rel_cap: usize) -> Result<Self> {
        let [a, b, c, d] = m;
        self.affine(a, b).div(&self.affine(c, d), rel_cap)
    }
}

impl fmt::Display for QuadLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*rho", self.a, self.b)
    }
}

impl fmt::Debug for QuadLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize)]
struct QuadJson {
    re: LaurentJson,
    im: LaurentJson,
    rho_squared: String,
}

impl Serialize for QuadLaurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadJson {
            re: (&self.a).into(),
            im: (&self.b).into(),
            rho_squared: format!("{}*rho+{}", self.ext.r1, self.ext.r0),
        }
        .serialize(s)
    }
}
