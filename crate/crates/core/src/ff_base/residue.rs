use super::field::PrimeField;
use super::poly::Poly;
use super::is_irreducible_fast;
use crate::error::{Error, Result};

/// The finite field F_P = A/(P) for a monic irreducible P, elements stored as
/// reduced polynomials of degree < deg P.
#[derive(Clone, Debug)]
pub struct ResidueField {
    modulus: Poly,
}

impl ResidueField {
    pub fn new(modulus: &Poly) -> Result<Self> {
        if !is_irreducible_fast(modulus) {
            return Err(Error::InvalidInput(format!("{modulus} is not irreducible")));
        }
        Ok(Self { modulus: modulus.monic() })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn base(&self) -> PrimeField {
        self.modulus.field()
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg().unwrap()
    }

    pub fn size(&self) -> u64 {
        (self.base().p() as u64).pow(self.degree() as u32)
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        a.rem(&self.modulus)
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        (a * b).rem(&self.modulus)
    }

    pub fn inv(&self, a: &Poly) -> Option<Poly> {
        a.inv_mod(&self.modulus)
    }

    pub fn pow(&self, a: &Poly, e: u64) -> Poly {
        a.pow_mod(e, &self.modulus)
    }

    /// Every element, in index order (0 first).
    pub fn elements(&self) -> impl Iterator<Item = Poly> + '_ {
        let f = self.base();
        (0..self.size()).map(move |i| Poly::from_index(f, i))
    }

    /// Roots in F_P of a polynomial whose coefficients are residue-field elements
    /// (lowest degree first). Exhaustive.
    pub fn roots(&self, coeffs: &[Poly]) -> Vec<Poly> {
        self.elements()
            .filter(|x| {
                let mut acc = Poly::zero(self.base());
                for c in coeffs.iter().rev() {
                    acc = (&self.mul(&acc, x) + c).rem(&self.modulus);
                }
                acc.is_zero()
            })
            .collect()
    }

    /// Some y with y^e = a, if one exists.
    pub fn root(&self, a: &Poly, e: u64) -> Option<Poly> {
        let a = self.reduce(a);
        if e == self.base().p() as u64 {
            // Frobenius is bijective: y = a^{p^{d-1}}
            let mut y = a.clone();
            for _ in 1..self.degree() {
                y = self.pow(&y, e);
            }
            return Some(y);
        }
        self.elements().find(|y| self.pow(y, e) == a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let f = PrimeField::new(2).unwrap();
        let k = ResidueField::new(&Poly::t(f)).unwrap();
        assert_eq!(k.elements().count(), 2);
        let f4 = ResidueField::new(&Poly::parse(f, "T^2+T+1").unwrap()).unwrap();
        assert_eq!(f4.elements().count(), 4);
        assert!(ResidueField::new(&Poly::parse(f, "T^2+1").unwrap()).is_err());
    }

    #[test]
    fn f4_cubes_are_one() {
        let f = PrimeField::new(2).unwrap();
        let f4 = ResidueField::new(&Poly::parse(f, "T^2+T+1").unwrap()).unwrap();
        for x in f4.elements().skip(1) {
            let x3 = f4.mul(&f4.mul(&x, &x), &x);
            assert!(x3.is_one(), "{x}");
        }
    }

    #[test]
    fn frobenius_roots() {
        let f = PrimeField::new(3).unwrap();
        let k = ResidueField::new(&Poly::parse(f, "T^2+1").unwrap()).unwrap();
        for a in k.elements() {
            let y = k.root(&a, 3).unwrap();
            assert_eq!(k.pow(&y, 3), a);
        }
    }
}
