use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::HarmonicCochain;
use crate::bt_graph::{EdgeRep, QuotientGraph};
use crate::error::{Error, Result};
use crate::ff_base::{enumerate_monic, Poly, PrimeField};
use crate::laurent::Laurent;

/// Which value the character ν takes when the π^1-coefficient vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NuConvention {
    /// ν = -1 if a_1 = 0, q - 1 otherwise
    MinusOneOnZero,
    /// ν = q - 1 if a_1 = 0, -1 otherwise: the sum of a nontrivial additive
    /// character over an F_q^*-orbit. The orbit {0} of the coefficient sum is
    /// weighted by 1.
    CharacterSum,
}

impl NuConvention {
    pub fn describe(self) -> &'static str {
        match self {
            NuConvention::MinusOneOnZero => "nu(y) = -1 if a_1(y) = 0, q-1 otherwise",
            NuConvention::CharacterSum => "nu(y) = q-1 if a_1(y) = 0, -1 otherwise; weight 1 on y = 0",
        }
    }
}

/// ν(y) read off the coefficient of π^1.
pub fn nu(y: &Laurent, conv: NuConvention) -> Result<i64> {
    let a1 = y
        .coeff(1)
        .ok_or_else(|| Error::Precision(format!("coefficient of pi in {y} is unknown")))?;
    let q = y.field().p() as i64;
    Ok(match (a1 == 0, conv) {
        (true, NuConvention::MinusOneOnZero) | (false, NuConvention::CharacterSum) => -1,
        _ => q - 1,
    })
}

/// Representatives y = Σ_{i=1}^{k} a_i π^i of F_q^* \ πO/π^{k+1}O: zero, then those
/// whose first nonzero coefficient is 1.
fn scaled_tails(f: PrimeField, k: usize) -> Vec<Laurent> {
    let p = f.p() as u64;
    let mut out = vec![Laurent::zero(f)];
    for idx in 1..p.pow(k as u32) {
        let digits: Vec<u32> = (0..k).map(|i| ((idx / p.pow(i as u32)) % p) as u32).collect();
        if digits.iter().find(|&&d| d != 0) != Some(&1) {
            continue;
        }
        out.push(Laurent::new(f, 1, digits, crate::laurent::EXACT));
    }
    out
}

/// c(φ, m) = q^{-1-deg m} Σ_y φ([[π^{2+deg m}, y], [0, 1]])·ν(m·y).
pub fn fourier_coefficient(g: &QuotientGraph, phi: &HarmonicCochain, m: &Poly, conv: NuConvention) -> Result<BigRational> {
    let f = g.field();
    let dm = m.deg().ok_or_else(|| Error::InvalidInput("zero index".into()))?;
    let j = 2 + dm as i64;
    let mm = Laurent::from_poly(m);
    let mut sum = BigInt::zero();
    for y in scaled_tails(f, dm + 1) {
        let edge = EdgeRep::new(j, y.clone()).to_matrix();
        let v = phi.eval(g, &edge);
        if v != 0 {
            let w = if y.coeffs_range(1, j).iter().all(|&a| a == 0) && conv == NuConvention::CharacterSum { 1 } else { nu(&mm.mul(&y), conv)? };
            sum += BigInt::from(v * w);
        }
    }
    Ok(BigRational::new(sum, BigInt::from(f.p()).pow(1 + dm as u32)))
}

/// Fourier coefficients c(φ, f) for all monic f up to a degree.
#[derive(Clone, Debug)]
pub struct FourierTable {
    pub field: PrimeField,
    pub max_degree: usize,
    pub convention: NuConvention,
    pub coeffs: Vec<(Poly, BigRational)>,
}

impl FourierTable {
    pub fn compute(g: &QuotientGraph, phi: &HarmonicCochain, max_degree: usize, conv: NuConvention) -> Result<Self> {
        let f = g.field();
        let mut coeffs = Vec::new();
        for d in 0..=max_degree {
            for m in enumerate_monic(f, d) {
                let c = fourier_coefficient(g, phi, &m, conv)?;
                coeffs.push((m, c));
            }
        }
        Ok(Self { field: f, max_degree, convention: conv, coeffs })
    }

    pub fn get(&self, m: &Poly) -> Option<&BigRational> {
        self.coeffs.iter().find(|(k, _)| k == m).map(|(_, c)| c)
    }
}

impl Serialize for FourierTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (m, c) in &self.coeffs {
            map.serialize_entry(&m.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

/// φ([[π^j, y], [0, 1]]) = Σ_{k=0}^{j-2} q^{k+2-j} Σ_{deg f = k, f monic} c(φ, f)·ν(f·y).
pub fn fourier_expansion_value(table: &FourierTable, j: i64, y: &Laurent) -> Result<BigRational> {
    let f = table.field;
    let q = BigInt::from(f.p());
    let mut total = BigRational::zero();
    if j < 2 {
        return Ok(total);
    }
    if (j - 2) as usize > table.max_degree {
        return Err(Error::InvalidInput(format!("table holds degrees <= {}, need {}", table.max_degree, j - 2)));
    }
    // only the class of y modulo π^j matters; make it exact
    let y = Laurent::new(f, y.val().min(j), y.coeffs_range(y.val().min(j), j), crate::laurent::EXACT);
    for k in 0..=(j - 2) {
        let scale = BigRational::new(BigInt::one(), q.pow((j - 2 - k) as u32));
        let mut inner = BigRational::zero();
        for (m, c) in table.coeffs.iter().filter(|(m, _)| m.deg() == Some(k as usize)) {
            let v = nu(&Laurent::from_poly(m).mul(&y), table.convention)?;
            inner += c * BigRational::from_integer(v.into());
        }
        total += scale * inner;
    }
    Ok(total)
}
