//! Elliptic curves over F_q(T) given by integral Weierstrass models: invariants,
//! local reduction, point counts, Hecke eigenvalues, torsion bounds and the Tate
//! parameter.

mod points;
mod tate;
mod tate_param;
mod zech;

pub use points::{count_points, lambda_p, torsion_bound, PointCache, TorsionBound};
pub use tate::{conductor, reduction_type, Place, ReductionData, ReductionKind};
pub use tate_param::{j_series_coefficients, j_of_parameter, reversed_j_coefficients, tate_parameter_from_j};
pub use zech::ZechField;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff_base::{Poly, PrimeField, RationalFunction};

/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 with a_i ∈ F_q[T].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    /// [a1, a2, a3, a4, a6]
    pub a: [Poly; 5],
}

#[derive(Clone, Debug, Serialize)]
pub struct Invariants {
    pub b2: Poly,
    pub b4: Poly,
    pub b6: Poly,
    pub b8: Poly,
    pub c4: Poly,
    pub c6: Poly,
    pub discriminant: Poly,
    pub j: RationalFunction,
}

/// b/c invariants and Δ from raw coefficients (no validity checks).
pub(crate) fn raw_invariants(a: &[Poly; 5]) -> (Poly, Poly, Poly, Poly, Poly, Poly, Poly) {
    let f = a[0].field();
    let k = |x: i64| Poly::constant(f, f.reduce(x));
    let [a1, a2, a3, a4, a6] = a;
    let b2 = &(a1 * a1) + &(&k(4) * a2);
    let b4 = &(&k(2) * a4) + &(a1 * a3);
    let b6 = &(a3 * a3) + &(&k(4) * a6);
    let b8 = &(&(&(&(&(a1 * a1) * a6) + &(&(&k(4) * a2) * a6)) - &(&(a1 * a3) * a4)) + &(&(a2 * a3) * a3)) - &(a4 * a4);
    let c4 = &(&b2 * &b2) - &(&k(24) * &b4);
    let c6 = &(&(&k(-1) * &(&(&b2 * &b2) * &b2)) + &(&(&k(36) * &b2) * &b4)) - &(&k(216) * &b6);
    let disc = &(&(&(&k(-1) * &(&(&b2 * &b2) * &b8)) - &(&(&k(8) * &b4) * &(&b4 * &b4))) - &(&(&k(27) * &b6) * &b6))
        + &(&(&(&k(9) * &b2) * &b4) * &b6);
    (b2, b4, b6, b8, c4, c6, disc)
}

impl WeierstrassCurve {
    pub fn new(a: [Poly; 5]) -> Result<Self> {
        let f = a[0].field();
        if a.iter().any(|x| x.field() != f) {
            return Err(Error::InvalidInput("coefficients over different fields".into()));
        }
        let c = Self { a };
        if c.invariants_unchecked().discriminant.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    /// Parse `"a1=T;a6=T^2"`; missing coefficients are zero.
    pub fn parse(field: PrimeField, s: &str) -> Result<Self> {
        let mut a: [Poly; 5] = std::array::from_fn(|_| Poly::zero(field));
        for part in s.split([';', ',']).map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected a_i=<poly>, got {part:?}")))?;
            let slot = match name.trim() {
                "a1" => 0,
                "a2" => 1,
                "a3" => 2,
                "a4" => 3,
                "a6" => 4,
                other => return Err(Error::Parse(format!("unknown coefficient {other:?}"))),
            };
            a[slot] = Poly::parse(field, value.trim())?;
        }
        Self::new(a)
    }

    pub fn field(&self) -> PrimeField {
        self.a[0].field()
    }

    fn invariants_unchecked(&self) -> Invariants {
        let (b2, b4, b6, b8, c4, c6, discriminant) = raw_invariants(&self.a);
        let f = self.field();
        let j = if discriminant.is_zero() {
            RationalFunction::zero(f)
        } else {
            let c4c = &(&c4 * &c4) * &c4;
            RationalFunction::new(c4c, discriminant.clone()).expect("nonzero discriminant")
        };
        Invariants { b2, b4, b6, b8, c4, c6, discriminant, j }
    }

    pub fn invariants(&self) -> Invariants {
        self.invariants_unchecked()
    }

    pub fn j_invariant(&self) -> RationalFunction {
        self.invariants_unchecked().j
    }

    pub fn is_isotrivial(&self) -> bool {
        self.j_invariant().is_constant()
    }

    /// Same curve with (x, y) -> (u²x, u³y): a_i -> a_i / u^i.
    pub fn rescale(&self, u: u32) -> Self {
        let f = self.field();
        let ui = f.inv(u);
        let pw = [1, 2, 3, 4, 6];
        let a = std::array::from_fn(|i| self.a[i].scale(f.pow(ui, pw[i])));
        Self { a }
    }

    /// Canonical key used for caches.
    pub fn key(&self) -> String {
        format!("q{}_{}", self.field().p(), self.to_string().replace([' ', '^', '*', '+', ';', '='], "_"))
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["a1", "a2", "a3", "a4", "a6"];
        let parts: Vec<String> = names
            .iter()
            .zip(&self.a)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| format!("{n}={c}"))
            .collect();
        if parts.is_empty() {
            write!(fm, "a6=0")
        } else {
            write!(fm, "{}", parts.join(";"))
        }
    }
}

impl Serialize for WeierstrassCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WeierstrassCurve", 6)?;
        st.serialize_field("q", &self.field().p())?;
        for (n, c) in ["a1", "a2", "a3", "a4", "a6"].iter().zip(&self.a) {
            st.serialize_field(n, &c.to_string())?;
        }
        st.end()
    }
}
