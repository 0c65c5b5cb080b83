//! The pipeline from an elliptic curve to its modular parametrization at the cusps:
//! newform, group word, theta functions, period lattice, degree and cusp orders.

mod generators;

pub use generators::{cycle_cochain, generator_basis, j_image, j_inverse, phi_alpha_direct, GroupWord};

use std::collections::BTreeMap;
use std::time::Instant;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bt_graph::QuotientGraph;
use crate::cochain::{newform, petersson, FourierTable, HarmonicCochain, Newform};
use crate::curve::{
    conductor, lambda_p, reduction_type, tate_parameter_from_j, torsion_bound, Place, PointCache, ReductionData,
    ReductionKind, TorsionBound, WeierstrassCurve,
};
use crate::error::{Error, Result, StageExt};
use crate::ff_base::{monic_irreducibles, P1Point, Poly};
use crate::laurent::{Laurent, OmegaPoint};
use crate::par::Exec;
use crate::theta::{
    default_base_point, lattice_generator, multiplier_matrix, reduce_mod_lattice, CuspOrder, TateLattice, Theta,
    ThetaOptions,
};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct ParamOptions {
    /// theta products are certified to relative precision q^{-eps_exp}
    pub eps_exp: i64,
    /// primes up to this degree enter the torsion bound
    pub torsion_depth: usize,
    pub exec: Exec,
    /// base point of the theta products; π²ρ when `None`
    pub omega: Option<OmegaPoint>,
    pub max_candidates: u64,
    /// compare n with the conductor from Tate's algorithm
    pub verify_conductor: bool,
    /// Fourier coefficients c(φ, m) reported for deg m <= this
    pub fourier_degree: usize,
}

impl Default for ParamOptions {
    fn default() -> Self {
        Self {
            eps_exp: 5,
            torsion_depth: 10,
            exec: Exec::default(),
            omega: None,
            max_candidates: ThetaOptions::default().max_candidates,
            verify_conductor: true,
            fourier_degree: 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspImage {
    pub cusp: String,
    /// u_φ(s), known modulo π^{value.prec()}
    pub value: Laurent,
    pub eps_exp: i64,
    /// |S_ε| summed over the generators in the word
    pub members: usize,
    pub order: CuspOrder,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParametrizationReport {
    pub schema_version: u32,
    pub crate_version: &'static str,
    pub q: u32,
    pub curve: WeierstrassCurve,
    pub n: String,
    pub conductor: Vec<ReductionData>,
    pub genus: usize,
    pub cusps: Vec<String>,
    pub newform: Newform,
    pub fourier: FourierTable,
    pub omega: OmegaPoint,
    pub eps_exp: i64,
    pub word: GroupWord,
    /// j(α_i) from tree geodesics equals the i-th cycle cochain
    pub generators_verified: bool,
    /// ⟨φ, j(α_i)⟩
    pub pairings: Vec<i64>,
    /// v(c_{α_i}(α_j))
    pub multiplier_valuations: Vec<Vec<i64>>,
    pub multiplier_symmetric: bool,
    pub lattice: TateLattice,
    /// t_E from j_E, to the precision of t
    pub tate_parameter: Laurent,
    pub t_matches_tate_parameter: bool,
    pub degree: i64,
    pub torsion: TorsionBound,
    pub cusp_images: Vec<CuspImage>,
    pub timings_ms: BTreeMap<&'static str, u128>,
}

fn to_i64(x: &BigRational) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::Consistency(format!("{x} is not an integer")));
    }
    x.to_integer().to_i64().ok_or_else(|| Error::Consistency(format!("{x} overflows")))
}

/// n·∞ against the conductor from Tate's algorithm.
pub fn verify_conductor(e: &WeierstrassCurve, n: &Poly) -> Result<Vec<ReductionData>> {
    let data = conductor(e)?;
    let f = e.field();
    let mut finite = Poly::one(f);
    let mut at_inf = None;
    for d in &data {
        match &d.place {
            Place::Finite(p) => finite = &finite * &p.pow(d.conductor_exponent as u64),
            Place::Infinity => at_inf = Some(d),
        }
    }
    if &finite != n {
        return Err(Error::InvalidInput(format!("conductor has finite part {finite}, not {n}")));
    }
    match at_inf {
        Some(d) if d.kind == ReductionKind::SplitMultiplicative => Ok(data),
        Some(d) => Err(Error::InvalidInput(format!("reduction at infinity is {:?}, not split multiplicative", d.kind))),
        None => Err(Error::InvalidInput("good reduction at infinity".into())),
    }
}

/// Eigenvalues λ_P at small primes P ∤ n, enough to cut out a line in the new space.
/// Newform of level n matching the Hecke eigenvalues of E, adding primes of degree
/// 1..=3 prime to n until the eigenline is cut out.
pub fn find_newform(g: &QuotientGraph, e: &WeierstrassCurve, cache: &PointCache) -> Result<Newform> {
    let f = e.field();
    let mut eigen = Vec::new();
    let mut last = None;
    for d in 1..=3 {
        for p in monic_irreducibles(f, d) {
            if p.divides(&g.n) {
                continue;
            }
            eigen.push((p.clone(), lambda_p(e, &p, Some(cache))?));
            match newform(g, &eigen) {
                Ok(nf) => return Ok(nf),
                Err(err) => last = Some(err),
            }
        }
    }
    Err(last.unwrap_or_else(|| Error::Consistency("no primes available".into())))
}

pub fn degree_of_phi(norm: i64, lattice: &TateLattice) -> Result<i64> {
    if norm % lattice.mu != 0 {
        return Err(Error::Consistency(format!("<phi, phi> = {norm} is not divisible by mu = {}", lattice.mu)));
    }
    Ok(norm / lattice.mu)
}

/// u_φ(s) = Π u_{α_i}(s)^{n_i}.
pub fn evaluate_cusp(n: &Poly, word: &GroupWord, omega: &OmegaPoint, s: &P1Point, opts: &ThetaOptions) -> Result<(Laurent, usize)> {
    let f = n.field();
    let mut value = Laurent::one(f);
    let mut members = 0;
    for (alpha, k) in word.pairs() {
        if k == 0 {
            continue;
        }
        let v = Theta::new(n, &alpha, omega)?.evaluate(s, opts)?;
        members += v.members;
        let rel = v.value.rel_prec().max(1) as usize;
        value = value.mul(&v.value.pow(k, rel)?);
    }
    Ok((value, members))
}

/// The full computation for E of conductor n·∞.
pub fn compute_parametrization(
    e: &WeierstrassCurve,
    n: &Poly,
    opts: &ParamOptions,
    cache: Option<&PointCache>,
) -> Result<ParametrizationReport> {
    let f = e.field();
    let mut timings = BTreeMap::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, timings: &mut BTreeMap<&'static str, u128>| {
        timings.insert(name, clock.elapsed().as_millis());
        clock = Instant::now();
    };
    if e.is_isotrivial() {
        return Err(Error::InvalidInput("curve is isotrivial".into()));
    }
    let conductor = if opts.verify_conductor {
        verify_conductor(e, n).stage("conductor")?
    } else {
        reduction_type(e, &Place::Infinity).stage("conductor")?;
        Vec::new()
    };
    lap("conductor", &mut timings);

    let g = QuotientGraph::build(n).stage("graph")?;
    lap("graph", &mut timings);

    let local = PointCache::in_memory();
    let cache = cache.unwrap_or(&local);
    let nf = find_newform(&g, e, cache).stage("newform")?;
    let fourier = FourierTable::compute(&g, &nf.phi, opts.fourier_degree, nf.convention).stage("newform")?;
    let norm = to_i64(&petersson(&g, &nf.phi, &nf.phi)).stage("newform")?;
    lap("newform", &mut timings);

    let basis = generator_basis(&g);
    let mut generators_verified = true;
    for (alpha, cyc) in &basis {
        if !alpha.in_gamma0(n) || &j_image(&g, alpha).stage("generators")? != cyc {
            generators_verified = false;
        }
    }
    if !generators_verified {
        return Err(Error::Consistency("a generator's j-image differs from its cycle".into()).at("generators"));
    }
    let word = j_inverse(&g, &nf.phi).stage("generators")?;
    let cycles: Vec<HarmonicCochain> = basis.iter().map(|(_, c)| c.clone()).collect();
    let pairings: Vec<i64> = cycles
        .iter()
        .map(|c| to_i64(&petersson(&g, &nf.phi, c)))
        .collect::<Result<_>>()
        .stage("generators")?;
    lap("generators", &mut timings);

    let omega = opts.omega.clone().unwrap_or_else(|| default_base_point(f));
    let topts = ThetaOptions { eps_exp: opts.eps_exp, exec: opts.exec, max_candidates: opts.max_candidates };
    let matrix = multiplier_matrix(n, &word.generators, &omega, &topts).stage("theta")?;
    let values: Vec<Vec<Laurent>> = matrix.iter().map(|r| r.iter().map(|v| v.value.clone()).collect()).collect();
    let multiplier_valuations: Vec<Vec<i64>> = values
        .iter()
        .map(|r| r.iter().map(Laurent::valuation).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()
        .stage("theta")?;
    let multiplier_symmetric = (0..values.len()).all(|i| {
        (0..values.len()).all(|j| {
            let (a, b) = (&values[i][j], &values[j][i]);
            a.agrees_to(b, a.prec().min(b.prec()))
        })
    });
    // v(c_α(β)) = -⟨j(α), j(β)⟩
    for (i, row) in multiplier_valuations.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let p = to_i64(&petersson(&g, &cycles[i], &cycles[j])).stage("theta")?;
            if v != -p {
                return Err(Error::Consistency(format!("v(c_{i}({j})) = {v} but the pairing is {p}")).at("theta"));
            }
        }
    }
    lap("theta", &mut timings);

    let lattice = lattice_generator(&word.exponents, &values).stage("lattice")?;
    let mu_pairing = pairings.iter().fold(0i64, |a, &b| a.gcd(&b));
    if mu_pairing != lattice.mu {
        return Err(Error::Consistency(format!("v(t) = {} but gcd of pairings is {mu_pairing}", lattice.mu)).at("lattice"));
    }
    let degree = degree_of_phi(norm, &lattice).stage("lattice")?;
    let tate_parameter = tate_parameter_from_j(&e.j_invariant(), lattice.t.prec()).stage("lattice")?;
    let t_matches_tate_parameter =
        lattice.t.agrees_to(&tate_parameter, lattice.t.prec().min(tate_parameter.prec()));
    lap("lattice", &mut timings);

    let torsion = torsion_bound(e, n, opts.torsion_depth, opts.exec, Some(cache)).stage("torsion")?;
    lap("torsion", &mut timings);

    let mut cusp_images = Vec::new();
    for s in g.cusps() {
        let (value, members) = if s.is_infinity() {
            (Laurent::one(f), 0)
        } else {
            evaluate_cusp(n, &word, &omega, &s, &topts).stage("cusps")?
        };
        let order = reduce_mod_lattice(&value, &lattice, torsion.bound).stage("cusps")?;
        cusp_images.push(CuspImage { cusp: s.to_string(), value, eps_exp: opts.eps_exp, members, order });
    }
    lap("cusps", &mut timings);

    Ok(ParametrizationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        crate_version: env!("CARGO_PKG_VERSION"),
        q: f.p(),
        curve: e.clone(),
        n: n.to_string(),
        conductor,
        genus: g.genus,
        cusps: g.cusps().iter().map(|s| s.to_string()).collect(),
        newform: nf,
        fourier,
        omega,
        eps_exp: opts.eps_exp,
        word,
        generators_verified,
        pairings,
        multiplier_valuations,
        multiplier_symmetric,
        lattice,
        tate_parameter,
        t_matches_tate_parameter,
        degree,
        torsion,
        cusp_images,
        timings_ms: timings,
    })
}

impl ParametrizationReport {
    pub fn image(&self, cusp: &str) -> Option<&CuspImage> {
        self.cusp_images.iter().find(|c| c.cusp == cusp)
    }
}
