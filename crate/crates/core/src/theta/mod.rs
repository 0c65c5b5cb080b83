//! Theta functions u_α(z) = Π_{γ ∈ Γ̃} (z - γω)/(z - γαω) for Γ = Γ_0(n), evaluated
//! at rational points with a certified truncation of the product.
//!
//! For s = x/y write G_γ(s) for the factor of γ. With P = xc - ya, Q = xd - yb and
//! (P', Q') = (P, Q)·α one has
//!
//! G_γ(s) = (Pω + Q)(c'ω + d') / ((P'ω + Q')(cω + d)),  (c', d') = (c, d)·α,
//! |G_γ(s) - 1| = H·|y| / (|cω + d|·|P'ω + Q'|),  H = |α_a ω + α_b - ω(α_c ω + α_d)|.
//!
//! The second identity is exact, so membership in S_ε = {γ : |G_γ - 1| >= ε} is decided
//! with polynomial degrees alone, and the degree caps below enclose S_ε. Leaving out
//! every γ outside S_ε changes the product by a factor 1 + δ with |δ| < ε.

mod lattice;

pub use lattice::{lattice_generator, multiplier_matrix, reduce_mod_lattice, CuspOrder, TateLattice};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff_base::{enumerate_below, P1Point, Poly};
use crate::laurent::{Laurent, OmegaPoint, QuadLaurent, EXACT};
use crate::matrix::Mat2;
use crate::par::Exec;

/// Guard digits carried by every factor beyond the certified precision.
const GUARD: usize = 2;

#[derive(Clone, Debug)]
pub struct ThetaOptions {
    /// ε = q^{-eps_exp}
    pub eps_exp: i64,
    pub exec: Exec,
    /// abort when more candidate matrices than this would be examined
    pub max_candidates: u64,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        Self { eps_exp: 5, exec: Exec::default(), max_candidates: 200_000_000 }
    }
}

/// A value of u_α known modulo π^{value.prec()}: the truncated product P satisfies
/// |u - P| < |P|·ε.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaValue {
    pub value: Laurent,
    pub eps_exp: i64,
    /// |S_ε|
    pub members: usize,
    /// matrices examined while enumerating S_ε
    pub candidates: u64,
}

/// u_α for one α ∈ Γ_0(n) and one exact base point ω.
#[derive(Clone, Debug)]
pub struct Theta {
    n: Poly,
    alpha: Mat2,
    omega: OmegaPoint,
    /// log_q H
    h_log: i64,
    /// log_q |α_c ω + α_d|
    j_log: i64,
    /// log_q |αω|
    eta_log: i64,
    /// v(Im ω)
    wi: i64,
    /// v(Im αω)
    etai: i64,
    /// v(Re ω), None when Re ω = 0
    wr: Option<i64>,
}

fn log_abs(z: &QuadLaurent) -> Result<i64> {
    Ok(-z.norm_val()?)
}

fn trunc_rel(z: &QuadLaurent, r: usize) -> QuadLaurent {
    match z.norm_val() {
        Ok(v) => z.truncate(v.saturating_add(r as i64)),
        Err(_) => z.clone(),
    }
}

fn deg(p: &Poly) -> i64 {
    p.deg_i()
}

impl Theta {
    /// `omega` must be exact with nonzero imaginary part; α must lie in Γ_0(n).
    pub fn new(n: &Poly, alpha: &Mat2, omega: &OmegaPoint) -> Result<Self> {
        if !alpha.in_gamma0(n) {
            return Err(Error::InvalidInput(format!("{alpha} is not in Gamma_0({n})")));
        }
        if !omega.re().is_exact() || !omega.im().is_exact() || omega.im().is_zero_at_prec() {
            return Err(Error::InvalidInput(format!("base point {omega} must be exact and non-real")));
        }
        let num = omega.affine(&alpha.a, &alpha.b);
        let den = omega.affine(&alpha.c, &alpha.d);
        let h = num.sub(&omega.mul(&den));
        let h_log = log_abs(&h).map_err(|_| Error::InvalidInput(format!("{alpha} fixes the base point")))?;
        let j_log = log_abs(&den)?;
        let eta_log = log_abs(&num)? - j_log;
        let wi = omega.im().valuation()?;
        let wr = omega.re().valuation().ok();
        // Im(num/den) = Im(num·conj(den)) / N(den), all exact
        let etai = num.mul(&den.conj()).im().valuation()? - den.field_norm().valuation()?;
        Ok(Self { n: n.clone(), alpha: alpha.clone(), omega: omega.clone(), h_log, j_log, eta_log, wi, etai, wr })
    }

    pub fn alpha(&self) -> &Mat2 {
        &self.alpha
    }

    pub fn omega(&self) -> &OmegaPoint {
        &self.omega
    }

    fn form(&self, m: &Poly, k: &Poly) -> QuadLaurent {
        self.omega.affine(m, k)
    }

    /// log_q |mω + k| without building series when Re ω = 0.
    fn form_log(&self, m: &Poly, k: &Poly) -> i64 {
        match (self.wr, m.is_zero()) {
            (_, true) => deg(k),
            (None, false) => deg(k).max(deg(m) - self.wi),
            _ => log_abs(&self.form(m, k)).expect("mω + k is nonzero"),
        }
    }

    /// (P', Q') and log |P'ω + Q'| for γ at s = x/y.
    fn primed(&self, g: &Mat2, x: &Poly, y: &Poly) -> (Poly, Poly, Poly, Poly) {
        let p = &(x * &g.c) - &(y * &g.a);
        let q = &(x * &g.d) - &(y * &g.b);
        let pp = &(&p * &self.alpha.a) + &(&q * &self.alpha.c);
        let qq = &(&p * &self.alpha.b) + &(&q * &self.alpha.d);
        (p, q, pp, qq)
    }

    /// G_γ(s) to relative precision `rel`.
    pub fn factor(&self, g: &Mat2, s: &P1Point, rel: usize) -> Result<QuadLaurent> {
        let (x, y) = (s.num(), s.den());
        let (p, q, pp, qq) = self.primed(g, x, y);
        let c2 = &(&g.c * &self.alpha.a) + &(&g.d * &self.alpha.c);
        let d2 = &(&g.c * &self.alpha.b) + &(&g.d * &self.alpha.d);
        let num = self.form(&p, &q).mul(&self.form(&c2, &d2));
        let den = self.form(&pp, &qq).mul(&self.form(&g.c, &g.d));
        num.div(&den, rel)
    }

    /// Members of S_ε at the finite point s = x/y, with every enumeration cap raised
    /// by `slack` degrees. Returns (members, candidates examined).
    ///
    /// Write L for the log of the largest allowed |cω + d|·|Pη + Q| (η = αω). With
    /// |cω + d| >= |c|·|Im ω| and |Pη + Q| >= |P|·|Im η| the strata are: c = 0; P = 0,
    /// which forces c ∈ F_q^*·y; and c, P ≠ 0 with |c|·|P| bounded, where a is read off
    /// P and d runs through one class mod c.
    pub fn members(&self, s: &P1Point, eps_exp: i64, slack: i64, opts: &ThetaOptions) -> Result<(Vec<Mat2>, u64)> {
        if s.is_infinity() {
            return Ok((Vec::new(), 0));
        }
        let f = self.n.field();
        let (x, y) = (s.num(), s.den());
        let hy = self.h_log + deg(y) + eps_exp;
        let l = hy - self.j_log;
        let is_member = |g: &Mat2, lcd: i64| {
            let (_, _, pp, qq) = self.primed(g, x, y);
            self.form_log(&pp, &qq) + lcd <= hy
        };
        let d_cap_for = |c: &Poly, log_cd: i64| -> i64 {
            let cap = log_cd + slack;
            self.wr.map_or(cap, |wr| cap.max(deg(c) - wr))
        };
        let budget = std::sync::atomic::AtomicU64::new(0);
        let over = || {
            budget.load(std::sync::atomic::Ordering::Relaxed) > opts.max_candidates
        };
        let count = |k: u64| {
            budget.fetch_add(k, std::sync::atomic::Ordering::Relaxed);
        };
        // all d ≡ d0 mod c with deg d <= cap
        let coset = |d0: &Poly, c: &Poly, cap: i64| -> Vec<Poly> {
            if cap < deg(c) {
                return if deg(d0) <= cap { vec![d0.clone()] } else { Vec::new() };
            }
            enumerate_below(f, (cap - deg(c) + 1) as usize).map(|k| d0 + &(&k * c)).collect()
        };
        let mut out = Vec::new();

        // c = 0: γ = [[1, b], [0, d]], P = -y
        let b_cap = deg(x).max(l.max(deg(y) + self.eta_log) + slack) - deg(y);
        if b_cap >= 0 {
            for d in f.units() {
                let d = Poly::constant(f, d);
                for b in enumerate_below(f, b_cap as usize + 1) {
                    count(1);
                    let g = Mat2::new(Poly::one(f), b, Poly::zero(f), d.clone());
                    if is_member(&g, 0) {
                        out.push(g);
                    }
                }
            }
        }

        // P = 0: c = k·y, a = k·x monic, |Q| = 1
        if !x.is_zero() && self.n.divides(y) {
            let k = f.inv(x.lead());
            let (a, c) = (x.scale(k), y.scale(k));
            if let Some(ainv) = a.inv_mod(&c) {
                for det in f.units() {
                    let d0 = ainv.scale(det).rem(&c);
                    for d in coset(&d0, &c, d_cap_for(&c, l)) {
                        count(1);
                        let lcd = self.form_log(&c, &d);
                        let b = (&(&a * &d) - &Poly::constant(f, det)).div_exact(&c).expect("ad = det mod c");
                        let g = Mat2::new(a.clone(), b, c.clone(), d);
                        if lcd <= l && is_member(&g, lcd) {
                            out.push(g);
                        }
                    }
                }
            }
        }

        // c, P ≠ 0: log|c| + log|P| <= K
        let k_total = l + self.wi + self.etai + slack;
        let c1_cap = k_total - deg(&self.n);
        if c1_cap >= 0 {
            let cs: Vec<Poly> = enumerate_below(f, c1_cap as usize + 1)
                .filter(|c1| !c1.is_zero())
                .map(|c1| &self.n * &c1)
                .collect();
            let per_c = opts.exec.map(&cs, |c| {
                let mut found = Vec::new();
                if over() {
                    return found;
                }
                // P = r0 - yδ where xc = q0·y + r0 and a = q0 + δ
                let p_cap = k_total - deg(c);
                let (q0, r0) = (x * c).divrem(y);
                let deltas: Vec<Poly> = if p_cap >= deg(y) {
                    enumerate_below(f, (p_cap - deg(y) + 1) as usize).collect()
                } else if deg(&r0) <= p_cap {
                    vec![Poly::zero(f)]
                } else {
                    Vec::new()
                };
                for delta in deltas {
                    let a = &q0 + &delta;
                    if !a.is_monic() {
                        continue;
                    }
                    let p = &(x * c) - &(y * &a);
                    if p.is_zero() {
                        continue;
                    }
                    let Some(ainv) = a.inv_mod(c) else { continue };
                    let log_cd = l - deg(&p) + self.etai;
                    for det in f.units() {
                        let d0 = ainv.scale(det).rem(c);
                        let ds = coset(&d0, c, d_cap_for(c, log_cd));
                        count(ds.len() as u64);
                        for d in ds {
                            let lcd = self.form_log(c, &d);
                            if lcd > log_cd + slack {
                                continue;
                            }
                            let b = (&(&a * &d) - &Poly::constant(f, det)).div_exact(c).expect("ad = det mod c");
                            let g = Mat2::new(a.clone(), b, c.clone(), d);
                            if is_member(&g, lcd) {
                                found.push(g);
                            }
                        }
                    }
                }
                found
            });
            out.extend(per_c.into_iter().flatten());
        }
        let candidates = budget.load(std::sync::atomic::Ordering::Relaxed);
        if candidates > opts.max_candidates {
            return Err(Error::CapExceeded(format!(
                "more than {} candidates for eps = q^-{eps_exp} at {s}",
                opts.max_candidates
            )));
        }
        Ok((out, candidates))
    }

    /// u_α(s) with |u - P| < |P|·q^{-eps_exp}.
    pub fn evaluate(&self, s: &P1Point, opts: &ThetaOptions) -> Result<ThetaValue> {
        let f = self.n.field();
        let e = opts.eps_exp;
        if e < 0 {
            return Err(Error::InvalidInput("eps exponent must be >= 0".into()));
        }
        if s.is_infinity() {
            return Ok(ThetaValue { value: Laurent::one(f), eps_exp: e, members: 0, candidates: 0 });
        }
        let (members, candidates) = self.members(s, e, 0, opts)?;
        let rel = e as usize + 1 + GUARD;
        let one = QuadLaurent::from_real(self.omega.ext(), Laurent::one(f));
        let factors = opts.exec.map(&members, |g| self.factor(g, s, rel));
        let factors = factors.into_iter().collect::<Result<Vec<_>>>()?;
        let prod = opts.exec.map_reduce(&factors, one, |z| z.clone(), |a, b| trunc_rel(&a.mul(&b), rel));
        let v = prod.norm_val()?;
        let prec = v + e + 1;
        if prod.prec() < prec {
            return Err(Error::Precision(format!("product known only modulo pi^{}", prod.prec())));
        }
        let im = prod.im().truncate(prec);
        if !im.is_zero_at_prec() {
            return Err(Error::Consistency(format!("theta value at {s} is not in K_inf: {prod}")));
        }
        Ok(ThetaValue { value: prod.re().truncate(prec), eps_exp: e, members: members.len(), candidates })
    }

    /// True if raising every enumeration cap by `slack` finds no new member of S_ε.
    pub fn stabilizes(&self, s: &P1Point, slack: i64, opts: &ThetaOptions) -> Result<bool> {
        let (a, _) = self.members(s, opts.eps_exp, 0, opts)?;
        let (b, _) = self.members(s, opts.eps_exp, slack, opts)?;
        Ok(a.len() == b.len())
    }
}

/// u_w(s) for a word w = Π α_i^{k_i}, using u_{αβ} = u_α·u_β.
pub fn evaluate_word(
    n: &Poly,
    word: &[(Mat2, i64)],
    omega: &OmegaPoint,
    s: &P1Point,
    opts: &ThetaOptions,
) -> Result<Laurent> {
    let f = n.field();
    let mut out = Laurent::one(f);
    for (alpha, k) in word {
        if *k == 0 {
            continue;
        }
        let v = Theta::new(n, alpha, omega)?.evaluate(s, opts)?;
        let rel = v.value.rel_prec().max(1) as usize;
        out = out.mul(&v.value.pow(*k, rel)?);
    }
    Ok(out)
}

/// The default base point π^2·ρ, exact.
pub fn default_base_point(f: crate::ff_base::PrimeField) -> OmegaPoint {
    QuadLaurent::default_omega(f, EXACT)
}

/// (s - γω)/(s - γαω) straight from the Möbius action; slow, used as a cross-check.
pub fn theta_factor(alpha: &Mat2, gamma: &Mat2, omega: &OmegaPoint, s: &P1Point, rel: usize) -> Result<QuadLaurent> {
    let ext = omega.ext();
    let work = rel + 8;
    let r = s.as_rational().ok_or_else(|| Error::InvalidInput("s must be finite".into()))?;
    let sx = QuadLaurent::from_real(ext, Laurent::from_rational(&r, 4 * work as i64 + 32));
    let gw = omega.mobius(gamma.entries(), work)?;
    let ga = gamma.mul(alpha);
    let gaw = omega.mobius(ga.entries(), work)?;
    sx.sub(&gw).div(&sx.sub(&gaw), rel)
}
