//! Acceptance run over the two worked examples. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use modpar_core::bt_graph::{EdgeRep, QuotientGraph};
use modpar_core::cochain::{
    cuspidal_basis, fourier_expansion_value, hecke, is_harmonic, petersson, FourierTable, HarmonicCochain,
};
use modpar_core::curve::{j_of_parameter, lambda_p, tate_parameter_from_j, WeierstrassCurve};
use modpar_core::ff_base::{monic_irreducibles, P1Point, Poly, PrimeField};
use modpar_core::laurent::{Laurent, QuadExt, QuadLaurent, EXACT};
use modpar_core::matrix::Mat2;
use modpar_core::modparam::{
    compute_parametrization, generator_basis, j_image, phi_alpha_direct, verify_conductor, ParamOptions,
    ParametrizationReport,
};
use modpar_core::theta::{default_base_point, multiplier_matrix, Theta, ThetaOptions};
use num_rational::BigRational;

struct Example {
    name: &'static str,
    e: WeierstrassCurve,
    n: Poly,
    g: QuotientGraph,
    report: ParametrizationReport,
    elapsed: Duration,
}

impl Example {
    fn new(name: &'static str, p: u32, curve: &str, n: &str, eps_exp: i64, depth: usize) -> Self {
        let f = PrimeField::new(p).unwrap();
        let e = WeierstrassCurve::parse(f, curve).unwrap();
        let n = Poly::parse(f, n).unwrap();
        let g = QuotientGraph::build(&n).unwrap();
        let opts = ParamOptions { eps_exp, torsion_depth: depth, ..Default::default() };
        let start = Instant::now();
        let report = compute_parametrization(&e, &n, &opts, None).unwrap_or_else(|err| panic!("{name}: {err}"));
        Self { name, e, n, g, report, elapsed: start.elapsed() }
    }

    fn f(&self) -> PrimeField {
        self.e.field()
    }

    fn series(&self, s: &str) -> Laurent {
        Laurent::parse(self.f(), s).unwrap()
    }

    fn cusp(&self, s: &str) -> &modpar_core::modparam::CuspImage {
        let key = P1Point::parse(self.f(), s).unwrap().to_string();
        self.report.image(&key).unwrap_or_else(|| panic!("{}: no cusp {key}", self.name))
    }

    fn generators(&self) -> Vec<Mat2> {
        self.report.word.generators.clone()
    }
}

#[derive(Default)]
struct Criterion {
    checks: Vec<(String, bool)>,
}

impl Criterion {
    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }

    /// `got` equals `want` modulo π^{k+1}, i.e. |got - want| < q^-k.
    fn close(&mut self, what: &str, got: &Laurent, want: &Laurent, k: i64) {
        let ok = got.prec() > k && got.agrees_to(want, k + 1);
        self.check(format!("{what}: got {got}, want {want} + O(pi^{})", k + 1), ok);
    }

    fn report(&self, id: u32, title: &str, took: Duration) -> bool {
        let failed: Vec<&String> = self.checks.iter().filter(|(_, ok)| !ok).map(|(w, _)| w).collect();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {id} ({title}): {status} [{}/{} checks, {:.1}s]",
            self.checks.len() - failed.len(),
            self.checks.len(),
            took.as_secs_f64()
        );
        for w in failed {
            println!("    failed: {w}");
        }
        status == "PASS"
    }
}

fn orders_are(c: &mut Criterion, ex: &Example, want: &[(&str, u64)]) {
    for (s, k) in want {
        let got = ex.cusp(s).order.order;
        c.check(format!("{}: order of {s} is {got}, want {k}", ex.name, s = s), got == *k);
    }
}

fn first_example(ex: &Example) -> Criterion {
    let mut c = Criterion::default();
    let r = &ex.report;
    c.check(format!("genus {}", r.genus), r.genus == 1);
    let mut cusps = r.cusps.clone();
    cusps.sort();
    c.check(format!("cusps {cusps:?}"), cusps == ["0", "1/T", "1/T^2", "inf"]);
    let alpha = Mat2::parse(ex.f(), "[[T^2+T+1, 1], [T^3, 1+T]]").unwrap();
    let same = j_image(&ex.g, &alpha).map(|phi| phi == r.newform.phi).unwrap_or(false);
    c.check("generator class has the newform as j-image", same);
    c.close("t", &r.lattice.t, &ex.series("pi^4"), 8);
    c.check(format!("degree {}", r.degree), r.degree == 1);
    c.close("u(0)", &ex.cusp("0").value, &ex.series("pi"), 5);
    c.close("u(1/T)", &ex.cusp("1/T").value, &ex.series("pi^-1"), 3);
    c.close("u(1/T^2)", &ex.cusp("1/T^2").value, &ex.series("pi^2"), 6);
    orders_are(&mut c, ex, &[("0", 4), ("1/T", 4), ("1/T^2", 2)]);
    c.check(format!("torsion bound {} at depth 15", r.torsion.bound), r.torsion.bound == 16);
    c.check(format!("runtime {:.1}s <= 300s", ex.elapsed.as_secs_f64()), ex.elapsed.as_secs() <= 300);
    c
}

fn second_example(ex: &Example) -> Criterion {
    let mut c = Criterion::default();
    let r = &ex.report;
    c.check(format!("genus {}", r.genus), r.genus == 2);
    c.check(format!("{} cusps", r.cusps.len()), r.cusps.len() == 6);
    c.close("t", &r.lattice.t, &ex.series("pi^4 + 2*pi^5"), 5);
    let te = tate_parameter_from_j(&ex.e.j_invariant(), 12).unwrap();
    c.close("t_E", &te, &ex.series("pi^4 + 2*pi^5 + pi^7 + 2*pi^8"), 10);
    let k = r.lattice.t.prec().min(te.prec());
    c.check(format!("t = t_E modulo pi^{k}"), r.lattice.t.agrees_to(&te, k));
    c.check(format!("degree {}", r.degree), r.degree == 2);
    c.close("u(0)", &ex.cusp("0").value, &ex.series("2*pi^2 + 2*pi^3"), 3);
    c.close("u(1/T)", &ex.cusp("1/T").value, &ex.series("pi^-1 + 1 + pi"), 1);
    c.close("u(1/T^2)", &ex.cusp("1/T^2").value, &ex.series("pi^4 + 2*pi^5"), 5);
    c.close("u(1/(T-1))", &ex.cusp("1/(T-1)").value, &ex.series("pi^-2 + pi^-1"), 0);
    c.close("u(1/(T^2-T))", &ex.cusp("1/(T^2-T)").value, &ex.series("pi^3"), 5);
    orders_are(&mut c, ex, &[("1/T", 4), ("1/T^2", 1), ("0", 2), ("1/(T-1)", 2), ("1/(T^2-T)", 4)]);
    c.check(format!("torsion bound {} at depth 10", r.torsion.bound), r.torsion.bound == 8);
    c.check(format!("runtime {:.1}s <= 1800s", ex.elapsed.as_secs_f64()), ex.elapsed.as_secs() <= 1800);
    c
}

/// Three primes of smallest degree prime to n.
fn small_primes(ex: &Example) -> Vec<Poly> {
    (1..=3)
        .flat_map(|d| monic_irreducibles(ex.f(), d))
        .filter(|p| p.gcd(&ex.n).is_one())
        .take(3)
        .collect()
}

fn harmonic_algebra(examples: &[&Example]) -> Criterion {
    let mut c = Criterion::default();
    for ex in examples {
        let basis = cuspidal_basis(&ex.g).unwrap();
        c.check(format!("{}: basis is harmonic", ex.name), basis.iter().all(|b| is_harmonic(&ex.g, b)));
        let primes = small_primes(ex);
        let t = |p: &Poly, phi: &HarmonicCochain| hecke(&ex.g, p, phi).unwrap();
        for (i, p) in primes.iter().enumerate() {
            for q in &primes[i + 1..] {
                let ok = basis.iter().all(|b| t(p, &t(q, b)) == t(q, &t(p, b)));
                c.check(format!("{}: T_{p} and T_{q} commute", ex.name), ok);
            }
            let ok = basis.iter().all(|a| {
                basis.iter().all(|b| petersson(&ex.g, &t(p, a), b) == petersson(&ex.g, a, &t(p, b)))
            });
            c.check(format!("{}: T_{p} is self-adjoint", ex.name), ok);
            let phi = &ex.report.newform.phi;
            let lambda = lambda_p(&ex.e, p, None).unwrap();
            c.check(format!("{}: T_{p} phi_E = {lambda} phi_E", ex.name), t(p, phi) == phi.scale(lambda));
        }
    }
    c
}

fn omega_pi(f: PrimeField, k: i64) -> QuadLaurent {
    QuadLaurent::new(QuadExt::new(f), Laurent::zero(f), Laurent::monomial(f, 1, k))
}

fn agree(a: &Laurent, b: &Laurent) -> bool {
    a.agrees_to(b, a.prec().min(b.prec()))
}

fn theta_properties(e1: &Example, e2: &Example) -> Criterion {
    let mut c = Criterion::default();
    let o2 = ThetaOptions { eps_exp: 2, ..Default::default() };
    let o4 = ThetaOptions { eps_exp: 4, ..Default::default() };
    let (n2, w2) = (&e2.n, default_base_point(e2.f()));
    let gens = e2.generators();
    let (a, b) = (&gens[0], &gens[1]);
    for s in ["1/T", "1/T^2"] {
        let s = P1Point::parse(e2.f(), s).unwrap();
        let u = |m: &Mat2| Theta::new(n2, m, &w2).unwrap().evaluate(&s, &o2).unwrap().value;
        let (ua, ub, uab) = (u(a), u(b), u(&a.mul(b)));
        c.check(format!("{}: u_ab = u_a u_b at {s}", e2.name), agree(&uab, &ua.mul(&ub)));
    }
    let alpha = &e1.generators()[0];
    for s in ["0", "1/T", "1/T^2"] {
        let s = P1Point::parse(e1.f(), s).unwrap();
        let u = |k| Theta::new(&e1.n, alpha, &omega_pi(e1.f(), k)).unwrap().evaluate(&s, &o4).unwrap().value;
        c.check(format!("{}: u(pi^2 rho) = u(pi^3 rho) at {s}", e1.name), agree(&u(2), &u(3)));
    }
    let s = P1Point::parse(e2.f(), "1/T").unwrap();
    let u = |k| Theta::new(n2, b, &omega_pi(e2.f(), k)).unwrap().evaluate(&s, &o2).unwrap().value;
    c.check(format!("{}: u(pi^2 rho) = u(pi^3 rho) at {s}", e2.name), agree(&u(2), &u(3)));
    let m = multiplier_matrix(n2, &gens, &w2, &o2).unwrap();
    for i in 0..gens.len() {
        for j in 0..i {
            let ok = agree(&m[i][j].value, &m[j][i].value);
            c.check(format!("{}: c_{i}({j}) = c_{j}({i})", e2.name), ok);
        }
    }
    for (ex, o) in [(e1, &o4), (e2, &o2)] {
        for alpha in ex.generators() {
            let th = Theta::new(&ex.n, &alpha, &default_base_point(ex.f())).unwrap();
            for s in ex.report.cusps.iter().filter(|s| s.as_str() != "inf") {
                let p = P1Point::parse(ex.f(), s).unwrap();
                c.check(format!("{}: enumeration stable at {s}", ex.name), th.stabilizes(&p, 2, o).unwrap());
            }
        }
    }
    c
}

fn oracles(examples: &[&Example]) -> Criterion {
    let mut c = Criterion::default();
    for ex in examples {
        let v = Mat2::identity(ex.f());
        for (alpha, cyc) in generator_basis(&ex.g) {
            let ok = ex.g.edges.iter().enumerate().all(|(i, e)| {
                phi_alpha_direct(&ex.g, &alpha, &e.matrix, &v).unwrap() == cyc.values[i]
            });
            c.check(format!("{}: direct count matches the cycle of {alpha}", ex.name), ok);
        }
        let nf = &ex.report.newform;
        let table = FourierTable::compute(&ex.g, &nf.phi, 3, nf.convention).unwrap();
        let p = ex.f().p() as u64;
        let mut ok = true;
        for j in 2..=5i64 {
            for idx in 0..p.pow(j as u32) {
                let digits: Vec<u32> = (0..j).map(|i| ((idx / p.pow(i as u32)) % p) as u32).collect();
                let y = Laurent::new(ex.f(), 0, digits, EXACT);
                let direct = nf.phi.eval(&ex.g, &EdgeRep::new(j, y.clone()).to_matrix());
                ok &= fourier_expansion_value(&table, j, &y).unwrap() == BigRational::from_integer(direct.into());
            }
        }
        c.check(format!("{}: Fourier expansion matches edge values for j <= 5", ex.name), ok);
        let j = ex.e.j_invariant();
        let t = tate_parameter_from_j(&j, 24).unwrap();
        let back = j_of_parameter(&t, 24).unwrap();
        let je = Laurent::from_rational(&j, 24);
        let v = je.valuation().unwrap();
        c.check(format!("{}: j(t_E) = j_E to 10 coefficients", ex.name), back.agrees_to(&je, v + 10));
    }
    c
}

fn consistency(examples: &[&Example]) -> Criterion {
    let mut c = Criterion::default();
    for ex in examples {
        let r = &ex.report;
        let norm: i64 = r.newform.petersson_norm.parse().unwrap();
        c.check(
            format!("{}: deg * mu = {} * {} vs <phi,phi> = {norm}", ex.name, r.degree, r.lattice.mu),
            r.degree * r.lattice.mu == norm,
        );
        c.check(format!("{}: conductor is n * inf", ex.name), verify_conductor(&ex.e, &ex.n).is_ok());
        for img in &r.cusp_images {
            let (k, b) = (img.order.order, r.torsion.bound);
            c.check(format!("{}: order {k} of {} divides {b}", ex.name, img.cusp), b % k == 0);
        }
        let inf = &ex.cusp("inf").value;
        c.check(format!("{}: Phi(inf) = {inf}", ex.name), inf.is_exact() && *inf == Laurent::one(ex.f()));
    }
    c
}

fn main() -> ExitCode {
    let e1 = Example::new("E1", 2, "a1=T;a6=T^2", "T^3", 5, 15);
    let e2 = Example::new("E2", 3, "a2=T^2+T;a4=T^2", "T^3-T^2", 2, 10);
    let both = [&e1, &e2];
    let mut all = true;
    all &= first_example(&e1).report(1, "first example", e1.elapsed);
    all &= second_example(&e2).report(2, "second example", e2.elapsed);
    let timed = |run: &dyn Fn() -> Criterion| {
        let start = Instant::now();
        let c = run();
        (c, start.elapsed())
    };
    let (c, t) = timed(&|| harmonic_algebra(&both));
    all &= c.report(3, "harmonic algebra", t);
    let (c, t) = timed(&|| theta_properties(&e1, &e2));
    all &= c.report(4, "theta functions", t);
    let (c, t) = timed(&|| oracles(&both));
    all &= c.report(5, "oracles", t);
    let (c, t) = timed(&|| consistency(&both));
    all &= c.report(6, "consistency", t);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
