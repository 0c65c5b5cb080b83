use modpar_core::bt_graph::QuotientGraph;
use modpar_core::cochain::HarmonicCochain;
use modpar_core::curve::WeierstrassCurve;
use modpar_core::ff_base::{Poly, PrimeField};
use modpar_core::matrix::Mat2;
use modpar_core::modparam::{
    compute_parametrization, generator_basis, j_image, j_inverse, phi_alpha_direct, ParamOptions,
};
use proptest::prelude::*;

fn graph(p: u32, n: &str) -> QuotientGraph {
    let f = PrimeField::new(p).unwrap();
    QuotientGraph::build(&Poly::parse(f, n).unwrap()).unwrap()
}

const LEVELS: [(u32, &str); 4] = [(2, "T^3"), (2, "T^4"), (3, "T^3-T^2"), (3, "T^3")];

fn word_matrix(gens: &[Mat2], exps: &[i64]) -> Mat2 {
    let f = gens[0].field();
    let mut m = Mat2::identity(f);
    for (g, &k) in gens.iter().zip(exps) {
        let step = if k >= 0 { g.clone() } else { g.inverse().unwrap() };
        for _ in 0..k.unsigned_abs() {
            m = m.mul(&step);
        }
    }
    m
}

#[test]
fn generators_map_to_their_cycles() {
    for (p, n) in LEVELS {
        let g = graph(p, n);
        let basis = generator_basis(&g);
        assert_eq!(basis.len(), g.genus, "level {n}");
        for (alpha, cyc) in &basis {
            assert!(alpha.in_gamma0(g.p1().modulus()));
            assert_eq!(&j_image(&g, alpha).unwrap(), cyc, "level {n}, generator {alpha}");
        }
    }
}

#[test]
fn direct_count_matches_cycles_on_every_edge() {
    for (p, n) in LEVELS {
        let g = graph(p, n);
        let v = Mat2::identity(g.field());
        for (alpha, cyc) in generator_basis(&g) {
            for (i, e) in g.edges.iter().enumerate() {
                assert_eq!(phi_alpha_direct(&g, &alpha, &e.matrix, &v).unwrap(), cyc.values[i], "level {n}");
            }
        }
    }
}

#[test]
fn genus_zero_has_no_generators() {
    let g = graph(2, "T^2");
    assert_eq!(g.genus, 0);
    assert!(generator_basis(&g).is_empty());
}

#[test]
fn j_inverse_rejects_non_integral_cochains() {
    let g = graph(3, "T^3-T^2");
    let mut phi = HarmonicCochain::zero(g.edges.len());
    let e = g.identifications[0].edge;
    phi.values[e] = 1;
    assert!(j_inverse(&g, &phi).is_err());
}

#[test]
fn first_example_end_to_end() {
    let f = PrimeField::new(2).unwrap();
    let e = WeierstrassCurve::parse(f, "a1=T;a6=T^2").unwrap();
    let n = Poly::parse(f, "T^3").unwrap();
    let opts = ParamOptions { eps_exp: 5, torsion_depth: 12, ..Default::default() };
    let r = compute_parametrization(&e, &n, &opts, None).unwrap();
    assert_eq!((r.genus, r.degree, r.lattice.mu), (1, 1, 4));
    assert!(r.t_matches_tate_parameter);
    let order = |c: &str| r.image(c).unwrap().order.order;
    assert_eq!((order("inf"), order("0"), order("1/T"), order("1/T^2")), (1, 4, 4, 2));
}

#[test]
fn wrong_level_is_rejected() {
    let f = PrimeField::new(2).unwrap();
    let e = WeierstrassCurve::parse(f, "a1=T;a6=T^2").unwrap();
    let n = Poly::parse(f, "T^4").unwrap();
    assert!(compute_parametrization(&e, &n, &ParamOptions::default(), None).is_err());
    let opts = ParamOptions { verify_conductor: false, ..Default::default() };
    assert!(compute_parametrization(&e, &n, &opts, None).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// j is a homomorphism and j_inverse undoes it.
    #[test]
    fn words_round_trip(which in 0usize..2, k in prop::collection::vec(-2i64..=2, 2)) {
        let (p, n) = [(3, "T^3-T^2"), (3, "T^3")][which];
        let g = graph(p, n);
        let basis = generator_basis(&g);
        let gens: Vec<Mat2> = basis.iter().map(|(m, _)| m.clone()).collect();
        let exps: Vec<i64> = k.iter().copied().cycle().take(gens.len()).collect();
        let mut phi = HarmonicCochain::zero(g.edges.len());
        for ((_, c), &x) in basis.iter().zip(&exps) {
            phi = phi.add(&c.scale(x));
        }
        prop_assert_eq!(&j_image(&g, &word_matrix(&gens, &exps)).unwrap(), &phi);
        prop_assert_eq!(j_inverse(&g, &phi).unwrap().exponents, exps);
    }
}
