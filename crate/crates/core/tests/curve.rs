use modpar_core::curve::{conductor, torsion_bound, Place, ReductionKind, WeierstrassCurve};
use modpar_core::ff_base::{Poly, PrimeField};
use modpar_core::par::Exec;

fn setup(p: u32, curve: &str, n: &str) -> (WeierstrassCurve, Poly) {
    let f = PrimeField::new(p).unwrap();
    (WeierstrassCurve::parse(f, curve).unwrap(), Poly::parse(f, n).unwrap())
}

#[test]
fn torsion_bound_first_example() {
    let (e, n) = setup(2, "a1=T;a6=T^2", "T^3");
    let t = torsion_bound(&e, &n, 15, Exec::Parallel, None).unwrap();
    assert_eq!(t.bound, 16);
    // the running gcd never increases
    assert!(t.by_degree.windows(2).all(|w| w[0].1 % w[1].1 == 0));
}

#[test]
fn torsion_bound_second_example() {
    let (e, n) = setup(3, "a2=T^2+T;a4=T^2", "T^3-T^2");
    let t = torsion_bound(&e, &n, 10, Exec::Parallel, None).unwrap();
    assert_eq!(t.bound, 8);
}

#[test]
fn conductors_match_the_levels() {
    for (p, c, n) in [(2, "a1=T;a6=T^2", "T^3"), (3, "a2=T^2+T;a4=T^2", "T^3-T^2")] {
        let (e, n) = setup(p, c, n);
        let local = conductor(&e).unwrap();
        let mut prod = Poly::one(e.field());
        for r in &local {
            match &r.place {
                Place::Finite(p) => prod = &prod * &p.pow(r.conductor_exponent as u64),
                Place::Infinity => {
                    assert_eq!(r.conductor_exponent, 1);
                    assert_eq!(r.kind, ReductionKind::SplitMultiplicative);
                }
            }
        }
        assert_eq!(prod, n);
    }
}
