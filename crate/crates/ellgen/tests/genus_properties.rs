use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ellgen::chern::{ell_hypersurface_projective, ell_projective_space, HypersurfaceSpec};
use ellgen::hypersurface::checks::elliptic_transform_check;
use ellgen::hypersurface::{ell_cy, fermat_pair, CYFamily};
use ellgen::jacobi::linalg::echelon;
use ellgen::jacobi::{basis, decompose, dim_weak_jacobi, hodge_slice};
use ellgen::lattice_sum::EnumerationPlan;
use ellgen::scalar::rint;
use ellgen::toric::{subdivide_simplicial, InsertionOrder};
use ellgen::toric_genus::cone_identity::cone_identity_check;
use ellgen::{Genus, Series};

const Q: i64 = 2;
/// Reaches q^1 past the window for every product below (d <= 8).
const Q_LAW: i64 = 12;

fn cy(n: usize, q: i64) -> Genus {
    ell_hypersurface_projective(HypersurfaceSpec::new(n, n as i64 + 1).unwrap(), q).unwrap()
}

/// Calabi-Yau factors: K3, quintic, sextic.
fn cy_blocks() -> &'static [Genus] {
    static B: OnceLock<Vec<Genus>> = OnceLock::new();
    B.get_or_init(|| (3..=5).map(|n| cy(n, Q)).collect())
}

/// K3 and quintic at the law order, plus P^1 and P^2.
fn law_blocks() -> &'static (Vec<Genus>, Vec<Genus>) {
    static B: OnceLock<(Vec<Genus>, Vec<Genus>)> = OnceLock::new();
    B.get_or_init(|| {
        let cys = (3..=4).map(|n| cy(n, Q_LAW)).collect();
        let ps = (1..=2).map(|n| ell_projective_space(n, Q_LAW).unwrap()).collect();
        (cys, ps)
    })
}

fn law_product() -> impl Strategy<Value = Genus> {
    prop::collection::vec(0usize..2, 1..=2).prop_map(|idx| {
        idx.iter().fold(Genus::point(Q_LAW), |acc, &i| acc.product(&law_blocks().0[i]))
    })
}

fn any_genus() -> impl Strategy<Value = Genus> {
    prop_oneof![
        (1usize..=3).prop_map(|n| ell_projective_space(n, Q).unwrap()),
        (2usize..=5, 1i64..=6).prop_map(|(n, k)| ell_hypersurface_projective(HypersurfaceSpec::new(n, k).unwrap(), Q).unwrap()),
    ]
}

fn cy_product() -> impl Strategy<Value = Genus> {
    prop::collection::vec(0usize..3, 1..=3).prop_map(|idx| {
        idx.iter().fold(Genus::point(Q), |acc, &i| acc.product(&cy_blocks()[i]))
    })
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn genus_invariants(g in any_genus()) {
        prop_assert!(g.all_coefficients_integral());
        let s = g.q0_slice();
        let rev: Vec<_> = s.iter().rev().cloned().collect();
        prop_assert_eq!(&s, &rev);
        // Euler number from the q^0 slice alone
        let from_slice = s.iter().fold(rint(0), |acc, c| acc + c);
        prop_assert_eq!(g.euler_number().unwrap(), from_slice);
    }

    #[test]
    fn hodge_slice_is_multiplicative(a in any_genus(), b in any_genus()) {
        let ha = hodge_slice(&a).unwrap();
        let hb = hodge_slice(&b).unwrap();
        let hab = hodge_slice(&a.product(&b)).unwrap();
        prop_assert_eq!(hab.chi, convolve(&ha.chi, &hb.chi));
    }

    #[test]
    fn cy_products_decompose(g in cy_product()) {
        let dec = decompose(&g).unwrap();
        prop_assert_eq!(dec.verified_to_q, Q);
    }

    #[test]
    fn cy_products_obey_the_law(g in law_product()) {
        let r = elliptic_transform_check(&g).unwrap();
        prop_assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn projective_factor_breaks_the_law(g in law_product(), n in 0usize..2) {
        let p = g.product(&law_blocks().1[n]);
        let r = elliptic_transform_check(&p).unwrap();
        prop_assert!(!r.passed(), "{}", r.to_text());
    }

    #[test]
    fn decompose_recovers_coefficients(d in prop::sample::select(vec![2usize, 3, 4, 5, 6]), seed in prop::collection::vec(-6i64..=6, 3)) {
        let b = basis(d, 3).unwrap();
        let coeffs: Vec<BigRational> = (0..b.len()).map(|i| rint(seed[i % seed.len()] + i as i64)).collect();
        let mut body = Series::zero(6);
        for (c, e) in coeffs.iter().zip(b.iter()) {
            body = body.add(&e.expansion.scale(c));
        }
        let g = Genus { d, body, label: "combination".into() };
        let dec = decompose(&g).unwrap();
        prop_assert_eq!(dec.coefficients, coeffs);
    }

    #[test]
    fn kernel_vectors(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 5), 1..5)) {
        let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let e = echelon(m.clone(), 5);
        let k = e.kernel();
        prop_assert_eq!(e.rank() + k.len(), 5);
        for v in &k {
            for r in &m {
                let dot: BigInt = r.iter().zip(v).map(|(a, b)| a * b).sum();
                prop_assert_eq!(dot, BigInt::from(0));
            }
        }
    }

    #[test]
    fn cone_identity_small(order in 1i64..=4, w in 0i64..=4) {
        let r = cone_identity_check(order, (-w, w)).unwrap();
        prop_assert!(r.passed(), "{}", r.to_text());
    }
}

#[test]
fn dimension_formula_matches_basis() {
    for k in 0..=10u32 {
        if k == 0 {
            assert_eq!(dim_weak_jacobi(0), 1);
            continue;
        }
        assert_eq!(basis(2 * k as usize, 0).unwrap().len(), dim_weak_jacobi(k), "k = {}", k);
    }
}

#[test]
fn polar_duality_is_an_involution() {
    for n in 2..=4 {
        let p = fermat_pair(n).unwrap();
        assert_eq!(p.mirror().mirror(), p);
    }
}

#[test]
fn genus_is_independent_of_the_subdivision() {
    let mut fam = CYFamily::new(fermat_pair(3).unwrap(), EnumerationPlan::new(3), "K3").unwrap();
    let a = ell_cy(&fam).unwrap();
    fam.order = InsertionOrder::ReverseLex;
    let b = ell_cy(&fam).unwrap();
    assert_eq!(a.body, b.body);
    // the mirror side has a nontrivial subdivision
    let mut m = CYFamily::new(fermat_pair(3).unwrap().mirror(), EnumerationPlan::new(3), "mirror K3").unwrap();
    let fa = subdivide_simplicial(&m.pair, InsertionOrder::Lex).unwrap();
    let fb = subdivide_simplicial(&m.pair, InsertionOrder::ReverseLex).unwrap();
    let ga = ell_cy(&m).unwrap();
    m.order = InsertionOrder::ReverseLex;
    let gb = ell_cy(&m).unwrap();
    assert_eq!(ga.body, gb.body);
    assert_eq!(fa.rays.len(), fb.rays.len());
}
