use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use seesaw_core::metaplectic::MetaplecticElement;
use seesaw_core::seesaw::{pair_theta_residual, sep_theta_residual, SplitSetup};
use seesaw_core::theta::{modularity_defect, siegel_theta};
use seesaw_core::{GrassmannPoint, HomogeneousPolynomial, Lattice, Sublattice, VectorPair};

fn a2() -> Lattice {
    Lattice::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap()
}

fn rat() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=6).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn tau() -> impl Strategy<Value = Complex64> {
    (-0.5f64..0.5, 0.8f64..1.5).prop_map(|(x, y)| Complex64::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn shifted_a2_theta_is_modular(a in proptest::collection::vec(rat(), 2), b in proptest::collection::vec(rat(), 2), t in tau()) {
        let l = a2();
        let v = GrassmannPoint::definite(&l).unwrap();
        let p = HomogeneousPolynomial::one(2, 0);
        let pair = VectorPair::new(a, b).unwrap();
        let theta = |s: Complex64, q: &VectorPair| siegel_theta(&l, s, &v, &p, q, 18.0);
        for g in [MetaplecticElement::t(), MetaplecticElement::s()] {
            let d = modularity_defect(theta, &g, t, &pair, 2).unwrap();
            prop_assert!(d.defect < 1e-8 + d.tail, "defect {} tail {}", d.defect, d.tail);
        }
    }

    #[test]
    fn a1a1_split_identities(a in proptest::collection::vec(rat(), 2), b in proptest::collection::vec(rat(), 2), t in tau()) {
        let l = Lattice::from_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        let m = Sublattice::from_cols(&l, &[vec![1, 0]]).unwrap();
        let one = HomogeneousPolynomial::one(1, 0);
        let s = SplitSetup::definite(&m, &one, &one).unwrap();
        let pair = VectorPair::new(a, b).unwrap();
        let sep = sep_theta_residual(&s, t, &pair, 16.0).unwrap();
        let pt = pair_theta_residual(&s, t, &pair, 16.0).unwrap();
        prop_assert!(sep.passes(1e-9), "{sep:?}");
        prop_assert!(pt.passes(1e-9), "{pt:?}");
    }
}

#[test]
fn e8_theta_constant_term_and_first_shell() {
    let e8 = Lattice::from_rows(&[
        vec![2, -1, 0, 0, 0, 0, 0, 0],
        vec![-1, 2, -1, 0, 0, 0, 0, 0],
        vec![0, -1, 2, -1, 0, 0, 0, -1],
        vec![0, 0, -1, 2, -1, 0, 0, 0],
        vec![0, 0, 0, -1, 2, -1, 0, 0],
        vec![0, 0, 0, 0, -1, 2, -1, 0],
        vec![0, 0, 0, 0, 0, -1, 2, 0],
        vec![0, 0, -1, 0, 0, 0, 0, 2],
    ])
    .unwrap();
    assert!(e8.is_unimodular());
    let v = GrassmannPoint::definite(&e8).unwrap();
    let p = HomogeneousPolynomial::one(8, 0);
    // At τ = iy the series is 1 + 240 e^{-2πy} + 2160 e^{-4πy} + …
    let y = 2.0;
    let th = siegel_theta(&e8, Complex64::new(0.0, y), &v, &p, &VectorPair::zero(8), 3.0).unwrap();
    let r = (-2.0 * std::f64::consts::PI * y).exp();
    let want = 1.0 + 240.0 * r + 2160.0 * r * r + 6720.0 * r * r * r;
    let got = th.value.scalar().unwrap();
    assert!((got.re - want).abs() < 1e-12 + th.tail, "{got} vs {want}");
    assert!(got.im.abs() < 1e-12);
}
