use proptest::prelude::*;

use hardyz::laurent::{series_ops, SeriesOp};
use hardyz::{chi, stieltjes_table, ComplexValue, LaurentSeries, PrecisionConfig, ZetaEngine};

fn engine() -> ZetaEngine {
    ZetaEngine::new(PrecisionConfig::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn functional_equation(sigma in -0.8f64..1.8, t in 2.0f64..300.0) {
        let eng = engine();
        let s = ComplexValue::new(sigma, t);
        let lhs = eng.zeta(s, 0).unwrap().value;
        let rhs = chi(s).unwrap() * eng.zeta(1.0 - s, 0).unwrap().value;
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()), "{lhs} vs {rhs}");
    }

    #[test]
    fn conjugate_symmetry(sigma in -1.0f64..3.0, t in 0.5f64..200.0) {
        let eng = engine();
        let a = eng.zeta(ComplexValue::new(sigma, t), 1).unwrap().value;
        let b = eng.zeta(ComplexValue::new(sigma, -t), 1).unwrap().value;
        prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn z_prime_matches_modulus_of_z1(t in 10.0f64..500.0) {
        let eng = engine();
        let h = eng.hardy(t).unwrap();
        let z1 = eng.z1(ComplexValue::new(0.5, t)).unwrap().value;
        prop_assert!((h.z_prime.abs() - z1.norm()).abs() <= 1e-9 * (1.0 + z1.norm()));
    }

    #[test]
    fn series_product_then_quotient(c in prop::collection::vec(-2.0f64..2.0, 6), lead in 0.5f64..2.0) {
        let mut coeffs = vec![lead];
        coeffs.extend(c);
        let a = LaurentSeries::new(0, coeffs);
        let z = hardyz::laurent::series_zeta(6, stieltjes_table()).unwrap();
        let prod = series_ops(&z, &a, SeriesOp::Mul).unwrap();
        let back = series_ops(&prod, &a, SeriesOp::Div).unwrap();
        for p in -1..=4 {
            let (x, y) = (back.coeff(p).unwrap(), z.coeff(p).unwrap());
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + y.abs()), "u^{p}: {x} vs {y}");
        }
    }
}
