mod common;

use common::{complex_in, config};
use holodyn::siegel::PowerSeries;
use holodyn::Complex64;
use proptest::prelude::*;

const ORDER: usize = 16;

fn series() -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(complex_in(1.0), ORDER + 1).prop_map(PowerSeries::new)
}

fn close(a: &PowerSeries, b: &PowerSeries, tol: f64) -> bool {
    let n = a.order().min(b.order());
    (0..=n).all(|k| {
        (a.coefficient(k) - b.coefficient(k)).norm() <= tol * (1.0 + b.coefficient(k).norm())
    })
}

proptest! {
    #![proptest_config(config(1000, 0x7365_7231))]

    #[test]
    fn product_rule(f in series(), g in series()) {
        let lhs = (&f * &g).derivative();
        let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn reciprocal_inverts(f in series()) {
        prop_assume!(f.coefficient(0).norm() > 0.2);
        let inv = f.reciprocal().unwrap();
        let one = &f * &inv;
        prop_assert!((one.coefficient(0) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        for k in 1..=ORDER {
            prop_assert!(one.coefficient(k).norm() < 1e-9 * inv.max_modulus().max(1.0));
        }
    }

    #[test]
    fn integral_inverts_derivative(f in series()) {
        let back = f.derivative().integral();
        for k in 1..ORDER {
            prop_assert!((back.coefficient(k) - f.coefficient(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn compose_with_identity(f in series()) {
        let id = PowerSeries::variable(ORDER);
        prop_assert!(close(&f.compose(&id).unwrap(), &f, 1e-14));
    }
}
