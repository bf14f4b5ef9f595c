mod common;

use common::config;
use holodyn::entire_maps::{singular_orbit_classify, EntireFamily, EntireKind, OrbitOutcome, Step};
use holodyn::Complex64;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = EntireKind> {
    prop::sample::select(EntireKind::ALL.to_vec())
}

fn wide() -> impl Strategy<Value = f64> {
    (any::<bool>(), -3.0f64..305.0)
        .prop_map(|(neg, e)| if neg { -(10f64.powf(e)) } else { 10f64.powf(e) })
}

fn lambda() -> impl Strategy<Value = Complex64> {
    (-5.0f64..5.0, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(e, a)| Complex64::from_polar(10f64.powf(e), a))
}

proptest! {
    #![proptest_config(config(10_000, 0x656e_7431))]

    /// No evaluation ever yields a non-finite number.
    #[test]
    fn evaluation_stays_finite(k in kind(), l in lambda(), re in wide(), im in wide()) {
        let fam = EntireFamily::new(k, l).unwrap();
        match fam.step(Complex64::new(re, im)) {
            Step::Finite(w) => prop_assert!(w.is_finite()),
            Step::Overflow { direction } => {
                prop_assert!(direction.is_finite());
                prop_assert!((direction.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    /// Re z beyond ln(1e300/|lambda|) + 1 forces overflow for lambda e^z.
    #[test]
    fn exponential_certificate_sound(l in lambda(), excess in 1.0f64..1e6, im in -1e6f64..1e6) {
        let fam = EntireFamily::new(EntireKind::Exp, l).unwrap();
        let z = Complex64::new(fam.escape_threshold() + excess, im);
        prop_assert!(fam.certified_escape(z));
        prop_assert!(fam.step(z).is_overflow());
    }

    /// The general certificate implies overflow for every kind.
    #[test]
    fn certificate_implies_overflow(k in kind(), l in lambda(), re in -800.0f64..800.0, im in -800.0f64..800.0) {
        let fam = EntireFamily::new(k, l).unwrap();
        let z = Complex64::new(re, im);
        if fam.certified_escape(z) {
            prop_assert!(fam.step(z).is_overflow());
        }
    }
}

/// Real parameters below 1/e have an attracting fixed point on the real line.
#[test]
fn attracting_branch_below_inverse_e() {
    let top = (-1.0f64).exp();
    for k in 1..=20 {
        let l = top * k as f64 / 21.0;
        let out = &singular_orbit_classify(&EntireFamily::exp(l), 5000).unwrap()[0].outcome;
        let OrbitOutcome::Attracted {
            period,
            cycle,
            multiplier_abs,
        } = out
        else {
            panic!("lambda {l}: {out:?}")
        };
        assert_eq!(*period, 1);
        // the fixed point x = l e^x has multiplier x
        assert!((cycle[0].re - l * cycle[0].re.exp()).abs() < 1e-12);
        assert!((multiplier_abs - cycle[0].re).abs() < 1e-9);
    }
}
