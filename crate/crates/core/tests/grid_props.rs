mod common;

use common::{complex_in, config};
use holodyn::algebra::Polynomial;
use holodyn::entire_maps::{strip_cell, strip_class, EntireFamily};
use holodyn::planes::{class, quadratic_parameter_cell, PolynomialEscape};
use proptest::prelude::*;

proptest! {
    #![proptest_config(config(1000, 0x6772_6431))]

    /// Julia sets of z^2 + c are symmetric under z -> -z.
    #[test]
    fn quadratic_julia_point_symmetry(param in complex_in(1.2), z in complex_in(2.0)) {
        let esc = PolynomialEscape::new(&Polynomial::quadratic(param)).unwrap();
        prop_assert_eq!(esc.cell(z, 200), esc.cell(-z, 200));
    }

    /// The Mandelbrot set and the tricorn are symmetric under conjugation.
    #[test]
    fn parameter_plane_mirror(param in complex_in(2.0), conjugate in any::<bool>()) {
        let a = quadratic_parameter_cell(param, 200, conjugate);
        let b = quadratic_parameter_cell(param.conj(), 200, conjugate);
        prop_assert_eq!(a.class, b.class);
        prop_assert_eq!(a.value, b.value);
    }

    /// Escape with a smaller budget persists, with the same count, under a larger one.
    #[test]
    fn dwell_monotone_in_budget(param in complex_in(1.5), z in complex_in(2.0)) {
        let esc = PolynomialEscape::new(&Polynomial::quadratic(param)).unwrap();
        let short = esc.cell(z, 50);
        let long = esc.cell(z, 400);
        if short.class == class::ESCAPED {
            prop_assert_eq!(short, long);
        }
    }

    /// Strip membership is nested in the number of iterates.
    #[test]
    fn strip_nesting(lambda in 0.4f64..3.0, re in -4.0f64..4.0, im in 0.0f64..std::f64::consts::PI) {
        let fam = EntireFamily::exp(lambda);
        let z = num_complex::Complex64::new(re, im);
        if strip_cell(&fam, z, 60).class == strip_class::IN {
            prop_assert_eq!(strip_cell(&fam, z, 30).class, strip_class::IN);
        }
        if strip_cell(&fam, z, 30).class == strip_class::LEFT {
            prop_assert_eq!(strip_cell(&fam, z, 60).class, strip_class::LEFT);
        }
    }
}
