mod common;

use common::{c, complex_in, config};
use holodyn::algebra::Polynomial;
use holodyn::newton_lab::{basin_grid, newton_flow, FlowField, FlowTerminal, NewtonMap};
use holodyn::planes::{class, Window};
use holodyn::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(config(1000, 0x6e65_7731))]

    /// N'(root) = 1 - h/m over the table m in {1, 2, 3}, h in {0.25, 0.5, 1, 1.5}.
    #[test]
    fn root_multiplier_table(
        root in complex_in(1.0),
        others in prop::collection::vec(complex_in(1.0), 1..=2),
        m in 1usize..=3,
        h_index in 0usize..4,
    ) {
        let h = [0.25, 0.5, 1.0, 1.5][h_index];
        let mut all = vec![root; m];
        all.extend(&others);
        let sep = all.iter().enumerate()
            .flat_map(|(i, a)| all[i + 1..].iter().filter(|b| **b != *a).map(move |b| (a - b).norm()))
            .fold(f64::INFINITY, f64::min);
        prop_assume!(sep > 0.2);
        let map = NewtonMap::new(Polynomial::from_roots(&all), h).unwrap();
        let k = map.nearest_root(root, 1e-6).unwrap();
        prop_assert_eq!(map.roots()[k].multiplicity, m);
        let measured = map.measured_root_multiplier(k).unwrap();
        prop_assert!((measured - c(1.0 - h / m as f64, 0.0)).norm() < 1e-6, "{measured}");
        prop_assert!((map.root_multiplier(k) - (1.0 - h / m as f64)).abs() < 1e-15);
    }

    /// Raw flow: f(z(t)) = e^{-t} f(z0); both fields keep arg f fixed.
    #[test]
    fn flow_invariants(r in 0.2f64..2.0, theta in 0.0f64..std::f64::consts::TAU) {
        let f = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        let z0 = Complex64::from_polar(r, theta);
        let f0 = f.eval(z0);
        prop_assume!(f0.norm() > 1e-3);
        let Ok(raw) = newton_flow(&f, z0, 1.0, FlowField::Raw) else { return Ok(()) };
        for s in &raw.samples {
            let want = f0 * (-s.t).exp();
            prop_assert!((f.eval(s.z) - want).norm() <= 1e-6 * want.norm());
        }
        let Ok(desing) = newton_flow(&f, z0, 1.0, FlowField::Desingularized) else { return Ok(()) };
        for tr in [&raw, &desing] {
            let mods: Vec<f64> = tr.samples.iter().map(|s| f.eval(s.z).norm()).collect();
            prop_assert!(mods.windows(2).all(|w| w[1] < w[0] || w[1] < 1e-12));
            for s in &tr.samples {
                let v = f.eval(s.z);
                if v.norm() > 1e-8 {
                    prop_assert!((v / f0).arg().abs() <= 1e-6 * s.t.max(1e-3), "drift at t = {}", s.t);
                }
            }
            prop_assert!(tr.terminal != FlowTerminal::ReachedSingularity || tr.last().z.norm() < 1e-3);
        }
    }

    /// Basin classes commute with rotation by 2 pi / d for z^d - 1.
    #[test]
    fn basin_equivariance(z in complex_in(2.0), d in 2usize..=4) {
        let mut coeffs = vec![0.0; d + 1];
        coeffs[0] = -1.0;
        coeffs[d] = 1.0;
        let f = Polynomial::from_real(&coeffs);
        let rot = Complex64::from_polar(1.0, std::f64::consts::TAU / d as f64);
        let cell_at = |w: Complex64| {
            let win = Window::new(w, 1e-9, 1e-9, 1, 1).unwrap();
            basin_grid(&f, 1.0, &win, 200).unwrap().cells[0]
        };
        let (a, b) = (cell_at(z), cell_at(z * rot));
        prop_assume!(a.class != class::UNDECIDED && b.class != class::UNDECIDED);
        let map = NewtonMap::new(f.clone(), 1.0).unwrap();
        let ra = map.roots()[a.aux as usize].value;
        let rb = map.roots()[b.aux as usize].value;
        prop_assert!((ra * rot - rb).norm() < 1e-9);
    }
}
