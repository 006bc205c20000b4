use proptest::prelude::*;
use superint_core::poisson::{jacobi_residual, poisson_bracket, scaled_bracket, JACOBI_STEP};
use superint_core::*;

const IDS: [SystemId; 9] = [
    SystemId::DefA,
    SystemId::DefB,
    SystemId::DefC,
    SystemId::DefD,
    SystemId::CurvedOscH1,
    SystemId::CurvedKeplerK1,
    SystemId::CurvedKeplerK2,
    SystemId::TtwDef,
    SystemId::PwDef,
];

/// Catalog system with randomized couplings.
fn system(which: usize, kappa: f64, k: [f64; 3]) -> SystemDef {
    let mut p = ParamSet::default().with_kappa(kappa);
    p.k1 = k[0] - 1.0;
    p.k2 = k[1];
    p.k3 = k[2];
    p.ka = k[1];
    p.kb = k[2];
    build_system(IDS[which % IDS.len()], &p).unwrap()
}

fn couplings() -> impl Strategy<Value = [f64; 3]> {
    [0.2f64..2.0, 0.2f64..2.0, 0.2f64..2.0]
}

fn point(sys: &SystemDef, seed: u64) -> PhasePoint {
    sys.sample(seed, 1).unwrap()[0]
}

/// Every integral and `H`, all pulled back to the point's chart.
fn observables(sys: &SystemDef, chart: Chart) -> Vec<Observable> {
    let mut v: Vec<Observable> = sys.integrals.iter().map(|o| o.in_chart(chart)).collect();
    v.push(sys.hamiltonian.in_chart(chart));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_gradient_matches_central_differences(which in 0usize..9, kappa in -0.5f64..0.5, k in couplings(), seed in any::<u64>()) {
        let sys = system(which, kappa, k);
        let pt = point(&sys, seed);
        let z = pt.as_array();
        let h = 1e-6;
        for obs in observables(&sys, pt.chart()) {
            let g = obs.gradient(&pt).unwrap();
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
            for k in 0..4 {
                let (mut up, mut dn) = (z, z);
                up[k] += h;
                dn[k] -= h;
                let fd = (obs.eval_raw(&up).unwrap() - obs.eval_raw(&dn).unwrap()) / (2.0 * h);
                prop_assert!((fd - g[k]).abs() <= 1e-6 * norm, "{} d{k}: {fd} vs {}", obs.name(), g[k]);
            }
        }
    }

    #[test]
    fn bracket_is_antisymmetric(which in 0usize..9, kappa in -0.5f64..0.5, k in couplings(), seed in any::<u64>()) {
        let sys = system(which, kappa, k);
        let pt = point(&sys, seed);
        let obs = observables(&sys, pt.chart());
        for f in &obs {
            for g in &obs {
                let a = poisson_bracket(f, g, &pt).unwrap();
                let b = poisson_bracket(g, f, &pt).unwrap();
                prop_assert_eq!(a, -b);
            }
        }
    }

    #[test]
    fn bracket_obeys_leibniz(which in 0usize..9, kappa in -0.5f64..0.5, k in couplings(), seed in any::<u64>()) {
        let sys = system(which, kappa, k);
        let pt = point(&sys, seed);
        let obs = observables(&sys, pt.chart());
        let n = obs.len();
        for i in 0..n {
            let (f, g, h) = (&obs[i], &obs[(i + 1) % n], &obs[(i + 2) % n]);
            let lhs = poisson_bracket(&f.mul(g), h, &pt).unwrap();
            let fv = f.evaluate(&pt).unwrap();
            let gv = g.evaluate(&pt).unwrap();
            let t1 = fv * poisson_bracket(g, h, &pt).unwrap();
            let t2 = gv * poisson_bracket(f, h, &pt).unwrap();
            let norm = |o: &Observable| o.gradient(&pt).unwrap().iter().map(|x| x * x).sum::<f64>().sqrt();
            let scale = (fv.abs() * norm(g) + gv.abs() * norm(f)) * norm(h);
            prop_assert!((lhs - t1 - t2).abs() <= 1e-12 * scale.max(1e-300), "{lhs:e} vs {:e}", t1 + t2);
        }
    }

    #[test]
    fn jacobi_identity_holds(which in 0usize..9, kappa in -0.5f64..0.5, k in couplings(), seed in any::<u64>()) {
        let sys = system(which, kappa, k);
        let pt = point(&sys, seed);
        let obs = observables(&sys, pt.chart());
        let n = obs.len();
        for i in 0..n {
            let (r, scale) = jacobi_residual(&obs[i], &obs[(i + 1) % n], &obs[(i + 2) % n], &pt, JACOBI_STEP).unwrap();
            prop_assert!(r.abs() <= 1e-9 * scale, "{} {}: {r:e} / {scale:e}", sys.id, obs[i].name());
        }
    }
}

#[test]
fn free_motion_on_generic_polar_background_keeps_j() {
    let zero = Univariate::new(|_| (0.0, 0.0));
    let sys = generic_polar_system(zero.clone(), zero, 0.3);
    let j = sys.integral("J").unwrap();
    for pt in sys.sample(7, 100).unwrap() {
        let (b, _) = scaled_bracket(j, &sys.hamiltonian, &pt).unwrap();
        assert!(b.abs() <= 1e-12, "{b:e}");
    }
}

#[test]
fn sampling_is_reproducible() {
    for id in SystemId::ALL {
        let sys = build_system(id, &ParamSet::default().with_kappa(0.3)).unwrap();
        assert_eq!(sys.sample(11, 50).unwrap(), sys.sample(11, 50).unwrap());
        assert_ne!(sys.sample(11, 5).unwrap(), sys.sample(12, 5).unwrap());
    }
}

#[test]
fn lifted_point_has_unit_seeds() {
    let x = Dual::seed(3.0, 0);
    let px = Dual::seed(5.0, 2);
    let f = px * x;
    assert_eq!(f.value, 15.0);
    assert_eq!(f.grad, [5.0, 0.0, 3.0, 0.0]);
    assert_eq!(Dual::constant(2.0).grad, [0.0; 4]);
}
