//! Shared fixtures for the benchmarks.

use superint_core::{build_system, ParamSet, PhasePoint, SystemDef, SystemId};

/// A system with generic parameters and `n` seeded domain points.
pub fn fixture(id: SystemId, kappa: f64, n: usize) -> (SystemDef, Vec<PhasePoint>) {
    let sys = build_system(id, &ParamSet::default().with_kappa(kappa)).expect("catalog system");
    let points = sys.sample(42, n).expect("domain sample");
    (sys, points)
}
