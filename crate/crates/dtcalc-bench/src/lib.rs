//! Shared fixtures for the benchmarks.

use dtcalc_core::measures::{pullback_measure, quiver_measure, StabilityMeasure};
use dtcalc_core::stackmodel::quiver_stack;
use dtcalc_core::{Rat, StackModel};

/// The three-vertex A2-path quiver and its trivial-slope measure.
pub fn a2_path() -> (StackModel, StabilityMeasure) {
    let edges = [(0, 1), (1, 2)];
    let x = StackModel::Torus(quiver_stack(3, &edges).unwrap());
    let mu = quiver_measure(3, &edges, &vec![Rat::default(); 3]).unwrap();
    let mu = pullback_measure(&mu, &x).unwrap();
    (x, mu)
}
