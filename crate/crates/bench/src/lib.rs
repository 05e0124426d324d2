//! Fixtures shared by the benchmarks in `benches/`.

use soliton_core::domain::{scherk_quadrilateral, ScherkParams, ValidDomain};
use soliton_core::MetricModel;

/// The `R^3`, `c = 1` quadrilateral between reapers at heights 0 and ln 2
/// over `|x| < r`, A on the reapers and zero data on the sides.
pub fn scherk(r: f64) -> (MetricModel, ValidDomain) {
    let m = MetricModel::euclidean_r3(1.0);
    let d = scherk_quadrilateral(&m, &ScherkParams::new(0.0, 2f64.ln(), r, -r)).expect("valid parameters");
    let d = ValidDomain::new(&m, d).expect("admissible domain");
    (m, d)
}
