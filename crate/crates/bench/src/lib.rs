//! Shared inputs for the criterion benchmarks.

/// Values spanning growth, dissolution, the critical point and beyond.
pub const EPSILONS: [f64; 7] = [-0.5, -0.01, 0.01, 0.1, 1.0, 2.0, 5.0];

/// The dissolution-time sweep of the reference table.
pub const TABLE_EPSILONS: [f64; 9] = [1.0, 0.5, 0.1, 0.05, 0.01, 0.005, 0.001, 0.0005, 0.0001];

/// A query time inside the solved span of every entry in [`EPSILONS`].
pub fn probe_time(eps: f64) -> f64 {
    if eps > 0.0 {
        0.5 * qsdissolve::time_to_dissolution(eps).unwrap()
    } else {
        10.0
    }
}
