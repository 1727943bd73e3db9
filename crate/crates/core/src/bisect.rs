/// Upper bound on halvings; enough to exhaust `f64` precision from any bracket.
pub const MAX_ITERATIONS: usize = 200;

/// Shrinks `[lo, hi]` around the switch point of a monotone predicate.
///
/// `below(x)` must be true for `x` left of the sought point and false right
/// of it. Iteration stops once the midpoint no longer separates the
/// endpoints (the bracket is a few ulps wide) or after [`MAX_ITERATIONS`].
/// Wide brackets with `lo > 0` are split geometrically so that many decades
/// collapse quickly.
pub fn bisect(mut lo: f64, mut hi: f64, mut below: impl FnMut(f64) -> bool) -> (f64, f64) {
    for _ in 0..MAX_ITERATIONS {
        let mid = if lo > 0.0 && hi > 4.0 * lo {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
