/// Hausdorff distance between two finite subsets of the real line.
///
/// Both inputs must be sorted ascending. Returns `0` when both are empty and
/// `+∞` when exactly one is.
pub fn hausdorff_distance(a: &[f64], b: &[f64]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    directed(a, b).max(directed(b, a))
}

/// `sup_{x ∈ from} dist(x, to)` with `to` sorted.
fn directed(from: &[f64], to: &[f64]) -> f64 {
    from.iter()
        .map(|&x| {
            let i = to.partition_point(|&t| t < x);
            let right = to.get(i).map_or(f64::INFINITY, |&t| t - x);
            let left = if i > 0 { x - to[i - 1] } else { f64::INFINITY };
            left.min(right)
        })
        .fold(0.0, f64::max)
}
