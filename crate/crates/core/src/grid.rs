//! Sampling grids used by the diagnostics.

use alloc::vec::Vec;

use crate::model::CantorMap;

/// `count` evenly spaced points covering `[lo, hi]` (endpoints included).
pub fn uniform(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    hi
                } else {
                    lo + (hi - lo) * (i as f64) / ((count - 1) as f64)
                }
            })
            .collect(),
    }
}

/// `count` points of `[0, 1]` containing `0`, `1` and the gap endpoints `a`,
/// `b` of the Cantor map: the uniform grid with the nearest interior nodes
/// moved onto `a` and `b`.
pub fn base_grid(cantor: &CantorMap, count: usize) -> Vec<f64> {
    let mut ys = uniform(0.0, 1.0, count);
    if count < 4 {
        return ys;
    }
    for target in [cantor.a, cantor.b] {
        if ys.contains(&target) {
            continue;
        }
        let nearest = (1..count - 1)
            .filter(|&i| ys[i] != cantor.a && ys[i] != cantor.b)
            .min_by(|&i, &j| (ys[i] - target).abs().total_cmp(&(ys[j] - target).abs()));
        if let Some(i) = nearest {
            ys[i] = target;
        }
    }
    ys.sort_by(f64::total_cmp);
    ys
}

/// `count` cell midpoints of `[lo, hi]`.
pub fn midpoints(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / count as f64)
        .collect()
}
