use super::{same_horizon, StepPath};
use crate::error::Result;

/// `sup_t |x(t) − y(t)|`.
pub fn uniform_distance(x: &StepPath, y: &StepPath) -> Result<f64> {
    same_horizon(x, y)?;
    let (xt, yt) = (x.jump_times(), y.jump_times());
    let (xl, yl) = (x.levels(), y.levels());
    let (mut i, mut j) = (0, 0);
    let mut d = (xl[0] - yl[0]).abs();
    while i < xt.len() || j < yt.len() {
        let t = match (xt.get(i), yt.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        while i < xt.len() && xt[i] <= t {
            i += 1;
        }
        while j < yt.len() && yt[j] <= t {
            j += 1;
        }
        d = d.max((xl[i] - yl[j]).abs());
    }
    Ok(d)
}

/// Exact Skorohod J1 distance between two step paths.
///
/// Optimal time changes can be taken piecewise linear through jump
/// locations, so the distance is a bottleneck shortest path over monotone
/// lattice paths: state `(i, j)` means the first `i` jumps of `x` and the
/// first `j` jumps of `y` have been passed. A step either matches a jump of
/// `x` with one of `y` (time cost `|t − s|`), lets an `x` jump pass alone,
/// or lets a `y` jump pass alone, in which case it is mapped into the current
/// gap between `x` jumps (time cost = distance from `s` to that gap). Each
/// visited state costs `|X_i − Y_j|`. Jumps at `T` cannot be moved, so a jump
/// at `T` in both paths must be matched together. `O(NM)` time, `O(M)` memory.
pub fn j1_distance(x: &StepPath, y: &StepPath) -> Result<f64> {
    same_horizon(x, y)?;
    let horizon = x.horizon();
    let (t, s) = (x.jump_times(), y.jump_times());
    let (xl, yl) = (x.levels(), y.levels());
    let (n, m) = (t.len(), s.len());
    let x_jump_at_end = t.last() == Some(&horizon);
    let y_jump_at_end = s.last() == Some(&horizon);

    let gap = |i: usize| -> (f64, f64) {
        let lo = if i == 0 { 0.0 } else { t[i - 1] };
        let hi = if i == n { horizon } else { t[i] };
        (lo, hi)
    };
    // Cost of letting y jump `j` pass alone while in x-gap `i`.
    let y_alone = |i: usize, j: usize| -> Option<f64> {
        let sj = s[j];
        if sj == horizon {
            return (i == n && !x_jump_at_end).then_some(0.0);
        }
        if i == n && x_jump_at_end {
            return None;
        }
        let (lo, hi) = gap(i);
        Some(if sj < lo { lo - sj } else if sj > hi { sj - hi } else { 0.0 })
    };
    let x_alone_ok = |i: usize| !(t[i] == horizon && y_jump_at_end);
    let match_ok = |i: usize, j: usize| (t[i] == horizon) == (s[j] == horizon);

    let mut prev = vec![f64::INFINITY; m + 1];
    let mut cur = vec![f64::INFINITY; m + 1];
    for i in 0..=n {
        for j in 0..=m {
            let node = (xl[i] - yl[j]).abs();
            let mut best = if i == 0 && j == 0 { 0.0 } else { f64::INFINITY };
            if i > 0 && x_alone_ok(i - 1) {
                best = best.min(prev[j]);
            }
            if j > 0 {
                if let Some(c) = y_alone(i, j - 1) {
                    best = best.min(cur[j - 1].max(c));
                }
            }
            if i > 0 && j > 0 && match_ok(i - 1, j - 1) {
                best = best.min(prev[j - 1].max((t[i - 1] - s[j - 1]).abs()));
            }
            cur[j] = best.max(node);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[m])
}
