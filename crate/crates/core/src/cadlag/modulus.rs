use std::collections::VecDeque;

use super::{StepPath, TIME_RTOL};

#[inline]
fn gap_below(gap: f64, delta: f64) -> bool {
    gap < delta * (1.0 - TIME_RTOL)
}

#[inline]
fn gap_within(gap: f64, delta: f64) -> bool {
    gap <= delta * (1.0 + TIME_RTOL)
}

/// `sup` over `t1 ≤ t2 ≤ t3`, `t3 − t1 ≤ delta` of the distance from
/// `x(t2)` to the segment `[x(t1), x(t3)]`.
///
/// Level `p` is held on `[τ_p, τ_{p+1})`. Levels `i < k` can be the outer
/// pair exactly when `τ_k − τ_{i+1} < delta`, so for each `i` the scan runs
/// over `k` with running extremes of the levels strictly between.
pub fn m1_modulus(x: &StepPath, delta: f64) -> f64 {
    let levels = x.levels();
    let times = x.jump_times();
    let n = times.len();
    let mut best = 0.0f64;
    for i in 0..n.saturating_sub(1) {
        let start = times[i];
        let (mut mid_max, mut mid_min) = (f64::NEG_INFINITY, f64::INFINITY);
        for k in i + 2..=n {
            if !gap_below(times[k - 1] - start, delta) {
                break;
            }
            let mid = levels[k - 1];
            mid_max = mid_max.max(mid);
            mid_min = mid_min.min(mid);
            let (a, b) = (levels[i], levels[k]);
            let d = (mid_max - a.max(b)).max(a.min(b) - mid_min);
            best = best.max(d);
        }
    }
    best
}

/// Largest `min(|size_i|, |size_j|)` over pairs of jumps at most `window` apart.
pub fn split_jump_statistic(x: &StepPath, window: f64) -> f64 {
    let times = x.jump_times();
    let sizes = x.jump_sizes();
    let mut best = 0.0f64;
    // Indices in the window, magnitudes decreasing from the front.
    let mut deque: VecDeque<usize> = VecDeque::new();
    for j in 0..times.len() {
        while let Some(&i) = deque.front() {
            if gap_within(times[j] - times[i], window) {
                break;
            }
            deque.pop_front();
        }
        let mag = sizes[j].abs();
        if let Some(&i) = deque.front() {
            best = best.max(mag.min(sizes[i].abs()));
        }
        while let Some(&i) = deque.back() {
            if sizes[i].abs() > mag {
                break;
            }
            deque.pop_back();
        }
        deque.push_back(j);
    }
    best
}

/// Billingsley's `w'` modulus: the least achievable maximum oscillation over
/// cells `[t_{i−1}, t_i)` of a partition of `[0, T]` whose cells are all
/// longer than `delta`. A jump at `T` lies in no cell.
///
/// The answer is one of the finitely many level-range oscillations, found
/// by bisection over the bit patterns of nonnegative floats with an exact
/// `O(N)` feasibility test.
pub fn j1_modulus(x: &StepPath, delta: f64) -> f64 {
    let levels = x.levels();
    if levels.len() == 1 {
        return 0.0;
    }
    let (vmin, vmax) = levels
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let total = vmax - vmin;
    if w_prime_feasible(x, delta, 0.0) {
        return 0.0;
    }
    if !w_prime_feasible(x, delta, total) {
        return total;
    }
    let (mut lo, mut hi) = (0u64, total.to_bits());
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if w_prime_feasible(x, delta, f64::from_bits(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    f64::from_bits(hi)
}

/// Whether some partition with cells longer than `delta` keeps every cell's
/// oscillation at most `eta`.
///
/// Sweeps the set `R` of admissible cut points. A cut `c` whose left limit
/// lies in level `q` (so `c ∈ (τ_q, τ_{q+1}]`) is admissible iff some
/// admissible `a < c − delta` starts a cell whose levels `lo(q)..=q` have
/// oscillation `≤ eta`; it suffices to test the smallest admissible point
/// at or after `τ_{lo(q)}`. Admissible cuts within each level stretch form
/// an interval `(start_q, τ_{q+1}]`.
fn w_prime_feasible(x: &StepPath, delta: f64, eta: f64) -> bool {
    let levels = x.levels();
    let jumps = x.jump_times();
    let horizon = x.horizon();
    let n = jumps.len();
    let tau = |q: usize| if q == 0 { 0.0 } else if q <= n { jumps[q - 1] } else { horizon };
    let reach = delta * (1.0 + TIME_RTOL);

    // starts[q]: open left end of the admissible cuts in (τ_q, τ_{q+1}].
    let mut starts: Vec<Option<f64>> = vec![None; n + 1];
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut lo = 0usize;
    let mut ptr = 0usize;
    for q in 0..=n {
        while maxq.back().is_some_and(|&b| levels[b] <= levels[q]) {
            maxq.pop_back();
        }
        maxq.push_back(q);
        while minq.back().is_some_and(|&b| levels[b] >= levels[q]) {
            minq.pop_back();
        }
        minq.push_back(q);
        while levels[*maxq.front().unwrap()] - levels[*minq.front().unwrap()] > eta {
            lo += 1;
            if *maxq.front().unwrap() < lo {
                maxq.pop_front();
            }
            if *minq.front().unwrap() < lo {
                minq.pop_front();
            }
        }
        let (left, right) = (tau(q), tau(q + 1));
        if right <= left {
            continue;
        }
        let earliest = if lo == 0 {
            Some(0.0)
        } else {
            ptr = ptr.max(lo - 1);
            while ptr < q && starts[ptr].is_none() {
                ptr += 1;
            }
            if ptr >= q {
                None
            } else if ptr == lo - 1 {
                Some(tau(lo))
            } else {
                starts[ptr]
            }
        };
        if let Some(m) = earliest {
            let start = left.max(m + reach);
            if start < right {
                starts[q] = Some(start);
            }
        }
    }
    let last = if tau(n) < horizon { n } else { n - 1 };
    starts[last].is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(jumps: &[(f64, f64)]) -> StepPath {
        StepPath::new(1.0, 0.0, jumps.to_vec()).unwrap()
    }

    #[test]
    fn m1_modulus_examples() {
        let d = 0.01;
        assert_eq!(m1_modulus(&path(&[(0.5, 1.0), (0.5 + d / 2.0, -1.0)]), d), 1.0);
        assert_eq!(m1_modulus(&path(&[(0.5, 0.5), (0.5 + d / 2.0, 0.5)]), d), 0.0);
        assert_eq!(m1_modulus(&path(&[(0.5, 1.0), (0.5 + 2.0 * d, -1.0)]), d), 0.0);
        assert_eq!(m1_modulus(&StepPath::constant(1.0, 0.0).unwrap(), d), 0.0);
    }

    #[test]
    fn split_statistic_examples() {
        assert_eq!(split_jump_statistic(&path(&[(0.5, 0.8)]), 0.1), 0.0);
        assert_eq!(split_jump_statistic(&path(&[(0.5, 0.8), (0.55, -0.6)]), 0.1), 0.6);
        assert_eq!(split_jump_statistic(&path(&[(0.5, 0.8), (0.7, -0.6)]), 0.1), 0.0);
        let p = path(&[(0.1, 0.3), (0.15, 5.0), (0.2, 0.4), (0.9, 7.0)]);
        assert_eq!(split_jump_statistic(&p, 0.06), 0.4);
    }

    #[test]
    fn j1_modulus_examples() {
        assert_eq!(j1_modulus(&StepPath::constant(1.0, 0.0).unwrap(), 0.1), 0.0);
        for d in [0.01, 0.1, 0.3, 0.49] {
            assert_eq!(j1_modulus(&path(&[(0.5, 1.0)]), d), 0.0);
        }
        // Both neighbourhoods of the single jump must be longer than delta.
        assert_eq!(j1_modulus(&path(&[(0.5, 1.0)]), 0.6), 1.0);
        assert_eq!(j1_modulus(&path(&[(0.5, 0.5), (0.505, 0.5)]), 0.01), 0.5);
        assert_eq!(j1_modulus(&path(&[(0.5, 0.5), (0.7, 0.5)]), 0.01), 0.0);
        // A jump at the horizon lies in no cell.
        assert_eq!(j1_modulus(&path(&[(1.0, 3.0)]), 0.5), 0.0);
    }
}
