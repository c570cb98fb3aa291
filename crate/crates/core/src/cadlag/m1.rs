//! Completed graphs and the M1 distance as a Fréchet distance between them.

use std::io::Write;

use super::{same_horizon, StepPath};
use crate::error::{invalid, Result};

/// Piecewise-linear curve in the `(time, value)` plane; equal consecutive
/// times encode vertical (jump) segments.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<(f64, f64)>,
}

impl Polyline {
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self> {
        if vertices.len() < 2 {
            return invalid("a polyline needs at least two vertices");
        }
        for w in vertices.windows(2) {
            if !(w[0].0 <= w[1].0) {
                return invalid("polyline times must be nondecreasing");
            }
            if w[0] == w[1] {
                return invalid("consecutive polyline vertices must differ");
            }
        }
        if vertices.iter().any(|v| !v.0.is_finite() || !v.1.is_finite()) {
            return invalid("polyline vertices must be finite");
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    /// `time,value` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "time,value")?;
        for (t, v) in &self.vertices {
            writeln!(w, "{t},{v}")?;
        }
        Ok(())
    }
}

/// Graph of the path with a vertical segment filling each jump.
pub fn completed_graph(path: &StepPath) -> Polyline {
    let levels = path.levels();
    let mut vertices = Vec::with_capacity(2 * path.num_jumps() + 2);
    vertices.push((0.0, path.origin()));
    for (i, &t) in path.jump_times().iter().enumerate() {
        vertices.push((t, levels[i]));
        vertices.push((t, levels[i + 1]));
    }
    let end = (path.horizon(), path.end_value());
    if vertices.last() != Some(&end) {
        vertices.push(end);
    }
    Polyline { vertices }
}

type Pt = (f64, f64);

#[inline]
fn box_dist(a: Pt, b: Pt) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// Closed parameter interval in `[0, 1]`; empty when `lo > hi`.
#[derive(Clone, Copy)]
struct Iv {
    lo: f64,
    hi: f64,
}

const EMPTY: Iv = Iv { lo: 1.0, hi: 0.0 };

impl Iv {
    fn is_empty(self) -> bool {
        self.lo > self.hi
    }
}

/// Parameters `u ∈ [0, 1]` with `box_dist(a, b0 + u (b1 − b0)) ≤ eps`.
fn free_interval(a: Pt, b0: Pt, b1: Pt, eps: f64) -> Iv {
    let mut iv = Iv { lo: 0.0, hi: 1.0 };
    for (ac, c0, c1) in [(a.0, b0.0, b1.0), (a.1, b0.1, b1.1)] {
        let d = c1 - c0;
        let r = ac - c0;
        if d == 0.0 {
            if r.abs() > eps {
                return EMPTY;
            }
        } else {
            let (mut u0, mut u1) = ((r - eps) / d, (r + eps) / d);
            if d < 0.0 {
                std::mem::swap(&mut u0, &mut u1);
            }
            iv.lo = iv.lo.max(u0);
            iv.hi = iv.hi.min(u1);
        }
    }
    if iv.is_empty() {
        EMPTY
    } else {
        iv
    }
}

/// Whether the Fréchet distance between `p` and `q` is at most `eps`
/// (free-space reachability; cells are convex under the box metric).
fn frechet_at_most(p: &[Pt], q: &[Pt], eps: f64) -> bool {
    let (np, nq) = (p.len(), q.len());
    if box_dist(p[0], q[0]) > eps || box_dist(p[np - 1], q[nq - 1]) > eps {
        return false;
    }
    // left[j]: reachable part of the edge at p-vertex i over q-segment j.
    let mut left = vec![EMPTY; nq - 1];
    let mut open = true;
    for j in 0..nq - 1 {
        let f = free_interval(p[0], q[j], q[j + 1], eps);
        left[j] = if open && !f.is_empty() && f.lo == 0.0 { f } else { EMPTY };
        open = !left[j].is_empty() && left[j].hi >= 1.0;
    }
    let mut bottom_open = true;
    for i in 0..np - 1 {
        // Reachable part of the edge at q-vertex 0 over p-segment i.
        let f = free_interval(q[0], p[i], p[i + 1], eps);
        let mut bottom = if bottom_open && !f.is_empty() && f.lo == 0.0 { f } else { EMPTY };
        bottom_open = !bottom.is_empty() && bottom.hi >= 1.0;
        for j in 0..nq - 1 {
            let l = left[j];
            let right_free = free_interval(p[i + 1], q[j], q[j + 1], eps);
            let top_free = free_interval(q[j + 1], p[i], p[i + 1], eps);
            let right = if !bottom.is_empty() {
                right_free
            } else if !l.is_empty() {
                Iv { lo: right_free.lo.max(l.lo), hi: right_free.hi }
            } else {
                EMPTY
            };
            let top = if !l.is_empty() {
                top_free
            } else if !bottom.is_empty() {
                Iv { lo: top_free.lo.max(bottom.lo), hi: top_free.hi }
            } else {
                EMPTY
            };
            left[j] = if right.is_empty() { EMPTY } else { right };
            bottom = if top.is_empty() { EMPTY } else { top };
        }
        if i == np - 2 {
            let r = left[nq - 2];
            return (!r.is_empty() && r.hi >= 1.0) || (!bottom.is_empty() && bottom.hi >= 1.0);
        }
    }
    unreachable!("polylines have at least two vertices")
}

/// Skorohod M1 distance: the Fréchet distance between the completed graphs
/// under the box metric `max(|Δt|, |Δvalue|)`.
///
/// Computed by bisection on the exact free-space decision procedure. The
/// result is an upper bound within `refine_eps` of the true distance and
/// is nonincreasing as `refine_eps` decreases, since a smaller tolerance
/// only continues the same bisection sequence.
pub fn m1_distance(x: &StepPath, y: &StepPath, refine_eps: f64) -> Result<f64> {
    if !(refine_eps > 0.0) {
        return invalid(format!("refine_eps must be positive, got {refine_eps}"));
    }
    same_horizon(x, y)?;
    let gx = completed_graph(x);
    let gy = completed_graph(y);
    let (p, q) = (gx.vertices(), gy.vertices());
    let mut lo = box_dist(p[0], q[0]).max(box_dist(p[p.len() - 1], q[q.len() - 1]));
    if frechet_at_most(p, q, lo) {
        return Ok(lo);
    }
    let (vmin, vmax) = p
        .iter()
        .chain(q)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v.1), b.max(v.1)));
    let mut hi = (vmax - vmin).max(x.horizon());
    for _ in 0..200 {
        if hi - lo <= refine_eps {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if frechet_at_most(p, q, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(jumps: &[(f64, f64)]) -> StepPath {
        StepPath::new(1.0, 0.0, jumps.to_vec()).unwrap()
    }

    #[test]
    fn graph_vertices() {
        let g = completed_graph(&path(&[(0.5, 1.0)]));
        assert_eq!(g.vertices(), &[(0.0, 0.0), (0.5, 0.0), (0.5, 1.0), (1.0, 1.0)]);
        let g = completed_graph(&StepPath::constant(2.0, 3.0).unwrap());
        assert_eq!(g.vertices(), &[(0.0, 3.0), (2.0, 3.0)]);
        let g = completed_graph(&path(&[(1.0, 1.0)]));
        assert_eq!(g.vertices(), &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn split_jump_is_close() {
        let x = path(&[(0.5, 1.0)]);
        let y = path(&[(0.5, 0.5), (0.5 + 1e-3, 0.5)]);
        let d = m1_distance(&x, &y, 1e-4).unwrap();
        assert!((1e-3 - 1e-4..=1.2e-3).contains(&d), "{d}");
    }

    #[test]
    fn overshoot_is_far() {
        let x = path(&[(0.5, 1.0)]);
        let y = path(&[(0.5, 1.0), (0.5 + 1e-3, -1.0)]);
        assert!(m1_distance(&x, &y, 1e-4).unwrap() >= 0.49);
    }

    #[test]
    fn identical_and_errors() {
        let x = path(&[(0.2, 1.0), (0.7, -2.0)]);
        assert_eq!(m1_distance(&x, &x, 1e-3).unwrap(), 0.0);
        assert!(m1_distance(&x, &x, 0.0).is_err());
    }
}
