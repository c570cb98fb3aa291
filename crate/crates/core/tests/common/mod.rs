//! Test-only oracles, independent of the library's own quadrature.
#![allow(dead_code)]

/// Composite Simpson on `[a, b]` with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `∫_lo^hi g(y) dy` for `lo > 0` by Simpson in `u = ln y`.
pub fn log_simpson<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, n: usize) -> f64 {
    simpson(|u| { let y = u.exp(); g(y) * y }, lo.ln(), hi.ln(), n)
}
