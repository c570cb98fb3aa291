//! Càdlàg step paths on `[0, T]` and the Skorohod machinery on them.

use std::io::{BufRead, Write};

use crate::error::{invalid, Error, Result};

mod m1;
mod metrics;
mod modulus;

pub use m1::{completed_graph, m1_distance, Polyline};
pub use metrics::{j1_distance, uniform_distance};
pub use modulus::{j1_modulus, m1_modulus, split_jump_statistic};

/// Relative tolerance for comparing time gaps against a window length, so
/// that grid spacings like `(j+2)/n − j/n` compare equal to `2/n`.
pub(crate) const TIME_RTOL: f64 = 1e-9;

/// Right-continuous piecewise-constant path with finitely many jumps.
///
/// Always canonical: jump times strictly increasing in `(0, T]`, sizes nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPath {
    horizon: f64,
    origin: f64,
    times: Vec<f64>,
    sizes: Vec<f64>,
    /// `levels[i]` is the value after the first `i` jumps.
    levels: Vec<f64>,
}

impl StepPath {
    /// Build from unsorted `(time, size)` pairs; coincident jumps are merged
    /// and zero jumps dropped.
    pub fn new(horizon: f64, origin: f64, mut jumps: Vec<(f64, f64)>) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return invalid(format!("horizon must be positive and finite, got {horizon}"));
        }
        if !origin.is_finite() {
            return invalid("origin must be finite");
        }
        for &(t, s) in &jumps {
            if !(t > 0.0 && t <= horizon) {
                return invalid(format!("jump time {t} outside (0, {horizon}]"));
            }
            if !s.is_finite() {
                return invalid(format!("jump size at {t} is not finite"));
            }
        }
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut times = Vec::with_capacity(jumps.len());
        let mut sizes: Vec<f64> = Vec::with_capacity(jumps.len());
        for (t, s) in jumps {
            if times.last() == Some(&t) {
                *sizes.last_mut().unwrap() += s;
            } else {
                times.push(t);
                sizes.push(s);
            }
        }
        let (times, sizes): (Vec<f64>, Vec<f64>) =
            times.into_iter().zip(sizes).filter(|&(_, s)| s != 0.0).unzip();
        Ok(Self::from_canonical(horizon, origin, times, sizes))
    }

    /// Constant path.
    pub fn constant(horizon: f64, origin: f64) -> Result<Self> {
        Self::new(horizon, origin, Vec::new())
    }

    /// Jumps already sorted, strictly increasing and nonzero.
    pub(crate) fn from_canonical(horizon: f64, origin: f64, times: Vec<f64>, sizes: Vec<f64>) -> Self {
        debug_assert!(times.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(sizes.iter().all(|&s| s != 0.0));
        let mut levels = Vec::with_capacity(sizes.len() + 1);
        let mut v = origin;
        levels.push(v);
        for s in &sizes {
            v += s;
            levels.push(v);
        }
        Self { horizon, origin, times, sizes, levels }
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.times
    }

    pub fn jump_sizes(&self) -> &[f64] {
        &self.sizes
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn num_jumps(&self) -> usize {
        self.times.len()
    }

    pub fn end_value(&self) -> f64 {
        *self.levels.last().unwrap()
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.horizon).contains(&t) {
            return invalid(format!("t = {t} outside [0, {}]", self.horizon));
        }
        Ok(self.value_at(t))
    }

    #[inline]
    pub(crate) fn value_at(&self, t: f64) -> f64 {
        self.levels[self.times.partition_point(|&s| s <= t)]
    }

    /// Pointwise sum, canonicalized.
    pub fn add(&self, other: &StepPath) -> Result<StepPath> {
        same_horizon(self, other)?;
        let jumps = self
            .times
            .iter()
            .copied()
            .zip(self.sizes.iter().copied())
            .chain(other.times.iter().copied().zip(other.sizes.iter().copied()))
            .collect();
        StepPath::new(self.horizon, self.origin + other.origin, jumps)
    }

    /// `# origin=<o>,horizon=<T>` then `time,size` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# origin={},horizon={}", self.origin, self.horizon)?;
        writeln!(w, "time,size")?;
        for (t, s) in self.times.iter().zip(&self.sizes) {
            writeln!(w, "{t},{s}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<StepPath> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| parse_err("missing origin/horizon line"))??;
        let meta = header.strip_prefix("# ").ok_or_else(|| parse_err("missing '# ' prefix"))?;
        let (mut origin, mut horizon) = (None, None);
        for part in meta.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(|| parse_err(part))?;
            let value: f64 = value.trim().parse().map_err(|_| parse_err(part))?;
            match key.trim() {
                "origin" => origin = Some(value),
                "horizon" => horizon = Some(value),
                other => return Err(parse_err(other)),
            }
        }
        let columns = lines.next().ok_or_else(|| parse_err("missing column header"))??;
        if columns.trim() != "time,size" {
            return Err(parse_err(&columns));
        }
        let mut jumps = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (t, s) = line.split_once(',').ok_or_else(|| parse_err(&line))?;
            let t: f64 = t.trim().parse().map_err(|_| parse_err(&line))?;
            let s: f64 = s.trim().parse().map_err(|_| parse_err(&line))?;
            jumps.push((t, s));
        }
        StepPath::new(
            horizon.ok_or_else(|| parse_err("horizon"))?,
            origin.ok_or_else(|| parse_err("origin"))?,
            jumps,
        )
    }
}

fn parse_err(what: &str) -> Error {
    Error::InvalidArgument(format!("malformed step path CSV near {what:?}"))
}

pub(crate) fn same_horizon(x: &StepPath, y: &StepPath) -> Result<()> {
    let scale = x.horizon.abs().max(y.horizon.abs());
    if (x.horizon - y.horizon).abs() > 1e-12 * scale {
        return invalid(format!("horizon mismatch: {} vs {}", x.horizon, y.horizon));
    }
    Ok(())
}
