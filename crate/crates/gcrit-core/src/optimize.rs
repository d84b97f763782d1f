//! One-dimensional minimization: a logarithmic coarse scan over the search
//! interval followed by golden-section refinement of the best bracket.
//!
//! Objectives may return `None` for inadmissible parameters (divergent
//! moments, no root); such points are skipped by the scan.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    /// Parameter interval searched, endpoints included.
    pub search_interval: (f64, f64),
    /// Points of the logarithmic coarse scan.
    pub grid_points: usize,
    /// Relative width at which golden-section refinement stops.
    pub refine_tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            search_interval: (1e-2, 1e2),
            grid_points: 200,
            refine_tolerance: 1e-10,
        }
    }
}

impl OptimizerConfig {
    pub fn over(lo: f64, hi: f64) -> Self {
        Self {
            search_interval: (lo, hi),
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.search_interval;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidConfig {
                reason: format!("search interval ({lo}, {hi}) must be positive and nonempty"),
            });
        }
        if self.grid_points < 3 {
            return Err(Error::InvalidConfig {
                reason: "scan needs at least 3 grid points".into(),
            });
        }
        if !(self.refine_tolerance.is_finite() && self.refine_tolerance > 0.0) {
            return Err(Error::InvalidConfig {
                reason: "refine tolerance must be positive".into(),
            });
        }
        Ok(())
    }
}

const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Minimize a partial objective over the configured interval.
///
/// Returns the best (parameter, value) pair found. Fails with `NoRoot` if
/// the objective is inadmissible everywhere on the scan.
pub fn minimize(f: impl Fn(f64) -> Option<f64>, config: &OptimizerConfig) -> Result<(f64, f64)> {
    config.validate()?;
    let (lo, hi) = config.search_interval;
    let n = config.grid_points;
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
    let ys: Vec<Option<f64>> = xs.iter().map(|&x| f(x).filter(|y| y.is_finite())).collect();

    let mut best: Option<(usize, f64)> = None;
    for (i, y) in ys.iter().enumerate() {
        if let Some(y) = y {
            if best.is_none_or(|(_, by)| *y < by) {
                best = Some((i, *y));
            }
        }
    }
    let (bi, mut best_y) = best.ok_or(Error::NoRoot)?;
    let mut best_x = xs[bi];

    // golden-section refinement inside the bracketing neighbours
    let mut a = if bi > 0 { xs[bi - 1] } else { xs[bi] };
    let mut b = if bi + 1 < n { xs[bi + 1] } else { xs[bi] };
    if b > a {
        let eval = |x: f64| f(x).filter(|y| y.is_finite()).unwrap_or(f64::INFINITY);
        let mut x1 = b - INV_GOLDEN * (b - a);
        let mut x2 = a + INV_GOLDEN * (b - a);
        let mut f1 = eval(x1);
        let mut f2 = eval(x2);
        for _ in 0..200 {
            if (b - a) <= config.refine_tolerance * best_x.abs().max(1e-12) {
                break;
            }
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - INV_GOLDEN * (b - a);
                f1 = eval(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_GOLDEN * (b - a);
                f2 = eval(x2);
            }
        }
        for (x, y) in [(x1, f1), (x2, f2)] {
            if y < best_y {
                best_x = x;
                best_y = y;
            }
        }
    }
    Ok((best_x, best_y))
}

/// Maximize a partial objective; see `minimize`.
pub fn maximize(f: impl Fn(f64) -> Option<f64>, config: &OptimizerConfig) -> Result<(f64, f64)> {
    let (x, neg) = minimize(|p| f(p).map(|y| -y), config)?;
    Ok((x, -neg))
}
