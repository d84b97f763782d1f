//! Taylor coefficients of the zero-energy Jost function and of its
//! reciprocal, for the S-wave problem of a given shape.
//!
//! The reciprocal series 1/f0(g, 0) = sum M_n g^n has M_n computed from the
//! iterates started at the constant function,
//!
//! psi~_0 = 1,  M_n = integral r v psi~_(n-1) dr,
//! psi~_n(r) = M_n - integral_r^inf (r' - r) v(r') psi~_(n-1)(r') dr',
//!
//! while f0(g, 0) = sum (-1)^n a_n g^n has its coefficients evaluated by
//! collapsing the printed n-fold nested integrals into iterated suffix
//! integrals T_k(x) = integral_x^inf (y - x) v(y) T_(k-1)(y) dy, one linear
//! sweep per order.
//!
//! The two series are tied by the convolution identity
//! sum_p M_(n-p) a_p (-1)^p = 0 and by the log-concavity
//! M_(n+2) M_n <= M_(n+1)^2, which is exactly the monotone decrease of the
//! alpha ladder; both are exposed as checks. The smallest positive zero
//! of f0 is g_c, so the ratios M_n/M_(n+1) climb toward it from below.

use crate::error::{Error, Result};
use crate::potential::{AngularMomentum, PotentialShape};
use crate::quadrature::{self, QuadratureScheme};

/// Largest supported order for the Jost coefficients a_n.
pub const MAX_JOST_ORDER: usize = 6;

/// Coefficients M_n of 1/f0 and a_n of f0, both starting at order zero with
/// M_0 = a_0 = 1.
#[derive(Debug, Clone)]
pub struct JostSeries {
    pub m: Vec<f64>,
    pub a: Vec<f64>,
}

impl JostSeries {
    /// Compute both coefficient families for the S-wave problem of `shape`
    /// (reduce l > 0 shapes first).
    pub fn compute(
        shape: &PotentialShape,
        m_order: usize,
        a_order: usize,
        scheme: &QuadratureScheme,
    ) -> Result<Self> {
        Ok(Self {
            m: reciprocal_coefficients(shape, m_order, scheme)?,
            a: jost_coefficients(shape, a_order, scheme)?,
        })
    }

    pub fn order_m(&self) -> usize {
        self.m.len() - 1
    }

    pub fn order_a(&self) -> usize {
        self.a.len() - 1
    }
}

/// Coefficients M_0..M_n of the reciprocal zero-energy Jost series.
pub fn reciprocal_coefficients(
    shape: &PotentialShape,
    order: usize,
    scheme: &QuadratureScheme,
) -> Result<Vec<f64>> {
    assert!(order >= 1);
    let grid = quadrature::build_grid(shape, AngularMomentum::new(0), scheme)?;
    let v = grid.sample(|r| shape.evaluate(r));
    let nodes = grid.nodes();

    let mut m = Vec::with_capacity(order + 1);
    m.push(1.0);
    let mut psi = vec![1.0; grid.len()];
    for _ in 1..=order {
        let rv_psi: Vec<f64> = (0..grid.len()).map(|i| nodes[i] * v[i] * psi[i]).collect();
        let v_psi: Vec<f64> = (0..grid.len()).map(|i| v[i] * psi[i]).collect();
        let m_n = grid.integral(&rv_psi);
        if !(m_n.is_finite() && m_n > 0.0) {
            return Err(Error::DivergentMoment { power: 1.0 });
        }
        let (_, tail_rv) = grid.cumulative(&rv_psi);
        let (_, tail_v) = grid.cumulative(&v_psi);
        for i in 0..grid.len() {
            psi[i] = m_n - (tail_rv[i] - nodes[i] * tail_v[i]);
        }
        m.push(m_n);
    }
    Ok(m)
}

/// Coefficients a_0..a_n of the zero-energy Jost function itself.
pub fn jost_coefficients(
    shape: &PotentialShape,
    order: usize,
    scheme: &QuadratureScheme,
) -> Result<Vec<f64>> {
    assert!(order >= 1);
    if order > MAX_JOST_ORDER {
        return Err(Error::JostOrderTooLarge {
            order,
            max: MAX_JOST_ORDER,
        });
    }
    let grid = quadrature::build_grid(shape, AngularMomentum::new(0), scheme)?;
    let v = grid.sample(|r| shape.evaluate(r));
    let nodes = grid.nodes();

    let mut a = Vec::with_capacity(order + 1);
    a.push(1.0);
    let mut t = vec![1.0; grid.len()];
    for n in 1..=order {
        let rv_t: Vec<f64> = (0..grid.len()).map(|i| nodes[i] * v[i] * t[i]).collect();
        a.push(grid.integral(&rv_t));
        if n < order {
            let v_t: Vec<f64> = (0..grid.len()).map(|i| v[i] * t[i]).collect();
            let (_, tail_rv) = grid.cumulative(&rv_t);
            let (_, tail_v) = grid.cumulative(&v_t);
            for i in 0..grid.len() {
                t[i] = tail_rv[i] - nodes[i] * tail_v[i];
            }
        }
    }
    Ok(a)
}

/// Largest relative residual of the convolution identity
/// sum_(p=0..n) M_(n-p) a_p (-1)^p = 0 over 1 <= n <= min order.
pub fn verify_convolution(series: &JostSeries) -> f64 {
    let orders = series.order_m().min(series.order_a());
    let mut worst: f64 = 0.0;
    for n in 1..=orders {
        let mut acc = 0.0;
        for p in 0..=n {
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            acc += series.m[n - p] * series.a[p] * sign;
        }
        worst = worst.max(acc.abs() / series.m[n]);
    }
    worst
}

/// Ratios M_n / M_(n+1) for n = 0..order-1: increasing lower limits on g_c
/// (the d'Alembert estimate of the radius of convergence of 1/f0).
pub fn dalembert_estimate(series: &JostSeries) -> Vec<f64> {
    series.m.windows(2).map(|w| w[0] / w[1]).collect()
}
