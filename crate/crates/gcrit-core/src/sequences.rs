//! The four convergent bound sequences and the certified bracket they
//! assemble.
//!
//! All four ladders iterate the same kernel from the starting function
//! phi = r^(l+1) sqrt(v); writing m_k = <phi | K^k phi> they read
//!
//! * power:   delta_n = m_(n+1) / m_n          (increasing; 1/delta_n are
//!   decreasing upper limits on g_c),
//! * Kellogg: gamma_n = sqrt(m_(2n-2) / m_(2n)) (decreasing upper limits),
//! * Kolomy:  beta_n  = m_(2n-1) / m_(2n)       (decreasing upper limits),
//!
//! while the two-sided ladder runs on the S-wave image of the problem with
//! psi_0 = r and psi_n = K psi_(n-1):
//!
//! * alpha_n = N_n / N_(n-1) with N_n = integral v psi_n dr (origin slope),
//!   decreasing toward 1/g_c, so 1/alpha_n are increasing lower limits;
//! * omega_n = D_n / D_(n-1) with D_n = integral r v psi_n dr (large-r
//!   limit), increasing toward 1/g_c, so 1/omega_n are decreasing upper
//!   limits. alpha_0 = N_0 reproduces the Bargmann-Schwinger necessary
//!   condition.

use crate::error::{Error, Result};
use crate::kernel::BsOperator;
use crate::potential::{reduce_to_s_wave, AngularMomentum, PotentialShape};
use crate::quadrature::QuadratureScheme;

/// Relative change between successive bounds below which a ladder is
/// declared converged and iteration stops.
pub const STOP_RELATIVE: f64 = 1e-8;

/// Which iteration produced a bound sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Power,
    Kellogg,
    Kolomy,
    Alpha,
    Omega,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Power => "power",
            Method::Kellogg => "kellogg",
            Method::Kolomy => "kolomy",
            Method::Alpha => "alpha",
            Method::Omega => "omega",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Whether a sequence bounds g_c from above or from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
}

/// One method's run: the raw iterates and the induced bounds on g_c.
#[derive(Debug, Clone)]
pub struct BoundSequence {
    pub method: Method,
    /// Index n of the first entry (0 for power and alpha, 1 otherwise).
    pub first_index: usize,
    /// Raw sequence members delta_n, gamma_n, beta_n, alpha_n or omega_n.
    pub iterates: Vec<f64>,
    /// Induced bounds on g_c (1/delta, gamma, beta, 1/alpha, 1/omega).
    pub bounds_on_gc: Vec<f64>,
    pub direction: Direction,
    /// Set when the stopping rule fired before n_max.
    pub converged: bool,
}

impl BoundSequence {
    /// The tightest bound in the run (the last entry, by monotonicity).
    pub fn best(&self) -> f64 {
        *self.bounds_on_gc.last().expect("sequence is never empty")
    }

    /// Iterate index of entry k.
    pub fn index(&self, k: usize) -> usize {
        self.first_index + k
    }

    /// Bound at iterate index n, when computed.
    pub fn bound_at(&self, n: usize) -> Option<f64> {
        n.checked_sub(self.first_index)
            .and_then(|k| self.bounds_on_gc.get(k))
            .copied()
    }
}

/// A certified enclosure of the critical coupling.
#[derive(Debug, Clone)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
    /// Method labels contributing each side.
    pub lower_source: String,
    pub upper_source: String,
}

/// An externally supplied bound merged into `best_bracket_with`.
#[derive(Debug, Clone)]
pub struct ExtraBound {
    pub label: String,
    pub value: f64,
    pub direction: Direction,
}

// ---------------------------------------------------------------------------
// Moment ladder
// ---------------------------------------------------------------------------

/// The scalar products m_k = <phi | K^k phi> for k = 0..=2*applies, with
/// phi = r^(l+1) sqrt(v), computed from `applies` operator applications by
/// pairing stored iterates: m_(i+j) = integral v u_i u_j dr.
fn moment_ladder(
    shape: &PotentialShape,
    ell: AngularMomentum,
    applies: usize,
    scheme: &QuadratureScheme,
) -> Result<Vec<f64>> {
    let op = BsOperator::for_shape(shape, ell, scheme)?;
    let mut iterates = vec![op.initial_iterate()];
    for _ in 0..applies {
        let next = op.apply(iterates.last().unwrap())?;
        iterates.push(next);
    }
    let mut moments = Vec::with_capacity(2 * applies + 1);
    for k in 0..=2 * applies {
        let i = k / 2;
        let j = k - i;
        moments.push(op.weighted_inner(&iterates[i], &iterates[j])?);
    }
    if moments[0] <= 0.0 || !moments.iter().all(|m| m.is_finite() && *m > 0.0) {
        return Err(Error::ZeroPotential);
    }
    Ok(moments)
}

/// Truncate a bound ladder at the stopping rule, verify monotonicity, and
/// package it.
fn finish_sequence(
    method: Method,
    first_index: usize,
    iterates: Vec<f64>,
    bounds: Vec<f64>,
    direction: Direction,
    scheme: &QuadratureScheme,
) -> Result<BoundSequence> {
    let mut keep = bounds.len();
    let mut converged = false;
    for k in 1..bounds.len() {
        if (bounds[k] - bounds[k - 1]).abs() < STOP_RELATIVE * bounds[k].abs() {
            keep = k + 1;
            converged = true;
            break;
        }
    }
    let slack = 100.0 * scheme.rel_tolerance;
    for k in 1..keep {
        let excess = match direction {
            // upper limits must not increase, lower limits must not decrease
            Direction::Upper => bounds[k] - bounds[k - 1],
            Direction::Lower => bounds[k - 1] - bounds[k],
        };
        if excess > slack * bounds[k].abs() {
            return Err(Error::MonotonicityViolated {
                method: method.label(),
                index: first_index + k,
                excess,
            });
        }
    }
    Ok(BoundSequence {
        method,
        first_index,
        iterates: iterates[..keep].to_vec(),
        bounds_on_gc: bounds[..keep].to_vec(),
        direction,
        converged,
    })
}

/// Iterated power method: delta_n = m_(n+1)/m_n for n = 0..=n_max, emitted
/// as the decreasing upper limits 1/delta_n.
pub fn power_sequence(
    shape: &PotentialShape,
    ell: AngularMomentum,
    n_max: usize,
    scheme: &QuadratureScheme,
) -> Result<BoundSequence> {
    assert!(n_max >= 1);
    let applies = n_max / 2 + 1;
    let m = moment_ladder(shape, ell, applies, scheme)?;
    let iterates: Vec<f64> = (0..=n_max).map(|n| m[n + 1] / m[n]).collect();
    let bounds: Vec<f64> = iterates.iter().map(|d| 1.0 / d).collect();
    finish_sequence(Method::Power, 0, iterates, bounds, Direction::Upper, scheme)
}

/// Kellogg's norm-ratio sequence gamma_n = sqrt(m_(2n-2)/m_(2n)) for
/// n = 1..=n_max; decreasing upper limits on g_c.
pub fn kellogg_sequence(
    shape: &PotentialShape,
    ell: AngularMomentum,
    n_max: usize,
    scheme: &QuadratureScheme,
) -> Result<BoundSequence> {
    assert!(n_max >= 1);
    let m = moment_ladder(shape, ell, n_max, scheme)?;
    let iterates: Vec<f64> = (1..=n_max)
        .map(|n| (m[2 * n - 2] / m[2 * n]).sqrt())
        .collect();
    let bounds = iterates.clone();
    finish_sequence(
        Method::Kellogg,
        1,
        iterates,
        bounds,
        Direction::Upper,
        scheme,
    )
}

/// Kolomy's quotient sequence beta_n = m_(2n-1)/m_(2n) for n = 1..=n_max;
/// decreasing upper limits on g_c.
pub fn kolomy_sequence(
    shape: &PotentialShape,
    ell: AngularMomentum,
    n_max: usize,
    scheme: &QuadratureScheme,
) -> Result<BoundSequence> {
    assert!(n_max >= 1);
    let m = moment_ladder(shape, ell, n_max, scheme)?;
    let iterates: Vec<f64> = (1..=n_max).map(|n| m[2 * n - 1] / m[2 * n]).collect();
    let bounds = iterates.clone();
    finish_sequence(
        Method::Kolomy,
        1,
        iterates,
        bounds,
        Direction::Upper,
        scheme,
    )
}

/// The two-sided ladder on the S-wave image of (shape, l): increasing lower
/// limits 1/alpha_n and decreasing upper limits 1/omega_n on the l-wave
/// critical coupling of the original shape.
///
/// alpha_0 = integral r v dr is emitted as the first entry of the alpha
/// ladder; omega starts at n = 1.
pub fn alpha_omega(
    shape: &PotentialShape,
    ell: AngularMomentum,
    n_max: usize,
    scheme: &QuadratureScheme,
) -> Result<(BoundSequence, BoundSequence)> {
    assert!(n_max >= 1);
    let reduced = reduce_to_s_wave(shape, ell);
    let op = BsOperator::for_shape(&reduced, AngularMomentum::new(0), scheme)?;
    let psi0 = op.initial_iterate(); // r^(0+1) = r
    let one = crate::kernel::GridFunction::sample(
        op.grid().clone(),
        |_| 1.0,
        crate::kernel::Representation::Unweighted,
    )?;

    let mut origin = Vec::with_capacity(n_max + 1); // N_n = integral v psi_n
    let mut tail = Vec::with_capacity(n_max + 1); // D_n = integral r v psi_n
    let mut psi = psi0.clone();
    for n in 0..=n_max {
        origin.push(op.weighted_inner(&psi, &one)?);
        tail.push(op.weighted_inner(&psi, &psi0)?);
        if n < n_max {
            psi = op.apply(&psi)?;
        }
    }
    if !(origin[0].is_finite() && origin[0] > 0.0) {
        return Err(Error::ZeroPotential);
    }

    let mut alpha_iter = vec![origin[0]];
    alpha_iter.extend((1..=n_max).map(|n| origin[n] / origin[n - 1]));
    let alpha_bounds: Vec<f64> = alpha_iter.iter().map(|a| 1.0 / a).collect();
    let alpha = finish_sequence(
        Method::Alpha,
        0,
        alpha_iter,
        alpha_bounds,
        Direction::Lower,
        scheme,
    )?;

    let omega_iter: Vec<f64> = (1..=n_max).map(|n| tail[n] / tail[n - 1]).collect();
    let omega_bounds: Vec<f64> = omega_iter.iter().map(|w| 1.0 / w).collect();
    let omega = finish_sequence(
        Method::Omega,
        1,
        omega_iter,
        omega_bounds,
        Direction::Upper,
        scheme,
    )?;

    Ok((alpha, omega))
}

/// Tightest enclosure available from the iterative ladders at order n_max.
pub fn best_bracket(
    shape: &PotentialShape,
    ell: AngularMomentum,
    n_max: usize,
    scheme: &QuadratureScheme,
) -> Result<Bracket> {
    best_bracket_with(shape, ell, n_max, &[], scheme)
}

/// As `best_bracket`, additionally folding in externally computed limits
/// (for example the closed-form bounds).
pub fn best_bracket_with(
    shape: &PotentialShape,
    ell: AngularMomentum,
    n_max: usize,
    extras: &[ExtraBound],
    scheme: &QuadratureScheme,
) -> Result<Bracket> {
    let (alpha, omega) = alpha_omega(shape, ell, n_max, scheme)?;
    let gamma = kellogg_sequence(shape, ell, n_max, scheme)?;
    let beta = kolomy_sequence(shape, ell, n_max, scheme)?;
    let delta = power_sequence(shape, ell, n_max, scheme)?;

    let mut lower = (
        alpha.best(),
        format!("alpha[n={}]", alpha.index(alpha.bounds_on_gc.len() - 1)),
    );
    let mut upper = (f64::INFINITY, String::new());
    for seq in [&omega, &gamma, &beta, &delta] {
        let candidate = seq.best();
        if candidate < upper.0 {
            upper = (
                candidate,
                format!(
                    "{}[n={}]",
                    seq.method,
                    seq.index(seq.bounds_on_gc.len() - 1)
                ),
            );
        }
    }
    for extra in extras {
        match extra.direction {
            Direction::Lower if extra.value > lower.0 => {
                lower = (extra.value, extra.label.clone());
            }
            Direction::Upper if extra.value < upper.0 => {
                upper = (extra.value, extra.label.clone());
            }
            _ => {}
        }
    }

    let slack = 100.0 * scheme.rel_tolerance * upper.0.abs();
    if lower.0 > upper.0 + slack {
        return Err(Error::InconsistentBracket {
            lower: lower.0,
            upper: upper.0,
        });
    }
    Ok(Bracket {
        lower: lower.0,
        upper: upper.0,
        width: upper.0 - lower.0,
        lower_source: lower.1,
        upper_source: upper.1,
    })
}
