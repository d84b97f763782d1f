//! Closed-form and variational limits on the critical coupling: the Glaser
//! necessary condition, Calogero's two sufficient conditions, the
//! closed-form variational bound, general Rayleigh quotients over trial
//! families, and the trace bound.
//!
//! Every one-parameter family is optimized by a logarithmic coarse scan
//! followed by golden-section refinement; parameters with divergent moments
//! are skipped.

use crate::error::{Error, Result};
use crate::kernel::{BsOperator, GridFunction, Representation};
use crate::optimize::{self, OptimizerConfig};
use crate::potential::{AngularMomentum, PotentialShape};
use crate::quadrature::{self, QuadratureScheme, RadialGrid};
use crate::special::ln_gamma;
use std::sync::Arc;

/// Trial-function families for the Rayleigh quotient, all living in the
/// weighted space psi = sqrt(v) u.
#[derive(Debug, Clone)]
pub enum TrialFamily {
    /// psi = A [r^(2p-1) v(r)^p]^(1/2), scanned over p.
    PowerWeighted,
    /// psi = A r^p restricted to the support of v, scanned over p.
    /// Requires a finite support.
    Monomial,
    /// psi = A r exp(-q r), scanned over q. The norm integral runs over the
    /// whole half line, so this family is valid for any shape.
    RadialExponential,
    /// A fixed user-supplied weighted-space function on a trial grid.
    Explicit(GridFunction),
}

#[derive(Debug, Clone)]
pub struct TrialFunctionSpec {
    pub family: TrialFamily,
    /// Number of kernel applications before the quotient is taken.
    pub iterations: usize,
}

impl TrialFunctionSpec {
    pub fn new(family: TrialFamily) -> Self {
        Self {
            family,
            iterations: 0,
        }
    }

    pub fn iterated(family: TrialFamily, iterations: usize) -> Self {
        Self { family, iterations }
    }
}

/// Grid suitable for sampling explicit trial functions for (shape, l).
pub fn trial_grid(
    shape: &PotentialShape,
    ell: AngularMomentum,
    scheme: &QuadratureScheme,
) -> Result<Arc<RadialGrid>> {
    Ok(Arc::new(quadrature::build_trial_grid(shape, ell, scheme)?))
}

fn scheme_with_support(shape: &PotentialShape, scheme: &QuadratureScheme) -> QuadratureScheme {
    let mut s = scheme.clone();
    if let Some(cut) = shape.support_cutoff() {
        s.split_points.push(cut);
    }
    s
}

// ---------------------------------------------------------------------------
// Glaser necessary condition
// ---------------------------------------------------------------------------

/// Lower limit on g_c from the Glaser condition: the largest over p >= 1 of
///
/// g(p) = [ C_p(l) I_p ]^(-1/p),
/// C_p(l) = (p-1)^(p-1) Gamma(2p) / [ (2l+1)^(2p-1) p^p Gamma(p)^2 ],
/// I_p = integral over (0, inf) of (r^2 v)^p dr / r,
///
/// with (p-1)^(p-1) read as its limit 1 at p = 1 (where the bound reduces
/// to the Bargmann-Schwinger condition).
pub fn glaser_lower(
    shape: &PotentialShape,
    ell: AngularMomentum,
    config: Option<&OptimizerConfig>,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let default = OptimizerConfig::over(1.0, 50.0);
    let config = config.unwrap_or(&default);
    let scheme = scheme_with_support(shape, scheme);
    let log_2l1 = (2.0 * ell.ell() as f64 + 1.0).ln();

    let objective = |p: f64| -> Option<f64> {
        let integrand = |r: f64| (r * r * shape.evaluate(r)).powf(p) / r;
        let ip = quadrature::integrate(integrand, 0.0, f64::INFINITY, &scheme).ok()?;
        if !(ip.is_finite() && ip > 0.0) {
            return None;
        }
        let edge = if p > 1.0 {
            (p - 1.0) * (p - 1.0).ln()
        } else {
            0.0
        };
        let ln_c =
            edge + ln_gamma(2.0 * p) - (2.0 * p - 1.0) * log_2l1 - p * p.ln() - 2.0 * ln_gamma(p);
        Some((-(ln_c + ip.ln()) / p).exp())
    };
    let (_, value) = optimize::maximize(objective, config)?;
    Ok(value)
}

// ---------------------------------------------------------------------------
// Calogero sufficient conditions
// ---------------------------------------------------------------------------

/// Upper limit from the linear sufficiency condition: the smallest over
/// R > 0 of
///
/// g(R) = (2l+1) / [ R^-(2l+1) integral_0^R r^(2l+2) v dr
///                 + R^(2l+1) integral_R^inf r^(-2l) v dr ].
pub fn calogero_upper_linear(
    shape: &PotentialShape,
    ell: AngularMomentum,
    config: Option<&OptimizerConfig>,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let default = OptimizerConfig::default();
    let config = config.unwrap_or(&default);
    let scheme = scheme_with_support(shape, scheme);
    let l = ell.ell() as i32;
    let two_l1 = 2.0 * l as f64 + 1.0;

    let objective = |radius: f64| -> Option<f64> {
        let head = quadrature::integrate(
            |r| r.powi(2 * l + 2) * shape.evaluate(r),
            0.0,
            radius,
            &scheme,
        )
        .ok()?;
        let tail = quadrature::integrate(
            |r| r.powi(-2 * l) * shape.evaluate(r),
            radius,
            f64::INFINITY,
            &scheme,
        )
        .ok()?;
        let denom = radius.powi(-(2 * l + 1)) * head + radius.powi(2 * l + 1) * tail;
        if denom > 0.0 && denom.is_finite() {
            Some(two_l1 / denom)
        } else {
            None
        }
    };
    let (_, value) = optimize::minimize(objective, config)?;
    Ok(value)
}

/// Upper limit from the nonlinear sufficiency condition: for each R the
/// smallest g with
///
/// R integral_0^inf g v / [ (r/R)^2l + (r/R)^-2l R^2 g v ] dr = 1
///
/// (the left side is nondecreasing in g), minimized over R. Radii whose
/// g -> infinity limit stays below 1 contribute nothing.
pub fn calogero_upper_nonlinear(
    shape: &PotentialShape,
    ell: AngularMomentum,
    config: Option<&OptimizerConfig>,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let default = OptimizerConfig::default();
    let config = config.unwrap_or(&default);
    let l = ell.ell() as i32;
    let grid = quadrature::build_grid(shape, ell, scheme)?;
    let v = grid.sample(|r| shape.evaluate(r));
    let nodes = grid.nodes().to_vec();
    let weights = grid.weights().to_vec();

    let lhs = |g: f64, radius: f64| -> f64 {
        let mut acc = 0.0;
        for i in 0..nodes.len() {
            if v[i] <= 0.0 {
                continue;
            }
            let x = nodes[i] / radius;
            let denom = x.powi(2 * l) + x.powi(-2 * l) * radius * radius * g * v[i];
            acc += weights[i] * g * v[i] / denom;
        }
        radius * acc
    };

    let objective = |radius: f64| -> Option<f64> {
        // supremum of the left side as g -> infinity
        let mut sup = 0.0;
        for i in 0..nodes.len() {
            if v[i] > 0.0 {
                let x = nodes[i] / radius;
                sup += weights[i] * x.powi(2 * l) / (radius * radius);
            }
        }
        sup *= radius;
        if sup <= 1.0 {
            return None;
        }
        let mut hi = 1.0;
        for _ in 0..200 {
            if lhs(hi, radius) >= 1.0 {
                break;
            }
            hi *= 2.0;
        }
        if lhs(hi, radius) < 1.0 {
            return None;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if lhs(mid, radius) < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    };
    let (_, value) = optimize::minimize(objective, config)?;
    Ok(value)
}

// ---------------------------------------------------------------------------
// Variational bounds
// ---------------------------------------------------------------------------

/// Closed-form variational upper limit: with F(q; x) = x^q v(x)^((q+1)/2)
/// and lambda = l + 1/2, the smallest over p of
///
/// lambda integral F(2p-1; x) dx /
///   integral F(p; y) y^-lambda [ integral_0^y F(p; z) z^lambda dz ] dy.
pub fn variational_upper_closed(
    shape: &PotentialShape,
    ell: AngularMomentum,
    config: Option<&OptimizerConfig>,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let default = OptimizerConfig::over(0.501, 25.0);
    let config = config.unwrap_or(&default);
    let lambda = ell.lambda();
    let grid = quadrature::build_trial_grid(shape, ell, scheme)?;
    let v = grid.sample(|r| shape.evaluate(r));
    let nodes = grid.nodes().to_vec();

    let objective = |p: f64| -> Option<f64> {
        let mut numer_vals = vec![0.0; nodes.len()];
        let mut inner_vals = vec![0.0; nodes.len()];
        for i in 0..nodes.len() {
            if v[i] <= 0.0 {
                continue;
            }
            let r = nodes[i];
            numer_vals[i] = r.powf(2.0 * p - 1.0) * v[i].powf(p);
            inner_vals[i] = r.powf(p + lambda) * v[i].powf(0.5 * (p + 1.0));
        }
        let numer = grid.integral(&numer_vals);
        let (inner_prefix, _) = grid.cumulative(&inner_vals);
        let mut outer_vals = vec![0.0; nodes.len()];
        for i in 0..nodes.len() {
            if v[i] <= 0.0 {
                continue;
            }
            let r = nodes[i];
            outer_vals[i] = r.powf(p - lambda) * v[i].powf(0.5 * (p + 1.0)) * inner_prefix[i];
        }
        let denom = grid.integral(&outer_vals);
        if numer.is_finite() && denom.is_finite() && denom > 0.0 && numer > 0.0 {
            Some(lambda * numer / denom)
        } else {
            None
        }
    };
    let (_, value) = optimize::minimize(objective, config)?;
    Ok(value)
}

/// General Rayleigh-quotient upper limit <psi|psi> / <K psi|psi> after
/// `iterations` kernel applications, minimized over the family parameter.
pub fn rayleigh_upper(
    shape: &PotentialShape,
    ell: AngularMomentum,
    trial: &TrialFunctionSpec,
    config: Option<&OptimizerConfig>,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    match &trial.family {
        TrialFamily::Explicit(psi) => {
            let op = BsOperator::new(shape, ell, psi.grid().clone());
            quotient_for_u(
                &op,
                &explicit_to_u(shape, psi)?,
                None,
                trial.iterations,
                scheme,
            )
            .ok_or(Error::NotSquareIntegrable { norm: f64::NAN })
        }
        family => {
            let grid = trial_grid(shape, ell, scheme)?;
            let op = BsOperator::new(shape, ell, grid.clone());
            if matches!(family, TrialFamily::Monomial) && shape.support_cutoff().is_none() {
                return Err(Error::NotSquareIntegrable {
                    norm: f64::INFINITY,
                });
            }
            let default = match family {
                TrialFamily::PowerWeighted => OptimizerConfig::over(0.51, 20.0),
                _ => OptimizerConfig::over(0.05, 20.0),
            };
            let config = config.unwrap_or(&default);
            let v = op.potential_values().to_vec();
            let objective = |param: f64| -> Option<f64> {
                let (u, norm0) = match family {
                    TrialFamily::PowerWeighted => {
                        let u = grid_u(&grid, &v, |r, vi| {
                            r.powf(param - 0.5) * vi.powf(0.5 * (param - 1.0))
                        });
                        (u, None)
                    }
                    TrialFamily::Monomial => {
                        let u = grid_u(&grid, &v, |r, _| r.powf(param));
                        (u, None)
                    }
                    TrialFamily::RadialExponential => {
                        let u = grid_u(&grid, &v, |r, vi| r * (-param * r).exp() / vi.sqrt());
                        // psi extends beyond the support of v; its norm is an
                        // ordinary half-line integral
                        let norm = quadrature::integrate(
                            |r| (r * (-param * r).exp()).powi(2),
                            0.0,
                            f64::INFINITY,
                            scheme,
                        )
                        .ok()?;
                        (u, Some(norm))
                    }
                    TrialFamily::Explicit(_) => unreachable!(),
                };
                quotient_for_u(&op, &u?, norm0, trial.iterations, scheme)
            };
            let (_, value) = optimize::minimize(objective, config)?;
            Ok(value)
        }
    }
}

fn grid_u(grid: &Arc<RadialGrid>, v: &[f64], f: impl Fn(f64, f64) -> f64) -> Option<GridFunction> {
    let values: Vec<f64> = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &r)| if v[i] > 0.0 { f(r, v[i]) } else { 0.0 })
        .collect();
    GridFunction::from_values(grid.clone(), values, Representation::Unweighted).ok()
}

fn explicit_to_u(shape: &PotentialShape, psi: &GridFunction) -> Result<GridFunction> {
    assert_eq!(psi.meaning(), Representation::Weighted);
    let grid = psi.grid();
    let mut values = vec![0.0; grid.len()];
    for (i, &r) in grid.nodes().iter().enumerate() {
        let v = shape.evaluate(r);
        if v > 0.0 {
            values[i] = psi.values()[i] / v.sqrt();
        } else if psi.values()[i] != 0.0 {
            return Err(Error::TrialOutsideSupport);
        }
    }
    GridFunction::from_values(grid.clone(), values, Representation::Unweighted)
}

/// Quotient <psi|psi> / <K psi|psi> for the weighted function psi = sqrt(v) u,
/// after iterating u. `norm0` overrides the zeroth norm when psi extends
/// beyond the support of v.
fn quotient_for_u(
    op: &BsOperator,
    u: &GridFunction,
    norm0: Option<f64>,
    iterations: usize,
    _scheme: &QuadratureScheme,
) -> Option<f64> {
    let mut u = u.clone();
    for _ in 0..iterations {
        u = op.apply(&u).ok()?;
    }
    let norm = if iterations == 0 {
        match norm0 {
            Some(n) => n,
            None => op.weighted_inner(&u, &u).ok()?,
        }
    } else {
        op.weighted_inner(&u, &u).ok()?
    };
    let ku = op.apply(&u).ok()?;
    let numer = op.weighted_inner(&ku, &u).ok()?;
    if norm.is_finite() && numer.is_finite() && norm > 0.0 && numer > 0.0 {
        Some(norm / numer)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Trace bound
// ---------------------------------------------------------------------------

/// Upper limit t1/t2 from the traces of the first two iterated kernels:
/// at g = t1/t2 the second trace reaches the first, which forces at least
/// one characteristic number at or below that strength.
pub fn chadan_upper(
    shape: &PotentialShape,
    ell: AngularMomentum,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let t1 = crate::kernel::trace_iterated(shape, ell, 1, scheme)?;
    let t2 = crate::kernel::trace_iterated(shape, ell, 2, scheme)?;
    Ok(t1 / t2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{make_exponential, make_r_exponential, make_square_well};
    use approx::assert_relative_eq;

    fn scheme() -> QuadratureScheme {
        QuadratureScheme::default()
    }

    fn l(n: u32) -> AngularMomentum {
        AngularMomentum::new(n)
    }

    fn assert_printed(value: f64, printed: f64, decimals: i32) {
        let tol = 1.5 * 10f64.powi(-decimals);
        assert!(
            (value - printed).abs() <= tol,
            "value {value} vs printed {printed} (tol {tol})"
        );
    }

    #[test]
    fn glaser_reference_values() {
        let g = glaser_lower(&make_exponential(), l(0), None, &scheme()).unwrap();
        assert_printed(g, 1.4383, 4);
        let g = glaser_lower(&make_square_well(), l(0), None, &scheme()).unwrap();
        assert_printed(g, 2.3593, 4);
        let g = glaser_lower(&make_square_well(), l(5), None, &scheme()).unwrap();
        assert_printed(g, 60.947, 3);
    }

    #[test]
    fn calogero_linear_reference_values() {
        let g = calogero_upper_linear(&make_exponential(), l(0), None, &scheme()).unwrap();
        assert_printed(g, 1.6755, 4);
        let g = calogero_upper_linear(&make_square_well(), l(0), None, &scheme()).unwrap();
        assert_printed(g, 8.0 / 3.0, 4);
        let g = calogero_upper_linear(&make_square_well(), l(1), None, &scheme()).unwrap();
        assert_printed(g, 11.719, 3);
    }

    #[test]
    fn calogero_nonlinear_reference_values() {
        let g = calogero_upper_nonlinear(&make_exponential(), l(0), None, &scheme()).unwrap();
        assert_printed(g, 1.5442, 4);
        let g = calogero_upper_nonlinear(&make_square_well(), l(0), None, &scheme()).unwrap();
        assert_printed(g, 4.0, 4);
        let g = calogero_upper_nonlinear(&make_r_exponential(), l(0), None, &scheme()).unwrap();
        assert_printed(g, 0.86547, 5);
    }

    #[test]
    fn variational_closed_reference_values() {
        let g = variational_upper_closed(&make_exponential(), l(0), None, &scheme()).unwrap();
        assert_printed(g, 1.4467, 4);
        let g = variational_upper_closed(&make_square_well(), l(0), None, &scheme()).unwrap();
        assert_printed(g, 2.4747, 4);
        let g = variational_upper_closed(&make_square_well(), l(4), None, &scheme()).unwrap();
        assert_printed(g, 50.357, 3);
    }

    #[test]
    fn rayleigh_reference_values() {
        let exp_trial = TrialFunctionSpec::new(TrialFamily::RadialExponential);
        let g = rayleigh_upper(&make_exponential(), l(0), &exp_trial, None, &scheme()).unwrap();
        assert_printed(g, 1.44676, 5);

        let mono1 = TrialFunctionSpec::iterated(TrialFamily::Monomial, 1);
        let g = rayleigh_upper(&make_square_well(), l(0), &mono1, None, &scheme()).unwrap();
        assert_printed(g, 2.4674, 4);

        let mono = TrialFunctionSpec::new(TrialFamily::Monomial);
        let g = rayleigh_upper(&make_square_well(), l(5), &mono, None, &scheme()).unwrap();
        assert_printed(g, 69.295, 3);
    }

    #[test]
    fn rayleigh_iteration_improves() {
        for (shape, family) in [
            (make_square_well(), TrialFamily::Monomial),
            (make_exponential(), TrialFamily::RadialExponential),
        ] {
            let base = rayleigh_upper(
                &shape,
                l(0),
                &TrialFunctionSpec::new(family.clone()),
                None,
                &scheme(),
            )
            .unwrap();
            let better = rayleigh_upper(
                &shape,
                l(0),
                &TrialFunctionSpec::iterated(family, 1),
                None,
                &scheme(),
            )
            .unwrap();
            assert!(better <= base * (1.0 + 1e-10), "{better} vs {base}");
        }
    }

    #[test]
    fn closed_form_matches_power_weighted_rayleigh() {
        for shape in [make_square_well(), make_exponential()] {
            let closed = variational_upper_closed(&shape, l(0), None, &scheme()).unwrap();
            let quotient = rayleigh_upper(
                &shape,
                l(0),
                &TrialFunctionSpec::new(TrialFamily::PowerWeighted),
                None,
                &scheme(),
            )
            .unwrap();
            assert_relative_eq!(closed, quotient, max_relative = 1e-6);
        }
    }

    #[test]
    fn monomial_requires_finite_support() {
        let e = make_exponential();
        let r = rayleigh_upper(
            &e,
            l(0),
            &TrialFunctionSpec::new(TrialFamily::Monomial),
            None,
            &scheme(),
        );
        assert!(matches!(r, Err(Error::NotSquareIntegrable { .. })));
    }

    #[test]
    fn chadan_upper_square_well() {
        let g = chadan_upper(&make_square_well(), l(0), &scheme()).unwrap();
        assert_relative_eq!(g, 3.0, max_relative = 1e-11);
        assert!(g >= 2.4674);
    }

    #[test]
    fn chadan_upper_exponential() {
        let g = chadan_upper(&make_exponential(), l(0), &scheme()).unwrap();
        assert_relative_eq!(g, 2.0, max_relative = 1e-10);
        assert!(g >= 1.4458);
    }
}
