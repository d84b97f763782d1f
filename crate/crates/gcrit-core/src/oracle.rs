//! Independent determination of the critical coupling by zero-energy
//! shooting with bisection, plus Bessel-function closed forms for the
//! square well and the exponential well.
//!
//! The radial equation u'' = [ l(l+1)/r^2 - g v(r) ] u is integrated
//! outward with an adaptive Dormand-Prince 5(4) scheme. At the matching
//! radius the solution is decomposed as u = A r^(l+1) + B r^(-l); the sign
//! of A flips exactly at the critical coupling, while interior nodes only
//! appear above it, so "A < 0 or a node" is a sharp monotone bisection
//! predicate.
//!
//! Shapes with an integrable origin singularity (the reduced W_l profiles)
//! are started by solving the equivalent Volterra equation
//! u(r) = r - g integral_0^r (r - r') v(r') u(r') dr' by Picard iteration
//! on a small graded grid, then handed to the ODE integrator.

use crate::error::{Error, Result};
use crate::potential::{AngularMomentum, PotentialShape};
use crate::quadrature::{self, QuadratureScheme};
use crate::special;

/// Knobs for the shooting oracle.
#[derive(Debug, Clone)]
pub struct ShootingConfig {
    /// Start radius for regular shapes (series initialization).
    pub r_start: f64,
    /// Matching radius; `None` extends past the effective range
    /// automatically.
    pub r_end: Option<f64>,
    /// Relative local error of the step controller.
    pub step_tolerance: f64,
    /// Initial bisection bracket for g.
    pub bracket: (f64, f64),
    /// Relative width at which the g bisection stops.
    pub bisect_tolerance: f64,
    /// Give up expanding the bracket beyond this strength.
    pub g_cap: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            r_start: 1e-6,
            r_end: None,
            step_tolerance: 1e-12,
            bracket: (0.0, 4.0),
            bisect_tolerance: 1e-10,
            g_cap: 1e6,
        }
    }
}

/// What one outward integration saw.
#[derive(Debug, Clone, Copy)]
pub struct ShotOutcome {
    /// Interior sign changes of u on (r_start, r_end].
    pub nodes: usize,
    /// Coefficient A of the growing solution r^(l+1) at the matching
    /// radius; positive below the critical coupling.
    pub tail_coefficient: f64,
}

impl ShotOutcome {
    pub fn supercritical(&self) -> bool {
        self.nodes >= 1 || self.tail_coefficient < 0.0
    }
}

/// Integrate outward at strength g and report nodes and tail coefficient.
pub fn shoot(
    shape: &PotentialShape,
    ell: AngularMomentum,
    g: f64,
    config: &ShootingConfig,
    scheme: &QuadratureScheme,
) -> Result<ShotOutcome> {
    assert!(g >= 0.0);
    let shooter = Shooter::prepare(shape, ell, config, scheme)?;
    shooter.shoot(g)
}

/// Bisect on the shooting predicate until the bracket's relative width is
/// below the configured tolerance; returns the midpoint.
pub fn critical_g(
    shape: &PotentialShape,
    ell: AngularMomentum,
    config: &ShootingConfig,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let shooter = Shooter::prepare(shape, ell, config, scheme)?;
    let mut lo = config.bracket.0.max(0.0);
    if lo > 0.0 && shooter.shoot(lo)?.supercritical() {
        lo = 0.0;
    }
    let mut hi = config.bracket.1.max(lo + 1.0);
    while !shooter.shoot(hi)?.supercritical() {
        lo = hi;
        hi *= 2.0;
        if hi > config.g_cap {
            return Err(Error::BracketFailure { cap: config.g_cap });
        }
    }
    while hi - lo > config.bisect_tolerance * 0.5 * (hi + lo) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if shooter.shoot(mid)?.supercritical() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Exact critical coupling of the unit square well in the l-wave: the
/// square of the first positive zero of J_(l-1/2).
pub fn square_well_closed_form(ell: AngularMomentum) -> f64 {
    special::first_zero_j_half_integer(ell.ell()).powi(2)
}

/// Exact S-wave critical coupling of the exponential well: (j_{0,1}/2)^2,
/// from the map of the zero-energy solution onto J0.
pub fn exponential_closed_form() -> f64 {
    let z = special::first_zero_j0();
    0.25 * z * z
}

// ---------------------------------------------------------------------------
// Shooter
// ---------------------------------------------------------------------------

struct Shooter<'a> {
    shape: &'a PotentialShape,
    ell: AngularMomentum,
    config: &'a ShootingConfig,
    scheme: &'a QuadratureScheme,
    r_end: f64,
    splits: Vec<f64>,
    singular: bool,
}

impl<'a> Shooter<'a> {
    fn prepare(
        shape: &'a PotentialShape,
        ell: AngularMomentum,
        config: &'a ShootingConfig,
        scheme: &'a QuadratureScheme,
    ) -> Result<Self> {
        if !(config.r_start > 0.0
            && config.step_tolerance > 0.0
            && config.bisect_tolerance > 0.0
            && config.bracket.0 < config.bracket.1)
        {
            return Err(Error::InvalidConfig {
                reason: "shooting config needs positive tolerances, r_start > 0 and g_lo < g_hi"
                    .into(),
            });
        }
        let singular = shape.origin_exponent() < 0.0;
        if singular && ell.ell() != 0 {
            return Err(Error::InvalidConfig {
                reason: "shooting through a singular origin is supported for l = 0 only".into(),
            });
        }
        let r_end = match config.r_end {
            Some(r) => r,
            None => {
                let power = 2.0 * ell.ell() as f64 + 2.0;
                quadrature::tail_cutoff(shape, power, scheme)?.0
            }
        };
        let mut splits: Vec<f64> = scheme
            .split_points
            .iter()
            .copied()
            .chain(shape.support_cutoff())
            .filter(|s| *s > 0.0 && *s < r_end)
            .collect();
        splits.sort_by(f64::total_cmp);
        splits.dedup();
        Ok(Self {
            shape,
            ell,
            config,
            scheme,
            r_end,
            splits,
            singular,
        })
    }

    fn shoot(&self, g: f64) -> Result<ShotOutcome> {
        let (r0, mut state) = if self.singular {
            self.picard_start(g)?
        } else {
            self.series_start(g)
        };

        let l = self.ell.ell() as f64;
        let centrifugal = l * (l + 1.0);
        let rhs = |r: f64, y: [f64; 2]| {
            [
                y[1],
                (centrifugal / (r * r) - g * self.shape.evaluate(r)) * y[0],
            ]
        };

        let mut nodes = 0usize;
        let mut edges: Vec<f64> = self.splits.iter().copied().filter(|s| *s > r0).collect();
        edges.push(self.r_end);
        let mut r = r0;
        for edge in edges {
            let (end_state, seg_nodes) =
                integrate_dp45(&rhs, r, edge, state, self.config.step_tolerance)?;
            state = end_state;
            nodes += seg_nodes;
            r = edge;
        }

        let (u, up) = (state[0], state[1]);
        let two_l1 = 2.0 * l + 1.0;
        let tail_coefficient = (r * up + l * u) / (two_l1 * r.powf(l + 1.0));
        if !tail_coefficient.is_finite() {
            return Err(Error::NonFinite { radius: r });
        }
        Ok(ShotOutcome {
            nodes,
            tail_coefficient,
        })
    }

    /// Series start u = r^(l+1) [1 - g v(0) r^2 / (2(2l+3))] at a tiny
    /// radius; adequate when v is bounded at the origin.
    fn series_start(&self, g: f64) -> (f64, [f64; 2]) {
        let r = self.config.r_start.min(0.25 * self.r_end);
        let l = self.ell.ell() as f64;
        let v0 = self.shape.evaluate(r);
        let c = -g * v0 / (2.0 * (2.0 * l + 3.0));
        let u = r.powf(l + 1.0) * (1.0 + c * r * r);
        let up = (l + 1.0) * r.powf(l) + c * (l + 3.0) * r.powf(l + 2.0);
        (r, [u, up])
    }

    /// Picard start through an integrable origin singularity: contract the
    /// Volterra form on (0, r0] with r0 small enough that
    /// g * integral_0^r0 r v dr <= 1/4.
    fn picard_start(&self, g: f64) -> Result<(f64, [f64; 2])> {
        let mut r0 = (0.05 * self.r_end).min(0.05);
        let mut kappa = f64::INFINITY;
        for _ in 0..200 {
            kappa = g * quadrature::integrate_graded(
                |r| r * self.shape.evaluate(r),
                r0,
                self.shape.grading() as f64,
                self.scheme,
            )?;
            if kappa <= 0.25 {
                break;
            }
            r0 *= 0.25;
        }
        if kappa > 0.25 {
            return Err(Error::StepFailure {
                radius: r0,
                step: kappa,
            });
        }

        let grid = quadrature::build_origin_grid(self.shape, r0, self.scheme)?;
        let v = grid.sample(|r| self.shape.evaluate(r));
        let nodes = grid.nodes();
        let mut u: Vec<f64> = nodes.to_vec(); // u0 = r
        let mut vu = vec![0.0; grid.len()];
        let mut rvu = vec![0.0; grid.len()];
        for _ in 0..300 {
            for i in 0..grid.len() {
                vu[i] = v[i] * u[i];
                rvu[i] = nodes[i] * vu[i];
            }
            let (p_v, _) = grid.cumulative(&vu);
            let (p_rv, _) = grid.cumulative(&rvu);
            let mut worst: f64 = 0.0;
            for i in 0..grid.len() {
                let next = nodes[i] - g * (nodes[i] * p_v[i] - p_rv[i]);
                worst = worst.max((next - u[i]).abs() / nodes[i]);
                u[i] = next;
            }
            if worst < 5e-15 {
                break;
            }
        }
        for i in 0..grid.len() {
            vu[i] = v[i] * u[i];
            rvu[i] = nodes[i] * vu[i];
        }
        let int_v = grid.integral(&vu);
        let int_rv = grid.integral(&rvu);
        let u0 = r0 - g * (r0 * int_v - int_rv);
        let up0 = 1.0 - g * int_v;
        Ok((r0, [u0, up0]))
    }
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)
// ---------------------------------------------------------------------------

const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate rhs over [a, b] with adaptive steps; returns the final state
/// and the number of sign changes of the first component.
fn integrate_dp45(
    rhs: &impl Fn(f64, [f64; 2]) -> [f64; 2],
    a: f64,
    b: f64,
    y0: [f64; 2],
    rel_tol: f64,
) -> Result<([f64; 2], usize)> {
    if b <= a {
        return Ok((y0, 0));
    }
    let mut r = a;
    let mut y = y0;
    let mut nodes = 0usize;
    let mut amp = [y0[0].abs().max(1e-300), y0[1].abs().max(1e-300)];
    let mut h = ((b - a) / 10.0).min((0.05 * a).max(1e-4));
    let mut k1 = rhs(r, y);
    let mut steps = 0usize;

    while r < b {
        steps += 1;
        if steps > 5_000_000 {
            return Err(Error::StepFailure { radius: r, step: h });
        }
        h = h.min(b - r);
        let mut k = [[0.0; 2]; 7];
        k[0] = k1;
        for stage in 1..7 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let aij = DP_A[stage - 1][j];
                if aij != 0.0 {
                    yi[0] += h * aij * kj[0];
                    yi[1] += h * aij * kj[1];
                }
            }
            k[stage] = rhs(r + DP_C[stage] * h, yi);
        }
        let mut y5 = y;
        let mut y4 = y;
        for j in 0..7 {
            y5[0] += h * DP_B5[j] * k[j][0];
            y5[1] += h * DP_B5[j] * k[j][1];
            y4[0] += h * DP_B4[j] * k[j][0];
            y4[1] += h * DP_B4[j] * k[j][1];
        }
        let mut err: f64 = 0.0;
        for i in 0..2 {
            let scale = rel_tol * (y5[i].abs().max(0.01 * amp[i]) + 1e-300);
            err = err.max((y5[i] - y4[i]).abs() / scale);
        }
        if !err.is_finite() {
            return Err(Error::StepFailure { radius: r, step: h });
        }
        if err <= 1.0 {
            if y[0] != 0.0 && y5[0] != 0.0 && y[0].signum() != y5[0].signum() {
                nodes += 1;
            }
            r += h;
            y = y5;
            amp[0] = amp[0].max(y[0].abs());
            amp[1] = amp[1].max(y[1].abs());
            k1 = k[6]; // FSAL
        } else {
            k1 = k[0];
        }
        let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= factor;
        if h < 1e-15 * r.max(1.0) {
            return Err(Error::StepFailure { radius: r, step: h });
        }
    }
    Ok((y, nodes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{
        make_exponential, make_r_exponential, make_square_well, reduce_to_s_wave,
    };
    use approx::assert_relative_eq;

    fn scheme() -> QuadratureScheme {
        QuadratureScheme::default()
    }

    fn cfg() -> ShootingConfig {
        ShootingConfig::default()
    }

    fn l(n: u32) -> AngularMomentum {
        AngularMomentum::new(n)
    }

    #[test]
    fn free_equation_has_no_nodes() {
        for shape in [make_square_well(), make_exponential()] {
            let out = shoot(&shape, l(0), 0.0, &cfg(), &scheme()).unwrap();
            assert_eq!(out.nodes, 0);
            assert!(out.tail_coefficient > 0.0);
        }
    }

    #[test]
    fn square_well_subcritical_and_supercritical() {
        let sw = make_square_well();
        let sub = shoot(&sw, l(0), 1.0, &cfg(), &scheme()).unwrap();
        assert_eq!(sub.nodes, 0);
        assert!(sub.tail_coefficient > 0.0);
        let sup = shoot(&sw, l(0), 4.0, &cfg(), &scheme()).unwrap();
        assert!(sup.supercritical());
    }

    #[test]
    fn node_count_grows_with_strength() {
        let sw = make_square_well();
        let mut last = 0;
        for g in [1.0, 5.0, 20.0, 60.0, 120.0] {
            let out = shoot(&sw, l(0), g, &cfg(), &scheme()).unwrap();
            assert!(out.nodes >= last, "nodes dropped at g = {g}");
            last = out.nodes;
        }
        assert!(last >= 2);
    }

    #[test]
    fn square_well_matches_bessel_zeros() {
        let sw = make_square_well();
        for ell in 0..=5u32 {
            let shot = critical_g(&sw, l(ell), &cfg(), &scheme()).unwrap();
            let exact = square_well_closed_form(l(ell));
            assert_relative_eq!(shot, exact, max_relative = 1e-8);
        }
    }

    #[test]
    fn exponential_matches_bessel_zero() {
        let e = make_exponential();
        let shot = critical_g(&e, l(0), &cfg(), &scheme()).unwrap();
        assert_relative_eq!(shot, exponential_closed_form(), max_relative = 1e-8);
        assert!((shot - 1.4458).abs() <= 1.5e-4);
    }

    #[test]
    fn r_exponential_reference_value() {
        let pe = make_r_exponential();
        let shot = critical_g(&pe, l(0), &cfg(), &scheme()).unwrap();
        assert!((shot - 0.67668).abs() <= 1.5e-5, "got {shot}");
    }

    #[test]
    fn closed_forms() {
        let quarter_pi_sq = (std::f64::consts::PI / 2.0).powi(2);
        assert_relative_eq!(
            square_well_closed_form(l(0)),
            quarter_pi_sq,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            square_well_closed_form(l(1)),
            std::f64::consts::PI.powi(2),
            max_relative = 1e-11
        );
        assert!((square_well_closed_form(l(2)) - 20.191).abs() <= 1.5e-3);
        assert!((exponential_closed_form() - 1.4458).abs() <= 1.5e-4);
    }

    #[test]
    fn reduction_consistency_square_well_l1() {
        let sw = make_square_well();
        let w1 = reduce_to_s_wave(&sw, l(1));
        let via_reduction = critical_g(&w1, l(0), &cfg(), &scheme()).unwrap();
        assert_relative_eq!(
            via_reduction,
            std::f64::consts::PI.powi(2),
            max_relative = 1e-6
        );
    }
}
