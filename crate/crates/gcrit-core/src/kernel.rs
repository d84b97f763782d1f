//! The zero-energy Green function, the Birman-Schwinger operator acting on
//! radial functions, and traces of its first two iterated kernels.
//!
//! The operator is applied in O(N) per sweep through cumulative prefix and
//! suffix integrals over a fixed radial grid; no kernel matrix is ever
//! materialized.

use crate::error::{Error, Result};
use crate::potential::{AngularMomentum, PotentialShape};
use crate::quadrature::{self, QuadratureScheme, RadialGrid};
use std::sync::Arc;

/// Which space a sampled radial function lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// u(r): the radial wave-function iterate itself.
    Unweighted,
    /// psi(r) = sqrt(v(r)) u(r): the symmetric-kernel eigenfunction space.
    Weighted,
}

/// A radial function sampled on the nodes of a `RadialGrid`.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    meaning: Representation,
}

impl GridFunction {
    pub fn from_values(
        grid: Arc<RadialGrid>,
        values: Vec<f64>,
        meaning: Representation,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            let idx = values.iter().position(|&v| v == bad).unwrap_or(0);
            return Err(Error::NonFinite {
                radius: grid.nodes()[idx],
            });
        }
        Ok(Self {
            grid,
            values,
            meaning,
        })
    }

    pub fn sample(
        grid: Arc<RadialGrid>,
        f: impl Fn(f64) -> f64,
        meaning: Representation,
    ) -> Result<Self> {
        let values = grid.sample(f);
        Self::from_values(grid, values, meaning)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn meaning(&self) -> Representation {
        self.meaning
    }

    fn same_grid(&self, other: &GridFunction) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid)
            || (self.grid.len() == other.grid.len() && self.grid.cutoff() == other.grid.cutoff())
    }
}

/// Zero-energy Green function of the free radial operator,
/// g_l(r, r') = (2l+1)^-1 min(r,r')^(l+1) max(r,r')^(-l).
pub fn green_function(ell: AngularMomentum, r: f64, rp: f64) -> f64 {
    debug_assert!(r > 0.0 && rp > 0.0);
    let lo = r.min(rp);
    let hi = r.max(rp);
    let l = ell.ell() as i32;
    lo.powi(l + 1) * hi.powi(-l) / (2.0 * l as f64 + 1.0)
}

/// The Birman-Schwinger integral operator for one (shape, l) pair, with the
/// potential and the radial powers cached on the grid.
pub struct BsOperator {
    grid: Arc<RadialGrid>,
    ell: AngularMomentum,
    v: Vec<f64>,
    r_up: Vec<f64>,   // r^(l+1)
    r_down: Vec<f64>, // r^(-l)
}

impl BsOperator {
    pub fn new(shape: &PotentialShape, ell: AngularMomentum, grid: Arc<RadialGrid>) -> Self {
        let l = ell.ell() as i32;
        let v = grid.sample(|r| shape.evaluate(r));
        let r_up = grid.sample(|r| r.powi(l + 1));
        let r_down = grid.sample(|r| r.powi(-l));
        Self {
            grid,
            ell,
            v,
            r_up,
            r_down,
        }
    }

    /// Build the grid for (shape, l) and the operator on it in one step.
    pub fn for_shape(
        shape: &PotentialShape,
        ell: AngularMomentum,
        scheme: &QuadratureScheme,
    ) -> Result<Self> {
        let grid = Arc::new(quadrature::build_grid(shape, ell, scheme)?);
        Ok(Self::new(shape, ell, grid))
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn potential_values(&self) -> &[f64] {
        &self.v
    }

    /// The canonical starting iterate u0(r) = r^(l+1).
    pub fn initial_iterate(&self) -> GridFunction {
        GridFunction {
            grid: self.grid.clone(),
            values: self.r_up.clone(),
            meaning: Representation::Unweighted,
        }
    }

    /// One application of the kernel in the unweighted representation:
    ///
    /// u'(r) = (2l+1)^-1 [ r^(-l) I<(r) + r^(l+1) I>(r) ],
    /// I<(r) = integral_0^r s^(l+1) v u ds,  I>(r) = integral_r^inf s^(-l) v u ds.
    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction> {
        assert_eq!(
            u.meaning,
            Representation::Unweighted,
            "apply expects the unweighted representation"
        );
        if !Arc::ptr_eq(&self.grid, &u.grid) {
            return Err(Error::GridMismatch);
        }
        let n = self.grid.len();
        let mut inner = vec![0.0; n];
        let mut outer = vec![0.0; n];
        for i in 0..n {
            let vu = self.v[i] * u.values[i];
            inner[i] = self.r_up[i] * vu;
            outer[i] = self.r_down[i] * vu;
        }
        let (prefix, _) = self.grid.cumulative(&inner);
        let (_, suffix) = self.grid.cumulative(&outer);
        let norm = 1.0 / (2.0 * self.ell.ell() as f64 + 1.0);
        let mut values = vec![0.0; n];
        for i in 0..n {
            values[i] = norm * (self.r_down[i] * prefix[i] + self.r_up[i] * suffix[i]);
            if !values[i].is_finite() {
                return Err(Error::NonFinite {
                    radius: self.grid.nodes()[i],
                });
            }
        }
        Ok(GridFunction {
            grid: self.grid.clone(),
            values,
            meaning: Representation::Unweighted,
        })
    }

    /// v-weighted scalar product of two unweighted functions,
    /// integral of v(r) f(r) g(r) dr; equals <psi_f | psi_g>.
    pub fn weighted_inner(&self, f: &GridFunction, g: &GridFunction) -> Result<f64> {
        if !f.same_grid(g) || !Arc::ptr_eq(&self.grid, &f.grid) {
            return Err(Error::GridMismatch);
        }
        let vals: Vec<f64> = (0..self.grid.len())
            .map(|i| self.v[i] * f.values[i] * g.values[i])
            .collect();
        Ok(self.grid.integral(&vals))
    }
}

/// Convenience wrapper: build the operator for `u`'s grid and apply once.
pub fn apply_operator(
    shape: &PotentialShape,
    ell: AngularMomentum,
    u: &GridFunction,
) -> Result<GridFunction> {
    let op = BsOperator::new(shape, ell, u.grid.clone());
    op.apply(u)
}

/// v-weighted scalar product on the grid both functions share.
pub fn weighted_inner(shape: &PotentialShape, f: &GridFunction, g: &GridFunction) -> Result<f64> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    let grid = &f.grid;
    let vals: Vec<f64> = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &r)| shape.evaluate(r) * f.values[i] * g.values[i])
        .collect();
    Ok(grid.integral(&vals))
}

/// Trace of the first or second iterated Birman-Schwinger kernel at unit
/// strength:
///
/// t1 = (2l+1)^-1 integral r v dr,
/// t2 = double integral of K_l(r,s)^2, folded onto the region s < r:
///      t2 = 2 (2l+1)^-2 integral v(r) r^-2l P(r) dr with P the prefix
///      moment of s^(2l+2) v.
pub fn trace_iterated(
    shape: &PotentialShape,
    ell: AngularMomentum,
    n: u32,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    assert!(n == 1 || n == 2, "only the first two traces are defined");
    let grid = Arc::new(quadrature::build_grid(shape, ell, scheme)?);
    let l = ell.ell() as i32;
    let norm = 1.0 / (2.0 * l as f64 + 1.0);
    let v = grid.sample(|r| shape.evaluate(r));
    if n == 1 {
        let vals: Vec<f64> = grid
            .nodes()
            .iter()
            .zip(&v)
            .map(|(&r, &vv)| r * vv)
            .collect();
        return Ok(norm * grid.integral(&vals));
    }
    let up: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(&v)
        .map(|(&r, &vv)| r.powi(2 * l + 2) * vv)
        .collect();
    let (prefix, _) = grid.cumulative(&up);
    let vals: Vec<f64> = (0..grid.len())
        .map(|i| {
            let r = grid.nodes()[i];
            v[i] * r.powi(-2 * l) * prefix[i]
        })
        .collect();
    Ok(2.0 * norm * norm * grid.integral(&vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{make_exponential, make_square_well};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn scheme() -> QuadratureScheme {
        QuadratureScheme::default()
    }

    fn op_for(shape: &PotentialShape, l: u32) -> BsOperator {
        BsOperator::for_shape(shape, AngularMomentum::new(l), &scheme()).unwrap()
    }

    #[test]
    fn green_function_values() {
        assert_relative_eq!(
            green_function(AngularMomentum::new(0), 2.0, 3.0),
            2.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            green_function(AngularMomentum::new(1), 1.0, 1.0),
            1.0 / 3.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            green_function(AngularMomentum::new(2), 0.5, 2.0),
            0.5f64.powi(3) * 2.0f64.powi(-2) / 5.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn green_function_is_symmetric() {
        for l in 0..4 {
            let ell = AngularMomentum::new(l);
            for &(r, s) in &[(0.3, 1.7), (2.0, 0.01), (5.0, 5.0)] {
                assert_relative_eq!(
                    green_function(ell, r, s),
                    green_function(ell, s, r),
                    max_relative = 1e-15
                );
            }
        }
    }

    #[test]
    fn square_well_first_iterate() {
        // u1(r) = r/2 - r^3/6 inside the well; u1(1) = 1/3
        let sw = make_square_well();
        let op = op_for(&sw, 0);
        let u1 = op.apply(&op.initial_iterate()).unwrap();
        for (i, &r) in op.grid().nodes().iter().enumerate() {
            assert_relative_eq!(
                u1.values()[i],
                0.5 * r - r * r * r / 6.0,
                max_relative = 1e-12
            );
        }
        // and extrapolating to the well edge via the closed form
        assert_relative_eq!(0.5 - 1.0 / 6.0, 1.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn zero_maps_to_zero() {
        let e = make_exponential();
        let op = op_for(&e, 0);
        let zero =
            GridFunction::sample(op.grid().clone(), |_| 0.0, Representation::Unweighted).unwrap();
        let out = op.apply(&zero).unwrap();
        assert!(out.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn weighted_inner_closed_forms() {
        let sw = make_square_well();
        let op = op_for(&sw, 0);
        let u0 = op.initial_iterate();
        assert_relative_eq!(
            op.weighted_inner(&u0, &u0).unwrap(),
            1.0 / 3.0,
            max_relative = 1e-13
        );
        let e = make_exponential();
        let op = op_for(&e, 0);
        let u0 = op.initial_iterate();
        assert_relative_eq!(
            op.weighted_inner(&u0, &u0).unwrap(),
            2.0,
            max_relative = 1e-11
        );
    }

    #[test]
    fn traces_match_hand_values() {
        let sw = make_square_well();
        let l0 = AngularMomentum::new(0);
        assert_relative_eq!(
            trace_iterated(&sw, l0, 1, &scheme()).unwrap(),
            0.5,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            trace_iterated(&sw, l0, 2, &scheme()).unwrap(),
            1.0 / 6.0,
            max_relative = 1e-12
        );
        let e = make_exponential();
        assert_relative_eq!(
            trace_iterated(&e, l0, 1, &scheme()).unwrap(),
            1.0,
            max_relative = 1e-11
        );
        // hand value: t2(E) = 1/2
        assert_relative_eq!(
            trace_iterated(&e, l0, 2, &scheme()).unwrap(),
            0.5,
            max_relative = 1e-10
        );
    }

    #[test]
    fn hilbert_schmidt_trace_finite_up_to_l5() {
        for shape in [make_square_well(), make_exponential()] {
            for l in 0..=5 {
                let t2 = trace_iterated(&shape, AngularMomentum::new(l), 2, &scheme()).unwrap();
                assert!(t2.is_finite() && t2 > 0.0, "t2 = {t2} at l = {l}");
            }
        }
    }

    #[test]
    fn kellogg_first_coefficient_from_iterates() {
        // gamma_1 = sqrt(m0/m2) = 1.5323 for the exponential shape
        let e = make_exponential();
        let op = op_for(&e, 0);
        let u0 = op.initial_iterate();
        let u1 = op.apply(&u0).unwrap();
        let m0 = op.weighted_inner(&u0, &u0).unwrap();
        let m2 = op.weighted_inner(&u1, &u1).unwrap();
        assert_relative_eq!((m0 / m2).sqrt(), 1.5323, epsilon = 1.5e-4);
    }

    #[test]
    fn operator_is_self_adjoint_on_the_grid() {
        let e = make_exponential();
        let op = op_for(&e, 1);
        let f = GridFunction::sample(
            op.grid().clone(),
            |r| r * r / (1.0 + r),
            Representation::Unweighted,
        )
        .unwrap();
        let g = GridFunction::sample(
            op.grid().clone(),
            |r| r * r * (-0.3 * r).exp(),
            Representation::Unweighted,
        )
        .unwrap();
        let lhs = op.weighted_inner(&op.apply(&f).unwrap(), &g).unwrap();
        let rhs = op.weighted_inner(&f, &op.apply(&g).unwrap()).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn apply_is_linear_and_positive(a in 0.1f64..3.0, b in 0.0f64..2.0) {
            let e = make_exponential();
            let op = op_for(&e, 0);
            let f = GridFunction::sample(op.grid().clone(), |r| r, Representation::Unweighted).unwrap();
            let g = GridFunction::sample(op.grid().clone(), |r| r / (1.0 + r), Representation::Unweighted).unwrap();
            let combo = GridFunction::sample(
                op.grid().clone(),
                |r| a * r + b * r / (1.0 + r),
                Representation::Unweighted,
            ).unwrap();
            let lhs = op.apply(&combo).unwrap();
            let fa = op.apply(&f).unwrap();
            let gb = op.apply(&g).unwrap();
            for i in 0..lhs.values().len() {
                let expect = a * fa.values()[i] + b * gb.values()[i];
                prop_assert!((lhs.values()[i] - expect).abs() <= 1e-12 * expect.abs().max(1e-12));
                prop_assert!(lhs.values()[i] >= 0.0);
            }
        }
    }
}
