//! Integration engine: adaptive Gauss-Legendre quadrature on finite and
//! semi-infinite intervals, and fixed radial grids with cumulative
//! prefix/suffix integrals for the iterated-kernel machinery.
//!
//! Grids are built per (shape, l) pair and reused across iterations so the
//! quadrature error is coherent from one iterate to the next; the monotone
//! sequences then stay monotone down to machine scale.
//!
//! Panels map a reference coordinate tau in [0,1] to radius via
//! r = (t_lo + (t_hi - t_lo) tau)^power. A power > 1 on a panel touching the
//! origin absorbs algebraic singularities of the reduced potentials W_l
//! (and compresses their stretched-exponential tails), so every integrand
//! the toolkit produces is smooth in tau and the 16-point rule is
//! effectively spectral.

use crate::error::{Error, Result};
use crate::potential::{AngularMomentum, PotentialShape, EPS_TAIL};
use std::cell::Cell;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

/// Nodes per panel.
pub const GL_N: usize = 16;

/// Accuracy and budget knobs for the integration engine.
#[derive(Debug, Clone)]
pub struct QuadratureScheme {
    pub rel_tolerance: f64,
    pub abs_tolerance: f64,
    pub max_nodes: usize,
    /// Radii where the integrand may be non-smooth (e.g. a support edge).
    pub split_points: Vec<f64>,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        Self {
            rel_tolerance: 1e-10,
            abs_tolerance: 1e-14,
            max_nodes: 400_000,
            split_points: Vec::new(),
        }
    }
}

impl QuadratureScheme {
    pub fn with_rel_tolerance(rel: f64) -> Self {
        Self {
            rel_tolerance: rel,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tolerance.is_finite() && self.rel_tolerance > 0.0)
            || !(self.abs_tolerance.is_finite() && self.abs_tolerance > 0.0)
        {
            return Err(Error::InvalidConfig {
                reason: "tolerances must be positive".into(),
            });
        }
        if self.max_nodes < 64 {
            return Err(Error::InvalidConfig {
                reason: format!("max_nodes must be at least 64, got {}", self.max_nodes),
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Gauss-Legendre reference tables
// ---------------------------------------------------------------------------

struct GlReference {
    /// order-16 nodes mapped to [0,1], ascending
    nodes: [f64; GL_N],
    /// matching weights on [0,1]
    weights: [f64; GL_N],
    /// prefix[i][j] = integral of Lagrange basis L_j from 0 to nodes[i]
    prefix: [[f64; GL_N]; GL_N],
    /// suffix[i][j] = integral of L_j from nodes[i] to 1
    suffix: [[f64; GL_N]; GL_N],
    /// order-32 rule on [0,1] for error estimation in the adaptive driver
    nodes32: [f64; 32],
    weights32: [f64; 32],
}

fn legendre_nodes_weights(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Newton iteration on P_n with Chebyshev starting guesses.
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_eval(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[n - 1 - k] = x;
        weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Legendre polynomial P_n(x) and derivative by the three-term recurrence.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn lagrange_basis(nodes: &[f64; GL_N], j: usize, x: f64) -> f64 {
    let mut num = 1.0;
    let mut den = 1.0;
    for k in 0..GL_N {
        if k != j {
            num *= x - nodes[k];
            den *= nodes[j] - nodes[k];
        }
    }
    num / den
}

fn gl_reference() -> &'static GlReference {
    static TABLES: OnceLock<GlReference> = OnceLock::new();
    TABLES.get_or_init(|| {
        let (n16, w16) = legendre_nodes_weights(GL_N);
        let (n32, w32) = legendre_nodes_weights(32);

        let mut nodes = [0.0; GL_N];
        let mut weights = [0.0; GL_N];
        for i in 0..GL_N {
            nodes[i] = 0.5 * (n16[i] + 1.0);
            weights[i] = 0.5 * w16[i];
        }
        let mut nodes32 = [0.0; 32];
        let mut weights32 = [0.0; 32];
        for i in 0..32 {
            nodes32[i] = 0.5 * (n32[i] + 1.0);
            weights32[i] = 0.5 * w32[i];
        }

        // Partial integrals of the Lagrange basis, themselves computed with a
        // 16-point rule (exact: the basis has degree 15).
        let mut prefix = [[0.0; GL_N]; GL_N];
        let mut suffix = [[0.0; GL_N]; GL_N];
        for i in 0..GL_N {
            for j in 0..GL_N {
                let upper = nodes[i];
                let mut acc = 0.0;
                for q in 0..GL_N {
                    acc += weights[q] * upper * lagrange_basis(&nodes, j, upper * nodes[q]);
                }
                prefix[i][j] = acc;
                let span = 1.0 - upper;
                let mut acc = 0.0;
                for q in 0..GL_N {
                    acc += weights[q] * span * lagrange_basis(&nodes, j, upper + span * nodes[q]);
                }
                suffix[i][j] = acc;
            }
        }

        GlReference {
            nodes,
            weights,
            prefix,
            suffix,
            nodes32,
            weights32,
        }
    })
}

// ---------------------------------------------------------------------------
// Adaptive integration
// ---------------------------------------------------------------------------

struct EvalContext<'a> {
    f: &'a dyn Fn(f64) -> f64,
    count: Cell<usize>,
    budget: usize,
    failure: Cell<Option<f64>>,
}

impl<'a> EvalContext<'a> {
    fn eval(&self, x: f64) -> f64 {
        self.count.set(self.count.get() + 1);
        let v = (self.f)(x);
        if !v.is_finite() && self.failure.get().is_none() {
            self.failure.set(Some(x));
        }
        v
    }

    fn check(&self) -> Result<()> {
        if let Some(radius) = self.failure.get() {
            return Err(Error::NonFinite { radius });
        }
        if self.count.get() > self.budget {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
                reached: self.count.get(),
            });
        }
        Ok(())
    }
}

struct PanelEstimate {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for PanelEstimate {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for PanelEstimate {}
impl PartialOrd for PanelEstimate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for PanelEstimate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn estimate_panel(ctx: &EvalContext, lo: f64, hi: f64) -> PanelEstimate {
    let gl = gl_reference();
    let span = hi - lo;
    let mut coarse = 0.0;
    for i in 0..GL_N {
        coarse += gl.weights[i] * ctx.eval(lo + span * gl.nodes[i]);
    }
    coarse *= span;
    let mut fine = 0.0;
    for i in 0..32 {
        fine += gl.weights32[i] * ctx.eval(lo + span * gl.nodes32[i]);
    }
    fine *= span;
    PanelEstimate {
        lo,
        hi,
        value: fine,
        err: (fine - coarse).abs(),
    }
}

/// Integrate `f` over the segments given by `edges` (ascending), refining the
/// worst panel until the summed error estimate meets the tolerance.
fn adaptive_segments(ctx: &EvalContext, edges: &[f64], abs_tol: f64, rel_tol: f64) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        let est = estimate_panel(ctx, w[0], w[1]);
        total += est.value;
        total_err += est.err;
        heap.push(est);
    }
    ctx.check()?;
    loop {
        let target = abs_tol.max(rel_tol * total.abs());
        if total_err <= target {
            return Ok(total);
        }
        let worst = heap.pop().expect("heap cannot be empty while err > 0");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Panel collapsed to machine resolution; accept what we have.
            heap.push(worst);
            return Ok(total);
        }
        total -= worst.value;
        total_err -= worst.err;
        let left = estimate_panel(ctx, worst.lo, mid);
        let right = estimate_panel(ctx, mid, worst.hi);
        total += left.value + right.value;
        total_err += left.err + right.err;
        heap.push(left);
        heap.push(right);
        ctx.check()?;
    }
}

/// Integrate f over (a, b); `b` may be `f64::INFINITY`.
///
/// The infinite tail is handled by geometric extension: panels of doubling
/// width are appended until their contribution is negligible against the
/// accumulated value, which terminates for any integrand with finite support
/// or an (even stretched-) exponential tail.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, scheme: &QuadratureScheme) -> Result<f64> {
    scheme.validate()?;
    let ctx = EvalContext {
        f: &f,
        count: Cell::new(0),
        budget: scheme.max_nodes,
        failure: Cell::new(None),
    };

    let mut splits: Vec<f64> = scheme
        .split_points
        .iter()
        .copied()
        .filter(|s| *s > a && *s < b)
        .collect();
    splits.sort_by(f64::total_cmp);
    splits.dedup();

    if b.is_finite() {
        let mut edges = Vec::with_capacity(splits.len() + 2);
        edges.push(a);
        edges.extend_from_slice(&splits);
        edges.push(b);
        return adaptive_segments(&ctx, &edges, scheme.abs_tolerance, scheme.rel_tolerance);
    }

    // Finite head up to the last split, then geometric extension.
    let mut acc = 0.0;
    let mut cursor = a;
    if !splits.is_empty() {
        let mut edges = Vec::with_capacity(splits.len() + 1);
        edges.push(a);
        edges.extend_from_slice(&splits);
        acc = adaptive_segments(
            &ctx,
            &edges,
            0.5 * scheme.abs_tolerance,
            0.25 * scheme.rel_tolerance,
        )?;
        cursor = *splits.last().unwrap();
    }
    let mut width = (0.5 * cursor.abs()).max(1.0);
    let mut quiet = 0;
    for _ in 0..220 {
        let piece = adaptive_segments(
            &ctx,
            &[cursor, cursor + width],
            0.25 * scheme.abs_tolerance,
            0.25 * scheme.rel_tolerance,
        )?;
        acc += piece;
        cursor += width;
        width *= 2.0;
        if piece.abs() <= 0.1 * scheme.abs_tolerance.max(scheme.rel_tolerance * acc.abs()) {
            quiet += 1;
            if quiet >= 2 {
                return Ok(acc);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::BudgetExhausted {
        budget: scheme.max_nodes,
        reached: ctx.count.get(),
    })
}

/// Integrate f over (0, b) after the substitution r = t^grading, which turns
/// integrable power singularities at the origin into smooth integrands.
pub fn integrate_graded(
    f: impl Fn(f64) -> f64,
    b: f64,
    grading: f64,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    assert!(grading >= 1.0);
    if grading == 1.0 {
        return integrate(f, 0.0, b, scheme);
    }
    let mut sub = scheme.clone();
    sub.split_points = scheme
        .split_points
        .iter()
        .map(|s| s.powf(1.0 / grading))
        .collect();
    let tb = if b.is_finite() {
        b.powf(1.0 / grading)
    } else {
        f64::INFINITY
    };
    integrate(
        |t| f(t.powf(grading)) * grading * t.powf(grading - 1.0),
        0.0,
        tb,
        &sub,
    )
}

// ---------------------------------------------------------------------------
// Radial grids
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct Panel {
    t_lo: f64,
    t_hi: f64,
    power: f64,
    offset: usize,
}

/// A fixed radial quadrature grid with cumulative-integral support.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    panels: Vec<Panel>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    jacobians: Vec<f64>,
    cutoff: f64,
}

impl RadialGrid {
    fn from_panels(mut panels: Vec<Panel>, cutoff: f64) -> Self {
        let gl = gl_reference();
        let mut nodes = Vec::with_capacity(panels.len() * GL_N);
        let mut weights = Vec::with_capacity(panels.len() * GL_N);
        let mut jacobians = Vec::with_capacity(panels.len() * GL_N);
        for panel in &mut panels {
            panel.offset = nodes.len();
            let span = panel.t_hi - panel.t_lo;
            for i in 0..GL_N {
                let t = panel.t_lo + span * gl.nodes[i];
                let r = t.powf(panel.power);
                let jac = span * panel.power * t.powf(panel.power - 1.0);
                nodes.push(r);
                weights.push(gl.weights[i] * jac);
                jacobians.push(jac);
            }
        }
        Self {
            panels,
            nodes,
            weights,
            jacobians,
            cutoff,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Radii, strictly increasing, all inside (0, cutoff).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Integral over (0, cutoff) of a function sampled on the nodes.
    pub fn integral(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Sample a function on the grid nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&r| f(r)).collect()
    }

    /// Cumulative integrals of a sampled integrand: `prefix[i]` approximates
    /// the integral from 0 to node i, `suffix[i]` from node i to the cutoff.
    ///
    /// Both directions are accumulated from positive panel pieces (never as
    /// total minus prefix), so relative accuracy survives in decaying tails.
    pub fn cumulative(&self, values: &[f64]) -> (Vec<f64>, Vec<f64>) {
        debug_assert_eq!(values.len(), self.len());
        let gl = gl_reference();
        let n = self.len();
        let mut prefix = vec![0.0; n];
        let mut suffix = vec![0.0; n];
        let mut panel_totals = vec![0.0; self.panels.len()];

        let mut scaled = vec![0.0; n];
        for i in 0..n {
            scaled[i] = values[i] * self.jacobians[i];
        }

        let dot =
            |row: &[f64; GL_N], g: &[f64]| -> f64 { row.iter().zip(g).map(|(w, x)| w * x).sum() };

        for (p, panel) in self.panels.iter().enumerate() {
            let g = &scaled[panel.offset..panel.offset + GL_N];
            panel_totals[p] = dot(&gl.weights, g);
        }

        let mut before = 0.0;
        for (p, panel) in self.panels.iter().enumerate() {
            let g = &scaled[panel.offset..panel.offset + GL_N];
            for i in 0..GL_N {
                prefix[panel.offset + i] = before + dot(&gl.prefix[i], g);
            }
            before += panel_totals[p];
        }

        let mut after = 0.0;
        for (p, panel) in self.panels.iter().enumerate().rev() {
            let g = &scaled[panel.offset..panel.offset + GL_N];
            for i in 0..GL_N {
                suffix[panel.offset + i] = after + dot(&gl.suffix[i], g);
            }
            after += panel_totals[p];
        }

        (prefix, suffix)
    }
}

/// Width of the uniform panels in the transformed coordinate.
const PANEL_WIDTH_T: f64 = 0.1875;

/// Locate the cutoff radius beyond which the tail of r^power * v is below
/// EPS_TAIL of the whole integral, and return (cutoff, total moment).
pub(crate) fn tail_cutoff(
    shape: &PotentialShape,
    power: f64,
    scheme: &QuadratureScheme,
) -> Result<(f64, f64)> {
    let grading = shape.grading() as f64;
    let moment = |r: f64| r.powf(power) * shape.evaluate(r);
    let total = integrate_graded(moment, f64::INFINITY, grading, scheme).map_err(|e| match e {
        Error::BudgetExhausted { .. } => Error::DivergentMoment { power },
        other => other,
    })?;
    if !(total.is_finite()) {
        return Err(Error::DivergentMoment { power });
    }
    if total <= 0.0 {
        return Err(Error::ZeroPotential);
    }
    if let Some(cut) = shape.support_cutoff() {
        return Ok((cut, total));
    }
    let mut cutoff = shape.effective_range().max(1.0);
    for _ in 0..400 {
        let tail = integrate(moment, cutoff, f64::INFINITY, scheme)?;
        if tail <= EPS_TAIL * total {
            return Ok((cutoff, total));
        }
        cutoff *= 1.25;
    }
    Err(Error::DivergentMoment { power })
}

/// Halvings of the origin panel. Partial integrals inside a panel carry an
/// absolute rounding floor of order eps times the panel mass; panels
/// spanning only a 2:1 radius range keep that floor relative, which matters
/// once r^-l factors or singular weights amplify the origin region.
const ORIGIN_STACK_DEPTH: usize = 40;

fn panels_for_edges(edges: &[f64], power: f64) -> Vec<Panel> {
    let mut panels = Vec::new();
    let mut push_range = |lo: f64, hi: f64| {
        panels.push(Panel {
            t_lo: lo,
            t_hi: hi,
            power,
            offset: 0,
        });
    };
    for w in edges.windows(2) {
        let span = w[1] - w[0];
        if span <= 0.0 {
            continue;
        }
        let count = (span / PANEL_WIDTH_T).ceil().max(1.0) as usize;
        let h = span / count as f64;
        let mut start = 0;
        if w[0] == 0.0 {
            // geometrically refine the panel touching the origin
            let mut top = h;
            let mut stack = Vec::with_capacity(ORIGIN_STACK_DEPTH + 1);
            for _ in 0..ORIGIN_STACK_DEPTH {
                stack.push(top);
                top *= 0.5;
            }
            stack.push(top);
            push_range(0.0, top);
            for pair in stack.windows(2).rev() {
                push_range(pair[1], pair[0]);
            }
            start = 1;
        }
        for k in start..count {
            push_range(w[0] + k as f64 * h, w[0] + (k + 1) as f64 * h);
        }
    }
    panels
}

/// Build the grid used by the iterated-kernel machinery for (shape, l).
///
/// The radial coordinate is graded as r = t^q with q from the shape, the
/// split points include the support edge, and the grid extends to where the
/// tail of r^(2l+2) * v drops below EPS_TAIL of its total.
pub fn build_grid(
    shape: &PotentialShape,
    ell: AngularMomentum,
    scheme: &QuadratureScheme,
) -> Result<RadialGrid> {
    scheme.validate()?;
    let power = 2.0 * ell.ell() as f64 + 2.0;
    let (cutoff, _total) = tail_cutoff(shape, power, scheme)?;
    let q = shape.grading() as f64;

    let mut t_edges = vec![0.0];
    for s in scheme
        .split_points
        .iter()
        .copied()
        .chain(shape.support_cutoff())
    {
        if s > 0.0 && s < cutoff {
            t_edges.push(s.powf(1.0 / q));
        }
    }
    t_edges.push(cutoff.powf(1.0 / q));
    t_edges.sort_by(f64::total_cmp);
    t_edges.dedup();

    let panels = panels_for_edges(&t_edges, q);
    if panels.len() * GL_N > scheme.max_nodes {
        return Err(Error::BudgetExhausted {
            budget: scheme.max_nodes,
            reached: panels.len() * GL_N,
        });
    }
    let grid = RadialGrid::from_panels(panels, cutoff);
    self_check(&grid, shape, scheme)?;
    Ok(grid)
}

/// Build a grid able to integrate fractional powers r^gamma (gamma > -1)
/// against the shape: geometric panels toward the origin, fine uniform
/// panels across the bulk. Used by the variational and closed-form bounds
/// whose trial functions carry non-integer exponents.
pub(crate) fn build_trial_grid(
    shape: &PotentialShape,
    ell: AngularMomentum,
    scheme: &QuadratureScheme,
) -> Result<RadialGrid> {
    scheme.validate()?;
    let power = 2.0 * ell.ell() as f64 + 2.0;
    let (cutoff, _total) = tail_cutoff(shape, power, scheme)?;

    let breakpoint = cutoff
        .min(1.0)
        .min(shape.support_cutoff().unwrap_or(f64::INFINITY));
    let mut edges = Vec::new();
    let mut r = breakpoint * 1e-14;
    while r < breakpoint {
        edges.push(r);
        r *= 1.3;
    }
    edges.push(breakpoint);
    let mut panels: Vec<Panel> = edges
        .windows(2)
        .map(|w| Panel {
            t_lo: w[0],
            t_hi: w[1],
            power: 1.0,
            offset: 0,
        })
        .collect();

    if cutoff > breakpoint {
        let mut upper = vec![breakpoint];
        for s in scheme
            .split_points
            .iter()
            .copied()
            .chain(shape.support_cutoff())
        {
            if s > breakpoint && s < cutoff {
                upper.push(s);
            }
        }
        upper.push(cutoff);
        upper.sort_by(f64::total_cmp);
        upper.dedup();
        let width = (cutoff.min(2.0) / 16.0).min(0.25);
        for w in upper.windows(2) {
            let count = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
            let h = (w[1] - w[0]) / count as f64;
            for k in 0..count {
                panels.push(Panel {
                    t_lo: w[0] + k as f64 * h,
                    t_hi: w[0] + (k + 1) as f64 * h,
                    power: 1.0,
                    offset: 0,
                });
            }
        }
    }

    if panels.len() * GL_N > scheme.max_nodes {
        return Err(Error::BudgetExhausted {
            budget: scheme.max_nodes,
            reached: panels.len() * GL_N,
        });
    }
    let grid = RadialGrid::from_panels(panels, cutoff);
    self_check(&grid, shape, scheme)?;
    Ok(grid)
}

/// Grid over (0, cutoff) only, used by the shooting oracle to start the
/// outward integration through a singular origin.
pub(crate) fn build_origin_grid(
    shape: &PotentialShape,
    cutoff: f64,
    scheme: &QuadratureScheme,
) -> Result<RadialGrid> {
    let q = shape.grading() as f64;
    let t_edges = [0.0, cutoff.powf(1.0 / q)];
    let panels = panels_for_edges(&t_edges, q);
    if panels.len() * GL_N > scheme.max_nodes {
        return Err(Error::BudgetExhausted {
            budget: scheme.max_nodes,
            reached: panels.len() * GL_N,
        });
    }
    Ok(RadialGrid::from_panels(panels, cutoff))
}

/// Verify that the freshly built grid reproduces the adaptive integral of
/// r * v(r) within the scheme tolerance.
fn self_check(grid: &RadialGrid, shape: &PotentialShape, scheme: &QuadratureScheme) -> Result<()> {
    let on_grid = grid.integral(&grid.sample(|r| r * shape.evaluate(r)));
    let adaptive = integrate_graded(
        |r| r * shape.evaluate(r),
        grid.cutoff(),
        shape.grading() as f64,
        scheme,
    )?;
    let tol = 10.0 * scheme.rel_tolerance * adaptive.abs().max(scheme.abs_tolerance);
    if (on_grid - adaptive).abs() > tol {
        return Err(Error::GridSelfCheck {
            grid: on_grid,
            adaptive,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential;
    use approx::assert_relative_eq;

    fn scheme() -> QuadratureScheme {
        QuadratureScheme::default()
    }

    #[test]
    fn unit_exponential_integral() {
        let v = integrate(|r: f64| (-r).exp(), 0.0, f64::INFINITY, &scheme()).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn gamma_two_integral() {
        let v = integrate(|r: f64| r * (-r).exp(), 0.0, f64::INFINITY, &scheme()).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn finite_support_with_split() {
        let mut s = scheme();
        s.split_points = vec![1.0];
        let v = integrate(|r| if r < 1.0 { 1.0 } else { 0.0 }, 0.0, f64::INFINITY, &s).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn graded_integral_handles_origin_singularity() {
        // integral of r^(-9/11) over (0,1) = 11/2
        let v = integrate_graded(|r| r.powf(-9.0 / 11.0), 1.0, 11.0, &scheme()).unwrap();
        assert_relative_eq!(v, 5.5, max_relative = 1e-12);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let e = integrate(|r| (r - 0.5).sqrt(), 0.0, 1.0, &scheme());
        assert!(matches!(e, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn square_well_grid_has_exact_cutoff() {
        let sw = potential::make_square_well();
        let grid = build_grid(&sw, AngularMomentum::new(0), &scheme()).unwrap();
        assert_eq!(grid.cutoff(), 1.0);
        assert!(grid.nodes().iter().all(|&r| r < 1.0));
        // grid integral of r*v equals 1/2 exactly for the polynomial case
        let m = grid.integral(&grid.sample(|r| r * sw.evaluate(r)));
        assert_relative_eq!(m, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn exponential_grid_reaches_the_tail() {
        let e = potential::make_exponential();
        let grid = build_grid(&e, AngularMomentum::new(0), &scheme()).unwrap();
        assert!(grid.cutoff() >= 30.0, "cutoff {}", grid.cutoff());
        let m = grid.integral(&grid.sample(|r| r * e.evaluate(r)));
        assert_relative_eq!(m, 1.0, max_relative = 1e-12);
        let m2 = grid.integral(&grid.sample(|r| r * r * e.evaluate(r)));
        assert_relative_eq!(m2, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn reduced_square_well_grid_clusters_at_origin() {
        let sw = potential::make_square_well();
        let w1 = potential::reduce_to_s_wave(&sw, AngularMomentum::new(1));
        let grid = build_grid(&w1, AngularMomentum::new(0), &scheme()).unwrap();
        let nodes = grid.nodes();
        let first_gap = nodes[1] - nodes[0];
        let last_gap = nodes[nodes.len() - 1] - nodes[nodes.len() - 2];
        assert!(first_gap < 1e-3 * last_gap);
    }

    #[test]
    fn cumulative_matches_closed_form() {
        let sw = potential::make_square_well();
        let grid = build_grid(&sw, AngularMomentum::new(0), &scheme()).unwrap();
        let vals = grid.sample(|r| r);
        let (prefix, suffix) = grid.cumulative(&vals);
        for (i, &r) in grid.nodes().iter().enumerate() {
            assert_relative_eq!(prefix[i], 0.5 * r * r, max_relative = 1e-9);
            assert_relative_eq!(suffix[i], 0.5 * (1.0 - r * r), max_relative = 1e-12);
        }
    }

    #[test]
    fn grid_matches_adaptive_for_builtins() {
        for shape in [
            potential::make_square_well(),
            potential::make_exponential(),
            potential::make_r_exponential(),
        ] {
            let grid = build_grid(&shape, AngularMomentum::new(0), &scheme()).unwrap();
            for p in [1.0, 2.0] {
                let on_grid = grid.integral(&grid.sample(|r| r.powf(p) * shape.evaluate(r)));
                let adaptive = integrate(
                    |r| r.powf(p) * shape.evaluate(r),
                    0.0,
                    f64::INFINITY,
                    &scheme(),
                )
                .unwrap();
                assert_relative_eq!(on_grid, adaptive, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn grid_nodes_increase_and_weights_are_positive() {
        for shape in [
            potential::make_square_well(),
            potential::make_exponential(),
            potential::make_r_exponential(),
        ] {
            for l in [0u32, 3] {
                let grid = build_grid(&shape, AngularMomentum::new(l), &scheme()).unwrap();
                assert!(grid.len() >= 64);
                assert!(grid.nodes().windows(2).all(|w| w[0] < w[1]));
                assert!(grid.weights().iter().all(|&w| w > 0.0));
                assert!(grid.nodes()[0] > 0.0);
            }
        }
    }

    #[test]
    fn doubling_the_budget_is_stable() {
        let mut small = scheme();
        small.max_nodes = 100_000;
        let mut big = scheme();
        big.max_nodes = 200_000;
        let f = |r: f64| r * r * (-r).exp() * (1.0 + (3.0 * r).sin().powi(2));
        let a = integrate(f, 0.0, f64::INFINITY, &small).unwrap();
        let b = integrate(f, 0.0, f64::INFINITY, &big).unwrap();
        assert!((a - b).abs() <= small.rel_tolerance * a.abs());
    }

    #[test]
    fn budget_is_enforced() {
        let mut s = scheme();
        s.max_nodes = 64;
        s.rel_tolerance = 1e-13;
        let e = integrate(|r: f64| (r.abs() + 1e-300).sqrt().recip(), 0.0, 1.0, &s);
        assert!(matches!(e, Err(Error::BudgetExhausted { .. })));
    }
}
