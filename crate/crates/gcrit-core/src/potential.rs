//! Attractive radial potential shapes.
//!
//! A `PotentialShape` is the reduced profile v(r) >= 0 of an attractive
//! potential V(r) = -g v(r), with the metadata the quadrature and shooting
//! machinery needs: the support edge, the effective range of the r v(r)
//! moment, the leading power at the origin, and the coordinate grading that
//! regularizes reduced shapes.
//!
//! All radii are in units of the natural length scale of the shape, which a
//! global rescaling sets to one without moving the critical coupling.

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureScheme};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

/// Fraction of the r v(r) moment allowed beyond the effective range.
///
/// Sits far below the five-significant-digit targets of the reference
/// tables.
pub const EPS_TAIL: f64 = 1e-12;

/// Angular momentum channel l with its half-integer companion lambda = l + 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AngularMomentum(u32);

impl AngularMomentum {
    pub fn new(ell: u32) -> Self {
        Self(ell)
    }

    pub fn ell(&self) -> u32 {
        self.0
    }

    /// lambda = l + 1/2, the order parameter of the radial problem.
    pub fn lambda(&self) -> f64 {
        self.0 as f64 + 0.5
    }
}

impl fmt::Display for AngularMomentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l={}", self.0)
    }
}

#[derive(Debug, Clone)]
enum ShapeKind {
    SquareWell,
    Exponential,
    RExponential,
    Table(Arc<MonotoneTable>),
    /// S-wave image W_l of an l-wave problem, with order m = 2l + 1:
    /// W(r) = m^-2 v(r^(1/m)) r^(-2(m-1)/m).
    Reduced {
        inner: Box<PotentialShape>,
        order: u32,
    },
}

/// An attractive radial profile v(r) >= 0 with integrability metadata.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone)]
pub struct PotentialShape {
    kind: ShapeKind,
    support_cutoff: Option<f64>,
    effective_range: f64,
    origin_exponent: f64,
    grading: u32,
    label: String,
}

impl PotentialShape {
    /// The shape value v(r). Nonnegative for every r >= 0; may diverge at
    /// r = 0 for reduced shapes (integrably, like r^origin_exponent).
    pub fn evaluate(&self, r: f64) -> f64 {
        match &self.kind {
            ShapeKind::SquareWell => {
                if r < 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            ShapeKind::Exponential => (-r).exp(),
            ShapeKind::RExponential => r * (-r).exp(),
            ShapeKind::Table(table) => table.evaluate(r),
            ShapeKind::Reduced { inner, order } => {
                let m = *order as f64;
                let s = 2.0 * (m - 1.0) / m;
                inner.evaluate(r.powf(1.0 / m)) * r.powf(-s) / (m * m)
            }
        }
    }

    /// Radius beyond which v vanishes exactly, when the support is finite.
    pub fn support_cutoff(&self) -> Option<f64> {
        self.support_cutoff
    }

    /// Radius beyond which the tail of the r v(r) moment is below EPS_TAIL.
    pub fn effective_range(&self) -> f64 {
        self.effective_range
    }

    /// Leading power s with v(r) ~ r^s as r -> 0.
    pub fn origin_exponent(&self) -> f64 {
        self.origin_exponent
    }

    /// Power q of the coordinate substitution r = t^q that makes every
    /// integrand of this shape smooth; 1 for the native shapes, 2l+1 after
    /// each S-wave reduction.
    pub fn grading(&self) -> u32 {
        self.grading
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Moment integral of r^power * v(r) over (0, infinity).
    pub fn moment(&self, power: f64, scheme: &QuadratureScheme) -> Result<f64> {
        let mut sub = scheme.clone();
        if let Some(cut) = self.support_cutoff {
            sub.split_points.push(cut);
        }
        quadrature::integrate_graded(
            |r| r.powf(power) * self.evaluate(r),
            f64::INFINITY,
            self.grading as f64,
            &sub,
        )
    }
}

fn effective_range_for(
    eval: &dyn Fn(f64) -> f64,
    start: f64,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let total = quadrature::integrate(|r| r * eval(r), 0.0, f64::INFINITY, scheme)?;
    if total <= 0.0 {
        return Err(Error::ZeroPotential);
    }
    let mut range = start.max(1.0);
    for _ in 0..400 {
        let tail = quadrature::integrate(|r| r * eval(r), range, f64::INFINITY, scheme)?;
        if tail <= EPS_TAIL * total {
            return Ok(range);
        }
        range *= 1.25;
    }
    Err(Error::DivergentMoment { power: 1.0 })
}

/// The square well: v(r) = 1 for r < 1, 0 beyond.
pub fn make_square_well() -> PotentialShape {
    PotentialShape {
        kind: ShapeKind::SquareWell,
        support_cutoff: Some(1.0),
        effective_range: 1.0,
        origin_exponent: 0.0,
        grading: 1,
        label: "square well".into(),
    }
}

/// The exponential shape v(r) = exp(-r).
pub fn make_exponential() -> PotentialShape {
    let scheme = QuadratureScheme::default();
    let range = effective_range_for(&|r: f64| (-r).exp(), 1.0, &scheme)
        .expect("exponential moment is finite");
    PotentialShape {
        kind: ShapeKind::Exponential,
        support_cutoff: None,
        effective_range: range,
        origin_exponent: 0.0,
        grading: 1,
        label: "exponential".into(),
    }
}

/// The non-monotonic shape v(r) = r exp(-r), maximal at r = 1.
pub fn make_r_exponential() -> PotentialShape {
    let scheme = QuadratureScheme::default();
    let range = effective_range_for(&|r: f64| r * (-r).exp(), 1.0, &scheme)
        .expect("r-exponential moment is finite");
    PotentialShape {
        kind: ShapeKind::RExponential,
        support_cutoff: None,
        effective_range: range,
        origin_exponent: 1.0,
        grading: 1,
        label: "r-exponential".into(),
    }
}

/// Shape interpolating tabulated (radius, value) samples.
///
/// Monotone local interpolation keeps the interpolant nonnegative between
/// nonnegative nodes; beyond the last radius the shape is exactly zero.
pub fn from_table(samples: &[(f64, f64)]) -> Result<PotentialShape> {
    let table = MonotoneTable::new(samples)?;
    let last = table.radii[table.radii.len() - 1];
    Ok(PotentialShape {
        kind: ShapeKind::Table(Arc::new(table)),
        support_cutoff: Some(last),
        effective_range: last,
        origin_exponent: 0.0,
        grading: 1,
        label: "tabulated".into(),
    })
}

/// Load a tabulated shape from a two-column text file (radius, value),
/// whitespace- or comma-separated, with '#' comments.
pub fn load_table(path: impl AsRef<Path>) -> Result<PotentialShape> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let mut samples = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty());
        let parse = |s: Option<&str>| -> Result<f64> {
            s.and_then(|t| t.parse::<f64>().ok())
                .ok_or(Error::TableParse {
                    line: idx + 1,
                    content: raw.to_string(),
                })
        };
        let r = parse(parts.next())?;
        let v = parse(parts.next())?;
        samples.push((r, v));
    }
    let mut shape = from_table(&samples)?;
    shape.label = "table file".into();
    Ok(shape)
}

/// Map the l-wave critical problem for `shape` to an equivalent S-wave one.
///
/// W_l(r) = (2l+1)^-2 v(r^(1/(2l+1))) / r^(4l/(2l+1)); the S-wave critical
/// coupling of W_l equals the l-wave critical coupling of the original
/// shape. For l = 0 the shape is returned unchanged.
pub fn reduce_to_s_wave(shape: &PotentialShape, ell: AngularMomentum) -> PotentialShape {
    let l = ell.ell();
    if l == 0 {
        return shape.clone();
    }
    let m = 2 * l + 1;
    let mf = m as f64;
    let label = format!("{} (l={} reduced)", shape.label, l);
    PotentialShape {
        support_cutoff: shape.support_cutoff.map(|c| c.powi(m as i32)),
        effective_range: shape.effective_range.powi(m as i32),
        origin_exponent: (shape.origin_exponent - 4.0 * l as f64) / mf,
        grading: shape.grading * m,
        kind: ShapeKind::Reduced {
            inner: Box::new(shape.clone()),
            order: m,
        },
        label,
    }
}

// ---------------------------------------------------------------------------
// Monotone (Fritsch-Carlson) table interpolation
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct MonotoneTable {
    radii: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneTable {
    fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::TooFewPoints {
                count: samples.len(),
            });
        }
        for (i, &(r, v)) in samples.iter().enumerate() {
            if i > 0 && r <= samples[i - 1].0 {
                return Err(Error::NonMonotonicGrid { index: i });
            }
            if v < 0.0 {
                return Err(Error::NegativeValue {
                    radius: r,
                    value: v,
                });
            }
        }
        let radii: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let values: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let n = radii.len();
        let h: Vec<f64> = radii.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1)
            .map(|i| (values[i + 1] - values[i]) / h[i])
            .collect();

        let mut slopes = vec![0.0; n];
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                slopes[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        slopes[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
        slopes[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);

        Ok(Self {
            radii,
            values,
            slopes,
        })
    }

    fn evaluate(&self, r: f64) -> f64 {
        let n = self.radii.len();
        if r <= self.radii[0] {
            return self.values[0];
        }
        if r >= self.radii[n - 1] {
            // node values are reproduced exactly; beyond the table v = 0
            return if r == self.radii[n - 1] {
                self.values[n - 1]
            } else {
                0.0
            };
        }
        let k = match self.radii.partition_point(|&x| x <= r) {
            0 => 0,
            idx => idx - 1,
        };
        let h = self.radii[k + 1] - self.radii[k];
        let t = (r - self.radii[k]) / h;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (d0, d1) = (self.slopes[k], self.slopes[k + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + d0 * h * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + d1 * h * (t3 - t2)
    }
}

/// One-sided slope estimate at an endpoint, limited so the first interval
/// stays monotone.
fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}
