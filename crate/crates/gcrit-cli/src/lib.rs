//! Library behind the `gcrit` binary: potential/method selection, bound
//! computation to flat result records, output formatting, and reproduction
//! of the reference tables against the fixture shipped in `fixtures/`.

pub mod records;
pub mod tables;

use gcrit_core::classic_bounds::{self, TrialFamily, TrialFunctionSpec};
use gcrit_core::sequences::{self, Direction};
use gcrit_core::{oracle, potential, AngularMomentum, PotentialShape, QuadratureScheme};
use records::{BoundType, Provenance, ResultRecord};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Errors at the request layer: bad selectors are usage errors, everything
/// else is a numeric failure bubbled up from the core.
#[derive(Debug)]
pub enum CliError {
    UnknownPotential(String),
    UnknownMethod(String),
    UnknownTable(u32),
    BadTolerance(String),
    BadRequest(String),
    Numeric(gcrit_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::UnknownPotential(s) => {
                write!(f, "unknown potential {s:?} (expected sw|exp|pe|file:PATH)")
            }
            CliError::UnknownMethod(s) => write!(
                f,
                "unknown method {s:?} (expected power,kellogg,kolomy,alpha,omega,glaser,\
                 calogero1,calogero2,variational,rayleigh,chadan)"
            ),
            CliError::UnknownTable(n) => write!(f, "no table {n}; pick one of 1..=5"),
            CliError::BadTolerance(s) => write!(f, "cannot parse tolerance {s:?}"),
            CliError::BadRequest(s) => write!(f, "{s}"),
            CliError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<gcrit_core::Error> for CliError {
    fn from(e: gcrit_core::Error) -> Self {
        CliError::Numeric(e)
    }
}

impl CliError {
    /// Process exit status: 1 for usage errors, 2 for numeric failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 2,
            _ => 1,
        }
    }
}

// ---------------------------------------------------------------------------
// Selectors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSelector {
    SquareWell,
    Exponential,
    RExponential,
    File(PathBuf),
}

impl FromStr for PotentialSelector {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "sw" | "squarewell" | "square-well" | "square_well" => Ok(Self::SquareWell),
            "exp" | "e" | "exponential" => Ok(Self::Exponential),
            "pe" | "rexp" | "r-exponential" | "r_exponential" => Ok(Self::RExponential),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Self::File(PathBuf::from(path))),
                _ => Err(CliError::UnknownPotential(s.to_string())),
            },
        }
    }
}

impl PotentialSelector {
    pub fn resolve(&self) -> Result<PotentialShape, CliError> {
        Ok(match self {
            Self::SquareWell => potential::make_square_well(),
            Self::Exponential => potential::make_exponential(),
            Self::RExponential => potential::make_r_exponential(),
            Self::File(path) => potential::load_table(path)?,
        })
    }

    /// Short name used in records and table rows.
    pub fn tag(&self) -> String {
        match self {
            Self::SquareWell => "sw".into(),
            Self::Exponential => "exp".into(),
            Self::RExponential => "pe".into(),
            Self::File(p) => format!("file:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Power,
    Kellogg,
    Kolomy,
    Alpha,
    Omega,
    Glaser,
    Calogero1,
    Calogero2,
    Variational,
    Rayleigh,
    Chadan,
}

impl FromStr for MethodChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "power" => Ok(Self::Power),
            "kellogg" => Ok(Self::Kellogg),
            "kolomy" => Ok(Self::Kolomy),
            "alpha" => Ok(Self::Alpha),
            "omega" => Ok(Self::Omega),
            "glaser" => Ok(Self::Glaser),
            "calogero1" => Ok(Self::Calogero1),
            "calogero2" => Ok(Self::Calogero2),
            "variational" => Ok(Self::Variational),
            "rayleigh" => Ok(Self::Rayleigh),
            "chadan" => Ok(Self::Chadan),
            _ => Err(CliError::UnknownMethod(s.to_string())),
        }
    }
}

impl MethodChoice {
    pub fn parse_list(csv: &str) -> Result<Vec<MethodChoice>, CliError> {
        let mut out = Vec::new();
        for item in csv.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            out.push(item.parse()?);
        }
        if out.is_empty() {
            return Err(CliError::UnknownMethod(csv.to_string()));
        }
        Ok(out)
    }
}

/// Default Rayleigh trial for a shape: a pure power on finite supports, a
/// decaying exponential times r otherwise.
pub fn default_trial(shape: &PotentialShape) -> TrialFunctionSpec {
    if shape.support_cutoff().is_some() {
        TrialFunctionSpec::new(TrialFamily::Monomial)
    } else {
        TrialFunctionSpec::new(TrialFamily::RadialExponential)
    }
}

// ---------------------------------------------------------------------------
// Bounds command
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RunRequest {
    pub potential: PotentialSelector,
    pub ell: u32,
    pub methods: Vec<MethodChoice>,
    pub n_max: usize,
    pub scheme: QuadratureScheme,
}

#[derive(Debug, Clone)]
pub struct BoundsOutcome {
    pub records: Vec<ResultRecord>,
    pub bracket_lower: Option<(f64, String)>,
    pub bracket_upper: Option<(f64, String)>,
}

pub fn run_bounds(request: &RunRequest) -> Result<BoundsOutcome, CliError> {
    assert!(request.n_max >= 1);
    let shape = request.potential.resolve()?;
    let tag = request.potential.tag();
    let ell = AngularMomentum::new(request.ell);
    let scheme = &request.scheme;
    let mut records = Vec::new();

    let push_seq = |seq: &sequences::BoundSequence, records: &mut Vec<ResultRecord>| {
        for (k, &bound) in seq.bounds_on_gc.iter().enumerate() {
            records.push(ResultRecord {
                potential: tag.clone(),
                ell: request.ell,
                method: seq.method.label().to_string(),
                n: Some(seq.index(k)),
                value: bound,
                bound_type: match seq.direction {
                    Direction::Upper => BoundType::Upper,
                    Direction::Lower => BoundType::Lower,
                },
                provenance: Provenance::Sequence,
            });
        }
    };

    for method in &request.methods {
        match method {
            MethodChoice::Power => {
                let seq = sequences::power_sequence(&shape, ell, request.n_max, scheme)?;
                push_seq(&seq, &mut records);
            }
            MethodChoice::Kellogg => {
                let seq = sequences::kellogg_sequence(&shape, ell, request.n_max, scheme)?;
                push_seq(&seq, &mut records);
            }
            MethodChoice::Kolomy => {
                let seq = sequences::kolomy_sequence(&shape, ell, request.n_max, scheme)?;
                push_seq(&seq, &mut records);
            }
            MethodChoice::Alpha | MethodChoice::Omega => {
                let (alpha, omega) = sequences::alpha_omega(&shape, ell, request.n_max, scheme)?;
                match method {
                    MethodChoice::Alpha => push_seq(&alpha, &mut records),
                    _ => push_seq(&omega, &mut records),
                }
            }
            MethodChoice::Glaser => {
                let v = classic_bounds::glaser_lower(&shape, ell, None, scheme)?;
                records.push(closed_form_record(
                    &tag,
                    request.ell,
                    "glaser",
                    v,
                    BoundType::Lower,
                ));
            }
            MethodChoice::Calogero1 => {
                let v = classic_bounds::calogero_upper_linear(&shape, ell, None, scheme)?;
                records.push(closed_form_record(
                    &tag,
                    request.ell,
                    "calogero1",
                    v,
                    BoundType::Upper,
                ));
            }
            MethodChoice::Calogero2 => {
                let v = classic_bounds::calogero_upper_nonlinear(&shape, ell, None, scheme)?;
                records.push(closed_form_record(
                    &tag,
                    request.ell,
                    "calogero2",
                    v,
                    BoundType::Upper,
                ));
            }
            MethodChoice::Variational => {
                let v = classic_bounds::variational_upper_closed(&shape, ell, None, scheme)?;
                records.push(closed_form_record(
                    &tag,
                    request.ell,
                    "variational",
                    v,
                    BoundType::Upper,
                ));
            }
            MethodChoice::Rayleigh => {
                let trial = default_trial(&shape);
                let v = classic_bounds::rayleigh_upper(&shape, ell, &trial, None, scheme)?;
                records.push(closed_form_record(
                    &tag,
                    request.ell,
                    "rayleigh",
                    v,
                    BoundType::Upper,
                ));
            }
            MethodChoice::Chadan => {
                let v = classic_bounds::chadan_upper(&shape, ell, scheme)?;
                records.push(closed_form_record(
                    &tag,
                    request.ell,
                    "chadan",
                    v,
                    BoundType::Upper,
                ));
            }
        }
    }

    let mut bracket_lower: Option<(f64, String)> = None;
    let mut bracket_upper: Option<(f64, String)> = None;
    for r in &records {
        let descr = match r.n {
            Some(n) => format!("{}[n={}]", r.method, n),
            None => r.method.clone(),
        };
        match r.bound_type {
            BoundType::Lower => {
                if bracket_lower.as_ref().is_none_or(|(v, _)| r.value > *v) {
                    bracket_lower = Some((r.value, descr));
                }
            }
            BoundType::Upper => {
                if bracket_upper.as_ref().is_none_or(|(v, _)| r.value < *v) {
                    bracket_upper = Some((r.value, descr));
                }
            }
            BoundType::Exact => {}
        }
    }
    if let (Some((lo, _)), Some((hi, _))) = (&bracket_lower, &bracket_upper) {
        let slack = 100.0 * request.scheme.rel_tolerance * hi.abs();
        if *lo > *hi + slack {
            return Err(CliError::Numeric(gcrit_core::Error::InconsistentBracket {
                lower: *lo,
                upper: *hi,
            }));
        }
    }

    Ok(BoundsOutcome {
        records,
        bracket_lower,
        bracket_upper,
    })
}

fn closed_form_record(
    tag: &str,
    ell: u32,
    method: &str,
    value: f64,
    bound_type: BoundType,
) -> ResultRecord {
    ResultRecord {
        potential: tag.to_string(),
        ell,
        method: method.to_string(),
        n: None,
        value,
        bound_type,
        provenance: Provenance::ClosedForm,
    }
}

// ---------------------------------------------------------------------------
// Oracle command
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub record: ResultRecord,
    /// Closed-form value and its difference to the shooting result, when a
    /// closed form exists for the selected potential.
    pub closed_form: Option<(f64, f64)>,
}

pub fn run_oracle(
    selector: &PotentialSelector,
    ell: u32,
    scheme: &QuadratureScheme,
) -> Result<OracleOutcome, CliError> {
    let shape = selector.resolve()?;
    let config = oracle::ShootingConfig::default();
    let g = oracle::critical_g(&shape, AngularMomentum::new(ell), &config, scheme)?;
    let closed = match selector {
        PotentialSelector::SquareWell => {
            Some(oracle::square_well_closed_form(AngularMomentum::new(ell)))
        }
        PotentialSelector::Exponential if ell == 0 => Some(oracle::exponential_closed_form()),
        _ => None,
    };
    Ok(OracleOutcome {
        record: ResultRecord {
            potential: selector.tag(),
            ell,
            method: "shooting".into(),
            n: None,
            value: g,
            bound_type: BoundType::Exact,
            provenance: Provenance::Oracle,
        },
        closed_form: closed.map(|c| (c, g - c)),
    })
}

/// Build the quadrature scheme from the optional --tol flag and the
/// GCRIT_TOL environment variable (flag wins).
pub fn scheme_from(
    tol_flag: Option<f64>,
    env_tol: Option<&str>,
) -> Result<QuadratureScheme, CliError> {
    let mut scheme = QuadratureScheme::default();
    if let Some(text) = env_tol {
        let v: f64 = text
            .trim()
            .parse()
            .map_err(|_| CliError::BadTolerance(text.to_string()))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::BadTolerance(text.to_string()));
        }
        scheme.rel_tolerance = v;
    }
    if let Some(v) = tol_flag {
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::BadTolerance(v.to_string()));
        }
        scheme.rel_tolerance = v;
    }
    Ok(scheme)
}
