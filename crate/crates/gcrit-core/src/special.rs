//! Small set of special functions needed by the bounds and the oracle:
//! log-gamma, the Bessel function J0, and spherical Bessel functions with
//! their first zeros.

/// Lanczos coefficients (g = 7, n = 9), good to ~1e-13 relative accuracy.
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Bessel function of the first kind J0 by its power series.
///
/// The series converges for all x; we only ever evaluate it for |x| < 20
/// where cancellation costs at most ~4 digits.
pub fn bessel_j0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= -q / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

/// Spherical Bessel function j_n(x) by upward recurrence.
///
/// Stable for x larger than n, which covers the zero-finding range.
pub fn spherical_bessel_j(n: u32, x: f64) -> f64 {
    assert!(x > 0.0);
    let j0 = x.sin() / x;
    if n == 0 {
        return j0;
    }
    let j1 = x.sin() / (x * x) - x.cos() / x;
    if n == 1 {
        return j1;
    }
    let mut jm = j0;
    let mut j = j1;
    for k in 1..n {
        let next = (2 * k + 1) as f64 / x * j - jm;
        jm = j;
        j = next;
    }
    j
}

/// First positive zero of J_{l - 1/2}.
///
/// For l = 0 this is pi/2 (J_{-1/2} is proportional to cos(x)/sqrt(x));
/// for l >= 1 it is the first zero of the spherical Bessel function j_{l-1}.
pub fn first_zero_j_half_integer(ell: u32) -> f64 {
    if ell == 0 {
        return std::f64::consts::FRAC_PI_2;
    }
    let n = ell - 1;
    // j_{n,1} lies in (n + 2, n + 2 + pi) for all n we care about.
    let lo = n as f64 + 2.0;
    let hi = lo + std::f64::consts::PI;
    bisect_sign_change(|x| spherical_bessel_j(n, x), lo, hi)
}

/// First positive zero of J0, near 2.404826.
pub fn first_zero_j0() -> f64 {
    bisect_sign_change(bessel_j0, 2.0, 3.0)
}

fn bisect_sign_change(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    debug_assert!(flo * f(hi) < 0.0, "bracket does not straddle a zero");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
