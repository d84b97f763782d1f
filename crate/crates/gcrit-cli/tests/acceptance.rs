//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Run with `cargo test -p gcrit-cli --test acceptance -- --nocapture` to
//! see the per-criterion lines.

use gcrit_cli::tables;
use gcrit_core::jost::{self, JostSeries};
use gcrit_core::oracle::{self, ShootingConfig};
use gcrit_core::potential::{
    make_exponential, make_r_exponential, make_square_well, reduce_to_s_wave,
};
use gcrit_core::{kernel, sequences, AngularMomentum, PotentialShape, QuadratureScheme};
use std::time::Instant;

fn scheme() -> QuadratureScheme {
    QuadratureScheme::default()
}

fn l(n: u32) -> AngularMomentum {
    AngularMomentum::new(n)
}

fn builtins() -> Vec<PotentialShape> {
    vec![make_square_well(), make_exponential(), make_r_exponential()]
}

/// The eight rows of every reference table: E, PE, SW for l = 0..=5.
fn table_rows() -> Vec<(PotentialShape, u32)> {
    let mut rows = vec![(make_exponential(), 0), (make_r_exponential(), 0)];
    for ell in 0..=5 {
        rows.push((make_square_well(), ell));
    }
    rows
}

fn check_table(number: u32, name: &str) {
    let start = Instant::now();
    let report = tables::reproduce(number, &scheme()).expect("table computes");
    let elapsed = start.elapsed();
    for cell in &report.cells {
        assert!(
            cell.pass,
            "table {number} cell {} l={} {}: computed {} vs target {} (tol {})",
            cell.potential,
            cell.ell,
            cell.column,
            cell.computed,
            cell.target(),
            cell.tolerance
        );
    }
    println!(
        "[acceptance] criterion {number:2} ({name}): PASS — {} cells in {:.2?}",
        report.cells.len(),
        elapsed
    );
}

#[test]
fn criterion_01_table1_kellogg_cells() {
    let start = Instant::now();
    check_table(1, "table 1, Kellogg gamma_n and exact");
    assert!(
        start.elapsed().as_secs_f64() < 10.0,
        "table 1 must reproduce in under 10 s"
    );
}

#[test]
fn criterion_02_table2_kolomy_cells() {
    check_table(2, "table 2, Kolomy beta_n");
}

#[test]
fn criterion_03_table3_variational_cells() {
    check_table(3, "table 3, variational columns");
}

#[test]
fn criterion_04_table4_alpha_omega_cells() {
    check_table(4, "table 4, alpha/omega ladders");
}

#[test]
fn criterion_05_table5_classic_bounds_cells() {
    check_table(5, "table 5, closed-form limits");
}

/// Guard for the four fixture errata: each annotated cell must still
/// disagree with its printed value (beyond tolerance) while matching the
/// independently derived correction. If a future change makes a printed
/// value reachable, this fails and the annotation must be removed.
#[test]
fn documented_errata_remain_genuine() {
    let mut seen = 0;
    for table in 1..=5 {
        let report = tables::reproduce(table, &scheme()).expect("table computes");
        for cell in report.cells.iter().filter(|c| c.corrected.is_some()) {
            let printed: f64 = cell.printed.parse().unwrap();
            let corrected = cell.corrected.unwrap();
            assert!(
                (cell.computed - printed).abs() > cell.tolerance,
                "cell {} l={} {} now matches its printed value; stale erratum?",
                cell.potential,
                cell.ell,
                cell.column
            );
            assert!(
                (cell.computed - corrected).abs() <= cell.tolerance,
                "cell {} l={} {} does not match its correction",
                cell.potential,
                cell.ell,
                cell.column
            );
            seen += 1;
        }
    }
    assert_eq!(seen, 4, "exactly four annotated cells are expected");
    println!("[acceptance] erratum guard: PASS — 4 annotated cells verified");
}

#[test]
fn criterion_06_oracle_against_closed_forms() {
    let cfg = ShootingConfig::default();
    let sw = make_square_well();
    for ell in 0..=5u32 {
        let shot = oracle::critical_g(&sw, l(ell), &cfg, &scheme()).unwrap();
        let exact = oracle::square_well_closed_form(l(ell));
        let rel = (shot - exact).abs() / exact;
        assert!(
            rel < 1e-8,
            "sw l={ell}: shooting {shot} vs closed {exact} (rel {rel:e})"
        );
    }
    let e = make_exponential();
    let shot = oracle::critical_g(&e, l(0), &cfg, &scheme()).unwrap();
    let exact = oracle::exponential_closed_form();
    let rel = (shot - exact).abs() / exact;
    assert!(
        rel < 1e-8,
        "exp: shooting {shot} vs closed {exact} (rel {rel:e})"
    );
    println!("[acceptance] criterion  6 (oracle vs Bessel closed forms, rel < 1e-8): PASS");
}

#[test]
fn criterion_07_sandwich_all_waves() {
    let cfg = ShootingConfig::default();
    let n_max = 4;
    let mut checked = 0;
    for shape in builtins() {
        for ell in 0..=5u32 {
            let gc = oracle::critical_g(&shape, l(ell), &cfg, &scheme()).unwrap();
            let slack = 1e-8 * gc;
            let (alpha, omega) = sequences::alpha_omega(&shape, l(ell), n_max, &scheme()).unwrap();
            let gamma = sequences::kellogg_sequence(&shape, l(ell), n_max, &scheme()).unwrap();
            let beta = sequences::kolomy_sequence(&shape, l(ell), n_max, &scheme()).unwrap();
            let delta = sequences::power_sequence(&shape, l(ell), n_max, &scheme()).unwrap();
            for (k, &lower) in alpha.bounds_on_gc.iter().enumerate() {
                assert!(
                    lower <= gc + slack,
                    "{} l={ell}: 1/alpha_{} = {lower} above g_c = {gc}",
                    shape.label(),
                    alpha.index(k)
                );
            }
            for seq in [&omega, &gamma, &beta, &delta] {
                for (k, &upper) in seq.bounds_on_gc.iter().enumerate() {
                    assert!(
                        upper >= gc - slack,
                        "{} l={ell}: {}[n={}] = {upper} below g_c = {gc}",
                        shape.label(),
                        seq.method,
                        seq.index(k)
                    );
                    checked += 1;
                }
            }
        }
    }
    println!("[acceptance] criterion  7 (sandwich vs oracle, {checked} upper bounds): PASS");
}

#[test]
fn criterion_08_monotone_ladders() {
    // Construction already fails on violations beyond 100x the quadrature
    // tolerance; re-check the directions explicitly here.
    let n_max = 8;
    let slack_of = |x: f64| 100.0 * scheme().rel_tolerance * x.abs();
    for shape in builtins() {
        for ell in [0u32, 2, 5] {
            let (alpha, omega) = sequences::alpha_omega(&shape, l(ell), n_max, &scheme()).unwrap();
            let gamma = sequences::kellogg_sequence(&shape, l(ell), n_max, &scheme()).unwrap();
            let beta = sequences::kolomy_sequence(&shape, l(ell), n_max, &scheme()).unwrap();
            let delta = sequences::power_sequence(&shape, l(ell), n_max, &scheme()).unwrap();
            for seq in [&omega, &gamma, &beta, &delta] {
                for w in seq.bounds_on_gc.windows(2) {
                    assert!(
                        w[1] <= w[0] + slack_of(w[1]),
                        "{} l={ell} {} is not non-increasing",
                        shape.label(),
                        seq.method
                    );
                }
            }
            for w in alpha.bounds_on_gc.windows(2) {
                assert!(
                    w[1] >= w[0] - slack_of(w[1]),
                    "{} l={ell} alpha lower limits not non-decreasing",
                    shape.label()
                );
            }
        }
    }
    println!("[acceptance] criterion  8 (monotone bound ladders): PASS");
}

#[test]
fn criterion_09_identity_suite() {
    for (shape, ell) in table_rows() {
        let reduced = reduce_to_s_wave(&shape, l(ell));
        let n = 3;
        let beta = sequences::kolomy_sequence(&reduced, l(0), n, &scheme()).unwrap();
        let gamma = sequences::kellogg_sequence(&reduced, l(0), n, &scheme()).unwrap();
        let (_, omega) = sequences::alpha_omega(&reduced, l(0), 2 * n, &scheme()).unwrap();
        for k in 1..=n {
            if 2 * k > omega.iterates.len() || k > beta.iterates.len() {
                break;
            }
            let w_even = omega.iterates[2 * k - 1];
            let w_odd = omega.iterates[2 * k - 2];
            let b = beta.iterates[k - 1];
            let g = gamma.iterates[k - 1];
            let rel_beta = (b - 1.0 / w_even).abs() / b;
            assert!(
                rel_beta < 1e-8,
                "beta identity off by {rel_beta:e} for {}",
                shape.label()
            );
            let rel_gamma = (1.0 / (g * g) - w_odd * w_even).abs() / (w_odd * w_even);
            assert!(
                rel_gamma < 1e-8,
                "gamma identity off by {rel_gamma:e} for {}",
                shape.label()
            );
        }

        let series = JostSeries::compute(&reduced, 8, 6, &scheme()).unwrap();
        let residual = jost::verify_convolution(&series);
        assert!(
            residual < 1e-9,
            "convolution residual {residual:e} for {} l={ell}",
            shape.label()
        );
        for k in 0..=6 {
            assert!(
                series.m[k + 2] * series.m[k] <= series.m[k + 1] * series.m[k + 1] * (1.0 + 1e-12),
                "log-concavity fails at order {k} for {} l={ell}",
                shape.label()
            );
        }
    }
    println!("[acceptance] criterion  9 (cross-method and Jost identities): PASS");
}

#[test]
fn criterion_10_hand_values() {
    let sw = make_square_well();
    let a = jost::jost_coefficients(&sw, 2, &scheme()).unwrap();
    assert!((a[2] - 1.0 / 24.0).abs() < 1e-10, "a_2 = {}", a[2]);
    let m = jost::reciprocal_coefficients(&sw, 2, &scheme()).unwrap();
    assert!((m[2] - 5.0 / 24.0).abs() < 1e-10, "M_2 = {}", m[2]);
    let t1 = kernel::trace_iterated(&sw, l(0), 1, &scheme()).unwrap();
    assert!((t1 - 0.5).abs() < 1e-10, "t1 = {t1}");
    let t2 = kernel::trace_iterated(&sw, l(0), 2, &scheme()).unwrap();
    assert!((t2 - 1.0 / 6.0).abs() < 1e-10, "t2 = {t2}");
    println!("[acceptance] criterion 10 (hand values a_2, M_2, t_1, t_2 at 1e-10): PASS");
}

#[test]
fn criterion_11_reduction_consistency() {
    let cfg = ShootingConfig::default();
    for shape in builtins() {
        for ell in 1..=5u32 {
            let native = oracle::critical_g(&shape, l(ell), &cfg, &scheme()).unwrap();
            let reduced = reduce_to_s_wave(&shape, l(ell));
            let image = oracle::critical_g(&reduced, l(0), &cfg, &scheme()).unwrap();
            let rel = (native - image).abs() / native;
            assert!(
                rel < 1e-6,
                "{} l={ell}: native {native} vs reduced {image} (rel {rel:e})",
                shape.label()
            );
        }
    }
    println!("[acceptance] criterion 11 (l-reduction consistency, rel < 1e-6): PASS");
}
