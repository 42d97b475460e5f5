//! Acceptance gate. Every criterion runs at its pinned tolerance and prints
//! one PASS/FAIL line; the process exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use deltalwi_core::{
    build_config, decompose_gain, enantiomer_spectra, evolve, find_extremum, gain_minima, gain_probe, gain_regions,
    optimal_aux_amplitude, scan_detuning, si_steady_time, steady_state, steady_state_residual, ConfigurationKind,
    DecayRates, FluxQubitDrive, FluxQubitParams, GainSpectrum, ScanSettings, SigmaState,
};

type Outcome = Result<String, String>;

const SCAN_POINTS: usize = 1001;
const SCAN_RUNTIME_LIMIT: Duration = Duration::from_secs(1);

fn unit() -> DecayRates {
    DecayRates::uniform(1.0).unwrap()
}

fn kind_a(g_aux: f64, phi: f64) -> ScanSettings {
    ScanSettings { kind: ConfigurationKind::A, g_coupling: 10.0, g_probe: 0.1, g_aux, loop_phase: phi }
}

fn kind_b(g_aux: f64, phi: f64) -> ScanSettings {
    ScanSettings { kind: ConfigurationKind::B, g_coupling: 10.0, g_probe: 0.1, g_aux, loop_phase: phi }
}

fn scan(settings: &ScanSettings) -> Result<GainSpectrum, String> {
    scan_detuning(settings, &unit(), -20.0, 20.0, SCAN_POINTS).map_err(|e| e.to_string())
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn single_dip(spec: &GainSpectrum, target: f64, tol: f64) -> Result<f64, String> {
    let e = find_extremum(spec).map_err(|e| e.to_string())?;
    check(!e.on_boundary, || format!("minimum on scan boundary at {}", e.detuning))?;
    check((e.detuning - target).abs() <= tol, || format!("dip at {:.4}, expected {target} ± {tol}", e.detuning))?;
    check(e.gain < 0.0, || format!("dip value {:.4e} is not gain", e.gain))?;
    Ok(e.detuning)
}

fn symmetric_pair(spec: &GainSpectrum, target: f64, tol: f64) -> Result<(f64, f64), String> {
    let minima = gain_minima(spec);
    let left = minima.iter().find(|m| (m.detuning + target).abs() <= tol);
    let right = minima.iter().find(|m| (m.detuning - target).abs() <= tol);
    match (left, right) {
        (Some(l), Some(r)) => Ok((l.detuning, r.detuning)),
        _ => Err(format!(
            "expected gain minima at ±{target} ± {tol}, found {:?}",
            minima.iter().map(|m| m.detuning).collect::<Vec<_>>()
        )),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let solid = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?
        .install(|| scan(&kind_a(0.74, 0.0)))?;
    let elapsed = start.elapsed();
    check(elapsed < SCAN_RUNTIME_LIMIT, || format!("1001-point single-threaded scan took {elapsed:?}"))?;
    let dashed = scan(&kind_a(0.74, PI))?;
    let a = single_dip(&solid, -9.98, 0.05)?;
    let b = single_dip(&dashed, 9.98, 0.05)?;
    Ok(format!("Φ=0 dip {a:.3}, Φ=π dip {b:.3}, scan {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let half = scan(&kind_a(1.70, PI / 2.0))?;
    let (l, r) = symmetric_pair(&half, 12.12, 0.1)?;
    let regions = gain_regions(&half);
    // gain confined to |Δ2| ≳ 10: no gain anywhere inside |Δ2| < 10
    check(half.records.iter().all(|rec| rec.detuning.abs() >= 10.0 || rec.gain >= 0.0), || {
        format!("gain inside |Δ2| < 10: regions {regions:?}")
    })?;

    let three_half = scan(&kind_a(6.13, 3.0 * PI / 2.0))?;
    let centre = single_dip(&three_half, 0.0, 0.1)?;
    let wide = gain_regions(&three_half);
    // one contiguous region around resonance with edges at |Δ2| = 10 ± 1.5
    check(wide.len() == 1, || format!("expected one gain region, got {wide:?}"))?;
    let (lo, hi) = wide[0];
    check((lo + 10.0).abs() <= 1.5 && (hi - 10.0).abs() <= 1.5, || format!("gain region {wide:?}"))?;
    Ok(format!("Φ=π/2 minima {l:.3}/{r:.3}; Φ=3π/2 dip {centre:.3}, region [{lo:.2}, {hi:.2}]"))
}

fn inversionless(sets: &[ScanSettings]) -> Result<f64, String> {
    let mut worst = f64::NEG_INFINITY;
    for s in sets {
        let spec = scan(s)?;
        for r in &spec.records {
            check(r.pop_diff < 0.0, || format!("inversion {:.4} at {} for {s:?}", r.pop_diff, r.detuning))?;
            worst = worst.max(r.pop_diff);
        }
    }
    Ok(worst)
}

fn criterion_3() -> Outcome {
    let worst =
        inversionless(&[kind_a(0.74, 0.0), kind_a(0.74, PI), kind_a(1.70, PI / 2.0), kind_a(6.13, 3.0 * PI / 2.0)])?;
    Ok(format!("max σ22−σ11 = {worst:.4}"))
}

fn optimum(settings: &ScanSettings, detuning: f64, bracket: (f64, f64), target: f64, tol: f64) -> Result<f64, String> {
    let opt = optimal_aux_amplitude(settings, detuning, &unit(), bracket).map_err(|e| e.to_string())?;
    check((opt.g_star - target).abs() <= tol, || format!("g1* = {:.4}, expected {target} ± {tol}", opt.g_star))?;
    check(opt.gain_star < 0.0, || format!("optimal gain {:.4e} is not gain", opt.gain_star))?;
    Ok(opt.g_star)
}

fn criterion_4() -> Outcome {
    let a = optimum(&kind_a(0.0, 0.0), -9.98, (0.0, 3.0), 0.74, 0.02)?;
    let b = optimum(&kind_a(0.0, PI / 2.0), 12.12, (0.0, 4.0), 1.70, 0.05)?;
    let c = optimum(&kind_a(0.0, 3.0 * PI / 2.0), 0.0, (3.0, 10.0), 6.13, 0.05)?;
    Ok(format!("g1* = {a:.4}, {b:.4}, {c:.4}"))
}

fn criterion_5() -> Outcome {
    let a = single_dip(&scan(&kind_b(0.94, 0.0))?, 10.04, 0.05)?;
    let b = single_dip(&scan(&kind_b(0.94, PI))?, -10.04, 0.05)?;

    let broad = scan(&kind_b(6.97, PI / 2.0))?;
    let centre = single_dip(&broad, 0.0, 0.1)?;
    let regions = gain_regions(&broad);
    check(regions.len() == 1, || format!("expected one broad gain region, got {regions:?}"))?;
    let (lo, hi) = regions[0];
    // broad gain over ≈ (−20, 20): edges within 1.5γ of the scan limits
    check(lo <= -18.5 && hi >= 18.5, || format!("gain region {regions:?}"))?;

    let (l, r) = symmetric_pair(&scan(&kind_b(1.52, 3.0 * PI / 2.0))?, 12.92, 0.1)?;

    let worst =
        inversionless(&[kind_b(0.94, 0.0), kind_b(0.94, PI), kind_b(6.97, PI / 2.0), kind_b(1.52, 3.0 * PI / 2.0)])?;

    let o1 = optimum(&kind_b(0.0, 0.0), 10.04, (0.0, 3.0), 0.94, 0.02)?;
    let o2 = optimum(&kind_b(0.0, PI / 2.0), 0.0, (3.0, 10.0), 6.97, 0.05)?;
    let o3 = optimum(&kind_b(0.0, 3.0 * PI / 2.0), 12.92, (0.0, 4.0), 1.52, 0.05)?;
    Ok(format!(
        "dips {a:.3}/{b:.3}, broad dip {centre:.3} over [{lo:.2}, {hi:.2}], minima {l:.3}/{r:.3}, \
         max σ33−σ22 {worst:.4}, g1* = {o1:.4}, {o2:.4}, {o3:.4}"
    ))
}

struct RandomCase {
    drives: deltalwi_core::DriveSet,
    decays: DecayRates,
    steady: SigmaState,
    trajectory: deltalwi_core::Trajectory,
}

fn random_cases() -> Result<Vec<RandomCase>, String> {
    let mut rng = common::rng(2024);
    (0..100)
        .map(|_| {
            let (drives, decays) = common::random_problem(&mut rng);
            let steady = steady_state(&drives, &decays).map_err(|e| e.to_string())?;
            let t_final = 50.0 / decays.min_rate();
            let trajectory =
                evolve(&SigmaState::ground(), &drives, &decays, t_final, 1e-10).map_err(|e| e.to_string())?;
            Ok(RandomCase { drives, decays, steady, trajectory })
        })
        .collect()
}

fn criterion_6(cases: &[RandomCase]) -> Outcome {
    let mut worst_gap: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    for (k, c) in cases.iter().enumerate() {
        let gap = c.trajectory.final_state().max_abs_diff(&c.steady);
        let residual = steady_state_residual(&c.steady, &c.drives, &c.decays);
        check(gap <= 1e-6, || format!("draw {k}: evolve vs steady gap {gap:.3e}"))?;
        check(residual <= 1e-10, || format!("draw {k}: residual {residual:.3e}"))?;
        worst_gap = worst_gap.max(gap);
        worst_residual = worst_residual.max(residual);
    }
    Ok(format!("{} draws, max gap {worst_gap:.2e}, max residual {worst_residual:.2e}", cases.len()))
}

fn criterion_7(cases: &[RandomCase]) -> Outcome {
    let mut worst_identity: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    let mut min_eig = f64::INFINITY;
    for (k, c) in cases.iter().enumerate() {
        for kind in [ConfigurationKind::A, ConfigurationKind::B] {
            let parts = decompose_gain(&c.steady, &c.drives, &c.decays, kind).map_err(|e| e.to_string())?;
            let gap = (parts.total - gain_probe(&c.steady, &c.drives, kind)).abs();
            check(gap <= 1e-8, || format!("draw {k}: decomposition gap {gap:.3e}"))?;
            worst_identity = worst_identity.max(gap);
        }
        for (t, s) in &c.trajectory.points {
            let [a, b, d] = s.populations();
            let drift = (a + b + d - 1.0).abs();
            check(drift < 1e-10, || format!("draw {k}: trace drift {drift:.3e} at t = {t}"))?;
            worst_trace = worst_trace.max(drift);
            min_eig = min_eig.min(s.min_eigenvalue());
        }
        min_eig = min_eig.min(c.steady.min_eigenvalue());
    }
    check(min_eig >= -1e-8, || format!("minimum eigenvalue {min_eig:.3e}"))?;
    Ok(format!("identity gap {worst_identity:.2e}, trace drift {worst_trace:.2e}, min eigenvalue {min_eig:.2e}"))
}

fn criterion_8() -> Outcome {
    let drives = build_config(ConfigurationKind::A, 10.0, 0.1, 0.0, 0.0, 0.0).map_err(|e| e.to_string())?;
    let s = steady_state(&drives, &unit()).map_err(|e| e.to_string())?;
    let gain = gain_probe(&s, &drives, ConfigurationKind::A);
    check(gain.abs() < 1e-4, || {
        format!("|gain| = {:.4e} at the ladder two-photon resonance (limit 1e-4)", gain.abs())
    })?;
    Ok(format!("|gain| = {:.2e}", gain.abs()))
}

fn criterion_9() -> Outcome {
    let params = FluxQubitParams { t01: 0.19, t02: 0.14, t12: 0.19, gamma_ref: 6.9e7, t_ref: 0.66 };
    let drive = FluxQubitDrive::default();
    let t = si_steady_time(&params, &drive).map_err(|e| e.to_string())?;
    check((3e-7..=3e-6).contains(&t), || format!("time to steady state {t:.3e} s"))?;
    Ok(format!("time to steady state {t:.3e} s"))
}

fn criterion_10() -> Outcome {
    let report = enantiomer_spectra(&kind_a(0.74, PI), &unit(), -20.0, 20.0, SCAN_POINTS).map_err(|e| e.to_string())?;
    let left = single_dip(&report.left, 9.98, 0.05)?;
    let right = single_dip(&report.right, -9.98, 0.05)?;
    check(report.discrimination > 0.0, || "no discrimination".to_string())?;
    Ok(format!(
        "left dip {left:.3}, right dip {right:.3}, discrimination {:.4} at {:.2}",
        report.discrimination, report.discrimination_at
    ))
}

fn main() {
    let cases = random_cases();
    let results: Vec<(&str, Outcome)> = vec![
        ("C1  kind A dip positions", criterion_1()),
        ("C2  kind A gain regions at Φ = π/2, 3π/2", criterion_2()),
        ("C3  kind A inversionless", criterion_3()),
        ("C4  kind A optimal amplitudes", criterion_4()),
        ("C5  kind B dips, regions and optima", criterion_5()),
        ("C6  steady vs evolve oracle", cases.as_ref().map_err(Clone::clone).and_then(|c| criterion_6(c))),
        ("C7  identity suite", cases.as_ref().map_err(Clone::clone).and_then(|c| criterion_7(c))),
        ("C8  EIT limit", criterion_8()),
        ("C9  flux-qubit timescale", criterion_9()),
        ("C10 chiral discrimination", criterion_10()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
