//! Executes a [`RunConfig`].

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context};
use deltalwi_core::spectra::uniform_grid;
use deltalwi_core::{
    build_config, enantiomer_spectra, evolve_sampled, find_extremum, flux_qubit_rates, gain_probe,
    optimal_aux_amplitude, scan_aux_amplitude, scan_detuning, si_steady_time, steady_state, DecayRates, FluxQubitDrive,
    GainSpectrum, ScanSettings, SigmaState, SpectrumRecord,
};

use crate::config::{Command, RunConfig};
use crate::output::{render, spectrum_table, write_table, Format, Table};
use crate::plot::emit_plot_script;

const EVOLVE_COLUMNS: [&str; 11] =
    ["t", "gain", "s11", "s22", "s33", "re_s12", "im_s12", "re_s13", "im_s13", "re_s23", "im_s23"];
const FLUX_COLUMNS: [&str; 7] = ["gamma1_si", "gamma2_si", "gamma3_si", "gamma1", "gamma2", "gamma3", "steady_time_s"];

/// Result of a run before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Tables keyed by an output-name suffix; the primary table has none.
    pub tables: Vec<(Option<&'static str>, Table)>,
    /// One human-readable line.
    pub summary: String,
    /// Whether the tables are spectra that a plot script can draw.
    pub plottable: bool,
}

impl Report {
    fn single(table: Table, summary: String, plottable: bool) -> Self {
        Self { tables: vec![(None, table)], summary, plottable }
    }
}

fn settings(cfg: &RunConfig) -> ScanSettings {
    ScanSettings {
        kind: cfg.kind,
        g_coupling: cfg.g_coupling,
        g_probe: cfg.g_probe,
        g_aux: cfg.g_aux,
        loop_phase: cfg.phi,
    }
}

fn describe_dip(spectrum: &GainSpectrum) -> String {
    match find_extremum(spectrum) {
        Ok(e) if e.gain < 0.0 => format!("deepest gain {:.6e} at detuning {:.4}", e.gain, e.detuning),
        Ok(_) => "no gain anywhere on the grid".to_string(),
        Err(e) => e.to_string(),
    }
}

/// Runs the computation for `cfg`.
pub fn execute(cfg: &RunConfig) -> anyhow::Result<Report> {
    let [g1, g2, g3] = cfg.gammas;
    let decays = DecayRates::new(g1, g2, g3)?;
    let s = settings(cfg);
    Ok(match cfg.command {
        Command::Steady => {
            let drives = s.drives_at(cfg.detuning)?;
            let state = steady_state(&drives, &decays)?;
            let record = SpectrumRecord::from_state(cfg.detuning, &state, &drives, cfg.kind);
            let summary = format!(
                "gain {:.6e}, population difference {:.6e}, populations {:.6} {:.6} {:.6}",
                record.gain, record.pop_diff, record.s11, record.s22, record.s33
            );
            let spectrum = GainSpectrum::new(cfg.kind, cfg.phi, vec![record])?;
            Report::single(spectrum_table(&spectrum), summary, false)
        }
        Command::Spectrum => {
            let spectrum = scan_detuning(&s, &decays, cfg.d_min, cfg.d_max, cfg.points)?;
            let summary = format!("{} points, {}", spectrum.records.len(), describe_dip(&spectrum));
            Report::single(spectrum_table(&spectrum), summary, true)
        }
        Command::Chiral => {
            let r = enantiomer_spectra(&s, &decays, cfg.d_min, cfg.d_max, cfg.points)?;
            let summary = format!(
                "discrimination {:.6e} at detuning {:.4}; left {}; right {}",
                r.discrimination,
                r.discrimination_at,
                describe_dip(&r.left),
                describe_dip(&r.right)
            );
            Report {
                tables: vec![(Some("left"), spectrum_table(&r.left)), (Some("right"), spectrum_table(&r.right))],
                summary,
                plottable: true,
            }
        }
        Command::Optimize => {
            let opt = optimal_aux_amplitude(&s, cfg.detuning, &decays, cfg.bracket)?;
            let mut summary = format!("optimal g_aux {:.6} with gain {:.6e}", opt.g_star, opt.gain_star);
            if let Some((g, gain)) = opt.global_grid_minimum {
                summary += &format!("; deeper grid minimum {gain:.6e} at g_aux {g:.4} outside the bracket");
            }
            let mut t = Table::new(&["g_aux", "gain"]);
            t.push(vec![opt.g_star, opt.gain_star]);
            Report::single(t, summary, false)
        }
        Command::AuxScan => {
            let curve = scan_aux_amplitude(&s, cfg.detuning, &decays, cfg.g_max, cfg.points)?;
            let mut t = Table::new(&["g_aux", "gain"]);
            for &(g, gain) in &curve.records {
                t.push(vec![g, gain]);
            }
            let best = curve.records.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).expect("non-empty scan");
            let summary = format!("{} points, lowest gain {:.6e} at g_aux {:.4}", t.rows.len(), best.1, best.0);
            Report::single(t, summary, false)
        }
        Command::Evolve => {
            ensure!(cfg.points >= 2, "evolve needs at least 2 sample points, got {}", cfg.points);
            ensure!(cfg.t_final > 0.0, "t_final must be positive, got {}", cfg.t_final);
            let drives = s.drives_at(cfg.detuning)?;
            let times = uniform_grid(0.0, cfg.t_final, cfg.points);
            let states = evolve_sampled(&SigmaState::ground(), &drives, &decays, &times, cfg.rel_tol)?;
            let mut t = Table::new(&EVOLVE_COLUMNS);
            for (time, st) in times.iter().zip(&states) {
                t.push(vec![
                    *time,
                    gain_probe(st, &drives, cfg.kind),
                    st.s11,
                    st.s22,
                    st.s33(),
                    st.s12.re,
                    st.s12.im,
                    st.s13.re,
                    st.s13.im,
                    st.s23.re,
                    st.s23.im,
                ]);
            }
            let last = &t.rows[t.rows.len() - 1];
            let summary = format!("gain {:.6e} at t = {}", last[1], last[0]);
            Report::single(t, summary, false)
        }
        Command::Fluxqubit => {
            // validates the drive before the longer integration
            build_config(cfg.kind, cfg.g_coupling, cfg.g_probe, cfg.g_aux, cfg.phi, cfg.detuning)?;
            let rates = flux_qubit_rates(&cfg.flux)?;
            let drive = FluxQubitDrive {
                kind: cfg.kind,
                g_coupling: cfg.g_coupling,
                g_probe: cfg.g_probe,
                g_aux: cfg.g_aux,
                loop_phase: cfg.phi,
                detuning: cfg.detuning,
            };
            let seconds = si_steady_time(&cfg.flux, &drive)?;
            let (si, n) = (rates.si, rates.normalized);
            let mut t = Table::new(&FLUX_COLUMNS);
            t.push(vec![si.gamma1(), si.gamma2(), si.gamma3(), n.gamma1(), n.gamma2(), n.gamma3(), seconds]);
            let summary = format!(
                "decay rates {:.4e} {:.4e} {:.4e} 1/s, steady state after {seconds:.4e} s",
                si.gamma1(),
                si.gamma2(),
                si.gamma3()
            );
            Report::single(t, summary, false)
        }
    })
}

/// `run.csv` with suffix `left` becomes `run-left.csv`.
fn suffixed(path: &Path, suffix: Option<&str>) -> PathBuf {
    let Some(suffix) = suffix else {
        return path.to_path_buf();
    };
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{suffix}"),
    };
    path.with_file_name(name)
}

/// Runs `cfg`, writing tables to `cfg.out` or, without one, to `stdout`.
///
/// Returns the summary line.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> anyhow::Result<String> {
    let report = execute(cfg)?;
    let params = cfg.params();
    let Some(out) = &cfg.out else {
        ensure!(report.tables.len() == 1, "{} writes several files and needs an output path", cfg.command);
        ensure!(!cfg.plot, "plot scripts need an output path");
        stdout.write_all(&render(&report.tables[0].1, &params, cfg.format)?).context("cannot write to stdout")?;
        return Ok(report.summary);
    };
    ensure!(!cfg.plot || report.plottable, "{} output cannot be plotted", cfg.command);
    ensure!(!cfg.plot || cfg.format == Format::Csv, "plot scripts need csv output");
    let mut written = Vec::new();
    for (suffix, table) in &report.tables {
        let path = suffixed(out, *suffix);
        write_table(table, &params, cfg.format, &path)?;
        written.push(path);
    }
    if cfg.plot {
        emit_plot_script(&written, &out.with_extension("gp"))?;
    }
    Ok(report.summary)
}
