//! Companion gnuplot scripts for CSV spectra.

use std::path::{Path, PathBuf};

use anyhow::{ensure, Context};

use crate::output::write_atomic;

/// gnuplot single-quoted string: the only escape is a doubled quote.
fn quote(text: &str) -> String {
    format!("'{}'", text.replace('\'', "''"))
}

/// Script that plots gain (column 2) against detuning (column 1) for each
/// CSV file. The first curve is solid, later ones dashed.
pub fn plot_script(spectra: &[PathBuf]) -> anyhow::Result<String> {
    ensure!(!spectra.is_empty(), "nothing to plot");
    let mut s = String::from(
        "set datafile separator ','\n\
         set xlabel 'probe detuning'\n\
         set ylabel 'gain (negative = amplification)'\n\
         set xzeroaxis\n\
         plot \\\n",
    );
    for (k, path) in spectra.iter().enumerate() {
        let title = path.file_stem().map(|t| t.to_string_lossy().into_owned()).unwrap_or_default();
        let dash = if k == 0 { 1 } else { 2 };
        let sep = if k + 1 == spectra.len() { "\n" } else { ", \\\n" };
        s += &format!(
            "  {} skip 1 using 1:2 with lines dashtype {dash} linewidth 2 title {}{sep}",
            quote(&path.to_string_lossy()),
            quote(&title)
        );
    }
    s += "pause mouse close\n";
    Ok(s)
}

/// Writes the script for `spectra` to `script`.
pub fn emit_plot_script(spectra: &[PathBuf], script: &Path) -> anyhow::Result<()> {
    for p in spectra {
        ensure!(p.exists(), "spectrum file {} does not exist", p.display());
    }
    let text = plot_script(spectra).with_context(|| format!("cannot write {}", script.display()))?;
    write_atomic(script, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plots_gain_against_detuning() {
        let s = plot_script(&[PathBuf::from("dip.csv")]).unwrap();
        assert!(s.contains("'dip.csv' skip 1 using 1:2 with lines dashtype 1"), "{s}");
    }

    #[test]
    fn paths_with_spaces_and_quotes() {
        let s = plot_script(&[PathBuf::from("my runs/it's.csv")]).unwrap();
        assert!(s.contains("'my runs/it''s.csv'"), "{s}");
    }

    #[test]
    fn overlay_is_solid_then_dashed() {
        let s = plot_script(&[PathBuf::from("a.csv"), PathBuf::from("b.csv")]).unwrap();
        let a = s.find("'a.csv'").unwrap();
        let b = s.find("'b.csv'").unwrap();
        assert!(a < b);
        assert!(s[a..b].contains("dashtype 1"));
        assert!(s[b..].contains("dashtype 2"));
    }

    #[test]
    fn empty_and_missing_inputs() {
        assert!(plot_script(&[]).is_err());
        assert!(emit_plot_script(&[PathBuf::from("/no/such.csv")], Path::new("x.gp")).is_err());
    }
}
