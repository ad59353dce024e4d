use std::io::{self, Write};

use super::{CurveReport, StabilityRow, SweepReport};

/// Renders `v` with six significant digits.
pub fn format_sig6(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-5..=15).contains(&mag) {
        return format!("{v:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `eta,n,algo,msd_db,theory_db` with one row per algorithm and time index.
pub fn write_curves_csv<W: Write>(out: &mut W, reports: &[CurveReport]) -> io::Result<()> {
    writeln!(out, "eta,n,algo,msd_db,theory_db")?;
    for rep in reports {
        let eta = format_sig6(rep.eta);
        for c in &rep.curves {
            for (i, (&n, &db)) in c.n.iter().zip(&c.msd_db).enumerate() {
                let theory = c.theory_overlay.as_ref().map(|t| format_sig6(t[i])).unwrap_or_default();
                writeln!(out, "{eta},{n},{},{},{theory}", c.algo, format_sig6(db))?;
            }
        }
    }
    Ok(())
}

/// `eta,algo,empirical_db,theory_db,instances`.
pub fn write_sweep_csv<W: Write>(out: &mut W, report: &SweepReport) -> io::Result<()> {
    writeln!(out, "eta,algo,empirical_db,theory_db,instances")?;
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_sig6(r.eta),
            r.algo,
            format_sig6(r.empirical_db),
            format_sig6(r.theory_db),
            r.instances
        )?;
    }
    Ok(())
}

/// `eta,lambda_bound,lambda_exact`.
pub fn write_stability_csv<W: Write>(out: &mut W, rows: &[StabilityRow]) -> io::Result<()> {
    writeln!(out, "eta,lambda_bound,lambda_exact")?;
    for r in rows {
        writeln!(out, "{},{},{}", format_sig6(r.eta), format_sig6(r.bound), format_sig6(r.exact))?;
    }
    Ok(())
}
