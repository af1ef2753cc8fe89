use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use isingdm::chain::PairwiseReport;
use isingdm::sweep::SweepRecord;

/// Renders `x` like C's `%.12g`: 12 significant digits, trailing zeros
/// dropped, exponent form outside `1e-4 <= |x| < 1e12`.
pub fn fmt_g12(x: f64) -> String {
    const P: i32 = 12;
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        let decimals = (P - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub const CSV_HEADER: [&str; 6] = ["model", "J", "B", "d", "T", "N"];

pub fn sweep_csv(records: &[SweepRecord]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.model.name().to_string(),
            fmt_g12(r.j),
            fmt_g12(r.b),
            fmt_g12(r.d),
            fmt_g12(r.t),
            fmt_g12(r.negativity),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn chain_csv(report: &PairwiseReport) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["n_sites", "i", "j", "J", "B", "d", "T", "N"])?;
    for e in &report.entries {
        w.write_record([
            report.n_sites.to_string(),
            e.sites.0.to_string(),
            e.sites.1.to_string(),
            fmt_g12(report.j),
            fmt_g12(report.b),
            fmt_g12(report.d),
            fmt_g12(report.t),
            fmt_g12(e.negativity),
        ])?;
    }
    Ok(w.into_inner()?)
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
