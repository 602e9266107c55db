use std::io::Write;
use std::path::Path;

use super::{build_state, fmt17, StateSpec};
use crate::error::{Error, Result};
use crate::fef::{bound_audit, BoundReport, OptimizerOptions};

pub fn render_report(r: &BoundReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "state: {} (d={})", r.state_label, r.d)?;
    writeln!(out, "frobenius_norm: {}", fmt17(r.frobenius_norm))?;
    writeln!(out, "bounds:")?;
    for (name, v) in &r.bounds {
        let flag = if r.is_flagged(name) { "  VIOLATED" } else { "" };
        writeln!(out, "  {name:<12} {}{flag}", fmt17(*v))?;
    }
    if !r.reference_values.is_empty() {
        writeln!(out, "reference values (not audited):")?;
        for (name, v) in &r.reference_values {
            writeln!(out, "  {name:<21} {}", fmt17(*v))?;
        }
    }
    writeln!(out, "fef_lower: {} (start: {:?})", fmt17(r.fef_lower), r.best_source)?;
    if r.violations.is_empty() {
        writeln!(out, "violations: none")?;
    } else {
        writeln!(out, "violations:")?;
        for v in &r.violations {
            writeln!(
                out,
                "  {}: bound {} < fef_lower {} (gap {:e})",
                v.bound,
                fmt17(r.bounds[&v.bound]),
                fmt17(r.fef_lower),
                v.gap
            )?;
        }
    }
    if !r.skipped_restarts.is_empty() {
        writeln!(out, "skipped restarts: {}", r.skipped_restarts.len())?;
    }
    Ok(())
}

/// Audits one state, prints the report and optionally writes it as JSON.
/// Violations never turn into errors.
pub fn cmd_bound(
    spec: &StateSpec,
    opts: &OptimizerOptions,
    json_out: Option<&Path>,
    out: &mut dyn Write,
) -> Result<BoundReport> {
    let labeled = build_state(spec)?;
    let mut report = bound_audit(&labeled.state, opts, &labeled.label)?;
    report.reference_values.extend(labeled.reference_values);
    render_report(&report, out).map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })?;
    if let Some(path) = json_out {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(path, json + "\n").map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::{Family, FamilyParams};
    use crate::fef::{LM, SPECTRAL, THEOREM1};

    fn family(family: Family, params: FamilyParams) -> StateSpec {
        StateSpec::Family { family, params }
    }

    #[test]
    fn maxent_d2_report() {
        let spec = family(Family::Maxent, FamilyParams { d: Some(2), ..Default::default() });
        let mut buf = Vec::new();
        let r = cmd_bound(&spec, &OptimizerOptions::default(), None, &mut buf).unwrap();
        assert!((r.bounds[THEOREM1] - 0.75).abs() < 1e-15);
        assert!((r.bounds[LM] - 1.0).abs() < 1e-10);
        assert!((r.bounds[SPECTRAL] - 1.0).abs() < 1e-12);
        assert!(r.is_flagged(THEOREM1));
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("theorem1") && text.contains("VIOLATED"), "{text}");
    }

    #[test]
    fn mixed_report_has_no_flags() {
        let spec = family(Family::Isotropic, FamilyParams { d: Some(2), p: Some(0.0), ..Default::default() });
        let r = cmd_bound(&spec, &OptimizerOptions::default(), None, &mut Vec::new()).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.bounds.values().all(|&b| b >= 0.25 - 1e-15));
    }

    #[test]
    fn horodecki_report_prints_closed_form() {
        let spec = family(Family::Horodecki, FamilyParams { a: Some(1.0), ..Default::default() });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        let mut buf = Vec::new();
        let r = cmd_bound(&spec, &OptimizerOptions::default(), Some(&path), &mut buf).unwrap();
        assert!((r.bounds[THEOREM1] - 0.39800).abs() < 5e-6);
        assert!((r.reference_values["paper_example3_form"] - 1.0 / 3.0).abs() < 1e-12);
        let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(json["reference_values"]["paper_example3_form"].is_number());
        assert!(String::from_utf8(buf).unwrap().contains("paper_example3_form"));
    }
}
