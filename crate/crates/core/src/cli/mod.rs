//! Command-line front end: state selection, state files, reports, sweeps and
//! the identity-verification suite. The binary in `main.rs` only parses
//! arguments and dispatches here.

mod decompose;
mod report;
mod state_file;
mod sweep;
mod verify;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fef::{example3_direct_form, paper_example3_form};
use crate::states::{
    horodecki_state, isotropic_state, max_entangled_projector, random_density_state, werner_state,
    DensityState, WernerVariant,
};

pub use decompose::{cmd_decompose, Basis};
pub use report::{cmd_bound, render_report};
pub use state_file::{parse_state_file, parse_state_str, write_state_file, write_state_string, StateFile};
pub use sweep::{cmd_sweep, run_sweep, write_sweep, OutputFormat, SweepParam, SweepRow, SweepSpec, CSV_COLUMNS};
pub use verify::{cmd_verify, run_verify, Check, Finding, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Maxent,
    Isotropic,
    WernerSwap,
    WernerPaper,
    Horodecki,
    Random,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Maxent,
        Family::Isotropic,
        Family::WernerSwap,
        Family::WernerPaper,
        Family::Horodecki,
        Family::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Maxent => "maxent",
            Family::Isotropic => "isotropic",
            Family::WernerSwap => "werner-swap",
            Family::WernerPaper => "werner-paper",
            Family::Horodecki => "horodecki",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
                Error::Usage(format!("unknown family {s:?}, expected one of {}", names.join(", ")))
            })
    }
}

/// Parameters of a built-in family. Unused fields are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub d: Option<usize>,
    pub p: Option<f64>,
    pub a: Option<f64>,
    pub seed: u64,
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self {
            d: None,
            p: None,
            a: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    File { path: PathBuf, allow_unphysical: bool },
    Family { family: Family, params: FamilyParams },
}

/// A state together with its display label and any reference values tied to
/// its family.
#[derive(Debug, Clone)]
pub struct LabeledState {
    pub state: DensityState,
    pub label: String,
    pub reference_values: Vec<(String, f64)>,
}

fn require<T>(value: Option<T>, flag: &str, family: Family) -> Result<T> {
    value.ok_or_else(|| Error::Usage(format!("family {family} needs --{flag}")))
}

pub fn build_family(family: Family, params: &FamilyParams) -> Result<LabeledState> {
    let d = || require(params.d, "d", family);
    let mut reference_values = Vec::new();
    let (state, label) = match family {
        Family::Maxent => {
            let d = d()?;
            (max_entangled_projector(d)?, format!("maxent(d={d})"))
        }
        Family::Isotropic => {
            let (d, p) = (d()?, require(params.p, "p", family)?);
            (isotropic_state(d, p)?, format!("isotropic(d={d}, p={p})"))
        }
        Family::WernerSwap => {
            let d = d()?;
            (werner_state(d, WernerVariant::Swap)?, format!("werner-swap(d={d})"))
        }
        Family::WernerPaper => {
            let d = d()?;
            (werner_state(d, WernerVariant::Paper)?, format!("werner-paper(d={d})"))
        }
        Family::Horodecki => {
            if let Some(d) = params.d {
                if d != 3 {
                    return Err(Error::Usage(format!("family horodecki has d=3, got --d {d}")));
                }
            }
            let a = require(params.a, "a", family)?;
            reference_values.push(("paper_example3_form".to_string(), paper_example3_form(a)));
            reference_values.push(("example3_direct_form".to_string(), example3_direct_form(a)));
            (horodecki_state(a)?, format!("horodecki(a={a})"))
        }
        Family::Random => {
            let d = d()?;
            (
                random_density_state(d, params.seed)?,
                format!("random(d={d}, seed={})", params.seed),
            )
        }
    };
    Ok(LabeledState {
        state,
        label,
        reference_values,
    })
}

pub fn build_state(spec: &StateSpec) -> Result<LabeledState> {
    match spec {
        StateSpec::File {
            path,
            allow_unphysical,
        } => Ok(LabeledState {
            state: parse_state_file(path, *allow_unphysical)?,
            label: path.display().to_string(),
            reference_values: Vec::new(),
        }),
        StateSpec::Family { family, params } => build_family(*family, params),
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_roundtrip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!(matches!("bell".parse::<Family>(), Err(Error::Usage(_))));
    }

    #[test]
    fn missing_parameters_are_usage_errors() {
        let params = FamilyParams { d: Some(2), ..Default::default() };
        assert!(matches!(build_family(Family::Isotropic, &params), Err(Error::Usage(_))));
        assert!(matches!(build_family(Family::Maxent, &FamilyParams::default()), Err(Error::Usage(_))));
        let params = FamilyParams { d: Some(4), a: Some(0.5), ..Default::default() };
        assert!(matches!(build_family(Family::Horodecki, &params), Err(Error::Usage(_))));
    }

    #[test]
    fn out_of_window_parameters_are_rejected() {
        let params = FamilyParams { d: Some(2), p: Some(2.0), ..Default::default() };
        assert!(matches!(build_family(Family::Isotropic, &params), Err(Error::Parameter { .. })));
    }

    #[test]
    fn horodecki_carries_reference_values() {
        let params = FamilyParams { a: Some(1.0), ..Default::default() };
        let s = build_family(Family::Horodecki, &params).unwrap();
        assert_eq!(s.reference_values[0].0, "paper_example3_form");
        assert!((s.reference_values[0].1 - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn fmt17_has_seventeen_digits() {
        assert_eq!(fmt17(7.0 / 9.0), "7.7777777777777779e-1");
        assert_eq!(fmt17(0.25), "2.5000000000000000e-1");
        for x in [1.0 / 3.0, 0.1, 123.456, 1e-300] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }
}
