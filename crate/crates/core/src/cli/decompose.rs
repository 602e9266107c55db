use std::io::Write;
use std::str::FromStr;

use super::{build_state, fmt17, StateSpec};
use crate::decomposition::{bloch_coefficients, bloch_reconstruct, principal_coefficients, principal_reconstruct};
use crate::error::{Error, Result};

/// Coefficients below this magnitude are not listed.
pub const LISTING_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Principal,
    Bloch,
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "principal" => Ok(Basis::Principal),
            "bloch" => Ok(Basis::Bloch),
            _ => Err(Error::Usage(format!("unknown basis {s:?}, expected principal or bloch"))),
        }
    }
}

/// One listed coefficient: family letter, indices, value.
pub type Listed = (String, Vec<usize>, f64, f64);

/// Lists nonzero coefficients and the reconstruction residual. Returns the
/// listed entries and the residual.
pub fn cmd_decompose(spec: &StateSpec, basis: Basis, out: &mut dyn Write) -> Result<(Vec<Listed>, f64)> {
    let labeled = build_state(spec)?;
    let rho = &labeled.state;
    let (listed, residual): (Vec<Listed>, f64) = match basis {
        Basis::Principal => {
            let c = principal_coefficients(rho)?;
            let residual = principal_reconstruct(&c)?.frobenius_distance(rho.matrix());
            let listed = c
                .entries()
                .filter(|(_, _, v)| v.norm() > LISTING_THRESHOLD)
                .map(|(f, idx, v)| (f.to_string(), idx, v.re, v.im))
                .collect();
            (listed, residual)
        }
        Basis::Bloch => {
            let b = bloch_coefficients(rho)?;
            let residual = bloch_reconstruct(&b)?.frobenius_distance(rho.matrix());
            let n = b.len();
            let mut listed: Vec<Listed> = Vec::new();
            for (name, v) in [("r", b.r()), ("s", b.s())] {
                for (i, &x) in v.iter().enumerate() {
                    listed.push((name.to_string(), vec![i], x, 0.0));
                }
            }
            for i in 0..n {
                for j in 0..n {
                    listed.push(("m".to_string(), vec![i, j], b.m(i, j), 0.0));
                }
            }
            listed.retain(|e| e.2.abs() > LISTING_THRESHOLD);
            (listed, residual)
        }
    };
    let io = |source| Error::Io {
        path: "<output>".into(),
        source,
    };
    writeln!(out, "state: {} (d={})", labeled.label, rho.dim()).map_err(io)?;
    writeln!(out, "basis: {}", match basis {
        Basis::Principal => "principal",
        Basis::Bloch => "bloch",
    })
    .map_err(io)?;
    writeln!(out, "nonzero coefficients: {}", listed.len()).map_err(io)?;
    for (family, idx, re, im) in &listed {
        let idx: Vec<String> = idx.iter().map(usize::to_string).collect();
        if im.abs() > LISTING_THRESHOLD {
            writeln!(out, "  {family}[{}] = {} {:+e}i", idx.join(","), fmt17(*re), im).map_err(io)?;
        } else {
            writeln!(out, "  {family}[{}] = {}", idx.join(","), fmt17(*re)).map_err(io)?;
        }
    }
    writeln!(out, "reconstruction residual: {residual:e}").map_err(io)?;
    Ok((listed, residual))
}
