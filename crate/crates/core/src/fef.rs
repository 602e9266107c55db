//! Fully entangled fraction: objective, upper bounds, a numeric lower
//! estimate, and the audit comparing them.
//!
//! The objective for a local unitary `U` on the second factor is
//! `f(U) = ⟨φ_U|ρ|φ_U⟩` with `|φ_U⟩ = (I⊗U)|φ₊⟩`, so `φ_U[(i,k)] = U[k,i]/√d`.
//! `F(ρ) = max_U f(U)`; any feasible `U` gives a certified lower bound.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::basis::principal_basis_table;
use crate::decomposition::bloch_coefficients_of;
use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, hermitian_eigen, nearest_unitary, trace_norm, ComplexMatrix, C64};
use crate::states::{haar_unitary, isotropic_precondition, max_entangled_projector, seeded_rng, DensityState};

/// A bound is violated when the lower estimate exceeds it by more than this.
pub const VIOLATION_TOL: f64 = 1e-8;
/// Largest `∥U†U − I∥_F` accepted by [`fef_objective`].
pub const UNITARITY_TOL: f64 = 1e-8;

pub const THEOREM1: &str = "theorem1";
pub const HOELDER_SUM: &str = "hoelder_sum";
pub const LM: &str = "lm";
pub const SPECTRAL: &str = "spectral";

fn phi_u(u: &ComplexMatrix) -> Vec<C64> {
    let d = u.rows();
    let s = 1.0 / (d as f64).sqrt();
    let mut v = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for k in 0..d {
            v[i * d + k] = u[(k, i)] * s;
        }
    }
    v
}

fn expectation(rho: &ComplexMatrix, v: &[C64]) -> f64 {
    let rv = rho.matvec(v);
    v.iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<C64>().re
}

/// `⟨φ₊|(I⊗U†) ρ (I⊗U)|φ₊⟩`.
pub fn fef_objective(rho: &DensityState, u: &ComplexMatrix) -> Result<f64> {
    let d = rho.dim();
    if u.rows() != d || u.cols() != d {
        return Err(Error::Dimension(format!(
            "local unitary must be {d}x{d}, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let residual = u.unitarity_residual();
    if residual > UNITARITY_TOL {
        return Err(Error::Unitarity { residual });
    }
    Ok(expectation(rho.matrix(), &phi_u(u)))
}

/// `1/d² + ((d−1)/d)·∥ρ∥_F`.
pub fn theorem1_bound(rho: &DensityState) -> f64 {
    let d = rho.dim() as f64;
    1.0 / (d * d) + (d - 1.0) / d * frobenius_norm(rho.matrix())
}

/// `1/d² + ((d²−1)/d)·∥ρ∥_F`: the Hölder estimate summed over all `d² − 1`
/// correlation terms with `∥A_ij∥_F = √d` for every index. Often exceeds 1.
pub fn hoelder_sum_bound(rho: &DensityState) -> f64 {
    let d = rho.dim() as f64;
    1.0 / (d * d) + (d * d - 1.0) / d * frobenius_norm(rho.matrix())
}

/// `1/d² + 4·∥M(ρ)ᵀ M(P₊)∥_KF` with `M` the Gell-Mann correlation matrix.
pub fn lm_bound(rho: &DensityState) -> Result<f64> {
    let d = rho.dim();
    let m_rho = bloch_coefficients_of(rho.matrix(), d)?.correlation_matrix();
    let m_plus = bloch_coefficients_of(max_entangled_projector(d)?.matrix(), d)?.correlation_matrix();
    let kf = trace_norm(&m_rho.transpose().matmul(&m_plus))?;
    Ok(1.0 / (d * d) as f64 + 4.0 * kf)
}

/// `λ_max(ρ)`; valid because the objective is a unit-vector expectation.
pub fn spectral_bound(rho: &DensityState) -> Result<f64> {
    Ok(hermitian_eigen(&rho.matrix().hermitian_part(), f64::INFINITY)?.values[0])
}

/// The closed form printed for the 3⊗3 bound entangled family,
/// `1/9 + √(30a²+4a+2)/(24a+3)`.
pub fn paper_example3_form(a: f64) -> f64 {
    1.0 / 9.0 + (30.0 * a * a + 4.0 * a + 2.0).sqrt() / (24.0 * a + 3.0)
}

/// The theorem1 bound evaluated on the 3⊗3 family directly,
/// `1/9 + (2/3)·√(13a²+a+1)/(8a+1)`.
pub fn example3_direct_form(a: f64) -> f64 {
    1.0 / 9.0 + (2.0 / 3.0) * (13.0 * a * a + a + 1.0).sqrt() / (8.0 * a + 1.0)
}

/// Exact FEF of the isotropic family: `p + (1−p)/d²` for `p ≥ 0`, otherwise
/// `(1−p)/d²` (attained by a traceless unitary such as `A_01`).
pub fn isotropic_fef_reference(d: usize, p: f64) -> Result<f64> {
    isotropic_precondition(d, p)?;
    let mixed = (1.0 - p) / (d * d) as f64;
    Ok(if p >= 0.0 { p + mixed } else { mixed })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop once the objective changes by less than this between steps.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 500,
            tolerance: 1e-10,
            seed: 0,
        }
    }
}

/// Where a restart's initial unitary came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RestartSource {
    Identity,
    TopEigenvector,
    Principal { i: usize, j: usize },
    Haar { draw: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedRestart {
    pub index: usize,
    pub source: RestartSource,
    /// Iteration at which the reshaped matrix was rank-deficient; `None` when
    /// the starting point itself could not be formed.
    pub iteration: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct FefEstimate {
    pub value: f64,
    pub unitary: ComplexMatrix,
    pub source: RestartSource,
    pub skipped: Vec<SkippedRestart>,
}

/// Restart sources in order: identity, top eigenvector, the principal
/// unitaries `A_ij ≠ I` row-major, then Haar draws; truncated to `restarts`.
pub fn restart_sources(d: usize, restarts: usize) -> Vec<RestartSource> {
    let mut out = vec![RestartSource::Identity, RestartSource::TopEigenvector];
    out.extend(
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .filter(|&p| p != (0, 0))
            .map(|(i, j)| RestartSource::Principal { i, j }),
    );
    let fixed = out.len();
    out.extend((0..restarts.saturating_sub(fixed)).map(|draw| RestartSource::Haar { draw }));
    out.truncate(restarts);
    out
}

/// `G[k,i] = √d·v[(i,k)]`.
fn reshape_gradient(v: &[C64], d: usize) -> ComplexMatrix {
    let s = (d as f64).sqrt();
    ComplexMatrix::from_fn(d, d, |k, i| v[i * d + k] * s)
}

struct RestartOutcome {
    value: f64,
    unitary: ComplexMatrix,
    skipped: Option<SkippedRestart>,
}

fn ascend(
    rho: &ComplexMatrix,
    start: ComplexMatrix,
    opts: &OptimizerOptions,
    index: usize,
    source: RestartSource,
) -> RestartOutcome {
    let d = start.rows();
    let mut u = start;
    let mut f = expectation(rho, &phi_u(&u));
    let mut best = (f, u.clone());
    for it in 0..opts.max_iterations {
        let v = rho.matvec(&phi_u(&u));
        let next = match nearest_unitary(&reshape_gradient(&v, d)) {
            Ok(next) => next,
            Err(e) => {
                return RestartOutcome {
                    value: best.0,
                    unitary: best.1,
                    skipped: Some(SkippedRestart {
                        index,
                        source,
                        iteration: Some(it),
                        reason: e.to_string(),
                    }),
                }
            }
        };
        let f_next = expectation(rho, &phi_u(&next));
        if f_next > best.0 {
            best = (f_next, next.clone());
        }
        let change = (f_next - f).abs();
        u = next;
        f = f_next;
        if change < opts.tolerance {
            break;
        }
    }
    RestartOutcome {
        value: best.0,
        unitary: best.1,
        skipped: None,
    }
}

/// Best objective over projected power-iteration ascents from several
/// starting unitaries. Each step sets `U ← polar(G)` where `G` is the
/// reshaped `ρ|φ_U⟩`; restarts run independently and the maximum wins, ties
/// going to the earliest restart.
pub fn fef_lower_estimate(rho: &DensityState, opts: &OptimizerOptions) -> Result<FefEstimate> {
    if opts.restarts == 0 {
        return Err(Error::Usage("restarts must be positive".into()));
    }
    let d = rho.dim();
    let m = rho.matrix();
    let table = principal_basis_table(d)?;
    let sources = restart_sources(d, opts.restarts);

    let mut rng = seeded_rng(opts.seed);
    let mut starts: Vec<std::result::Result<ComplexMatrix, String>> = Vec::with_capacity(sources.len());
    for &source in &sources {
        starts.push(match source {
            RestartSource::Identity => Ok(ComplexMatrix::identity(d)),
            RestartSource::TopEigenvector => {
                let eig = hermitian_eigen(&m.hermitian_part(), f64::INFINITY)?;
                nearest_unitary(&reshape_gradient(&eig.vector(0), d)).map_err(|e| e.to_string())
            }
            RestartSource::Principal { i, j } => Ok(table.get(i as i64, j as i64).clone()),
            RestartSource::Haar { .. } => Ok(haar_unitary(d, &mut rng)),
        });
    }

    let outcomes: Vec<std::result::Result<RestartOutcome, SkippedRestart>> = starts
        .into_par_iter()
        .zip(sources.par_iter())
        .enumerate()
        .map(|(index, (start, &source))| match start {
            Ok(u) => Ok(ascend(m, u, opts, index, source)),
            Err(reason) => Err(SkippedRestart {
                index,
                source,
                iteration: None,
                reason,
            }),
        })
        .collect();

    let mut best: Option<(f64, ComplexMatrix, RestartSource)> = None;
    let mut skipped = Vec::new();
    for (outcome, &source) in outcomes.into_iter().zip(&sources) {
        match outcome {
            Ok(o) => {
                if let Some(s) = o.skipped {
                    skipped.push(s);
                }
                if best.as_ref().is_none_or(|b| o.value > b.0) {
                    best = Some((o.value, o.unitary, source));
                }
            }
            Err(s) => skipped.push(s),
        }
    }
    // The identity restart always produces a value.
    let (value, unitary, source) = best.expect("identity restart");
    Ok(FefEstimate {
        value,
        unitary,
        source,
        skipped,
    })
}

fn serialize_matrix<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Parts {
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    }
    let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
        (0..m.rows()).map(|r| (0..m.cols()).map(|c| f(&m[(r, c)])).collect()).collect()
    };
    Parts {
        re: rows(|z| z.re),
        im: rows(|z| z.im),
    }
    .serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub bound: String,
    /// `fef_lower − bound`, positive.
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub state_label: String,
    pub d: usize,
    pub frobenius_norm: f64,
    pub bounds: BTreeMap<String, f64>,
    /// Values reported alongside the bounds but not audited.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub reference_values: BTreeMap<String, f64>,
    pub fef_lower: f64,
    #[serde(serialize_with = "serialize_matrix")]
    pub best_unitary: ComplexMatrix,
    pub best_source: RestartSource,
    pub violations: Vec<Violation>,
    pub skipped_restarts: Vec<SkippedRestart>,
}

impl BoundReport {
    pub fn is_flagged(&self, bound: &str) -> bool {
        self.violations.iter().any(|v| v.bound == bound)
    }
}

/// Every bound versus the numeric lower estimate. Violations are findings
/// and never produce an error.
pub fn bound_audit(rho: &DensityState, opts: &OptimizerOptions, label: &str) -> Result<BoundReport> {
    let mut bounds = BTreeMap::new();
    bounds.insert(THEOREM1.to_string(), theorem1_bound(rho));
    bounds.insert(HOELDER_SUM.to_string(), hoelder_sum_bound(rho));
    bounds.insert(LM.to_string(), lm_bound(rho)?);
    bounds.insert(SPECTRAL.to_string(), spectral_bound(rho)?);
    let est = fef_lower_estimate(rho, opts)?;
    let violations = bounds
        .iter()
        .filter(|(_, &b)| est.value > b + VIOLATION_TOL)
        .map(|(name, &b)| Violation {
            bound: name.clone(),
            gap: est.value - b,
        })
        .collect();
    Ok(BoundReport {
        state_label: label.to_string(),
        d: rho.dim(),
        frobenius_norm: frobenius_norm(rho.matrix()),
        bounds,
        reference_values: BTreeMap::new(),
        fef_lower: est.value,
        best_unitary: est.unitary,
        best_source: est.source,
        violations,
        skipped_restarts: est.skipped,
    })
}
