//! Coefficients of bipartite operators in the principal basis and in the
//! Gell-Mann (Bloch) basis.
//!
//! Principal expansion:
//!
//! ```text
//! ρ = (1/d²)[I⊗I + Σ' a_ij A_ij⊗I + Σ' b_ij I⊗A_ij + Σ' c_ij^kl A_ij⊗A_kl]
//! a_ij = tr(ρ(A_ij†⊗I)),  b_ij = tr(ρ(I⊗A_ij†)),  c_ij^kl = tr(ρ(A_ij†⊗A_kl†))
//! ```
//!
//! where `Σ'` skips `(0,0)` in every index pair. Bloch expansion:
//!
//! ```text
//! ρ = (1/d²)I⊗I + (1/d)Σ r_i λ_i⊗I + (1/d)Σ s_j I⊗λ_j + Σ m_ij λ_i⊗λ_j
//! r_i = ½tr(ρ λ_i⊗I),  s_j = ½tr(ρ I⊗λ_j),  m_ij = ¼tr(ρ λ_i⊗λ_j)
//! ```

use rayon::prelude::*;

use crate::basis::{gell_mann_basis, principal_basis_table, zmod};
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, C64};
use crate::states::{max_entangled_projector, DensityState};

/// Largest imaginary part tolerated when extracting Bloch coefficients.
pub const BLOCH_IMAG_TOL: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);

/// `tr(ρ (X ⊗ Y))` computed from the nonzero entries of `X` and `Y`.
pub fn trace_against_kron(rho: &ComplexMatrix, x: &ComplexMatrix, y: &ComplexMatrix) -> C64 {
    let (dx, dy) = (x.rows(), y.rows());
    let nz = |m: &ComplexMatrix| -> Vec<(usize, usize, C64)> {
        let n = m.rows();
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter_map(|(r, c)| {
                let z = m[(r, c)];
                (z != ZERO).then_some((r, c, z))
            })
            .collect()
    };
    let (xs, ys) = (nz(x), nz(y));
    let mut acc = ZERO;
    // tr(ρ(X⊗Y)) = Σ ρ[(a,b),(a',b')] X[a',a] Y[b',b]
    for &(ap, a, xv) in &xs {
        for &(bp, b, yv) in &ys {
            acc += rho[(a * dy + b, ap * dy + bp)] * xv * yv;
        }
    }
    debug_assert_eq!(rho.rows(), dx * dy);
    acc
}

#[derive(Debug, Clone)]
pub struct PrincipalCoefficients {
    d: usize,
    a: Vec<C64>,
    b: Vec<C64>,
    c: Vec<C64>,
}

impl PrincipalCoefficients {
    pub fn zeros(d: usize) -> Self {
        Self {
            d,
            a: vec![ZERO; d * d],
            b: vec![ZERO; d * d],
            c: vec![ZERO; d * d * d * d],
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn pair(&self, i: usize, j: usize) -> usize {
        zmod(i as i64, self.d) * self.d + zmod(j as i64, self.d)
    }

    pub fn a(&self, i: usize, j: usize) -> C64 {
        self.a[self.pair(i, j)]
    }

    pub fn b(&self, i: usize, j: usize) -> C64 {
        self.b[self.pair(i, j)]
    }

    pub fn c(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.c[self.pair(i, j) * self.d * self.d + self.pair(k, l)]
    }

    /// Sets `a_ij`; writes to the excluded index `(0,0)` are ignored.
    pub fn set_a(&mut self, i: usize, j: usize, v: C64) {
        let p = self.pair(i, j);
        if p != 0 {
            self.a[p] = v;
        }
    }

    pub fn set_b(&mut self, i: usize, j: usize, v: C64) {
        let p = self.pair(i, j);
        if p != 0 {
            self.b[p] = v;
        }
    }

    pub fn set_c(&mut self, i: usize, j: usize, k: usize, l: usize, v: C64) {
        let (p, q) = (self.pair(i, j), self.pair(k, l));
        if p != 0 && q != 0 {
            self.c[p * self.d * self.d + q] = v;
        }
    }

    /// All entries as `(family, indices, value)`; `indices` is `[i, j]` for
    /// `a`/`b` and `[i, j, k, l]` for `c`.
    pub fn entries(&self) -> impl Iterator<Item = (char, Vec<usize>, C64)> + '_ {
        let d = self.d;
        let dd = d * d;
        let a = self.a.iter().enumerate().map(move |(p, &v)| ('a', vec![p / d, p % d], v));
        let b = self.b.iter().enumerate().map(move |(p, &v)| ('b', vec![p / d, p % d], v));
        let c = self.c.iter().enumerate().map(move |(x, &v)| {
            let (p, q) = (x / dd, x % dd);
            ('c', vec![p / d, p % d, q / d, q % d], v)
        });
        a.chain(b).chain(c)
    }
}

pub fn principal_coefficients(rho: &DensityState) -> Result<PrincipalCoefficients> {
    principal_coefficients_of(rho.matrix(), rho.dim())
}

/// Principal coefficients of any `d² × d²` operator.
pub fn principal_coefficients_of(m: &ComplexMatrix, d: usize) -> Result<PrincipalCoefficients> {
    if m.rows() != d * d || m.cols() != d * d {
        return Err(Error::Dimension(format!(
            "expected a {0}x{0} operator for d={d}",
            d * d
        )));
    }
    let table = principal_basis_table(d)?;
    let dd = d * d;
    let id = ComplexMatrix::identity(d);
    let adj: Vec<ComplexMatrix> = (0..dd)
        .map(|p| table.get((p / d) as i64, (p % d) as i64).adjoint())
        .collect();
    let mut out = PrincipalCoefficients::zeros(d);
    for p in 1..dd {
        out.a[p] = trace_against_kron(m, &adj[p], &id);
        out.b[p] = trace_against_kron(m, &id, &adj[p]);
    }
    let rows: Vec<Vec<C64>> = (0..dd)
        .into_par_iter()
        .map(|p| {
            if p == 0 {
                return vec![ZERO; dd];
            }
            (0..dd)
                .map(|q| if q == 0 { ZERO } else { trace_against_kron(m, &adj[p], &adj[q]) })
                .collect()
        })
        .collect();
    out.c = rows.concat();
    Ok(out)
}

/// Evaluates the principal expansion term by term.
pub fn principal_reconstruct(coeffs: &PrincipalCoefficients) -> Result<ComplexMatrix> {
    let d = coeffs.d;
    let dd = d * d;
    let table = principal_basis_table(d)?;
    let id = ComplexMatrix::identity(d);
    let basis = |p: usize| table.get((p / d) as i64, (p % d) as i64);
    let mut acc = kron(&id, &id);
    for p in 1..dd {
        if coeffs.a[p] != ZERO {
            acc = &acc + &kron(basis(p), &id).scale(coeffs.a[p]);
        }
        if coeffs.b[p] != ZERO {
            acc = &acc + &kron(&id, basis(p)).scale(coeffs.b[p]);
        }
    }
    for p in 1..dd {
        for q in 1..dd {
            let v = coeffs.c[p * dd + q];
            if v != ZERO {
                acc = &acc + &kron(basis(p), basis(q)).scale(v);
            }
        }
    }
    Ok(acc.scale_re(1.0 / dd as f64))
}

/// Which partner `A_kl` is paired with `A_ij` in a correlation-only
/// principal form `(1/d²)(I⊗I + t Σ' A_ij ⊗ A_kl)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// `(k, l) = (−i, j)`, i.e. `A_kl = conj(A_ij)`. This is the pairing
    /// that reproduces `P₊`.
    Conjugate,
    /// `(k, l) = (−i, −j)` as printed; agrees with `Conjugate` only at `d = 2`.
    Printed,
}

impl Pairing {
    pub fn partner(self, d: usize, i: usize, j: usize) -> (usize, usize) {
        let ni = zmod(-(i as i64), d);
        match self {
            Pairing::Conjugate => (ni, j),
            Pairing::Printed => (ni, zmod(-(j as i64), d)),
        }
    }
}

/// `(1/d²)(I⊗I + t Σ_{(i,j)≠(0,0)} A_ij ⊗ A_partner(i,j))`.
pub fn paired_principal_form(d: usize, t: f64, pairing: Pairing) -> Result<ComplexMatrix> {
    let mut coeffs = PrincipalCoefficients::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let (k, l) = pairing.partner(d, i, j);
            coeffs.set_c(i, j, k, l, C64::new(t, 0.0));
        }
    }
    principal_reconstruct(&coeffs)
}

/// `∥P₊ − (1/d²)(I⊗I + Σ' A_ij ⊗ A_partner)∥_F`.
pub fn maxent_pairing_residual(d: usize, pairing: Pairing) -> Result<f64> {
    let p = max_entangled_projector(d)?;
    Ok(paired_principal_form(d, 1.0, pairing)?.frobenius_distance(p.matrix()))
}

/// Correlation-only coefficient summary: the largest deviation of `c` from
/// `t` on the paired entries and from 0 everywhere else (including `a`, `b`).
pub fn paired_coefficient_deviation(coeffs: &PrincipalCoefficients, t: f64, pairing: Pairing) -> f64 {
    let d = coeffs.d;
    let mut worst: f64 = 0.0;
    for (family, idx, v) in coeffs.entries() {
        let want = match family {
            'c' if (idx[0], idx[1]) != (0, 0)
                && (idx[2], idx[3]) == pairing.partner(d, idx[0], idx[1]) =>
            {
                t
            }
            _ => 0.0,
        };
        worst = worst.max((v - want).norm());
    }
    worst
}

#[derive(Debug, Clone)]
pub struct BlochCoefficients {
    d: usize,
    r: Vec<f64>,
    s: Vec<f64>,
    m: Vec<f64>,
}

impl BlochCoefficients {
    pub fn zeros(d: usize) -> Self {
        let n = d * d - 1;
        Self {
            d,
            r: vec![0.0; n],
            s: vec![0.0; n],
            m: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of Gell-Mann generators, `d² − 1`.
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn m(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.len() + j]
    }

    pub fn r_mut(&mut self) -> &mut [f64] {
        &mut self.r
    }

    pub fn s_mut(&mut self) -> &mut [f64] {
        &mut self.s
    }

    pub fn set_m(&mut self, i: usize, j: usize, v: f64) {
        let n = self.len();
        self.m[i * n + j] = v;
    }

    /// Correlation matrix `M(ρ)` with entries `m_ij`.
    pub fn correlation_matrix(&self) -> ComplexMatrix {
        let n = self.len();
        ComplexMatrix::from_fn(n, n, |i, j| C64::new(self.m[i * n + j], 0.0))
    }
}

pub fn bloch_coefficients(rho: &DensityState) -> Result<BlochCoefficients> {
    bloch_coefficients_of(rho.matrix(), rho.dim())
}

pub fn bloch_coefficients_of(rho: &ComplexMatrix, d: usize) -> Result<BlochCoefficients> {
    if rho.rows() != d * d || rho.cols() != d * d {
        return Err(Error::Dimension(format!(
            "expected a {0}x{0} operator for d={d}",
            d * d
        )));
    }
    let g = gell_mann_basis(d)?;
    let id = ComplexMatrix::identity(d);
    let n = g.len();
    let mut out = BlochCoefficients::zeros(d);
    let mut worst_imag: f64 = 0.0;
    let mut take = |z: C64, scale: f64| {
        worst_imag = worst_imag.max((z * scale).im.abs());
        z.re * scale
    };
    for (k, lam) in g.matrices().iter().enumerate() {
        out.r[k] = take(trace_against_kron(rho, lam, &id), 0.5);
        out.s[k] = take(trace_against_kron(rho, &id, lam), 0.5);
    }
    for (i, li) in g.matrices().iter().enumerate() {
        for (j, lj) in g.matrices().iter().enumerate() {
            out.m[i * n + j] = take(trace_against_kron(rho, li, lj), 0.25);
        }
    }
    if worst_imag > BLOCH_IMAG_TOL {
        return Err(Error::Hermiticity {
            residual: worst_imag,
            tol: BLOCH_IMAG_TOL,
        });
    }
    Ok(out)
}

/// Evaluates the Bloch expansion term by term.
pub fn bloch_reconstruct(coeffs: &BlochCoefficients) -> Result<ComplexMatrix> {
    let d = coeffs.d;
    let g = gell_mann_basis(d)?;
    let id = ComplexMatrix::identity(d);
    let df = d as f64;
    let mut acc = kron(&id, &id).scale_re(1.0 / (df * df));
    for (k, lam) in g.matrices().iter().enumerate() {
        if coeffs.r[k] != 0.0 {
            acc = &acc + &kron(lam, &id).scale_re(coeffs.r[k] / df);
        }
        if coeffs.s[k] != 0.0 {
            acc = &acc + &kron(&id, lam).scale_re(coeffs.s[k] / df);
        }
    }
    for (i, li) in g.matrices().iter().enumerate() {
        for (j, lj) in g.matrices().iter().enumerate() {
            let v = coeffs.m(i, j);
            if v != 0.0 {
                acc = &acc + &kron(li, lj).scale_re(v);
            }
        }
    }
    Ok(acc)
}
