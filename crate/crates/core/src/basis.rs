//! Operator bases of `gl(d)`.
//!
//! The principal basis is `A_ij = Σ_{m ∈ Z_d} ω^{im} E_{m,m+j}` with the fixed
//! root `ω = exp(2πi/d)`. All indices live in `Z_d`; negative indices are
//! reduced to `0..d` before lookup. The generalized Gell-Mann basis is ordered
//! as the diagonal family (`l = 0..d-2`), then the symmetric family, then the
//! antisymmetric family, the off-diagonal families in lexicographic `(j, k)`
//! order with `j < k`.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Residual above which a basis identity is considered broken.
pub const IDENTITY_TOL: f64 = 1e-10;

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Dimension(format!("subsystem dimension must be >= 2, got {d}")));
    }
    Ok(())
}

/// Reduces an integer index into `Z_d`.
#[inline]
pub fn zmod(i: i64, d: usize) -> usize {
    i.rem_euclid(d as i64) as usize
}

/// `exp(2πi k/d)`, exact on quarter turns.
pub fn root_of_unity(d: usize, k: i64) -> C64 {
    let k = zmod(k, d);
    if (4 * k) % d == 0 {
        return match 4 * k / d {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, TAU * k as f64 / d as f64)
}

/// `A_ij` for the subsystem dimension `d`. Indices are taken mod `d`.
pub fn principal_matrix(d: usize, i: i64, j: i64) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let (i, j) = (zmod(i, d), zmod(j, d));
    let mut a = ComplexMatrix::zeros(d, d);
    for m in 0..d {
        a[(m, (m + j) % d)] = root_of_unity(d, (i * m) as i64);
    }
    Ok(a)
}

/// `E_{rc}`, the `d × d` unit matrix with a single 1 at `(r, c)`.
pub fn unit_matrix(d: usize, r: usize, c: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(d, d);
    e[(r, c)] = C64::new(1.0, 0.0);
    e
}

/// All `d²` principal matrices for one dimension.
#[derive(Debug, Clone)]
pub struct PrincipalBasisTable {
    d: usize,
    omega: C64,
    matrices: Vec<ComplexMatrix>,
}

/// Largest residual of each principal-basis identity over all index pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PrincipalIdentityResiduals {
    /// `∥A_ij†A_ij − I∥_F`
    pub unitarity: f64,
    /// `|tr(A_ij A_kl†) − d δ_ik δ_jl|`
    pub orthogonality: f64,
    /// `∥A_ij A_kl − ω^{jk} A_{i+k,j+l}∥_F`
    pub product: f64,
    /// `∥A_ij† − ω^{ij} A_{−i,−j}∥_F`
    pub dagger: f64,
    /// `|tr(A_ij) − d δ_i0 δ_j0|`
    pub trace: f64,
    /// `|tr(A_ij · (ω^{ij}/d) A_{−i,−j}) − 1|`
    pub dual_pairing: f64,
    /// `∥(1/d) Σ_l ω^{−kl} A_lj − E_{k,k+j}∥_F`
    pub inverse_fourier: f64,
}

impl PrincipalIdentityResiduals {
    pub fn max(&self) -> f64 {
        [
            self.unitarity,
            self.orthogonality,
            self.product,
            self.dagger,
            self.trace,
            self.dual_pairing,
            self.inverse_fourier,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl PrincipalBasisTable {
    /// Builds the table without checking identities; see
    /// [`principal_basis_table`] for the verified, cached variant.
    pub fn build(d: usize) -> Result<Self> {
        check_dim(d)?;
        let mut matrices = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                matrices.push(principal_matrix(d, i as i64, j as i64)?);
            }
        }
        Ok(Self {
            d,
            omega: root_of_unity(d, 1),
            matrices,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn omega(&self) -> C64 {
        self.omega
    }

    /// `ω^k` with `k` reduced mod `d`.
    pub fn omega_pow(&self, k: i64) -> C64 {
        root_of_unity(self.d, k)
    }

    /// `A_ij` with indices reduced mod `d`.
    pub fn get(&self, i: i64, j: i64) -> &ComplexMatrix {
        &self.matrices[zmod(i, self.d) * self.d + zmod(j, self.d)]
    }

    /// Index pairs `(i, j)` in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.d).flat_map(move |i| (0..self.d).map(move |j| (i, j)))
    }

    /// `(ω^{ij}/d)·A_{−i,−j}`, the element dual to `A_ij` under `tr(xy)`.
    pub fn dual(&self, i: i64, j: i64) -> ComplexMatrix {
        let s = self.omega_pow(i * j) / self.d as f64;
        self.get(-i, -j).scale(s)
    }

    /// Index `(k, l)` with `A_kl = conj(A_ij)`, namely `(−i, j)`. This is the
    /// partner paired with `A_ij` in `P₊ = (1/d²) Σ A_ij ⊗ conj(A_ij)`.
    pub fn conjugate_index(&self, i: usize, j: usize) -> (usize, usize) {
        (zmod(-(i as i64), self.d), j)
    }

    /// Checks every identity of the principal basis on all index pairs.
    pub fn verify(&self) -> PrincipalIdentityResiduals {
        let d = self.d;
        let df = d as f64;
        let id = ComplexMatrix::identity(d);
        let mut r = PrincipalIdentityResiduals::default();
        let adjoints: Vec<ComplexMatrix> = self.matrices.iter().map(|m| m.adjoint()).collect();
        for (i, j) in self.indices() {
            let (ii, jj) = (i as i64, j as i64);
            let a = self.get(ii, jj);
            let a_dag = &adjoints[i * d + j];
            r.unitarity = r.unitarity.max(a_dag.matmul(a).frobenius_distance(&id));
            let want_tr = if (i, j) == (0, 0) { df } else { 0.0 };
            r.trace = r.trace.max((a.trace() - want_tr).norm());
            let dagger = self.get(-ii, -jj).scale(self.omega_pow(ii * jj));
            r.dagger = r.dagger.max(a_dag.frobenius_distance(&dagger));
            r.dual_pairing = r
                .dual_pairing
                .max((a.trace_product(&self.dual(ii, jj)) - 1.0).norm());
            for (k, l) in self.indices() {
                let (kk, ll) = (k as i64, l as i64);
                let b = self.get(kk, ll);
                let want = if (i, j) == (k, l) { df } else { 0.0 };
                let ortho = a.trace_product(&adjoints[k * d + l]);
                r.orthogonality = r.orthogonality.max((ortho - want).norm());
                let prod = a.matmul(b);
                let rule = self.get(ii + kk, jj + ll).scale(self.omega_pow(jj * kk));
                r.product = r.product.max(prod.frobenius_distance(&rule));
            }
        }
        for k in 0..d {
            for j in 0..d {
                let e = unit_matrix(d, k, (k + j) % d);
                let f = unit_from_principal(self, k, j);
                r.inverse_fourier = r.inverse_fourier.max(f.frobenius_distance(&e));
            }
        }
        r
    }
}

/// Verified principal basis for dimension `d`, built once per process and
/// shared.
pub fn principal_basis_table(d: usize) -> Result<Arc<PrincipalBasisTable>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PrincipalBasisTable>>>> = OnceLock::new();
    check_dim(d)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&d) {
        return Ok(Arc::clone(t));
    }
    let table = PrincipalBasisTable::build(d)?;
    let residuals = table.verify();
    if residuals.max() > IDENTITY_TOL {
        return Err(Error::Convergence("principal basis identities violated"));
    }
    let table = Arc::new(table);
    cache
        .lock()
        .unwrap()
        .entry(d)
        .or_insert_with(|| Arc::clone(&table));
    Ok(table)
}

/// Inverse Fourier transform `(1/d) Σ_l ω^{−kl} A_lj`, which equals `E_{k,k+j}`.
pub fn unit_from_principal(table: &PrincipalBasisTable, k: usize, j: usize) -> ComplexMatrix {
    let d = table.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for l in 0..d {
        let w = table.omega_pow(-((k * l) as i64)) / d as f64;
        out = &out + &table.get(l as i64, j as i64).scale(w);
    }
    out
}

/// Generalized Gell-Mann matrices, `tr(λ_a λ_b) = 2δ_ab`.
#[derive(Debug, Clone)]
pub struct GellMannBasis {
    d: usize,
    matrices: Vec<ComplexMatrix>,
}

impl GellMannBasis {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn get(&self, k: usize) -> &ComplexMatrix {
        &self.matrices[k]
    }

    /// Largest deviation from Hermiticity, tracelessness and
    /// `tr(λ_a λ_b) = 2δ_ab`.
    pub fn verify(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, la) in self.matrices.iter().enumerate() {
            worst = worst.max(la.hermiticity_residual()).max(la.trace().norm());
            for (b, lb) in self.matrices.iter().enumerate() {
                let want = if a == b { 2.0 } else { 0.0 };
                worst = worst.max((la.trace_product(lb) - want).norm());
            }
        }
        worst
    }
}

pub fn gell_mann_basis(d: usize) -> Result<GellMannBasis> {
    check_dim(d)?;
    let mut matrices = Vec::with_capacity(d * d - 1);
    for l in 0..d - 1 {
        let norm = (2.0 / ((l + 1) * (l + 2)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        diag[..=l].fill(norm);
        diag[l + 1] = -(l as f64 + 1.0) * norm;
        matrices.push(ComplexMatrix::diag(&diag));
    }
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|j| (j + 1..d).map(move |k| (j, k)))
        .collect();
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = C64::new(1.0, 0.0);
        m[(k, j)] = C64::new(1.0, 0.0);
        matrices.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = C64::new(0.0, -1.0);
        m[(k, j)] = C64::new(0.0, 1.0);
        matrices.push(m);
    }
    Ok(GellMannBasis { d, matrices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn real(d: usize, v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(d, d, v).unwrap()
    }

    #[test]
    fn pauli_specialization() {
        let x = real(2, &[0.0, 1.0, 1.0, 0.0]);
        let z = real(2, &[1.0, 0.0, 0.0, -1.0]);
        let a11 = real(2, &[0.0, 1.0, -1.0, 0.0]);
        assert_eq!(principal_matrix(2, 0, 1).unwrap(), x);
        assert_eq!(principal_matrix(2, 1, 0).unwrap(), z);
        assert_eq!(principal_matrix(2, 1, 1).unwrap(), a11);
    }

    #[test]
    fn a00_is_identity() {
        for d in 2..=8 {
            assert_eq!(principal_matrix(d, 0, 0).unwrap(), ComplexMatrix::identity(d));
        }
    }

    #[test]
    fn d3_entries_by_direct_loop() {
        let a = principal_matrix(3, 1, 2).unwrap();
        let w = C64::from_polar(1.0, TAU / 3.0);
        for m in 0..3 {
            for col in 0..3 {
                let want = if col == (m + 2) % 3 { w.powu(m as u32) } else { c(0.0, 0.0) };
                assert!((a[(m, col)] - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(matches!(principal_matrix(1, 0, 0), Err(Error::Dimension(_))));
        assert!(matches!(principal_basis_table(0), Err(Error::Dimension(_))));
        assert!(matches!(gell_mann_basis(1), Err(Error::Dimension(_))));
    }

    #[test]
    fn negative_indices_reduce() {
        let t = PrincipalBasisTable::build(5).unwrap();
        assert_eq!(t.get(-1, -2), t.get(4, 3));
        assert_eq!(t.get(7, 5), t.get(2, 0));
    }

    #[test]
    fn d2_product_example() {
        let t = principal_basis_table(2).unwrap();
        let x = t.get(0, 1);
        let z = t.get(1, 0);
        let prod = x.matmul(z);
        let want = t.get(1, 1).scale(t.omega_pow(1));
        assert!(prod.frobenius_distance(&want) < 1e-15);
        assert!(prod.frobenius_distance(&(&unit_matrix(2, 1, 0) - &unit_matrix(2, 0, 1))) < 1e-15);
    }

    #[test]
    fn identities_hold_up_to_d8() {
        for d in 2..=8 {
            let r = PrincipalBasisTable::build(d).unwrap().verify();
            assert!(r.max() <= 1e-10, "d={d}: {r:?}");
            assert!(r.unitarity <= 1e-12, "d={d}: {r:?}");
            assert!(r.inverse_fourier <= 1e-12, "d={d}: {r:?}");
        }
    }

    #[test]
    fn trace_and_dual_tables() {
        let t = principal_basis_table(4).unwrap();
        for (i, j) in t.indices() {
            let tr = t.get(i as i64, j as i64).trace();
            let want = if (i, j) == (0, 0) { 4.0 } else { 0.0 };
            assert!((tr - want).norm() < 1e-12);
            let pairing = t.get(i as i64, j as i64).trace_product(&t.dual(i as i64, j as i64));
            assert!((pairing - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugate_index_is_complex_conjugate() {
        for d in 2..=6 {
            let t = principal_basis_table(d).unwrap();
            for (i, j) in t.indices() {
                let (k, l) = t.conjugate_index(i, j);
                let conj = t.get(i as i64, j as i64).conj();
                assert!(t.get(k as i64, l as i64).frobenius_distance(&conj) < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_fourier_examples() {
        let t = principal_basis_table(2).unwrap();
        assert!(unit_from_principal(&t, 0, 0).frobenius_distance(&unit_matrix(2, 0, 0)) < 1e-15);
        assert!(unit_from_principal(&t, 0, 1).frobenius_distance(&unit_matrix(2, 0, 1)) < 1e-15);

        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..40 {
            let d = rng.random_range(2..=8);
            let (k, j) = (rng.random_range(0..d), rng.random_range(0..d));
            let t = principal_basis_table(d).unwrap();
            let e = unit_matrix(d, k, (k + j) % d);
            assert!(unit_from_principal(&t, k, j).frobenius_distance(&e) <= 1e-12);
        }
    }

    #[test]
    fn gell_mann_d2_is_zxy() {
        let g = gell_mann_basis(2).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.get(0), &real(2, &[1.0, 0.0, 0.0, -1.0]));
        assert_eq!(g.get(1), &real(2, &[0.0, 1.0, 1.0, 0.0]));
        let y = ComplexMatrix::from_row_major(
            2,
            2,
            vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(g.get(2), &y);
    }

    #[test]
    fn gell_mann_orthogonality_and_count() {
        assert_eq!(gell_mann_basis(3).unwrap().len(), 8);
        for d in 2..=8 {
            let g = gell_mann_basis(d).unwrap();
            assert_eq!(g.len(), d * d - 1);
            assert!(g.verify() <= 1e-10, "d={d}");
        }
    }

    #[test]
    fn gell_mann_with_identity_is_complete() {
        for d in 2..=5 {
            let g = gell_mann_basis(d).unwrap();
            let mut basis = vec![ComplexMatrix::identity(d).scale_re(1.0 / (d as f64).sqrt())];
            basis.extend(g.matrices().iter().map(|m| m.scale_re(1.0 / 2f64.sqrt())));
            assert_eq!(basis.len(), d * d);
            for (a, x) in basis.iter().enumerate() {
                for (b, y) in basis.iter().enumerate() {
                    let gram = x.adjoint().trace_product(y);
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((gram - want).norm() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn principal_round_trip_through_kron_shapes() {
        let t = principal_basis_table(3).unwrap();
        let k = kron(t.get(1, 2), t.get(2, 1));
        assert_eq!((k.rows(), k.cols()), (9, 9));
        assert!(k.unitarity_residual() < 1e-12);
    }
}
