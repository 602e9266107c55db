//! Bipartite states on `H ⊗ H` with `dim H = d`.
//!
//! Row index of `|ij⟩ = |i⟩ ⊗ |j⟩` is `i·d + j`; local unitaries in the FEF
//! act on the second factor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_spectrum, kron, nearest_unitary, ComplexMatrix, C64};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-9;

/// Seeded generator used for every random draw in the crate (ChaCha8).
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Validation {
    pub hermiticity_residual: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    pub min_eigenvalue: f64,
}

impl Validation {
    pub fn trace(&self) -> C64 {
        C64::new(self.trace_re, self.trace_im)
    }

    pub fn is_physical(&self) -> bool {
        self.check().is_ok()
    }

    pub fn check(&self) -> Result<()> {
        if self.hermiticity_residual > HERMITICITY_TOL {
            return Err(Error::Physicality(format!(
                "hermiticity residual {:e} exceeds {HERMITICITY_TOL:e}",
                self.hermiticity_residual
            )));
        }
        if (self.trace() - 1.0).norm() > TRACE_TOL {
            return Err(Error::Physicality(format!(
                "trace {}{:+}i differs from 1",
                self.trace_re, self.trace_im
            )));
        }
        if self.min_eigenvalue < PSD_TOL {
            return Err(Error::Physicality(format!(
                "minimum eigenvalue {:e} is negative",
                self.min_eigenvalue
            )));
        }
        Ok(())
    }
}

/// Reports hermiticity residual `∥M − M†∥_F`, trace, and the minimum
/// eigenvalue of `(M + M†)/2`. Non-physical input is reported, not rejected.
pub fn validate_density(m: &ComplexMatrix) -> Result<Validation> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "density matrix must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let spectrum = hermitian_spectrum(&m.hermitian_part(), f64::INFINITY)?;
    let tr = m.trace();
    Ok(Validation {
        hermiticity_residual: m.hermiticity_residual(),
        trace_re: tr.re,
        trace_im: tr.im,
        min_eigenvalue: *spectrum.last().expect("non-empty spectrum"),
    })
}

/// Operator on `H ⊗ H` with its validation record.
#[derive(Debug, Clone)]
pub struct DensityState {
    d: usize,
    matrix: ComplexMatrix,
    validation: Validation,
}

impl DensityState {
    /// Wraps `matrix` and requires it to pass validation.
    pub fn new(d: usize, matrix: ComplexMatrix) -> Result<Self> {
        let state = Self::unchecked(d, matrix)?;
        state.validation.check()?;
        Ok(state)
    }

    /// Wraps `matrix` and records its validation without enforcing it.
    pub fn unchecked(d: usize, matrix: ComplexMatrix) -> Result<Self> {
        if d < 2 {
            return Err(Error::Dimension(format!("subsystem dimension must be >= 2, got {d}")));
        }
        if matrix.rows() != d * d || matrix.cols() != d * d {
            return Err(Error::Dimension(format!(
                "state on H⊗H with d={d} must be {0}x{0}, got {1}x{2}",
                d * d,
                matrix.rows(),
                matrix.cols()
            )));
        }
        let validation = validate_density(&matrix)?;
        Ok(Self {
            d,
            matrix,
            validation,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn validation(&self) -> &Validation {
        &self.validation
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Dimension(format!("subsystem dimension must be >= 2, got {d}")));
    }
    Ok(())
}

/// `|φ₊⟩ = (1/√d) Σ_i |ii⟩` as a vector of length `d²`.
pub fn max_entangled_vector(d: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); d * d];
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = C64::new(amp, 0.0);
    }
    v
}

fn projector_matrix(d: usize) -> ComplexMatrix {
    let n = d * d;
    let mut p = ComplexMatrix::zeros(n, n);
    let w = 1.0 / d as f64;
    for i in 0..d {
        for j in 0..d {
            p[(i * d + i, j * d + j)] = C64::new(w, 0.0);
        }
    }
    p
}

/// `P₊ = |φ₊⟩⟨φ₊| = (1/d) Σ_ij E_ij ⊗ E_ij`.
pub fn max_entangled_projector(d: usize) -> Result<DensityState> {
    check_dim(d)?;
    DensityState::new(d, projector_matrix(d))
}

/// Admissible mixing interval `[−1/(d²−1), 1]` of the isotropic family.
pub fn isotropic_window(d: usize) -> (f64, f64) {
    (-1.0 / (d * d - 1) as f64, 1.0)
}

fn check_isotropic(d: usize, p: f64) -> Result<()> {
    check_dim(d)?;
    let (lo, hi) = isotropic_window(d);
    if !(p >= lo - 1e-12 && p <= hi + 1e-12) {
        return Err(Error::Parameter {
            name: "p",
            value: p,
            interval: format!("[{lo}, {hi}]"),
        });
    }
    Ok(())
}

/// `((1−p)/d²) I + p P₊`.
pub fn isotropic_state(d: usize, p: f64) -> Result<DensityState> {
    check_isotropic(d, p)?;
    let n = d * d;
    let mixed = ComplexMatrix::identity(n).scale_re((1.0 - p) / n as f64);
    let m = &mixed + &projector_matrix(d).scale_re(p);
    DensityState::new(d, m)
}

pub(crate) fn isotropic_precondition(d: usize, p: f64) -> Result<()> {
    check_isotropic(d, p)
}

/// True flip `P = Σ_ij E_ij ⊗ E_ji`, `P|ab⟩ = |ba⟩`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let n = d * d;
    let mut p = ComplexMatrix::zeros(n, n);
    for a in 0..d {
        for b in 0..d {
            p[(b * d + a, a * d + b)] = C64::new(1.0, 0.0);
        }
    }
    p
}

/// The flip as printed, `Σ_ij E_ij ⊗ E_ij`, which equals `d·P₊`.
pub fn printed_flip_operator(d: usize) -> ComplexMatrix {
    projector_matrix(d).scale_re(d as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WernerVariant {
    /// Built from the true swap; a physical state.
    Swap,
    /// Built from `Σ_ij E_ij ⊗ E_ij`; not positive semidefinite.
    Paper,
}

/// `((d+1)/d³) I − (1/d²) P`. The `Paper` variant is returned unvalidated
/// with its validation record filled in.
pub fn werner_state(d: usize, variant: WernerVariant) -> Result<DensityState> {
    check_dim(d)?;
    let df = d as f64;
    let flip = match variant {
        WernerVariant::Swap => swap_operator(d),
        WernerVariant::Paper => printed_flip_operator(d),
    };
    let m = &ComplexMatrix::identity(d * d).scale_re((df + 1.0) / (df * df * df))
        - &flip.scale_re(1.0 / (df * df));
    match variant {
        WernerVariant::Swap => DensityState::new(d, m),
        WernerVariant::Paper => DensityState::unchecked(d, m),
    }
}

/// The 3⊗3 bound entangled family `ρ(a)`, `a ∈ [0, 1]`.
pub fn horodecki_state(a: f64) -> Result<DensityState> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Parameter {
            name: "a",
            value: a,
            interval: "[0, 1]".into(),
        });
    }
    let mut m = ComplexMatrix::zeros(9, 9);
    let mut set = |r: usize, c: usize, v: f64| m[(r - 1, c - 1)] = C64::new(v, 0.0);
    for k in [1, 2, 3, 4, 5, 6, 8] {
        set(k, k, a);
    }
    for (r, c) in [(1, 5), (1, 9), (5, 1), (5, 9), (9, 1), (9, 5)] {
        set(r, c, a);
    }
    set(7, 7, (1.0 + a) / 2.0);
    set(9, 9, (1.0 + a) / 2.0);
    let off = (1.0 - a * a).sqrt() / 2.0;
    set(7, 9, off);
    set(9, 7, off);
    DensityState::new(3, m.scale_re(1.0 / (8.0 * a + 1.0)))
}

/// `n × n` matrix of independent standard complex Gaussians, drawn row-major
/// with the real part first.
pub fn ginibre_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Haar-distributed unitary: the polar factor of a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        // Ginibre matrices are singular with probability zero.
        if let Ok(u) = nearest_unitary(&ginibre_matrix(d, rng)) {
            return u;
        }
    }
}

/// `G·G†/tr(G·G†)` for a seeded `d² × d²` Ginibre matrix `G`.
pub fn random_density_state(d: usize, seed: u64) -> Result<DensityState> {
    check_dim(d)?;
    let mut rng = seeded_rng(seed);
    let g = ginibre_matrix(d * d, &mut rng);
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    DensityState::new(d, gg.scale_re(1.0 / tr))
}

/// `I_d ⊗ U`.
pub fn local_on_second(u: &ComplexMatrix) -> ComplexMatrix {
    kron(&ComplexMatrix::identity(u.rows()), u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius_norm;
    use approx::assert_abs_diff_eq;

    fn spectrum(s: &DensityState) -> Vec<f64> {
        hermitian_spectrum(s.matrix(), 1e-12).unwrap()
    }

    #[test]
    fn projector_d2_entries() {
        let p = max_entangled_projector(2).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let want = if [0, 3].contains(&r) && [0, 3].contains(&c) { 0.5 } else { 0.0 };
                assert_eq!(p.matrix()[(r, c)], C64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn projector_is_pure() {
        for d in 2..=6 {
            let p = max_entangled_projector(d).unwrap();
            let purity = p.matrix().trace_product(p.matrix()).re;
            assert_abs_diff_eq!(purity, 1.0, epsilon = 1e-12);
            let s = spectrum(&p);
            assert_abs_diff_eq!(s[0], 1.0, epsilon = 1e-12);
            assert!(s[1..].iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn projector_d2_pauli_expansion() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let z = ComplexMatrix::diag(&[1.0, -1.0]);
        let y = ComplexMatrix::from_row_major(
            2,
            2,
            vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        let i = ComplexMatrix::identity(2);
        let sum = &(&(&kron(&i, &i) + &kron(&x, &x)) - &kron(&y, &y)) + &kron(&z, &z);
        let p = max_entangled_projector(2).unwrap();
        assert!(p.matrix().frobenius_distance(&sum.scale_re(0.25)) < 1e-15);
    }

    #[test]
    fn isotropic_examples() {
        for d in 2..=4 {
            let n = (d * d) as f64;
            let mixed = isotropic_state(d, 0.0).unwrap();
            assert!(mixed.matrix().frobenius_distance(&ComplexMatrix::identity(d * d).scale_re(1.0 / n)) < 1e-15);
            let pure = isotropic_state(d, 1.0).unwrap();
            assert!(pure.matrix().frobenius_distance(max_entangled_projector(d).unwrap().matrix()) < 1e-15);
        }
        let s = spectrum(&isotropic_state(2, 0.5).unwrap());
        for (x, w) in s.iter().zip([5.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0]) {
            assert_abs_diff_eq!(*x, w, epsilon = 1e-12);
        }
    }

    #[test]
    fn isotropic_window_edges() {
        for d in 2..=6 {
            let (lo, hi) = isotropic_window(d);
            let edge = isotropic_state(d, lo).unwrap();
            assert_abs_diff_eq!(edge.validation().min_eigenvalue, 0.0, epsilon = 1e-12);
            assert!(isotropic_state(d, hi).is_ok());
            let err = isotropic_state(d, lo - 1e-3).unwrap_err();
            assert!(err.to_string().contains('['), "{err}");
            assert!(matches!(isotropic_state(d, 1.01), Err(Error::Parameter { name: "p", .. })));
        }
    }

    #[test]
    fn isotropic_matches_direct_formula() {
        for d in 2..=5 {
            let p_star = max_entangled_projector(d).unwrap();
            let n = (d * d) as f64;
            for k in 0..=10 {
                let (lo, hi) = isotropic_window(d);
                let p = lo + (hi - lo) * k as f64 / 10.0;
                let direct = &ComplexMatrix::identity(d * d).scale_re((1.0 - p) / n)
                    + &p_star.matrix().scale_re(p);
                assert!(isotropic_state(d, p).unwrap().matrix().max_abs_diff(&direct) <= 1e-12);
            }
        }
    }

    #[test]
    fn werner_swap_spectrum() {
        for d in 2..=6 {
            let df = d as f64;
            let w = werner_state(d, WernerVariant::Swap).unwrap();
            assert_abs_diff_eq!(w.validation().trace_re, 1.0, epsilon = 1e-12);
            let sym = (df + 1.0) / df.powi(3) - 1.0 / (df * df);
            let anti = (df + 1.0) / df.powi(3) + 1.0 / (df * df);
            let s = spectrum(&w);
            let n_anti = d * (d - 1) / 2;
            for (k, x) in s.iter().enumerate() {
                let want = if k < n_anti { anti } else { sym };
                assert_abs_diff_eq!(*x, want, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(w.validation().min_eigenvalue, 1.0 / df.powi(3), epsilon = 1e-12);
        }
    }

    #[test]
    fn werner_swap_flip_expectation_d2() {
        let w = werner_state(2, WernerVariant::Swap).unwrap();
        let p = swap_operator(2);
        assert_abs_diff_eq!(w.matrix().trace_product(&p).re, -0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(p.trace().re, 2.0);
        assert_abs_diff_eq!(p.trace_product(&p).re, 4.0);
    }

    #[test]
    fn werner_paper_variant_is_not_psd() {
        let w = werner_state(2, WernerVariant::Paper).unwrap();
        assert_abs_diff_eq!(w.validation().min_eigenvalue, -0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(w.validation().trace_re, 1.0, epsilon = 1e-12);
        assert!(!w.validation().is_physical());
        let direct = &ComplexMatrix::identity(4).scale_re(3.0 / 8.0)
            - &max_entangled_projector(2).unwrap().matrix().scale_re(0.5);
        assert!(w.matrix().frobenius_distance(&direct) < 1e-15);
    }

    #[test]
    fn werner_swap_is_uu_invariant() {
        let mut rng = seeded_rng(42);
        for d in [2, 3, 4] {
            let w = werner_state(d, WernerVariant::Swap).unwrap();
            for _ in 0..20 {
                let v = haar_unitary(d, &mut rng);
                let vv = kron(&v, &v);
                let lhs = vv.matmul(w.matrix());
                let rhs = w.matrix().matmul(&vv);
                assert!(lhs.frobenius_distance(&rhs) <= 1e-8);
            }
        }
    }

    #[test]
    fn horodecki_trace_and_norm() {
        for k in 0..=10 {
            let a = k as f64 / 10.0;
            let s = horodecki_state(a).unwrap();
            assert_abs_diff_eq!(s.validation().trace_re, 1.0, epsilon = 1e-12);
            // Entrywise oracle: 13 entries a, two (1+a)/2, two sqrt(1-a²)/2.
            let sum_sq = 13.0 * a * a
                + 2.0 * ((1.0 + a) / 2.0).powi(2)
                + 2.0 * ((1.0 - a * a).sqrt() / 2.0).powi(2);
            let oracle = sum_sq.sqrt() / (8.0 * a + 1.0);
            let closed = (13.0 * a * a + a + 1.0).sqrt() / (8.0 * a + 1.0);
            assert_abs_diff_eq!(frobenius_norm(s.matrix()), oracle, epsilon = 1e-12);
            assert_abs_diff_eq!(oracle, closed, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            frobenius_norm(horodecki_state(1.0).unwrap().matrix()),
            15f64.sqrt() / 9.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn horodecki_a0_is_pure() {
        let s = horodecki_state(0.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = vec![C64::new(0.0, 0.0); 9];
        psi[6] = C64::new(h, 0.0); // |20⟩
        psi[8] = C64::new(h, 0.0); // |22⟩
        let pure = ComplexMatrix::from_fn(9, 9, |r, c| psi[r] * psi[c].conj());
        assert!(s.matrix().frobenius_distance(&pure) < 1e-15);
        assert_abs_diff_eq!(frobenius_norm(s.matrix()), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn horodecki_rejects_out_of_range() {
        assert!(matches!(horodecki_state(-0.1), Err(Error::Parameter { name: "a", .. })));
        assert!(horodecki_state(1.5).is_err());
        assert!(horodecki_state(f64::NAN).is_err());
    }

    #[test]
    fn random_states_are_valid_and_deterministic() {
        for d in 2..=4 {
            for seed in 0..10 {
                let s = random_density_state(d, seed).unwrap();
                assert!(s.validation().is_physical());
                let again = random_density_state(d, seed).unwrap();
                assert_eq!(s.matrix(), again.matrix());
            }
        }
    }

    #[test]
    fn random_seeds_do_not_collide() {
        let states: Vec<_> = (0..100).map(|s| random_density_state(2, s).unwrap()).collect();
        for a in 0..states.len() {
            for b in a + 1..states.len() {
                assert!(states[a].matrix().frobenius_distance(states[b].matrix()) > 0.0);
            }
        }
    }

    #[test]
    fn validation_reports() {
        let v = validate_density(max_entangled_projector(2).unwrap().matrix()).unwrap();
        assert_eq!(v.hermiticity_residual, 0.0);
        assert_abs_diff_eq!(v.trace_re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.min_eigenvalue, 0.0, epsilon = 1e-12);
        let iso = isotropic_state(3, 1.0).unwrap();
        assert_abs_diff_eq!(iso.validation().min_eigenvalue, 0.0, epsilon = 1e-10);
        assert!(matches!(
            validate_density(&ComplexMatrix::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
        let mut skew = ComplexMatrix::identity(4).scale_re(0.25);
        skew[(0, 1)] = C64::new(0.3, 0.0);
        let v = validate_density(&skew).unwrap();
        assert_abs_diff_eq!(v.hermiticity_residual, 0.3 * 2f64.sqrt(), epsilon = 1e-15);
        assert!(DensityState::new(2, skew).is_err());
    }

    #[test]
    fn physical_constructors_pass_validation() {
        for d in 2..=6 {
            assert!(max_entangled_projector(d).unwrap().validation().is_physical());
            assert!(werner_state(d, WernerVariant::Swap).unwrap().validation().is_physical());
            let (lo, hi) = isotropic_window(d);
            for k in 0..=10 {
                let p = lo + (hi - lo) * k as f64 / 10.0;
                assert!(isotropic_state(d, p).unwrap().validation().is_physical());
            }
        }
    }

    #[test]
    fn spectra_of_states_sum_to_one() {
        for seed in 0..20 {
            let s = random_density_state(3, seed).unwrap();
            assert_abs_diff_eq!(spectrum(&s).iter().sum::<f64>(), 1.0, epsilon = 1e-9);
        }
    }
}
