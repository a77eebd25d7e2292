//! Spin-1/2 specializations for the Pauli triple `S_i = σ_i` (eigenvalues ±1).
//!
//! The product bounds `pro_hr` and `pro_fd` keep their literal constants
//! 1/8 and 1/(3√3). With the ±1 spectrum they are valid but not the sharpest
//! form of those relations.

use num_complex::Complex;

use crate::bounds::{additive_bound, pairs};
use crate::error::{Error, Result};
use crate::qmath::{check_bloch_angles, HermitianMatrix, SquareMatrix};
use crate::quantum::{composite_observable, variance, Observable, PureState};
use crate::scalar::Real;

/// Polar and azimuthal angle of a qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles<T> {
    theta: T,
    phi: T,
}

impl<T: Real> BlochAngles<T> {
    /// θ ∈ [0, π], φ ∈ [0, 2π].
    pub fn new(theta: T, phi: T) -> Result<Self> {
        check_bloch_angles(theta, phi)?;
        Ok(BlochAngles { theta, phi })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    pub fn state(&self) -> PureState<T> {
        PureState::bloch(self.theta, self.phi).expect("angles validated")
    }
}

/// `(⟨S₁⟩, ⟨S₂⟩, ⟨S₃⟩)`, each in [−1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinExpectations<T> {
    pub s1: T,
    pub s2: T,
    pub s3: T,
}

impl<T: Real> SpinExpectations<T> {
    /// Values beyond ±1 by no more than round-off are clamped.
    pub fn new(s1: T, s2: T, s3: T) -> Result<Self> {
        let clamp = |s: T| {
            if s.is_nan() || s.abs() > T::one() + T::tol() {
                Err(Error::ExpectationOutOfRange(s.to_f64().unwrap_or(f64::NAN)))
            } else {
                Ok(s.max(-T::one()).min(T::one()))
            }
        };
        Ok(SpinExpectations { s1: clamp(s1)?, s2: clamp(s2)?, s3: clamp(s3)? })
    }

    /// Expectations read directly off the amplitudes `(a, b)`.
    pub fn of_state(psi: &PureState<T>) -> Result<Self> {
        check_qubit(psi)?;
        let amp = psi.amplitudes();
        let (a, b) = (amp[0], amp[1]);
        let cross = a.conj() * b;
        let two = T::lit(2.0);
        Self::new(two * cross.re, two * cross.im, a.norm_sqr() - b.norm_sqr())
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.s1, self.s2, self.s3]
    }

    fn abs_product(&self) -> T {
        (self.s1 * self.s2 * self.s3).abs()
    }
}

fn check_qubit<T: Real>(psi: &PureState<T>) -> Result<()> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: psi.dim() });
    }
    Ok(())
}

/// Pauli matrix σ₁, σ₂ or σ₃ as an observable.
pub fn pauli<T: Real>(index: usize) -> Result<Observable<T>> {
    Observable::new(pauli_matrix(index)?)
}

fn pauli_matrix<T: Real>(index: usize) -> Result<HermitianMatrix<T>> {
    let (z, o) = (T::zero(), T::one());
    let c = Complex::new;
    let rows = match index {
        1 => vec![vec![c(z, z), c(o, z)], vec![c(o, z), c(z, z)]],
        2 => vec![vec![c(z, z), c(z, -o)], vec![c(z, o), c(z, z)]],
        3 => vec![vec![c(o, z), c(z, z)], vec![c(z, z), c(-o, z)]],
        other => return Err(Error::InvalidPauliIndex(other)),
    };
    HermitianMatrix::new(SquareMatrix::from_rows(rows)?)
}

/// `[σ₁, σ₂, σ₃]`.
pub fn pauli_triple<T: Real>() -> Vec<Observable<T>> {
    (1..=3).map(|i| pauli(i).expect("valid index")).collect()
}

/// True when `obs` is exactly (σ₁, σ₂, σ₃) in order, within tolerance.
pub fn is_pauli_triple<T: Real>(obs: &[&Observable<T>]) -> bool {
    obs.len() == 3
        && obs.iter().enumerate().all(|(i, o)| {
            o.dim() == 2
                && pauli_matrix::<T>(i + 1)
                    .map(|p| (p.matrix() - o.matrix().matrix()).max_abs() <= T::tol())
                    .unwrap_or(false)
        })
}

/// `(sinθ cosφ, sinθ sinφ, cosθ)`.
pub fn bloch_expectations<T: Real>(angles: &BlochAngles<T>) -> SpinExpectations<T> {
    let (st, ct) = angles.theta.sin_cos();
    let (sp, cp) = angles.phi.sin_cos();
    SpinExpectations::new(st * cp, st * sp, ct).expect("trigonometric values lie in [-1, 1]")
}

/// Sorted u-vector of a ±1 observable with expectation `s`:
/// `((1−|s|)√((1+|s|)/2), (1+|s|)√((1−|s|)/2))`.
fn spin_u<T: Real>(s: T) -> [T; 2] {
    let a = s.abs();
    let one = T::one();
    let half = T::lit(0.5);
    [(one - a) * ((one + a) * half).sqrt(), (one + a) * ((one - a) * half).sqrt()]
}

/// `[Σ_{k=1,2} (⅛ Π_i (1+(−1)^k|sᵢ|)²(1−(−1)^k|sᵢ|))^{1/3}]³`.
pub fn closed_form_product_bound<T: Real>(s: &SpinExpectations<T>) -> T {
    let one = T::one();
    let eighth = T::lit(0.125);
    let third = one / T::lit(3.0);
    let total = [-one, one].into_iter().fold(T::zero(), |acc, sign| {
        let prod = s.as_array().iter().fold(eighth, |p, &si| {
            let a = si.abs();
            p * (one + sign * a) * (one + sign * a) * (one - sign * a)
        });
        acc + if prod > T::zero() { prod.powf(third) } else { T::zero() }
    });
    total * total * total
}

/// `⅛|⟨S₁⟩⟨S₂⟩⟨S₃⟩|`.
pub fn pro_hr<T: Real>(s: &SpinExpectations<T>) -> T {
    s.abs_product() * T::lit(0.125)
}

/// `|⟨S₁⟩⟨S₂⟩⟨S₃⟩| / (3√3)`.
pub fn pro_fd<T: Real>(s: &SpinExpectations<T>) -> T {
    s.abs_product() / (T::lit(3.0) * T::lit(3.0).sqrt())
}

/// `(|⟨S₁⟩| + |⟨S₂⟩| + |⟨S₃⟩|) / √3`.
pub fn sum_fd<T: Real>(s: &SpinExpectations<T>) -> T {
    (s.s1.abs() + s.s2.abs() + s.s3.abs()) / T::lit(3.0).sqrt()
}

/// `⅓ var(ΣSᵢ) + ⅑ [Σ_{i<j} sd(Sᵢ − Sⱼ)]²` from the composite variances.
pub fn sum_song_from<T: Real>(sum_variance: T, pair_difference_variances: &[T]) -> T {
    let sd = pair_difference_variances.iter().fold(T::zero(), |acc, &v| acc + v.max(T::zero()).sqrt());
    sum_variance / T::lit(3.0) + sd * sd / T::lit(9.0)
}

/// `Ω_ij` for the pairs (1,2), (1,3), (2,3), evaluated from the expectations
/// alone with the second fidelity factor indexed by `j`.
pub fn omega_set<T: Real>(s: &SpinExpectations<T>) -> [T; 3] {
    let u = s.as_array().map(spin_u);
    let mut out = [T::zero(); 3];
    for (slot, (i, j)) in out.iter_mut().zip(pairs(3)) {
        *slot = (0..2).fold(T::zero(), |acc, k| acc + (u[i][k] + u[j][k]) * (u[i][k] + u[j][k])).sqrt();
    }
    out
}

/// Product bounds of the three-observable spin-1/2 relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinProductBounds<T> {
    pub pro_hr: T,
    pub pro_fd: T,
    pub pro_closed: T,
}

/// Sum bounds of the three-observable spin-1/2 relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSumBounds<T> {
    pub sum_ours: T,
    pub sum_song: T,
    pub sum_fd: T,
}

pub fn spin_product_bounds<T: Real>(psi: &PureState<T>) -> Result<SpinProductBounds<T>> {
    let s = SpinExpectations::of_state(psi)?;
    Ok(SpinProductBounds { pro_hr: pro_hr(&s), pro_fd: pro_fd(&s), pro_closed: closed_form_product_bound(&s) })
}

pub fn spin_sum_bounds<T: Real>(psi: &PureState<T>) -> Result<SpinSumBounds<T>> {
    let s = SpinExpectations::of_state(psi)?;
    let p = pauli_triple::<T>();
    let refs: Vec<&Observable<T>> = p.iter().collect();
    let one = T::one();
    let total = composite_observable(&[(one, &p[0]), (one, &p[1]), (one, &p[2])])?;
    let diffs = pairs(3)
        .map(|(i, j)| variance(&composite_observable(&[(one, &p[i]), (-one, &p[j])])?, psi))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpinSumBounds {
        sum_ours: additive_bound(&refs, psi)?,
        sum_song: sum_song_from(variance(&total, psi)?, &diffs),
        sum_fd: sum_fd(&s),
    })
}
