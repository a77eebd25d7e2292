//! Pure states, observables and the projection vectors every bound is built from.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qmath::{hermitian_eigendecompose, ComplexVector, HermitianMatrix, SpectralData};
use crate::scalar::Real;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T>(ComplexVector<T>);

impl<T: Real> PureState<T> {
    /// Wraps an already normalized vector; the norm must be 1 within tolerance.
    pub fn new(amplitudes: ComplexVector<T>) -> Result<Self> {
        let n = amplitudes.norm();
        if (n - T::one()).abs().is_nan() || (n - T::one()).abs() > T::tol() {
            return Err(Error::NotNormalized(n.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(PureState(amplitudes))
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn from_unnormalized(v: ComplexVector<T>) -> Result<Self> {
        Ok(PureState(v.normalized()?))
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        PureState(ComplexVector::basis(dim, k))
    }

    pub fn bloch(theta: T, phi: T) -> Result<Self> {
        Ok(PureState(crate::qmath::bloch_state(theta, phi)?))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn amplitudes(&self) -> &ComplexVector<T> {
        &self.0
    }
}

/// Hermitian observable together with its eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable<T> {
    matrix: HermitianMatrix<T>,
    spectrum: SpectralData<T>,
}

impl<T: Real> Observable<T> {
    pub fn new(matrix: HermitianMatrix<T>) -> Result<Self> {
        let spectrum = hermitian_eigendecompose(&matrix)?;
        Ok(Observable { matrix, spectrum })
    }

    pub fn matrix(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralData<T> {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn shifted(&self, c: T) -> Result<Self> {
        Observable::new(self.matrix.shifted(c))
    }

    fn check_state(&self, psi: &PureState<T>) -> Result<()> {
        if self.dim() != psi.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        Ok(())
    }
}

/// Outcome distribution of a projective measurement: eigenvalues, the
/// probability of each, and the mean used to center them.
///
/// Analytic statistics take the mean from `⟨ψ|A|ψ⟩`; empirical ones from the
/// observed frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementStats<T> {
    pub eigenvalues: Vec<T>,
    pub probabilities: Vec<T>,
    pub mean: T,
}

impl<T: Real> MeasurementStats<T> {
    /// Statistics with the mean taken from the probabilities themselves.
    pub fn from_distribution(eigenvalues: Vec<T>, probabilities: Vec<T>) -> Result<Self> {
        if eigenvalues.len() != probabilities.len() {
            return Err(Error::DimensionMismatch { expected: eigenvalues.len(), found: probabilities.len() });
        }
        let mean = eigenvalues.iter().zip(&probabilities).fold(T::zero(), |acc, (&a, &p)| acc + a * p);
        Ok(MeasurementStats { eigenvalues, probabilities, mean })
    }

    pub fn analytic(obs: &Observable<T>, psi: &PureState<T>) -> Result<Self> {
        Ok(MeasurementStats {
            eigenvalues: obs.spectrum().eigenvalues().to_vec(),
            probabilities: transition_probabilities(obs, psi)?,
            mean: expectation(obs, psi)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ p_k (a_k − mean)²`.
    pub fn variance(&self) -> T {
        self.eigenvalues
            .iter()
            .zip(&self.probabilities)
            .fold(T::zero(), |acc, (&a, &p)| acc + p * (a - self.mean) * (a - self.mean))
    }

    fn signed_terms(&self) -> impl Iterator<Item = T> + '_ {
        self.eigenvalues.iter().zip(&self.probabilities).map(move |(&a, &p)| (a - self.mean) * p.max(T::zero()).sqrt())
    }

    pub fn u_vector(&self) -> UVector<T> {
        let mut values: Vec<T> = self.signed_terms().map(|x| x.abs()).collect();
        sort_stable(&mut values);
        UVector(values)
    }

    pub fn signed_projection_vector(&self) -> SignedProjectionVector<T> {
        let mut values: Vec<T> = self.signed_terms().collect();
        sort_stable(&mut values);
        SignedProjectionVector(values)
    }
}

fn sort_stable<T: Real>(values: &mut [T]) {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
}

/// Ascending `|a_k − ⟨A⟩|·√F_k`; its squared norm is the variance.
#[derive(Debug, Clone, PartialEq)]
pub struct UVector<T>(Vec<T>);

impl<T: Real> UVector<T> {
    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, &x| acc + x * x)
    }
}

/// Ascending signed `(a_k − ⟨A⟩)·√F_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedProjectionVector<T>(Vec<T>);

impl<T: Real> SignedProjectionVector<T> {
    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, &x| acc + x * x)
    }
}

fn expectation_complex<T: Real>(m: &HermitianMatrix<T>, psi: &PureState<T>) -> Complex<T> {
    psi.amplitudes().inner(&m.matrix().apply(psi.amplitudes()))
}

/// `⟨ψ|A|ψ⟩`.
pub fn expectation<T: Real>(a: &Observable<T>, psi: &PureState<T>) -> Result<T> {
    a.check_state(psi)?;
    Ok(expectation_complex(a.matrix(), psi).re)
}

/// `⟨A²⟩ − ⟨A⟩²`, evaluated with matrix products.
pub fn variance<T: Real>(a: &Observable<T>, psi: &PureState<T>) -> Result<T> {
    a.check_state(psi)?;
    matrix_variance(a.matrix(), psi)
}

/// Variance of any Hermitian matrix, without an eigendecomposition.
pub fn matrix_variance<T: Real>(m: &HermitianMatrix<T>, psi: &PureState<T>) -> Result<T> {
    if m.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: psi.dim() });
    }
    let a_psi = m.matrix().apply(psi.amplitudes());
    let mean = psi.amplitudes().inner(&a_psi).re;
    let raw = a_psi.norm_sqr() - mean * mean;
    clamp_variance(raw)
}

pub(crate) fn clamp_variance<T: Real>(raw: T) -> Result<T> {
    if raw >= T::zero() {
        Ok(raw)
    } else if raw > -T::tol() {
        Ok(T::zero())
    } else {
        Err(Error::NegativeVariance(raw.to_f64().unwrap_or(f64::NAN)))
    }
}

/// `|⟨ψ|a_k⟩|²` in spectrum order.
pub fn transition_probabilities<T: Real>(a: &Observable<T>, psi: &PureState<T>) -> Result<Vec<T>> {
    a.check_state(psi)?;
    Ok(a.spectrum().eigenvectors().iter().map(|v| psi.amplitudes().inner(v).norm_sqr()).collect())
}

pub fn u_vector<T: Real>(a: &Observable<T>, psi: &PureState<T>) -> Result<UVector<T>> {
    Ok(MeasurementStats::analytic(a, psi)?.u_vector())
}

pub fn signed_projection_vector<T: Real>(a: &Observable<T>, psi: &PureState<T>) -> Result<SignedProjectionVector<T>> {
    Ok(MeasurementStats::analytic(a, psi)?.signed_projection_vector())
}

/// Observable for `Σ cᵢ Aᵢ`, freshly diagonalized.
pub fn composite_observable<T: Real>(terms: &[(T, &Observable<T>)]) -> Result<Observable<T>> {
    let mats: Vec<(T, &HermitianMatrix<T>)> = terms.iter().map(|(c, o)| (*c, o.matrix())).collect();
    Observable::new(HermitianMatrix::linear_combination(&mats)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinhalf::pauli;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn up() -> PureState<f64> {
        PureState::basis(2, 0)
    }

    #[test]
    fn expectation_examples() {
        let (x, y, z) = (pauli::<f64>(1).unwrap(), pauli::<f64>(2).unwrap(), pauli::<f64>(3).unwrap());
        assert!(close(expectation(&z, &up()).unwrap(), 1.0, 1e-15));
        let s = PureState::bloch(FRAC_PI_4, 0.0).unwrap();
        assert!(close(expectation(&x, &s).unwrap(), FRAC_1_SQRT_2, 1e-6));
        let real = PureState::from_unnormalized(ComplexVector::from_real(&[0.3, -0.8])).unwrap();
        assert!(close(expectation(&y, &real).unwrap(), 0.0, 1e-16));
        assert!(expectation(&x, &PureState::basis(3, 0)).is_err());
    }

    #[test]
    fn variance_examples() {
        let (x, y, z) = (pauli::<f64>(1).unwrap(), pauli::<f64>(2).unwrap(), pauli::<f64>(3).unwrap());
        assert_eq!(variance(&z, &up()).unwrap(), 0.0);
        let s = PureState::bloch(FRAC_PI_4, 0.0).unwrap();
        assert!(close(variance(&x, &s).unwrap(), 0.5, 1e-12));
        assert!(close(variance(&y, &s).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn variance_clamp() {
        assert_eq!(clamp_variance(-1e-13_f64).unwrap(), 0.0);
        assert_eq!(clamp_variance(0.25_f64).unwrap(), 0.25);
        assert!(matches!(clamp_variance(-1e-6_f64), Err(Error::NegativeVariance(_))));
    }

    #[test]
    fn transition_probability_examples() {
        let (x, z) = (pauli::<f64>(1).unwrap(), pauli::<f64>(3).unwrap());
        assert_eq!(transition_probabilities(&z, &up()).unwrap(), vec![0.0, 1.0]);
        let p = transition_probabilities(&x, &up()).unwrap();
        assert!(close(p[0], 0.5, 1e-15) && close(p[1], 0.5, 1e-15));
        let s = PureState::bloch(FRAC_PI_4, 0.0).unwrap();
        let p = transition_probabilities(&z, &s).unwrap();
        assert!(close(p[0], 0.146447, 1e-6) && close(p[1], 0.853553, 1e-6));
    }

    #[test]
    fn u_vector_examples() {
        let (y, z) = (pauli::<f64>(2).unwrap(), pauli::<f64>(3).unwrap());
        let s = PureState::bloch(FRAC_PI_4, 0.0).unwrap();
        let u = u_vector(&z, &s).unwrap();
        assert!(close(u.values()[0], 0.270598, 1e-6) && close(u.values()[1], 0.653281, 1e-6));
        assert!(close(u.norm_sqr(), 0.5, 1e-12));
        assert_eq!(u_vector(&z, &up()).unwrap().values(), &[0.0, 0.0]);
        let u = u_vector(&y, &s).unwrap();
        assert!(u.values().iter().all(|&v| close(v, FRAC_1_SQRT_2, 1e-6)));
    }

    #[test]
    fn signed_projection_examples() {
        let (x, z) = (pauli::<f64>(1).unwrap(), pauli::<f64>(3).unwrap());
        let s = PureState::bloch(2.0 * PI / 3.0, 0.0).unwrap();
        let v = signed_projection_vector(&x, &s).unwrap();
        assert!(close(v.values()[0], -0.482963, 1e-6) && close(v.values()[1], 0.129410, 1e-6));
        let w = signed_projection_vector(&z, &s).unwrap();
        assert!(close(w.values()[0], -0.433013, 1e-6) && close(w.values()[1], 0.75, 1e-6));
        assert_eq!(signed_projection_vector(&z, &up()).unwrap().values(), &[0.0, 0.0]);
    }

    #[test]
    fn composite_examples() {
        let p: Vec<_> = (1..=3).map(|i| pauli::<f64>(i).unwrap()).collect();
        let sum = composite_observable(&[(1.0, &p[0]), (1.0, &p[1]), (1.0, &p[2])]).unwrap();
        let ev = sum.spectrum().eigenvalues();
        assert!(close(ev[0], -3f64.sqrt(), 1e-12) && close(ev[1], 3f64.sqrt(), 1e-12));
        let diff = composite_observable(&[(1.0, &p[0]), (-1.0, &p[1])]).unwrap();
        let ev = diff.spectrum().eigenvalues();
        assert!(close(ev[0], -2f64.sqrt(), 1e-12) && close(ev[1], 2f64.sqrt(), 1e-12));
        let zero = composite_observable(&[(0.0, &p[0])]).unwrap();
        assert_eq!(zero.matrix().matrix().max_abs(), 0.0);
        assert_eq!(zero.spectrum().eigenvalues(), &[0.0, 0.0]);
        assert!(matches!(composite_observable::<f64>(&[]), Err(Error::EmptyTerms)));
        let big = Observable::new(HermitianMatrix::diagonal(&[1.0, 2.0, 3.0]).unwrap()).unwrap();
        assert!(composite_observable(&[(1.0, &p[0]), (1.0, &big)]).is_err());
    }

    #[test]
    fn unnormalized_state_rejected() {
        let v = ComplexVector::from_real(&[1.0, 1.0]);
        assert!(matches!(PureState::new(v), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn generic_over_f32() {
        let z = pauli::<f32>(3).unwrap();
        let s = PureState::<f32>::bloch(std::f32::consts::FRAC_PI_4, 0.0).unwrap();
        assert!((variance(&z, &s).unwrap() - 0.5).abs() < 1e-6);
    }
}
