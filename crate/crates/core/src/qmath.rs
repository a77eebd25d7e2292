//! Small dense complex linear algebra: Hermitian matrices, a cyclic Jacobi
//! eigensolver, qubit state construction and seeded random instances.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest dimension accepted by the random generators.
pub const MAX_RANDOM_DIM: usize = 16;

/// Sweep cap of the Jacobi eigensolver.
pub const MAX_SWEEPS: usize = 100;

/// 64-bit master seed. Sub-tasks derive independent streams via [`Seed::derive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub u64);

impl Seed {
    /// Seed for sub-task `index`, mixed with splitmix64 so neighbouring
    /// indices give unrelated streams.
    pub fn derive(self, index: u64) -> Seed {
        Seed(splitmix64(self.0 ^ splitmix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15))))
    }

    /// ChaCha8 generator (counter based) keyed by this seed.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Column vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T>(Vec<Complex<T>>);

impl<T: Real> ComplexVector<T> {
    pub fn new(entries: Vec<Complex<T>>) -> Self {
        ComplexVector(entries)
    }

    pub fn from_real(entries: &[T]) -> Self {
        ComplexVector(entries.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    /// Standard basis vector `e_k` of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![Complex::new(T::zero(), T::zero()); dim];
        v[k] = Complex::new(T::one(), T::zero());
        ComplexVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Complex<T>> {
        self.0
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.0.iter().zip(&other.0).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm_sqr(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == T::zero() || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(ComplexVector(self.0.iter().map(|z| z.unscale(n)).collect()))
    }
}

impl<T> Index<usize> for ComplexVector<T> {
    type Output = Complex<T>;
    fn index(&self, i: usize) -> &Complex<T> {
        &self.0[i]
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> SquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix { dim, data: vec![Complex::new(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds from row-major entries; errors unless there are `dim²` of them.
    pub fn from_row_major(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::MalformedMatrix { dim, found: data.len() });
        }
        Ok(SquareMatrix { dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::MalformedMatrix { dim, found: row.len() });
            }
            data.extend(row);
        }
        Ok(SquareMatrix { dim, data })
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(v, T::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        SquareMatrix { dim: self.dim, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn apply(&self, v: &ComplexVector<T>) -> ComplexVector<T> {
        let n = self.dim;
        let out = (0..n)
            .map(|i| (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, j| acc + self[(i, j)] * v[j]))
            .collect();
        ComplexVector(out)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(SquareMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(SquareMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() })
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    /// Panics on dimension mismatch; use [`SquareMatrix::try_mul`] otherwise.
    fn mul(self, rhs: Self) -> SquareMatrix<T> {
        self.try_mul(rhs).expect("matrix dimensions agree")
    }
}

impl<T: Real> Add for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn add(self, rhs: Self) -> SquareMatrix<T> {
        self.try_add(rhs).expect("matrix dimensions agree")
    }
}

impl<T: Real> Sub for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn sub(self, rhs: Self) -> SquareMatrix<T> {
        self.try_sub(rhs).expect("matrix dimensions agree")
    }
}

impl<T: Real> Neg for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn neg(self) -> SquareMatrix<T> {
        SquareMatrix { dim: self.dim, data: self.data.iter().map(|z| -z).collect() }
    }
}

/// Hermitian matrix. Construction checks `M ≈ M†` and stores `(M + M†)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T>(SquareMatrix<T>);

impl<T: Real> HermitianMatrix<T> {
    pub fn new(m: SquareMatrix<T>) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::DimensionOutOfRange(0));
        }
        let adj = m.adjoint();
        let asym = (&m - &adj).max_abs();
        if asym.is_nan() || asym > T::tol() {
            return Err(Error::NotHermitian(asym.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self::symmetrize(&m))
    }

    /// `(M + M†)/2` without any Hermiticity check.
    pub fn symmetrize(m: &SquareMatrix<T>) -> Self {
        let half = Complex::new(T::lit(0.5), T::zero());
        HermitianMatrix((m + &m.adjoint()).scale(half))
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    pub fn diagonal(values: &[T]) -> Result<Self> {
        Self::new(SquareMatrix::diagonal(values))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.0
    }

    /// `Σ cᵢ Mᵢ`; all matrices must share one dimension.
    pub fn linear_combination(terms: &[(T, &HermitianMatrix<T>)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or(Error::EmptyTerms)?;
        let dim = first.dim();
        let mut acc = SquareMatrix::zeros(dim);
        for (c, m) in terms {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
            acc = &acc + &m.0.scale(Complex::new(*c, T::zero()));
        }
        Ok(HermitianMatrix(acc))
    }

    /// Adds `c·I`.
    pub fn shifted(&self, c: T) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.dim() {
            m[(i, i)] = m[(i, i)] + Complex::new(c, T::zero());
        }
        HermitianMatrix(m)
    }
}

/// Eigenvalues in ascending order with their orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData<T> {
    eigenvalues: Vec<T>,
    eigenvectors: Vec<ComplexVector<T>>,
}

impl<T: Real> SpectralData<T> {
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[ComplexVector<T>] {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ_k λ_k |v_k⟩⟨v_k|`.
    pub fn reconstruct(&self) -> SquareMatrix<T> {
        let n = self.dim();
        let mut m = SquareMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = m[(i, j)] + v[i] * v[j].conj() * *lambda;
                }
            }
        }
        m
    }

    /// `V†V` for the eigenvector matrix `V`.
    pub fn gram(&self) -> SquareMatrix<T> {
        let n = self.dim();
        let mut g = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.eigenvectors[i].inner(&self.eigenvectors[j]);
            }
        }
        g
    }

    /// True when two adjacent eigenvalues coincide to within the degeneracy
    /// tolerance (relative to the spectral scale).
    pub fn is_degenerate(&self) -> bool {
        let scale = self.eigenvalues.iter().fold(T::one(), |acc, x| acc.max(x.abs()));
        self.eigenvalues.windows(2).any(|w| (w[1] - w[0]).abs() <= T::degeneracy_tol() * scale)
    }
}

/// Cyclic complex Jacobi eigendecomposition.
///
/// Sweeps the upper triangle in row order, annihilating each `(p, q)` entry
/// with a phase-corrected plane rotation, until the off-diagonal Frobenius
/// norm drops to `jacobi_tol·‖M‖_F`. Eigenvalues are then stably sorted.
pub fn hermitian_eigendecompose<T: Real>(m: &HermitianMatrix<T>) -> Result<SpectralData<T>> {
    let n = m.dim();
    let mut a = m.matrix().clone();
    let mut v = SquareMatrix::<T>::identity(n);
    let threshold = T::jacobi_tol() * a.frobenius_norm();

    let off_norm = |a: &SquareMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_norm(&a) <= threshold;
    }

    let mut pairs: Vec<(T, ComplexVector<T>)> =
        (0..n).map(|k| (a[(k, k)].re, ComplexVector((0..n).map(|i| v[(i, k)]).collect()))).collect();
    // stable: equal eigenvalues keep solver order
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(SpectralData { eigenvalues, eigenvectors })
}

fn rotate<T: Real>(a: &mut SquareMatrix<T>, v: &mut SquareMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == T::zero() {
        return;
    }
    let zero = T::zero();
    // phase e^{-iα} turns the pair into a real symmetric block
    let phase = Complex::new(apq.re / mag, -apq.im / mag);
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (mag + mag);
    let sign = if tau < zero { -T::one() } else { T::one() };
    let t = sign / (tau.abs() + T::one().hypot(tau));
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    let u_pp = Complex::new(c, zero);
    let u_pq = Complex::new(s, zero);
    let u_qp = phase * (-s);
    let u_qq = phase * c;

    let n = a.dim();
    // A ← A U, V ← V U
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
    // A ← U† A
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::new(zero, zero);
    a[(q, p)] = Complex::new(zero, zero);
    a[(p, p)] = Complex::new(a[(p, p)].re, zero);
    a[(q, q)] = Complex::new(a[(q, q)].re, zero);
}

/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` for θ ∈ [0, π], φ ∈ [0, 2π].
pub fn bloch_state<T: Real>(theta: T, phi: T) -> Result<ComplexVector<T>> {
    check_bloch_angles(theta, phi)?;
    let half = theta / T::lit(2.0);
    let (s, c) = half.sin_cos();
    Ok(ComplexVector(vec![Complex::new(c, T::zero()), Complex::from_polar(s, phi)]))
}

pub(crate) fn check_bloch_angles<T: Real>(theta: T, phi: T) -> Result<()> {
    if !(theta >= T::zero() && theta <= T::PI()) {
        return Err(Error::AngleOutOfRange { name: "theta", value: theta.to_f64().unwrap_or(f64::NAN) });
    }
    if !(phi >= T::zero() && phi <= T::TAU()) {
        return Err(Error::AngleOutOfRange { name: "phi", value: phi.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(())
}

/// `AB − BA`.
pub fn commutator<T: Real>(a: &HermitianMatrix<T>, b: &HermitianMatrix<T>) -> Result<SquareMatrix<T>> {
    let ab = a.matrix().try_mul(b.matrix())?;
    let ba = b.matrix().mul(a.matrix());
    ab.try_sub(&ba)
}

fn check_random_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_RANDOM_DIM {
        return Err(Error::DimensionOutOfRange(dim));
    }
    Ok(())
}

fn complex_gaussians<T: Real>(rng: &mut ChaCha8Rng, count: usize) -> Vec<Complex<T>> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    (0..count)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(T::lit(re * scale), T::lit(im * scale))
        })
        .collect()
}

/// `(G + G†)/2` with `G` a matrix of standard complex Gaussians.
pub fn random_hermitian<T: Real>(seed: Seed, dim: usize) -> Result<HermitianMatrix<T>> {
    check_random_dim(dim)?;
    let mut rng = seed.rng();
    let g = SquareMatrix::from_row_major(dim, complex_gaussians(&mut rng, dim * dim))?;
    Ok(HermitianMatrix::symmetrize(&g))
}

/// Haar-random unit vector. A zero draw retries with the next sub-seed.
pub fn random_pure_state<T: Real>(seed: Seed, dim: usize) -> Result<ComplexVector<T>> {
    check_random_dim(dim)?;
    let mut attempt = 0u64;
    loop {
        let s = if attempt == 0 { seed } else { seed.derive(attempt) };
        let v = ComplexVector(complex_gaussians::<T>(&mut s.rng(), dim));
        match v.normalized() {
            Ok(u) => return Ok(u),
            Err(_) => attempt += 1,
        }
    }
}
