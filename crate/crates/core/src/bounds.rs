//! Lower bounds on products and sums of variances for `N ≥ 2` observables.
//!
//! Every bound is evaluated from [`BoundInputs`]: per-observable measurement
//! statistics plus the handful of extra expectation values that the
//! commutator- and composite-variance-based bounds need. The analytic path
//! ([`bound_report`]) and the simulated path (`expsim`) both go through
//! [`report_from_inputs`], so the formulas exist once.

use std::fmt;

use crate::error::{Error, Result};
use crate::qmath::{commutator, HermitianMatrix};
use crate::quantum::{
    composite_observable, matrix_variance, variance, MeasurementStats, Observable, PureState, UVector,
};
use crate::scalar::Real;
use crate::spinhalf;

/// Whether a bound constrains the product or the sum of variances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Product,
    Sum,
}

/// Stable identifiers of every bound the engine evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    Robertson,
    MondalProduct,
    CarlsonProduct,
    SpinProHr,
    SpinProFd,
    SpinProClosed,
    MondalSum,
    Additive,
    VarianceDecomposition,
    SpinSumSong,
    SpinSumFd,
}

impl BoundId {
    pub const COUNT: usize = 11;

    /// All identifiers, product bounds first, in CSV column order.
    pub const ALL: [BoundId; BoundId::COUNT] = [
        BoundId::Robertson,
        BoundId::MondalProduct,
        BoundId::CarlsonProduct,
        BoundId::SpinProHr,
        BoundId::SpinProFd,
        BoundId::SpinProClosed,
        BoundId::MondalSum,
        BoundId::Additive,
        BoundId::VarianceDecomposition,
        BoundId::SpinSumSong,
        BoundId::SpinSumFd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::Robertson => "robertson",
            BoundId::MondalProduct => "mondal_product",
            BoundId::CarlsonProduct => "carlson_product",
            BoundId::SpinProHr => "spin_pro_hr",
            BoundId::SpinProFd => "spin_pro_fd",
            BoundId::SpinProClosed => "spin_pro_closed",
            BoundId::MondalSum => "mondal_sum",
            BoundId::Additive => "additive",
            BoundId::VarianceDecomposition => "variance_decomposition",
            BoundId::SpinSumSong => "spin_sum_song",
            BoundId::SpinSumFd => "spin_sum_fd",
        }
    }

    pub fn from_name(name: &str) -> Option<BoundId> {
        BoundId::ALL.into_iter().find(|id| id.as_str() == name)
    }

    pub fn kind(self) -> BoundKind {
        match self {
            BoundId::Robertson
            | BoundId::MondalProduct
            | BoundId::CarlsonProduct
            | BoundId::SpinProHr
            | BoundId::SpinProFd
            | BoundId::SpinProClosed => BoundKind::Product,
            _ => BoundKind::Sum,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Pairwise `Λ_ij = ‖u_i + u_j‖` for `i < j` and the correction term `Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSet<T> {
    n_obs: usize,
    lambda: Vec<T>,
    delta: T,
}

impl<T: Real> LambdaSet<T> {
    pub fn n_obs(&self) -> usize {
        self.n_obs
    }

    /// Λ values in pair order (0,1), (0,2), …, (1,2), ….
    pub fn values(&self) -> &[T] {
        &self.lambda
    }

    /// `Λ_ij` for zero-based `i ≠ j`.
    pub fn get(&self, i: usize, j: usize) -> T {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.lambda[pair_index(self.n_obs, i, j)]
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn sum_of_squares(&self) -> T {
        self.lambda.iter().fold(T::zero(), |acc, &l| acc + l * l)
    }

    pub fn sum(&self) -> T {
        self.lambda.iter().fold(T::zero(), |acc, &l| acc + l)
    }
}

/// Position of pair `(i, j)`, `i < j`, in row-major upper-triangle order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// `(i, j)` pairs with `i < j` in the order used by [`LambdaSet::values`].
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

fn check_same_dim<T: Real>(obs: &[&Observable<T>], psi: &PureState<T>) -> Result<()> {
    for o in obs {
        if o.dim() != psi.dim() {
            return Err(Error::DimensionMismatch { expected: psi.dim(), found: o.dim() });
        }
    }
    Ok(())
}

fn check_count(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewObservables { needed: 2, got: n });
    }
    Ok(())
}

fn analytic_stats<T: Real>(obs: &[&Observable<T>], psi: &PureState<T>) -> Result<Vec<MeasurementStats<T>>> {
    check_same_dim(obs, psi)?;
    obs.iter().map(|o| MeasurementStats::analytic(o, psi)).collect()
}

// --- formulas on measurement statistics ---

/// `[Σ_k (Π_i u_ik²)^{1/N}]^N` over rank-paired u-vectors.
pub fn carlson_from_u<T: Real>(us: &[UVector<T>]) -> T {
    let n = us.len();
    let m = us.first().map_or(0, |u| u.len());
    let inv_n = T::one() / T::from_usize(n).expect("small count");
    let mut total = T::zero();
    for k in 0..m {
        let prod = us.iter().fold(T::one(), |acc, u| acc * u.values()[k] * u.values()[k]);
        // 0^{1/N} = 0 by continuity
        if prod > T::zero() {
            total = total + prod.powf(inv_n);
        }
    }
    total.powi(n as i32)
}

/// `(Σ_k v_k w_k)²` over rank-paired signed projection vectors.
pub fn mondal_product_from<T: Real>(a: &MeasurementStats<T>, b: &MeasurementStats<T>) -> T {
    let (v, w) = (a.signed_projection_vector(), b.signed_projection_vector());
    let dot = v.values().iter().zip(w.values()).fold(T::zero(), |acc, (&x, &y)| acc + x * y);
    dot * dot
}

/// `½ Σ_k (v_k + w_k)²` over rank-paired signed projection vectors.
pub fn mondal_sum_from<T: Real>(a: &MeasurementStats<T>, b: &MeasurementStats<T>) -> T {
    let (v, w) = (a.signed_projection_vector(), b.signed_projection_vector());
    let s = v.values().iter().zip(w.values()).fold(T::zero(), |acc, (&x, &y)| acc + (x + y) * (x + y));
    s * T::lit(0.5)
}

pub fn lambda_set_from_u<T: Real>(us: &[UVector<T>]) -> LambdaSet<T> {
    let n = us.len();
    let lambda: Vec<T> = pairs(n)
        .map(|(i, j)| {
            us[i].values().iter().zip(us[j].values()).fold(T::zero(), |acc, (&a, &b)| acc + (a + b) * (a + b)).sqrt()
        })
        .collect();
    let delta = if n == 2 {
        lambda[0] * lambda[0]
    } else {
        let s = lambda.iter().fold(T::zero(), |acc, &l| acc + l);
        let nm1 = T::from_usize(n - 1).expect("small count");
        s * s / (nm1 * nm1)
    };
    LambdaSet { n_obs: n, lambda, delta }
}

/// `(ΣΛ² − Δ)/(N − 2)` for `N ≥ 3`, `½Λ₁₂²` for `N = 2`.
pub fn additive_from_lambda<T: Real>(set: &LambdaSet<T>) -> T {
    if set.n_obs == 2 {
        T::lit(0.5) * set.lambda[0] * set.lambda[0]
    } else {
        (set.sum_of_squares() - set.delta) / T::from_usize(set.n_obs - 2).expect("small count")
    }
}

/// The weaker bound `ΣΛ² / (2(N − 1))` that the additive bound dominates.
pub fn simple_generalization<T: Real>(set: &LambdaSet<T>) -> T {
    set.sum_of_squares() / (T::lit(2.0) * T::from_usize(set.n_obs - 1).expect("small count"))
}

/// `(1/N)·var(ΣA_i) + 2/(N²(N−1))·[Σ_{i<j} sd(A_i − A_j)]²`.
pub fn variance_decomposition_from<T: Real>(n: usize, sum_variance: T, pair_difference_variances: &[T]) -> T {
    let nf = T::from_usize(n).expect("small count");
    let sd_sum = pair_difference_variances.iter().fold(T::zero(), |acc, &v| acc + v.max(T::zero()).sqrt());
    sum_variance / nf + T::lit(2.0) / (nf * nf * (nf - T::one())) * sd_sum * sd_sum
}

// --- observable-level operations ---

/// `¼|⟨ψ|[A,B]|ψ⟩|²`.
pub fn robertson_product<T: Real>(a: &Observable<T>, b: &Observable<T>, psi: &PureState<T>) -> Result<T> {
    check_same_dim(&[a, b], psi)?;
    let c = commutator(a.matrix(), b.matrix())?;
    let amp = psi.amplitudes();
    Ok(amp.inner(&c.apply(amp)).norm_sqr() * T::lit(0.25))
}

pub fn mondal_product<T: Real>(a: &Observable<T>, b: &Observable<T>, psi: &PureState<T>) -> Result<T> {
    let s = analytic_stats(&[a, b], psi)?;
    Ok(mondal_product_from(&s[0], &s[1]))
}

pub fn mondal_sum<T: Real>(a: &Observable<T>, b: &Observable<T>, psi: &PureState<T>) -> Result<T> {
    let s = analytic_stats(&[a, b], psi)?;
    Ok(mondal_sum_from(&s[0], &s[1]))
}

pub fn carlson_product<T: Real>(obs: &[&Observable<T>], psi: &PureState<T>) -> Result<T> {
    check_count(obs.len())?;
    let us: Vec<_> = analytic_stats(obs, psi)?.iter().map(|s| s.u_vector()).collect();
    Ok(carlson_from_u(&us))
}

pub fn lambda_set<T: Real>(obs: &[&Observable<T>], psi: &PureState<T>) -> Result<LambdaSet<T>> {
    check_count(obs.len())?;
    let us: Vec<_> = analytic_stats(obs, psi)?.iter().map(|s| s.u_vector()).collect();
    Ok(lambda_set_from_u(&us))
}

pub fn additive_bound<T: Real>(obs: &[&Observable<T>], psi: &PureState<T>) -> Result<T> {
    Ok(additive_from_lambda(&lambda_set(obs, psi)?))
}

pub fn variance_decomposition_sum_bound<T: Real>(obs: &[&Observable<T>], psi: &PureState<T>) -> Result<T> {
    check_count(obs.len())?;
    check_same_dim(obs, psi)?;
    let one = T::one();
    let total: Vec<(T, &Observable<T>)> = obs.iter().map(|o| (one, *o)).collect();
    let sum_var = variance(&composite_observable(&total)?, psi)?;
    let diffs = pairs(obs.len())
        .map(|(i, j)| variance(&composite_observable(&[(one, obs[i]), (-one, obs[j])])?, psi))
        .collect::<Result<Vec<_>>>()?;
    Ok(variance_decomposition_from(obs.len(), sum_var, &diffs))
}

// --- reports ---

/// Everything the bound formulas consume for one (observables, state) instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs<T> {
    pub stats: Vec<MeasurementStats<T>>,
    /// Per-observable variances entering the left-hand sides.
    pub variances: Vec<T>,
    /// `|⟨[A, B]⟩|`, present for two observables.
    pub commutator_abs: Option<T>,
    /// Variance of `Σ A_i`.
    pub sum_variance: T,
    /// Variances of `A_i − A_j` in [`pairs`] order.
    pub pair_difference_variances: Vec<T>,
    /// Input is (σ₁, σ₂, σ₃) in that order.
    pub pauli_triple: bool,
    pub degenerate: bool,
}

impl<T: Real> BoundInputs<T> {
    pub fn analytic(obs: &[&Observable<T>], psi: &PureState<T>) -> Result<Self> {
        check_count(obs.len())?;
        let stats = analytic_stats(obs, psi)?;
        let variances = obs.iter().map(|o| variance(o, psi)).collect::<Result<Vec<_>>>()?;
        let commutator_abs = if obs.len() == 2 {
            let c = commutator(obs[0].matrix(), obs[1].matrix())?;
            let amp = psi.amplitudes();
            Some(amp.inner(&c.apply(amp)).norm())
        } else {
            None
        };
        let one = T::one();
        let total: Vec<(T, &HermitianMatrix<T>)> = obs.iter().map(|o| (one, o.matrix())).collect();
        let sum_variance = matrix_variance(&HermitianMatrix::linear_combination(&total)?, psi)?;
        let pair_difference_variances = pairs(obs.len())
            .map(|(i, j)| {
                let d = HermitianMatrix::linear_combination(&[(one, obs[i].matrix()), (-one, obs[j].matrix())])?;
                matrix_variance(&d, psi)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundInputs {
            stats,
            variances,
            commutator_abs,
            sum_variance,
            pair_difference_variances,
            pauli_triple: spinhalf::is_pauli_triple(obs),
            degenerate: obs.iter().any(|o| o.spectrum().is_degenerate()),
        })
    }

    pub fn n_obs(&self) -> usize {
        self.stats.len()
    }
}

/// Left-hand sides and every applicable bound for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub n_obs: usize,
    pub lhs_product: T,
    pub lhs_sum: T,
    pub lambda: LambdaSet<T>,
    /// Some observable has a degenerate spectrum, so the eigenbasis-dependent
    /// bounds depend on the solver's basis choice inside that eigenspace.
    pub degenerate_spectrum: bool,
    values: [Option<T>; BoundId::COUNT],
}

impl<T: Real> BoundReport<T> {
    /// Value of `id`, `None` when the bound does not apply to this input.
    pub fn get(&self, id: BoundId) -> Option<T> {
        self.values[id.index()]
    }

    pub fn is_applicable(&self, id: BoundId) -> bool {
        self.values[id.index()].is_some()
    }

    /// Applicable bounds in [`BoundId::ALL`] order.
    pub fn applicable(&self) -> impl Iterator<Item = (BoundId, T)> + '_ {
        BoundId::ALL.into_iter().filter_map(|id| self.get(id).map(|v| (id, v)))
    }

    /// Left-hand side the bound `id` constrains.
    pub fn lhs_for(&self, id: BoundId) -> T {
        match id.kind() {
            BoundKind::Product => self.lhs_product,
            BoundKind::Sum => self.lhs_sum,
        }
    }

    /// Bounds exceeding their left-hand side by more than
    /// `rel_slack·max(1, lhs)`, with the excess.
    pub fn violations(&self, rel_slack: T) -> Vec<(BoundId, T)> {
        self.applicable()
            .filter_map(|(id, v)| {
                let lhs = self.lhs_for(id);
                let excess = v - lhs;
                (excess > rel_slack * T::one().max(lhs)).then_some((id, excess))
            })
            .collect()
    }
}

pub fn report_from_inputs<T: Real>(inputs: &BoundInputs<T>) -> Result<BoundReport<T>> {
    let n = inputs.n_obs();
    check_count(n)?;
    let mut values = [None; BoundId::COUNT];
    let mut set = |id: BoundId, v: T| values[id.index()] = Some(v);

    let us: Vec<UVector<T>> = inputs.stats.iter().map(|s| s.u_vector()).collect();
    let lambda = lambda_set_from_u(&us);

    if n == 2 {
        if let Some(c) = inputs.commutator_abs {
            set(BoundId::Robertson, T::lit(0.25) * c * c);
        }
        set(BoundId::MondalProduct, mondal_product_from(&inputs.stats[0], &inputs.stats[1]));
        set(BoundId::MondalSum, mondal_sum_from(&inputs.stats[0], &inputs.stats[1]));
    }
    set(BoundId::CarlsonProduct, carlson_from_u(&us));
    set(BoundId::Additive, additive_from_lambda(&lambda));
    set(
        BoundId::VarianceDecomposition,
        variance_decomposition_from(n, inputs.sum_variance, &inputs.pair_difference_variances),
    );

    if inputs.pauli_triple {
        let s = spinhalf::SpinExpectations::new(inputs.stats[0].mean, inputs.stats[1].mean, inputs.stats[2].mean)?;
        set(BoundId::SpinProHr, spinhalf::pro_hr(&s));
        set(BoundId::SpinProFd, spinhalf::pro_fd(&s));
        set(BoundId::SpinProClosed, spinhalf::closed_form_product_bound(&s));
        set(BoundId::SpinSumSong, spinhalf::sum_song_from(inputs.sum_variance, &inputs.pair_difference_variances));
        set(BoundId::SpinSumFd, spinhalf::sum_fd(&s));
    }

    Ok(BoundReport {
        n_obs: n,
        lhs_product: inputs.variances.iter().fold(T::one(), |acc, &v| acc * v),
        lhs_sum: inputs.variances.iter().fold(T::zero(), |acc, &v| acc + v),
        lambda,
        degenerate_spectrum: inputs.degenerate,
        values,
    })
}

/// Analytic report for `obs` on `psi`.
pub fn bound_report<T: Real>(obs: &[&Observable<T>], psi: &PureState<T>) -> Result<BoundReport<T>> {
    report_from_inputs(&BoundInputs::analytic(obs, psi)?)
}
