//! Time evolution by spectral expansion and vertex probability currents.
//!
//! A state is `ψ_j(x, t) = Σ_n C_n e^{−i k_n² t} φ_j(x, k_n)` over a
//! [`SpectralBasis`]. The current on bond `j` is
//! `J_j = (i/2) [ψ_j ∂_x ψ_j* − ∂_x ψ_j ψ_j*]`, and the Kirchhoff rule asks
//! for `Σ_j J_j(0, t) = 0`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::boundary::{l2_inner, BondFunction};
use crate::error::{Error, Result};
use crate::graph::MetricStarGraph;
use crate::linalg;
use crate::spectral::SpectralBasis;

/// Gram systems with a larger condition number are refused.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

/// Expansion coefficients over a basis, evaluated at time `t`.
#[derive(Debug, Clone)]
pub struct WaveState {
    basis: Arc<SpectralBasis>,
    coeffs: Vec<C64>,
    t: f64,
    /// `C_n e^{−i k_n² t}`
    weights: Vec<C64>,
}

impl WaveState {
    pub fn new(basis: Arc<SpectralBasis>, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::CoefficientMismatch {
                expected: basis.len(),
                found: coeffs.len(),
            });
        }
        Ok(Self::at_time(basis, coeffs, 0.0))
    }

    /// `C_n = 1/√K` on the first `K` modes of `basis`.
    pub fn equal_weights(basis: &SpectralBasis, count: usize) -> Result<Self> {
        if count == 0 || count > basis.len() {
            return Err(Error::InsufficientBasis {
                requested: count,
                available: basis.len(),
            });
        }
        let c = C64::new(1.0 / (count as f64).sqrt(), 0.0);
        Self::new(Arc::new(basis.truncated(count)), vec![c; count])
    }

    fn at_time(basis: Arc<SpectralBasis>, coeffs: Vec<C64>, t: f64) -> Self {
        let weights = coeffs
            .iter()
            .zip(basis.modes())
            .map(|(c, m)| c * C64::from_polar(1.0, -m.energy() * t))
            .collect();
        Self {
            basis,
            coeffs,
            t,
            weights,
        }
    }

    pub fn basis(&self) -> &SpectralBasis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// Same coefficients, phases advanced to time `t`.
    pub fn evolve(&self, t: f64) -> WaveState {
        Self::at_time(Arc::clone(&self.basis), self.coeffs.clone(), t)
    }

    /// Multiplies every coefficient by `alpha`.
    pub fn scaled(&self, alpha: C64) -> WaveState {
        let coeffs = self.coeffs.iter().map(|c| c * alpha).collect();
        Self::at_time(Arc::clone(&self.basis), coeffs, self.t)
    }

    fn combine(&self, f: impl Fn(&crate::spectral::EigenMode) -> C64) -> C64 {
        self.weights
            .iter()
            .zip(self.basis.modes())
            .map(|(w, m)| w * f(m))
            .sum()
    }
}

impl BondFunction for WaveState {
    fn graph(&self) -> &MetricStarGraph {
        self.basis.graph()
    }

    fn value(&self, bond: usize, x: f64) -> C64 {
        self.combine(|m| m.value(bond, x))
    }

    fn derivative(&self, bond: usize, x: f64) -> C64 {
        self.combine(|m| m.derivative(bond, x))
    }

    fn second_derivative(&self, bond: usize, x: f64) -> Option<C64> {
        Some(self.combine(|m| m.second_derivative(bond, x).unwrap_or_default()))
    }
}

/// Outcome of [`project`].
#[derive(Debug, Clone)]
pub struct Projection {
    pub state: WaveState,
    /// `G[m][n] = ⟨φ_n, φ_m⟩`.
    pub gram: DMatrix<C64>,
    pub gram_condition: f64,
    /// `‖initial − Σ C_n φ_n‖_{L²}`.
    pub residual: f64,
}

impl Projection {
    /// Largest entry of `|G − I|`.
    pub fn gram_deviation(&self) -> f64 {
        gram_deviation(&self.gram)
    }
}

pub fn gram_deviation(gram: &DMatrix<C64>) -> f64 {
    let n = gram.nrows();
    (gram - DMatrix::<C64>::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Gram matrix `G[m][n] = ⟨φ_n, φ_m⟩` of a basis.
pub fn gram_matrix(basis: &SpectralBasis, resolution: usize) -> Result<DMatrix<C64>> {
    let modes = basis.modes();
    let n = modes.len();
    let entries: Vec<C64> = (0..n * n)
        .into_par_iter()
        .map(|idx| l2_inner(&modes[idx / n], &modes[idx % n], resolution))
        .collect::<Result<_>>()?;
    // column-major: idx = m + n·col, and the row mode is the conjugated one
    Ok(DMatrix::from_vec(n, n, entries))
}

/// Least-squares coefficients of `initial` over `basis` via the Gram system.
///
/// With `b_m = ⟨initial, φ_m⟩` the normal equations read `Σ_n G[m][n] C_n = b_m`.
/// Orthogonality is never assumed.
pub fn project(initial: &dyn BondFunction, basis: Arc<SpectralBasis>, resolution: usize) -> Result<Projection> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    if initial.graph() != basis.graph() {
        return Err(Error::GraphMismatch);
    }
    let gram = gram_matrix(&basis, resolution)?;
    let condition = linalg::condition_number(&gram);
    if condition.is_nan() || condition > MAX_GRAM_CONDITION {
        return Err(Error::SingularGram { condition });
    }
    let rhs: Vec<C64> = basis
        .modes()
        .iter()
        .map(|m| l2_inner(initial, m, resolution))
        .collect::<Result<_>>()?;
    let coeffs = linalg::solve(&gram, &DVector::from_vec(rhs)).ok_or(Error::SingularGram { condition })?;
    let state = WaveState::new(basis, coeffs.iter().copied().collect())?;
    let residual = l2_distance(initial, &state, resolution)?;
    Ok(Projection {
        state,
        gram,
        gram_condition: condition,
        residual,
    })
}

/// `‖f − g‖_{L²}` by quadrature.
pub fn l2_distance(f: &dyn BondFunction, g: &dyn BondFunction, resolution: usize) -> Result<f64> {
    if f.graph() != g.graph() {
        return Err(Error::GraphMismatch);
    }
    let diff = crate::boundary::ClosureFunction::new(
        f.graph(),
        |bond, x| f.value(bond, x) - g.value(bond, x),
        |bond, x| f.derivative(bond, x) - g.derivative(bond, x),
    );
    Ok(l2_inner(&diff, &diff, resolution)?.re.max(0.0).sqrt())
}

/// `(i/2) [ψ ∂ψ* − ∂ψ ψ*]` before the (vanishing) imaginary part is dropped.
pub fn bond_current_complex(state: &WaveState, bond: usize, x: f64) -> Result<C64> {
    state.graph().check_point(bond, x)?;
    Ok(current_density(state.value(bond, x), state.derivative(bond, x)))
}

fn current_density(psi: C64, dpsi: C64) -> C64 {
    C64::new(0.0, 0.5) * (psi * dpsi.conj() - dpsi * psi.conj())
}

/// Probability current on `bond` at `x`, with analytic derivatives.
pub fn bond_current(state: &WaveState, bond: usize, x: f64) -> Result<f64> {
    let j = bond_current_complex(state, bond, x)?;
    debug_assert!(j.im.abs() < 1e-12 * (1.0 + j.re.abs()));
    Ok(j.re)
}

/// Total vertex current and its per-bond split.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexCurrent {
    pub total: f64,
    pub per_bond: Vec<f64>,
}

pub fn vertex_current(state: &WaveState) -> VertexCurrent {
    let per_bond: Vec<f64> = (0..state.graph().n_bonds())
        .map(|j| current_density(state.value(j, 0.0), state.derivative(j, 0.0)).re)
        .collect();
    VertexCurrent {
        total: per_bond.iter().sum(),
        per_bond,
    }
}

/// `J(0, t)` sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentSeries {
    pub times: Vec<f64>,
    pub total: Vec<f64>,
    /// `per_bond[j][i]` is `J_j(0, times[i])`.
    pub per_bond: Vec<Vec<f64>>,
}

impl CurrentSeries {
    pub fn max_abs_total(&self) -> f64 {
        self.total.iter().map(|j| j.abs()).fold(0.0, f64::max)
    }
}

pub fn current_series(state: &WaveState, times: &[f64]) -> Result<CurrentSeries> {
    if let Some(i) = times.windows(2).position(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::UnsortedGrid(i + 1));
    }
    let samples: Vec<VertexCurrent> = times
        .par_iter()
        .map(|&t| vertex_current(&state.evolve(t)))
        .collect();
    let n = state.graph().n_bonds();
    let mut per_bond = vec![Vec::with_capacity(times.len()); n];
    for s in &samples {
        for (j, v) in s.per_bond.iter().enumerate() {
            per_bond[j].push(*v);
        }
    }
    Ok(CurrentSeries {
        times: times.to_vec(),
        total: samples.iter().map(|s| s.total).collect(),
        per_bond,
    })
}

/// `count` uniform samples on `[0, t_max]`; a single sample sits at 0.
pub fn uniform_times(t_max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count)
            .map(|i| t_max * i as f64 / (count - 1) as f64)
            .collect(),
    }
}
