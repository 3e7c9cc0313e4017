//! Boundary conditions as matrix pairs `(A, B)` acting on trace vectors,
//! the Hermitian / PT / CPT inner products, and the skew forms Ω.
//!
//! Trace ordering for a function ψ on an `N`-bond star:
//!
//! ```text
//! Ψ  = ( ψ_1(0), …, ψ_N(0),  ψ_1(L_1), …, ψ_N(L_N) )
//! Ψ' = ( −ψ_1'(L_1), …, −ψ_N'(L_N),  ψ_1'(0), …, ψ_N'(0) )
//! ```
//!
//! A boundary condition is `A Ψ + B Ψ' = 0` with `2N × 2N` complex matrices.
//! Note that `Ψ'` pairs the vertex values with the outer-end derivatives; this is
//! the pairing under which the PT skew form becomes the plain symplectic form.

mod function;
mod inner;
mod omega;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::graph::MetricStarGraph;
use crate::linalg;

pub use function::{BondFunction, BondProfile, ClosureFunction, GraphFunction, Term};
pub use inner::{cpt_inner, cpt_inner_at, l2_inner, pt_inner, CptValue, DEFAULT_CPT_TRUNCATION};
pub use omega::{
    omega_direct, omega_hermitian, omega_pt, symplectic_form, PtSkewForm, SkewProduct,
};

/// Boundary-condition family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Continuity at the vertex, vanishing sum of outer-end derivatives,
    /// Dirichlet outer ends.
    PtDirichlet,
    /// Equal vertex derivatives, vanishing sum of outer-end values,
    /// Neumann outer ends.
    PtNeumann,
    /// Hermitian reference: continuity and current conservation at the vertex,
    /// Dirichlet outer ends.
    KirchhoffRef,
    /// User-supplied matrices.
    Custom,
}

impl Family {
    pub const BUILT_IN: [Family; 3] = [Family::PtDirichlet, Family::PtNeumann, Family::KirchhoffRef];

    pub fn name(self) -> &'static str {
        match self {
            Family::PtDirichlet => "pt-dirichlet",
            Family::PtNeumann => "pt-neumann",
            Family::KirchhoffRef => "kirchhoff-ref",
            Family::Custom => "custom",
        }
    }

    /// Which skew form the family's matrices are meant to annihilate.
    pub fn pairing(self) -> Pairing {
        match self {
            Family::KirchhoffRef => Pairing::Hermitian,
            _ => Pairing::Pt,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "pt-dirichlet" => Ok(Family::PtDirichlet),
            "pt-neumann" => Ok(Family::PtNeumann),
            "kirchhoff-ref" => Ok(Family::KirchhoffRef),
            "custom" => Ok(Family::Custom),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

/// How the derivative trace is paired with the value trace in `AB† = BA†`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// `Ψ'` as stored (vertex values against outer-end derivatives).
    Pt,
    /// `Ψ'` with its halves swapped, i.e. every value paired with the inward
    /// derivative at the same endpoint.
    Hermitian,
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pairing::Pt => "pt",
            Pairing::Hermitian => "hermitian",
        })
    }
}

/// Boundary values `Ψ` and sign-adjusted boundary derivatives `Ψ'`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceVectors {
    pub psi: DVector<C64>,
    pub dpsi: DVector<C64>,
}

impl TraceVectors {
    pub fn zeros(n_bonds: usize) -> Self {
        Self {
            psi: DVector::zeros(2 * n_bonds),
            dpsi: DVector::zeros(2 * n_bonds),
        }
    }

    pub fn n_bonds(&self) -> usize {
        self.psi.len() / 2
    }
}

pub fn trace_vectors(f: &dyn BondFunction) -> Result<TraceVectors> {
    let graph = f.graph();
    let n = graph.n_bonds();
    let mut t = TraceVectors::zeros(n);
    let checked = |bond: usize, x: f64, z: C64| {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(z)
        } else {
            Err(Error::EvaluationFailure { bond, x })
        }
    };
    for (j, &l) in graph.lengths().iter().enumerate() {
        t.psi[j] = checked(j, 0.0, f.value(j, 0.0))?;
        t.psi[n + j] = checked(j, l, f.value(j, l))?;
        t.dpsi[j] = -checked(j, l, f.derivative(j, l))?;
        t.dpsi[n + j] = checked(j, 0.0, f.derivative(j, 0.0))?;
    }
    Ok(t)
}

/// Matrix pair `(A, B)` with `A Ψ + B Ψ' = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BCMatrices {
    a: DMatrix<C64>,
    b: DMatrix<C64>,
    family: Family,
    n_bonds: usize,
}

impl BCMatrices {
    /// Wraps a user matrix pair. Both must be `2N × 2N` for some `N ≥ 1`.
    ///
    /// Rank is not enforced here so that degenerate sets can still be
    /// inspected with [`check_ranks`].
    pub fn new(a: DMatrix<C64>, b: DMatrix<C64>, family: Family) -> Result<Self> {
        let dim = a.nrows();
        for (rows, cols) in [a.shape(), b.shape()] {
            if rows != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: rows,
                });
            }
            if cols != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: cols,
                });
            }
        }
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: dim + dim % 2,
                found: dim,
            });
        }
        Ok(Self {
            a,
            b,
            family,
            n_bonds: dim / 2,
        })
    }

    pub fn a(&self) -> &DMatrix<C64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<C64> {
        &self.b
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n_bonds(&self) -> usize {
        self.n_bonds
    }

    /// `B` expressed against the derivative ordering of `pairing`.
    pub fn b_in(&self, pairing: Pairing) -> DMatrix<C64> {
        match pairing {
            Pairing::Pt => self.b.clone(),
            Pairing::Hermitian => {
                let n = self.n_bonds;
                let mut out = DMatrix::zeros(2 * n, 2 * n);
                out.columns_mut(0, n).copy_from(&self.b.columns(n, n));
                out.columns_mut(n, n).copy_from(&self.b.columns(0, n));
                out
            }
        }
    }

    /// Horizontally stacked `(A | B)`.
    pub fn stacked(&self) -> DMatrix<C64> {
        let dim = 2 * self.n_bonds;
        let mut ab = DMatrix::zeros(dim, 2 * dim);
        ab.columns_mut(0, dim).copy_from(&self.a);
        ab.columns_mut(dim, dim).copy_from(&self.b);
        ab
    }
}

/// Built-in matrices for `family` on `graph`.
pub fn bc_matrices(family: Family, graph: &MetricStarGraph) -> Result<BCMatrices> {
    let n = graph.n_bonds();
    let dim = 2 * n;
    let one = C64::new(1.0, 0.0);
    let mut a = DMatrix::<C64>::zeros(dim, dim);
    let mut b = DMatrix::<C64>::zeros(dim, dim);
    // Slot layout: Ψ[j] = ψ_j(0), Ψ[n+j] = ψ_j(L_j),
    //              Ψ'[j] = −ψ_j'(L_j), Ψ'[n+j] = ψ_j'(0).
    match family {
        Family::PtDirichlet => {
            for r in 0..n - 1 {
                a[(r, r)] = one;
                a[(r, r + 1)] = -one;
            }
            for j in 0..n {
                b[(n - 1, j)] = -one;
                a[(n + j, n + j)] = one;
            }
        }
        Family::PtNeumann => {
            for r in 0..n - 1 {
                b[(r, n + r)] = one;
                b[(r, n + r + 1)] = -one;
            }
            for j in 0..n {
                a[(n - 1, n + j)] = one;
                b[(n + j, j)] = -one;
            }
        }
        Family::KirchhoffRef => {
            for r in 0..n - 1 {
                a[(r, r)] = one;
                a[(r, r + 1)] = -one;
            }
            for j in 0..n {
                b[(n - 1, n + j)] = one;
                a[(n + j, n + j)] = one;
            }
        }
        Family::Custom => return Err(Error::UnknownFamily(family.name().to_string())),
    }
    BCMatrices::new(a, b, family)
}

/// `‖A Ψ + B Ψ'‖₂`.
pub fn bc_residual(bc: &BCMatrices, t: &TraceVectors) -> Result<f64> {
    let dim = 2 * bc.n_bonds;
    for len in [t.psi.len(), t.dpsi.len()] {
        if len != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: len,
            });
        }
    }
    Ok((&bc.a * &t.psi + &bc.b * &t.dpsi).norm())
}

/// `‖A B† − B A†‖_F` in the family's own pairing (see [`Pairing`]).
pub fn check_ab_symmetry(bc: &BCMatrices) -> f64 {
    ab_symmetry_in(bc, bc.family.pairing())
}

/// `‖A B̃† − B̃ A†‖_F` where `B̃` is `B` re-expressed in `pairing`.
pub fn ab_symmetry_in(bc: &BCMatrices, pairing: Pairing) -> f64 {
    let b = bc.b_in(pairing);
    let a = &bc.a;
    linalg::frobenius(&(a * b.adjoint() - &b * a.adjoint()))
}

/// Numerical ranks of `A`, `B` and `(A | B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankReport {
    pub rank_a: usize,
    pub rank_b: usize,
    pub rank_ab: usize,
}

impl RankReport {
    /// `rank(A | B) = 2N`: the condition set is non-degenerate.
    pub fn is_full(&self, n_bonds: usize) -> bool {
        self.rank_ab == 2 * n_bonds
    }
}

pub fn check_ranks(bc: &BCMatrices) -> RankReport {
    RankReport {
        rank_a: linalg::numerical_rank(&bc.a),
        rank_b: linalg::numerical_rank(&bc.b),
        rank_ab: linalg::numerical_rank(&bc.stacked()),
    }
}
