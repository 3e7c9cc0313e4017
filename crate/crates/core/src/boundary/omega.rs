//! Skew forms `Ω(f, g) = ⟨Hf, g⟩ − ⟨f, Hg⟩` for `H = −d²/dx²`.
//!
//! Two routes are provided for each product: boundary terms obtained by
//! integrating by parts, and the volume integral itself ([`omega_direct`]),
//! which serves as the independent check on the boundary formulas.

use num_complex::Complex64 as C64;

use super::{trace_vectors, BondFunction, TraceVectors};
use crate::error::{Error, Result};
use crate::graph::{simpson, BondGrid};

/// Inner product the skew form is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkewProduct {
    Hermitian,
    Pt,
}

/// Hermitian skew form from boundary terms:
///
/// `Σ_j [ f(L) g*'(L) − f'(L) g*(L) − f(0) g*'(0) + f'(0) g*(0) ]`.
pub fn omega_hermitian(f: &dyn BondFunction, g: &dyn BondFunction) -> Result<C64> {
    if f.graph() != g.graph() {
        return Err(Error::GraphMismatch);
    }
    let tf = trace_vectors(f)?;
    let tg = trace_vectors(g)?;
    let n = tf.n_bonds();
    let mut total = C64::new(0.0, 0.0);
    for j in 0..n {
        let (f0, fl) = (tf.psi[j], tf.psi[n + j]);
        let (df0, dfl) = (tf.dpsi[n + j], -tf.dpsi[j]);
        let (g0, gl) = (tg.psi[j].conj(), tg.psi[n + j].conj());
        let (dg0, dgl) = (tg.dpsi[n + j].conj(), -tg.dpsi[j].conj());
        total += fl * dgl - dfl * gl - f0 * dg0 + df0 * g0;
    }
    Ok(total)
}

/// PT skew form evaluated two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtSkewForm {
    /// Bond-by-bond boundary sum
    /// `Σ_j [ f*'(0) g(L) + f*(0) g'(L) − f*'(L) g(0) − f*(L) g'(0) ]`.
    pub boundary_sum: C64,
    /// `Φᵀ Ψ'* − Φ'ᵀ Ψ*` on the trace vectors (Ψ from `f`, Φ from `g`).
    pub symplectic: C64,
}

impl PtSkewForm {
    pub fn value(&self) -> C64 {
        self.boundary_sum
    }

    pub fn discrepancy(&self) -> f64 {
        (self.boundary_sum - self.symplectic).norm()
    }
}

pub fn omega_pt(f: &dyn BondFunction, g: &dyn BondFunction) -> Result<PtSkewForm> {
    if f.graph() != g.graph() {
        return Err(Error::GraphMismatch);
    }
    let tf = trace_vectors(f)?;
    let tg = trace_vectors(g)?;
    let mut boundary_sum = C64::new(0.0, 0.0);
    for (j, &l) in f.graph().lengths().iter().enumerate() {
        let fc0 = f.value(j, 0.0).conj();
        let fcl = f.value(j, l).conj();
        let dfc0 = f.derivative(j, 0.0).conj();
        let dfcl = f.derivative(j, l).conj();
        boundary_sum += dfc0 * g.value(j, l) + fc0 * g.derivative(j, l)
            - dfcl * g.value(j, 0.0)
            - fcl * g.derivative(j, 0.0);
    }
    Ok(PtSkewForm {
        boundary_sum,
        symplectic: symplectic_form(&tf, &tg),
    })
}

/// `(Φᵀ Φ'ᵀ) [[0, I], [−I, 0]] (Ψ*; Ψ'*)` with `Ψ = psi_traces` and `Φ = phi_traces`.
pub fn symplectic_form(psi_traces: &TraceVectors, phi_traces: &TraceVectors) -> C64 {
    let psi_c = psi_traces.psi.map(|z| z.conj());
    let dpsi_c = psi_traces.dpsi.map(|z| z.conj());
    phi_traces.psi.dot(&dpsi_c) - phi_traces.dpsi.dot(&psi_c)
}

/// Volume-integral skew form `⟨Hf, g⟩ − ⟨f, Hg⟩` by quadrature.
///
/// Uses analytic second derivatives where the function provides them and
/// fourth-order finite differences of the first derivative on the grid
/// otherwise.
pub fn omega_direct(
    f: &dyn BondFunction,
    g: &dyn BondFunction,
    product: SkewProduct,
    resolution: usize,
) -> Result<C64> {
    if f.graph() != g.graph() {
        return Err(Error::GraphMismatch);
    }
    if resolution < 5 {
        return Err(Error::ResolutionTooCoarse(resolution));
    }
    let mut total = C64::new(0.0, 0.0);
    for grid in f.graph().grids(resolution)? {
        let fv = samples(&grid, |x| f.value(grid.bond(), x));
        let gv = samples(&grid, |x| g.value(grid.bond(), x));
        let f2 = second_derivatives(f, &grid);
        let g2 = second_derivatives(g, &grid);
        let last = grid.count() - 1;
        let integrand: Vec<C64> = (0..=last)
            .map(|i| match product {
                SkewProduct::Hermitian => -f2[i] * gv[i].conj() + fv[i] * g2[i].conj(),
                SkewProduct::Pt => {
                    let r = last - i;
                    -f2[r].conj() * gv[i] + fv[r].conj() * g2[i]
                }
            })
            .collect();
        total += simpson(&integrand, grid.spacing())?;
    }
    Ok(total)
}

fn samples(grid: &BondGrid, f: impl Fn(f64) -> C64) -> Vec<C64> {
    grid.points().iter().map(|&x| f(x)).collect()
}

fn second_derivatives(f: &dyn BondFunction, grid: &BondGrid) -> Vec<C64> {
    let bond = grid.bond();
    if f.second_derivative(bond, 0.0).is_some() {
        return samples(grid, |x| f.second_derivative(bond, x).unwrap_or_default());
    }
    let d1 = samples(grid, |x| f.derivative(bond, x));
    fd_derivative(&d1, grid.spacing())
}

/// Fourth-order first derivative of uniform samples; one-sided stencils at
/// the two points nearest each end. Requires at least 5 samples.
fn fd_derivative(v: &[C64], h: f64) -> Vec<C64> {
    let n = v.len();
    debug_assert!(n >= 5);
    let s = 1.0 / (12.0 * h);
    (0..n)
        .map(|i| {
            let d = if i == 0 {
                v[0] * -25.0 + v[1] * 48.0 - v[2] * 36.0 + v[3] * 16.0 - v[4] * 3.0
            } else if i == 1 {
                v[0] * -3.0 - v[1] * 10.0 + v[2] * 18.0 - v[3] * 6.0 + v[4]
            } else if i == n - 2 {
                v[n - 1] * 3.0 + v[n - 2] * 10.0 - v[n - 3] * 18.0 + v[n - 4] * 6.0 - v[n - 5]
            } else if i == n - 1 {
                v[n - 1] * 25.0 - v[n - 2] * 48.0 + v[n - 3] * 36.0 - v[n - 4] * 16.0
                    + v[n - 5] * 3.0
            } else {
                v[i - 2] - v[i - 1] * 8.0 + v[i + 1] * 8.0 - v[i + 2]
            };
            d * s
        })
        .collect()
}
