//! Inner products on the star graph, all evaluated by composite Simpson.

use num_complex::Complex64 as C64;

use super::BondFunction;
use crate::error::{Error, Result};
use crate::graph::{simpson, BondGrid, DEFAULT_RESOLUTION};
use crate::spectral::SpectralBasis;

/// Number of basis modes kept in the CPT kernel sum unless told otherwise.
pub const DEFAULT_CPT_TRUNCATION: usize = 20;

fn same_graph(f: &dyn BondFunction, g: &dyn BondFunction) -> Result<()> {
    if f.graph() != g.graph() {
        return Err(Error::GraphMismatch);
    }
    Ok(())
}

/// Σ_j ∫ integrand_j(x) dx with one grid of `resolution` points per bond.
pub(crate) fn integrate_bonds(
    f: &dyn BondFunction,
    resolution: usize,
    mut integrand: impl FnMut(usize, &BondGrid) -> Vec<C64>,
) -> Result<C64> {
    let mut total = C64::new(0.0, 0.0);
    for grid in f.graph().grids(resolution)? {
        let values = integrand(grid.bond(), &grid);
        total += simpson(&values, grid.spacing())?;
    }
    Ok(total)
}

/// `Σ_j ∫ f_j(x) g_j*(x) dx`; the second argument is conjugated.
pub fn l2_inner(f: &dyn BondFunction, g: &dyn BondFunction, resolution: usize) -> Result<C64> {
    same_graph(f, g)?;
    integrate_bonds(f, resolution, |bond, grid| {
        grid.points()
            .iter()
            .map(|&x| f.value(bond, x) * g.value(bond, x).conj())
            .collect()
    })
}

/// `Σ_j ∫ [PT f]_j(x) · g_j(x) dx` with `[PT f]_j(x) = f_j*(L_j − x)`.
pub fn pt_inner(f: &dyn BondFunction, g: &dyn BondFunction, resolution: usize) -> Result<C64> {
    same_graph(f, g)?;
    integrate_bonds(f, resolution, |bond, grid| {
        let l = grid.length();
        grid.points()
            .iter()
            .map(|&x| f.value(bond, l - x).conj() * g.value(bond, x))
            .collect()
    })
}

/// CPT inner product together with the kernel truncation it was computed at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptValue {
    pub value: C64,
    pub truncation: usize,
}

/// CPT inner product at the default grid resolution.
pub fn cpt_inner(
    f: &dyn BondFunction,
    g: &dyn BondFunction,
    basis: &SpectralBasis,
    truncation: usize,
) -> Result<CptValue> {
    cpt_inner_at(f, g, basis, truncation, DEFAULT_RESOLUTION)
}

/// `Σ_j ∫ [CPT f]_j(x) g_j(x) dx` with
/// `[CPT f]_j(x) = ∫ C_j(x, y) f_j*(L_j − y) dy` and the bond-wise kernel
/// `C_j(x, y) = Σ_{n ≤ truncation} φ_j⁽ⁿ⁾(x) φ_j⁽ⁿ⁾(y)` over basis modes.
///
/// The kernel is separable, so each bond contributes
/// `Σ_n (∫ φ_n(y) f*(L−y) dy) (∫ φ_n(x) g(x) dx)`.
pub fn cpt_inner_at(
    f: &dyn BondFunction,
    g: &dyn BondFunction,
    basis: &SpectralBasis,
    truncation: usize,
    resolution: usize,
) -> Result<CptValue> {
    same_graph(f, g)?;
    if f.graph() != basis.graph() {
        return Err(Error::GraphMismatch);
    }
    if truncation == 0 || truncation > basis.len() {
        return Err(Error::InsufficientBasis {
            requested: truncation,
            available: basis.len(),
        });
    }
    let modes = &basis.modes()[..truncation];
    let mut total = C64::new(0.0, 0.0);
    for grid in f.graph().grids(resolution)? {
        let bond = grid.bond();
        let l = grid.length();
        let h = grid.spacing();
        let reflected: Vec<C64> = grid.points().iter().map(|&y| f.value(bond, l - y).conj()).collect();
        let target: Vec<C64> = grid.points().iter().map(|&x| g.value(bond, x)).collect();
        for mode in modes {
            let phi: Vec<C64> = grid.points().iter().map(|&x| mode.value(bond, x)).collect();
            let left: Vec<C64> = phi.iter().zip(&reflected).map(|(p, r)| p * r).collect();
            let right: Vec<C64> = phi.iter().zip(&target).map(|(p, t)| p * t).collect();
            total += simpson(&left, h)? * simpson(&right, h)?;
        }
    }
    Ok(CptValue {
        value: total,
        truncation,
    })
}
