//! Metric star graphs, per-bond sample grids and composite Simpson quadrature.
//!
//! Every bond `j` is the interval `[0, L_j]` with the shared vertex at `x = 0`.
//! Units are ħ = 2m = 1, so the energy of a mode with wavenumber `k` is `k²`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Grid resolution used for inner products and normalization checks.
pub const DEFAULT_RESOLUTION: usize = 2001;

/// A star graph with `N ≥ 2` finite bonds meeting at one vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricStarGraph {
    lengths: Vec<f64>,
}

impl MetricStarGraph {
    pub fn new(lengths: &[f64]) -> Result<Self> {
        if let Some(bad) = lengths.iter().find(|l| !l.is_finite()) {
            return Err(Error::NonFiniteInput(format!("bond length {bad}")));
        }
        if lengths.len() < 2 {
            return Err(Error::TooFewBonds(lengths.len()));
        }
        if let Some((index, &value)) = lengths.iter().enumerate().find(|(_, &l)| l <= 0.0) {
            return Err(Error::NonPositiveLength { index, value });
        }
        Ok(Self {
            lengths: lengths.to_vec(),
        })
    }

    pub fn n_bonds(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Length of bond `bond` (0-based).
    pub fn length(&self, bond: usize) -> Result<f64> {
        self.lengths
            .get(bond)
            .copied()
            .ok_or(Error::BondOutOfRange {
                bond,
                n_bonds: self.n_bonds(),
            })
    }

    pub fn max_length(&self) -> f64 {
        self.lengths.iter().copied().fold(0.0, f64::max)
    }

    /// Checks `0 ≤ x ≤ L_bond` and returns `L_bond`.
    pub fn check_point(&self, bond: usize, x: f64) -> Result<f64> {
        let length = self.length(bond)?;
        if !(0.0..=length).contains(&x) {
            return Err(Error::OutOfDomain { bond, x, length });
        }
        Ok(length)
    }

    /// One uniform grid per bond, all with `count` points.
    pub fn grids(&self, count: usize) -> Result<Vec<BondGrid>> {
        (0..self.n_bonds())
            .map(|bond| BondGrid::new(self, bond, count))
            .collect()
    }
}

/// Uniform grid on `[0, L_bond]` with an odd number of points.
#[derive(Debug, Clone, PartialEq)]
pub struct BondGrid {
    bond: usize,
    length: f64,
    points: Vec<f64>,
}

impl BondGrid {
    pub fn new(graph: &MetricStarGraph, bond: usize, count: usize) -> Result<Self> {
        let length = graph.length(bond)?;
        Self::on_interval(bond, length, count)
    }

    pub(crate) fn on_interval(bond: usize, length: f64, count: usize) -> Result<Self> {
        check_count(count)?;
        let last = count - 1;
        let mut points: Vec<f64> = (0..count)
            .map(|i| length * i as f64 / last as f64)
            .collect();
        // endpoints exact
        points[0] = 0.0;
        points[last] = length;
        Ok(Self {
            bond,
            length,
            points,
        })
    }

    pub fn bond(&self) -> usize {
        self.bond
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn spacing(&self) -> f64 {
        self.length / (self.count() - 1) as f64
    }
}

fn check_count(count: usize) -> Result<()> {
    if count < 3 {
        return Err(Error::TooFewPoints(count));
    }
    if count.is_multiple_of(2) {
        return Err(Error::EvenPointCount(count));
    }
    Ok(())
}

/// Composite Simpson approximation of `∫ f dx` over the grid interval.
pub fn quadrature(values: &[C64], grid: &BondGrid) -> Result<C64> {
    if values.len() != grid.count() {
        return Err(Error::LengthMismatch {
            values: values.len(),
            points: grid.count(),
        });
    }
    simpson(values, grid.spacing())
}

/// Composite Simpson on uniformly spaced samples with spacing `h`.
pub(crate) fn simpson(values: &[C64], h: f64) -> Result<C64> {
    check_count(values.len())?;
    let last = values.len() - 1;
    let mut odd = C64::new(0.0, 0.0);
    let mut even = C64::new(0.0, 0.0);
    for (i, v) in values.iter().enumerate().take(last).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    Ok((values[0] + values[last] + odd * 4.0 + even * 2.0) * (h / 3.0))
}
