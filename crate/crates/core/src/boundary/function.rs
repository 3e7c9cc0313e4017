//! Functions defined bond-by-bond on a star graph.

use num_complex::Complex64 as C64;

use crate::graph::MetricStarGraph;

/// A function on a star graph: one value/derivative pair per bond.
///
/// Bonds are 0-based and `x` runs over `[0, L_bond]`. Implementations may be
/// evaluated slightly outside the bond; callers that need domain checks do them
/// before calling in.
pub trait BondFunction: Sync {
    fn graph(&self) -> &MetricStarGraph;

    fn value(&self, bond: usize, x: f64) -> C64;

    fn derivative(&self, bond: usize, x: f64) -> C64;

    /// Analytic second derivative if the function knows it. `None` makes
    /// consumers fall back to finite differences of [`derivative`](Self::derivative).
    fn second_derivative(&self, _bond: usize, _x: f64) -> Option<C64> {
        None
    }
}

/// One analytic building block of a [`BondProfile`].
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    /// `amp · sin(freq · x + phase)`
    Sin { amp: C64, freq: f64, phase: f64 },
    /// `amp · cos(freq · x + phase)`
    Cos { amp: C64, freq: f64, phase: f64 },
    /// `c₀ + c₁x + c₂x² + …`
    Poly(Vec<C64>),
}

impl Term {
    pub fn sin(amp: impl Into<C64>, freq: f64) -> Self {
        Term::Sin {
            amp: amp.into(),
            freq,
            phase: 0.0,
        }
    }

    pub fn cos(amp: impl Into<C64>, freq: f64) -> Self {
        Term::Cos {
            amp: amp.into(),
            freq,
            phase: 0.0,
        }
    }

    /// `amp · sin(k (length − x))`, written so that the value at `x = length` is exactly 0.
    pub fn reflected_sin(amp: impl Into<C64>, k: f64, length: f64) -> Self {
        Term::Sin {
            amp: amp.into(),
            freq: -k,
            phase: k * length,
        }
    }

    /// `amp · cos(k (length − x))`.
    pub fn reflected_cos(amp: impl Into<C64>, k: f64, length: f64) -> Self {
        Term::Cos {
            amp: amp.into(),
            freq: -k,
            phase: k * length,
        }
    }

    pub fn constant(c: impl Into<C64>) -> Self {
        Term::Poly(vec![c.into()])
    }

    pub fn linear(c0: impl Into<C64>, c1: impl Into<C64>) -> Self {
        Term::Poly(vec![c0.into(), c1.into()])
    }

    /// `order`-th derivative at `x`, for `order ∈ {0, 1, 2}`.
    fn eval(&self, x: f64, order: u8) -> C64 {
        match self {
            Term::Sin { amp, freq, phase } | Term::Cos { amp, freq, phase } => {
                let arg = freq * x + phase;
                let (s, c) = arg.sin_cos();
                let is_sin = matches!(self, Term::Sin { .. });
                let v = match (is_sin, order) {
                    (true, 0) => s,
                    (true, 1) => freq * c,
                    (true, _) => -freq * freq * s,
                    (false, 0) => c,
                    (false, 1) => -freq * s,
                    (false, _) => -freq * freq * c,
                };
                amp * v
            }
            Term::Poly(coeffs) => {
                let mut acc = C64::new(0.0, 0.0);
                for (p, c) in coeffs.iter().enumerate().skip(order as usize).rev() {
                    let factor = match order {
                        0 => 1.0,
                        1 => p as f64,
                        _ => (p * (p - 1)) as f64,
                    };
                    acc = acc * x + c * factor;
                }
                acc
            }
        }
    }
}

/// Sum of analytic terms on a single bond.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BondProfile {
    terms: Vec<Term>,
}

impl BondProfile {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn eval(&self, x: f64, order: u8) -> C64 {
        self.terms.iter().map(|t| t.eval(x, order)).sum()
    }
}

/// Graph function assembled from trig/polynomial terms with exact derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFunction {
    graph: MetricStarGraph,
    bonds: Vec<BondProfile>,
}

impl GraphFunction {
    /// Panics if the profile count differs from the bond count.
    pub fn from_bonds(graph: &MetricStarGraph, bonds: Vec<BondProfile>) -> Self {
        assert_eq!(
            bonds.len(),
            graph.n_bonds(),
            "one profile per bond is required"
        );
        Self {
            graph: graph.clone(),
            bonds,
        }
    }

    pub fn uniform(graph: &MetricStarGraph, profile: BondProfile) -> Self {
        Self::from_bonds(graph, vec![profile; graph.n_bonds()])
    }

    pub fn zero(graph: &MetricStarGraph) -> Self {
        Self::uniform(graph, BondProfile::zero())
    }

    pub fn profile(&self, bond: usize) -> &BondProfile {
        &self.bonds[bond]
    }
}

impl BondFunction for GraphFunction {
    fn graph(&self) -> &MetricStarGraph {
        &self.graph
    }

    fn value(&self, bond: usize, x: f64) -> C64 {
        self.bonds[bond].eval(x, 0)
    }

    fn derivative(&self, bond: usize, x: f64) -> C64 {
        self.bonds[bond].eval(x, 1)
    }

    fn second_derivative(&self, bond: usize, x: f64) -> Option<C64> {
        Some(self.bonds[bond].eval(x, 2))
    }
}

/// Graph function given by closures `(bond, x) -> value` and `(bond, x) -> derivative`.
///
/// Second derivatives are not known, so the volume-integral skew form uses
/// finite differences for these.
pub struct ClosureFunction<V, D> {
    graph: MetricStarGraph,
    value: V,
    derivative: D,
}

impl<V, D> ClosureFunction<V, D>
where
    V: Fn(usize, f64) -> C64 + Sync,
    D: Fn(usize, f64) -> C64 + Sync,
{
    pub fn new(graph: &MetricStarGraph, value: V, derivative: D) -> Self {
        Self {
            graph: graph.clone(),
            value,
            derivative,
        }
    }
}

impl<V, D> BondFunction for ClosureFunction<V, D>
where
    V: Fn(usize, f64) -> C64 + Sync,
    D: Fn(usize, f64) -> C64 + Sync,
{
    fn graph(&self) -> &MetricStarGraph {
        &self.graph
    }

    fn value(&self, bond: usize, x: f64) -> C64 {
        (self.value)(bond, x)
    }

    fn derivative(&self, bond: usize, x: f64) -> C64 {
        (self.derivative)(bond, x)
    }
}
