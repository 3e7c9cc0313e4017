//! Secular equation, root finding and closed-form eigenmodes.
//!
//! On every bond the eigenfunction is a combination of `cos k(L_j − x)` and
//! `sin k(L_j − x)`. For the PT families the vertex/end conditions collapse to
//!
//! ```text
//! Σ_j 1 / sin(k L_j) = 0
//! ```
//!
//! which is evaluated in the pole-free product-sum form
//! `Σ_j Π_{i≠j} sin(k L_i)`. The Kirchhoff reference family instead gives
//! `Σ_j cot(k L_j) = 0`, evaluated as `Σ_j cos(k L_j) Π_{i≠j} sin(k L_i)`.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::boundary::{l2_inner, BondFunction, Family};
use crate::error::{Error, Result};
use crate::graph::{MetricStarGraph, DEFAULT_RESOLUTION};

/// `|sin(k L_j)|` below this marks a root as degenerate.
pub const DEGENERATE_SIN: f64 = 1e-8;
/// Roots closer than this are merged.
pub const DEDUP_TOL: f64 = 1e-9;
/// A local minimum of `|secular|` below this counts as an even-multiplicity root.
pub const EVEN_ROOT_TOL: f64 = 1e-12;
/// `eigenmode` refuses wavenumbers whose secular residual exceeds this.
pub const ROOT_ACCEPT_TOL: f64 = 1e-9;
pub const DEFAULT_TOL: f64 = 1e-12;

/// Value and k-derivative carried together.
#[derive(Debug, Clone, Copy)]
struct Dual {
    v: f64,
    d: f64,
}

impl Dual {
    const ZERO: Dual = Dual { v: 0.0, d: 0.0 };

    fn sin(k: f64, l: f64) -> Self {
        let (s, c) = (k * l).sin_cos();
        Dual { v: s, d: l * c }
    }

    fn cos(k: f64, l: f64) -> Self {
        let (s, c) = (k * l).sin_cos();
        Dual { v: c, d: -l * s }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            v: self.v + o.v,
            d: self.d + o.d,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            v: self.v * o.v,
            d: self.d * o.v + self.v * o.d,
        }
    }
}

/// Which secular function a family leads to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecularKind {
    /// `Σ_j Π_{i≠j} sin(k L_i)`, shared by both PT families.
    Pt,
    /// `Σ_j cos(k L_j) Π_{i≠j} sin(k L_i)`.
    Kirchhoff,
}

impl SecularKind {
    pub fn of(family: Family) -> Result<Self> {
        match family {
            Family::PtDirichlet | Family::PtNeumann => Ok(SecularKind::Pt),
            Family::KirchhoffRef => Ok(SecularKind::Kirchhoff),
            Family::Custom => Err(Error::UnsupportedFamily(family.name().to_string())),
        }
    }

    fn eval(self, k: f64, lengths: &[f64]) -> Dual {
        let sines: Vec<Dual> = lengths.iter().map(|&l| Dual::sin(k, l)).collect();
        match self {
            SecularKind::Pt if sines.len() == 3 => {
                let (s1, s2, s3) = (sines[0], sines[1], sines[2]);
                s1 * s2 + s1 * s3 + s2 * s3
            }
            SecularKind::Pt => (0..sines.len()).fold(Dual::ZERO, |acc, j| {
                acc + product_except(&sines, j)
            }),
            SecularKind::Kirchhoff => lengths.iter().enumerate().fold(Dual::ZERO, |acc, (j, &l)| {
                acc + Dual::cos(k, l) * product_except(&sines, j)
            }),
        }
    }
}

fn product_except(factors: &[Dual], skip: usize) -> Dual {
    factors
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .fold(Dual { v: 1.0, d: 0.0 }, |acc, (_, &f)| acc * f)
}

/// PT secular function. For three bonds this is
/// `sin kL₁ sin kL₂ + sin kL₁ sin kL₃ + sin kL₂ sin kL₃`.
pub fn secular(k: f64, graph: &MetricStarGraph) -> f64 {
    SecularKind::Pt.eval(k, graph.lengths()).v
}

pub fn secular_for(kind: SecularKind, k: f64, graph: &MetricStarGraph) -> f64 {
    kind.eval(k, graph.lengths()).v
}

/// d/dk of the secular function.
pub fn secular_derivative(kind: SecularKind, k: f64, graph: &MetricStarGraph) -> f64 {
    kind.eval(k, graph.lengths()).d
}

/// `true` when some `|sin(k L_j)|` is below [`DEGENERATE_SIN`].
pub fn is_degenerate(k: f64, graph: &MetricStarGraph) -> bool {
    graph
        .lengths()
        .iter()
        .any(|&l| (k * l).sin().abs() < DEGENERATE_SIN)
}

/// Default scan step `π / (50 · max L_j)`.
pub fn default_scan_step(graph: &MetricStarGraph) -> f64 {
    PI / (50.0 * graph.max_length())
}

/// Largest scan step accepted: `π / (2 · max L_j)`.
pub fn max_scan_step(graph: &MetricStarGraph) -> f64 {
    PI / (2.0 * graph.max_length())
}

/// A secular root before mode construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootStub {
    pub k: f64,
    pub degenerate: bool,
}

/// Roots of the PT secular function in `[max(k_min, tol), k_max]`.
pub fn find_roots(
    graph: &MetricStarGraph,
    k_min: f64,
    k_max: f64,
    scan_step: f64,
    tol: f64,
) -> Result<Vec<RootStub>> {
    find_roots_for(SecularKind::Pt, graph, k_min, k_max, scan_step, tol)
}

/// Sign-change scan plus bisection, with a separate pass for even-multiplicity
/// roots (local minima of `|secular|` that touch zero without crossing).
pub fn find_roots_for(
    kind: SecularKind,
    graph: &MetricStarGraph,
    k_min: f64,
    k_max: f64,
    scan_step: f64,
    tol: f64,
) -> Result<Vec<RootStub>> {
    if !(k_min.is_finite() && k_max.is_finite()) || k_min < 0.0 || k_min >= k_max {
        return Err(Error::InvalidWindow { k_min, k_max });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let limit = max_scan_step(graph);
    if !(scan_step.is_finite() && scan_step > 0.0) || scan_step > limit {
        return Err(Error::StepTooLarge {
            step: scan_step,
            limit,
        });
    }
    let start = k_min.max(tol);
    if start >= k_max {
        return Ok(Vec::new());
    }

    let steps = ((k_max - start) / scan_step).ceil() as usize;
    let ks: Vec<f64> = (0..=steps)
        .map(|i| if i == steps { k_max } else { start + i as f64 * scan_step })
        .collect();
    let f = |k: f64| secular_for(kind, k, graph);
    let values: Vec<f64> = ks.par_iter().map(|&k| f(k)).collect();

    enum Candidate {
        Exact(f64),
        SignChange(f64, f64),
        Touch(f64, f64),
    }
    let mut candidates = Vec::new();
    for i in 0..ks.len() {
        if values[i] == 0.0 {
            candidates.push(Candidate::Exact(ks[i]));
            continue;
        }
        if i + 1 < ks.len() && values[i] * values[i + 1] < 0.0 {
            candidates.push(Candidate::SignChange(ks[i], ks[i + 1]));
        }
        if i > 0 && i + 1 < ks.len() {
            let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
            let same_sign = a * b > 0.0 && b * c > 0.0;
            if same_sign && b.abs() <= a.abs() && b.abs() <= c.abs() {
                candidates.push(Candidate::Touch(ks[i - 1], ks[i + 1]));
            }
        }
    }

    let refined: Vec<Option<f64>> = candidates
        .par_iter()
        .map(|c| match *c {
            Candidate::Exact(k) => Some(k),
            Candidate::SignChange(a, b) => Some(refine_simple(kind, graph, a, b, tol)),
            Candidate::Touch(a, b) => {
                let df = |k: f64| secular_derivative(kind, k, graph);
                if df(a) * df(b) > 0.0 {
                    return None;
                }
                let k = bisect(df, a, b, tol);
                (f(k).abs() < EVEN_ROOT_TOL).then_some(k)
            }
        })
        .collect();

    let mut roots: Vec<f64> = refined.into_iter().flatten().filter(|&k| k > 0.0).collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() < DEDUP_TOL);
    Ok(roots
        .into_iter()
        .map(|k| RootStub {
            k,
            degenerate: is_degenerate(k, graph),
        })
        .collect())
}

/// Bisection on a sign change until the bracket is narrower than `tol`;
/// returns the endpoint with the smaller `|f|`.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    while b - a >= tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    if fa.abs() <= fb.abs() {
        a
    } else {
        b
    }
}

/// Bisection to `tol`, then a few Newton steps kept inside the final bracket
/// to bring the residual down to rounding level.
fn refine_simple(kind: SecularKind, graph: &MetricStarGraph, a: f64, b: f64, tol: f64) -> f64 {
    let f = |k: f64| secular_for(kind, k, graph);
    let mut k = bisect(f, a, b, tol);
    let (lo, hi) = (k - tol, k + tol);
    for _ in 0..4 {
        let e = kind.eval(k, graph.lengths());
        if e.v == 0.0 || e.d == 0.0 {
            break;
        }
        let next = k - e.v / e.d;
        if !(lo..=hi).contains(&next) || f(next).abs() >= e.v.abs() {
            break;
        }
        k = next;
    }
    k
}

/// One normalized eigenfunction.
///
/// * PT Dirichlet and Kirchhoff reference: `ψ_j(x) = c · sin k(L_j − x) / sin kL_j`
///   with `c = [Σ_j (2kL_j − sin 2kL_j) / (4k sin² kL_j)]^{−1/2}`.
/// * PT Neumann: `ψ_j(x) = c · cos k(L_j − x) / sin kL_j`
///   with `c = [Σ_j (2kL_j + sin 2kL_j) / (4k sin² kL_j)]^{−1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenMode {
    k: f64,
    family: Family,
    norm_const: f64,
    graph: MetricStarGraph,
    /// `norm_const / sin(k L_j)` per bond.
    amplitudes: Vec<f64>,
    norm_check: f64,
}

impl EigenMode {
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn energy(&self) -> f64 {
        self.k * self.k
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    pub fn graph(&self) -> &MetricStarGraph {
        &self.graph
    }

    /// Quadrature value of `⟨ψ, ψ⟩` computed at construction.
    pub fn norm_check(&self) -> f64 {
        self.norm_check
    }

    fn uses_cos(&self) -> bool {
        self.family == Family::PtNeumann
    }

    fn raw_value(&self, bond: usize, x: f64) -> f64 {
        let arg = self.k * (self.graph.lengths()[bond] - x);
        let shape = if self.uses_cos() { arg.cos() } else { arg.sin() };
        self.amplitudes[bond] * shape
    }

    fn raw_derivative(&self, bond: usize, x: f64) -> f64 {
        let arg = self.k * (self.graph.lengths()[bond] - x);
        let shape = if self.uses_cos() {
            self.k * arg.sin()
        } else {
            -self.k * arg.cos()
        };
        self.amplitudes[bond] * shape
    }
}

impl BondFunction for EigenMode {
    fn graph(&self) -> &MetricStarGraph {
        &self.graph
    }

    fn value(&self, bond: usize, x: f64) -> C64 {
        C64::new(self.raw_value(bond, x), 0.0)
    }

    fn derivative(&self, bond: usize, x: f64) -> C64 {
        C64::new(self.raw_derivative(bond, x), 0.0)
    }

    fn second_derivative(&self, bond: usize, x: f64) -> Option<C64> {
        Some(C64::new(-self.energy() * self.raw_value(bond, x), 0.0))
    }
}

/// Closed-form normalization constant for a family's mode shape at `k`.
pub fn norm_constant(family: Family, k: f64, graph: &MetricStarGraph) -> Result<f64> {
    let sign = match family {
        Family::PtDirichlet | Family::KirchhoffRef => -1.0,
        Family::PtNeumann => 1.0,
        Family::Custom => return Err(Error::UnsupportedFamily(family.name().to_string())),
    };
    let sum: f64 = graph
        .lengths()
        .iter()
        .map(|&l| {
            let s = (k * l).sin();
            (2.0 * k * l + sign * (2.0 * k * l).sin()) / (4.0 * k * s * s)
        })
        .sum();
    Ok(sum.powf(-0.5))
}

pub fn eigenmode(k: f64, family: Family, graph: &MetricStarGraph, resolution: usize) -> Result<EigenMode> {
    let kind = SecularKind::of(family)?;
    let residual = secular_for(kind, k, graph).abs();
    if !(k.is_finite() && k > 0.0) || residual >= ROOT_ACCEPT_TOL {
        return Err(Error::NotARoot { k, residual });
    }
    if is_degenerate(k, graph) {
        return Err(Error::DegenerateMode { k });
    }
    let norm_const = norm_constant(family, k, graph)?;
    let amplitudes = graph.lengths().iter().map(|&l| norm_const / (k * l).sin()).collect();
    let mut mode = EigenMode {
        k,
        family,
        norm_const,
        graph: graph.clone(),
        amplitudes,
        norm_check: f64::NAN,
    };
    mode.norm_check = l2_inner(&mode, &mode, resolution)?.re;
    Ok(mode)
}

/// Closed-form value of `mode` on `bond` (0-based) at `x ∈ [0, L_bond]`.
pub fn evaluate_mode(mode: &EigenMode, bond: usize, x: f64) -> Result<C64> {
    mode.graph.check_point(bond, x)?;
    Ok(mode.value(bond, x))
}

/// Closed-form x-derivative of `mode`.
pub fn evaluate_mode_deriv(mode: &EigenMode, bond: usize, x: f64) -> Result<C64> {
    mode.graph.check_point(bond, x)?;
    Ok(mode.derivative(bond, x))
}

/// Eigenmodes of one family below `k_max`, plus the degenerate roots that
/// could not be turned into closed-form modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    modes: Vec<EigenMode>,
    degenerate: Vec<f64>,
    family: Family,
    k_max: f64,
    graph: MetricStarGraph,
}

impl SpectralBasis {
    pub fn modes(&self) -> &[EigenMode] {
        &self.modes
    }

    /// Degenerate roots (some `sin kL_j = 0`). Eigenstates living there are
    /// not represented, so a non-empty list means the basis may be incomplete.
    pub fn degenerate(&self) -> &[f64] {
        &self.degenerate
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    pub fn graph(&self) -> &MetricStarGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.k).collect()
    }

    /// The first `count` modes (all of them if fewer exist).
    pub fn truncated(&self, count: usize) -> SpectralBasis {
        let mut out = self.clone();
        out.modes.truncate(count);
        out
    }
}

/// Knobs for [`build_basis_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisOptions {
    /// `None` selects [`default_scan_step`].
    pub scan_step: Option<f64>,
    pub tol: f64,
    pub resolution: usize,
}

impl Default for BasisOptions {
    fn default() -> Self {
        Self {
            scan_step: None,
            tol: DEFAULT_TOL,
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

pub fn build_basis(graph: &MetricStarGraph, family: Family, k_max: f64) -> Result<SpectralBasis> {
    build_basis_with(graph, family, k_max, BasisOptions::default())
}

pub fn build_basis_with(
    graph: &MetricStarGraph,
    family: Family,
    k_max: f64,
    opts: BasisOptions,
) -> Result<SpectralBasis> {
    let kind = SecularKind::of(family)?;
    if !(k_max.is_finite() && k_max > 0.0) {
        return Err(Error::InvalidWindow { k_min: 0.0, k_max });
    }
    let step = opts.scan_step.unwrap_or_else(|| default_scan_step(graph));
    let roots = find_roots_for(kind, graph, 0.0, k_max, step, opts.tol)?;
    let (degenerate, regular): (Vec<RootStub>, Vec<RootStub>) = roots.into_iter().partition(|r| r.degenerate);
    let modes = regular
        .par_iter()
        .map(|r| eigenmode(r.k, family, graph, opts.resolution))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralBasis {
        modes,
        degenerate: degenerate.into_iter().map(|r| r.k).collect(),
        family,
        k_max,
        graph: graph.clone(),
    })
}
