//! Oracles shared by the integration tests. Nothing here calls the solver.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use ptgraph::boundary::{BondProfile, GraphFunction, Term};
use ptgraph::graph::MetricStarGraph;
use rand::Rng;

pub const L3: [f64; 3] = [1.0, 1.5, 2.0];

/// First secular root on `L3`, fixed by a 50-digit bracketing search.
pub const K1_GOLDEN: f64 = 1.7411224215;

pub fn graph(lengths: &[f64]) -> MetricStarGraph {
    MetricStarGraph::new(lengths).expect("valid lengths")
}

/// `Σ_j Π_{i≠j} sin(k L_i)`, written out directly.
pub fn secular_oracle(k: f64, lengths: &[f64]) -> f64 {
    (0..lengths.len())
        .map(|j| {
            lengths
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, l)| (k * l).sin())
                .product::<f64>()
        })
        .sum()
}

/// Root count on `(0, k_max]` from a uniform scan: sign changes plus
/// touch-zero minima of `|s|` that are not next to a sign change.
pub fn dense_scan_count(lengths: &[f64], k_max: f64, step: f64, touch_tol: f64) -> usize {
    let n = (k_max / step).round() as usize;
    let s: Vec<f64> = (1..=n).map(|i| secular_oracle(i as f64 * step, lengths)).collect();
    let crossing: Vec<bool> = s.windows(2).map(|w| w[0] * w[1] < 0.0 || w[1] == 0.0).collect();
    let mut count = crossing.iter().filter(|&&c| c).count();
    for i in 1..s.len() - 1 {
        let local_min = s[i].abs() <= s[i - 1].abs() && s[i].abs() <= s[i + 1].abs();
        if local_min && s[i].abs() < touch_tol && !crossing[i - 1] && !crossing[i] {
            count += 1;
        }
    }
    count
}

fn random_c64<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random complex trigonometric polynomial on every bond.
pub fn random_trig<R: Rng>(rng: &mut R, graph: &MetricStarGraph, terms: usize) -> GraphFunction {
    let bonds = (0..graph.n_bonds())
        .map(|_| {
            let mut t: Vec<Term> = (0..terms)
                .map(|_| {
                    let amp = random_c64(rng);
                    let freq = rng.gen_range(0.3..6.0);
                    if rng.gen_bool(0.5) {
                        Term::sin(amp, freq)
                    } else {
                        Term::cos(amp, freq)
                    }
                })
                .collect();
            t.push(Term::constant(random_c64(rng)));
            BondProfile::new(t)
        })
        .collect();
    GraphFunction::from_bonds(graph, bonds)
}
