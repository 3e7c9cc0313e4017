mod common;

use std::sync::Arc;

use common::{graph, random_trig, secular_oracle};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use ptgraph::boundary::{
    bc_matrices, bc_residual, cpt_inner_at, omega_direct, omega_hermitian, omega_pt, trace_vectors, BondFunction,
    ClosureFunction, Family, SkewProduct,
};
use ptgraph::cli::fmt_num;
use ptgraph::dynamics::{bond_current_complex, current_series, project, uniform_times, vertex_current, WaveState};
use ptgraph::graph::MetricStarGraph;
use ptgraph::spectral::{build_basis, build_basis_with, BasisOptions, SpectralBasis, DEDUP_TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lengths_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.5f64..2.5, 2..=4)
}

fn c64_strategy() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn coarse_basis(g: &MetricStarGraph, family: Family, k_max: f64) -> SpectralBasis {
    let opts = BasisOptions {
        resolution: 401,
        ..BasisOptions::default()
    };
    build_basis_with(g, family, k_max, opts).unwrap()
}

fn combination<'a>(
    basis: &'a SpectralBasis,
    coeffs: &'a [C64],
) -> ClosureFunction<impl Fn(usize, f64) -> C64 + Sync + 'a, impl Fn(usize, f64) -> C64 + Sync + 'a> {
    let modes = basis.modes();
    ClosureFunction::new(
        basis.graph(),
        move |b, x| coeffs.iter().zip(modes).map(|(c, m)| c * m.value(b, x)).sum(),
        move |b, x| coeffs.iter().zip(modes).map(|(c, m)| c * m.derivative(b, x)).sum(),
    )
}

fn simpson_weights(count: usize, h: f64) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let w = if i == 0 || i == count - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boundary_skew_forms_match_volume_integrals(seed in any::<u64>(), lengths in lengths_strategy()) {
        let g = graph(&lengths);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_trig(&mut rng, &g, 3);
        let h = random_trig(&mut rng, &g, 3);
        let herm = omega_hermitian(&f, &h).unwrap();
        let herm_direct = omega_direct(&f, &h, SkewProduct::Hermitian, 2001).unwrap();
        prop_assert!((herm - herm_direct).norm() < 1e-6, "{herm} vs {herm_direct}");
        let pt = omega_pt(&f, &h).unwrap();
        let pt_direct = omega_direct(&f, &h, SkewProduct::Pt, 2001).unwrap();
        prop_assert!((pt.value() - pt_direct).norm() < 1e-6, "{} vs {pt_direct}", pt.value());
        prop_assert!(pt.discrepancy() < 1e-12);
    }

    #[test]
    fn kirchhoff_consistent_functions_annihilate_hermitian_form(
        lengths in lengths_strategy(),
        a in prop::collection::vec(c64_strategy(), 4),
        b in prop::collection::vec(c64_strategy(), 4),
    ) {
        let g = graph(&lengths);
        let basis = coarse_basis(&g, Family::KirchhoffRef, 20.0);
        prop_assume!(basis.len() >= 4);
        let basis = basis.truncated(4);
        let bc = bc_matrices(Family::KirchhoffRef, &g).unwrap();
        let f = combination(&basis, &a);
        let h = combination(&basis, &b);
        prop_assert!(bc_residual(&bc, &trace_vectors(&f).unwrap()).unwrap() < 1e-12);
        prop_assert!(bc_residual(&bc, &trace_vectors(&h).unwrap()).unwrap() < 1e-12);
        prop_assert!(omega_hermitian(&f, &h).unwrap().norm() < 1e-9);
    }

    #[test]
    fn pt_modes_annihilate_pt_form(lengths in lengths_strategy()) {
        let g = graph(&lengths);
        for family in [Family::PtDirichlet, Family::PtNeumann] {
            let basis = coarse_basis(&g, family, 12.0);
            let modes = &basis.modes()[..basis.len().min(5)];
            for f in modes {
                for h in modes {
                    prop_assert!(omega_pt(f, h).unwrap().value().norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn roots_are_shared_sorted_and_complete(lengths in lengths_strategy()) {
        let g = graph(&lengths);
        let d = coarse_basis(&g, Family::PtDirichlet, 15.0);
        let n = coarse_basis(&g, Family::PtNeumann, 15.0);
        prop_assert_eq!(d.len(), n.len());
        for (a, b) in d.wavenumbers().iter().zip(n.wavenumbers()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        let mut all: Vec<f64> = d.wavenumbers();
        all.extend_from_slice(d.degenerate());
        all.sort_by(f64::total_cmp);
        for w in all.windows(2) {
            prop_assert!(w[1] - w[0] > DEDUP_TOL);
        }
        for &k in &all {
            prop_assert!(secular_oracle(k, &lengths).abs() < 1e-10);
        }
        // no sign change of the secular function strictly between consecutive roots
        let mut edges = vec![1e-3];
        edges.extend(all.iter().copied());
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let samples: Vec<f64> = (1..200).map(|i| secular_oracle(lo + (hi - lo) * i as f64 / 200.0, &lengths)).collect();
            let inner: Vec<f64> = samples[2..samples.len() - 2].to_vec();
            prop_assert!(inner.iter().all(|s| s.signum() == inner[0].signum()), "missed root in ({lo}, {hi})");
        }
    }

    #[test]
    fn modes_solve_the_ode(lengths in lengths_strategy(), seed in any::<u64>()) {
        use rand::Rng;
        let g = graph(&lengths);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for family in Family::BUILT_IN {
            let basis = coarse_basis(&g, family, 10.0);
            for m in basis.modes() {
                let k2 = m.k() * m.k();
                for _ in 0..10 {
                    let bond = rng.gen_range(0..g.n_bonds());
                    let l = g.lengths()[bond];
                    let h = 1e-3;
                    let x = rng.gen_range(3.0 * h..l - 3.0 * h);
                    let v = |x: f64| m.value(bond, x);
                    let d2 = (-v(x + 2.0 * h) + 16.0 * v(x + h) - 30.0 * v(x) + 16.0 * v(x - h) - v(x - 2.0 * h)) / (12.0 * h * h);
                    prop_assert!((-d2 - k2 * v(x)).norm() < 1e-5);
                }
            }
        }
    }

    #[test]
    fn currents_scale_quadratically_and_stay_real(
        lengths in lengths_strategy(),
        coeffs in prop::collection::vec(c64_strategy(), 3),
        alpha in c64_strategy(),
        t in 0.0f64..2.0,
    ) {
        let g = graph(&lengths);
        let basis = coarse_basis(&g, Family::PtDirichlet, 20.0);
        prop_assume!(basis.len() >= 3);
        let basis = Arc::new(basis.truncated(3));
        let state = WaveState::new(basis, coeffs).unwrap().evolve(t);
        let base = vertex_current(&state);
        let sum: f64 = base.per_bond.iter().sum();
        prop_assert_eq!(base.total, sum);
        for a in [C64::new(2.0, 0.0), C64::new(0.0, 1.0), alpha] {
            let scaled = vertex_current(&state.scaled(a));
            let expected = a.norm_sqr() * base.total;
            prop_assert!((scaled.total - expected).abs() < 1e-12 * (1.0 + expected.abs()));
        }
        for j in 0..g.n_bonds() {
            for x in [0.0, 0.5 * g.lengths()[j], g.lengths()[j]] {
                prop_assert!(bond_current_complex(&state, j, x).unwrap().im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kirchhoff_basis_conserves_vertex_current(
        lengths in lengths_strategy(),
        coeffs in prop::collection::vec(c64_strategy(), 4),
    ) {
        let g = graph(&lengths);
        let basis = coarse_basis(&g, Family::KirchhoffRef, 20.0);
        prop_assume!(basis.len() >= 4);
        let basis = Arc::new(basis.truncated(4));
        let state = WaveState::new(basis, coeffs).unwrap();
        let series = current_series(&state, &uniform_times(1.0, 50)).unwrap();
        prop_assert!(series.max_abs_total() < 1e-10);
    }

    #[test]
    fn projection_reconstructs_in_span_states(
        lengths in lengths_strategy(),
        coeffs in prop::collection::vec(c64_strategy(), 5),
    ) {
        let g = graph(&lengths);
        for family in [Family::PtDirichlet, Family::PtNeumann] {
            let basis = Arc::new(build_basis(&g, family, 20.0).unwrap());
            prop_assume!(basis.len() >= 5);
            let sub = basis.truncated(5);
            let target = combination(&sub, &coeffs);
            let p = project(&target, basis.clone(), 1001).unwrap();
            prop_assert!(p.residual < 1e-6, "residual {}", p.residual);
            for (n, c) in p.state.coeffs().iter().enumerate() {
                let expected = coeffs.get(n).copied().unwrap_or_default();
                prop_assert!((c - expected).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn cpt_matches_direct_double_integral(seed in any::<u64>(), lengths in lengths_strategy(), truncation in 1usize..6) {
        let g = graph(&lengths);
        let basis = coarse_basis(&g, Family::PtDirichlet, 15.0);
        prop_assume!(basis.len() >= truncation);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_trig(&mut rng, &g, 2);
        let h = random_trig(&mut rng, &g, 2);
        let res = 101;
        let fast = cpt_inner_at(&f, &h, &basis, truncation, res).unwrap();
        let modes = &basis.modes()[..truncation];
        let mut direct = C64::new(0.0, 0.0);
        for (j, &l) in lengths.iter().enumerate() {
            let step = l / (res - 1) as f64;
            let w = simpson_weights(res, step);
            let pts: Vec<f64> = (0..res).map(|i| i as f64 * step).collect();
            for (ix, &x) in pts.iter().enumerate() {
                let mut cptf = C64::new(0.0, 0.0);
                for (iy, &y) in pts.iter().enumerate() {
                    let kernel: C64 = modes.iter().map(|m| m.value(j, x) * m.value(j, y)).sum();
                    cptf += w[iy] * kernel * f.value(j, l - y).conj();
                }
                direct += w[ix] * cptf * h.value(j, x);
            }
        }
        prop_assert_eq!(fast.truncation, truncation);
        prop_assert!((fast.value - direct).norm() < 1e-10 * (1.0 + direct.norm()));
    }

    #[test]
    fn formatted_numbers_round_trip(x in prop::num::f64::NORMAL, digits in 1usize..=17) {
        let s = fmt_num(x, digits);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= x.abs() * 10f64.powi(1 - digits as i32));
        prop_assert!(!s.contains('E'));
    }

    #[test]
    fn graph_construction_keeps_lengths_bit_identical(lengths in prop::collection::vec(1e-6f64..1e6, 2..8)) {
        let g = graph(&lengths);
        prop_assert_eq!(g.lengths(), &lengths[..]);
    }
}

#[test]
fn cpt_self_product_positive_for_dirichlet_modes() {
    let g = graph(&common::L3);
    let basis = build_basis(&g, Family::PtDirichlet, 40.0).unwrap();
    for (n, m) in basis.modes()[..6].iter().enumerate() {
        for truncation in n + 1..=basis.len() {
            let v = cpt_inner_at(m, m, &basis, truncation, 2001).unwrap().value;
            assert!(v.re > 0.0 && v.im.abs() < 1e-12, "mode {n}, truncation {truncation}: {v}");
        }
    }
}
