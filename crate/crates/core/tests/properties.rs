mod common;

use kerov::approximation::inner_partition;
use kerov::experiments::{theorem_sweep, Hypotheses, SweepConfig, SweepRow};
use kerov::metric::{common_cap, distance_components, project_x, project_y};
use kerov::shift::{
    corner_window, kerov_centered_rhs, lower_bound_cdf, magic_product, minmax_value, p_min,
    upper_bound_cdf,
};
use kerov::{
    cauchy_transform, cdf_continual, distance, hausdorff, partitions_of, shifted_diagram,
    stieltjes_density, transition_measure, triangle_diagram, AffineLine, ArcsineLaw, Partition,
    Rat, Scalar,
};
use num_complex::Complex;
use num_traits::Signed;
use proptest::prelude::*;

use common::{r, zigzag_from_gaps};

fn partition_up_to(n: usize) -> impl Strategy<Value = Partition> {
    let all: Vec<Partition> = (0..=n).flat_map(partitions_of).collect();
    proptest::sample::select(all)
}

fn gaps() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(1i64..=12, 0..=10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profiles_are_one_lipschitz(g in gaps(), e in 1i64..=8, b in 1i64..=30, u1 in -200i64..=200, u2 in -200i64..=200) {
        let omega = zigzag_from_gaps(&g, 4).to_piecewise();
        let shifted = shifted_diagram(&omega, &r(e, 4), &AffineLine::new(r(b, 2)).unwrap()).unwrap().shifted;
        let (a, c) = (r(u1, 8), r(u2, 8));
        for d in [&omega, &shifted] {
            prop_assert!((d.evaluate(&a) - d.evaluate(&c)).abs() <= (a.clone() - c.clone()).abs());
        }
    }

    #[test]
    fn cauchy_transform_is_sum_of_residues(p in partition_up_to(10), re in -30i64..=30, im in 1i64..=30) {
        let zig = p.zigzag::<Rat>();
        let z = Complex::new(r(re, 3), r(im, 7));
        let sum = transition_measure(&zig).atoms().iter().fold(
            Complex::new(r(0, 1), r(0, 1)),
            |acc, (x, w)| acc + Complex::new(w.clone(), r(0, 1)) / (z.clone() - Complex::new(x.clone(), r(0, 1))),
        );
        prop_assert_eq!(cauchy_transform(&zig, &z).unwrap(), sum);
    }

    #[test]
    fn adding_a_box_rescales_far_atoms(p in partition_up_to(8)) {
        let before = transition_measure(&p.zigzag::<Rat>());
        for j in p.addable_rows() {
            let xi = r(p.addable_content(j), 1);
            let after = transition_measure(&p.with_box_added(j).unwrap().zigzag::<Rat>());
            for (z, w) in before.atoms() {
                let d = z.clone() - xi.clone();
                if d.clone().abs() <= r(1, 1) {
                    continue;
                }
                let factor = r(1, 1) + r(1, 1) / (d.clone() * d - r(1, 1));
                let new = after.atoms().iter().find(|(x, _)| x == z).map(|(_, w)| w.clone());
                prop_assert_eq!(new, Some(w.clone() * factor));
            }
        }
    }

    #[test]
    fn first_moment_vanishes(p in partition_up_to(12)) {
        prop_assert_eq!(transition_measure(&p.zigzag::<Rat>()).mean(), r(0, 1));
    }

    #[test]
    fn metric_is_a_pseudometric(a in partition_up_to(8), b in partition_up_to(8), c in partition_up_to(8)) {
        let (pa, pb, pc) = (a.profile::<f64>(), b.profile::<f64>(), c.profile::<f64>());
        let ab = distance(&pa, &pb);
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(distance(&pa, &pa), 0.0);
        prop_assert!((ab - distance(&pb, &pa)).abs() < 1e-9);
        prop_assert!(ab <= distance(&pa, &pc) + distance(&pc, &pb) + 1e-9);
        let exact = distance(&a.profile::<Rat>(), &b.profile::<Rat>());
        prop_assert!((exact.to_f64() - ab).abs() < 1e-9);
    }

    #[test]
    fn transposition_swaps_components(a in partition_up_to(8), b in partition_up_to(8)) {
        let (pa, pb) = (a.profile::<Rat>(), b.profile::<Rat>());
        let (dx, dy) = distance_components(&pa, &pb);
        let (tx, ty) = distance_components(&pa.transpose(), &pb.transpose());
        prop_assert_eq!((dx, dy), (ty, tx));
        prop_assert_eq!(pa.transpose(), a.conjugate().profile::<Rat>());
        prop_assert_eq!(pa.transpose().transpose(), pa);
    }

    #[test]
    fn distance_gives_red_and_blue_envelopes(g in gaps(), h in gaps(), k in -400i64..=400) {
        let a = zigzag_from_gaps(&g, 2).to_piecewise();
        let b = zigzag_from_gaps(&h, 3).to_piecewise();
        let eps = distance(&a, &b);
        let z = r(k, 16);
        let base = a.evaluate(&(z.clone() - eps.clone()));
        let v = b.evaluate(&z);
        prop_assert!(v <= base.clone() + eps.clone());
        prop_assert!(v >= base - eps);
    }

    #[test]
    fn critical_points_carry_the_supremum(g in gaps(), h in gaps(), extra in proptest::collection::vec(0i64..=4000, 20)) {
        let a = zigzag_from_gaps(&g, 2).to_f64().to_piecewise();
        let b = zigzag_from_gaps(&h, 3).to_f64().to_piecewise();
        let (dx, dy) = distance_components(&a, &b);
        let cap = common_cap(&a, &b);
        for t in extra {
            let s = t as f64 / 4000.0 * cap;
            prop_assert!(hausdorff(&project_y(&a, &s, &cap), &project_y(&b, &s, &cap)) <= dy + 1e-9);
            prop_assert!(hausdorff(&project_x(&a, &s, &cap), &project_x(&b, &s, &cap)) <= dx + 1e-9);
        }
    }

    #[test]
    fn inner_partition_is_inner_maximal_and_monotone(g in gaps(), n in 1usize..=6) {
        let d = zigzag_from_gaps(&g, 3).to_piecewise();
        let p = inner_partition(&d, n);
        let profile = p.scaled_profile::<Rat>(n);
        let finer = inner_partition(&d, 2 * n).scaled_profile::<Rat>(2 * n);
        for k in -100..=100 {
            let u = r(k, 8);
            prop_assert!(profile.evaluate(&u) <= d.evaluate(&u));
            prop_assert!(profile.evaluate(&u) <= finer.evaluate(&u));
        }
        // no addable box fits under d: its top vertex sticks out
        for j in p.addable_rows() {
            let i = p.rows()[j..].first().copied().unwrap_or(0) as i64;
            let (col, row) = (i + 1, j as i64 + 1);
            let top = (r(col - row, n as i64), r(col + row, n as i64));
            prop_assert!(top.1 > d.evaluate(&top.0));
        }
    }

    #[test]
    fn flat_stretches_carry_no_mass(g in proptest::collection::vec(4i64..=10, 2..=6), s in 1i64..=3, t in 1i64..=3) {
        // every segment of a zigzag has slope ±1; pick two points strictly
        // inside the first one
        let zig = zigzag_from_gaps(&g, 1).to_f64();
        let (x0, y1) = (zig.concave()[0], zig.convex()[0]);
        let width = y1 - x0;
        let t1 = x0 + width * s as f64 / 8.0;
        let t2 = x0 + width * (4 + t) as f64 / 8.0;
        let d = zig.to_piecewise();
        let a = cdf_continual(&d, &t1, 64).unwrap();
        let b = cdf_continual(&d, &t2, 64).unwrap();
        prop_assert!(b.value - a.value <= a.error_bound + b.error_bound + 1e-12);
    }

    #[test]
    fn shift_relations_hold(g in gaps(), e in prop::sample::select(vec![(1i64, 2i64), (1, 1), (2, 1)]), b in 1i64..=40, k in -40i64..=40) {
        let zig = zigzag_from_gaps(&g, 1);
        let omega = zig.to_piecewise();
        let eps = r(e.0, e.1);
        let line = AffineLine::new(r(b, 2)).unwrap();
        let rep = shifted_diagram(&omega, &eps, &line).unwrap();
        let z = r(k, 4);
        prop_assert!(rep.z_minus <= rep.z_plus);
        prop_assert_eq!(rep.shifted.evaluate(&z), minmax_value(&omega, &eps, &line, &z));
        let window = corner_window(&zig, &eps, &rep.z_minus, &rep.z_plus);
        prop_assert_eq!(rep.z_plus.clone() - rep.z_minus.clone(), kerov_centered_rhs(&zig, &eps, window));

        let w = Complex::new(z.clone(), r(1, 3));
        let shifted = rep.shifted_zigzag().unwrap();
        let lhs = cauchy_transform(&shifted, &w).unwrap();
        let rhs = cauchy_transform(&zig, &(w.clone() - Complex::new(eps.clone(), r(0, 1)))).unwrap()
            * magic_product(&zig, &rep, &w);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_dominates_p_min(g in gaps(), e in 1i64..=8, b in 1i64..=40) {
        let zig = zigzag_from_gaps(&g, 2);
        let eps = r(e, 4);
        let rep = shifted_diagram(&zig.to_piecewise(), &eps, &AffineLine::new(r(b, 2)).unwrap()).unwrap();
        for k in 0..=160 {
            let x = rep.z_plus.clone() + r(k, 16);
            if zig.convex().iter().any(|y| y.clone() + eps.clone() == x) {
                continue;
            }
            let p = magic_product(&zig, &rep, &Complex::new(x.clone(), r(0, 1)));
            prop_assert!(p.re >= p_min(&rep.z_plus, &eps, &x));
        }
    }

    #[test]
    fn bounds_sandwich_the_reference(a in partition_up_to(8), k in -20i64..=20, e in 1i64..=10) {
        let omega = a.profile::<Rat>();
        let mu = transition_measure(&a.zigzag::<Rat>());
        let z0 = r(k, 4);
        let eps = r(e, 10);
        if let Ok(up) = upper_bound_cdf(&omega, &z0, &eps, 0) {
            prop_assert!(mu.cdf_left_limit(&z0) <= up.bound_value);
            prop_assert!(up.bound_value <= r(1, 1));
        }
        if let Ok(lo) = lower_bound_cdf(&omega, &z0, &eps, 0) {
            prop_assert!(lo.bound_value <= mu.cdf(&z0));
            prop_assert!(lo.bound_value >= r(0, 1));
        }
    }
}

#[test]
fn smoothed_density_has_unit_mass() {
    let zig = zigzag_from_gaps(&[3, 1, 4, 2, 2, 5], 2).to_f64();
    for d in [triangle_diagram(), zig.to_piecewise()] {
        let c = d.support_bound() + 1.0;
        let steps = 200_000;
        let h = 2.0 * c / steps as f64;
        let f = |x: f64| stieltjes_density(&d, x, 1e-3).unwrap();
        let mass =
            (1..steps).map(|k| f(-c + k as f64 * h)).sum::<f64>() * h + (f(-c) + f(c)) * h / 2.0;
        assert!((mass - 1.0).abs() < 1e-3, "{mass}");
    }
}

#[test]
fn triangle_excess_fits_envelope() {
    let config = SweepConfig {
        epsilons: vec![0.1, 0.05, 0.025],
        samples: 8,
        walk_steps: 20,
        z0_grid: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
        seed: 2,
        resolution: None,
        slack: 1e-12,
        hypotheses: Some(Hypotheses::triangle()),
        n_max: 0,
    };
    let rows = theorem_sweep(&triangle_diagram(), Some(&ArcsineLaw), &config).unwrap();
    assert_eq!(rows.iter().map(SweepRow::violations).sum::<usize>(), 0);
    for row in &rows {
        let ratio = row.envelope_ratio.unwrap();
        assert!(ratio > 0.0 && ratio < 1.0, "{row:?}");
        let (terms, caps) = (row.terms.unwrap(), row.caps.unwrap());
        for (t, c) in terms.iter().zip(caps) {
            assert!(*t <= c + 1e-12, "{row:?}");
        }
    }
}
