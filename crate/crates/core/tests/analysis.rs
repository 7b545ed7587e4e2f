use jumpga_core::analysis::{
    crossover_decrease_lower_bound, crossover_increase_leading_term, exact_optimum_probability,
    mutation_transition_bounds, optimum_construction_bound, runtime_constant, survival_constant,
};
use jumpga_core::experiments::{estimate_transition, plateau_pair, PopulationSpec};
use jumpga_core::{make_rng, EventClass, GaParams};

#[test]
fn exact_probability_beats_the_construction_route_at_every_distance() {
    for (n, k) in [(30, 3), (60, 4), (100, 5)] {
        for d in 0..=k {
            let (a, b) = plateau_pair(n, k, d, &mut make_rng(1, d as u64)).unwrap();
            let p_m = 1.0 / n as f64;
            let exact = exact_optimum_probability(&a, &b, p_m).unwrap();
            let route = optimum_construction_bound(n, k, d, p_m).unwrap();
            assert!(route <= exact, "n={n} k={k} d={d}");
            if d == 0 {
                assert_eq!(route, exact);
            }
        }
    }
}

#[test]
fn constants_coincide_at_three_quarters() {
    for chi in [0.5, 1.0, 2.5] {
        for p_c in [0.2, 1.0] {
            assert_eq!(
                survival_constant(0.75, chi, p_c).unwrap(),
                runtime_constant(chi, p_c)
            );
        }
    }
}

#[test]
fn shrinking_dominates_growing_under_close_crossover() {
    for mu in [4usize, 10, 30] {
        for y in mu.div_ceil(2)..mu {
            let down = crossover_decrease_lower_bound(y, mu, 1.0, 100).unwrap();
            let up = crossover_increase_leading_term(y, mu, 1.0, 100)
                .unwrap()
                .leading;
            assert!(down > up, "mu={mu} y={y}");
            let m = mutation_transition_bounds(y, mu, 1.0, 100).unwrap();
            assert_eq!(m.p_plus_leading, m.p_minus_lower);
        }
    }
}

#[test]
fn conditioned_estimate_respects_the_mutation_bound() {
    let params = GaParams::new(60, 3, 8, 0.5, 1.0, 44).unwrap();
    let spec = PopulationSpec::TwoSpecies {
        y: 6,
        half_distance: 1,
    };
    let e = estimate_transition(&params, &spec, EventClass::B, 60_000, 0).unwrap();
    let m = mutation_transition_bounds(6, 8, 1.0, 60).unwrap();
    assert!(e.accepted > 10_000);
    assert!(e.p_minus_hat >= m.p_minus_lower - 3.0 * e.stderr_minus);
}
