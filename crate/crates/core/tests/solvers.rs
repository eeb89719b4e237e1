use bipareto::dp::{solve_exact_with, SolveOptions};
use bipareto::fptas::{coverage_check, grid_params, solve_fptas_with, verify_layer_bounds, Epsilon};
use bipareto::model::{dominates, Instance};
use bipareto::oracle;
use num_traits::One;
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = Instance> {
    prop::collection::vec((1i64..=20, 0i64..=20), 1..=10)
        .prop_map(|raw| Instance::normalize(&raw).unwrap())
}

fn retained() -> SolveOptions {
    SolveOptions::default().retaining_layers()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_front_matches_oracle(inst in instance()) {
        let sol = solve_exact_with(&inst, &SolveOptions::default()).unwrap();
        let brute = oracle::enumerate(&inst, 20).unwrap();
        prop_assert_eq!(sol.front, brute);
    }

    #[test]
    fn exact_layers_respect_bounds(inst in instance()) {
        let sol = solve_exact_with(&inst, &retained()).unwrap();
        let layers = sol.layers.unwrap();
        prop_assert_eq!(layers.len(), inst.n());
        for (i, layer) in layers.iter().enumerate() {
            let prefix = inst.prefix()[i + 1];
            let half = (prefix + 1) / 2;
            prop_assert!(layer.states.len() as i64 <= 2 * (prefix - half + 1));
            let mut keys: Vec<(u8, i64)> = layer.states.iter().map(|s| (s.k, s.cmax)).collect();
            keys.sort_unstable();
            keys.dedup();
            prop_assert_eq!(keys.len(), layer.states.len());
            for s in &layer.states {
                prop_assert!(half <= s.cmax && s.cmax <= prefix);
                if i > 0 {
                    let parent = layers[i - 1].get(s.parent.unwrap()).unwrap();
                    prop_assert!(parent.lmax <= s.lmax);
                } else {
                    prop_assert!(s.parent.is_none());
                }
            }
        }
    }

    #[test]
    fn schedules_realize_front_points(inst in instance(), num in 1u64..=20) {
        let eps = Epsilon::new(num, 10).unwrap();
        let exact = solve_exact_with(&inst, &SolveOptions::default()).unwrap();
        let approx = solve_fptas_with(&inst, eps, &SolveOptions::default()).unwrap();
        for sol in [&exact, &approx] {
            prop_assert_eq!(sol.schedules.len(), sol.front.len());
            for (pt, s) in sol.front.iter().zip(&sol.schedules) {
                prop_assert_eq!(s.evaluate(&inst), *pt);
                prop_assert_eq!(s.point, *pt);
                // job 1 of the sorted order sits on machine 1
                let first = inst.jobs()[0].id;
                prop_assert_eq!(s.assignment[first - 1], bipareto::Machine::First);
            }
        }
    }

    #[test]
    fn approximate_front_covers_exact(inst in instance(), num in 1u64..=30, den in 1u64..=10) {
        let eps = Epsilon::new(num, den).unwrap();
        let exact = solve_exact_with(&inst, &retained()).unwrap();
        let approx = solve_fptas_with(&inst, eps, &retained()).unwrap();
        prop_assert!(coverage_check(&exact.front, &approx.front, eps));
        let grid = grid_params(&inst, eps);
        prop_assert!(verify_layer_bounds(
            &exact.layer_points().unwrap(),
            &approx.layer_points().unwrap(),
            &grid
        ));
        // approximate points are feasible, so none strictly beats the exact front
        for a in approx.front.iter() {
            prop_assert!(!exact.front.iter().any(|e| dominates(*a, *e)));
        }
    }

    #[test]
    fn sub_unit_boxes_reproduce_exact(inst in instance()) {
        // δ1, δ2 < 1 whenever ε < n / (P + q_max)
        let bound = (inst.total_processing() + inst.q_max()) as u64;
        let eps = Epsilon::new(inst.n() as u64, bound + 1).unwrap();
        let grid = grid_params(&inst, eps);
        prop_assert!(grid.delta1 < num_rational::Ratio::one());
        prop_assert!(grid.delta2 < num_rational::Ratio::one());
        let exact = solve_exact_with(&inst, &SolveOptions::default()).unwrap();
        let approx = solve_fptas_with(&inst, eps, &SolveOptions::default()).unwrap();
        prop_assert_eq!(exact.front, approx.front);
    }

    #[test]
    fn grid_bounds_hold_against_optima(inst in instance()) {
        let exact = solve_exact_with(&inst, &SolveOptions::default()).unwrap();
        let c_star = exact.front.min_cmax().unwrap().cmax;
        let l_star = exact.front.min_lmax().unwrap().lmax;
        let grid = grid_params(&inst, Epsilon::new(3, 10).unwrap());
        prop_assert!(grid.cmax_bound <= 2 * c_star);
        prop_assert!(grid.lmax_bound <= 3 * l_star);
    }
}

#[test]
fn solves_are_deterministic() {
    let raw: Vec<(i64, i64)> = (0..40).map(|i| ((i * 37) % 97 + 1, (i * 53) % 89)).collect();
    let inst = Instance::normalize(&raw).unwrap();
    let eps = Epsilon::new(3, 10).unwrap();
    let a = solve_fptas_with(&inst, eps, &SolveOptions::default()).unwrap();
    let b = solve_fptas_with(&inst, eps, &SolveOptions::default()).unwrap();
    assert_eq!(a.front, b.front);
    assert_eq!(a.schedules, b.schedules);
    let a = solve_exact_with(&inst, &SolveOptions::default()).unwrap();
    let b = solve_exact_with(&inst, &SolveOptions::default()).unwrap();
    assert_eq!(a.schedules, b.schedules);
}

#[test]
fn concurrent_solves_agree() {
    let insts: Vec<Instance> = (0..8)
        .map(|s| {
            let raw: Vec<(i64, i64)> = (0..12).map(|i| ((i * 7 + s) % 19 + 1, (i * 11 + s) % 23)).collect();
            Instance::normalize(&raw).unwrap()
        })
        .collect();
    let serial: Vec<_> = insts
        .iter()
        .map(|i| solve_exact_with(i, &SolveOptions::default()).unwrap().front)
        .collect();
    let threaded: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = insts
            .iter()
            .map(|i| scope.spawn(move || solve_exact_with(i, &SolveOptions::default()).unwrap().front))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(serial, threaded);
}
