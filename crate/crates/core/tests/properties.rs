use evoaut::autgroup::{
    assemble_aut, bruteforce_aut, diag_solutions, monomial_part, twisted_system,
};
use evoaut::snf::{smith_normal_form, IntMatrix};
use evoaut::solver::{enumerate_solutions_bruteforce, solve_inhomogeneous, MonomialSystem};
use evoaut::wgraph::{
    algebra_to_wgraph, enumerate_graph_automorphisms, wgraph_to_algebra, DEFAULT_AUT_CAP,
};
use evoaut::{EvolutionAlgebra, FieldSpec};
use proptest::prelude::*;

fn algebra_from(field: &FieldSpec, n: usize, entries: &[i64]) -> EvolutionAlgebra {
    let columns: Vec<Vec<_>> = (0..n)
        .map(|i| (0..n).map(|j| field.from_i64(entries[i * n + j])).collect())
        .collect();
    EvolutionAlgebra::from_squares(field.clone(), columns).unwrap()
}

fn sparse_entry() -> impl Strategy<Value = i64> {
    prop_oneof![3 => Just(0i64), 2 => -3i64..=3]
}

proptest! {
    #[test]
    fn graph_round_trip_f5(n in 1usize..=5, entries in prop::collection::vec(sparse_entry(), 25)) {
        let field = FieldSpec::prime(5).unwrap();
        let a = algebra_from(&field, n, &entries);
        let g = algebra_to_wgraph(&a);
        prop_assert!(g.satisfies_sing());
        prop_assert_eq!(wgraph_to_algebra(&g, &field).unwrap(), a.clone());
        prop_assert_eq!(algebra_to_wgraph(&wgraph_to_algebra(&g, &field).unwrap()), g);
    }

    #[test]
    fn graph_round_trip_q(n in 1usize..=5, entries in prop::collection::vec(sparse_entry(), 25)) {
        let field = FieldSpec::Rationals;
        let a = algebra_from(&field, n, &entries);
        let g = algebra_to_wgraph(&a);
        prop_assert!(g.satisfies_sing());
        prop_assert_eq!(wgraph_to_algebra(&g, &field).unwrap(), a);
    }

    #[test]
    fn smith_form_is_valid(rows in 0usize..5, cols in 0usize..5, entries in prop::collection::vec(-6i64..=6, 25)) {
        let data: Vec<Vec<i64>> = (0..rows).map(|r| (0..cols).map(|c| entries[r * 5 + c]).collect()).collect();
        let m = IntMatrix::from_i64(cols, &data);
        let snf = smith_normal_form(&m);
        prop_assert!(snf.verify(&m));
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]) == 0u32.into());
        }
    }

    #[test]
    fn solver_matches_bruteforce(
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
        n in 1usize..=3,
        rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), 1i64..13), 0..4),
    ) {
        let field = FieldSpec::prime(p).unwrap();
        let mut system = MonomialSystem::new(field.clone(), n);
        for (exps, rhs) in &rows {
            system.push(exps[..n].to_vec(), field.from_i64(1 + rhs % (p as i64 - 1))).unwrap();
        }
        let coset = solve_inhomogeneous(&system);
        prop_assert_eq!(coset.elements().unwrap(), enumerate_solutions_bruteforce(&system).unwrap());
    }

    #[test]
    fn monomial_automorphisms_match_oracle(n in 1usize..=3, entries in prop::collection::vec(sparse_entry(), 9)) {
        let field = FieldSpec::prime(5).unwrap();
        let a = algebra_from(&field, n, &entries);
        let graph = algebra_to_wgraph(&a);
        for sigma in enumerate_graph_automorphisms(&graph, DEFAULT_AUT_CAP).unwrap() {
            let system = twisted_system(&a, &sigma).unwrap();
            prop_assert_eq!(
                solve_inhomogeneous(&system).elements().unwrap(),
                enumerate_solutions_bruteforce(&system).unwrap()
            );
        }
        let aut = assemble_aut(&a, DEFAULT_AUT_CAP).unwrap();
        let mine: std::collections::BTreeSet<_> = aut.elements().unwrap().into_iter().collect();
        if let Ok(all) = bruteforce_aut(&a) {
            prop_assert_eq!(monomial_part(&all), mine.clone());
        }
        prop_assert_eq!(diag_solutions(&a).elements().unwrap().len() * aut.lifts.len(), mine.len());
    }
}
