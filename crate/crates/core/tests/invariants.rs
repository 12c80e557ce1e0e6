use mader::augment::{augment_or_maximum, AugmentOptions, Outcome};
use mader::base::{initialize_base, is_feasible_base};
use mader::bounds::upper_bound;
use mader::dependence::compute_dependence;
use mader::field::{select_prime, Field};
use mader::instance::{validate_packing, Instance};
use mader::representation::{rank, Representation, WVector};
use mader::solver::solve;
use proptest::prelude::*;

/// Connected instance with at least two blocks.
fn instance(max_n: usize, max_extra: usize) -> impl Strategy<Value = Instance> {
    (2..=max_n, 0..=max_extra, any::<u64>()).prop_flat_map(|(n, extra, seed)| {
        (2..=n).prop_flat_map(move |k| {
            (2..=k).prop_map(move |b| Instance::random(n, n - 1 + extra, k, b, seed).unwrap())
        })
    })
}

/// Possibly disconnected instance built from raw edges.
fn loose_instance() -> impl Strategy<Value = Instance> {
    (1usize..14).prop_flat_map(|n| {
        (
            proptest::collection::vec((0..n, 0..n), 0..20),
            proptest::collection::vec(0usize..4, n),
        )
            .prop_map(move |(raw, labels)| {
                let edges = raw.into_iter().filter(|(u, v)| u != v).collect();
                let mut blocks = vec![Vec::new(); 3];
                for (v, &l) in labels.iter().enumerate() {
                    if l > 0 {
                        blocks[l - 1].push(v);
                    }
                }
                blocks.retain(|b| !b.is_empty());
                Instance::new(n, edges, blocks).unwrap()
            })
    })
}

fn setup(inst: &Instance) -> (Field, Representation<'_>) {
    let field = Field::new(select_prime(inst.num_blocks()).unwrap()).unwrap();
    (field, Representation::standard(inst, field).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn components_partition_vertices_and_edges(inst in loose_instance()) {
        let comps = inst.connected_components();
        let mut vs: Vec<usize> = comps.iter().flat_map(|c| c.vertex_map.clone()).collect();
        let mut es: Vec<usize> = comps.iter().flat_map(|c| c.edge_map.clone()).collect();
        vs.sort_unstable();
        es.sort_unstable();
        prop_assert_eq!(vs, (0..inst.n()).collect::<Vec<_>>());
        prop_assert_eq!(es, (0..inst.m()).collect::<Vec<_>>());
    }

    #[test]
    fn disconnected_instances_solve_validly(inst in loose_instance()) {
        let r = solve(&inst).unwrap();
        prop_assert!(validate_packing(&inst, &r.packing).is_ok());
        prop_assert!(r.packing_size <= upper_bound(&inst).value);
        let (want, _) = mader::oracle::brute_force_packing(&inst, 14).unwrap();
        prop_assert_eq!(r.packing_size, want);
    }

    #[test]
    fn rank_ignores_order_and_scaling(
        rows in proptest::collection::vec(proptest::collection::vec(0u32..7, 5), 0..7),
        scales in proptest::collection::vec(1u32..7, 7),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let f = Field::new(7).unwrap();
        let mut moved: Vec<WVector> = rows
            .iter()
            .zip(&scales)
            .map(|(r, &s)| r.iter().map(|&x| f.mul(s, x)).collect())
            .collect();
        moved.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(rank(&f, &rows), rank(&f, &moved));
    }

    #[test]
    fn initial_base_is_a_base(inst in instance(14, 12)) {
        let (field, rep) = setup(&inst);
        let base = initialize_base(&inst).unwrap();
        prop_assert!(is_feasible_base(&inst, base.set()));
        prop_assert_eq!(base.covered().len() + 2 * base.edges().len(), rep.dim());
        prop_assert_eq!(rank(&field, &base.vectors(&rep).unwrap()), rep.dim());
    }

    #[test]
    fn solver_loop_invariants(inst in instance(16, 16)) {
        let (field, rep) = setup(&inst);
        let mut base = initialize_base(&inst).unwrap();
        let mut calls = 0;
        loop {
            let d = compute_dependence(&rep, &base).unwrap();
            for (z, &count) in base.components().iter().zip(&d.traversals) {
                prop_assert_eq!(count, 2 - z.covered.len());
            }
            calls += 1;
            let lines = base.edges().len();
            match augment_or_maximum(&rep, &base, &d, &AugmentOptions::default()).unwrap().0 {
                Outcome::NewBase { base: next, .. } => {
                    prop_assert_eq!(next.edges().len(), lines + 1);
                    prop_assert!(is_feasible_base(&inst, next.set()));
                    prop_assert_eq!(rank(&field, &next.vectors(&rep).unwrap()), rep.dim());
                    base = next;
                }
                Outcome::Maximum(_) => break,
            }
        }
        prop_assert!(calls <= inst.k() / 2 + 1);
        let r = solve(&inst).unwrap();
        prop_assert_eq!(r.packing_size, base.packing_size(&inst));
        prop_assert!(r.packing_size <= upper_bound(&inst).value);
    }
}
