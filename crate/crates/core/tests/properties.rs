mod common;

use codar_core::commute::{cf_front, commutes, no_predecessor_front, CommutationTable};
use codar_core::mapping::Mapping;
use codar_core::qam::{all_pairs_distances, CouplingGraph};
use codar_core::qasm::{emit_program, parse_program};
use codar_core::router::{route, route_with_policy, InitialMappingPolicy, RouterConfig};
use codar_core::verify::{dependency_equivalence, statevector_oracle};
use common::strategies::*;
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn distances_match_floyd_warshall((n, edges) in connected_graph(2, 30)) {
        let g = CouplingGraph::new(n, edges.clone()).unwrap();
        let d = all_pairs_distances(&g).unwrap();
        let fw = floyd_warshall(n, &edges);
        for (i, row) in fw.iter().enumerate() {
            for (j, &want) in row.iter().enumerate() {
                prop_assert_eq!(u64::from(d.get(i, j)), want);
                prop_assert_eq!(d.get(i, j), d.get(j, i));
                prop_assert_eq!(d.get(i, j) == 1, g.has_edge(i, j));
            }
        }
    }

    #[test]
    fn cf_front_matches_matrix_oracle(c in circuit_on(&TABLE_EXACT_KINDS, 2..=4, 0..=8)) {
        let table = CommutationTable::baseline();
        let front = cf_front(&table, &c.gates);
        prop_assert_eq!(&front, &brute_force_cf(&c.gates, c.num_qubits));
        let plain = no_predecessor_front(&c.gates);
        prop_assert!(plain.iter().all(|i| front.contains(i)));
    }

    #[test]
    fn commutes_is_symmetric_and_sound(
        a in gate_from(&TABLE_EXACT_KINDS, 3),
        b in gate_from(&TABLE_EXACT_KINDS, 3),
    ) {
        prop_assert_eq!(commutes(&a, &b), commutes(&b, &a));
        if commutes(&a, &b) {
            prop_assert!(commutator_norm(&a, &b, 3) < 1e-9);
        }
    }

    #[test]
    fn qasm_round_trip(c in circuit_on(&ROUTING_KINDS, 2..=6, 0..=20)) {
        let text = emit_program(&c, false);
        prop_assert_eq!(parse_program(&text).unwrap(), c);
    }

    #[test]
    fn routing_invariants(
        arch in architecture(4, 9),
        c in circuit_on(&ROUTING_KINDS, 2..=4, 0..=24),
        aware in any::<bool>(),
        commute in any::<bool>(),
        reverse in any::<bool>(),
    ) {
        let cfg = RouterConfig {
            duration_aware: aware,
            commutativity: commute,
            initial_mapping: if reverse { InitialMappingPolicy::ReversePass } else { InitialMappingPolicy::Identity },
            ..RouterConfig::default()
        };
        let routed = route_with_policy(&c, &arch, &cfg).unwrap();
        if let Err(e) = schedule_invariants(&c, &arch, &routed) {
            return Err(TestCaseError::fail(e));
        }
        let again = route_with_policy(&c, &arch, &cfg).unwrap();
        prop_assert_eq!(&routed, &again);

        let s = &routed.schedule;
        let v = dependency_equivalence(&c, &s.items, &s.initial_mapping, &s.final_mapping, &arch.commutation);
        prop_assert!(v.is_empty(), "{:?}", v);
        let out = statevector_oracle(&c, &routed.circuit, &s.initial_mapping, &s.final_mapping, 1e-9).unwrap();
        prop_assert!(out.equivalent, "{:?}", out);
    }

    #[test]
    fn swap_decomposition_matches_native(c in circuit_on(&ROUTING_KINDS, 2..=4, 0..=12)) {
        let m = Mapping::identity(c.num_qubits, c.num_qubits).unwrap();
        let decomposed = parse_program(&emit_program(&c, true)).unwrap();
        let out = statevector_oracle(&c, &decomposed, &m, &m, 1e-9).unwrap();
        prop_assert!(out.equivalent);
    }
}

#[test]
fn three_cx_product_is_swap() {
    use codar_core::gate::Gate;
    let cxs = [Gate::cx(0, 1), Gate::cx(1, 0), Gate::cx(0, 1)];
    let u = circuit_unitary(&cxs, 2);
    let swap = full_unitary(&Gate::swap(0, 1), 2);
    for (r1, r2) in u.iter().zip(&swap) {
        for (a, b) in r1.iter().zip(r2) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn derived_commutation_examples() {
    use codar_core::gate::{Gate, GateKind};
    // T on the target of a CX does not commute; on the control it does.
    assert!(commutator_norm(&Gate::one(GateKind::T, 2), &Gate::cx(0, 2), 3) > 1e-3);
    assert!(commutator_norm(&Gate::one(GateKind::T, 0), &Gate::cx(0, 2), 3) < 1e-12);
    assert!(commutator_norm(&Gate::one(GateKind::H, 0), &Gate::cx(0, 1), 2) > 1e-3);
    let gates = [Gate::one(GateKind::T, 1), Gate::cx(0, 2), Gate::cx(0, 3)];
    assert_eq!(brute_force_cf(&gates, 4), vec![0, 1, 2]);
    assert_eq!(
        cf_front(&CommutationTable::baseline(), &gates),
        vec![0, 1, 2]
    );
    let gates = [Gate::one(GateKind::H, 0), Gate::cx(0, 1)];
    assert_eq!(brute_force_cf(&gates, 2), vec![0]);
}

#[test]
fn routing_on_identity_mapping_is_deterministic_across_configs() {
    let arch = square4();
    let c = parse_program(
        "OPENQASM 2.0; qreg q[4]; h q[0]; cx q[0],q[3]; cx q[1],q[2]; t q[3]; cx q[3],q[0];",
    )
    .unwrap();
    let init = Mapping::identity(4, 4).unwrap();
    for cfg in [RouterConfig::default(), RouterConfig::ablated()] {
        let a = route(&c, &arch, &init, &cfg).unwrap();
        let b = route(&c, &arch, &init, &cfg).unwrap();
        assert_eq!(a, b);
        schedule_invariants(&c, &arch, &a).unwrap();
    }
}
