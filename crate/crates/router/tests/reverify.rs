use codar_core::gate::{Gate, GateKind};
use codar_core::qasm::parse_program;
use codar_router::pipeline::{reverify, route_source, RouteOptions};
use codar_router::presets;

const OVERLAP: &str = "OPENQASM 2.0; qreg q[4]; t q[1]; cx q[0],q[2]; cx q[0],q[3];";

#[test]
fn tampered_output_is_rejected() {
    let arch = presets::resolve("fig2-square").unwrap();
    let opts = RouteOptions::default();
    let out = route_source("overlap", OVERLAP, &arch, &opts).unwrap();
    assert!(out.report.verified());
    let original = parse_program(OVERLAP).unwrap();

    let tampered = out.qasm.replace("swap q[1],q[3];", "cx q[1],q[3];");
    assert_ne!(tampered, out.qasm);
    let eq = reverify(&original, &out.schedule, &tampered, &arch, &opts).unwrap();
    assert!(!eq.is_ok());
    assert_eq!(eq.oracle_ok, Some(false));

    let dropped = out.qasm.replace("t q[1];\n", "");
    let eq = reverify(&original, &out.schedule, &dropped, &arch, &opts).unwrap();
    assert!(!eq.dependency_ok);

    let extra = format!("{}h q[0];\n", out.qasm);
    let eq = reverify(&original, &out.schedule, &extra, &arch, &opts).unwrap();
    assert!(!eq.dependency_ok);

    assert!(reverify(&original, &out.schedule, "qreg", &arch, &opts).is_err());
}

#[test]
fn decomposed_swaps_collapse_back() {
    let arch = presets::resolve("six-qubit").unwrap();
    let opts = RouteOptions {
        decompose_swap: true,
        ..RouteOptions::default()
    };
    let text = "OPENQASM 2.0; qreg q[6]; cx q[0],q[2]; t q[1]; cx q[0],q[3]; measure q[3] -> c[0];";
    let text = text.replace("qreg q[6];", "qreg q[6]; creg c[6];");
    let out = route_source("six", &text, &arch, &opts).unwrap();
    assert!(
        out.report.verified(),
        "{:?}",
        out.report.emitted_equivalence
    );
    assert_eq!(out.report.emitted_equivalence.oracle_ok, Some(true));
    let parsed = parse_program(&out.qasm).unwrap();
    assert!(parsed.gates.iter().all(|g| g.kind != GateKind::Swap));
    assert_eq!(
        parsed.gates.len(),
        out.schedule.items.len() + 2 * out.schedule.swap_count
    );
    assert!(parsed.gates.contains(&Gate::cx(1, 3)));
}
