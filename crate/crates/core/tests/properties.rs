use proptest::prelude::*;

use qsquare::cost::{reduction, Poly};
use qsquare::ir::{
    count, expand, from_json, schedule_asap, to_json, CountClass, DepthClass, Gate, Init, Macro,
    Netlist, WireId,
};
use qsquare::sim::{
    run_basis, run_statevector, BasisAssignment, BranchPolicy, StateVector, WireInit,
};
use qsquare::synth::{output_bit_map, synthesize_squarer};

/// Random classical netlist over `w` input wires plus fresh AND targets. Runs that break an
/// uncompute precondition are rejected by the basis engine and skipped.
fn classical_netlist(w: usize, steps: Vec<(u8, usize, usize)>) -> Netlist {
    let mut nl = Netlist::new();
    let io = nl.alloc_register("io", w, Init::Input).unwrap();
    let mut live: Vec<(WireId, WireId, WireId)> = Vec::new();
    for (kind, i, j) in steps {
        let (x, y) = (io[i % w], io[j % w]);
        match kind % 4 {
            0 => nl.gate(Gate::X(x)).unwrap(),
            1 if x != y => nl.cnot(x, y).unwrap(),
            2 if x != y && nl.wire_count() < 10 => {
                let t = nl.alloc_ancilla(Init::Input);
                nl.push(Macro::LogicalAnd { x, y, target: t }).unwrap();
                live.push((x, y, t));
            }
            3 => {
                if let Some((x, y, t)) = live.pop() {
                    nl.push(Macro::UncomputeAnd { x, y, target: t }).unwrap();
                }
            }
            _ => {}
        }
    }
    nl
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn squares_wide_operands(n in 11usize..=16, seed in any::<u64>()) {
        let c = synthesize_squarer(n).unwrap();
        let a = u128::from(seed) & ((1u128 << n) - 1);
        let mut s = BasisAssignment::zeros(&c.netlist);
        s.load(c.inputs(), a);
        let run = run_basis(&c.netlist, &s).unwrap();
        prop_assert!(run.overflows.is_empty());
        let out = run.state;
        prop_assert_eq!(out.read(output_bit_map(&c)), a * a);
        prop_assert_eq!(out.read(c.inputs()), a);
        let mut keep = out.clone();
        keep.load(c.inputs(), 0);
        keep.load(output_bit_map(&c), 0);
        prop_assert!(keep.bits().iter().all(|b| !b));
    }

    #[test]
    fn relabeling_preserves_metrics(n in 5usize..=7, rot in 1u32..50) {
        let ex = expand(&synthesize_squarer(n).unwrap().netlist).unwrap();
        let w = ex.wire_count();
        let perm: Vec<u32> = (0..w).map(|i| (i + rot) % w).collect();
        let moved = ex.relabeled(&perm).unwrap();
        for class in [CountClass::T, CountClass::Cnot, CountClass::TotalGates, CountClass::Measurements] {
            prop_assert_eq!(count(&ex, class).unwrap(), count(&moved, class).unwrap());
        }
        for class in [DepthClass::T, DepthClass::Cnot] {
            prop_assert_eq!(schedule_asap(&ex, class).unwrap(), schedule_asap(&moved, class).unwrap());
        }
    }

    #[test]
    fn expansion_is_idempotent(n in 5usize..=8) {
        let once = expand(&synthesize_squarer(n).unwrap().netlist).unwrap();
        prop_assert_eq!(expand(&once).unwrap(), once);
    }

    #[test]
    fn json_round_trips(n in 5usize..=8, expanded in any::<bool>()) {
        let mut nl = synthesize_squarer(n).unwrap().netlist;
        if expanded {
            nl = expand(&nl).unwrap();
        }
        let text = to_json(&nl);
        let back = from_json(&text).unwrap();
        prop_assert_eq!(&back, &nl);
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn ratios_depend_only_on_leading_terms(
        p_lead in 1i128..40, b_lead in 1i128..40,
        p_low in proptest::collection::vec(-50i128..50, 0..4),
        b_low in proptest::collection::vec(-50i128..50, 0..4),
        pd in 1i128..5, bd in 1i128..5,
    ) {
        let mut pc = p_low.clone();
        pc.resize(4, 0);
        pc.push(p_lead);
        let mut bc = b_low.clone();
        bc.resize(4, 0);
        bc.push(b_lead);
        let p = Poly::new(&pc, pd);
        let b = Poly::new(&bc, bd);
        let bare_p = Poly::new(&[0, 0, 0, 0, p_lead], pd);
        let bare_b = Poly::new(&[0, 0, 0, 0, b_lead], bd);
        prop_assert_eq!(reduction(p.leading(), b.leading()), reduction(bare_p.leading(), bare_b.leading()));
    }

    #[test]
    fn basis_and_statevector_agree(
        w in 2usize..=5,
        steps in proptest::collection::vec((any::<u8>(), 0usize..5, 0usize..5), 1..14),
        input in any::<u8>(),
    ) {
        let nl = classical_netlist(w, steps);
        let mut s = BasisAssignment::zeros(&nl);
        let io = nl.register("io").unwrap().to_vec();
        s.load(&io, u128::from(input));
        let basis = match run_basis(&nl, &s) {
            Ok(r) => r.state,
            Err(_) => return Ok(()),
        };
        let ex = expand(&nl).unwrap();
        let init: Vec<WireInit> = (0..ex.wire_count())
            .map(|k| WireInit::Basis(s.get(WireId(k))))
            .collect();
        let index = basis
            .bits()
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, &b)| acc | usize::from(b) << k);
        let want = StateVector::basis(ex.wire_count(), index);
        for br in run_statevector(&ex, &init, BranchPolicy::Both).unwrap() {
            prop_assert!(want.approx_eq_up_to_phase(&br.state, 1e-9));
        }
    }
}
