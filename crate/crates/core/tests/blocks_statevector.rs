use qsquare::blocks::{and_budget, build_adder_in_place, build_logical_and, reference_and_budget};
use qsquare::ir::{expand, Init, Macro, Netlist};
use qsquare::sim::{
    run_basis, run_statevector, verify_equivalence, BasisAssignment, BranchPolicy, Engine, Probe,
    WireInit,
};

#[test]
fn and_budget_is_exact() {
    let b = and_budget().unwrap();
    assert_eq!(
        (b.t_count, b.t_depth, b.cnot_count, b.cnot_depth),
        (4, 2, 6, 4)
    );
    assert_eq!(b, reference_and_budget());
}

#[test]
fn and_block_against_oracle() {
    let mut nl = Netlist::new();
    let w = nl.alloc_register("xy", 2, Init::Input).unwrap();
    let t = build_logical_and(&mut nl, w[0], w[1]).unwrap();
    let probe = Probe {
        inputs: w.clone(),
        outputs: vec![w[0], w[1], t],
    };
    let reference = |v: u64| v | ((v & (v >> 1) & 1) << 2);
    let ex = expand(&nl).unwrap();
    let r = verify_equivalence(&ex, &probe, &reference, Engine::Statevector).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.inputs_checked, 4);
}

#[test]
fn uncompute_branches_agree() {
    let mut nl = Netlist::new();
    let w = nl.alloc_register("xy", 2, Init::Input).unwrap();
    let t = build_logical_and(&mut nl, w[0], w[1]).unwrap();
    nl.push(Macro::UncomputeAnd {
        x: w[0],
        y: w[1],
        target: t,
    })
    .unwrap();
    let ex = expand(&nl).unwrap();
    for x in 0..4 {
        let init = [
            WireInit::Basis(x & 1 == 1),
            WireInit::Basis(x & 2 == 2),
            WireInit::Zero,
        ];
        let out = run_statevector(&ex, &init, BranchPolicy::Both).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out[0].state.approx_eq_up_to_phase(&out[1].state, 1e-9));
        assert_eq!(
            out[0].state.amplitudes(),
            out[1].state.amplitudes().to_vec().as_slice()
        );
    }
}

#[test]
fn two_bit_adder_one_plus_one() {
    let mut nl = Netlist::new();
    let a = nl.alloc_register("a", 2, Init::Input).unwrap();
    let b = nl.alloc_register("b", 2, Init::Input).unwrap();
    build_adder_in_place(&mut nl, &a, &b, false).unwrap();
    let ex = expand(&nl).unwrap();
    let mut init = vec![WireInit::Zero; ex.wire_count() as usize];
    init[a[0].index()] = WireInit::Basis(true);
    init[b[0].index()] = WireInit::Basis(true);
    for br in run_statevector(&ex, &init, BranchPolicy::Both).unwrap() {
        let (idx, _) = br.state.as_basis_state(1e-9).unwrap();
        let bval = (idx >> b[0].index() & 1) | (idx >> b[1].index() & 1) << 1;
        assert_eq!(bval, 2);
    }
}

/// Adders small enough for the dense engine agree with both integer addition and the
/// basis engine on every input.
#[test]
fn small_adders_match_basis_engine() {
    for (m, carry) in [
        (2, false),
        (2, true),
        (3, false),
        (3, true),
        (4, false),
        (4, true),
    ] {
        let mut nl = Netlist::new();
        let a = nl.alloc_register("a", m, Init::Input).unwrap();
        let b = nl.alloc_register("b", m, Init::Input).unwrap();
        let c = build_adder_in_place(&mut nl, &a, &b, carry).unwrap();
        let mut inputs = a.clone();
        inputs.extend(&b);
        let mut outputs = inputs.clone();
        outputs.extend(c);
        let probe = Probe { inputs, outputs };
        let mask = (1u64 << m) - 1;
        let keep = if carry { u64::MAX } else { mask };
        let reference = move |v: u64| {
            let (x, y) = (v & mask, v >> m);
            x | (((x + y) & keep) << m)
        };
        let ex = expand(&nl).unwrap();
        if !carry {
            // Without a carry-out the block only promises sums that fit.
            let basis = verify_equivalence(&nl, &probe, &reference, Engine::Basis).unwrap();
            let sv = verify_equivalence(&ex, &probe, &reference, Engine::Statevector).unwrap();
            let fits = |v: u64| (v & mask) + (v >> m) <= mask;
            assert!(basis.mismatches.iter().all(|x| !fits(x.input)), "m={m}");
            assert!(sv.mismatches.iter().all(|x| !fits(x.input)), "m={m}");
            continue;
        }
        let r = verify_equivalence(&ex, &probe, &reference, Engine::Statevector).unwrap();
        assert!(r.passed(), "m={m}: {:?}", r.mismatches.first());
        for v in 0..1u64 << (2 * m) {
            let mut s = BasisAssignment::zeros(&nl);
            s.load(&probe.inputs, u128::from(v));
            let out = run_basis(&nl, &s).unwrap().state;
            assert_eq!(out.read(&probe.outputs) as u64, reference(v));
        }
    }
}
