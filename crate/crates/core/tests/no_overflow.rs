use std::collections::BTreeSet;

use qsquare::sim::{run_basis, BasisAssignment};
use qsquare::synth::{output_bit_map, synthesize_squarer};

#[test]
fn carry_less_stages_never_overflow() {
    for n in 5..=10 {
        let c = synthesize_squarer(n).unwrap();
        for a in 0..1u128 << n {
            let mut s = BasisAssignment::zeros(&c.netlist);
            s.load(c.inputs(), a);
            let run = run_basis(&c.netlist, &s).unwrap();
            assert!(run.overflows.is_empty(), "n={n} a={a}: {:?}", run.overflows);
        }
    }
}

#[test]
fn distinct_inputs_give_distinct_outputs() {
    for n in 5..=9 {
        let c = synthesize_squarer(n).unwrap();
        let mut seen = BTreeSet::new();
        for a in 0..1u128 << n {
            let mut s = BasisAssignment::zeros(&c.netlist);
            s.load(c.inputs(), a);
            let out = run_basis(&c.netlist, &s).unwrap().state;
            let key = (out.read(c.inputs()), out.read(output_bit_map(&c)));
            assert!(seen.insert(key), "n={n} a={a}");
        }
    }
}
