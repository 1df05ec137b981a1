use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::basis::{run_basis, BasisAssignment};
use super::statevector::{run_statevector, BranchPolicy, WireInit, MAX_WIRES};
use crate::error::{Error, Result};
use crate::ir::{Netlist, WireId};

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Basis,
    Statevector,
}

/// Which wires carry the input value and which carry the result, both little-endian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub inputs: Vec<WireId>,
    pub outputs: Vec<WireId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub input: u64,
    pub expected: u64,
    pub got: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub inputs_checked: u64,
    pub mismatches: Vec<Mismatch>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Tags every mismatch with the operand width it came from.
    pub fn with_width(mut self, n: usize) -> Self {
        for m in &mut self.mismatches {
            m.n = Some(n);
        }
        self
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.inputs_checked += other.inputs_checked;
        self.mismatches.extend(other.mismatches);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

/// Checks `netlist` against `reference` on every value of the input wires.
///
/// A run passes when the outputs read `reference(x)`, input wires outside the outputs still
/// hold `x`, and every other wire is back in |0>. The statevector engine follows both
/// outcomes of every measurement and also requires one global phase shared by all inputs
/// and branches.
pub fn verify_equivalence(
    netlist: &Netlist,
    probe: &Probe,
    reference: &(dyn Fn(u64) -> u64 + Sync),
    engine: Engine,
) -> Result<VerificationReport> {
    if probe.inputs.len() > 24 {
        return Err(Error::Format(format!(
            "exhaustive check over {} input wires is not supported",
            probe.inputs.len()
        )));
    }
    if probe.outputs.len() > 64 {
        return Err(Error::Format("outputs wider than 64 bits".into()));
    }
    if engine == Engine::Statevector {
        if netlist.wire_count() > MAX_WIRES {
            return Err(Error::TooManyWires {
                max: MAX_WIRES,
                got: netlist.wire_count(),
            });
        }
        if !netlist.is_expanded() {
            return Err(Error::NotExpanded("statevector verification"));
        }
    }
    let total = 1u64 << probe.inputs.len();
    let results: Vec<(Vec<Mismatch>, Vec<Complex64>)> = (0..total)
        .into_par_iter()
        .map(|x| match engine {
            Engine::Basis => (check_basis(netlist, probe, reference, x), Vec::new()),
            Engine::Statevector => check_statevector(netlist, probe, reference, x),
        })
        .collect();
    let mut report = VerificationReport {
        inputs_checked: total,
        mismatches: Vec::new(),
    };
    let mut global: Option<Complex64> = None;
    for (x, (mism, phases)) in results.into_iter().enumerate() {
        report.mismatches.extend(mism);
        for p in phases {
            match global {
                None => global = Some(p),
                Some(g) if (g - p).norm() > TOL => {
                    report.mismatches.push(Mismatch {
                        input: x as u64,
                        expected: reference(x as u64),
                        got: None,
                        n: None,
                        note: Some(format!("phase {p:.6} differs from {g:.6}")),
                    });
                    break;
                }
                Some(_) => {}
            }
        }
    }
    Ok(report)
}

fn expected_bits(netlist: &Netlist, probe: &Probe, x: u64, y: u64) -> Vec<bool> {
    let mut bits = vec![false; netlist.wire_count() as usize];
    for (k, w) in probe.inputs.iter().enumerate() {
        bits[w.index()] = (x >> k) & 1 == 1;
    }
    for (k, w) in probe.outputs.iter().enumerate() {
        bits[w.index()] = k < 64 && (y >> k) & 1 == 1;
    }
    bits
}

fn read(bits: &[bool], wires: &[WireId]) -> u64 {
    wires
        .iter()
        .enumerate()
        .fold(0, |acc, (k, w)| acc | u64::from(bits[w.index()]) << k)
}

fn describe(bits: &[bool], want: &[bool], outputs: &BTreeSet<WireId>) -> String {
    let stray: Vec<String> = bits
        .iter()
        .zip(want)
        .enumerate()
        .filter(|(k, (b, w))| b != w && !outputs.contains(&WireId(*k as u32)))
        .map(|(k, _)| WireId(k as u32).to_string())
        .collect();
    if stray.is_empty() {
        "wrong output value".into()
    } else {
        format!("garbage or altered input on {}", stray.join(","))
    }
}

fn check_basis(
    netlist: &Netlist,
    probe: &Probe,
    reference: &(dyn Fn(u64) -> u64 + Sync),
    x: u64,
) -> Vec<Mismatch> {
    let expected = reference(x);
    let mut start = BasisAssignment::zeros(netlist);
    start.load(&probe.inputs, u128::from(x));
    let fail = |got, note: String| Mismatch {
        input: x,
        expected,
        got,
        n: None,
        note: Some(note),
    };
    let run = match run_basis(netlist, &start) {
        Ok(r) => r,
        Err(e) => return vec![fail(None, e.to_string())],
    };
    let bits = run.state.bits();
    let got = read(bits, &probe.outputs);
    let want = expected_bits(netlist, probe, x, expected);
    let mut out = Vec::new();
    if bits != want.as_slice() {
        let outputs = probe.outputs.iter().copied().collect();
        out.push(fail(Some(got), describe(bits, &want, &outputs)));
    }
    if !run.overflows.is_empty() {
        out.push(fail(
            Some(got),
            format!("adder overflow at ops {:?}", run.overflows),
        ));
    }
    out
}

fn check_statevector(
    netlist: &Netlist,
    probe: &Probe,
    reference: &(dyn Fn(u64) -> u64 + Sync),
    x: u64,
) -> (Vec<Mismatch>, Vec<Complex64>) {
    let expected = reference(x);
    let mut init = vec![WireInit::Zero; netlist.wire_count() as usize];
    for (k, w) in probe.inputs.iter().enumerate() {
        init[w.index()] = WireInit::Basis((x >> k) & 1 == 1);
    }
    let fail = |got, note: String| Mismatch {
        input: x,
        expected,
        got,
        n: None,
        note: Some(note),
    };
    let branches = match run_statevector(netlist, &init, BranchPolicy::Both) {
        Ok(b) => b,
        Err(e) => return (vec![fail(None, e.to_string())], Vec::new()),
    };
    let want = expected_bits(netlist, probe, x, expected);
    let want_index = want
        .iter()
        .enumerate()
        .fold(0usize, |acc, (k, &b)| acc | usize::from(b) << k);
    let mut mismatches = Vec::new();
    let mut phases = Vec::new();
    for br in branches {
        let tag = format!("branch {:?}", br.cbits);
        match br.state.as_basis_state(TOL) {
            Some((idx, phase)) if idx == want_index => phases.push(phase),
            Some((idx, _)) => {
                let bits: Vec<bool> = (0..want.len()).map(|k| (idx >> k) & 1 == 1).collect();
                let outputs = probe.outputs.iter().copied().collect();
                mismatches.push(fail(
                    Some(read(&bits, &probe.outputs)),
                    format!("{tag}: {}", describe(&bits, &want, &outputs)),
                ));
            }
            None => mismatches.push(fail(None, format!("{tag}: not a basis state"))),
        }
    }
    (mismatches, phases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::build_adder_in_place;
    use crate::ir::{expand, Init};

    fn adder(m: usize) -> (Netlist, Probe) {
        let mut nl = Netlist::new();
        let a = nl.alloc_register("a", m, Init::Input).unwrap();
        let b = nl.alloc_register("b", m, Init::Input).unwrap();
        let c = build_adder_in_place(&mut nl, &a, &b, true)
            .unwrap()
            .unwrap();
        let mut inputs = a.clone();
        inputs.extend(&b);
        let mut outputs = a;
        outputs.extend(&b);
        outputs.push(c);
        (nl, Probe { inputs, outputs })
    }

    fn add_ref(m: usize) -> impl Fn(u64) -> u64 + Sync {
        move |v| {
            let mask = (1 << m) - 1;
            let (a, b) = (v & mask, v >> m);
            a | (a + b) << m
        }
    }

    #[test]
    fn adders_pass_both_engines() {
        for m in 2..=3 {
            let (nl, probe) = adder(m);
            let r = verify_equivalence(&nl, &probe, &add_ref(m), Engine::Basis).unwrap();
            assert!(r.passed(), "{r:?}");
            let ex = expand(&nl).unwrap();
            let r = verify_equivalence(&ex, &probe, &add_ref(m), Engine::Statevector).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.inputs_checked, 1 << (2 * m));
        }
    }

    #[test]
    fn dropped_gate_is_caught() {
        let (nl, probe) = adder(3);
        let ex = expand(&nl).unwrap();
        let cx = ex.ops().iter().position(|o| o.kind() == "cx").unwrap();
        let broken = ex.without_op(cx);
        let r = verify_equivalence(&broken, &probe, &add_ref(3), Engine::Statevector).unwrap();
        assert!(!r.passed());
        let json = r.to_json();
        assert!(json.contains("\"mismatches\""));
    }
}
