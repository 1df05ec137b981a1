use crate::error::{Error, Result};
use crate::ir::{Gate, Macro, Netlist, Op, WireId};

/// One bit per wire plus one per classical bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisAssignment {
    bits: Vec<bool>,
    cbits: Vec<bool>,
}

impl BasisAssignment {
    pub fn zeros(netlist: &Netlist) -> Self {
        BasisAssignment {
            bits: vec![false; netlist.wire_count() as usize],
            cbits: vec![false; netlist.cbit_count() as usize],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BasisAssignment {
            bits,
            cbits: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, w: WireId) -> bool {
        self.bits[w.index()]
    }

    pub fn set(&mut self, w: WireId, v: bool) {
        self.bits[w.index()] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Writes `value` little-endian onto `wires`.
    pub fn load(&mut self, wires: &[WireId], value: u128) {
        for (k, &w) in wires.iter().enumerate() {
            self.set(w, k < 128 && (value >> k) & 1 == 1);
        }
    }

    /// Reads `wires` as a little-endian integer. Only the low 128 wires are read.
    pub fn read(&self, wires: &[WireId]) -> u128 {
        wires
            .iter()
            .take(128)
            .enumerate()
            .fold(0, |acc, (k, &w)| acc | (u128::from(self.get(w)) << k))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisRun {
    pub state: BasisAssignment,
    /// Indices of carry-less adders whose sum overflowed.
    pub overflows: Vec<usize>,
}

/// Runs a netlist of X, CNOT, `PrepZero`, logical-AND, uncompute-AND and adder ops on a
/// classical bit string. Anything that creates superposition or phase is rejected.
pub fn run_basis(netlist: &Netlist, input: &BasisAssignment) -> Result<BasisRun> {
    if input.len() != netlist.wire_count() as usize {
        return Err(Error::InitialStateWidth {
            expected: netlist.wire_count() as usize,
            got: input.len(),
        });
    }
    let mut s = input.clone();
    s.cbits.resize(netlist.cbit_count() as usize, false);
    let mut overflows = Vec::new();
    for (op_index, op) in netlist.ops().iter().enumerate() {
        match op {
            Op::Gate(g) => match *g {
                Gate::X(w) => s.set(w, !s.get(w)),
                Gate::Cnot { control, target } => {
                    let v = s.get(target) ^ s.get(control);
                    s.set(target, v);
                }
                Gate::PrepZero(w) => {
                    if s.get(w) {
                        return Err(Error::DirtyPreparation {
                            op: op_index,
                            wire: w,
                        });
                    }
                }
                other => {
                    return Err(Error::NonClassicalGate {
                        op: op_index,
                        kind: other.kind(),
                    })
                }
            },
            Op::Macro(Macro::LogicalAnd { x, y, target }) => {
                if s.get(*target) {
                    return Err(Error::DirtyAndTarget {
                        op: op_index,
                        wire: *target,
                    });
                }
                s.set(*target, s.get(*x) && s.get(*y));
            }
            Op::Macro(Macro::UncomputeAnd { x, y, target }) => {
                let expected = s.get(*x) && s.get(*y);
                let found = s.get(*target);
                if expected != found {
                    return Err(Error::UncomputeMisuse {
                        op: op_index,
                        target: *target,
                        expected,
                        found,
                    });
                }
                s.set(*target, false);
            }
            Op::Macro(Macro::AddInPlace { a, b, carry }) => {
                if let Some(c) = carry {
                    if s.get(*c) {
                        return Err(Error::DirtyAndTarget {
                            op: op_index,
                            wire: *c,
                        });
                    }
                }
                let mut c = false;
                for (&ai, &bi) in a.iter().zip(b) {
                    let (x, y) = (s.get(ai), s.get(bi));
                    s.set(bi, x ^ y ^ c);
                    c = (x && y) || (c && (x ^ y));
                }
                match carry {
                    Some(w) => s.set(*w, c),
                    None if c => overflows.push(op_index),
                    None => {}
                }
            }
        }
    }
    Ok(BasisRun {
        state: s,
        overflows,
    })
}
