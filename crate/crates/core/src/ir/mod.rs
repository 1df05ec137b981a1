//! Gate-level intermediate representation.
//!
//! A [`Netlist`] is an append-only list of [`Op`]s over dense wire indices. Ops are either
//! primitive Clifford+T gates ([`Gate`]) or the three macro blocks the squarer is assembled
//! from ([`Macro`]). [`expand`] lowers macros to primitives; [`count`] and [`schedule_asap`]
//! measure the lowered circuit.

mod expand;
mod json;
mod metrics;
mod netlist;
mod qasm;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use expand::{expand, expand_adders};
pub use json::{from_json, to_json};
pub use metrics::{count, layer_assignment, schedule_asap, CountClass, DepthClass};
pub use netlist::{AncillaPolicy, Init, Netlist, RegisterMap};
pub use qasm::to_qasm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WireId(pub u32);

impl WireId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for WireId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassicalBit(pub u32);

impl ClassicalBit {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Primitive gates. `MeasureX` measures in the X basis, records the outcome and leaves the
/// wire in |0>; `ClassicalCz` applies CZ only when its classical bit reads 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    H(WireId),
    S(WireId),
    Sdg(WireId),
    T(WireId),
    Tdg(WireId),
    X(WireId),
    Z(WireId),
    Cnot {
        control: WireId,
        target: WireId,
    },
    Cz {
        control: WireId,
        target: WireId,
    },
    PrepZero(WireId),
    PrepMagicT(WireId),
    MeasureX {
        target: WireId,
        cbit: ClassicalBit,
    },
    ClassicalCz {
        cbit: ClassicalBit,
        control: WireId,
        target: WireId,
    },
}

impl Gate {
    /// Kind string used by the JSON format.
    pub fn kind(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::T(_) => "t",
            Gate::Tdg(_) => "tdg",
            Gate::X(_) => "x",
            Gate::Z(_) => "z",
            Gate::Cnot { .. } => "cx",
            Gate::Cz { .. } => "cz",
            Gate::PrepZero(_) => "prep0",
            Gate::PrepMagicT(_) => "prepT",
            Gate::MeasureX { .. } => "mx",
            Gate::ClassicalCz { .. } => "ccz_classical",
        }
    }

    pub fn wires(&self) -> Vec<WireId> {
        match *self {
            Gate::H(w)
            | Gate::S(w)
            | Gate::Sdg(w)
            | Gate::T(w)
            | Gate::Tdg(w)
            | Gate::X(w)
            | Gate::Z(w)
            | Gate::PrepZero(w)
            | Gate::PrepMagicT(w)
            | Gate::MeasureX { target: w, .. } => vec![w],
            Gate::Cnot { control, target }
            | Gate::Cz { control, target }
            | Gate::ClassicalCz {
                control, target, ..
            } => vec![control, target],
        }
    }

    pub fn cbit(&self) -> Option<ClassicalBit> {
        match *self {
            Gate::MeasureX { cbit, .. } | Gate::ClassicalCz { cbit, .. } => Some(cbit),
            _ => None,
        }
    }

    pub(crate) fn relabel(&self, map: impl Fn(WireId) -> WireId) -> Gate {
        match *self {
            Gate::H(w) => Gate::H(map(w)),
            Gate::S(w) => Gate::S(map(w)),
            Gate::Sdg(w) => Gate::Sdg(map(w)),
            Gate::T(w) => Gate::T(map(w)),
            Gate::Tdg(w) => Gate::Tdg(map(w)),
            Gate::X(w) => Gate::X(map(w)),
            Gate::Z(w) => Gate::Z(map(w)),
            Gate::Cnot { control, target } => Gate::Cnot {
                control: map(control),
                target: map(target),
            },
            Gate::Cz { control, target } => Gate::Cz {
                control: map(control),
                target: map(target),
            },
            Gate::PrepZero(w) => Gate::PrepZero(map(w)),
            Gate::PrepMagicT(w) => Gate::PrepMagicT(map(w)),
            Gate::MeasureX { target, cbit } => Gate::MeasureX {
                target: map(target),
                cbit,
            },
            Gate::ClassicalCz {
                cbit,
                control,
                target,
            } => Gate::ClassicalCz {
                cbit,
                control: map(control),
                target: map(target),
            },
        }
    }
}

/// Macro blocks, lowered by [`expand`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Macro {
    /// target := x AND y, target freshly prepared.
    LogicalAnd {
        x: WireId,
        y: WireId,
        target: WireId,
    },
    /// Measurement-based reversal of a `LogicalAnd`; target must hold x AND y.
    UncomputeAnd {
        x: WireId,
        y: WireId,
        target: WireId,
    },
    /// b := a + b (mod 2^m), carry := bit m of the sum when present; a unchanged.
    AddInPlace {
        a: Vec<WireId>,
        b: Vec<WireId>,
        carry: Option<WireId>,
    },
}

impl Macro {
    pub fn kind(&self) -> &'static str {
        match self {
            Macro::LogicalAnd { .. } => "and",
            Macro::UncomputeAnd { .. } => "unand",
            Macro::AddInPlace { .. } => "add",
        }
    }

    pub fn wires(&self) -> Vec<WireId> {
        match self {
            Macro::LogicalAnd { x, y, target } | Macro::UncomputeAnd { x, y, target } => {
                vec![*x, *y, *target]
            }
            Macro::AddInPlace { a, b, carry } => a
                .iter()
                .chain(b.iter())
                .chain(carry.iter())
                .copied()
                .collect(),
        }
    }

    pub(crate) fn relabel(&self, map: impl Fn(WireId) -> WireId) -> Macro {
        match self {
            Macro::LogicalAnd { x, y, target } => Macro::LogicalAnd {
                x: map(*x),
                y: map(*y),
                target: map(*target),
            },
            Macro::UncomputeAnd { x, y, target } => Macro::UncomputeAnd {
                x: map(*x),
                y: map(*y),
                target: map(*target),
            },
            Macro::AddInPlace { a, b, carry } => Macro::AddInPlace {
                a: a.iter().map(|&w| map(w)).collect(),
                b: b.iter().map(|&w| map(w)).collect(),
                carry: carry.map(&map),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Op {
    Gate(Gate),
    Macro(Macro),
}

impl Op {
    pub fn kind(&self) -> &'static str {
        match self {
            Op::Gate(g) => g.kind(),
            Op::Macro(m) => m.kind(),
        }
    }

    pub fn wires(&self) -> Vec<WireId> {
        match self {
            Op::Gate(g) => g.wires(),
            Op::Macro(m) => m.wires(),
        }
    }

    pub fn is_macro(&self) -> bool {
        matches!(self, Op::Macro(_))
    }

    pub(crate) fn relabel(&self, map: impl Fn(WireId) -> WireId) -> Op {
        match self {
            Op::Gate(g) => Op::Gate(g.relabel(map)),
            Op::Macro(m) => Op::Macro(m.relabel(map)),
        }
    }
}

impl From<Gate> for Op {
    fn from(g: Gate) -> Self {
        Op::Gate(g)
    }
}

impl From<Macro> for Op {
    fn from(m: Macro) -> Self {
        Op::Macro(m)
    }
}
