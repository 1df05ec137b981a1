use std::collections::BTreeSet;

use super::{Gate, Netlist, Op};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountClass {
    /// T, T-dagger and T-state preparations.
    T,
    /// CNOT only; CZ and classically controlled CZ are excluded.
    Cnot,
    /// Every op in the list, macros included.
    TotalGates,
    Measurements,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DepthClass {
    T,
    Cnot,
}

// A T-state |T> = T|+> costs exactly one T gate, which is why a logical-AND built on it
// carries four T gates with only three drawn explicitly.
fn is_t(g: &Gate) -> bool {
    matches!(g, Gate::T(_) | Gate::Tdg(_) | Gate::PrepMagicT(_))
}

fn is_cnot(g: &Gate) -> bool {
    matches!(g, Gate::Cnot { .. })
}

pub fn count(netlist: &Netlist, class: CountClass) -> Result<usize> {
    match class {
        CountClass::TotalGates => Ok(netlist.ops().len()),
        CountClass::Measurements => Ok(netlist
            .ops()
            .iter()
            .filter(|op| matches!(op, Op::Gate(Gate::MeasureX { .. })))
            .count()),
        CountClass::T | CountClass::Cnot => {
            if !netlist.is_expanded() {
                return Err(Error::NotExpanded("counting T/CNOT gates"));
            }
            let pred = if class == CountClass::T {
                is_t
            } else {
                is_cnot
            };
            Ok(netlist
                .ops()
                .iter()
                .filter(|op| matches!(op, Op::Gate(g) if pred(g)))
                .count())
        }
    }
}

/// ASAP layer (1-based) of every op in program order.
///
/// A wire is written by every gate touching it except the control of a CNOT, which only reads
/// it. A gate lands one layer after the last write to anything it touches and after the last
/// read of anything it writes, so CNOTs sharing a control may share a layer while every other
/// pair of gates on a common wire keeps its program order. Classically controlled gates wait
/// for the measurement that produces their bit.
pub fn layer_assignment(netlist: &Netlist) -> Result<Vec<usize>> {
    if !netlist.is_expanded() {
        return Err(Error::NotExpanded("scheduling"));
    }
    let wires = netlist.wire_count() as usize;
    let mut last_write = vec![0usize; wires];
    let mut last_read = vec![0usize; wires];
    let mut cbit_ready = vec![0usize; netlist.cbit_count() as usize];
    let mut layers = Vec::with_capacity(netlist.ops().len());

    for op in netlist.ops() {
        let Op::Gate(g) = op else { unreachable!() };
        let (reads, writes): (Vec<_>, Vec<_>) = match *g {
            Gate::Cnot { control, target } => (vec![control], vec![target]),
            _ => (Vec::new(), g.wires()),
        };
        let mut layer = 0;
        for r in &reads {
            layer = layer.max(last_write[r.index()]);
        }
        for w in &writes {
            layer = layer.max(last_write[w.index()]).max(last_read[w.index()]);
        }
        if let Gate::ClassicalCz { cbit, .. } = g {
            layer = layer.max(cbit_ready[cbit.index()]);
        }
        layer += 1;
        for r in &reads {
            let slot = &mut last_read[r.index()];
            *slot = (*slot).max(layer);
        }
        for w in &writes {
            last_write[w.index()] = layer;
        }
        if let Gate::MeasureX { cbit, .. } = g {
            cbit_ready[cbit.index()] = layer;
        }
        layers.push(layer);
    }
    Ok(layers)
}

/// Number of ASAP layers that contain at least one gate of `class`.
pub fn schedule_asap(netlist: &Netlist, class: DepthClass) -> Result<usize> {
    let layers = layer_assignment(netlist)?;
    let pred = match class {
        DepthClass::T => is_t,
        DepthClass::Cnot => is_cnot,
    };
    let hit: BTreeSet<usize> = netlist
        .ops()
        .iter()
        .zip(&layers)
        .filter(|(op, _)| matches!(op, Op::Gate(g) if pred(g)))
        .map(|(_, &l)| l)
        .collect();
    Ok(hit.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{expand, Init, Macro, WireId};

    fn ands(pairs: usize) -> Netlist {
        let mut nl = Netlist::new();
        for p in 0..pairs {
            let w = nl
                .alloc_register(&format!("in{p}"), 2, Init::Input)
                .unwrap();
            let t = nl.alloc_ancilla(Init::Input);
            nl.push(Macro::LogicalAnd {
                x: w[0],
                y: w[1],
                target: t,
            })
            .unwrap();
        }
        expand(&nl).unwrap()
    }

    #[test]
    fn empty_netlist_is_all_zero() {
        let nl = Netlist::new();
        for class in [
            CountClass::T,
            CountClass::Cnot,
            CountClass::TotalGates,
            CountClass::Measurements,
        ] {
            assert_eq!(count(&nl, class).unwrap(), 0);
        }
        assert_eq!(schedule_asap(&nl, DepthClass::T).unwrap(), 0);
    }

    #[test]
    fn logical_and_depths() {
        let nl = ands(1);
        assert_eq!(schedule_asap(&nl, DepthClass::T).unwrap(), 2);
        assert_eq!(schedule_asap(&nl, DepthClass::Cnot).unwrap(), 4);
    }

    #[test]
    fn disjoint_ands_share_layers() {
        let nl = ands(2);
        assert_eq!(count(&nl, CountClass::T).unwrap(), 8);
        assert_eq!(schedule_asap(&nl, DepthClass::T).unwrap(), 2);
        assert_eq!(schedule_asap(&nl, DepthClass::Cnot).unwrap(), 4);
    }

    #[test]
    fn unexpanded_netlist_rejected() {
        let mut nl = Netlist::new();
        let w = nl.alloc_register("w", 3, Init::Input).unwrap();
        nl.push(Macro::LogicalAnd {
            x: w[0],
            y: w[1],
            target: w[2],
        })
        .unwrap();
        assert!(matches!(
            count(&nl, CountClass::T),
            Err(Error::NotExpanded(_))
        ));
        assert!(schedule_asap(&nl, DepthClass::Cnot).is_err());
        assert_eq!(count(&nl, CountClass::TotalGates).unwrap(), 1);
    }

    #[test]
    fn t_gates_on_one_wire_are_serial() {
        let mut nl = Netlist::new();
        let w = nl.alloc_register("w", 1, Init::Input).unwrap()[0];
        for _ in 0..5 {
            nl.gate(Gate::T(w)).unwrap();
        }
        assert_eq!(schedule_asap(&nl, DepthClass::T).unwrap(), 5);
    }

    #[test]
    fn classical_cz_waits_for_measurement() {
        let mut nl = Netlist::new();
        let w = nl.alloc_register("w", 3, Init::Input).unwrap();
        let c = nl.alloc_cbit();
        nl.gate(Gate::MeasureX {
            target: w[2],
            cbit: c,
        })
        .unwrap();
        nl.gate(Gate::ClassicalCz {
            cbit: c,
            control: WireId(0),
            target: WireId(1),
        })
        .unwrap();
        assert_eq!(layer_assignment(&nl).unwrap(), vec![1, 2]);
    }

    #[test]
    fn shared_controls_share_a_layer_but_targets_do_not() {
        let mut nl = Netlist::new();
        let w = nl.alloc_register("w", 3, Init::Input).unwrap();
        nl.cnot(w[0], w[1]).unwrap();
        nl.cnot(w[0], w[2]).unwrap();
        nl.cnot(w[1], w[2]).unwrap();
        nl.cnot(w[2], w[0]).unwrap();
        assert_eq!(layer_assignment(&nl).unwrap(), vec![1, 1, 2, 3]);
    }
}
