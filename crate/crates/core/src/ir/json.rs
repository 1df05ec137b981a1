//! JSON netlist documents:
//! `{"wires": N, "registers": {name: [wire, ...]}, "gates": [{"kind": k, "wires": [...], "cbit": c?}]}`.
//!
//! Macros serialize as kinds `and`/`unand` (wires `[x, y, target]`) and `add`
//! (wires `a ++ b`, followed by the carry wire when present). Alias registers are listed
//! under an optional `aliases` key.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ClassicalBit, Gate, Macro, Netlist, Op, RegisterMap, WireId};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Doc {
    wires: u32,
    registers: BTreeMap<String, Vec<u32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    aliases: Vec<String>,
    gates: Vec<GateDoc>,
}

#[derive(Serialize, Deserialize)]
struct GateDoc {
    kind: String,
    wires: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cbit: Option<u32>,
}

pub fn to_json(netlist: &Netlist) -> String {
    let doc = Doc {
        wires: netlist.wire_count(),
        registers: netlist
            .registers()
            .iter()
            .map(|(k, v)| (k.to_string(), v.iter().map(|w| w.0).collect()))
            .collect(),
        aliases: netlist.registers().aliases().map(str::to_string).collect(),
        gates: netlist.ops().iter().map(gate_doc).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("netlist documents always serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Netlist> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let mut registers = RegisterMap::default();
    for (name, wires) in &doc.registers {
        let alias = doc.aliases.iter().any(|a| a == name);
        registers.insert(name, wires.iter().map(|&w| WireId(w)).collect(), alias);
    }
    let ops = doc
        .gates
        .iter()
        .map(parse_gate)
        .collect::<Result<Vec<_>>>()?;
    let cbits = ops
        .iter()
        .filter_map(|op| match op {
            Op::Gate(g) => g.cbit(),
            Op::Macro(_) => None,
        })
        .map(|c| c.0 + 1)
        .max()
        .unwrap_or(0);
    Netlist::from_parts(doc.wires, cbits, ops, registers)
}

fn gate_doc(op: &Op) -> GateDoc {
    let cbit = match op {
        Op::Gate(g) => g.cbit().map(|c| c.0),
        Op::Macro(_) => None,
    };
    GateDoc {
        kind: op.kind().to_string(),
        wires: op.wires().iter().map(|w| w.0).collect(),
        cbit,
    }
}

fn parse_gate(doc: &GateDoc) -> Result<Op> {
    let w: Vec<WireId> = doc.wires.iter().map(|&w| WireId(w)).collect();
    let arity = |n: usize| -> Result<()> {
        if w.len() == n {
            Ok(())
        } else {
            Err(Error::Format(format!(
                "gate `{}` takes {n} wires, got {}",
                doc.kind,
                w.len()
            )))
        }
    };
    let cbit = || {
        doc.cbit
            .map(ClassicalBit)
            .ok_or_else(|| Error::Format(format!("gate `{}` needs a cbit", doc.kind)))
    };
    let op: Op = match doc.kind.as_str() {
        "h" | "s" | "sdg" | "t" | "tdg" | "x" | "z" | "prep0" | "prepT" => {
            arity(1)?;
            let q = w[0];
            Op::Gate(match doc.kind.as_str() {
                "h" => Gate::H(q),
                "s" => Gate::S(q),
                "sdg" => Gate::Sdg(q),
                "t" => Gate::T(q),
                "tdg" => Gate::Tdg(q),
                "x" => Gate::X(q),
                "z" => Gate::Z(q),
                "prep0" => Gate::PrepZero(q),
                _ => Gate::PrepMagicT(q),
            })
        }
        "cx" => {
            arity(2)?;
            Op::Gate(Gate::Cnot {
                control: w[0],
                target: w[1],
            })
        }
        "cz" => {
            arity(2)?;
            Op::Gate(Gate::Cz {
                control: w[0],
                target: w[1],
            })
        }
        "mx" => {
            arity(1)?;
            Op::Gate(Gate::MeasureX {
                target: w[0],
                cbit: cbit()?,
            })
        }
        "ccz_classical" => {
            arity(2)?;
            Op::Gate(Gate::ClassicalCz {
                cbit: cbit()?,
                control: w[0],
                target: w[1],
            })
        }
        "and" | "unand" => {
            arity(3)?;
            let (x, y, target) = (w[0], w[1], w[2]);
            Op::Macro(if doc.kind == "and" {
                Macro::LogicalAnd { x, y, target }
            } else {
                Macro::UncomputeAnd { x, y, target }
            })
        }
        "add" => {
            if w.len() < 4 {
                return Err(Error::Format(format!(
                    "adder needs at least 4 wires, got {}",
                    w.len()
                )));
            }
            let m = w.len() / 2;
            let carry = (w.len() % 2 == 1).then(|| w[2 * m]);
            Op::Macro(Macro::AddInPlace {
                a: w[..m].to_vec(),
                b: w[m..2 * m].to_vec(),
                carry,
            })
        }
        other => return Err(Error::Format(format!("unknown gate kind `{other}`"))),
    };
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Init;

    #[test]
    fn round_trips_macros_and_primitives() {
        let mut nl = Netlist::new();
        let a = nl.alloc_register("a", 3, Init::Input).unwrap();
        let b = nl.alloc_register("b", 3, Init::Zero).unwrap();
        let c = nl.alloc_ancilla(Init::Input);
        nl.push(Macro::AddInPlace {
            a: a.clone(),
            b: b.clone(),
            carry: Some(c),
        })
        .unwrap();
        nl.push(Macro::AddInPlace {
            a: a.clone(),
            b: b.clone(),
            carry: None,
        })
        .unwrap();
        let bit = nl.alloc_cbit();
        nl.gate(Gate::MeasureX {
            target: c,
            cbit: bit,
        })
        .unwrap();
        nl.gate(Gate::ClassicalCz {
            cbit: bit,
            control: a[0],
            target: a[1],
        })
        .unwrap();
        nl.alias_register("sum", b).unwrap();
        let text = to_json(&nl);
        let back = from_json(&text).unwrap();
        assert_eq!(back, nl);
        assert!(back.registers().is_alias("sum"));
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn rejects_unknown_kinds_and_bad_wires() {
        let bad = r#"{"wires":2,"registers":{},"gates":[{"kind":"ccx","wires":[0,1]}]}"#;
        assert!(matches!(from_json(bad), Err(Error::Format(_))));
        let oob = r#"{"wires":2,"registers":{},"gates":[{"kind":"cx","wires":[0,5]}]}"#;
        assert!(matches!(from_json(oob), Err(Error::UnallocatedWire(..))));
        let no_bit = r#"{"wires":1,"registers":{},"gates":[{"kind":"mx","wires":[0]}]}"#;
        assert!(from_json(no_bit).is_err());
    }
}
