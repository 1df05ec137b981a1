use std::fmt::Write;

use super::{Gate, Netlist, Op};
use crate::error::{Error, Result};

/// OpenQASM 2.0 text, one gate per line. Each classical bit becomes its own one-bit register
/// `m{k}` so classically controlled gates can use `if(m{k}==1)`.
pub fn to_qasm(netlist: &Netlist) -> Result<String> {
    if !netlist.is_expanded() {
        return Err(Error::NotExpanded("QASM export"));
    }
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", netlist.wire_count()).unwrap();
    for k in 0..netlist.cbit_count() {
        writeln!(out, "creg m{k}[1];").unwrap();
    }
    for op in netlist.ops() {
        let Op::Gate(g) = op else { unreachable!() };
        let line = match *g {
            Gate::H(w) => format!("h q[{}];", w.0),
            Gate::S(w) => format!("s q[{}];", w.0),
            Gate::Sdg(w) => format!("sdg q[{}];", w.0),
            Gate::T(w) => format!("t q[{}];", w.0),
            Gate::Tdg(w) => format!("tdg q[{}];", w.0),
            Gate::X(w) => format!("x q[{}];", w.0),
            Gate::Z(w) => format!("z q[{}];", w.0),
            Gate::Cnot { control, target } => format!("cx q[{}], q[{}];", control.0, target.0),
            Gate::Cz { control, target } => format!("cz q[{}], q[{}];", control.0, target.0),
            Gate::PrepZero(w) => format!("reset q[{}];", w.0),
            Gate::PrepMagicT(w) => format!("reset q[{0}]; h q[{0}]; t q[{0}];", w.0),
            Gate::MeasureX { target, cbit } => format!(
                "h q[{0}]; measure q[{0}] -> m{1}[0]; reset q[{0}];",
                target.0, cbit.0
            ),
            Gate::ClassicalCz {
                cbit,
                control,
                target,
            } => format!("if(m{}==1) cz q[{}], q[{}];", cbit.0, control.0, target.0),
        };
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{expand, Init, Macro};

    #[test]
    fn exports_expanded_and() {
        let mut nl = Netlist::new();
        let w = nl.alloc_register("w", 2, Init::Input).unwrap();
        let t = nl.alloc_ancilla(Init::Input);
        nl.push(Macro::LogicalAnd {
            x: w[0],
            y: w[1],
            target: t,
        })
        .unwrap();
        assert!(to_qasm(&nl).is_err());
        let text = to_qasm(&expand(&nl).unwrap()).unwrap();
        assert!(text.contains("qreg q[3];"));
        assert!(text.contains("cx q[0], q[2];"));
        assert_eq!(text.lines().filter(|l| l.starts_with("cx ")).count(), 6);
    }
}
