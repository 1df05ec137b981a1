use super::{Gate, Macro, Netlist, Op};
use crate::blocks;
use crate::error::Result;

/// Lowers every macro to primitive Clifford+T gates. Idempotent.
pub fn expand(netlist: &Netlist) -> Result<Netlist> {
    lower_ands(&expand_adders(netlist)?)
}

/// Lowers only `AddInPlace` blocks into CNOTs plus logical-AND / uncompute-AND macros. The
/// result is still classical and runs on the basis-state engine.
///
/// Under [`AncillaPolicy::Recycle`](super::AncillaPolicy::Recycle) the free-wire pool is
/// rebuilt while replaying, so adder carries only reuse wires that are idle at that point.
pub fn expand_adders(netlist: &Netlist) -> Result<Netlist> {
    let mut out = netlist.empty_like();
    for op in netlist.ops() {
        match op {
            Op::Macro(Macro::AddInPlace { a, b, carry }) => {
                blocks::lower_adder(&mut out, a, b, *carry)?;
            }
            Op::Macro(Macro::UncomputeAnd { target, .. }) => {
                out.push(op.clone())?;
                out.release(*target);
            }
            Op::Macro(Macro::LogicalAnd { target: w, .. })
            | Op::Gate(Gate::PrepZero(w) | Gate::PrepMagicT(w)) => {
                out.claim(*w);
                out.push(op.clone())?;
            }
            other => out.push(other.clone())?,
        }
    }
    Ok(out)
}

fn lower_ands(netlist: &Netlist) -> Result<Netlist> {
    let mut out = netlist.empty_like();
    for op in netlist.ops() {
        match op {
            Op::Macro(Macro::LogicalAnd { x, y, target }) => {
                let (x, y, t) = (*x, *y, *target);
                out.gate(Gate::PrepMagicT(t))?;
                out.cnot(x, t)?;
                out.cnot(y, t)?;
                out.cnot(t, x)?;
                out.cnot(t, y)?;
                out.gate(Gate::Tdg(x))?;
                out.gate(Gate::Tdg(y))?;
                out.gate(Gate::T(t))?;
                out.cnot(t, x)?;
                out.cnot(t, y)?;
                out.gate(Gate::H(t))?;
                out.gate(Gate::S(t))?;
            }
            Op::Macro(Macro::UncomputeAnd { x, y, target }) => {
                let cbit = out.alloc_cbit();
                out.gate(Gate::MeasureX {
                    target: *target,
                    cbit,
                })?;
                out.gate(Gate::ClassicalCz {
                    cbit,
                    control: *x,
                    target: *y,
                })?;
            }
            Op::Macro(Macro::AddInPlace { .. }) => {
                unreachable!("adders are lowered before AND blocks")
            }
            Op::Gate(g) => out.gate(*g)?,
        }
    }
    Ok(out)
}
