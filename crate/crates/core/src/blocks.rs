//! Builders for the three sub-circuits the squarer is made of, plus per-block resource
//! budgets.
//!
//! The in-place adder is a ripple-carry chain of temporary logical-ANDs. For bit `i > 0` the
//! carry `c[i+1] = maj(a[i], b[i], c[i])` is produced by
//!
//! ```text
//! cx c[i] -> a[i]; cx c[i] -> b[i]; c[i+1] = AND(a[i], b[i]); cx c[i] -> c[i+1]
//! ```
//!
//! and the mirrored sweep undoes each carry with an uncompute-AND before writing the sum bit
//! into `b[i]`. Bit 0 has no incoming carry, so `c[1] = AND(a[0], b[0])`. With a carry-out
//! the last AND writes straight into the carry wire and is kept; without one the top bit only
//! receives its sum. That gives `m` ANDs with a carry-out and `m - 1` without.

use crate::error::{Error, Result};
use crate::ir::{
    count, expand, schedule_asap, CountClass, DepthClass, Init, Macro, Netlist, WireId,
};

/// Allocates a fresh target and appends `target := x AND y`.
pub fn build_logical_and(netlist: &mut Netlist, x: WireId, y: WireId) -> Result<WireId> {
    if x == y {
        return Err(Error::RepeatedWire {
            kind: "and",
            wire: x,
        });
    }
    let target = netlist.alloc_ancilla(Init::Input);
    netlist.push(Macro::LogicalAnd { x, y, target })?;
    Ok(target)
}

/// Appends the uncompute-AND for `target = x AND y` and returns `target` to the ancilla pool.
pub fn build_uncompute_and(
    netlist: &mut Netlist,
    x: WireId,
    y: WireId,
    target: WireId,
) -> Result<()> {
    netlist.push(Macro::UncomputeAnd { x, y, target })?;
    netlist.release(target);
    Ok(())
}

/// Appends `b += a` over least-significant-first wire lists. Returns the carry-out wire when
/// one is requested. Without a carry-out the caller guarantees the sum fits in `m` bits.
pub fn build_adder_in_place(
    netlist: &mut Netlist,
    a: &[WireId],
    b: &[WireId],
    with_carry_out: bool,
) -> Result<Option<WireId>> {
    if a.len() != b.len() {
        return Err(Error::WidthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(Error::AdderTooNarrow(a.len()));
    }
    if let Some(&w) = a.iter().find(|w| b.contains(w)) {
        return Err(Error::RepeatedWire {
            kind: "add",
            wire: w,
        });
    }
    let carry = with_carry_out.then(|| netlist.alloc_ancilla(Init::Input));
    netlist.push(Macro::AddInPlace {
        a: a.to_vec(),
        b: b.to_vec(),
        carry,
    })?;
    Ok(carry)
}

/// Number of logical-ANDs inside one adder.
pub fn adder_and_count(m: usize, with_carry_out: bool) -> usize {
    if with_carry_out {
        m
    } else {
        m - 1
    }
}

/// Lowers one adder into CNOTs and AND/uncompute-AND macros on `out`.
pub(crate) fn lower_adder(
    out: &mut Netlist,
    a: &[WireId],
    b: &[WireId],
    carry_out: Option<WireId>,
) -> Result<()> {
    let m = a.len();
    if m != b.len() {
        return Err(Error::WidthMismatch(m, b.len()));
    }
    if m < 2 {
        return Err(Error::AdderTooNarrow(m));
    }
    // carries[i] holds c[i]; c[0] does not exist.
    let top = if carry_out.is_some() { m } else { m - 1 };
    let mut carries: Vec<Option<WireId>> = vec![None; top + 1];

    let c1 = next_carry(out, 1, m, carry_out);
    out.push(Macro::LogicalAnd {
        x: a[0],
        y: b[0],
        target: c1,
    })?;
    carries[1] = Some(c1);

    for i in 1..top {
        let ci = carries[i].expect("carry computed");
        out.cnot(ci, a[i])?;
        out.cnot(ci, b[i])?;
        let next = next_carry(out, i + 1, m, carry_out);
        out.push(Macro::LogicalAnd {
            x: a[i],
            y: b[i],
            target: next,
        })?;
        out.cnot(ci, next)?;
        carries[i + 1] = Some(next);
    }

    let hi = m - 1;
    let c_hi = carries[hi].expect("carry into the top bit");
    if carry_out.is_some() {
        // a[hi], b[hi] carry c[hi] from the forward sweep.
        out.cnot(c_hi, a[hi])?;
        out.cnot(a[hi], b[hi])?;
    } else {
        out.cnot(c_hi, b[hi])?;
        out.cnot(a[hi], b[hi])?;
    }

    for i in (1..hi).rev() {
        let ci = carries[i].expect("carry computed");
        let next = carries[i + 1].expect("carry computed");
        out.cnot(ci, next)?;
        out.push(Macro::UncomputeAnd {
            x: a[i],
            y: b[i],
            target: next,
        })?;
        out.release(next);
        out.cnot(ci, a[i])?;
        out.cnot(a[i], b[i])?;
    }
    out.push(Macro::UncomputeAnd {
        x: a[0],
        y: b[0],
        target: c1,
    })?;
    out.release(c1);
    out.cnot(a[0], b[0])?;
    Ok(())
}

fn next_carry(out: &mut Netlist, index: usize, m: usize, carry_out: Option<WireId>) -> WireId {
    match carry_out {
        Some(c) if index == m => c,
        _ => out.alloc_ancilla(Init::Input),
    }
}

/// Resource figures of one expanded block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BlockBudget {
    pub t_count: usize,
    pub t_depth: usize,
    pub cnot_count: usize,
    pub cnot_depth: usize,
    pub ancillae: usize,
}

/// Signed `measured - reference` per field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BudgetDelta {
    pub t_count: i64,
    pub t_depth: i64,
    pub cnot_count: i64,
    pub cnot_depth: i64,
    pub ancillae: i64,
}

impl BlockBudget {
    pub fn delta_from(&self, reference: &BlockBudget) -> BudgetDelta {
        let d = |x: usize, y: usize| x as i64 - y as i64;
        BudgetDelta {
            t_count: d(self.t_count, reference.t_count),
            t_depth: d(self.t_depth, reference.t_depth),
            cnot_count: d(self.cnot_count, reference.cnot_count),
            cnot_depth: d(self.cnot_depth, reference.cnot_depth),
            ancillae: d(self.ancillae, reference.ancillae),
        }
    }

    /// Measures an expanded netlist; `ancillae` counts wires beyond the first `inputs`.
    pub fn measure(expanded: &Netlist, inputs: usize) -> Result<BlockBudget> {
        Ok(BlockBudget {
            t_count: count(expanded, CountClass::T)?,
            t_depth: schedule_asap(expanded, DepthClass::T)?,
            cnot_count: count(expanded, CountClass::Cnot)?,
            cnot_depth: schedule_asap(expanded, DepthClass::Cnot)?,
            ancillae: (expanded.wire_count() as usize).saturating_sub(inputs),
        })
    }
}

impl BudgetDelta {
    pub fn is_zero(&self) -> bool {
        *self == BudgetDelta::default()
    }
}

/// How many logical-ANDs an `m`-bit adder is charged with in the closed-form accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AndConvention {
    /// `m` ANDs per `m`-bit adder (the polynomial derivations).
    PerBit,
    /// `m - 1` ANDs, i.e. `4(m-1)` T gates (the baseline comparison).
    PerCarry,
}

pub fn reference_and_count(m: usize, convention: AndConvention) -> usize {
    match convention {
        AndConvention::PerBit => m,
        AndConvention::PerCarry => m - 1,
    }
}

/// Published per-adder budget: T = 4(m-1), T-depth = 2(m-1), CNOT = 12m-9,
/// CNOT-depth = 8m-6, one ancilla per AND under the per-bit convention.
pub fn reference_adder_budget(m: usize) -> BlockBudget {
    BlockBudget {
        t_count: 4 * (m - 1),
        t_depth: 2 * (m - 1),
        cnot_count: 12 * m - 9,
        cnot_depth: 8 * m - 6,
        ancillae: m,
    }
}

/// Published logical-AND budget.
pub fn reference_and_budget() -> BlockBudget {
    BlockBudget {
        t_count: 4,
        t_depth: 2,
        cnot_count: 6,
        cnot_depth: 4,
        ancillae: 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdderBudgetReport {
    pub width: usize,
    pub with_carry_out: bool,
    pub and_count: usize,
    pub measured: BlockBudget,
    pub reference: BlockBudget,
    pub delta: BudgetDelta,
}

/// Builds an isolated `m`-bit adder, expands it and compares against the reference budget.
/// `ancillae` counts the carry-out wire too.
pub fn adder_budget(m: usize, with_carry_out: bool) -> Result<AdderBudgetReport> {
    let mut nl = Netlist::new();
    let a = nl.alloc_register("a", m, Init::Input)?;
    let b = nl.alloc_register("b", m, Init::Input)?;
    build_adder_in_place(&mut nl, &a, &b, with_carry_out)?;
    let ex = expand(&nl)?;
    let measured = BlockBudget::measure(&ex, 2 * m)?;
    let reference = reference_adder_budget(m);
    Ok(AdderBudgetReport {
        width: m,
        with_carry_out,
        and_count: ex_and_count(&nl)?,
        measured,
        reference,
        delta: measured.delta_from(&reference),
    })
}

fn ex_and_count(nl: &Netlist) -> Result<usize> {
    Ok(crate::ir::expand_adders(nl)?.macro_count("and"))
}

/// Measured budget of one expanded logical-AND.
pub fn and_budget() -> Result<BlockBudget> {
    let mut nl = Netlist::new();
    let w = nl.alloc_register("xy", 2, Init::Input)?;
    build_logical_and(&mut nl, w[0], w[1])?;
    BlockBudget::measure(&expand(&nl)?, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and_budget_matches_reference() {
        assert_eq!(and_budget().unwrap(), reference_and_budget());
    }

    #[test]
    fn and_rejects_equal_operands() {
        let mut nl = Netlist::new();
        let w = nl.alloc_register("w", 1, Init::Input).unwrap();
        assert!(build_logical_and(&mut nl, w[0], w[0]).is_err());
    }

    #[test]
    fn adder_argument_errors() {
        let mut nl = Netlist::new();
        let a = nl.alloc_register("a", 3, Init::Input).unwrap();
        let b = nl.alloc_register("b", 2, Init::Input).unwrap();
        assert_eq!(
            build_adder_in_place(&mut nl, &a, &b, true),
            Err(Error::WidthMismatch(3, 2))
        );
        assert_eq!(
            build_adder_in_place(&mut nl, &a[..1], &b[..1], true),
            Err(Error::AdderTooNarrow(1))
        );
        assert!(matches!(
            build_adder_in_place(&mut nl, &a[..2], &a[1..3], false),
            Err(Error::RepeatedWire { .. })
        ));
    }

    #[test]
    fn adder_and_counts_are_deterministic() {
        for m in 2..12 {
            for carry in [true, false] {
                let r = adder_budget(m, carry).unwrap();
                assert_eq!(r.and_count, adder_and_count(m, carry));
                assert_eq!(r.measured.t_count, 4 * r.and_count);
            }
        }
    }

    #[test]
    fn adder_cnot_counts() {
        // 6 CNOTs per AND, 3 per carry link each way, 2 for the top sum, 1 for bit 0.
        for m in 2..12 {
            assert_eq!(
                adder_budget(m, true).unwrap().measured.cnot_count,
                12 * m - 6
            );
            assert_eq!(
                adder_budget(m, false).unwrap().measured.cnot_count,
                12 * m - 15
            );
        }
    }

    #[test]
    fn nine_bit_first_stage_against_reference() {
        let r = adder_budget(9, true).unwrap();
        assert_eq!(r.reference.cnot_count, 99);
        assert_eq!(r.reference.cnot_depth, 66);
        assert_eq!(r.delta.cnot_count, 3);
        assert_eq!(r.delta.t_count, 4);
        assert_eq!(r.measured.ancillae, 9);
    }
}
