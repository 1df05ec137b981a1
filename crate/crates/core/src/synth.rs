//! Assembles the full squaring circuit.
//!
//! 1. One logical-AND per cross product `a_i a_j`, one CNOT copy per bit `a_1..a_{n-1}`.
//! 2. Grid cells are bound to those wires; zero cells get fresh `|0>` wires.
//! 3. `T1 += T0` at width `2n-3` with a carry-out. The two low sum bits are result bits 2, 3.
//! 4. For each further row `Tk`, the remaining sum bits `V` absorb `Tk` without a carry-out,
//!    releasing two more result bits; the last stage releases all of its bits.
//! 5. The copies in `T0` are cleared with CNOTs and every remaining product cell is
//!    uncomputed, so only `A` and the result wires are non-zero at the end.

use std::collections::BTreeMap;

use crate::blocks::{build_adder_in_place, build_logical_and, build_uncompute_and};
use crate::error::Result;
use crate::ir::{AncillaPolicy, Init, Netlist, WireId};
use crate::layout::{arrange, check_width, GridEntry, OperandGrid};

/// One addition of the cascade: `target += addend`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdderStage {
    pub width: usize,
    /// Grid row added in this stage.
    pub addend_row: usize,
    pub addend: Vec<WireId>,
    pub target: Vec<WireId>,
    pub carry: Option<WireId>,
}

/// Why an entry of the reference uncomputation schedule was not applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    /// The referenced cell lies outside the grid.
    OutOfGrid,
    /// The referenced cell holds a zero pad or a copy, not a product.
    NotAProduct(GridEntry),
    /// Row `T1` carries sum bits after the first addition.
    SumRow,
    /// The cell was already uncomputed earlier in the schedule.
    Repeated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedRef {
    pub row: usize,
    pub col: isize,
    pub reason: SkipReason,
}

/// What the uncomputation step did, per grid cell `(row, col)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UncomputeLog {
    /// Cells cleared by the reference schedule, in order.
    pub scheduled: Vec<(usize, usize)>,
    pub skipped: Vec<SkippedRef>,
    /// Products the schedule missed, cleared afterwards in reverse order of computation.
    pub fallback: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct SquarerCircuit {
    pub n: usize,
    pub netlist: Netlist,
    pub grid: OperandGrid,
    pub stages: Vec<AdderStage>,
    /// Wire of each grid cell, same shape as the grid.
    pub cell_wires: Vec<Vec<WireId>>,
    pub uncompute: UncomputeLog,
    /// Result bit 1, which is always 0.
    pub zero_wire: WireId,
    output: Vec<WireId>,
}

impl SquarerCircuit {
    pub fn inputs(&self) -> &[WireId] {
        self.netlist
            .register("A")
            .expect("synthesized circuits carry an A register")
    }

    /// Number of step-1 logical-ANDs.
    pub fn product_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Number of cascade stages without a carry-out.
    pub fn carry_less_stages(&self) -> usize {
        self.stages.iter().filter(|s| s.carry.is_none()).count()
    }
}

/// Result bit position -> wire. Position 0 is `a_0` itself, position 1 the constant-zero wire.
pub fn output_bit_map(circuit: &SquarerCircuit) -> &[WireId] {
    &circuit.output
}

pub fn synthesize_squarer(n: usize) -> Result<SquarerCircuit> {
    synthesize_squarer_with(n, AncillaPolicy::Fresh)
}

pub fn synthesize_squarer_with(n: usize, policy: AncillaPolicy) -> Result<SquarerCircuit> {
    check_width(n)?;
    let grid = arrange(n)?;
    let mut nl = Netlist::with_policy(policy);
    let a = nl.alloc_register("A", n, Init::Input)?;
    let zero_wire = nl.alloc_register("zero", 1, Init::Zero)?[0];

    // Step 1: products in (i, j) row-major order, each row followed by the copy of a_i.
    let mut products: BTreeMap<(usize, usize), WireId> = BTreeMap::new();
    let mut product_order: Vec<(usize, usize)> = Vec::new();
    let mut copies: BTreeMap<usize, WireId> = BTreeMap::new();
    for i in 1..n {
        for j in i..n {
            let t = build_logical_and(&mut nl, a[i - 1], a[j])?;
            products.insert((i - 1, j), t);
            product_order.push((i - 1, j));
        }
        let c = nl.alloc_ancilla(Init::Zero);
        nl.cnot(a[i], c)?;
        copies.insert(i, c);
    }

    // Steps 2-3: bind grid cells to wires.
    let mut cell_wires = Vec::with_capacity(grid.rows().len());
    for row in grid.rows() {
        let wires = row
            .iter()
            .map(|entry| match *entry {
                GridEntry::Product(i, j) => products[&(i, j)],
                GridEntry::Copy(i) => copies[&i],
                GridEntry::Zero => nl.alloc_ancilla(Init::Zero),
            })
            .collect::<Vec<_>>();
        cell_wires.push(wires);
    }
    for (k, wires) in cell_wires.iter().enumerate() {
        nl.alias_register(&format!("T{k}"), wires.clone())?;
    }

    // Step 4: T1 += T0 with carry-out.
    let mut stages = Vec::new();
    let mut output = vec![a[0], zero_wire];
    let carry = build_adder_in_place(&mut nl, &cell_wires[0], &cell_wires[1], true)?
        .expect("first stage has a carry-out");
    stages.push(AdderStage {
        width: cell_wires[0].len(),
        addend_row: 0,
        addend: cell_wires[0].clone(),
        target: cell_wires[1].clone(),
        carry: Some(carry),
    });
    output.extend_from_slice(&cell_wires[1][..2]);
    let mut remaining: Vec<WireId> = cell_wires[1][2..].to_vec();
    remaining.push(carry);
    nl.alias_register("V0", remaining.clone())?;

    // Steps 5/6: absorb rows T2.. into the remaining sum bits.
    let last = grid.last_row();
    for (k, addend) in cell_wires.iter().enumerate().skip(2) {
        debug_assert_eq!(addend.len(), remaining.len());
        build_adder_in_place(&mut nl, addend, &remaining, false)?;
        stages.push(AdderStage {
            width: addend.len(),
            addend_row: k,
            addend: addend.clone(),
            target: remaining.clone(),
            carry: None,
        });
        if k < last {
            output.extend_from_slice(&remaining[..2]);
            remaining = remaining[2..].to_vec();
            nl.alias_register(&format!("V{}", k - 1), remaining.clone())?;
        } else {
            output.extend_from_slice(&remaining);
        }
    }
    debug_assert_eq!(output.len(), 2 * n);
    nl.alias_register("P", output.clone())?;

    // Step 7: clear the copies held in the even columns of T0.
    for i in (1..=2 * n - 3).step_by(2) {
        nl.cnot(a[i.div_ceil(2)], cell_wires[0][i - 1])?;
    }

    // Step 8: uncompute the products left in T0 and T2...
    let mut log = UncomputeLog::default();
    let mut cleared: Vec<Vec<bool>> = grid.rows().iter().map(|r| vec![false; r.len()]).collect();
    for (row, col) in reference_uncompute_schedule(n) {
        let entry = usize::try_from(col)
            .ok()
            .and_then(|c| grid.cell(row, c).map(|e| (c, e)));
        let reason = match entry {
            None => Some(SkipReason::OutOfGrid),
            Some(_) if row == 1 => Some(SkipReason::SumRow),
            Some((_, e @ (GridEntry::Zero | GridEntry::Copy(_)))) => {
                Some(SkipReason::NotAProduct(e))
            }
            Some((c, _)) if cleared[row][c] => Some(SkipReason::Repeated),
            Some(_) => None,
        };
        if let Some(reason) = reason {
            log.skipped.push(SkippedRef { row, col, reason });
            continue;
        }
        let c = col as usize;
        let GridEntry::Product(i, j) = grid.row(row)[c] else {
            unreachable!()
        };
        build_uncompute_and(&mut nl, a[i], a[j], cell_wires[row][c])?;
        cleared[row][c] = true;
        log.scheduled.push((row, c));
    }

    let mut position: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for (row, entries) in grid.rows().iter().enumerate() {
        if row == 1 {
            continue;
        }
        for (c, e) in entries.iter().enumerate() {
            if let GridEntry::Product(i, j) = *e {
                position.insert((i, j), (row, c));
            }
        }
    }
    for &(i, j) in product_order.iter().rev() {
        let Some(&(row, c)) = position.get(&(i, j)) else {
            continue;
        };
        if !cleared[row][c] {
            build_uncompute_and(&mut nl, a[i], a[j], cell_wires[row][c])?;
            cleared[row][c] = true;
            log.fallback.push((row, c));
        }
    }

    Ok(SquarerCircuit {
        n,
        netlist: nl,
        grid,
        stages,
        cell_wires,
        uncompute: log,
        zero_wire,
        output,
    })
}

/// Grid cells `(row, col)` in the order the reference uncomputation schedule visits them.
/// Entries may point outside the grid or at non-product cells; see [`UncomputeLog`].
pub fn reference_uncompute_schedule(n: usize) -> Vec<(usize, isize)> {
    let ni = n as isize;
    let mut refs: Vec<(usize, isize)> = Vec::new();
    let mut push = |row: isize, col: isize| refs.push((row as usize, col));
    for i in 3..=(2 * ni - 3) {
        let odd = i % 2 == 1;
        if i < ni {
            if odd {
                push(2, i - 3);
                if i > 3 {
                    for i1 in 1..=((i + 1) / 2 - 2) {
                        push(i1 + 2, i - 3 - 2 * i1);
                    }
                }
            } else {
                push(0, i - 1);
                if i > 4 {
                    for i2 in 1..=(i / 2 - 2) {
                        push(i2 + 1, i - 1 - 2 * i2);
                    }
                }
            }
        } else if odd {
            if i != 2 * ni - 3 {
                for i3 in 1..=((2 * ni - i - 3) / 2) {
                    push(i3 + 1, i - 1 - 2 * i3);
                }
            }
        } else {
            push(0, i - 1);
            if i != 2 * ni - 4 && i != 2 * ni - 6 {
                for i4 in 2..=((2 * ni - i - 4) / 2) {
                    push(i4 + 1, i - 2 * i4 + 1);
                }
            }
        }
    }
    refs
}
