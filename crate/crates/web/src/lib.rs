//! Browser bindings: grid layout, simulated squaring, and cost tables for an n-bit squarer.

use serde_json::json;
use wasm_bindgen::prelude::*;

use qsquare::cost::{baseline_costs, measure, reconcile, Design, Metric};
use qsquare::sim::{run_basis, BasisAssignment};
use qsquare::synth::{output_bit_map, synthesize_squarer};

/// Largest width the page offers; keeps synthesis and measurement interactive.
pub const MAX_N: usize = 24;

fn check(n: usize) -> Result<(), String> {
    if n > MAX_N {
        return Err(format!("n={n} is above the demo limit of {MAX_N}"));
    }
    Ok(())
}

/// Operand grid as JSON: `{"n", "rows": [[cell, ...], ...], "adder_widths"}`.
pub fn grid_json(n: usize) -> Result<String, String> {
    check(n)?;
    let c = synthesize_squarer(n).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<String>> = c
        .grid
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| e.to_string()).collect())
        .collect();
    Ok(json!({
        "n": n,
        "rows": rows,
        "adder_widths": c.grid.adder_widths(),
        "and_gates": c.product_count(),
    })
    .to_string())
}

/// Runs the synthesized circuit on `a` and reports the result register and ancilla state.
pub fn square_json(n: usize, a: u64) -> Result<String, String> {
    check(n)?;
    if n < 64 && a >> n != 0 {
        return Err(format!("{a} does not fit in {n} bits"));
    }
    let c = synthesize_squarer(n).map_err(|e| e.to_string())?;
    let mut s = BasisAssignment::zeros(&c.netlist);
    s.load(c.inputs(), u128::from(a));
    let run = run_basis(&c.netlist, &s).map_err(|e| e.to_string())?;
    let out = run.state;
    let p = out.read(output_bit_map(&c));
    let mut rest = out.clone();
    rest.load(c.inputs(), 0);
    rest.load(output_bit_map(&c), 0);
    let dirty = rest.bits().iter().filter(|&&b| b).count();
    let bits: String = output_bit_map(&c)
        .iter()
        .rev()
        .map(|&w| if out.get(w) { '1' } else { '0' })
        .collect();
    Ok(json!({
        "n": n,
        "a": a,
        "square": p.to_string(),
        "expected": (u128::from(a) * u128::from(a)).to_string(),
        "p_bits": bits,
        "input_restored": out.read(c.inputs()) == u128::from(a),
        "dirty_ancillae": dirty,
        "wires": c.netlist.wire_count(),
    })
    .to_string())
}

/// Closed-form and measured costs of the proposed design plus the two baselines.
pub fn costs_json(n: usize) -> Result<String, String> {
    check(n)?;
    let c = synthesize_squarer(n).map_err(|e| e.to_string())?;
    let measured = measure(&c).map_err(|e| e.to_string())?;
    let proposed = reconcile(&measured, n).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for m in Metric::ALL {
        let v = proposed.get(m);
        let base = |d| baseline_costs(d, n).map(|r| r.closed(m).to_string());
        rows.push(json!({
            "metric": m.label(),
            "closed_form": v.closed_form.to_string(),
            "measured": v.measured.map(|x| x.to_string()),
            "cause": v.cause.map(|c| c.name()),
            "thapliyal": base(Design::Thapliyal).map_err(|e| e.to_string())?,
            "nagamani_osu": base(Design::NagamaniOsu).map_err(|e| e.to_string())?,
        }));
    }
    Ok(json!({ "n": n, "rows": rows }).to_string())
}

#[wasm_bindgen]
pub fn grid(n: usize) -> Result<String, JsValue> {
    grid_json(n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn square(n: usize, a: u32) -> Result<String, JsValue> {
    square_json(n, u64::from(a)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn costs(n: usize) -> Result<String, JsValue> {
    costs_json(n).map_err(|e| JsValue::from_str(&e))
}
