use crate::ir::WireId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unsupported width n={0}: squaring requires an operand of more than 4 bits (n > 4)")]
    UnsupportedWidth(usize),

    #[error("register `{0}` already exists")]
    DuplicateRegister(String),
    #[error("register `{0}` has zero width")]
    ZeroWidth(String),
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("{0} is not allocated (netlist has {1} wires)")]
    UnallocatedWire(WireId, u32),
    #[error("classical bit c{0} is not allocated")]
    UnallocatedBit(u32),
    #[error("gate `{kind}` uses {wire} more than once")]
    RepeatedWire { kind: &'static str, wire: WireId },
    #[error("adder operands have different widths ({0} vs {1})")]
    WidthMismatch(usize, usize),
    #[error("adder width {0} is below the minimum of 2")]
    AdderTooNarrow(usize),
    #[error("netlist still contains macro operations; expand it before {0}")]
    NotExpanded(&'static str),

    #[error(
        "op #{op}: uncompute-misuse on {target}: expected x AND y = {expected}, found {found}"
    )]
    UncomputeMisuse {
        op: usize,
        target: WireId,
        expected: bool,
        found: bool,
    },
    #[error("op #{op}: non-classical gate `{kind}` in basis mode")]
    NonClassicalGate { op: usize, kind: &'static str },
    #[error("op #{op}: preparation on {wire}, which is not in |0>")]
    DirtyPreparation { op: usize, wire: WireId },
    #[error("op #{op}: logical-AND target {wire} is not a fresh |0> wire")]
    DirtyAndTarget { op: usize, wire: WireId },
    #[error("statevector simulation supports at most {max} wires, netlist has {got}")]
    TooManyWires { max: u32, got: u32 },
    #[error("op #{op}: state norm drifted by {drift:e}")]
    NormDrift { op: usize, drift: f64 },
    #[error("op #{op}: forced measurement outcome {outcome} has zero probability")]
    ImpossibleBranch { op: usize, outcome: bool },
    #[error("initial state lists {got} wires, netlist has {expected}")]
    InitialStateWidth { expected: usize, got: usize },

    #[error("grid cell T({row},{col}) written twice ({existing} then {new})")]
    CellOverwrite {
        row: usize,
        col: usize,
        existing: String,
        new: String,
    },
    #[error("grid cell T({row},{col}) lies outside the grid")]
    CellOutOfRange { row: usize, col: usize },
    #[error("grid cell T({row},{col}) was never assigned")]
    CellUnassigned { row: usize, col: usize },

    #[error("unknown design `{0}`")]
    UnknownDesign(String),
    #[error("measured costs are for n={measured}, closed forms requested for n={requested}")]
    WidthDisagreement { measured: usize, requested: usize },

    #[error("malformed netlist document: {0}")]
    Format(String),
}
