use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qsquare::blocks::build_adder_in_place;
use qsquare::cost::{
    baseline_costs, measure, ratios_table, reconcile, to_csv, to_table, CostReport, Design,
};
use qsquare::ir::{expand, to_json, to_qasm, Init, Macro, Netlist};
use qsquare::sim::{verify_equivalence, Engine, Probe, VerificationReport};
use qsquare::synth::{output_bit_map, synthesize_squarer};

/// Synthesize, verify and cost garbage-free quantum squaring circuits.
#[derive(Parser)]
#[command(name = "qsq", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the squarer for an n-bit operand and write it out.
    Synth {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SynthFormat::Json)]
        format: SynthFormat,
        /// Lower macros to Clifford+T gates (always on for qasm).
        #[arg(long)]
        expanded: bool,
    },
    /// Check squarers over a width range, e.g. `6` or `5..8` (inclusive).
    Verify {
        range: String,
        #[arg(long, value_enum, default_value_t = Mode::BasisExhaustive)]
        mode: Mode,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Corrupt the netlist under test, e.g. `drop-gate:12`.
        #[arg(long)]
        mutate: Option<String>,
    },
    /// Tabulate closed-form and measured costs against the baseline designs.
    Compare {
        range: Option<String>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "proposed,thapliyal,nagamani-osu"
        )]
        designs: Vec<String>,
        /// Print the asymptotic reduction percentages.
        #[arg(long)]
        ratios: bool,
        /// Write the CSV export here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CompareFormat::Table)]
        format: CompareFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthFormat {
    Json,
    Qasm,
    Grid,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    BasisExhaustive,
    StatevectorBlocks,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompareFormat {
    Table,
    Csv,
}

enum Failure {
    Io(String),
    Usage(String),
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Verify(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Usage(m) | Failure::Verify(m) => m,
        }
    }
}

impl From<qsquare::Error> for Failure {
    fn from(e: qsquare::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("QSQ_THREADS") {
        match t.parse::<usize>() {
            Ok(k) if k > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
            _ => {
                eprintln!("error: QSQ_THREADS must be a positive integer, got `{t}`");
                return ExitCode::from(2);
            }
        }
    }
    let result = match cli.cmd {
        Cmd::Synth {
            n,
            out,
            format,
            expanded,
        } => synth(n, out.as_deref(), format, expanded),
        Cmd::Verify {
            range,
            mode,
            out,
            mutate,
        } => verify(&range, mode, out.as_deref(), mutate.as_deref()),
        Cmd::Compare {
            range,
            designs,
            ratios,
            out,
            format,
        } => compare(range.as_deref(), &designs, ratios, out.as_deref(), format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, Failure> {
    let bad = || Failure::Usage(format!("invalid width range `{s}` (use N or A..B)"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let r = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.trim_start_matches('='))?,
        None => {
            let n = num(s)?;
            n..=n
        }
    };
    if r.is_empty() {
        return Err(Failure::Usage(format!("width range `{s}` is empty")));
    }
    Ok(r)
}

fn synth(n: usize, out: Option<&Path>, format: SynthFormat, expanded: bool) -> CmdResult {
    let c = synthesize_squarer(n)?;
    let text = match format {
        SynthFormat::Grid => c.grid.dump(),
        SynthFormat::Json if expanded => to_json(&expand(&c.netlist)?),
        SynthFormat::Json => to_json(&c.netlist),
        SynthFormat::Qasm => to_qasm(&expand(&c.netlist)?)?,
    };
    emit(out, &text)
}

fn parse_mutation(spec: Option<&str>) -> Result<Option<usize>, Failure> {
    let Some(spec) = spec else { return Ok(None) };
    spec.strip_prefix("drop-gate:")
        .and_then(|k| k.parse().ok())
        .map(Some)
        .ok_or_else(|| Failure::Usage(format!("unknown mutation `{spec}` (use drop-gate:K)")))
}

fn mutated(nl: Netlist, drop: Option<usize>) -> Result<Netlist, Failure> {
    match drop {
        None => Ok(nl),
        Some(k) if k < nl.ops().len() => Ok(nl.without_op(k)),
        Some(k) => Err(Failure::Usage(format!(
            "drop-gate:{k} is out of range (netlist has {} ops)",
            nl.ops().len()
        ))),
    }
}

fn verify(range: &str, mode: Mode, out: Option<&Path>, mutate: Option<&str>) -> CmdResult {
    let widths = parse_range(range)?;
    let drop = parse_mutation(mutate)?;
    if *widths.start() <= 4 {
        return Err(qsquare::Error::UnsupportedWidth(*widths.start()).into());
    }
    if *widths.end() > 16 {
        return Err(Failure::Usage(format!(
            "exhaustive verification supports n up to 16, got {}",
            widths.end()
        )));
    }
    let mut total = VerificationReport::default();
    if mode != Mode::StatevectorBlocks {
        for n in widths.clone() {
            let c = synthesize_squarer(n)?;
            let probe = Probe {
                inputs: c.inputs().to_vec(),
                outputs: output_bit_map(&c).to_vec(),
            };
            let nl = mutated(c.netlist, drop)?;
            let r = verify_equivalence(&nl, &probe, &|a| a * a, Engine::Basis)?.with_width(n);
            println!(
                "basis n={n}: {} inputs, {} mismatches",
                r.inputs_checked,
                r.mismatches.len()
            );
            total.merge(r);
        }
    }
    if mode != Mode::BasisExhaustive {
        for (name, nl, probe, reference) in blocks() {
            let nl = mutated(expand(&nl)?, drop)?;
            let r = verify_equivalence(&nl, &probe, reference.as_ref(), Engine::Statevector)?;
            println!(
                "statevector {name}: {} inputs, {} mismatches",
                r.inputs_checked,
                r.mismatches.len()
            );
            let mut r = r;
            for m in &mut r.mismatches {
                let note = m.note.take().unwrap_or_default();
                m.note = Some(format!("{name}: {note}"));
            }
            total.merge(r);
        }
    }
    if let Some(p) = out {
        emit(Some(p), &total.to_json())?;
    }
    match total.mismatches.first() {
        None => Ok(()),
        Some(m) => {
            let at = m.n.map(|n| format!("n={n}, ")).unwrap_or_default();
            Err(Failure::Verify(format!(
                "{} mismatches; first at {at}input {}: expected {}, got {} ({})",
                total.mismatches.len(),
                m.input,
                m.expected,
                m.got.map_or("-".to_string(), |g| g.to_string()),
                m.note.as_deref().unwrap_or("")
            )))
        }
    }
}

type Reference = Box<dyn Fn(u64) -> u64 + Sync>;

/// Blocks small enough for the dense engine: the AND, AND followed by its uncomputation,
/// and adders up to four bits.
fn blocks() -> Vec<(String, Netlist, Probe, Reference)> {
    let mut out: Vec<(String, Netlist, Probe, Reference)> = Vec::new();
    for uncompute in [false, true] {
        let mut nl = Netlist::new();
        let w = nl
            .alloc_register("xy", 2, Init::Input)
            .expect("fresh netlist");
        let t = qsquare::blocks::build_logical_and(&mut nl, w[0], w[1]).expect("valid wires");
        let (name, outputs, reference): (&str, _, Reference) = if uncompute {
            nl.push(Macro::UncomputeAnd {
                x: w[0],
                y: w[1],
                target: t,
            })
            .expect("valid wires");
            ("and+unand", w.clone(), Box::new(|v| v))
        } else {
            (
                "and",
                vec![w[0], w[1], t],
                Box::new(|v| v | (v & (v >> 1) & 1) << 2),
            )
        };
        let probe = Probe { inputs: w, outputs };
        out.push((name.to_string(), nl, probe, reference));
    }
    for m in 2..=4 {
        for carry in [true, false] {
            let mut nl = Netlist::new();
            let a = nl
                .alloc_register("a", m, Init::Input)
                .expect("fresh netlist");
            let b = nl
                .alloc_register("b", m, Init::Input)
                .expect("fresh netlist");
            let c = build_adder_in_place(&mut nl, &a, &b, carry).expect("valid widths");
            let mut inputs = a.clone();
            inputs.extend(&b);
            let mut outputs = inputs.clone();
            outputs.extend(c);
            let mask = (1u64 << m) - 1;
            let keep = if carry { u64::MAX } else { mask };
            let reference: Reference = Box::new(move |v| {
                let (x, y) = (v & mask, v >> m);
                x | ((x + y) & keep) << m
            });
            let name = format!("adder m={m}{}", if carry { " +carry" } else { "" });
            out.push((name, nl, Probe { inputs, outputs }, reference));
        }
    }
    out
}

fn compare(
    range: Option<&str>,
    designs: &[String],
    ratios: bool,
    out: Option<&Path>,
    format: CompareFormat,
) -> CmdResult {
    let designs = designs
        .iter()
        .map(|d| d.parse::<Design>())
        .collect::<Result<Vec<_>, _>>()?;
    if range.is_none() && !ratios {
        return Err(Failure::Usage(
            "compare needs a width range, --ratios, or both".into(),
        ));
    }
    let mut reports: Vec<CostReport> = Vec::new();
    if let Some(range) = range {
        for n in parse_range(range)? {
            for &d in &designs {
                let r = match d {
                    Design::Proposed => reconcile(&measure(&synthesize_squarer(n)?)?, n)?,
                    other => baseline_costs(other, n)?,
                };
                reports.push(r);
            }
        }
    }
    let csv = to_csv(&reports);
    if let Some(p) = out {
        emit(Some(p), &csv)?;
    }
    let mut text = String::new();
    match format {
        CompareFormat::Csv if !reports.is_empty() => text.push_str(&csv),
        CompareFormat::Csv => {}
        CompareFormat::Table => {
            text.push_str(&to_table(&reports));
            for r in reports.iter().filter(|r| r.design == Design::Proposed) {
                for (m, v) in &r.metrics {
                    let (Some(d), Some(cause)) = (v.delta, v.cause) else {
                        continue;
                    };
                    let predicted = v
                        .predicted_delta
                        .map(|p| format!(", predicted {p:+}"))
                        .unwrap_or_default();
                    text.push_str(&format!(
                        "n={} {}: measured {:+} vs closed form ({}{predicted})\n",
                        r.n,
                        m.name(),
                        d,
                        cause.name()
                    ));
                }
            }
            if !reports.is_empty() && ratios {
                text.push('\n');
            }
        }
    }
    if ratios {
        text.push_str(&ratios_table());
    }
    emit(None, &text)
}
