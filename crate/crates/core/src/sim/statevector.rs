use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ir::{Gate, Netlist, Op, WireId};

/// Largest netlist the dense engine accepts.
pub const MAX_WIRES: u32 = 12;

const NORM_TOL: f64 = 1e-9;
const ZERO_PROB: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireInit {
    Zero,
    MagicT,
    Basis(bool),
}

/// Which outcomes of each X-basis measurement to follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchPolicy {
    Force(bool),
    Both,
}

/// Dense state over `wires` qubits; wire `k` is bit `k` of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    wires: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(wires: u32, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << wires];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { wires, amps }
    }

    pub fn wires(&self) -> u32 {
        self.wires
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probability_one(&self, w: WireId) -> f64 {
        let bit = 1 << w.0;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Index of the first amplitude with magnitude above `tol`.
    pub fn leading_index(&self, tol: f64) -> Option<usize> {
        self.amps.iter().position(|a| a.norm() > tol)
    }

    /// The basis index and phase if the state is a single basis state within `tol`.
    pub fn as_basis_state(&self, tol: f64) -> Option<(usize, Complex64)> {
        let i = self.leading_index(tol)?;
        let rest_clean = self
            .amps
            .iter()
            .enumerate()
            .all(|(k, a)| k == i || a.norm() <= tol);
        (rest_clean && (self.amps[i].norm() - 1.0).abs() <= tol).then_some((i, self.amps[i]))
    }

    /// Equality up to one global phase, fixed by the first nonzero amplitude of `self`.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        if self.wires != other.wires {
            return false;
        }
        let Some(i) = self.leading_index(tol) else {
            return other.norm() <= tol;
        };
        if other.amps[i].norm() <= tol {
            return false;
        }
        let phase = other.amps[i] / self.amps[i];
        let phase = phase / phase.norm();
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (a * phase - b).norm() <= tol)
    }

    fn single(&mut self, w: WireId, m: [[Complex64; 2]; 2]) {
        let bit = 1 << w.0;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn phase(&mut self, w: WireId, p: Complex64) {
        let bit = 1 << w.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= p;
            }
        }
    }

    fn cnot(&mut self, c: WireId, t: WireId) {
        let (cb, tb) = (1 << c.0, 1 << t.0);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    fn cz(&mut self, c: WireId, t: WireId) {
        let mask = (1 << c.0) | (1 << t.0);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a = -*a;
            }
        }
    }

    fn hadamard(&mut self, w: WireId) {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.single(w, [[h, h], [h, -h]]);
    }

    fn t(&mut self, w: WireId, sign: f64) {
        self.phase(
            w,
            Complex64::from_polar(1.0, sign * std::f64::consts::FRAC_PI_4),
        );
    }

    /// Keeps the component with `w == outcome`, renormalized; returns its probability.
    fn project(&mut self, w: WireId, outcome: bool) -> f64 {
        let bit = 1 << w.0;
        let mut p = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) != outcome {
                *a = Complex64::new(0.0, 0.0);
            } else {
                p += a.norm_sqr();
            }
        }
        if p > 0.0 {
            let s = 1.0 / p.sqrt();
            self.amps.iter_mut().for_each(|a| *a *= s);
        }
        p
    }

    fn flip(&mut self, w: WireId) {
        let bit = 1 << w.0;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }
}

/// One measurement history and the state it leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub state: StateVector,
    pub cbits: Vec<bool>,
    pub probability: f64,
}

/// Runs an expanded netlist from a product state. Each `MeasureX` applies H, projects and
/// resets the wire to |0>; `policy` decides which outcomes are followed.
pub fn run_statevector(
    netlist: &Netlist,
    initial: &[WireInit],
    policy: BranchPolicy,
) -> Result<Vec<Branch>> {
    let wires = netlist.wire_count();
    if wires > MAX_WIRES {
        return Err(Error::TooManyWires {
            max: MAX_WIRES,
            got: wires,
        });
    }
    if !netlist.is_expanded() {
        return Err(Error::NotExpanded("statevector simulation"));
    }
    if initial.len() != wires as usize {
        return Err(Error::InitialStateWidth {
            expected: wires as usize,
            got: initial.len(),
        });
    }
    let index = initial
        .iter()
        .enumerate()
        .filter(|(_, i)| matches!(i, WireInit::Basis(true)))
        .fold(0usize, |acc, (k, _)| acc | 1 << k);
    let mut state = StateVector::basis(wires, index);
    for (k, init) in initial.iter().enumerate() {
        if *init == WireInit::MagicT {
            let w = WireId(k as u32);
            state.hadamard(w);
            state.t(w, 1.0);
        }
    }
    let start = Branch {
        state,
        cbits: vec![false; netlist.cbit_count() as usize],
        probability: 1.0,
    };
    let mut done = Vec::new();
    let mut work = vec![(0usize, start)];
    while let Some((pc, mut br)) = work.pop() {
        let mut pc = pc;
        while pc < netlist.ops().len() {
            let Op::Gate(g) = netlist.ops()[pc] else {
                unreachable!("checked expanded")
            };
            match g {
                Gate::MeasureX { target, cbit } => {
                    br.state.hadamard(target);
                    let outcomes: &[bool] = match policy {
                        BranchPolicy::Force(b) => {
                            if b {
                                &[true]
                            } else {
                                &[false]
                            }
                        }
                        BranchPolicy::Both => &[true, false],
                    };
                    let mut kept = Vec::new();
                    for &o in outcomes {
                        let mut s = br.state.clone();
                        let p = s.project(target, o);
                        if p <= ZERO_PROB {
                            if let BranchPolicy::Force(_) = policy {
                                return Err(Error::ImpossibleBranch { op: pc, outcome: o });
                            }
                            continue;
                        }
                        if o {
                            s.flip(target);
                        }
                        let mut cbits = br.cbits.clone();
                        cbits[cbit.index()] = o;
                        kept.push(Branch {
                            state: s,
                            cbits,
                            probability: br.probability * p,
                        });
                    }
                    let Some(first) = kept.pop() else {
                        unreachable!("measurement probabilities sum to one")
                    };
                    for other in kept {
                        work.push((pc + 1, other));
                    }
                    br = first;
                }
                other => apply(&mut br, other, pc)?,
            }
            let drift = (br.state.norm() - 1.0).abs();
            if drift > NORM_TOL {
                return Err(Error::NormDrift { op: pc, drift });
            }
            pc += 1;
        }
        done.push(br);
    }
    done.sort_by(|x, y| x.cbits.cmp(&y.cbits));
    Ok(done)
}

fn apply(br: &mut Branch, g: Gate, op: usize) -> Result<()> {
    let s = &mut br.state;
    let i = Complex64::new(0.0, 1.0);
    match g {
        Gate::H(w) => s.hadamard(w),
        Gate::S(w) => s.phase(w, i),
        Gate::Sdg(w) => s.phase(w, -i),
        Gate::T(w) => s.t(w, 1.0),
        Gate::Tdg(w) => s.t(w, -1.0),
        Gate::X(w) => s.flip(w),
        Gate::Z(w) => s.phase(w, Complex64::new(-1.0, 0.0)),
        Gate::Cnot { control, target } => s.cnot(control, target),
        Gate::Cz { control, target } => s.cz(control, target),
        Gate::PrepZero(w) | Gate::PrepMagicT(w) => {
            if s.probability_one(w) > ZERO_PROB {
                return Err(Error::DirtyPreparation { op, wire: w });
            }
            if let Gate::PrepMagicT(_) = g {
                s.hadamard(w);
                s.t(w, 1.0);
            }
        }
        Gate::ClassicalCz {
            cbit,
            control,
            target,
        } => {
            if br.cbits[cbit.index()] {
                s.cz(control, target);
            }
        }
        Gate::MeasureX { .. } => unreachable!("handled by the caller"),
    }
    Ok(())
}
