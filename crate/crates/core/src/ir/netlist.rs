use std::collections::{BTreeMap, BTreeSet};

use super::{ClassicalBit, Gate, Macro, Op, WireId};
use crate::error::{Error, Result};

/// Name of the register that collects anonymous ancillae.
pub(crate) const ANCILLA_REGISTER: &str = "anc";

/// Initial state requested for a freshly allocated register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Init {
    /// Externally supplied value; no gate is emitted.
    Input,
    /// Emits `PrepZero` on every wire.
    Zero,
    /// Emits `PrepMagicT` on every wire.
    MagicT,
}

/// Whether released ancillae may be handed out again.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AncillaPolicy {
    /// Every ancilla request allocates a new wire.
    #[default]
    Fresh,
    /// Released wires are reused in LIFO order before new wires are allocated.
    Recycle,
}

/// Named wire lists. Alias registers name wires owned by another register.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegisterMap {
    regs: BTreeMap<String, Vec<WireId>>,
    aliases: BTreeSet<String>,
}

impl RegisterMap {
    pub fn get(&self, name: &str) -> Option<&[WireId]> {
        self.regs.get(name).map(Vec::as_slice)
    }

    pub fn is_alias(&self, name: &str) -> bool {
        self.aliases.contains(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[WireId])> {
        self.regs.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn aliases(&self) -> impl Iterator<Item = &str> {
        self.aliases.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.regs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regs.is_empty()
    }

    pub(crate) fn insert(&mut self, name: &str, wires: Vec<WireId>, alias: bool) {
        self.regs.insert(name.to_string(), wires);
        if alias {
            self.aliases.insert(name.to_string());
        }
    }

    pub(crate) fn append(&mut self, name: &str, wire: WireId) {
        self.regs.entry(name.to_string()).or_default().push(wire);
    }

    /// Owning (non-alias) register of each wire, if any.
    pub fn owner_of(&self, wire: WireId) -> Option<&str> {
        self.regs
            .iter()
            .filter(|(k, _)| !self.aliases.contains(*k))
            .find(|(_, ws)| ws.contains(&wire))
            .map(|(k, _)| k.as_str())
    }
}

/// Append-only circuit over dense wire indices.
#[derive(Debug, Clone, Default)]
pub struct Netlist {
    wire_count: u32,
    cbit_count: u32,
    ops: Vec<Op>,
    registers: RegisterMap,
    policy: AncillaPolicy,
    pool: Vec<WireId>,
}

// The ancilla pool is builder state; two netlists are equal when their circuits are.
impl PartialEq for Netlist {
    fn eq(&self, other: &Self) -> bool {
        self.wire_count == other.wire_count
            && self.cbit_count == other.cbit_count
            && self.ops == other.ops
            && self.registers == other.registers
    }
}

impl Eq for Netlist {}

impl Netlist {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_policy(policy: AncillaPolicy) -> Self {
        Netlist {
            policy,
            ..Self::default()
        }
    }

    pub fn policy(&self) -> AncillaPolicy {
        self.policy
    }

    pub fn wire_count(&self) -> u32 {
        self.wire_count
    }

    pub fn cbit_count(&self) -> u32 {
        self.cbit_count
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn registers(&self) -> &RegisterMap {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Result<&[WireId]> {
        self.registers
            .get(name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    /// True when no macro operations remain.
    pub fn is_expanded(&self) -> bool {
        !self.ops.iter().any(Op::is_macro)
    }

    pub fn macro_count(&self, kind: &str) -> usize {
        self.ops
            .iter()
            .filter(|op| op.is_macro() && op.kind() == kind)
            .count()
    }

    /// Appends `width` fresh wires under `name`, emitting the preparation gates `init` asks for.
    pub fn alloc_register(&mut self, name: &str, width: usize, init: Init) -> Result<Vec<WireId>> {
        if self.registers.get(name).is_some() {
            return Err(Error::DuplicateRegister(name.to_string()));
        }
        if width == 0 {
            return Err(Error::ZeroWidth(name.to_string()));
        }
        let wires: Vec<WireId> = (0..width).map(|_| self.fresh_wire()).collect();
        self.registers.insert(name, wires.clone(), false);
        for &w in &wires {
            self.emit_init(w, init);
        }
        Ok(wires)
    }

    /// Records `name` as an alias for already-allocated wires. No wires are created.
    pub fn alias_register(&mut self, name: &str, wires: Vec<WireId>) -> Result<()> {
        if self.registers.get(name).is_some() {
            return Err(Error::DuplicateRegister(name.to_string()));
        }
        if wires.is_empty() {
            return Err(Error::ZeroWidth(name.to_string()));
        }
        for &w in &wires {
            self.check_wire(w)?;
        }
        self.registers.insert(name, wires, true);
        Ok(())
    }

    /// One ancilla wire in |0>, collected in the `anc` register. Under
    /// [`AncillaPolicy::Recycle`] a previously released wire is returned first.
    pub fn alloc_ancilla(&mut self, init: Init) -> WireId {
        let w = match self.policy {
            AncillaPolicy::Recycle => self.pool.pop(),
            AncillaPolicy::Fresh => None,
        };
        let w = w.unwrap_or_else(|| {
            let w = self.fresh_wire();
            self.registers.append(ANCILLA_REGISTER, w);
            w
        });
        self.emit_init(w, init);
        w
    }

    /// Returns an ancilla (now back in |0>) to the pool.
    pub fn release(&mut self, wire: WireId) {
        if self.policy == AncillaPolicy::Recycle && !self.pool.contains(&wire) {
            self.pool.push(wire);
        }
    }

    pub fn alloc_cbit(&mut self) -> ClassicalBit {
        let c = ClassicalBit(self.cbit_count);
        self.cbit_count += 1;
        c
    }

    /// Appends one op after validating its wire references.
    pub fn push(&mut self, op: impl Into<Op>) -> Result<()> {
        let op = op.into();
        self.validate(&op)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn gate(&mut self, g: Gate) -> Result<()> {
        self.push(Op::Gate(g))
    }

    pub fn cnot(&mut self, control: WireId, target: WireId) -> Result<()> {
        self.push(Op::Gate(Gate::Cnot { control, target }))
    }

    /// Copy of this netlist with op `index` removed (mutation testing).
    pub fn without_op(&self, index: usize) -> Netlist {
        let mut out = self.clone();
        if index < out.ops.len() {
            out.ops.remove(index);
        }
        out
    }

    /// Applies a wire permutation `perm[old] = new` to every op and register.
    pub fn relabeled(&self, perm: &[u32]) -> Result<Netlist> {
        if perm.len() != self.wire_count as usize {
            return Err(Error::Format(format!(
                "permutation covers {} wires, netlist has {}",
                perm.len(),
                self.wire_count
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            let slot = seen
                .get_mut(p as usize)
                .ok_or_else(|| Error::Format(format!("permutation target {p} out of range")))?;
            if std::mem::replace(slot, true) {
                return Err(Error::Format(format!("permutation repeats {p}")));
            }
        }
        let map = |w: WireId| WireId(perm[w.index()]);
        let mut registers = RegisterMap::default();
        for (name, wires) in self.registers.iter() {
            registers.insert(
                name,
                wires.iter().map(|&w| map(w)).collect(),
                self.registers.is_alias(name),
            );
        }
        Ok(Netlist {
            wire_count: self.wire_count,
            cbit_count: self.cbit_count,
            ops: self.ops.iter().map(|op| op.relabel(map)).collect(),
            registers,
            policy: self.policy,
            pool: self.pool.iter().map(|&w| map(w)).collect(),
        })
    }

    pub(crate) fn from_parts(
        wire_count: u32,
        cbit_count: u32,
        ops: Vec<Op>,
        registers: RegisterMap,
    ) -> Result<Netlist> {
        let mut nl = Netlist {
            wire_count,
            cbit_count,
            registers,
            ..Netlist::default()
        };
        for (_, wires) in nl.registers.iter() {
            for &w in wires {
                nl.check_wire(w)?;
            }
        }
        for op in ops {
            nl.push(op)?;
        }
        Ok(nl)
    }

    /// An empty netlist with the same wires, classical bits and registers.
    pub(crate) fn empty_like(&self) -> Netlist {
        Netlist {
            wire_count: self.wire_count,
            cbit_count: self.cbit_count,
            ops: Vec::new(),
            registers: self.registers.clone(),
            policy: self.policy,
            pool: Vec::new(),
        }
    }

    /// Marks a pooled wire as in use again.
    pub(crate) fn claim(&mut self, wire: WireId) {
        self.pool.retain(|&w| w != wire);
    }

    fn fresh_wire(&mut self) -> WireId {
        let w = WireId(self.wire_count);
        self.wire_count += 1;
        w
    }

    fn emit_init(&mut self, w: WireId, init: Init) {
        match init {
            Init::Input => {}
            Init::Zero => self.ops.push(Op::Gate(Gate::PrepZero(w))),
            Init::MagicT => self.ops.push(Op::Gate(Gate::PrepMagicT(w))),
        }
    }

    fn check_wire(&self, w: WireId) -> Result<()> {
        if w.0 < self.wire_count {
            Ok(())
        } else {
            Err(Error::UnallocatedWire(w, self.wire_count))
        }
    }

    fn validate(&self, op: &Op) -> Result<()> {
        let wires = op.wires();
        for &w in &wires {
            self.check_wire(w)?;
        }
        let mut seen = BTreeSet::new();
        for &w in &wires {
            if !seen.insert(w) {
                return Err(Error::RepeatedWire {
                    kind: op.kind(),
                    wire: w,
                });
            }
        }
        match op {
            Op::Gate(g) => {
                if let Some(c) = g.cbit() {
                    if c.0 >= self.cbit_count {
                        return Err(Error::UnallocatedBit(c.0));
                    }
                }
            }
            Op::Macro(Macro::AddInPlace { a, b, .. }) => {
                if a.len() != b.len() {
                    return Err(Error::WidthMismatch(a.len(), b.len()));
                }
                if a.len() < 2 {
                    return Err(Error::AdderTooNarrow(a.len()));
                }
            }
            Op::Macro(_) => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_allocation_starts_at_zero() {
        let mut nl = Netlist::new();
        let a = nl.alloc_register("A", 6, Init::Input).unwrap();
        assert_eq!(a, (0..6).map(WireId).collect::<Vec<_>>());
        assert!(nl.ops().is_empty());
    }

    #[test]
    fn zero_ancilla_gets_prep() {
        let mut nl = Netlist::new();
        nl.alloc_register("A", 6, Init::Input).unwrap();
        let w = nl.alloc_register("anc0", 1, Init::Zero).unwrap();
        assert_eq!(w, vec![WireId(6)]);
        assert_eq!(nl.ops(), &[Op::Gate(Gate::PrepZero(WireId(6)))]);
    }

    #[test]
    fn allocations_are_dense() {
        let mut nl = Netlist::new();
        nl.alloc_register("x", 3, Init::Input).unwrap();
        let y = nl.alloc_register("y", 4, Init::MagicT).unwrap();
        assert_eq!(nl.wire_count(), 7);
        assert_eq!(y, vec![WireId(3), WireId(4), WireId(5), WireId(6)]);
        assert_eq!(nl.ops().len(), 4);
    }

    #[test]
    fn duplicate_and_empty_registers_rejected() {
        let mut nl = Netlist::new();
        nl.alloc_register("A", 2, Init::Input).unwrap();
        assert_eq!(
            nl.alloc_register("A", 1, Init::Zero),
            Err(Error::DuplicateRegister("A".into()))
        );
        assert_eq!(
            nl.alloc_register("B", 0, Init::Zero),
            Err(Error::ZeroWidth("B".into()))
        );
    }

    #[test]
    fn push_checks_wires() {
        let mut nl = Netlist::new();
        nl.alloc_register("A", 2, Init::Input).unwrap();
        assert!(nl.cnot(WireId(0), WireId(1)).is_ok());
        assert!(matches!(
            nl.cnot(WireId(0), WireId(0)),
            Err(Error::RepeatedWire { .. })
        ));
        assert!(matches!(
            nl.cnot(WireId(0), WireId(2)),
            Err(Error::UnallocatedWire(..))
        ));
    }

    #[test]
    fn recycle_policy_reuses_released_wires() {
        let mut nl = Netlist::with_policy(AncillaPolicy::Recycle);
        let a = nl.alloc_ancilla(Init::Input);
        nl.release(a);
        let b = nl.alloc_ancilla(Init::Input);
        assert_eq!(a, b);
        assert_eq!(nl.wire_count(), 1);

        let mut fresh = Netlist::new();
        let a = fresh.alloc_ancilla(Init::Input);
        fresh.release(a);
        assert_ne!(fresh.alloc_ancilla(Init::Input), a);
    }
}
