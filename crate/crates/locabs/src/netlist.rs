//! And-Inverter-Graph netlist with structural hashing and constant folding.
//!
//! Gates are `Const`, `PI`, `And` and `Flop`. Inverters are complemented
//! edges (`Wire` = gate id + sign bit). Every netlist has a single constant
//! gate at id 0; `Netlist::TRUE` refers to it positively.

use std::collections::HashMap;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GateId(pub u32);

impl GateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Edge in the netlist: a gate reference plus a complement flag.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wire(u32);

impl Wire {
    pub fn new(gate: GateId, sign: bool) -> Wire {
        Wire(gate.0 << 1 | sign as u32)
    }

    pub fn positive(gate: GateId) -> Wire {
        Wire(gate.0 << 1)
    }

    #[inline]
    pub fn gate(self) -> GateId {
        GateId(self.0 >> 1)
    }

    #[inline]
    pub fn sign(self) -> bool {
        self.0 & 1 != 0
    }

    /// Complement the wire iff `s` is true; Fig-style `w ^ b`.
    #[inline]
    pub fn xor_sign(self, s: bool) -> Wire {
        Wire(self.0 ^ s as u32)
    }
}

impl std::ops::Not for Wire {
    type Output = Wire;
    #[inline]
    fn not(self) -> Wire {
        Wire(self.0 ^ 1)
    }
}

impl std::fmt::Debug for Wire {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.sign() {
            write!(f, "!w{}", self.gate().0)
        } else {
            write!(f, "w{}", self.gate().0)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GateKind {
    Const,
    PI,
    And,
    Flop,
}

#[derive(Clone)]
struct Gate {
    kind: GateKind,
    // And: both fanins. Flop: fanin[0] is the next-state input (UNDEF until
    // set_flop_input). Unused slots hold WIRE_UNDEF.
    fanin: [Wire; 2],
    // Index among gates of the same kind (PI order / flop order).
    aux: u32,
}

const WIRE_UNDEF: Wire = Wire(u32::MAX);

#[derive(Clone, Default)]
pub struct Netlist {
    gates: Vec<Gate>,
    strash: HashMap<(Wire, Wire), GateId>,
    pis: Vec<GateId>,
    flops: Vec<GateId>,
    property: Option<Wire>,
}

impl Netlist {
    /// The constant-true wire (gate 0, uncomplemented).
    pub const TRUE: Wire = Wire(0);
    pub const FALSE: Wire = Wire(1);

    pub fn new() -> Netlist {
        let mut n = Netlist::default();
        n.gates.push(Gate { kind: GateKind::Const, fanin: [WIRE_UNDEF; 2], aux: 0 });
        n
    }

    fn push_gate(&mut self, kind: GateKind, fanin: [Wire; 2], aux: u32) -> Wire {
        let id = GateId(self.gates.len() as u32);
        self.gates.push(Gate { kind, fanin, aux });
        Wire::positive(id)
    }

    pub fn add_pi(&mut self) -> Wire {
        let aux = self.pis.len() as u32;
        let w = self.push_gate(GateKind::PI, [WIRE_UNDEF; 2], aux);
        self.pis.push(w.gate());
        w
    }

    pub fn add_flop(&mut self) -> Wire {
        let aux = self.flops.len() as u32;
        let w = self.push_gate(GateKind::Flop, [WIRE_UNDEF; 2], aux);
        self.flops.push(w.gate());
        w
    }

    pub fn set_flop_input(&mut self, f: Wire, w_in: Wire) {
        let g = f.gate();
        assert_eq!(self.gates[g.index()].kind, GateKind::Flop, "not a flop: {:?}", f);
        assert!(
            self.gates[g.index()].fanin[0] == WIRE_UNDEF,
            "flop input set twice: {:?}",
            f
        );
        debug_assert!(w_in.gate().index() < self.gates.len());
        self.gates[g.index()].fanin[0] = w_in;
    }

    pub fn flop_input(&self, f: Wire) -> Wire {
        let g = f.gate();
        assert_eq!(self.gates[g.index()].kind, GateKind::Flop);
        let w = self.gates[g.index()].fanin[0];
        assert!(w != WIRE_UNDEF, "flop input not set: {:?}", f);
        w
    }

    /// AND of two wires with constant folding and structural hashing.
    /// The fanin pair is normalized (ordered by gate id, then sign), so the
    /// same pair always returns the same gate.
    pub fn add_and(&mut self, a: Wire, b: Wire) -> Wire {
        debug_assert!(a.gate().index() < self.gates.len());
        debug_assert!(b.gate().index() < self.gates.len());
        if a == Netlist::FALSE || b == Netlist::FALSE || a == !b {
            return Netlist::FALSE;
        }
        if a == Netlist::TRUE || a == b {
            return b;
        }
        if b == Netlist::TRUE {
            return a;
        }
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(&g) = self.strash.get(&key) {
            return Wire::positive(g);
        }
        let w = self.push_gate(GateKind::And, [key.0, key.1], 0);
        self.strash.insert(key, w.gate());
        w
    }

    pub fn set_property(&mut self, p: Wire) {
        debug_assert!(p.gate().index() < self.gates.len());
        self.property = Some(p);
    }

    pub fn property(&self) -> Wire {
        self.property.expect("no property set")
    }

    /// Negation of the property.
    pub fn bad(&self) -> Wire {
        !self.property()
    }

    pub fn has_property(&self) -> bool {
        self.property.is_some()
    }

    pub fn kind(&self, g: GateId) -> GateKind {
        self.gates[g.index()].kind
    }

    pub fn and_fanins(&self, g: GateId) -> (Wire, Wire) {
        let gate = &self.gates[g.index()];
        assert_eq!(gate.kind, GateKind::And);
        (gate.fanin[0], gate.fanin[1])
    }

    pub fn pis(&self) -> &[GateId] {
        &self.pis
    }

    pub fn flops(&self) -> &[GateId] {
        &self.flops
    }

    pub fn pi_index(&self, g: GateId) -> usize {
        debug_assert_eq!(self.gates[g.index()].kind, GateKind::PI);
        self.gates[g.index()].aux as usize
    }

    pub fn flop_index(&self, g: GateId) -> usize {
        debug_assert_eq!(self.gates[g.index()].kind, GateKind::Flop);
        self.gates[g.index()].aux as usize
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always has the Const gate
    }

    pub fn gate_ids(&self) -> impl Iterator<Item = GateId> {
        (0..self.gates.len() as u32).map(GateId)
    }
}

/// Map from gates to values; the sign bit of the key wire is ignored.
/// Unmapped entries read as `None`.
#[derive(Clone, Default)]
pub struct WMap<T> {
    data: Vec<Option<T>>,
}

impl<T> WMap<T> {
    pub fn new() -> WMap<T> {
        WMap { data: Vec::new() }
    }

    pub fn get(&self, w: Wire) -> Option<&T> {
        self.data.get(w.gate().index()).and_then(|x| x.as_ref())
    }

    pub fn set(&mut self, w: Wire, v: T) {
        let i = w.gate().index();
        if i >= self.data.len() {
            self.data.resize_with(i + 1, || None);
        }
        self.data[i] = Some(v);
    }
}

impl<T: Copy> WMap<T> {
    pub fn get_copied(&self, w: Wire) -> Option<T> {
        self.get(w).copied()
    }
}

/// Set of gates; like `WMap`, membership ignores the sign bit.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct WSet {
    bits: Vec<bool>,
    count: usize,
}

impl WSet {
    pub fn new() -> WSet {
        WSet::default()
    }

    pub fn contains(&self, g: GateId) -> bool {
        self.bits.get(g.index()).copied().unwrap_or(false)
    }

    pub fn contains_wire(&self, w: Wire) -> bool {
        self.contains(w.gate())
    }

    pub fn insert(&mut self, g: GateId) -> bool {
        let i = g.index();
        if i >= self.bits.len() {
            self.bits.resize(i + 1, false);
        }
        if self.bits[i] {
            false
        } else {
            self.bits[i] = true;
            self.count += 1;
            true
        }
    }

    pub fn remove(&mut self, g: GateId) -> bool {
        let i = g.index();
        if i < self.bits.len() && self.bits[i] {
            self.bits[i] = false;
            self.count -= 1;
            true
        } else {
            false
        }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Members in ascending gate-id order.
    pub fn iter(&self) -> impl Iterator<Item = GateId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| GateId(i as u32))
    }
}

impl std::fmt::Debug for WSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
