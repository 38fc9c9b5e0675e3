//! AIGER reading and writing.
//!
//! Both the ASCII (`aag`) and binary (`aig`) formats are supported on the
//! read side, including the delta-encoded And literals of binary mode and
//! the AIGER 1.9 `B` (bad state) section. Writing produces ASCII for
//! abstracted circuits and binary for full circuits.

use crate::netlist::{GateId, Netlist, WSet, Wire};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AigerError {
    #[error("malformed AIGER: {0}")]
    Malformed(String),
    #[error("latch {0} has a non-zero or undefined reset value; only zero-initialized flops are supported")]
    NonZeroReset(usize),
    #[error("property index {index} out of range ({available} available)")]
    PropertyIndexOutOfRange { index: usize, available: usize },
    #[error("no outputs or bad-state properties in file")]
    NoProperty,
}

type Result<T> = std::result::Result<T, AigerError>;

/// Parsed AIGER file, kept close to the on-disk representation.
/// Symbol table and comments are preserved.
#[derive(Debug, Default, Clone)]
pub struct AigerFile {
    pub max_var: u64,
    pub inputs: Vec<u64>,
    /// (current-state literal, next-state literal, reset literal).
    pub latches: Vec<(u64, u64, u64)>,
    pub outputs: Vec<u64>,
    pub bads: Vec<u64>,
    pub ands: Vec<(u64, u64, u64)>,
    pub symbols: Vec<String>,
    pub comments: Vec<String>,
    pub binary: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReadOptions {
    /// Which output / bad-state property to use.
    pub property_index: usize,
    /// If set, `O` entries are read as the property itself rather than as a
    /// bad signal. Ignored when a `B` section is present.
    pub output_is_property: bool,
}

fn err(msg: impl Into<String>) -> AigerError {
    AigerError::Malformed(msg.into())
}

/// Parse an AIGER file (ASCII or binary, chosen by the magic word).
pub fn parse(bytes: &[u8]) -> Result<AigerFile> {
    let header_end = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| err("missing header line"))?;
    let header = std::str::from_utf8(&bytes[..header_end]).map_err(|_| err("header not UTF-8"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.is_empty() {
        return Err(err("empty header"));
    }
    let binary = match fields[0] {
        "aag" => false,
        "aig" => true,
        other => return Err(err(format!("unknown magic word '{other}'"))),
    };
    if fields.len() < 6 {
        return Err(err("header needs at least M I L O A"));
    }
    let nums: Vec<u64> = fields[1..]
        .iter()
        .map(|s| s.parse::<u64>().map_err(|_| err(format!("bad header field '{s}'"))))
        .collect::<Result<_>>()?;
    let (m, i, l, o, a) = (nums[0], nums[1], nums[2], nums[3], nums[4]);
    let b = nums.get(5).copied().unwrap_or(0);
    let c = nums.get(6).copied().unwrap_or(0);
    let j = nums.get(7).copied().unwrap_or(0);
    let fair = nums.get(8).copied().unwrap_or(0);
    if c > 0 || j > 0 || fair > 0 {
        return Err(err("invariant constraints, justice and fairness sections are not supported"));
    }
    if m < i + l + a {
        return Err(err("header: M < I + L + A"));
    }

    let mut file = AigerFile { max_var: m, binary, ..Default::default() };
    let mut pos = header_end + 1;

    let next_line = |pos: &mut usize| -> Result<&str> {
        if *pos >= bytes.len() {
            return Err(err("unexpected end of file"));
        }
        let end = bytes[*pos..]
            .iter()
            .position(|&x| x == b'\n')
            .map(|e| *pos + e)
            .unwrap_or(bytes.len());
        let line =
            std::str::from_utf8(&bytes[*pos..end]).map_err(|_| err("non-UTF-8 line"))?;
        *pos = end + 1;
        Ok(line)
    };

    let check_lit = |lit: u64| -> Result<u64> {
        if lit > 2 * m + 1 {
            Err(err(format!("literal {lit} exceeds 2M+1")))
        } else {
            Ok(lit)
        }
    };

    if binary {
        for k in 0..i {
            file.inputs.push(2 * (k + 1));
        }
    } else {
        for _ in 0..i {
            let line = next_line(&mut pos)?;
            let lit: u64 = line.trim().parse().map_err(|_| err("bad input line"))?;
            if lit < 2 || lit & 1 != 0 {
                return Err(err(format!("input literal {lit} must be even and positive")));
            }
            file.inputs.push(check_lit(lit)?);
        }
    }

    for k in 0..l {
        let line = next_line(&mut pos)?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let (cur, rest) = if binary {
            (2 * (i + k + 1), &toks[..])
        } else {
            if toks.is_empty() {
                return Err(err("empty latch line"));
            }
            let cur: u64 = toks[0].parse().map_err(|_| err("bad latch literal"))?;
            if cur < 2 || cur & 1 != 0 {
                return Err(err(format!("latch literal {cur} must be even and positive")));
            }
            (cur, &toks[1..])
        };
        if rest.is_empty() {
            return Err(err("latch line missing next-state literal"));
        }
        let next: u64 = rest[0].parse().map_err(|_| err("bad next-state literal"))?;
        let reset: u64 = match rest.get(1) {
            Some(t) => t.parse().map_err(|_| err("bad reset literal"))?,
            None => 0,
        };
        file.latches.push((check_lit(cur)?, check_lit(next)?, reset));
    }

    for _ in 0..o {
        let line = next_line(&mut pos)?;
        let lit: u64 = line.trim().parse().map_err(|_| err("bad output line"))?;
        file.outputs.push(check_lit(lit)?);
    }
    for _ in 0..b {
        let line = next_line(&mut pos)?;
        let lit: u64 = line.trim().parse().map_err(|_| err("bad bad-state line"))?;
        file.bads.push(check_lit(lit)?);
    }

    if binary {
        let read_delta = |pos: &mut usize| -> Result<u64> {
            let mut x = 0u64;
            let mut shift = 0u32;
            loop {
                if *pos >= bytes.len() {
                    return Err(err("truncated binary And section"));
                }
                let byte = bytes[*pos];
                *pos += 1;
                x |= u64::from(byte & 0x7f) << shift;
                if byte & 0x80 == 0 {
                    return Ok(x);
                }
                shift += 7;
                if shift > 63 {
                    return Err(err("varint overflow in binary And section"));
                }
            }
        };
        for k in 0..a {
            let lhs = 2 * (i + l + k + 1);
            let d0 = read_delta(&mut pos)?;
            let rhs0 = lhs.checked_sub(d0).ok_or_else(|| err("delta0 exceeds lhs"))?;
            let d1 = read_delta(&mut pos)?;
            let rhs1 = rhs0.checked_sub(d1).ok_or_else(|| err("delta1 exceeds rhs0"))?;
            file.ands.push((lhs, rhs0, rhs1));
        }
    } else {
        for _ in 0..a {
            let line = next_line(&mut pos)?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(err("And line needs three literals"));
            }
            let lhs: u64 = toks[0].parse().map_err(|_| err("bad And lhs"))?;
            if lhs & 1 != 0 {
                return Err(err(format!("And lhs {lhs} must be even")));
            }
            let rhs0: u64 = toks[1].parse().map_err(|_| err("bad And rhs"))?;
            let rhs1: u64 = toks[2].parse().map_err(|_| err("bad And rhs"))?;
            file.ands.push((check_lit(lhs)?, check_lit(rhs0)?, check_lit(rhs1)?));
        }
    }

    // Optional symbol table and comments.
    while pos < bytes.len() {
        let line = next_line(&mut pos)?;
        if line == "c" {
            while pos < bytes.len() {
                file.comments.push(next_line(&mut pos)?.to_string());
            }
            break;
        }
        if line.is_empty() {
            continue;
        }
        file.symbols.push(line.to_string());
    }

    Ok(file)
}

#[derive(Clone, Copy)]
enum VarDef {
    Input,
    Latch,
    And(usize),
}

/// Build a netlist from a parsed AIGER file. Latches become flops with the
/// AIGER latch order; latches must be zero-initialized.
pub fn build_netlist(file: &AigerFile, opts: &ReadOptions) -> Result<Netlist> {
    let mut n = Netlist::new();
    let mut defs: HashMap<u64, VarDef> = HashMap::new();
    for &lit in &file.inputs {
        if defs.insert(lit >> 1, VarDef::Input).is_some() {
            return Err(err(format!("variable {} defined twice", lit >> 1)));
        }
    }
    for (idx, &(cur, _, reset)) in file.latches.iter().enumerate() {
        if reset != 0 {
            return Err(AigerError::NonZeroReset(idx));
        }
        if defs.insert(cur >> 1, VarDef::Latch).is_some() {
            return Err(err(format!("variable {} defined twice", cur >> 1)));
        }
    }
    for (idx, &(lhs, _, _)) in file.ands.iter().enumerate() {
        if defs.insert(lhs >> 1, VarDef::And(idx)).is_some() {
            return Err(err(format!("variable {} defined twice", lhs >> 1)));
        }
    }

    // Create inputs and flops up front, in file order, so the netlist's PI
    // and flop enumerations match the AIGER indices.
    let mut var_wire: HashMap<u64, Wire> = HashMap::new();
    var_wire.insert(0, Netlist::FALSE);
    for &lit in &file.inputs {
        let w = n.add_pi();
        var_wire.insert(lit >> 1, w);
    }
    for &(cur, _, _) in &file.latches {
        let w = n.add_flop();
        var_wire.insert(cur >> 1, w);
    }

    // Resolve And gates recursively; the file may list them in any
    // (acyclic) order.
    fn resolve(
        var: u64,
        n: &mut Netlist,
        file: &AigerFile,
        defs: &HashMap<u64, VarDef>,
        var_wire: &mut HashMap<u64, Wire>,
        on_stack: &mut Vec<u64>,
    ) -> Result<Wire> {
        if let Some(&w) = var_wire.get(&var) {
            return Ok(w);
        }
        match defs.get(&var) {
            Some(&VarDef::And(idx)) => {
                if on_stack.contains(&var) {
                    return Err(err(format!("combinational cycle through variable {var}")));
                }
                on_stack.push(var);
                let (_, rhs0, rhs1) = file.ands[idx];
                let a = resolve(rhs0 >> 1, n, file, defs, var_wire, on_stack)?
                    .xor_sign(rhs0 & 1 != 0);
                let b = resolve(rhs1 >> 1, n, file, defs, var_wire, on_stack)?
                    .xor_sign(rhs1 & 1 != 0);
                on_stack.pop();
                let w = n.add_and(a, b);
                var_wire.insert(var, w);
                Ok(w)
            }
            Some(_) => unreachable!("inputs and latches are pre-registered"),
            None => Err(err(format!("undefined variable {var}"))),
        }
    }

    let lit_wire = |lit: u64,
                    n: &mut Netlist,
                    var_wire: &mut HashMap<u64, Wire>|
     -> Result<Wire> {
        let mut stack = Vec::new();
        let w = resolve(lit >> 1, n, file, &defs, var_wire, &mut stack)?;
        Ok(w.xor_sign(lit & 1 != 0))
    };

    for idx in 0..file.latches.len() {
        let (cur, next, _) = file.latches[idx];
        let w_in = lit_wire(next, &mut n, &mut var_wire)?;
        let f = *var_wire.get(&(cur >> 1)).unwrap();
        n.set_flop_input(f, w_in);
    }
    // Make sure every And is materialized even if dead.
    for &(lhs, _, _) in &file.ands {
        let mut stack = Vec::new();
        resolve(lhs >> 1, &mut n, file, &defs, &mut var_wire, &mut stack)?;
    }

    // Property selection: a `B` section wins over outputs; outputs default
    // to the bad-signal convention.
    let (lits, is_bad) = if !file.bads.is_empty() {
        (&file.bads, true)
    } else if !file.outputs.is_empty() {
        (&file.outputs, !opts.output_is_property)
    } else {
        return Err(AigerError::NoProperty);
    };
    if opts.property_index >= lits.len() {
        return Err(AigerError::PropertyIndexOutOfRange {
            index: opts.property_index,
            available: lits.len(),
        });
    }
    let w = lit_wire(lits[opts.property_index], &mut n, &mut var_wire)?;
    n.set_property(if is_bad { !w } else { w });

    Ok(n)
}

/// Convenience: parse bytes and build the netlist in one step.
pub fn read_aiger(bytes: &[u8], opts: &ReadOptions) -> Result<Netlist> {
    build_netlist(&parse(bytes)?, opts)
}

struct LitAssign {
    wire_lit: crate::netlist::WMap<u64>,
}

impl LitAssign {
    fn lit(&self, w: Wire) -> u64 {
        let base = self.wire_lit.get_copied(w).expect("gate not numbered");
        base ^ (w.sign() as u64)
    }
}

fn assign_vars(n: &Netlist, abstr: &WSet) -> (LitAssign, Vec<GateId>, Vec<GateId>, Vec<GateId>) {
    // Inputs: original PIs, then freed flops (flop order). Latches: retained
    // flops. Ands: creation order.
    let mut inputs: Vec<GateId> = n.pis().to_vec();
    for &f in n.flops() {
        if !abstr.contains(f) {
            inputs.push(f);
        }
    }
    let latches: Vec<GateId> = n.flops().iter().copied().filter(|&f| abstr.contains(f)).collect();
    let ands: Vec<GateId> =
        n.gate_ids().filter(|&g| n.kind(g) == crate::netlist::GateKind::And).collect();

    let mut assign = LitAssign { wire_lit: crate::netlist::WMap::new() };
    assign.wire_lit.set(Netlist::TRUE, 1); // positive const wire is literal 1
    for (var, &g) in (1u64..).zip(inputs.iter().chain(latches.iter()).chain(ands.iter())) {
        assign.wire_lit.set(Wire::positive(g), 2 * var);
    }
    (assign, inputs, latches, ands)
}

/// Write the design under an abstraction as ASCII AIGER: flops outside
/// `abstr` become inputs, flops inside keep their next-state function. All
/// logic is kept (no dead-logic sweeping). The single output is the bad
/// signal.
pub fn write_abstracted(n: &Netlist, abstr: &WSet) -> Vec<u8> {
    let (assign, inputs, latches, ands) = assign_vars(n, abstr);
    let m = inputs.len() + latches.len() + ands.len();
    let mut out = String::new();
    out.push_str(&format!("aag {} {} {} 1 {}\n", m, inputs.len(), latches.len(), ands.len()));
    for &g in &inputs {
        out.push_str(&format!("{}\n", assign.lit(Wire::positive(g))));
    }
    for &g in &latches {
        let next = n.flop_input(Wire::positive(g));
        out.push_str(&format!("{} {}\n", assign.lit(Wire::positive(g)), assign.lit(next)));
    }
    out.push_str(&format!("{}\n", assign.lit(n.bad())));
    for &g in &ands {
        let (a, b) = n.and_fanins(g);
        out.push_str(&format!(
            "{} {} {}\n",
            assign.lit(Wire::positive(g)),
            assign.lit(a),
            assign.lit(b)
        ));
    }
    out.into_bytes()
}

/// Write the full design (all flops concrete) in binary AIGER.
pub fn write_binary(n: &Netlist) -> Vec<u8> {
    let mut all = WSet::new();
    for &f in n.flops() {
        all.insert(f);
    }
    let (assign, inputs, latches, ands) = assign_vars(n, &all);
    let m = inputs.len() + latches.len() + ands.len();
    let mut out: Vec<u8> = Vec::new();
    out.extend_from_slice(
        format!("aig {} {} {} 1 {}\n", m, inputs.len(), latches.len(), ands.len()).as_bytes(),
    );
    for &g in &latches {
        let next = n.flop_input(Wire::positive(g));
        out.extend_from_slice(format!("{}\n", assign.lit(next)).as_bytes());
    }
    out.extend_from_slice(format!("{}\n", assign.lit(n.bad())).as_bytes());
    let push_delta = |out: &mut Vec<u8>, mut d: u64| loop {
        let byte = (d & 0x7f) as u8;
        d >>= 7;
        if d == 0 {
            out.push(byte);
            break;
        }
        out.push(byte | 0x80);
    };
    for &g in &ands {
        let lhs = assign.lit(Wire::positive(g));
        let (a, b) = n.and_fanins(g);
        let (mut r0, mut r1) = (assign.lit(a), assign.lit(b));
        if r0 < r1 {
            std::mem::swap(&mut r0, &mut r1);
        }
        debug_assert!(lhs > r0);
        push_delta(&mut out, lhs - r0);
        push_delta(&mut out, r0 - r1);
    }
    out
}

/// One original latch index per line, ascending.
pub fn write_flop_list(n: &Netlist, abstr: &WSet) -> String {
    let mut idx: Vec<usize> = abstr.iter().map(|g| n.flop_index(g)).collect();
    idx.sort_unstable();
    let mut out = String::new();
    for i in idx {
        out.push_str(&format!("{i}\n"));
    }
    out
}
