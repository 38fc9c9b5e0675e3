//! Shared helpers for the integration tests: a deterministic RNG, random
//! circuit and CNF generators, and small reference utilities.

#![allow(dead_code)]

use locabs::netlist::{Netlist, Wire};
use locabs::sat::Lbool;
use locabs::trace::Cex;

pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.wrapping_mul(0x9e3779b97f4a7c15).max(1))
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    pub fn bool(&mut self) -> bool {
        self.next() & 1 != 0
    }
}

/// Random sequential circuit: up to `max_pis` inputs, `max_flops` flops and
/// `max_ands` And gates (fewer after folding), every flop driven, bad signal
/// a random wire.
pub fn random_netlist(rng: &mut Rng, max_pis: usize, max_flops: usize, max_ands: usize) -> Netlist {
    let mut n = Netlist::new();
    let n_pis = 1 + rng.below(max_pis);
    let n_flops = 1 + rng.below(max_flops);
    let n_ands = rng.below(max_ands + 1);

    let mut wires: Vec<Wire> = vec![Netlist::FALSE];
    for _ in 0..n_pis {
        wires.push(n.add_pi());
    }
    let mut flops = Vec::new();
    for _ in 0..n_flops {
        let f = n.add_flop();
        flops.push(f);
        wires.push(f);
    }
    for _ in 0..n_ands {
        let a = wires[rng.below(wires.len())].xor_sign(rng.bool());
        let b = wires[rng.below(wires.len())].xor_sign(rng.bool());
        wires.push(n.add_and(a, b));
    }
    for &f in &flops {
        let w = wires[rng.below(wires.len())].xor_sign(rng.bool());
        n.set_flop_input(f, w);
    }
    let bad = wires[rng.below(wires.len())].xor_sign(rng.bool());
    n.set_property(!bad);
    n
}

/// f1 <- i, f2 <- f1, ..., fn <- f(n-1), bad = fn. First failure at depth n.
pub fn shift_register(len: usize) -> Netlist {
    let mut n = Netlist::new();
    let mut prev = n.add_pi();
    for _ in 0..len {
        let f = n.add_flop();
        n.set_flop_input(f, prev);
        prev = f;
    }
    n.set_property(!prev);
    n
}

/// f holds constant 0, g samples a free input; bad = f & g. Refinement pulls
/// in both flops, the unsatisfiability proof only needs f.
pub fn pba_showcase() -> Netlist {
    let mut n = Netlist::new();
    let i = n.add_pi();
    let f = n.add_flop();
    n.set_flop_input(f, Netlist::FALSE);
    let g = n.add_flop();
    n.set_flop_input(g, i);
    let both = n.add_and(f, g);
    n.set_property(!both);
    n
}

/// Replace every X in a counterexample's inputs by a random bit.
pub fn complete_cex(cex: &Cex, rng: &mut Rng) -> Cex {
    let mut out = cex.clone();
    for frame in &mut out.pis {
        for v in frame.iter_mut() {
            if *v == Lbool::Undef {
                *v = Lbool::from_bool(rng.bool());
            }
        }
    }
    out
}

/// Random 3-CNF instance as (n_vars, clauses of DIMACS-style non-zero ints).
pub fn random_3cnf(rng: &mut Rng, max_vars: usize, max_clauses: usize) -> (usize, Vec<Vec<i32>>) {
    let n_vars = 3 + rng.below(max_vars - 2);
    let n_clauses = 1 + rng.below(max_clauses);
    let mut clauses = Vec::with_capacity(n_clauses);
    for _ in 0..n_clauses {
        let mut c = Vec::with_capacity(3);
        for _ in 0..3 {
            let v = 1 + rng.below(n_vars) as i32;
            c.push(if rng.bool() { v } else { -v });
        }
        clauses.push(c);
    }
    (n_vars, clauses)
}

/// Exhaustive satisfiability check by bit-parallel enumeration: 64
/// assignments of the lowest 6 variables per machine word, outer loop over
/// the remaining variables.
pub fn cnf_satisfiable(n_vars: usize, clauses: &[Vec<i32>]) -> bool {
    assert!(n_vars <= 24, "enumeration oracle limited to small instances");
    // patterns[v] has bit k set iff assignment k sets variable v+1 to true.
    const PATTERNS: [u64; 6] = [
        0xaaaa_aaaa_aaaa_aaaa,
        0xcccc_cccc_cccc_cccc,
        0xf0f0_f0f0_f0f0_f0f0,
        0xff00_ff00_ff00_ff00,
        0xffff_0000_ffff_0000,
        0xffff_ffff_0000_0000,
    ];
    let low = n_vars.min(6);
    let high_bits = n_vars - low;
    let block_mask: u64 = if low == 6 { !0 } else { (1u64 << (1 << low)) - 1 };
    for high in 0u64..1 << high_bits {
        let mut acc = block_mask;
        for c in clauses {
            let mut sat_mask = 0u64;
            for &lit in c {
                let v = lit.unsigned_abs() as usize - 1;
                let truth = if v < 6 { PATTERNS[v] } else if high >> (v - 6) & 1 != 0 { !0 } else { 0 };
                sat_mask |= if lit > 0 { truth } else { !truth };
            }
            acc &= sat_mask;
            if acc == 0 {
                break;
            }
        }
        if acc != 0 {
            return true;
        }
    }
    false
}

#[test]
fn enumeration_oracle_sanity() {
    // (x1)(¬x1) unsatisfiable; (x1 ∨ x2) satisfiable; pure literals.
    assert!(!cnf_satisfiable(1, &[vec![1, 1, 1], vec![-1, -1, -1]]));
    assert!(cnf_satisfiable(2, &[vec![1, 2, 2]]));
    assert!(cnf_satisfiable(8, &[vec![7, 8, 1], vec![-7, -8, -1]]));
    // All eight sign combinations over three variables: unsatisfiable.
    let mut all = Vec::new();
    for s in 0..8 {
        all.push(vec![
            if s & 1 != 0 { 1 } else { -1 },
            if s & 2 != 0 { 2 } else { -2 },
            if s & 4 != 0 { 3 } else { -3 },
        ]);
    }
    assert!(!cnf_satisfiable(3, &all));
    assert!(!cnf_satisfiable(9, &all), "padding with unused variables keeps it unsat");
}
