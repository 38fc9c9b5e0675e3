//! Independent reference checks: monolithic full-design BMC (fresh solver
//! and fresh encoding per query, no abstraction, no activation literals)
//! and a concrete two-valued simulator. These deliberately share nothing
//! with the incremental trace machinery they are used to validate.

use crate::netlist::{GateKind, Netlist, WMap, Wire};
use crate::sat::{Lbool, Lit, Solver};
use crate::trace::Cex;

pub enum BmcResult {
    /// Input sequence driving bad to 1 at exactly the queried frame.
    Sat(Cex),
    Unsat,
}

impl BmcResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, BmcResult::Sat(_))
    }
}

struct Unroller<'a> {
    n: &'a Netlist,
    s: Solver,
    maps: Vec<WMap<Lit>>,
}

impl<'a> Unroller<'a> {
    fn new(n: &'a Netlist) -> Unroller<'a> {
        Unroller { n, s: Solver::new(), maps: Vec::new() }
    }

    fn encode(&mut self, frame: usize, w: Wire) -> Lit {
        while self.maps.len() <= frame {
            self.maps.push(WMap::new());
        }
        let lit = match self.maps[frame].get_copied(w) {
            Some(l) => l,
            None => {
                let l = match self.n.kind(w.gate()) {
                    GateKind::Const => self.s.true_lit(),
                    GateKind::PI => self.s.new_lit(),
                    GateKind::And => {
                        let (a, b) = self.n.and_fanins(w.gate());
                        let x = self.encode(frame, a);
                        let y = self.encode(frame, b);
                        let l = self.s.new_lit();
                        self.s.add_clause(&[x, !l]);
                        self.s.add_clause(&[y, !l]);
                        self.s.add_clause(&[!x, !y, l]);
                        l
                    }
                    GateKind::Flop => {
                        if frame == 0 {
                            !self.s.true_lit() // zero-initialized
                        } else {
                            let w_in = self.n.flop_input(w);
                            self.encode(frame - 1, w_in)
                        }
                    }
                };
                self.maps[frame].set(w, l);
                l
            }
        };
        lit.xor_sign(w.sign())
    }
}

/// Exact answer to "can bad be 1 at exactly frame `depth`", by direct
/// unrolling of the full design in a fresh solver.
pub fn bmc_full(n: &Netlist, depth: usize) -> BmcResult {
    let mut u = Unroller::new(n);
    let target = u.encode(depth, n.bad());
    u.s.add_clause(&[target]);
    if !u.s.solve(&[]) {
        return BmcResult::Unsat;
    }
    let mut cex = Cex { depth, pis: Vec::new(), flops: Vec::new() };
    for frame in 0..=depth {
        let pis = n
            .pis()
            .iter()
            .map(|&g| match u.maps[frame].get_copied(Wire::positive(g)) {
                Some(l) => u.s.model_value(l),
                None => Lbool::Undef,
            })
            .collect();
        let flops = n
            .flops()
            .iter()
            .map(|&g| match u.maps[frame].get_copied(Wire::positive(g)) {
                Some(l) => u.s.model_value(l),
                None => Lbool::Undef,
            })
            .collect();
        cex.pis.push(pis);
        cex.flops.push(flops);
    }
    BmcResult::Sat(cex)
}

/// Deterministic two-valued full-design simulation of a counterexample's
/// inputs; X positions are replaced by `default_for_x`. Returns the value
/// of the bad signal at every frame.
pub fn simulate_concrete(n: &Netlist, cex: &Cex, default_for_x: bool) -> Vec<bool> {
    let mut bad_per_frame = Vec::with_capacity(cex.depth + 1);
    let mut state: Vec<bool> = vec![false; n.flops().len()]; // zero init
    for frame in 0..=cex.depth {
        let mut vals: Vec<bool> = vec![false; n.len()];
        vals[0] = true;
        for (i, &g) in n.pis().iter().enumerate() {
            vals[g.index()] = match cex.pis[frame][i] {
                Lbool::True => true,
                Lbool::False => false,
                Lbool::Undef => default_for_x,
            };
        }
        for (i, &g) in n.flops().iter().enumerate() {
            vals[g.index()] = state[i];
        }
        for g in n.gate_ids() {
            if n.kind(g) == GateKind::And {
                let (a, b) = n.and_fanins(g);
                vals[g.index()] = (vals[a.gate().index()] ^ a.sign())
                    && (vals[b.gate().index()] ^ b.sign());
            }
        }
        let bad = n.bad();
        bad_per_frame.push(vals[bad.gate().index()] ^ bad.sign());
        for (i, &g) in n.flops().iter().enumerate() {
            let w_in = n.flop_input(Wire::positive(g));
            state[i] = vals[w_in.gate().index()] ^ w_in.sign();
        }
    }
    bad_per_frame
}
