//! Counterexample-based refinement via ternary simulation.
//!
//! The SAT counterexample is re-simulated over the design with 0/1/X values.
//! For each flop still outside the abstraction, its counterexample value is
//! replaced by X frame by frame; if the X propagates to the bad signal the
//! flop is needed to justify the counterexample and gets concretized,
//! otherwise it stays a free PI.

use crate::netlist::{GateId, GateKind, Netlist, WSet, Wire};
use crate::sat::Lbool;
use crate::trace::{Cex, Trace};
use std::collections::VecDeque;

/// Ternary values per frame per gate, plus fanout lists for incremental
/// re-evaluation.
pub struct SimState {
    /// `values[frame][gate]`
    values: Vec<Vec<Lbool>>,
    /// And gates fed by each gate.
    and_fanouts: Vec<Vec<GateId>>,
    /// Flops whose next-state input is fed by each gate.
    flop_fanouts: Vec<Vec<GateId>>,
}

impl SimState {
    pub fn value(&self, frame: usize, w: Wire) -> Lbool {
        self.values[frame][w.gate().index()].xor_sign(w.sign())
    }

    fn raw(&self, frame: usize, g: GateId) -> Lbool {
        self.values[frame][g.index()]
    }

    fn eval_and(&self, n: &Netlist, frame: usize, g: GateId) -> Lbool {
        let (a, b) = n.and_fanins(g);
        self.value(frame, a).and(self.value(frame, b))
    }

    /// Set gate `w` at `frame` to `value` and incrementally re-evaluate its
    /// transitive fanout (crossing frames through concrete flops only).
    /// No-op if the value is unchanged.
    pub fn propagate(&mut self, n: &Netlist, abstr: &WSet, frame: usize, w: Wire, value: Lbool) {
        let g = w.gate();
        let value = value.xor_sign(w.sign());
        if self.raw(frame, g) == value {
            return;
        }
        self.values[frame][g.index()] = value;
        let depth = self.values.len() - 1;
        let mut queue: VecDeque<(usize, GateId)> = VecDeque::new();
        queue.push_back((frame, g));
        while let Some((d, g)) = queue.pop_front() {
            for i in 0..self.and_fanouts[g.index()].len() {
                let a = self.and_fanouts[g.index()][i];
                let nv = self.eval_and(n, d, a);
                if self.raw(d, a) != nv {
                    self.values[d][a.index()] = nv;
                    queue.push_back((d, a));
                }
            }
            if d < depth {
                for i in 0..self.flop_fanouts[g.index()].len() {
                    let fl = self.flop_fanouts[g.index()][i];
                    if !abstr.contains(fl) {
                        continue; // abstract flops don't follow their input
                    }
                    let w_in = n.flop_input(Wire::positive(fl));
                    let nv = self.value(d, w_in);
                    if self.raw(d + 1, fl) != nv {
                        self.values[d + 1][fl.index()] = nv;
                        queue.push_back((d + 1, fl));
                    }
                }
            }
        }
    }
}

/// Ternary-simulate a counterexample over the design under an abstraction.
/// PIs and abstract flops take the counterexample values; concrete flops are
/// zero at frame 0 and follow their input afterwards.
pub fn simulate_cex(n: &Netlist, abstr: &WSet, cex: &Cex) -> SimState {
    let mut and_fanouts = vec![Vec::new(); n.len()];
    let mut flop_fanouts = vec![Vec::new(); n.len()];
    for g in n.gate_ids() {
        match n.kind(g) {
            GateKind::And => {
                let (a, b) = n.and_fanins(g);
                and_fanouts[a.gate().index()].push(g);
                if b.gate() != a.gate() {
                    and_fanouts[b.gate().index()].push(g);
                }
            }
            GateKind::Flop => {
                let w_in = n.flop_input(Wire::positive(g));
                flop_fanouts[w_in.gate().index()].push(g);
            }
            _ => {}
        }
    }

    let mut values = Vec::with_capacity(cex.depth + 1);
    for frame in 0..=cex.depth {
        let mut row = vec![Lbool::Undef; n.len()];
        row[0] = Lbool::True; // the constant gate
        for (i, &g) in n.pis().iter().enumerate() {
            row[g.index()] = cex.pis[frame][i];
        }
        for (i, &g) in n.flops().iter().enumerate() {
            row[g.index()] = if abstr.contains(g) {
                if frame == 0 {
                    Lbool::False
                } else {
                    // Previous-frame input value; frames are filled in order.
                    let w_in = n.flop_input(Wire::positive(g));
                    let prev: &Vec<Lbool> = &values[frame - 1];
                    prev[w_in.gate().index()].xor_sign(w_in.sign())
                }
            } else {
                cex.flops[frame][i]
            };
        }
        // And gates in creation order (fanins have lower ids).
        for g in n.gate_ids() {
            if n.kind(g) == GateKind::And {
                let (a, b) = n.and_fanins(g);
                let va = row[a.gate().index()].xor_sign(a.sign());
                let vb = row[b.gate().index()].xor_sign(b.sign());
                row[g.index()] = va.and(vb);
            }
        }
        values.push(row);
    }
    SimState { values, and_fanouts, flop_fanouts }
}

/// Grow the trace's abstraction so that the latest counterexample is no
/// longer justified. Flops are inspected in ascending creation order; a flop
/// is concretized iff X-ing its value at some frame propagates to the bad
/// signal at the final frame (in which case that X-propagation is undone).
/// If nothing gets added, the counterexample is genuine.
pub fn refine_abstraction(trace: &mut Trace<'_>, depth: usize, bad: Wire) {
    let cex = trace.get_cex(depth);
    let n = trace.design();
    let abstr = trace.abstr().clone();
    let mut sim = simulate_cex(n, &abstr, &cex);

    let mut to_add: Vec<Wire> = Vec::new();
    for &g in n.flops() {
        if abstr.contains(g) {
            continue;
        }
        let w = Wire::positive(g);
        let fi = n.flop_index(g);
        for frame in 0..=depth {
            sim.propagate(n, &abstr, frame, w, Lbool::Undef);
            if sim.value(depth, bad) == Lbool::Undef {
                // X reached the output: undo this flop's Xes and keep it.
                for fr in (0..=frame).rev() {
                    sim.propagate(n, &abstr, fr, w, cex.flops[fr][fi]);
                }
                to_add.push(w);
                break;
            }
        }
    }
    for w in to_add {
        trace.extend_abs(w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aiger::{read_aiger, ReadOptions};
    use crate::trace::PbaMode;

    fn all_x_cex(n: &Netlist, depth: usize) -> Cex {
        Cex {
            depth,
            pis: vec![vec![Lbool::Undef; n.pis().len()]; depth + 1],
            flops: vec![vec![Lbool::Undef; n.flops().len()]; depth + 1],
        }
    }

    fn shift_register() -> Netlist {
        read_aiger(b"aag 3 1 2 1 0\n2\n4 2\n6 4\n6\n", &ReadOptions::default()).unwrap()
    }

    #[test]
    fn all_x_cex_gives_x_at_bad() {
        let mut n = Netlist::new();
        let p = n.add_pi();
        n.set_property(!p); // bad = p
        let cex = all_x_cex(&n, 2);
        let sim = simulate_cex(&n, &WSet::new(), &cex);
        for d in 0..=2 {
            assert_eq!(sim.value(d, n.bad()), Lbool::Undef);
        }
    }

    #[test]
    fn concrete_flop_zero_at_frame0() {
        let n = shift_register();
        let mut abstr = WSet::new();
        abstr.insert(n.flops()[1]);
        let mut cex = all_x_cex(&n, 0);
        cex.flops[0][1] = Lbool::True; // ignored: f2 is concrete
        let sim = simulate_cex(&n, &abstr, &cex);
        assert_eq!(sim.value(0, Wire::positive(n.flops()[1])), Lbool::False);
        assert_eq!(sim.value(0, n.bad()), Lbool::False);
    }

    #[test]
    fn abstract_flop_uses_cex_value() {
        let n = shift_register();
        let mut cex = all_x_cex(&n, 0);
        cex.flops[0][1] = Lbool::True; // f2 abstract, free value 1
        let sim = simulate_cex(&n, &WSet::new(), &cex);
        assert_eq!(sim.value(0, n.bad()), Lbool::True);
    }

    // bad = f & g over two PIs standing in for flop values.
    fn and_design() -> Netlist {
        let mut n = Netlist::new();
        let f = n.add_flop();
        let g = n.add_flop();
        n.set_flop_input(f, Netlist::FALSE);
        let i = n.add_pi();
        n.set_flop_input(g, i);
        let b = n.add_and(f, g);
        n.set_property(!b);
        n
    }

    #[test]
    fn propagate_x_through_and() {
        let n = and_design();
        let mut cex = all_x_cex(&n, 0);
        cex.flops[0][0] = Lbool::True;
        cex.flops[0][1] = Lbool::True;
        let abstr = WSet::new();
        let mut sim = simulate_cex(&n, &abstr, &cex);
        assert_eq!(sim.value(0, n.bad()), Lbool::True);
        let f = Wire::positive(n.flops()[0]);
        sim.propagate(&n, &abstr, 0, f, Lbool::Undef);
        assert_eq!(sim.value(0, n.bad()), Lbool::Undef, "1 & X = X");
    }

    #[test]
    fn x_absorbed_by_zero() {
        let n = and_design();
        let mut cex = all_x_cex(&n, 0);
        cex.flops[0][0] = Lbool::True;
        cex.flops[0][1] = Lbool::False; // g = 0
        let abstr = WSet::new();
        let mut sim = simulate_cex(&n, &abstr, &cex);
        assert_eq!(sim.value(0, n.bad()), Lbool::False);
        let f = Wire::positive(n.flops()[0]);
        sim.propagate(&n, &abstr, 0, f, Lbool::Undef);
        assert_eq!(sim.value(0, n.bad()), Lbool::False, "0 & X = 0");
    }

    #[test]
    fn undo_restores_state_exactly() {
        let n = and_design();
        let mut cex = all_x_cex(&n, 0);
        cex.flops[0][0] = Lbool::True;
        cex.flops[0][1] = Lbool::True;
        let abstr = WSet::new();
        let mut sim = simulate_cex(&n, &abstr, &cex);
        let snapshot = sim.values.clone();
        let f = Wire::positive(n.flops()[0]);
        sim.propagate(&n, &abstr, 0, f, Lbool::Undef);
        sim.propagate(&n, &abstr, 0, f, cex.flops[0][0]);
        assert_eq!(sim.values, snapshot);
    }

    #[test]
    fn refine_single_flop_bad() {
        // bad = f, f free: X trivially reaches bad, so f is concretized.
        let mut n = Netlist::new();
        let f = n.add_flop();
        n.set_flop_input(f, Netlist::FALSE);
        n.set_property(!f);
        let mut t = Trace::new(&n, PbaMode::Interleaved);
        let b0 = t.insert(0, n.bad());
        assert!(t.solve(&[b0]));
        refine_abstraction(&mut t, 0, n.bad());
        assert!(t.abstr().contains(f.gate()));
        assert_eq!(t.abstr().len(), 1);
    }

    #[test]
    fn refine_shift_register_depth0_adds_only_f2() {
        let n = shift_register();
        let mut t = Trace::new(&n, PbaMode::Interleaved);
        let b0 = t.insert(0, n.bad());
        assert!(t.solve(&[b0]));
        refine_abstraction(&mut t, 0, n.bad());
        assert!(t.abstr().contains(n.flops()[1]));
        assert!(!t.abstr().contains(n.flops()[0]), "f1 has no frame-0 path to bad");
        assert_eq!(t.abstr().len(), 1);
    }

    #[test]
    fn refine_stable_when_all_support_concrete() {
        let n = shift_register();
        let mut t = Trace::new(&n, PbaMode::Off);
        let mut disj = Vec::new();
        for d in 0..=2 {
            disj.push(t.insert(d, n.bad()));
        }
        t.extend_abs(Wire::positive(n.flops()[0]));
        t.extend_abs(Wire::positive(n.flops()[1]));
        assert!(t.solve(&disj), "true counterexample exists at depth 2");
        let size = t.abstr().len();
        refine_abstraction(&mut t, 2, n.bad());
        assert_eq!(t.abstr().len(), size, "abstraction stable => cex genuine");
    }
}
