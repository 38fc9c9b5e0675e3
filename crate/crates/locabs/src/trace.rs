//! BMC trace: the incremental unrolling of a design netlist into a second,
//! structurally hashed netlist `F`, and the CNF image of `F` inside one
//! long-lived SAT instance.
//!
//! Concretized flops are guarded by activation literals: one literal guards
//! all occurrences of one flop across the unrolling. Assuming the literal
//! connects the flop to its (time-shifted) input; omitting it leaves the
//! flop behaving as a free PI. Proof-based abstraction falls out of the
//! final conflict over these assumptions.

use crate::netlist::{GateId, GateKind, Netlist, WMap, WSet, Wire};
use crate::sat::{Lbool, Lit, Solver};

/// How `solve` applies proof-based abstraction on UNSAT answers.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PbaMode {
    /// Prune the abstraction on every UNSAT answer.
    Interleaved,
    /// Record the redundant set on every UNSAT answer but leave the
    /// abstraction untouched; the caller applies the last set once at the
    /// end.
    RecordOnly,
    /// Never prune, never record.
    Off,
}

/// Frame-indexed ternary assignment to the design's PIs and flops.
#[derive(Clone, Debug)]
pub struct Cex {
    pub depth: usize,
    /// `pis[frame][pi_index]`
    pub pis: Vec<Vec<Lbool>>,
    /// `flops[frame][flop_index]`
    pub flops: Vec<Vec<Lbool>>,
}

pub struct Trace<'a> {
    n: &'a Netlist,
    f: Netlist,
    s: Solver,
    abstr: WSet,
    /// `n2f[frame]` maps design gates to unrolling gates (as wires).
    n2f: Vec<WMap<Wire>>,
    /// Maps unrolling gates to SAT literals.
    f2s: WMap<Lit>,
    /// One activation literal per flop, allocated on first concretization
    /// and reused forever after.
    act_lits: WMap<Lit>,
    /// Frames for which a flop's transition clauses already exist, so that
    /// re-concretizing a pruned flop does not duplicate clauses.
    flop_frames_done: Vec<WSet>,
    pba: PbaMode,
    last_redundant: Vec<GateId>,
    last_solve_sat: bool,
    rebuild_check: bool,
}

impl<'a> Trace<'a> {
    pub fn new(n: &'a Netlist, pba: PbaMode) -> Trace<'a> {
        let f = Netlist::new();
        let s = Solver::new();
        let mut f2s = WMap::new();
        f2s.set(Netlist::TRUE, s.true_lit());
        Trace {
            n,
            f,
            s,
            abstr: WSet::new(),
            n2f: Vec::new(),
            f2s,
            act_lits: WMap::new(),
            flop_frames_done: Vec::new(),
            pba,
            last_redundant: Vec::new(),
            last_solve_sat: false,
            rebuild_check: false,
        }
    }

    /// Cross-check every solve against a fresh solver rebuilt from the
    /// clause log (debug aid; slow). Panics on any verdict mismatch.
    pub fn set_rebuild_check(&mut self, on: bool) {
        if on {
            self.s.enable_clause_log();
        }
        self.rebuild_check = on;
    }

    pub fn design(&self) -> &Netlist {
        self.n
    }

    /// Current abstraction (publicly read-only).
    pub fn abstr(&self) -> &WSet {
        &self.abstr
    }

    pub fn solver(&self) -> &Solver {
        &self.s
    }

    pub fn solver_mut(&mut self) -> &mut Solver {
        &mut self.s
    }

    fn ensure_frame(&mut self, frame: usize) {
        while self.n2f.len() <= frame {
            self.n2f.push(WMap::new());
            self.flop_frames_done.push(WSet::new());
        }
    }

    /// Recursively add the logic feeding `w` at the given frame to the
    /// unrolling. Memoized; the returned wire carries the sign of `w`.
    pub fn insert(&mut self, frame: usize, w: Wire) -> Wire {
        self.ensure_frame(frame);
        let ret = match self.n2f[frame].get_copied(w) {
            Some(r) => r,
            None => {
                let r = match self.n.kind(w.gate()) {
                    GateKind::Const => Netlist::TRUE,
                    GateKind::PI => self.f.add_pi(),
                    GateKind::And => {
                        let (a, b) = self.n.and_fanins(w.gate());
                        let fa = self.insert(frame, a);
                        let fb = self.insert(frame, b);
                        self.f.add_and(fa, fb)
                    }
                    GateKind::Flop => {
                        let r = self.f.add_pi();
                        self.n2f[frame].set(w, r);
                        if self.abstr.contains(w.gate()) {
                            self.insert_flop(frame, w, r);
                        }
                        r
                    }
                };
                self.n2f[frame].set(w, r);
                r
            }
        };
        ret.xor_sign(w.sign())
    }

    /// Tie the unrolling PI `f` standing for `w_flop` at `frame` to the
    /// flop's time-shifted input, guarded by the flop's activation literal.
    /// At frame 0 the input is constant false (zero initialization).
    fn insert_flop(&mut self, frame: usize, w_flop: Wire, f: Wire) {
        self.ensure_frame(frame);
        if !self.flop_frames_done[frame].insert(w_flop.gate()) {
            return; // clauses already present (flop was pruned and re-added)
        }
        let f_in = if frame == 0 {
            Netlist::FALSE
        } else {
            let w_in = self.n.flop_input(w_flop);
            self.insert(frame - 1, w_in)
        };
        let p = self.clausify(f_in);
        let q = self.clausify(f);
        let a = match self.act_lits.get_copied(w_flop) {
            Some(a) => a,
            None => {
                let a = self.s.new_lit();
                self.act_lits.set(w_flop, a);
                a
            }
        };
        // a -> (p <-> q)
        self.s.add_clause(&[!a, !p, q]);
        self.s.add_clause(&[!a, p, !q]);
    }

    /// Grow the abstraction by one flop, adding the missing transition
    /// logic for every frame where the flop already appears.
    pub fn extend_abs(&mut self, w_flop: Wire) {
        debug_assert_eq!(self.n.kind(w_flop.gate()), GateKind::Flop);
        self.abstr.insert(w_flop.gate());
        for frame in 0..self.n2f.len() {
            if let Some(f) = self.n2f[frame].get_copied(w_flop) {
                self.insert_flop(frame, w_flop, f);
            }
        }
    }

    /// Tseitin clausification of unrolling logic, memoized sign-insensitively.
    fn clausify(&mut self, f: Wire) -> Lit {
        let ret = match self.f2s.get_copied(f) {
            Some(l) => l,
            None => {
                let l = match self.f.kind(f.gate()) {
                    GateKind::PI => self.s.new_lit(),
                    GateKind::And => {
                        let (a, b) = self.f.and_fanins(f.gate());
                        let x = self.clausify(a);
                        let y = self.clausify(b);
                        let l = self.s.new_lit();
                        self.s.add_clause(&[x, !l]);
                        self.s.add_clause(&[y, !l]);
                        self.s.add_clause(&[!x, !y, l]);
                        l
                    }
                    GateKind::Const => unreachable!("constant pre-seeded in f2s"),
                    GateKind::Flop => unreachable!("the unrolling has no flops"),
                };
                self.f2s.set(f, l);
                l
            }
        };
        ret.xor_sign(f.sign())
    }

    fn assumptions(&self, extra: Lit) -> Vec<Lit> {
        let mut assumps = vec![extra];
        for &g in self.n.flops() {
            let w = Wire::positive(g);
            if let Some(a) = self.act_lits.get_copied(w) {
                if self.abstr.contains(g) {
                    assumps.push(a);
                }
            }
        }
        assumps
    }

    /// Search for an assignment satisfying the disjunction of the given
    /// unrolling wires, under the current abstraction. On UNSAT, flops whose
    /// activation literal is absent from the final conflict are handled per
    /// the PBA mode.
    pub fn solve(&mut self, f_disj: &[Wire]) -> bool {
        let q = self.s.new_lit();
        let mut clause = vec![!q];
        for &f in f_disj {
            let l = self.clausify(f);
            clause.push(l);
        }
        self.s.add_clause(&clause);
        let assumps = self.assumptions(q);
        let result = self.s.solve(&assumps);
        if self.rebuild_check {
            let scratch = crate::sat::verdict_by_rebuild(
                self.s.clause_log().expect("clause log enabled"),
                self.s.num_vars(),
                &assumps,
            );
            assert_eq!(result, scratch, "incremental verdict differs from scratch rebuild");
        }
        if result {
            self.last_solve_sat = true;
        } else {
            self.last_solve_sat = false;
            let conflict: Vec<Lit> = self.s.final_conflict().to_vec();
            let mut redundant = Vec::new();
            for g in self.abstr.iter() {
                let needed = match self.act_lits.get_copied(Wire::positive(g)) {
                    Some(a) => conflict.contains(&a),
                    None => false,
                };
                if !needed {
                    redundant.push(g);
                }
            }
            match self.pba {
                PbaMode::Interleaved => {
                    for &g in &redundant {
                        self.abstr.remove(g);
                    }
                }
                PbaMode::RecordOnly => {
                    self.last_redundant = redundant;
                }
                PbaMode::Off => {}
            }
        }
        // Forever disable the temporary disjunction clause.
        self.s.add_clause(&[!q]);
        result
    }

    /// Re-check the same disjunction without any PBA side effects.
    /// Diagnostic; used to validate that pruning preserved unsatisfiability.
    pub fn probe_unsat(&mut self, f_disj: &[Wire]) -> bool {
        let q = self.s.new_lit();
        let mut clause = vec![!q];
        for &f in f_disj {
            let l = self.clausify(f);
            clause.push(l);
        }
        self.s.add_clause(&clause);
        let assumps = self.assumptions(q);
        let result = self.s.solve(&assumps);
        self.s.add_clause(&[!q]);
        !result
    }

    /// Remove the flops recorded as redundant by the most recent UNSAT
    /// answer (RecordOnly mode). No-op if no UNSAT has been seen.
    pub fn apply_final_trim(&mut self) {
        let redundant = std::mem::take(&mut self.last_redundant);
        for g in redundant {
            self.abstr.remove(g);
        }
    }

    /// Translate the last SAT model into 0/1/X values for the design's PIs
    /// and flops over frames 0..depth. Gates never inserted (or never
    /// clausified) read as X.
    pub fn get_cex(&self, depth: usize) -> Cex {
        assert!(self.last_solve_sat, "last solve was not SAT");
        let mut cex = Cex { depth, pis: Vec::new(), flops: Vec::new() };
        for frame in 0..=depth {
            let mut pis = vec![Lbool::Undef; self.n.pis().len()];
            let mut flops = vec![Lbool::Undef; self.n.flops().len()];
            if frame < self.n2f.len() {
                for (out, gates) in
                    [(&mut pis, self.n.pis()), (&mut flops, self.n.flops())]
                {
                    for (i, &g) in gates.iter().enumerate() {
                        if let Some(fw) = self.n2f[frame].get_copied(Wire::positive(g)) {
                            if let Some(l) = self.f2s.get_copied(fw) {
                                out[i] = self.s.model_value(l.xor_sign(fw.sign()));
                            }
                        }
                    }
                }
            }
            cex.pis.push(pis);
            cex.flops.push(flops);
        }
        cex
    }
}
