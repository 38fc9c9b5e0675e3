//! Incremental CDCL SAT solver.
//!
//! The public surface is the two-method interface the rest of the crate is
//! written against: `add_clause` and `solve` under unit assumptions, with the
//! subset of assumptions used in the refutation available from
//! `final_conflict` after an UNSAT answer. No proof logging anywhere.
//!
//! Internals are a conventional small CDCL core: two-watched-literal
//! propagation, first-UIP learning, activity-based branching with decay,
//! geometric restarts and learned-clause reduction. Assumptions are handled
//! as forced leading decisions; a conflict that contradicts them is analyzed
//! back to the decision literals (`analyze_final`).

use std::cell::Cell;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        Lit(var << 1 | (!positive) as u32)
    }

    #[inline]
    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    /// True for a negated literal.
    #[inline]
    pub fn sign(self) -> bool {
        self.0 & 1 != 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn xor_sign(self, s: bool) -> Lit {
        Lit(self.0 ^ s as u32)
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl std::fmt::Debug for Lit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.sign() {
            write!(f, "-x{}", self.var())
        } else {
            write!(f, "x{}", self.var())
        }
    }
}

/// Three-valued boolean.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lbool {
    False,
    True,
    Undef,
}

impl Lbool {
    pub fn from_bool(b: bool) -> Lbool {
        if b {
            Lbool::True
        } else {
            Lbool::False
        }
    }

    /// Negation: swaps 0 and 1, fixes X.
    pub fn negate(self) -> Lbool {
        match self {
            Lbool::False => Lbool::True,
            Lbool::True => Lbool::False,
            Lbool::Undef => Lbool::Undef,
        }
    }

    pub fn xor_sign(self, s: bool) -> Lbool {
        if s {
            self.negate()
        } else {
            self
        }
    }

    /// Ternary AND: 0 absorbs, 1 is identity, X otherwise.
    pub fn and(self, other: Lbool) -> Lbool {
        match (self, other) {
            (Lbool::False, _) | (_, Lbool::False) => Lbool::False,
            (Lbool::True, x) | (x, Lbool::True) => x,
            _ => Lbool::Undef,
        }
    }
}

impl std::ops::Not for Lbool {
    type Output = Lbool;
    fn not(self) -> Lbool {
        self.negate()
    }
}

type CRef = u32;
const CREF_UNDEF: CRef = u32::MAX;

struct Clause {
    lits: Vec<Lit>,
    activity: f64,
    learnt: bool,
    deleted: bool,
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: CRef,
    blocker: Lit,
}

/// Indexed max-heap over variable activities (decision order).
#[derive(Default)]
struct VarOrder {
    heap: Vec<u32>,
    pos: Vec<i32>, // -1 if absent
}

impl VarOrder {
    fn grow(&mut self, nvars: usize) {
        self.pos.resize(nvars, -1);
    }

    fn in_heap(&self, v: u32) -> bool {
        self.pos[v as usize] >= 0
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.in_heap(v) {
            return;
        }
        self.pos[v as usize] = self.heap.len() as i32;
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn bump(&mut self, v: u32, act: &[f64]) {
        if self.in_heap(v) {
            self.sift_up(self.pos[v as usize] as usize, act);
        }
    }

    fn pop_max(&mut self, act: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = -1;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn remove_at(&mut self, i: usize, act: &[f64]) -> u32 {
        let v = self.heap[i];
        let last = self.heap.pop().unwrap();
        self.pos[v as usize] = -1;
        if i < self.heap.len() {
            self.heap[i] = last;
            self.pos[last as usize] = i as i32;
            self.sift_down(i, act);
            self.sift_up(self.pos[last as usize] as usize, act);
        }
        v
    }

    fn len(&self) -> usize {
        self.heap.len()
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        while i > 0 {
            let p = (i - 1) / 2;
            if act[self.heap[i] as usize] <= act[self.heap[p] as usize] {
                break;
            }
            self.swap(i, p);
            i = p;
        }
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        loop {
            let l = 2 * i + 1;
            let r = 2 * i + 2;
            let mut best = i;
            if l < self.heap.len() && act[self.heap[l] as usize] > act[self.heap[best] as usize] {
                best = l;
            }
            if r < self.heap.len() && act[self.heap[r] as usize] > act[self.heap[best] as usize] {
                best = r;
            }
            if best == i {
                break;
            }
            self.swap(i, best);
            i = best;
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.heap.swap(i, j);
        self.pos[self.heap[i] as usize] = i as i32;
        self.pos[self.heap[j] as usize] = j as i32;
    }
}

thread_local! {
    static SOLVERS_CREATED: Cell<u64> = const { Cell::new(0) };
}

/// Number of `Solver` instances constructed on the current thread.
/// Diagnostic hook; used to check single-instance engine behavior.
pub fn solvers_created_in_thread() -> u64 {
    SOLVERS_CREATED.with(|c| c.get())
}

pub struct Solver {
    clauses: Vec<Clause>,
    learnt_refs: Vec<CRef>,
    watches: Vec<Vec<Watcher>>, // indexed by Lit::index
    assigns: Vec<Lbool>,
    polarity: Vec<bool>,
    activity: Vec<f64>,
    order: VarOrder,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    reason: Vec<CRef>,
    level: Vec<u32>,
    seen: Vec<bool>,
    qhead: usize,
    ok: bool,
    true_lit: Lit,
    model: Vec<Lbool>,
    conflict: Vec<Lit>,
    assumptions: Vec<Lit>,
    var_inc: f64,
    cla_inc: f64,
    max_learnts: f64,
    rng_state: u64,
    num_conflicts: u64,
    num_decisions: u64,
    num_propagations: u64,
    num_clause_adds: u64,
    clause_log: Option<Vec<Vec<Lit>>>,
}

const VAR_DECAY: f64 = 1.0 / 0.95;
const CLA_DECAY: f64 = 1.0 / 0.999;
const RESTART_FIRST: u64 = 100;
const RESTART_INC: f64 = 1.5;
const RANDOM_VAR_FREQ: f64 = 0.02;

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

impl Solver {
    pub fn new() -> Solver {
        SOLVERS_CREATED.with(|c| c.set(c.get() + 1));
        let mut s = Solver {
            clauses: Vec::new(),
            learnt_refs: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            polarity: Vec::new(),
            activity: Vec::new(),
            order: VarOrder::default(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            reason: Vec::new(),
            level: Vec::new(),
            seen: Vec::new(),
            qhead: 0,
            ok: true,
            true_lit: Lit(0),
            model: Vec::new(),
            conflict: Vec::new(),
            assumptions: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            max_learnts: 300.0,
            rng_state: 0x9e37_79b9_7f4a_7c15,
            num_conflicts: 0,
            num_decisions: 0,
            num_propagations: 0,
            num_clause_adds: 0,
            clause_log: None,
        };
        // Variable 0 is the special literal bound to true.
        s.true_lit = s.new_lit();
        let t = s.true_lit;
        s.add_clause(&[t]);
        s
    }

    /// Literal bound to constant true.
    pub fn true_lit(&self) -> Lit {
        self.true_lit
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.rng_state = seed | 1;
    }

    /// Record every added clause for rebuild-based incrementality checks.
    pub fn enable_clause_log(&mut self) {
        if self.clause_log.is_none() {
            self.clause_log = Some(Vec::new());
        }
    }

    pub fn clause_log(&self) -> Option<&[Vec<Lit>]> {
        self.clause_log.as_deref()
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn num_conflicts(&self) -> u64 {
        self.num_conflicts
    }

    pub fn num_clause_adds(&self) -> u64 {
        self.num_clause_adds
    }

    /// Fresh variable, returned as a literal with positive polarity.
    pub fn new_lit(&mut self) -> Lit {
        let v = self.assigns.len() as u32;
        self.assigns.push(Lbool::Undef);
        self.polarity.push(true); // default phase: negative (assign false)
        self.activity.push(0.0);
        self.reason.push(CREF_UNDEF);
        self.level.push(0);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.order.grow(self.assigns.len());
        self.order.insert(v, &self.activity);
        Lit::new(v, true)
    }

    #[inline]
    fn value(&self, p: Lit) -> Lbool {
        self.assigns[p.var() as usize].xor_sign(p.sign())
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    /// Add a clausal constraint. Duplicate literals are merged, tautologies
    /// are dropped, and the empty clause makes the solver permanently UNSAT.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        debug_assert_eq!(self.decision_level(), 0);
        for &p in lits {
            assert!((p.var() as usize) < self.assigns.len(), "unknown variable {:?}", p);
        }
        self.num_clause_adds += 1;
        if let Some(log) = &mut self.clause_log {
            log.push(lits.to_vec());
        }
        if !self.ok {
            return;
        }
        let mut cl: Vec<Lit> = lits.to_vec();
        cl.sort_unstable();
        cl.dedup();
        let mut out: Vec<Lit> = Vec::with_capacity(cl.len());
        for (i, &p) in cl.iter().enumerate() {
            if i + 1 < cl.len() && cl[i + 1] == !p {
                return; // tautology
            }
            match self.value(p) {
                Lbool::True => return, // satisfied at level 0
                Lbool::False => {}     // drop falsified literal
                Lbool::Undef => out.push(p),
            }
        }
        match out.len() {
            0 => {
                self.ok = false;
            }
            1 => {
                self.unchecked_enqueue(out[0], CREF_UNDEF);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                let cref = self.alloc_clause(out, false);
                self.attach(cref);
            }
        }
    }

    fn alloc_clause(&mut self, lits: Vec<Lit>, learnt: bool) -> CRef {
        let cref = self.clauses.len() as CRef;
        self.clauses.push(Clause { lits, activity: 0.0, learnt, deleted: false });
        if learnt {
            self.learnt_refs.push(cref);
        }
        cref
    }

    fn attach(&mut self, cref: CRef) {
        let (w0, w1) = {
            let c = &self.clauses[cref as usize];
            (c.lits[0], c.lits[1])
        };
        self.watches[(!w0).index()].push(Watcher { cref, blocker: w1 });
        self.watches[(!w1).index()].push(Watcher { cref, blocker: w0 });
    }

    fn detach(&mut self, cref: CRef) {
        let (w0, w1) = {
            let c = &self.clauses[cref as usize];
            (c.lits[0], c.lits[1])
        };
        self.watches[(!w0).index()].retain(|w| w.cref != cref);
        self.watches[(!w1).index()].retain(|w| w.cref != cref);
    }

    fn unchecked_enqueue(&mut self, p: Lit, from: CRef) {
        debug_assert_eq!(self.value(p), Lbool::Undef);
        let v = p.var() as usize;
        self.assigns[v] = Lbool::from_bool(!p.sign());
        self.reason[v] = from;
        self.level[v] = self.decision_level() as u32;
        self.trail.push(p);
    }

    fn propagate(&mut self) -> Option<CRef> {
        let mut confl = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.num_propagations += 1;
            let mut ws = std::mem::take(&mut self.watches[p.index()]);
            let mut kept = 0usize;
            let mut i = 0usize;
            'next_watcher: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == Lbool::True {
                    ws[kept] = w;
                    kept += 1;
                    continue;
                }
                let false_lit = !p;
                {
                    let c = &mut self.clauses[w.cref as usize];
                    if c.lits[0] == false_lit {
                        c.lits.swap(0, 1);
                    }
                    debug_assert_eq!(c.lits[1], false_lit);
                }
                let first = self.clauses[w.cref as usize].lits[0];
                if first != w.blocker && self.value(first) == Lbool::True {
                    ws[kept] = Watcher { cref: w.cref, blocker: first };
                    kept += 1;
                    continue;
                }
                // Look for a new literal to watch.
                let len = self.clauses[w.cref as usize].lits.len();
                for k in 2..len {
                    let lk = self.clauses[w.cref as usize].lits[k];
                    if self.value(lk) != Lbool::False {
                        self.clauses[w.cref as usize].lits.swap(1, k);
                        self.watches[(!lk).index()].push(Watcher { cref: w.cref, blocker: first });
                        continue 'next_watcher;
                    }
                }
                // Unit or conflicting.
                ws[kept] = Watcher { cref: w.cref, blocker: first };
                kept += 1;
                if self.value(first) == Lbool::False {
                    confl = Some(w.cref);
                    self.qhead = self.trail.len();
                    // Keep the remaining watchers.
                    while i < ws.len() {
                        ws[kept] = ws[i];
                        kept += 1;
                        i += 1;
                    }
                    break;
                } else {
                    self.unchecked_enqueue(first, w.cref);
                }
            }
            ws.truncate(kept);
            debug_assert!(self.watches[p.index()].is_empty());
            self.watches[p.index()] = ws;
            if confl.is_some() {
                break;
            }
        }
        confl
    }

    fn var_bump(&mut self, v: u32) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.bump(v, &self.activity);
    }

    fn cla_bump(&mut self, cref: CRef) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &r in &self.learnt_refs {
                self.clauses[r as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backtrack level.
    fn analyze(&mut self, mut confl: CRef) -> (Vec<Lit>, usize) {
        let mut learnt: Vec<Lit> = vec![Lit(0)]; // slot 0 reserved for the UIP
        let mut path_c = 0u32;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();

        loop {
            debug_assert_ne!(confl, CREF_UNDEF);
            if self.clauses[confl as usize].learnt {
                self.cla_bump(confl);
            }
            let start = if p.is_none() { 0 } else { 1 };
            let lits: Vec<Lit> = self.clauses[confl as usize].lits[start..].to_vec();
            for q in lits {
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.var_bump(q.var());
                    self.seen[v] = true;
                    if self.level[v] as usize >= self.decision_level() {
                        path_c += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            // Next literal to resolve on.
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let pl = self.trail[index];
            confl = self.reason[pl.var() as usize];
            self.seen[pl.var() as usize] = false;
            path_c -= 1;
            p = Some(pl);
            if path_c == 0 {
                learnt[0] = !pl;
                break;
            }
        }

        let bt_level = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[max_i].var() as usize] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var() as usize] as usize
        };
        for &q in &learnt {
            self.seen[q.var() as usize] = false;
        }
        (learnt, bt_level)
    }

    /// Compute which assumptions are needed to explain the falsification of
    /// assumption `failed` (whose negation is implied by the trail). The
    /// result, a subset of the current assumptions, lands in `self.conflict`.
    fn analyze_final(&mut self, failed: Lit) {
        self.conflict.clear();
        self.conflict.push(failed);
        if self.decision_level() == 0 {
            return;
        }
        self.seen[failed.var() as usize] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let x = self.trail[i].var() as usize;
            if !self.seen[x] {
                continue;
            }
            if self.reason[x] == CREF_UNDEF {
                debug_assert!(self.level[x] > 0);
                // A decision inside the assumption prefix is an assumption.
                self.conflict.push(self.trail[i]);
            } else {
                let r = self.reason[x];
                let lits: Vec<Lit> = self.clauses[r as usize].lits[1..].to_vec();
                for q in lits {
                    if self.level[q.var() as usize] > 0 {
                        self.seen[q.var() as usize] = true;
                    }
                }
            }
            self.seen[x] = false;
        }
        self.seen[failed.var() as usize] = false;
    }

    fn cancel_until(&mut self, lvl: usize) {
        if self.decision_level() <= lvl {
            return;
        }
        let bound = self.trail_lim[lvl];
        for i in (bound..self.trail.len()).rev() {
            let p = self.trail[i];
            let v = p.var() as usize;
            self.assigns[v] = Lbool::Undef;
            self.polarity[v] = p.sign();
            self.reason[v] = CREF_UNDEF;
            self.order.insert(p.var(), &self.activity);
        }
        self.trail.truncate(bound);
        self.trail_lim.truncate(lvl);
        self.qhead = bound;
    }

    fn next_rand(&mut self) -> u64 {
        let mut x = self.rng_state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.rng_state = x;
        x
    }

    fn pick_branch_lit(&mut self) -> Option<Lit> {
        // Occasional random pick; the main heuristic is activity order.
        if (self.next_rand() % 1000) as f64 / 1000.0 < RANDOM_VAR_FREQ && self.order.len() > 0 {
            let i = (self.next_rand() % self.order.len() as u64) as usize;
            let v = self.order.heap[i];
            if self.assigns[v as usize] == Lbool::Undef {
                self.order.remove_at(i, &self.activity);
                return Some(Lit::new(v, !self.polarity[v as usize]));
            }
        }
        loop {
            let v = self.order.pop_max(&self.activity)?;
            if self.assigns[v as usize] == Lbool::Undef {
                return Some(Lit::new(v, !self.polarity[v as usize]));
            }
        }
    }

    fn reduce_db(&mut self) {
        let mut refs = std::mem::take(&mut self.learnt_refs);
        refs.retain(|&r| !self.clauses[r as usize].deleted);
        refs.sort_by(|&a, &b| {
            self.clauses[a as usize]
                .activity
                .partial_cmp(&self.clauses[b as usize].activity)
                .unwrap()
        });
        let n_remove = refs.len() / 2;
        let mut removed = 0usize;
        let mut kept: Vec<CRef> = Vec::with_capacity(refs.len());
        for &r in &refs {
            let locked = {
                let c = &self.clauses[r as usize];
                c.lits.len() > 1 && self.reason[c.lits[0].var() as usize] == r
                    && self.value(c.lits[0]) == Lbool::True
            };
            if removed < n_remove && !locked && self.clauses[r as usize].lits.len() > 2 {
                self.detach(r);
                self.clauses[r as usize].deleted = true;
                self.clauses[r as usize].lits.clear();
                self.clauses[r as usize].lits.shrink_to_fit();
                removed += 1;
            } else {
                kept.push(r);
            }
        }
        self.learnt_refs = kept;
    }

    /// One restart-bounded search episode. `None` means restart.
    fn search(&mut self, budget: u64) -> Option<bool> {
        let mut conflicts_here = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.num_conflicts += 1;
                conflicts_here += 1;
                if self.decision_level() == 0 {
                    self.conflict.clear();
                    self.ok = false;
                    return Some(false);
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.unchecked_enqueue(learnt[0], CREF_UNDEF);
                } else {
                    let first = learnt[0];
                    let cref = self.alloc_clause(learnt, true);
                    self.attach(cref);
                    self.cla_bump(cref);
                    self.unchecked_enqueue(first, cref);
                }
                self.var_inc *= VAR_DECAY;
                self.cla_inc *= CLA_DECAY;
            } else {
                if conflicts_here >= budget {
                    self.cancel_until(0);
                    return None;
                }
                if self.learnt_refs.len() as f64 >= self.max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                }
                let mut next: Option<Lit> = None;
                while self.decision_level() < self.assumptions.len() {
                    let p = self.assumptions[self.decision_level()];
                    match self.value(p) {
                        Lbool::True => {
                            // Dummy level keeps decision_level in sync with
                            // the assumption index.
                            self.trail_lim.push(self.trail.len());
                        }
                        Lbool::False => {
                            self.analyze_final(p);
                            return Some(false);
                        }
                        Lbool::Undef => {
                            next = Some(p);
                            break;
                        }
                    }
                }
                let next = match next {
                    Some(p) => p,
                    None => match self.pick_branch_lit() {
                        Some(p) => p,
                        None => {
                            self.model = self.assigns.clone();
                            return Some(true);
                        }
                    },
                };
                self.num_decisions += 1;
                self.trail_lim.push(self.trail.len());
                self.unchecked_enqueue(next, CREF_UNDEF);
            }
        }
    }

    /// Search for a model of all clauses under the given unit assumptions.
    /// On UNSAT, `final_conflict()` holds a subset of `assumps` such that the
    /// clauses together with that subset are unsatisfiable.
    pub fn solve(&mut self, assumps: &[Lit]) -> bool {
        self.conflict.clear();
        if !self.ok {
            return false;
        }
        self.assumptions = assumps.to_vec();
        self.max_learnts = self.max_learnts.max((self.clauses.len() as f64) / 3.0).max(300.0);
        let mut budget = RESTART_FIRST;
        let result = loop {
            match self.search(budget) {
                Some(r) => break r,
                None => budget = (budget as f64 * RESTART_INC) as u64,
            }
        };
        self.cancel_until(0);
        self.assumptions.clear();
        result
    }

    /// Assumptions used in the last UNSAT answer.
    pub fn final_conflict(&self) -> &[Lit] {
        &self.conflict
    }

    /// Value of `p` in the last model. Variables created after that solve
    /// read as X.
    pub fn model_value(&self, p: Lit) -> Lbool {
        match self.model.get(p.var() as usize) {
            Some(&v) => v.xor_sign(p.sign()),
            None => Lbool::Undef,
        }
    }
}

/// Parse DIMACS CNF into (variable count, clauses of nonzero ints).
pub fn parse_dimacs(text: &str) -> Result<(usize, Vec<Vec<i32>>), String> {
    let mut n_vars = 0usize;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut seen_header = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(format!("bad problem line: {line}"));
            }
            n_vars = parts[1].parse().map_err(|e| format!("bad var count: {e}"))?;
            seen_header = true;
            continue;
        }
        for tok in line.split_whitespace() {
            let v: i32 = tok.parse().map_err(|e| format!("bad literal {tok}: {e}"))?;
            if v == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if v.unsigned_abs() as usize > n_vars {
                    return Err(format!("literal {v} exceeds declared variable count"));
                }
                current.push(v);
            }
        }
    }
    if !seen_header {
        return Err("missing 'p cnf' header".into());
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    Ok((n_vars, clauses))
}

/// Load DIMACS clauses into a solver; returns the literal for each variable
/// (1-based DIMACS variable i at index i-1).
pub fn load_dimacs(s: &mut Solver, n_vars: usize, clauses: &[Vec<i32>]) -> Vec<Lit> {
    let lits: Vec<Lit> = (0..n_vars).map(|_| s.new_lit()).collect();
    for cl in clauses {
        let c: Vec<Lit> = cl
            .iter()
            .map(|&v| lits[(v.unsigned_abs() - 1) as usize].xor_sign(v < 0))
            .collect();
        s.add_clause(&c);
    }
    lits
}

/// Replay a clause log into a fresh solver and report the verdict for the
/// given assumptions. Oracle for incrementality checks: the fresh solver and
/// the incremental one must agree on every solve.
pub fn verdict_by_rebuild(log: &[Vec<Lit>], n_vars: usize, assumps: &[Lit]) -> bool {
    let mut s = Solver::new();
    while s.num_vars() < n_vars {
        s.new_lit();
    }
    for cl in log {
        s.add_clause(cl);
    }
    s.solve(assumps)
}
