//! Top-level combined abstraction loop.
//!
//! Starting from the empty abstraction, the loop unrolls the bad signal one
//! frame at a time into a single long-lived SAT instance. SAT answers grow
//! the abstraction via ternary-simulation refinement; UNSAT answers advance
//! the depth (and, depending on mode, prune the abstraction via the final
//! conflict over activation literals). Terminates with a genuine
//! counterexample when refinement leaves the abstraction unchanged, or with
//! the current abstraction when a resource limit is hit.

use crate::netlist::{Netlist, WSet, Wire};
use crate::refine::refine_abstraction;
use crate::trace::{Cex, PbaMode, Trace};
use std::time::Instant;

#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub max_depth: Option<usize>,
    pub max_seconds: Option<f64>,
    pub max_conflicts: Option<u64>,
}

impl Limits {
    pub fn depth(d: usize) -> Limits {
        Limits { max_depth: Some(d), ..Default::default() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// PBA applied on every UNSAT answer.
    Interleaved,
    /// PBA recorded on every UNSAT answer, applied once at the resource
    /// limit.
    FinalPba,
    /// No PBA at all.
    CbaOnly,
}

impl Mode {
    fn pba_mode(self) -> PbaMode {
        match self {
            Mode::Interleaved => PbaMode::Interleaved,
            Mode::FinalPba => PbaMode::RecordOnly,
            Mode::CbaOnly => PbaMode::Off,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Interleaved => "interleaved",
            Mode::FinalPba => "final-pba",
            Mode::CbaOnly => "cba-only",
        })
    }
}

#[derive(Clone, Debug)]
pub struct DepthStats {
    pub depth: usize,
    pub sat_calls: u64,
    /// Abstraction size after this depth completed (post-PBA).
    pub abstr_size: usize,
    /// Cumulative solver conflicts.
    pub conflicts: u64,
    /// Cumulative wall-clock seconds.
    pub seconds: f64,
}

#[derive(Clone, Debug, Default)]
pub struct Stats {
    pub per_depth: Vec<DepthStats>,
    pub sat_calls: u64,
    pub conflicts: u64,
    pub seconds: f64,
    /// SAT/UNSAT verdict of every solver call, in order.
    pub verdicts: Vec<bool>,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    /// Resource limit reached; `depth_completed` is the largest depth fully
    /// refuted (None if not even depth 0 finished).
    Abstraction { depth_completed: Option<usize> },
    /// A genuine counterexample.
    Counterexample { cex: Cex },
}

#[derive(Clone, Debug)]
pub struct EngineResult {
    pub outcome: Outcome,
    /// Final abstraction (set of concretized flops).
    pub abstr: WSet,
    pub stats: Stats,
}

impl EngineResult {
    pub fn is_cex(&self) -> bool {
        matches!(self.outcome, Outcome::Counterexample { .. })
    }

    pub fn cex(&self) -> Option<&Cex> {
        match &self.outcome {
            Outcome::Counterexample { cex } => Some(cex),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EngineOpts {
    pub mode: Mode,
    pub limits: Limits,
    pub seed: u64,
    /// Cross-check every incremental solve against a fresh solver rebuilt
    /// from the clause log (debug aid; slow).
    pub rebuild_check: bool,
    /// After every interleaved prune, re-solve to confirm unsatisfiability
    /// is preserved (debug aid).
    pub check_pba: bool,
}

impl EngineOpts {
    pub fn new(mode: Mode, limits: Limits) -> EngineOpts {
        EngineOpts { mode, limits, seed: 0, rebuild_check: false, check_pba: false }
    }
}

/// Run combined abstraction on a netlist with a property.
pub fn combined_abstraction(n: &Netlist, opts: &EngineOpts) -> EngineResult {
    assert!(
        opts.limits.max_depth.is_some()
            || opts.limits.max_seconds.is_some()
            || opts.limits.max_conflicts.is_some(),
        "at least one resource limit is required"
    );
    let start = Instant::now();
    let mut trace = Trace::new(n, opts.mode.pba_mode());
    trace.solver_mut().set_seed(opts.seed);
    if opts.rebuild_check {
        trace.set_rebuild_check(true);
    }
    let bad = n.bad();
    let mut bad_disj: Vec<Wire> = Vec::new();
    let mut stats = Stats::default();
    let mut depth = 0usize;
    let mut calls_this_depth = 0u64;

    let finish_stats = |stats: &mut Stats, trace: &Trace, start: &Instant| {
        stats.conflicts = trace.solver().num_conflicts();
        stats.seconds = start.elapsed().as_secs_f64();
    };

    loop {
        let limit_hit = opts.limits.max_depth.is_some_and(|d| depth > d)
            || opts.limits.max_seconds.is_some_and(|s| start.elapsed().as_secs_f64() >= s)
            || opts.limits.max_conflicts.is_some_and(|c| trace.solver().num_conflicts() >= c);
        if limit_hit {
            if opts.mode == Mode::FinalPba {
                trace.apply_final_trim();
            }
            finish_stats(&mut stats, &trace, &start);
            return EngineResult {
                outcome: Outcome::Abstraction { depth_completed: depth.checked_sub(1) },
                abstr: trace.abstr().clone(),
                stats,
            };
        }

        if bad_disj.len() == depth {
            bad_disj.push(trace.insert(depth, bad));
        }

        let sat = trace.solve(&bad_disj);
        stats.sat_calls += 1;
        calls_this_depth += 1;
        stats.verdicts.push(sat);

        if sat {
            let n_flops = trace.abstr().len();
            refine_abstraction(&mut trace, depth, bad);
            if trace.abstr().len() == n_flops {
                let cex = trace.get_cex(depth);
                finish_stats(&mut stats, &trace, &start);
                return EngineResult {
                    outcome: Outcome::Counterexample { cex },
                    abstr: trace.abstr().clone(),
                    stats,
                };
            }
        } else {
            if opts.check_pba && opts.mode == Mode::Interleaved {
                assert!(
                    trace.probe_unsat(&bad_disj),
                    "pruned abstraction no longer refutes depth {depth}"
                );
            }
            stats.per_depth.push(DepthStats {
                depth,
                sat_calls: calls_this_depth,
                abstr_size: trace.abstr().len(),
                conflicts: trace.solver().num_conflicts(),
                seconds: start.elapsed().as_secs_f64(),
            });
            calls_this_depth = 0;
            depth += 1;
        }
    }
}

/// Run each mode on each circuit and emit a CSV stats table.
/// Per-case limits are enforced by the engine; failures to finish within the
/// limits show up as abstraction rows, not errors.
pub fn run_benchmark(
    suite: &[(String, Netlist)],
    limits: &Limits,
    modes: &[Mode],
) -> String {
    let mut out = String::from("name,mode,depth,flops,time,sat_calls\n");
    for (name, n) in suite {
        for &mode in modes {
            let res = combined_abstraction(n, &EngineOpts::new(mode, *limits));
            let depth = match &res.outcome {
                Outcome::Counterexample { cex } => cex.depth as i64,
                Outcome::Abstraction { depth_completed } => {
                    depth_completed.map(|d| d as i64).unwrap_or(-1)
                }
            };
            out.push_str(&format!(
                "{},{},{},{},{:.3},{}\n",
                name,
                mode,
                depth,
                res.abstr.len(),
                res.stats.seconds,
                res.stats.sat_calls
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::simulate_concrete;

    fn shift_register(n_flops: usize) -> Netlist {
        let mut n = Netlist::new();
        let i = n.add_pi();
        let mut prev = i;
        let mut last = Netlist::FALSE;
        for _ in 0..n_flops {
            let f = n.add_flop();
            n.set_flop_input(f, prev);
            prev = f;
            last = f;
        }
        n.set_property(!last);
        n
    }

    #[test]
    fn shift_register_cex_at_exact_depth() {
        for len in [1usize, 3, 7] {
            let n = shift_register(len);
            let res =
                combined_abstraction(&n, &EngineOpts::new(Mode::Interleaved, Limits::depth(20)));
            let cex = res.cex().expect("expected a counterexample");
            assert_eq!(cex.depth, len);
            assert_eq!(res.abstr.len(), len);
            let bad = simulate_concrete(&n, cex, false);
            assert!(bad[cex.depth]);
        }
    }

    #[test]
    fn unreachable_bad_ends_at_depth_limit() {
        // bad = f & !f through two copies of the same flop.
        let mut n = Netlist::new();
        let i = n.add_pi();
        let f = n.add_flop();
        n.set_flop_input(f, i);
        let contradiction = n.add_and(f, !f);
        n.set_property(!contradiction);
        let res = combined_abstraction(&n, &EngineOpts::new(Mode::Interleaved, Limits::depth(5)));
        assert!(!res.is_cex());
        match res.outcome {
            Outcome::Abstraction { depth_completed } => assert_eq!(depth_completed, Some(5)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn pba_showcase_modes_differ() {
        // f holds 0 forever, g samples a free input; bad = f & g. CBA pulls
        // in both flops at depth 0; the proof only ever needs f.
        let mut n = Netlist::new();
        let i = n.add_pi();
        let f = n.add_flop();
        n.set_flop_input(f, Netlist::FALSE);
        let g = n.add_flop();
        n.set_flop_input(g, i);
        let both = n.add_and(f, g);
        n.set_property(!both);
        let interleaved =
            combined_abstraction(&n, &EngineOpts::new(Mode::Interleaved, Limits::depth(2)));
        let cba = combined_abstraction(&n, &EngineOpts::new(Mode::CbaOnly, Limits::depth(2)));
        assert!(!interleaved.is_cex() && !cba.is_cex());
        assert_eq!(
            interleaved.abstr.iter().collect::<Vec<_>>(),
            vec![f.gate()],
            "proof-based pruning should keep only the constant flop"
        );
        assert_eq!(cba.abstr.len(), 2);
    }

    #[test]
    fn modes_agree_on_cex_depth() {
        let n = shift_register(4);
        for mode in [Mode::Interleaved, Mode::FinalPba, Mode::CbaOnly] {
            let res = combined_abstraction(&n, &EngineOpts::new(mode, Limits::depth(10)));
            assert_eq!(res.cex().map(|c| c.depth), Some(4), "mode {mode}");
        }
    }

    #[test]
    fn one_solver_instance_per_run() {
        let n = shift_register(5);
        let before = crate::sat::solvers_created_in_thread();
        combined_abstraction(&n, &EngineOpts::new(Mode::Interleaved, Limits::depth(10)));
        assert_eq!(crate::sat::solvers_created_in_thread() - before, 1);
    }

    #[test]
    fn benchmark_csv_shape() {
        let suite = vec![("sr3".to_string(), shift_register(3))];
        let csv = run_benchmark(&suite, &Limits::depth(10), &[Mode::Interleaved, Mode::CbaOnly]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "name,mode,depth,flops,time,sat_calls");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("sr3,interleaved,3,"));
        assert!(lines[2].starts_with("sr3,cba-only,3,"));
    }

    #[test]
    #[should_panic(expected = "resource limit")]
    fn missing_limits_rejected() {
        let n = shift_register(2);
        combined_abstraction(&n, &EngineOpts::new(Mode::Interleaved, Limits::default()));
    }
}

