//! SAT-based localization abstraction for sequential AIGER circuits.
//!
//! A single incremental SAT instance holds the unrolled abstracted design
//! across all depths. Counterexample-based refinement grows the abstraction;
//! proof-based trimming shrinks it using the final conflict over activation
//! literals.

pub mod aiger;
pub mod engine;
pub mod netlist;
pub mod oracle;
pub mod refine;
pub mod sat;
pub mod trace;

pub use aiger::{read_aiger, AigerError, AigerFile, ReadOptions};
pub use engine::{combined_abstraction, EngineOpts, EngineResult, Limits, Mode, Outcome};
pub use netlist::{GateId, GateKind, Netlist, WMap, WSet, Wire};
pub use sat::{Lbool, Lit, Solver};
pub use trace::{Cex, PbaMode, Trace};
