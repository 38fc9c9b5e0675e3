use clap::Parser;
use locabs::aiger::{self, ReadOptions};
use locabs::engine::{combined_abstraction, EngineOpts, Limits, Outcome};
use locabs::netlist::Netlist;
use locabs::sat::Lbool;
use locabs::trace::Cex;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "locabs", about = "SAT-based localization abstraction for AIGER circuits")]
struct Args {
    /// Input circuit (.aag or .aig; format detected from the file contents)
    input: PathBuf,

    /// Stop after refuting all depths up to N
    #[arg(long, value_name = "N")]
    max_depth: Option<usize>,

    /// Wall-clock limit in seconds
    #[arg(long, value_name = "SECONDS")]
    timeout: Option<f64>,

    /// Solver conflict limit
    #[arg(long, value_name = "N")]
    max_conflicts: Option<u64>,

    /// Abstraction mode
    #[arg(long, value_parser = parse_mode, default_value = "interleaved")]
    mode: locabs::Mode,

    /// Which output / bad-state property to check
    #[arg(long, value_name = "K", default_value_t = 0)]
    property_index: usize,

    /// Treat outputs as properties (good states) instead of bad signals
    #[arg(long)]
    output_is_property: bool,

    /// Random seed for the solver
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,

    /// Write retained-flop indices, one per line
    #[arg(long, value_name = "PATH")]
    write_flops: Option<PathBuf>,

    /// Write the abstracted circuit as ASCII AIGER
    #[arg(long, value_name = "PATH")]
    write_abstracted_aig: Option<PathBuf>,

    /// Write the counterexample witness, if one is found
    #[arg(long, value_name = "PATH")]
    write_witness: Option<PathBuf>,

    /// Write per-depth statistics as CSV
    #[arg(long, value_name = "PATH")]
    stats_csv: Option<PathBuf>,

    /// Progress output on stderr
    #[arg(long)]
    verbose: bool,
}

fn parse_mode(s: &str) -> Result<locabs::Mode, String> {
    match s {
        "interleaved" => Ok(locabs::Mode::Interleaved),
        "final-pba" => Ok(locabs::Mode::FinalPba),
        "cba-only" => Ok(locabs::Mode::CbaOnly),
        _ => Err(format!("unknown mode '{s}' (expected interleaved, final-pba or cba-only)")),
    }
}

fn bit_char(v: Lbool) -> char {
    match v {
        Lbool::True => '1',
        Lbool::False => '0',
        Lbool::Undef => 'x',
    }
}

fn format_witness(cex: &Cex, property_index: usize) -> String {
    let mut out = String::from("1\n");
    out.push_str(&format!("b{property_index}\n"));
    out.push_str(&cex.flops[0].iter().map(|&v| bit_char(v)).collect::<String>());
    out.push('\n');
    for frame in 0..=cex.depth {
        out.push_str(&cex.pis[frame].iter().map(|&v| bit_char(v)).collect::<String>());
        out.push('\n');
    }
    out.push_str(".\n");
    out
}

fn run(args: &Args) -> Result<bool, String> {
    if args.max_depth.is_none() && args.timeout.is_none() && args.max_conflicts.is_none() {
        return Err("at least one of --max-depth, --timeout, --max-conflicts is required".into());
    }
    let bytes =
        std::fs::read(&args.input).map_err(|e| format!("{}: {e}", args.input.display()))?;
    let opts = ReadOptions {
        property_index: args.property_index,
        output_is_property: args.output_is_property,
    };
    let n: Netlist = aiger::read_aiger(&bytes, &opts).map_err(|e| e.to_string())?;
    if args.verbose {
        eprintln!(
            "read {}: {} inputs, {} flops, {} gates",
            args.input.display(),
            n.pis().len(),
            n.flops().len(),
            n.len()
        );
    }

    let limits = Limits {
        max_depth: args.max_depth,
        max_seconds: args.timeout,
        max_conflicts: args.max_conflicts,
    };
    let mut eopts = EngineOpts::new(args.mode, limits);
    eopts.seed = args.seed;
    let res = combined_abstraction(&n, &eopts);

    if args.verbose {
        for d in &res.stats.per_depth {
            eprintln!(
                "depth {}: {} sat calls, abstraction {} flops, {} conflicts, {:.3}s",
                d.depth, d.sat_calls, d.abstr_size, d.conflicts, d.seconds
            );
        }
    }

    if let Some(path) = &args.stats_csv {
        let mut csv = String::from("depth,sat_calls,abstr_size,conflicts,seconds\n");
        for d in &res.stats.per_depth {
            csv.push_str(&format!(
                "{},{},{},{},{:.3}\n",
                d.depth, d.sat_calls, d.abstr_size, d.conflicts, d.seconds
            ));
        }
        std::fs::write(path, csv).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if let Some(path) = &args.write_flops {
        std::fs::write(path, aiger::write_flop_list(&n, &res.abstr))
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if let Some(path) = &args.write_abstracted_aig {
        std::fs::write(path, aiger::write_abstracted(&n, &res.abstr))
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }

    match &res.outcome {
        Outcome::Counterexample { cex } => {
            if let Some(path) = &args.write_witness {
                std::fs::write(path, format_witness(cex, args.property_index))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            println!("counterexample at depth {}", cex.depth);
            Ok(true)
        }
        Outcome::Abstraction { depth_completed } => {
            match depth_completed {
                Some(d) => println!(
                    "abstraction with {} of {} flops, depths 0..={} refuted",
                    res.abstr.len(),
                    n.flops().len(),
                    d
                ),
                None => println!(
                    "abstraction with {} of {} flops, no depth completed",
                    res.abstr.len(),
                    n.flops().len()
                ),
            }
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::from(10),
        Ok(false) => ExitCode::from(0),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
