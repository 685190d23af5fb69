use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frselect::{GapMode, Params, Variant};
use selectbench::experiment::{run_experiment_with, RunOptions, TrialReport};
use selectbench::{bounds, emit_table, Family, InputSpec, KRule, TableFormat};

const EXIT_FAILURE: u8 = 1;
const EXIT_BOUND_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "selectbench", version, about = "Comparison-counting selection benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trials and print one table row per (family, n).
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Recursive,
    NonrecPick,
    NonrecSort,
    Quickselect,
}

#[derive(Clone, Copy, ValueEnum)]
enum GapArg {
    SqrtN,
    SqrtS,
    Knuth,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Default,
    /// Doubling samples, theta-scaled gaps, no randomization.
    Knuth,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_delimiter = ',', default_value = "random")]
    family: Vec<Family>,
    #[arg(long, value_delimiter = ',', default_value = "100000")]
    n: Vec<usize>,
    /// Rank to select, or `median` for ceil(n/2).
    #[arg(long, default_value = "median")]
    k: KRule,
    #[arg(long, default_value_t = 20)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "default")]
    preset: Preset,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long, value_enum)]
    gap: Option<GapArg>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    r2: Option<u64>,
    /// Cap on the penultimate sample fraction, or `auto` for 2/r2.
    #[arg(long)]
    eta_bar: Option<String>,
    #[arg(long)]
    ncut: Option<usize>,
    /// Use array prefixes as samples.
    #[arg(long)]
    no_randomize: bool,
    /// Keep both pivots when a rank clamp bites.
    #[arg(long)]
    no_reset: bool,
    /// Nonrecursive variants: redraw the first sample after an oversized subproblem.
    #[arg(long)]
    restart: bool,
    /// Select the second initial pivot over the whole first sample.
    #[arg(long)]
    independent_selects: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    /// Zero the time columns.
    #[arg(long)]
    no_time: bool,
    /// Record per-iteration traces of the top-level call.
    #[arg(long)]
    trace: bool,
    /// Check traced event frequencies against their bounds.
    #[arg(long, requires = "trace")]
    validate_bounds: bool,
    /// Worker threads (overrides SELECTBENCH_THREADS).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn params(&self) -> Result<Params, String> {
        let mut p = match self.preset {
            Preset::Default => Params::default(),
            Preset::Knuth => Params::knuth_emulation(),
        };
        if let Some(v) = self.variant {
            p.variant = match v {
                VariantArg::Recursive => Variant::Recursive,
                VariantArg::NonrecPick => Variant::NonrecPick,
                VariantArg::NonrecSort => Variant::NonrecSort,
                VariantArg::Quickselect => Variant::Quickselect,
            };
        }
        if let Some(g) = self.gap {
            p.gap_mode = match g {
                GapArg::SqrtN => GapMode::SqrtN,
                GapArg::SqrtS => GapMode::SqrtS,
                GapArg::Knuth => GapMode::Knuth,
            };
        }
        if let Some(a) = self.alpha {
            p.alpha = a;
        }
        if let Some(b) = self.beta {
            p.beta = b;
        }
        if let Some(r2) = self.r2 {
            p.r2 = r2;
            if self.eta_bar.is_none() && matches!(self.preset, Preset::Default) {
                p.eta_bar = 2.0 / r2 as f64;
            }
        }
        match self.eta_bar.as_deref() {
            None => {}
            Some("auto") => p.eta_bar = 2.0 / p.r2 as f64,
            Some(s) => p.eta_bar = s.parse().map_err(|_| format!("invalid --eta-bar `{s}`"))?,
        }
        if let Some(c) = self.ncut {
            p.n_cut = c;
        }
        if self.no_randomize {
            p.randomized_sampling = false;
        }
        if self.no_reset {
            p.single_pivot_reset = false;
        }
        p.restart_on_large_shat = self.restart;
        p.independent_initial_selects = self.independent_selects;
        let violations = p.violations();
        if violations.is_empty() {
            Ok(p)
        } else {
            let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            Err(format!("invalid parameters: {}", list.join("; ")))
        }
    }
}

fn trace_csv(reports: &[TrialReport]) -> String {
    let mut out = String::from("input,n,trial,l,s,s_plus,g,i_u,i_v,i_u_plus,i_v_plus,j_u,j_v,c,c_bar,s_hat,single\n");
    for r in reports {
        for rec in &r.records {
            for t in rec.trace.iter().flatten() {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{:.6},{},{},{},{},{},{},{},{:.3},{},{}\n",
                    r.spec.family,
                    r.n(),
                    rec.trial,
                    t.l,
                    t.s,
                    t.s_plus,
                    t.g,
                    t.i_u,
                    t.i_v,
                    t.i_u_plus,
                    t.i_v_plus,
                    t.j_u,
                    t.j_v,
                    t.c,
                    t.c_bar,
                    t.s_hat,
                    u8::from(t.single_pivot)
                ));
            }
        }
    }
    out
}

fn run(args: RunArgs) -> Result<u8, String> {
    let params = args.params()?;
    let options = RunOptions {
        trials: args.trials,
        master_seed: args.seed,
        trace: args.trace,
        threads: args.threads,
    };
    let mut reports = Vec::new();
    let mut bound_text = String::new();
    let mut violated = false;
    for &family in &args.family {
        for &n in &args.n {
            let spec = InputSpec {
                family,
                n,
                k_rule: args.k,
            };
            let report = run_experiment_with(spec, &params, options).map_err(|e| e.to_string())?;
            if args.validate_bounds {
                let traces: Vec<_> = report.records.iter().map(|r| r.trace.as_deref().unwrap_or(&[])).collect();
                let b = bounds::summarize(spec, &params, &traces);
                violated |= !b.passed();
                bound_text.push_str(&b.render());
            }
            reports.push(report);
        }
    }
    let mut out = emit_table(&reports, args.format, !args.no_time);
    if args.trace && !args.validate_bounds {
        out.push('\n');
        out.push_str(&trace_csv(&reports));
    }
    if !bound_text.is_empty() {
        out.push('\n');
        out.push_str(&bound_text);
    }
    match &args.out {
        Some(path) => fs::write(path, &out).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{out}"),
    }
    Ok(if violated { EXIT_BOUND_VIOLATION } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("selectbench: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
