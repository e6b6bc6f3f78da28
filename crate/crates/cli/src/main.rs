use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use syft_bdd::DEFAULT_NODE_CAP;
use syft_core::automata::{build_dfa, export_dot, export_table, minimize, Letter};
use syft_core::benchgen::{self, BenchConfig, Engine, SuiteOptions};
use syft_core::game::{solve_explicit, solve_symbolic};
use syft_core::reduction::reduce;
use syft_core::strategy::{run, ExplicitTransducer, SymbolicTransducer};
use syft_core::symbolic::encode_with_cap;
use syft_core::{eval_trace, parse, Formula, Partition, Trace};

/// Synthesis from LTL over finite traces.
#[derive(Parser)]
#[command(name = "syft", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide realizability and write a winning transducer.
    Synth {
        formula: PathBuf,
        partition: PathBuf,
        #[arg(long, value_enum, default_value_t = EngineArg::Symbolic)]
        engine: EngineArg,
        /// Transducer JSON, written when realizable.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Transducer DOT, written when realizable.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build the DFA and print its transition table.
    Dfa {
        formula: PathBuf,
        partition: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the table here instead of standard output.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        no_minimize: bool,
    },
    /// Replay input letters against a transducer.
    Run {
        transducer: PathBuf,
        /// One input letter per line as `name=0/1` pairs.
        inputs: PathBuf,
    },
    /// Evaluate a formula on a trace: SAT or UNSAT.
    Check { formula: PathBuf, trace: PathBuf },
    /// Print the infinite-trace LTL image and its partition.
    Reduce {
        formula: PathBuf,
        partition: PathBuf,
    },
    /// Generate random-conjunction instances and time both engines.
    Bench {
        #[arg(long, default_value_t = 5)]
        conjuncts: usize,
        /// Variables per role.
        #[arg(long, default_value_t = 8)]
        pool: usize,
        #[arg(long, default_value_t = 30)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        /// Instances per seed.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 10_000)]
        timeout_ms: u64,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [EngineArg::Explicit, EngineArg::Symbolic])]
        engines: Vec<EngineArg>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// CSV destination instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Explicit,
    Symbolic,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Explicit => Engine::Explicit,
            EngineArg::Symbolic => Engine::Symbolic,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_formula(path: &Path) -> Result<Formula> {
    parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_problem(formula: &Path, partition: &Path) -> Result<(Formula, Partition)> {
    let f = load_formula(formula)?;
    let p = Partition::parse(&read(partition)?)
        .with_context(|| format!("in {}", partition.display()))?;
    p.covers(&f)?;
    Ok((f, p))
}

fn node_cap() -> Result<usize> {
    match std::env::var("SYFT_NODE_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("SYFT_NODE_CAP must be a positive integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_NODE_CAP),
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Synth {
            formula,
            partition,
            engine,
            out,
            dot,
        } => synth(&formula, &partition, engine, out.as_deref(), dot.as_deref()),
        Command::Dfa {
            formula,
            partition,
            dot,
            table,
            no_minimize,
        } => {
            let (f, p) = load_problem(&formula, &partition)?;
            let mut d = build_dfa(&f, &p)?;
            if !no_minimize {
                d = minimize(&d);
            }
            if let Some(path) = dot {
                write(&path, &export_dot(&d))?;
            }
            match table {
                Some(path) => write(&path, &export_table(&d))?,
                None => print!("{}", export_table(&d)),
            }
            Ok(0)
        }
        Command::Run { transducer, inputs } => {
            let t = ExplicitTransducer::from_json(&read(&transducer)?)
                .with_context(|| format!("in {}", transducer.display()))?;
            let letters = input_letters(&Trace::parse(&read(&inputs)?)?, &t.partition)?;
            let r = run(&t, &letters)?;
            let (nx, ny) = (t.partition.inputs.len(), t.partition.outputs.len());
            for (i, m) in r.moves.iter().enumerate() {
                println!(
                    "{i} state {} in {} out {}",
                    m.state,
                    Letter(m.input).bits(nx),
                    Letter(m.output).bits(ny)
                );
            }
            match r.accepted_at {
                Some(k) => println!("accepted_at {k}"),
                None => println!("accepted_at none"),
            }
            Ok(0)
        }
        Command::Check { formula, trace } => {
            let f = load_formula(&formula)?;
            let t =
                Trace::parse(&read(&trace)?).with_context(|| format!("in {}", trace.display()))?;
            let sat = eval_trace(&f, &t, 0)?;
            println!("{}", if sat { "SAT" } else { "UNSAT" });
            Ok(if sat { 0 } else { 1 })
        }
        Command::Reduce { formula, partition } => {
            let (f, p) = load_problem(&formula, &partition)?;
            let r = reduce(&f, &p)?;
            println!("{}", r.formula);
            println!(".inputs: {}", r.partition.inputs.join(" "));
            println!(".outputs: {}", r.partition.outputs.join(" "));
            Ok(0)
        }
        Command::Bench {
            conjuncts,
            pool,
            seeds,
            first_seed,
            count,
            timeout_ms,
            engines,
            threads,
            out,
        } => {
            let basis = benchgen::basis();
            let mut cases = Vec::new();
            for seed in first_seed..first_seed + seeds {
                let cfg = BenchConfig {
                    conjuncts,
                    pool,
                    seed,
                    count,
                };
                cases.extend(benchgen::gen_rc(&cfg, &basis)?);
            }
            let engines: Vec<Engine> = engines.into_iter().map(Engine::from).collect();
            let opts = SuiteOptions {
                timeout: Duration::from_millis(timeout_ms),
                node_cap: node_cap()?,
                threads,
            };
            let rows = benchgen::run_suite(&cases, &engines, &opts);
            match out {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    benchgen::write_csv(&rows, file)?;
                }
                None => benchgen::write_csv(&rows, std::io::stdout().lock())?,
            }
            Ok(0)
        }
    }
}

fn synth(
    formula: &Path,
    partition: &Path,
    engine: EngineArg,
    out: Option<&Path>,
    dot: Option<&Path>,
) -> Result<u8> {
    let (f, p) = load_problem(formula, partition)?;
    let d = minimize(&build_dfa(&f, &p)?);
    let transducer = match engine {
        EngineArg::Explicit => {
            let sol = solve_explicit(&d);
            if !sol.realizable {
                None
            } else {
                Some(ExplicitTransducer::from_solution(&d, &sol)?)
            }
        }
        EngineArg::Symbolic => {
            let mut sd = encode_with_cap(&d, node_cap()?)?;
            let sol = solve_symbolic(&mut sd)?;
            if !sol.realizable {
                None
            } else {
                let st = SymbolicTransducer::new(sd, &sol)?;
                let sd = st.automaton();
                Some(ExplicitTransducer::tabulate(&st, |q| sd.decode(q as u32))?)
            }
        }
    };
    let Some(t) = transducer else {
        println!("UNREALIZABLE");
        return Ok(1);
    };
    println!("REALIZABLE");
    if let Some(path) = out {
        write(path, &t.to_json()?)?;
    }
    if let Some(path) = dot {
        write(path, &t.to_dot())?;
    }
    Ok(0)
}

/// Input letters of a trace; every assigned atom must be an input.
fn input_letters(t: &Trace, p: &Partition) -> Result<Vec<u32>> {
    t.steps
        .iter()
        .enumerate()
        .map(|(i, step)| {
            let mut x = 0u32;
            for name in step {
                match p.inputs.iter().position(|a| a == name) {
                    Some(k) => x |= 1 << k,
                    None => bail!("line {}: `{name}` is not an input", i + 1),
                }
            }
            Ok(x)
        })
        .collect()
}
