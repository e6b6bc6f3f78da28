//! Random-conjunction benchmarks `RC(L)` and timed comparison of the
//! explicit and symbolic pipelines.
//!
//! An instance conjoins `L` basis templates picked at random, with every
//! placeholder renamed to a random pool variable of the same role. Inputs
//! are drawn from `i1..im` and outputs from `o1..om`; pool variables may be
//! reused across conjuncts.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use syft_bdd::DEFAULT_NODE_CAP;

use crate::automata::{build_dfa_with, minimize, BuildOptions, ExplicitDfa};
use crate::error::{Error, Result};
use crate::game::{solve_explicit_until, solve_symbolic_until};
use crate::ltlf::{atoms_of, parse, Formula, Partition};
use crate::strategy::{ExplicitTransducer, SymbolicTransducer};
use crate::symbolic::encode_with_cap;

/// A template whose atoms are placeholders: `x…` atoms are inputs, `y…`
/// atoms outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisCase {
    pub name: &'static str,
    pub template: Formula,
    pub partition: Partition,
}

const TEMPLATES: [(&str, &str); 20] = [
    ("eventually", "F y1"),
    ("until-response", "x1 U y1"),
    ("guarded-weak-next", "G (x1 -> WX y1) & F y1"),
    ("request-response", "G (x1 -> F y1)"),
    ("delayed", "X X y1"),
    ("sequence", "F (y1 & X y2)"),
    ("either", "(y1 U x1) | F y2"),
    ("exclusive-existence", "F y1 & F y2 & G !(y1 & y2)"),
    ("release", "x1 R y1"),
    ("last-position", "F (y1 & WX false)"),
    ("input-existence", "F x1"),
    ("joint-existence", "F (x1 & y1)"),
    ("guarded-next", "G (x1 -> X y1) & F y1"),
    ("mirror", "G ((x1 -> y1) & (y1 -> x1))"),
    ("blocked-until", "(x1 U y1) & G !y1"),
    ("until-input", "y1 U (x1 & y2)"),
    ("no-repeat", "G (y1 -> X !y1) & F (y1 & X y1)"),
    (
        "two-requests",
        "G (x1 -> F y1) & G (x2 -> F y2) & F (x1 | x2)",
    ),
    ("input-persistence", "F G x1"),
    ("absence", "G !y1 & F (x1 -> y1)"),
];

/// The shipped basis. The first ten templates are realizable, the rest
/// are not.
pub fn basis() -> Vec<BasisCase> {
    TEMPLATES
        .iter()
        .map(|&(name, text)| {
            let template = parse(text).expect("basis templates parse");
            let atoms = atoms_of(&template);
            let (inputs, outputs): (Vec<String>, Vec<String>) =
                atoms.into_iter().partition(|a| a.starts_with('x'));
            BasisCase {
                name,
                template,
                partition: Partition::new(inputs, outputs).expect("placeholder names are valid"),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    /// Conjuncts per instance.
    pub conjuncts: usize,
    /// Pool size per role.
    pub pool: usize,
    pub seed: u64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchCase {
    pub name: String,
    pub formula: Formula,
    pub partition: Partition,
}

/// Generates `cfg.count` instances. Each partition lists the pool variables
/// that occur, in pool order.
pub fn gen_rc(cfg: &BenchConfig, basis: &[BasisCase]) -> Result<Vec<BenchCase>> {
    if cfg.conjuncts == 0 || cfg.pool == 0 {
        return Err(Error::Partition(
            "conjunct count and pool size must be positive".into(),
        ));
    }
    if basis.is_empty() {
        return Err(Error::Partition("empty basis".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::with_capacity(cfg.count);
    for k in 0..cfg.count {
        let mut used_in = vec![false; cfg.pool];
        let mut used_out = vec![false; cfg.pool];
        let mut conjuncts = Vec::with_capacity(cfg.conjuncts);
        for _ in 0..cfg.conjuncts {
            let case = &basis[rng.gen_range(0..basis.len())];
            let mut map = Vec::new();
            for a in &case.partition.inputs {
                let v = rng.gen_range(0..cfg.pool);
                used_in[v] = true;
                map.push((a.clone(), format!("i{}", v + 1)));
            }
            for a in &case.partition.outputs {
                let v = rng.gen_range(0..cfg.pool);
                used_out[v] = true;
                map.push((a.clone(), format!("o{}", v + 1)));
            }
            let rename = |a: &str| {
                map.iter()
                    .find(|(from, _)| from == a)
                    .map(|(_, to)| to.clone())
            };
            conjuncts.push(case.template.rename_atoms(&rename));
        }
        let pick = |used: &[bool], prefix: char| -> Vec<String> {
            (0..cfg.pool)
                .filter(|&v| used[v])
                .map(|v| format!("{prefix}{}", v + 1))
                .collect()
        };
        cases.push(BenchCase {
            name: format!("rc-l{}-m{}-s{}-{k}", cfg.conjuncts, cfg.pool, cfg.seed),
            formula: Formula::conjunction(conjuncts),
            partition: Partition::new(pick(&used_in, 'i'), pick(&used_out, 'o'))?,
        });
    }
    Ok(cases)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Explicit,
    Symbolic,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Explicit => "explicit",
            Engine::Symbolic => "symbolic",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Engine::Explicit),
            "symbolic" => Ok(Engine::Symbolic),
            other => Err(Error::Partition(format!("unknown engine `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Realizable,
    Unrealizable,
    Timeout,
    Error,
}

impl Verdict {
    pub fn completed(self) -> bool {
        matches!(self, Verdict::Realizable | Verdict::Unrealizable)
    }
}

/// One CSV row. Phase times are absent when the phase did not finish.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub name: String,
    #[serde(serialize_with = "display")]
    pub engine: Engine,
    pub verdict: Verdict,
    pub dfa_ms: Option<f64>,
    pub solve_ms: Option<f64>,
    pub total_ms: f64,
    pub states: Option<usize>,
    pub z_bits: Option<usize>,
    pub x_vars: usize,
    pub y_vars: usize,
    pub timeout: bool,
}

fn display<T: fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub const CSV_HEADER: &str =
    "name,engine,verdict,dfa_ms,solve_ms,total_ms,states,z_bits,x_vars,y_vars,timeout";

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub timeout: Duration,
    pub node_cap: usize,
    /// Worker threads; cases are distributed round-robin.
    pub threads: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            timeout: Duration::from_secs(10),
            node_cap: DEFAULT_NODE_CAP,
            threads: 1,
        }
    }
}

/// Runs every case on every engine. Rows come back case-major, in input
/// order. Failures are recorded, never propagated.
pub fn run_suite(cases: &[BenchCase], engines: &[Engine], opts: &SuiteOptions) -> Vec<BenchRow> {
    let jobs: Vec<(&BenchCase, Engine)> = cases
        .iter()
        .flat_map(|c| engines.iter().map(move |&e| (c, e)))
        .collect();
    let threads = opts.threads.max(1).min(jobs.len().max(1));
    if threads == 1 {
        return jobs.iter().map(|&(c, e)| run_case(c, e, opts)).collect();
    }
    let mut rows: Vec<Option<BenchRow>> = vec![None; jobs.len()];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let jobs = &jobs;
                scope.spawn(move || {
                    (w..jobs.len())
                        .step_by(threads)
                        .map(|i| (i, run_case(jobs[i].0, jobs[i].1, opts)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, row) in h.join().expect("bench worker panicked") {
                rows[i] = Some(row);
            }
        }
    });
    rows.into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Times one case on one engine. The DFA phase covers construction,
/// minimization and, for the symbolic engine, the binary encoding; the solve
/// phase covers the game and strategy extraction.
pub fn run_case(case: &BenchCase, engine: Engine, opts: &SuiteOptions) -> BenchRow {
    let start = Instant::now();
    let deadline = start + opts.timeout;
    let mut row = BenchRow {
        name: case.name.clone(),
        engine,
        verdict: Verdict::Error,
        dfa_ms: None,
        solve_ms: None,
        total_ms: 0.0,
        states: None,
        z_bits: None,
        x_vars: case.partition.inputs.len(),
        y_vars: case.partition.outputs.len(),
        timeout: false,
    };
    let result = phases(case, engine, opts, deadline, &mut row);
    let total = start.elapsed();
    row.total_ms = ms(total);
    row.verdict = match result {
        Ok(_) if total > opts.timeout => Verdict::Timeout,
        Ok(true) => Verdict::Realizable,
        Ok(false) => Verdict::Unrealizable,
        Err(Error::Timeout) => Verdict::Timeout,
        Err(_) => Verdict::Error,
    };
    row.timeout = row.verdict == Verdict::Timeout;
    row
}

fn phases(
    case: &BenchCase,
    engine: Engine,
    opts: &SuiteOptions,
    deadline: Instant,
    row: &mut BenchRow,
) -> Result<bool> {
    let t0 = Instant::now();
    let build = BuildOptions {
        deadline: Some(deadline),
        ..BuildOptions::default()
    };
    let d: ExplicitDfa = minimize(&build_dfa_with(&case.formula, &case.partition, &build)?);
    row.states = Some(d.num_states());
    match engine {
        Engine::Explicit => {
            row.dfa_ms = Some(ms(t0.elapsed()));
            let t1 = Instant::now();
            let sol = solve_explicit_until(&d, Some(deadline))?;
            if sol.realizable {
                ExplicitTransducer::from_solution(&d, &sol)?;
            }
            row.solve_ms = Some(ms(t1.elapsed()));
            Ok(sol.realizable)
        }
        Engine::Symbolic => {
            let mut sd = encode_with_cap(&d, opts.node_cap)?;
            row.z_bits = Some(sd.num_bits());
            row.dfa_ms = Some(ms(t0.elapsed()));
            let t1 = Instant::now();
            let sol = solve_symbolic_until(&mut sd, Some(deadline))?;
            if sol.realizable {
                SymbolicTransducer::new(sd, &sol)?;
            }
            row.solve_ms = Some(ms(t1.elapsed()));
            Ok(sol.realizable)
        }
    }
}

/// Writes the header and one line per row.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
