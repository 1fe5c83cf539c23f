//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage, 3 I/O, 4 parse, 5 validation, 6 timing
//! violation, 7 bound exceeded, 8 verdict mismatch. Failures print a single
//! `error: ...` line on stderr.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use crate::compile::{
    compile_3sat_turrets, compile_hamcycle_hep, compile_hamcycle_timed, compile_ncl_switches, compile_subset_sum,
    realize_switches, selected_wells, CompileError, HepTiming, SwitchKind, TimedTiming,
};
use crate::format::{self, digest, FormatError, LevelDocument, Provenance, SourceProblem};
use crate::instance::{CnfFormula, GridGraph, SubsetSumInstance};
use crate::kinematics::{verify_selection, KinematicsParams, Rational};
use crate::ncl::{ncl_decide, replay_flips, ConstraintGraph, EdgeKey, NclAnswer};
use crate::oracles::{
    check_cycle_witness, check_sat_witness, check_subset_witness, grid_hamcycle_oracle, sat_oracle, subset_sum_oracle,
    OracleAnswer, OracleError, OracleWitness,
};
use crate::render;
use crate::solver::{replays_to_goal, solve, state_bound, SearchBounds, SolveError, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Failure {
    Io = 3,
    Parse = 4,
    Validation = 5,
    Timing = 6,
    Bound = 7,
    Mismatch = 8,
}

impl Failure {
    fn name(self) -> &'static str {
        match self {
            Failure::Io => "io",
            Failure::Parse => "parse",
            Failure::Validation => "validation",
            Failure::Timing => "timing violation",
            Failure::Bound => "bound exceeded",
            Failure::Mismatch => "verdict mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub class: Failure,
    pub message: String,
}

impl CliError {
    fn new(class: Failure, message: impl Into<String>) -> Self {
        CliError { class, message: message.into().replace('\n', "; ") }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        let class = match e {
            FormatError::InvalidLevel(_) | FormatError::GeometryMismatch => Failure::Validation,
            _ => Failure::Parse,
        };
        CliError::new(class, e.to_string())
    }
}

impl From<CompileError> for CliError {
    fn from(e: CompileError) -> Self {
        match e {
            CompileError::TimingViolation(m) => CliError::new(Failure::Timing, m),
            e => CliError::new(Failure::Validation, e.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        CliError::new(Failure::Validation, e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::new(Failure::Bound, e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    SubsetSum,
    #[value(name = "3sat")]
    ThreeSat,
    HamcycleTimed,
    HamcycleHep,
    Ncl,
}

impl Source {
    fn problem(self) -> SourceProblem {
        match self {
            Source::SubsetSum => SourceProblem::SubsetSum,
            Source::ThreeSat => SourceProblem::ThreeSat,
            Source::HamcycleTimed => SourceProblem::HamcycleTimed,
            Source::HamcycleHep => SourceProblem::HamcycleHep,
            Source::Ncl => SourceProblem::Ncl,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Cubes,
    Laser,
    Gravity,
}

impl From<KindArg> for SwitchKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Cubes => SwitchKind::Cubes,
            KindArg::Laser => SwitchKind::Laser,
            KindArg::Gravity => SwitchKind::Gravity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

/// Compiler knobs. Kinematic values are exact rationals (`n` or `n/d`); for
/// the Hamiltonian-cycle compilers `alpha` and `epsilon` must be integers.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct CompileParams {
    #[arg(long)]
    pub epsilon: Option<Rational>,
    #[arg(long)]
    pub alpha: Option<Rational>,
    #[arg(long = "vh")]
    pub v_h: Option<Rational>,
    #[arg(long)]
    pub delta: Option<u64>,
    #[arg(long = "switch-kind", value_enum)]
    pub switch_kind: Option<KindArg>,
}

#[derive(Debug, Parser)]
#[command(name = "chamber", about = "Compile, solve and cross-check puzzle-level reductions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile an instance into a level document.
    Compile {
        #[arg(long, value_enum)]
        from: Source,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        params: CompileParams,
    },
    /// Solve a level and print the verdict and witness.
    Solve {
        #[arg(long)]
        level: PathBuf,
        #[arg(long = "max-states")]
        max_states: Option<u64>,
    },
    /// Compile, solve and compare against the oracle.
    Verify {
        #[arg(long, value_enum)]
        from: Source,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "max-states")]
        max_states: Option<u64>,
        #[command(flatten)]
        params: CompileParams,
    },
    /// Decide an instance directly.
    Oracle {
        #[arg(long, value_enum)]
        from: Source,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print the state-space bound of a level.
    Bound {
        #[arg(long)]
        level: PathBuf,
    },
    /// Draw a level.
    Render {
        #[arg(long)]
        level: PathBuf,
        #[arg(long, value_enum)]
        format: RenderFormat,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A parsed source instance.
#[derive(Debug, Clone)]
pub enum Instance {
    SubsetSum(SubsetSumInstance),
    Cnf(CnfFormula),
    Grid(GridGraph),
    Ncl(ConstraintGraph, EdgeKey),
}

impl Instance {
    pub fn parse(from: Source, text: &str) -> Result<Self, CliError> {
        Ok(match from {
            Source::SubsetSum => Instance::SubsetSum(format::parse_subset_sum(text)?),
            Source::ThreeSat => Instance::Cnf(format::parse_dimacs(text)?),
            Source::HamcycleTimed | Source::HamcycleHep => Instance::Grid(format::parse_grid(text)?),
            Source::Ncl => {
                let (g, t) = format::parse_ncl(text)?;
                Instance::Ncl(g, t)
            }
        })
    }

    /// The instance in canonical text form.
    pub fn canonical_text(&self) -> String {
        match self {
            Instance::SubsetSum(i) => format::write_subset_sum(i),
            Instance::Cnf(f) => format::write_dimacs(f),
            Instance::Grid(g) => format::write_grid(g),
            Instance::Ncl(g, t) => format::write_ncl(g, *t),
        }
    }
}

fn integer(name: &str, r: &Rational) -> Result<u64, CliError> {
    r.0.is_integer()
        .then(|| r.0.to_integer().to_u64())
        .flatten()
        .ok_or_else(|| CliError::new(Failure::Parse, format!("--{name} must be a non-negative integer here, got {r}")))
}

/// Compiles `inst` into a checked level document.
pub fn compile_document(from: Source, inst: &Instance, params: &CompileParams) -> Result<LevelDocument, CliError> {
    let mut recorded: BTreeMap<String, String> = BTreeMap::new();
    let (level, geometry) = match (from, inst) {
        (Source::SubsetSum, Instance::SubsetSum(i)) => {
            let d = KinematicsParams::default();
            let k = KinematicsParams::new(
                params.alpha.clone().unwrap_or(d.alpha),
                params.v_h.clone().unwrap_or(d.v_h),
                params.epsilon.clone().unwrap_or(d.epsilon),
            );
            k.validate().map_err(|e| CliError::new(Failure::Validation, e.to_string()))?;
            recorded.insert("alpha".into(), k.alpha.to_string());
            recorded.insert("vh".into(), k.v_h.to_string());
            recorded.insert("epsilon".into(), k.epsilon.to_string());
            let (level, geom) = compile_subset_sum(i, &k)?;
            (level, Some(geom))
        }
        (Source::ThreeSat, Instance::Cnf(f)) => (compile_3sat_turrets(f)?, None),
        (Source::HamcycleTimed, Instance::Grid(g)) => {
            let mut t = TimedTiming::for_vertices(g.n());
            if let Some(a) = &params.alpha {
                t.alpha = integer("alpha", a)?;
            }
            if let Some(d) = params.delta {
                t.delta = d;
            }
            if let Some(e) = &params.epsilon {
                t.epsilon_exit = integer("epsilon", e)?;
            }
            recorded.insert("alpha".into(), t.alpha.to_string());
            recorded.insert("delta".into(), t.delta.to_string());
            recorded.insert("epsilon".into(), t.epsilon_exit.to_string());
            (compile_hamcycle_timed(g, t)?, None)
        }
        (Source::HamcycleHep, Instance::Grid(g)) => {
            let mut t = HepTiming::for_vertices(g.n());
            if let Some(a) = &params.alpha {
                t.alpha = integer("alpha", a)?;
            }
            if let Some(d) = params.delta {
                t.delta = d;
            }
            if let Some(e) = &params.epsilon {
                t.epsilon1 = integer("epsilon", e)?;
            }
            recorded.insert("alpha".into(), t.alpha.to_string());
            recorded.insert("delta".into(), t.delta.to_string());
            recorded.insert("epsilon1".into(), t.epsilon1.to_string());
            recorded.insert("epsilon2".into(), t.epsilon2.to_string());
            (compile_hamcycle_hep(g, t)?, None)
        }
        (Source::Ncl, Instance::Ncl(g, target)) => {
            let level = compile_ncl_switches(g, *target)?;
            match params.switch_kind {
                Some(kind) => {
                    let kind = SwitchKind::from(kind);
                    recorded.insert("switch-kind".into(), kind.name().into());
                    (realize_switches(&level, kind), None)
                }
                None => (level, None),
            }
        }
        _ => return Err(CliError::new(Failure::Parse, "instance does not match --from")),
    };
    let provenance = Provenance {
        source: from.problem(),
        instance_digest: digest(&inst.canonical_text()),
        parameters: recorded,
    };
    let doc = LevelDocument::new(level, geometry, provenance);
    doc.check()?;
    Ok(doc)
}

/// Oracle verdict for `inst`, with its witness re-checked.
pub fn run_oracle(inst: &Instance) -> Result<OracleAnswer, CliError> {
    let (answer, ok) = match inst {
        Instance::SubsetSum(i) => {
            let a = subset_sum_oracle(i);
            let ok = check_subset_witness(i, &a);
            (a, ok)
        }
        Instance::Cnf(f) => {
            let a = sat_oracle(f)?;
            let ok = check_sat_witness(f, &a);
            (a, ok)
        }
        Instance::Grid(g) => {
            let a = grid_hamcycle_oracle(g)?;
            let ok = check_cycle_witness(g, &a);
            (a, ok)
        }
        Instance::Ncl(g, t) => match ncl_decide(g, *t, SearchBounds::default().max_states)
            .map_err(|e| CliError::new(Failure::Validation, e.to_string()))?
        {
            NclAnswer::Yes { flips } => {
                let i = g.edge_index(*t).expect("decided edges exist");
                let ok = replay_flips(g, &flips).is_ok_and(|h| h.edges()[i].orientation != g.edges()[i].orientation);
                (OracleAnswer { yes: true, witness: None }, ok)
            }
            NclAnswer::No { .. } => (OracleAnswer { yes: false, witness: None }, true),
            NclAnswer::BoundExceeded { bound } => {
                return Err(CliError::new(Failure::Bound, format!("NCL search exceeded {bound} states")))
            }
        },
    };
    if !ok {
        return Err(CliError::new(Failure::Mismatch, "oracle witness does not check out"));
    }
    Ok(answer)
}

fn describe_answer(a: &OracleAnswer) -> String {
    let verdict = if a.yes { "yes" } else { "no" };
    match &a.witness {
        Some(OracleWitness::Subset(idx)) => format!("{verdict}, subset {idx:?}"),
        Some(OracleWitness::Assignment(bits)) => {
            let lits: Vec<String> =
                bits.iter().enumerate().map(|(i, &b)| format!("{}{}", if b { "" } else { "-" }, i + 1)).collect();
            format!("{verdict}, assignment {}", lits.join(" "))
        }
        Some(OracleWitness::Cycle(c)) => format!("{verdict}, cycle {c:?}"),
        None => verdict.to_string(),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::new(Failure::Io, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::new(Failure::Io, format!("{}: {e}", path.display())))
}

fn bounds(max_states: Option<u64>) -> SearchBounds {
    max_states.map(SearchBounds::with_max_states).unwrap_or_default()
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Solvable { .. } => "Solvable",
        Verdict::Unsolvable { .. } => "Unsolvable",
        Verdict::BoundExceeded { .. } => "BoundExceeded",
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::new(Failure::Io, e.to_string());
    match cmd {
        Command::Compile { from, input, out: path, params } => {
            let inst = Instance::parse(from, &read(&input)?)?;
            let doc = compile_document(from, &inst, &params)?;
            write_file(&path, &doc.to_text())?;
            writeln!(
                out,
                "wrote {} ({} rooms, {} passages, {} elements)",
                path.display(),
                doc.level.rooms.len(),
                doc.level.passages.len(),
                doc.level.elements.len()
            )
            .map_err(io)?;
        }
        Command::Solve { level, max_states } => {
            let doc = LevelDocument::from_text(&read(&level)?)?;
            let verdict = solve(&doc.level, bounds(max_states))?;
            writeln!(out, "{verdict}").map_err(io)?;
            for (i, input) in verdict.witness().unwrap_or_default().iter().enumerate() {
                writeln!(out, "{:>4}. {input}", i + 1).map_err(io)?;
            }
            if let Verdict::BoundExceeded { bound } = verdict {
                return Err(CliError::new(Failure::Bound, format!("search stopped after {bound} states")));
            }
        }
        Command::Verify { from, input, max_states, params } => {
            let inst = Instance::parse(from, &read(&input)?)?;
            let doc = compile_document(from, &inst, &params)?;
            let verdict = solve(&doc.level, bounds(max_states))?;
            let answer = run_oracle(&inst)?;
            writeln!(out, "oracle: {}, level: {}", if answer.yes { "yes" } else { "no" }, verdict_name(&verdict))
                .map_err(io)?;
            if let Verdict::BoundExceeded { bound } = verdict {
                return Err(CliError::new(Failure::Bound, format!("search stopped after {bound} states")));
            }
            if let Some(w) = verdict.witness() {
                if !replays_to_goal(&doc.level, w) {
                    return Err(CliError::new(Failure::Mismatch, "level witness does not replay to the goal"));
                }
                if let (Instance::SubsetSum(i), Some(g)) = (&inst, &doc.geometry) {
                    let chosen = selected_wells(&doc.level, w)
                        .ok_or_else(|| CliError::new(Failure::Mismatch, "witness selects no wells"))?;
                    let landing = verify_selection(i, &chosen, &g.params, g)
                        .map_err(|e| CliError::new(Failure::Mismatch, e.to_string()))?;
                    if !landing.is_hit() {
                        return Err(CliError::new(Failure::Mismatch, "witness wells miss the platform"));
                    }
                }
            }
            if answer.yes != verdict.is_solvable() {
                return Err(CliError::new(Failure::Mismatch, "oracle and level verdicts disagree"));
            }
        }
        Command::Oracle { from, input } => {
            let inst = Instance::parse(from, &read(&input)?)?;
            let answer = run_oracle(&inst)?;
            writeln!(out, "{}", describe_answer(&answer)).map_err(io)?;
        }
        Command::Bound { level } => {
            let doc = LevelDocument::from_text(&read(&level)?)?;
            writeln!(out, "{}", state_bound(&doc.level)).map_err(io)?;
        }
        Command::Render { level, format, out: path } => {
            let doc = LevelDocument::from_text(&read(&level)?)?;
            let text = match format {
                RenderFormat::Ascii => render::ascii(&doc.level, doc.geometry.as_ref()),
                RenderFormat::Svg => render::svg(&doc.level, doc.geometry.as_ref()),
            };
            write_file(&path, &text)?;
        }
    }
    Ok(())
}

/// Runs one command line, returning the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let first = e.to_string().lines().next().unwrap_or("usage").trim_start_matches("error: ").to_string();
                let _ = writeln!(err, "error: usage: {first}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.class.name(), e.message);
            e.class as i32
        }
    }
}
