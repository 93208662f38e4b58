//! The `prolim` command line: every computation driven by JSON input files, plus
//! the randomized property suites.

mod input;
pub mod props;
mod report;

use crate::adic::{dual_lattice, solve_divisibility, AdicInteger, LatticeChain};
use crate::error::{Error, Result};
use crate::rigidity::{apply_hom_orbit, chains_conjugate, enumerate_trivial_homs, TrivialHom};
use crate::simplicial::{
    cohomology, duality_check, homology, iterated_subdivision, neighborhood_pair, nerve, Label, SimplicialComplex,
};
use crate::steinitz::{classify_pair, family_same_steenrod, DivisorSequence, DEFAULT_PRIME_BOUND};
use crate::towers::{
    canonical_sequence, e0_reduce, lim1_of_with, lim_of_with, milnor_from_towers, milnor_homology, polygon_tower,
    six_term, LimitOptions, Tower, TowerElement,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "prolim",
    version,
    about = "Limits of towers, pro-space homology, adic arithmetic and solenoids"
)]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Flags {
    /// Levels examined by truncated computations.
    #[arg(long, global = true, default_value_t = 8)]
    pub depth: usize,
    /// Digits carried by adic integers.
    #[arg(long, global = true, default_value_t = 12)]
    pub precision: usize,
    /// Search box for homomorphisms and changes of coordinates.
    #[arg(long, global = true, default_value_t = 3)]
    pub bound: u64,
    /// Largest prime tried when factoring.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME_BOUND)]
    #[serde(rename = "prime-bound")]
    pub prime_bound: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, conflicts_with = "text")]
    #[serde(skip)]
    pub json: bool,
    #[arg(long, global = true)]
    #[serde(skip)]
    pub text: bool,
}

impl Flags {
    fn validate(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::Precondition("--depth must be positive".into()));
        }
        if self.precision == 0 {
            return Err(Error::Precondition("--precision must be positive".into()));
        }
        if self.prime_bound < 2 {
            return Err(Error::Precondition("--prime-bound must be at least 2".into()));
        }
        Ok(())
    }

    fn limit_options(&self) -> LimitOptions {
        LimitOptions {
            depth: self.depth,
            prime_bound: self.prime_bound,
        }
    }

    fn suite_params(&self) -> props::SuiteParams {
        props::SuiteParams {
            depth: self.depth,
            precision: self.precision,
            bound: self.bound,
            prime_bound: self.prime_bound,
        }
    }
}

#[derive(Args, Debug)]
pub struct HomologyArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long)]
    pub degree: usize,
    #[arg(long)]
    pub reduced: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integral homology of a simplicial complex.
    Homology(HomologyArgs),
    /// Integral cohomology of a simplicial complex.
    Cohomology(HomologyArgs),
    /// Nerve of a cover given as a list of label lists.
    Nerve {
        #[arg(long)]
        cover: PathBuf,
    },
    /// Iterated barycentric subdivision.
    Subdivide {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Closed neighborhood and frontier of a subset of vertices.
    Neighborhood {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        subset: PathBuf,
    },
    /// Limits, Milnor sequence, six-term sequence and E0 reduction of towers
    #[command(subcommand)]
    Tower(TowerCommand),
    /// Baer, homeomorphism and Steenrod comparison of two solenoids.
    ClassifySolenoid {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Pairwise classification of a family with equal Steenrod homology.
    Family {
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        base: u64,
    },
    /// Arithmetic in the a-adic integers
    #[command(subcommand)]
    Adic(AdicCommand),
    /// Dual of a lattice containing Z^d.
    DualLattice {
        #[arg(long)]
        lattice: PathBuf,
    },
    /// Homomorphisms, conjugacy and orbits of odometer groups
    #[command(subcommand)]
    Rigidity(RigidityCommand),
    /// Level-wise duality between a subcomplex of a sphere and its complement.
    DualityCheck {
        #[arg(long)]
        sphere: PathBuf,
        #[arg(long)]
        subcomplex: PathBuf,
        #[arg(long, default_value_t = 2)]
        subdivisions: usize,
    },
    /// Runs a randomized invariant suite.
    Props {
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum TowerCommand {
    Lim {
        #[arg(long)]
        tower: PathBuf,
    },
    Lim1 {
        #[arg(long)]
        tower: PathBuf,
    },
    /// Weak and asymptotic parts of a Milnor sequence.
    Milnor {
        /// Use the tower of polygons under the doubling maps.
        #[arg(long, conflicts_with_all = ["weak", "asymptotic"])]
        polygon: bool,
        /// Tower whose lim is the weak part.
        #[arg(long, required_unless_present = "polygon")]
        weak: Option<PathBuf>,
        /// Tower whose lim¹ is the asymptotic part.
        #[arg(long)]
        asymptotic: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long)]
        reduced: bool,
    },
    /// Six-term sequence of the canonical short exact sequence of a divisor sequence.
    Sixterm {
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Reduction of an element of the product to a coset chain.
    E0 {
        #[arg(long)]
        tower: PathBuf,
        #[arg(long)]
        element: PathBuf,
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AdicOp {
    FromInt,
    Add,
    Sub,
    Mul,
    Neg,
}

#[derive(Subcommand, Debug)]
pub enum AdicCommand {
    Calc {
        #[arg(long)]
        base: PathBuf,
        #[arg(long, value_enum)]
        op: AdicOp,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
    },
    /// Solves `q·y − x ∈ Z`.
    Divide {
        #[arg(long)]
        base: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum RigidityCommand {
    Enumerate {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    Conjugate {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    Orbit {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        homs: PathBuf,
        /// Comma-separated coordinates, integers or `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
}

impl Command {
    fn name(&self) -> String {
        let sub = match self {
            Command::Tower(t) => match t {
                TowerCommand::Lim { .. } => "lim",
                TowerCommand::Lim1 { .. } => "lim1",
                TowerCommand::Milnor { .. } => "milnor",
                TowerCommand::Sixterm { .. } => "sixterm",
                TowerCommand::E0 { .. } => "e0",
            },
            Command::Adic(a) => match a {
                AdicCommand::Calc { .. } => "calc",
                AdicCommand::Divide { .. } => "divide",
            },
            Command::Rigidity(r) => match r {
                RigidityCommand::Enumerate { .. } => "enumerate",
                RigidityCommand::Conjugate { .. } => "conjugate",
                RigidityCommand::Orbit { .. } => "orbit",
            },
            _ => "",
        };
        let top = match self {
            Command::Homology(_) => "homology",
            Command::Cohomology(_) => "cohomology",
            Command::Nerve { .. } => "nerve",
            Command::Subdivide { .. } => "subdivide",
            Command::Neighborhood { .. } => "neighborhood",
            Command::Tower(_) => "tower",
            Command::ClassifySolenoid { .. } => "classify-solenoid",
            Command::Family { .. } => "family",
            Command::Adic(_) => "adic",
            Command::DualLattice { .. } => "dual-lattice",
            Command::Rigidity(_) => "rigidity",
            Command::DualityCheck { .. } => "duality-check",
            Command::Props { .. } => "props",
        };
        if sub.is_empty() {
            top.into()
        } else {
            format!("{top} {sub}")
        }
    }
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_PROPERTY: i32 = 2;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

/// Parses arguments (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_ERROR,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let result = cli.flags.validate().and_then(|_| dispatch(&cli.command, &cli.flags));
    match result {
        Ok((result, code)) => {
            let name = cli.command.name();
            let r = report::Report {
                command: &name,
                flags: &cli.flags,
                result,
            };
            let stdout = if cli.flags.text {
                report::to_text(&r)
            } else {
                report::to_json(&r)
            };
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn ok(v: Value) -> Result<(Value, i32)> {
    Ok((v, EXIT_OK))
}

fn dispatch(cmd: &Command, flags: &Flags) -> Result<(Value, i32)> {
    let opts = flags.limit_options();
    match cmd {
        Command::Homology(a) | Command::Cohomology(a) => {
            let k: SimplicialComplex = input::read(&a.complex)?;
            let g = if matches!(cmd, Command::Homology(_)) {
                homology(&k, a.degree, a.reduced)
            } else {
                cohomology(&k, a.degree, a.reduced)
            };
            ok(to_value(&g))
        }
        Command::Nerve { cover } => {
            let cover: Vec<Vec<Label>> = input::read(cover)?;
            ok(to_value(&nerve(&cover)?))
        }
        Command::Subdivide { complex, times } => {
            let k: SimplicialComplex = input::read(complex)?;
            ok(to_value(&iterated_subdivision(&k, *times)))
        }
        Command::Neighborhood { complex, subset } => {
            let k: SimplicialComplex = input::read(complex)?;
            let x: Vec<Label> = input::read(subset)?;
            ok(to_value(&neighborhood_pair(&k, &x)?))
        }
        Command::Tower(t) => tower(t, flags, &opts),
        Command::ClassifySolenoid { a, b } => {
            let a: DivisorSequence = input::read(a)?;
            let b: DivisorSequence = input::read(b)?;
            ok(to_value(&classify_pair(&a, &b, flags.prime_bound)?))
        }
        Command::Family { k, base } => {
            let fam = family_same_steenrod(*k, *base)?;
            let mut pairs = Vec::new();
            for i in 0..fam.len() {
                for j in i + 1..fam.len() {
                    let c = classify_pair(&fam[i], &fam[j], flags.prime_bound)?;
                    pairs.push(json!({
                        "i": i,
                        "j": j,
                        "steenrod_isomorphic": c.steenrod_isomorphic,
                        "homeomorphic": c.homeomorphic,
                    }));
                }
            }
            ok(json!({ "members": fam, "pairs": pairs }))
        }
        Command::Adic(a) => adic(a, flags),
        Command::DualLattice { lattice } => {
            let l: input::DualLatticeInput = input::read(lattice)?;
            ok(to_value(&dual_lattice(l.d, &l.generators())?))
        }
        Command::Rigidity(r) => rigidity(r, flags),
        Command::DualityCheck {
            sphere,
            subcomplex,
            subdivisions,
        } => {
            let s: SimplicialComplex = input::read(sphere)?;
            let x: SimplicialComplex = input::read(subcomplex)?;
            ok(to_value(&duality_check(&s, &x, *subdivisions)?))
        }
        Command::Props { suite, trials } => {
            let r = props::run_suite(suite, *trials, flags.seed, flags.suite_params()).ok_or_else(|| {
                Error::Precondition(format!(
                    "unknown suite {suite}; known suites: {}",
                    props::SUITES.join(", ")
                ))
            })?;
            let code = if r.ok() { EXIT_OK } else { EXIT_PROPERTY };
            Ok((to_value(&r), code))
        }
    }
}

fn tower(t: &TowerCommand, flags: &Flags, opts: &LimitOptions) -> Result<(Value, i32)> {
    match t {
        TowerCommand::Lim { tower } => {
            let t: Tower = input::read(tower)?;
            ok(to_value(&lim_of_with(&t, opts)?))
        }
        TowerCommand::Lim1 { tower } => {
            let t: Tower = input::read(tower)?;
            ok(to_value(&lim1_of_with(&t, opts)?))
        }
        TowerCommand::Milnor {
            polygon,
            weak,
            asymptotic,
            degree,
            reduced,
        } => {
            let d = if *polygon {
                milnor_homology(&polygon_tower(flags.depth.max(2))?, *degree, *reduced, opts)?
            } else {
                let w: Tower = input::read(weak.as_ref().expect("required unless polygon"))?;
                let a: Option<Tower> = asymptotic.as_ref().map(|p| input::read(p)).transpose()?;
                milnor_from_towers(*degree, &w, a.as_ref(), opts)?
            };
            let mut v = to_value(&d);
            if let Some(h0) = &d.h0 {
                v["h0_structure"] = Value::from(h0.structure_string());
            }
            ok(v)
        }
        TowerCommand::Sixterm { sequence, samples } => {
            let a: DivisorSequence = input::read(sequence)?;
            let r = six_term(&canonical_sequence(&a, flags.depth), *samples, flags.seed, opts)?;
            let mut v = to_value(&r);
            v["all_pass"] = Value::from(r.all_pass());
            ok(v)
        }
        TowerCommand::E0 { tower, element, start } => {
            let t: Tower = input::read(tower)?;
            let b: TowerElement = input::read(element)?;
            let c = e0_reduce(&t, &b, *start, flags.depth)?;
            let mut v = to_value(&c);
            v["compatible"] = Value::from(c.is_compatible(&t)?);
            ok(v)
        }
    }
}

fn adic_arg(base: &DivisorSequence, flag: &str, s: &str, k: usize) -> Result<AdicInteger> {
    AdicInteger::from_rational(base, &input::rational_arg(flag, s)?, k)
}

fn adic(a: &AdicCommand, flags: &Flags) -> Result<(Value, i32)> {
    let k = flags.precision;
    match a {
        AdicCommand::Calc { base, op, x, y } => {
            let base: DivisorSequence = input::read(base)?;
            let x = adic_arg(&base, "--x", x, k)?;
            let y = || -> Result<AdicInteger> {
                let s = y
                    .as_ref()
                    .ok_or_else(|| Error::Precondition("this operation needs --y".into()))?;
                adic_arg(&base, "--y", s, k)
            };
            let r = match op {
                AdicOp::FromInt => x,
                AdicOp::Add => x.add(&y()?)?,
                AdicOp::Sub => x.sub(&y()?)?,
                AdicOp::Mul => x.mul(&y()?)?,
                AdicOp::Neg => x.neg(),
            };
            let integer = r.integer_detect()?;
            ok(json!({ "value": r, "integer": integer.map(|n| n.to_string()) }))
        }
        AdicCommand::Divide { base, x, q } => {
            let base: DivisorSequence = input::read(base)?;
            let x = adic_arg(&base, "--x", x, k)?;
            ok(to_value(&solve_divisibility(&x, *q)?))
        }
    }
}

fn rigidity(r: &RigidityCommand, flags: &Flags) -> Result<(Value, i32)> {
    match r {
        RigidityCommand::Enumerate { source, target } => {
            let s: LatticeChain = input::read(source)?;
            let t: LatticeChain = input::read(target)?;
            ok(to_value(&enumerate_trivial_homs(&s, &t, flags.depth, flags.bound)?))
        }
        RigidityCommand::Conjugate { source, target } => {
            let s: LatticeChain = input::read(source)?;
            let t: LatticeChain = input::read(target)?;
            ok(to_value(&chains_conjugate(
                &s,
                &t,
                flags.depth,
                flags.bound,
                flags.prime_bound,
            )?))
        }
        RigidityCommand::Orbit { chain, homs, x, steps } => {
            let c: LatticeChain = input::read(chain)?;
            let list: input::HomList = input::read(homs)?;
            let homs = list
                .homs
                .into_iter()
                .map(|h| TrivialHom::new(h.level, h.w))
                .collect::<Result<Vec<_>>>()?;
            let x = input::rational_list("--x", x)?;
            ok(to_value(&apply_hom_orbit(&homs, &c, &x, *steps)?))
        }
    }
}
