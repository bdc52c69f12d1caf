use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use shafdyn::arith::PlaceSet;
use shafdyn::verify::Suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Badprimes,
    Reduce,
    Preper,
    Disc,
    Classp,
    Maps,
    Twists,
    Iso,
    Verify,
}

/// Everything a run depends on. Serializes to a canonical JSON document
/// that parses back to the same value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(rename = "S")]
    pub s: PlaceSet,
    #[serde(rename = "M")]
    pub m: u64,
    pub height_bound: u64,
    pub budget: u32,
    pub format: Format,
    pub rng_seed: u64,
    pub trials: u64,
    /// Positional inputs; `-` or an absent input means standard input.
    pub inputs: Vec<String>,
    /// Primes for `reduce`; empty means the bad primes.
    pub primes: Vec<u64>,
    /// Target cardinality for `classp`; defaults to the size of the set.
    pub n_points: Option<u64>,
    pub check_iso: bool,
    pub suite: Option<String>,
}

#[derive(Debug, Parser)]
#[command(name = "shafdyn", version, about = "Exact arithmetic dynamics on projective space")]
pub struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Finite primes of S, comma separated; the archimedean place is implicit.
    #[arg(long = "S", global = true, value_delimiter = ',')]
    s: Vec<u64>,
    /// Maximal orbit size for preperiodic points.
    #[arg(long = "M", global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    height_bound: u64,
    /// Rounds of the good-reduction search.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    budget: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Resultant and bad primes of a morphism "F; G; ...".
    Badprimes { morphism: Option<String> },
    /// Reduction modulo primes, with a good-model search on P^1.
    Reduce {
        morphism: Option<String>,
        #[arg(long = "p", value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Rational preperiodic points with orbit tables.
    Preper { morphism: Option<String> },
    /// Decomposable form and discriminant ideal of a point set.
    Disc { points: Option<String> },
    /// Membership of a point set in P(S, N).
    Classp {
        points: Option<String>,
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(1..))]
        n_points: Option<u64>,
    },
    /// Projective linear maps carrying one point set onto another.
    Maps { source: String, target: String },
    /// Quadratic twists with good reduction outside S.
    Twists {
        morphism: Option<String>,
        #[arg(long)]
        check_iso: bool,
    },
    /// Rational conjugacy test between two morphisms.
    Iso { phi: String, psi: String },
    /// Seeded randomized property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> shafdyn::Result<RunConfig> {
        let s = PlaceSet::new(cli.s.iter().copied()).map_err(|e| shafdyn::Error::Parse(e.to_string()))?;
        let mut cfg = RunConfig {
            command: CommandKind::Verify,
            s,
            m: cli.m,
            height_bound: cli.height_bound,
            budget: cli.budget,
            format: cli.format,
            rng_seed: cli.rng_seed,
            trials: cli.trials,
            inputs: vec![],
            primes: vec![],
            n_points: None,
            check_iso: false,
            suite: None,
        };
        let one = |x: Option<String>| vec![x.unwrap_or_else(|| "-".into())];
        match cli.command {
            Cmd::Badprimes { morphism } => (cfg.command, cfg.inputs) = (CommandKind::Badprimes, one(morphism)),
            Cmd::Reduce { morphism, primes } => {
                (cfg.command, cfg.inputs, cfg.primes) = (CommandKind::Reduce, one(morphism), primes)
            }
            Cmd::Preper { morphism } => (cfg.command, cfg.inputs) = (CommandKind::Preper, one(morphism)),
            Cmd::Disc { points } => (cfg.command, cfg.inputs) = (CommandKind::Disc, one(points)),
            Cmd::Classp { points, n_points } => {
                (cfg.command, cfg.inputs, cfg.n_points) = (CommandKind::Classp, one(points), n_points)
            }
            Cmd::Maps { source, target } => (cfg.command, cfg.inputs) = (CommandKind::Maps, vec![source, target]),
            Cmd::Twists { morphism, check_iso } => {
                (cfg.command, cfg.inputs, cfg.check_iso) = (CommandKind::Twists, one(morphism), check_iso)
            }
            Cmd::Iso { phi, psi } => (cfg.command, cfg.inputs) = (CommandKind::Iso, vec![phi, psi]),
            Cmd::Verify { suite } => {
                suite.parse::<Suite>()?;
                (cfg.command, cfg.suite) = (CommandKind::Verify, Some(suite))
            }
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_json(s: &str) -> shafdyn::Result<RunConfig> {
        serde_json::from_str(s).map_err(|e| shafdyn::Error::Parse(e.to_string()))
    }
}
