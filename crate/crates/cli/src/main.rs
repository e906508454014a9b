mod angle;
mod commands;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtet::gram::{BranchSigns, DEFAULT_TOL};

use angle::AngleLiteral;

#[derive(Debug, Parser)]
#[command(name = "qtet", version, about = "Quantum 6j-symbols and generalized hyperbolic tetrahedra")]
struct Cli {
    /// Relative tolerance for signature and vertex-type decisions.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Worker threads for growth and prism scans; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for commands that sample random tuples.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Branch signs, six of '+' or '-'; alpha = pi + mu * theta.
    #[arg(long, global = true, default_value_t = BranchSigns::ALL_MINUS, allow_hyphen_values = true)]
    mu: BranchSigns,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct LevelRange {
    #[arg(long, default_value_t = 101, value_parser = parse_odd_level)]
    r_start: u32,
    #[arg(long, default_value_t = 2001, value_parser = parse_odd_level)]
    r_end: u32,
    /// Must be even so that every level stays odd.
    #[arg(long, default_value_t = 2, value_parser = parse_even_step)]
    r_step: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Admissibility, Gram matrix, signature and geometry class of six angles.
    Classify {
        /// Six dihedral angles; omit when sampling with --random.
        #[arg(num_args = 6, required_unless_present = "random")]
        angles: Vec<AngleLiteral>,
        /// Classify this many uniformly random angle tuples instead.
        #[arg(long, conflicts_with = "angles")]
        random: Option<usize>,
    },
    /// Vertices, signed edge lengths and case label of a generalized hyperbolic tetrahedron.
    Tetra {
        #[arg(num_args = 6, required = true)]
        angles: Vec<AngleLiteral>,
    },
    /// Volume through the critical point of V.
    Volume {
        #[arg(num_args = 6, required = true)]
        angles: Vec<AngleLiteral>,
    },
    /// One quantum 6j-symbol.
    Sixj {
        #[arg(num_args = 6, required = true)]
        colors: Vec<u32>,
        #[arg(long, value_parser = parse_odd_level)]
        r: u32,
    },
    /// Scaled log |6j| along rounded colorings, with a fit against the volume.
    Growth {
        #[arg(num_args = 6, required = true)]
        angles: Vec<AngleLiteral>,
        #[command(flatten)]
        range: LevelRange,
    },
    /// Growth of the prism bracket compared with Vol(T1) + Vol(T2).
    Prism {
        /// JSON file with keys vertical, base_b, base_c (three angles each).
        spec: PathBuf,
        #[command(flatten)]
        range: LevelRange,
    },
    /// Residuals of the Schlafli formula by central differences.
    Schlafli {
        #[arg(num_args = 6, required = true)]
        angles: Vec<AngleLiteral>,
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
    },
    /// Lobachevsky function on an even grid over [0, pi].
    LobachevskyTable {
        #[arg(long, default_value_t = 12)]
        steps: usize,
    },
}

fn parse_odd_level(s: &str) -> Result<u32, String> {
    let r: u32 = s.parse().map_err(|e| format!("{e}"))?;
    if r >= 3 && r % 2 == 1 {
        Ok(r)
    } else {
        Err(format!("level must be odd and at least 3, got {r}"))
    }
}

fn parse_even_step(s: &str) -> Result<u32, String> {
    let step: u32 = s.parse().map_err(|e| format!("{e}"))?;
    if step > 0 && step % 2 == 0 {
        Ok(step)
    } else {
        Err(format!("step must be positive and even, got {step}"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Domain(#[from] qtet::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Domain(_) | Self::Io(_) => 1,
            Self::Parse(_) => 2,
        }
    }
}

pub struct RunConfig {
    pub tol: f64,
    pub workers: usize,
    pub format: Format,
    pub seed: u64,
    pub mu: BranchSigns,
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig { tol: cli.tol, workers: cli.workers, format: cli.format, seed: cli.seed, mu: cli.mu };
    match cli.command {
        Command::Classify { angles, random: None } => commands::classify(&cfg, &angles, out),
        Command::Classify { random: Some(n), .. } => commands::classify_random(&cfg, n, out),
        Command::Tetra { angles } => commands::tetra(&cfg, &angles, out),
        Command::Volume { angles } => commands::volume(&cfg, &angles, out),
        Command::Sixj { colors, r } => commands::sixj(&cfg, &colors, r, out),
        Command::Growth { angles, range } => commands::growth(&cfg, &angles, &range, out),
        Command::Prism { spec, range } => commands::prism(&cfg, &spec, &range, out),
        Command::Schlafli { angles, h } => commands::schlafli(&cfg, &angles, h, out),
        Command::LobachevskyTable { steps } => commands::lobachevsky_table(&cfg, steps, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out).and_then(|()| out.flush().map_err(CliError::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
