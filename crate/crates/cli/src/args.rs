//! Command-line arguments.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtheta::identities::Var;
use qtheta::{Binding, Rat};

#[derive(Parser, Debug, Clone)]
#[command(name = "qtheta", version, about = "Exact q-series checks of partial theta function identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Verify and expand through q^ORDER.
    #[arg(long, global = true, default_value_t = 30, value_parser = clap::value_parser!(i64).range(1..))]
    pub order: i64,

    /// Highest total power of a and b kept when they stay symbolic.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(i64).range(0..))]
    pub degree_cap: i64,

    /// Extra powers of q carried internally past ORDER.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(i64).range(0..))]
    pub slack: i64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    pub output: OutputFormat,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output_file: Option<PathBuf>,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,

    /// Report elapsed times as 0 so that runs compare byte for byte.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// List the registered identities.
    List,
    /// Check identities coefficient by coefficient.
    Verify(VerifyArgs),
    /// Print the coefficients of a kernel or of one side of an identity.
    Expand(ExpandArgs),
    /// Time one check per identity.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Identity names, or `all`.
    #[arg(required = true)]
    pub names: Vec<String>,

    /// Random points per identity and parameter choice.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub points: u32,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Keep a and b formal for identities that allow it.
    #[arg(long)]
    pub symbolic: bool,

    /// Fix a variable instead of sampling it, e.g. `--at a=2/3` or `--at b=formal`.
    #[arg(long = "at", value_name = "VAR=VALUE")]
    pub at: Vec<Assignment>,

    /// Only run the grid entries with this integer parameter, e.g. `--param m=2`.
    #[arg(long = "param", value_name = "NAME=INT")]
    pub params: Vec<ParamFilter>,

    /// Add q^E to the right side of NAME before comparing (test fixture).
    #[arg(long, hide = true, value_name = "NAME:E")]
    pub perturb_rhs: Option<Perturbation>,
}

#[derive(Args, Debug, Clone)]
pub struct ExpandArgs {
    /// `theta`, `L`, `P`, `poch_inf_q`, `psi`, `U:<m>`, `V:<m>:<n>` or `<identity>:lhs|rhs`.
    pub target: String,

    #[arg(long = "at", value_name = "VAR=VALUE")]
    pub at: Vec<Assignment>,

    #[arg(long = "param", value_name = "NAME=INT")]
    pub params: Vec<ParamFilter>,

    /// Seed for variables an identity side needs but `--at` leaves open.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    /// Identity names; all of them when omitted.
    pub names: Vec<String>,

    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeats: u32,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// `VAR=VALUE` with VALUE a rational or `formal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub var: Var,
    pub binding: Binding,
}

impl FromStr for Assignment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, value) = s.split_once('=').ok_or_else(|| format!("expected VAR=VALUE, got {s}"))?;
        let var = name.trim().parse::<Var>().map_err(|e| e.to_string())?;
        let binding = match value.trim() {
            "formal" => Binding::Formal,
            v => Binding::Rational(v.parse::<Rat>().map_err(|e| e.to_string())?),
        };
        Ok(Assignment { var, binding })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamFilter {
    pub name: String,
    pub value: i64,
}

impl FromStr for ParamFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=INT, got {s}"))?;
        let value = value.trim().parse().map_err(|_| format!("not an integer: {value}"))?;
        Ok(ParamFilter { name: name.trim().to_string(), value })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub identity: String,
    pub e_q: i64,
}

impl FromStr for Perturbation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, e) = s.rsplit_once(':').ok_or_else(|| format!("expected NAME:E, got {s}"))?;
        let e_q = e.parse().map_err(|_| format!("not an integer exponent: {e}"))?;
        Ok(Perturbation { identity: name.to_string(), e_q })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn assignments() {
        let a: Assignment = "a=2/3".parse().unwrap();
        assert_eq!(a, Assignment { var: Var::A, binding: Binding::Rational(Rat::new(2, 3).unwrap()) });
        let b: Assignment = "B=formal".parse().unwrap();
        assert_eq!((b.var, b.binding), (Var::UpperB, Binding::Formal));
        assert!("z=1".parse::<Assignment>().is_err());
        assert!("a".parse::<Assignment>().is_err());
        assert!("a=1/0".parse::<Assignment>().is_err());
    }

    #[test]
    fn perturbation_and_params() {
        let p: Perturbation = "warnaar_sum:3".parse().unwrap();
        assert_eq!((p.identity.as_str(), p.e_q), ("warnaar_sum", 3));
        assert!("warnaar_sum".parse::<Perturbation>().is_err());
        let f: ParamFilter = "m=2".parse().unwrap();
        assert_eq!((f.name.as_str(), f.value), ("m", 2));
        assert!("m=x".parse::<ParamFilter>().is_err());
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from(["qtheta", "verify", "all"]).unwrap();
        assert_eq!(cli.common.order, 30);
        assert_eq!(cli.common.degree_cap, 10);
        assert_eq!(cli.common.output, OutputFormat::Human);
        let Command::Verify(v) = cli.command else { panic!("verify expected") };
        assert_eq!((v.points, v.seed), (3, 0));
        assert!(Cli::try_parse_from(["qtheta", "verify"]).is_err());
        assert!(Cli::try_parse_from(["qtheta", "verify", "all", "--points", "0"]).is_err());
    }
}
