//! Command-line options and the resolved run configuration.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heightcount::census::Partition;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

/// Environment variable naming the directory for relative `--out` paths.
pub const OUT_DIR_ENV: &str = "HEIGHTCOUNT_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "heightcount", version, about = "Counting points and fields of bounded height")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree, discriminant, signature, class number, regulator, roots of unity.
    FieldInfo(Opts),
    /// Dedekind zeta value `zeta_K(s)` of a field of degree at most 2.
    Zeta(Opts),
    /// Schanuel constant `S_K(n)`.
    Schanuel(Opts),
    /// Leading constant of the point count for a system of norms.
    MainTerm(Opts),
    /// Partial sum over quadratic fields of `S_K(n)` with a tail bound.
    CeSum(Opts),
    /// Points of `P^n(Q)` of height at most X.
    CountRational(Opts),
    /// Points of `P^n(K)` of height at most X, `K` imaginary quadratic.
    CountField(Opts),
    /// Points of `P^n(K)` generating `K` over `Q`.
    CountPrimitive(Opts),
    /// Quadratic points of `P^1` of height at most X.
    CountQuadraticP1(Opts),
    /// Smallest height of a generator of a quadratic field.
    Delta(Opts),
    /// Number of quadratic fields with `delta <= T`.
    NDelta(Opts),
    /// Number of quadratic fields with `|Delta| <= T`.
    NDisc(Opts),
    /// Exponent inequality at the smallest admissible dimension.
    LemmaCheck(Opts),
    /// Discriminant bracket for `delta` and the `hR` growth scan.
    BoundsCheck(Opts),
    /// Volumes and lattice invariants of a system of norms.
    Volumes(Opts),
    /// Partial sum of the eleven-dimensional constant from supplied quartic fields.
    ExampleD(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct Opts {
    /// `Q`, `Q(i)`, `Q(sqrt(d))`, `d`, or a label from `--invariants`.
    #[arg(long, default_value = "Q", allow_hyphen_values = true)]
    pub field: String,
    /// Invariants file with lines `label,degree,disc,r,s,h,R,w`.
    #[arg(long)]
    pub invariants: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub e: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Argument of the zeta function.
    #[arg(long, default_value_t = 2)]
    pub s: u32,
    /// Comma-separated exact rationals `p` or `p/q`.
    #[arg(long, value_delimiter = ',', value_parser = parse_exact)]
    pub grid: Vec<BigRational>,
    /// `standard`, `l2`, or a path to a JSON system file.
    #[arg(long, default_value = "standard")]
    pub system: String,
    #[arg(long, default_value_t = 1e-12, value_parser = parse_tol)]
    pub tol: f64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "contiguous", value_parser = parse_partition)]
    pub partition: Partition,
    /// Height cap for the `delta` search, an exact rational.
    #[arg(long, value_parser = parse_exact)]
    pub cap: Option<BigRational>,
    /// Discriminant bound of a scan.
    #[arg(long)]
    pub scan: Option<u64>,
    /// Discriminant bound for certifying the `hR` growth constant.
    #[arg(long, default_value_t = 100_000)]
    pub certify: u64,
    /// Exponent slack of the `hR` growth scan.
    #[arg(long, default_value_t = 0.1, value_parser = parse_tol)]
    pub epsilon: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Validate the inputs and print the resolved configuration.
    #[arg(long)]
    pub dry_run: bool,
}

fn parse_exact(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    if t.contains(['.', 'e', 'E']) {
        return Err(format!("'{t}' is not an exact rational; write it as p/q"));
    }
    let q = BigRational::from_str(t).map_err(|_| format!("'{t}' is not an exact rational p/q"))?;
    if q.is_negative() {
        return Err(format!("'{t}' is negative"));
    }
    Ok(q)
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("'{s}' is not a positive number")),
    }
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse::<Partition>().map_err(|e| e.to_string())
}

/// Everything a run depends on. Thresholds are kept as exact rational
/// strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub field: String,
    pub invariants: Option<PathBuf>,
    pub n: usize,
    pub e: u32,
    pub m: u32,
    pub s: u32,
    pub grid: Vec<String>,
    pub system: String,
    pub tol: f64,
    pub workers: usize,
    pub seed: u64,
    pub partition: Partition,
    pub cap: Option<String>,
    pub scan: Option<u64>,
    pub certify: u64,
    pub epsilon: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_opts(subcommand: &str, o: &Opts) -> RunConfig {
        let out = o.out.as_ref().map(|p| match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) if p.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(p),
            _ => p.clone(),
        });
        RunConfig {
            subcommand: subcommand.to_string(),
            field: o.field.clone(),
            invariants: o.invariants.clone(),
            n: o.n,
            e: o.e,
            m: o.m,
            s: o.s,
            grid: o.grid.iter().map(|x| x.to_string()).collect(),
            system: o.system.clone(),
            tol: o.tol,
            workers: o.workers.max(1),
            seed: o.seed,
            partition: o.partition,
            cap: o.cap.as_ref().map(|c| c.to_string()),
            scan: o.scan,
            certify: o.certify,
            epsilon: o.epsilon,
            out,
            format: o.format,
        }
    }

    pub fn grid_values(&self) -> Vec<BigRational> {
        self.grid.iter().map(|s| BigRational::from_str(s).expect("normalized")).collect()
    }

    pub fn cap_value(&self) -> Option<BigRational> {
        self.cap.as_ref().map(|s| BigRational::from_str(s).expect("normalized"))
    }
}

impl Command {
    pub fn opts(&self) -> &Opts {
        match self {
            Command::FieldInfo(o)
            | Command::Zeta(o)
            | Command::Schanuel(o)
            | Command::MainTerm(o)
            | Command::CeSum(o)
            | Command::CountRational(o)
            | Command::CountField(o)
            | Command::CountPrimitive(o)
            | Command::CountQuadraticP1(o)
            | Command::Delta(o)
            | Command::NDelta(o)
            | Command::NDisc(o)
            | Command::LemmaCheck(o)
            | Command::BoundsCheck(o)
            | Command::Volumes(o)
            | Command::ExampleD(o) => o,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_parser() {
        assert_eq!(parse_exact("3/6").unwrap().to_string(), "1/2");
        assert_eq!(parse_exact("1000").unwrap().to_string(), "1000");
        assert!(parse_exact("1.5").is_err());
        assert!(parse_exact("1e3").is_err());
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("-2").is_err());
    }

    #[test]
    fn tol_parser() {
        assert_eq!(parse_tol("1e-9").unwrap(), 1e-9);
        assert!(parse_tol("0").is_err());
        assert!(parse_tol("nan").is_err());
    }

    #[test]
    fn config_round_trips() {
        let cli = Cli::try_parse_from([
            "heightcount",
            "count-field",
            "--field",
            "-7",
            "--grid",
            "2/4,3,10",
            "--workers",
            "4",
            "--partition",
            "interleaved",
            "--tol",
            "1e-9",
            "--cap",
            "7/3",
        ])
        .unwrap();
        let cfg = RunConfig::from_opts("count-field", cli.command.opts());
        assert_eq!(cfg.grid, ["1/2", "3", "10"]);
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
