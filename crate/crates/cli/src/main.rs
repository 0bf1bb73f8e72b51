mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::{Metadata, Report};

#[derive(Parser, Serialize, Debug)]
#[command(name = "sumprod", version, about = "Exact sum-product quantities and verification reports over prime fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "SUMPROD_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Leave the timestamp out of the report so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Prime used by set specs that omit `p=`, and by `verify` in place of its default primes.
    #[arg(long, global = true)]
    pub p: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum Cmd {
    /// Additive or multiplicative energy E(A,B).
    Energy {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: Option<String>,
        #[arg(long, value_enum, default_value = "add")]
        op: OpArg,
    },
    /// T⁺_k(A): solutions of a₁+⋯+a_k = a′₁+⋯+a′_k.
    Tk {
        #[arg(long)]
        set: String,
        #[arg(long)]
        k: u32,
    },
    /// E⁺_k(A) = Σ r_{A−A}(x)^k.
    Ek {
        #[arg(long)]
        set: String,
        #[arg(long)]
        k: u32,
    },
    /// D×_k(A): products of k differences.
    Dtimes {
        #[arg(long)]
        set: String,
        #[arg(long)]
        k: u32,
        /// Drop the zero product instead of counting it.
        #[arg(long)]
        exclude_zero: bool,
    },
    /// D′_k(A): sums of k products.
    Dprime {
        #[arg(long)]
        set: String,
        #[arg(long)]
        k: u32,
    },
    /// N(A,B,C) = #{a(b−c) = a′(b′−c′)}, or N′(A) with --prime.
    Nq {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: Option<String>,
        #[arg(long = "C")]
        c: Option<String>,
        #[arg(long)]
        prime: bool,
    },
    /// Collinear triples and quadruples in A×A with their error ratios.
    Collinear {
        #[arg(long)]
        set: String,
    },
    /// Collinear quadruples Q(A,B,C,D) and the q-table identity.
    Quadruples {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: Option<String>,
        #[arg(long = "C")]
        c: Option<String>,
        #[arg(long = "D")]
        d: Option<String>,
    },
    /// Point-line and point-plane incidences.
    Incidence {
        #[command(subcommand)]
        which: IncidenceCmd,
    },
    /// Point-plane design of PG(3,q): Gram identity and spectral bound on random weights.
    Design {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Exponential sums.
    Expsum {
        #[command(subcommand)]
        which: ExpsumCmd,
    },
    /// Saving exponent of the multilinear bounds.
    BoundExp {
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 3)]
        r: u32,
        #[arg(long, value_enum, default_value = "three-set")]
        variant: VariantArg,
    },
    /// SL₂(F_p) statistics.
    Sl2 {
        #[command(subcommand)]
        which: Sl2Cmd,
    },
    /// #{(a₁,a₂) : 1/a₁ − 1/a₂ = λ}.
    InverseDiff {
        #[arg(long = "A1")]
        a1: String,
        #[arg(long = "A2")]
        a2: String,
        #[arg(long)]
        lambda: u64,
        /// Also report the energy of 1/(A + B).
        #[arg(long = "B")]
        b: Option<String>,
    },
    /// Collisions and image of (a,b) ↦ p₁(b) + 1/(a + p₂(b)).
    PolyShift {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        /// Coefficients c0,c1,… of p₁.
        #[arg(long)]
        p1: String,
        #[arg(long)]
        p2: String,
    },
    /// Image of (a + b₁)/(ab₂ + b₃) in P¹.
    Gl2Image {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B1")]
        b1: String,
        #[arg(long = "B2")]
        b2: String,
        #[arg(long = "B3")]
        b3: String,
    },
    /// Split A into an additively structured part B and a remainder C.
    Decompose {
        #[arg(long)]
        set: String,
        /// Threshold parameter, an integer or a fraction such as 7/2.
        #[arg(long, default_value = "4")]
        m: String,
        /// Set paired with C in the multiplicative energy; defaults to A.
        #[arg(long = "X")]
        x: Option<String>,
    },
    /// Run a verification suite: identities, oracle, design, inequalities, qdesk, flatten, escape, cf, multilinear, decompose or all.
    Verify {
        suite: String,
        /// Reduced instance counts.
        #[arg(long)]
        small: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OpArg {
    Add,
    Mul,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    ThreeSet,
    FourSet,
    KFree,
}

#[derive(Subcommand, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum IncidenceCmd {
    /// Random lines against the grid A×B.
    Lines {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Random points and planes in F_p³.
    Planes {
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 100)]
        planes: usize,
    },
}

#[derive(Subcommand, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum ExpsumCmd {
    /// Σ_{x∈X,y∈Y,z∈Z} e(xyz).
    Tri {
        #[arg(long = "X")]
        x: String,
        #[arg(long = "Y")]
        y: String,
        #[arg(long = "Z")]
        z: String,
    },
    /// Σ e(a₁⋯a_r) over 3 to 5 sets.
    Multi {
        #[arg(long = "set", required = true, num_args = 1)]
        sets: Vec<String>,
    },
    /// Sums with shifted inverses or rational functions, weighted by the indicators of F and G.
    Special {
        #[arg(long, value_enum)]
        kind: SpecialArg,
        #[arg(long = "F")]
        f: String,
        #[arg(long = "G")]
        g: String,
        #[arg(long = "B")]
        b: String,
        /// Rational function `c0,c1,…` or `n0,n1,…/d0,d1,…`.
        #[arg(long)]
        r1: Option<String>,
        #[arg(long)]
        r2: Option<String>,
        /// Order of the multiplicative character.
        #[arg(long, default_value_t = 2)]
        order: u64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialArg {
    InvShiftE,
    InvShiftChi,
    RationalE,
    RationalChi,
}

#[derive(Subcommand, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum Sl2Cmd {
    /// Profile e_k = ‖μ^{*2^k}‖² − 1/|SL₂| of a measure.
    Flatten {
        #[arg(long, value_enum, default_value = "random")]
        measure: MeasureArg,
        /// Number of random generators for the random measure (inverses are added).
        #[arg(long, default_value_t = 2)]
        gens: usize,
        #[arg(long, default_value_t = 6)]
        k_max: u32,
    },
    /// |AAA|/|A| for a random set of matrices.
    Tripling {
        #[arg(long)]
        size: usize,
    },
    /// Distribution of continued fractions [a₁,…,a_k] over P¹.
    Cf {
        #[arg(long)]
        set: String,
        #[arg(long)]
        k: u32,
    },
    /// Σ_{s∈S} Σ_a f₁(a) f₂(sa) for a matrix family and indicator weights.
    Count {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "F1")]
        f1: String,
        #[arg(long = "F2")]
        f2: String,
    },
    /// Largest intersections of a matrix family with Borel and dihedral cosets.
    Escape {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Σ (F*f)φ ≤ 2p‖F‖‖φ‖‖f‖ on random data, or the top singular value by power iteration.
    Frobenius {
        #[arg(long, value_enum, default_value = "inequality")]
        mode: ModeArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureArg {
    Haar,
    Identity,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Inequality,
    Power,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    S,
    Sprime,
    Srational,
    Gl2,
}

#[derive(Args, Serialize, Debug)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Parameter set for sprime and srational.
    #[arg(long = "B")]
    pub b: Option<String>,
    #[arg(long = "B1")]
    pub b1: Option<String>,
    #[arg(long = "B2")]
    pub b2: Option<String>,
    #[arg(long = "B3")]
    pub b3: Option<String>,
    #[arg(long)]
    pub r1: Option<String>,
    #[arg(long)]
    pub r2: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let rows = match commands::run(&cli) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let timestamp = (!cli.no_timestamp).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
    let report = Report {
        metadata: Metadata {
            version: env!("CARGO_PKG_VERSION"),
            prng: sumprod::PRNG_ID,
            config: serde_json::to_value(&cli).unwrap_or(serde_json::Value::Null),
            timestamp,
        },
        rows,
    };
    let bytes = match cli.format {
        Format::Csv => output::csv_bytes(&report),
        Format::Json => output::json_bytes(&report),
    };
    if let Err(e) = bytes.and_then(|b| output::emit(&b, cli.out.as_deref())) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
