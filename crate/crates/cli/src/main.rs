use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use suzuki_cd::numtheory::{gcd_table, write_gcd_csv};
use suzuki_cd::verify::{self, SweepReport};
use suzuki_cd::{
    cd_closed_form, cd_oracle, orbit_oracle, within_budget, DegreeMultiset, DegreeReport, Error,
    ExtensionSpec, Family, SuzukiParams, ORACLE_MAX_F,
};

#[derive(Parser)]
#[command(
    name = "suzuki-cd",
    version,
    about = "Character degrees of Suzuki groups and their automorphic extensions"
)]
struct Cli {
    /// Worker threads for sweeps and orbit enumeration.
    #[arg(long, global = true, env = "SUZUKI_CD_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree set of S⟨φ^((2f+1)/d)⟩, the extension of index d.
    Cd(CdArgs),
    /// Run a verification sweep against the independent oracles.
    Verify(VerifyArgs),
    /// Count the labels of one family by exact stabilizer exponent.
    Orbits(OrbitsArgs),
    /// Closed-form gcds next to Euclid's, as CSV.
    GcdTable(GcdTableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, conflicts_with = "format")]
    json: bool,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl OutputArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Clone, Copy)]
enum Index {
    All,
    One(u32),
}

fn parse_index(s: &str) -> Result<Index, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Index::All);
    }
    s.parse()
        .map(Index::One)
        .map_err(|_| format!("expected a positive integer or `all`, got `{s}`"))
}

#[derive(Args)]
struct CdArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    f: u32,
    /// Index `d` of S in G, a divisor of 2f+1, or `all`.
    #[arg(long, value_parser = parse_index, default_value = "1")]
    d: Index,
    /// Also report multiplicities from the orbit oracle.
    #[arg(long)]
    multiplicities: bool,
    /// Check the closed form against the orbit oracle. Defaults on for f <= 4.
    #[arg(long, overrides_with = "no_checked")]
    checked: bool,
    #[arg(long, overrides_with = "checked")]
    no_checked: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    /// gcd closed forms and coincidences against Euclid.
    #[value(name = "lemmas")]
    GcdIdentities,
    /// Stabilizer witnesses against exhaustive orbits.
    Stabilizers,
    /// Closed-form degree sets against the orbit oracle.
    #[value(name = "theorem-a")]
    DegreeSets,
    /// Lower bound on the number of distinct degrees.
    #[value(name = "corollary-b")]
    DegreeCountBound,
    /// Four-term root-of-unity identity against its congruence criterion.
    Cyclotomic,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    scope: Scope,
    /// Largest f swept. Defaults to 64 for lemmas, 16 for corollary-b, 8 otherwise.
    #[arg(long)]
    f_max: Option<u32>,
    /// Largest cyclotomic order swept.
    #[arg(long, default_value_t = 200)]
    n_max: u64,
}

#[derive(Args)]
struct OrbitsArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    f: u32,
    #[arg(long)]
    family: Family,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone)]
struct FRange(Vec<u32>);

/// `N`, `A..B` or `A..=B`, both inclusive. `B < A` is the empty range.
fn parse_f_range(s: &str) -> Result<FRange, String> {
    let bad = || format!("expected N or A..B, got `{s}`");
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = num(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Ok(FRange(Vec::new()));
    }
    if lo == 0 {
        return Err("f must be at least 1".into());
    }
    Ok(FRange((lo..=hi).collect()))
}

#[derive(Args)]
struct GcdTableArgs {
    #[arg(long, value_parser = parse_f_range)]
    f: FRange,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Verification(String),
    Usage(String),
    Budget(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Budget(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::Inconsistent(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit(text: &str, path: Option<&PathBuf>) -> Outcome {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn budget_error(f: u32) -> Failure {
    Failure::from(Error::BudgetExceeded {
        f,
        max: ORACLE_MAX_F,
    })
}

fn render_table(reports: &[DegreeReport]) -> String {
    let mut s = String::new();
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "f = {}, d = {}, q^2 = {}, |cd(G)| = {}",
            r.f,
            r.d,
            r.q2,
            r.degrees.len()
        );
        let with_mult = r.degrees.iter().any(|e| e.multiplicity.is_some());
        let width = r
            .degrees
            .iter()
            .map(|e| e.degree.len())
            .max()
            .unwrap_or(0)
            .max(6);
        if with_mult {
            let _ = writeln!(s, "{:>width$}  multiplicity", "degree");
        } else {
            let _ = writeln!(s, "{:>width$}", "degree");
        }
        for e in &r.degrees {
            match e.multiplicity {
                Some(m) if with_mult => {
                    let _ = writeln!(s, "{:>width$}  {m}", e.degree);
                }
                _ => {
                    let _ = writeln!(s, "{:>width$}", e.degree);
                }
            }
        }
        let _ = writeln!(s, "verified against oracle: {}", r.verified_against_oracle);
    }
    s
}

fn render_csv(reports: &[DegreeReport]) -> String {
    let mut s = String::from("f,d,degree,multiplicity\n");
    for r in reports {
        for e in &r.degrees {
            let m = e.multiplicity.map(|m| m.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{},{},{},{m}", r.f, r.d, e.degree);
        }
    }
    s
}

fn cmd_cd(args: &CdArgs) -> Outcome {
    let f = args.f;
    let checked = if args.checked {
        true
    } else if args.no_checked {
        false
    } else {
        f <= 4
    };
    if (checked || args.multiplicities) && !within_budget(f) {
        return Err(budget_error(f));
    }
    let specs = match args.d {
        Index::All => ExtensionSpec::all(f)?,
        Index::One(d) => vec![ExtensionSpec::new(f, d)?],
    };
    let mut reports = Vec::with_capacity(specs.len());
    for spec in &specs {
        let oracle: Option<DegreeMultiset> = if checked || args.multiplicities {
            Some(cd_oracle(spec)?)
        } else {
            None
        };
        if let Some(o) = &oracle {
            let closed = cd_closed_form(spec);
            let found = o.degrees();
            if closed != found {
                let extra: Vec<String> = found.difference(&closed).map(|x| x.to_string()).collect();
                let missing: Vec<String> =
                    closed.difference(&found).map(|x| x.to_string()).collect();
                return Err(Failure::Verification(format!(
                    "f={f} d={}: oracle-only degrees {extra:?}, closed-form-only degrees {missing:?}",
                    spec.d()
                )));
            }
        }
        let mut report = DegreeReport::new(spec, oracle.as_ref());
        if !args.multiplicities {
            for e in &mut report.degrees {
                e.multiplicity = None;
            }
        }
        reports.push(report);
    }
    let text = match args.out.format() {
        Format::Table => render_table(&reports),
        Format::Csv => render_csv(&reports),
        Format::Json => {
            let mut s = match args.d {
                Index::All => {
                    serde_json::to_string_pretty(&reports).expect("plain data serializes")
                }
                Index::One(_) => reports[0].to_json(),
            };
            s.push('\n');
            s
        }
    };
    emit(&text, args.out.output.as_ref())
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let default_f = match args.scope {
        Scope::GcdIdentities => 64,
        Scope::DegreeCountBound => 16,
        _ => 8,
    };
    let f_max = args.f_max.unwrap_or(default_f);
    let report: SweepReport = match args.scope {
        Scope::GcdIdentities => verify::verify_gcd_identities(f_max)?,
        Scope::Stabilizers => verify::verify_stabilizers(f_max)?,
        Scope::DegreeSets => verify::verify_degree_sets(f_max)?,
        Scope::DegreeCountBound => verify::verify_degree_count_bound(f_max)?,
        Scope::Cyclotomic => verify::verify_cyclotomic(args.n_max),
    };
    let bound = match args.scope {
        Scope::Cyclotomic => format!("n <= {}", args.n_max),
        _ => format!("f <= {f_max}"),
    };
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    let text = format!(
        "{} ({bound}): {} checks, {} failures: {verdict}\n",
        report.name,
        report.checks,
        report.failures.len()
    );
    emit(&text, None)?;
    match report.first_failure() {
        None => Ok(()),
        Some(first) => Err(Failure::Verification(format!("counterexample: {first}"))),
    }
}

fn cmd_orbits(args: &OrbitsArgs) -> Outcome {
    let p = SuzukiParams::new(args.f)?;
    let report = orbit_oracle(&p, args.family)?;
    let text = match args.out.format() {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("plain data serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("stabilizer_exponent,count\n");
            for o in &report.orbits {
                let _ = writeln!(s, "{},{}", o.stabilizer_exponent, o.count);
            }
            s
        }
        Format::Table => {
            let mut s = format!(
                "f = {}, family {}, {} labels\n",
                report.f,
                report.family,
                report.total()
            );
            s.push_str("exponent  count\n");
            for o in &report.orbits {
                let _ = writeln!(s, "{:>8}  {}", o.stabilizer_exponent, o.count);
            }
            s
        }
    };
    emit(&text, args.out.output.as_ref())
}

fn cmd_gcd_table(args: &GcdTableArgs) -> Outcome {
    let rows = gcd_table(args.f.0.iter().copied())?;
    let mut buf = Vec::new();
    write_gcd_csv(&mut buf, &rows).map_err(|e| Failure::Io(e.to_string()))?;
    let text = String::from_utf8(buf).expect("csv output is UTF-8");
    emit(&text, args.output.as_ref())?;
    match rows.iter().find(|r| !r.matches) {
        None => Ok(()),
        Some(r) => Err(Failure::Verification(format!(
            "counterexample: f={} n={} {} sign {}: closed form {} vs Euclid {}",
            r.f, r.n, r.torus, r.sign, r.closed_form, r.euclid
        ))),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Cd(a) => cmd_cd(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Orbits(a) => cmd_orbits(a),
        Command::GcdTable(a) => cmd_gcd_table(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("global pool is configured once");
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
