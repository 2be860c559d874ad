//! `hadacode`: verify, transform and analyze power- and Butson-Hadamard matrices.
//!
//! Exit status: 0 on success, 1 when a mathematical check or precondition
//! fails, 2 when the input cannot be read or parsed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use hadacode::bh::{bh_search, BhMatrix, SearchOptions};
use hadacode::codes::{
    analyze, code_from_matrix, gray_expand, min_distance_hamming, min_distance_weighted,
    plotkin_check, AnalyzeOptions, GrayMap,
};
use hadacode::fixtures::{self, MatrixDoc, PhDoc};
use hadacode::gray::{g1, g2, homogeneous_check, prime_power, WeightTable};
use hadacode::laurent::{rational_json, Rational};
use hadacode::ph::{crt_merge, Modulus};
use hadacode::to_canonical_json;

#[derive(Parser)]
#[command(
    name = "hadacode",
    version,
    about = "Exact tools for power- and Butson-Hadamard matrices and their codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a matrix document against its kind's defining property.
    Verify(VerifyArgs),
    /// Apply a property-preserving transform and print the resulting matrix.
    Transform {
        #[command(subcommand)]
        op: TransformOp,
    },
    /// Print the Gray image of an element of Z_{p^k}.
    Gray {
        #[arg(long)]
        map: GrayMap,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        u: u64,
    },
    /// Print a weight table, or its homogeneity report.
    Weights {
        #[arg(long)]
        table: TableName,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        homogeneity: bool,
    },
    /// Minimum row distance of a matrix under Hamming, Gray-image or weighted metrics.
    Distance {
        #[command(flatten)]
        source: Source,
        #[arg(long, conflicts_with = "weight")]
        gray: Option<GrayMap>,
        /// Weight table document {"m": .., "values": [..]}.
        #[arg(long)]
        weight: Option<PathBuf>,
        /// Delete the first coordinate; the first column must be zero.
        #[arg(long)]
        drop_first: bool,
    },
    /// Row distance, bound checks, Gray image and code parameters in one report.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        gray: Option<GrayMap>,
        /// w1, w2, lee, hamming, or a weight table document.
        #[arg(long)]
        weight: Option<String>,
        #[arg(long)]
        plotkin: bool,
    },
    /// Evaluate the Plotkin bound M <= d / (d - gamma n).
    Plotkin {
        #[arg(long = "M")]
        size: u64,
        #[arg(long, value_parser = parse_rational)]
        d: Rational,
        #[arg(long, value_parser = parse_rational)]
        gamma: Rational,
        #[arg(long)]
        length: u64,
    },
    /// Enumerate normalized BH(n, m) matrices with increasing rows.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        limit: Option<usize>,
        /// Lift the size guard on the search space.
        #[arg(long)]
        allow_large: bool,
    },
    /// Inspect the bundled matrix corpus.
    Fixtures {
        #[command(subcommand)]
        op: FixturesOp,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    /// Reject documents of any other kind.
    #[arg(long)]
    kind: Option<Kind>,
    /// Add DELTA to exponent (I, J) before verifying, 0-based: I,J,DELTA.
    #[arg(long, allow_hyphen_values = true)]
    tamper: Option<String>,
    /// Verify a ph matrix over this product of cyclotomic polynomials instead.
    #[arg(long, value_delimiter = ',')]
    cyclotomic: Option<Vec<u64>>,
}

/// One matrix document: a path, `--input PATH` or `--fixture ID`.
#[derive(Args)]
struct Source {
    path: Option<PathBuf>,
    #[arg(long, conflicts_with = "path")]
    input: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["path", "input"])]
    fixture: Option<String>,
}

/// Two matrix documents, each a path or `fixture:ID`.
#[derive(Args)]
struct Pair {
    #[arg(num_args = 2, required = true)]
    inputs: Vec<String>,
}

#[derive(Subcommand)]
enum TransformOp {
    /// Add multiples of the shifting number N to the exponents: a_ij + N t_ij.
    Shift {
        #[command(flatten)]
        source: Source,
        /// JSON integer matrix t.
        #[arg(long)]
        t: PathBuf,
        #[arg(long)]
        check: bool,
    },
    /// Replace x by x^k in the matrix and the modulus.
    Substitute {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        check: bool,
    },
    /// Kronecker product of two ph or two bh matrices.
    Kronecker {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        check: bool,
    },
    /// Merge a matrix over phi_h with one over phi_k into one over phi_h phi_k.
    CrtMerge {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        check: bool,
    },
    /// Make the first row and column zero.
    Normalize {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        check: bool,
    },
    /// Substitute a primitive k-th root of unity, giving a bh matrix.
    Evaluate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand)]
enum FixturesOp {
    /// List bundled fixtures.
    List {
        /// Run each fixture's verifier and report the outcome.
        #[arg(long)]
        verify: bool,
    },
    /// Print one fixture's matrix document.
    Dump { id: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Ph,
    Bh,
    Gh,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableName {
    W1,
    W2,
    Lee,
    Hamming,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational_json::parse(s)
}

enum Failure {
    /// Unreadable or malformed input.
    Input(anyhow::Error),
    /// A precondition or check failed; the value is printed on standard output.
    Math(Value),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn math<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Math(json!({ "error": e.to_string() }))
}

/// Canonical JSON and whether the command succeeded.
struct Output {
    json: String,
    ok: bool,
}

fn emit<T: Serialize>(value: &T) -> Result<Output, Failure> {
    emit_checked(value, true)
}

fn emit_checked<T: Serialize>(value: &T, ok: bool) -> Result<Output, Failure> {
    let json = to_canonical_json(value).map_err(|e| Failure::Input(e.into()))?;
    Ok(Output { json, ok })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

/// Reads a matrix document, bare or wrapped as `{"payload": ..}` like the bundled fixture files.
fn read_doc(path: &Path) -> anyhow::Result<MatrixDoc> {
    let mut v: Value = read_json(path)?;
    if let Some(payload) = v.get_mut("payload") {
        v = payload.take();
    }
    serde_json::from_value(v)
        .with_context(|| format!("{} is not a matrix document", path.display()))
}

fn load_fixture(id: &str) -> anyhow::Result<MatrixDoc> {
    Ok(fixtures::get(id)?.payload)
}

impl Source {
    fn load(&self) -> anyhow::Result<MatrixDoc> {
        match (&self.path, &self.input, &self.fixture) {
            (Some(p), _, _) | (_, Some(p), _) => read_doc(p),
            (_, _, Some(id)) => load_fixture(id),
            _ => bail!("give a matrix document path, --input PATH or --fixture ID"),
        }
    }
}

impl Pair {
    fn load(&self) -> anyhow::Result<(MatrixDoc, MatrixDoc)> {
        let one = |s: &str| match s.strip_prefix("fixture:") {
            Some(id) => load_fixture(id),
            None => read_doc(Path::new(s)),
        };
        Ok((one(&self.inputs[0])?, one(&self.inputs[1])?))
    }
}

fn expect_ph(doc: MatrixDoc) -> anyhow::Result<PhDoc> {
    match doc {
        MatrixDoc::Ph(d) => Ok(d),
        other => Err(anyhow!("expected a ph matrix, got {}", other.kind())),
    }
}

/// The bh matrix of a bh document, or of a gh document over the cyclic group `Z_k`.
fn expect_bh(doc: MatrixDoc) -> anyhow::Result<BhMatrix> {
    match doc {
        MatrixDoc::Bh(m) => Ok(m),
        MatrixDoc::Gh(d) => Ok(BhMatrix::from_exponents_mod(d.k, &d.exponents)?),
        MatrixDoc::Ph(_) => bail!("expected a bh or gh matrix, got ph"),
    }
}

fn parse_tamper(s: &str) -> anyhow::Result<(usize, usize, i64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [i, j, d] = parts.as_slice() else {
        bail!("--tamper expects I,J,DELTA, got {s:?}");
    };
    Ok((i.parse()?, j.parse()?, d.parse()?))
}

fn verify(args: &VerifyArgs) -> Result<Output, Failure> {
    let mut doc = args.source.load()?;
    if let Some(kind) = args.kind {
        let want = match kind {
            Kind::Ph => "ph",
            Kind::Bh => "bh",
            Kind::Gh => "gh",
        };
        if doc.kind() != want {
            return Err(anyhow!("expected a {want} matrix, got {}", doc.kind()).into());
        }
    }
    if let Some(orders) = &args.cyclotomic {
        let MatrixDoc::Ph(d) = &mut doc else {
            return Err(anyhow!("--cyclotomic applies to ph matrices only").into());
        };
        d.modulus = Modulus::CyclotomicProduct(orders.clone());
    }
    if let Some(t) = &args.tamper {
        let (i, j, delta) = parse_tamper(t)?;
        doc = doc.tamper(i, j, delta).map_err(math)?;
    }
    let report = doc.verify().map_err(math)?;
    emit_checked(&report, report.ok())
}

/// Prints `doc`, verifying it first when `check` is set.
fn finish(doc: MatrixDoc, check: bool) -> Result<Output, Failure> {
    if check {
        let report = doc.verify().map_err(math)?;
        if !report.ok() {
            return Err(Failure::Math(json!({
                "error": "transformed matrix fails verification",
                "report": serde_json::to_value(&report).map_err(|e| Failure::Input(e.into()))?,
            })));
        }
    }
    emit(&doc)
}

fn transform(op: &TransformOp) -> Result<Output, Failure> {
    match op {
        TransformOp::Shift { source, t, check } => {
            let d = expect_ph(source.load()?)?;
            let t: Vec<Vec<i64>> = read_json(t)?;
            let matrix = d.matrix.shift(&d.modulus, &t).map_err(math)?;
            finish(
                MatrixDoc::Ph(PhDoc {
                    modulus: d.modulus,
                    matrix,
                }),
                *check,
            )
        }
        TransformOp::Substitute { source, k, check } => {
            let d = expect_ph(source.load()?)?;
            let f = d.modulus.polynomial().map_err(math)?;
            let matrix = d.matrix.substitute(*k).map_err(math)?;
            let modulus = Modulus::Explicit(f.substitute_power(*k));
            finish(MatrixDoc::Ph(PhDoc { modulus, matrix }), *check)
        }
        TransformOp::Kronecker { pair, check } => {
            let doc = match pair.load()? {
                (MatrixDoc::Ph(a), MatrixDoc::Ph(b)) => {
                    if a.modulus != b.modulus {
                        return Err(math("kronecker factors have different moduli"));
                    }
                    MatrixDoc::Ph(PhDoc {
                        matrix: a.matrix.kronecker(&b.matrix),
                        modulus: a.modulus,
                    })
                }
                (MatrixDoc::Bh(a), MatrixDoc::Bh(b)) => {
                    MatrixDoc::Bh(a.kronecker(&b).map_err(math)?)
                }
                (a, b) => {
                    return Err(anyhow!(
                        "kronecker needs two ph or two bh matrices, got {} and {}",
                        a.kind(),
                        b.kind()
                    )
                    .into())
                }
            };
            finish(doc, *check)
        }
        TransformOp::CrtMerge { pair, h, k, check } => {
            let (a, b) = pair.load()?;
            let (a, b) = (expect_ph(a)?, expect_ph(b)?);
            let matrix = crt_merge(&a.matrix, &b.matrix, *h, *k).map_err(math)?;
            let orders = if h == k { vec![*h] } else { vec![*h, *k] };
            let modulus = Modulus::CyclotomicProduct(orders);
            finish(MatrixDoc::Ph(PhDoc { modulus, matrix }), *check)
        }
        TransformOp::Normalize { source, check } => {
            let doc = match source.load()? {
                MatrixDoc::Ph(d) => MatrixDoc::Ph(PhDoc {
                    matrix: d.matrix.normalize(),
                    modulus: d.modulus,
                }),
                MatrixDoc::Bh(m) => MatrixDoc::Bh(m.normalize()),
                MatrixDoc::Gh(_) => {
                    return Err(anyhow!("normalize applies to ph and bh matrices").into())
                }
            };
            finish(doc, *check)
        }
        TransformOp::Evaluate { source, k, check } => {
            let d = expect_ph(source.load()?)?;
            finish(MatrixDoc::Bh(d.matrix.evaluate(*k).map_err(math)?), *check)
        }
    }
}

fn named_table(name: TableName, m: u64) -> Result<WeightTable, Failure> {
    let prime_power = || prime_power(m).ok_or_else(|| math(format!("{m} is not a prime power")));
    match name {
        TableName::W1 => {
            let (p, k) = prime_power()?;
            WeightTable::w1(p, k).map_err(math)
        }
        TableName::W2 => {
            let (p, k) = prime_power()?;
            WeightTable::w2(p, k).map_err(math)
        }
        TableName::Lee => WeightTable::lee(m).map_err(math),
        TableName::Hamming => WeightTable::hamming(m).map_err(math),
    }
}

fn drop_first_column(rows: Vec<Vec<u64>>, width: usize) -> Result<Vec<Vec<u64>>, Failure> {
    if rows.iter().any(|r| r[..width].iter().any(|&v| v != 0)) {
        return Err(math("first column must be zero to delete it"));
    }
    Ok(rows.into_iter().map(|r| r[width..].to_vec()).collect())
}

fn distance(
    source: &Source,
    gray: Option<GrayMap>,
    weight: Option<&Path>,
    drop_first: bool,
) -> Result<Output, Failure> {
    let m = expect_bh(source.load()?)?;
    if let Some(path) = weight {
        let table: WeightTable = read_json(path)?;
        let code = code_from_matrix(&m, drop_first).map_err(math)?;
        return emit(&min_distance_weighted(&code, &table).map_err(math)?);
    }
    let (rows, width) = match gray {
        Some(map) => {
            let rows = gray_expand(&m, map).map_err(math)?;
            let width = rows[0].len() / m.order();
            (rows, width)
        }
        None => (m.exponents().to_vec(), 1),
    };
    let rows = if drop_first {
        drop_first_column(rows, width)?
    } else {
        rows
    };
    emit(&min_distance_hamming(&rows).map_err(math)?)
}

fn analyze_cmd(
    source: &Source,
    gray: Option<GrayMap>,
    weight: Option<&str>,
    plotkin: bool,
) -> Result<Output, Failure> {
    let m = expect_bh(source.load()?)?;
    let weight = match weight {
        None => None,
        Some(name) => Some(match TableName::from_str(name, false) {
            Ok(t) => named_table(t, m.m())?,
            Err(_) => read_json(Path::new(name))?,
        }),
    };
    let opts = AnalyzeOptions {
        gray,
        weight,
        plotkin,
    };
    emit(&analyze(&m, &opts).map_err(math)?)
}

#[derive(Serialize)]
struct ListedFixture {
    id: String,
    kind: String,
    n: usize,
    provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
}

fn fixtures_cmd(op: &FixturesOp) -> Result<Output, Failure> {
    match op {
        FixturesOp::List { verify } => {
            let mut out = Vec::new();
            for id in fixtures::ids() {
                let e = fixtures::get(id).map_err(anyhow::Error::from)?;
                let verified = if *verify {
                    Some(e.payload.verify().map_err(math)?.ok())
                } else {
                    None
                };
                out.push(ListedFixture {
                    n: e.payload.order(),
                    id: e.id,
                    kind: e.kind,
                    provenance: e.provenance,
                    verified,
                });
            }
            let ok = out.iter().all(|f| f.verified != Some(false));
            emit_checked(&out, ok)
        }
        FixturesOp::Dump { id } => emit(&load_fixture(id)?),
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Verify(args) => verify(&args),
        Command::Transform { op } => transform(&op),
        Command::Gray { map, p, k, u } => {
            let image = match map {
                GrayMap::G1 => g1(u, p, k),
                GrayMap::G2 => g2(u, p, k),
            }
            .map_err(math)?;
            emit(&image.digits)
        }
        Command::Weights {
            table,
            m,
            homogeneity,
        } => {
            let w = named_table(table, m)?;
            if homogeneity {
                emit(&homogeneous_check(&w))
            } else {
                emit(&w)
            }
        }
        Command::Distance {
            source,
            gray,
            weight,
            drop_first,
        } => distance(&source, gray, weight.as_deref(), drop_first),
        Command::Analyze {
            source,
            gray,
            weight,
            plotkin,
        } => analyze_cmd(&source, gray, weight.as_deref(), plotkin),
        Command::Plotkin {
            size,
            d,
            gamma,
            length,
        } => emit(&plotkin_check(size, &d, &gamma, length)),
        Command::Search {
            n,
            m,
            limit,
            allow_large,
        } => {
            let opts = SearchOptions {
                limit: limit.unwrap_or(usize::MAX),
                allow_large,
                ..Default::default()
            };
            let found = bh_search(n, m, opts).map_err(math)?;
            emit(&found.into_iter().map(MatrixDoc::Bh).collect::<Vec<_>>())
        }
        Command::Fixtures { op } => fixtures_cmd(&op),
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("HADACODE_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow!("HADACODE_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(out) => {
            println!("{}", out.json);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Math(v)) => {
            println!("{}", to_canonical_json(&v).expect("JSON value serializes"));
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
