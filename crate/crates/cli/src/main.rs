mod files;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cellcov_core::covers::{
    build_prop_cc10, certify_cor_cc6, certify_lemma_cc7, certify_lemma_cc9, decide_cellular, demo_theorem1,
    report_lemma_cc8, rigid_group, CC10Config, Certificate, CoverInstance, Status,
};
use cellcov_core::exactlin::{fmt_rational, Matrix, PrimeSet};
use cellcov_core::format::{matrix_form, vector_form, GroupFile, LocalForm};
use cellcov_core::freekernel::{separable_summand, trace_prop_bb4, FreeGroupWithBasis};
use cellcov_core::homs::{end_group, hom_group, scalar_ring_recognize, HomGroup};
use cellcov_core::oracle::{brute_homs, brute_member, cross_check, hom_slice, SearchBounds};
use cellcov_core::{Error, LocalizedGroup};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use files::{parse_config_file, parse_group_file, parse_vector, parse_vectors, ParsedGroup};
use report::Report;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Schema(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Schema(_) => 2,
            CliError::Core(e) => match e {
                Error::Input(_) | Error::Purity(_) | Error::NotFiniteType(_) | Error::Surjectivity(_) => 2,
                Error::Cover(_) => 1,
                Error::Construction(_) | Error::Internal(_) => 3,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Schema(m) => write!(f, "schema error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "cellcov", version, about = "Exact computations with torsion-free abelian groups and cellular covers")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to DIR/<command>.json.
    #[arg(long, global = true, value_name = "DIR")]
    report_dir: Option<PathBuf>,
    /// Compare against bounded brute force where available.
    #[arg(long, global = true)]
    cross_check: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarize a group.
    Info { group: PathBuf },
    /// Test membership of a vector.
    Member {
        group: PathBuf,
        #[arg(long)]
        vector: String,
    },
    /// Compute Hom(A, B).
    Hom { domain: PathBuf, codomain: PathBuf },
    /// Compute End(A) and recognize scalar rings.
    End { group: PathBuf },
    /// The p-divisible part of a group.
    Divpart {
        group: PathBuf,
        #[arg(long)]
        prime: u64,
    },
    /// Adjoin all x/q^i to a group.
    Adjoin {
        group: PathBuf,
        #[arg(long)]
        vector: String,
        #[arg(long)]
        prime: u64,
    },
    /// Quotient by a pure subgroup.
    Quotient {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Decide whether G -> G/K is a cellular cover.
    CoverDecide {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Check the sufficient conditions of lemma cc7.
    CoverCc7 {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Check the conditions of lemma cc9.
    CoverCc9 {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        mhat: PathBuf,
        /// Primes R with End(K) = Z[1/R], comma separated.
        #[arg(long, default_value = "")]
        primes: String,
    },
    /// Certify corollary cc6 for (L, x_L).
    Cc6 {
        group: PathBuf,
        #[arg(long)]
        vector: String,
        /// q_L,q_K,q
        #[arg(long, default_value = "2,3,5")]
        primes: String,
    },
    /// Report lemma cc8 for (L, x_L).
    Cc8 {
        group: PathBuf,
        #[arg(long)]
        vector: String,
        /// q_L,q_K,q
        #[arg(long, default_value = "2,3,5")]
        primes: String,
    },
    /// Build the cover of proposition cc10.
    BuildCc10 {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Kernel rank, overriding the config.
        #[arg(short = 'k', long)]
        kernel_rank: Option<usize>,
        /// Marked element of K, overriding the config.
        #[arg(long)]
        x_k: Option<String>,
    },
    /// Run the construction for kernel ranks 1..=N and compare the quotients.
    DemoTheorem1 {
        #[arg(short = 'k', long, default_value_t = 3)]
        k_max: usize,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Split Z^n (or the span of --basis) along the support of generators.
    FkSummand {
        /// Rank n of K = Z^n when no basis is given.
        #[arg(long)]
        rank: Option<usize>,
        /// Basis columns separated by ';'.
        #[arg(long)]
        basis: Option<String>,
        /// Generators of K1 separated by ';'.
        #[arg(long, default_value = "")]
        gens: String,
    },
    /// Trace the decomposition argument for a cover with free kernel.
    FkTrace {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Build and verify a rigid group.
    Rigid {
        #[arg(short = 'k', long)]
        rank: usize,
        /// k+1 distinct primes, the last one on e_1 + ... + e_k.
        #[arg(long)]
        spine: String,
        #[arg(long, default_value = "")]
        localize: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Info { .. } => "info",
            Command::Member { .. } => "member",
            Command::Hom { .. } => "hom",
            Command::End { .. } => "end",
            Command::Divpart { .. } => "divpart",
            Command::Adjoin { .. } => "adjoin",
            Command::Quotient { .. } => "quotient",
            Command::CoverDecide { .. } => "cover-decide",
            Command::CoverCc7 { .. } => "cover-cc7",
            Command::CoverCc9 { .. } => "cover-cc9",
            Command::Cc6 { .. } => "cc6",
            Command::Cc8 { .. } => "cc8",
            Command::BuildCc10 { .. } => "build-cc10",
            Command::DemoTheorem1 { .. } => "demo-theorem1",
            Command::FkSummand { .. } => "fk-summand",
            Command::FkTrace { .. } => "fk-trace",
            Command::Rigid { .. } => "rigid",
        }
    }
}

/// A group as a re-parseable group file.
fn group_json(g: &LocalizedGroup) -> Value {
    serde_json::to_value(GroupFile::from_group(g)).expect("groups serialize")
}

fn matrix_json(m: &Matrix) -> Value {
    serde_json::to_value(matrix_form(m)).expect("matrices serialize")
}

fn vector_text(v: &[cellcov_core::Rational]) -> String {
    v.iter().map(fmt_rational).collect::<Vec<_>>().join(",")
}

fn parse_primes(text: &str) -> CliResult<Vec<u64>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let p: u64 = s.trim().parse().map_err(|_| CliError::Core(Error::Input(format!("malformed prime {s:?}"))))?;
            if !cellcov_core::exactlin::is_prime(p) {
                return Err(CliError::Core(Error::Input(format!("{p} is not prime"))));
            }
            Ok(p)
        })
        .collect()
}

fn three_primes(text: &str) -> CliResult<(u64, u64, u64)> {
    match parse_primes(text)?.as_slice() {
        &[a, b, c] => Ok((a, b, c)),
        _ => Err(CliError::Core(Error::Input("expected three primes q_L,q_K,q".into()))),
    }
}

fn load(report: &mut Report, path: &Path, role: &str) -> CliResult<ParsedGroup> {
    let parsed = parse_group_file(path, role)?;
    report.inputs.push(parsed.record.clone());
    Ok(parsed)
}

fn certify(report: &mut Report, cert: Certificate) {
    report.verdict = cert.verdict;
    report.certificate = Some(cert);
}

fn hom_json(h: &HomGroup) -> Value {
    let gens: Vec<Value> = h
        .generators()
        .iter()
        .map(|g| json!({ "matrix": matrix_json(&g.matrix), "inverted_primes": g.inverted_primes }))
        .collect();
    json!({
        "rank": h.rank(),
        "matrix_shape": [h.matrix_rows(), h.matrix_cols()],
        "carrier": LocalForm::from_group(h.carrier()),
        "generators": gens,
    })
}

/// Bounded brute-force comparison of a hom carrier, skipped when the matrices are too large.
fn hom_cross_check(h: &HomGroup, domain: &ParsedGroup) -> CliResult<Value> {
    let (m, n) = (h.matrix_rows(), h.matrix_cols());
    if m * n > 4 {
        return Ok(json!({ "skipped": format!("{m}x{n} matrices exceed the enumeration budget") }));
    }
    let scheme = match &domain.scheme {
        Some(s) => s.clone(),
        None => h.domain().generators()?,
    };
    let primes: PrimeSet = h.domain().exceptional_primes().union(&h.codomain().exceptional_primes()).copied().collect();
    let bounds = SearchBounds::new(2, 1, primes).with_depth(8);
    let primary = hom_slice(h.carrier(), m, n, &bounds)?;
    let oracle = brute_homs(&scheme, h.codomain(), &bounds)?;
    let report = cross_check(&primary, &oracle);
    Ok(json!({
        "agree": report.agree,
        "bounds": bounds,
        "slice_size": primary.len(),
        "only_primary": report.only_primary.iter().map(matrix_json).collect::<Vec<_>>(),
        "only_oracle": report.only_oracle.iter().map(matrix_json).collect::<Vec<_>>(),
    }))
}

fn apply_cross_check(report: &mut Report, value: Value) {
    if value.get("agree") == Some(&Value::Bool(false)) {
        report.verdict = Status::Fail;
    }
    if let Value::Object(map) = &mut report.result {
        map.insert("cross_check".into(), value);
    }
}

fn load_config(report: &mut Report, path: &Option<PathBuf>) -> CliResult<CC10Config> {
    match path {
        Some(p) => {
            let (cfg, record) = parse_config_file(p)?;
            report.inputs.push(record);
            Ok(cfg)
        }
        None => Ok(CC10Config::default()),
    }
}

fn run(cli: &Cli) -> CliResult<Report> {
    let mut report = Report::new(cli.command.name());
    match &cli.command {
        Command::Info { group } => {
            let g = load(&mut report, group, "group")?.group;
            let div = g.divisibility_report(&g.exceptional_primes())?;
            let div: Vec<Value> = div
                .iter()
                .map(|d| json!({ "prime": d.prime, "is_divisible": d.is_divisible, "is_reduced": d.is_reduced, "divisible_part_rank": d.divisible_part_rank }))
                .collect();
            report.result = json!({
                "ambient_rank": g.ambient_rank(),
                "rank": g.rank(),
                "exceptional_primes": g.exceptional_primes(),
                "group": group_json(&g),
                "divisibility": div,
                "generators": GroupFile::from_scheme(&g.generators()?),
            });
        }
        Command::Member { group, vector } => {
            let parsed = load(&mut report, group, "group")?;
            let v = parse_vector(vector)?;
            let member = parsed.group.member(&v)?;
            report.verdict = Status::from_bool(member);
            report.result = json!({ "vector": vector_form(&v), "member": member });
            if cli.cross_check {
                let scheme = match &parsed.scheme {
                    Some(s) => s.clone(),
                    None => parsed.group.generators()?,
                };
                let bounds = SearchBounds { primes: scheme.support(), ..SearchBounds::default() };
                let found = brute_member(&scheme, &v, &bounds)?;
                // the search is one-sided: only a find contradicting `false` is a disagreement
                apply_cross_check(&mut report, json!({ "agree": member || !found, "oracle_found": found, "bounds": bounds }));
            }
        }
        Command::Hom { domain, codomain } => {
            let a = load(&mut report, domain, "domain")?;
            let b = load(&mut report, codomain, "codomain")?;
            let h = hom_group(&a.group, &b.group)?;
            report.result = hom_json(&h);
            if cli.cross_check {
                let c = hom_cross_check(&h, &a)?;
                apply_cross_check(&mut report, c);
            }
        }
        Command::End { group } => {
            let a = load(&mut report, group, "group")?;
            let e = end_group(&a.group)?;
            let ring = scalar_ring_recognize(&e)?;
            report.result = hom_json(&e);
            if let Value::Object(map) = &mut report.result {
                map.insert("scalar".into(), json!(ring.scalar));
                map.insert("scalar_primes".into(), json!(ring.primes));
            }
            if cli.cross_check {
                let c = hom_cross_check(&e, &a)?;
                apply_cross_check(&mut report, c);
            }
        }
        Command::Divpart { group, prime } => {
            let g = load(&mut report, group, "group")?.group;
            let d = g.divisible_part(*prime)?;
            report.result = json!({ "prime": prime, "divisible_part": group_json(&d) });
        }
        Command::Adjoin { group, vector, prime } => {
            let g = load(&mut report, group, "group")?.group;
            let x = parse_vector(vector)?;
            let a = g.adjoin_localized_line(&x, *prime)?;
            report.result = json!({ "pure": a.pure, "group": group_json(&a.group) });
            if !a.pure {
                report.result["warning"] = json!(format!("x is divisible by {prime} in the group"));
            }
        }
        Command::Quotient { group, kernel } => {
            let g = load(&mut report, group, "group")?.group;
            let k = load(&mut report, kernel, "kernel")?.group;
            let (m, p) = g.quotient_by_pure(&k)?;
            report.result = json!({ "quotient": group_json(&m), "projection": matrix_json(&p) });
        }
        Command::CoverDecide { group, kernel } => {
            let g = load(&mut report, group, "group")?.group;
            let k = load(&mut report, kernel, "kernel")?.group;
            let (cellular, cert) = decide_cellular(&g, &k)?;
            report.result = json!({ "cellular": cellular });
            certify(&mut report, cert);
        }
        Command::CoverCc7 { group, kernel } => {
            let g = load(&mut report, group, "group")?.group;
            let k = load(&mut report, kernel, "kernel")?.group;
            certify(&mut report, certify_lemma_cc7(&g, &k)?);
        }
        Command::CoverCc9 { group, kernel, mhat, primes } => {
            let g = load(&mut report, group, "group")?.group;
            let k = load(&mut report, kernel, "kernel")?.group;
            let mh = load(&mut report, mhat, "mhat")?.group;
            let r: PrimeSet = parse_primes(primes)?.into_iter().collect();
            certify(&mut report, certify_lemma_cc9(&g, &k, &mh, &r)?);
        }
        Command::Cc6 { group, vector, primes } => {
            let l = load(&mut report, group, "group")?.group;
            let x = parse_vector(vector)?;
            let (ql, qk, q) = three_primes(primes)?;
            certify(&mut report, certify_cor_cc6(&l, &x, ql, qk, q)?);
        }
        Command::Cc8 { group, vector, primes } => {
            let l = load(&mut report, group, "group")?.group;
            let x = parse_vector(vector)?;
            let (ql, qk, q) = three_primes(primes)?;
            certify(&mut report, report_lemma_cc8(&l, &x, ql, qk, q)?);
        }
        Command::BuildCc10 { config, kernel_rank, x_k } => {
            let mut cfg = load_config(&mut report, config)?;
            if let Some(k) = kernel_rank {
                cfg.kernel_rank = *k;
            }
            if let Some(x) = x_k {
                cfg.x_k = Some(parse_vector(x)?);
            }
            cfg.validate()?;
            let (k, l) = (cfg.default_k()?, cfg.default_l()?);
            let (inst, cert) = build_prop_cc10(&cfg, &k, &l)?;
            report.result = json!({
                "config": cfg,
                "g": group_json(&inst.cover.g),
                "k": group_json(&inst.cover.k),
                "l": group_json(&inst.l),
                "h": group_json(&inst.h),
                "mhat": group_json(&inst.mhat),
                "m": group_json(&inst.cover.m),
                "projection": matrix_json(&inst.cover.projection),
            });
            certify(&mut report, cert);
        }
        Command::DemoTheorem1 { k_max, config } => {
            let cfg = load_config(&mut report, config)?;
            let (cert, runs) = demo_theorem1(&cfg, *k_max)?;
            let per_k: Vec<Value> = runs
                .iter()
                .map(|r| json!({ "kernel_rank": r.kernel_rank, "ambient_rank": r.instance.cover.g.ambient_rank() }))
                .collect();
            report.result = json!({ "m": group_json(&runs[0].instance.cover.m), "runs": per_k });
            certify(&mut report, cert);
        }
        Command::FkSummand { rank, basis, gens } => {
            let k = match (rank, basis) {
                (_, Some(b)) => {
                    let cols = parse_vectors(b)?;
                    let n = cols.first().map_or(0, Vec::len);
                    FreeGroupWithBasis::new(Matrix::from_cols(n, &cols)?)?
                }
                (Some(n), None) => FreeGroupWithBasis::standard(*n),
                (None, None) => return Err(CliError::Core(Error::Input("give --rank or --basis".into()))),
            };
            let g = parse_vectors(gens)?;
            let split = separable_summand(&k, &g)?;
            let det = split.combined_determinant(&k)?;
            let mut cert = Certificate::new("lemma_bb2");
            cert.push("bb2.unimodular", is_unit(&det), format!("det [K₂ | F] = {}", fmt_rational(&det)), None);
            let k2 = FreeGroupWithBasis::new(split.k2_basis.clone())?.group()?;
            let mut inside = true;
            for v in &g {
                inside &= k2.member(v)?;
            }
            cert.push("bb2.k1_in_k2", inside, "every generator of K₁ lies in K₂", None);
            report.result = json!({ "split": split, "generators": g.iter().map(|v| vector_text(v)).collect::<Vec<_>>() });
            certify(&mut report, cert);
        }
        Command::FkTrace { group, kernel } => {
            let g = load(&mut report, group, "group")?.group;
            let k = load(&mut report, kernel, "kernel")?.group;
            let trace = trace_prop_bb4(&CoverInstance::new(&g, &k)?)?;
            report.result = json!({
                "g1": group_json(&trace.g1),
                "k1": group_json(&trace.k1),
                "split": trace.split,
                "section": GroupFile::from_scheme(&trace.section),
            });
            certify(&mut report, trace.certificate);
        }
        Command::Rigid { rank, spine, localize } => {
            let spine = parse_primes(spine)?;
            let pi: PrimeSet = parse_primes(localize)?.into_iter().collect();
            let g = rigid_group(*rank, &spine, &pi)?;
            let ring = scalar_ring_recognize(&end_group(&g)?)?;
            report.result = json!({
                "group": group_json(&g),
                "end_scalar_primes": ring.primes,
                "generators": GroupFile::from_scheme(&g.generators()?),
            });
        }
    }
    Ok(report)
}

/// `x = ±1`.
fn is_unit(x: &cellcov_core::Rational) -> bool {
    x.numer().magnitude() == x.denom().magnitude()
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                emit(&format!("{}\n", report.to_json()));
            } else {
                emit(&report.to_text());
            }
            if let Some(dir) = &cli.report_dir {
                if let Err(e) = report.write_to_dir(dir) {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code());
                }
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            if cli.json {
                let body = json!({ "tool": "cellcov", "version": env!("CARGO_PKG_VERSION"), "command": cli.command.name(), "error": e.to_string(), "exit_code": e.exit_code() });
                emit(&format!("{}\n", serde_json::to_string_pretty(&body).expect("errors serialize")));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
