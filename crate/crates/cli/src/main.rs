use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use liechars::cache::{
    self, load_group, load_report, load_table, orthogonality_summary, write_artifact, CacheDir,
    GroupArtifact, ReportArtifact, TableArtifact,
};
use liechars::chartab::{dixon_table, orthogonality_check, CharacterTable};
use liechars::field::{prime_power, FieldDescriptor, PrimePowerField};
use liechars::lie::{build, Family, LieError, LieGroupData, Theorem};
use liechars::report::{render, Format};

/// Groups that run without `--allow-large`.
const ROSTER: [(Family, usize, u64); 8] = [
    (Family::GL, 2, 2),
    (Family::GL, 2, 3),
    (Family::GL, 3, 2),
    (Family::GL, 2, 5),
    (Family::U, 2, 2),
    (Family::U, 2, 3),
    (Family::U, 2, 5),
    (Family::U, 3, 2),
];

#[derive(Parser)]
#[command(name = "liechars", version, about = "Exact character tables and theorem checks for GL(n,q) and U(n,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the group and cache its summary.
    Build(Job),
    /// Compute (or load) the exact character table and check orthogonality.
    Chartab(Job),
    /// Run the theorem checks and cache the report.
    Verify {
        #[command(flatten)]
        job: Job,
        #[arg(long, default_value = "all")]
        theorem: Theorem,
        #[arg(long, default_value = "md")]
        format: Format,
    },
    /// Render a cached verification report.
    Report {
        #[command(flatten)]
        job: Job,
        #[arg(long, default_value = "md")]
        format: Format,
    },
}

#[derive(Args, Clone)]
struct Job {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
    /// Seed for eigenspace splitting.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "LIECHARS_CACHE", default_value = ".liechars-cache")]
    cache_dir: PathBuf,
    /// Permit groups outside the roster (still capped at 10^6 elements).
    #[arg(long)]
    allow_large: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Integrity(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Integrity(_) | Failure::Verification(_) => 1,
        }
    }
}

impl From<cache::CacheError> for Failure {
    fn from(e: cache::CacheError) -> Self {
        Failure::Integrity(e.to_string())
    }
}

impl From<LieError> for Failure {
    fn from(e: LieError) -> Self {
        match e {
            LieError::TooLarge { .. } | LieError::BadRank(_) | LieError::NotPrimePower(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Integrity(other.to_string()),
        }
    }
}

impl Job {
    fn name(&self) -> String {
        format!("{}({},{})", self.family, self.n, self.q)
    }

    fn flags(&self) -> String {
        format!(
            "--family {} --n {} --q {}",
            self.family.to_string().to_lowercase(),
            self.n,
            self.q
        )
    }

    fn validate(&self) -> Result<(), Failure> {
        let listed = ROSTER.contains(&(self.family, self.n, self.q)) || self.n == 1;
        if !listed && !self.allow_large {
            return Err(Failure::Usage(format!(
                "{} is outside the supported roster; pass --allow-large to attempt it",
                self.name()
            )));
        }
        Ok(())
    }

    fn field(&self) -> Result<FieldDescriptor, Failure> {
        let (p, k) = prime_power(self.q)
            .ok_or_else(|| Failure::Usage(format!("q = {} is not a prime power", self.q)))?;
        let k = match self.family {
            Family::GL => k,
            Family::U => 2 * k,
        };
        let f = PrimePowerField::new(p, k).map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(f.descriptor())
    }

    fn cache(&self) -> CacheDir {
        CacheDir::new(&self.cache_dir)
    }
}

fn summary(a: &GroupArtifact) -> String {
    format!(
        "{}({},{}) |G|={} classes={} id={}",
        a.family, a.n, a.q, a.order, a.num_classes, a.group_id
    )
}

/// Builds the group, writing or checking its cache entry.
fn ensure_group(job: &Job) -> Result<LieGroupData, Failure> {
    let path = job.cache().group_path(job.family, job.n, job.q, &job.field()?);
    let data = build(job.family, job.n, job.q)?;
    let fresh = GroupArtifact::new(&data);
    if path.exists() {
        let cached = load_group(&path)?;
        if cached != fresh {
            return Err(Failure::Integrity(format!(
                "{} disagrees with the enumerated group",
                path.display()
            )));
        }
    } else {
        write_artifact(&path, &fresh)?;
    }
    Ok(data)
}

fn cmd_build(job: &Job) -> Result<String, Failure> {
    job.validate()?;
    let path = job.cache().group_path(job.family, job.n, job.q, &job.field()?);
    if path.exists() {
        let a = load_group(&path)?;
        return Ok(format!("{} (cache hit)", summary(&a)));
    }
    let data = build(job.family, job.n, job.q)?;
    let a = GroupArtifact::new(&data);
    write_artifact(&path, &a)?;
    Ok(summary(&a))
}

fn ensure_table(job: &Job, data: &LieGroupData) -> Result<(CharacterTable, bool), Failure> {
    let path = job
        .cache()
        .table_path(job.family, job.n, job.q, &job.field()?, job.seed);
    if path.exists() {
        let (table, _) = load_table(&path, data)?;
        return Ok((table, true));
    }
    let table = dixon_table(&data.group, job.seed).map_err(|e| Failure::Integrity(e.to_string()))?;
    let rep = orthogonality_check(&data.group, &table);
    if !rep.passed {
        return Err(Failure::Verification(format!(
            "{}: orthogonality failed: {}",
            job.name(),
            orthogonality_summary(&rep)
        )));
    }
    write_artifact(&path, &TableArtifact::new(&table))?;
    Ok((table, false))
}

fn cmd_chartab(job: &Job) -> Result<String, Failure> {
    job.validate()?;
    let data = ensure_group(job)?;
    let (table, hit) = ensure_table(job, &data)?;
    let rep = orthogonality_check(&data.group, &table);
    Ok(format!(
        "{} table {}x{} sum_deg2={} |G|={} orthogonality={} seed={} prime={}{}",
        job.name(),
        table.len(),
        data.group.classes().num_classes(),
        rep.degree_square_sum,
        rep.group_order,
        if rep.passed { "pass" } else { "fail" },
        table.seed,
        table.prime,
        if hit { " (cache hit)" } else { "" }
    ))
}

fn cmd_verify(job: &Job, theorem: Theorem, format: Format) -> Result<String, Failure> {
    job.validate()?;
    if theorem == Theorem::Unitary && job.family != Family::U {
        return Err(Failure::Usage(
            "--theorem unitary applies to the unitary family only".into(),
        ));
    }
    let data = ensure_group(job)?;
    let (table, _) = ensure_table(job, &data)?;
    let report = liechars::lie::verify_theorems(&data, &table)?;
    let path = job
        .cache()
        .report_path(job.family, job.n, job.q, &job.field()?, job.seed);
    write_artifact(&path, &ReportArtifact::new(data.group.id(), &report))?;
    let selected = report.select(theorem);
    let out = render(&selected, format);
    let failures = report.failures(theorem);
    if failures.is_empty() {
        return Ok(out);
    }
    print!("{out}");
    let witnesses: Vec<String> = failures
        .iter()
        .take(10)
        .map(|c| {
            let who = c.character.map_or("group".into(), |i| format!("character {i}"));
            format!("  {:?} at {who}: {}", c.check, c.detail)
        })
        .collect();
    Err(Failure::Verification(format!(
        "{} check(s) failed for {}:\n{}",
        failures.len(),
        job.name(),
        witnesses.join("\n")
    )))
}

fn cmd_report(job: &Job, format: Format) -> Result<String, Failure> {
    job.validate()?;
    let path = job
        .cache()
        .report_path(job.family, job.n, job.q, &job.field()?, job.seed);
    if !path.exists() {
        return Err(Failure::Usage(format!(
            "no verification report for {} (seed {}) in {}; run `liechars build {flags}` and then `liechars verify {flags} --seed {}`",
            job.name(),
            job.seed,
            job.cache_dir.display(),
            job.seed,
            flags = job.flags(),
        )));
    }
    let a = load_report(&path)?;
    Ok(render(&a.report, format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build(job) => cmd_build(job),
        Command::Chartab(job) => cmd_chartab(job),
        Command::Verify {
            job,
            theorem,
            format,
        } => cmd_verify(job, *theorem, *format),
        Command::Report { job, format } => cmd_report(job, *format),
    };
    match result {
        Ok(out) => {
            if out.ends_with('\n') {
                print!("{out}");
            } else {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) | Failure::Integrity(m) | Failure::Verification(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
