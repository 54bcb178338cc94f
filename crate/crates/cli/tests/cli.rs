use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use liechars::cache::{read_artifact, write_artifact, CacheDir, ReportArtifact, TableArtifact};
use liechars::field::PrimePowerField;
use liechars::lie::Family;
use liechars::report::parse_csv;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liechars"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .env_remove("LIECHARS_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn table_path(cache: &Path, family: Family, n: usize, q: u64, seed: u64) -> std::path::PathBuf {
    let (p, k) = liechars::field::prime_power(q).unwrap();
    let k = if family == Family::U { 2 * k } else { k };
    let f = PrimePowerField::new(p, k).unwrap();
    CacheDir::new(cache).table_path(family, n, q, &f.descriptor(), seed)
}

fn report_path(cache: &Path, family: Family, n: usize, q: u64, seed: u64) -> std::path::PathBuf {
    let (p, k) = liechars::field::prime_power(q).unwrap();
    let k = if family == Family::U { 2 * k } else { k };
    let f = PrimePowerField::new(p, k).unwrap();
    CacheDir::new(cache).report_path(family, n, q, &f.descriptor(), seed)
}

#[test]
fn build_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["build", "--family", "u", "--n", "2", "--q", "3"];
    let first = run(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let line = stdout(&first);
    assert!(line.starts_with("U(2,3) |G|=96 classes=16 id="), "{line}");
    let files: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let path = files[0].as_ref().unwrap().path();
    let bytes = fs::read(&path).unwrap();

    let second = run(dir.path(), &args);
    assert_eq!(second.status.code(), Some(0));
    let again = stdout(&second);
    assert!(again.contains("cache hit"));
    assert_eq!(again.replace(" (cache hit)", ""), line);
    assert_eq!(fs::read(&path).unwrap(), bytes);
}

#[test]
fn roster_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["build", "--family", "u", "--n", "3", "--q", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--allow-large"));
    let o = run(dir.path(), &["build", "--family", "gl", "--n", "2", "--q", "6", "--allow-large"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["build", "--family", "sp", "--n", "2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["build", "--family", "gl", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn chartab_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["chartab", "--family", "gl", "--n", "2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("table 8x8 sum_deg2=48 |G|=48 orthogonality=pass"), "{s}");
    let o = run(dir.path(), &["chartab", "--family", "gl", "--n", "2", "--q", "3"]);
    assert!(stdout(&o).contains("(cache hit)"));

    let o = run(dir.path(), &["chartab", "--family", "gl", "--n", "1", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("table 1x1 sum_deg2=1 |G|=1"));
}

#[test]
fn corrupted_table_is_an_integrity_failure() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["chartab", "--family", "gl", "--n", "2", "--q", "2"];
    assert_eq!(run(dir.path(), &args).status.code(), Some(0));
    let path = table_path(dir.path(), Family::GL, 2, 2, 0);
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replacen("\"prime\": 7", "\"prime\": 13", 1)).unwrap();
    let o = run(dir.path(), &args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("checksum mismatch"), "{}", stderr(&o));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--theorem", "unitary", "--family", "u", "--n", "2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("| unitary | unitary |"));
    let o = run(dir.path(), &["verify", "--theorem", "fs-dual", "--family", "gl", "--n", "2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(dir.path(), &["verify", "--theorem", "unitary", "--family", "gl", "--n", "2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["verify", "--theorem", "nonsense", "--family", "gl", "--n", "2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sign_flip_in_cached_table_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--family", "gl", "--n", "2", "--q", "3", "--theorem", "fs-dual"];
    assert_eq!(run(dir.path(), &args).status.code(), Some(0));
    let path = table_path(dir.path(), Family::GL, 2, 3, 0);
    let mut a: TableArtifact = read_artifact(&path).unwrap();
    let k = 3;
    let c = (1..a.irreducibles[k].values.len())
        .find(|&c| !a.irreducibles[k].values[c].is_zero())
        .unwrap();
    a.irreducibles[k].values[c] = -&a.irreducibles[k].values[c];
    write_artifact(&path, &a).unwrap();
    let o = run(dir.path(), &args);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    // Norms survive a sign flip, so the witnesses are off-diagonal pairs with χ3.
    assert!(err.contains("row violations") && (err.contains(", 3)") || err.contains("(3, ")), "{err}");
}

#[test]
fn report_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["report", "--family", "u", "--n", "2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("liechars build --family u --n 2 --q 3"));

    let o = run(dir.path(), &["verify", "--family", "u", "--n", "2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let artifact: ReportArtifact = read_artifact(&report_path(dir.path(), Family::U, 2, 3, 0)).unwrap();
    let rep = artifact.report;

    let md = stdout(&run(dir.path(), &["report", "--family", "u", "--n", "2", "--q", "3"]));
    let triv = rep.characters.iter().find(|c| c.degree == 1 && c.omega_z == "1" && c.epsilon == 1).unwrap();
    let st = triv.dual_index.unwrap();
    assert_eq!(rep.characters[st].degree, 3);
    assert!(md.contains(&format!("| {st} | 3 | 1 | 1 | yes | no | yes |")), "{md}");

    let csv = stdout(&run(dir.path(), &["report", "--family", "u", "--n", "2", "--q", "3", "--format", "csv"]));
    assert_eq!(parse_csv(&csv).unwrap(), rep.characters);

    let json = stdout(&run(dir.path(), &["report", "--family", "u", "--n", "2", "--q", "3", "--format", "json"]));
    let back: liechars::lie::TheoremReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rep);
}

#[test]
fn reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["verify", "--family", "gl", "--n", "3", "--q", "2", "--seed", "5", "--format", "json"];
    let oa = run(a.path(), &args);
    let ob = run(b.path(), &args);
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(oa.stdout, ob.stdout);
    assert_eq!(
        fs::read(report_path(a.path(), Family::GL, 3, 2, 5)).unwrap(),
        fs::read(report_path(b.path(), Family::GL, 3, 2, 5)).unwrap()
    );

    let oc = run(a.path(), &["chartab", "--family", "gl", "--n", "3", "--q", "2", "--seed", "77"]);
    assert_eq!(oc.status.code(), Some(0));
    let t5: TableArtifact = read_artifact(&table_path(a.path(), Family::GL, 3, 2, 5)).unwrap();
    let t77: TableArtifact = read_artifact(&table_path(a.path(), Family::GL, 3, 2, 77)).unwrap();
    let set = |t: &TableArtifact| {
        let mut v: Vec<String> = t
            .irreducibles
            .iter()
            .map(|c| serde_json::to_string(&c.values).unwrap())
            .collect();
        v.sort();
        v
    };
    assert_eq!(set(&t5), set(&t77));
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_liechars"))
        .args(["build", "--family", "gl", "--n", "2", "--q", "2"])
        .env("LIECHARS_CACHE", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}
