use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const P3_GR: &str = "p sp 3 4\na 1 2 1\na 2 1 1\na 2 3 1\na 3 2 1\n";

fn hublab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hublab")).current_dir(dir).args(args).env_remove("HUBLAB_WORKERS").output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = hublab(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn setup() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p3.gr"), P3_GR).unwrap();
    fs::write(dir.path().join("q.txt"), "0 2\n").unwrap();
    let p = dir.path().to_path_buf();
    (dir, p)
}

#[test]
fn build_prints_als() {
    let (_t, d) = setup();
    let stdout = ok(&d, &["build", "--graph", "p3.gr", "--out", "p3.chlb"]);
    assert!(stdout.contains("ALS 0.666667\n"), "{stdout}");
    assert!(stdout.contains("build_seconds "));
    assert!(d.join("p3.chlb").is_file() && d.join("p3.chlb.order").is_file() && d.join("p3.chlb.manifest.json").is_file());
}

#[test]
fn gll_matches_seqpll() {
    let (_t, d) = setup();
    ok(&d, &["build", "--graph", "p3.gr", "--out", "a.chlb"]);
    ok(&d, &["build", "--graph", "p3.gr", "--algo", "gll", "--alpha", "4", "--workers", "8", "--out", "b.chlb"]);
    assert_eq!(fs::read(d.join("a.chlb")).unwrap(), fs::read(d.join("b.chlb")).unwrap());
}

#[test]
fn plant_writes_shard_dir() {
    let (_t, d) = setup();
    ok(&d, &["build", "--graph", "p3.gr", "--algo", "plant", "--q", "4", "--out", "sh"]);
    let mut names: Vec<String> = fs::read_dir(d.join("sh")).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["manifest.json", "node_0.chlb", "node_1.chlb", "node_2.chlb", "node_3.chlb", "order.txt"]);
}

#[test]
fn query_modes() {
    let (_t, d) = setup();
    ok(&d, &["build", "--graph", "p3.gr", "--out", "p3.chlb"]);
    ok(&d, &["build", "--graph", "p3.gr", "--algo", "dgll", "--q", "2", "--out", "sh"]);
    ok(&d, &["query", "--mode", "qlsn", "--labels", "p3.chlb", "--queries", "q.txt", "--out", "a.txt", "--stats", "s.csv"]);
    assert_eq!(fs::read_to_string(d.join("a.txt")).unwrap(), "2\n");
    let stats = fs::read_to_string(d.join("s.csv")).unwrap();
    assert!(stats.starts_with("mode,queries,seconds,qps,mean_us\nqlsn,1,"), "{stats}");

    ok(&d, &["query", "--mode", "qfdl", "--labels", "sh", "--queries", "q.txt", "--out", "b.txt"]);
    ok(&d, &["query", "--mode", "qdol", "--q", "1", "--labels", "p3.chlb", "--queries", "q.txt", "--out", "c.txt"]);
    let a = fs::read(d.join("a.txt")).unwrap();
    assert_eq!(a, fs::read(d.join("b.txt")).unwrap());
    assert_eq!(a, fs::read(d.join("c.txt")).unwrap());

    for args in [["query", "--mode", "qfdl", "--labels", "p3.chlb"], ["query", "--mode", "qdol", "--labels", "sh"]] {
        let mut full = args.to_vec();
        full.extend(["--queries", "q.txt", "--out", "x.txt"]);
        let out = hublab(&d, &full);
        assert_eq!(code(&out), 1);
        assert!(String::from_utf8_lossy(&out.stderr).contains("layout error"));
    }
}

#[test]
fn random_queries_agree_across_modes() {
    let (_t, d) = setup();
    let edges: String = (0..30).map(|i| format!("{} {} {}\n", i, (i * 7 + 3) % 31, 1 + i % 4)).collect();
    fs::write(d.join("g.txt"), edges).unwrap();
    let g = ["--graph", "g.txt", "--format", "edges", "--weighted"];
    ok(&d, &[&["build"][..], &g, &["--out", "l.chlb"]].concat());
    ok(&d, &[&["build"][..], &g, &["--algo", "hybrid", "--q", "3", "--out", "sh"]].concat());
    let q = ["--random", "500", "--seed", "9"];
    ok(&d, &[&["query", "--mode", "qlsn", "--labels", "l.chlb", "--out", "a"][..], &q].concat());
    ok(&d, &[&["query", "--mode", "qfdl", "--labels", "sh", "--out", "b"][..], &q].concat());
    ok(&d, &[&["query", "--mode", "qdol", "--q", "6", "--labels", "l.chlb", "--out", "c"][..], &q].concat());
    let a = fs::read(d.join("a")).unwrap();
    assert_eq!(a.iter().filter(|&&b| b == b'\n').count(), 500);
    assert_eq!(a, fs::read(d.join("b")).unwrap());
    assert_eq!(a, fs::read(d.join("c")).unwrap());
}

#[test]
fn verify_reports() {
    let (_t, d) = setup();
    ok(&d, &["build", "--graph", "p3.gr", "--out", "p3.chlb"]);
    let stdout = ok(&d, &["verify", "--graph", "p3.gr", "--labels", "p3.chlb"]);
    assert_eq!(stdout, "order PASS\ncover PASS\nrespects PASS\nminimality PASS\n");

    fs::write(d.join("extra.txt"), "# n=3 directed=0\n0 1 1\n2 1 1\n2 0 2\n").unwrap();
    fs::copy(d.join("p3.chlb.order"), d.join("extra.txt.order")).unwrap();
    let out = hublab(&d, &["verify", "--graph", "p3.gr", "--labels", "extra.txt"]);
    assert_eq!(code(&out), 2);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("minimality FAIL label (hub 0, dist 2) in L(2) is redundant"), "{stdout}");

    fs::write(d.join("missing.txt"), "# n=3 directed=0\n0 1 1\n").unwrap();
    let out = hublab(&d, &["verify", "--graph", "p3.gr", "--labels", "missing.txt"]);
    assert_eq!(code(&out), 2);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("cover FAIL pair (0, 2): labels give INF, exact 2"), "{stdout}");
}

#[test]
fn stats_bundle() {
    let (_t, d) = setup();
    ok(&d, &["stats", "--graph", "p3.gr", "--algo", "plant", "--eta", "0", "--q", "3", "--out-dir", "st"]);
    let read = |f: &str| fs::read_to_string(d.join("st").join(f)).unwrap();
    assert_eq!(read("tree_labels.csv"), "tree_index,root,rank,labels\n0,1,2,2\n1,0,1,0\n2,2,0,0\n");
    assert!(read("psi.csv").starts_with("tree_index,root,rank,explored,labels,psi\n0,1,2,3,2,1.5\n"));
    assert_eq!(read("als.csv"), "convention,als\nexcluding_self,0.666667\nincluding_self,1.666667\n");
    let traffic = read("traffic.csv");
    let mut lines = traffic.lines();
    assert_eq!(lines.next(), Some("superstep,node,op,bytes"));
    assert!(lines.all(|l| l.ends_with(",0")), "{traffic}");
}

#[test]
fn reruns_from_manifest_are_identical() {
    let (_t, d) = setup();
    ok(&d, &["build", "--graph", "p3.gr", "--algo", "hybrid", "--q", "2", "--out", "sh", "--traffic", "t.csv", "--text", "l.txt"]);
    ok(&d, &["query", "--mode", "qfdl", "--labels", "sh", "--random", "50", "--out", "r.txt"]);
    let files = ["sh/node_0.chlb", "sh/node_1.chlb", "sh/order.txt", "sh/manifest.json", "t.csv", "l.txt", "r.txt", "r.txt.manifest.json"];
    let before: Vec<Vec<u8>> = files.iter().map(|f| fs::read(d.join(f)).unwrap()).collect();
    for f in files {
        fs::remove_file(d.join(f)).ok();
    }
    fs::write(d.join("sh/manifest.json"), &before[3]).unwrap();
    fs::write(d.join("r.txt.manifest.json"), &before[7]).unwrap();
    ok(&d, &["build", "--from-manifest", "sh/manifest.json"]);
    ok(&d, &["query", "--from-manifest", "r.txt.manifest.json"]);
    for (f, b) in files.iter().zip(&before) {
        assert_eq!(&fs::read(d.join(f)).unwrap(), b, "{f}");
    }
}

#[test]
fn exit_codes() {
    let (_t, d) = setup();
    assert_eq!(code(&hublab(&d, &["build", "--algo", "nope"])), 1);
    assert_eq!(code(&hublab(&d, &["build", "--graph", "p3.gr"])), 1);
    assert_eq!(code(&hublab(&d, &["build", "--graph", "p3.gr", "--algo", "dgll", "--beta", "1", "--out", "x"])), 1);
    assert_eq!(code(&hublab(&d, &["build", "--graph", "absent.gr", "--out", "x"])), 3);
    fs::write(d.join("bad.gr"), "p sp 2 1\na 1 9 1\n").unwrap();
    assert_eq!(code(&hublab(&d, &["build", "--graph", "bad.gr", "--out", "x"])), 3);
    assert_eq!(code(&hublab(&d, &["--help"])), 0);
    assert_eq!(code(&hublab(&d, &["frobnicate"])), 1);
}

#[test]
fn workers_env_is_overridden_by_flag() {
    let (_t, d) = setup();
    let run = |extra: &[&str], env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hublab"));
        c.current_dir(&d).args(["build", "--graph", "p3.gr", "--algo", "lcc", "--out", "w.chlb"]).args(extra);
        match env {
            Some(v) => c.env("HUBLAB_WORKERS", v),
            None => c.env_remove("HUBLAB_WORKERS"),
        };
        assert!(c.output().unwrap().status.success());
        let m: serde_json::Value = serde_json::from_slice(&fs::read(d.join("w.chlb.manifest.json")).unwrap()).unwrap();
        m["resolved"]["workers"].as_u64().unwrap()
    };
    assert_eq!(run(&[], Some("3")), 3);
    assert_eq!(run(&["--workers", "2"], Some("3")), 2);
}
