use std::path::PathBuf;

use posetpat::cli::{run, EXIT_BUDGET, EXIT_CHECK, EXIT_INPUT, EXIT_OK};
use tempfile::TempDir;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, body: &str) -> String {
        let path = self.dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        path.to_str().unwrap().to_owned()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("posetpat").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn le_on_chain_and_methods() {
    let sb = Sandbox::new();
    let chain = sb.file("chain.txt", "p 5\nr 1 2\nr 2 3\nr 3 4\nr 4 5\n");
    assert_eq!(call(&["le", &chain]).1, "1\n");
    let n = sb.file("n.txt", "# the N poset\np 4\nr 1 3\nr 2 3\nr 2 4\n");
    for method in ["auto", "downset", "recurse", "brute"] {
        let (code, out, _) = call(&["le", &n, "--method", method, "--check"]);
        assert_eq!((code, out.as_str()), (EXIT_OK, "5\n"), "{method}");
    }
}

#[test]
fn le_errors() {
    let sb = Sandbox::new();
    let bad = sb.file("bad.txt", "p 3\nr 1 4\n");
    let (code, _, err) = call(&["le", &bad]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 2"), "{err}");
    let cyclic = sb.file("cyc.txt", "p 2\nr 1 2\nr 2 1\n");
    assert_eq!(call(&["le", &cyclic]).0, EXIT_INPUT);
    assert_eq!(call(&["le", sb.path("missing").to_str().unwrap()]).0, EXIT_INPUT);
    let big = sb.file("big.txt", "p 10\n");
    assert_eq!(call(&["le", &big, "--method", "brute"]).0, EXIT_BUDGET);
    let wide = sb.file("wide.txt", "p 40\n");
    assert_eq!(call(&["le", &wide, "--method", "downset"]).0, EXIT_BUDGET);
}

#[test]
fn occur_counts_and_maps() {
    let sb = Sandbox::new();
    let pat = sb.file("p.txt", "p 2\nr 1 2\n");
    let text = sb.file("q.txt", "p 3\nr 1 2\nr 2 3\n");
    let (code, out, _) = call(&["occur", "--pattern", &pat, "--text", &text, "--injective"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "3\n"));
    let (_, out, _) = call(&["occur", "--pattern", &pat, "--text", &text, "--injective", "--enumerate"]);
    assert_eq!(out, "1->1 2->2\n1->1 2->3\n1->2 2->3\n");
    let sp = sb.file("sp.txt", "1 2\n");
    let st = sb.file("st.txt", "2 1 3\n");
    let (_, out, _) = call(&[
        "occur",
        "--pattern",
        &sp,
        "--text",
        &st,
        "--perm-pattern",
        "--perm-text",
        "--injective",
        "--induced",
    ]);
    assert_eq!(out, "2\n");
}

#[test]
fn auts_from_file() {
    let sb = Sandbox::new();
    let f = sb.file("s.txt", "2 1 4 3\n");
    assert_eq!(call(&["auts", &f]).1, "4\n");
    assert_eq!(call(&["auts", "2 1"]).1, "2\n");
}

#[test]
fn decomposition_commands() {
    let sb = Sandbox::new();
    let f = sb.file("d.txt", "p 4\nr 1 2\nr 1 4\nr 3 4\n");
    assert_eq!(call(&["decomp", &f]).1, "(X[2,4,1,3] 1 2 3 4)\n");
    assert_eq!(call(&["width", &f]).1, "2\n");
    assert_eq!(call(&["iwidth", &f]).1, "2\n");
    let chains = call(&["chains", &f]).1;
    assert_eq!(chains.lines().count(), 2);
    let sp = sb.file("sp.txt", "p 4\nr 1 3\nr 2 3\nr 3 4\n");
    assert_eq!(call(&["decomp", &sp]).1, "(S (P 1 2) 3 4)\n");
    assert_eq!(call(&["iwidth", &sp]).1, "1\n");
}

#[test]
fn sat_commands() {
    let sb = Sandbox::new();
    let f = sb.file("f.cnf", "c one clause\np cnf 1 1\n1 1 1 0\n");
    let (code, _, _) = call(&[
        "sat-reduce",
        &f,
        "--pattern-out",
        sb.path("pi.txt").to_str().unwrap(),
        "--text-out",
        sb.path("tau.txt").to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let pi = std::fs::read_to_string(sb.path("pi.txt")).unwrap();
    let tau = std::fs::read_to_string(sb.path("tau.txt")).unwrap();
    assert_eq!(pi.split_whitespace().count(), 9);
    assert_eq!(tau.split_whitespace().count(), 43);

    // the gadget admits far more matches than the formula has models
    let (code, out, _) = call(&["sat-verify", &f]);
    assert_eq!((code, out.as_str()), (EXIT_CHECK, "matches=14831 sat=1 verdict=FAIL\n"));
    let (code, out, _) = call(&["sat-verify", &f, "--method", "structured"]);
    assert_eq!(code, EXIT_CHECK);
    assert_eq!(out, "matches=3 sat=1 verdict=FAIL\nr=0 s=0\nr=0 s=1\nr=0 s=3\n");

    let polar = sb.file("g.cnf", "p cnf 1 1\n1 -1 1 0\n");
    let (code, _, err) = call(&["sat-verify", &polar]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("both polarities"), "{err}");
    let two = sb.file("h.cnf", "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n");
    assert_eq!(call(&["sat-verify", &two, "--timeout", "0.05"]).0, EXIT_BUDGET);
}

#[test]
fn generation_is_reproducible() {
    let a = call(&["gen", "poset", "12", "0.25", "9"]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a, call(&["gen", "poset", "12", "0.25", "9"]));
    assert!(a.1.starts_with("p 12\n"));
    let perm = call(&["gen", "perm", "7", "3"]).1;
    let mut vals: Vec<usize> = perm.split_whitespace().map(|t| t.parse().unwrap()).collect();
    vals.sort();
    assert_eq!(vals, (1..=7).collect::<Vec<_>>());
}
