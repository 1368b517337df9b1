use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stirling-gamma"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn tree_and_perm_are_inverse() {
    let o = run(&["tree", "--perm", "5533211466674"]);
    assert!(o.status.success());
    let tree = stdout(&o);
    assert_eq!(
        tree.trim(),
        "(1 (2 (3 (5 * * *) * *) *) * (4 * (6 * * * (7 * *)) *))"
    );
    let o = run(&["perm", "--tree", tree.trim()]);
    assert_eq!(stdout(&o).trim(), "5533211466674");
}

#[test]
fn enumerate_formats() {
    let o = run(&["enumerate", "--multiset", "2,2"]);
    assert_eq!(stdout(&o), "1122\n1221\n2211\n");
    let o = run(&[
        "enumerate",
        "--multiset",
        "2,2",
        "--stats",
        "--format",
        "csv",
    ]);
    let text = stdout(&o);
    assert!(
        text.starts_with("perm,asc,des,plat,dfall,aplat,dplat\n"),
        "{text}"
    );
    assert!(text.contains("2211,1,2,2,1,1,1"));
    let o = run(&["enumerate", "--multiset", "1,1", "--format", "json"]);
    assert_eq!(stdout(&o), "{\"perm\":\"12\"}\n{\"perm\":\"21\"}\n");
}

#[test]
fn gamma_routes_agree() {
    let outputs: Vec<String> = ["extract", "grammar", "trees", "perms", "mma", "ternary"]
        .iter()
        .map(|via| stdout(&run(&["gamma", "--multiset", "2,2,2", "--via", via])))
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{outputs:?}");
    let o = run(&["gamma", "--multiset", "2,1", "--via", "mma"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn poly_outputs() {
    let o = run(&[
        "poly",
        "--multiset",
        "2,2",
        "--via",
        "grammar",
        "--format",
        "text",
    ]);
    assert!(o.status.success());
    let enumerated = run(&[
        "poly",
        "--multiset",
        "2,2",
        "--via",
        "enum",
        "--format",
        "text",
    ]);
    assert_eq!(stdout(&o), stdout(&enumerated));
    let o = run(&["poly", "--multiset", "2,2", "--format", "csv"]);
    assert_eq!(stdout(&o), "x,y,z,coeff\n1,2,2,1\n2,1,2,1\n2,2,1,1\n");
}

#[test]
fn orbit_prune_and_derive() {
    let o = run(&["orbit", "--perm", "1122"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 2);
    assert_eq!(v["canonical"], "(1 * * (2 * * *))");

    let o = run(&[
        "prune",
        "--tree",
        "(1 (2 * (3 * * (5 * * *))) * (4 * (6 * * * (7 * *)) *))",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["weight"], "u^3*v^3");

    let o = run(&["grammar-derive", "--rules", "uvz", "--k-seq", "2,2,2"]);
    let lines: Vec<&str> = std::str::from_utf8(&o.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 3);
    for l in lines {
        serde_json::from_str::<serde_json::Value>(l).unwrap();
    }
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--check", "ROUNDTRIP", "--multisets", "2,2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["results"][0]["items"], 3);

    let o = run(&["verify", "--check", "SYM-XYZ", "--multisets", "2,2;2,2,2"]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&[
        "verify", "--check", "T3.1", "--max-n", "3", "--max-k", "2", "--max-K", "5", "--jobs", "2",
        "--format", "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("T3.1"));

    assert_eq!(run(&["verify", "--check", "NOPE"]).status.code(), Some(2));
    assert_eq!(
        run(&[
            "verify",
            "--check",
            "ORBIT",
            "--multisets",
            "2,2",
            "--cost-cap",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["tree", "--perm", "2121"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn golden_passes() {
    let o = run(&["golden", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}
