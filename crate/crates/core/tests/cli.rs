use std::path::Path;

use sametype::cli::run_args;

fn run(dir: &Path, args: &[&str]) -> i32 {
    let args: Vec<String> = std::iter::once("sametype".to_string())
        .chain(args.iter().map(|a| if a.contains('.') { dir.join(a).display().to_string() } else { a.to_string() }))
        .collect();
    run_args(args)
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn gen_grid_writes_three_sets_of_ten() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(d.path(), &["gen", "grid", "--n", "5", "--d", "2", "--m", "3", "--seed", "7", "--out", "f.json"]), 0);
    let v = json(d.path(), "f.json");
    let sets = v["sets"].as_array().unwrap();
    assert_eq!(sets.len(), 3);
    assert!(sets.iter().all(|s| s["points"].as_array().unwrap().len() == 10));
    assert_eq!(v["provenance"]["kind"], "perturbed_grid");
    let manifest = json(d.path(), "f.json.manifest.json");
    assert_eq!(manifest["command"], "gen");
    assert_eq!(manifest["output"][1].as_str().unwrap().len(), 64);
}

#[test]
fn c_exact_prints_the_straddle_value() {
    let d = tempfile::tempdir().unwrap();
    let tiny = r#"{"dim": 2, "sets": [
        {"label": "Y1", "points": [["0", "0"]]},
        {"label": "Y2", "points": [["1", "0"]]},
        {"label": "Y3", "points": [["2", "1"], ["3", "-1"]]}
    ]}"#;
    std::fs::write(d.path().join("tiny.json"), tiny).unwrap();
    assert_eq!(run(d.path(), &["c-exact", "--in", "tiny.json", "--out", "c.json"]), 0);
    assert_eq!(json(d.path(), "c.json")["value"], "1/2");
    // Dropping one straddling point leaves a same-type family; the full one is not.
    assert_eq!(run(d.path(), &["check", "--in", "tiny.json", "--method", "both", "--out", "k.json"]), 1);
    let k = json(d.path(), "k.json");
    assert_eq!(k["holds"], false);
    assert!(k["tuple"]["witness"].is_object());
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(run(p, &["gen", "clustered", "--n", "6", "--d", "2", "--m", "3", "--seed", "1", "--out", "c.json"]), 0);
    assert_eq!(run(p, &["check", "--in", "c.json", "--method", "tuple", "--out", "k.json"]), 0);
    assert_eq!(json(p, "k.json")["holds"], true);
    // Not generated by `gen grid`, so there is nothing to audit against.
    assert_eq!(run(p, &["audit", "--in", "c.json"]), 2);
    assert_eq!(run(p, &["check", "--in", "missing.json"]), 2);
    assert_eq!(run(p, &["partition", "--in", "c.json", "--J", "2"]), 2);
    std::fs::write(p.join("bad.json"), "{\"dim\": 2, \"sets\": [{\"label\": \"a\", \"points\": [[\"x\", \"1\"]]}]}").unwrap();
    assert_eq!(run(p, &["c-exact", "--in", "bad.json"]), 2);
    assert_eq!(run(p, &["c-exact", "--in", "c.json", "--max-nodes", "1"]), 1);
}

#[test]
fn audit_regenerates_the_grid() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(run(p, &["gen", "grid", "--n", "6", "--d", "2", "--m", "3", "--seed", "2", "--out", "g.json"]), 0);
    assert_eq!(run(p, &["audit", "--in", "g.json", "--out", "a.json"]), 0);
    let a = json(p, "a.json");
    assert_eq!(a["audit"]["ratio_bound"], "2/5");
    assert!(a["audit"]["inequalities"].as_array().unwrap().iter().all(|q| q["ok"] == true));

    let mut g = json(p, "g.json");
    g["provenance"]["seed"] = 3.into();
    std::fs::write(p.join("h.json"), serde_json::to_string(&g).unwrap()).unwrap();
    assert_eq!(run(p, &["audit", "--in", "h.json"]), 2);
}

#[test]
fn sweep_writes_csv() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    std::fs::write(p.join("s.toml"), "command = \"extract\"\n[grid]\nn = [40]\nm = [3]\nr = [4, 8, 16]\nseed = [1]\n").unwrap();
    assert_eq!(run(p, &["sweep", "--config", "s.toml", "--out", "s.csv", "--jobs", "2"]), 0);
    let csv = std::fs::read_to_string(p.join("s.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,d,m,r,layout,seed,fraction,fraction_f64,rounds,min_subset,edges,ok,error");
    let rs: Vec<&str> = lines.map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(rs, ["4", "8", "16"]);
    std::fs::write(p.join("bad.toml"), "command = \"nope\"\n").unwrap();
    assert_eq!(run(p, &["sweep", "--config", "bad.toml"]), 2);
}
