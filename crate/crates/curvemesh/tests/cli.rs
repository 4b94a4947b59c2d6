//! Binary-level checks: exit codes, JSON bodies, file outputs, determinism.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_curvemesh");
const NODE: &str = "y^2 - x^3 - x^2";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary spawns")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("curvemesh-cli-{}-{name}", std::process::id()));
    p
}

fn error_body(out: &Output) -> (String, String) {
    let v = stdout_json(out);
    let stage = v["error"]["stage"].as_str().expect("error.stage").to_string();
    let message = v["error"]["message"].as_str().expect("error.message").to_string();
    (stage, message)
}

/// Dyadic m*2^e back into CLI syntax.
fn dyadic_arg(v: &Value) -> String {
    let m = v["m"].as_str().expect("mantissa string");
    let e = v["e"].as_i64().expect("exponent");
    if e < 0 {
        format!("{m}/2^{}", -e)
    } else {
        format!("{m}*2^{e}")
    }
}

#[test]
fn mesh_pipeline_end_to_end() {
    // The oracle supplies the critical-value override, exactly as a user
    // preparing a singular run would.
    let est = run(&[
        "oracle", "--op", "critical", "--energy", "--poly", NODE,
        "--box", "[-2,2]x[-2,2]", "--grid-pow", "6",
    ]);
    assert_eq!(code(&est), 0);
    let est = stdout_json(&est);
    let ev = dyadic_arg(&est["estimate"]);

    let json_path = tmp("mesh.json");
    let svg_path = tmp("mesh.svg");
    let out = run(&[
        "mesh", "--poly", NODE, "--box", "[-2,2]x[-2,2]",
        "--ev-bound", &ev, "--delta", "1/16",
        "--out", json_path.to_str().unwrap(), "--svg", svg_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty(), "--out must silence stdout");

    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let sings = report["singularities"].as_array().unwrap();
    assert_eq!(sings.len(), 1);
    assert_eq!(sings[0]["degree"], 4);
    assert_eq!(report["stats"]["runtime_ms"], 0);
    assert_eq!(report["bounds"]["ev"]["source"], "user-override");

    let svg = std::fs::read_to_string(&svg_path).unwrap();
    let polylines = svg.matches("<polyline").count();
    let edges = report["edges"].as_array().unwrap().len();
    assert_eq!(polylines, edges, "one polyline per graph edge");
    assert_eq!(svg.matches("<path").count(), 1, "one diamond per singularity");
}

#[test]
fn pv_circle_reports_one_cycle() {
    let out = run(&["pv", "--poly", "x^2 + y^2 - 1", "--box", "[-2,2]x[-2,2]"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let nv = v["vertices"].as_array().unwrap().len();
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), nv, "a single closed cycle has as many edges as vertices");
    let mut deg = vec![0usize; nv];
    let mut next = vec![Vec::new(); nv];
    for e in edges {
        let (a, b) = (e[0].as_u64().unwrap() as usize, e[1].as_u64().unwrap() as usize);
        deg[a] += 1;
        deg[b] += 1;
        next[a].push(b);
        next[b].push(a);
    }
    assert!(deg.iter().all(|&d| d == 2));
    let mut seen = vec![false; nv];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in &next[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    assert_eq!(count, nv, "all vertices belong to one component");
    assert_eq!(v["config"]["mode"], "pv");
    assert!(v["bounds"].is_null(), "pv mode reports no separation bounds");
}

#[test]
fn zero_polynomial_exits_2() {
    let out = run(&["mesh", "--poly", "0", "--box", "[-1,1]x[-1,1]"]);
    assert_eq!(code(&out), 2);
    let (stage, message) = error_body(&out);
    assert_eq!(stage, "input");
    assert!(message.contains("zero polynomial"), "message: {message}");
    // Without --box, argument parsing itself rejects the call.
    assert_eq!(code(&run(&["mesh", "--poly", "0"])), 2);
}

#[test]
fn malformed_inputs_exit_2() {
    let cases: [&[&str]; 4] = [
        &["mesh", "--poly", "x^2+y^2-1", "--box", "[0,0.3]x[0,1]"],
        &["mesh", "--poly", "x^2+y^2-1", "--box", "[2,-2]x[-2,2]"],
        &["mesh", "--poly", "x^", "--box", "[-1,1]x[-1,1]"],
        &["pv", "--poly", "x-y", "--box", "[-1,1]x[-1,1]", "--eps", "0"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(code(&out), 2, "{args:?}");
        let (stage, _) = error_body(&out);
        assert_eq!(stage, "input", "{args:?}");
    }
}

#[test]
fn depth_cap_exits_3() {
    // pv mode cannot certify anything near the node of the cubic; the run
    // must stop at the depth cap, not loop.
    let out = run(&["pv", "--poly", NODE, "--box", "[-2,2]x[-2,2]", "--max-depth", "8"]);
    assert_eq!(code(&out), 3);
    let (stage, message) = error_body(&out);
    assert!(!stage.is_empty());
    assert!(message.contains("depth"), "message: {message}");
}

#[test]
fn singular_point_on_boundary_exits_3() {
    // The node sits at the corner of this region, so the boundary barrier
    // can never clear zero.
    let out = run(&[
        "mesh", "--poly", NODE, "--box", "[0,2]x[0,2]",
        "--ev-bound", "1/256", "--delta", "1/16", "--max-depth", "12",
    ]);
    assert_eq!(code(&out), 3);
    let (stage, _) = error_body(&out);
    assert_eq!(stage, "boundary barrier");
}

#[test]
fn mode_flag_matches_subcommand() {
    let sub = run(&["pv", "--poly", "x^2+y^2-1", "--box", "[-2,2]x[-2,2]"]);
    let flag = run(&["--mode", "pv", "--poly", "x^2+y^2-1", "--box", "[-2,2]x[-2,2]"]);
    assert_eq!(code(&sub), 0);
    assert_eq!(code(&flag), 0);
    assert_eq!(sub.stdout, flag.stdout);
}

#[test]
fn reports_are_byte_identical_across_runs_and_threads() {
    let paths = [tmp("det-a.json"), tmp("det-b.json"), tmp("det-c.json")];
    for (p, threads) in paths.iter().zip(["1", "2", "1"]) {
        let out = run(&[
            "mesh", "--poly", NODE, "--box", "[-2,2]x[-2,2]",
            "--ev-bound", "1/256", "--delta", "1/16",
            "--threads", threads, "--out", p.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&paths[1]).unwrap(), "thread count changed the bytes");
    assert_eq!(a, std::fs::read(&paths[2]).unwrap(), "a rerun changed the bytes");
}

#[test]
fn degree_and_branch_modes_agree() {
    let out = run(&["degree", "--poly", NODE, "--box", "[-1/8,1/8]x[-1/8,1/8]"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["singularities"][0]["degree"], 4);

    let out = run(&[
        "oracle", "--op", "branch", "--poly", NODE, "--center", "0,0", "--half-width", "1/64",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["count"], 4);
}

#[test]
fn singularities_mode_stops_after_isolation() {
    let out = run(&[
        "singularities", "--poly", NODE, "--box", "[-2,2]x[-2,2]",
        "--ev-bound", "1/256", "--delta", "1/16",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let sings = v["singularities"].as_array().unwrap();
    assert_eq!(sings.len(), 1);
    assert!(sings[0]["degree"].is_null(), "isolation does not compute degrees");
    assert!(v["vertices"].as_array().unwrap().is_empty());
    assert_eq!(v["config"]["mode"], "singularities");
}

#[test]
fn flag_conflicts_exit_2() {
    let cases: [&[&str]; 3] = [
        &["mesh", "--poly", "x-y", "--box", "[-1,1]x[-1,1]", "--no-collar"],
        &["pv", "--poly", "x-y", "--box", "[-1,1]x[-1,1]", "--ev-bound", "1/4"],
        &["pv", "--poly", "x-y", "--box", "[-1,1]x[-1,1]", "--no-collar", "--collar-eps", "1/8"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(code(&out), 2, "{args:?}");
        let (stage, _) = error_body(&out);
        assert_eq!(stage, "input", "{args:?}");
    }
}
