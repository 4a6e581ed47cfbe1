use std::process::{Command, Output};

use serde_json::Value;

fn laakso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laakso"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = laakso(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn worked_distance() {
    let v = json(&["distance", "0@1/5", "101(0)@1/10"]);
    assert_eq!(v["distance"], "11/30");
    assert_eq!(v["interval"]["a"], "1/10");
    assert_eq!(v["interval"]["b"], "1/3");
}

#[test]
fn same_point_is_at_distance_zero() {
    assert_eq!(json(&["distance", "0@1/2", "0@1/2"])["distance"], "0");
}

#[test]
fn order_two_levels() {
    let v = json(&["wormholes", "--order", "2", "--from", "0", "--to", "1"]);
    let want = ["1/9", "2/9", "4/9", "5/9", "7/9", "8/9"];
    assert_eq!(v.as_array().unwrap().len(), want.len());
    for (got, want) in v.as_array().unwrap().iter().zip(want) {
        assert_eq!(got, want);
    }
}

#[test]
fn infinite_geodesic_reports_its_limit() {
    let v = json(&["geodesic", "0@0", "(1)@1", "--depth", "4"]);
    assert_eq!(v["distance"], "1");
    assert_eq!(v["length"], "1");
    assert_eq!(v["path"]["limit"]["omega_bar"], "1/2");
    assert_eq!(v["path"]["limit"]["truncated_at"], 4);
    assert_eq!(v["classification"]["shape"], "monotone-up");
}

#[test]
fn nearest_path_length() {
    let v = json(&["path", "0@1/5", "101(0)@1/10", "--strategy", "nearest"]);
    assert_eq!(v["length"], "119/270");
    let heights: Vec<&str> = v["path"]["jumps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|j| j["height"].as_str().unwrap())
        .collect();
    assert_eq!(heights, ["1/3", "10/27"]);
}

#[test]
fn printed_points_reparse_to_themselves() {
    let v = json(&["matrix", "--samples", "6", "--seed", "7"]);
    for p in v["points"].as_array().unwrap() {
        let p = p.as_str().unwrap();
        let again = json(&["distance", p, p]);
        assert_eq!(again["x"], p);
        assert_eq!(again["distance"], "0");
    }
}

#[test]
fn matrix_is_symmetric_with_zero_diagonal() {
    let v = json(&["matrix", "--samples", "7", "--prefix-len", "3", "--seed", "11"]);
    let rows = v["distances"].as_array().unwrap();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[i], "0");
        for (j, d) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(d, &rows[j][i]);
        }
    }
    assert_eq!(v, json(&["matrix", "--samples", "7", "--prefix-len", "3", "--seed", "11"]));
}

#[test]
fn space_info_for_derived_scale() {
    let v = json(&["--q", "13/10", "space-info", "-k", "3"]);
    assert_eq!(v["n"], "10");
    assert_eq!(v["m"].as_array().unwrap().len(), 3);
    assert_eq!(v["D"][0], v["m"][0]);
}

#[test]
fn oracle_check_finds_no_discrepancy() {
    let v = json(&["oracle-check", "--depth", "2", "--samples", "40", "--seed", "3"]);
    assert_eq!(v["max_discrepancy"], "0");
}

#[test]
fn edgelist_uses_exact_weights() {
    let out = laakso(&["oracle-export", "--depth", "1", "--format", "edgelist"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // 2 columns x 3 vertical edges, plus wormholes at 1/3 and 2/3
    assert_eq!(lines.len(), 8);
    assert!(lines.contains(&"0:1/3 1:1/3 0"));
    assert!(lines.contains(&"0:0 0:1/3 1/3"));
}

#[test]
fn svg_output() {
    let out = laakso(&["geodesic", "0@1/5", "101(0)@1/10", "--format", "svg"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert!(text.contains("stroke-dasharray"));
}

#[test]
fn exit_codes() {
    let bad = laakso(&["distance", "1021@1/2", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("1021"));
    assert_eq!(laakso(&["distance", "0@7/5", "0"]).status.code(), Some(2));
    assert_eq!(laakso(&["--s", "3", "--q", "3/2", "space-info"]).status.code(), Some(2));
    assert_eq!(laakso(&["--s", "2", "space-info"]).status.code(), Some(2));
    let infeasible = laakso(&["--m-override", "3,5", "space-info"]);
    assert_eq!(infeasible.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&infeasible.stderr).contains("index 2"));
}
