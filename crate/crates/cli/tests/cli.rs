use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use icc_core::{Digraph, IccTemplate, IndexCode};

fn fixture(name: &str) -> PathBuf {
    [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "core",
        "tests",
        "fixtures",
        name,
    ]
    .iter()
    .collect()
}

fn icc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icc"))
        .args(args)
        .env_remove("ICC_EXACT_BOUND")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn compare_d1() {
    let o = icc(&["compare", "--digraph", p(&fixture("d1.json"))]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "{\"n\":6,\"l_cyc\":5,\"l_cc\":6,\"l_icc\":4,\"mais\":4,\"optimal\":true}\n"
    );
}

#[test]
fn compare_exact_bound_from_env() {
    let d1 = fixture("d1.json");
    let o = Command::new(env!("CARGO_BIN_EXE_icc"))
        .args(["compare", "--digraph", p(&d1)])
        .env("ICC_EXACT_BOUND", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    let r: icc_core::SchemeReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.n, 6);
    assert!(r.l_icc >= 4);
    let bad = Command::new(env!("CARGO_BIN_EXE_icc"))
        .args(["compare", "--digraph", p(&d1)])
        .env("ICC_EXACT_BOUND", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_d1_code() {
    let o = icc(&[
        "verify",
        "--digraph",
        p(&fixture("d1.json")),
        "--code",
        p(&fixture("d1_code.txt")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid\n");

    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.txt");
    std::fs::write(&short, "x1+x4\nx2+x5\nx3+x6\n").unwrap();
    let o = icc(&[
        "verify",
        "--digraph",
        p(&fixture("d1.json")),
        "--code",
        p(&short),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("1,2,3"));
}

#[test]
fn mais_of_acyclic_fixture() {
    let o = icc(&["mais", "--digraph", p(&fixture("acyclic.json"))]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "4\n");
}

#[test]
fn generators_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.json");
    let o = icc(&[
        "gen-icc",
        "--template",
        p(&fixture("d1_template.json")),
        "--out",
        p(&d),
    ]);
    assert!(o.status.success());
    assert_eq!(
        std::fs::read_to_string(&d).unwrap(),
        std::fs::read_to_string(fixture("d1.json")).unwrap()
    );

    let o = icc(&["gen-family", "--k", "3"]);
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(fixture("d1.json")).unwrap()
    );
    let g = Digraph::from_json(&stdout(&icc(&["gen-family", "--k", "1"]))).unwrap();
    assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(2, 1)]);

    let t = dir.path().join("t.json");
    let o = icc(&["gen-random", "--k", "4", "--seed", "11", "--out", p(&t)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&t).unwrap();
    let parsed = IccTemplate::from_json(&text).unwrap();
    assert!(parsed.validate().is_ok());
    assert_eq!(parsed.to_json() + "\n", text);
    assert_eq!(parsed.k, 4);
}

#[test]
fn encode_then_decode_every_receiver() {
    let dir = tempfile::tempdir().unwrap();
    let packets = dir.path().join("p.hex");
    let hexes: Vec<String> = ["a300", "100f", "7c05", "5505", "aa0a", "0100"]
        .map(String::from)
        .to_vec();
    std::fs::write(&packets, format!("t=12\n{}\n", hexes.join("\n"))).unwrap();
    let code = dir.path().join("code.txt");
    let tmpl = fixture("d1_template.json");
    let o = icc(&[
        "encode",
        "--template",
        p(&tmpl),
        "--packets",
        p(&packets),
        "--out",
        p(&code),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let listing = std::fs::read_to_string(&code).unwrap();
    let parsed = IndexCode::from_listing(&listing).unwrap();
    assert_eq!(parsed.len(), 4);
    assert_eq!(parsed.to_listing(), listing);

    let d1 = Digraph::from_json(&std::fs::read_to_string(fixture("d1.json")).unwrap()).unwrap();
    for v in 1..=6 {
        let side: Vec<String> = (1..=6)
            .map(|u| {
                if d1.has_arc(v, u) {
                    hexes[u - 1].clone()
                } else {
                    "-".into()
                }
            })
            .collect();
        let side_file = dir.path().join(format!("s{v}.hex"));
        std::fs::write(&side_file, format!("t=12\n{}\n", side.join("\n"))).unwrap();
        let r = v.to_string();
        let o = icc(&[
            "decode",
            "--template",
            p(&tmpl),
            "--code",
            p(&code),
            "--receiver",
            &r,
            "--side",
            p(&side_file),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o).trim(), hexes[v - 1]);
    }

    // Receiver 1 without x5 cannot run its chain.
    let side_file = dir.path().join("bad.hex");
    let side: Vec<String> = (1..=6)
        .map(|u| if u == 6 { hexes[5].clone() } else { "-".into() })
        .collect();
    std::fs::write(&side_file, format!("t=12\n{}\n", side.join("\n"))).unwrap();
    let o = icc(&[
        "decode",
        "--template",
        p(&tmpl),
        "--code",
        p(&code),
        "--receiver",
        "1",
        "--side",
        p(&side_file),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("message 5"), "{err}");

    // A side file may not carry the receiver's own message.
    let own = dir.path().join("own.hex");
    std::fs::write(&own, format!("t=12\n{}\n", hexes.join("\n"))).unwrap();
    let o = icc(&[
        "decode",
        "--template",
        p(&tmpl),
        "--code",
        p(&code),
        "--receiver",
        "2",
        "--side",
        p(&own),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn encode_without_packets_lists_supports() {
    let o = icc(&["encode", "--template", p(&fixture("d2_template.json"))]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(fixture("d2_code.txt")).unwrap()
    );
}

#[test]
fn domain_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\":2,\"arcs\":[[1,3]]}").unwrap();
    let o = icc(&["mais", "--digraph", p(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());

    let tmpl = dir.path().join("t.json");
    std::fs::write(
        &tmpl,
        r#"{"k":2,"typeI":[2,2],"typeII":{},"attach":{"1,2":5,"2,1":1}}"#,
    )
    .unwrap();
    let o = icc(&["gen-icc", "--template", p(&tmpl)]);
    assert_eq!(o.status.code(), Some(1));

    let ring = dir.path().join("ring.json");
    let arcs: Vec<String> = (1..=21).map(|a| format!("[{a},{}]", a % 21 + 1)).collect();
    std::fs::write(&ring, format!("{{\"n\":21,\"arcs\":[{}]}}", arcs.join(","))).unwrap();
    assert_eq!(icc(&["mais", "--digraph", p(&ring)]).status.code(), Some(1));

    assert_eq!(icc(&[]).status.code(), Some(2));
    assert_eq!(icc(&["gen-family"]).status.code(), Some(2));
    assert_eq!(icc(&["gen-family", "--k", "x"]).status.code(), Some(2));
    assert_eq!(icc(&["gen-family", "--k", "0"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let runs: Vec<Vec<u8>> = (0..3)
        .map(|_| {
            let mut all = Vec::new();
            for args in [
                vec!["gen-random", "--k", "3", "--seed", "5"],
                vec!["compare", "--digraph", p(&fixture("d2.json"))],
                vec!["encode", "--template", p(&fixture("d1_template.json"))],
            ] {
                all.extend(icc(&args).stdout);
            }
            all
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}
