use std::process::{Command, Output};

fn zstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zstab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn modulus_on_plateau_ten() {
    let o = zstab(&[
        "modulus", "--family", "plateau", "--n", "10", "--eps", "1/4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["delta"], "1/1024");
}

#[test]
fn falsify_finds_the_floor() {
    let o = zstab(&[
        "falsify", "--family", "plateau", "--n", "10", "--eps", "1/4", "--delta", "1/512",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["witness"]["x"], "1/4");
}

#[test]
fn falsify_without_witness_exits_zero() {
    let o = zstab(&[
        "falsify", "--family", "plateau", "--params", "n=10", "--eps", "1/4", "--delta", "1/1024",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["witness"].is_null());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &[
            "modulus", "--family", "plateau", "--n", "10", "--eps", "0/1",
        ][..],
        &[
            "modulus", "--family", "plateau", "--n", "10", "--eps", "0.25",
        ],
        &[
            "modulus", "--family", "plateau", "--n", "10", "--k", "3", "--eps", "1/4",
        ],
        &[
            "modulus", "--family", "plateau", "--params", "n=3,m=1", "--eps", "1/4",
        ],
        &["modulus", "--family", "nonesuch", "--eps", "1/4"],
        &["modulus", "--eps", "1/4"],
        &["frobnicate"],
        &["isolate", "--zeros", "reciprocal", "--X", "0:1"],
        &[
            "falsify", "--family", "cubic", "--a", "1/64", "--eps", "1/4", "--delta", "1/8",
        ],
        &[
            "bisect", "--family", "plateau", "--n", "3", "--lo", "0", "--hi", "1", "--eps", "1/8",
            "--format", "csv",
        ],
    ] {
        let o = zstab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn coverage_verdicts_map_to_exit_codes() {
    let o = zstab(&[
        "coverage", "--family", "plateau", "--n", "10", "--delta", "1/512", "--eps", "1/4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["verdict"], "not_covered");
    let o = zstab(&[
        "coverage", "--family", "cubic", "--a", "0", "--delta", "1/1024", "--eps", "1/4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], "covered");
}

#[test]
fn bisect_exact_zero_on_cubic() {
    let o = zstab(&[
        "bisect", "--family", "cubic", "--a", "0", "--lo", "1/4", "--hi", "3/4", "--eps", "1/1024",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["kind"], "exact_zero");
    assert_eq!(v["point"], "1/2");
}

#[test]
fn isolate_reciprocals() {
    let o = zstab(&["isolate", "--zeros", "reciprocal", "--X", "21/100:1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["rank"], 4);
    assert_eq!(v["sep"], "1/100");
}

#[test]
fn sweep_csv_and_empty_sweep() {
    let o = zstab(&[
        "modulus",
        "--sweep-n",
        "1:3",
        "--eps",
        "1/4",
        "--format",
        "csv",
    ]);
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "n,delta\n1,1/2\n2,1/4\n3,1/8\n"
    );
    let o = zstab(&[
        "modulus",
        "--sweep-n",
        "4:3",
        "--eps",
        "1/4",
        "--format",
        "csv",
    ]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "n,delta\n");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.json");
    let args = ["corpus", "export", "--family", "spike-barrier", "--k", "4"];
    let o = zstab(&args);
    let mut with_file = args.to_vec();
    let p = path.to_str().unwrap();
    with_file.extend(["--output", p]);
    let o2 = zstab(&with_file);
    assert_eq!(o2.status.code(), Some(0));
    assert!(o2.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), o.stdout);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = zstab(&[
        "polybound",
        "--trials",
        "5",
        "--samples",
        "50",
        "--seed",
        "99",
    ]);
    let b = zstab(&[
        "polybound",
        "--trials",
        "5",
        "--samples",
        "50",
        "--seed",
        "99",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = zstab(&[
        "polybound",
        "--trials",
        "5",
        "--samples",
        "50",
        "--seed",
        "99",
        "--format",
        "csv",
    ]);
    assert!(String::from_utf8(c.stdout)
        .unwrap()
        .ends_with("5,250,0,99\n"));
}

#[test]
fn demo_stopping_exits_one() {
    let o = zstab(&["demo-stopping"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["scan_misled"], true);
}
