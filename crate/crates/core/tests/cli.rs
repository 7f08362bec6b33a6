//! Command-line behaviour through `cli::run`.

use sfc_core::cli::run;

fn sfc(args: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sfc").chain(args.split_whitespace());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("sfc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn neighbor_queries() {
    let (code, out, _) = sfc("neighbor --curve hilbert2d_global --level 2 --position 1 --facet right");
    assert_eq!((code, out.trim()), (0, "14 B"));
    let (code, out, _) = sfc("neighbor --curve hilbert2d_global --level 2 --position 1 --facet down");
    assert_eq!((code, out.trim()), (0, "none"));
    let (code, out, _) = sfc("neighbor --curve hilbert2d_global --level 3 --position 28 --facet right --depth 2");
    assert_eq!((code, out.trim()), (0, "35 R"));
    let (_, out, _) = sfc("neighbor --curve hilbert2d_global --level 2 --position 1 --facet up --assume-state H");
    assert!(out.trim().starts_with("14"), "{out}");
    let (_, out, _) = sfc("neighbor --curve peano2_global --level 2 --position 2 --facet 1");
    assert_eq!(out.trim(), "15 R");
}

#[test]
fn bad_input_exits_with_two() {
    let (code, _, err) = sfc("neighbor --curve hilbert2d_global --level 2 --position 16 --facet right");
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = sfc("neighbor --curve hilbert2d_global --level 2 --position 1 --facet 9");
    assert_eq!(code, 2);
    let (code, _, _) = sfc("state --curve nonsense --level 1 --position 0");
    assert_eq!(code, 2);
    let (code, _, _) = sfc("frobnicate");
    assert_eq!(code, 2);
}

#[test]
fn states_and_coordinates() {
    assert_eq!(sfc("state --curve hilbert2d_global --level 3 --position 28").1.trim(), "R");
    assert_eq!(sfc("state --curve hilbert2d_global --level 3 --position 28 --fast").1.trim(), "R");
    assert_eq!(sfc("coords --curve hilbert2d_global --level 2 --position 1").1.trim(), "1 0");
    assert_eq!(sfc("coords --curve hilbert2d_global --level 2 --coords 1,0").1.trim(), "1");
    assert_eq!(sfc("coords --curve morton2 --level 2 --coords 1,1").1.trim(), "3");
}

#[test]
fn verify_and_group() {
    let (code, out, _) = sfc("verify --curve peano2_global");
    assert_eq!(code, 0);
    assert!(out.contains("palindrome") && out.contains("true"), "{out}");
    let (code, out, _) = sfc("verify --curve hilbert2d_global");
    assert_eq!(code, 0);
    assert!(out.contains("false"), "{out}");
    let (code, out, _) = sfc("verify --curve hilbert2d_local");
    assert_eq!(code, 1);
    assert!(out.contains("R1'"), "{out}");
    let (code, out, _) = sfc("verify --curve morton2 --json");
    assert_eq!(code, 0);
    serde_json::from_str::<serde_json::Value>(&out).expect("valid JSON");
    let (code, out, _) = sfc("group --curve hilbert2d_global");
    assert_eq!(code, 0);
    assert!(out.contains("order 4") && out.contains("abelian true"), "{out}");
}

#[test]
fn tables_command() {
    let (code, out, _) = sfc("tables --curve hilbert2d_global");
    assert_eq!(code, 0);
    let t = sfc_core::tables::CurveTables::from_text(&out).unwrap();
    let row = |s: &str| -> String {
        let s = t.state_by_label(s).unwrap();
        (0..4).map(|j| t.labels[t.child(s, j)].clone()).collect()
    };
    assert_eq!(row("H"), "AHHB");
    assert_eq!(row("R"), "BRRA");
    let (code, _, err) = sfc("tables --curve hilbert2d_local");
    assert_ne!(code, 0);
    assert!(err.contains("R1'"), "{err}");
    let (code, out, _) = sfc("tables --curve morton2 --depth 2");
    assert_eq!(code, 0);
    assert!(out.contains('2'));
    let path = temp("h.tables");
    let (code, _, _) = sfc(&format!("tables --curve hilbert2d_global --out {}", path.display()));
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), sfc("tables --curve hilbert2d_global").1);
}

#[test]
fn custom_spec_file() {
    let spec = sfc_core::spec::builtin("sierpinski2d_local").unwrap();
    let path = temp("tri.json");
    sfc_core::spec::save_spec(&spec, &path).unwrap();
    let (code, out, _) = sfc(&format!("verify --spec {}", path.display()));
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = sfc(&format!("verify --spec {}", temp("missing.json").display()));
    assert_eq!(code, 2);
}

#[test]
fn render_command() {
    let (code, out, _) = sfc("render --curve hilbert2d_global --level 2 --labels positions --base 4");
    assert_eq!(code, 0);
    assert_eq!(out.matches("<polygon").count(), 16);
    assert!(out.contains(">00</text>") && out.contains(">33</text>"));
    assert_eq!(sfc("render --curve peano2_global --level 1").1.matches("<polygon").count(), 9);
    assert_eq!(sfc("render --curve sierpinski2d_local --level 5").1.matches("<polygon").count(), 32);
    assert_eq!(sfc("render --curve morton3 --level 1").0, 2);
}

#[test]
fn bench_command() {
    let (code, out, err) = sfc("bench --curve peano2_global --kernel general --levels 5..30 --samples 200 --reps 3");
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "curve,kernel,level,depth,median_ns,samples,reps");
    assert_eq!(lines.len(), 27);
    for kernel in ["fast", "general"] {
        let (code, out, _) =
            sfc(&format!("bench --curve hilbert2d_global --kernel {kernel} --levels 20 --samples 200 --reps 3"));
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2);
    }
    assert_eq!(sfc("bench --curve hilbert3d_global --kernel fast --levels 3 --samples 10 --reps 1").0, 2);
}
