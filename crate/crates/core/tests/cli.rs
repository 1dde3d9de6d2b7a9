use extremal::cli;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("extremal").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn constants_text_matches_printed_digits() {
    let (code, out, _) = run(&["constants", "--which", "alpha-star", "--digits", "40", "--format", "text", "--no-envelope"]);
    assert_eq!(code, 0);
    assert_eq!(out, "0.7493265463303675579439619480913446720913 ±1e-40\n");
    let (_, out, _) = run(&["constants", "--which", "alpha-double-star", "--digits", "40", "--format", "text", "--no-envelope"]);
    assert!(out.starts_with("0.569279286584142330986485601616004654998"));
}

#[test]
fn envelope_fields() {
    let v = json(&["constants", "--digits", "20"]);
    assert_eq!(v["command"], Value::from(vec!["constants", "--digits", "20"]));
    assert_eq!(v["config"]["digits"], 20);
    assert!(v["timestamp"].is_string());
    assert_eq!(v["result"]["constant"], "alpha_star");
    assert!(v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn example_family_manifest() {
    let v = json(&["family", "build", "--kind", "example-p2", "--no-envelope"]);
    let fams = v["manifest"]["families"].as_array().unwrap();
    let dims: Vec<u64> = fams.iter().map(|f| f["dimension"].as_u64().unwrap()).collect();
    let sizes: Vec<u64> = fams.iter().map(|f| f["members"].as_u64().unwrap()).collect();
    assert_eq!(dims, [4, 28]);
    assert_eq!(sizes, [4, 2]);
    assert!(v["manifest"]["constants"]["alpha_star"].as_str().unwrap().starts_with("0.7493265463"));
}

#[test]
fn btv_out_of_range_warns() {
    let v = json(&["family", "build", "--kind", "btv", "--alpha", "3/2"]);
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn complexity_csv_schema() {
    let (code, out, _) = run(&["complexity", "--spec", "periodic:0110", "--n-max", "6", "--no-envelope"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,count,window,saturated"));
    let counts: Vec<&str> = lines.map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(counts, ["2", "4", "4", "4", "4", "4"]);
}

#[test]
fn growth_csv_and_header_comments() {
    let (code, out, _) = run(&["growth", "--family", "btv:1", "--word-spec", "periodic:01", "--n", "10", "--depth", "4"]);
    assert_eq!(code, 0);
    let body: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "n,log_norm,r_n,residual");
    assert_eq!(body.len(), 11);
    assert!(out.starts_with("# command: growth"));
}

#[test]
fn jsr_bounds_json() {
    let v = json(&["jsr", "bounds", "--family", "btv:1", "--depth", "6", "--no-envelope"]);
    assert_eq!(v["witness"], "01");
    assert!(v["lower"].as_str().unwrap().starts_with("1.6180339887"));
    assert!(v["upper"].as_str().unwrap().starts_with("1.6180339887"));
}

#[test]
fn lift_round_trip_through_cli() {
    let v = json(&["lift", "encode", "--m", "3", "--word-spec", "periodic:201", "--length", "9", "--no-envelope"]);
    assert_eq!(v["word"], "100001010");
    let v = json(&["lift", "decode", "--m", "3", "--word-spec", "periodic:100001010", "--length", "6", "--no-envelope"]);
    assert_eq!(v["word"], "201201");
    let v = json(&["lift", "decode", "--m", "2", "--word-spec", "prefix:00,pad=cycle(10)", "--shift", "auto", "--length", "4", "--no-envelope"]);
    assert_eq!(v["shift"], 1);
}

#[test]
fn lift_verify_checks() {
    for check in ["feqt", "encode-product"] {
        let (code, out, _) = run(&["lift", "verify", "--family", "toy:3", "--word", "2102", "--check", check, "--format", "text", "--no-envelope"]);
        assert_eq!((code, out.as_str()), (0, "holds\n"));
    }
    let v = json(&["lift", "verify", "--family", "toy:2", "--word", "11", "--check", "support", "--no-envelope"]);
    assert_eq!(v["detail"]["automaton"], false);
    assert_eq!(v["holds"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).0, 2);
    assert_eq!(run(&["constants", "--nope"]).0, 2);
    assert_eq!(run(&["constants", "--which", "pi"]).0, 2);
    assert_eq!(run(&["jsr", "bounds", "--family", "btv:x"]).0, 2);
    assert_eq!(run(&["word", "--spec", "sturmian:gamma=1/2"]).0, 2);
    assert_eq!(run(&["constants", "--digits", "0"]).0, 2);
    // nested payload as csv
    assert_eq!(run(&["jsr", "bounds", "--family", "btv:1", "--format", "csv"]).0, 2);
    // no surviving phase is a computational failure
    assert_eq!(run(&["lift", "phase", "--m", "2", "--word-spec", "periodic:1"]).0, 1);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn config_file_then_flags() {
    let dir = std::env::temp_dir().join(format!("extremal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let conf = dir.join("run.conf");
    std::fs::write(&conf, "# bundle\ndigits = 12\ndepth = 3\nformat = text\n").unwrap();
    let c = conf.to_str().unwrap();

    let v = json(&["constants", "--config", c, "--format", "json"]);
    assert_eq!(v["config"]["digits"], 12);
    assert_eq!(v["config"]["depth"], 3);
    let v = json(&["constants", "--config", c, "--digits", "15", "--format", "json"]);
    assert_eq!(v["config"]["digits"], 15);

    let (code, out, _) = run(&["constants", "--config", c, "--no-envelope"]);
    assert_eq!((code, out.as_str()), (0, "0.749326546330 ±1e-12\n"));

    std::fs::write(&conf, "digitz = 12\n").unwrap();
    assert_eq!(run(&["constants", "--config", c]).0, 2);

    let out_path = dir.join("report.json");
    let (code, out, _) = run(&["constants", "--out", out_path.to_str().unwrap(), "--no-envelope"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["constant"], "alpha_star");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bare_reports_are_byte_stable() {
    let args = ["jsr", "extremality", "--family", "btv:1", "--word-spec", "periodic:0", "--n", "300", "--depth", "5", "--no-envelope"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["diagnostic"]["verdict"], "inconsistent");
}
