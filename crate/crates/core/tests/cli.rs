use catq::cli::run;
use catq::params::ParamsFile;

fn data(f: &str) -> String {
    format!("{}/data/{f}", env!("CARGO_MANIFEST_DIR"))
}

fn catq(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("catq").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn glmap_example() {
    assert_eq!(catq(&["weights-glmap", "--n", "2", "--d", "1", "--mu", "1"]), (0, "(1,0)\n".into(), String::new()));
    let (code, out, _) = catq(&["weights-glmap", "--n", "3", "--d", "0", "--mu", "1,0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("no solution"));
}

#[test]
fn msv_params_check() {
    let (code, out, _) = catq(&["params-check", "--params", &data("msv3.json"), "--window", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("OK: 0 violations"), "{out}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(catq(&["no-such-command"]).0, 2);
    assert_eq!(catq(&["params-check"]).0, 2);
    assert_eq!(catq(&["functor-verify", "--spec", "/nonexistent.json"]).0, 2);
    assert_eq!(catq(&["weights-glmap", "--n", "3", "--d", "0", "--mu", "1"]).0, 2);
    assert_eq!(catq(&["cartan-check", "--type", "B2"]).0, 2);
}

#[test]
fn functor_verify_reports_mod4_table() {
    let (code, out, _) = catq(&["functor-verify", "--spec", &data("digamma_a2.json"), "--window", "2", "--threads", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("0 failed"));
    assert!(out.contains("adjacent  (2,1)  c⁺_j⁻¹ t_ij⁻¹ t_ji"), "{out}");
    let (code, js, _) = catq(&["--json", "functor-verify", "--spec", &data("beth_a2.json"), "--window", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&js).unwrap();
    assert_eq!(v["failed"], 0);
}

#[test]
fn output_is_independent_of_threads() {
    let a = catq(&["--json", "functor-verify", "--spec", &data("gimel_a2.json"), "--window", "1", "--threads", "1", "--records"]);
    let b = catq(&["--json", "functor-verify", "--spec", &data("gimel_a2.json"), "--window", "1", "--threads", "3", "--records"]);
    assert_eq!(a, b);
}

#[test]
fn emitted_params_are_accepted_back() {
    for args in [vec!["params-gen", "--type", "A2"], vec!["params-gen", "--type", "A3", "--cyclic"], vec!["params-gen", "--msv", "3"]] {
        let (code, out, _) = catq(&args);
        assert_eq!(code, 0);
        let f = ParamsFile::from_json(&out).unwrap();
        assert_eq!(f.to_json() + "\n", out);
        let again = ParamsFile::from_params(&f.to_params().unwrap()).unwrap();
        assert_eq!(again, f);
    }
}

#[test]
fn klr_and_bubble_commands() {
    let (code, out, _) = catq(&["klr-mul", "--type", "A2", "e(1 1)*x1", "e(1 1)*s_1"]);
    assert_eq!((code, out.trim()), (0, "e(1 1) + e(1 1) * s_1 * x2"));
    let (code, out, _) = catq(&["bubble-eval", "--type", "A2", "--vertex", "1", "--weight", "[1,0]", "--dots", "0"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "c_1_L1");
    let (code, out, _) = catq(&["klr-iso-verify", "--type", "A2", "--root", "1", "--strands", "2", "--max-degree", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("OK:"));
    let (code, out, _) = catq(&["grassmann-check", "--type", "A1", "--window", "3", "--degree", "5"]);
    assert_eq!((code, out.starts_with("OK")), (0, true));
}
