//! End-to-end tests against the built binary: documented exit codes,
//! canonical text output, and byte-stable JSON certificates compared to
//! the golden files in `tests/golden/`.

use std::process::{Command, Output};

fn taf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code present")
}

#[test]
fn qexp_prints_the_known_head() {
    let out = taf(&["qexp", "--form", "Delta6", "--order", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0, 1, -6, 9, 4\n");
}

#[test]
fn qexp_rejects_unknown_forms_and_bad_orders() {
    assert_eq!(code(&taf(&["qexp", "--form", "Zeta", "--order", "5"])), 2);
    assert_eq!(code(&taf(&["qexp", "--form", "E1", "--order", "1"])), 2);
}

#[test]
fn genus_prints_the_first_hazewinkel_image() {
    let out = taf(&["genus", "--family", "picard", "--prime", "7", "--n", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "-1/3*G2\n");
}

#[test]
fn genus_reduces_mod_p_on_request() {
    let out = taf(&[
        "genus", "--family", "legendre", "--prime", "7", "--n", "1", "--modp",
    ]);
    assert_eq!(code(&out), 0);
    // v1 = (3 kappa^2 - lambda)/2 and 1/2 = 4 mod 7.
    assert_eq!(stdout(&out), "5*kappa^2 + 3*lambda\n");
}

#[test]
fn genus_validates_family_prime_and_height() {
    assert_eq!(
        code(&taf(&["genus", "--family", "weier", "--prime", "7", "--n", "1"])),
        2
    );
    assert_eq!(
        code(&taf(&["genus", "--family", "picard", "--prime", "5", "--n", "1"])),
        2
    );
    assert_eq!(
        code(&taf(&["genus", "--family", "picard", "--prime", "7", "--n", "4"])),
        2
    );
}

#[test]
fn identity_single_id_prints_a_bare_verdict() {
    let out = taf(&["identity", "--id", "kappa-square"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "PASS\n");
}

#[test]
fn identity_recorded_mismatch_fails_honestly() {
    // The tabulated sextic-discriminant closed form does not equal the
    // computed discriminant; the checker must say so.
    let out = taf(&["identity", "--id", "disc-sextic"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "FAIL\n");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("kappa^2 - lambda"), "witness on stderr: {err}");
}

#[test]
fn identity_unknown_id_is_invalid_input() {
    assert_eq!(code(&taf(&["identity", "--id", "nope"])), 2);
}

#[test]
fn identity_list_covers_both_registries() {
    let out = taf(&["identity", "--list"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("disc-quartic"));
    assert!(text.contains("kappa-square"));
}

#[test]
fn certify_output_is_byte_stable_and_matches_golden() {
    let a = taf(&["certify", "--family", "legendre", "--prime", "7"]);
    let b = taf(&["certify", "--family", "legendre", "--prime", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "identical flags give identical bytes");
    assert_eq!(stdout(&a), include_str!("golden/legendre-p7.json"));
}

#[test]
fn golden_certificates_are_reproduced() {
    for (family, prime, golden) in [
        (
            "legendre",
            "13",
            include_str!("golden/legendre-p13.json"),
        ),
        ("picard", "7", include_str!("golden/picard-p7.json")),
        ("shiga", "7", include_str!("golden/shiga-p7.json")),
    ] {
        let out = taf(&["certify", "--family", family, "--prime", prime]);
        assert_eq!(code(&out), 0, "{family} p={prime}");
        assert_eq!(stdout(&out), golden, "{family} p={prime}");
    }
}

#[test]
fn certify_writes_the_certificate_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let out = taf(&[
        "certify",
        "--family",
        "legendre",
        "--prime",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    // Summary moves to standard output when the JSON goes to a file.
    assert!(stdout(&out).contains("verdict: PASS"));
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, include_str!("golden/legendre-p7.json"));
}

#[test]
fn certify_with_timings_adds_the_optional_block() {
    let out = taf(&["certify", "--family", "legendre", "--prime", "7", "--timings"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("timings_ms"));
}

#[test]
fn certify_validates_family_prime_and_element() {
    assert_eq!(code(&taf(&["certify", "--family", "elliptic", "--prime", "7"])), 2);
    assert_eq!(code(&taf(&["certify", "--family", "picard", "--prime", "5"])), 2);
    assert_eq!(
        code(&taf(&[
            "certify",
            "--family",
            "supersingular",
            "--prime",
            "7"
        ])),
        2
    );
    assert_eq!(
        code(&taf(&[
            "certify", "--family", "legendre", "--prime", "7", "--invert", "Delta_C"
        ])),
        2
    );
}

#[test]
fn supersingular_probe_passes_at_seven() {
    let out = taf(&["supersingular", "--prime", "7"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("v1 = 0 exactly: true"));
    assert!(text.contains("height exactly three: true"));
}

#[test]
fn supersingular_rejects_bad_primes() {
    // 5 = 2 mod 3; 19 = 1 mod 3 but 9 | 18.
    assert_eq!(code(&taf(&["supersingular", "--prime", "5"])), 2);
    assert_eq!(code(&taf(&["supersingular", "--prime", "19"])), 2);
}

#[test]
fn iso_reports_a_p_local_profile() {
    let out = taf(&["iso", "--prime", "7", "--order", "12"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("all coefficients 7-local: true"));
    assert!(text.contains("worst valuation: 0"));
}

#[test]
fn iso_validates_prime_and_order() {
    assert_eq!(code(&taf(&["iso", "--prime", "9", "--order", "12"])), 2);
    assert_eq!(code(&taf(&["iso", "--prime", "7", "--order", "4"])), 2);
}

#[test]
fn restrict_applies_the_printed_images() {
    let out = taf(&["restrict", "--poly", "8*G3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "kappa*lambda\n");
}

#[test]
fn restrict_rejects_malformed_input() {
    assert_eq!(code(&taf(&["restrict", "--poly", "G2^^2"])), 2);
    assert_eq!(code(&taf(&["restrict", "--poly", "kappa + 1"])), 2);
}

#[test]
fn reproduce_runs_the_flagship_row() {
    let out = taf(&["reproduce", "--only", "picard-p13"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("picard-p13"));
    assert!(text.contains("battery: 1/1 passed"));
}

#[test]
fn reproduce_prefix_filter_selects_groups() {
    let out = taf(&["--threads", "1", "reproduce", "--only", "degeneration"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("battery: 3/3 passed"));
}

#[test]
fn reproduce_unknown_tag_is_invalid_input() {
    assert_eq!(code(&taf(&["reproduce", "--only", "weierstrass"])), 2);
}

#[test]
fn threads_env_variable_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_taf"))
        .env("TAF_THREADS", "1")
        .args(["reproduce", "--only", "curve-g3-factor"])
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("battery: 1/1 passed"));
}
