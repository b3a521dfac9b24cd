//! End-to-end tests that drive the `comlen` binary the way a user would:
//! through argv, stdin-free, checking stdout, stderr and exit codes.

use std::io::Write;
use std::process::{Command, Output};

use comlen::{Alphabet, CommutatorPresentation, ReducedWord};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_comlen"))
        .args(args)
        .output()
        .expect("failed to spawn the comlen binary")
}

/// Runs expecting success and returns stdout.
fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "comlen {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout is utf-8")
}

/// Runs with `--json` prepended and parses stdout.
fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).expect("stdout is valid json")
}

/// Runs expecting failure; returns (exit code, stderr).
fn fails(args: &[&str]) -> (i32, String) {
    let out = run(args);
    assert!(!out.status.success(), "comlen {args:?} unexpectedly succeeded");
    (out.status.code().expect("exit code"), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn xy() -> Alphabet {
    Alphabet::new(["x", "y"]).unwrap()
}

fn reduced(a: &Alphabet, text: &str) -> ReducedWord {
    a.parse(text).unwrap().reduced()
}

/// Zeroes every `elapsed_ms` field so timing noise does not break equality.
fn scrub_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for (key, val) in map.iter_mut() {
                if key == "elapsed_ms" {
                    *val = Value::from(0);
                } else {
                    scrub_timings(val);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(scrub_timings),
        _ => {}
    }
}

#[test]
fn cl_prints_the_length() {
    assert_eq!(stdout(&["cl", "[x,y]^2"]), "cl = 2\n");
    for backend in ["bfs", "pairing", "guided", "both"] {
        assert_eq!(stdout(&["cl", "--backend", backend, "[x,y]^2"]), "cl = 2\n");
    }
    assert_eq!(stdout(&["cl", "--backend", "guided", "[x,y]^5"]), "cl = 3\n");
}

#[test]
fn cl_json_report_schema() {
    let report = json(&["cl", "[x,y]^2"]);
    assert_eq!(report["input"], "[x,y]^2");
    assert_eq!(report["reduced"], "x^-1 y^-1 x y x^-1 y^-1 x y");
    assert_eq!(report["backend"], "both");
    assert_eq!(report["cl"], 2);
    assert_eq!(report["verified"], true, "default backend cross-checks");
    let stats = &report["stats"];
    for field in ["nodes_expanded", "dedup_hits", "pairings_enumerated", "elapsed_ms"] {
        assert!(stats[field].is_u64(), "stats.{field} missing in {report}");
    }
    assert!(stats["frontier_sizes"].is_array());
    assert!(report["elapsed_ms"].is_u64());
    assert!(report.get("presentations").is_none(), "cl does not emit presentations");
}

#[test]
fn cl_single_backend_is_not_marked_verified() {
    let report = json(&["cl", "--backend", "pairing", "[x,y]^2"]);
    assert_eq!(report["backend"], "pairing");
    assert_eq!(report["cl"], 2);
    assert_eq!(report["verified"], false);
}

#[test]
fn present_text_parses_back_to_the_input() {
    let out = stdout(&["present", "[x,y]^3"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("cl = 2"));
    let a = xy();
    let target = reduced(&a, "[x,y]^3");
    let mut count = 0;
    for line in lines {
        // a presentation prints as [u,v][u',v'] which is itself word syntax
        assert_eq!(reduced(&a, line), target, "line {line:?} does not expand to [x,y]^3");
        assert_eq!(line.matches("][").count(), 1, "expected exactly two pairs in {line:?}");
        count += 1;
    }
    assert_eq!(count, 1, "default mode prints a single presentation");
}

#[test]
fn present_json_pairs_rebuild_the_word() {
    let report = json(&["present", "[x,y]^3"]);
    assert_eq!(report["cl"], 2);
    assert_eq!(report["verified"], true);
    let a = xy();
    let presentations = report["presentations"].as_array().unwrap();
    assert_eq!(presentations.len(), 1);
    for pres in presentations {
        let pairs: Vec<(ReducedWord, ReducedWord)> = pres
            .as_array()
            .unwrap()
            .iter()
            .map(|p| {
                (reduced(&a, p["u"].as_str().unwrap()), reduced(&a, p["v"].as_str().unwrap()))
            })
            .collect();
        assert_eq!(pairs.len(), 2);
        let rebuilt = CommutatorPresentation::new(a.clone(), pairs).expand();
        assert_eq!(rebuilt, reduced(&a, "[x,y]^3"));
    }
}

#[test]
fn present_all_min_lists_every_distinct_presentation() {
    let squared = stdout(&["present", "--all-min", "[x,y]^2"]);
    assert_eq!(squared, "cl = 2\n[x,y][x,y]\n", "[x,y]^2 has a unique minimal presentation");

    let cubed = stdout(&["present", "--all-min", "[x,y]^3"]);
    let lines: Vec<&str> = cubed.lines().collect();
    assert_eq!(lines[0], "cl = 2");
    assert!(lines.len() > 2, "[x,y]^3 has several minimal presentations");
    let a = xy();
    let target = reduced(&a, "[x,y]^3");
    let mut seen = std::collections::HashSet::new();
    for line in &lines[1..] {
        assert!(seen.insert(*line), "presentation {line:?} listed twice");
        assert_eq!(reduced(&a, line), target);
    }
}

#[test]
fn present_no_dedup_reaches_the_same_presentation() {
    let plain = stdout(&["present", "[x,y]^2"]);
    let raw = stdout(&["present", "--no-dedup", "[x,y]^2"]);
    assert_eq!(plain, raw);
}

#[test]
fn present_guided_backend() {
    let out = stdout(&["present", "--backend", "guided", "[x,y]^5"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("cl = 3"));
    let a = xy();
    assert_eq!(reduced(&a, lines.next().unwrap()), reduced(&a, "[x,y]^5"));
}

#[test]
fn is_commutator_witness_multiplies_back() {
    let input = "[x,y] [x^-1,y^-1]";
    let out = stdout(&["is-commutator", input]);
    assert!(out.starts_with("yes\n"), "expected a witness, got {out:?}");

    let report = json(&["is-commutator", input]);
    assert_eq!(report["is_commutator"], true);
    assert_eq!(report["verified"], true);
    let a = xy();
    let witness = &report["witness"];
    let g = reduced(&a, witness["conjugator"].as_str().unwrap());
    let u = reduced(&a, witness["u"].as_str().unwrap());
    let v = reduced(&a, witness["v"].as_str().unwrap());
    let rebuilt = g.conjugate(&ReducedWord::commutator(&u, &v));
    assert_eq!(rebuilt, reduced(&a, input));
}

#[test]
fn is_commutator_rejects_longer_words() {
    assert_eq!(stdout(&["is-commutator", "[x,y]^2"]), "no\n");
    let report = json(&["is-commutator", "[x,y]^2"]);
    assert_eq!(report["is_commutator"], false);
    assert!(report.get("witness").is_none());
}

#[test]
fn the_empty_word_has_length_zero() {
    assert_eq!(stdout(&["cl", "1"]), "cl = 0\n");
    assert_eq!(stdout(&["present", "1"]), "cl = 0\n1\n");
    let out = stdout(&["is-commutator", "1"]);
    assert_eq!(out, "yes\nconjugator = 1\nu = 1\nv = 1\n");
}

#[test]
fn unparsable_words_exit_2() {
    let (code, stderr) = fails(&["cl", "x + y"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("cannot parse"), "stderr: {stderr}");
}

#[test]
fn words_outside_the_commutator_subgroup_exit_3() {
    for sub in ["cl", "present", "is-commutator"] {
        let (code, stderr) = fails(&[sub, "x y"]);
        assert_eq!(code, 3, "{sub} should refuse words with nonzero exponent sums");
        assert!(stderr.contains("exponent sums"), "stderr: {stderr}");
    }
}

#[test]
fn contradictory_flags_exit_2() {
    let (code, stderr) = fails(&["present", "--backend", "guided", "--all-min", "[x,y]"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--backend bfs"), "stderr: {stderr}");

    let (code, _) = fails(&["present", "--backend", "guided", "--no-dedup", "[x,y]"]);
    assert_eq!(code, 2);

    let (code, stderr) = fails(&["bench"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--random"), "stderr: {stderr}");

    let (code, stderr) = fails(&["--threads", "0", "cl", "[x,y]"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--threads"), "stderr: {stderr}");
}

#[test]
fn alphabet_flag_overrides_inference() {
    assert_eq!(stdout(&["--alphabet", "a,b", "cl", "[a,b]"]), "cl = 1\n");
    let (code, stderr) = fails(&["--alphabet", "a,b", "cl", "[x,y]"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown generator"), "stderr: {stderr}");
}

#[test]
fn random_is_reproducible_and_lands_in_the_subgroup() {
    let first = stdout(&["random", "--count", "5", "--seed", "9"]);
    let again = stdout(&["random", "--count", "5", "--seed", "9"]);
    assert_eq!(first, again, "same seed must give the same corpus");
    let other = stdout(&["random", "--count", "5", "--seed", "10"]);
    assert_ne!(first, other, "different seeds should give different corpora");

    let a = xy();
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines.len(), 5);
    for line in lines {
        let word = a.parse(line).expect("generated words parse back");
        assert!(word.in_commutator_subgroup(), "{line} has a nonzero exponent sum");
    }
}

#[test]
fn random_json_report() {
    let report = json(&["random", "--count", "2", "--seed", "7", "--pairs", "2", "--gens", "3"]);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["pairs"], 2);
    assert_eq!(report["alphabet"], serde_json::json!(["x", "y", "z"]));
    let words = report["words"].as_array().unwrap();
    assert_eq!(words.len(), 2);
    let a = Alphabet::new(["x", "y", "z"]).unwrap();
    for w in words {
        assert!(a.parse(w.as_str().unwrap()).unwrap().in_commutator_subgroup());
    }
}

#[test]
fn bench_reads_a_commented_corpus_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# short corpus").unwrap();
    writeln!(file, "[x,y]").unwrap();
    writeln!(file).unwrap();
    writeln!(file, "[x,y]^2").unwrap();
    writeln!(file, "[x,y] [x^-1,y^-1]").unwrap();
    let path = file.path().to_str().unwrap();

    let text = stdout(&["bench", path]);
    assert!(text.contains("over 3 words"), "comments and blanks are skipped: {text}");
    assert!(text.contains("all backends agree on every word"));

    let mut full = vec!["--json", "bench", path];
    let report: Value = serde_json::from_str(&stdout(&full)).unwrap();
    assert_eq!(report["words"], 3);
    assert_eq!(report["agreement"], true);
    let backends = report["backends"].as_array().unwrap();
    assert_eq!(backends.len(), 3);
    for row in backends {
        assert!(row["median_ms"].is_u64());
        assert!(row["total_ms"].is_u64());
    }

    full = vec!["--json", "bench", path, "--backends", "bfs,guided"];
    let report: Value = serde_json::from_str(&stdout(&full)).unwrap();
    assert_eq!(report["backends"].as_array().unwrap().len(), 2);
}

#[test]
fn bench_generates_a_random_corpus() {
    let text = stdout(&["bench", "--random", "--count", "4", "--seed", "3"]);
    assert!(text.contains("over 4 words"), "{text}");
    assert!(text.contains("all backends agree on every word"));
}

#[test]
fn bench_reports_bad_corpus_lines() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "[x,y]").unwrap();
    writeln!(file, "x + y").unwrap();
    let (code, stderr) = fails(&["bench", file.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains(":2: cannot parse"), "error names the offending line: {stderr}");
}

#[cfg(unix)]
#[test]
fn a_closed_pipe_does_not_panic() {
    use std::io::Read;
    use std::process::Stdio;

    // ask for far more output than a pipe buffers, read one byte, then hang
    // up like `| head -1`: the blocked write must end the process quietly
    let mut child = Command::new(env!("CARGO_BIN_EXE_comlen"))
        .args(["random", "--count", "5000", "--seed", "1"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("failed to spawn the comlen binary");
    let mut byte = [0u8; 1];
    child.stdout.take().unwrap().read_exact(&mut byte).unwrap();
    let out = child.wait_with_output().unwrap();
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(!stderr.contains("panic"), "broken pipe must not panic: {stderr}");
}

#[test]
fn worker_threads_do_not_change_the_report() {
    for sub in [vec!["cl", "[x,y]^3"], vec!["present", "--all-min", "[x,y]^3"]] {
        let mut single = json(&sub);
        let mut with_threads = vec!["--threads", "4"];
        with_threads.extend_from_slice(&sub);
        let mut pooled = json(&with_threads);
        scrub_timings(&mut single);
        scrub_timings(&mut pooled);
        assert_eq!(single, pooled, "thread count leaked into the report for {sub:?}");
    }
}
