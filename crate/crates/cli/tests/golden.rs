//! Golden-output tests for the `multifrac` binary: report keys, exact
//! texts, and exit codes are pinned so any behavioral drift shows up here.

use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_multifrac"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
        out.status.code().expect("no signal"),
    )
}

fn stdout_of(args: &[&str]) -> String {
    let (out, err, code) = run(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    out
}

#[test]
fn solve_reports_identity_and_basis() {
    assert_eq!(
        stdout_of(&["solve", "braid:3", "a b a B A B"]),
        "identity: true\nbasis: universal\n"
    );
    assert_eq!(
        stdout_of(&["solve", "free:2", "a A"]),
        "identity: true\nbasis: universal\n"
    );
    assert_eq!(
        stdout_of(&["solve", "affine-A2", "a B"]),
        "identity: false\nbasis: universal\n"
    );
}

#[test]
fn solve_undecided_exits_three() {
    // 1/c/aba reduces to two distinct irreducible multifractions, so the
    // exhaustive fallback cannot decide the word.
    let (out, _, code) = run(&["solve", "affine-A2", "C a b a"]);
    assert_eq!(code, 3);
    assert_eq!(
        out,
        "identity: undecided\nreason: 2 distinct irreducible reducts, none empty\n"
    );
}

#[test]
fn solve_all_uses_exhaustive_oracle() {
    assert_eq!(
        stdout_of(&["solve", "braid:3", "a b a B A B", "--all"]),
        "identity: true\nbasis: exhaustive\n"
    );
}

#[test]
fn nf_prints_form_depth_denominator() {
    assert_eq!(
        stdout_of(&["nf", "raag-abc", "A c b A"]),
        "nf: b/a/c/a\ndepth: 4\ndenominator: a\n"
    );
    assert_eq!(
        stdout_of(&["nf", "braid:3", "a b a"]),
        "nf: aba\ndepth: 1\ndenominator: aba\n"
    );
    assert_eq!(stdout_of(&["nf", "free:2", "a b B"]), "nf: a\ndepth: 1\ndenominator: a\n");
    // The identity has no denominator entry.
    assert_eq!(stdout_of(&["nf", "braid:3", "a A"]), "nf: []\ndepth: 0\n");
}

#[test]
fn nf_gate_fails_with_witness_unless_asserted() {
    let (out, _, code) = run(&["nf", "affine-A2", "a"]);
    assert_eq!(code, 4);
    assert_eq!(out, "3ore: fail\nwitness: a b c\n");
    assert_eq!(
        stdout_of(&["nf", "affine-A2", "a", "--assert-3ore"]),
        "nf: a\ndepth: 1\ndenominator: a\n"
    );
}

#[test]
fn equal_compares_group_elements() {
    assert_eq!(stdout_of(&["equal", "braid:3", "a b a", "b a b"]), "equal: true\n");
    assert_eq!(stdout_of(&["equal", "braid:3", "a b", "b a"]), "equal: false\n");
}

#[test]
fn reduce_prints_the_trace() {
    assert_eq!(
        stdout_of(&["reduce", "braid:3", "a/aba/b"]),
        "initial: a/aba/b\nR 1 a 1/ab/b\nR 2 b a/ab/1\nRx a/ab\nfinal: a/ab\n"
    );
    assert_eq!(
        stdout_of(&["reduce", "braid:3", "a/aba/b", "--format", "keyvalue"]),
        "initial: a/aba/b\nstep: R 1 a 1/ab/b\nstep: R 2 b a/ab/1\nstep: Rx a/ab\nfinal: a/ab\n"
    );
}

#[test]
fn reduce_surfaces_non_confluence() {
    let (out, err, code) = run(&["reduce", "affine-A2", "1/c/aba"]);
    assert_eq!(code, 4);
    assert_eq!(out, "");
    assert!(err.contains("3-Ore"), "stderr was: {err}");
    assert_eq!(
        stdout_of(&["reduce", "affine-A2", "1/c/aba", "--all"]),
        "reducts: 2\nreduct: ac/ca/ba\nreduct: bc/cb/ab\n"
    );
}

#[test]
fn check_reports_ore_and_fc() {
    assert_eq!(stdout_of(&["check", "affine-A2"]), "3ore: fail\nwitness: a b c\nfc: no\n");
    assert_eq!(stdout_of(&["check", "braid:3"]), "3ore: pass\nfc: yes\n");
    assert_eq!(stdout_of(&["check", "raag-abc"]), "3ore: pass\nfc: yes\n");
}

#[test]
fn basics_lists_both_sides() {
    assert_eq!(
        stdout_of(&["basics", "affine-A2"]),
        "right-count: 10\nleft-count: 10\nc-max: 2\n\
         right: 1\nright: a\nright: b\nright: c\nright: ab\nright: ac\n\
         right: ba\nright: bc\nright: ca\nright: cb\n\
         left: 1\nleft: a\nleft: b\nleft: c\nleft: ab\nleft: ac\n\
         left: ba\nleft: bc\nleft: ca\nleft: cb\n"
    );
}

#[test]
fn class_lists_every_member() {
    assert_eq!(
        stdout_of(&["class", "raag-abc", "a b c"]),
        "canonical: abc\nsize: 3\nword: abc\nword: acb\nword: bac\n"
    );
}

#[test]
fn lcm_and_gcd_report_both_sides() {
    assert_eq!(stdout_of(&["lcm", "braid:3", "a", "b"]), "right-lcm: aba\nleft-lcm: aba\n");
    assert_eq!(stdout_of(&["lcm", "free:2", "a", "b"]), "right-lcm: none\nleft-lcm: none\n");
    assert_eq!(stdout_of(&["gcd", "braid:3", "ab", "a"]), "left-gcd: a\nright-gcd: 1\n");
}

#[test]
fn gamma_four_dot_is_pinned() {
    let expected = "digraph diagram {\n\
        \x20 \"base\" [role=four_prong, style=filled, fillcolor=lightgrey, peripheries=2];\n\
        \x20 \"r4.1\" [role=boundary];\n\
        \x20 \"r4.2\" [role=boundary];\n\
        \x20 \"r4.3\" [role=boundary];\n\
        \x20 \"c4.0\" [role=four_prong, style=filled, fillcolor=lightgrey];\n\
        \x20 \"base\" -> \"r4.1\";\n\
        \x20 \"r4.2\" -> \"r4.1\";\n\
        \x20 \"r4.2\" -> \"r4.3\";\n\
        \x20 \"base\" -> \"r4.3\";\n\
        \x20 \"base\" -> \"c4.0\";\n\
        \x20 \"c4.0\" -> \"r4.1\";\n\
        \x20 \"r4.2\" -> \"c4.0\";\n\
        \x20 \"c4.0\" -> \"r4.3\";\n\
        }\n";
    assert_eq!(stdout_of(&["diagram", "gamma:4"]), expected);
}

#[test]
fn diagram_runs_are_deterministic() {
    let first = stdout_of(&["diagram", "braid:3", "bab/ba/bab/ba/bb/aab"]);
    let second = stdout_of(&["diagram", "braid:3", "bab/ba/bab/ba/bb/aab"]);
    assert_eq!(first, second);
    // The depth-6 instance whose nine scheduled steps all fire.
    for tile in 1..=9 {
        assert!(first.contains(&format!("\"t{tile}\"")), "missing tile t{tile}");
    }
    assert!(!first.contains("\"t10\""));
}

#[test]
fn diagram_writes_to_file() {
    let path = std::env::temp_dir().join("multifrac-golden-g6.dot");
    let out = stdout_of(&["diagram", "gamma:6", "--out", path.to_str().unwrap()]);
    assert_eq!(out, "");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("digraph diagram {\n"));
    assert_eq!(text.matches("role=").count(), 14);
}

#[test]
fn presentation_files_load() {
    let path = std::env::temp_dir().join("multifrac-golden-pres.txt");
    std::fs::write(&path, "atoms: a b\nrel: ab = ba\ntrust: gcd-monoid cancellative\n").unwrap();
    let out = stdout_of(&["nf", path.to_str().unwrap(), "a b A"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out, "nf: b\ndepth: 1\ndenominator: b\n");
}

#[test]
fn printed_multifractions_reparse_to_equal_values() {
    use multifrac::{Monoid, Presentation};
    let m = Monoid::new(Presentation::preset("raag-abc").unwrap()).unwrap();
    for (args, key) in [
        (vec!["nf", "raag-abc", "A c b A"], "nf: "),
        (vec!["reduce", "raag-abc", "ab/b/c", "--format", "keyvalue"], "final: "),
        (vec!["reduce", "raag-abc", "ab/b/c", "--all"], "reduct: "),
    ] {
        let out = stdout_of(&args);
        let mut seen = false;
        for line in out.lines() {
            if let Some(text) = line.strip_prefix(key) {
                let parsed = m.parse_mf(text).expect("printed value parses");
                assert_eq!(m.render_mf(&parsed), text, "round-trip of {line}");
                seen = true;
            }
        }
        assert!(seen, "no `{key}` line in {out}");
    }
}

#[test]
fn speed_flags_never_change_output() {
    let plain = stdout_of(&["lcm", "braid:3", "a", "b"]);
    assert_eq!(stdout_of(&["lcm", "braid:3", "a", "b", "--no-reversing-accelerator"]), plain);
    assert_eq!(stdout_of(&["lcm", "braid:3", "a", "b", "--use-reversing-accelerator"]), plain);
    let checked = stdout_of(&["check", "braid:3"]);
    assert_eq!(stdout_of(&["check", "braid:3", "--jobs", "1"]), checked);
    assert_eq!(stdout_of(&["check", "braid:3", "--jobs", "2"]), checked);
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(run(&["solve", "braid:3", "q q"]).2, 2);
    assert_eq!(run(&["solve", "nosuch:7", "a"]).2, 2);
    assert_eq!(run(&["diagram", "braid:3"]).2, 2);
    assert_eq!(run(&["diagram", "gamma:5"]).2, 2);
    assert_eq!(run(&["reduce", "braid:3", "a/x!/b"]).2, 2);
}

#[test]
fn exhausted_caps_exit_five() {
    let (_, err, code) = run(&["reduce", "braid:3", "ab/ba/ab/ba", "--all", "--node-cap", "3"]);
    assert_eq!(code, 5);
    assert!(err.contains("cap"), "stderr was: {err}");
}
