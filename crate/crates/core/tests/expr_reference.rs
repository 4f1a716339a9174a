//! Checks the expression oracle against frozen reference verdicts produced
//! by a real Python 3 interpreter's `eval` on the same strings.
//!
//! `expr_len3_python_eval.txt` is exhaustive over length-3 strings; the
//! mixed-length file holds random and hand-picked cases. Cases in the
//! documented divergence classes (evaluation-budget blowups and float range
//! limits of a real interpreter) were excluded when the files were frozen.

use seqvalid_core::oracle::expr::{eval_expression, EvalBudget};

fn run_fixture(name: &str) -> (usize, Vec<String>) {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path}: {e}"));
    let budget = EvalBudget::default();
    let mut total = 0;
    let mut mismatches = Vec::new();
    for line in text.lines() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, expr) = line.split_once('\t').expect("label<TAB>expr");
        let expected = label == "1";
        total += 1;
        let got = eval_expression(expr, budget);
        if got.is_valid() != expected {
            mismatches.push(format!(
                "{expr:?}: python says {}, oracle says {} ({:?})",
                expected,
                got.is_valid(),
                got.reason()
            ));
        }
    }
    (total, mismatches)
}

#[test]
fn agrees_with_python_eval_on_all_length_3_strings() {
    let (total, mismatches) = run_fixture("expr_len3_python_eval.txt");
    assert_eq!(total, 9261);
    assert!(
        mismatches.is_empty(),
        "{} of {} mismatch, first 20:\n{}",
        mismatches.len(),
        total,
        mismatches.iter().take(20).cloned().collect::<Vec<_>>().join("\n")
    );
}

#[test]
fn agrees_with_python_eval_on_mixed_length_cases() {
    let (total, mismatches) = run_fixture("expr_cases_python_eval.txt");
    assert!(total > 30_000);
    assert!(
        mismatches.is_empty(),
        "{} of {} mismatch, first 20:\n{}",
        mismatches.len(),
        total,
        mismatches.iter().take(20).cloned().collect::<Vec<_>>().join("\n")
    );
}
