//! Runs every registered categorical law at a modest case count and prints
//! a one-line verdict per law.
//!
//! Run with: cargo run --example law_suite

use finstoch::laws::{law_names, run_law, CaseGen};

fn main() {
    let gen = CaseGen::with_seed(2024);
    let mut all_passed = true;
    for name in law_names() {
        let report = run_law(name, &gen, 50).unwrap();
        println!(
            "law {:<24} {:>4} cases  {} failures",
            report.law,
            report.cases,
            report.failures.len()
        );
        all_passed &= report.passed();
    }
    println!("\nall laws passed: {all_passed}");
}
