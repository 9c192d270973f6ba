//! One line per acceptance criterion; every tolerance lives in
//! `latgrowth::reproduce`.

use latgrowth::reproduce::{CriterionResult, CRITERIA};

fn report(r: &CriterionResult) {
    println!("{r} in {:.1}s", r.elapsed.as_secs_f64());
    for c in &r.checks {
        println!("    [{}] {}: {}", if c.pass { "ok" } else { "FAIL" }, c.label, c.detail);
    }
}

fn main() {
    let results: Vec<CriterionResult> = CRITERIA
        .iter()
        .map(|c| {
            let r = c.run();
            report(&r);
            r
        })
        .collect();
    let failed: Vec<u32> = results.iter().filter(|r| !r.pass()).map(|r| r.id).collect();
    println!("{} of {} criteria pass", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
