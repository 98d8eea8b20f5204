//! Acceptance criteria 1 to 9, run one at a time so that their runtime
//! limits are measured without contention. Prints one line per criterion
//! with its measurements and exits non-zero if any criterion fails.
//!
//! Positional arguments select criteria by id or by a substring of the
//! name; flags meant for the default test harness are ignored.

use std::process::ExitCode;
use typechange::acceptance::CRITERIA;

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected = CRITERIA.iter().filter(|(id, name, _)| {
        filters.is_empty() || filters.iter().any(|f| *f == id.to_string() || name.contains(f.as_str()))
    });
    let (mut ran, mut failed) = (0, Vec::new());
    for (id, _, criterion) in selected {
        let result = criterion();
        println!("{result}");
        for line in &result.details {
            println!("    {line}");
        }
        ran += 1;
        if !result.passed {
            failed.push(*id);
        }
    }
    println!("\nacceptance: {}/{ran} criteria passed", ran - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {failed:?}");
        ExitCode::FAILURE
    }
}
