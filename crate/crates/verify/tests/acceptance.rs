//! Prints one verdict line per acceptance criterion and fails if any fails.

fn main() {
    let mut failed = Vec::new();
    for c in boussinesq_verify::CRITERIA {
        let outcome = boussinesq_verify::run(c);
        println!("{outcome}");
        if !outcome.passed {
            failed.push(outcome.id);
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", boussinesq_verify::CRITERIA.len());
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
