//! Prints `|Adm(μ)|` and the time taken to run every verification suite.

use std::time::Instant;

use wstrata::{adm_elements, run_suite, AdmSet, GroupContext, Suite};

fn main() -> wstrata::Result<()> {
    for g in 1..=6 {
        let ctx = GroupContext::new(g)?;
        let start = Instant::now();
        let n = adm_elements(&ctx)?.len();
        println!("g={g} |Adm|={n} in {:?}", start.elapsed());
        if let Ok(adm) = AdmSet::enumerate(&ctx) {
            let start = Instant::now();
            let report = run_suite(Suite::All, &ctx, Some(&adm))?;
            println!("g={g} all suites passed={} in {:?}", report.passed, start.elapsed());
        }
    }
    Ok(())
}
