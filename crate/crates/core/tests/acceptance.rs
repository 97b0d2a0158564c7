//! One line per acceptance criterion, then a single assertion over all.
//! `DHK_SEED` overrides the default seed. Lines go straight to the stdout
//! handle so they show up without `--nocapture`.

use std::io::Write;

use dhk_core::verify::{CriterionReport, Suite};

fn seed() -> u64 {
    std::env::var("DHK_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0)
}

#[test]
fn acceptance() {
    let seed = seed();
    let mut out = std::io::stdout().lock();
    let mut reports: Vec<CriterionReport> = Vec::new();
    for suite in Suite::ALL {
        let r = suite.run(seed);
        writeln!(out, "{r}").unwrap();
        for note in &r.notes {
            writeln!(out, "    {note}").unwrap();
        }
        for f in r.failures.iter().take(5) {
            writeln!(out, "    case {}: {}", f.case, f.message).unwrap();
        }
        reports.push(r);
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    writeln!(out, "{}/{} criteria passed", reports.len() - failed.len(), reports.len()).unwrap();
    drop(out);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
