//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use fibred::group::{group_from_spec, FiniteGroup};
use fibred::hat::{counterexample_verify, hat_dimension, verify_hat_vs_quotient, PrimeStructure};
use fibred::verify::{
    check_associativity, check_bouc_exhaustive, check_full_projection_idempotents, check_green, check_identity_laws,
    check_no_shared_minimal_group, check_oracle_pairs, Check,
};
use fibred::Result;

const SEED: u64 = 20_240_601;

fn arc(spec: &str) -> Arc<FiniteGroup> {
    Arc::new(group_from_spec(spec).expect("catalog spec"))
}

fn summarize(checks: &[Check]) -> (bool, String) {
    let ok = checks.iter().all(Check::passed);
    let detail = checks
        .iter()
        .map(|c| match c.failures.first() {
            None => format!("{}: {} cases", c.name, c.cases),
            Some(f) => format!("{}: {}/{} failed, first: {f}", c.name, c.failures.len(), c.cases),
        })
        .collect::<Vec<_>>()
        .join("; ");
    (ok, detail)
}

fn counterexample() -> Result<(bool, String)> {
    let r = counterexample_verify()?;
    let detail = match r.first_failure() {
        Some(s) => format!("failed at {:?}: {}", s.name, s.detail),
        None => format!(
            "{} steps; searched {} groups over Q8 and {} over D8",
            r.steps.len(),
            r.searched_q8.len(),
            r.searched_d8.len()
        ),
    };
    Ok((r.passed() && r.searched_q8.len() == 9 && r.searched_d8.len() == 9, detail))
}

fn oracle() -> Result<(bool, String)> {
    Ok(summarize(&[check_oracle_pairs(SEED, 500, 8, &["C2", "C3", "C4"])?]))
}

fn category_axioms() -> Result<(bool, String)> {
    Ok(summarize(&[check_identity_laws(8, &["C2", "C4"])?, check_associativity(SEED, 100, 6, &["C2", "C3", "C4"])?]))
}

fn idempotents() -> Result<(bool, String)> {
    Ok(summarize(&[check_full_projection_idempotents(SEED, 100, 8, &["C2", "C3", "C4"])?]))
}

fn bouc() -> Result<(bool, String)> {
    Ok(summarize(&[check_bouc_exhaustive(8, "C2")?]))
}

fn prime_structure() -> Result<(bool, String)> {
    let mut ok = true;
    let mut dims = Vec::new();
    for g in ["C2", "C3", "C4", "C2xC2", "S3", "Q8", "D8"] {
        for c in ["C2", "C3"] {
            let brute = hat_dimension(arc(g), arc(c), 7)?.dimension;
            let formula = PrimeStructure::new(arc(g), arc(c))?.formula_dimension();
            let report = verify_hat_vs_quotient(arc(g), arc(c), 7)?;
            ok &= brute == formula && report.passed();
            if brute != formula || !report.passed() {
                dims.push(format!("{g}/{c}: brute {brute} formula {formula} mismatches {}", report.mismatches.len()));
            } else {
                dims.push(format!("{g}/{c}={brute}"));
            }
        }
    }
    for (g, expected) in [("C4", 6), ("S3", 2), ("Q8", 30)] {
        let d = hat_dimension(arc(g), arc("C2"), 7)?.dimension;
        ok &= d == expected;
    }
    Ok((ok, dims.join(" ")))
}

fn prime_fibre_minimal_groups() -> Result<(bool, String)> {
    Ok(summarize(&[check_no_shared_minimal_group("Q8", "D8", "C2", 7)?]))
}

fn green() -> Result<(bool, String)> {
    Ok(summarize(&[check_green(SEED, 50, 4, &["C2", "C3"])?]))
}

type Criterion = fn() -> Result<(bool, String)>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("1 counterexample Q8/D8 with fibre C4", counterexample),
        ("2 formula/oracle equivalence", oracle),
        ("3 category axioms", category_axioms),
        ("4 idempotents from full projections", idempotents),
        ("5 factorisations recompose", bouc),
        ("6 prime-fibre structure of the quotient", prime_structure),
        ("7 no shared minimal groups for prime fibre", prime_fibre_minimal_groups),
        ("8 Green functor identities", green),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {name}: {} ({secs:.1}s) {detail}", if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
