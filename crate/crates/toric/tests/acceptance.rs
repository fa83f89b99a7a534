//! Acceptance suite: every criterion the artifact must satisfy, with one
//! pass/fail line per criterion. All comparisons are exact; there are no
//! tolerances anywhere.
//!
//! The rank-3 grid scan is shared across criteria through a `OnceLock`
//! because three of them quantify over the same 1680 fans.

use std::sync::OnceLock;

use toric::verify::{self, BatyrevScan, VerificationRecord, VerifyConfig};

fn batyrev_scans() -> &'static [BatyrevScan] {
    static SCANS: OnceLock<Vec<BatyrevScan>> = OnceLock::new();
    SCANS.get_or_init(|| verify::scan_batyrev_grid(&VerifyConfig::default()))
}

fn report(criterion: &str, records: &[VerificationRecord]) {
    for r in records {
        println!(
            "{}: {} [{}] {}",
            criterion,
            if r.passed() { "PASS" } else { "FAIL" },
            r.id,
            r.details
        );
    }
    let failed: Vec<&VerificationRecord> = records.iter().filter(|r| !r.passed()).collect();
    assert!(
        failed.is_empty(),
        "{criterion} failed: {}",
        failed
            .iter()
            .map(|r| format!("[{}] {}", r.id, r.details))
            .collect::<Vec<_>>()
            .join("; ")
    );
}

#[test]
fn criterion_1_projective_spaces_positive() {
    report("criterion 1", &[verify::check_projective_spaces()]);
}

#[test]
fn criterion_2_p1_bundle_values() {
    report("criterion 2", &[verify::check_p1_bundle_values()]);
}

#[test]
fn criterion_3_plane_bundle_top_powers() {
    report("criterion 3", &[verify::check_plane_bundle_top_powers()]);
}

#[test]
fn criterion_4_rank3_surface_formulas() {
    let scans = batyrev_scans();
    report(
        "criterion 4",
        &[
            verify::check_batyrev_s1(scans),
            verify::check_batyrev_case1(scans),
            verify::check_batyrev_case2(scans),
            verify::check_batyrev_not_nef(scans),
        ],
    );
}

#[test]
fn criterion_5_surface_oracle_agreement() {
    report(
        "criterion 5",
        &[verify::check_hirzebruch_oracle(batyrev_scans())],
    );
}

#[test]
fn criterion_6_quartic_identities() {
    report(
        "criterion 6",
        &[
            verify::check_p2_bundle_quartic(),
            verify::check_bundle_pentagon(),
            verify::check_bundle_ch4_never_positive(),
        ],
    );
}

#[test]
fn criterion_7_cross_validation_properties() {
    report(
        "criterion 7",
        &[
            verify::check_wall_consistency(),
            verify::check_principal_vanishing(),
            verify::check_permutation_invariance(),
            verify::check_ch1_fano_equivalence(),
            verify::check_unimodular_invariance(),
        ],
    );
}

#[test]
fn criterion_8_only_projective_spaces_are_ch2_positive() {
    report(
        "criterion 8",
        &[verify::check_ch2_positive_only_pn(batyrev_scans())],
    );
}
