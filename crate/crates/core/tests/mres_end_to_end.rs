//! Full pipeline over the bundled fixture proofs: check, extract a strategy,
//! confirm it falsifies the formula, translate, and re-check the translation.

use qproof::mres::{
    self, extract_strategy, is_isomorphic, parse_mres, MResReject, MResVerdict,
};
use qproof::qrat::{self, CheckerConfig, UnivRule, Verdict};
use qproof::semantics::{verify_countermodel, StrategyValue};
use qproof::translate;
use qproof::unitprop::AtMode;
use qproof::{parse_qdimacs, Assignment, Var};

const FIXTURES: [(&str, &str, &str); 8] = [
    (
        "f1_equality",
        include_str!("fixtures/f1_equality.qdimacs"),
        include_str!("fixtures/f1_equality.mres"),
    ),
    (
        "f2_squared_pattern",
        include_str!("fixtures/f2_squared_pattern.qdimacs"),
        include_str!("fixtures/f2_squared_pattern.mres"),
    ),
    (
        "f3_shared_merge",
        include_str!("fixtures/f3_shared_merge.qdimacs"),
        include_str!("fixtures/f3_shared_merge.mres"),
    ),
    (
        "f4_universal_axiom",
        include_str!("fixtures/f4_universal_axiom.qdimacs"),
        include_str!("fixtures/f4_universal_axiom.mres"),
    ),
    (
        "f5_select_only",
        include_str!("fixtures/f5_select_only.qdimacs"),
        include_str!("fixtures/f5_select_only.mres"),
    ),
    (
        "f6_xor_diamond",
        include_str!("fixtures/f6_xor_diamond.qdimacs"),
        include_str!("fixtures/f6_xor_diamond.mres"),
    ),
    (
        "f7_iso_diamond",
        include_str!("fixtures/f7_iso_diamond.qdimacs"),
        include_str!("fixtures/f7_iso_diamond.mres"),
    ),
    (
        "f7_iso_diamond_select",
        include_str!("fixtures/f7_iso_diamond.qdimacs"),
        include_str!("fixtures/f7_iso_diamond_select.mres"),
    ),
];

#[test]
fn every_fixture_proof_verifies() {
    for (name, qdimacs, mres_text) in FIXTURES {
        let f = parse_qdimacs(qdimacs).unwrap();
        let proof = parse_mres(mres_text).unwrap();
        let report = mres::check_refutation(&f, &proof);
        assert_eq!(
            report.verdict,
            MResVerdict::VerifiedRefutation,
            "{name}: {:?}",
            report.verdict
        );
    }
}

#[test]
fn every_fixture_strategy_falsifies_its_formula() {
    for (name, qdimacs, mres_text) in FIXTURES {
        let f = parse_qdimacs(qdimacs).unwrap();
        let proof = parse_mres(mres_text).unwrap();
        let report = mres::check_refutation(&f, &proof);
        assert_eq!(report.verdict, MResVerdict::VerifiedRefutation, "{name}");
        let strategy = extract_strategy(&report.elaborated).unwrap();
        assert_eq!(
            verify_countermodel(&f, &strategy),
            Ok(true),
            "{name}: extracted strategy fails to falsify the formula"
        );
    }
}

#[test]
fn every_fixture_translation_verifies_universal_aware() {
    let config = CheckerConfig::new(AtMode::UniversalAware, UnivRule::Ur, false);
    for (name, qdimacs, mres_text) in FIXTURES {
        let f = parse_qdimacs(qdimacs).unwrap();
        let proof = parse_mres(mres_text).unwrap();
        let translated = translate(&f, &proof).unwrap();
        assert_eq!(
            translated.steps().len(),
            proof.len(),
            "{name}: one addition per line"
        );
        let report = qrat::check_proof(&f, &translated, config);
        assert_eq!(report.verdict, Verdict::VerifiedRefutation, "{name}");
        assert_eq!(report.steps_used, proof.len(), "{name}");
        assert_eq!(report.stats.at_additions, proof.len(), "{name}");
        assert_eq!(report.stats.qrat_additions, 0, "{name}");
    }
}

/// The translated proofs shed universal literals, so a checker that treats
/// universal literals like any others must refuse the very first addition.
#[test]
fn translations_are_rejected_without_universal_awareness() {
    let config = CheckerConfig::new(AtMode::Propositional, UnivRule::Ur, false);
    for (name, qdimacs, mres_text) in FIXTURES {
        let f = parse_qdimacs(qdimacs).unwrap();
        let proof = parse_mres(mres_text).unwrap();
        let translated = translate(&f, &proof).unwrap();
        let report = qrat::check_proof(&f, &translated, config);
        assert!(
            matches!(report.verdict, Verdict::Rejected { .. }),
            "{name}: {:?}",
            report.verdict
        );
    }
}

#[test]
fn forced_merge_below_the_pivot_is_rejected() {
    let f = parse_qdimacs(include_str!("fixtures/f5_select_only.qdimacs")).unwrap();
    let proof = parse_mres(include_str!("fixtures/f5_bad_forced.mres")).unwrap();
    let report = mres::check_refutation(&f, &proof);
    match report.verdict {
        MResVerdict::Rejected { step, reason } => {
            assert_eq!(step, 3);
            assert!(
                matches!(reason, MResReject::MergeLevelViolation { .. }),
                "{reason:?}"
            );
        }
        other => panic!("expected rejection, got {other:?}"),
    }
}

/// With isomorphic premise maps a resolution selects the first premise's map
/// unchanged; the explicit `m` annotation forces a genuine branch instead.
#[test]
fn annotation_forces_a_merge_where_select_would_apply() {
    let f = parse_qdimacs(include_str!("fixtures/f7_iso_diamond.qdimacs")).unwrap();
    let u = Var::new(3).unwrap();

    let select = parse_mres(include_str!("fixtures/f7_iso_diamond_select.mres")).unwrap();
    let report = mres::check_refutation(&f, &select);
    assert_eq!(report.verdict, MResVerdict::VerifiedRefutation);
    let lines = report.elaborated.lines();
    let selected = &lines[6].maps[&u];
    assert_eq!(selected, &lines[2].maps[&u], "select keeps the first premise's map");

    let forced = parse_mres(include_str!("fixtures/f7_iso_diamond.mres")).unwrap();
    let report = mres::check_refutation(&f, &forced);
    assert_eq!(report.verdict, MResVerdict::VerifiedRefutation);
    let merged = &report.elaborated.lines()[6].maps[&u];
    assert!(merged.len() > selected.len(), "forced merge builds a larger map");
    assert!(!is_isomorphic(merged, selected), "the merge adds a redundant branch");
    let x = Var::new(1).unwrap();
    let y = Var::new(2).unwrap();
    for (xv, yv) in [(false, false), (false, true), (true, false), (true, true)] {
        let mut a = Assignment::new();
        a.set(x, xv);
        a.set(y, yv);
        assert_eq!(
            merged.evaluate(&a).unwrap(),
            selected.evaluate(&a).unwrap(),
            "both behave identically at x={xv}, y={yv}"
        );
    }
}

/// The squared-equality pattern resolves two lines whose inner maps are
/// isomorphic but not structurally equal; select keeps the first one.
#[test]
fn select_applies_to_isomorphic_nontrivial_maps() {
    let f = parse_qdimacs(include_str!("fixtures/f2_squared_pattern.qdimacs")).unwrap();
    let proof = parse_mres(include_str!("fixtures/f2_squared_pattern.mres")).unwrap();
    let report = mres::check_refutation(&f, &proof);
    assert_eq!(report.verdict, MResVerdict::VerifiedRefutation);
    let lines = report.elaborated.lines();
    let v = Var::new(4).unwrap();
    assert_eq!(&lines[6].maps[&v], &lines[2].maps[&v]);
    assert!(lines[6].maps[&v].len() > 1, "the selected map is a real branch");
}

/// The diamond fixture's halves force `u` in opposite directions depending on
/// the two existential inputs; the merged map computes their disequality.
#[test]
fn merged_strategy_computes_xor_of_the_branch_variables() {
    let f = parse_qdimacs(include_str!("fixtures/f6_xor_diamond.qdimacs")).unwrap();
    let proof = parse_mres(include_str!("fixtures/f6_xor_diamond.mres")).unwrap();
    let report = mres::check_refutation(&f, &proof);
    assert_eq!(report.verdict, MResVerdict::VerifiedRefutation);
    let u = Var::new(3).unwrap();
    let map = &report.elaborated.last().unwrap().maps[&u];
    let x = Var::new(1).unwrap();
    let y = Var::new(2).unwrap();
    for (xv, yv) in [(false, false), (false, true), (true, false), (true, true)] {
        let mut a = Assignment::new();
        a.set(x, xv);
        a.set(y, yv);
        assert_eq!(
            map.evaluate(&a).unwrap(),
            StrategyValue::Assign(xv != yv),
            "u at x={xv}, y={yv}"
        );
    }
}

#[test]
fn stats_reflect_the_map_operations_used() {
    let f = parse_qdimacs(include_str!("fixtures/f3_shared_merge.qdimacs")).unwrap();
    let proof = parse_mres(include_str!("fixtures/f3_shared_merge.mres")).unwrap();
    let report = mres::check_refutation(&f, &proof);
    assert_eq!(report.verdict, MResVerdict::VerifiedRefutation);
    assert_eq!(report.stats.axioms, 4);
    assert_eq!(report.stats.resolutions, 4);
    assert!(report.stats.merges >= 1, "the annotated line must merge");
}
