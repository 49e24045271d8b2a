use std::collections::BTreeMap;
use std::path::PathBuf;

use symspace::algebra::{format_poly, parse_poly, Presentation, Relation};
use symspace::catalog::{
    check, instantiate, report, route, Catalog, CatalogError, FamilyId, Params, PlanStep, Ranges, SpaceInstance,
};
use symspace::steenrod::{
    char_class_operation, check_steenrod_criterion, ActionEntry, ActionProvenance, Group, Operation, SourceMap,
    SteenrodCriterionInstance, SuspensionModel, TorusModel,
};
use symspace::whitehead::{Criterion, Status, Verdict, Witness};

fn catalog() -> Catalog {
    Catalog::embedded().unwrap()
}

fn inst(family: FamilyId, params: Params) -> SpaceInstance {
    instantiate(&catalog(), family, params).unwrap()
}

fn verdict(family: FamilyId, params: Params) -> Verdict {
    check(&inst(family, params)).unwrap().verdict
}

fn witness(family: FamilyId, params: Params) -> Witness {
    verdict(family, params).certificate().expect("certificate").witness().clone()
}

fn failed(v: &Verdict) -> &str {
    &v.refusal().expect("refusal").failed_hypothesis
}

#[test]
fn data_files_are_canonical() {
    for name in Catalog::embedded_file_names().filter(|n| n.ends_with(".pres")) {
        let text = Catalog::embedded_file(name).unwrap();
        let pres = Presentation::parse(text).unwrap();
        assert_eq!(pres.to_text(), text, "{name} is not in canonical form");
    }
}

#[test]
fn directory_and_embedded_catalogs_agree() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let from_dir = Catalog::from_dir(&dir).unwrap();
    assert_eq!(from_dir.space(FamilyId::EI), catalog().space(FamilyId::EI));
    assert_eq!(from_dir.citation("ganea"), catalog().citation("ganea"));
}

fn mutated_catalog(edit: impl Fn(String) -> String) -> Result<Catalog, CatalogError> {
    let dir =
        std::env::temp_dir().join(format!("symspace-catalog-{}-{:?}", std::process::id(), std::thread::current().id()));
    std::fs::create_dir_all(&dir).unwrap();
    for name in Catalog::embedded_file_names() {
        let text = Catalog::embedded_file(name).unwrap().to_string();
        let text = if name == "facts.toml" { edit(text) } else { text };
        std::fs::write(dir.join(name), text).unwrap();
    }
    let out = Catalog::from_dir(&dir);
    std::fs::remove_dir_all(&dir).unwrap();
    out
}

#[test]
fn malformed_records_are_rejected() {
    let unknown_gen = mutated_catalog(|t| t.replace("x = \"x8\"", "x = \"x7\""));
    assert!(matches!(unknown_gen, Err(CatalogError::Data { .. })));
    let empty_cite = mutated_catalog(|t| t.replace("ganea = \"Ganea", "ganea = \" \" #"));
    assert!(matches!(empty_cite, Err(CatalogError::Data { .. })), "{empty_cite:?}");
    let missing = mutated_catalog(|t| t.replace("id = \"EVIII\"", "id = \"EII\""));
    assert!(matches!(missing, Err(CatalogError::Data { .. })));
    let degree = mutated_catalog(|t| t.replacen("source = \"sphere:8\"", "source = \"sphere:9\"", 1));
    assert!(matches!(degree, Err(CatalogError::Data { .. })));
    let extra_field = mutated_catalog(|t| t.replace("schema = 1", "schema = 1\nbogus = 2"));
    assert!(matches!(extra_field, Err(CatalogError::Data { .. })));
}

#[test]
fn ai_instances_carry_parameter_dependent_data() {
    let ai5 = inst(FamilyId::AI, Params::n(5));
    let pres = ai5.presentations()[0];
    let names: Vec<_> =
        pres.generators().iter().map(|g| (g.name().to_string(), g.degree(), g.squares_to_zero())).collect();
    assert_eq!(names, (2..=5).map(|i| (format!("v{i}"), i, true)).collect::<Vec<_>>());
    assert_eq!(pres.field().characteristic(), 2);
    let s = ai5.steenrod_instance().unwrap();
    assert_eq!(s.alpha.model, SuspensionModel::real_projective(4));
    assert_eq!(s.alpha.pullback["v3"], "Σu^2");
}

#[test]
fn aii_degrees_and_bounds() {
    let aii = inst(FamilyId::AII, Params::n(4));
    let degrees: Vec<u32> = aii.presentations()[0].generators().iter().map(|g| g.degree()).collect();
    assert_eq!(degrees, vec![5, 9, 13]);
    let err = instantiate(&catalog(), FamilyId::AII, Params::n(1)).unwrap_err();
    assert!(err.to_string().contains("n >= 2"), "{err}");
}

#[test]
fn cii_power_of_two_branch() {
    let cii = inst(FamilyId::CII, Params::mn(3, 2));
    let s = cii.steenrod_instance().unwrap();
    assert_eq!(s.operation, Operation::Sq(4));
    assert_eq!(s.alpha.model, SuspensionModel::quasi_projective(2, 2).unwrap());
    assert_eq!((s.a.as_str(), s.b.as_str(), s.x.as_str()), ("q2", "q1", "q2"));
}

#[test]
fn routes() {
    let plan = route(&inst(FamilyId::AI, Params::n(7)));
    let [PlanStep::Steenrod { instance, .. }] = plan.steps.as_slice() else { panic!("{plan:?}") };
    assert_eq!(instance.operation, Operation::Sq(2));
    assert_eq!(instance.x, "v7");
    let mut pair = [instance.a.clone(), instance.b.clone()];
    pair.sort();
    assert_eq!(pair, ["v2", "v7"]);

    let plan = route(&inst(FamilyId::CII, Params::mn(5, 5)));
    let [PlanStep::Steenrod { instance, .. }, PlanStep::Lift(lift)] = plan.steps.as_slice() else { panic!("{plan:?}") };
    assert_eq!(instance.operation, Operation::P { k: 1, prime: 5 });
    assert_eq!(lift.connectivity, 22);

    let plan = route(&inst(FamilyId::BDI, Params::mn(5, 2)));
    assert!(matches!(plan.steps.as_slice(), [PlanStep::Recorded { .. }]));

    let plan = route(&inst(FamilyId::AI, Params::n(2)));
    assert!(matches!(plan.steps.as_slice(), [PlanStep::Recorded { .. }]));
}

#[test]
fn routing_is_total() {
    for n in 3..=12 {
        let s = inst(FamilyId::AI, Params::n(n));
        let op = s.steenrod_instance().unwrap().operation;
        let expect = if n % 4 == 0 || n % 4 == 3 { Operation::Sq(2) } else { Operation::Sq(n - 1) };
        assert_eq!(op, expect, "AI(n={n})");
    }
    for n in 1..=12u32 {
        let s = inst(FamilyId::CII, Params::mn(n, n));
        let op = s.steenrod_instance().unwrap().operation;
        let odd_part = n >> n.trailing_zeros();
        match op {
            Operation::Sq(4) => assert!(n > 1 && odd_part == 1, "n={n}"),
            Operation::P { prime, .. } => assert!(n == 1 || (odd_part > 1 && n % prime == 0), "n={n}"),
            other => panic!("unexpected {other}"),
        }
    }
}

#[test]
fn cii_certifies_up_to_eight() {
    for n in 1..=8 {
        assert!(verdict(FamilyId::CII, Params::mn(n, n)).is_certified(), "CII({n},{n})");
    }
}

#[test]
fn eii_rational_witness() {
    match witness(FamilyId::EII, Params::none()) {
        Witness::Rational { m, n, pair, .. } => {
            assert_eq!((m, n), (8, 8));
            assert_eq!(pair, ["x8".to_string(), "x8".to_string()]);
        }
        w => panic!("{w:?}"),
    }
}

#[test]
fn transferred_witnesses_clear_the_threshold() {
    for f in [FamilyId::EVI, FamilyId::EIX, FamilyId::FI] {
        match witness(f, Params::none()) {
            Witness::Rational { m, n, target_degree, transferred_from, .. } => {
                assert!(m >= 5 && n >= 5 && target_degree >= 5);
                assert!(transferred_from.is_some());
            }
            w => panic!("{f}: {w:?}"),
        }
    }
}

#[test]
fn g_uses_x2_and_x3() {
    match witness(FamilyId::G, Params::none()) {
        Witness::Steenrod { a, b, operation, .. } => {
            let mut pair = [a, b];
            pair.sort();
            assert_eq!(pair, ["x2", "x3"]);
            assert_eq!(operation, "Sq^2");
        }
        w => panic!("{w:?}"),
    }
}

#[test]
fn cp3_is_the_flagged_exception() {
    let v = verdict(FamilyId::AIII, Params::mn(1, 3));
    let r = v.refusal().expect("no certificate for CP^3");
    assert!(r.exception.as_deref().unwrap().contains("CP^3"));
    assert!(r.transcript.entries().iter().any(|e| e.citation.as_deref().is_some_and(|c| c.contains("Ganea"))));
    let v = verdict(FamilyId::DIII, Params::n(3));
    assert!(v.refusal().unwrap().exception.is_some());
}

#[test]
fn cp2_has_no_rational_certificate() {
    let out = check(&inst(FamilyId::AIII, Params::mn(1, 2))).unwrap();
    assert_eq!(out.attempts.len(), 1);
    assert_eq!(out.attempts[0].criterion, Criterion::Rational);
    assert_eq!(out.verdict.certificate().unwrap().criterion(), Criterion::RecordedExternal);
}

#[test]
fn eiv_is_a_partial_projective_plane() {
    let r = report(&catalog(), &Ranges::default().restrict(FamilyId::EIV, None).unwrap()).unwrap();
    assert_eq!(r.rows.len(), 1);
    assert_eq!(r.rows[0].criterion, Criterion::PartialProjectivePlane);
    assert!(r.rows[0].certified);
}

#[test]
fn empty_ranges_give_an_empty_report() {
    assert!(report(&catalog(), &Ranges::empty()).unwrap().rows.is_empty());
}

#[test]
fn bdi_witness_is_normalization_invariant() {
    for (m, n) in [(5, 3), (7, 4), (6, 5), (8, 6)] {
        assert_eq!(witness(FamilyId::BDI, Params::mn(m, n)), witness(FamilyId::BDI, Params::mn(n, m)));
    }
}

#[test]
fn bdi_lift_appends_the_equivalence() {
    let v = verdict(FamilyId::BDI, Params::mn(6, 4));
    let c = v.certificate().unwrap();
    assert_eq!(c.space(), "BDI(m=6, n=4)");
    let entries = c.transcript().entries();
    assert!(entries.iter().any(|e| e.status == Status::Asserted && e.outcome == "4-equivalence"));
    assert!(entries.iter().any(|e| e.check == "lift dimension bound" && e.status == Status::MachineVerified));
}

#[test]
fn default_report_concludes_everything_but_cp3() {
    let r = report(&catalog(), &Ranges::default()).unwrap();
    let open: Vec<_> = r.rows.iter().filter(|row| !row.certified).map(|row| row.space.as_str()).collect();
    assert_eq!(open, ["AIII(m=1, n=3)", "DIII(n=3)"]);
    assert!(r.rows.iter().filter(|row| !row.certified).all(|row| row.exception.is_some()));
    for row in &r.rows {
        let hermitian = match row.family {
            FamilyId::BDI => row.params.m.min(row.params.n) == Some(2),
            f => f.is_hermitian(),
        };
        if hermitian && row.certified && row.space != "AIII(m=1, n=1)" {
            assert_eq!(row.criterion, Criterion::RecordedExternal, "{}", row.space);
        }
        for e in row.transcript.entries() {
            if e.status == Status::Asserted {
                assert!(e.citation.as_deref().is_some_and(|c| !c.trim().is_empty()), "{}: {}", row.space, e.check);
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let a = serde_json::to_string(&report(&catalog(), &Ranges::default()).unwrap()).unwrap();
    let b = serde_json::to_string(&report(&catalog(), &Ranges::default()).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn cross_checks_are_reported() {
    for f in [FamilyId::EI, FamilyId::FII, FamilyId::G] {
        let out = check(&inst(f, Params::none())).unwrap();
        assert_eq!(out.cross_checks.len(), 1);
        assert!(out.cross_checks[0].agrees, "{f}: {}", out.cross_checks[0].summary());
    }
    let ei = check(&inst(FamilyId::EI, Params::none())).unwrap();
    assert_eq!(ei.cross_checks[0].residual, "3*q4");
    assert_eq!(ei.cross_checks[0].image, "x8^2");
}

/// The ideal `(x2^3 + x3^2, x2*x3)` contains `x2*x3` itself.
#[test]
fn g_with_the_smaller_ideal_fails_condition_5() {
    let g = inst(FamilyId::G, Params::none());
    let mut s = g.steenrod_instance().unwrap().clone();
    let alg = s.cohomology.presentation.algebra().clone();
    let rels = vec![
        Relation::explicit(6, parse_poly(&alg, "x2^3 + x3^2").unwrap()),
        Relation::explicit(5, parse_poly(&alg, "x2*x3").unwrap()),
    ];
    s.cohomology.presentation = Presentation::new(alg, rels, None).unwrap();
    let v = check_steenrod_criterion(&s).unwrap();
    assert!(failed(&v).starts_with("condition (5)"), "{}", failed(&v));
}

fn rp_source(label: &str, top: u32) -> SourceMap {
    SourceMap {
        label: label.into(),
        model: SuspensionModel::real_projective(top),
        pullback: (2..=top + 1).map(|i| (format!("v{i}"), format!("Σu^{}", i - 1))).collect::<BTreeMap<_, _>>(),
        citation: "reflection map".into(),
    }
}

/// `Sq^3` with `b = v3` from `ΣRP^2` and `a = x = v_n` from `ΣRP^{n-1}`.
fn sq3_instance(n: u32) -> SteenrodCriterionInstance {
    let ai = inst(FamilyId::AI, Params::n(n));
    let mut s = ai.steenrod_instance().unwrap().clone();
    let so = TorusModel::new(Group::SpecialOrthogonal, n as usize, 2).unwrap();
    let value = char_class_operation(&so, &format!("w{n}"), Operation::Sq(3)).unwrap();
    let alg = s.cohomology.presentation.algebra().clone();
    let images: Vec<_> = (2..=n).map(|i| alg.gen_named(&format!("v{i}"))).collect();
    let (image, _) = so.pull_back(&value, &alg, &images).unwrap();
    assert_eq!(format_poly(&alg, &image), format!("v3*v{n}"));
    s.operation = Operation::Sq(3);
    s.b = "v3".into();
    s.beta = rp_source("g̃|ΣRP^2", 2);
    s.cohomology.actions.insert(
        format!("v{n}"),
        Operation::Sq(3),
        ActionEntry { value: image, provenance: ActionProvenance::Cited { citation: "Wu formula".into() } },
    );
    s
}

#[test]
fn sq3_instances_fail_condition_6() {
    for n in [5, 6, 9, 10] {
        let v = check_steenrod_criterion(&sq3_instance(n)).unwrap();
        assert!(failed(&v).starts_with("condition (6)"), "n={n}: {}", failed(&v));
    }
}

#[test]
fn condition_6_mutation_on_ai7() {
    let ai7 = inst(FamilyId::AI, Params::n(7));
    assert!(check(&ai7).unwrap().verdict.is_certified());
    let s = ai7.steenrod_instance().unwrap();
    let entry = (["Σu^4", "Σu^6"].into_iter())
        .find(|c| s.alpha.model.entries().any(|(k, op, _)| k == *c && op == Operation::Sq(2)))
        .expect("a recorded Sq^2 entry in degree 7");

    let mut deleted = s.clone();
    deleted.alpha.model = s.alpha.model.without_entry(entry, Operation::Sq(2)).unwrap();
    let v = check(&ai7.with_steenrod_instance(deleted).unwrap()).unwrap().verdict;
    assert!(failed(&v).starts_with("condition (6)"), "{}", failed(&v));

    let mut nonzero = s.clone();
    nonzero.alpha.model = s.alpha.model.with_entry(entry, Operation::Sq(2), 1).unwrap();
    let v = check(&ai7.with_steenrod_instance(nonzero).unwrap()).unwrap().verdict;
    assert!(failed(&v).starts_with("condition (6)"), "{}", failed(&v));
}

#[test]
fn cross_check_mismatch_is_surfaced() {
    let ei = inst(FamilyId::EI, Params::none());
    let mut s = ei.steenrod_instance().unwrap().clone();
    let alg = s.cohomology.presentation.algebra().clone();
    let op = Operation::P { k: 1, prime: 5 };
    let mut entry = s.cohomology.actions.get("x8", op).unwrap().clone();
    entry.value = parse_poly(&alg, "2*x8^2").unwrap();
    s.cohomology.actions.insert("x8", op, entry);
    let out = check(&ei.with_steenrod_instance(s).unwrap()).unwrap();
    assert!(!out.cross_checks[0].agrees);
    assert!(out.cross_checks[0].summary().contains("MISMATCH"));
    let t = out.verdict.certificate().unwrap().transcript();
    assert!(t.entries().iter().any(|e| e.outcome.contains("MISMATCH")));
}

#[test]
fn parameter_errors() {
    let cat = catalog();
    assert!(matches!(instantiate(&cat, FamilyId::AI, Params::n(1)), Err(CatalogError::Parameter { .. })));
    assert!(matches!(instantiate(&cat, FamilyId::CII, Params::n(1)), Err(CatalogError::Parameter { .. })));
    assert!(matches!(instantiate(&cat, FamilyId::G, Params::n(1)), Err(CatalogError::Parameter { .. })));
    assert!(Ranges::default().restrict(FamilyId::BDI, Some(1)).is_err());
}
