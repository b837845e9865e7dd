use super::*;
use crate::reduce::RuleName;
use crate::syntax::{parse_expr, Name};
use crate::transform::{apply_rule, list_redexes, Typing};
use proptest::prelude::*;

fn p(s: &str) -> Expr {
    parse_expr(s).unwrap()
}

fn first(src: &str, rule: RuleName) -> (Expr, Expr) {
    let s = p(src);
    let inst = list_redexes(&s, rule).into_iter().next().unwrap();
    let t = apply_rule(&s, &inst, Typing::Untyped).unwrap();
    (s, t)
}

fn params(families: &[ContextFamily], depth: u32) -> CheckParams {
    CheckParams { families: families.to_vec(), depth, ..CheckParams::default() }
}

/// Number of grammar words of length at most `d` over five productions.
fn grammar_count(d: u32) -> usize {
    (0..=d).map(|i| 5usize.pow(i)).sum()
}

#[test]
fn reduction_family_sizes() {
    assert_eq!(ContextFamily::Reduction.generate(0, 0).len(), 1);
    assert_eq!(ContextFamily::Reduction.generate(0, 0)[0].body, Expr::var(HOLE));
    for d in 0..=3 {
        let ts = ContextFamily::Reduction.generate(7, d);
        assert_eq!(ts.len(), grammar_count(d));
        let distinct: std::collections::HashSet<String> = ts.iter().map(|t| t.to_string()).collect();
        assert_eq!(distinct.len(), ts.len());
    }
    assert_eq!(grammar_count(2), 31);
}

#[test]
fn templates_have_one_hole_and_close_over_closed_fillers() {
    let filler = p(r"\x -> x");
    for family in ContextFamily::ALL {
        for t in family.generate(3, 2) {
            assert_eq!(t.body.free_occurrences(Name::new(HOLE)).len(), 1, "{t}");
            assert_eq!(t.body.at(&t.hole_path), Some(&Expr::var(HOLE)));
            assert!(t.fill(&filler).is_closed(), "{family}: {t}");
        }
    }
}

#[test]
fn list_driver_contains_the_consumer_context() {
    let ts = ContextFamily::ListDriver.generate(3, 0);
    let Expr::Letrec(bs, body) = &ts[0].body else { panic!("letrec expected") };
    let z = bs.iter().find(|b| b.var == Name::new("z")).unwrap();
    assert_eq!(z.rhs, p("Cons (y 0) (Cons (y 0) (Cons (y 0) Nil))"));
    assert_eq!(bs.iter().find(|b| b.var == Name::new("y")).unwrap().rhs, Expr::var(HOLE));
    assert_eq!(**body, p("case and z of { True -> last z; False -> False }"));
    assert_eq!(ts[1].body, Expr::app(Expr::var(HOLE), Expr::numeral(3)));
}

#[test]
fn holes_are_rejected_unless_unique() {
    assert_eq!(ContextTemplate::new(p("True")), Err(CheckError::HoleCount(0)));
    assert_eq!(ContextTemplate::new(p("seq __hole __hole")), Err(CheckError::HoleCount(2)));
    assert_eq!("b".parse::<ContextFamily>(), Ok(ContextFamily::ListDriver));
    assert!("z".parse::<ContextFamily>().is_err());
}

#[test]
fn growth_fits() {
    assert_eq!(Growth::fit(&[(5, 3), (10, 3), (20, 3)]), Growth::Constant(3));
    assert_eq!(Growth::fit(&[(5, 5), (10, 10), (20, 20)]), Growth::Linear { num: 1, den: 1 });
    assert_eq!(Growth::fit(&[(5, 1), (10, 2), (20, 4)]), Growth::Linear { num: 1, den: 5 });
    assert_eq!(Growth::fit(&[(5, 25), (10, 100), (20, 400)]), Growth::Superlinear);
    assert_eq!(Growth::fit(&[(5, 4), (10, 1), (20, 9)]), Growth::Irregular);
    assert_eq!(Growth::fit(&[(5, 4), (10, 8)]), Growth::Irregular);
    assert!(Growth::Linear { num: 2, den: 3 }.is_leak());
    assert!(!Growth::Linear { num: -1, den: 1 }.is_leak());
    assert!(!Growth::Constant(9).is_leak());
}

#[test]
fn classification_examples() {
    use Classification::*;
    assert_eq!(classify(0, 0, 0, Growth::Constant(0)), EquivalenceConsistent);
    assert_eq!(classify(0, 0, -3, Growth::Constant(0)), ImprovementConsistent);
    assert_eq!(classify(0, 2, -3, Growth::Constant(2)), SafeUpTo(2));
    assert_eq!(classify(0, 9, 0, Growth::Linear { num: 1, den: 1 }), LeakEvidence);
    assert_eq!(classify(1, 0, 0, Growth::Constant(0)), Violation);
}

#[test]
fn cpx_is_equivalent_in_reduction_contexts() {
    let (s, t) = first("letrec x = y, y = True, z = Cons x x in case z of { Nil -> x; Cons a b -> b }", RuleName::CpxIn);
    let v = check_pair(&s, &t, &params(&[ContextFamily::Reduction], 3)).unwrap();
    assert_eq!(v.classification, Classification::EquivalenceConsistent, "{v}");
    assert!(v.contexts_tested > 0);
}

#[test]
fn lbeta_improves_in_reduction_contexts() {
    let (s, t) = first(r"(\x -> seq x (Cons x Nil)) True", RuleName::Lbeta);
    let v = check_pair(&s, &t, &params(&[ContextFamily::Reduction], 3)).unwrap();
    assert_eq!(v.classification, Classification::ImprovementConsistent, "{v}");
    assert_eq!(v.max_delta, -2);
}

#[test]
fn sharing_a_list_leaks_linearly() {
    let leaks = leak_instances().unwrap();
    let cse = leaks.iter().find(|l| l.rule == RuleName::Cse).unwrap();
    let v = check_pair(&cse.s, &cse.t, &params(&[ContextFamily::ListDriver], 0)).unwrap();
    assert_eq!(v.classification, Classification::LeakEvidence, "{v}");
    assert!(matches!(v.growth, Growth::Linear { num, .. } if num > 0));
    assert_eq!(v.counterexample.unwrap().context, "[.] 20");
}

#[test]
fn leak_corpus_entries() {
    let leaks = leak_instances().unwrap();
    let rules: Vec<RuleName> = leaks.iter().map(|l| l.rule).collect();
    assert_eq!(rules, vec![RuleName::Cse, RuleName::SeqInsert, RuleName::CpE]);
    for l in &leaks {
        assert!(l.s.is_closed() && l.t.is_closed());
        assert_ne!(l.s, l.t);
    }
}

#[test]
fn deltas_are_antisymmetric() {
    let pairs = [
        first("letrec x = Cons True Nil in seq x (Cons x Nil)", RuleName::CpcxT),
        first(r"letrec f = \x -> Cons x Nil, a = f True in seq a (f False)", RuleName::CpS),
        first(r"(\x -> seq x (Cons x Nil)) True", RuleName::Lbeta),
    ];
    let ps = probes(&params(&[ContextFamily::Reduction, ContextFamily::ListDriver], 2));
    let cp = CheckParams::default();
    for (s, t) in &pairs {
        for probe in &ps {
            let there = compare(s, t, &probe.template, &cp);
            let back = compare(t, s, &probe.template, &cp);
            match (there, back) {
                (Comparison::Delta(a), Comparison::Delta(b)) => assert_eq!(a, -b),
                (a, b) => assert_eq!(a, b),
            }
        }
    }
}

#[test]
fn empty_context_is_always_probed() {
    for d in 0..4 {
        let ps = probes(&params(&[ContextFamily::Reduction], d));
        assert_eq!(ps[0].template.body, Expr::var(HOLE));
    }
}

#[test]
fn theorem_table_rows() {
    let corpus = instance_corpus().unwrap();
    let leaks = leak_instances().unwrap();
    let table = check_theorem_table(&corpus, &leaks, &CheckParams::default()).unwrap();
    assert_eq!(table.len(), ROWS.len() + 1);
    for r in &table {
        assert_eq!(r.verdict.violations, 0, "{}", r.tsv());
        if r.row.name == "case-cx" {
            // strictly shrinks the term, so Δ < 0 in the empty context
            assert_eq!(r.verdict.classification, Classification::ImprovementConsistent);
            assert!(!r.meets());
        } else {
            assert!(r.meets(), "{}", r.tsv());
        }
    }
    let again = check_theorem_table(&corpus, &leaks, &CheckParams::default()).unwrap();
    let a: Vec<String> = table.iter().map(RowResult::tsv).collect();
    let b: Vec<String> = again.iter().map(RowResult::tsv).collect();
    assert_eq!(a, b);
}

#[test]
fn copy_bounds_hold() {
    let reports = cp_bound_sample(7, 30, DEFAULT_FUEL).unwrap();
    assert_eq!(reports.len(), 30);
    assert!(reports.iter().all(CpBoundReport::holds), "{reports:?}");
    let surface = cp_surface_reports(&instance_corpus().unwrap(), DEFAULT_FUEL).unwrap();
    assert!(!surface.is_empty());
    assert!(surface.iter().all(|r| r.surface_ok == Some(true)), "{surface:?}");
}

#[test]
fn copy_bound_rejects_other_rules() {
    let s = p(r"(\x -> x) True");
    let inst = list_redexes(&s, RuleName::Lbeta).pop().unwrap();
    assert!(matches!(check_cp_bound(&s, &inst, 100), Err(CheckError::NotCopy(_))));
}

proptest! {
    #[test]
    fn classification_matches_aggregate(viol in 0usize..2, a in -20i64..20, b in -20i64..20, slope in -3i64..3) {
        let (max, min) = (a.max(b), a.min(b));
        let growth = if slope == 0 { Growth::Constant(max) } else { Growth::Linear { num: slope, den: 1 } };
        let c = classify(viol, max, min, growth);
        prop_assert_eq!(c, classify(viol, max, min, growth));
        prop_assert_eq!(c == Classification::Violation, viol > 0);
        if viol == 0 {
            prop_assert_eq!(c == Classification::LeakEvidence, slope > 0);
            if slope <= 0 {
                prop_assert_eq!(c == Classification::EquivalenceConsistent, max == 0 && min == 0);
                prop_assert_eq!(
                    matches!(c, Classification::EquivalenceConsistent | Classification::ImprovementConsistent),
                    max <= 0
                );
            }
        }
    }
}
