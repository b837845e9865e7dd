use super::*;
use crate::syntax::{gen::random_closed_term, parse_expr, Path};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p(s: &str) -> Expr {
    parse_expr(s).unwrap()
}

fn eval(s: &str) -> EvalResult {
    evaluate(&p(s), 10_000, SizeOptions::PLAIN).unwrap()
}

#[test]
fn label_examples() {
    let l = label(&p(r"(\x -> x) True")).unwrap();
    assert_eq!(l.outcome, Outcome::Redex(RuleName::Lbeta));
    assert_eq!(l.focus, Path::root());

    let l = label(&p(r"letrec x = \y -> y in x")).unwrap();
    assert_eq!(l.outcome, Outcome::Redex(RuleName::CpIn));
    assert_eq!(l.chain.iter().map(|c| c.0.to_string()).collect::<Vec<_>>(), ["x"]);
    assert_eq!(l.target, Some(Path(vec![1])));

    assert_eq!(label(&p("letrec x = x in x")).unwrap().outcome, Outcome::Blackhole);
}

#[test]
fn label_chain_runs_from_value_binding() {
    let l = label(&p(r"letrec a = \y -> y, b = a, c = b in seq c True")).unwrap();
    assert_eq!(l.outcome, Outcome::Redex(RuleName::CpIn));
    let names: Vec<String> = l.chain.iter().map(|c| c.0.to_string()).collect();
    assert_eq!(names, ["a", "b", "c"]);
    assert_eq!(l.target, Some(Path(vec![3, 0])));
    assert_eq!(l.focus, Path(vec![0]));
}

#[test]
fn label_selects_every_basic_rule() {
    let cases = [
        ("seq True Nil", RuleName::SeqC),
        ("case True of { True -> Nil; False -> Nil }", RuleName::CaseC),
        ("(letrec a = True in \\x -> x) Nil", RuleName::Lapp),
        ("seq (letrec a = True in a) Nil", RuleName::Lseq),
        ("case (letrec a = True in a) of { True -> Nil; False -> Nil }", RuleName::Lcase),
        ("letrec a = True in letrec b = a in b", RuleName::LletIn),
        ("letrec a = letrec b = True in b in a", RuleName::LletE),
        ("letrec a = True in seq a a", RuleName::SeqIn),
        ("letrec a = True, b = seq a Nil in b", RuleName::SeqE),
        ("letrec a = True in case a of { True -> a; False -> a }", RuleName::CaseIn),
        ("letrec a = True, b = case a of { True -> Nil; False -> Nil } in b", RuleName::CaseE),
        ("letrec f = \\x -> x, b = f True in b", RuleName::CpE),
    ];
    for (src, rule) in cases {
        assert_eq!(label(&p(src)).unwrap().outcome, Outcome::Redex(rule), "{src}");
    }
}

#[test]
fn label_reports_open_and_stuck_terms() {
    assert!(matches!(label(&p("seq x True")), Err(EvalError::FreeVariable(_))));
    assert!(matches!(label(&p("(True) Nil")), Err(EvalError::Stuck(_))));
    assert!(matches!(label(&p(r"case (\x -> x) of { True -> Nil; False -> Nil }")), Err(EvalError::Stuck(_))));
}

#[test]
fn gc_examples() {
    let (e, ch) = gc_max(&p("letrec x = True, y = Nil in x"));
    assert!(ch);
    assert!(e.alpha_eq(&p("letrec x = True in x")));
    let (e, ch) = gc_max(&p("letrec x = True in Nil"));
    assert!(ch);
    assert_eq!(e, p("Nil"));
    let orig = p("letrec x = Cons y Nil, y = True in x");
    assert_eq!(gc_max(&orig), (orig.clone(), false));
}

#[test]
fn step_examples() {
    let (e, s) = step(&p(r"(\x -> x) True")).unwrap();
    assert_eq!(s, Step::Reduced(RuleName::Lbeta));
    assert!(e.alpha_eq(&p("letrec x = True in x")));

    let (e, s) = step(&p("seq True Nil")).unwrap();
    assert_eq!(s, Step::Reduced(RuleName::SeqC));
    assert_eq!(e, p("Nil"));

    let (e, s) = step(&p(r"letrec x = True in \y -> y")).unwrap();
    assert_eq!(s, Step::Reduced(RuleName::Gc2));
    assert!(e.alpha_eq(&p(r"\y -> y")));

    let (e, s) = step(&p("letrec a = Cons True Nil in case a of { Nil -> Nil; Cons h t -> h }")).unwrap();
    assert_eq!(s, Step::Reduced(RuleName::CaseIn));
    assert!(e.alpha_eq(&p("letrec a = Cons y1 y2, y1 = True, y2 = Nil in letrec h = y1, t = y2 in h")));
}

#[test]
fn whnf_examples() {
    assert!(is_whnf(&p(r"\x -> x")));
    assert!(is_whnf(&p("letrec x = Cons y z, y = True, z = Nil in x")));
    assert!(!is_whnf(&p(r"letrec x = \y -> y in x")));
    assert!(is_lrpgc_whnf(&p(r"\x -> x")));
    assert!(!is_lrpgc_whnf(&p("letrec x = True, y = Nil in x")));
    assert!(is_lrpgc_whnf(&p("letrec x = Cons y Nil, y = True in x")));
}

#[test]
fn evaluate_examples() {
    let r = eval(r"(\x -> x) True");
    assert_eq!(r.summary_line(), "WHNF\t1\t1\t1\t3");
    assert!(r.final_expr.alpha_eq(&p("letrec x = True in x")));
    assert_eq!(r.trace_lines(), ["1\tlbeta\t3"]);

    let r = eval("letrec x = x in x");
    assert_eq!(r.status, Status::Blackhole);
    assert_eq!(r.measures.spmax, Spmax::Unbounded);
    assert_eq!(r.summary_line(), "Blackhole\t0\t0\t0\tinf");
}

#[test]
fn fuel_exhaustion_reports_lower_bounds() {
    let r = evaluate(&p(r"letrec w = \x -> x x in w w"), 50, SizeOptions::PLAIN).unwrap();
    assert_eq!(r.status, Status::FuelExhausted);
    assert_eq!(r.measures.rlnall, 50);
}

#[test]
fn gc_steps_are_traced_but_not_sampled() {
    // Initial state (size 3) leaves by gc, so only the final `True` is sampled.
    let r = eval(r"letrec g = \x -> seq x x in True");
    assert_eq!(r.steps, [(RuleName::Gc2, 3)]);
    assert_eq!(r.measures.spmax, Spmax::Finite(1));
}

fn sample_terms() -> Vec<Expr> {
    (0..300u64).map(|seed| random_closed_term(&mut ChaCha8Rng::seed_from_u64(seed), 5)).collect()
}

fn outcome(e: &Expr) -> Option<(Status, Measures)> {
    evaluate(e, 400, SizeOptions::PLAIN).ok().map(|r| (r.status, r.measures))
}

#[test]
fn evaluation_is_deterministic_and_alpha_invariant() {
    for e in sample_terms() {
        let a = evaluate(&e, 400, SizeOptions::PLAIN);
        let b = evaluate(&e, 400, SizeOptions::PLAIN);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                assert_eq!(a.steps, b.steps);
                assert_eq!(a.final_expr, b.final_expr);
            }
            (a, b) => assert_eq!(a.err(), b.err()),
        }
        assert_eq!(outcome(&e), outcome(&crate::syntax::freshen(&e)), "{e}");
    }
}

#[test]
fn measure_invariants_hold() {
    for e in sample_terms() {
        let Ok(r) = evaluate(&e, 400, SizeOptions::PLAIN) else { continue };
        let m = r.measures;
        assert!(m.rln <= m.rln_lcsc && m.rln_lcsc <= m.rlnall);
        if r.status == Status::Whnf {
            assert!(is_lrpgc_whnf(&r.final_expr), "{}", r.final_expr);
            assert!(m.spmax.finite().unwrap() >= r.final_expr.size(SizeOptions::PLAIN));
            assert_eq!(step(&r.final_expr).unwrap().1, Step::Done(Status::Whnf));
        }
    }
}

#[test]
fn garbage_bindings_do_not_change_spmax() {
    let garbage = p(r"letrec g1 = \z -> Cons z z, g2 = Cons g1 g1 in True");
    let Expr::Letrec(gbs, _) = garbage else { unreachable!() };
    for e in sample_terms() {
        let with = match e.clone() {
            Expr::Letrec(mut bs, body) => {
                bs.extend(gbs.iter().cloned());
                Expr::Letrec(bs, body)
            }
            other => Expr::Letrec(gbs.clone(), Box::new(other)),
        };
        assert_eq!(outcome(&e), outcome(&with), "{e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn whnf_stability(seed in any::<u64>()) {
        let e = random_closed_term(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let done = matches!(step(&e), Ok((_, Step::Done(Status::Whnf))));
        prop_assert_eq!(done, is_lrpgc_whnf(&e));
    }
}

/// Step-by-step evaluation that re-sizes the whole term before every step.
fn reference_eval(e: &Expr, fuel: u64, opts: SizeOptions) -> (Vec<(RuleName, usize)>, Status, Measures, Expr) {
    let mut cur = if e.has_distinct_binders() { e.clone() } else { crate::syntax::freshen(e) };
    let mut fresh = Fresh::above(&cur);
    let mut steps = Vec::new();
    let (mut rln, mut rlnall, mut rln_lcsc, mut spmax) = (0, 0, 0, 0);
    let status = loop {
        let size = cur.size(opts);
        let before = cur.clone();
        match step_in_place(&mut cur, &mut fresh).unwrap() {
            Step::Done(s) => {
                if s == Status::Whnf {
                    spmax = spmax.max(size);
                }
                break s;
            }
            Step::Reduced(rule) if rule.is_gc() => steps.push((rule, size)),
            Step::Reduced(rule) => {
                spmax = spmax.max(size);
                if rlnall >= fuel {
                    cur = before;
                    break Status::FuelExhausted;
                }
                steps.push((rule, size));
                rlnall += 1;
                rln += u64::from(rule.counts_for_rln());
                rln_lcsc += u64::from(rule.counts_for_lcsc());
            }
        }
    };
    let spmax = if status == Status::Blackhole { Spmax::Unbounded } else { Spmax::Finite(spmax) };
    (steps, status, Measures { rln, rlnall, rln_lcsc, spmax }, cur)
}

#[test]
fn evaluate_agrees_with_stepping() {
    use crate::bench::{fold_program, FoldVariant};
    let mut terms = sample_terms();
    for seed in 1000..2500u64 {
        terms.push(random_closed_term(&mut ChaCha8Rng::seed_from_u64(seed), 4 + (seed % 4) as u32));
    }
    for v in FoldVariant::ALL {
        for inlined in [false, true] {
            terms.push(fold_program(v, inlined, 4).unwrap());
        }
    }
    for opts in [SizeOptions::PLAIN, SizeOptions::PEANO_UNIT] {
        for e in &terms {
            let Ok(r) = evaluate(e, 400, opts) else { continue };
            let (steps, status, measures, fin) = reference_eval(e, 400, opts);
            assert_eq!(r.steps, steps, "{e}");
            assert_eq!((r.status, r.measures), (status, measures), "{e}");
            assert_eq!(r.final_expr, fin, "{e}");
        }
    }
}
