use super::label::{label, Labeling, Outcome};
use super::{gc::gc_max_in_place, EvalError, RuleName, Status};
use crate::syntax::{Binding, Expr, Fresh, Name, Path};

/// Outcome of one LRPgc step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Reduced(RuleName),
    Done(Status),
}

/// Performs one LRPgc step in place: maximal gc if applicable, otherwise the
/// normal-order rule at the labeled redex.
pub fn step_in_place(e: &mut Expr, fresh: &mut Fresh) -> Result<Step, EvalError> {
    if let Some(rule) = gc_max_in_place(e) {
        return Ok(Step::Reduced(rule));
    }
    let lab = label(e)?;
    match lab.outcome {
        Outcome::Whnf => Ok(Step::Done(Status::Whnf)),
        Outcome::Blackhole => Ok(Step::Done(Status::Blackhole)),
        Outcome::Redex(rule) => {
            apply(e, rule, &lab, fresh);
            Ok(Step::Reduced(rule))
        }
    }
}

/// One step on a copy of `e`, with fresh names above those of `e`.
pub fn step(e: &Expr) -> Result<(Expr, Step), EvalError> {
    let mut out = e.clone();
    let mut fresh = Fresh::above(e);
    let s = step_in_place(&mut out, &mut fresh)?;
    Ok((out, s))
}

fn take(e: &mut Expr) -> Expr {
    std::mem::replace(e, Expr::Var(Name::new("_")))
}

fn node<'a>(e: &'a mut Expr, p: &Path) -> &'a mut Expr {
    e.at_mut(p).expect("labeled path exists")
}

/// Applies a reduction rule at a labeling produced for `e`.
pub(crate) fn apply(e: &mut Expr, rule: RuleName, lab: &Labeling, fresh: &mut Fresh) {
    use RuleName::*;
    match rule {
        Lbeta => {
            let n = node(e, &lab.focus);
            let Expr::App(f, r) = take(n) else { unreachable!() };
            let Expr::Lam(x, s) = *f else { unreachable!() };
            *n = Expr::Letrec(vec![Binding::new(x, *r)], s);
        }
        SeqC => {
            let n = node(e, &lab.focus);
            let Expr::Seq(_, t) = take(n) else { unreachable!() };
            *n = *t;
        }
        CaseC => {
            let n = node(e, &lab.focus);
            let Expr::Case(_, s, alts) = take(n) else { unreachable!() };
            let Expr::Con(c, args) = *s else { unreachable!() };
            let alt = alts.into_iter().find(|a| a.con == c).expect("labeling checked the alternative");
            *n = if args.is_empty() {
                alt.rhs
            } else {
                let bs = alt.vars.into_iter().zip(args).map(|(y, s)| Binding::new(y, s)).collect();
                Expr::Letrec(bs, Box::new(alt.rhs))
            };
        }
        Lapp | Lseq | Lcase => {
            let n = node(e, &lab.focus);
            let mut outer = take(n);
            let inner = match &mut outer {
                Expr::App(f, _) => f,
                Expr::Seq(a, _) => a,
                Expr::Case(_, s, _) => s,
                _ => unreachable!(),
            };
            let Expr::Letrec(bs, t) = take(inner) else { unreachable!() };
            **inner = *t;
            *n = Expr::Letrec(bs, Box::new(outer));
        }
        LletIn => {
            let Expr::Letrec(outer, body) = e else { unreachable!() };
            let Expr::Letrec(inner, r) = take(body) else { unreachable!() };
            outer.extend(inner);
            **body = *r;
        }
        LletE => {
            let i = lab.focus.0[0];
            let Expr::Letrec(outer, _) = e else { unreachable!() };
            let Expr::Letrec(inner, t) = take(&mut outer[i].rhs) else { unreachable!() };
            outer[i].rhs = *t;
            outer.extend(inner);
        }
        CpIn | CpE => {
            let v = e.at(&lab.focus).unwrap().freshen_with(fresh);
            *node(e, lab.target.as_ref().unwrap()) = v;
        }
        SeqIn | SeqE => {
            let n = node(e, &lab.target.as_ref().unwrap().parent().unwrap());
            let Expr::Seq(_, t) = take(n) else { unreachable!() };
            *n = *t;
        }
        CaseIn | CaseE => {
            let case_path = lab.target.as_ref().unwrap().parent().unwrap();
            let Expr::Con(c, _) = e.at(&lab.focus).unwrap() else { unreachable!() };
            let c = *c;
            let n = node(e, &case_path);
            let Expr::Case(_, _, alts) = take(n) else { unreachable!() };
            let alt = alts.into_iter().find(|a| a.con == c).expect("labeling checked the alternative");
            if alt.vars.is_empty() {
                *n = alt.rhs;
                return;
            }
            let ys: Vec<Name> = alt.vars.iter().map(|z| fresh.name(*z)).collect();
            let zs = alt.vars.into_iter().zip(&ys).map(|(z, y)| Binding::new(z, Expr::Var(*y))).collect();
            *n = Expr::Letrec(zs, Box::new(alt.rhs));
            let x1 = node(e, &lab.focus);
            let Expr::Con(_, ts) = x1 else { unreachable!() };
            let ts = std::mem::replace(ts, ys.iter().map(|y| Expr::Var(*y)).collect());
            let Expr::Letrec(env, _) = e else { unreachable!() };
            env.extend(ys.into_iter().zip(ts).map(|(y, t)| Binding::new(y, t)));
        }
        _ => unreachable!("{rule} is not a reduction rule"),
    }
}
