use std::collections::HashMap;

use super::matching::redexes_at;
use super::{Detail, RuleInstance, TransformError, Typing};
use crate::reduce::RuleName;
use crate::syntax::{Alt, Binding, Expr, Fresh, Name, Path};

use RuleName::*;

/// Rewrites `e` at a rule instance previously listed for it.
pub fn apply_rule(e: &Expr, inst: &RuleInstance, typing: Typing) -> Result<Expr, TransformError> {
    match inst.rule {
        SeqInsert | Psi => return Err(TransformError::NotARewrite(inst.rule)),
        CaseId if typing == Typing::Untyped => return Err(TransformError::RequiresTyping(CaseId)),
        _ => {}
    }
    if e.at(&inst.position).is_none() {
        return Err(TransformError::InvalidPath(inst.position.clone()));
    }
    let matched = redexes_at(e, &inst.position, inst.rule).into_iter().any(|m| m.detail == inst.detail);
    if !matched {
        return Err(TransformError::NoMatch { rule: inst.rule, position: inst.position.clone() });
    }
    let mut fresh = Fresh::above(e);
    let mut out = e.clone();
    rewrite(&mut out, inst, &mut fresh);
    Ok(out)
}

fn take(e: &mut Expr) -> Expr {
    std::mem::replace(e, Expr::Var(Name::new("_")))
}

fn slot<'a>(e: &'a mut Expr, p: &Path) -> &'a mut Expr {
    e.at_mut(p).expect("instance paths exist")
}

fn bindings(n: &mut Expr) -> &mut Vec<Binding> {
    match n {
        Expr::Letrec(bs, _) => bs,
        _ => unreachable!("letrec rules sit at a letrec"),
    }
}

/// Fresh variables `y_k` for the arguments of a constructor binding; the
/// binding becomes `c y1 .. yn` and the returned pairs are `y_k = t_k`.
fn abstract_args(rhs: &mut Expr, fresh: &mut Fresh, like: Name) -> Vec<Binding> {
    let Expr::Con(_, args) = rhs else { unreachable!() };
    let ts = std::mem::take(args);
    let ys: Vec<Name> = ts.iter().map(|_| fresh.name(like)).collect();
    *args = ys.iter().map(|y| Expr::Var(*y)).collect();
    ys.into_iter().zip(ts).map(|(y, t)| Binding::new(y, t)).collect()
}

fn alt_for(alts: Vec<Alt>, c: crate::syntax::Symbol) -> Alt {
    alts.into_iter().find(|a| a.con == c).expect("matching checked the alternative")
}

fn rewrite(e: &mut Expr, inst: &RuleInstance, fresh: &mut Fresh) {
    let p = &inst.position;
    match (&inst.rule, &inst.detail) {
        (Lbeta, _) => {
            let n = slot(e, p);
            let Expr::App(f, r) = take(n) else { unreachable!() };
            let Expr::Lam(x, s) = *f else { unreachable!() };
            *n = Expr::Letrec(vec![Binding::new(x, *r)], s);
        }
        (SeqC, _) => {
            let n = slot(e, p);
            let Expr::Seq(_, t) = take(n) else { unreachable!() };
            *n = *t;
        }
        (CaseC, _) => {
            let n = slot(e, p);
            let Expr::Case(_, s, alts) = take(n) else { unreachable!() };
            let Expr::Con(c, args) = *s else { unreachable!() };
            let alt = alt_for(alts, c);
            *n = if args.is_empty() {
                alt.rhs
            } else {
                Expr::Letrec(alt.vars.into_iter().zip(args).map(|(y, t)| Binding::new(y, t)).collect(), Box::new(alt.rhs))
            };
        }
        (Lapp | Lseq | Lcase, _) => {
            let n = slot(e, p);
            let mut outer = take(n);
            let inner = match &mut outer {
                Expr::App(f, _) | Expr::Seq(f, _) | Expr::Case(_, f, _) => f,
                _ => unreachable!(),
            };
            let Expr::Letrec(bs, t) = take(inner) else { unreachable!() };
            **inner = *t;
            *n = Expr::Letrec(bs, Box::new(outer));
        }
        (LletIn, _) => {
            let Expr::Letrec(outer, body) = slot(e, p) else { unreachable!() };
            let Expr::Letrec(inner, r) = take(body) else { unreachable!() };
            outer.extend(inner);
            **body = *r;
        }
        (LletE, Detail::Bindings(is)) => {
            let bs = bindings(slot(e, p));
            let Expr::Letrec(inner, t) = take(&mut bs[is[0]].rhs) else { unreachable!() };
            bs[is[0]].rhs = *t;
            bs.extend(inner);
        }
        (Gc1, Detail::Bindings(dead)) => {
            let bs = bindings(slot(e, p));
            let mut k = 0;
            bs.retain(|_| {
                k += 1;
                !dead.contains(&(k - 1))
            });
        }
        (Gc2, _) => {
            let n = slot(e, p);
            let Expr::Letrec(_, body) = take(n) else { unreachable!() };
            *n = *body;
        }
        (CpIn | CpE | CpS, Detail::Target { binding, target }) => {
            let v = bindings(slot(e, p))[*binding].rhs.freshen_with(fresh);
            *slot(e, target) = v;
        }
        (CpxIn | CpxE, Detail::Target { binding, target }) => {
            let y = bindings(slot(e, p))[*binding].rhs.clone();
            *slot(e, target) = y;
        }
        (CpcxIn | CpcxE | CpcxT, Detail::Target { binding, target }) => {
            let b = &bindings(slot(e, p))[*binding];
            let (x, is_nullary) = (b.var, matches!(&b.rhs, Expr::Con(_, a) if a.is_empty()));
            if is_nullary {
                let c = b.rhs.clone();
                *slot(e, target) = c;
                return;
            }
            let bs = bindings(slot(e, p));
            let new = abstract_args(&mut bs[*binding].rhs, fresh, x);
            let copy = bs[*binding].rhs.clone();
            *slot(e, target) = copy;
            bindings(slot(e, p)).extend(new);
        }
        (Abs, Detail::Bindings(is)) => {
            let bs = bindings(slot(e, p));
            let x = bs[is[0]].var;
            let new = abstract_args(&mut bs[is[0]].rhs, fresh, x);
            bs.extend(new);
        }
        (Abse, _) => {
            let n = slot(e, p);
            let mut con = take(n);
            let like = Name::new("a");
            let bs = abstract_args(&mut con, fresh, like);
            *n = Expr::Letrec(bs, Box::new(con));
        }
        (Xch, Detail::Pair(i, j)) => {
            let bs = bindings(slot(e, p));
            let (x, y) = (bs[*i].var, bs[*j].var);
            bs[*i].var = y;
            bs[*j] = Binding::new(x, Expr::Var(y));
        }
        (Ucp1 | Ucp2 | Ucp3, Detail::Target { binding, target }) => {
            let t = take(&mut bindings(slot(e, p))[*binding].rhs);
            *slot(e, target) = t;
            let n = slot(e, p);
            if inst.rule == Ucp3 {
                let Expr::Letrec(_, body) = take(n) else { unreachable!() };
                *n = *body;
            } else {
                bindings(n).remove(*binding);
            }
        }
        (CaseIn | CaseE | CaseCx, Detail::Target { binding, target }) => {
            let case_path = target.parent().expect("scrutinee has a parent");
            let (x, c, var_args) = {
                let b = &bindings(slot(e, p))[*binding];
                let Expr::Con(c, args) = &b.rhs else { unreachable!() };
                (b.var, *c, args.iter().map(|a| a.as_var()).collect::<Option<Vec<Name>>>())
            };
            let n = slot(e, &case_path);
            let Expr::Case(_, _, alts) = take(n) else { unreachable!() };
            let alt = alt_for(alts, c);
            if alt.vars.is_empty() {
                *n = alt.rhs;
                return;
            }
            if inst.rule == CaseCx {
                let xs = var_args.expect("case-cx binds variables");
                let zs = alt.vars.into_iter().zip(xs).map(|(z, x)| Binding::new(z, Expr::Var(x))).collect();
                *n = Expr::Letrec(zs, Box::new(alt.rhs));
                return;
            }
            let ys: Vec<Name> = alt.vars.iter().map(|_| fresh.name(x)).collect();
            let zs = alt.vars.into_iter().zip(&ys).map(|(z, y)| Binding::new(z, Expr::Var(*y))).collect();
            *n = Expr::Letrec(zs, Box::new(alt.rhs));
            let bs = bindings(slot(e, p));
            let Expr::Con(_, ts) = &mut bs[*binding].rhs else { unreachable!() };
            let ts = std::mem::replace(ts, ys.iter().map(|y| Expr::Var(*y)).collect());
            bs.extend(ys.into_iter().zip(ts).map(|(y, t)| Binding::new(y, t)));
        }
        (SeqIn | SeqE, Detail::Target { target, .. }) => {
            let n = slot(e, &target.parent().expect("seq operand has a parent"));
            let Expr::Seq(_, t) = take(n) else { unreachable!() };
            *n = *t;
        }
        (GcEq, Detail::Pair(i, _)) => {
            bindings(slot(e, p)).remove(*i);
        }
        (Cse, Detail::Pair(i, j)) => {
            let Expr::Letrec(bs, body) = slot(e, p) else { unreachable!() };
            let map: HashMap<Name, Name> = [(bs[*j].var, bs[*i].var)].into();
            bs.remove(*j);
            for b in bs.iter_mut() {
                b.rhs.rename_free(&map);
            }
            body.rename_free(&map);
        }
        (CaseId, _) => {
            let n = slot(e, p);
            let Expr::Case(_, s, _) = take(n) else { unreachable!() };
            *n = *s;
        }
        (rule, detail) => unreachable!("({rule}) has no rewrite for {detail:?}"),
    }
}
