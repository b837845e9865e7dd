use std::collections::HashSet;

use super::{classify_context, Detail, RuleInstance};
use crate::reduce::{reachable, RuleName};
use crate::syntax::{Binding, Expr, Name, Path};

use RuleName::*;

/// All instances of `rule` in `e`, positions in pre-order.
pub fn list_redexes(e: &Expr, rule: RuleName) -> Vec<RuleInstance> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk(e, e, rule, &mut path, &mut out);
    out
}

fn walk(root: &Expr, e: &Expr, rule: RuleName, path: &mut Vec<usize>, out: &mut Vec<RuleInstance>) {
    out.extend(redexes_at(root, &Path(path.clone()), rule));
    for (i, c) in e.children().into_iter().enumerate() {
        path.push(i);
        walk(root, c, rule, path, out);
        path.pop();
    }
}

/// Instances of `rule` whose position is exactly `p`.
pub fn redexes_at(e: &Expr, p: &Path, rule: RuleName) -> Vec<RuleInstance> {
    let Some(n) = e.at(p) else { return Vec::new() };
    let details = match n {
        Expr::Letrec(..) => letrec_details(n, rule),
        _ => node_details(n, rule),
    };
    if details.is_empty() {
        return Vec::new();
    }
    let context = classify_context(e, p).expect("path exists");
    details
        .into_iter()
        .map(|(rule, d)| RuleInstance { rule, position: p.clone(), context, detail: absolutize(d, p) })
        .collect()
}

fn absolutize(d: Detail, p: &Path) -> Detail {
    match d {
        Detail::Target { binding, target } => {
            let mut t = p.0.clone();
            t.extend(target.0);
            Detail::Target { binding, target: Path(t) }
        }
        other => other,
    }
}

fn node_details(n: &Expr, rule: RuleName) -> Vec<(RuleName, Detail)> {
    let ok = match (rule, n) {
        (Lbeta, Expr::App(f, _)) => matches!(**f, Expr::Lam(..)),
        (Lapp, Expr::App(f, _)) | (Lseq, Expr::Seq(f, _)) | (Lcase, Expr::Case(_, f, _)) => {
            matches!(**f, Expr::Letrec(..))
        }
        (SeqC, Expr::Seq(v, _)) => v.is_value(),
        (CaseC | CaseStar, Expr::Case(_, s, alts)) => {
            matches!(&**s, Expr::Con(c, _) if alts.iter().any(|a| a.con == *c))
        }
        (Abse, Expr::Con(_, args)) => !args.is_empty(),
        (CaseId, Expr::Case(_, _, alts)) => alts.iter().all(|a| match &a.rhs {
            Expr::Con(c, args) => {
                *c == a.con && args.len() == a.vars.len() && args.iter().zip(&a.vars).all(|(t, v)| t.as_var() == Some(*v))
            }
            _ => false,
        }),
        _ => false,
    };
    let rule = if rule == CaseStar { CaseC } else { rule };
    if ok {
        vec![(rule, Detail::Node)]
    } else {
        Vec::new()
    }
}

/// Where an occurrence sits inside a letrec: in the body or in binding `j`.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Site {
    Body,
    Binding(usize),
}

/// Free occurrences of `bs[i].var` in the other parts of the letrec, as
/// paths relative to the letrec node.
fn uses(bs: &[Binding], body: &Expr, i: usize) -> Vec<(Site, Path)> {
    let x = bs[i].var;
    let mut out = Vec::new();
    for (j, b) in bs.iter().enumerate() {
        if j != i {
            out.extend(b.rhs.free_occurrences(x).into_iter().map(|q| (Site::Binding(j), prefixed(j, q))));
        }
    }
    out.extend(body.free_occurrences(x).into_iter().map(|q| (Site::Body, prefixed(bs.len(), q))));
    out
}

fn prefixed(i: usize, q: Path) -> Path {
    let mut v = vec![i];
    v.extend(q.0);
    Path(v)
}

fn pick(site: Site, in_rule: RuleName, e_rule: RuleName) -> RuleName {
    if site == Site::Body {
        in_rule
    } else {
        e_rule
    }
}

/// True when none of `names` is rebound between the letrec and `rel`.
pub(super) fn capture_free(letrec: &Expr, rel: &Path, names: &HashSet<Name>) -> bool {
    let scope = letrec.binders_above(rel).unwrap_or_default();
    let own = match letrec {
        Expr::Letrec(bs, _) => bs.len(),
        _ => 0,
    };
    !scope.iter().skip(own).any(|y| names.contains(y))
}

/// Whether the path from the letrec to `rel` avoids abstractions (and case
/// alternatives when `top`).
fn reaches(letrec: &Expr, rel: &Path, top: bool) -> bool {
    !letrec.under_lambda(rel) && !(top && letrec.under_alternative(rel))
}

fn scrutinised<'a>(letrec: &'a Expr, rel: &Path) -> Option<&'a Expr> {
    let parent = rel.parent()?;
    if *rel.0.last()? != 0 {
        return None;
    }
    letrec.at(&parent).filter(|n| matches!(n, Expr::Case(..)))
}

fn seq_operand(letrec: &Expr, rel: &Path) -> bool {
    rel.parent().is_some_and(|p| *rel.0.last().unwrap() == 0 && matches!(letrec.at(&p), Some(Expr::Seq(..))))
}

fn has_alt(case: &Expr, c: crate::syntax::Symbol) -> bool {
    matches!(case, Expr::Case(_, _, alts) if alts.iter().any(|a| a.con == c))
}

fn distinct_vars(args: &[Expr]) -> bool {
    let mut seen = HashSet::new();
    args.iter().all(|a| a.as_var().is_some_and(|v| seen.insert(v)))
}

fn letrec_details(node: &Expr, rule: RuleName) -> Vec<(RuleName, Detail)> {
    let Expr::Letrec(bs, body) = node else { return Vec::new() };
    let mut out = Vec::new();
    let target = |binding: usize, target: Path| Detail::Target { binding, target };
    match rule {
        LletIn => {
            if matches!(**body, Expr::Letrec(..)) {
                out.push((LletIn, Detail::Node));
            }
        }
        LletE => {
            for (i, b) in bs.iter().enumerate() {
                if matches!(b.rhs, Expr::Letrec(..)) {
                    out.push((LletE, Detail::Bindings(vec![i])));
                }
            }
        }
        Gc1 | Gc2 => {
            let live = reachable(bs, body);
            let dead: Vec<usize> = (0..bs.len()).filter(|&i| !live.contains(&bs[i].var)).collect();
            match (rule, live.is_empty(), dead.is_empty()) {
                (Gc2, true, _) => out.push((Gc2, Detail::Node)),
                (Gc1, false, false) => out.push((Gc1, Detail::Bindings(dead))),
                _ => {}
            }
        }
        CpIn | CpE | CpS | CpxIn | CpxE | CpcxIn | CpcxE | CpcxT => {
            for (i, b) in bs.iter().enumerate() {
                let fits = match rule {
                    CpIn | CpE | CpS => matches!(b.rhs, Expr::Lam(..)),
                    CpxIn | CpxE => matches!(b.rhs, Expr::Var(y) if y != b.var),
                    _ => matches!(b.rhs, Expr::Con(..)),
                };
                if !fits {
                    continue;
                }
                let fv: HashSet<Name> = b.rhs.free_vars().into_iter().collect();
                for (site, rel) in uses(bs, body, i) {
                    if !capture_free(node, &rel, &fv) {
                        continue;
                    }
                    let r = match rule {
                        CpIn | CpE => pick(site, CpIn, CpE),
                        CpxIn | CpxE => pick(site, CpxIn, CpxE),
                        CpcxIn | CpcxE => pick(site, CpcxIn, CpcxE),
                        CpS if reaches(node, &rel, false) => CpS,
                        CpcxT if reaches(node, &rel, true) => CpcxT,
                        _ => continue,
                    };
                    if r == rule {
                        out.push((r, target(i, rel)));
                    }
                }
            }
        }
        Abs => {
            for (i, b) in bs.iter().enumerate() {
                if matches!(&b.rhs, Expr::Con(_, args) if !args.is_empty()) {
                    out.push((Abs, Detail::Bindings(vec![i])));
                }
            }
        }
        Xch => {
            for (j, b) in bs.iter().enumerate() {
                if let Expr::Var(x) = b.rhs {
                    if let Some(i) = bs.iter().position(|c| c.var == x) {
                        if i != j {
                            out.push((Xch, Detail::Pair(i, j)));
                        }
                    }
                }
            }
        }
        Ucp1 | Ucp2 | Ucp3 => {
            for (i, b) in bs.iter().enumerate() {
                if b.rhs.occurs_free(b.var) {
                    continue;
                }
                let us = uses(bs, body, i);
                let [(site, rel)] = us.as_slice() else { continue };
                let fv: HashSet<Name> = b.rhs.free_vars().into_iter().collect();
                if !reaches(node, rel, false) || !capture_free(node, rel, &fv) {
                    continue;
                }
                let r = match (site, bs.len()) {
                    (Site::Body, 1) => Ucp3,
                    (Site::Body, _) => Ucp1,
                    (Site::Binding(_), _) => Ucp2,
                };
                if r == rule {
                    out.push((r, target(i, rel.clone())));
                }
            }
        }
        CaseIn | CaseE | SeqIn | SeqE | CaseCx | CaseStar => {
            for (i, b) in bs.iter().enumerate() {
                let Expr::Con(c, args) = &b.rhs else { continue };
                for (site, rel) in uses(bs, body, i) {
                    let r = if matches!(rule, SeqIn | SeqE) {
                        if !seq_operand(node, &rel) {
                            continue;
                        }
                        pick(site, SeqIn, SeqE)
                    } else {
                        let Some(case) = scrutinised(node, &rel) else { continue };
                        if !has_alt(case, *c) {
                            continue;
                        }
                        let cx = args.iter().all(|a| a.as_var().is_some());
                        let arg_fv: HashSet<Name> = args.iter().filter_map(Expr::as_var).collect();
                        let cx = cx && capture_free(node, &rel, &arg_fv);
                        match rule {
                            CaseCx if cx => CaseCx,
                            CaseCx => continue,
                            CaseStar if cx && distinct_vars(args) => CaseCx,
                            _ => pick(site, CaseIn, CaseE),
                        }
                    };
                    if r == rule || rule == CaseStar {
                        out.push((r, target(i, rel)));
                    }
                }
            }
        }
        GcEq => {
            for (i, b) in bs.iter().enumerate() {
                let Expr::Var(y) = b.rhs else { continue };
                let Some(j) = bs.iter().position(|c| c.var == y) else { continue };
                if i == j {
                    continue;
                }
                let x = b.var;
                let used = body.occurs_free(x) || bs.iter().enumerate().any(|(k, c)| k != i && c.rhs.occurs_free(x));
                if used {
                    continue;
                }
                let rest: Vec<Binding> =
                    bs.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, c)| c.clone()).collect();
                if reachable(&rest, body).contains(&y) {
                    out.push((GcEq, Detail::Pair(i, j)));
                }
            }
        }
        Cse => {
            for i in 0..bs.len() {
                for j in 0..bs.len() {
                    if i == j || !bs[i].rhs.alpha_eq(&bs[j].rhs) {
                        continue;
                    }
                    let (x, y) = (bs[i].var, bs[j].var);
                    let s = &bs[i].rhs;
                    if s.occurs_free(x) || s.occurs_free(y) {
                        continue;
                    }
                    let xs: HashSet<Name> = [x].into();
                    if uses(bs, body, j).iter().all(|(_, rel)| capture_free(node, rel, &xs)) {
                        out.push((Cse, Detail::Pair(i, j)));
                    }
                }
            }
        }
        _ => {}
    }
    out
}
