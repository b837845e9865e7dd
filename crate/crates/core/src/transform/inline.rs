use std::collections::HashMap;

use super::TransformError;
use crate::syntax::{Binding, Expr, Fresh, Name, Path};

/// Inlines the abstraction bound to `binder` at the applied occurrence `occ`.
///
/// The copied abstraction is beta-reduced against the arguments at the call
/// site; the bindings this creates are then simplified: variable bindings are
/// copied away, single surface uses are inlined and unused ones dropped.
pub fn inline(e: &Expr, binder: Name, occ: &Path) -> Result<Expr, TransformError> {
    if e.at(occ).and_then(Expr::as_var) != Some(binder) {
        return Err(TransformError::NotApplied(occ.clone()));
    }
    let v = bound_abstraction(e, binder, occ)?;
    let mut top = occ.clone();
    while let Some(parent) = top.parent() {
        if *top.0.last().unwrap() != 0 || !matches!(e.at(&parent), Some(Expr::App(..))) {
            break;
        }
        top = parent;
    }
    if top == *occ {
        return Err(TransformError::NotApplied(occ.clone()));
    }

    let mut fresh = Fresh::above(e);
    let mut out = e.clone();
    let site = out.at_mut(&top).expect("path exists");
    let mut args = Vec::new();
    let mut f = std::mem::replace(site, Expr::Var(binder));
    while let Expr::App(g, a) = f {
        args.push(*a);
        f = *g;
    }
    args.reverse();

    let mut fun = v.freshen_with(&mut fresh);
    let mut bs = Vec::new();
    let mut rest = args.into_iter();
    for a in rest.by_ref() {
        match fun {
            Expr::Lam(x, body) => {
                bs.push(Binding::new(x, a));
                fun = *body;
            }
            other => {
                fun = Expr::App(Box::new(other), Box::new(a));
                break;
            }
        }
    }
    let body = Expr::apps(fun, rest);
    *site = cleanup(bs, body);
    Ok(out)
}

fn bound_abstraction(e: &Expr, binder: Name, occ: &Path) -> Result<Expr, TransformError> {
    let mut found = None;
    let mut node = e;
    for &i in &occ.0 {
        match node {
            Expr::Letrec(bs, _) => {
                if let Some(b) = bs.iter().find(|b| b.var == binder) {
                    found = Some(&b.rhs);
                }
            }
            Expr::Lam(x, _) if *x == binder => found = None,
            Expr::Case(_, _, alts) if i > 0 && alts[i - 1].vars.contains(&binder) => found = None,
            _ => {}
        }
        node = node.child(i).ok_or_else(|| TransformError::InvalidPath(occ.clone()))?;
    }
    match found {
        Some(v @ Expr::Lam(..)) => Ok(v.clone()),
        _ => Err(TransformError::NotAbstraction(binder)),
    }
}

/// Simplifies the bindings created by the beta steps of an inline.
fn cleanup(mut bs: Vec<Binding>, mut body: Expr) -> Expr {
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < bs.len() {
            let x = bs[i].var;
            let uses: usize = body.count_free(x) + bs.iter().map(|b| b.rhs.count_free(x)).sum::<usize>();
            if let Expr::Var(y) = bs[i].rhs {
                if y != x {
                    let map: HashMap<Name, Name> = [(x, y)].into();
                    bs.remove(i);
                    bs.iter_mut().for_each(|b| b.rhs.rename_free(&map));
                    body.rename_free(&map);
                    changed = true;
                    continue;
                }
            }
            if uses == 0 {
                bs.remove(i);
                changed = true;
                continue;
            }
            if uses == 1 && !bs[i].rhs.occurs_free(x) {
                let (holder, path) = match body.free_occurrences(x).pop() {
                    Some(p) => (None, p),
                    None => {
                        let j = bs.iter().position(|b| b.rhs.occurs_free(x)).unwrap();
                        (Some(j), bs[j].rhs.free_occurrences(x)[0].clone())
                    }
                };
                let within = holder.map_or(&body, |j| &bs[j].rhs);
                if !within.under_lambda(&path) {
                    let t = bs.remove(i).rhs;
                    let holder = holder.map(|j| if j > i { j - 1 } else { j });
                    let within = match holder {
                        Some(j) => &mut bs[j].rhs,
                        None => &mut body,
                    };
                    *within.at_mut(&path).unwrap() = t;
                    changed = true;
                    continue;
                }
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    if bs.is_empty() {
        body
    } else {
        Expr::Letrec(bs, Box::new(body))
    }
}
