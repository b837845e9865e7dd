use std::collections::{HashMap, HashSet};

use super::gc::reachable;
use crate::syntax::Expr;

/// A value, `letrec E in v`, or `letrec x1 = c t, x2 = x1, .., E in xm`.
pub fn is_whnf(e: &Expr) -> bool {
    match e {
        Expr::Lam(..) | Expr::Con(..) => true,
        Expr::Letrec(bs, body) => match &**body {
            Expr::Lam(..) | Expr::Con(..) => true,
            Expr::Var(x) => {
                let env: HashMap<_, _> = bs.iter().map(|b| (b.var, &b.rhs)).collect();
                let mut seen = HashSet::new();
                let mut cur = *x;
                loop {
                    if !seen.insert(cur) {
                        return false;
                    }
                    match env.get(&cur) {
                        Some(Expr::Con(..)) => return true,
                        Some(Expr::Var(y)) => cur = *y,
                        _ => return false,
                    }
                }
            }
            _ => false,
        },
        _ => false,
    }
}

/// A WHNF with no garbage in its top environment.
pub fn is_lrpgc_whnf(e: &Expr) -> bool {
    is_whnf(e)
        && match e {
            Expr::Letrec(bs, body) => reachable(bs, body).len() == bs.len(),
            _ => true,
        }
}
