use rustc_hash::{FxHashMap, FxHashSet};

use super::RuleName;
use crate::syntax::{Binding, Expr, Name, SizeOptions};

/// Position of each top binder.
pub(crate) type EnvIndex = FxHashMap<Name, usize>;

pub(crate) fn env_index(e: &Expr) -> EnvIndex {
    let mut index = EnvIndex::default();
    if let Expr::Letrec(bs, _) = e {
        index.reserve(bs.len());
        index.extend(bs.iter().enumerate().map(|(i, b)| (b.var, i)));
    }
    index
}

/// Top binders with their positions, kept in step with a term whose top
/// environment mostly grows at the end.
#[derive(Debug, Default)]
pub(crate) struct EnvCache {
    binders: Vec<Name>,
    pub(crate) index: EnvIndex,
}

impl EnvCache {
    /// Extends the index when the old binders are a prefix of `e`'s top
    /// binders, rebuilds it otherwise.
    pub(crate) fn sync(&mut self, e: &Expr) {
        let bs: &[Binding] = match e {
            Expr::Letrec(bs, _) => bs,
            _ => &[],
        };
        let n = self.binders.len();
        let prefix = bs.len() >= n && bs[..n].iter().zip(&self.binders).all(|(b, x)| b.var == *x);
        if !prefix {
            self.binders.clear();
            self.index.clear();
        }
        for (i, b) in bs.iter().enumerate().skip(self.binders.len()) {
            self.binders.push(b.var);
            self.index.insert(b.var, i);
        }
    }
}

/// Liveness of each top binding and the size of the live part of `e`.
pub(crate) fn live_scan(e: &Expr, index: &EnvIndex, opts: SizeOptions) -> (Vec<bool>, usize) {
    let Expr::Letrec(bs, body) = e else {
        return (Vec::new(), e.size(opts));
    };
    let mut seen = vec![false; bs.len()];
    let mut todo = Vec::new();
    let mut enqueue = |x: Name, todo: &mut Vec<usize>| {
        if let Some(&i) = index.get(&x) {
            if !seen[i] {
                seen[i] = true;
                todo.push(i);
            }
        }
    };
    let mut scratch = Vec::new();
    let mut size = body.size_visiting_free(opts, &mut scratch, &mut |x| enqueue(x, &mut todo));
    while let Some(i) = todo.pop() {
        size += bs[i].rhs.size_visiting_free(opts, &mut scratch, &mut |y| enqueue(y, &mut todo));
    }
    (seen, size)
}

/// Drops the top bindings not marked in `live`.
pub(crate) fn collect(e: &mut Expr, live: &[bool]) -> Option<RuleName> {
    let Expr::Letrec(bs, body) = e else {
        return None;
    };
    if live.iter().all(|&l| l) {
        return None;
    }
    if !live.iter().any(|&l| l) {
        let body = std::mem::replace(&mut **body, Expr::Var(Name::new("_")));
        *e = body;
        return Some(RuleName::Gc2);
    }
    let mut i = 0;
    bs.retain(|_| {
        i += 1;
        live[i - 1]
    });
    Some(RuleName::Gc1)
}

/// Removes every top binding unreachable from the body. Returns the rule that
/// fired, or `None` when nothing is collectible.
pub fn gc_max_in_place(e: &mut Expr) -> Option<RuleName> {
    let (live, _) = live_scan(e, &env_index(e), SizeOptions::PLAIN);
    collect(e, &live)
}

/// Maximal garbage collection on the top letrec; the flag reports a change.
pub fn gc_max(e: &Expr) -> (Expr, bool) {
    let mut out = e.clone();
    let changed = gc_max_in_place(&mut out).is_some();
    (out, changed)
}

/// Binders of `bs` reachable from the free variables of `body`.
pub(crate) fn reachable(bs: &[Binding], body: &Expr) -> FxHashSet<Name> {
    let index: EnvIndex = bs.iter().enumerate().map(|(i, b)| (b.var, i)).collect();
    let mut live = vec![false; bs.len()];
    let mut todo = Vec::new();
    let mut enqueue = |x: Name, todo: &mut Vec<usize>| {
        if let Some(&i) = index.get(&x) {
            if !live[i] {
                live[i] = true;
                todo.push(i);
            }
        }
    };
    body.visit_free(&mut |x| enqueue(x, &mut todo));
    while let Some(i) = todo.pop() {
        bs[i].rhs.visit_free(&mut |y| enqueue(y, &mut todo));
    }
    bs.iter().zip(live).filter(|(_, l)| *l).map(|(b, _)| b.var).collect()
}

/// Whether every top binding from position `from` on is reachable from
/// `root` through those bindings alone. `root` is the body when `None`,
/// otherwise the rhs of that top binding.
pub(crate) fn merged_all_reachable(e: &Expr, from: usize, root: Option<usize>) -> bool {
    let Expr::Letrec(bs, body) = e else { return false };
    let Some(new) = bs.get(from..) else { return false };
    let root = match root {
        None => &**body,
        Some(i) => match bs.get(i) {
            Some(b) => &b.rhs,
            None => return false,
        },
    };
    reachable(new, root).len() == new.len()
}

/// Total size of the top right-hand sides not marked in `live`.
pub(crate) fn dead_size(e: &Expr, live: &[bool], opts: SizeOptions) -> usize {
    let Expr::Letrec(bs, _) = e else { return 0 };
    bs.iter().zip(live).filter(|(_, l)| !**l).map(|(b, _)| b.rhs.size(opts)).sum()
}
