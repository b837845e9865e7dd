use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use super::name::{Fresh, Name, Symbol};

/// A term of the type-erased core calculus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(Name),
    App(Box<Expr>, Box<Expr>),
    Lam(Name, Box<Expr>),
    Seq(Box<Expr>, Box<Expr>),
    /// Saturated constructor application.
    Con(Symbol, Vec<Expr>),
    /// `case` over the type constructor in the first field, one alternative
    /// per data constructor in declaration order.
    Case(Symbol, Box<Expr>, Vec<Alt>),
    /// Recursive bindings; never empty.
    Letrec(Vec<Binding>, Box<Expr>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Alt {
    pub con: Symbol,
    pub vars: Vec<Name>,
    pub rhs: Expr,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Binding {
    pub var: Name,
    pub rhs: Expr,
}

impl Binding {
    pub fn new(var: Name, rhs: Expr) -> Binding {
        Binding { var, rhs }
    }
}

/// Child indices from the root.
///
/// `App`/`Seq`: 0 and 1. `Lam`: 0 is the body. `Con`: one index per argument.
/// `Case`: 0 is the scrutinee, `i + 1` the right-hand side of alternative `i`.
/// `Letrec` with `n` bindings: `0..n` are the right-hand sides, `n` the body.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn child(&self, i: usize) -> Path {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }

    pub fn parent(&self) -> Option<Path> {
        let (_, init) = self.0.split_last()?;
        Some(Path(init.to_vec()))
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Path {
    type Err = String;

    fn from_str(s: &str) -> Result<Path, String> {
        let s = s.trim();
        if s.is_empty() || s == "root" {
            return Ok(Path::root());
        }
        s.split('.')
            .map(|p| p.parse::<usize>().map_err(|_| format!("bad path component `{p}`")))
            .collect::<Result<Vec<_>, _>>()
            .map(Path)
    }
}

/// Options for [`Expr::size`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SizeOptions {
    /// Count every closed Peano numeral as a single unit.
    pub peano_as_unit: bool,
}

impl SizeOptions {
    pub const PLAIN: SizeOptions = SizeOptions { peano_as_unit: false };
    pub const PEANO_UNIT: SizeOptions = SizeOptions { peano_as_unit: true };
}

pub(crate) fn zero_sym() -> Symbol {
    static ZERO: OnceLock<Symbol> = OnceLock::new();
    *ZERO.get_or_init(|| Symbol::intern("Zero"))
}

pub(crate) fn succ_sym() -> Symbol {
    static SUCC: OnceLock<Symbol> = OnceLock::new();
    *SUCC.get_or_init(|| Symbol::intern("Succ"))
}

impl Expr {
    pub fn var(s: &str) -> Expr {
        Expr::Var(Name::new(s))
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
        args.into_iter().fold(f, Expr::app)
    }

    pub fn lam(x: Name, body: Expr) -> Expr {
        Expr::Lam(x, Box::new(body))
    }

    pub fn seq(a: Expr, b: Expr) -> Expr {
        Expr::Seq(Box::new(a), Box::new(b))
    }

    pub fn con(c: &str, args: Vec<Expr>) -> Expr {
        Expr::Con(Symbol::intern(c), args)
    }

    pub fn letrec(bindings: Vec<Binding>, body: Expr) -> Expr {
        debug_assert!(!bindings.is_empty());
        Expr::Letrec(bindings, Box::new(body))
    }

    /// `Succ` applied `n` times to `Zero`.
    pub fn numeral(n: u64) -> Expr {
        let mut e = Expr::Con(zero_sym(), Vec::new());
        for _ in 0..n {
            e = Expr::Con(succ_sym(), vec![e]);
        }
        e
    }

    /// The value of a closed numeral.
    pub fn as_numeral(&self) -> Option<u64> {
        let (zero, succ) = (zero_sym(), succ_sym());
        let mut n = 0;
        let mut e = self;
        loop {
            match e {
                Expr::Con(c, args) if *c == zero && args.is_empty() => return Some(n),
                Expr::Con(c, args) if *c == succ && args.len() == 1 => {
                    n += 1;
                    e = &args[0];
                }
                _ => return None,
            }
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Expr::Lam(..) | Expr::Con(..))
    }

    pub fn as_var(&self) -> Option<Name> {
        match self {
            Expr::Var(x) => Some(*x),
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Var(_) => vec![],
            Expr::App(a, b) | Expr::Seq(a, b) => vec![a, b],
            Expr::Lam(_, b) => vec![b],
            Expr::Con(_, args) => args.iter().collect(),
            Expr::Case(_, s, alts) => {
                std::iter::once(&**s).chain(alts.iter().map(|a| &a.rhs)).collect()
            }
            Expr::Letrec(bs, body) => bs.iter().map(|b| &b.rhs).chain(std::iter::once(&**body)).collect(),
        }
    }

    pub fn child(&self, i: usize) -> Option<&Expr> {
        match self {
            Expr::Var(_) => None,
            Expr::App(a, b) | Expr::Seq(a, b) => match i {
                0 => Some(a),
                1 => Some(b),
                _ => None,
            },
            Expr::Lam(_, b) => (i == 0).then_some(&**b),
            Expr::Con(_, args) => args.get(i),
            Expr::Case(_, s, alts) => {
                if i == 0 {
                    Some(s)
                } else {
                    alts.get(i - 1).map(|a| &a.rhs)
                }
            }
            Expr::Letrec(bs, body) => {
                if i < bs.len() {
                    Some(&bs[i].rhs)
                } else if i == bs.len() {
                    Some(body)
                } else {
                    None
                }
            }
        }
    }

    pub fn child_mut(&mut self, i: usize) -> Option<&mut Expr> {
        match self {
            Expr::Var(_) => None,
            Expr::App(a, b) | Expr::Seq(a, b) => match i {
                0 => Some(a),
                1 => Some(b),
                _ => None,
            },
            Expr::Lam(_, b) => (i == 0).then_some(&mut **b),
            Expr::Con(_, args) => args.get_mut(i),
            Expr::Case(_, s, alts) => {
                if i == 0 {
                    Some(s)
                } else {
                    alts.get_mut(i - 1).map(|a| &mut a.rhs)
                }
            }
            Expr::Letrec(bs, body) => {
                let n = bs.len();
                if i < n {
                    Some(&mut bs[i].rhs)
                } else if i == n {
                    Some(body)
                } else {
                    None
                }
            }
        }
    }

    pub fn at(&self, path: &Path) -> Option<&Expr> {
        path.0.iter().try_fold(self, |e, &i| e.child(i))
    }

    pub fn at_mut(&mut self, path: &Path) -> Option<&mut Expr> {
        path.0.iter().try_fold(self, |e, &i| e.child_mut(i))
    }

    /// Replaces the subterm at `path`, returning the old one.
    pub fn replace_at(&mut self, path: &Path, new: Expr) -> Option<Expr> {
        self.at_mut(path).map(|slot| std::mem::replace(slot, new))
    }

    /// Variables bound directly by this node, for its child `i`.
    fn binds_for_child(&self, i: usize) -> Vec<Name> {
        match self {
            Expr::Lam(x, _) => vec![*x],
            Expr::Case(_, _, alts) if i > 0 => alts[i - 1].vars.clone(),
            Expr::Letrec(bs, _) => bs.iter().map(|b| b.var).collect(),
            _ => vec![],
        }
    }

    /// Binders in scope at `path` (innermost last).
    pub fn binders_above(&self, path: &Path) -> Option<Vec<Name>> {
        let mut out = Vec::new();
        let mut e = self;
        for &i in &path.0 {
            out.extend(e.binds_for_child(i));
            e = e.child(i)?;
        }
        Some(out)
    }

    /// Whether the subterm at `path` sits under a lambda.
    pub fn under_lambda(&self, path: &Path) -> bool {
        let mut e = self;
        for &i in &path.0 {
            if matches!(e, Expr::Lam(..)) {
                return true;
            }
            match e.child(i) {
                Some(c) => e = c,
                None => return false,
            }
        }
        false
    }

    /// Whether the subterm at `path` sits inside a case alternative.
    pub fn under_alternative(&self, path: &Path) -> bool {
        let mut e = self;
        for &i in &path.0 {
            if matches!(e, Expr::Case(..)) && i > 0 {
                return true;
            }
            match e.child(i) {
                Some(c) => e = c,
                None => return false,
            }
        }
        false
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    /// Calls `f` on every free occurrence, duplicates included.
    pub fn visit_free(&self, f: &mut impl FnMut(Name)) {
        visit_free(self, &mut Vec::new(), f);
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn occurs_free(&self, x: Name) -> bool {
        self.count_free(x) > 0
    }

    /// Number of free occurrences of `x`.
    pub fn count_free(&self, x: Name) -> usize {
        match self {
            Expr::Var(y) => usize::from(*y == x),
            Expr::Lam(y, b) => {
                if *y == x {
                    0
                } else {
                    b.count_free(x)
                }
            }
            Expr::Case(_, s, alts) => {
                s.count_free(x)
                    + alts
                        .iter()
                        .filter(|a| !a.vars.contains(&x))
                        .map(|a| a.rhs.count_free(x))
                        .sum::<usize>()
            }
            Expr::Letrec(bs, body) => {
                if bs.iter().any(|b| b.var == x) {
                    0
                } else {
                    bs.iter().map(|b| b.rhs.count_free(x)).sum::<usize>() + body.count_free(x)
                }
            }
            _ => self.children().into_iter().map(|c| c.count_free(x)).sum(),
        }
    }

    /// Paths of the free occurrences of `x`, in pre-order.
    pub fn free_occurrences(&self, x: Name) -> Vec<Path> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        occurrences(self, x, &mut cur, &mut out);
        out
    }

    /// The size measure: variables cost nothing, bindings cost only their
    /// right-hand sides, every other node costs one.
    pub fn size(&self, opts: SizeOptions) -> usize {
        if opts.peano_as_unit {
            size_peano(self, zero_sym(), succ_sym()).0
        } else {
            size_plain(self)
        }
    }

    /// [`Expr::size`] computed while reporting every free occurrence to `f`.
    /// `scratch` is working memory and is left empty.
    pub(crate) fn size_visiting_free(
        &self,
        opts: SizeOptions,
        scratch: &mut Vec<Name>,
        f: &mut impl FnMut(Name),
    ) -> usize {
        let syms = opts.peano_as_unit.then(|| (zero_sym(), succ_sym()));
        scratch.clear();
        sized_free(self, scratch, syms, f).0
    }

    /// Largest numeric name suffix anywhere in the term.
    pub fn max_name_index(&self) -> Option<u32> {
        let mut best: Option<u32> = None;
        let mut see = |n: &Name| {
            if let Some(i) = n.index() {
                best = Some(best.map_or(i, |b| b.max(i)));
            }
        };
        self.visit_names(&mut see);
        best
    }

    pub fn visit_names(&self, f: &mut impl FnMut(&Name)) {
        match self {
            Expr::Var(x) => f(x),
            Expr::Lam(x, b) => {
                f(x);
                b.visit_names(f);
            }
            Expr::Case(_, s, alts) => {
                s.visit_names(f);
                for a in alts {
                    a.vars.iter().for_each(&mut *f);
                    a.rhs.visit_names(f);
                }
            }
            Expr::Letrec(bs, body) => {
                for b in bs {
                    f(&b.var);
                    b.rhs.visit_names(f);
                }
                body.visit_names(f);
            }
            _ => {
                for c in self.children() {
                    c.visit_names(f);
                }
            }
        }
    }

    /// All binding occurrences, in pre-order.
    pub fn binders(&self) -> Vec<Name> {
        let mut out = Vec::new();
        collect_binders(self, &mut out);
        out
    }

    /// True when no variable is bound twice and no bound variable also occurs free.
    pub fn has_distinct_binders(&self) -> bool {
        let bs = self.binders();
        let set: HashSet<Name> = bs.iter().copied().collect();
        set.len() == bs.len() && self.free_vars().iter().all(|x| !set.contains(x))
    }

    /// Renames every binder to a fresh name from `fresh`.
    pub fn freshen_with(&self, fresh: &mut Fresh) -> Expr {
        let mut env = HashMap::new();
        rename(self, &mut env, fresh)
    }

    /// Replaces free occurrences of variables according to `map`.
    ///
    /// No capture check: callers keep binders distinct from the substituted names.
    pub fn rename_free(&mut self, map: &HashMap<Name, Name>) {
        match self {
            Expr::Var(x) => {
                if let Some(y) = map.get(x) {
                    *x = *y;
                }
            }
            Expr::Lam(x, b) => {
                if map.contains_key(x) {
                    let mut m = map.clone();
                    m.remove(x);
                    b.rename_free(&m);
                } else {
                    b.rename_free(map);
                }
            }
            Expr::Case(_, s, alts) => {
                s.rename_free(map);
                for a in alts {
                    if a.vars.iter().any(|v| map.contains_key(v)) {
                        let mut m = map.clone();
                        a.vars.iter().for_each(|v| {
                            m.remove(v);
                        });
                        a.rhs.rename_free(&m);
                    } else {
                        a.rhs.rename_free(map);
                    }
                }
            }
            Expr::Letrec(bs, body) => {
                let shadow = bs.iter().any(|b| map.contains_key(&b.var));
                let local;
                let m = if shadow {
                    let mut m = map.clone();
                    bs.iter().for_each(|b| {
                        m.remove(&b.var);
                    });
                    local = m;
                    &local
                } else {
                    map
                };
                for b in bs.iter_mut() {
                    b.rhs.rename_free(m);
                }
                body.rename_free(m);
            }
            Expr::App(a, b) | Expr::Seq(a, b) => {
                a.rename_free(map);
                b.rename_free(map);
            }
            Expr::Con(_, args) => args.iter_mut().for_each(|a| a.rename_free(map)),
        }
    }

    /// Capture-permitting replacement of every free `x` by a copy of `by`,
    /// used to fill context holes.
    pub fn plug(&mut self, hole: Name, by: &Expr) {
        match self {
            Expr::Var(x) if *x == hole => *self = by.clone(),
            _ => {
                let n = self.children().len();
                for i in 0..n {
                    self.child_mut(i).unwrap().plug(hole, by);
                }
            }
        }
    }

    /// Alpha-equivalence.
    pub fn alpha_eq(&self, other: &Expr) -> bool {
        let mut l = Vec::new();
        let mut r = Vec::new();
        alpha(self, other, &mut l, &mut r)
    }

    /// Number of nodes, for diagnostics.
    pub fn node_count(&self) -> usize {
        1 + self.children().into_iter().map(Expr::node_count).sum::<usize>()
    }
}

fn collect_free(e: &Expr, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match e {
        Expr::Var(x) => {
            if !bound.contains(x) {
                out.insert(*x);
            }
        }
        Expr::Lam(x, b) => {
            bound.push(*x);
            collect_free(b, bound, out);
            bound.pop();
        }
        Expr::Case(_, s, alts) => {
            collect_free(s, bound, out);
            for a in alts {
                let n = bound.len();
                bound.extend(a.vars.iter().copied());
                collect_free(&a.rhs, bound, out);
                bound.truncate(n);
            }
        }
        Expr::Letrec(bs, body) => {
            let n = bound.len();
            bound.extend(bs.iter().map(|b| b.var));
            for b in bs {
                collect_free(&b.rhs, bound, out);
            }
            collect_free(body, bound, out);
            bound.truncate(n);
        }
        _ => {
            for c in e.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

fn visit_free(e: &Expr, bound: &mut Vec<Name>, f: &mut impl FnMut(Name)) {
    match e {
        Expr::Var(x) => {
            if !bound.contains(x) {
                f(*x);
            }
        }
        Expr::Lam(x, b) => {
            bound.push(*x);
            visit_free(b, bound, f);
            bound.pop();
        }
        Expr::Case(_, s, alts) => {
            visit_free(s, bound, f);
            for a in alts {
                let n = bound.len();
                bound.extend(a.vars.iter().copied());
                visit_free(&a.rhs, bound, f);
                bound.truncate(n);
            }
        }
        Expr::Letrec(bs, body) => {
            let n = bound.len();
            bound.extend(bs.iter().map(|b| b.var));
            for b in bs {
                visit_free(&b.rhs, bound, f);
            }
            visit_free(body, bound, f);
            bound.truncate(n);
        }
        Expr::App(a, b) | Expr::Seq(a, b) => {
            visit_free(a, bound, f);
            visit_free(b, bound, f);
        }
        Expr::Con(_, args) => args.iter().for_each(|a| visit_free(a, bound, f)),
    }
}

fn occurrences(e: &Expr, x: Name, cur: &mut Vec<usize>, out: &mut Vec<Path>) {
    match e {
        Expr::Var(y) => {
            if *y == x {
                out.push(Path(cur.clone()));
            }
            return;
        }
        Expr::Lam(y, _) if *y == x => return,
        Expr::Letrec(bs, _) if bs.iter().any(|b| b.var == x) => return,
        _ => {}
    }
    for i in 0..e.children().len() {
        if let Expr::Case(_, _, alts) = e {
            if i > 0 && alts[i - 1].vars.contains(&x) {
                continue;
            }
        }
        cur.push(i);
        occurrences(e.child(i).unwrap(), x, cur, out);
        cur.pop();
    }
}

fn size_plain(e: &Expr) -> usize {
    match e {
        Expr::Var(_) => 0,
        Expr::App(a, b) | Expr::Seq(a, b) => 1 + size_plain(a) + size_plain(b),
        Expr::Lam(_, b) => 1 + size_plain(b),
        Expr::Con(_, args) => 1 + args.iter().map(size_plain).sum::<usize>(),
        Expr::Case(_, s, alts) => {
            1 + size_plain(s) + alts.iter().map(|a| 1 + size_plain(&a.rhs)).sum::<usize>()
        }
        Expr::Letrec(bs, body) => bs.iter().map(|b| size_plain(&b.rhs)).sum::<usize>() + size_plain(body),
    }
}

/// Returns the size and whether the term is a closed numeral.
fn size_peano(e: &Expr, zero: Symbol, succ: Symbol) -> (usize, bool) {
    match e {
        Expr::Con(c, args) if *c == zero && args.is_empty() => (1, true),
        Expr::Con(c, args) if *c == succ && args.len() == 1 => {
            let (s, numeral) = size_peano(&args[0], zero, succ);
            if numeral {
                (1, true)
            } else {
                (1 + s, false)
            }
        }
        Expr::Var(_) => (0, false),
        Expr::App(a, b) | Expr::Seq(a, b) => {
            (1 + size_peano(a, zero, succ).0 + size_peano(b, zero, succ).0, false)
        }
        Expr::Lam(_, b) => (1 + size_peano(b, zero, succ).0, false),
        Expr::Con(_, args) => (1 + args.iter().map(|a| size_peano(a, zero, succ).0).sum::<usize>(), false),
        Expr::Case(_, s, alts) => (
            1 + size_peano(s, zero, succ).0
                + alts.iter().map(|a| 1 + size_peano(&a.rhs, zero, succ).0).sum::<usize>(),
            false,
        ),
        Expr::Letrec(bs, body) => (
            bs.iter().map(|b| size_peano(&b.rhs, zero, succ).0).sum::<usize>() + size_peano(body, zero, succ).0,
            false,
        ),
    }
}

/// Size and closed-numeral flag; numerals count as units when `syms` is set.
fn sized_free(
    e: &Expr,
    bound: &mut Vec<Name>,
    syms: Option<(Symbol, Symbol)>,
    f: &mut impl FnMut(Name),
) -> (usize, bool) {
    match e {
        Expr::Var(x) => {
            if !bound.contains(x) {
                f(*x);
            }
            (0, false)
        }
        Expr::Con(c, args) => {
            if let Some((zero, succ)) = syms {
                if *c == zero && args.is_empty() {
                    return (1, true);
                }
                if *c == succ && args.len() == 1 {
                    let (s, numeral) = sized_free(&args[0], bound, syms, f);
                    return if numeral { (1, true) } else { (1 + s, false) };
                }
            }
            (1 + args.iter().map(|a| sized_free(a, bound, syms, f).0).sum::<usize>(), false)
        }
        Expr::App(a, b) | Expr::Seq(a, b) => {
            (1 + sized_free(a, bound, syms, f).0 + sized_free(b, bound, syms, f).0, false)
        }
        Expr::Lam(x, b) => {
            bound.push(*x);
            let s = 1 + sized_free(b, bound, syms, f).0;
            bound.pop();
            (s, false)
        }
        Expr::Case(_, s, alts) => {
            let mut total = 1 + sized_free(s, bound, syms, f).0;
            for a in alts {
                let n = bound.len();
                bound.extend(a.vars.iter().copied());
                total += 1 + sized_free(&a.rhs, bound, syms, f).0;
                bound.truncate(n);
            }
            (total, false)
        }
        Expr::Letrec(bs, body) => {
            let n = bound.len();
            bound.extend(bs.iter().map(|b| b.var));
            let total = bs.iter().map(|b| sized_free(&b.rhs, bound, syms, f).0).sum::<usize>()
                + sized_free(body, bound, syms, f).0;
            bound.truncate(n);
            (total, false)
        }
    }
}

fn collect_binders(e: &Expr, out: &mut Vec<Name>) {
    match e {
        Expr::Lam(x, _) => out.push(*x),
        Expr::Case(_, _, alts) => alts.iter().for_each(|a| out.extend(a.vars.iter().copied())),
        Expr::Letrec(bs, _) => out.extend(bs.iter().map(|b| b.var)),
        _ => {}
    }
    for c in e.children() {
        collect_binders(c, out);
    }
}

fn rename(e: &Expr, env: &mut HashMap<Name, Vec<Name>>, fresh: &mut Fresh) -> Expr {
    fn push(env: &mut HashMap<Name, Vec<Name>>, x: Name, y: Name) {
        env.entry(x).or_default().push(y);
    }
    fn pop(env: &mut HashMap<Name, Vec<Name>>, x: Name) {
        if let Some(v) = env.get_mut(&x) {
            v.pop();
        }
    }
    match e {
        Expr::Var(x) => Expr::Var(env.get(x).and_then(|v| v.last()).copied().unwrap_or(*x)),
        Expr::Lam(x, b) => {
            let y = fresh.name(*x);
            push(env, *x, y);
            let body = rename(b, env, fresh);
            pop(env, *x);
            Expr::Lam(y, Box::new(body))
        }
        Expr::App(a, b) => Expr::app(rename(a, env, fresh), rename(b, env, fresh)),
        Expr::Seq(a, b) => Expr::seq(rename(a, env, fresh), rename(b, env, fresh)),
        Expr::Con(c, args) => Expr::Con(*c, args.iter().map(|a| rename(a, env, fresh)).collect()),
        Expr::Case(k, s, alts) => {
            let s = rename(s, env, fresh);
            let alts = alts
                .iter()
                .map(|a| {
                    let vars: Vec<Name> = a.vars.iter().map(|v| fresh.name(*v)).collect();
                    for (v, w) in a.vars.iter().zip(&vars) {
                        push(env, *v, *w);
                    }
                    let rhs = rename(&a.rhs, env, fresh);
                    for v in &a.vars {
                        pop(env, *v);
                    }
                    Alt { con: a.con, vars, rhs }
                })
                .collect();
            Expr::Case(*k, Box::new(s), alts)
        }
        Expr::Letrec(bs, body) => {
            let vars: Vec<Name> = bs.iter().map(|b| fresh.name(b.var)).collect();
            for (b, w) in bs.iter().zip(&vars) {
                push(env, b.var, *w);
            }
            let bs2 = bs
                .iter()
                .zip(&vars)
                .map(|(b, w)| Binding { var: *w, rhs: rename(&b.rhs, env, fresh) })
                .collect();
            let body = rename(body, env, fresh);
            for b in bs {
                pop(env, b.var);
            }
            Expr::Letrec(bs2, Box::new(body))
        }
    }
}

fn lookup_depth(stack: &[Name], x: Name) -> Option<usize> {
    stack.iter().rposition(|y| *y == x)
}

fn alpha(a: &Expr, b: &Expr, l: &mut Vec<Name>, r: &mut Vec<Name>) -> bool {
    match (a, b) {
        (Expr::Var(x), Expr::Var(y)) => match (lookup_depth(l, *x), lookup_depth(r, *y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Expr::App(a1, a2), Expr::App(b1, b2)) | (Expr::Seq(a1, a2), Expr::Seq(b1, b2)) => {
            alpha(a1, b1, l, r) && alpha(a2, b2, l, r)
        }
        (Expr::Lam(x, a1), Expr::Lam(y, b1)) => {
            l.push(*x);
            r.push(*y);
            let ok = alpha(a1, b1, l, r);
            l.pop();
            r.pop();
            ok
        }
        (Expr::Con(c, xs), Expr::Con(d, ys)) => {
            c == d && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha(x, y, l, r))
        }
        (Expr::Case(k1, s1, alts1), Expr::Case(k2, s2, alts2)) => {
            k1 == k2
                && alts1.len() == alts2.len()
                && alpha(s1, s2, l, r)
                && alts1.iter().zip(alts2).all(|(p, q)| {
                    if p.con != q.con || p.vars.len() != q.vars.len() {
                        return false;
                    }
                    let n = l.len();
                    l.extend(p.vars.iter().copied());
                    r.extend(q.vars.iter().copied());
                    let ok = alpha(&p.rhs, &q.rhs, l, r);
                    l.truncate(n);
                    r.truncate(n);
                    ok
                })
        }
        (Expr::Letrec(bs1, body1), Expr::Letrec(bs2, body2)) => {
            // Bindings are compared in order; binding order is not normalised.
            if bs1.len() != bs2.len() {
                return false;
            }
            let n = l.len();
            l.extend(bs1.iter().map(|b| b.var));
            r.extend(bs2.iter().map(|b| b.var));
            let ok = bs1.iter().zip(bs2).all(|(p, q)| alpha(&p.rhs, &q.rhs, l, r)) && alpha(body1, body2, l, r);
            l.truncate(n);
            r.truncate(n);
            ok
        }
        _ => false,
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print(self))
    }
}
