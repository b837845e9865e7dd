//! Locating the normal-order redex.
//!
//! The search starts at the body of the top letrec (or at the whole term when
//! there is none) and follows demand: into the function of an application,
//! the first argument of `seq` and the scrutinee of `case`. A demanded
//! variable bound in the top environment sends the search into its binding.
//! Bindings whose right-hand side is just a variable form the indirection
//! chain; the last ordinary occurrence on the way is the copy/scrutiny target.

use super::gc::{env_index, EnvIndex};
use super::{EvalError, RuleName};
use crate::syntax::{Binding, Expr, Name, Path};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Redex(RuleName),
    Whnf,
    Blackhole,
}

/// Where the target occurrence sits in its demanding parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Parent {
    Root,
    App,
    Seq,
    Case,
}

/// Result of the labeling search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    pub outcome: Outcome,
    /// The node the selected rule rewrites: the application for (lbeta), the
    /// `seq`/`case` node for (seq-c)/(case-c), the application, `seq` or
    /// `case` around the nested letrec for (lapp)/(lseq)/(lcase), the nested
    /// letrec for (llet-in)/(llet-e), and the right-hand side of the value
    /// binding for (cp), (seq-in/e) and (case-in/e).
    pub focus: Path,
    /// Visited bindings from the value binding `x1` to the target variable,
    /// each with the path of its right-hand side.
    pub chain: Vec<(Name, Path)>,
    /// The vis-marked occurrence for (cp), (seq-in/e) and (case-in/e).
    pub target: Option<Path>,
    /// Every position labeled as demanded, in visiting order.
    pub demanded: Vec<Path>,
}

pub(crate) fn top_env(e: &Expr) -> (&[Binding], Option<usize>) {
    match e {
        Expr::Letrec(bs, _) => (bs, Some(bs.len())),
        _ => (&[], None),
    }
}

/// Runs the labeling algorithm on a closed term.
pub fn label(e: &Expr) -> Result<Labeling, EvalError> {
    label_indexed(e, &env_index(e), true)
}

/// As [`label`]; `index` must be the index of `e`. `demanded` stays empty
/// unless `record` is set.
pub(crate) fn label_indexed(e: &Expr, index: &EnvIndex, record: bool) -> Result<Labeling, EvalError> {
    let (env, body_idx) = top_env(e);
    let mut visited = vec![false; env.len()];
    let mut demanded = Vec::new();
    let mark = |p: &Path, demanded: &mut Vec<Path>| {
        if record {
            demanded.push(p.clone());
        }
    };
    mark(&Path::root(), &mut demanded);
    let mut root = match body_idx {
        Some(n) => {
            let p = Path(vec![n]);
            mark(&p, &mut demanded);
            p
        }
        None => Path::root(),
    };
    let mut root_binding: Option<usize> = None;
    let mut target: Option<(Path, Parent)> = None;
    let mut chain: Vec<(Name, Path)> = Vec::new();

    let done = |outcome, focus: Path, chain: Vec<(Name, Path)>, target: Option<Path>, demanded| {
        let mut chain = chain;
        chain.reverse();
        Ok(Labeling { outcome, focus, chain, target, demanded })
    };

    loop {
        let mut path = root.clone();
        let mut node = e.at(&path).expect("labeling stays inside the term");
        let mut parent = Parent::Root;
        loop {
            let (next, kind) = match node {
                Expr::App(f, _) => (&**f, Parent::App),
                Expr::Seq(a, _) => (&**a, Parent::Seq),
                Expr::Case(_, s, _) => (&**s, Parent::Case),
                _ => break,
            };
            path.0.push(0);
            mark(&path, &mut demanded);
            node = next;
            parent = kind;
        }
        let at_root = parent == Parent::Root;
        match node {
            Expr::Var(x) => {
                let Some(&i) = index.get(x) else {
                    return Err(EvalError::FreeVariable(*x));
                };
                match root_binding {
                    Some(r) if at_root => chain.push((env[r].var, root.clone())),
                    _ => {
                        target = Some((path.clone(), parent));
                        chain.clear();
                    }
                }
                if visited[i] {
                    let focus = Path(vec![i]);
                    return done(Outcome::Blackhole, focus, chain, target.map(|t| t.0), demanded);
                }
                visited[i] = true;
                root = Path(vec![i]);
                root_binding = Some(i);
                mark(&root, &mut demanded);
            }
            Expr::Letrec(..) => {
                let (rule, focus) = if !at_root {
                    let rule = match parent {
                        Parent::App => RuleName::Lapp,
                        Parent::Seq => RuleName::Lseq,
                        _ => RuleName::Lcase,
                    };
                    (rule, path.parent().unwrap())
                } else if root_binding.is_some() {
                    (RuleName::LletE, path)
                } else {
                    (RuleName::LletIn, path)
                };
                return done(Outcome::Redex(rule), focus, chain, None, demanded);
            }
            Expr::Lam(..) | Expr::Con(..) => {
                let is_lam = matches!(node, Expr::Lam(..));
                if !at_root {
                    let rule = match (parent, is_lam) {
                        (Parent::App, true) => RuleName::Lbeta,
                        (Parent::Seq, _) => RuleName::SeqC,
                        (Parent::Case, false) => {
                            let case_node = e.at(&path.parent().unwrap()).unwrap();
                            check_alternative(case_node, node)?;
                            RuleName::CaseC
                        }
                        _ => return Err(stuck(e, &path)),
                    };
                    return done(Outcome::Redex(rule), path.parent().unwrap(), chain, None, demanded);
                }
                let Some(r) = root_binding else {
                    return done(Outcome::Whnf, path, chain, None, demanded);
                };
                chain.push((env[r].var, root.clone()));
                let (tpath, tparent) = target.clone().expect("a binding is entered through an occurrence");
                let in_body = Some(tpath.0[0]) == body_idx;
                let pick = |a, b| if in_body { a } else { b };
                let rule = if is_lam {
                    pick(RuleName::CpIn, RuleName::CpE)
                } else {
                    match tparent {
                        Parent::Root => return done(Outcome::Whnf, path, chain, Some(tpath), demanded),
                        Parent::Seq => pick(RuleName::SeqIn, RuleName::SeqE),
                        Parent::Case => {
                            let case_node = e.at(&tpath.parent().unwrap()).unwrap();
                            check_alternative(case_node, node)?;
                            pick(RuleName::CaseIn, RuleName::CaseE)
                        }
                        Parent::App => return Err(stuck(e, &tpath)),
                    }
                };
                return done(Outcome::Redex(rule), path, chain, Some(tpath), demanded);
            }
            Expr::App(..) | Expr::Seq(..) | Expr::Case(..) => unreachable!("spine descent stops at other nodes"),
        }
    }
}

fn check_alternative(case_node: &Expr, scrutinee: &Expr) -> Result<(), EvalError> {
    let (Expr::Case(_, _, alts), Expr::Con(c, _)) = (case_node, scrutinee) else {
        return Err(EvalError::Stuck("case over a non-constructor".into()));
    };
    if alts.iter().any(|a| a.con == *c) {
        Ok(())
    } else {
        Err(EvalError::Stuck(format!("no alternative for `{c}`")))
    }
}

fn stuck(e: &Expr, path: &Path) -> EvalError {
    let what = e.at(path).map(|s| s.to_string()).unwrap_or_default();
    EvalError::Stuck(format!("cannot reduce at {path}: {what}"))
}
