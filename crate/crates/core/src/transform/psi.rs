use crate::syntax::{Alt, Binding, Expr, Fresh, Name};

/// Translation to machine expressions: application arguments and constructor
/// arguments that are not variables are bound by a fresh letrec.
pub fn psi_translate(e: &Expr) -> Expr {
    let mut fresh = Fresh::above(e);
    psi(e, &mut fresh)
}

fn psi(e: &Expr, fresh: &mut Fresh) -> Expr {
    let y = Name::new("y");
    match e {
        Expr::Var(_) => e.clone(),
        Expr::App(s, t) => {
            let f = psi(s, fresh);
            match **t {
                Expr::Var(_) => Expr::App(Box::new(f), t.clone()),
                _ => {
                    let v = fresh.name(y);
                    let arg = psi(t, fresh);
                    Expr::Letrec(vec![Binding::new(v, arg)], Box::new(Expr::App(Box::new(f), Box::new(Expr::Var(v)))))
                }
            }
        }
        Expr::Lam(x, b) => Expr::Lam(*x, Box::new(psi(b, fresh))),
        Expr::Seq(a, b) => Expr::Seq(Box::new(psi(a, fresh)), Box::new(psi(b, fresh))),
        Expr::Con(c, args) => {
            let mut bs = Vec::new();
            let mut vars = Vec::with_capacity(args.len());
            for a in args {
                match a {
                    Expr::Var(_) => vars.push(a.clone()),
                    _ => {
                        let v = fresh.name(y);
                        bs.push(Binding::new(v, psi(a, fresh)));
                        vars.push(Expr::Var(v));
                    }
                }
            }
            let con = Expr::Con(*c, vars);
            if bs.is_empty() {
                con
            } else {
                Expr::Letrec(bs, Box::new(con))
            }
        }
        Expr::Case(k, s, alts) => Expr::Case(
            *k,
            Box::new(psi(s, fresh)),
            alts.iter().map(|a| Alt { con: a.con, vars: a.vars.clone(), rhs: psi(&a.rhs, fresh) }).collect(),
        ),
        Expr::Letrec(bs, body) => Expr::Letrec(
            bs.iter().map(|b| Binding::new(b.var, psi(&b.rhs, fresh))).collect(),
            Box::new(psi(body, fresh)),
        ),
    }
}
