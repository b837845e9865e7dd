use super::expr::{Alt, Expr};

/// Single-line concrete syntax that parses back to an alpha-equivalent term.
pub fn print(e: &Expr) -> String {
    let mut out = String::new();
    expr(e, &mut out);
    out
}

/// Like [`print`], but puts each binding of a top-level letrec on its own line.
pub fn print_pretty(e: &Expr) -> String {
    match e {
        Expr::Letrec(bs, body) => {
            let mut out = String::from("letrec\n");
            for (i, b) in bs.iter().enumerate() {
                out.push_str("  ");
                out.push_str(&b.var.to_string());
                out.push_str(" = ");
                expr(&b.rhs, &mut out);
                out.push_str(if i + 1 < bs.len() { ",\n" } else { "\n" });
            }
            out.push_str("in ");
            expr(body, &mut out);
            out
        }
        _ => print(e),
    }
}

fn expr(e: &Expr, out: &mut String) {
    match e {
        Expr::Letrec(bs, body) => {
            out.push_str("letrec ");
            for (i, b) in bs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&b.var.to_string());
                out.push_str(" = ");
                expr(&b.rhs, out);
            }
            out.push_str(" in ");
            expr(body, out);
        }
        Expr::Lam(..) => {
            out.push('\\');
            let mut e = e;
            while let Expr::Lam(x, b) = e {
                out.push_str(&x.to_string());
                out.push(' ');
                e = b;
            }
            out.push_str("-> ");
            expr(e, out);
        }
        Expr::Case(_, s, alts) => {
            out.push_str("case ");
            expr(s, out);
            out.push_str(" of { ");
            for (i, a) in alts.iter().enumerate() {
                if i > 0 {
                    out.push_str("; ");
                }
                alt(a, out);
            }
            out.push_str(" }");
        }
        Expr::Seq(a, b) => {
            out.push_str("seq ");
            atom(a, out);
            out.push(' ');
            atom(b, out);
        }
        Expr::App(..) => {
            let mut spine = Vec::new();
            let mut f = e;
            while let Expr::App(g, a) = f {
                spine.push(&**a);
                f = g;
            }
            if matches!(f, Expr::Con(..)) {
                out.push('(');
                expr(f, out);
                out.push(')');
            } else {
                atom(f, out);
            }
            for a in spine.iter().rev() {
                out.push(' ');
                atom(a, out);
            }
        }
        Expr::Con(c, args) => {
            if let Some(n) = e.as_numeral().filter(|n| *n > 0) {
                out.push_str(&n.to_string());
                return;
            }
            out.push_str(c.as_str());
            for a in args {
                out.push(' ');
                atom(a, out);
            }
        }
        Expr::Var(x) => out.push_str(&x.to_string()),
    }
}

fn alt(a: &Alt, out: &mut String) {
    out.push_str(a.con.as_str());
    for v in &a.vars {
        out.push(' ');
        out.push_str(&v.to_string());
    }
    out.push_str(" -> ");
    expr(&a.rhs, out);
}

fn atom(e: &Expr, out: &mut String) {
    let simple = match e {
        Expr::Var(_) => true,
        Expr::Con(_, args) => args.is_empty() || e.as_numeral().is_some(),
        _ => false,
    };
    if simple {
        expr(e, out);
    } else {
        out.push('(');
        expr(e, out);
        out.push(')');
    }
}
