//! Random well-formed terms for property tests.

use rand::Rng;

use super::expr::{Alt, Binding, Expr};
use super::name::{Name, Symbol};

/// Generates a closed, well-formed term over the prelude types with pairwise
/// distinct binders. No typing discipline is imposed.
pub fn random_closed_term<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    let mut g = Gen { rng, counter: 0 };
    let mut scope = Vec::new();
    g.term(depth, &mut scope)
}

struct Gen<'a, R> {
    rng: &'a mut R,
    counter: u32,
}

impl<R: Rng> Gen<'_, R> {
    fn fresh(&mut self, base: &str) -> Name {
        self.counter += 1;
        Name::new(&format!("{base}{}", self.counter))
    }

    fn term(&mut self, depth: u32, scope: &mut Vec<Name>) -> Expr {
        let leaf = depth == 0 || self.rng.gen_bool(0.25);
        if leaf {
            return match self.rng.gen_range(0..4) {
                0 | 1 if !scope.is_empty() => Expr::Var(scope[self.rng.gen_range(0..scope.len())]),
                0 => Expr::con("True", vec![]),
                1 => Expr::con("Nil", vec![]),
                2 => Expr::con("False", vec![]),
                _ => Expr::numeral(self.rng.gen_range(0..3)),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..8) {
            0 => Expr::app(self.term(d, scope), self.term(d, scope)),
            1 => {
                let x = self.fresh("x");
                scope.push(x);
                let b = self.term(d, scope);
                scope.pop();
                Expr::lam(x, b)
            }
            2 => Expr::seq(self.term(d, scope), self.term(d, scope)),
            3 => Expr::con("Cons", vec![self.term(d, scope), self.term(d, scope)]),
            4 => {
                let s = self.term(d, scope);
                let a = self.term(d, scope);
                let (h, t) = (self.fresh("h"), self.fresh("t"));
                scope.push(h);
                scope.push(t);
                let b = self.term(d, scope);
                scope.truncate(scope.len() - 2);
                Expr::Case(
                    Symbol::intern("List"),
                    Box::new(s),
                    vec![
                        Alt { con: Symbol::intern("Nil"), vars: vec![], rhs: a },
                        Alt { con: Symbol::intern("Cons"), vars: vec![h, t], rhs: b },
                    ],
                )
            }
            5 => {
                let s = self.term(d, scope);
                let a = self.term(d, scope);
                let b = self.term(d, scope);
                Expr::Case(
                    Symbol::intern("Bool"),
                    Box::new(s),
                    vec![
                        Alt { con: Symbol::intern("True"), vars: vec![], rhs: a },
                        Alt { con: Symbol::intern("False"), vars: vec![], rhs: b },
                    ],
                )
            }
            _ => {
                let n = self.rng.gen_range(1..=3);
                let vars: Vec<Name> = (0..n).map(|_| self.fresh("v")).collect();
                scope.extend(vars.iter().copied());
                let bs = vars.iter().map(|v| Binding::new(*v, self.term(d, scope))).collect();
                let body = self.term(d, scope);
                scope.truncate(scope.len() - n);
                Expr::Letrec(bs, Box::new(body))
            }
        }
    }
}
