use std::fmt;
use std::str::FromStr;

use super::CheckError;
use crate::syntax::{parse_expr, Expr, Name, Path};
use crate::transform::ContextClass;

/// Variable standing for the hole of a context template.
pub const HOLE: &str = "__hole";

fn hole() -> Name {
    Name::new(HOLE)
}

/// An expression with exactly one free occurrence of [`HOLE`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextTemplate {
    pub body: Expr,
    pub hole_path: Path,
}

impl ContextTemplate {
    /// Fails unless `body` has exactly one free [`HOLE`].
    pub fn new(body: Expr) -> Result<ContextTemplate, CheckError> {
        let occ = body.free_occurrences(hole());
        match occ.as_slice() {
            [p] => Ok(ContextTemplate { hole_path: p.clone(), body }),
            _ => Err(CheckError::HoleCount(occ.len())),
        }
    }

    /// Capture-permitting fill.
    pub fn fill(&self, e: &Expr) -> Expr {
        let mut out = self.body.clone();
        out.replace_at(&self.hole_path, e.clone()).expect("hole path");
        out
    }
}

impl fmt::Display for ContextTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self.body.to_string();
        f.write_str(&text.replace(HOLE, "[.]"))
    }
}

/// Built-in context families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ContextFamily {
    /// Nested reduction contexts up to a depth.
    Reduction,
    /// The hole is bound in a letrec and applied by list consumers over `n`
    /// calls, or applied to the numeral `n`.
    ListDriver,
    /// `seq (last [.]) s` where `s` holds a list of length proportional to `n`.
    SeqDominator,
}

impl ContextFamily {
    pub const ALL: [ContextFamily; 3] =
        [ContextFamily::Reduction, ContextFamily::ListDriver, ContextFamily::SeqDominator];

    /// Whether the generated contexts depend on `n`.
    pub fn is_parameterized(self) -> bool {
        !matches!(self, ContextFamily::Reduction)
    }

    /// Every hole sits in a reduction position.
    pub fn class(self) -> ContextClass {
        ContextClass::Reduction
    }

    pub fn generate(self, n: u64, depth: u32) -> Vec<ContextTemplate> {
        match self {
            ContextFamily::Reduction => reduction_contexts(depth),
            ContextFamily::ListDriver => list_driver(n),
            ContextFamily::SeqDominator => vec![seq_dominator(n)],
        }
    }
}

impl fmt::Display for ContextFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContextFamily::Reduction => "reduction",
            ContextFamily::ListDriver => "list-driver",
            ContextFamily::SeqDominator => "seq-dominator",
        })
    }
}

impl FromStr for ContextFamily {
    type Err = CheckError;

    fn from_str(s: &str) -> Result<Self, CheckError> {
        match s {
            "a" | "reduction" => Ok(ContextFamily::Reduction),
            "b" | "list-driver" => Ok(ContextFamily::ListDriver),
            "c" | "seq-dominator" => Ok(ContextFamily::SeqDominator),
            _ => Err(CheckError::UnknownFamily(s.to_string())),
        }
    }
}

const LAYERS: [&str; 5] = [
    "__r True",
    "case __r of { True -> False; False -> True }",
    "case __r of { Nil -> Nil; Cons h t -> t }",
    "seq __r True",
    "letrec c1 = __r, c2 = c1 in seq c2 (Cons c2 Nil)",
];

/// One layer of the reduction-context grammar around `r`.
fn productions(r: &Expr) -> Vec<Expr> {
    LAYERS
        .iter()
        .map(|src| {
            let mut e = parse_expr(src).expect("well-formed");
            e.plug(Name::new("__r"), r);
            e
        })
        .collect()
}

/// All contexts of at most `depth` nested productions, shallowest first.
fn reduction_contexts(depth: u32) -> Vec<ContextTemplate> {
    let mut layer = vec![Expr::var(HOLE)];
    let mut all = layer.clone();
    for _ in 0..depth {
        layer = layer.iter().flat_map(productions).collect();
        all.extend(layer.iter().cloned());
    }
    all.into_iter().map(|b| ContextTemplate::new(b).expect("one hole")).collect()
}

const CONSUMERS: &str = "\
    and = \\l -> case l of { Nil -> True; Cons b r -> case b of { True -> and r; False -> False } }, \
    last = \\l -> case l of { Nil -> Nil; Cons h r -> case r of { Nil -> h; Cons h2 r2 -> last r } }";

fn list_driver(n: u64) -> Vec<ContextTemplate> {
    let mut elems = String::from("Nil");
    for _ in 0..n {
        elems = format!("Cons (y 0) ({elems})");
    }
    let driver = format!(
        "letrec {CONSUMERS}, y = {HOLE}, z = {elems} in case and z of {{ True -> last z; False -> False }}"
    );
    let applied = Expr::app(Expr::var(HOLE), Expr::numeral(n));
    [parse_expr(&driver).expect("well-formed"), applied]
        .into_iter()
        .map(|b| ContextTemplate::new(b).expect("one hole"))
        .collect()
}

fn seq_dominator(n: u64) -> ContextTemplate {
    let m = 4 * n;
    let src = format!(
        "letrec {CONSUMERS}, \
         mk = \\k -> case k of {{ Zero -> Nil; Succ q -> Cons True (mk q) }}, \
         spine = \\l -> case l of {{ Nil -> True; Cons h t -> spine t }}, \
         big = mk {m} \
         in seq (last {HOLE}) (seq (spine big) big)"
    );
    ContextTemplate::new(parse_expr(&src).expect("well-formed")).expect("one hole")
}
