use super::{AppendContext, BenchError, FoldVariant};
use crate::syntax::{parse_expr, Expr, Name};

/// Every shipped program, by file name.
pub const CORPUS: [(&str, &str); 10] = [
    ("foldl.lrp", include_str!("../../data/foldl.lrp")),
    ("foldl_strict.lrp", include_str!("../../data/foldl_strict.lrp")),
    ("foldr.lrp", include_str!("../../data/foldr.lrp")),
    ("foldl_xor.lrp", include_str!("../../data/foldl_xor.lrp")),
    ("foldl_strict_xor.lrp", include_str!("../../data/foldl_strict_xor.lrp")),
    ("foldr_xor.lrp", include_str!("../../data/foldr_xor.lrp")),
    ("foldl_inlined.lrp", include_str!("../../data/foldl_inlined.lrp")),
    ("cse_before.lrp", include_str!("../../data/cse_before.lrp")),
    ("cse_after.lrp", include_str!("../../data/cse_after.lrp")),
    ("append.lrp", include_str!("../../data/append.lrp")),
];

pub fn source(file: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(f, _)| *f == file).map(|(_, s)| *s)
}

/// Source of a fold program; the inlining variant calls `xor` directly.
pub fn fold_source(variant: FoldVariant, inlined: bool) -> &'static str {
    let file = match (variant, inlined) {
        (FoldVariant::Foldl, false) => "foldl.lrp",
        (FoldVariant::FoldlStrict, false) => "foldl_strict.lrp",
        (FoldVariant::Foldr, false) => "foldr.lrp",
        (FoldVariant::Foldl, true) => "foldl_xor.lrp",
        (FoldVariant::FoldlStrict, true) => "foldl_strict_xor.lrp",
        (FoldVariant::Foldr, true) => "foldr_xor.lrp",
    };
    source(file).expect("shipped")
}

fn with_numeral(file: &str, var: &str, n: u64) -> Result<Expr, BenchError> {
    let mut e = parse_expr(source(file).expect("shipped"))?;
    e.plug(Name::new(var), &Expr::numeral(n));
    Ok(e)
}

/// The recomputing and the sharing program of the shared-list example.
pub fn cse_programs(n: u64) -> Result<(Expr, Expr), BenchError> {
    Ok((with_numeral("cse_before.lrp", "n", n)?, with_numeral("cse_after.lrp", "n", n)?))
}

/// `s` for the seq-dominated context: forces a fully built list of length
/// `m` and returns it.
pub fn seq_dominated(m: u64) -> Expr {
    let src = format!(
        "letrec mk = \\r -> case r of {{ Zero -> Nil; Succ q -> Cons True (mk q) }}, \
         lst = mk {m}, \
         spine = \\l -> case l of {{ Nil -> True; Cons h t -> spine t }} \
         in seq (spine lst) lst"
    );
    parse_expr(&src).expect("well-formed")
}

/// `(xs ++ ys) ++ zs` when `left`, else `xs ++ (ys ++ zs)`, inside `ctx`.
pub fn append_program(n: u64, left: bool, ctx: AppendContext) -> Result<Expr, BenchError> {
    let mut e = with_numeral("append.lrp", "n", n)?;
    let nested = if left { "append (append xs ys) zs" } else { "append xs (append ys zs)" };
    e.plug(Name::new("hole"), &parse_expr(nested)?);
    Ok(match ctx {
        AppendContext::Last => e,
        AppendContext::SeqDominated => Expr::seq(e, seq_dominated(8 * n + 64)),
    })
}
