//! Experiment programs and runners: the fold benchmark, the shared-list
//! demonstration for common subexpression elimination, and append
//! associativity.

mod corpus;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::reduce::{evaluate, EvalError, EvalResult, Status};
use crate::syntax::{Expr, Name, Path, SizeOptions, SyntaxError};
use crate::transform::{inline, TransformError};

pub use corpus::{append_program, cse_programs, fold_source, seq_dominated, source, CORPUS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("corpus program does not parse: {0}")]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("no WHNF within {fuel} steps ({status})")]
    NoWhnf { fuel: u64, status: Status },
    #[error("unknown fold variant `{0}`")]
    UnknownVariant(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FoldVariant {
    Foldl,
    FoldlStrict,
    Foldr,
}

impl FoldVariant {
    pub const ALL: [FoldVariant; 3] = [FoldVariant::Foldl, FoldVariant::FoldlStrict, FoldVariant::Foldr];

    /// Name of the fold binding in the corpus.
    pub fn binder(self) -> &'static str {
        match self {
            FoldVariant::Foldl => "foldl",
            FoldVariant::FoldlStrict => "foldl'",
            FoldVariant::Foldr => "foldr",
        }
    }
}

impl fmt::Display for FoldVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FoldVariant::Foldl => "foldl",
            FoldVariant::FoldlStrict => "foldl-strict",
            FoldVariant::Foldr => "foldr",
        })
    }
}

impl FromStr for FoldVariant {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "foldl" => Ok(FoldVariant::Foldl),
            "foldl-strict" | "foldl'" => Ok(FoldVariant::FoldlStrict),
            "foldr" => Ok(FoldVariant::Foldr),
            _ => Err(BenchError::UnknownVariant(s.to_string())),
        }
    }
}

/// One measured program of the fold benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub variant: FoldVariant,
    pub inlined: bool,
    pub k: u64,
    pub rln: u64,
    pub spmax: usize,
}

impl fmt::Display for BenchRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}\t{}", self.variant, self.inlined, self.k, self.rln, self.spmax)
    }
}

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// The fold program for a list of length `k`. The inlined variant is
/// obtained by inlining `xor` at the call site inside the fold definition.
pub fn fold_program(variant: FoldVariant, inlined: bool, k: u64) -> Result<Expr, BenchError> {
    let mut e = crate::syntax::parse_expr(fold_source(variant, inlined))?;
    if inlined {
        e = inline_xor(&e, variant)?;
    }
    e.plug(Name::new("k"), &Expr::numeral(k));
    Ok(e)
}

/// Inlines the `xor` call inside the fold binding.
pub fn inline_xor(e: &Expr, variant: FoldVariant) -> Result<Expr, BenchError> {
    let xor = Name::new("xor");
    let Expr::Letrec(bs, _) = e else {
        return Err(TransformError::NotAbstraction(xor).into());
    };
    let fold = Name::new(variant.binder());
    let i = bs.iter().position(|b| b.var == fold).ok_or(TransformError::NotAbstraction(fold))?;
    let occ = bs[i].rhs.free_occurrences(xor).into_iter().next().ok_or(TransformError::NotAbstraction(xor))?;
    let occ = Path([vec![i], occ.0].concat());
    Ok(inline(e, xor, &occ)?)
}

/// Evaluates with unit-size numerals and insists on a WHNF.
pub fn measure(e: &Expr, fuel: u64) -> Result<EvalResult, BenchError> {
    let r = evaluate(e, fuel, SizeOptions::PEANO_UNIT)?;
    match r.status {
        Status::Whnf => Ok(r),
        status => Err(BenchError::NoWhnf { fuel, status }),
    }
}

pub fn fold_experiment(variant: FoldVariant, inlined: bool, k: u64, fuel: u64) -> Result<BenchRow, BenchError> {
    let r = measure(&fold_program(variant, inlined, k)?, fuel)?;
    let spmax = r.measures.spmax.finite().expect("a WHNF has finite spmax");
    Ok(BenchRow { variant, inlined, k, rln: r.measures.rln, spmax })
}

/// spmax of the program that recomputes the list and of the one that shares it.
pub fn cse_demo(n: u64, fuel: u64) -> Result<(usize, usize), BenchError> {
    let (before, after) = cse_programs(n)?;
    let spmax = |e: &Expr| -> Result<usize, BenchError> { Ok(measure(e, fuel)?.measures.spmax.finite().unwrap()) };
    Ok((spmax(&before)?, spmax(&after)?))
}

/// Context used around the two append nestings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AppendContext {
    /// `last [.]`
    Last,
    /// `seq (last [.]) s` where evaluating `s` needs more space than the rest.
    SeqDominated,
}

/// spmax of `(xs ++ ys) ++ zs` minus spmax of `xs ++ (ys ++ zs)`, lists of length `n`.
pub fn append_assoc(n: u64, ctx: AppendContext, fuel: u64) -> Result<i64, BenchError> {
    let left = append_program(n, true, ctx)?;
    let right = append_program(n, false, ctx)?;
    let spmax = |e: &Expr| -> Result<i64, BenchError> {
        Ok(measure(e, fuel)?.measures.spmax.finite().unwrap() as i64)
    };
    Ok(spmax(&left)? - spmax(&right)?)
}
