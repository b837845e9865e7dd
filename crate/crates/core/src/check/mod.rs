//! Empirical space-improvement checking: a transformation instance `s -> t`
//! is evaluated inside generated contexts and the differences
//! `spmax(C[t]) - spmax(C[s])` are aggregated into a [`Verdict`].

mod families;
mod table;

use std::fmt;

use thiserror::Error;

use crate::bench::BenchError;
use crate::reduce::{evaluate, EvalError, EvalResult, Spmax, Status};
use crate::syntax::{Expr, SizeOptions, SyntaxError};
use crate::transform::TransformError;

pub use families::{ContextFamily, ContextTemplate, HOLE};
pub use table::{
    check_cp_bound, check_row, check_theorem_table, cp_bound_sample, cp_surface_reports, instance_corpus,
    leak_instances, CpBoundReport, Expectation, LeakInstance, RowResult, TableRow, CP_LEAK_ROW, ROWS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("a context template needs exactly one hole, found {0}")]
    HoleCount(usize),
    #[error("unknown context family `{0}`")]
    UnknownFamily(String),
    #[error("no context produced comparable results")]
    NoEvidence,
    #[error("no corpus instance for row `{0}`")]
    MissingInstance(&'static str),
    #[error("`{0}` is not a copy instance")]
    NotCopy(String),
    #[error("source program does not converge ({0})")]
    Diverges(Status),
    #[error("malformed corpus entry: {0}")]
    Corpus(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Bench(#[from] BenchError),
}

/// Which contexts to generate and how to measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckParams {
    pub families: Vec<ContextFamily>,
    pub depth: u32,
    /// Sizes for parameterized families.
    pub ns: Vec<u64>,
    pub fuel: u64,
    pub size: SizeOptions,
}

pub const DEFAULT_FUEL: u64 = 1_000_000;

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            families: vec![ContextFamily::Reduction, ContextFamily::ListDriver],
            depth: 3,
            ns: vec![5, 10, 20],
            fuel: DEFAULT_FUEL,
            size: SizeOptions::PLAIN,
        }
    }
}

/// A generated context together with the parameter it was generated for.
#[derive(Clone, Debug)]
pub struct Probe {
    pub family: ContextFamily,
    /// `None` for families that ignore `n`.
    pub n: Option<u64>,
    pub template: ContextTemplate,
}

/// Every context of `params`, in a fixed order.
pub fn probes(params: &CheckParams) -> Vec<Probe> {
    let mut out = Vec::new();
    for &family in &params.families {
        if family.is_parameterized() {
            for &n in &params.ns {
                out.extend(family.generate(n, params.depth).into_iter().map(|template| Probe {
                    family,
                    n: Some(n),
                    template,
                }));
            }
        } else {
            out.extend(family.generate(0, params.depth).into_iter().map(|template| Probe { family, n: None, template }));
        }
    }
    out
}

/// Result of evaluating both sides in one context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Both reached WHNF.
    Delta(i64),
    /// Both stuck or both blackholed: the context does not fit the instance.
    Unfit,
    /// One side ran out of fuel.
    Exhausted,
    /// Exactly one side converges.
    Mismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Value(usize),
    Fails,
    Exhausted,
}

fn outcome(e: &Expr, params: &CheckParams) -> Outcome {
    match evaluate(e, params.fuel, params.size) {
        Ok(EvalResult { status: Status::Whnf, measures, .. }) => match measures.spmax {
            Spmax::Finite(m) => Outcome::Value(m),
            Spmax::Unbounded => Outcome::Fails,
        },
        Ok(EvalResult { status: Status::FuelExhausted, .. }) => Outcome::Exhausted,
        Ok(EvalResult { status: Status::Blackhole, .. }) => Outcome::Fails,
        Err(_) => Outcome::Fails,
    }
}

/// Compares `C[s]` and `C[t]`.
pub fn compare(s: &Expr, t: &Expr, template: &ContextTemplate, params: &CheckParams) -> Comparison {
    let a = outcome(&template.fill(s), params);
    let b = outcome(&template.fill(t), params);
    match (a, b) {
        (Outcome::Value(x), Outcome::Value(y)) => Comparison::Delta(y as i64 - x as i64),
        (Outcome::Exhausted, _) | (_, Outcome::Exhausted) => Comparison::Exhausted,
        (Outcome::Fails, Outcome::Fails) => Comparison::Unfit,
        _ => Comparison::Mismatch,
    }
}

/// Growth of the per-`n` maximal difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    Constant(i64),
    /// Exact rational slope `num / den`, `den > 0`.
    Linear { num: i64, den: i64 },
    /// Strictly increasing with increasing differences per unit of `n`.
    Superlinear,
    /// Neither of the above, or too few points to tell.
    Irregular,
}

impl Growth {
    /// Fits `(n, maxDelta)` points sorted by `n`.
    pub fn fit(points: &[(u64, i64)]) -> Growth {
        let Some(&(_, first)) = points.first() else {
            return Growth::Constant(0);
        };
        if points.iter().all(|&(_, d)| d == first) {
            return Growth::Constant(first);
        }
        if points.len() < 3 {
            return Growth::Irregular;
        }
        let slopes: Vec<(i64, i64)> =
            points.windows(2).map(|w| (w[1].1 - w[0].1, w[1].0 as i64 - w[0].0 as i64)).collect();
        // a/b == c/d with b, d > 0
        let same = slopes.windows(2).all(|w| w[0].0 * w[1].1 == w[1].0 * w[0].1);
        if same {
            let (num, den) = slopes[0];
            let g = gcd(num.abs(), den).max(1);
            return Growth::Linear { num: num / g, den: den / g };
        }
        let increasing = slopes.iter().all(|&(a, _)| a > 0);
        let accelerating = slopes.windows(2).all(|w| w[1].0 * w[0].1 > w[0].0 * w[1].1);
        if increasing && accelerating {
            Growth::Superlinear
        } else {
            Growth::Irregular
        }
    }

    pub fn is_leak(self) -> bool {
        match self {
            Growth::Linear { num, .. } => num > 0,
            Growth::Superlinear => true,
            _ => false,
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Growth::Constant(c) => write!(f, "constant({c})"),
            Growth::Linear { num, den: 1 } => write!(f, "linear({num})"),
            Growth::Linear { num, den } => write!(f, "linear({num}/{den})"),
            Growth::Superlinear => f.write_str("superlinear"),
            Growth::Irregular => f.write_str("irregular"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    ImprovementConsistent,
    EquivalenceConsistent,
    /// Observed maximal increase.
    SafeUpTo(i64),
    LeakEvidence,
    Violation,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::ImprovementConsistent => f.write_str("ImprovementConsistent"),
            Classification::EquivalenceConsistent => f.write_str("EquivalenceConsistent"),
            Classification::SafeUpTo(c) => write!(f, "SafeUpTo({c})"),
            Classification::LeakEvidence => f.write_str("LeakEvidence"),
            Classification::Violation => f.write_str("Violation"),
        }
    }
}

/// The context with the largest increase, or the first convergence mismatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub context: String,
    /// `None` for a convergence mismatch.
    pub delta: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub rule: String,
    pub instances_tested: usize,
    /// Contexts whose comparison entered the aggregate.
    pub contexts_tested: usize,
    pub max_delta: i64,
    pub min_delta: i64,
    pub growth: Growth,
    pub counterexample: Option<Counterexample>,
    pub classification: Classification,
    /// Fuel exhaustions plus failed side conditions.
    pub warnings: usize,
    pub violations: usize,
    /// Contexts in which neither side converges.
    pub unfit: usize,
}

impl Verdict {
    /// `rule, classification, maxDelta, minDelta, growth, contextsTested, warnings`.
    pub fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.rule,
            self.classification,
            self.max_delta,
            self.min_delta,
            self.growth,
            self.contexts_tested,
            self.warnings
        )
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tsv())
    }
}

/// Depends only on the aggregate.
pub fn classify(violations: usize, max_delta: i64, min_delta: i64, growth: Growth) -> Classification {
    if violations > 0 {
        Classification::Violation
    } else if growth.is_leak() {
        Classification::LeakEvidence
    } else if max_delta == 0 && min_delta == 0 {
        Classification::EquivalenceConsistent
    } else if max_delta <= 0 {
        Classification::ImprovementConsistent
    } else {
        Classification::SafeUpTo(max_delta)
    }
}

/// Running aggregate over instances and contexts.
#[derive(Clone, Debug, Default)]
pub struct Aggregate {
    instances: usize,
    tested: usize,
    max: Option<i64>,
    min: Option<i64>,
    /// Maximal delta per parameter; unparameterized contexts count for all.
    per_n: Vec<(u64, Option<i64>)>,
    flat_max: Option<i64>,
    worst: Option<Counterexample>,
    warnings: usize,
    violations: usize,
    unfit: usize,
}

impl Aggregate {
    pub fn new(ns: &[u64]) -> Aggregate {
        let mut ns = ns.to_vec();
        ns.sort_unstable();
        ns.dedup();
        Aggregate { per_n: ns.into_iter().map(|n| (n, None)).collect(), ..Aggregate::default() }
    }

    pub fn warn(&mut self) {
        self.warnings += 1;
    }

    /// Evaluates one instance in every probe; returns its largest delta.
    pub fn add_instance(&mut self, s: &Expr, t: &Expr, probes: &[Probe], params: &CheckParams) -> Option<i64> {
        self.instances += 1;
        let mut worst = None;
        for probe in probes {
            let c = compare(s, t, &probe.template, params);
            if let Comparison::Delta(d) = c {
                worst = Some(worst.map_or(d, |w: i64| w.max(d)));
            }
            self.record(probe, c);
        }
        worst
    }

    pub fn record(&mut self, probe: &Probe, c: Comparison) {
        match c {
            Comparison::Delta(d) => {
                self.tested += 1;
                self.min = Some(self.min.map_or(d, |m| m.min(d)));
                if self.max.is_none_or(|m| d > m) {
                    self.max = Some(d);
                    if d > 0 && self.violations == 0 {
                        self.worst = Some(Counterexample { context: probe.template.to_string(), delta: Some(d) });
                    }
                }
                match probe.n {
                    Some(n) => {
                        if let Some(slot) = self.per_n.iter_mut().find(|(m, _)| *m == n) {
                            slot.1 = Some(slot.1.map_or(d, |m: i64| m.max(d)));
                        }
                    }
                    None => self.flat_max = Some(self.flat_max.map_or(d, |m| m.max(d))),
                }
            }
            Comparison::Unfit => self.unfit += 1,
            Comparison::Exhausted => self.warnings += 1,
            Comparison::Mismatch => {
                if self.violations == 0 {
                    self.worst = Some(Counterexample { context: probe.template.to_string(), delta: None });
                }
                self.violations += 1;
            }
        }
    }

    pub fn growth(&self) -> Growth {
        let points: Vec<(u64, i64)> = self
            .per_n
            .iter()
            .filter_map(|&(n, d)| match (d, self.flat_max) {
                (Some(d), Some(f)) => Some((n, d.max(f))),
                (Some(d), None) => Some((n, d)),
                (None, f) => f.map(|f| (n, f)),
            })
            .collect();
        if points.is_empty() {
            return Growth::Constant(self.max.unwrap_or(0));
        }
        Growth::fit(&points)
    }

    pub fn finish(self, rule: impl Into<String>) -> Result<Verdict, CheckError> {
        let (Some(max), Some(min)) = (self.max, self.min) else {
            return Err(CheckError::NoEvidence);
        };
        let growth = self.growth();
        Ok(Verdict {
            rule: rule.into(),
            instances_tested: self.instances,
            contexts_tested: self.tested,
            max_delta: max,
            min_delta: min,
            growth,
            counterexample: self.worst,
            classification: classify(self.violations, max, min, growth),
            warnings: self.warnings,
            violations: self.violations,
            unfit: self.unfit,
        })
    }
}

/// `size(t) <= size(s)` and `FV(t) ⊆ FV(s)`: without them, reduction
/// contexts alone do not witness an improvement.
pub fn lemma_side_conditions(s: &Expr, t: &Expr, opts: SizeOptions) -> bool {
    t.size(opts) <= s.size(opts) && s.free_vars().is_superset(&t.free_vars())
}

/// Checks the single instance `s -> t`.
pub fn check_pair(s: &Expr, t: &Expr, params: &CheckParams) -> Result<Verdict, CheckError> {
    let mut agg = Aggregate::new(&params.ns);
    if !lemma_side_conditions(s, t, params.size) {
        agg.warn();
    }
    agg.add_instance(s, t, &probes(params), params);
    agg.finish("pair")
}

#[cfg(test)]
mod tests;
