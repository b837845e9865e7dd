use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{lemma_side_conditions, probes, Aggregate, CheckError, CheckParams, Classification, Verdict};
use crate::bench::{append_program, cse_programs, fold_program, AppendContext, FoldVariant};
use crate::reduce::{evaluate, RuleName, Spmax, Status};
use crate::syntax::gen::random_closed_term;
use crate::syntax::{parse_expr, Expr, Name, Path, SizeOptions};
use crate::transform::{apply_rule, classify_context, list_redexes, seq_insert, ContextClass, Detail, RuleInstance, Typing};

use RuleName::*;

const INSTANCES: &str = include_str!("../../data/instances.lrp");
const LEAKS: &str = include_str!("../../data/leaks.lrp");

/// Instances taken per rule and program.
const PER_PROGRAM: usize = 4;

fn entries(text: &str) -> impl Iterator<Item = &str> {
    text.split("\n---\n").map(str::trim).filter(|e| !e.is_empty())
}

/// The programs whose redexes supply the table's instances.
pub fn instance_corpus() -> Result<Vec<Expr>, CheckError> {
    entries(INSTANCES).map(|src| Ok(parse_expr(src)?)).collect()
}

/// A curated pair `s -> t` of a transformation that is not space-safe.
#[derive(Clone, Debug)]
pub struct LeakInstance {
    pub rule: RuleName,
    pub s: Expr,
    pub t: Expr,
}

fn binding_var(e: &Expr, inst: &RuleInstance) -> Option<Name> {
    match (e.at(&inst.position), &inst.detail) {
        (Some(Expr::Letrec(bs, _)), Detail::Target { binding, .. }) => bs.get(*binding).map(|b| b.var),
        _ => None,
    }
}

fn copied_value<'a>(e: &'a Expr, inst: &RuleInstance) -> Option<&'a Expr> {
    match (e.at(&inst.position), &inst.detail) {
        (Some(Expr::Letrec(bs, _)), Detail::Target { binding, .. }) => bs.get(*binding).map(|b| &b.rhs),
        _ => None,
    }
}

fn leak_instance(entry: &str) -> Result<LeakInstance, CheckError> {
    let bad = |m: &str| CheckError::Corpus(format!("{m} in entry starting `{}`", entry.lines().next().unwrap_or("")));
    let tag = entry
        .lines()
        .find_map(|l| l.trim().strip_prefix("-- tag:"))
        .ok_or_else(|| bad("missing tag"))?;
    let words: Vec<&str> = tag.split_whitespace().collect();
    let s = parse_expr(entry)?;
    let (rule, t) = match words.as_slice() {
        ["cse"] => {
            let inst = list_redexes(&s, Cse).into_iter().next().ok_or_else(|| bad("no cse instance"))?;
            (Cse, apply_rule(&s, &inst, Typing::Untyped)?)
        }
        ["cp", v] => {
            let v = Name::new(v);
            let inst = [CpIn, CpE]
                .into_iter()
                .flat_map(|r| list_redexes(&s, r))
                .find(|i| binding_var(&s, i) == Some(v))
                .ok_or_else(|| bad("no copy of the named binding"))?;
            (CpE, apply_rule(&s, &inst, Typing::Untyped)?)
        }
        ["soec", x, p] => {
            let p: Path = p.parse().map_err(|m: String| bad(&m))?;
            (SeqInsert, seq_insert(&s, &p, Name::new(x))?)
        }
        _ => return Err(bad("unknown tag")),
    };
    Ok(LeakInstance { rule, s, t })
}

/// The curated leak instances.
pub fn leak_instances() -> Result<Vec<LeakInstance>, CheckError> {
    entries(LEAKS).map(leak_instance).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Improvement,
    Equivalence,
    SafeUpTo(i64),
    /// Per instance, at most the size of the copied abstraction.
    SafeUpToCopied,
    Leak,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Improvement => f.write_str("ImprovementConsistent"),
            Expectation::Equivalence => f.write_str("EquivalenceConsistent"),
            Expectation::SafeUpTo(c) => write!(f, "SafeUpTo({c})"),
            Expectation::SafeUpToCopied => f.write_str("SafeUpTo(size(v))"),
            Expectation::Leak => f.write_str("LeakEvidence"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Select {
    Any,
    /// Copy targets outside abstractions and alternatives.
    TopTarget,
    /// Redex position of at least this class.
    At(ContextClass),
    /// From the leak corpus.
    Leak(RuleName),
}

/// One row of the table: a rule family and what it should satisfy.
#[derive(Clone, Copy, Debug)]
pub struct TableRow {
    pub name: &'static str,
    pub expected: Expectation,
    rules: &'static [RuleName],
    select: Select,
}

const fn row(name: &'static str, expected: Expectation, rules: &'static [RuleName], select: Select) -> TableRow {
    TableRow { name, expected, rules, select }
}

pub const ROWS: [TableRow; 19] = [
    row("lbeta", Expectation::Improvement, &[Lbeta], Select::Any),
    row("case", Expectation::Improvement, &[CaseC, CaseIn, CaseE], Select::Any),
    row("seq", Expectation::Improvement, &[SeqC, SeqIn, SeqE], Select::Any),
    row("lll", Expectation::Improvement, &[Lapp, Lcase, Lseq, LletIn, LletE], Select::Any),
    row("gc", Expectation::Improvement, &[Gc1, Gc2], Select::Any),
    row("case*", Expectation::Improvement, &[CaseStar], Select::Any),
    row("caseId", Expectation::Improvement, &[CaseId], Select::Any),
    row("cpx", Expectation::Equivalence, &[CpxIn, CpxE], Select::Any),
    row("abs", Expectation::Equivalence, &[Abs], Select::Any),
    row("abse", Expectation::Equivalence, &[Abse], Select::Any),
    row("xch", Expectation::Equivalence, &[Xch], Select::Any),
    row("ucp", Expectation::Equivalence, &[Ucp1, Ucp2, Ucp3], Select::Any),
    row("case-cx", Expectation::Equivalence, &[CaseCx], Select::Any),
    row("cpxT", Expectation::Equivalence, &[CpxIn, CpxE], Select::TopTarget),
    row("gcEq", Expectation::Equivalence, &[GcEq], Select::Any),
    row("(T,cpcxT)", Expectation::SafeUpTo(1), &[CpcxT], Select::At(ContextClass::Top)),
    row("(S,cpS)", Expectation::SafeUpToCopied, &[CpS], Select::At(ContextClass::Surface)),
    row("cse", Expectation::Leak, &[], Select::Leak(Cse)),
    row("soec", Expectation::Leak, &[], Select::Leak(SeqInsert)),
];

/// The `cp` leak row; not part of [`ROWS`] because the table lists it only
/// among the leaks without a bound to check.
pub const CP_LEAK_ROW: TableRow = row("cp", Expectation::Leak, &[], Select::Leak(CpE));

fn selected(e: &Expr, inst: &RuleInstance, select: Select) -> bool {
    match select {
        Select::Any | Select::Leak(_) => true,
        Select::TopTarget => match &inst.detail {
            Detail::Target { target, .. } => classify_context(e, target).is_ok_and(|c| c >= ContextClass::Top),
            _ => false,
        },
        Select::At(c) => inst.context >= c,
    }
}

/// An instance `s -> t` plus the bound it must respect, if any.
struct Pair {
    s: Expr,
    t: Expr,
    bound: Option<i64>,
}

fn pairs(row: &TableRow, corpus: &[Expr], leaks: &[LeakInstance]) -> Result<Vec<Pair>, CheckError> {
    if let Select::Leak(rule) = row.select {
        return Ok(leaks
            .iter()
            .filter(|l| l.rule == rule)
            .map(|l| Pair { s: l.s.clone(), t: l.t.clone(), bound: None })
            .collect());
    }
    let mut out = Vec::new();
    for e in corpus {
        for &rule in row.rules {
            let insts = list_redexes(e, rule).into_iter().filter(|i| selected(e, i, row.select));
            for inst in insts.take(PER_PROGRAM) {
                let t = apply_rule(e, &inst, Typing::AssumeTyped)?;
                let bound = match row.expected {
                    Expectation::SafeUpToCopied => copied_value(e, &inst).map(|v| v.size(SizeOptions::PLAIN) as i64),
                    _ => None,
                };
                out.push(Pair { s: e.clone(), t, bound });
            }
        }
    }
    Ok(out)
}

/// A row's verdict against its expectation.
#[derive(Clone, Debug)]
pub struct RowResult {
    pub row: TableRow,
    pub verdict: Verdict,
    /// Instances whose maximal increase exceeded their own bound.
    pub bound_failures: usize,
}

impl RowResult {
    pub fn meets(&self) -> bool {
        let c = self.verdict.classification;
        match self.row.expected {
            Expectation::Improvement => matches!(
                c,
                Classification::ImprovementConsistent | Classification::EquivalenceConsistent
            ),
            Expectation::Equivalence => c == Classification::EquivalenceConsistent,
            Expectation::SafeUpTo(k) => c == Classification::SafeUpTo(k),
            Expectation::SafeUpToCopied => {
                self.bound_failures == 0 && !matches!(c, Classification::Violation | Classification::LeakEvidence)
            }
            Expectation::Leak => c == Classification::LeakEvidence,
        }
    }

    /// `row, expected, then the verdict columns`.
    pub fn tsv(&self) -> String {
        let v = &self.verdict;
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.row.name,
            self.row.expected,
            v.classification,
            v.max_delta,
            v.min_delta,
            v.growth,
            v.contexts_tested,
            v.warnings
        )
    }
}

/// Evaluates one row over the corpus.
pub fn check_row(
    row: &TableRow,
    corpus: &[Expr],
    leaks: &[LeakInstance],
    params: &CheckParams,
) -> Result<RowResult, CheckError> {
    let pairs = pairs(row, corpus, leaks)?;
    if pairs.is_empty() {
        return Err(CheckError::MissingInstance(row.name));
    }
    let probes = probes(params);
    let mut agg = Aggregate::new(&params.ns);
    let mut bound_failures = 0;
    for p in &pairs {
        let side_ok = match row.expected {
            Expectation::Equivalence => p.s.size(params.size) == p.t.size(params.size),
            Expectation::Improvement => lemma_side_conditions(&p.s, &p.t, params.size),
            _ => true,
        };
        if !side_ok {
            agg.warn();
        }
        let worst = agg.add_instance(&p.s, &p.t, &probes, params);
        if let (Some(bound), Some(worst)) = (p.bound, worst) {
            if worst > bound {
                bound_failures += 1;
            }
        }
    }
    let mut verdict = agg.finish(row.name)?;
    verdict.instances_tested = pairs.len();
    Ok(RowResult { row: *row, verdict, bound_failures })
}

/// One verdict per row of [`ROWS`], followed by the `cp` leak row.
pub fn check_theorem_table(
    corpus: &[Expr],
    leaks: &[LeakInstance],
    params: &CheckParams,
) -> Result<Vec<RowResult>, CheckError> {
    ROWS.iter().chain([&CP_LEAK_ROW]).map(|r| check_row(r, corpus, leaks, params)).collect()
}

/// Outcome of the copy bound check for one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpBoundReport {
    pub instance: RuleInstance,
    pub size_v: usize,
    pub rln_s: u64,
    pub spmax_s: usize,
    /// `None` unless the copy converges.
    pub spmax_t: Option<usize>,
    pub general_ok: bool,
    /// Only for surface copies in surface positions.
    pub surface_ok: Option<bool>,
}

impl CpBoundReport {
    pub fn holds(&self) -> bool {
        self.general_ok && self.surface_ok != Some(false)
    }
}

/// Checks `spmax(t) <= (rln(s) + 2) * size(v) + spmax(s)` for the copy `s -> t`,
/// and `spmax(t) <= size(v) + spmax(s)` when the copy is a surface copy in a
/// surface position.
pub fn check_cp_bound(s: &Expr, inst: &RuleInstance, fuel: u64) -> Result<CpBoundReport, CheckError> {
    if !matches!(inst.rule, CpIn | CpE | CpS) {
        return Err(CheckError::NotCopy(inst.to_string()));
    }
    let v = copied_value(s, inst).ok_or_else(|| CheckError::NotCopy(inst.to_string()))?;
    let size_v = v.size(SizeOptions::PLAIN);
    let rs = evaluate(s, fuel, SizeOptions::PLAIN)?;
    let (Status::Whnf, Spmax::Finite(spmax_s)) = (rs.status, rs.measures.spmax) else {
        return Err(CheckError::Diverges(rs.status));
    };
    let t = apply_rule(s, inst, Typing::Untyped)?;
    let rt = evaluate(&t, fuel, SizeOptions::PLAIN)?;
    let spmax_t = match (rt.status, rt.measures.spmax) {
        (Status::Whnf, Spmax::Finite(m)) => Some(m),
        _ => None,
    };
    let rln_s = rs.measures.rln;
    let general_ok = spmax_t.is_some_and(|m| m as u64 <= (rln_s + 2) * size_v as u64 + spmax_s as u64);
    let surface = inst.rule == CpS && inst.context >= ContextClass::Surface;
    let surface_ok = surface.then(|| spmax_t.is_some_and(|m| m <= size_v + spmax_s));
    Ok(CpBoundReport { instance: inst.clone(), size_v, rln_s, spmax_s, spmax_t, general_ok, surface_ok })
}

/// Programs with copy redexes: the instance corpus, small benchmark
/// programs, and converging random terms.
/// Converging programs paired with their (cp) instances. Random terms are
/// added until there are at least four candidates per requested sample or
/// the attempt budget runs out.
fn cp_candidates(seed: u64, count: usize, fuel: u64) -> Result<Vec<(Expr, RuleInstance)>, CheckError> {
    const ATTEMPTS: usize = 20_000;
    let converges = |e: &Expr| evaluate(e, fuel, SizeOptions::PLAIN).is_ok_and(|r| r.status == Status::Whnf);
    let instances = |e: &Expr| -> Vec<RuleInstance> { [CpIn, CpE].into_iter().flat_map(|r| list_redexes(e, r)).collect() };
    let mut fixed = instance_corpus()?;
    for v in FoldVariant::ALL {
        fixed.push(fold_program(v, false, 3)?);
    }
    let (before, after) = cse_programs(3)?;
    fixed.extend([before, after, append_program(2, true, AppendContext::Last)?]);
    let mut out = Vec::new();
    for e in fixed.into_iter().filter(|e| converges(e)) {
        out.extend(instances(&e).into_iter().map(|i| (e.clone(), i)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        if out.len() >= 4 * count {
            break;
        }
        let e = random_closed_term(&mut rng, 4);
        let found = instances(&e);
        if !found.is_empty() && converges(&e) {
            out.extend(found.into_iter().map(|i| (e.clone(), i)));
        }
    }
    Ok(out)
}

/// Checks the copy bound on `count` (cp) instances drawn with `seed` from the
/// shipped programs and seeded random terms.
pub fn cp_bound_sample(seed: u64, count: usize, fuel: u64) -> Result<Vec<CpBoundReport>, CheckError> {
    let candidates = cp_candidates(seed, count, fuel)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    candidates.choose_multiple(&mut rng, count).map(|(e, inst)| check_cp_bound(e, inst, fuel)).collect()
}

/// The surface bound on every surface copy in a surface position of `corpus`.
pub fn cp_surface_reports(corpus: &[Expr], fuel: u64) -> Result<Vec<CpBoundReport>, CheckError> {
    let mut out = Vec::new();
    for e in corpus {
        for inst in list_redexes(e, CpS).into_iter().filter(|i| i.context >= ContextClass::Surface) {
            out.push(check_cp_bound(e, &inst, fuel)?);
        }
    }
    Ok(out)
}
