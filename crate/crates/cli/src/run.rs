use std::fmt::Write as _;
use std::path::{Path as FsPath, PathBuf};

use lrpgc::bench::{self, AppendContext, BenchError};
use lrpgc::check::{self, CheckError, CheckParams};
use lrpgc::reduce::{evaluate, EvalError, RuleName, Status};
use lrpgc::syntax::{parse_program, print, Expr, Name, Path, SizeOptions, SyntaxError};
use lrpgc::transform::{apply_rule, list_redexes, psi_translate, redexes_at, seq_insert, TransformError, Typing};
use thiserror::Error;

use crate::{AppendCtx, BenchCommand, CheckCommand, Command, ContextOpts, EvalOpts, InlineChoice, TransformArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{source}", path.display())]
    Syntax { path: PathBuf, source: SyntaxError },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Bench(BenchError::NoWhnf { status, .. }) | CliError::Check(CheckError::Diverges(status)) => {
                status_code(*status).max(1)
            }
            _ => 1,
        }
    }
}

/// 0 for a WHNF, 2 when fuel ran out, 3 for a blackhole.
pub fn status_code(s: Status) -> i32 {
    match s {
        Status::Whnf => 0,
        Status::FuelExhausted => 2,
        Status::Blackhole => 3,
    }
}

fn size_opts(o: &EvalOpts) -> SizeOptions {
    if o.peano_unit {
        SizeOptions::PEANO_UNIT
    } else {
        SizeOptions::PLAIN
    }
}

/// Reads `path`, or standard input for `-`.
fn load(path: &FsPath) -> Result<Expr, CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(io)?
    } else {
        std::fs::read_to_string(path).map_err(io)?
    };
    let program = parse_program(&text).map_err(|source| CliError::Syntax { path: path.to_path_buf(), source })?;
    Ok(program.expr)
}

fn typing(assume_typed: bool) -> Typing {
    if assume_typed {
        Typing::AssumeTyped
    } else {
        Typing::Untyped
    }
}

fn transform_at(e: &Expr, rule: RuleName, pos: &Path, nth: usize, t: Typing) -> Result<Expr, CliError> {
    guard_typing(rule, t)?;
    let found = redexes_at(e, pos, rule);
    let inst = found.get(nth).ok_or_else(|| TransformError::NoMatch { rule, position: pos.clone() })?;
    Ok(apply_rule(e, inst, t)?)
}

/// Rejects typed-only rules before any matching.
fn guard_typing(rule: RuleName, t: Typing) -> Result<(), TransformError> {
    if rule == RuleName::CaseId && t == Typing::Untyped {
        return Err(TransformError::RequiresTyping(rule));
    }
    Ok(())
}

fn params(ctx: &ContextOpts) -> CheckParams {
    CheckParams {
        families: ctx.families.clone(),
        depth: ctx.depth,
        ns: ctx.ns.clone(),
        fuel: ctx.eval.fuel,
        size: size_opts(&ctx.eval),
    }
}

/// Writes the command's standard output to `out` and returns the exit code.
pub fn run(cmd: Command, out: &mut String) -> Result<i32, CliError> {
    match cmd {
        Command::Eval { file, opts, show } => {
            let r = evaluate(&load(&file)?, opts.fuel, size_opts(&opts))?;
            writeln!(out, "{}", r.summary_line()).unwrap();
            if show {
                writeln!(out, "{}", print(&r.final_expr)).unwrap();
            }
            Ok(status_code(r.status))
        }
        Command::Measure { file, opts } => {
            let r = evaluate(&load(&file)?, opts.fuel, size_opts(&opts))?;
            writeln!(out, "status\trln\trlnall\trlnLCSC\tspmax\n{}", r.summary_line()).unwrap();
            Ok(status_code(r.status))
        }
        Command::Trace { file, opts } => {
            let r = evaluate(&load(&file)?, opts.fuel, size_opts(&opts))?;
            for line in r.trace_lines() {
                writeln!(out, "{line}").unwrap();
            }
            writeln!(out, "{}", r.summary_line()).unwrap();
            Ok(status_code(r.status))
        }
        Command::Redexes { file, rule } => {
            let e = load(&file)?;
            let rules = rule.map_or_else(|| RuleName::ALL.to_vec(), |r| vec![r]);
            for r in rules {
                for inst in list_redexes(&e, r) {
                    writeln!(out, "{inst}").unwrap();
                }
            }
            Ok(0)
        }
        Command::Transform(args) => transform(args, out),
        Command::Check { what } => check(what, out),
        Command::Bench { what } => bench(what, out),
        Command::Psi { file } => {
            writeln!(out, "{}", print(&psi_translate(&load(&file)?))).unwrap();
            Ok(0)
        }
    }
}

fn transform(a: TransformArgs, out: &mut String) -> Result<i32, CliError> {
    let e = load(&a.file)?;
    if a.rule == RuleName::SeqInsert {
        let (Some(pos), Some(var)) = (&a.pos, &a.var) else {
            return Err(CliError::Usage("seqInsert needs --pos and --var".into()));
        };
        writeln!(out, "{}", print(&seq_insert(&e, pos, Name::new(var))?)).unwrap();
        return Ok(0);
    }
    let t = typing(a.assume_typed);
    guard_typing(a.rule, t)?;
    match &a.pos {
        Some(pos) => writeln!(out, "{}", print(&transform_at(&e, a.rule, pos, a.nth, t)?)).unwrap(),
        None => {
            for inst in list_redexes(&e, a.rule) {
                writeln!(out, "{}\t{}", inst.position, print(&apply_rule(&e, &inst, t)?)).unwrap();
            }
        }
    }
    Ok(0)
}

fn check(what: CheckCommand, out: &mut String) -> Result<i32, CliError> {
    match what {
        CheckCommand::Pair { file, rule, pos, nth, against, assume_typed, ctx } => {
            let s = load(&file)?;
            let t = match (rule, pos, against) {
                (_, _, Some(other)) => load(&other)?,
                (Some(rule), Some(pos), None) => transform_at(&s, rule, &pos, nth, typing(assume_typed))?,
                _ => return Err(CliError::Usage("give --rule with --pos, or --against".into())),
            };
            let v = check::check_pair(&s, &t, &params(&ctx))?;
            writeln!(out, "{}", v.tsv()).unwrap();
            if let Some(c) = &v.counterexample {
                let delta = c.delta.map_or_else(|| "-".to_string(), |d| d.to_string());
                writeln!(out, "counterexample\t{}\t{delta}", c.context).unwrap();
            }
            Ok(0)
        }
        CheckCommand::Table { ctx } => {
            let corpus = check::instance_corpus()?;
            let leaks = check::leak_instances()?;
            for r in check::check_theorem_table(&corpus, &leaks, &params(&ctx))? {
                writeln!(out, "{}", r.tsv()).unwrap();
            }
            Ok(0)
        }
        CheckCommand::CpBound { seed, count, fuel } => {
            let dash = |o: Option<String>| o.unwrap_or_else(|| "-".into());
            for r in check::cp_bound_sample(seed, count, fuel)? {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.size_v,
                    r.rln_s,
                    r.spmax_s,
                    dash(r.spmax_t.map(|x| x.to_string())),
                    r.general_ok,
                    dash(r.surface_ok.map(|x| x.to_string())),
                    r.instance
                )
                .unwrap();
            }
            Ok(0)
        }
    }
}

fn bench(what: BenchCommand, out: &mut String) -> Result<i32, CliError> {
    match what {
        BenchCommand::Fold { variant, k, inline, fuel } => {
            let inlined: &[bool] = match inline {
                InlineChoice::Plain => &[false],
                InlineChoice::Inlined => &[true],
                InlineChoice::Both => &[false, true],
            };
            for v in variant {
                for &i in inlined {
                    for &k in &k {
                        writeln!(out, "{}", bench::fold_experiment(v, i, k, fuel)?).unwrap();
                    }
                }
            }
        }
        BenchCommand::Cse { n, fuel } => {
            for n in n {
                let (before, after) = bench::cse_demo(n, fuel)?;
                writeln!(out, "{n}\t{before}\t{after}").unwrap();
            }
        }
        BenchCommand::Append { n, contexts, fuel } => {
            for c in contexts {
                let (name, ctx) = match c {
                    AppendCtx::Last => ("last", AppendContext::Last),
                    AppendCtx::SeqDominated => ("seq-dominated", AppendContext::SeqDominated),
                };
                for &n in &n {
                    writeln!(out, "{name}\t{n}\t{}", bench::append_assoc(n, ctx, fuel)?).unwrap();
                }
            }
        }
    }
    Ok(0)
}
