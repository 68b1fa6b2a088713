//! The `dalg` command line: argument parsing and dispatch, kept apart from
//! `main` so tests can drive it with in-memory output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dalg::diffalg::ThetaRank;
use dalg::engine::{
    arithmetic_multi, arithmetic_uni, multi_inputs, output_context, uni_inputs, LhoMode, MultiOptions, MultiOutcome, UniOptions,
};
use dalg::frontend::{emit_error_json, emit_json, emit_not_found_json, parse_equation_in, parse_system, print_ade, ParsedSystem, PrintStyle};
use dalg::groebner::{Budget, ElimStrategy, GbOptions};
use dalg::polyring::Rational;
use dalg::seriescheck::{certify_diff, parse_series, TruncSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "dalg", version, about = "Algebraic differential equations for arithmetic of D-algebraic functions")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ordinary inputs: an ADE for a rational expression of their solutions.
    Uni(UniArgs),
    /// A single ordinary input.
    Unary(UniArgs),
    /// Partial inputs, searched up to an order bound.
    Multi(MultiArgs),
    /// Checks a result against truncated series.
    Verify(VerifyArgs),
    /// Theta-rank of a multi-index, or the multi-index of a rank.
    Rank(RankArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input system file.
    #[arg(short = 'i', long = "input", conflicts_with = "text", required_unless_present = "text")]
    input: Option<PathBuf>,
    /// Input system given inline.
    #[arg(long)]
    text: Option<String>,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    #[arg(long)]
    max_pairs: Option<u64>,
    #[arg(long)]
    time_limit_s: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Ordering {
    Lex,
    Lexdeg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Lho {
    Auto,
    True,
    False,
}

#[derive(Args, Debug)]
struct UniArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "auto")]
    lho: Lho,
    #[arg(long, value_enum)]
    ordering: Option<Ordering>,
    #[arg(long)]
    separants_zeros: bool,
    #[arg(long)]
    diff_first: bool,
    #[arg(long)]
    latex: bool,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug)]
struct MultiArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Componentwise order bound, one entry per independent variable.
    #[arg(long, value_delimiter = ',')]
    maxord: Option<Vec<u32>>,
    #[arg(long, value_enum)]
    ordering: Option<Ordering>,
    #[arg(long)]
    latex: bool,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// File holding the output equation, as printed by `uni` or `multi`.
    #[arg(long)]
    result: PathBuf,
    /// Closed form for the target, e.g. `cos(x) + exp(x)`.
    #[arg(long)]
    series: String,
    /// Truncation degree.
    #[arg(long)]
    trunc: u32,
    /// Parameter value, `name=rational`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, Rational)>,
}

#[derive(Args, Debug)]
struct RankArgs {
    #[arg(long = "l")]
    l: usize,
    #[arg(long, value_delimiter = ',', conflicts_with = "index", required_unless_present = "index")]
    tuple: Option<Vec<u32>>,
    #[arg(long)]
    index: Option<u64>,
}

fn parse_param(s: &str) -> Result<(String, Rational), String> {
    let (name, value) = s.split_once('=').ok_or("expected name=value")?;
    let value: Rational = value.trim().parse().map_err(|_| format!("not a rational: {value}"))?;
    Ok((name.trim().to_string(), value))
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn error(message: impl ToString) -> Self {
        Failure { code: EXIT_ERROR, message: message.to_string() }
    }

    fn usage(message: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }
}

/// Runs the command line with `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let json = match &cli.cmd {
        Command::Uni(a) | Command::Unary(a) => a.json,
        Command::Multi(a) => a.json,
        _ => false,
    };
    match dispatch(cli.cmd, out, err) {
        Ok(code) => code,
        Err(f) => {
            if json && f.code == EXIT_ERROR {
                let _ = writeln!(out, "{}", emit_error_json(&f.message));
            } else {
                let _ = writeln!(err, "error: {}", f.message);
            }
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Uni(a) => uni(a, false, out, err),
        Command::Unary(a) => uni(a, true, out, err),
        Command::Multi(a) => multi(a, out, err),
        Command::Verify(a) => verify(a, out),
        Command::Rank(a) => rank(a, out),
    }
}

fn load(input: &InputArgs) -> Result<ParsedSystem, Failure> {
    let text = match (&input.input, &input.text) {
        (Some(path), _) => std::fs::read_to_string(path).map_err(|e| Failure::error(format!("{}: {e}", path.display())))?,
        (None, Some(t)) => t.clone(),
        (None, None) => return Err(Failure::usage("no input given")),
    };
    parse_system(&text).map_err(Failure::error)
}

fn gb_options(b: &BudgetArgs) -> Result<GbOptions, Failure> {
    let mut budget = Budget::default();
    if let Some(n) = b.max_pairs {
        budget.max_pairs = n;
    }
    if let Some(s) = b.time_limit_s {
        if !s.is_finite() || s <= 0.0 {
            return Err(Failure::usage("--time-limit-s must be positive"));
        }
        budget = budget.with_time_limit(Duration::from_secs_f64(s));
    }
    Ok(GbOptions { budget, ..Default::default() })
}

fn strategy(o: Option<Ordering>) -> Option<ElimStrategy> {
    o.map(|o| match o {
        Ordering::Lex => ElimStrategy::Lex,
        Ordering::Lexdeg => ElimStrategy::LexDeg,
    })
}

fn style(latex: bool) -> PrintStyle {
    if latex {
        PrintStyle::Latex
    } else {
        PrintStyle::Ascii
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::error(e)
}

fn uni(a: UniArgs, single: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let sys = load(&a.input)?;
    let ades = uni_inputs(&sys).map_err(Failure::error)?;
    if single && ades.len() != 1 {
        return Err(Failure::usage(format!("unary takes exactly one input equation, got {}", ades.len())));
    }
    let opts = UniOptions {
        lho_mode: match a.lho {
            Lho::Auto => LhoMode::Auto,
            Lho::True => LhoMode::ForceLho,
            Lho::False => LhoMode::ForceNonLho,
        },
        ordering: strategy(a.ordering),
        separants_zeros: a.separants_zeros,
        diff_first: a.diff_first,
        gb: gb_options(&a.budget)?,
        ..Default::default()
    };
    let res = arithmetic_uni(&ades, &sys.target, &sys.target_name, &opts).map_err(Failure::error)?;
    if a.json {
        writeln!(out, "{}", emit_json(&res)).map_err(io)?;
    } else {
        for w in &res.warnings {
            writeln!(err, "warning: {w}").map_err(io)?;
        }
        writeln!(out, "{}", print_ade(&res, style(a.latex))).map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn multi(a: MultiArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let sys = load(&a.input)?;
    if let Some(m) = &a.maxord {
        if m.len() != sys.ctx.l() {
            return Err(Failure::usage(format!("--maxord has {} entries but the system has {} variables", m.len(), sys.ctx.l())));
        }
    }
    let inputs = multi_inputs(&sys).map_err(Failure::error)?;
    let opts = MultiOptions { maxord: a.maxord, ordering: strategy(a.ordering), gb: gb_options(&a.budget)?, ..Default::default() };
    match arithmetic_multi(&inputs, &sys.target, &sys.target_name, &opts).map_err(Failure::error)? {
        MultiOutcome::Found(res) => {
            if a.json {
                writeln!(out, "{}", emit_json(&res)).map_err(io)?;
            } else {
                for w in &res.warnings {
                    writeln!(err, "warning: {w}").map_err(io)?;
                }
                writeln!(out, "{}", print_ade(&res, style(a.latex))).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        MultiOutcome::NotFound(nf) => {
            if a.json {
                writeln!(out, "{}", emit_not_found_json(&nf.bound, &nf.options, nf.elapsed.as_millis() as u64)).map_err(io)?;
            } else {
                let bound: Vec<String> = nf.bound.iter().map(u32::to_string).collect();
                writeln!(out, "not found: no equation within order bound ({})", bound.join(", ")).map_err(io)?;
            }
            Ok(EXIT_NOT_FOUND)
        }
    }
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let sys = load(&a.input)?;
    let text = std::fs::read_to_string(&a.result).map_err(|e| Failure::error(format!("{}: {e}", a.result.display())))?;
    let line = text.lines().map(str::trim).find(|l| !l.is_empty()).ok_or_else(|| Failure::error("result file is empty"))?;
    let mut deps: Vec<usize> = sys.target.num.derivs().iter().chain(sys.target.den.derivs().iter())
        .flat_map(|(i, _)| sys.ctx.indet(*i).deps.clone())
        .collect();
    deps.sort_unstable();
    deps.dedup();
    let ctx = output_context(&sys.ctx, &sys.target_name, deps);
    let eq = parse_equation_in(line, &ctx).map_err(Failure::error)?;
    let params: BTreeMap<String, Rational> = a.params.into_iter().collect();
    let series: TruncSeries = parse_series(&a.series, ctx.independents(), &params, a.trunc).map_err(Failure::error)?;
    let assignment = BTreeMap::from([(sys.target_name.clone(), series)]);
    match certify_diff(&eq.num, &assignment, &params, a.trunc) {
        Ok(true) => {
            writeln!(out, "true").map_err(io)?;
            Ok(EXIT_OK)
        }
        Ok(false) => {
            writeln!(out, "false").map_err(io)?;
            Ok(EXIT_ERROR)
        }
        Err(e @ dalg::seriescheck::SeriesError::InsufficientTruncation { .. }) => Err(Failure::usage(e)),
        Err(e) => Err(Failure::error(e)),
    }
}

fn rank(a: RankArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let theta = ThetaRank::new(a.l).map_err(Failure::usage)?;
    if let Some(t) = a.tuple {
        if t.len() != a.l {
            return Err(Failure::usage(format!("--tuple needs {} entries", a.l)));
        }
        writeln!(out, "{}", theta.rank(&t).map_err(Failure::error)?).map_err(io)?;
    } else if let Some(k) = a.index {
        let t: Vec<String> = theta.unrank(k).iter().map(u32::to_string).collect();
        writeln!(out, "{}", t.join(",")).map_err(io)?;
    }
    Ok(EXIT_OK)
}
