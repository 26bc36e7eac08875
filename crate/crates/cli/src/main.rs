use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mtk::charexp::{fourier_block, gomi_trace_with};
use mtk::coeff::{series_expand, BiLaurent, RatFn};
use mtk::coxeter::{format_word, parse_word, CartanType, WeylGroup};
use mtk::expr::{parse_laurent, Expr};
use mtk::hecke::KLTable;
use mtk::homfly::{homfly_invariant, parse_braid};
use mtk::selftest::{run_criterion, Level, SelftestOptions};
use mtk::trace::{ocneanu_trace, positivity_report, solve_trace, MarkovParams};
use mtk::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTE: u8 = 2;
const EXIT_SELFTEST: u8 = 3;

#[derive(Parser)]
#[command(name = "mtk", version, about = "Markov traces on Iwahori–Hecke algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TypeArgs {
    /// A, B (or C) or D
    #[arg(long)]
    family: String,
    #[arg(long)]
    rank: usize,
}

#[derive(Args, Clone, Default)]
struct OutputArgs {
    /// Machine-readable JSON output
    #[arg(long)]
    json: bool,
    /// Write powers of v as powers of q^{1/2}
    #[arg(long, conflicts_with_all = ["json", "raw"])]
    human: bool,
    /// Write q as v^2 (the default)
    #[arg(long)]
    raw: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Markov trace of a Hecke algebra element
    Trace {
        #[command(flatten)]
        ty: TypeArgs,
        /// e.g. "1 2 1", "s1 -2", "C' 1 2", "2*1 - e"
        #[arg(long)]
        element: String,
        /// Value of Tr(T ι(a))/Tr(a) for types B and D (default -t)
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        kl_cache: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Kazhdan–Lusztig basis and polynomials
    Kl {
        #[command(flatten)]
        ty: TypeArgs,
        /// Reduced word of w; all pairs when omitted
        #[arg(long)]
        w: Option<String>,
        #[arg(long)]
        kl_cache: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Mixed Poincaré series Tr(C'_w)
    Hochschild {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        w: String,
        /// Also expand in v through this order and check positivity
        #[arg(long)]
        cutoff: Option<i32>,
        #[arg(long)]
        kl_cache: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Trace through Hecke characters, Fourier matrix and Molien series
    Gomi {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        element: String,
        /// Fourier data file (JSON)
        #[arg(long)]
        fourier: Option<PathBuf>,
        #[arg(long)]
        kl_cache: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// HOMFLYPT polynomial of a braid closure
    Homfly {
        #[arg(long, allow_hyphen_values = true)]
        braid: String,
        #[arg(long)]
        strands: usize,
        #[arg(long, value_enum, default_value_t = Vars::Az)]
        vars: Vars,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Solve for the trace on every standard basis element
    SolveTrace {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        y: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the acceptance suite
    Selftest {
        #[arg(long, value_enum, default_value_t = SelftestLevel::Quick)]
        level: SelftestLevel,
        /// Validate this KL cache in the KL criterion
        #[arg(long)]
        kl_cache: Option<PathBuf>,
        /// Run only these criteria
        #[arg(long = "criterion")]
        criteria: Vec<usize>,
        /// Use Tr(σ^-1 ι(a)) = v·Tr(a) for the type-A trace under test
        #[arg(long, hide = true)]
        mutate_inverse: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Vars {
    Vt,
    Az,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelftestLevel {
    Quick,
    Full,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidType(_) | Error::BadGenerator { .. } => Failure::Usage(e.to_string()),
            other => Failure::Compute(other),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn cartan(ty: &TypeArgs) -> Result<CartanType, Failure> {
    Ok(CartanType::new(ty.family.parse()?, ty.rank)?)
}

fn kl_table(ct: CartanType, path: Option<&Path>) -> Result<KLTable, Failure> {
    match path.map(Path::to_path_buf).or_else(|| KLTable::default_cache_path(ct)) {
        Some(p) => Ok(KLTable::load_or_build(ct, &p)?),
        None => Ok(KLTable::new(ct)?),
    }
}

/// `v^k` rendered as `q^{k/2}`.
fn humanize(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != 'v' {
            out.push(chars[i]);
            i += 1;
            continue;
        }
        i += 1;
        let mut k: i64 = 1;
        if i < chars.len() && chars[i] == '^' {
            let start = i + 1;
            let mut j = start;
            if j < chars.len() && chars[j] == '-' {
                j += 1;
            }
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            k = chars[start..j].iter().collect::<String>().parse().unwrap_or(1);
            i = j;
        }
        out.push_str(&match (k % 2 == 0, k / 2) {
            (true, 1) => "q".to_string(),
            (true, h) => format!("q^{h}"),
            (false, _) => format!("q^{{{k}/2}}"),
        });
    }
    out
}

fn render(r: &RatFn, out: &OutputArgs) -> String {
    let s = r.to_string();
    if out.human {
        humanize(&s)
    } else {
        s
    }
}

/// Prints a line, ignoring a closed stdout (as when piped into `head`).
fn say(line: impl std::fmt::Display) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn emit(out: &OutputArgs, value: Value, text: String) {
    if out.json {
        say(serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        say(text);
    }
}

fn y_value(y: &Option<String>) -> Result<BiLaurent, Failure> {
    match y {
        Some(text) => Ok(parse_laurent(text)?),
        None => Ok(-BiLaurent::t()),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Trace { ty, element, y, kl_cache, out } => {
            let ct = cartan(&ty)?;
            let group = WeylGroup::shared(ct)?;
            let expr = Expr::parse(&element)?;
            let mut kl = if expr.needs_kl() { Some(kl_table(ct, kl_cache.as_deref())?) } else { None };
            let h = expr.evaluate(&group, kl.as_mut())?;
            let value = match (ct.family, &y) {
                (mtk::coxeter::Family::A, None) => ocneanu_trace(ct.rank, &h)?,
                (mtk::coxeter::Family::A, Some(_)) => {
                    return Err(Failure::Usage("--y applies to types B and D only".into()));
                }
                _ => solve_trace(ct, &y_value(&y)?)?.evaluate(&h)?,
            };
            let j = json!({"type": ct.name(), "element": element, "value": value.normalized().to_json(), "display": value.to_string()});
            emit(&out, j, render(&value, &out));
        }
        Command::Kl { ty, w, kl_cache, out } => {
            let ct = cartan(&ty)?;
            let mut kl = kl_table(ct, kl_cache.as_deref())?;
            let group = kl.group().clone();
            let targets: Vec<usize> = match &w {
                Some(text) => {
                    let word = parse_word(text, ct)?;
                    let x = group.index_of_word(&word)?;
                    if group.length(x) != word.len() {
                        return Err(Failure::Usage(format!("word {text:?} is not reduced")));
                    }
                    vec![x]
                }
                None => (0..group.len()).collect(),
            };
            let mut rows = Vec::new();
            let mut lines = Vec::new();
            for &wi in &targets {
                if w.is_some() {
                    lines.push(format!("C'_{{{}}} = {}", format_word(group.word(wi)), kl.basis_element(wi)));
                }
                for x in 0..group.len() {
                    let p = kl.polynomial(x, wi);
                    if p.is_zero() {
                        continue;
                    }
                    let (xs, ws) = (format_word(group.word(x)), format_word(group.word(wi)));
                    lines.push(format!("P({xs}; {ws}) = {p}"));
                    rows.push(json!({"x": xs, "w": ws, "coeffs": p.0}));
                }
            }
            let text = lines.join("\n");
            let text = if out.human { humanize(&text) } else { text };
            emit(&out, json!({"type": ct.name(), "polynomials": rows}), text);
        }
        Command::Hochschild { ty, w, cutoff, kl_cache, out } => {
            let ct = cartan(&ty)?;
            let mut kl = kl_table(ct, kl_cache.as_deref())?;
            let group = kl.group().clone();
            let word = parse_word(&w, ct)?;
            let x = group.index_of_word(&word)?;
            if group.length(x) != word.len() {
                return Err(Failure::Usage(format!("word {w:?} is not reduced")));
            }
            let value = mtk::trace::hochschild_series(&mut kl, x)?;
            let mut j = json!({"type": ct.name(), "w": format_word(group.word(x)), "value": value.normalized().to_json(), "display": value.to_string()});
            let mut text = render(&value, &out);
            if let Some(n) = cutoff {
                let series = series_expand(&value, n)?;
                let report = positivity_report(&value, n, ct.rank)?;
                let poly = series.to_poly();
                let shown = if out.human { humanize(&poly.to_string()) } else { poly.to_string() };
                text.push_str(&format!("\nseries through v^{n}: {shown}"));
                match &report.failure {
                    None => text.push_str("\npositivity: pass"),
                    Some(f) => text.push_str(&format!("\npositivity: fail at v^{}: {}", f.order, f.coeff)),
                }
                j["series"] = poly.to_json();
                j["positive"] = json!(report.pass);
            }
            emit(&out, j, text);
        }
        Command::Gomi { ty, element, fourier, kl_cache, out } => {
            let ct = cartan(&ty)?;
            let group = WeylGroup::shared(ct)?;
            let expr = Expr::parse(&element)?;
            let mut kl = if expr.needs_kl() { Some(kl_table(ct, kl_cache.as_deref())?) } else { None };
            let h = expr.evaluate(&group, kl.as_mut())?;
            let block = fourier_block(ct, fourier.as_deref())?;
            let value = gomi_trace_with(&h, &block)?;
            let j = json!({"type": ct.name(), "element": element, "value": value.normalized().to_json(), "display": value.to_string()});
            emit(&out, j, render(&value, &out));
        }
        Command::Homfly { braid, strands, vars, out } => {
            let b = parse_braid(&braid, strands)?;
            let inv = homfly_invariant(&b)?;
            let az = inv.display_az();
            let vt = inv.display_vt();
            let j = json!({
                "braid": b.letters(),
                "strands": strands,
                "writhe": b.writhe(),
                "components": inv.components,
                "az": az.as_ref().ok(),
                "vt": vt,
            });
            let text = match vars {
                Vars::Az => az?,
                Vars::Vt if out.human => humanize(&vt),
                Vars::Vt => vt,
            };
            emit(&out, j, text);
        }
        Command::SolveTrace { ty, y, out } => {
            let ct = cartan(&ty)?;
            let table = match ct.family {
                mtk::coxeter::Family::A if y.is_none() => solve_trace(ct, &-BiLaurent::t())?,
                _ => solve_trace(ct, &y_value(&y)?)?,
            };
            let g = table.group().clone();
            let text = (0..g.len())
                .map(|w| format!("{}: {}", format_word(g.word(w)), render(&table.value(w), &out)))
                .collect::<Vec<_>>()
                .join("\n");
            emit(&out, table.to_json(), text);
        }
        Command::Selftest { level, kl_cache, criteria, mutate_inverse, json } => {
            let mut opts = SelftestOptions {
                level: match level {
                    SelftestLevel::Quick => Level::Quick,
                    SelftestLevel::Full => Level::Full,
                },
                kl_cache,
                ..Default::default()
            };
            if mutate_inverse {
                opts.params = MarkovParams { stab: -BiLaurent::t(), inverse: BiLaurent::v() };
            }
            let reports = if criteria.is_empty() {
                let mut all = Vec::new();
                for id in 1..=mtk::selftest::CRITERIA.len() {
                    let r = run_criterion(id, &opts);
                    if !json {
                        say(&r);
                    }
                    all.push(r);
                }
                all
            } else {
                if let Some(bad) = criteria.iter().find(|&&c| c == 0 || c > mtk::selftest::CRITERIA.len()) {
                    return Err(Failure::Usage(format!("no criterion {bad}")));
                }
                let all: Vec<_> = criteria.iter().map(|&id| run_criterion(id, &opts)).collect();
                if !json {
                    all.iter().for_each(say);
                }
                all
            };
            let passed = reports.iter().filter(|r| r.passed).count();
            if json {
                let rows: Vec<Value> = reports
                    .iter()
                    .map(|r| json!({"id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail, "seconds": r.seconds}))
                    .collect();
                let summary = json!({"passed": passed, "total": reports.len(), "criteria": rows});
                say(serde_json::to_string_pretty(&summary).expect("serializable"));
            } else {
                say(format!("{passed}/{} criteria passed", reports.len()));
            }
            if passed != reports.len() {
                return Ok(EXIT_SELFTEST);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_COMPUTE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::humanize;

    #[test]
    fn half_powers() {
        assert_eq!(humanize("(v^-1 + v^2 t)/(1 - v^2)"), "(q^{-1/2} + q t)/(1 - q)");
        assert_eq!(humanize("v^4 + v^3 t + v t"), "q^2 + q^{3/2} t + q^{1/2} t");
        assert_eq!(humanize("-t"), "-t");
    }
}
