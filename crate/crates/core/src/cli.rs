//! Command-line front end for the `hookbox` binary.
//!
//! Exit codes: 0 success, 1 an identity came out unequal (or some other
//! internal failure), 2 bad input, 3 a resource cap was hit.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::arith::factored::factorize;
use crate::arith::{FactorBag, FactorSet, Locus, QTFraction};
use crate::error::{Error, Result};
use crate::identities::{
    box_grid, elliptic_complete, elliptic_table, sweep, verify, Completion, EllipticCell, IdentityReport,
    IdentityValue, Level, SweepSummary, TableEntry,
};
use crate::partition::Partition;
use crate::symfunc::{macdonald_p, principal_check, specialize_family, PrincipalCheck, SymFunc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNEQUAL: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Largest `max_size` accepted by `sweep`.
pub const SWEEP_MAX_SIZE: usize = 16;
/// Largest `max_n` accepted by `sweep`.
pub const SWEEP_MAX_N: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "hookbox", version, about = "Hook/content product identities and Macdonald polynomials")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Ascii)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ascii,
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overlay {
    None,
    Content,
    Hook,
    ArmLeg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Raw,
    Cancelled,
    Reversed,
    Completed,
}

#[derive(clap::Args, Debug)]
pub struct LambdaArg {
    /// Partition, largest part first, e.g. 5,4,4,3,2.
    #[arg(value_name = "LAMBDA", allow_hyphen_values = false)]
    positional: Option<String>,

    /// Same as the positional argument.
    #[arg(long = "lambda", conflicts_with = "positional")]
    flag: Option<String>,
}

impl LambdaArg {
    fn partition(&self) -> Result<Partition> {
        match self.flag.as_ref().or(self.positional.as_ref()) {
            Some(s) => s.parse(),
            None => Err(Error::Parse("a partition is required".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw a box diagram, optionally labelled with a per-box statistic.
    Diagram {
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long, value_enum, default_value_t = Overlay::None)]
        overlay: Overlay,
    },
    /// Check one identity exactly.
    Verify {
        #[command(flatten)]
        lambda: LambdaArg,
        #[arg(long, default_value = "integer")]
        level: Level,
        /// Number of rows; defaults to the length of the partition.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check an identity for every partition and row count up to the bounds.
    Sweep {
        max_size: usize,
        max_n: usize,
        /// Identity level; all three when omitted.
        level: Option<Level>,
    },
    /// Show the elliptic factor table at one stage of the cancellation.
    Table {
        lambda: String,
        n: usize,
        #[arg(value_enum, default_value_t = Stage::Completed)]
        stage: Stage,
    },
    /// Print the Macdonald polynomial in the monomial basis.
    Macdonald {
        lambda: String,
        /// Also print the principal specialization in n variables.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Restrict the Macdonald polynomial to q=t, t=1, q=1, q=0 or t=0.
    Specialize {
        lambda: String,
        #[arg(long)]
        at: String,
    },
}

/// Runs the command line and returns the process exit code. Results go to
/// `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "hookbox: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Parse(_) => EXIT_BAD_INPUT,
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Pole(_) | Error::Internal(_) => EXIT_UNEQUAL,
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn no_latex(format: Format, what: &str) -> Result<()> {
    if format == Format::Latex {
        return Err(Error::domain(format!("latex output is only available for diagram, not {what}")));
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(String, i32)> {
    let format = cli.format;
    match &cli.command {
        Command::Diagram { lambda, overlay } => {
            let lambda = lambda.partition()?;
            Ok((render_diagram(&lambda, *overlay, format)?, EXIT_OK))
        }
        Command::Verify { lambda, level, n } => {
            no_latex(format, "verify")?;
            let lambda = lambda.partition()?;
            let n = n.unwrap_or(lambda.length());
            let report = verify(*level, &lambda, n)?;
            let code = if report.equal { EXIT_OK } else { EXIT_UNEQUAL };
            let text = match format {
                Format::Json => to_json(&report)?,
                _ => render_report(&report),
            };
            Ok((text, code))
        }
        Command::Sweep { max_size, max_n, level } => {
            no_latex(format, "sweep")?;
            if *max_size > SWEEP_MAX_SIZE || *max_n > SWEEP_MAX_N {
                return Err(Error::Resource(format!(
                    "sweep bounds are capped at size {SWEEP_MAX_SIZE} and n {SWEEP_MAX_N}"
                )));
            }
            let levels: Vec<Level> = match level {
                Some(l) => vec![*l],
                None => Level::ALL.to_vec(),
            };
            let summaries = levels
                .iter()
                .map(|&l| sweep(l, *max_size, *max_n))
                .collect::<Result<Vec<_>>>()?;
            let code = if summaries.iter().all(SweepSummary::passed) {
                EXIT_OK
            } else {
                EXIT_UNEQUAL
            };
            let text = match format {
                Format::Json => to_json(&summaries)?,
                _ => summaries.iter().map(render_sweep).collect(),
            };
            Ok((text, code))
        }
        Command::Table { lambda, n, stage } => {
            no_latex(format, "table")?;
            let lambda: Partition = lambda.parse()?;
            let view = table_view(&lambda, *n, *stage)?;
            let code = match &view {
                TableView::Completed { balanced, .. } if !balanced => EXIT_UNEQUAL,
                _ => EXIT_OK,
            };
            let text = match format {
                Format::Json => to_json(&view)?,
                _ => render_table(&lambda, *n, &view),
            };
            Ok((text, code))
        }
        Command::Macdonald { lambda, n } => {
            no_latex(format, "macdonald")?;
            let lambda: Partition = lambda.parse()?;
            let report = MacdonaldReport {
                p: macdonald_p(&lambda)?,
                principal: n.map(|n| principal_check(&lambda, n)).transpose()?,
                lambda,
            };
            let text = match format {
                Format::Json => to_json(&report)?,
                _ => render_macdonald(&report),
            };
            Ok((text, EXIT_OK))
        }
        Command::Specialize { lambda, at } => {
            no_latex(format, "specialize")?;
            let lambda: Partition = lambda.parse()?;
            let locus = Locus::parse(at)?;
            let f = specialize_family(&lambda, locus)?;
            let text = match format {
                Format::Json => to_json(&f)?,
                _ => format!(
                    "P{lambda} at {}:\n{}",
                    locus.label(),
                    render_coeffs(&f)
                ),
            };
            Ok((text, EXIT_OK))
        }
    }
}

/// JSON form of `diagram`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramView {
    pub lambda: Partition,
    pub overlay: Overlay,
    /// One entry per box: an integer, `[arm, leg]`, or null without overlay.
    pub rows: Vec<Vec<serde_json::Value>>,
}

fn diagram_cells(lambda: &Partition, overlay: Overlay) -> Vec<Vec<(String, serde_json::Value)>> {
    box_grid(lambda, |b| {
        let s = lambda.box_stats(b).expect("box of own diagram");
        match overlay {
            Overlay::None => ("#".to_string(), serde_json::Value::Null),
            Overlay::Content => (s.content.to_string(), s.content.into()),
            Overlay::Hook => (s.hook.to_string(), s.hook.into()),
            Overlay::ArmLeg => (format!("{},{}", s.arm, s.leg), serde_json::json!([s.arm, s.leg])),
        }
    })
}

pub fn render_diagram(lambda: &Partition, overlay: Overlay, format: Format) -> Result<String> {
    let cells = diagram_cells(lambda, overlay);
    match format {
        Format::Json => to_json(&DiagramView {
            lambda: lambda.clone(),
            overlay,
            rows: cells
                .into_iter()
                .map(|r| r.into_iter().map(|(_, v)| v).collect())
                .collect(),
        }),
        Format::Ascii => {
            if lambda.is_empty() {
                return Ok("(empty diagram)\n".into());
            }
            let width = cells.iter().flatten().map(|(s, _)| s.len()).max().unwrap_or(1);
            let mut out = String::new();
            for row in &cells {
                let line: Vec<String> = row.iter().map(|(s, _)| format!("{s:>width$}")).collect();
                out.push_str(line.join(" ").trim_end());
                out.push('\n');
            }
            Ok(out)
        }
        Format::Latex => {
            if lambda.is_empty() {
                return Ok("% empty diagram\n".into());
            }
            let cols = lambda.part(1);
            let mut out = format!("\\begin{{tabular}}{{{}|}}\n\\hline\n", "|c".repeat(cols));
            for (i, row) in cells.iter().enumerate() {
                let entries: Vec<String> = row
                    .iter()
                    .map(|(s, _)| match overlay {
                        Overlay::None => String::new(),
                        _ => format!("${s}$"),
                    })
                    .collect();
                out.push_str(&entries.join(" & "));
                out.push_str(&format!(" \\\\ \\cline{{1-{}}}\n", lambda.part(i + 1)));
            }
            out.push_str("\\end{tabular}\n");
            Ok(out)
        }
    }
}

fn render_bag(bag: &FactorBag) -> String {
    let side = |s: &FactorSet| {
        if s.is_empty() {
            "1".to_string()
        } else {
            s.iter().map(|f| format!("({f})")).collect()
        }
    };
    format!("{} / {}", side(&bag.num), side(&bag.den))
}

fn render_value(v: &IdentityValue) -> String {
    match v {
        IdentityValue::Rational(r) => r.clone(),
        IdentityValue::Bag(b) => render_bag(b),
    }
}

pub fn render_report(r: &IdentityReport) -> String {
    let mut out = String::new();
    let rel = if r.equal { "=" } else { "!=" };
    match (&r.lhs, &r.rhs) {
        (IdentityValue::Rational(l), IdentityValue::Rational(rr)) => {
            out.push_str(&format!("{l} {rel} {rr}\n"));
        }
        (l, rr) => {
            out.push_str(&format!("lhs: {}\n", render_value(l)));
            out.push_str(&format!("rhs: {}\n", render_value(rr)));
            out.push_str(&format!("lhs {rel} rhs\n"));
        }
    }
    out.push_str(&format!(
        "{} identity for {}, n = {}: {}\n",
        r.level,
        r.lambda,
        r.n,
        if r.equal { "equal" } else { "NOT equal" }
    ));
    if let Some(fast) = r.fast_path {
        out.push_str(&format!(
            "factor multisets {} after cancellation\n",
            if fast { "agree" } else { "differ" }
        ));
    }
    out
}

pub fn render_sweep(s: &SweepSummary) -> String {
    let mut out = format!(
        "{}: {} cases with |λ| ≤ {}, n ≤ {}: {} failures",
        s.level,
        s.checked,
        s.max_size,
        s.max_n,
        s.failures.len()
    );
    if !s.fast_path_misses.is_empty() {
        out.push_str(&format!(", {} factor-multiset misses", s.fast_path_misses.len()));
    }
    if !s.non_integral.is_empty() {
        out.push_str(&format!(", {} non-integral", s.non_integral.len()));
    }
    out.push('\n');
    for c in &s.failures {
        out.push_str(&format!("  FAIL {} n={}\n", c.lambda, c.n));
    }
    for c in &s.fast_path_misses {
        out.push_str(&format!("  multiset miss {} n={}\n", c.lambda, c.n));
    }
    for c in &s.non_integral {
        out.push_str(&format!("  non-integral {} n={}\n", c.lambda, c.n));
    }
    out
}

/// JSON form of `table`, one variant per stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "lowercase")]
pub enum TableView {
    Raw { cells: Vec<EllipticCell> },
    Cancelled { cells: Vec<EllipticCell> },
    Reversed { entries: Vec<TableEntry> },
    Completed {
        entries: Vec<TableEntry>,
        added_num: FactorSet,
        added_den: FactorSet,
        balanced: bool,
    },
}

pub fn table_view(lambda: &Partition, n: usize, stage: Stage) -> Result<TableView> {
    let table = elliptic_table(lambda, n)?;
    Ok(match stage {
        Stage::Raw => TableView::Raw { cells: table.cells },
        Stage::Cancelled => TableView::Cancelled { cells: table.cells },
        Stage::Reversed => TableView::Reversed {
            entries: table.reversed(),
        },
        Stage::Completed => {
            let Completion {
                entries,
                added_num,
                added_den,
            } = elliptic_complete(&table);
            TableView::Completed {
                balanced: added_num == added_den,
                entries,
                added_num,
                added_den,
            }
        }
    })
}

fn entry_text(e: &TableEntry) -> String {
    let side = |f: Option<crate::arith::QTFactor>, added: bool| match f {
        Some(f) if added => format!("({f})*"),
        Some(f) => format!("({f})"),
        None => "1".to_string(),
    };
    format!("{}/{}", side(e.num, e.num_added), side(e.den, e.den_added))
}

fn grid_text(lambda: &Partition, n: usize, cells: &[(usize, usize, String)]) -> String {
    let width = cells.iter().map(|(_, _, s)| s.chars().count()).max().unwrap_or(1);
    let mut out = String::new();
    for i in 1..=n.max(lambda.length()) {
        let li = lambda.part(i);
        if li == 0 {
            continue;
        }
        let line: Vec<String> = (1..=li)
            .map(|j| {
                let s = cells
                    .iter()
                    .find(|(r, c, _)| *r == i && *c == j)
                    .map(|(_, _, s)| s.as_str())
                    .unwrap_or(".");
                format!("{s:<width$}")
            })
            .collect();
        out.push_str(&format!("row {i}: {}\n", line.join("  ").trim_end()));
    }
    out
}

pub fn render_table(lambda: &Partition, n: usize, view: &TableView) -> String {
    let mut out = String::new();
    match view {
        TableView::Raw { cells } => {
            out.push_str(&format!("raw factors for {lambda}, n = {n}\n"));
            for c in cells {
                let parts: Vec<String> = c
                    .raw_factors
                    .iter()
                    .map(|f| format!("[{}] ({})/({})", c.label(f.j), f.num, f.den))
                    .collect();
                out.push_str(&format!("row {} col {}: {}\n", c.i, c.column, parts.join(" ")));
            }
        }
        TableView::Cancelled { cells } => {
            out.push_str(&format!("cancelled table for {lambda}, n = {n}\n"));
            let grid: Vec<(usize, usize, String)> = cells
                .iter()
                .map(|c| {
                    let b = &c.cancelled;
                    let side = |s: &FactorSet| s.iter().map(|f| format!("({f})")).collect::<String>();
                    (c.i, c.column, format!("{}/{}", side(&b.num), side(&b.den)))
                })
                .collect();
            out.push_str(&grid_text(lambda, n, &grid));
        }
        TableView::Reversed { entries } => {
            out.push_str(&format!("reversed table for {lambda}, n = {n}\n"));
            let grid: Vec<_> = entries.iter().map(|e| (e.row, e.col, entry_text(e))).collect();
            out.push_str(&grid_text(lambda, n, &grid));
        }
        TableView::Completed {
            entries,
            added_num,
            added_den,
            balanced,
        } => {
            out.push_str(&format!("completed table for {lambda}, n = {n} (* marks added factors)\n"));
            let grid: Vec<_> = entries.iter().map(|e| (e.row, e.col, entry_text(e))).collect();
            out.push_str(&grid_text(lambda, n, &grid));
            let list = |s: &FactorSet| {
                if s.is_empty() {
                    "none".to_string()
                } else {
                    s.iter().map(|f| format!("({f})")).collect::<Vec<_>>().join(" ")
                }
            };
            out.push_str(&format!("added numerators:   {}\n", list(added_num)));
            out.push_str(&format!("added denominators: {}\n", list(added_den)));
            out.push_str(if *balanced {
                "added factors balance\n"
            } else {
                "added factors DO NOT balance\n"
            });
        }
    }
    out
}

/// JSON form of `macdonald`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacdonaldReport {
    pub lambda: Partition,
    pub p: SymFunc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<PrincipalCheck>,
}

/// A fraction with both sides split into factors where possible, e.g.
/// `(1 + q)(1 - t) / (1 - qt)`.
pub fn pretty_fraction(f: &QTFraction) -> String {
    let f = f.normalize_content();
    if f.is_zero() {
        return "0".into();
    }
    let side = |p: &crate::arith::IntPoly| -> (num_bigint::BigInt, String) {
        let (unit, factors) = factorize(p).expect("nonzero");
        let mut grouped: Vec<(String, usize)> = Vec::new();
        for fac in &factors {
            let s = if fac.num_terms() == 1 {
                fac.to_string()
            } else {
                format!("({fac})")
            };
            match grouped.iter_mut().find(|(g, _)| *g == s) {
                Some((_, k)) => *k += 1,
                None => grouped.push((s, 1)),
            }
        }
        let body = grouped
            .into_iter()
            .map(|(s, k)| if k == 1 { s } else { format!("{s}^{k}") })
            .collect::<Vec<_>>()
            .join("");
        (unit, body)
    };
    let (nu, nb) = side(f.num());
    let (du, db) = side(f.den());
    let q = num_rational::BigRational::new(nu, du);
    let (qn, qd) = (q.numer().clone(), q.denom().clone());
    let join = |c: &num_bigint::BigInt, body: &str| -> String {
        use num_traits::One;
        match (c.is_one(), body.is_empty()) {
            (_, true) => c.to_string(),
            (true, false) => body.to_string(),
            (false, false) if *c == -num_bigint::BigInt::one() => format!("-{body}"),
            (false, false) => format!("{c}{body}"),
        }
    };
    let top = join(&qn, &nb);
    let bottom = join(&qd, &db);
    if bottom == "1" {
        top
    } else {
        format!("{top} / {bottom}")
    }
}

fn render_coeffs(f: &SymFunc) -> String {
    if f.support().next().is_none() {
        return "  0\n".into();
    }
    f.coeffs()
        .map(|(mu, c)| format!("  m{mu}: {}\n", pretty_fraction(c)))
        .collect()
}

pub fn render_macdonald(r: &MacdonaldReport) -> String {
    let mut out = format!("P{} in the monomial basis:\n{}", r.lambda, render_coeffs(&r.p));
    if let Some(c) = &r.principal {
        out.push_str(&format!("principal specialization, n = {}:\n", c.n));
        out.push_str(&format!("  P(1,t,...,t^{}) = {}\n", c.n - 1, pretty_fraction(&c.principal)));
        out.push_str(&format!("  elliptic product = {}\n", pretty_fraction(&c.elliptic_lhs)));
        out.push_str(&format!(
            "  equal as written: {}\n",
            if c.literal_equal { "yes" } else { "no" }
        ));
        out.push_str(&format!(
            "  equal after t^{} scaling: {}\n",
            c.weighted_size,
            if c.normalized_equal { "yes" } else { "no" }
        ));
    }
    out
}
