//! Command-line surface: argument types, output records and renderers.
//!
//! Every command renders into a `String` so the binary only has to print it;
//! diagnostics (precision changes) go to a separate writer.

use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::approxarray::{build_array, window, ApproxEntry};
use crate::categorize::{classify_window, CategorizedEntry, Nu};
use crate::contfrac::{expand, CFExpansion};
use crate::edo::{default_window, edo_report, rank_edos, EdoReport};
use crate::error::{Error, Result};
use crate::numerics::{
    make_constant, required_precision, Descriptor, NamedConstant, RealConstant, DEFAULT_PRECISION,
};

/// Decimal places used for errors and fraction values in machine formats.
pub const DELTA_PLACES: u32 = 24;
const TABLE_PLACES: u32 = 12;
const CENTS_PLACES: u32 = 12;

#[derive(Debug, Parser)]
#[command(name = "bestround", version, about = "Best-round rational approximations and EDO fifth ranking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantArgs {
    /// Named constant: beta (log2(3/2)), pi, e or sqrt2. Defaults to beta.
    #[arg(long = "const", value_name = "NAME", conflicts_with_all = ["value", "ratio", "interval"])]
    pub named: Option<String>,
    /// Decimal value; '.' or ',' as separator.
    #[arg(long, conflicts_with_all = ["ratio", "interval"])]
    pub value: Option<String>,
    /// Exact rational p/q.
    #[arg(long, conflicts_with = "interval")]
    pub ratio: Option<String>,
    /// Musical interval given as a frequency ratio, `ratio:p/q` or `log2:p/q`;
    /// both approximate log2(p/q).
    #[arg(long)]
    pub interval: Option<String>,
    /// Working precision in decimal digits.
    #[arg(long, env = "BESTROUND_PRECISION", default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
}

impl ConstantArgs {
    pub fn descriptor(&self) -> Result<Descriptor> {
        if let Some(name) = &self.named {
            return Ok(Descriptor::Named(name.parse()?));
        }
        if let Some(value) = &self.value {
            return Ok(Descriptor::Decimal(value.clone()));
        }
        if let Some(ratio) = &self.ratio {
            return Descriptor::parse_ratio(ratio);
        }
        if let Some(interval) = &self.interval {
            let spec = interval
                .strip_prefix("ratio:")
                .or_else(|| interval.strip_prefix("log2:"))
                .unwrap_or(interval);
            return Descriptor::parse_log2_ratio(spec);
        }
        Ok(Descriptor::Named(NamedConstant::Beta))
    }

    pub fn resolve(&self) -> Result<RealConstant> {
        make_constant(self.descriptor()?, self.precision)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    /// One JSON object per line.
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continued-fraction expansion.
    Expand {
        #[command(flatten)]
        constant: ConstantArgs,
        #[arg(long, default_value_t = 12)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Best-round array for denominators 1..=max-denom.
    Array {
        #[command(flatten)]
        constant: ConstantArgs,
        #[arg(long = "max-denom")]
        max_denom: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Total and non-continued categories for the window start..=end.
    Categorize {
        #[command(flatten)]
        constant: ConstantArgs,
        #[arg(long)]
        start: u64,
        #[arg(long)]
        end: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// List rows in category order instead of by denominator.
        #[arg(long)]
        by_tau: bool,
    },
    /// Rank equal divisions of the octave by how well they approximate the interval.
    Edo {
        #[command(flatten)]
        constant: ConstantArgs,
        /// Comma-separated division counts to report; all of the window when absent.
        #[arg(long, value_delimiter = ',')]
        list: Vec<u64>,
        /// Window `start:end`; defaults to the convergent pair around 12.
        #[arg(long)]
        window: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Scatter data (denominator, value, error, class) for plotting.
    PlotData {
        #[command(flatten)]
        constant: ConstantArgs,
        #[arg(long = "max-denom")]
        max_denom: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

/// Flat projection of an array entry, optionally with its categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub denominator: u64,
    pub numerator: u64,
    pub reduced_num: u64,
    pub reduced_den: u64,
    pub multiple_index: Option<u64>,
    pub class: String,
    pub tau: Option<u32>,
    pub nu: Option<String>,
    pub label: Option<String>,
    pub delta: String,
}

impl From<&ApproxEntry> for OutputRecord {
    fn from(e: &ApproxEntry) -> Self {
        let base = e.base();
        OutputRecord {
            denominator: e.m,
            numerator: e.k,
            reduced_num: base.num(),
            reduced_den: base.den(),
            multiple_index: e.multiple_index(),
            class: e.klass.mark().to_string(),
            tau: None,
            nu: None,
            label: None,
            delta: e.delta.to_decimal(DELTA_PLACES),
        }
    }
}

impl From<&CategorizedEntry> for OutputRecord {
    fn from(c: &CategorizedEntry) -> Self {
        OutputRecord {
            tau: Some(c.tau),
            nu: Some(c.nu.to_string()),
            label: Some(c.label.clone()),
            ..OutputRecord::from(&c.entry)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdoRecord {
    pub divisions: u64,
    pub steps: u64,
    pub cents_error: String,
    pub class: String,
    pub tau: u32,
    pub multiple_index: Option<u64>,
    pub nu: String,
    pub label: String,
    pub delta: String,
}

impl From<&EdoReport> for EdoRecord {
    fn from(r: &EdoReport) -> Self {
        EdoRecord {
            divisions: r.divisions,
            steps: r.steps,
            cents_error: r.delta.to_decimal_scaled(1200, CENTS_PLACES),
            class: r.klass.mark().to_string(),
            tau: r.tau,
            multiple_index: r.multiple_index,
            nu: r.nu.to_string(),
            label: r.label.clone(),
            delta: r.delta.to_decimal(DELTA_PLACES),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlotRecord {
    pub denominator: u64,
    pub numerator: u64,
    pub value: String,
    pub delta: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub index: usize,
    pub term: u64,
}

#[derive(Serialize)]
struct ExpansionJson<'a> {
    terms: &'a [u64],
    exact: bool,
}

/// Writes records as CSV with a header row and LF line endings.
pub fn to_csv<T: Serialize>(records: &[T]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in records {
        writer.serialize(r).map_err(|e| Error::Usage(format!("csv encoding failed: {e}")))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Usage(format!("csv encoding failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Usage(e.to_string()))
}

/// Parses CSV produced by [`to_csv`].
pub fn from_csv<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::input(format!("cannot parse csv: {e}")))
}

fn to_json_lines<T: Serialize>(records: &[T]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::Usage(e.to_string()))?;
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

fn render<T: Serialize>(records: &[T], format: Format, table: impl FnOnce() -> String) -> Result<String> {
    match format {
        Format::Table => Ok(table()),
        Format::Csv => to_csv(records),
        Format::Json => to_json_lines(records),
    }
}

/// Raises the precision for denominators up to `m_max`, noting the change.
fn prepare(constant: &ConstantArgs, m_max: u64, diag: &mut dyn Write) -> Result<RealConstant> {
    let alpha = constant.resolve()?;
    if !alpha.supports_denominator(m_max) {
        let needed = required_precision(m_max);
        let _ = writeln!(
            diag,
            "note: raising precision from {} to {needed} digits for denominators up to {m_max}",
            alpha.precision()
        );
    }
    alpha.for_denominator_bound(m_max)
}

pub fn run(cli: &Cli, diag: &mut dyn Write) -> Result<String> {
    match &cli.command {
        Command::Expand { constant, terms, format } => {
            let cf = expand(&constant.resolve()?, *terms)?;
            cmd_expand(&cf, *format)
        }
        Command::Array { constant, max_denom, format } => {
            let alpha = prepare(constant, *max_denom, diag)?;
            cmd_array(&alpha, *max_denom, *format)
        }
        Command::Categorize { constant, start, end, format, by_tau } => {
            let alpha = prepare(constant, *end, diag)?;
            cmd_categorize(&alpha, *start, *end, *format, *by_tau)
        }
        Command::Edo { constant, list, window, format } => {
            let interval = constant.resolve()?;
            let window = match window {
                Some(w) => parse_window(w)?,
                None => default_window(&interval)?,
            };
            if !interval.supports_denominator(window.1) {
                let _ = writeln!(
                    diag,
                    "note: raising precision from {} to {} digits for denominators up to {}",
                    interval.precision(),
                    required_precision(window.1),
                    window.1
                );
            }
            cmd_edo(&interval, list, window, *format)
        }
        Command::PlotData { constant, max_denom, format } => {
            let alpha = prepare(constant, *max_denom, diag)?;
            cmd_plotdata(&alpha, *max_denom, *format)
        }
    }
}

/// Parses `start:end`.
pub fn parse_window(text: &str) -> Result<(u64, u64)> {
    let bad = || Error::input(format!("window must look like start:end, got '{text}'"));
    let (s, e) = text.split_once(':').ok_or_else(bad)?;
    let s = s.trim().parse().map_err(|_| bad())?;
    let e = e.trim().parse().map_err(|_| bad())?;
    Ok((s, e))
}

pub fn cmd_expand(cf: &CFExpansion, format: Format) -> Result<String> {
    match format {
        Format::Table => Ok(if cf.is_exact() { format!("{cf} (exact)\n") } else { format!("{cf}\n") }),
        Format::Csv => {
            let rows: Vec<_> =
                cf.terms().iter().enumerate().map(|(index, &term)| TermRecord { index, term }).collect();
            to_csv(&rows)
        }
        Format::Json => {
            let json = serde_json::to_string(&ExpansionJson { terms: cf.terms(), exact: cf.is_exact() })
                .map_err(|e| Error::Usage(e.to_string()))?;
            Ok(json + "\n")
        }
    }
}

pub fn cmd_array(alpha: &RealConstant, max_denom: u64, format: Format) -> Result<String> {
    let array = build_array(alpha, max_denom)?;
    let records: Vec<OutputRecord> = array.iter().map(OutputRecord::from).collect();
    render(&records, format, || {
        let mut out = String::new();
        let _ = writeln!(out, "{:>6}  {:<12} {:<5} {:<12} delta", "m", "fraction", "class", "multiple-of");
        for e in &array {
            let base = e.multiple_of.map(|mo| mo.base.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{:>6}  {:<12} {:<5} {:<12} {}",
                e.m,
                e.fraction().to_string(),
                e.klass.mark(),
                base,
                e.delta.to_decimal(TABLE_PLACES)
            );
        }
        out
    })
}

fn tau_text(c: &CategorizedEntry) -> String {
    match c.multiple_index {
        Some(j) => format!("{}|{j}", c.tau),
        None => c.tau.to_string(),
    }
}

fn nu_text(c: &CategorizedEntry) -> String {
    match (c.nu, c.multiple_index) {
        (Nu::Rank(n), Some(j)) => format!("{n}|{j}"),
        (nu, _) => nu.to_string(),
    }
}

pub fn cmd_categorize(
    alpha: &RealConstant,
    start: u64,
    end: u64,
    format: Format,
    by_tau: bool,
) -> Result<String> {
    let array = build_array(alpha, end)?;
    let classification = classify_window(&window(&array, start, end)?)?;
    let rows = if by_tau { classification.merged.clone() } else { classification.by_denominator() };
    let records: Vec<OutputRecord> = rows.iter().map(OutputRecord::from).collect();
    render(&records, format, || {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<12} {:<10} {:<12} {:<6} {:<6} Label",
            "Denominator", "Fraction", "Multiple-of", "Tau", "Nu"
        );
        for c in &rows {
            let base = c.entry.multiple_of.map(|mo| mo.base.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{:<12} {:<10} {:<12} {:<6} {:<6} {}",
                c.entry.m,
                c.entry.fraction().to_string(),
                base,
                tau_text(c),
                nu_text(c),
                c.label
            );
        }
        out
    })
}

pub fn cmd_edo(interval: &RealConstant, list: &[u64], window: (u64, u64), format: Format) -> Result<String> {
    let reports = if list.is_empty() {
        rank_edos(window, interval)?
    } else {
        list.iter().map(|&n| edo_report(n, interval, window)).collect::<Result<Vec<_>>>()?
    };
    let records: Vec<EdoRecord> = reports.iter().map(EdoRecord::from).collect();
    render(&records, format, || {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<6} {:<6} {:<16} {:<5} {:<6} {:<6} label",
            "EDO", "steps", "cents", "class", "tau", "nu"
        );
        for r in &records {
            let tau = match r.multiple_index {
                Some(j) => format!("{}|{j}", r.tau),
                None => r.tau.to_string(),
            };
            let _ = writeln!(
                out,
                "{:<6} {:<6} {:<16} {:<5} {:<6} {:<6} {}",
                r.divisions,
                r.steps,
                &r.cents_error[..r.cents_error.len().min(14)],
                r.class,
                tau,
                r.nu,
                r.label
            );
        }
        out
    })
}

pub fn cmd_plotdata(alpha: &RealConstant, max_denom: u64, format: Format) -> Result<String> {
    let array = build_array(alpha, max_denom)?;
    let records: Vec<PlotRecord> = array
        .iter()
        .map(|e| PlotRecord {
            denominator: e.m,
            numerator: e.k,
            value: e.fraction().to_decimal(DELTA_PLACES),
            delta: e.delta.to_decimal(DELTA_PLACES),
            class: e.klass.mark().to_string(),
        })
        .collect();
    render(&records, format, || {
        let mut out = String::new();
        for r in &records {
            let _ = writeln!(out, "{} {} {} {}", r.denominator, r.value, r.delta, r.class);
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(std::iter::once("bestround").chain(args.iter().copied()))
            .map_err(|e| Error::input(e.to_string()))?;
        run(&cli, &mut std::io::sink())
    }

    #[test]
    fn expand_commands() {
        assert_eq!(run_args(&["expand", "--const", "pi", "--terms", "12"]).unwrap(), "[3; 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1]\n");
        assert_eq!(run_args(&["expand", "--ratio", "3/2", "--terms", "10"]).unwrap(), "[1; 2] (exact)\n");
        assert_eq!(run_args(&["expand", "--const", "beta", "--terms", "9"]).unwrap(), "[0; 1, 1, 2, 2, 3, 1, 5, 2]\n");
        assert_eq!(
            run_args(&["expand", "--value", "0,75", "--format", "json"]).unwrap(),
            "{\"terms\":[0,1,3],\"exact\":true}\n"
        );
    }

    #[test]
    fn conflicting_constants_are_rejected() {
        assert!(run_args(&["expand", "--const", "pi", "--ratio", "3/2"]).is_err());
        assert!(matches!(run_args(&["expand", "--const", "tau"]), Err(Error::Input(_))));
        assert!(matches!(run_args(&["expand", "--ratio", "3/0"]), Err(Error::Input(_))));
    }

    #[test]
    fn array_single_row() {
        let csv = run_args(&["array", "--const", "beta", "--max-denom", "1", "--format", "csv"]).unwrap();
        let rows: Vec<OutputRecord> = from_csv(&csv).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].numerator, rows[0].denominator, rows[0].class.as_str()), (1, 1, "c"));
    }

    #[test]
    fn csv_round_trip() {
        let csv = run_args(&["categorize", "--start", "12", "--end", "41", "--format", "csv"]).unwrap();
        let rows: Vec<OutputRecord> = from_csv(&csv).unwrap();
        assert_eq!(rows.len(), 30);
        assert_eq!(to_csv(&rows).unwrap(), csv);
        assert!(csv.lines().next().unwrap().starts_with("denominator,numerator,reduced_num"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn json_lines_round_trip() {
        let json = run_args(&["array", "--const", "pi", "--max-denom", "9", "--format", "json"]).unwrap();
        let rows: Vec<OutputRecord> = json.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[6].numerator, 22);
    }

    #[test]
    fn edo_list() {
        let csv = run_args(&["edo", "--list", "12,17,31", "--window", "12:41", "--format", "csv"]).unwrap();
        let rows: Vec<EdoRecord> = from_csv(&csv).unwrap();
        let nus: Vec<_> = rows.iter().map(|r| r.nu.as_str()).collect();
        assert_eq!(nus, ["c", "1", "2"]);
        assert!(rows[0].cents_error.starts_with("1.955000865"));
        let a = run_args(&["edo", "--list", "12", "--interval", "ratio:3/2"]).unwrap();
        let b = run_args(&["edo", "--list", "12", "--const", "beta"]).unwrap();
        assert_eq!(a, b);
        assert!(matches!(run_args(&["edo", "--list", "60", "--window", "12:41"]), Err(Error::Input(_))));
        assert!(matches!(run_args(&["edo", "--window", "12-41"]), Err(Error::Input(_))));
    }

    #[test]
    fn plot_data_points() {
        let csv = run_args(&["plot-data", "--const", "pi", "--max-denom", "1"]).unwrap();
        let rows: Vec<PlotRecord> = from_csv(&csv).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].numerator, rows[0].class.as_str()), (3, "c"));
        assert!(rows[0].value.starts_with("3.000"));
    }

    #[test]
    fn precision_raise_is_announced() {
        let cli = Cli::try_parse_from(["bestround", "array", "--max-denom", "100000000", "--precision", "30", "--format", "csv"]);
        // Only parse here; building 10^8 entries is not a unit test.
        let cli = cli.unwrap();
        let Command::Array { constant, .. } = &cli.command else { panic!() };
        let mut diag = Vec::new();
        let alpha = prepare(constant, 100_000_000, &mut diag).unwrap();
        assert_eq!(alpha.precision(), 36);
        assert!(String::from_utf8(diag).unwrap().contains("raising precision from 30 to 36"));
    }
}
