//! Input and output documents: the problem-file schema, the result
//! document with its factorization records, and the table/CSV/JSON
//! renderings. All polynomial strings use the engine's canonical printing,
//! so identical invocations produce byte-identical documents.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use heunfac_core::{
    Factorization, RationalFunction, SplittingOutcome, SymbolTable, TrivialSplitting, XPoly,
};

/// Problem description accepted by the `verify` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub k: usize,
    pub singularities: Vec<String>,
    pub exponents: ExponentsSpec,
    #[serde(default)]
    pub include_trivial: bool,
}

/// Exponent block of a problem file: the keyword `"lame"` (every finite
/// exponent 1/2) or one expression string per singular point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentsSpec {
    Keyword(String),
    List(Vec<String>),
}

/// Coefficient polynomials of the operator a record belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorCoeffs {
    pub q_top: String,
    pub q_mid: String,
    pub q_low: String,
}

/// One splitting, with every symbolic entry as a canonical string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationRecord {
    pub mask: String,
    #[serde(rename = "L")]
    pub l: String,
    #[serde(rename = "M")]
    pub m: String,
    #[serde(rename = "Lbar")]
    pub lbar: String,
    #[serde(rename = "Mbar")]
    pub mbar: String,
    pub alpha_beta: String,
    pub rho: Vec<String>,
    pub q: Option<String>,
    pub nu_infinity: String,
    pub nu_other: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorCoeffs>,
}

/// Full output of a `factorize` or `adjoint` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultDocument {
    pub k: usize,
    pub singularities: Vec<String>,
    pub exponents: Vec<String>,
    pub factorizations: Vec<FactorizationRecord>,
    pub engine_version: String,
}

/// Product-of-linear-factors rendering: `x*(x - 1)*(x - a)`; an empty root
/// list is the constant factor `1`.
pub fn factored(roots: &[RationalFunction]) -> String {
    if roots.is_empty() {
        return "1".to_string();
    }
    roots
        .iter()
        .map(|r| {
            if r.is_zero() {
                "x".to_string()
            } else {
                format!("({})", XPoly::linear_root(r))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn operator_coeffs(op: &heunfac_core::FuchsOperator) -> Option<OperatorCoeffs> {
    let q_low = op.q_low().ok()?;
    Some(OperatorCoeffs {
        q_top: op.q_top().to_string(),
        q_mid: op.q_mid().to_string(),
        q_low: q_low.to_string(),
    })
}

pub fn record_from_factorization(f: &Factorization, with_operator: bool) -> FactorizationRecord {
    FactorizationRecord {
        mask: f.mask.to_string(),
        l: factored(f.left.roots()),
        m: f.left.m_poly().to_string(),
        lbar: factored(f.right.roots()),
        mbar: f.right.m_poly().to_string(),
        alpha_beta: f.accessory.alpha_beta.to_string(),
        rho: f.accessory.rho.iter().map(|r| r.to_string()).collect(),
        q: f.accessory.q_value().map(|q| q.to_string()),
        nu_infinity: f.index_pair.0.to_string(),
        nu_other: f.index_pair.1.to_string(),
        status: "ok".to_string(),
        operator: if with_operator {
            operator_coeffs(&f.operator)
        } else {
            None
        },
    }
}

pub fn record_from_trivial(t: &TrivialSplitting, with_operator: bool) -> FactorizationRecord {
    let all = t.operator.params().singularities();
    let (l, lbar) = if t.mask.left_count() == t.mask.len() {
        (factored(all), "1".to_string())
    } else {
        ("1".to_string(), factored(all))
    };
    FactorizationRecord {
        mask: t.mask.to_string(),
        l,
        m: t.m_poly.to_string(),
        lbar,
        mbar: t.mbar_poly.to_string(),
        alpha_beta: t.accessory.alpha_beta.to_string(),
        rho: t.accessory.rho.iter().map(|r| r.to_string()).collect(),
        q: t.accessory.q_value().map(|q| q.to_string()),
        nu_infinity: t.index_pair.0.to_string(),
        nu_other: t.index_pair.1.to_string(),
        status: "trivial-integrable".to_string(),
        operator: if with_operator {
            operator_coeffs(&t.operator)
        } else {
            None
        },
    }
}

fn empty_record(mask: String, status: &str, reason: Option<&str>) -> FactorizationRecord {
    let status = match reason {
        Some(r) => format!("{status}: {r}"),
        None => status.to_string(),
    };
    FactorizationRecord {
        mask,
        l: String::new(),
        m: String::new(),
        lbar: String::new(),
        mbar: String::new(),
        alpha_beta: String::new(),
        rho: Vec::new(),
        q: None,
        nu_infinity: String::new(),
        nu_other: String::new(),
        status,
        operator: None,
    }
}

pub fn record_from_outcome(o: &SplittingOutcome, with_operator: bool) -> FactorizationRecord {
    match o {
        SplittingOutcome::Proper(f) => record_from_factorization(f, with_operator),
        SplittingOutcome::Trivial(t) => record_from_trivial(t, with_operator),
        SplittingOutcome::Singular { mask } => {
            empty_record(mask.to_string(), "singular", None)
        }
        SplittingOutcome::NotFactorizable { mask, reason } => {
            empty_record(mask.to_string(), "not-factorizable", Some(reason))
        }
    }
}

pub fn build_document(
    k: usize,
    singularities: &[RationalFunction],
    exponents: &[RationalFunction],
    records: Vec<FactorizationRecord>,
) -> ResultDocument {
    ResultDocument {
        k,
        singularities: singularities.iter().map(|s| s.to_string()).collect(),
        exponents: exponents.iter().map(|e| e.to_string()).collect(),
        factorizations: records,
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

/// Column headers shared by the table and CSV renderings. `rho` expands to
/// one column per accessory value; the operator block appends three columns.
fn columns(k: usize, with_operator: bool) -> Vec<String> {
    let mut cols: Vec<String> = ["mask", "L", "M", "Lbar", "Mbar", "alpha_beta"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for i in 1..=k {
        cols.push(format!("rho{i}"));
    }
    if k == 1 {
        cols.push("q".to_string());
    }
    cols.push("nu_infinity".to_string());
    cols.push("nu_other".to_string());
    cols.push("status".to_string());
    if with_operator {
        cols.push("q_top".to_string());
        cols.push("q_mid".to_string());
        cols.push("q_low".to_string());
    }
    cols
}

fn row_cells(r: &FactorizationRecord, k: usize, with_operator: bool) -> Vec<String> {
    let mut cells = vec![
        r.mask.clone(),
        r.l.clone(),
        r.m.clone(),
        r.lbar.clone(),
        r.mbar.clone(),
        r.alpha_beta.clone(),
    ];
    for i in 0..k {
        cells.push(r.rho.get(i).cloned().unwrap_or_default());
    }
    if k == 1 {
        cells.push(r.q.clone().unwrap_or_default());
    }
    cells.push(r.nu_infinity.clone());
    cells.push(r.nu_other.clone());
    cells.push(r.status.clone());
    if with_operator {
        match &r.operator {
            Some(op) => {
                cells.push(op.q_top.clone());
                cells.push(op.q_mid.clone());
                cells.push(op.q_low.clone());
            }
            None => cells.extend([String::new(), String::new(), String::new()]),
        }
    }
    cells
}

/// Tab-separated table with a header line.
pub fn render_table(doc: &ResultDocument, with_operator: bool) -> String {
    let mut out = String::new();
    out.push_str(&columns(doc.k, with_operator).join("\t"));
    out.push('\n');
    for r in &doc.factorizations {
        out.push_str(&row_cells(r, doc.k, with_operator).join("\t"));
        out.push('\n');
    }
    out
}

/// RFC-4180 CSV with the same columns; symbolic cells are quoted as needed
/// by the writer.
pub fn render_csv(doc: &ResultDocument, with_operator: bool) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new());
    w.write_record(columns(doc.k, with_operator))?;
    for r in &doc.factorizations {
        w.write_record(row_cells(r, doc.k, with_operator))?;
    }
    let bytes = w.into_inner().expect("csv buffer");
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Pretty JSON, one trailing newline.
pub fn render_json(doc: &ResultDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

/// Shared by tests and the verify path: reparse the canonical singularity
/// and exponent strings of a document back into engine values.
pub fn reparse_inputs(
    doc: &ResultDocument,
) -> heunfac_core::Result<(
    Arc<SymbolTable>,
    Vec<RationalFunction>,
    Vec<RationalFunction>,
)> {
    let all: Vec<&str> = doc
        .singularities
        .iter()
        .chain(doc.exponents.iter())
        .map(|s| s.as_str())
        .collect();
    let names = heunfac_core::scan_symbols(&all);
    let table = SymbolTable::new(names)?;
    let sing = doc
        .singularities
        .iter()
        .map(|s| heunfac_core::parse_coeff(s, &table))
        .collect::<heunfac_core::Result<Vec<_>>>()?;
    let exps = doc
        .exponents
        .iter()
        .map(|s| heunfac_core::parse_coeff(s, &table))
        .collect::<heunfac_core::Result<Vec<_>>>()?;
    Ok((table, sing, exps))
}
