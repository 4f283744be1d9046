//! Reference-table reproduction: seven checked-in tables are recomputed
//! from scratch and compared byte-for-byte. Tables 1–4 cover the
//! half-exponent families of degree 1 and 2; tables 5–7 the degree-2
//! family with free exponents. Each row lists one splitting; the `orient`
//! bit says which member of the infinity index pair is printed as alpha
//! (`A`: the right factor's index is alpha, `B`: it is beta).

use std::str::FromStr;
use std::sync::Arc;

use heunfac_core::{
    parse_coeff, solve_splitting, FamilySpec, RationalFunction, SplittingMask, SymbolTable,
};

use crate::document::factored;

/// Which operator family a reference table draws from.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    /// All finite exponents 1/2; parameters are the extra singular points.
    HalfExponent { k: usize },
    /// Degree-2 family with free symbolic exponents gamma, delta, eps1, eps2.
    FreeExponents,
}

struct TableSpec {
    id: u8,
    family: Family,
    masks: &'static [&'static str],
    orients: &'static str,
    selection: &'static str,
}

const DEG2_MASKS: &[&str] = &["1100", "0011", "1010", "0101", "1001", "0110"];
const DEG3_MASKS: &[&str] = &["0111", "1011", "1101", "1110"];
const DEG1_MASKS: &[&str] = &["1000", "0100", "0010", "0001"];

const SPECS: &[TableSpec] = &[
    TableSpec {
        id: 1,
        family: Family::HalfExponent { k: 1 },
        masks: &["100", "010", "001", "011", "101", "110"],
        orients: "BBBAAA",
        selection: "all proper splittings",
    },
    TableSpec {
        id: 2,
        family: Family::HalfExponent { k: 2 },
        masks: DEG2_MASKS,
        orients: "ABABAB",
        selection: "splittings with deg L = 2",
    },
    TableSpec {
        id: 3,
        family: Family::HalfExponent { k: 2 },
        masks: DEG3_MASKS,
        orients: "BBBB",
        selection: "splittings with deg L = 3",
    },
    TableSpec {
        id: 4,
        family: Family::HalfExponent { k: 2 },
        masks: DEG1_MASKS,
        orients: "AAAA",
        selection: "splittings with deg L = 1",
    },
    TableSpec {
        id: 5,
        family: Family::FreeExponents,
        masks: DEG2_MASKS,
        orients: "ABABAB",
        selection: "splittings with deg L = 2",
    },
    TableSpec {
        id: 6,
        family: Family::FreeExponents,
        masks: DEG3_MASKS,
        orients: "BBBB",
        selection: "splittings with deg L = 3",
    },
    TableSpec {
        id: 7,
        family: Family::FreeExponents,
        masks: DEG1_MASKS,
        orients: "AAAA",
        selection: "splittings with deg L = 1",
    },
];

pub const TABLE_IDS: std::ops::RangeInclusive<u8> = 1..=7;

/// The checked-in reference text for a table id (1..=7).
pub fn golden(id: u8) -> Option<&'static str> {
    Some(match id {
        1 => include_str!("../golden/table1.tsv"),
        2 => include_str!("../golden/table2.tsv"),
        3 => include_str!("../golden/table3.tsv"),
        4 => include_str!("../golden/table4.tsv"),
        5 => include_str!("../golden/table5.tsv"),
        6 => include_str!("../golden/table6.tsv"),
        7 => include_str!("../golden/table7.tsv"),
        _ => return None,
    })
}

const EXTRA_POINTS: &[&str] = &["a", "b"];

fn build_family(family: Family) -> (Arc<SymbolTable>, FamilySpec, usize) {
    match family {
        Family::HalfExponent { k } => {
            let table = SymbolTable::new(EXTRA_POINTS[..k].to_vec()).unwrap();
            let extras: Vec<RationalFunction> = EXTRA_POINTS[..k]
                .iter()
                .map(|s| parse_coeff(s, &table).unwrap())
                .collect();
            let fam = FamilySpec::new_half_exponent(&table, extras).unwrap();
            (table, fam, k)
        }
        Family::FreeExponents => {
            let table =
                SymbolTable::new(["a", "b", "gamma", "delta", "eps1", "eps2"]).unwrap();
            let extras: Vec<RationalFunction> = ["a", "b"]
                .iter()
                .map(|s| parse_coeff(s, &table).unwrap())
                .collect();
            let exps: Vec<RationalFunction> = ["gamma", "delta", "eps1", "eps2"]
                .iter()
                .map(|s| parse_coeff(s, &table).unwrap())
                .collect();
            let fam = FamilySpec::new(&table, extras, exps).unwrap();
            (table, fam, 2)
        }
    }
}

fn family_description(family: Family) -> String {
    match family {
        Family::HalfExponent { k } => format!(
            "k={k}, all exponents 1/2, singularities [0, 1, {}]",
            EXTRA_POINTS[..k].join(", ")
        ),
        Family::FreeExponents => {
            "k=2, exponents [gamma, delta, eps1, eps2], singularities [0, 1, a, b]".to_string()
        }
    }
}

fn header_columns(k: usize) -> Vec<String> {
    let mut cols: Vec<String> = ["mask", "L", "M", "Lbar", "Mbar", "alpha", "beta"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if k == 1 {
        cols.push("q".to_string());
    } else {
        for i in 1..=k {
            cols.push(format!("rho{i}"));
        }
    }
    cols.push("orient".to_string());
    cols
}

/// Recomputes a reference table from scratch. `None` for an unknown id.
pub fn render_table(id: u8) -> Option<String> {
    let spec = SPECS.iter().find(|s| s.id == id)?;
    let (_, fam, k) = build_family(spec.family);

    let mut out = String::new();
    out.push_str(&format!(
        "# reference table {}: {}; {}\n",
        spec.id,
        family_description(spec.family),
        spec.selection
    ));
    out.push_str(&format!("# columns: {}\n", header_columns(k).join(", ")));
    out.push_str(&header_columns(k).join("\t"));
    out.push('\n');

    for (mask_str, orient) in spec.masks.iter().zip(spec.orients.chars()) {
        let mask = SplittingMask::from_str(mask_str).expect("reference masks are valid");
        let f = solve_splitting(&fam, &mask).expect("reference splittings solve");
        let (nu_right, nu_other) = (&f.index_pair.0, &f.index_pair.1);
        let (alpha, beta) = if orient == 'A' {
            (nu_right, nu_other)
        } else {
            (nu_other, nu_right)
        };
        let mut cells = vec![
            mask.to_string(),
            factored(f.left.roots()),
            f.left.m_poly().to_string(),
            factored(f.right.roots()),
            f.right.m_poly().to_string(),
            alpha.to_string(),
            beta.to_string(),
        ];
        if k == 1 {
            cells.push(
                f.accessory
                    .q_value()
                    .expect("degree-1 family has a q value")
                    .to_string(),
            );
        } else {
            for r in &f.accessory.rho {
                cells.push(r.to_string());
            }
        }
        cells.push(orient.to_string());
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    Some(out)
}

/// Line-by-line difference between the recomputed table and the reference
/// text; empty when they match byte-for-byte.
pub fn diff_against_golden(id: u8) -> Option<Vec<String>> {
    let computed = render_table(id)?;
    let reference = golden(id)?;
    if computed == reference {
        return Some(Vec::new());
    }
    let mut report = Vec::new();
    let mut comp_lines = computed.lines();
    let mut gold_lines = reference.lines();
    let mut line_no = 0usize;
    loop {
        line_no += 1;
        match (comp_lines.next(), gold_lines.next()) {
            (None, None) => break,
            (c, g) => {
                if c != g {
                    report.push(format!(
                        "line {line_no}:\n  computed:  {}\n  reference: {}",
                        c.unwrap_or("<missing>"),
                        g.unwrap_or("<missing>")
                    ));
                }
            }
        }
    }
    if report.is_empty() {
        // same lines but different bytes (e.g. trailing newline)
        report.push("texts differ only in trailing whitespace".to_string());
    }
    Some(report)
}
