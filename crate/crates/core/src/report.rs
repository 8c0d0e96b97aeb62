//! Tabular reports for people and spreadsheets.
//!
//! A [`ReportDocument`] is an ordered list of titled tables. Numeric cells
//! keep their full-precision value next to the number of decimals used for
//! display: 2 for FFN components and 4 for scores, weights and utilities.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffn::Ffn;
use crate::marcos::FfMatrix;
use crate::payload::{
    CompareResponse, EvaluateResponse, PerturbResponse, SweepResponse, WeightsResponse,
};

pub const FFN_DECIMALS: usize = 2;
pub const VALUE_DECIMALS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Cell {
    Text { text: String },
    Number { value: f64, decimals: usize },
    Ffn { mu: f64, nu: f64, decimals: usize },
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text { text: s.into() }
    }

    pub fn value(v: f64) -> Self {
        Cell::Number {
            value: v,
            decimals: VALUE_DECIMALS,
        }
    }

    pub fn ffn(f: Ffn) -> Self {
        Cell::Ffn {
            mu: f.mu(),
            nu: f.nu(),
            decimals: FFN_DECIMALS,
        }
    }

    pub fn display(&self) -> String {
        match self {
            Cell::Text { text } => text.clone(),
            Cell::Number { value, decimals } => format!("{value:.decimals$}"),
            Cell::Ffn { mu, nu, decimals } => format!("({mu:.decimals$}, {nu:.decimals$})"),
        }
    }

    /// Whether the cell can sit in a right-aligned column. Blank text is
    /// neutral.
    fn aligns_right(&self) -> Option<bool> {
        match self {
            Cell::Text { text } if text.is_empty() => None,
            Cell::Text { .. } => Some(false),
            _ => Some(true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(title: &str, columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            title: title.to_string(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Header line plus one line per row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::display))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn to_plain(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::display).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain([self.columns[j].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let numeric: Vec<bool> = (0..self.columns.len())
            .map(|j| {
                let mut kinds = self
                    .rows
                    .iter()
                    .filter_map(|r| r[j].aligns_right())
                    .peekable();
                kinds.peek().is_some() && kinds.all(|k| k)
            })
            .collect();
        let line = |values: &[String]| {
            let mut s = String::new();
            for (j, v) in values.iter().enumerate() {
                if j > 0 {
                    s.push_str("  ");
                }
                let pad = widths[j] - v.chars().count();
                if numeric[j] {
                    s.push_str(&" ".repeat(pad));
                    s.push_str(v);
                } else {
                    s.push_str(v);
                    s.push_str(&" ".repeat(pad));
                }
            }
            s.trim_end().to_string()
        };
        let mut out = String::new();
        writeln!(out, "{}", self.title).unwrap();
        writeln!(out, "{}", line(&self.columns)).unwrap();
        let total: usize = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
        writeln!(out, "{}", "-".repeat(total)).unwrap();
        for row in &cells {
            writeln!(out, "{}", line(row)).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub title: String,
    pub sections: Vec<Table>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Structured,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" | "plain" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "structured" | "json" => Ok(Format::Structured),
            other => Err(Error::validation(
                "format",
                format!("unknown format `{other}`"),
            )),
        }
    }
}

impl ReportDocument {
    pub fn section(&self, title: &str) -> Option<&Table> {
        self.sections.iter().find(|t| t.title == title)
    }

    /// Renders the document. `Structured` emits the report itself as JSON;
    /// callers wanting the raw payload serialize it directly.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => {
                let mut out = format!("{}\n\n", self.title);
                let body: Vec<String> = self.sections.iter().map(Table::to_plain).collect();
                out.push_str(&body.join("\n"));
                out
            }
            Format::Csv => self
                .sections
                .iter()
                .map(|t| format!("# {}\n{}", t.title, t.to_csv()))
                .collect::<Vec<_>>()
                .join("\n"),
            Format::Structured => crate::payload::to_json(self),
        }
    }
}

fn matrix_table(title: &str, m: &FfMatrix) -> Table {
    let mut t = Table::new(
        title,
        std::iter::once("alternative".to_string()).chain(m.criteria().iter().cloned()),
    );
    for i in 0..m.rows() {
        let mut row = vec![Cell::text(&m.alternatives()[i])];
        row.extend(m.row(i).iter().map(|&f| Cell::ffn(f)));
        t.push(row);
    }
    t
}

fn weights_table(criteria: &[String], w: &crate::piprecia::WeightBundle) -> Table {
    let mut t = Table::new(
        "Criterion weights",
        ["criterion", "objective", "subjective", "integrated"],
    );
    for (j, c) in criteria.iter().enumerate() {
        t.push(vec![
            Cell::text(c),
            Cell::value(w.objective[j]),
            Cell::value(w.subjective[j]),
            Cell::value(w.integrated[j]),
        ]);
    }
    t
}

fn significance_table(
    criteria: &[String],
    importance: &[Ffn],
    p: &crate::piprecia::PipreciaTrace,
) -> Table {
    let mut t = Table::new(
        "Criterion significance",
        [
            "criterion",
            "aggregated",
            "crisp",
            "s",
            "kappa",
            "q",
            "subjective",
        ],
    );
    for (j, c) in criteria.iter().enumerate() {
        t.push(vec![
            Cell::text(c),
            Cell::ffn(importance[j]),
            Cell::value(p.crisp[j]),
            p.s[j].map_or_else(|| Cell::text("-"), Cell::value),
            Cell::value(p.kappa[j]),
            Cell::value(p.q[j]),
            Cell::value(p.subjective[j]),
        ]);
    }
    t
}

fn expert_table(ids: &[String], panel: &crate::piprecia::ExpertPanel) -> Table {
    let mut t = Table::new("Expert weights", ["expert", "grade", "weight"]);
    for (k, id) in ids.iter().enumerate() {
        t.push(vec![
            Cell::text(id),
            Cell::text(&panel.grades[k]),
            Cell::value(panel.weights[k]),
        ]);
    }
    t
}

fn entropy_table(criteria: &[String], e: &crate::entropy::CriterionEntropies) -> Table {
    let mut t = Table::new("Criterion entropies", ["criterion", e.model.as_str()]);
    for (j, c) in criteria.iter().enumerate() {
        t.push(vec![Cell::text(c), Cell::value(e.values[j])]);
    }
    t
}

fn ids<T>(items: &[T], id: impl Fn(&T) -> &str) -> Vec<String> {
    items.iter().map(|x| id(x).to_string()).collect()
}

/// Weights, intermediate matrices (when present), utilities and ranking.
pub fn evaluation_report(r: &EvaluateResponse) -> ReportDocument {
    let criteria = ids(&r.criteria, |c| &c.id);
    let alternatives = ids(&r.alternatives, |a| &a.id);
    let mut sections = Vec::new();
    if let Some(im) = &r.intermediate {
        let experts: Vec<String> = (1..=im.expert_weights.grades.len())
            .map(|k| format!("S{k}"))
            .collect();
        sections.push(expert_table(&experts, &im.expert_weights));
        sections.push(significance_table(&criteria, &im.importance, &im.piprecia));
        sections.push(entropy_table(&criteria, &im.entropies));
    }
    sections.push(weights_table(&criteria, &r.weights));
    if let Some(im) = &r.intermediate {
        sections.push(matrix_table("Aggregated matrix", &im.aggregated));
        sections.push(matrix_table("Normalized matrix", &im.normalized));
        sections.push(matrix_table("Weighted matrix", &im.weighted));
        let mut scores = Table::new(
            "Weighted scores",
            std::iter::once("alternative".to_string()).chain(criteria.iter().cloned()),
        );
        for (i, a) in alternatives.iter().enumerate() {
            let mut row = vec![Cell::text(a)];
            row.extend(im.scores[i].iter().map(|&v| Cell::value(v)));
            scores.push(row);
        }
        sections.push(scores);
    }
    let m = &r.marcos;
    let mut util = Table::new(
        "Utilities",
        ["alternative", "S", "U-", "U+", "f(U+)", "f(U-)", "f(U)"],
    );
    util.push(vec![
        Cell::text("ideal"),
        Cell::value(m.s_pis),
        Cell::text(""),
        Cell::text(""),
        Cell::text(""),
        Cell::text(""),
        Cell::text(""),
    ]);
    util.push(vec![
        Cell::text("anti-ideal"),
        Cell::value(m.s_nis),
        Cell::text(""),
        Cell::text(""),
        Cell::text(""),
        Cell::text(""),
        Cell::text(""),
    ]);
    for (i, a) in alternatives.iter().enumerate() {
        util.push(vec![
            Cell::text(a),
            Cell::value(m.s[i]),
            Cell::value(m.u_minus[i]),
            Cell::value(m.u_plus[i]),
            Cell::value(m.f_u_plus[i]),
            Cell::value(m.f_u_minus[i]),
            Cell::value(m.f_u[i]),
        ]);
    }
    sections.push(util);
    sections.push(ranking_table(r));
    ReportDocument {
        title: format!(
            "{} (alpha = {}, {} entropy)",
            r.title, r.settings.alpha, r.settings.entropy_model
        ),
        sections,
    }
}

fn ranking_table(r: &EvaluateResponse) -> Table {
    let mut t = Table::new("Ranking", ["rank", "alternative", "name", "f(U)"]);
    for (pos, &i) in r.marcos.order.iter().enumerate() {
        t.push(vec![
            Cell::text((pos + 1).to_string()),
            Cell::text(&r.alternatives[i].id),
            Cell::text(&r.alternatives[i].name),
            Cell::value(r.marcos.f_u[i]),
        ]);
    }
    t
}

pub fn weights_report(r: &WeightsResponse) -> ReportDocument {
    let criteria = ids(&r.criteria, |c| &c.id);
    let experts: Vec<String> = (1..=r.expert_weights.grades.len())
        .map(|k| format!("S{k}"))
        .collect();
    ReportDocument {
        title: format!(
            "{} (alpha = {}, {} entropy)",
            r.title, r.settings.alpha, r.settings.entropy_model
        ),
        sections: vec![
            expert_table(&experts, &r.expert_weights),
            significance_table(&criteria, &r.importance, &r.piprecia),
            entropy_table(&criteria, &r.entropies),
            weights_table(&criteria, &r.weights),
        ],
    }
}

pub fn sweep_report(r: &SweepResponse) -> ReportDocument {
    let alternatives = ids(&r.alternatives, |a| &a.id);
    let mut t = Table::new(
        "Alpha sweep",
        std::iter::once("alpha".to_string())
            .chain(alternatives.iter().map(|a| format!("f(U) {a}")))
            .chain(["order".to_string()]),
    );
    for row in &r.rows {
        let mut cells = vec![Cell::Number {
            value: row.alpha,
            decimals: 2,
        }];
        cells.extend(row.f_u.iter().map(|&v| Cell::value(v)));
        cells.push(Cell::text(row.order.join(" > ")));
        t.push(cells);
    }
    ReportDocument {
        title: format!("{} ({} entropy)", r.title, r.settings.entropy_model),
        sections: vec![t],
    }
}

pub fn perturbation_report(r: &PerturbResponse) -> ReportDocument {
    let mut t = Table::new(
        "Weight perturbation",
        ["criterion", "direction", "tau", "order"],
    );
    for row in &r.rows {
        t.push(vec![
            Cell::text(&row.criterion),
            Cell::text(row.direction.symbol()),
            Cell::value(row.tau),
            Cell::text(row.order.join(" > ")),
        ]);
    }
    ReportDocument {
        title: format!(
            "{} (delta = {}, base order {})",
            r.title,
            r.delta,
            r.base_order.join(" > ")
        ),
        sections: vec![t],
    }
}

fn dominance_table(criteria: &[String], r: &CompareResponse) -> Table {
    let mut t = Table::new(
        "Criterion dominance",
        std::iter::once("model".to_string()).chain(criteria.iter().cloned()),
    );
    for d in &r.dominance {
        let mut row = vec![Cell::text(d.model.as_str())];
        row.extend(d.values.iter().map(|&v| Cell::value(v)));
        t.push(row);
    }
    t
}

pub fn comparison_report(r: &CompareResponse) -> ReportDocument {
    let criteria = ids(&r.criteria, |c| &c.id);
    let models: Vec<&str> = r
        .comparison
        .models
        .iter()
        .map(|m| m.model.as_str())
        .collect();
    let mut rankings = Table::new("Rankings by entropy model", ["model", "order"]);
    for m in &r.comparison.models {
        rankings.push(vec![
            Cell::text(m.model.as_str()),
            Cell::text(m.order.join(" > ")),
        ]);
    }
    let mut weights = Table::new(
        "Integrated weights by entropy model",
        std::iter::once("model".to_string()).chain(criteria.iter().cloned()),
    );
    for m in &r.comparison.models {
        let mut row = vec![Cell::text(m.model.as_str())];
        row.extend(m.integrated.iter().map(Cell::value));
        weights.push(row);
    }
    let mut tau = Table::new(
        "Kendall tau between models",
        std::iter::once("model").chain(models.iter().copied()),
    );
    for (a, m) in models.iter().enumerate() {
        let mut row = vec![Cell::text(*m)];
        row.extend(r.comparison.tau[a].iter().map(|&v| Cell::value(v)));
        tau.push(row);
    }
    ReportDocument {
        title: format!("{} (alpha = {})", r.title, r.settings.alpha),
        sections: vec![rankings, weights, tau, dominance_table(&criteria, r)],
    }
}

pub fn dominance_report(r: &CompareResponse) -> ReportDocument {
    let criteria = ids(&r.criteria, |c| &c.id);
    ReportDocument {
        title: format!("{} (alpha = {})", r.title, r.settings.alpha),
        sections: vec![dominance_table(&criteria, r)],
    }
}
