//! Human-readable and JSON renderings of checker results.

use std::fmt::Write as _;

use orbifold_core::{Condition, Letter, PbwReport, Verdict, Violation};
use serde_json::{json, Map, Value};

/// Maximum violations listed per report in summary mode.
pub const SUMMARY_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

/// Results of one or both checker paths.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub theorem: Option<PbwReport>,
    pub oracle: Option<PbwReport>,
}

impl Outcome {
    pub fn reports(&self) -> impl Iterator<Item = &PbwReport> {
        self.theorem.iter().chain(self.oracle.iter())
    }

    /// `Some` only when both paths ran.
    pub fn agreement(&self) -> Option<bool> {
        match (&self.theorem, &self.oracle) {
            (Some(t), Some(o)) => Some(t.verdict == o.verdict),
            _ => None,
        }
    }

    /// The common verdict, or `None` if the paths disagree.
    pub fn verdict(&self) -> Option<Verdict> {
        let mut it = self.reports().map(|r| r.verdict);
        let first = it.next()?;
        it.all(|v| v == first).then_some(first)
    }
}

/// Named witness fields: group elements as `g<k>`, vector indices 1-based.
pub fn witness_fields(v: &Violation) -> Vec<(&'static str, String)> {
    let w = &v.witness;
    let all_t = w
        .word
        .as_ref()
        .is_some_and(|word| word.letters().iter().all(|l| matches!(l, Letter::T(_))));
    let mut out = Vec::new();
    let name = |g: usize| format!("g{g}");
    let index = |i: usize| (i + 1).to_string();
    if let Some(g) = w.g {
        out.push(("g", name(g)));
    }
    if let Some(h) = w.h {
        out.push(("h", name(h)));
    }
    if let Some(i) = w.i {
        out.push(("i", index(i)));
    }
    if let Some(j) = w.j {
        out.push(("j", index(j)));
    }
    if let Some(k) = w.k {
        out.push(("k", if all_t { name(k) } else { index(k) }));
    }
    if let Some(word) = &w.word {
        out.push(("word", word.to_string()));
    }
    out
}

fn verdict_line(outcome: &Outcome) -> String {
    match (outcome.verdict(), &outcome.theorem, &outcome.oracle) {
        (Some(v), _, _) => v.to_string(),
        (None, Some(t), Some(o)) => {
            format!("MISMATCH (theorem {}, oracle {})", t.verdict, o.verdict)
        }
        _ => "none".to_string(),
    }
}

fn counts(report: &PbwReport) -> String {
    Condition::ALL
        .iter()
        .filter_map(|&c| {
            let checked = report.statistics.get(&c)?;
            let bad = report.violations_of(c).count();
            Some(format!("{c} {bad}/{checked}"))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Text rendering. `full` lists every violation; otherwise at most
/// [`SUMMARY_LIMIT`] per report.
pub fn render_text(outcome: &Outcome, full: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verdict: {}", verdict_line(outcome));
    for r in outcome.reports() {
        let _ = writeln!(
            s,
            "{:<8} {} ({})",
            format!("{}:", r.provenance),
            r.verdict,
            counts(r)
        );
    }
    if let Some(agree) = outcome.agreement() {
        let _ = writeln!(s, "agreement: {}", if agree { "yes" } else { "NO" });
    }
    for r in outcome.reports() {
        if r.violations.is_empty() {
            continue;
        }
        let _ = writeln!(s, "{} violations:", r.provenance);
        let shown = if full {
            r.violations.len()
        } else {
            SUMMARY_LIMIT
        };
        for v in r.violations.iter().take(shown) {
            let fields: Vec<String> = witness_fields(v)
                .into_iter()
                .map(|(k, x)| format!("{k}={x}"))
                .collect();
            let _ = writeln!(
                s,
                "  [{}] {}: {}",
                v.condition,
                fields.join(" "),
                v.residual
            );
        }
        if r.violations.len() > shown {
            let _ = writeln!(
                s,
                "  ... {} more (run `report` for the full list)",
                r.violations.len() - shown
            );
        }
    }
    s
}

fn report_json(r: &PbwReport) -> Value {
    let mut stats = Map::new();
    let mut violations = Map::new();
    for (&c, &checked) in &r.statistics {
        let list: Vec<Value> = r
            .violations_of(c)
            .map(|v| {
                let witness: Map<String, Value> = witness_fields(v)
                    .into_iter()
                    .map(|(k, x)| {
                        let value = match x.parse::<u64>() {
                            Ok(n) if k != "word" => json!(n),
                            _ => json!(x),
                        };
                        (k.to_string(), value)
                    })
                    .collect();
                json!({ "witness": witness, "residual": v.residual.to_string() })
            })
            .collect();
        stats.insert(
            c.tag().to_string(),
            json!({ "checked": checked, "violations": list.len() }),
        );
        violations.insert(c.tag().to_string(), Value::Array(list));
    }
    json!({
        "provenance": r.provenance.to_string(),
        "verdict": r.verdict.to_string(),
        "statistics": stats,
        "violations": violations,
    })
}

pub fn render_json(outcome: &Outcome) -> Value {
    let reports: Vec<Value> = outcome.reports().map(report_json).collect();
    json!({
        "verdict": outcome.verdict().map(|v| v.to_string()),
        "agreement": outcome.agreement(),
        "provenance": outcome.reports().map(|r| r.provenance.to_string()).collect::<Vec<_>>(),
        "reports": reports,
    })
}
