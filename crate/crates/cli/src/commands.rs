//! Command implementations. Each takes the problem text and returns what the
//! binary should print and the exit code, so they can be tested in-process.

use std::fmt::Write as _;

use orbifold_core::{
    check_pbw_oracle, check_pbw_theorem, check_q_compatibility, GroupData, Matrix, PbwReport,
    ReductionSystem, Strategy, SystemError, Verdict,
};
use serde_json::json;

use crate::exit;
use crate::expr::{parse_expr, Context};
use crate::problem::{parse_problem, parse_problem_unchecked, Mode, Problem, ProblemError};
use crate::report::{render_json, render_text, Format, Outcome};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn fail(code: u8, stderr: String) -> Self {
        Output {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn problem_failure(e: &ProblemError) -> Output {
    let code = if e.is_precondition_failure() {
        exit::PRECONDITION
    } else {
        exit::INVALID
    };
    Output::fail(code, format!("{e}\n"))
}

fn system_failure(e: &SystemError) -> Output {
    let code = match e {
        SystemError::Incompatible(_) => exit::PRECONDITION,
        _ => exit::INVALID,
    };
    Output::fail(code, format!("error: {e}\n"))
}

/// Runs the requested checker paths.
pub fn run_checks(problem: &Problem, mode: Mode) -> Result<Outcome, SystemError> {
    let (q, g, k) = (&problem.q, &problem.group, &problem.kappa);
    let theorem = match mode {
        Mode::Theorem | Mode::Both => Some(check_pbw_theorem(q, g, k)?),
        Mode::Oracle => None,
    };
    let oracle = match mode {
        Mode::Oracle | Mode::Both => Some(check_pbw_oracle(q, g, k)?),
        Mode::Theorem => None,
    };
    Ok(Outcome { theorem, oracle })
}

pub fn exit_code(outcome: &Outcome) -> u8 {
    match outcome.verdict() {
        Some(Verdict::Pbw) => exit::PBW,
        Some(Verdict::NotPbw) => exit::NOT_PBW,
        None => exit::MISMATCH,
    }
}

/// `check` and `report`: `full` lists every violation in text output.
pub fn check(text: &str, mode: Option<Mode>, format: Format, full: bool) -> Output {
    let problem = match parse_problem(text) {
        Ok(p) => p,
        Err(e) => return problem_failure(&e),
    };
    let mode = mode.or(problem.mode).unwrap_or(Mode::Both);
    let outcome = match run_checks(&problem, mode) {
        Ok(o) => o,
        Err(e) => return system_failure(&e),
    };
    let code = exit_code(&outcome);
    let stdout = match format {
        Format::Text => render_text(&outcome, full || code == exit::MISMATCH),
        Format::Structured => format!("{:#}\n", render_json(&outcome)),
    };
    Output {
        code,
        stdout,
        stderr: String::new(),
    }
}

/// `reduce`: normal form of an expression.
pub fn reduce(text: &str, expr: &str, strategy: Strategy) -> Output {
    let problem = match parse_problem(text) {
        Ok(p) => p,
        Err(e) => return problem_failure(&e),
    };
    let ctx = Context {
        field: &problem.field,
        n: problem.dim(),
        group_order: problem.group.order(),
    };
    let element = match parse_expr(expr, &ctx) {
        Ok(e) => e,
        Err(e) => return Output::fail(exit::INVALID, format!("error: {e}\n")),
    };
    let system = match ReductionSystem::new(&problem.q, &problem.group, &problem.kappa) {
        Ok(s) => s,
        Err(e) => return system_failure(&e),
    };
    let mut stderr = String::new();
    let pbw = check_pbw_oracle(&problem.q, &problem.group, &problem.kappa)
        .map(|r: PbwReport| r.verdict.is_pbw())
        .unwrap_or(false);
    if !pbw {
        stderr.push_str("warning: the algebra is not PBW; the normal form may depend on the reduction strategy\n");
    }
    let nf = system.reduce(&element, strategy);
    Output {
        code: exit::PBW,
        stdout: format!("{nf}\n"),
        stderr,
    }
}

fn render_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .rows()
        .map(|r| {
            format!(
                "[{}]",
                r.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn class_names(group: &GroupData) -> Vec<Vec<String>> {
    group
        .conjugacy_classes()
        .into_iter()
        .map(|c| c.into_iter().map(|g| format!("g{g}")).collect())
        .collect()
}

/// `group-info`: closure summary. Works for q-incompatible groups too.
pub fn group_info(text: &str, format: Format) -> Output {
    let problem = match parse_problem_unchecked(text) {
        Ok(p) => p,
        Err(e) => return problem_failure(&e),
    };
    let group = &problem.group;
    let compat: Vec<Vec<(usize, usize)>> = group
        .elements()
        .iter()
        .map(|g| {
            check_q_compatibility(g, &problem.q)
                .into_iter()
                .map(|v| (v.i + 1, v.j + 1))
                .collect()
        })
        .collect();
    let stdout = match format {
        Format::Structured => {
            let elements: Vec<_> = group
                .elements()
                .iter()
                .zip(&compat)
                .map(|(g, bad)| {
                    json!({
                        "name": format!("g{}", g.id),
                        "matrix": g.matrix.rows().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "order": group.element_order(g.id),
                        "q_compatible": bad.is_empty(),
                        "incompatible_pairs": bad,
                    })
                })
                .collect();
            let value = json!({
                "order": group.order(),
                "abelian": group.is_abelian(),
                "elements": elements,
                "multiplication_table": group.mult_table(),
                "conjugacy_classes": class_names(group),
            });
            format!("{value:#}\n")
        }
        Format::Text => {
            let mut s = String::new();
            let m = group.order();
            let _ = writeln!(s, "order: {m}");
            let _ = writeln!(
                s,
                "abelian: {}",
                if group.is_abelian() { "yes" } else { "no" }
            );
            let _ = writeln!(s, "elements:");
            for (g, bad) in group.elements().iter().zip(&compat) {
                let status = if bad.is_empty() {
                    "q-compatible".to_string()
                } else {
                    let pairs: Vec<String> =
                        bad.iter().map(|(i, j)| format!("({i}, {j})")).collect();
                    format!("NOT q-compatible at {}", pairs.join(" "))
                };
                let _ = writeln!(
                    s,
                    "  g{} = {}  order {}  {}",
                    g.id,
                    render_matrix(&g.matrix),
                    group.element_order(g.id),
                    status
                );
            }
            let width = format!("g{}", m - 1).len();
            let _ = writeln!(s, "multiplication table (row * column):");
            let header: Vec<String> = (0..m)
                .map(|g| format!("{:>width$}", format!("g{g}")))
                .collect();
            let _ = writeln!(s, "  {:>width$} | {}", "", header.join(" "));
            for (a, row) in group.mult_table().iter().enumerate() {
                let cells: Vec<String> = row
                    .iter()
                    .map(|g| format!("{:>width$}", format!("g{g}")))
                    .collect();
                let _ = writeln!(s, "  {:>width$} | {}", format!("g{a}"), cells.join(" "));
            }
            let classes: Vec<String> = class_names(group)
                .into_iter()
                .map(|c| format!("{{{}}}", c.join(", ")))
                .collect();
            let _ = writeln!(
                s,
                "conjugacy classes ({}): {}",
                classes.len(),
                classes.join(" ")
            );
            s
        }
    };
    Output {
        code: exit::PBW,
        stdout,
        stderr: String::new(),
    }
}
