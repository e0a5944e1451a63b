//! JSON problem files: parsing and full validation into (q, G, κ).
//!
//! ```json
//! {
//!   "n": 2,
//!   "cyclotomic_order": 4,
//!   "q": [{ "i": 1, "j": 2, "value": "-1" }],
//!   "group": { "generators": [[["0", "1"], ["1", "0"]]] },
//!   "kappa": [{ "g": "g1", "i": 1, "j": 2, "const": "1", "lin": ["0", "0"] }],
//!   "options": { "max_group_order": 64, "mode": "both" }
//! }
//! ```
//!
//! Indices are 1-based. Scalars are strings in the literal syntax of
//! [`crate::expr`]. Omitted q entries are 1, an omitted group is trivial, and
//! omitted κ fields are zero. `group` may list `elements` (identity first)
//! instead of `generators`.

use std::collections::BTreeMap;
use std::fmt;

use orbifold_core::{
    check_q_compatibility, CycField, CycScalar, FreeElement, GroupData, GroupError, KappaMap,
    Letter, Matrix, QMatrix, Word,
};
use serde::Deserialize;

use crate::expr::{parse_group_name, parse_scalar};

pub const MAX_DIMENSION: usize = 12;
pub const MAX_CYCLOTOMIC_ORDER: u32 = 720;
pub const MAX_GROUP_ORDER: usize = 4096;
pub const DEFAULT_MAX_GROUP_ORDER: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Theorem,
    Oracle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Code {
    Syntax,
    Schema,
    Limit,
    Scalar,
    QIndex,
    QDiagonal,
    QZero,
    QInconsistent,
    GroupShape,
    SingularGenerator,
    GroupTooLarge,
    GroupInvalid,
    Incompatible,
    KappaGroup,
    KappaIndex,
    KappaLinear,
    KappaDuplicate,
    KappaInvalid,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Syntax => "syntax",
            Code::Schema => "schema",
            Code::Limit => "limit",
            Code::Scalar => "scalar",
            Code::QIndex => "q-index",
            Code::QDiagonal => "q-diagonal",
            Code::QZero => "q-zero",
            Code::QInconsistent => "q-inconsistent",
            Code::GroupShape => "group-shape",
            Code::SingularGenerator => "singular-generator",
            Code::GroupTooLarge => "group-too-large",
            Code::GroupInvalid => "group-invalid",
            Code::Incompatible => "incompatible-action",
            Code::KappaGroup => "kappa-group",
            Code::KappaIndex => "kappa-index",
            Code::KappaLinear => "kappa-linear",
            Code::KappaDuplicate => "kappa-duplicate",
            Code::KappaInvalid => "kappa-invalid",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: Code,
    /// Location inside the document, e.g. `q[0].value`.
    pub path: String,
    pub message: String,
    /// 1-based line and column, for syntax errors.
    pub position: Option<(usize, usize)>,
    /// (g, i, j) for incompatible actions, 0-based.
    pub witness: Option<(usize, usize, usize)>,
}

impl Diagnostic {
    fn new(code: Code, path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            path: path.into(),
            message: message.into(),
            position: None,
            witness: None,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]", self.code)?;
        if let Some((line, col)) = self.position {
            write!(f, " line {line}, column {col}")?;
        }
        if !self.path.is_empty() {
            write!(f, " {}", self.path)?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Everything wrong with a problem file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemError {
    pub diagnostics: Vec<Diagnostic>,
}

impl ProblemError {
    /// True when the only problems are q-incompatible group elements.
    pub fn is_precondition_failure(&self) -> bool {
        !self.diagnostics.is_empty()
            && self
                .diagnostics
                .iter()
                .all(|d| d.code == Code::Incompatible)
    }
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, d) in self.diagnostics.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ProblemError {}

#[derive(Debug, Clone)]
pub struct Problem {
    pub field: CycField,
    pub q: QMatrix,
    pub group: GroupData,
    pub kappa: KappaMap,
    pub mode: Option<Mode>,
}

impl Problem {
    pub fn dim(&self) -> usize {
        self.q.dim()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    n: usize,
    cyclotomic_order: u32,
    #[serde(default)]
    q: Vec<RawQ>,
    #[serde(default)]
    group: Option<RawGroup>,
    #[serde(default)]
    kappa: Vec<RawKappa>,
    #[serde(default)]
    options: RawOptions,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQ {
    i: usize,
    j: usize,
    value: String,
}

type RawMatrix = Vec<Vec<String>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    generators: Option<Vec<RawMatrix>>,
    elements: Option<Vec<RawMatrix>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKappa {
    g: String,
    i: usize,
    j: usize,
    #[serde(rename = "const")]
    constant: Option<String>,
    lin: Option<Vec<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    max_group_order: Option<usize>,
    mode: Option<Mode>,
}

/// Parses and validates a problem file, collecting every diagnostic.
pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    load(text, true)
}

/// Like [`parse_problem`] but accepts groups that are not q-compatible.
pub fn parse_problem_unchecked(text: &str) -> Result<Problem, ProblemError> {
    load(text, false)
}

struct Loader<'a> {
    field: &'a CycField,
    n: usize,
    diags: Vec<Diagnostic>,
}

impl Loader<'_> {
    fn push(&mut self, code: Code, path: impl Into<String>, message: impl Into<String>) {
        self.diags.push(Diagnostic::new(code, path, message));
    }

    fn scalar(&mut self, src: &str, path: String) -> Option<CycScalar> {
        match parse_scalar(src, self.field) {
            Ok(s) => Some(s),
            Err(e) => {
                self.push(
                    Code::Scalar,
                    path,
                    format!("cannot parse scalar \"{src}\": {e}"),
                );
                None
            }
        }
    }

    fn matrix(&mut self, raw: &RawMatrix, path: String) -> Option<Matrix> {
        let n = self.n;
        if raw.len() != n || raw.iter().any(|r| r.len() != n) {
            self.push(Code::GroupShape, path, format!("matrix must be {n}x{n}"));
            return None;
        }
        let mut rows = Vec::with_capacity(n);
        let mut ok = true;
        for (r, row) in raw.iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (c, s) in row.iter().enumerate() {
                match self.scalar(s, format!("{path}[{r}][{c}]")) {
                    Some(v) => out.push(v),
                    None => ok = false,
                }
            }
            rows.push(out);
        }
        if ok {
            Matrix::from_rows(rows)
        } else {
            None
        }
    }

    fn q(&mut self, raw: &[RawQ]) -> Option<QMatrix> {
        let n = self.n;
        let start = self.diags.len();
        let mut upper: BTreeMap<(usize, usize), (CycScalar, usize)> = BTreeMap::new();
        for (idx, e) in raw.iter().enumerate() {
            let path = format!("q[{idx}]");
            if e.i == 0 || e.j == 0 || e.i > n || e.j > n {
                self.push(
                    Code::QIndex,
                    path,
                    format!("indices ({}, {}) out of range 1..={n}", e.i, e.j),
                );
                continue;
            }
            let Some(v) = self.scalar(&e.value, format!("{path}.value")) else {
                continue;
            };
            if v.is_zero() {
                self.push(
                    Code::QZero,
                    format!("{path}.value"),
                    "q entries must be nonzero",
                );
                continue;
            }
            if e.i == e.j {
                if !v.is_one() {
                    self.push(
                        Code::QDiagonal,
                        path,
                        format!("q_{0}{0} must be 1, found {v}", e.i),
                    );
                }
                continue;
            }
            let (key, v) = if e.i < e.j {
                ((e.i - 1, e.j - 1), v)
            } else {
                ((e.j - 1, e.i - 1), v.inverse().expect("nonzero"))
            };
            match upper.get(&key) {
                Some((prev, first)) if *prev != v => {
                    let msg = format!(
                        "q_{}{} conflicts with q[{first}] (q_ji must equal 1/q_ij)",
                        e.i, e.j
                    );
                    self.push(Code::QInconsistent, path, msg);
                }
                Some(_) => {}
                None => {
                    upper.insert(key, (v, idx));
                }
            }
        }
        if self.diags.len() > start {
            return None;
        }
        let entries: Vec<_> = upper
            .into_iter()
            .map(|((i, j), (v, _))| (i, j, v))
            .collect();
        match QMatrix::from_upper(self.field, n, &entries) {
            Ok(q) => Some(q),
            Err(e) => {
                self.push(Code::Schema, "q", e.to_string());
                None
            }
        }
    }

    fn group(&mut self, raw: Option<&RawGroup>, max_order: usize) -> Option<GroupData> {
        let Some(raw) = raw else {
            return Some(GroupData::trivial(self.field, self.n));
        };
        let (list, path, explicit) = match (&raw.generators, &raw.elements) {
            (Some(_), Some(_)) => {
                self.push(
                    Code::Schema,
                    "group",
                    "give either \"generators\" or \"elements\", not both",
                );
                return None;
            }
            (Some(g), None) => (g, "group.generators", false),
            (None, Some(e)) => (e, "group.elements", true),
            (None, None) => return Some(GroupData::trivial(self.field, self.n)),
        };
        if list.len() > max_order.max(1) {
            let msg = format!(
                "{} matrices exceed the maximum group order {max_order}",
                list.len()
            );
            self.push(Code::GroupTooLarge, path, msg);
            return None;
        }
        let mats: Vec<Option<Matrix>> = list
            .iter()
            .enumerate()
            .map(|(idx, m)| self.matrix(m, format!("{path}[{idx}]")))
            .collect();
        let mats: Vec<Matrix> = mats.into_iter().collect::<Option<_>>()?;
        let result = if explicit {
            GroupData::from_elements(self.n, mats)
        } else {
            GroupData::close(self.field, self.n, &mats, max_order)
        };
        match result {
            Ok(g) if g.order() > max_order => {
                let msg = format!("group order {} exceeds the maximum {max_order}", g.order());
                self.push(Code::GroupTooLarge, path, msg);
                None
            }
            Ok(g) => Some(g),
            Err(e) => {
                let (code, at) = match e {
                    GroupError::SingularGenerator { index } => {
                        (Code::SingularGenerator, format!("{path}[{index}]"))
                    }
                    GroupError::SingularElement { index } => {
                        (Code::GroupInvalid, format!("{path}[{index}]"))
                    }
                    GroupError::Shape { index, .. } => {
                        (Code::GroupShape, format!("{path}[{index}]"))
                    }
                    GroupError::TooLarge { .. } => (Code::GroupTooLarge, path.to_string()),
                    _ => (Code::GroupInvalid, path.to_string()),
                };
                self.push(code, at, e.to_string());
                None
            }
        }
    }

    fn compatibility(&mut self, q: &QMatrix, group: &GroupData) {
        for g in group.elements() {
            for v in check_q_compatibility(g, q) {
                let mut d = Diagnostic::new(
                    Code::Incompatible,
                    "group",
                    format!(
                        "g{} is not q-compatible at (i, j) = ({}, {}): residual {}",
                        v.g,
                        v.i + 1,
                        v.j + 1,
                        quadratic(&v.residual)
                    ),
                );
                d.witness = Some((v.g, v.i, v.j));
                self.diags.push(d);
            }
        }
    }

    fn kappa(
        &mut self,
        raw: &[RawKappa],
        q: Option<&QMatrix>,
        group: Option<&GroupData>,
    ) -> KappaMap {
        let n = self.n;
        let mut kappa = KappaMap::new(self.field, n);
        let mut seen = BTreeMap::new();
        for (idx, e) in raw.iter().enumerate() {
            let path = format!("kappa[{idx}]");
            let g = match group {
                Some(grp) => match parse_group_name(&e.g, grp.order()) {
                    Some(g) => Some(g),
                    None => {
                        let msg = format!(
                            "unknown group element \"{}\" (expected g0..g{})",
                            e.g,
                            grp.order() - 1
                        );
                        self.push(Code::KappaGroup, format!("{path}.g"), msg);
                        None
                    }
                },
                None => None,
            };
            let indices_ok = if e.i == e.j {
                self.push(
                    Code::KappaIndex,
                    path.clone(),
                    "diagonal values of kappa are zero and may not be given",
                );
                false
            } else if e.i == 0 || e.j == 0 || e.i > n || e.j > n {
                self.push(
                    Code::KappaIndex,
                    path.clone(),
                    format!("indices ({}, {}) out of range 1..={n}", e.i, e.j),
                );
                false
            } else if e.i > e.j {
                self.push(
                    Code::KappaIndex,
                    path.clone(),
                    format!("entries must have i < j, found ({}, {})", e.i, e.j),
                );
                false
            } else {
                true
            };
            let constant = match &e.constant {
                Some(s) => self.scalar(s, format!("{path}.const")),
                None => Some(self.field.zero()),
            };
            let linear = match &e.lin {
                Some(l) if l.len() != n => {
                    self.push(
                        Code::KappaLinear,
                        format!("{path}.lin"),
                        format!("expected {n} entries, found {}", l.len()),
                    );
                    None
                }
                Some(l) => l
                    .iter()
                    .enumerate()
                    .map(|(m, s)| self.scalar(s, format!("{path}.lin[{m}]")))
                    .collect::<Vec<_>>()
                    .into_iter()
                    .collect::<Option<Vec<_>>>(),
                None => Some(vec![self.field.zero(); n]),
            };
            let (Some(g), true, Some(c), Some(lin)) = (g, indices_ok, constant, linear) else {
                continue;
            };
            let key = (g, e.i - 1, e.j - 1);
            if let Some(first) = seen.insert(key, idx) {
                let msg = format!(
                    "duplicate entry for (g{g}, {}, {}), first given at kappa[{first}]",
                    e.i, e.j
                );
                self.push(Code::KappaDuplicate, path, msg);
                continue;
            }
            kappa.insert(g, key.1, key.2, c, lin);
        }
        if let (Some(q), Some(group)) = (q, group) {
            for v in kappa.validate(group, q) {
                self.push(Code::KappaInvalid, "kappa", format!("{v:?}"));
            }
        }
        kappa
    }
}

/// Renders Σ c_ab v_a v_b.
fn quadratic(terms: &BTreeMap<(usize, usize), CycScalar>) -> FreeElement {
    let mut e = FreeElement::zero();
    for (&(a, b), c) in terms {
        e.add_term(Word(vec![Letter::V(a), Letter::V(b)]), c.clone());
    }
    e
}

fn load(text: &str, require_compatible: bool) -> Result<Problem, ProblemError> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| {
        let code = match e.classify() {
            serde_json::error::Category::Data => Code::Schema,
            _ => Code::Syntax,
        };
        let mut d = Diagnostic::new(code, "", e.to_string());
        d.position = Some((e.line(), e.column()));
        ProblemError {
            diagnostics: vec![d],
        }
    })?;

    let mut early = Vec::new();
    if raw.n == 0 || raw.n > MAX_DIMENSION {
        early.push(Diagnostic::new(
            Code::Limit,
            "n",
            format!("n must be in 1..={MAX_DIMENSION}"),
        ));
    }
    if raw.cyclotomic_order == 0 || raw.cyclotomic_order > MAX_CYCLOTOMIC_ORDER {
        let msg = format!("cyclotomic_order must be in 1..={MAX_CYCLOTOMIC_ORDER}");
        early.push(Diagnostic::new(Code::Limit, "cyclotomic_order", msg));
    }
    let max_order = raw
        .options
        .max_group_order
        .unwrap_or(DEFAULT_MAX_GROUP_ORDER);
    if max_order == 0 || max_order > MAX_GROUP_ORDER {
        let msg = format!("max_group_order must be in 1..={MAX_GROUP_ORDER}");
        early.push(Diagnostic::new(Code::Limit, "options.max_group_order", msg));
    }
    if !early.is_empty() {
        return Err(ProblemError { diagnostics: early });
    }

    let field = CycField::new(raw.cyclotomic_order).expect("order checked");
    let mut loader = Loader {
        field: &field,
        n: raw.n,
        diags: Vec::new(),
    };
    let q = loader.q(&raw.q);
    let group = loader.group(raw.group.as_ref(), max_order);
    if require_compatible {
        if let (Some(q), Some(g)) = (&q, &group) {
            loader.compatibility(q, g);
        }
    }
    let kappa = loader.kappa(&raw.kappa, q.as_ref(), group.as_ref());
    match (q, group) {
        (Some(q), Some(group)) if loader.diags.is_empty() => Ok(Problem {
            field,
            q,
            group,
            kappa,
            mode: raw.options.mode,
        }),
        _ => Err(ProblemError {
            diagnostics: loader.diags,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codes(text: &str) -> Vec<Code> {
        parse_problem(text)
            .unwrap_err()
            .diagnostics
            .iter()
            .map(|d| d.code)
            .collect()
    }

    #[test]
    fn minimal_file() {
        let p = parse_problem(r#"{"n": 1, "cyclotomic_order": 1}"#).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.group.order(), 1);
        assert!(p.kappa.is_zero());
    }

    #[test]
    fn zero_q_entry() {
        let err = parse_problem(
            r#"{"n": 2, "cyclotomic_order": 4, "q": [{"i": 1, "j": 2, "value": "0"}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.diagnostics.len(), 1);
        assert_eq!(err.diagnostics[0].code, Code::QZero);
        assert!(err.to_string().contains("q entries must be nonzero"));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_problem("{\n  \"n\": 2,\n  \"cyclotomic_order\" 4\n}").unwrap_err();
        let d = &err.diagnostics[0];
        assert_eq!(d.code, Code::Syntax);
        assert_eq!(d.position.map(|p| p.0), Some(3));
    }

    #[test]
    fn incompatible_group_carries_witness() {
        let text = r#"{"n": 2, "cyclotomic_order": 4,
            "q": [{"i": 1, "j": 2, "value": "z"}],
            "group": {"generators": [[["0", "1"], ["1", "0"]]]}}"#;
        let err = parse_problem(text).unwrap_err();
        assert!(err.is_precondition_failure());
        assert_eq!(err.diagnostics[0].witness, Some((1, 0, 1)));
        assert!(parse_problem_unchecked(text).is_ok());
    }

    #[test]
    fn all_diagnostics_are_collected() {
        let text = r#"{"n": 2, "cyclotomic_order": 4,
            "q": [{"i": 1, "j": 1, "value": "2"}, {"i": 1, "j": 3, "value": "1"}, {"i": 1, "j": 2, "value": "1/"}],
            "group": {"generators": [[["0", "0"], ["0", "1"]]]},
            "kappa": [{"g": "g0", "i": 2, "j": 1}, {"g": "g0", "i": 1, "j": 2, "lin": ["1"]}]}"#;
        let got = codes(text);
        for want in [
            Code::QDiagonal,
            Code::QIndex,
            Code::Scalar,
            Code::SingularGenerator,
            Code::KappaIndex,
            Code::KappaLinear,
        ] {
            assert!(got.contains(&want), "{want} missing from {got:?}");
        }
    }

    #[test]
    fn group_errors() {
        let big = r#"{"n": 1, "cyclotomic_order": 5, "group": {"generators": [[["z"]]]}, "options": {"max_group_order": 4}}"#;
        assert_eq!(codes(big), vec![Code::GroupTooLarge]);
        let shape = r#"{"n": 2, "cyclotomic_order": 1, "group": {"generators": [[["1"]]]}}"#;
        assert_eq!(codes(shape), vec![Code::GroupShape]);
        let not_closed =
            r#"{"n": 1, "cyclotomic_order": 4, "group": {"elements": [[["1"]], [["z"]]]}}"#;
        assert_eq!(codes(not_closed), vec![Code::GroupInvalid]);
        let both =
            r#"{"n": 1, "cyclotomic_order": 1, "group": {"generators": [], "elements": []}}"#;
        assert_eq!(codes(both), vec![Code::Schema]);
    }

    #[test]
    fn kappa_errors() {
        let text = r#"{"n": 2, "cyclotomic_order": 1,
            "kappa": [{"g": "g1", "i": 1, "j": 2}, {"g": "g0", "i": 1, "j": 2, "const": "1"},
                      {"g": "g0", "i": 1, "j": 2, "const": "2"}, {"g": "g0", "i": 1, "j": 1}]}"#;
        assert_eq!(
            codes(text),
            vec![Code::KappaGroup, Code::KappaDuplicate, Code::KappaIndex]
        );
    }

    #[test]
    fn lower_triangle_q_is_inverted() {
        let text = r#"{"n": 2, "cyclotomic_order": 4, "q": [{"i": 2, "j": 1, "value": "z"}]}"#;
        let p = parse_problem(text).unwrap();
        assert_eq!(p.q.get(0, 1), &p.field.root_of_unity(3));
        let clash = r#"{"n": 2, "cyclotomic_order": 4, "q": [{"i": 2, "j": 1, "value": "z"}, {"i": 1, "j": 2, "value": "z"}]}"#;
        assert_eq!(codes(clash), vec![Code::QInconsistent]);
    }

    #[test]
    fn limits() {
        assert_eq!(
            codes(r#"{"n": 0, "cyclotomic_order": 100000}"#),
            vec![Code::Limit, Code::Limit]
        );
        assert_eq!(
            codes(r#"{"n": 1, "cyclotomic_order": 1, "extra": 1}"#),
            vec![Code::Schema]
        );
    }
}
