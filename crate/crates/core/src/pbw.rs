//! Deciding the PBW property of H_{q,κ} in two independent ways.
//!
//! [`check_pbw_theorem`] evaluates four closed-form conditions on (q, G, κ):
//!
//! 1. for all g, h and i < j:
//!    κ_g(v_j, v_i) = Σ_{k<l} ddet_ijkl(h) κ_{hgh⁻¹}(v_l, v_k), with the
//!    linear part on the left twisted by h;
//! 2. a quadratic identity in S_q(V) on κ^L for every distinct i, j, k;
//! 3. a linear identity tying κ^L ∘ κ^L to κ^C;
//! 4. a scalar identity on κ^C ∘ κ^L.
//!
//! [`check_pbw_oracle`] instead resolves every overlap ambiguity of the
//! reduction system. The two must agree on every input.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::CycScalar;
use crate::group::{reduce_quadratic, GroupData, QMatrix};
use crate::kappa::KappaMap;
use crate::rewrite::{FreeElement, Letter, ReductionSystem, Resolution, SystemError, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    C1Const,
    C1Lin,
    C2,
    C3,
    C4,
    Overlap,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::C1Const,
        Condition::C1Lin,
        Condition::C2,
        Condition::C3,
        Condition::C4,
        Condition::Overlap,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Condition::C1Const => "C1-const",
            Condition::C1Lin => "C1-lin",
            Condition::C2 => "C2",
            Condition::C3 => "C3",
            Condition::C4 => "C4",
            Condition::Overlap => "overlap",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Indices locating a violation (0-based). Unused slots are `None`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    pub g: Option<usize>,
    pub h: Option<usize>,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub word: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residual {
    Scalar(CycScalar),
    Vector(Vec<CycScalar>),
    Element(FreeElement),
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Scalar(s) => s.is_zero(),
            Residual::Vector(v) => v.iter().all(CycScalar::is_zero),
            Residual::Element(e) => e.is_zero(),
        }
    }

    /// The residual as an element of k⟨X⟩ (vectors become linear combinations of v's).
    pub fn to_element(&self) -> FreeElement {
        match self {
            Residual::Scalar(s) => FreeElement::scalar(s.clone()),
            Residual::Vector(v) => {
                let mut e = FreeElement::zero();
                for (m, c) in v.iter().enumerate() {
                    e.add_term(Word(vec![Letter::V(m)]), c.clone());
                }
                e
            }
            Residual::Element(e) => e.clone(),
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_element())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub witness: Witness,
    pub residual: Residual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pbw,
    NotPbw,
}

impl Verdict {
    pub fn is_pbw(self) -> bool {
        self == Verdict::Pbw
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pbw => "PBW",
            Verdict::NotPbw => "not-PBW",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Theorem,
    Oracle,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Theorem => "theorem",
            Provenance::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbwReport {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
    /// Number of identities (or overlap words) checked, per condition.
    pub statistics: BTreeMap<Condition, usize>,
    pub provenance: Provenance,
}

impl PbwReport {
    fn new(
        provenance: Provenance,
        violations: Vec<Violation>,
        statistics: BTreeMap<Condition, usize>,
    ) -> Self {
        let verdict = if violations.is_empty() {
            Verdict::Pbw
        } else {
            Verdict::NotPbw
        };
        PbwReport {
            verdict,
            violations,
            statistics,
            provenance,
        }
    }

    pub fn violations_of(&self, condition: Condition) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(move |v| v.condition == condition)
    }
}

fn basis_vector(q: &QMatrix, i: usize) -> Vec<CycScalar> {
    let field = q.get(0, 0).field();
    let mut v = vec![field.zero(); q.dim()];
    v[i] = field.one();
    v
}

fn axpy(acc: &mut [CycScalar], a: &CycScalar, x: &[CycScalar]) {
    if a.is_zero() {
        return;
    }
    for (s, c) in acc.iter_mut().zip(x) {
        *s += &(a * c);
    }
}

/// Condition (1): both the constant and the linear identity for every g, h ∈ G
/// and i < j.
pub fn check_condition1(q: &QMatrix, group: &GroupData, kappa: &KappaMap) -> Vec<Violation> {
    let n = q.dim();
    let field = kappa.field();
    let mut out = Vec::new();
    for g in 0..group.order() {
        for h_el in group.elements() {
            let h = h_el.id;
            let c = group.conjugate(h, g);
            for i in 0..n {
                for j in i + 1..n {
                    let (lhs_c, lhs_l) = kappa.basis(g, j, i, q);
                    let lhs_l = h_el.act(&lhs_l);
                    let mut rhs_c = field.zero();
                    let mut rhs_l = vec![field.zero(); n];
                    for k in 0..n {
                        for l in k + 1..n {
                            let d = h_el.qminor(i, j, k, l, q);
                            if d.is_zero() {
                                continue;
                            }
                            let (kc, kl) = kappa.basis(c, l, k, q);
                            rhs_c += &(&d * &kc);
                            axpy(&mut rhs_l, &d, &kl);
                        }
                    }
                    let witness = Witness {
                        g: Some(g),
                        h: Some(h),
                        i: Some(i),
                        j: Some(j),
                        ..Witness::default()
                    };
                    let rc = lhs_c - rhs_c;
                    if !rc.is_zero() {
                        out.push(Violation {
                            condition: Condition::C1Const,
                            witness: witness.clone(),
                            residual: Residual::Scalar(rc),
                        });
                    }
                    let rl: Vec<_> = lhs_l.iter().zip(&rhs_l).map(|(a, b)| a - b).collect();
                    if rl.iter().any(|x| !x.is_zero()) {
                        out.push(Violation {
                            condition: Condition::C1Lin,
                            witness,
                            residual: Residual::Vector(rl),
                        });
                    }
                }
            }
        }
    }
    out
}

fn distinct_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| {
        (0..n).flat_map(move |j| {
            (0..n)
                .filter(move |&k| i != j && j != k && i != k)
                .map(move |k| (i, j, k))
        })
    })
}

/// Condition (2), evaluated in S_q(V): for all distinct i, j, k and g,
///
/// q_ji q_ki v_i κ^L(v_k,v_j) − κ^L(v_k,v_j) ᵍv_i − q_kj v_j κ^L(v_k,v_i)
/// + q_ji κ^L(v_k,v_i) ᵍv_j + v_k κ^L(v_j,v_i) − q_ki q_kj κ^L(v_j,v_i) ᵍv_k = 0.
pub fn check_condition2(q: &QMatrix, group: &GroupData, kappa: &KappaMap) -> Vec<Violation> {
    let n = q.dim();
    let field = kappa.field();
    let mut out = Vec::new();
    for g_el in group.elements() {
        let g = g_el.id;
        if !kappa.has_linear(g) {
            continue;
        }
        for (i, j, k) in distinct_triples(n) {
            let mut c = vec![vec![field.zero(); n]; n];
            // coefficient · (left ⊗ right)
            let mut add = |coef: &CycScalar, left: &[CycScalar], right: &[CycScalar]| {
                for a in 0..n {
                    if left[a].is_zero() {
                        continue;
                    }
                    let la = coef * &left[a];
                    for b in 0..n {
                        if !right[b].is_zero() {
                            c[a][b] += &(&la * &right[b]);
                        }
                    }
                }
            };
            let one = field.one();
            let minus = field.integer(-1);
            let (vi, vj, vk) = (basis_vector(q, i), basis_vector(q, j), basis_vector(q, k));
            let (gi, gj, gk) = (
                g_el.image_of_basis(i),
                g_el.image_of_basis(j),
                g_el.image_of_basis(k),
            );
            let l_kj = kappa.basis_linear(g, k, j, q);
            let l_ki = kappa.basis_linear(g, k, i, q);
            let l_ji = kappa.basis_linear(g, j, i, q);
            add(&(q.get(j, i) * q.get(k, i)), &vi, &l_kj);
            add(&minus, &l_kj, &gi);
            add(&-q.get(k, j), &vj, &l_ki);
            add(q.get(j, i), &l_ki, &gj);
            add(&one, &vk, &l_ji);
            add(&-(q.get(k, i) * q.get(k, j)), &l_ji, &gk);
            let reduced = reduce_quadratic(q, &c);
            if reduced.is_empty() {
                continue;
            }
            let mut residual = FreeElement::zero();
            for ((a, b), x) in reduced {
                residual.add_term(Word(vec![Letter::V(a), Letter::V(b)]), x);
            }
            out.push(Violation {
                condition: Condition::C2,
                witness: Witness {
                    g: Some(g),
                    i: Some(i),
                    j: Some(j),
                    k: Some(k),
                    ..Witness::default()
                },
                residual: Residual::Element(residual),
            });
        }
    }
    out
}

/// Which h contribute to the sums in conditions (3) and (4).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HSum {
    /// Every h ∈ G.
    All,
    /// Only h with κ_h^L ≠ 0 and κ_{gh⁻¹} ≠ 0; all other summands vanish.
    Pruned,
}

/// Σ_h of the six cyclic terms for one (g, i, j, k); returns (C-part, L-part)
/// where each term is κ_{gh⁻¹}(·, ·) evaluated on vectors built from κ_h^L.
fn cyclic_h_sum(
    q: &QMatrix,
    group: &GroupData,
    kappa: &KappaMap,
    g: usize,
    (i, j, k): (usize, usize, usize),
    hsum: HSum,
) -> (CycScalar, Vec<CycScalar>) {
    let n = q.dim();
    let field = kappa.field();
    let mut acc_c = field.zero();
    let mut acc_l = vec![field.zero(); n];
    let (vi, vj, vk) = (basis_vector(q, i), basis_vector(q, j), basis_vector(q, k));
    let qij_qik = q.get(i, j) * q.get(i, k);
    let qik_qjk = q.get(i, k) * q.get(j, k);
    let one = field.one();
    for h_el in group.elements() {
        let h = h_el.id;
        let outer = group.mul(g, group.inverse(h));
        if hsum == HSum::Pruned && !(kappa.has_linear(h) && kappa.support().contains(&outer)) {
            continue;
        }
        let l_jk = kappa.basis_linear(h, j, k, q);
        let l_ki = kappa.basis_linear(h, k, i, q);
        let l_ij = kappa.basis_linear(h, i, j, q);
        let (hi, hj, hk) = (
            h_el.image_of_basis(i),
            h_el.image_of_basis(j),
            h_el.image_of_basis(k),
        );
        let terms: [(&CycScalar, &[CycScalar], &[CycScalar], bool); 6] = [
            (&qij_qik, &l_jk, &hi, false),
            (&one, &vi, &l_jk, true),
            (&qik_qjk, &l_ki, &hj, false),
            (&qij_qik, &vj, &l_ki, true),
            (&one, &l_ij, &hk, false),
            (&qik_qjk, &vk, &l_ij, true),
        ];
        for (coef, x, y, negate) in terms {
            let (c, l) = kappa.eval(outer, x, y, q);
            let coef = if negate { -coef } else { coef.clone() };
            acc_c += &(&coef * &c);
            axpy(&mut acc_l, &coef, &l);
        }
    }
    (acc_c, acc_l)
}

/// Condition (3) with an explicit choice of h-range.
pub fn check_condition3_with(
    q: &QMatrix,
    group: &GroupData,
    kappa: &KappaMap,
    hsum: HSum,
) -> Vec<Violation> {
    let n = q.dim();
    let field = kappa.field();
    let mut out = Vec::new();
    for g_el in group.elements() {
        let g = g_el.id;
        for (i, j, k) in distinct_triples(n) {
            let (_, lhs) = cyclic_h_sum(q, group, kappa, g, (i, j, k), hsum);
            // 2{κ_g^C(v_j,v_k)(v_i − q_ij q_ik ᵍv_i) + κ_g^C(v_k,v_i)(q_ij q_ik v_j − q_ik q_jk ᵍv_j)
            //   + κ_g^C(v_i,v_j)(q_ik q_jk v_k − ᵍv_k)}
            let mut rhs = vec![field.zero(); n];
            let qij_qik = q.get(i, j) * q.get(i, k);
            let qik_qjk = q.get(i, k) * q.get(j, k);
            let c_jk = kappa.basis_constant(g, j, k, q);
            let c_ki = kappa.basis_constant(g, k, i, q);
            let c_ij = kappa.basis_constant(g, i, j, q);
            let two = field.integer(2);
            if !c_jk.is_zero() {
                rhs[i] += &(&two * &c_jk);
                axpy(
                    &mut rhs,
                    &-(&two * &c_jk * &qij_qik),
                    &g_el.image_of_basis(i),
                );
            }
            if !c_ki.is_zero() {
                rhs[j] += &(&two * &c_ki * &qij_qik);
                axpy(
                    &mut rhs,
                    &-(&two * &c_ki * &qik_qjk),
                    &g_el.image_of_basis(j),
                );
            }
            if !c_ij.is_zero() {
                rhs[k] += &(&two * &c_ij * &qik_qjk);
                axpy(&mut rhs, &-(&two * &c_ij), &g_el.image_of_basis(k));
            }
            let residual: Vec<_> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
            if residual.iter().any(|x| !x.is_zero()) {
                out.push(Violation {
                    condition: Condition::C3,
                    witness: Witness {
                        g: Some(g),
                        i: Some(i),
                        j: Some(j),
                        k: Some(k),
                        ..Witness::default()
                    },
                    residual: Residual::Vector(residual),
                });
            }
        }
    }
    out
}

/// Condition (3): the κ^L ∘ κ^L sum equals twice the κ^C correction, in V.
pub fn check_condition3(q: &QMatrix, group: &GroupData, kappa: &KappaMap) -> Vec<Violation> {
    check_condition3_with(q, group, kappa, HSum::Pruned)
}

/// Condition (4) with an explicit choice of h-range.
pub fn check_condition4_with(
    q: &QMatrix,
    group: &GroupData,
    kappa: &KappaMap,
    hsum: HSum,
) -> Vec<Violation> {
    let n = q.dim();
    let mut out = Vec::new();
    for g in 0..group.order() {
        for (i, j, k) in distinct_triples(n) {
            let (value, _) = cyclic_h_sum(q, group, kappa, g, (i, j, k), hsum);
            if !value.is_zero() {
                out.push(Violation {
                    condition: Condition::C4,
                    witness: Witness {
                        g: Some(g),
                        i: Some(i),
                        j: Some(j),
                        k: Some(k),
                        ..Witness::default()
                    },
                    residual: Residual::Scalar(value),
                });
            }
        }
    }
    out
}

/// Condition (4): the κ^C ∘ κ^L sum vanishes.
pub fn check_condition4(q: &QMatrix, group: &GroupData, kappa: &KappaMap) -> Vec<Violation> {
    check_condition4_with(q, group, kappa, HSum::Pruned)
}

/// Evaluates conditions (1)–(4). Fails if the action is not q-compatible or κ
/// is malformed.
pub fn check_pbw_theorem(
    q: &QMatrix,
    group: &GroupData,
    kappa: &KappaMap,
) -> Result<PbwReport, SystemError> {
    // same preconditions as the rewriting system
    ReductionSystem::new(q, group, kappa)?;
    let n = q.dim();
    let m = group.order();
    let pairs = n * n.saturating_sub(1) / 2;
    let triples = n * n.saturating_sub(1) * n.saturating_sub(2);
    let mut violations = check_condition1(q, group, kappa);
    violations.extend(check_condition2(q, group, kappa));
    violations.extend(check_condition3(q, group, kappa));
    violations.extend(check_condition4(q, group, kappa));
    let statistics = BTreeMap::from([
        (Condition::C1Const, m * m * pairs),
        (Condition::C1Lin, m * m * pairs),
        (Condition::C2, m * triples),
        (Condition::C3, m * triples),
        (Condition::C4, m * triples),
    ]);
    Ok(PbwReport::new(Provenance::Theorem, violations, statistics))
}

/// Resolves every overlap ambiguity of the reduction system; PBW iff all resolve.
pub fn check_pbw_oracle(
    q: &QMatrix,
    group: &GroupData,
    kappa: &KappaMap,
) -> Result<PbwReport, SystemError> {
    let system = ReductionSystem::new(q, group, kappa)?;
    Ok(oracle_report(&system))
}

pub fn oracle_report(system: &ReductionSystem<'_>) -> PbwReport {
    let overlaps = system.enumerate_overlaps();
    let mut violations = Vec::new();
    for w in &overlaps {
        if let Resolution::Obstruction(diff) = system.resolve_overlap(w) {
            violations.push(Violation {
                condition: Condition::Overlap,
                witness: overlap_witness(w),
                residual: Residual::Element(diff),
            });
        }
    }
    let statistics = BTreeMap::from([(Condition::Overlap, overlaps.len())]);
    PbwReport::new(Provenance::Oracle, violations, statistics)
}

/// Names the indices of an overlap word: t_g t_h t_k, t_g t_h v_i, t_h v_j v_i or v_k v_j v_i.
fn overlap_witness(w: &Word) -> Witness {
    let mut witness = Witness {
        word: Some(w.clone()),
        ..Witness::default()
    };
    match *w.letters() {
        [Letter::T(g), Letter::T(h), Letter::T(k)] => {
            witness.g = Some(g);
            witness.h = Some(h);
            // third group element stored as k
            witness.k = Some(k);
        }
        [Letter::T(g), Letter::T(h), Letter::V(i)] => {
            witness.g = Some(g);
            witness.h = Some(h);
            witness.i = Some(i);
        }
        [Letter::T(h), Letter::V(j), Letter::V(i)] => {
            witness.h = Some(h);
            witness.j = Some(j);
            witness.i = Some(i);
        }
        [Letter::V(k), Letter::V(j), Letter::V(i)] => {
            witness.k = Some(k);
            witness.j = Some(j);
            witness.i = Some(i);
        }
        _ => {}
    }
    witness
}

/// Both reports side by side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub theorem: PbwReport,
    pub oracle: PbwReport,
}

impl CrossCheck {
    pub fn agree(&self) -> bool {
        self.theorem.verdict == self.oracle.verdict
    }
}

pub fn cross_check(
    q: &QMatrix,
    group: &GroupData,
    kappa: &KappaMap,
) -> Result<CrossCheck, SystemError> {
    Ok(CrossCheck {
        theorem: check_pbw_theorem(q, group, kappa)?,
        oracle: check_pbw_oracle(q, group, kappa)?,
    })
}

/// Number of distinct normal monomials appearing in the normal forms of all
/// words with at most `degree` v-letters and length at most `degree + 1`.
/// Bare monomials are identified with the same monomial times t_e.
///
/// On a PBW instance this is |G| · C(n + degree, degree).
pub fn normal_form_basis_count(system: &ReductionSystem<'_>, degree: usize) -> usize {
    let n = system.dim();
    let m = system.group().order();
    let field = system.field();
    let alphabet: Vec<Letter> = (0..n).map(Letter::V).chain((0..m).map(Letter::T)).collect();
    let mut seen = alloc::collections::BTreeSet::new();
    let mut layer = vec![Word::empty()];
    for len in 0..=degree + 1 {
        for w in &layer {
            if w.v_count() > degree {
                continue;
            }
            let nf = system.normal_form(&FreeElement::word(w.clone(), field));
            for (word, _) in nf.terms() {
                let mut word = word.clone();
                if !matches!(word.letters().last(), Some(Letter::T(_))) {
                    word.0.push(Letter::T(0));
                }
                seen.insert(word);
            }
        }
        if len == degree + 1 {
            break;
        }
        layer = layer
            .iter()
            .filter(|w| w.v_count() <= degree)
            .flat_map(|w| alphabet.iter().map(move |l| w.concat(&Word(vec![*l]))))
            .collect();
    }
    seen.len()
}
