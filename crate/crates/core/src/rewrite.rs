//! The free algebra k⟨X⟩ on X = {v_1, …, v_n} ∪ {t_g : g ∈ G} and the
//! reduction system
//!
//! ```text
//!   t_g v_i  →  ᵍv_i t_g
//!   t_g t_h  →  t_{gh}
//!   v_j v_i  →  q_ji v_i v_j + κ(v_j, v_i)        (i < j)
//! ```
//!
//! whose irreducible words are v_1^{m_1} ⋯ v_n^{m_n} t_g (and the bare
//! v_1^{m_1} ⋯ v_n^{m_n}). Overlap ambiguities are resolved by reducing both
//! branches to normal form and comparing.
//!
//! Monomial order: words are compared by number of v-letters, then number
//! of t-letters, then position by position with v_1 < ⋯ < v_n < every t_g.
//! Every rule strictly decreases it, and it satisfies the descending chain
//! condition because the alphabet is finite.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::field::{CycField, CycScalar};
use crate::group::{check_q_compatibility, CompatibilityViolation, GroupData, QMatrix};
use crate::kappa::{KappaMap, KappaViolation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    V(usize),
    T(usize),
}

impl Letter {
    /// Letter order at the positionwise stage: v's by index, then every t
    /// above every v. Distinct t's are incomparable.
    fn partial_cmp_letter(&self, other: &Letter) -> Option<Ordering> {
        match (self, other) {
            (Letter::V(a), Letter::V(b)) => Some(a.cmp(b)),
            (Letter::V(_), Letter::T(_)) => Some(Ordering::Less),
            (Letter::T(_), Letter::V(_)) => Some(Ordering::Greater),
            (Letter::T(a), Letter::T(b)) if a == b => Some(Ordering::Equal),
            (Letter::T(_), Letter::T(_)) => None,
        }
    }

    fn total_key(&self) -> (u8, usize) {
        match *self {
            Letter::V(i) => (0, i),
            Letter::T(g) => (1, g),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::V(i) => write!(f, "v{}", i + 1),
            Letter::T(g) => write!(f, "t.g{}", g),
        }
    }
}

/// A word in the free semigroup ⟨X⟩. The empty word is the unit.
///
/// `Ord` is a total order extending the monomial order (t's are ranked by
/// group id where the monomial order leaves them incomparable).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn v_count(&self) -> usize {
        self.0.iter().filter(|l| matches!(l, Letter::V(_))).count()
    }

    pub fn t_count(&self) -> usize {
        self.0.len() - self.v_count()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Positions p where a rule applies to letters p, p+1.
    pub fn redex_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .windows(2)
            .enumerate()
            .filter_map(|(p, w)| match (w[0], w[1]) {
                (Letter::T(_), _) => Some(p),
                (Letter::V(j), Letter::V(i)) if j > i => Some(p),
                _ => None,
            })
    }

    pub fn is_irreducible(&self) -> bool {
        self.redex_positions().next().is_none()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.v_count()
            .cmp(&other.v_count())
            .then_with(|| self.t_count().cmp(&other.t_count()))
            .then_with(|| {
                self.0
                    .iter()
                    .map(Letter::total_key)
                    .cmp(other.0.iter().map(Letter::total_key))
            })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut iter = self.0.iter().peekable();
        while let Some(l) = iter.next() {
            let mut power = 1;
            while iter.peek() == Some(&l) {
                iter.next();
                power += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{}", l)?;
            if power > 1 {
                write!(f, "^{}", power)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordOrdering {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// The monomial order used by the reduction system.
pub fn order_compare(a: &Word, b: &Word) -> WordOrdering {
    let counts = a
        .v_count()
        .cmp(&b.v_count())
        .then_with(|| a.t_count().cmp(&b.t_count()));
    let ord = match counts {
        Ordering::Equal => {
            // equal counts imply equal lengths
            let mut result = Some(Ordering::Equal);
            for (x, y) in a.0.iter().zip(&b.0) {
                match x.partial_cmp_letter(y) {
                    Some(Ordering::Equal) => continue,
                    other => {
                        result = other;
                        break;
                    }
                }
            }
            result
        }
        other => Some(other),
    };
    match ord {
        Some(Ordering::Less) => WordOrdering::Less,
        Some(Ordering::Equal) => WordOrdering::Equal,
        Some(Ordering::Greater) => WordOrdering::Greater,
        None => WordOrdering::Incomparable,
    }
}

/// v_1^{m_1} ⋯ v_n^{m_n} t_g, or the bare monomial when `group` is `None`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalMonomial {
    pub exponents: Vec<usize>,
    pub group: Option<usize>,
}

impl NormalMonomial {
    pub fn from_word(word: &Word, n: usize) -> Option<Self> {
        let mut exponents = alloc::vec![0; n];
        let mut group = None;
        let mut last_v = 0;
        for (p, l) in word.0.iter().enumerate() {
            match *l {
                Letter::V(i) => {
                    if group.is_some() || i < last_v || i >= n {
                        return None;
                    }
                    last_v = i;
                    exponents[i] += 1;
                }
                Letter::T(g) => {
                    if p + 1 != word.len() {
                        return None;
                    }
                    group = Some(g);
                }
            }
        }
        Some(NormalMonomial { exponents, group })
    }

    pub fn to_word(&self) -> Word {
        let mut letters = Vec::new();
        for (i, &m) in self.exponents.iter().enumerate() {
            letters.extend(core::iter::repeat_n(Letter::V(i), m));
        }
        if let Some(g) = self.group {
            letters.push(Letter::T(g));
        }
        Word(letters)
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().sum()
    }
}

/// A finite linear combination of words with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeElement {
    terms: BTreeMap<Word, CycScalar>,
}

impl FreeElement {
    pub fn zero() -> Self {
        FreeElement::default()
    }

    pub fn scalar(c: CycScalar) -> Self {
        Self::term(Word::empty(), c)
    }

    pub fn term(word: Word, c: CycScalar) -> Self {
        let mut e = FreeElement::zero();
        e.add_term(word, c);
        e
    }

    pub fn word(word: Word, field: &CycField) -> Self {
        Self::term(word, field.one())
    }

    pub fn letter(letter: Letter, field: &CycField) -> Self {
        Self::word(Word(alloc::vec![letter]), field)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &CycScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &Word) -> Option<&CycScalar> {
        self.terms.get(word)
    }

    pub fn add_term(&mut self, word: Word, c: CycScalar) {
        add_into(&mut self.terms, word, &c);
    }

    pub fn scale(&self, c: &CycScalar) -> FreeElement {
        if c.is_zero() {
            return FreeElement::zero();
        }
        FreeElement {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Highest degree in the v-letters.
    pub fn v_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::v_count).max()
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(Word::is_irreducible)
    }

    /// Terms in rendering order: normal monomials by group id (bare first),
    /// then exponent vector; any reducible words afterwards in storage order.
    pub fn sorted_terms(&self) -> Vec<(&Word, &CycScalar)> {
        let mut normal = Vec::new();
        let mut other = Vec::new();
        for (w, c) in &self.terms {
            let n = w.0.iter().filter_map(|l| match l {
                Letter::V(i) => Some(i + 1),
                _ => None,
            });
            let n = n.max().unwrap_or(0);
            match NormalMonomial::from_word(w, n) {
                Some(m) => normal.push(((m.group, m.exponents), (w, c))),
                None => other.push((w, c)),
            }
        }
        normal.sort_by(|a, b| {
            let (ga, ea) = &a.0;
            let (gb, eb) = &b.0;
            // pad exponent vectors so different lengths compare lexicographically
            let len = ea.len().max(eb.len());
            let pad = |e: &Vec<usize>| {
                let mut e = e.clone();
                e.resize(len, 0);
                e
            };
            ga.cmp(gb).then_with(|| pad(ea).cmp(&pad(eb)))
        });
        normal.into_iter().map(|(_, t)| t).chain(other).collect()
    }
}

fn add_into(terms: &mut BTreeMap<Word, CycScalar>, word: Word, c: &CycScalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(word) {
        alloc::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        alloc::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl Add for &FreeElement {
    type Output = FreeElement;
    fn add(self, rhs: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            add_into(&mut out.terms, w.clone(), c);
        }
        out
    }
}

impl Neg for &FreeElement {
    type Output = FreeElement;
    fn neg(self) -> FreeElement {
        FreeElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Sub for &FreeElement {
    type Output = FreeElement;
    fn sub(self, rhs: &FreeElement) -> FreeElement {
        self + &(-rhs)
    }
}

/// Concatenation product in k⟨X⟩.
impl Mul for &FreeElement {
    type Output = FreeElement;
    fn mul(self, rhs: &FreeElement) -> FreeElement {
        let mut out = FreeElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                add_into(&mut out.terms, a.concat(b), &(x * y));
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for FreeElement {
            type Output = FreeElement;
            fn $method(self, rhs: FreeElement) -> FreeElement {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for FreeElement {
    type Output = FreeElement;
    fn neg(self) -> FreeElement {
        -&self
    }
}

/// Renders in the expression syntax, e.g. `v1^2*t.g1 - 1/2 * v2`.
impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (w, c)) in terms.into_iter().enumerate() {
            let (neg, mag) = if c.is_negative_monomial() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let compound = mag.term_count() > 1;
            if w.is_empty() {
                if compound && idx > 0 {
                    write!(f, "({})", mag)?;
                } else {
                    write!(f, "{}", mag)?;
                }
            } else if mag.is_one() {
                write!(f, "{}", w)?;
            } else if compound {
                write!(f, "({}) * {}", mag, w)?;
            } else {
                write!(f, "{} * {}", mag, w)?;
            }
        }
        Ok(())
    }
}

/// Which redex to rewrite when a word has several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
    Random(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("group element g{} does not act by automorphisms of S_q(V)", .0[0].g)]
    Incompatible(Vec<CompatibilityViolation>),
    #[error("kappa is malformed ({} problems)", .0.len())]
    InvalidKappa(Vec<KappaViolation>),
    #[error("dimensions disagree: q has n = {q}, group has n = {group}")]
    Dimension { q: usize, group: usize },
    #[error("rule {lhs} -> ... produces {rhs}, which is not smaller")]
    NotDecreasing { lhs: Word, rhs: Word },
}

/// Outcome of resolving one overlap ambiguity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    Resolvable,
    /// Normal form of the left-first branch minus the right-first branch.
    Obstruction(FreeElement),
}

/// The reduction system determined by (q, G, κ).
#[derive(Debug, Clone)]
pub struct ReductionSystem<'a> {
    q: &'a QMatrix,
    group: &'a GroupData,
    kappa: &'a KappaMap,
    field: CycField,
    /// (g, i) ↦ nonzero (m, g_m^i).
    action: Vec<Vec<Vec<(usize, CycScalar)>>>,
    /// (j, i) with j > i ↦ right-hand side of v_j v_i.
    swaps: BTreeMap<(usize, usize), Vec<(Word, CycScalar)>>,
}

impl<'a> ReductionSystem<'a> {
    /// Validates the data (q-compatible action, well-formed κ) and checks
    /// that every rule strictly decreases the monomial order.
    pub fn new(
        q: &'a QMatrix,
        group: &'a GroupData,
        kappa: &'a KappaMap,
    ) -> Result<Self, SystemError> {
        if q.dim() != group.dim() {
            return Err(SystemError::Dimension {
                q: q.dim(),
                group: group.dim(),
            });
        }
        let incompatible: Vec<_> = group
            .elements()
            .iter()
            .flat_map(|g| check_q_compatibility(g, q))
            .collect();
        if !incompatible.is_empty() {
            return Err(SystemError::Incompatible(incompatible));
        }
        let problems = kappa.validate(group, q);
        if !problems.is_empty() {
            return Err(SystemError::InvalidKappa(problems));
        }
        let n = q.dim();
        let field = kappa.field().clone();
        let action = group
            .elements()
            .iter()
            .map(|g| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&m| !g.entry(m, i).is_zero())
                            .map(|m| (m, g.entry(m, i).clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut swaps = BTreeMap::new();
        for j in 0..n {
            for i in 0..j {
                let mut rhs = BTreeMap::new();
                add_into(
                    &mut rhs,
                    Word(alloc::vec![Letter::V(i), Letter::V(j)]),
                    q.get(j, i),
                );
                for g in kappa.support() {
                    let (c, lin) = kappa.basis(g, j, i, q);
                    add_into(&mut rhs, Word(alloc::vec![Letter::T(g)]), &c);
                    for (m, x) in lin.iter().enumerate() {
                        add_into(&mut rhs, Word(alloc::vec![Letter::V(m), Letter::T(g)]), x);
                    }
                }
                swaps.insert((j, i), rhs.into_iter().collect());
            }
        }
        let system = ReductionSystem {
            q,
            group,
            kappa,
            field,
            action,
            swaps,
        };
        system.check_rules()?;
        Ok(system)
    }

    fn check_rules(&self) -> Result<(), SystemError> {
        let n = self.q.dim();
        let mut lhs_words = Vec::new();
        for g in 0..self.group.order() {
            for i in 0..n {
                lhs_words.push(Word(alloc::vec![Letter::T(g), Letter::V(i)]));
            }
            for h in 0..self.group.order() {
                lhs_words.push(Word(alloc::vec![Letter::T(g), Letter::T(h)]));
            }
        }
        for &(j, i) in self.swaps.keys() {
            lhs_words.push(Word(alloc::vec![Letter::V(j), Letter::V(i)]));
        }
        for lhs in lhs_words {
            for (rhs, _) in self.rewrite_at(&lhs, 0) {
                if order_compare(&rhs, &lhs) != WordOrdering::Less {
                    return Err(SystemError::NotDecreasing { lhs, rhs });
                }
            }
        }
        Ok(())
    }

    pub fn q(&self) -> &QMatrix {
        self.q
    }

    pub fn group(&self) -> &GroupData {
        self.group
    }

    pub fn kappa(&self) -> &KappaMap {
        self.kappa
    }

    pub fn field(&self) -> &CycField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    /// One rewriting step at position `pos` (which must be a redex).
    /// Returns the resulting terms, coefficients relative to the input word.
    pub fn rewrite_at(&self, word: &Word, pos: usize) -> Vec<(Word, CycScalar)> {
        let letters = &word.0;
        let prefix = &letters[..pos];
        let suffix = &letters[pos + 2..];
        let wrap = |middle: &[Letter]| {
            let mut w = Vec::with_capacity(prefix.len() + middle.len() + suffix.len());
            w.extend_from_slice(prefix);
            w.extend_from_slice(middle);
            w.extend_from_slice(suffix);
            Word(w)
        };
        match (letters[pos], letters[pos + 1]) {
            (Letter::T(g), Letter::V(i)) => self.action[g][i]
                .iter()
                .map(|(m, c)| (wrap(&[Letter::V(*m), Letter::T(g)]), c.clone()))
                .collect(),
            (Letter::T(g), Letter::T(h)) => {
                alloc::vec![(wrap(&[Letter::T(self.group.mul(g, h))]), self.field.one())]
            }
            (Letter::V(j), Letter::V(i)) if j > i => self.swaps[&(j, i)]
                .iter()
                .map(|(w, c)| (wrap(&w.0), c.clone()))
                .collect(),
            _ => panic!("no rule applies at position {pos} of {word}"),
        }
    }

    /// Reduces to normal form, choosing among redexes by `strategy`.
    pub fn reduce(&self, element: &FreeElement, strategy: Strategy) -> FreeElement {
        let mut rng = match strategy {
            Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut pending = element.terms.clone();
        let mut done = FreeElement::zero();
        // Every rewrite only produces smaller words, so taking the largest
        // pending word first merges like terms before they are expanded.
        while let Some((word, coeff)) = pending.pop_last() {
            let redexes: Vec<usize> = word.redex_positions().collect();
            let pos = match (redexes.len(), strategy) {
                (0, _) => {
                    done.add_term(word, coeff);
                    continue;
                }
                (_, Strategy::Leftmost) => redexes[0],
                (len, Strategy::Rightmost) => redexes[len - 1],
                (len, Strategy::Random(_)) => {
                    let r = rng.as_mut().unwrap().next_u64();
                    redexes[(r % len as u64) as usize]
                }
            };
            for (w, c) in self.rewrite_at(&word, pos) {
                debug_assert_eq!(order_compare(&w, &word), WordOrdering::Less);
                add_into(&mut pending, w, &(&coeff * &c));
            }
        }
        done
    }

    pub fn normal_form(&self, element: &FreeElement) -> FreeElement {
        self.reduce(element, Strategy::Leftmost)
    }

    /// All overlap words: t_g t_h t_k, t_g t_h v_i, t_h v_j v_i and
    /// v_k v_j v_i with i < j < k.
    pub fn enumerate_overlaps(&self) -> Vec<Word> {
        let n = self.dim();
        let m = self.group.order();
        let mut out = Vec::with_capacity(m * m * m + m * m * n + m * n * n + n * n * n);
        for g in 0..m {
            for h in 0..m {
                for k in 0..m {
                    out.push(Word(alloc::vec![Letter::T(g), Letter::T(h), Letter::T(k)]));
                }
            }
        }
        for g in 0..m {
            for h in 0..m {
                for i in 0..n {
                    out.push(Word(alloc::vec![Letter::T(g), Letter::T(h), Letter::V(i)]));
                }
            }
        }
        for h in 0..m {
            for j in 0..n {
                for i in 0..j {
                    out.push(Word(alloc::vec![Letter::T(h), Letter::V(j), Letter::V(i)]));
                }
            }
        }
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    out.push(Word(alloc::vec![Letter::V(k), Letter::V(j), Letter::V(i)]));
                }
            }
        }
        out
    }

    /// Rewrites the left redex first and, separately, the right redex first,
    /// reduces both to normal form and compares.
    pub fn resolve_overlap(&self, word: &Word) -> Resolution {
        let branch = |pos| {
            let mut e = FreeElement::zero();
            for (w, c) in self.rewrite_at(word, pos) {
                e.add_term(w, c);
            }
            self.normal_form(&e)
        };
        let diff = &branch(0) - &branch(1);
        if diff.is_zero() {
            Resolution::Resolvable
        } else {
            Resolution::Obstruction(diff)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Matrix;
    use alloc::string::ToString;
    use alloc::vec;

    fn v(i: usize) -> Letter {
        Letter::V(i)
    }

    fn t(g: usize) -> Letter {
        Letter::T(g)
    }

    fn word(letters: &[Letter]) -> Word {
        Word(letters.to_vec())
    }

    #[test]
    fn order_examples() {
        assert_eq!(
            order_compare(&word(&[v(1), v(0)]), &word(&[v(0), v(1)])),
            WordOrdering::Greater
        );
        for m in 0..3 {
            assert_eq!(
                order_compare(&word(&[v(m), t(1)]), &word(&[v(2), v(0)])),
                WordOrdering::Less
            );
        }
        assert_eq!(
            order_compare(&word(&[t(1), v(0)]), &word(&[v(2), t(1)])),
            WordOrdering::Greater
        );
        assert_eq!(
            order_compare(&word(&[v(0), t(1)]), &word(&[v(0), t(2)])),
            WordOrdering::Incomparable
        );
        assert_eq!(
            order_compare(&word(&[v(0), t(1)]), &word(&[v(0), t(1)])),
            WordOrdering::Equal
        );
    }

    #[test]
    fn normal_monomials() {
        let w = word(&[v(0), v(0), v(2), t(3)]);
        let m = NormalMonomial::from_word(&w, 3).unwrap();
        assert_eq!(m.exponents, vec![2, 0, 1]);
        assert_eq!(m.group, Some(3));
        assert_eq!(m.to_word(), w);
        assert!(w.is_irreducible());
        assert!(NormalMonomial::from_word(&word(&[v(1), v(0)]), 3).is_none());
        assert!(NormalMonomial::from_word(&word(&[t(0), v(0)]), 3).is_none());
        let bare = word(&[v(1), v(1)]);
        assert_eq!(NormalMonomial::from_word(&bare, 2).unwrap().group, None);
    }

    fn cyclic_setup() -> (CycField, QMatrix, GroupData) {
        let k = CycField::new(3).unwrap();
        let z = k.root_of_unity(1);
        let q = QMatrix::from_upper(
            &k,
            3,
            &[
                (0, 1, z.clone()),
                (0, 2, k.root_of_unity(2)),
                (1, 2, k.integer(-1)),
            ],
        )
        .unwrap();
        let d = Matrix::diagonal(vec![z.clone(), k.root_of_unity(2), k.one()]);
        let g = GroupData::close(&k, 3, &[d], 10).unwrap();
        (k, q, g)
    }

    #[test]
    fn group_rules() {
        let (k, q, g) = cyclic_setup();
        let kappa = KappaMap::new(&k, 3);
        let sys = ReductionSystem::new(&q, &g, &kappa).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let e = FreeElement::word(word(&[t(a), t(b)]), &k);
                let expected = FreeElement::word(word(&[t(g.mul(a, b))]), &k);
                assert_eq!(sys.normal_form(&e), expected);
            }
            for i in 0..3 {
                let e = FreeElement::word(word(&[t(a), v(i)]), &k);
                let mut expected = FreeElement::zero();
                for m in 0..3 {
                    expected.add_term(word(&[v(m), t(a)]), g.element(a).entry(m, i).clone());
                }
                assert_eq!(sys.normal_form(&e), expected);
            }
        }
    }

    #[test]
    fn sorting_three_letters_without_kappa() {
        let (k, q, g) = cyclic_setup();
        let kappa = KappaMap::new(&k, 3);
        let sys = ReductionSystem::new(&q, &g, &kappa).unwrap();
        let e = FreeElement::word(word(&[v(2), v(1), v(0)]), &k);
        let c = q.get(2, 1) * q.get(2, 0) * q.get(1, 0);
        let expected = FreeElement::term(word(&[v(0), v(1), v(2)]), c);
        for s in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(7)] {
            assert_eq!(sys.reduce(&e, s), expected);
        }
    }

    #[test]
    fn overlap_counts() {
        let k = CycField::new(1).unwrap();
        let cases = [(2, 1, 4), (1, 1, 2)];
        for (n, _, expected) in cases {
            let q = QMatrix::trivial(&k, n);
            let g = GroupData::trivial(&k, n);
            let kappa = KappaMap::new(&k, n);
            let sys = ReductionSystem::new(&q, &g, &kappa).unwrap();
            assert_eq!(sys.enumerate_overlaps().len(), expected);
        }
        let q = QMatrix::trivial(&k, 3);
        let minus = Matrix::diagonal(vec![k.integer(-1); 3]);
        let g = GroupData::close(&k, 3, &[minus], 10).unwrap();
        let kappa = KappaMap::new(&k, 3);
        let sys = ReductionSystem::new(&q, &g, &kappa).unwrap();
        assert_eq!(sys.enumerate_overlaps().len(), 27);
    }

    #[test]
    fn overlaps_resolve_without_kappa() {
        let (k, q, g) = cyclic_setup();
        let kappa = KappaMap::new(&k, 3);
        let sys = ReductionSystem::new(&q, &g, &kappa).unwrap();
        for w in sys.enumerate_overlaps() {
            assert_eq!(sys.resolve_overlap(&w), Resolution::Resolvable, "{w}");
        }
    }

    #[test]
    fn incompatible_action_is_rejected() {
        let k = CycField::new(4).unwrap();
        let q = QMatrix::from_upper(&k, 2, &[(0, 1, k.root_of_unity(1))]).unwrap();
        let swap =
            Matrix::from_rows(vec![vec![k.zero(), k.one()], vec![k.one(), k.zero()]]).unwrap();
        let g = GroupData::close(&k, 2, &[swap], 10).unwrap();
        let kappa = KappaMap::new(&k, 2);
        assert!(matches!(
            ReductionSystem::new(&q, &g, &kappa),
            Err(SystemError::Incompatible(_))
        ));
    }

    #[test]
    fn linear_kappa_with_high_index_is_still_decreasing() {
        // κ(v_1, v_2) = v_2: length-then-lex would not orient v_2 v_1 → … + v_2 t_e.
        let k = CycField::new(1).unwrap();
        let q = QMatrix::trivial(&k, 2);
        let g = GroupData::trivial(&k, 2);
        let mut kappa = KappaMap::new(&k, 2);
        kappa.insert(0, 0, 1, k.zero(), vec![k.zero(), k.one()]);
        let sys = ReductionSystem::new(&q, &g, &kappa).unwrap();
        let e = FreeElement::word(word(&[v(1), v(0)]), &k);
        let mut expected = FreeElement::word(word(&[v(0), v(1)]), &k);
        expected.add_term(word(&[v(1), t(0)]), k.integer(-1));
        assert_eq!(sys.normal_form(&e), expected);
    }

    #[test]
    fn display() {
        let k = CycField::new(4).unwrap();
        let mut e = FreeElement::zero();
        e.add_term(word(&[v(0), v(0), t(1)]), k.fraction(1, 2));
        e.add_term(word(&[v(1)]), -k.root_of_unity(1));
        e.add_term(Word::empty(), k.one() + k.root_of_unity(1));
        assert_eq!(e.to_string(), "z + 1 - z * v2 + 1/2 * v1^2*t.g1");
        assert_eq!(FreeElement::zero().to_string(), "0");
    }
}
