//! The deformation parameter κ, split per group element into a constant
//! part κ_g^C(v_i, v_j) ∈ k and a linear part κ_g^L(v_i, v_j) ∈ V.
//!
//! Only pairs i < j are stored. Values on the lower triangle come from
//! κ(v_j, v_i) = −q_ji κ(v_i, v_j), and the diagonal is zero.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::field::{CycField, CycScalar};
use crate::group::{GroupData, QMatrix};

/// κ_g(v_i, v_j) for one stored triple (g, i, j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaEntry {
    pub constant: CycScalar,
    /// Coefficients C_m of κ_g^L(v_i, v_j) = Σ_m C_m v_m.
    pub linear: Vec<CycScalar>,
}

impl KappaEntry {
    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.iter().all(CycScalar::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KappaViolation {
    /// A stored entry with i ≥ j.
    NonCanonical {
        g: usize,
        i: usize,
        j: usize,
    },
    IndexOutOfRange {
        g: usize,
        i: usize,
        j: usize,
    },
    UnknownGroupElement {
        g: usize,
    },
    LinearLength {
        g: usize,
        i: usize,
        j: usize,
        len: usize,
    },
    /// κ, q or G disagree on n or on the field.
    Dimension {
        expected: usize,
        found: usize,
    },
    FieldMismatch {
        g: usize,
        i: usize,
        j: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaMap {
    n: usize,
    field: CycField,
    entries: BTreeMap<(usize, usize, usize), KappaEntry>,
}

impl KappaMap {
    pub fn new(field: &CycField, n: usize) -> Self {
        KappaMap {
            n,
            field: field.clone(),
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &CycField {
        &self.field
    }

    /// Stores κ_g(v_i, v_j). Zero entries are dropped; nothing else is
    /// checked here, see [`KappaMap::validate`].
    pub fn insert(
        &mut self,
        g: usize,
        i: usize,
        j: usize,
        constant: CycScalar,
        linear: Vec<CycScalar>,
    ) {
        let entry = KappaEntry { constant, linear };
        if entry.is_zero() {
            self.entries.remove(&(g, i, j));
        } else {
            self.entries.insert((g, i, j), entry);
        }
    }

    pub fn set_constant(&mut self, g: usize, i: usize, j: usize, value: CycScalar) {
        let linear = self
            .entries
            .get(&(g, i, j))
            .map(|e| e.linear.clone())
            .unwrap_or_else(|| alloc::vec![self.field.zero(); self.n]);
        self.insert(g, i, j, value, linear);
    }

    pub fn set_linear(&mut self, g: usize, i: usize, j: usize, value: Vec<CycScalar>) {
        let constant = self
            .entries
            .get(&(g, i, j))
            .map(|e| e.constant.clone())
            .unwrap_or_else(|| self.field.zero());
        self.insert(g, i, j, constant, value);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &KappaEntry)> {
        self.entries.iter()
    }

    pub fn get(&self, g: usize, i: usize, j: usize) -> Option<&KappaEntry> {
        self.entries.get(&(g, i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Group ids with κ_g ≠ 0.
    pub fn support(&self) -> BTreeSet<usize> {
        self.entries.keys().map(|&(g, _, _)| g).collect()
    }

    pub fn has_constant(&self, g: usize) -> bool {
        self.entries
            .range((g, 0, 0)..(g + 1, 0, 0))
            .any(|(_, e)| !e.constant.is_zero())
    }

    pub fn has_linear(&self, g: usize) -> bool {
        self.entries
            .range((g, 0, 0)..(g + 1, 0, 0))
            .any(|(_, e)| e.linear.iter().any(|c| !c.is_zero()))
    }

    /// κ_g(v_a, v_b) for basis vectors, as (constant, linear), using the
    /// antisymmetry rule below the diagonal.
    pub fn basis(&self, g: usize, a: usize, b: usize, q: &QMatrix) -> (CycScalar, Vec<CycScalar>) {
        let zero = || (self.field.zero(), alloc::vec![self.field.zero(); self.n]);
        if a == b {
            return zero();
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let Some(entry) = self.entries.get(&(g, lo, hi)) else {
            return zero();
        };
        let mut linear = alloc::vec![self.field.zero(); self.n];
        for (slot, c) in linear.iter_mut().zip(&entry.linear) {
            *slot = c.clone();
        }
        if a < b {
            return (entry.constant.clone(), linear);
        }
        let factor = -q.get(a, b);
        let linear = linear.iter().map(|c| &factor * c).collect();
        (&factor * &entry.constant, linear)
    }

    pub fn basis_constant(&self, g: usize, a: usize, b: usize, q: &QMatrix) -> CycScalar {
        self.basis(g, a, b, q).0
    }

    pub fn basis_linear(&self, g: usize, a: usize, b: usize, q: &QMatrix) -> Vec<CycScalar> {
        self.basis(g, a, b, q).1
    }

    /// (κ_g^C(x, y), κ_g^L(x, y)) by bilinear extension.
    pub fn eval(
        &self,
        g: usize,
        x: &[CycScalar],
        y: &[CycScalar],
        q: &QMatrix,
    ) -> (CycScalar, Vec<CycScalar>) {
        let mut constant = self.field.zero();
        let mut linear = alloc::vec![self.field.zero(); self.n];
        for (&(_, i, j), entry) in self.entries.range((g, 0, 0)..(g + 1, 0, 0)) {
            if i >= j || j >= self.n {
                continue;
            }
            // x_i y_j κ(v_i, v_j) + x_j y_i κ(v_j, v_i) = (x_i y_j − q_ji x_j y_i) κ(v_i, v_j)
            let w = &x[i] * &y[j] - q.get(j, i) * &(&x[j] * &y[i]);
            if w.is_zero() {
                continue;
            }
            constant += &(&w * &entry.constant);
            for (slot, c) in linear.iter_mut().zip(&entry.linear) {
                *slot += &(&w * c);
            }
        }
        (constant, linear)
    }

    pub fn eval_constant(
        &self,
        g: usize,
        x: &[CycScalar],
        y: &[CycScalar],
        q: &QMatrix,
    ) -> CycScalar {
        self.eval(g, x, y, q).0
    }

    pub fn eval_linear(
        &self,
        g: usize,
        x: &[CycScalar],
        y: &[CycScalar],
        q: &QMatrix,
    ) -> Vec<CycScalar> {
        self.eval(g, x, y, q).1
    }

    /// Structural checks against (G, q). An empty result means κ is well formed.
    pub fn validate(&self, group: &GroupData, q: &QMatrix) -> Vec<KappaViolation> {
        let mut out = Vec::new();
        for found in [q.dim(), group.dim()] {
            if found != self.n {
                out.push(KappaViolation::Dimension {
                    expected: self.n,
                    found,
                });
            }
        }
        let mut unknown = BTreeSet::new();
        for (&(g, i, j), entry) in &self.entries {
            if g >= group.order() && unknown.insert(g) {
                out.push(KappaViolation::UnknownGroupElement { g });
            }
            if i >= self.n || j >= self.n {
                out.push(KappaViolation::IndexOutOfRange { g, i, j });
            } else if i >= j {
                out.push(KappaViolation::NonCanonical { g, i, j });
            }
            if entry.linear.len() != self.n {
                out.push(KappaViolation::LinearLength {
                    g,
                    i,
                    j,
                    len: entry.linear.len(),
                });
            }
            let f = &self.field;
            if entry.constant.field() != f || entry.linear.iter().any(|c| c.field() != f) {
                out.push(KappaViolation::FieldMismatch { g, i, j });
            }
        }
        out
    }
}
