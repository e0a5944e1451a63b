//! Finite matrix groups acting on V and the q-commutation data of S_q(V).
//!
//! Indices are 0-based throughout the crate. A group element's matrix has
//! entry `(i, j)` equal to g_i^j, so column j holds the image of v_j:
//! ᵍv_j = Σ_i g_i^j v_i.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use thiserror::Error;

use crate::field::{CycField, CycScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QMatrixError {
    #[error("q matrix must be {n}x{n}")]
    Shape { n: usize },
    #[error("q entries must be nonzero (entry ({i}, {j}))")]
    ZeroEntry { i: usize, j: usize },
    #[error("diagonal q entry ({i}, {i}) must be 1")]
    Diagonal { i: usize },
    #[error("q({j}, {i}) is not the inverse of q({i}, {j})")]
    NotReciprocal { i: usize, j: usize },
    #[error("q index ({i}, {j}) out of range for n = {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
}

/// The commutation scalars q_ij of S_q(V): v_i v_j = q_ij v_j v_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    entries: Vec<CycScalar>,
}

impl QMatrix {
    /// Builds from a full matrix, checking q_ii = 1, nonzero entries and q_ji q_ij = 1.
    pub fn new(rows: Vec<Vec<CycScalar>>) -> Result<Self, QMatrixError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(QMatrixError::Shape { n });
        }
        let entries: Vec<CycScalar> = rows.into_iter().flatten().collect();
        let q = QMatrix { n, entries };
        for i in 0..n {
            for j in 0..n {
                if q.get(i, j).is_zero() {
                    return Err(QMatrixError::ZeroEntry { i, j });
                }
            }
            if !q.get(i, i).is_one() {
                return Err(QMatrixError::Diagonal { i });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if !(q.get(i, j) * q.get(j, i)).is_one() {
                    return Err(QMatrixError::NotReciprocal { i, j });
                }
            }
        }
        Ok(q)
    }

    /// Builds from entries with i < j; unspecified pairs default to 1 and the
    /// lower triangle is filled with inverses.
    pub fn from_upper(
        field: &CycField,
        n: usize,
        upper: &[(usize, usize, CycScalar)],
    ) -> Result<Self, QMatrixError> {
        let mut entries = alloc::vec![field.one(); n * n];
        for (i, j, value) in upper {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(QMatrixError::IndexOutOfRange { i, j, n });
            }
            if i == j {
                if !value.is_one() {
                    return Err(QMatrixError::Diagonal { i });
                }
                continue;
            }
            let inv = value
                .inverse()
                .map_err(|_| QMatrixError::ZeroEntry { i, j })?;
            entries[i * n + j] = value.clone();
            entries[j * n + i] = inv;
        }
        Ok(QMatrix { n, entries })
    }

    /// All q_ij = 1.
    pub fn trivial(field: &CycField, n: usize) -> Self {
        QMatrix {
            n,
            entries: alloc::vec![field.one(); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CycScalar {
        &self.entries[i * self.n + j]
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.iter().all(CycScalar::is_one)
    }
}

/// Reduces a quadratic element Σ c[a][b] v_a v_b of T(V) to the basis
/// {v_a v_b : a ≤ b} of S_q(V)₂, returning the nonzero coefficients.
#[allow(clippy::needless_range_loop)]
pub fn reduce_quadratic(
    q: &QMatrix,
    coeffs: &[Vec<CycScalar>],
) -> BTreeMap<(usize, usize), CycScalar> {
    let n = q.dim();
    let mut out = BTreeMap::new();
    for a in 0..n {
        for b in a..n {
            let c = if a == b {
                coeffs[a][a].clone()
            } else {
                // v_b v_a = q_ba v_a v_b
                &coeffs[a][b] + &(q.get(b, a) * &coeffs[b][a])
            };
            if !c.is_zero() {
                out.insert((a, b), c);
            }
        }
    }
    out
}

/// Square matrix over Q(ζ_N), row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Matrix {
    n: usize,
    entries: Vec<CycScalar>,
}

impl Matrix {
    pub fn identity(field: &CycField, n: usize) -> Self {
        let mut entries = alloc::vec![field.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = field.one();
        }
        Matrix { n, entries }
    }

    /// Builds from rows; returns `None` unless the rows form a square matrix.
    pub fn from_rows(rows: Vec<Vec<CycScalar>>) -> Option<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Matrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(diag: Vec<CycScalar>) -> Self {
        let n = diag.len();
        let field = diag[0].field().clone();
        let mut m = Matrix::identity(&field, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CycScalar {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[CycScalar]> {
        self.entries.chunks(self.n)
    }

    pub fn field(&self) -> &CycField {
        self.entries[0].field()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.field().zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc += &(a * other.get(k, j));
                }
                entries.push(acc);
            }
        }
        Matrix { n, entries }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[CycScalar]) -> Vec<CycScalar> {
        (0..self.n)
            .map(|i| {
                let mut acc = self.field().zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &(self.get(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.n;
        let field = self.field().clone();
        let mut a = self.clone();
        let mut inv = Matrix::identity(&field, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                    inv.entries.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).inverse().ok()?;
            for j in 0..n {
                a.entries[col * n + j] = &a.entries[col * n + j] * &p;
                inv.entries[col * n + j] = &inv.entries[col * n + j] * &p;
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let da = &factor * a.get(col, j);
                    let di = &factor * inv.get(col, j);
                    a.entries[r * n + j] -= &da;
                    inv.entries[r * n + j] -= &di;
                }
            }
        }
        Some(inv)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }
}

/// An element of G with its action matrix (entry `(i, j)` = g_i^j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub id: usize,
    pub matrix: Matrix,
}

impl GroupElement {
    /// g_i^j, the coefficient of v_i in ᵍv_j.
    pub fn entry(&self, i: usize, j: usize) -> &CycScalar {
        self.matrix.get(i, j)
    }

    /// The image of a vector (coordinates in the basis v_1, …, v_n).
    pub fn act(&self, v: &[CycScalar]) -> Vec<CycScalar> {
        self.matrix.apply(v)
    }

    /// ᵍv_j as a coordinate vector.
    pub fn image_of_basis(&self, j: usize) -> Vec<CycScalar> {
        (0..self.matrix.dim())
            .map(|i| self.entry(i, j).clone())
            .collect()
    }

    /// Quantum minor determinant g^j_l g^i_k − q_ji g^i_l g^j_k.
    pub fn qminor(&self, i: usize, j: usize, k: usize, l: usize, q: &QMatrix) -> CycScalar {
        self.entry(l, j) * self.entry(k, i) - q.get(j, i) * &(self.entry(l, i) * self.entry(k, j))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator {index} is singular")]
    SingularGenerator { index: usize },
    #[error("generator {index} is not {n}x{n}")]
    Shape { index: usize, n: usize },
    #[error("group too large: closure exceeds {max_order} elements")]
    TooLarge { max_order: usize },
    #[error("element list is not closed under multiplication")]
    NotClosed,
    #[error("element 0 of an explicit element list must be the identity")]
    IdentityNotFirst,
    #[error("element {index} is singular")]
    SingularElement { index: usize },
    #[error("element {first} and element {second} are equal")]
    Duplicate { first: usize, second: usize },
}

pub const DEFAULT_MAX_ORDER: usize = 1024;

/// A finite matrix group with multiplication and inverse tables.
/// Element 0 is the identity.
#[derive(Debug, Clone)]
pub struct GroupData {
    n: usize,
    elements: Vec<GroupElement>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl GroupData {
    /// The group generated by `generators`, numbered breadth-first from the
    /// identity, trying generators in the order given.
    pub fn close(
        field: &CycField,
        n: usize,
        generators: &[Matrix],
        max_order: usize,
    ) -> Result<Self, GroupError> {
        for (index, g) in generators.iter().enumerate() {
            if g.dim() != n {
                return Err(GroupError::Shape { index, n });
            }
            if g.inverse().is_none() {
                return Err(GroupError::SingularGenerator { index });
            }
        }
        let identity = Matrix::identity(field, n);
        let mut index: BTreeMap<Matrix, usize> = BTreeMap::new();
        let mut elements = alloc::vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            for g in generators {
                let prod = elements[id].mul(g);
                if index.contains_key(&prod) {
                    continue;
                }
                if elements.len() >= max_order {
                    return Err(GroupError::TooLarge { max_order });
                }
                index.insert(prod.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(prod);
            }
        }
        Self::with_index(n, elements, &index)
    }

    /// Uses an explicit, already closed element list in the given order.
    pub fn from_elements(n: usize, elements: Vec<Matrix>) -> Result<Self, GroupError> {
        let mut index = BTreeMap::new();
        for (i, m) in elements.iter().enumerate() {
            if m.dim() != n {
                return Err(GroupError::Shape { index: i, n });
            }
            if m.inverse().is_none() {
                return Err(GroupError::SingularElement { index: i });
            }
            if let Some(first) = index.insert(m.clone(), i) {
                return Err(GroupError::Duplicate { first, second: i });
            }
        }
        if !elements.first().is_some_and(Matrix::is_identity) {
            return Err(GroupError::IdentityNotFirst);
        }
        Self::with_index(n, elements, &index)
    }

    fn with_index(
        n: usize,
        elements: Vec<Matrix>,
        index: &BTreeMap<Matrix, usize>,
    ) -> Result<Self, GroupError> {
        let mut mult = Vec::with_capacity(elements.len());
        for a in &elements {
            let row = elements
                .iter()
                .map(|b| index.get(&a.mul(b)).copied().ok_or(GroupError::NotClosed))
                .collect::<Result<Vec<_>, _>>()?;
            mult.push(row);
        }
        let inv = (0..elements.len())
            .map(|a| {
                mult[a]
                    .iter()
                    .position(|&p| p == 0)
                    .ok_or(GroupError::NotClosed)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let elements = elements
            .into_iter()
            .enumerate()
            .map(|(id, matrix)| GroupElement { id, matrix })
            .collect();
        Ok(GroupData {
            n,
            elements,
            mult,
            inv,
        })
    }

    /// The trivial group {e} acting on an n-dimensional space.
    pub fn trivial(field: &CycField, n: usize) -> Self {
        GroupData::close(field, n, &[], 1).expect("trivial group")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> &GroupElement {
        &self.elements[id]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn mult_table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    /// h g h⁻¹.
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mult[self.mult[h][g]][self.inv[h]]
    }

    pub fn is_abelian(&self) -> bool {
        let m = self.order();
        (0..m).all(|a| (0..m).all(|b| self.mult[a][b] == self.mult[b][a]))
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut classes = Vec::new();
        for g in 0..self.order() {
            if seen.contains(&g) {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.order()).map(|h| self.conjugate(h, g)).collect();
            seen.extend(class.iter().copied());
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mult[x][g];
            k += 1;
        }
        k
    }
}

/// A relation v_i v_j = q_ij v_j v_i not preserved by g.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityViolation {
    pub g: usize,
    pub i: usize,
    pub j: usize,
    /// Nonzero coefficients of ᵍv_i ᵍv_j − q_ij ᵍv_j ᵍv_i on the basis v_a v_b, a ≤ b.
    pub residual: BTreeMap<(usize, usize), CycScalar>,
}

/// Checks that g induces an automorphism of S_q(V): for every i < j the
/// element ᵍv_i ᵍv_j − q_ij ᵍv_j ᵍv_i must vanish in S_q(V).
pub fn check_q_compatibility(g: &GroupElement, q: &QMatrix) -> Vec<CompatibilityViolation> {
    let n = q.dim();
    let zero = q.get(0, 0).field().zero();
    let mut out = Vec::new();
    for i in 0..n {
        let x = g.image_of_basis(i);
        for j in i + 1..n {
            let y = g.image_of_basis(j);
            let mut c = alloc::vec![alloc::vec![zero.clone(); n]; n];
            for a in 0..n {
                for b in 0..n {
                    let xy = &x[a] * &y[b];
                    let yx = &y[a] * &x[b];
                    c[a][b] = xy - q.get(i, j) * &yx;
                }
            }
            let residual = reduce_quadratic(q, &c);
            if !residual.is_empty() {
                out.push(CompatibilityViolation {
                    g: g.id,
                    i,
                    j,
                    residual,
                });
            }
        }
    }
    out
}

/// A failure of one of the two structural identities on quantum minors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaViolation {
    /// q_lk ddet_ijkl(g) ≠ −ddet_ijlk(g).
    MinorSymmetry {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        lhs: CycScalar,
        rhs: CycScalar,
    },
    /// q_ij ≠ 1 but g^i_k g^j_k ≠ 0.
    ColumnProduct {
        i: usize,
        j: usize,
        k: usize,
        value: CycScalar,
    },
}

/// Evaluates q_lk ddet_ijkl(g) = −ddet_ijlk(g) on all index tuples and
/// g^i_k g^j_k = 0 whenever q_ij ≠ 1.
pub fn lemma21_diagnostics(g: &GroupElement, q: &QMatrix) -> Vec<LemmaViolation> {
    let n = q.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let lhs = q.get(l, k) * &g.qminor(i, j, k, l, q);
                    let rhs = -g.qminor(i, j, l, k, q);
                    if lhs != rhs {
                        out.push(LemmaViolation::MinorSymmetry {
                            i,
                            j,
                            k,
                            l,
                            lhs,
                            rhs,
                        });
                    }
                }
            }
            if q.get(i, j).is_one() {
                continue;
            }
            for k in 0..n {
                let value = g.entry(k, i) * g.entry(k, j);
                if !value.is_zero() {
                    out.push(LemmaViolation::ColumnProduct { i, j, k, value });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn field(n: u32) -> CycField {
        CycField::new(n).unwrap()
    }

    fn swap(k: &CycField) -> Matrix {
        Matrix::from_rows(vec![vec![k.zero(), k.one()], vec![k.one(), k.zero()]]).unwrap()
    }

    fn q2(k: &CycField, q12: CycScalar) -> QMatrix {
        QMatrix::from_upper(k, 2, &[(0, 1, q12)]).unwrap()
    }

    #[test]
    fn qmatrix_validation() {
        let k = field(4);
        let z = k.root_of_unity(1);
        let q = q2(&k, z.clone());
        assert_eq!(q.get(1, 0), &k.root_of_unity(3));
        assert_eq!(
            QMatrix::from_upper(&k, 2, &[(0, 1, k.zero())]),
            Err(QMatrixError::ZeroEntry { i: 0, j: 1 })
        );
        assert_eq!(
            QMatrix::from_upper(&k, 2, &[(1, 1, z.clone())]),
            Err(QMatrixError::Diagonal { i: 1 })
        );
        let bad = QMatrix::new(vec![vec![k.one(), z.clone()], vec![z, k.one()]]);
        assert_eq!(bad, Err(QMatrixError::NotReciprocal { i: 0, j: 1 }));
    }

    #[test]
    fn closure_of_minus_identity() {
        let k = field(1);
        let minus = Matrix::diagonal(vec![k.integer(-1), k.integer(-1)]);
        let g = GroupData::close(&k, 2, &[minus], DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.mul(1, 1), 0);
        assert_eq!(g.inverse(1), 1);
    }

    #[test]
    fn closure_of_cyclic_three() {
        let k = field(3);
        let d = Matrix::diagonal(vec![k.root_of_unity(1), k.root_of_unity(2)]);
        let g = GroupData::close(&k, 2, &[d], DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.is_abelian());
        assert_eq!(g.conjugacy_classes().len(), 3);
        assert_eq!(g.element_order(1), 3);
    }

    #[test]
    fn closure_too_large() {
        let k = field(5);
        let d = Matrix::diagonal(vec![k.root_of_unity(1), k.one()]);
        assert_eq!(
            GroupData::close(&k, 2, &[d], 4).unwrap_err(),
            GroupError::TooLarge { max_order: 4 }
        );
    }

    #[test]
    fn closure_rejects_singular_generator() {
        let k = field(1);
        let m = Matrix::diagonal(vec![k.one(), k.zero()]);
        assert_eq!(
            GroupData::close(&k, 2, &[m], 10).unwrap_err(),
            GroupError::SingularGenerator { index: 0 }
        );
    }

    #[test]
    fn closure_of_swap_and_negation() {
        let k = field(1);
        let minus = Matrix::diagonal(vec![k.integer(-1), k.integer(-1)]);
        let g = GroupData::close(&k, 2, &[swap(&k), minus], DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.order(), 4);
        // breadth-first numbering: e, swap, -I, -swap
        assert_eq!(g.element(1).matrix, swap(&k));
        assert_eq!(g.mul(1, 2), 3);
    }

    #[test]
    fn explicit_element_list() {
        let k = field(1);
        let e = Matrix::identity(&k, 2);
        let g = GroupData::from_elements(2, vec![e.clone(), swap(&k)]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(
            GroupData::from_elements(2, vec![swap(&k), e.clone()]).unwrap_err(),
            GroupError::IdentityNotFirst
        );
        let minus = Matrix::diagonal(vec![k.integer(-1), k.integer(-1)]);
        assert_eq!(
            GroupData::from_elements(2, vec![e, minus, swap(&k)]).unwrap_err(),
            GroupError::NotClosed
        );
    }

    #[test]
    fn action_follows_column_convention() {
        let k = field(7);
        let n = 3;
        let e = GroupElement {
            id: 0,
            matrix: Matrix::identity(&k, n),
        };
        let v = vec![k.integer(2), k.root_of_unity(3), k.fraction(-1, 5)];
        assert_eq!(e.act(&v), v);

        let diag = [k.integer(2), k.integer(3), k.root_of_unity(1)];
        let d = GroupElement {
            id: 1,
            matrix: Matrix::diagonal(diag.to_vec()),
        };
        for j in 0..n {
            let mut basis = vec![k.zero(); n];
            basis[j] = k.one();
            let mut expected = vec![k.zero(); n];
            expected[j] = diag[j].clone();
            assert_eq!(d.act(&basis), expected);
        }

        let s = GroupElement {
            id: 1,
            matrix: swap(&k),
        };
        assert_eq!(s.act(&[k.one(), k.zero()]), vec![k.zero(), k.one()]);
    }

    #[test]
    fn qminor_examples() {
        let k = field(4);
        let q = q2(&k, k.root_of_unity(1));
        let e = GroupElement {
            id: 0,
            matrix: Matrix::identity(&k, 2),
        };
        assert!(e.qminor(0, 1, 0, 1, &q).is_one());
        assert_eq!(e.qminor(0, 1, 1, 0, &q), -q.get(1, 0));
        let (a1, a2) = (k.integer(3), k.root_of_unity(1));
        let d = GroupElement {
            id: 1,
            matrix: Matrix::diagonal(vec![a1.clone(), a2.clone()]),
        };
        assert_eq!(d.qminor(0, 1, 0, 1, &q), &a2 * &a1);
    }

    #[test]
    fn compatibility_examples() {
        let k = field(4);
        let q = q2(&k, k.root_of_unity(1));
        let d = GroupElement {
            id: 1,
            matrix: Matrix::diagonal(vec![k.integer(5), k.root_of_unity(1)]),
        };
        assert!(check_q_compatibility(&d, &q).is_empty());

        let s = GroupElement {
            id: 1,
            matrix: swap(&k),
        };
        let q_minus = q2(&k, k.integer(-1));
        assert!(check_q_compatibility(&s, &q_minus).is_empty());

        let bad = check_q_compatibility(&s, &q);
        assert_eq!(bad.len(), 1);
        assert_eq!((bad[0].i, bad[0].j), (0, 1));
        // residual (q⁻¹ − q) v1 v2
        let z = k.root_of_unity(1);
        let expected = z.inverse().unwrap() - &z;
        assert_eq!(bad[0].residual.get(&(0, 1)), Some(&expected));
    }

    #[test]
    fn lemma_examples() {
        let k = field(3);
        let q = q2(&k, k.root_of_unity(1));
        let e = GroupElement {
            id: 0,
            matrix: Matrix::identity(&k, 2),
        };
        assert!(lemma21_diagnostics(&e, &q).is_empty());
        let d = GroupElement {
            id: 1,
            matrix: Matrix::diagonal(vec![k.root_of_unity(1), k.root_of_unity(2)]),
        };
        assert!(lemma21_diagnostics(&d, &q).is_empty());

        // swap has g^1_1 = 0, so the column-product identity holds even
        // though the action is incompatible with q_12 = i.
        let k4 = field(4);
        let qi = q2(&k4, k4.root_of_unity(1));
        let s = GroupElement {
            id: 1,
            matrix: swap(&k4),
        };
        assert!(!check_q_compatibility(&s, &qi).is_empty());
        assert!(!lemma21_diagnostics(&s, &qi)
            .iter()
            .any(|v| matches!(v, LemmaViolation::ColumnProduct { .. })));
    }

    #[test]
    fn conjugation() {
        let k = field(1);
        let rot = Matrix::from_rows(vec![
            vec![k.zero(), k.zero(), k.one()],
            vec![k.one(), k.zero(), k.zero()],
            vec![k.zero(), k.one(), k.zero()],
        ])
        .unwrap();
        let tr = Matrix::from_rows(vec![
            vec![k.zero(), k.one(), k.zero()],
            vec![k.one(), k.zero(), k.zero()],
            vec![k.zero(), k.zero(), k.one()],
        ])
        .unwrap();
        let s3 = GroupData::close(&k, 3, &[rot, tr], DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.conjugacy_classes().len(), 3);
        for g in 0..6 {
            assert_eq!(s3.conjugate(0, g), g);
            for h in 0..6 {
                assert_eq!(s3.conjugate(h, s3.conjugate(s3.inverse(h), g)), g);
            }
        }
    }
}
