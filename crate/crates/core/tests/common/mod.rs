//! Random instance generation shared by the property and acceptance tests.
#![allow(dead_code)]

use orbifold_core::{
    check_q_compatibility, CycField, CycScalar, GroupData, GroupError, KappaMap, Matrix, QMatrix,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub struct Instance {
    pub field: CycField,
    pub q: QMatrix,
    pub group: GroupData,
    pub kappa: KappaMap,
    pub label: String,
}

/// Roots of unity available in Q(ζ_N) for N = 3 or 4 (the 6th resp. 4th roots).
pub fn units(k: &CycField) -> Vec<CycScalar> {
    match k.order() {
        3 => (0..3)
            .flat_map(|e| [k.root_of_unity(e), -k.root_of_unity(e)])
            .collect(),
        n => (0..i64::from(n)).map(|e| k.root_of_unity(e)).collect(),
    }
}

/// {0, ±1, ±1/2, ζ}
pub fn coefficient_pool(k: &CycField) -> Vec<CycScalar> {
    vec![
        k.zero(),
        k.one(),
        k.integer(-1),
        k.fraction(1, 2),
        k.fraction(-1, 2),
        k.root_of_unity(1),
    ]
}

pub fn random_q<R: Rng>(rng: &mut R, k: &CycField, n: usize) -> QMatrix {
    let pool = units(k);
    let mut upper = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = match rng.gen_range(0..4) {
                0 => k.one(),
                1 => k.integer(-1),
                _ => pool.choose(rng).unwrap().clone(),
            };
            upper.push((i, j, v));
        }
    }
    QMatrix::from_upper(k, n, &upper).unwrap()
}

fn random_diagonal<R: Rng>(rng: &mut R, k: &CycField, n: usize) -> Matrix {
    let pool = units(k);
    Matrix::diagonal((0..n).map(|_| pool.choose(rng).unwrap().clone()).collect())
}

fn random_signed_permutation<R: Rng>(rng: &mut R, k: &CycField, n: usize) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut rows = vec![vec![k.zero(); n]; n];
    for (col, &row) in perm.iter().enumerate() {
        rows[row][col] = if rng.gen_bool(0.5) {
            k.one()
        } else {
            k.integer(-1)
        };
    }
    Matrix::from_rows(rows).unwrap()
}

pub fn is_compatible(q: &QMatrix, g: &GroupData) -> bool {
    g.elements()
        .iter()
        .all(|e| check_q_compatibility(e, q).is_empty())
}

/// A q-compatible diagonal or signed-permutation group of order ≤ 6.
pub fn random_group<R: Rng>(rng: &mut R, k: &CycField, q: &QMatrix) -> Option<GroupData> {
    let n = q.dim();
    let gens: Vec<Matrix> = match rng.gen_range(0..5) {
        0 => Vec::new(),
        1 | 2 => (0..rng.gen_range(1..=2))
            .map(|_| random_diagonal(rng, k, n))
            .collect(),
        _ => {
            let mut gens = vec![random_signed_permutation(rng, k, n)];
            if rng.gen_bool(0.3) {
                gens.push(random_diagonal(rng, k, n));
            }
            gens
        }
    };
    match GroupData::close(k, n, &gens, 6) {
        Ok(g) if is_compatible(q, &g) => Some(g),
        Ok(_) | Err(GroupError::TooLarge { .. }) => None,
        Err(e) => panic!("unexpected closure error {e}"),
    }
}

/// Sparse κ supported on at most two group elements.
pub fn random_kappa<R: Rng>(rng: &mut R, k: &CycField, g: &GroupData) -> KappaMap {
    let n = g.dim();
    let pool = coefficient_pool(k);
    let mut kappa = KappaMap::new(k, n);
    let mut ids: Vec<usize> = (0..g.order()).collect();
    ids.shuffle(rng);
    let support = rng.gen_range(1..=2).min(g.order());
    let density = [0.15, 0.3, 0.5][rng.gen_range(0..3)];
    let constant_only = rng.gen_bool(0.3);
    let draw = |rng: &mut R| {
        if rng.gen_bool(density) {
            pool[1..].choose(rng).unwrap().clone()
        } else {
            k.zero()
        }
    };
    for &gid in &ids[..support] {
        for i in 0..n {
            for j in i + 1..n {
                let c = draw(rng);
                let lin = (0..n)
                    .map(|_| if constant_only { k.zero() } else { draw(rng) })
                    .collect();
                kappa.insert(gid, i, j, c, lin);
            }
        }
    }
    kappa
}

/// One instance as described by the equivalence criterion: n ∈ {2, 3},
/// N ∈ {3, 4}, compatible group of order ≤ 6, sparse κ.
pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    loop {
        let k = CycField::new(if rng.gen_bool(0.5) { 4 } else { 3 }).unwrap();
        let n = rng.gen_range(2..=3);
        let q = random_q(rng, &k, n);
        let Some(group) = random_group(rng, &k, &q) else {
            continue;
        };
        let kappa = random_kappa(rng, &k, &group);
        let label = format!(
            "N={} n={} |G|={} supp={:?}",
            k.order(),
            n,
            group.order(),
            kappa.support()
        );
        return Instance {
            field: k,
            q,
            group,
            kappa,
            label,
        };
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
