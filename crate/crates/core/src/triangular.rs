//! The model algebra of n-by-n upper-triangular matrices: basis
//! indexing `X_{i,j}` (1 <= i <= j <= n), its law as structure
//! constants, closed forms for its derived series, and the matrix
//! realization of abstract elements.

use std::collections::BTreeMap;

use crate::algebra::LieAlgebra;
use crate::scalar::{ParamRing, Scalar};

/// Index of the elementary matrix basis vector `X_{i,j}`, `i <= j`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TriIndex {
    pub i: usize,
    pub j: usize,
}

impl TriIndex {
    pub fn new(i: usize, j: usize) -> TriIndex {
        assert!(1 <= i && i <= j, "invalid triangular index ({i},{j})");
        TriIndex { i, j }
    }
}

impl std::fmt::Display for TriIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "X {} {}", self.i, self.j)
    }
}

/// The triangular model of size `n`: a fixed row-major bijection
/// between `X_{i,j}` and flat basis positions
/// `{X_{1,1},...,X_{1,n},X_{2,2},...,X_{n,n}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangularAlgebra {
    pub n: usize,
}

impl TriangularAlgebra {
    pub fn new(n: usize) -> TriangularAlgebra {
        assert!(n >= 1, "matrix size must be positive");
        TriangularAlgebra { n }
    }

    pub fn dim(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    /// 1-based flat position of `X_{i,j}` in row-major order.
    pub fn flat(&self, idx: TriIndex) -> usize {
        assert!(idx.j <= self.n, "index {:?} outside size {}", idx, self.n);
        let i = idx.i;
        // row i starts after rows 1..i-1, which hold (n - r + 1) slots each
        let before: usize = (1..i).map(|r| self.n - r + 1).sum();
        before + (idx.j - i + 1)
    }

    /// Inverse of `flat`.
    pub fn unflat(&self, mut pos: usize) -> TriIndex {
        assert!(1 <= pos && pos <= self.dim());
        let mut i = 1;
        loop {
            let row_len = self.n - i + 1;
            if pos <= row_len {
                return TriIndex::new(i, i + pos - 1);
            }
            pos -= row_len;
            i += 1;
        }
    }

    pub fn indices(&self) -> Vec<TriIndex> {
        (1..=self.dim()).map(|p| self.unflat(p)).collect()
    }
}

/// Structure constants of the upper-triangular algebra of size `n` on
/// the flat basis. The nonzero basis brackets are exactly
/// `[X_{i,j}, X_{j,k}] = X_{i,k}` (i<j<k), `[X_{i,i}, X_{i,j}] = X_{i,j}`
/// (i<j) and `[X_{k,i}, X_{i,i}] = X_{k,i}` (k<i).
pub fn law_h(n: usize) -> LieAlgebra {
    let model = TriangularAlgebra::new(n);
    let mut algebra = LieAlgebra::new(model.dim(), ParamRing::empty());
    let mut add = |a: TriIndex, b: TriIndex, rhs: TriIndex| {
        let fa = model.flat(a);
        let fb = model.flat(b);
        let fr = model.flat(rhs);
        assert!(fa < fb, "flat order broken for {:?},{:?}", a, b);
        algebra
            .set_bracket(fa, fb, vec![(fr, Scalar::one())])
            .expect("valid indices");
    };
    // [X_{i,i}, X_{i,j}] = X_{i,j}, i < j
    for i in 1..n {
        for j in (i + 1)..=n {
            add(TriIndex::new(i, i), TriIndex::new(i, j), TriIndex::new(i, j));
        }
    }
    // [X_{i,j}, X_{j,j}] = X_{i,j}, i < j
    for i in 1..n {
        for j in (i + 1)..=n {
            add(TriIndex::new(i, j), TriIndex::new(j, j), TriIndex::new(i, j));
        }
    }
    // [X_{i,j}, X_{j,k}] = X_{i,k}, i < j < k
    for i in 1..n {
        for j in (i + 1)..n {
            for k in (j + 1)..=n {
                add(TriIndex::new(i, j), TriIndex::new(j, k), TriIndex::new(i, k));
            }
        }
    }
    algebra
}

/// Dimensions of the derived series of the size-`n` triangular algebra
/// in closed form: `d_1 = n(n+1)/2` and, for `m >= 2`,
/// `d_m = (n-g)(n-g+1)/2` with `g = 2^(m-2)`, clamped at the first
/// zero, which is included exactly once.
pub fn derived_series_dims_h(n: usize) -> Vec<usize> {
    assert!(n >= 1, "matrix size must be positive");
    let mut dims = vec![n * (n + 1) / 2];
    let mut m = 2usize;
    loop {
        let gap = 1usize << (m - 2);
        let d = if gap >= n { 0 } else { (n - gap) * (n - gap + 1) / 2 };
        dims.push(d);
        if d == 0 {
            return dims;
        }
        m += 1;
    }
}

/// Basis of the `m`-th derived ideal of the size-`n` triangular
/// algebra: all `X_{i,j}` with `j - i >= g_m` (`g_1 = 0`,
/// `g_m = 2^(m-2)` for `m >= 2`), in flat order.
pub fn derived_ideal_basis_h(n: usize, m: usize) -> Vec<TriIndex> {
    assert!(m >= 1);
    let gap = if m == 1 { 0 } else { 1usize << (m - 2) };
    let model = TriangularAlgebra::new(n);
    model
        .indices()
        .into_iter()
        .filter(|idx| idx.j - idx.i >= gap)
        .collect()
}

/// A sparse element of the triangular algebra.
pub type TriVector = BTreeMap<TriIndex, Scalar>;

/// Drop zero entries (canonical form for comparisons and printing).
pub fn tri_normalize(v: &TriVector) -> TriVector {
    v.iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (*k, c.clone()))
        .collect()
}

pub fn tri_is_zero(v: &TriVector) -> bool {
    v.values().all(|c| c.is_zero())
}

/// Matrix commutator `[u, v] = uv - vu` computed directly on the
/// elementary-matrix basis (`E_{ij} E_{kl} = delta_{jk} E_{il}`).
pub fn tri_commutator(u: &TriVector, v: &TriVector) -> TriVector {
    let mut out: TriVector = BTreeMap::new();
    let mut accumulate = |idx: TriIndex, c: Scalar| {
        let slot = out.entry(idx).or_insert_with(Scalar::zero);
        *slot = slot.add(&c);
    };
    for (a, ca) in u {
        for (b, cb) in v {
            let prod = ca.mul(cb);
            if prod.is_zero() {
                continue;
            }
            if a.j == b.i {
                accumulate(TriIndex::new(a.i, b.j), prod.clone());
            }
            if b.j == a.i {
                accumulate(TriIndex::new(b.i, a.j), prod.neg());
            }
        }
    }
    tri_normalize(&out)
}

/// Scale-and-add helper for sparse triangular elements.
pub fn tri_axpy(target: &mut TriVector, coeff: &Scalar, v: &TriVector) {
    for (idx, c) in v {
        let slot = target.entry(*idx).or_insert_with(Scalar::zero);
        *slot = slot.add(&coeff.mul(c));
    }
    target.retain(|_, c| !c.is_zero());
}

/// Realize an abstract element as a dense upper-triangular matrix;
/// entry `(i,j)` is the coefficient of `X_{i,j}`.
pub fn realize_matrix(n: usize, v: &TriVector) -> Vec<Vec<Scalar>> {
    let mut mat = vec![vec![Scalar::zero(); n]; n];
    for (idx, c) in v {
        assert!(idx.j <= n, "index {:?} outside size {}", idx, n);
        mat[idx.i - 1][idx.j - 1] = c.clone();
    }
    mat
}

/// Flat-basis vector of a sparse triangular element.
pub fn tri_to_vector(model: TriangularAlgebra, v: &TriVector) -> crate::algebra::Vector {
    let mut out = crate::algebra::Vector::zero(model.dim());
    for (idx, c) in v {
        out.0[model.flat(*idx) - 1] = c.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vector;

    #[test]
    fn flat_order_is_row_major() {
        let m = TriangularAlgebra::new(3);
        let order: Vec<TriIndex> = m.indices();
        let expect = [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]
            .map(|(i, j)| TriIndex::new(i, j));
        assert_eq!(order, expect);
        for (pos, idx) in order.iter().enumerate() {
            assert_eq!(m.flat(*idx), pos + 1);
        }
    }

    #[test]
    fn law_h2_matches_reference_brackets() {
        // x1 = X11, x2 = X12, x3 = X22: [x1,x2] = x2 and [x2,x3] = x2
        let h2 = law_h(2);
        let got: Vec<(usize, usize, Vec<usize>)> = h2
            .brackets()
            .map(|(i, j, t)| (i, j, t.iter().map(|(k, _)| *k).collect()))
            .collect();
        assert_eq!(got, vec![(1, 2, vec![2]), (2, 3, vec![2])]);
    }

    #[test]
    fn law_h3_matches_reference_brackets() {
        let h3 = law_h(3);
        let got: Vec<(usize, usize, usize)> = h3
            .brackets()
            .map(|(i, j, t)| {
                assert_eq!(t.len(), 1);
                assert!(t[0].1.is_one());
                (i, j, t[0].0)
            })
            .collect();
        let expect = vec![
            (1, 2, 2),
            (1, 3, 3),
            (2, 4, 2),
            (2, 5, 3),
            (3, 6, 3),
            (4, 5, 5),
            (5, 6, 5),
        ];
        assert_eq!(got, expect);
    }

    #[test]
    fn law_h1_is_abelian() {
        assert_eq!(law_h(1).brackets().count(), 0);
    }

    #[test]
    fn law_h_passes_jacobi_up_to_6() {
        for n in 1..=6 {
            assert!(law_h(n).jacobi_check().passed(), "n = {n}");
        }
    }

    #[test]
    fn series_dims_closed_form_examples() {
        assert_eq!(derived_series_dims_h(2), vec![3, 1, 0]);
        assert_eq!(derived_series_dims_h(3), vec![6, 3, 1, 0]);
        assert_eq!(derived_series_dims_h(4), vec![10, 6, 3, 0]);
    }

    #[test]
    fn series_dims_match_computed_series() {
        for n in 1..=6 {
            let computed = law_h(n).derived_series_dims().unwrap();
            assert_eq!(computed, derived_series_dims_h(n), "n = {n}");
        }
    }

    #[test]
    fn model_dimension_formula() {
        for n in 1..=20 {
            assert_eq!(law_h(n).dim(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn derived_ideal_basis_examples() {
        let m3 = |pairs: &[(usize, usize)]| -> Vec<TriIndex> {
            pairs.iter().map(|&(i, j)| TriIndex::new(i, j)).collect()
        };
        assert_eq!(
            derived_ideal_basis_h(3, 2),
            m3(&[(1, 2), (1, 3), (2, 3)])
        );
        assert_eq!(derived_ideal_basis_h(3, 1).len(), 6);
        assert_eq!(
            derived_ideal_basis_h(5, 3),
            m3(&[(1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (3, 5)])
        );
    }

    #[test]
    fn derived_ideal_basis_spans_series_terms() {
        for n in 1..=6 {
            let h = law_h(n);
            let model = TriangularAlgebra::new(n);
            let series = h.derived_series().unwrap();
            for (m0, term) in series.iter().enumerate() {
                let m = m0 + 1;
                let basis = derived_ideal_basis_h(n, m);
                assert_eq!(basis.len(), term.dim(), "n={n} m={m}");
                for idx in basis {
                    let v = Vector::basis(h.dim(), model.flat(idx));
                    assert!(term.contains(&v), "n={n} m={m} idx={idx:?}");
                }
            }
        }
    }

    #[test]
    fn realize_matrix_examples() {
        let mut v: TriVector = BTreeMap::new();
        v.insert(TriIndex::new(1, 2), Scalar::one());
        let mat = realize_matrix(2, &v);
        assert!(mat[0][0].is_zero() && mat[0][1].is_one());
        assert!(mat[1][0].is_zero() && mat[1][1].is_zero());
        assert!(realize_matrix(3, &BTreeMap::new())
            .iter()
            .flatten()
            .all(|c| c.is_zero()));
    }

    #[test]
    fn commutator_matches_hand_example() {
        // [-X23, X12] = X13 in the size-3 model
        let mut u: TriVector = BTreeMap::new();
        u.insert(TriIndex::new(2, 3), Scalar::int(-1));
        let mut v: TriVector = BTreeMap::new();
        v.insert(TriIndex::new(1, 2), Scalar::one());
        let c = tri_commutator(&u, &v);
        let mut expect: TriVector = BTreeMap::new();
        expect.insert(TriIndex::new(1, 3), Scalar::one());
        assert_eq!(c, expect);
    }

    #[test]
    fn commutator_agrees_with_law_bracket() {
        // dual route: the sparse matrix commutator must agree with the
        // bilinear bracket of law_h on random-ish structured elements
        for n in 2..=4 {
            let h = law_h(n);
            let model = TriangularAlgebra::new(n);
            let mk = |entries: &[((usize, usize), i64)]| -> TriVector {
                entries
                    .iter()
                    .map(|&((i, j), c)| (TriIndex::new(i, j), Scalar::int(c)))
                    .collect()
            };
            let u = mk(&[((1, 1), 2), ((1, 2), -1), ((2, 2), 3)]);
            let v = mk(&[((1, 2), 1), ((2, 2), -2), ((1, n), 5)]);
            let via_matrix = tri_commutator(&u, &v);
            let via_law = h
                .bracket(&tri_to_vector(model, &u), &tri_to_vector(model, &v))
                .unwrap();
            assert_eq!(tri_to_vector(model, &via_matrix), via_law, "n = {n}");
        }
    }
}
