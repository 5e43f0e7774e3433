//! Finite-dimensional Lie algebras given by exact structure constants:
//! bracket computation, Jacobi validation, subspaces in reduced
//! row-echelon form, and the derived series.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::scalar::{ParamRing, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("vector length {got} does not match algebra dimension {dim}")]
    DimensionMismatch { dim: usize, got: usize },
    #[error("bracket index out of range: ({i},{j}) -> {k} with dim {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },
    #[error("derived series stabilizes at a nonzero subspace: algebra is not solvable")]
    NotSolvable,
}

/// Machine-recognizable parameter constraints attached to an algebra,
/// used to filter sample substitutions. `Other` is kept verbatim and
/// not enforced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// polynomial expression must not vanish
    NonZero(Scalar),
    /// polynomial expression must be >= 0 (interpreted over the reals)
    NonNegative(Scalar),
    /// parameter restricted to the set {1, -1}
    PlusMinusOne(String),
    /// free-text note, not enforced
    Other(String),
}

/// A Lie algebra over Q(i) (optionally with formal parameters), stored
/// as the sparse table `[e_i, e_j] = sum_k c^k_{ij} e_k` for `i < j`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    dim: usize,
    brackets: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
    ring: Arc<ParamRing>,
    pub constraints: Vec<Constraint>,
}

impl LieAlgebra {
    pub fn new(dim: usize, ring: Arc<ParamRing>) -> LieAlgebra {
        assert!(dim >= 1, "dimension must be positive");
        LieAlgebra {
            dim,
            brackets: BTreeMap::new(),
            ring,
            constraints: Vec::new(),
        }
    }

    pub fn abelian(dim: usize) -> LieAlgebra {
        LieAlgebra::new(dim, ParamRing::empty())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ring(&self) -> &Arc<ParamRing> {
        &self.ring
    }

    pub fn is_parametric(&self) -> bool {
        !self.ring.is_empty()
    }

    /// Set `[e_i, e_j] = sum terms` for `i < j` (1-based indices).
    pub fn set_bracket(
        &mut self,
        i: usize,
        j: usize,
        terms: Vec<(usize, Scalar)>,
    ) -> Result<(), AlgebraError> {
        if !(1 <= i && i < j && j <= self.dim) {
            return Err(AlgebraError::IndexOutOfRange { i, j, k: 0, dim: self.dim });
        }
        let mut merged: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (k, c) in terms {
            if !(1 <= k && k <= self.dim) {
                return Err(AlgebraError::IndexOutOfRange { i, j, k, dim: self.dim });
            }
            let slot = merged.entry(k).or_insert_with(Scalar::zero);
            *slot = slot.add(&c);
        }
        let cleaned: Vec<(usize, Scalar)> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if cleaned.is_empty() {
            self.brackets.remove(&(i, j));
        } else {
            self.brackets.insert((i, j), cleaned);
        }
        Ok(())
    }

    /// All stored nonzero basis brackets, `i < j`.
    pub fn brackets(&self) -> impl Iterator<Item = (usize, usize, &[(usize, Scalar)])> {
        self.brackets.iter().map(|(&(i, j), t)| (i, j, t.as_slice()))
    }

    /// `[e_i, e_j]` for arbitrary 1-based `i, j` (antisymmetry applied).
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let mut out = Vector::zero(self.dim);
        if i == j {
            return out;
        }
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        if let Some(terms) = self.brackets.get(&(a, b)) {
            for (k, c) in terms {
                let val = if sign > 0 { c.clone() } else { c.neg() };
                out.0[k - 1] = out.0[k - 1].add(&val);
            }
        }
        out
    }

    /// Bilinear extension of the bracket:
    /// `[u, v] = sum_{i<j} (u_i v_j - u_j v_i) [e_i, e_j]`.
    pub fn bracket(&self, u: &Vector, v: &Vector) -> Result<Vector, AlgebraError> {
        if u.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch { dim: self.dim, got: u.len() });
        }
        if v.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch { dim: self.dim, got: v.len() });
        }
        let mut out = Vector::zero(self.dim);
        for (&(i, j), terms) in &self.brackets {
            let ui_vj = u.0[i - 1].mul(&v.0[j - 1]);
            let uj_vi = u.0[j - 1].mul(&v.0[i - 1]);
            let coeff = ui_vj.sub(&uj_vi);
            if coeff.is_zero() {
                continue;
            }
            for (k, c) in terms {
                out.0[k - 1] = out.0[k - 1].add(&coeff.mul(c));
            }
        }
        Ok(out)
    }

    /// Check the Jacobi identity on every basis triple, exactly
    /// (symbolically when parameters are present).
    pub fn jacobi_check(&self) -> JacobiReport {
        let mut violations = Vec::new();
        for i in 1..=self.dim {
            for j in (i + 1)..=self.dim {
                for k in (j + 1)..=self.dim {
                    let ei = Vector::basis(self.dim, i);
                    let ej = Vector::basis(self.dim, j);
                    let ek = Vector::basis(self.dim, k);
                    let t1 = self
                        .bracket(&self.bracket(&ei, &ej).expect("dims"), &ek)
                        .expect("dims");
                    let t2 = self
                        .bracket(&self.bracket(&ej, &ek).expect("dims"), &ei)
                        .expect("dims");
                    let t3 = self
                        .bracket(&self.bracket(&ek, &ei).expect("dims"), &ej)
                        .expect("dims");
                    if !t1.add(&t2).add(&t3).is_zero() {
                        violations.push((i, j, k));
                    }
                }
            }
        }
        if violations.is_empty() {
            JacobiReport::Pass
        } else {
            JacobiReport::Violations(violations)
        }
    }

    /// Span of all pairwise brackets of basis vectors of `u` and `v`.
    pub fn subspace_bracket(
        &self,
        u: &Subspace,
        v: &Subspace,
    ) -> Result<Subspace, AlgebraError> {
        let mut vectors = Vec::new();
        for a in &u.rows {
            for b in &v.rows {
                let w = self.bracket(a, b)?;
                if !w.is_zero() {
                    vectors.push(w);
                }
            }
        }
        Ok(Subspace::from_vectors(self.dim, vectors))
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::from_vectors(
            self.dim,
            (1..=self.dim).map(|i| Vector::basis(self.dim, i)).collect(),
        )
    }

    /// Derived series `C_1 = g`, `C_{k+1} = [C_k, C_k]`, down to (and
    /// including) the first zero term. Errors when the series
    /// stabilizes at a nonzero subspace.
    pub fn derived_series(&self) -> Result<Vec<Subspace>, AlgebraError> {
        let mut series = vec![self.full_space()];
        loop {
            let last = series.last().expect("nonempty");
            let next = self.subspace_bracket(last, last)?;
            if next.dim() == 0 {
                series.push(next);
                return Ok(series);
            }
            if next.dim() >= last.dim() {
                return Err(AlgebraError::NotSolvable);
            }
            series.push(next);
        }
    }

    /// Dimensions of the derived series, ending in 0.
    pub fn derived_series_dims(&self) -> Result<Vec<usize>, AlgebraError> {
        Ok(self.derived_series()?.iter().map(|s| s.dim()).collect())
    }

    /// Substitute parameter values into every structure constant.
    pub fn substitute(
        &self,
        values: &BTreeMap<String, crate::gauss::GaussianRational>,
    ) -> Result<LieAlgebra, crate::scalar::ScalarError> {
        let mut out = LieAlgebra::new(self.dim, ParamRing::empty());
        let mut ring: Option<Arc<ParamRing>> = None;
        let mut brackets = BTreeMap::new();
        for (&(i, j), terms) in &self.brackets {
            let mut new_terms = Vec::new();
            for (k, c) in terms {
                let c = c.substitute(values)?;
                if ring.is_none() && !c.ring().is_empty() {
                    ring = Some(c.ring().clone());
                }
                if !c.is_zero() {
                    new_terms.push((*k, c));
                }
            }
            if !new_terms.is_empty() {
                brackets.insert((i, j), new_terms);
            }
        }
        out.brackets = brackets;
        out.ring = ring.unwrap_or_else(ParamRing::empty);
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JacobiReport {
    Pass,
    Violations(Vec<(usize, usize, usize)>),
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        matches!(self, JacobiReport::Pass)
    }
}

/// Dense coefficient vector in the `e`-basis of an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn zero(dim: usize) -> Vector {
        Vector(vec![Scalar::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Vector {
        assert!(1 <= i && i <= dim);
        let mut v = Vector::zero(dim);
        v.0[i - 1] = Scalar::one();
        v
    }

    pub fn from_scalars(coeffs: Vec<Scalar>) -> Vector {
        Vector(coeffs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len());
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector(self.0.iter().map(|a| a.mul(c)).collect())
    }
}

/// A subspace kept in reduced row-echelon form over the fraction field;
/// rank equals the number of rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vector>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn from_vectors(ambient: usize, vectors: Vec<Vector>) -> Subspace {
        let rows: Vec<Vec<Scalar>> = vectors.into_iter().map(|v| v.0).collect();
        let reduced = rref(rows, ambient);
        Subspace {
            ambient,
            rows: reduced.into_iter().map(Vector).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    /// Reduce `v` against the rows; membership iff the residue is zero.
    pub fn contains(&self, v: &Vector) -> bool {
        self.residue(v).is_zero()
    }

    fn residue(&self, v: &Vector) -> Vector {
        let mut w = v.clone();
        for row in &self.rows {
            let pivot = row.0.iter().position(|c| !c.is_zero()).expect("rref row");
            if w.0[pivot].is_zero() {
                continue;
            }
            let factor = w.0[pivot].clone();
            w = w.add(&row.scale(&factor.neg()));
        }
        w
    }
}

/// Reduced row echelon form over the exact scalar field. Pivots are
/// normalized to 1 and pivot columns are strictly increasing.
pub fn rref(rows: Vec<Vec<Scalar>>, width: usize) -> Vec<Vec<Scalar>> {
    let mut mat: Vec<Vec<Scalar>> = rows
        .into_iter()
        .filter(|r| {
            assert_eq!(r.len(), width);
            r.iter().any(|c| !c.is_zero())
        })
        .collect();
    let mut pivot_rows: Vec<Vec<Scalar>> = Vec::new();
    let mut col = 0usize;
    while col < width && !mat.is_empty() {
        // find a row with a nonzero entry in this column
        let found = mat.iter().position(|r| !r[col].is_zero());
        if let Some(idx) = found {
            let mut row = mat.swap_remove(idx);
            let inv = row[col].inv().expect("nonzero pivot");
            row = row.iter().map(|c| c.mul(&inv)).collect();
            for other in mat.iter_mut() {
                if !other[col].is_zero() {
                    let f = other[col].clone();
                    for (o, r) in other.iter_mut().zip(&row) {
                        *o = o.sub(&r.mul(&f));
                    }
                }
            }
            for prev in pivot_rows.iter_mut() {
                if !prev[col].is_zero() {
                    let f = prev[col].clone();
                    for (o, r) in prev.iter_mut().zip(&row) {
                        *o = o.sub(&r.mul(&f));
                    }
                }
            }
            pivot_rows.push(row);
            mat.retain(|r| r.iter().any(|c| !c.is_zero()));
        }
        col += 1;
    }
    pivot_rows
}

/// Rank of a list of vectors over the fraction field.
pub fn rank(vectors: &[Vector], width: usize) -> usize {
    rref(vectors.iter().map(|v| v.0.clone()).collect(), width).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The 3-dimensional algebra with the single bracket [e1,e3] = e2.
    pub fn s3_2() -> LieAlgebra {
        let mut a = LieAlgebra::abelian(3);
        a.set_bracket(1, 3, vec![(2, Scalar::one())]).unwrap();
        a
    }

    /// s_3^3: [e1,e3] = e1, [e2,e3] = e2.
    fn s3_3() -> LieAlgebra {
        let mut a = LieAlgebra::abelian(3);
        a.set_bracket(1, 3, vec![(1, Scalar::one())]).unwrap();
        a.set_bracket(2, 3, vec![(2, Scalar::one())]).unwrap();
        a
    }

    #[test]
    fn bracket_examples() {
        let a = s3_2();
        let e1 = Vector::basis(3, 1);
        let e3 = Vector::basis(3, 3);
        assert_eq!(a.bracket(&e1, &e3).unwrap(), Vector::basis(3, 2));
        // antisymmetry on equal arguments
        assert!(a.bracket(&e3, &e3).unwrap().is_zero());
        // bilinearity: [e1+e2, e3] = e1+e2 in s_3^3
        let b = s3_3();
        let u = Vector::basis(3, 1).add(&Vector::basis(3, 2));
        assert_eq!(b.bracket(&u, &Vector::basis(3, 3)).unwrap(), u);
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let a = s3_2();
        let short = Vector::zero(2);
        assert!(matches!(
            a.bracket(&short, &Vector::zero(3)),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn jacobi_detects_violation() {
        // [e1,e2]=e3, [e1,e3]=e3, [e2,e3]=e1 violates Jacobi at (1,2,3)
        let mut a = LieAlgebra::abelian(3);
        a.set_bracket(1, 2, vec![(3, Scalar::one())]).unwrap();
        a.set_bracket(1, 3, vec![(3, Scalar::one())]).unwrap();
        a.set_bracket(2, 3, vec![(1, Scalar::one())]).unwrap();
        assert_eq!(a.jacobi_check(), JacobiReport::Violations(vec![(1, 2, 3)]));
        assert!(s3_2().jacobi_check().passed());
        assert!(LieAlgebra::abelian(5).jacobi_check().passed());
    }

    #[test]
    fn subspace_bracket_examples() {
        let a = s3_2();
        let full = a.full_space();
        let c2 = a.subspace_bracket(&full, &full).unwrap();
        assert_eq!(c2.dim(), 1);
        assert!(c2.contains(&Vector::basis(3, 2)));
        let zero = Subspace::zero(3);
        assert_eq!(a.subspace_bracket(&zero, &full).unwrap().dim(), 0);
        // s_4^2: [e1,e3]=e2, [e1,e4]=e3 gives C2 = span{e2,e3}
        let mut s42 = LieAlgebra::abelian(4);
        s42.set_bracket(1, 3, vec![(2, Scalar::one())]).unwrap();
        s42.set_bracket(1, 4, vec![(3, Scalar::one())]).unwrap();
        let c2 = s42
            .subspace_bracket(&s42.full_space(), &s42.full_space())
            .unwrap();
        assert_eq!(c2.dim(), 2);
        assert!(c2.contains(&Vector::basis(4, 2)));
        assert!(c2.contains(&Vector::basis(4, 3)));
    }

    #[test]
    fn derived_series_examples() {
        assert_eq!(s3_2().derived_series_dims().unwrap(), vec![3, 1, 0]);
        assert_eq!(LieAlgebra::abelian(7).derived_series_dims().unwrap(), vec![7, 0]);
        // sl2-like law is not solvable
        let mut sl2 = LieAlgebra::abelian(3);
        sl2.set_bracket(1, 2, vec![(2, Scalar::int(2))]).unwrap();
        sl2.set_bracket(1, 3, vec![(3, Scalar::int(-2))]).unwrap();
        sl2.set_bracket(2, 3, vec![(1, Scalar::one())]).unwrap();
        assert!(matches!(sl2.derived_series(), Err(AlgebraError::NotSolvable)));
    }

    #[test]
    fn rref_parametric_pivots() {
        use std::sync::Arc;
        let ring = Arc::new(ParamRing::new(vec!["a".into()]));
        let a = Scalar::param(&ring, "a").unwrap();
        // rows (a, 1), (0, 1): rank 2 generically
        let rows = vec![
            vec![a.clone(), Scalar::one()],
            vec![Scalar::zero(), Scalar::one()],
        ];
        assert_eq!(rref(rows, 2).len(), 2);
    }
}
