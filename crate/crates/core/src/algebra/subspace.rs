//! Subspaces of Kⁿ in canonical form, and quotients between them.

use std::fmt;

use num_traits::Zero;

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{check_dim, Error, Result};

/// A subspace of Kⁿ, stored as the reduced row echelon form of a basis.
///
/// Two subspaces are equal exactly when their representations are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            n,
            basis: Matrix::zeros(0, n),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            n,
            basis: Matrix::identity(n),
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        Subspace {
            n: m.cols(),
            basis: m.rref().0,
        }
    }

    /// Column space of `m`.
    pub fn col_space(m: &Matrix) -> Self {
        Subspace::row_space(&m.transpose())
    }

    pub fn span(n: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        Ok(Subspace::row_space(&Matrix::from_rows(n, vectors.to_vec())?))
    }

    /// Span of standard basis vectors.
    pub fn coordinate(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let idx: Vec<usize> = idx.into_iter().collect();
        let rows: Vec<Vec<Scalar>> = idx
            .iter()
            .map(|&i| {
                let mut v = vec![Scalar::zero(); n];
                v[i] = num_traits::One::one();
                v
            })
            .collect();
        Subspace::row_space(&Matrix::from_rows(n, rows).expect("coordinate rows"))
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        check_dim(self.n, other.n)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() || self == other {
            return Ok(self.clone());
        }
        Ok(Subspace::row_space(&self.basis.vstack(&other.basis)))
    }

    /// Vectors pairing to zero with every vector of `self` under Σ xᵢyᵢ.
    pub fn annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.n);
        }
        Subspace::row_space(&self.basis.kernel())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        check_dim(self.n, other.n)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        Ok(self
            .annihilator()
            .sum(&other.annihilator())?
            .annihilator())
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.n);
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let m = Matrix::from_rows(self.n, vec![v.to_vec()]).unwrap();
        self.basis.vstack(&m).rank() == self.dim()
    }

    /// `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.n == other.n
            && self.dim() <= other.dim()
            && (self.is_zero() || other.basis.vstack(&self.basis).rank() == other.dim())
    }

    /// Image under the linear map `f` (columns act on column vectors).
    pub fn image(&self, f: &Matrix) -> Result<Subspace> {
        check_dim(f.cols(), self.n)?;
        if self.is_zero() {
            return Ok(Subspace::zero(f.rows()));
        }
        Ok(Subspace::row_space(&(&self.basis * &f.transpose())))
    }

    pub fn conj(&self) -> Subspace {
        Subspace {
            n: self.n,
            basis: self.basis.conj(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.basis.is_real()
    }

    /// Sum of a family of subspaces of Kⁿ.
    pub fn sum_all<'a>(n: usize, parts: impl IntoIterator<Item = &'a Subspace>) -> Result<Subspace> {
        let mut rows = Matrix::zeros(0, n);
        for p in parts {
            check_dim(n, p.n)?;
            rows = rows.vstack(&p.basis);
        }
        Ok(Subspace::row_space(&rows))
    }

    /// Tensor product of subspaces inside Kⁿ ⊗ Kᵐ (Kronecker index order).
    pub fn tensor(&self, other: &Subspace) -> Subspace {
        Subspace::row_space(&self.basis.kron(&other.basis))
    }

    /// Direct sum inside Kⁿ ⊕ Kᵐ.
    pub fn direct_sum(&self, other: &Subspace) -> Subspace {
        Subspace {
            n: self.n + other.n,
            basis: self.basis.direct_sum(&other.basis),
        }
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, {:?})", self.n, self.basis)
    }
}

/// Solves `c·M = v` for a matrix `M` of full row rank.
#[derive(Clone, Debug)]
pub struct RowSolver {
    rows: Matrix,
    pivots: Vec<usize>,
    inv: Matrix,
}

impl RowSolver {
    pub fn new(rows: Matrix) -> Result<Self> {
        let (_, pivots) = rows.rref();
        if pivots.len() != rows.rows() {
            return Err(Error::Internal("row solver on dependent rows".into()));
        }
        let inv = rows.select_cols(&pivots).try_inverse()?;
        Ok(RowSolver { rows, pivots, inv })
    }

    /// Coefficients of `v` in the rows, or `None` if `v` is outside their span.
    pub fn solve(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let vp: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let c = self.inv.transpose().apply(&vp);
        let back = self.rows.transpose().apply(&c);
        (back == v).then_some(c)
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }
}

/// The quotient S/T with a fixed basis: the rows of rref(S) that raise the rank over T.
#[derive(Clone, Debug)]
pub struct Quotient {
    complement: Matrix,
    solver: RowSolver,
    ambient: usize,
}

impl Quotient {
    pub fn new(s: &Subspace, t: &Subspace) -> Result<Self> {
        check_dim(s.ambient(), t.ambient())?;
        if !t.is_subspace_of(s) {
            return Err(Error::NotContained);
        }
        let n = s.ambient();
        let mut acc = t.basis().clone();
        let mut keep = Vec::new();
        for i in 0..s.dim() {
            let row = s.basis().select_rows(&[i]);
            let next = acc.vstack(&row);
            if next.rank() > acc.rows() {
                acc = next;
                keep.push(i);
            }
        }
        let complement = s.basis().select_rows(&keep);
        let solver = RowSolver::new(complement.vstack(t.basis()))?;
        Ok(Quotient {
            complement,
            solver,
            ambient: n,
        })
    }

    pub fn dim(&self) -> usize {
        self.complement.rows()
    }

    /// Representatives in the ambient space of the quotient basis.
    pub fn complement(&self) -> &Matrix {
        &self.complement
    }

    /// Quotient coordinates of a vector of S.
    pub fn project(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let mut c = self.solver.solve(v).ok_or(Error::NotContained)?;
        c.truncate(self.dim());
        Ok(c)
    }

    /// Image of a subspace of S in the quotient.
    pub fn project_subspace(&self, u: &Subspace) -> Result<Subspace> {
        check_dim(self.ambient, u.ambient())?;
        let rows = u
            .basis_vectors()
            .iter()
            .map(|v| self.project(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::row_space(&Matrix::from_rows(self.dim(), rows)?))
    }

    /// (U ∩ S + T)/T for an arbitrary subspace U of the ambient space.
    pub fn induced(&self, u: &Subspace, s: &Subspace) -> Result<Subspace> {
        self.project_subspace(&u.intersect(s)?)
    }
}

/// Induces a list of filtration steps on S/T: each step U ↦ (U ∩ S + T)/T.
pub fn induced_filtration_on_quotient(
    steps: &[Subspace],
    s: &Subspace,
    t: &Subspace,
) -> Result<Vec<Subspace>> {
    let qt = Quotient::new(s, t)?;
    steps.iter().map(|u| qt.induced(u, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::q;
    use num_traits::One;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    fn sp(n: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::span(n, &vs.iter().map(|x| v(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn sum_examples() {
        let a = sp(2, &[&[1, 0]]);
        let b = sp(2, &[&[0, 1]]);
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(2));
        assert_eq!(a.sum(&a).unwrap(), a);
        let a = sp(3, &[&[1, 1, 0]]);
        let b = sp(3, &[&[1, -1, 0]]);
        assert_eq!(a.sum(&b).unwrap(), sp(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert!(a.sum(&Subspace::zero(2)).is_err());
    }

    #[test]
    fn intersect_examples() {
        let a = sp(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = sp(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.intersect(&b).unwrap(), sp(3, &[&[0, 1, 0]]));
        assert_eq!(a.intersect(&Subspace::zero(3)).unwrap(), Subspace::zero(3));
        let a = sp(2, &[&[1, 1]]);
        let b = sp(2, &[&[1, 0]]);
        assert!(a.intersect(&b).unwrap().is_zero());
    }

    #[test]
    fn quotient_examples() {
        let f = vec![Subspace::zero(2), Subspace::full(2)];
        let same = induced_filtration_on_quotient(&f, &Subspace::full(2), &Subspace::zero(2)).unwrap();
        assert_eq!(same, f);

        let s = sp(2, &[&[1, 0]]);
        let out = induced_filtration_on_quotient(&f, &s, &s).unwrap();
        assert!(out.iter().all(|u| u.ambient() == 0 && u.is_zero()));

        let f1 = sp(2, &[&[1, 1]]);
        let out = induced_filtration_on_quotient(&[f1], &Subspace::full(2), &sp(2, &[&[0, 1]])).unwrap();
        assert_eq!(out[0], Subspace::full(1));

        assert_eq!(
            Quotient::new(&sp(2, &[&[1, 0]]), &sp(2, &[&[0, 1]])).err(),
            Some(Error::NotContained)
        );
    }

    #[test]
    fn image_and_conj() {
        let f = Matrix::from_ints(&[&[0, 0], &[1, 0]]);
        assert_eq!(sp(2, &[&[1, 0]]).image(&f).unwrap(), sp(2, &[&[0, 1]]));
        let z = Subspace::span(2, &[vec![Scalar::one(), Scalar::gaussian(2, 1)]]).unwrap();
        assert_eq!(z.conj().basis()[(0, 1)], Scalar::gaussian(2, -1));
        assert!(!z.is_real());
        let _ = q(1, 1);
    }

    fn arb_subspace(n: usize) -> impl Strategy<Value = Subspace> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), 0..=n)
            .prop_map(move |rows| {
                let rows: Vec<Vec<Scalar>> = rows.iter().map(|r| v(r)).collect();
                Subspace::span(n, &rows).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn grassmann(a in arb_subspace(6), b in arb_subspace(6)) {
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
            prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
            prop_assert!(a.is_subspace_of(&s));
        }

        #[test]
        fn lattice_laws(a in arb_subspace(5), b in arb_subspace(5), c in arb_subspace(5)) {
            prop_assert_eq!(a.sum(&b).unwrap(), b.sum(&a).unwrap());
            prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
            prop_assert_eq!(a.sum(&b).unwrap().sum(&c).unwrap(), a.sum(&b.sum(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.intersect(&b).unwrap().intersect(&c).unwrap(),
                a.intersect(&b.intersect(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.annihilator().annihilator(), a.clone());
            let ab = a.intersect(&b).unwrap();
            prop_assert!(ab.intersect(&c).unwrap().is_subspace_of(&a.intersect(&c).unwrap()));
        }
    }
}
