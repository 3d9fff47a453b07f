//! Univariate polynomials over [`Scalar`] and polynomial matrices in a few
//! variables with matrix coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: Scalar, deg: usize) -> Self {
        let mut v = vec![Scalar::zero(); deg + 1];
        v[deg] = c;
        Poly::new(v)
    }

    /// The polynomial `t`.
    pub fn x() -> Self {
        Poly::monomial(Scalar::one(), 1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    /// `Some((c, k))` when the polynomial is `c·tᵏ` with `c ≠ 0`.
    pub fn as_monomial(&self) -> Option<(Scalar, usize)> {
        let d = self.degree()?;
        (self.lowest_degree() == Some(d)).then(|| (self.coeffs[d].clone(), d))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_int(k as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        let mut v = vec![Scalar::zero()];
        v.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * &Scalar::from_frac(1, k as i64 + 1)),
        );
        Poly::new(v)
    }

    /// ∫ₐᵇ p(t) dt.
    pub fn integrate(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let anti = self.antiderivative();
        &anti.eval(b) - &anti.eval(a)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(Scalar::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn shift_degree(&self, k: usize) -> Poly {
        let mut v = vec![Scalar::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(v)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree() else {
            return (Poly::default(), Poly::default());
        };
        if n < dd {
            return (Poly::default(), self.clone());
        }
        let mut quot = vec![Scalar::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                let t = &c * dj;
                rem[k + j] -= &t;
            }
            quot[k] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Internal("inexact polynomial division".into()))
        }
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Scalar::one())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += &(a * b);
                }
            }
        }
        Poly::new(v)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})t^{k}")?;
        }
        Ok(())
    }
}

/// A matrix with entries polynomial in `V` variables, stored as a map from
/// exponent vectors to coefficient matrices. Negative exponents are allowed
/// only when the matrix is flagged Laurent.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix<const V: usize> {
    rows: usize,
    cols: usize,
    laurent: bool,
    terms: BTreeMap<[i32; V], Matrix>,
}

impl<const V: usize> PolyMatrix<V> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            laurent: false,
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_laurent(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            laurent: true,
            ..PolyMatrix::zero(rows, cols)
        }
    }

    pub fn constant(m: Matrix) -> Self {
        let mut p = PolyMatrix::zero(m.rows(), m.cols());
        p.add_term([0; V], &m);
        p
    }

    pub fn identity(n: usize) -> Self {
        PolyMatrix::constant(Matrix::identity(n))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent
    }

    pub fn into_laurent(mut self) -> Self {
        self.laurent = true;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32; V], &Matrix)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i32; V]) -> Matrix {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.rows, self.cols))
    }

    /// Adds `m · x^e`.
    pub fn add_term(&mut self, e: [i32; V], m: &Matrix) {
        assert!(m.rows() == self.rows && m.cols() == self.cols, "term shape");
        assert!(
            self.laurent || e.iter().all(|&k| k >= 0),
            "negative exponent in a non-Laurent polynomial matrix"
        );
        if m.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(old) => &old + m,
            None => m.clone(),
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = self.empty_like();
        for (e, m) in &self.terms {
            out.add_term(*e, &m.scale(c));
        }
        out
    }

    fn empty_like(&self) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            laurent: self.laurent,
            terms: BTreeMap::new(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Matrix) -> Matrix) -> Self {
        let first = self.terms.values().next().map(&f);
        let (r, c) = first
            .as_ref()
            .map_or((self.rows, self.cols), |m| (m.rows(), m.cols()));
        let mut out = PolyMatrix {
            rows: r,
            cols: c,
            laurent: self.laurent,
            terms: BTreeMap::new(),
        };
        for (e, m) in &self.terms {
            out.add_term(*e, &f(m));
        }
        out
    }

    /// Partial derivative in variable `k`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut out = self.empty_like();
        for (e, m) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[k] -= 1;
            out.add_term(e2, &m.scale(&Scalar::from_int(e[k] as i64)));
        }
        out
    }

    /// Evaluates at a point; negative exponents need nonzero coordinates.
    pub fn eval(&self, point: &[Scalar; V]) -> Matrix {
        let mut acc = Matrix::zeros(self.rows, self.cols);
        for (e, m) in &self.terms {
            let mut c = Scalar::one();
            for (x, &k) in point.iter().zip(e) {
                c *= &x.pow(k);
            }
            acc = &acc + &m.scale(&c);
        }
        acc
    }

    /// Largest total degree present, `None` if zero.
    pub fn total_degree(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn max_abs_exponent(&self) -> i32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().map(|k| k.abs()))
            .max()
            .unwrap_or(0)
    }

    /// The (i, j) entry as an exponent map.
    pub fn entry(&self, i: usize, j: usize) -> BTreeMap<[i32; V], Scalar> {
        self.terms
            .iter()
            .filter(|(_, m)| !m[(i, j)].is_zero())
            .map(|(e, m)| (*e, m[(i, j)].clone()))
            .collect()
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(Matrix::conj)
    }
}

impl<const V: usize> Add for &PolyMatrix<V> {
    type Output = PolyMatrix<V>;
    fn add(self, rhs: &PolyMatrix<V>) -> PolyMatrix<V> {
        let mut out = self.clone();
        out.laurent |= rhs.laurent;
        for (e, m) in &rhs.terms {
            out.add_term(*e, m);
        }
        out
    }
}

impl<const V: usize> Sub for &PolyMatrix<V> {
    type Output = PolyMatrix<V>;
    fn sub(self, rhs: &PolyMatrix<V>) -> PolyMatrix<V> {
        let mut out = self.clone();
        out.laurent |= rhs.laurent;
        for (e, m) in &rhs.terms {
            out.add_term(*e, &-m);
        }
        out
    }
}

impl<const V: usize> Mul for &PolyMatrix<V> {
    type Output = PolyMatrix<V>;
    fn mul(self, rhs: &PolyMatrix<V>) -> PolyMatrix<V> {
        assert_eq!(self.cols, rhs.rows, "polynomial matrix product shape");
        let mut out = PolyMatrix {
            rows: self.rows,
            cols: rhs.cols,
            laurent: self.laurent || rhs.laurent,
            terms: BTreeMap::new(),
        };
        for (e1, a) in &self.terms {
            for (e2, b) in &rhs.terms {
                let mut e = *e1;
                for k in 0..V {
                    e[k] += e2[k];
                }
                out.add_term(e, &(a * b));
            }
        }
        out
    }
}

impl<const V: usize> fmt::Debug for PolyMatrix<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl PolyMatrix<1> {
    /// Entry (i, j) as a polynomial; requires nonnegative exponents.
    pub fn entry_poly(&self, i: usize, j: usize) -> Poly {
        let mut v = Vec::new();
        for (e, m) in &self.terms {
            let k = usize::try_from(e[0]).expect("negative exponent in entry_poly");
            if v.len() <= k {
                v.resize(k + 1, Scalar::zero());
            }
            v[k] = m[(i, j)].clone();
        }
        Poly::new(v)
    }

    /// Multiplies by `xᵏ`, `k` possibly negative.
    pub fn shift(&self, k: i32) -> Self {
        let mut out = self.empty_like();
        for (e, m) in &self.terms {
            let e2 = [e[0] + k];
            if e2[0] < 0 {
                out.laurent = true;
            }
            out.add_term(e2, m);
        }
        out
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().next().map(|e| e[0])
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().map(|e| e[0])
    }

    pub fn antiderivative(&self) -> Self {
        let mut out = self.empty_like();
        for (e, m) in &self.terms {
            assert!(e[0] >= 0, "antiderivative of a Laurent term");
            out.add_term([e[0] + 1], &m.scale(&Scalar::from_frac(1, e[0] as i64 + 1)));
        }
        out
    }

    /// Product with a scalar polynomial.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        let mut out = self.empty_like();
        for (e, m) in &self.terms {
            for (k, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.add_term([e[0] + k as i32], &m.scale(c));
                }
            }
        }
        out
    }
}

/// Exact ∫ₐᵇ p(t) dt of a polynomial matrix in one variable.
pub fn integrate_poly_segment(p: &PolyMatrix<1>, a: &Scalar, b: &Scalar) -> Matrix {
    let anti = p.antiderivative();
    &anti.eval(&[b.clone()]) - &anti.eval(&[a.clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::q;

    fn p(xs: &[i64]) -> Poly {
        Poly::new(xs.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        assert_eq!(a.pow(2), p(&[1, 2, 1]));
        assert_eq!((&a.pow(3)).div_exact(&a).unwrap(), a.pow(2));
        assert!(p(&[1, 0, 1]).div_exact(&a).is_err());
        assert_eq!(p(&[0, 0, 3]).as_monomial(), Some((q(3, 1), 2)));
        assert_eq!(p(&[1, 0, 3]).as_monomial(), None);
        assert_eq!(p(&[5, 0, 3]).derivative(), p(&[0, 6]));
    }

    #[test]
    fn integrals() {
        let (a, b) = (q(-1, 1), q(0, 1));
        let one = PolyMatrix::<1>::constant(Matrix::identity(1));
        assert_eq!(integrate_poly_segment(&one, &a, &b)[(0, 0)], q(1, 1));
        let mut mt = PolyMatrix::<1>::zero(1, 1);
        mt.add_term([1], &Matrix::from_ints(&[&[-1]]));
        assert_eq!(integrate_poly_segment(&mt, &a, &b)[(0, 0)], q(1, 2));
        let neg = PolyMatrix::<1>::constant(Matrix::from_ints(&[&[-1]]));
        assert_eq!(integrate_poly_segment(&neg, &a, &b)[(0, 0)], q(-1, 1));
    }

    #[test]
    fn integration_is_additive() {
        let f = p(&[3, -2, 7, 1]);
        let (a, m, b) = (q(-2, 3), q(1, 5), q(9, 4));
        assert_eq!(f.integrate(&a, &b), &f.integrate(&a, &m) + &f.integrate(&m, &b));
    }

    #[test]
    fn polymatrix_product_and_derivative() {
        let mut x = PolyMatrix::<2>::zero(1, 1);
        x.add_term([1, 0], &Matrix::identity(1));
        let mut y = PolyMatrix::<2>::zero(1, 1);
        y.add_term([0, 1], &Matrix::identity(1));
        let xy = &x * &y;
        assert_eq!(xy.coeff(&[1, 1]), Matrix::identity(1));
        assert_eq!(xy.derivative(0), y);
        assert_eq!(xy.eval(&[q(2, 1), q(3, 1)])[(0, 0)], q(6, 1));
    }
}
