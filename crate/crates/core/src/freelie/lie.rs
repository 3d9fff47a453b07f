//! Elements of a free Lie algebra in Lyndon coordinates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::tensor::TensorSeries;
use super::words::{is_lyndon, standard_factorization, Alphabet, Word};
use super::Coeff;
use crate::algebra::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Σ c_w P_w over Lyndon words w, where P_w is the standard bracketing.
#[derive(Clone, PartialEq, Eq)]
pub struct LiePolynomial {
    alphabet: Arc<Alphabet>,
    coords: BTreeMap<Word, Coeff>,
}

/// The expansion of P_w in the tensor algebra (not truncated), cached per alphabet.
pub fn lyndon_expansion(alphabet: &Alphabet, w: &[u8]) -> Arc<BTreeMap<Word, Coeff>> {
    if let Some(e) = alphabet.expansion_cache().lock().unwrap().get(w) {
        return e.clone();
    }
    let e = if w.len() == 1 {
        BTreeMap::from([(w.to_vec(), Coeff::one())])
    } else {
        let (u, v) = standard_factorization(w);
        let (pu, pv) = (lyndon_expansion(alphabet, &u), lyndon_expansion(alphabet, &v));
        let mut out: BTreeMap<Word, Coeff> = BTreeMap::new();
        for (x, cx) in pu.iter() {
            for (y, cy) in pv.iter() {
                let c = cx * cy;
                let mut xy = x.clone();
                xy.extend_from_slice(y);
                *out.entry(xy).or_insert_with(Coeff::zero) += &c;
                let mut yx = y.clone();
                yx.extend_from_slice(x);
                *out.entry(yx).or_insert_with(Coeff::zero) -= &c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    let e = Arc::new(e);
    alphabet
        .expansion_cache()
        .lock()
        .unwrap()
        .insert(w.to_vec(), e.clone());
    e
}

impl LiePolynomial {
    pub fn zero(alphabet: &Arc<Alphabet>) -> Self {
        LiePolynomial {
            alphabet: alphabet.clone(),
            coords: BTreeMap::new(),
        }
    }

    pub fn letter(alphabet: &Arc<Alphabet>, a: u8) -> Self {
        LiePolynomial::basis(alphabet, vec![a], Coeff::one())
    }

    /// `c · P_w` for a Lyndon word `w`.
    pub fn basis(alphabet: &Arc<Alphabet>, w: Word, c: Coeff) -> Self {
        assert!(is_lyndon(&w), "not a Lyndon word");
        let mut x = LiePolynomial::zero(alphabet);
        if !c.is_zero() {
            x.coords.insert(w, c);
        }
        x
    }

    pub fn from_coords(alphabet: &Arc<Alphabet>, coords: BTreeMap<Word, Coeff>) -> Result<Self> {
        if let Some(w) = coords.keys().find(|w| !is_lyndon(w)) {
            return Err(Error::NotLie(format!("{} is not a Lyndon word", alphabet.word_string(w))));
        }
        Ok(LiePolynomial {
            alphabet: alphabet.clone(),
            coords: coords.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn coords(&self) -> &BTreeMap<Word, Coeff> {
        &self.coords
    }

    pub fn coeff(&self, w: &[u8]) -> Coeff {
        self.coords.get(w).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coords = self.coords.clone();
        for (w, c) in &other.coords {
            *coords.entry(w.clone()).or_insert_with(Coeff::zero) += c;
        }
        coords.retain(|_, c| !c.is_zero());
        LiePolynomial {
            alphabet: self.alphabet.clone(),
            coords,
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        LiePolynomial {
            alphabet: self.alphabet.clone(),
            coords: self
                .coords
                .iter()
                .map(|(w, x)| (w.clone(), x * c))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Coeff::one()))
    }

    pub fn to_tensor(&self) -> TensorSeries {
        let mut s = TensorSeries::zero(&self.alphabet);
        for (w, c) in &self.coords {
            for (u, cu) in lyndon_expansion(&self.alphabet, w).iter() {
                s.add_term(u.clone(), cu * c);
            }
        }
        s
    }

    /// Lyndon coordinates of a Lie element given in the tensor algebra.
    pub fn from_tensor(x: &TensorSeries) -> Result<Self> {
        let alphabet = x.alphabet().clone();
        let mut rest: BTreeMap<Word, Coeff> = x.terms().clone();
        let mut coords = BTreeMap::new();
        while let Some((w, c)) = rest.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            if !is_lyndon(&w) {
                return Err(Error::NotLie(format!(
                    "smallest word {} is not Lyndon",
                    alphabet.word_string(&w)
                )));
            }
            for (u, cu) in lyndon_expansion(&alphabet, &w).iter() {
                let e = rest.entry(u.clone()).or_insert_with(Coeff::zero);
                *e -= cu * &c;
                if e.is_zero() {
                    rest.remove(u);
                }
            }
            coords.insert(w, c);
        }
        Ok(LiePolynomial { alphabet, coords })
    }

    /// Bracket, truncated at the alphabet's weight bound.
    pub fn bracket(&self, other: &Self) -> Self {
        LiePolynomial::from_tensor(&self.to_tensor().bracket(&other.to_tensor()))
            .expect("a bracket of Lie elements is a Lie element")
    }

    /// The bihomogeneous component of drop `(p, q)`.
    pub fn component(&self, p: u32, q: u32) -> Self {
        LiePolynomial {
            alphabet: self.alphabet.clone(),
            coords: self
                .coords
                .iter()
                .filter(|(w, _)| self.alphabet.bidegree(w) == (p, q))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn bidegrees(&self) -> BTreeSet<(u32, u32)> {
        self.coords.keys().map(|w| self.alphabet.bidegree(w)).collect()
    }

    /// Evaluates at an assignment of the letters, brackets becoming the target's bracket.
    pub fn evaluate<T: LieTarget>(&self, zero: &T, image: &dyn Fn(u8) -> T) -> T {
        let mut memo = HashMap::new();
        self.evaluate_memo(zero, image, &mut memo)
    }

    /// As [`evaluate`](Self::evaluate), reusing bracket values across calls.
    pub fn evaluate_memo<T: LieTarget>(
        &self,
        zero: &T,
        image: &dyn Fn(u8) -> T,
        memo: &mut HashMap<Word, T>,
    ) -> T {
        let mut acc = zero.clone();
        for (w, c) in &self.coords {
            let v = eval_word(w, image, memo);
            acc = acc.add(&v.scale(c));
        }
        acc
    }

    /// Matrix substitution: letters ↦ matrices, brackets ↦ commutators.
    pub fn substitute(&self, n: usize, assignment: &dyn Fn(u8) -> Matrix) -> Matrix {
        self.evaluate(&Matrix::zeros(n, n), assignment)
    }
}

fn eval_word<T: LieTarget>(w: &[u8], image: &dyn Fn(u8) -> T, memo: &mut HashMap<Word, T>) -> T {
    if let Some(v) = memo.get(w) {
        return v.clone();
    }
    let v = if w.len() == 1 {
        image(w[0])
    } else {
        let (u, x) = standard_factorization(w);
        let a = eval_word(&u, image, memo);
        let b = eval_word(&x, image, memo);
        a.lie_bracket(&b)
    };
    memo.insert(w.to_vec(), v.clone());
    v
}

/// Anything free Lie polynomials can be evaluated in.
pub trait LieTarget: Clone {
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &Coeff) -> Self;
    fn lie_bracket(&self, other: &Self) -> Self;
}

impl LieTarget for Matrix {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: &Coeff) -> Self {
        Matrix::scale(self, &Scalar::from_rational(c.clone()))
    }
    fn lie_bracket(&self, other: &Self) -> Self {
        self.commutator(other)
    }
}

impl LieTarget for TensorSeries {
    fn add(&self, other: &Self) -> Self {
        TensorSeries::add(self, other)
    }
    fn scale(&self, c: &Coeff) -> Self {
        TensorSeries::scale(self, c)
    }
    fn lie_bracket(&self, other: &Self) -> Self {
        self.bracket(other)
    }
}

impl fmt::Display for LiePolynomial {
    /// `c₁ P_{w₁} + c₂ P_{w₂} + …` with brackets spelled out, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Word, &Coeff)> = self.coords.iter().collect();
        terms.sort_by_key(|(w, _)| (w.len(), (*w).clone()));
        for (k, (w, c)) in terms.into_iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}/{} {}", c.numer(), c.denom(), self.alphabet.bracket_string(w))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LiePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    #[test]
    fn expansion_of_standard_words() {
        let a = Alphabet::planar(3);
        let e = lyndon_expansion(&a, &[0, 1]);
        assert_eq!(e.len(), 2);
        assert_eq!(e[&vec![0, 1]], rat(1, 1));
        assert_eq!(e[&vec![1, 0]], rat(-1, 1));
        // P_w = w + larger words
        let e = lyndon_expansion(&a, &[0, 0, 1]);
        assert_eq!(e.keys().next().unwrap(), &vec![0, 0, 1]);
        assert_eq!(e[&vec![0, 0, 1]], rat(1, 1));
    }

    #[test]
    fn non_lie_elements_are_rejected() {
        let a = Alphabet::planar(3);
        let x = TensorSeries::word(&a, vec![0, 1], rat(1, 1));
        assert!(matches!(LiePolynomial::from_tensor(&x), Err(Error::NotLie(_))));
    }

    #[test]
    fn matrix_substitution_is_commutator() {
        let a = Alphabet::alpha(5);
        let (i11, i21) = (a.index_of(1, 1).unwrap(), a.index_of(2, 1).unwrap());
        let x = LiePolynomial::letter(&a, i11).bracket(&LiePolynomial::letter(&a, i21));
        let m1 = Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 2], &[0, 0, 0]]);
        let m2 = Matrix::from_ints(&[&[0, 0, 5], &[0, 0, 0], &[0, 0, 0]]);
        let got = x.substitute(3, &|l| if l == i11 { m1.clone() } else if l == i21 { m2.clone() } else { Matrix::zeros(3, 3) });
        assert_eq!(got, m1.commutator(&m2));
    }

    fn arb_lie(a: Arc<Alphabet>) -> impl Strategy<Value = LiePolynomial> {
        let words: Vec<Word> = a
            .lyndon_basis(a.truncation())
            .into_values()
            .flatten()
            .filter(|w| w.len() <= 2)
            .collect();
        proptest::collection::vec((0..words.len(), -3i64..=3), 1..4).prop_map(move |v| {
            let mut x = LiePolynomial::zero(&a);
            for (i, c) in v {
                x = x.add(&LiePolynomial::basis(&a, words[i].clone(), rat(c, 1)));
            }
            x
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn jacobi_and_antisymmetry(
            (x, y, z) in (arb_lie(Alphabet::planar(6)), arb_lie(Alphabet::planar(6)), arb_lie(Alphabet::planar(6)))
        ) {
            prop_assert_eq!(x.bracket(&y), y.bracket(&x).scale(&rat(-1, 1)));
            let j = x.bracket(&y.bracket(&z))
                .add(&y.bracket(&z.bracket(&x)))
                .add(&z.bracket(&x.bracket(&y)));
            prop_assert!(j.is_zero());
        }
    }
}
