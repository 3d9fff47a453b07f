//! Truncated noncommutative power series over an alphabet.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::words::{Alphabet, Word};
use super::Coeff;

/// A finitely supported series Σ c_w w with all words of weight at most the
/// alphabet's truncation. The empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSeries {
    alphabet: Arc<Alphabet>,
    terms: BTreeMap<Word, Coeff>,
}

impl TensorSeries {
    pub fn zero(alphabet: &Arc<Alphabet>) -> Self {
        TensorSeries {
            alphabet: alphabet.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: &Arc<Alphabet>) -> Self {
        TensorSeries::word(alphabet, Vec::new(), Coeff::one())
    }

    pub fn letter(alphabet: &Arc<Alphabet>, a: u8) -> Self {
        TensorSeries::word(alphabet, vec![a], Coeff::one())
    }

    pub fn word(alphabet: &Arc<Alphabet>, w: Word, c: Coeff) -> Self {
        let mut s = TensorSeries::zero(alphabet);
        s.add_term(w, c);
        s
    }

    pub fn from_terms(alphabet: &Arc<Alphabet>, terms: BTreeMap<Word, Coeff>) -> Self {
        let mut s = TensorSeries::zero(alphabet);
        for (w, c) in terms {
            s.add_term(w, c);
        }
        s
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn terms(&self) -> &BTreeMap<Word, Coeff> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Coeff> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[u8]) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Adds `c·w`, dropping words above the truncation.
    pub fn add_term(&mut self, w: Word, c: Coeff) {
        if c.is_zero() || self.alphabet.weight(&w) > self.alphabet.truncation() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Coeff::one()))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return TensorSeries::zero(&self.alphabet);
        }
        TensorSeries {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Truncated concatenation product.
    pub fn mul(&self, other: &Self) -> Self {
        let a = &self.alphabet;
        let n = a.truncation();
        let mut out = TensorSeries::zero(a);
        let rhs: Vec<(&Word, &Coeff, u32)> = other
            .terms
            .iter()
            .map(|(w, c)| (w, c, a.weight(w)))
            .collect();
        for (u, cu) in &self.terms {
            let wu = a.weight(u);
            for (v, cv, wv) in &rhs {
                if wu + wv > n {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, cu * *cv);
            }
        }
        out
    }

    /// xy − yx.
    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&[])
    }

    /// log(x) for x with constant term 1: Σ (−1)^{k+1}(x−1)^k / k.
    pub fn log(&self) -> Self {
        assert!(self.constant_term().is_one(), "log needs constant term 1");
        let x = self.sub(&TensorSeries::one(&self.alphabet));
        let mut acc = TensorSeries::zero(&self.alphabet);
        let mut power = x.clone();
        let mut k = 1i64;
        while !power.is_zero() {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&Coeff::new(sign.into(), k.into())));
            power = power.mul(&x);
            k += 1;
        }
        acc
    }

    /// exp(x) for x without constant term.
    pub fn exp(&self) -> Self {
        assert!(self.constant_term().is_zero(), "exp needs zero constant term");
        let mut acc = TensorSeries::one(&self.alphabet);
        let mut term = TensorSeries::one(&self.alphabet);
        let mut k = 1i64;
        loop {
            term = term.mul(self).scale(&Coeff::new(1.into(), k.into()));
            if term.is_zero() {
                return acc;
            }
            acc = acc.add(&term);
            k += 1;
        }
    }

    /// Dynkin map on each word: a₁…a_k ↦ [...[a₁, a₂], …, a_k].
    pub fn dynkin(&self) -> Self {
        let a = &self.alphabet;
        let mut out = TensorSeries::zero(a);
        for (w, c) in &self.terms {
            if w.is_empty() {
                continue;
            }
            let mut acc: BTreeMap<Word, Coeff> = BTreeMap::from([(vec![w[0]], Coeff::one())]);
            for &l in &w[1..] {
                let mut next = BTreeMap::new();
                for (u, cu) in acc {
                    let mut left = u.clone();
                    left.push(l);
                    let mut right = vec![l];
                    right.extend_from_slice(&u);
                    *next.entry(left).or_insert_with(Coeff::zero) += &cu;
                    *next.entry(right).or_insert_with(Coeff::zero) -= &cu;
                }
                acc = next;
            }
            for (u, cu) in acc {
                out.add_term(u, cu * c);
            }
        }
        out
    }

    /// Terms whose word has exactly `len` letters.
    pub fn length_component(&self, len: usize) -> Self {
        TensorSeries {
            alphabet: self.alphabet.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == len)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_length(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// `true` iff the series is invariant up to the grading factor under the
    /// Dynkin map: θ(x_ℓ) = ℓ·x_ℓ for every word length ℓ.
    pub fn is_primitive(&self) -> bool {
        if !self.constant_term().is_zero() {
            return false;
        }
        (1..=self.max_length()).all(|l| {
            let x = self.length_component(l);
            x.dynkin() == x.scale(&Coeff::from_integer((l as i64).into()))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn log_exp_inverse() {
        let a = Alphabet::planar(5);
        let x = TensorSeries::letter(&a, 0)
            .add(&TensorSeries::letter(&a, 1).scale(&rat(3, 2)))
            .add(&TensorSeries::word(&a, vec![0, 1], rat(-1, 5)));
        let e = x.exp();
        assert_eq!(e.log(), x);
    }

    #[test]
    fn bch_second_order_is_primitive() {
        let a = Alphabet::planar(4);
        let x = TensorSeries::letter(&a, 0);
        let y = TensorSeries::letter(&a, 1);
        let z = x.exp().mul(&y.exp()).log();
        assert!(z.is_primitive());
        assert_eq!(z.coeff(&[0, 1]), rat(1, 2));
        assert_eq!(z.coeff(&[1, 0]), rat(-1, 2));
        assert!(!x.mul(&y).is_primitive());
    }
}
