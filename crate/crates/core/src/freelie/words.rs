//! Alphabets of bigraded letters, words, and Lyndon words.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use super::Coeff;

pub type Word = Vec<u8>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlphabetKind {
    /// α_{p,q}, p, q ≥ 1, p + q ≤ N.
    Alpha,
    /// z_{p,q}, same shape as α.
    Z,
    /// t₁, t₂.
    Planar,
}

/// A letter of bidegree (−p, −q); we store the drop `(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: String,
    pub p: u32,
    pub q: u32,
}

impl Letter {
    pub fn weight(&self) -> u32 {
        self.p + self.q
    }
}

/// An ordered alphabet. Letter order is the order of the indices, which is
/// also the order used for Lyndon words.
pub struct Alphabet {
    kind: AlphabetKind,
    truncation: u32,
    letters: Vec<Letter>,
    expansions: Mutex<HashMap<Word, Arc<BTreeMap<Word, Coeff>>>>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.letters == other.letters
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?}, {} letters)", self.kind, self.letters.len())
    }
}

impl Alphabet {
    fn build(kind: AlphabetKind, truncation: u32, letters: Vec<Letter>) -> Arc<Self> {
        assert!(letters.len() < 256, "alphabet too large");
        Arc::new(Alphabet {
            kind,
            truncation,
            letters,
            expansions: Mutex::new(HashMap::new()),
        })
    }

    fn bigraded(kind: AlphabetKind, n: u32, prefix: &str) -> Arc<Self> {
        let mut letters = Vec::new();
        for w in 2..=n {
            for p in 1..w {
                letters.push(Letter {
                    name: format!("{prefix}[{p},{}]", w - p),
                    p,
                    q: w - p,
                });
            }
        }
        Alphabet::build(kind, n, letters)
    }

    /// α_{p,q} with p, q ≥ 1 and p + q ≤ n, ordered by (p + q, p).
    pub fn alpha(n: u32) -> Arc<Self> {
        Alphabet::bigraded(AlphabetKind::Alpha, n, "a")
    }

    pub fn z(n: u32) -> Arc<Self> {
        Alphabet::bigraded(AlphabetKind::Z, n, "z")
    }

    /// t₁ of bidegree (−1, 0) and t₂ of bidegree (0, −1).
    pub fn planar(n: u32) -> Arc<Self> {
        let letters = vec![
            Letter {
                name: "t1".into(),
                p: 1,
                q: 0,
            },
            Letter {
                name: "t2".into(),
                p: 0,
                q: 1,
            },
        ];
        Alphabet::build(AlphabetKind::Planar, n, letters)
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    /// Weight bound for everything built over this alphabet.
    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, i: u8) -> &Letter {
        &self.letters[i as usize]
    }

    pub fn index_of(&self, p: u32, q: u32) -> Option<u8> {
        self.letters
            .iter()
            .position(|l| l.p == p && l.q == q)
            .map(|i| i as u8)
    }

    pub fn weight(&self, w: &[u8]) -> u32 {
        w.iter().map(|&a| self.letter(a).weight()).sum()
    }

    pub fn bidegree(&self, w: &[u8]) -> (u32, u32) {
        w.iter().fold((0, 0), |(p, q), &a| {
            let l = self.letter(a);
            (p + l.p, q + l.q)
        })
    }

    /// All nonempty words of weight at most `n`, in lexicographic order.
    pub fn words_up_to(&self, n: u32) -> Vec<Word> {
        let mut out = Vec::new();
        let mut stack: Vec<u8> = Vec::new();
        self.extend_words(n, &mut stack, &mut out);
        out
    }

    fn extend_words(&self, budget: u32, stack: &mut Vec<u8>, out: &mut Vec<Word>) {
        for (i, l) in self.letters.iter().enumerate() {
            if l.weight() <= budget {
                stack.push(i as u8);
                out.push(stack.clone());
                self.extend_words(budget - l.weight(), stack, out);
                stack.pop();
            }
        }
    }

    /// Lyndon words of weight at most `n`, grouped by bidegree.
    pub fn lyndon_basis(&self, n: u32) -> BTreeMap<(u32, u32), Vec<Word>> {
        let mut out: BTreeMap<(u32, u32), Vec<Word>> = BTreeMap::new();
        for w in self.words_up_to(n) {
            if is_lyndon(&w) {
                out.entry(self.bidegree(&w)).or_default().push(w);
            }
        }
        out
    }

    /// Bracketed form of a Lyndon word, e.g. `[a[1,1], a[2,1]]`.
    pub fn bracket_string(&self, w: &[u8]) -> String {
        if w.len() == 1 {
            return self.letter(w[0]).name.clone();
        }
        let (u, v) = standard_factorization(w);
        format!("[{}, {}]", self.bracket_string(&u), self.bracket_string(&v))
    }

    pub fn word_string(&self, w: &[u8]) -> String {
        w.iter()
            .map(|&a| self.letter(a).name.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub(crate) fn expansion_cache(&self) -> &Mutex<HashMap<Word, Arc<BTreeMap<Word, Coeff>>>> {
        &self.expansions
    }
}

/// Strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// w = uv with v the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[u8]) -> (Word, Word) {
    assert!(w.len() >= 2, "standard factorization of a letter");
    let i = (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("a single letter is Lyndon");
    (w[..i].to_vec(), w[i..].to_vec())
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of Lyndon words on two letters with `a` copies of the first and `b` of the second.
pub fn necklace_count(a: u64, b: u64) -> u64 {
    let n = a + b;
    if n == 0 {
        return 0;
    }
    let g = num_integer::gcd(a, b);
    let s: i64 = (1..=g)
        .filter(|d| g % d == 0)
        .map(|d| mobius(d) * binomial(n / d, a / d) as i64)
        .sum();
    (s / n as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_predicate() {
        assert!(is_lyndon(&[0]));
        assert!(is_lyndon(&[0, 1]));
        assert!(!is_lyndon(&[1, 0]));
        assert!(!is_lyndon(&[0, 0]));
        assert!(is_lyndon(&[0, 0, 1]));
        assert!(is_lyndon(&[0, 1, 1]));
        assert!(!is_lyndon(&[0, 1, 0, 1]));
        assert_eq!(standard_factorization(&[0, 0, 1]), (vec![0], vec![0, 1]));
        assert_eq!(standard_factorization(&[0, 1, 1]), (vec![0, 1], vec![1]));
    }

    #[test]
    fn single_letter_alphabet() {
        let a = Alphabet::alpha(2);
        assert_eq!(a.len(), 1);
        let basis = a.lyndon_basis(4);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[&(1, 1)], vec![vec![0]]);
    }

    #[test]
    fn planar_counts() {
        let t = Alphabet::planar(3);
        let basis = t.lyndon_basis(3);
        assert_eq!(basis[&(2, 1)], vec![vec![0, 0, 1]]);
        assert_eq!(t.bracket_string(&[0, 0, 1]), "[t1, [t1, t2]]");
        let basis = t.lyndon_basis(9);
        for a in 0..=9u32 {
            for b in 0..=9 - a {
                let n = basis.get(&(a, b)).map_or(0, Vec::len) as u64;
                assert_eq!(n, necklace_count(a as u64, b as u64), "({a},{b})");
            }
        }
    }

    #[test]
    fn alphabet_order() {
        let a = Alphabet::alpha(4);
        let names: Vec<_> = a.letters().iter().map(|l| l.name.as_str()).collect();
        assert_eq!(names, ["a[1,1]", "a[1,2]", "a[2,1]", "a[1,3]", "a[2,2]", "a[3,1]"]);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(7), -1);
    }
}
