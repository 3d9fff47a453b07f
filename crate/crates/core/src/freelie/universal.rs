//! The logarithm of the universal path-ordered exponential along the
//! hypotenuse (−1,0) → (0,−1), and its inverse generator change.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::lie::LiePolynomial;
use super::tensor::TensorSeries;
use super::words::{Alphabet, Word};
use super::Coeff;
use crate::algebra::{Matrix, Poly, Scalar};
use crate::error::{Error, Result};

/// Environment variable naming a directory for on-disk table caches.
pub const CACHE_ENV: &str = "HODGE_GAUGE_LIE_CACHE";

/// Largest truncation the tables are built for.
pub const MAX_TRUNCATION: u32 = 12;

/// f_{p,q}(t) = −t^{p−1}(−1−t)^{q−1}: the coefficient of α_{p,q} in ω along t₁ = t, t₂ = −1−t.
pub fn hypotenuse_density(p: u32, q: u32) -> Poly {
    let minus_one_minus_t = Poly::new(vec![Scalar::from_int(-1), Scalar::from_int(-1)]);
    let tp = Poly::monomial(Scalar::from_int(-1), (p - 1) as usize);
    &tp * &minus_one_minus_t.pow(q - 1)
}

/// ∫_{−1}^0 −t^{p−1}(−1−t)^{q−1} dt.
pub fn abelian_coefficient(p: u32, q: u32) -> Coeff {
    let v = hypotenuse_density(p, q).integrate(&Scalar::from_int(-1), &Scalar::zero());
    v.re().clone()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Closed form (−1)^{p+q+1}(p−1)!(q−1)!/(p+q−1)! of the abelian coefficient.
pub fn beta_coefficient(p: u32, q: u32) -> Coeff {
    let c = Coeff::new(factorial(p - 1) * factorial(q - 1), factorial(p + q - 1));
    if (p + q) % 2 == 0 {
        -c
    } else {
        c
    }
}

/// The leading coefficient (−1)^{p+q}·C(p+q, p) as printed in the source.
pub fn stated_coefficient(p: u32, q: u32) -> Coeff {
    let b = factorial(p + q) / (factorial(p) * factorial(q));
    let c = Coeff::from_integer(b);
    if (p + q) % 2 == 0 {
        c
    } else {
        -c
    }
}

/// One row of the comparison between the computed and the stated leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientComparison {
    pub p: u32,
    pub q: u32,
    pub computed: String,
    pub stated: String,
    pub agree: bool,
}

pub fn coefficient_comparison(n: u32) -> Vec<CoefficientComparison> {
    let mut out = Vec::new();
    for w in 2..=n {
        for p in 1..w {
            let q = w - p;
            let (c, s) = (abelian_coefficient(p, q), stated_coefficient(p, q));
            out.push(CoefficientComparison {
                p,
                q,
                computed: format!("{}/{}", c.numer(), c.denom()),
                stated: format!("{}/{}", s.numer(), s.denom()),
                agree: c == s,
            });
        }
    }
    out
}

/// U = Pexp of ω along the hypotenuse in the truncated tensor algebra on the α's,
/// with U′ = U·ω (earlier letters to the left).
pub fn universal_pexp(alpha: &Arc<Alphabet>) -> TensorSeries {
    let n = alpha.truncation();
    let densities: Vec<Poly> = alpha
        .letters()
        .iter()
        .map(|l| hypotenuse_density(l.p, l.q))
        .collect();
    let minus_one = Scalar::from_int(-1);
    let mut u = TensorSeries::one(alpha);
    let mut frontier: Vec<(Word, u32, Poly)> = vec![(Vec::new(), 0, Poly::one())];
    while let Some((w, wt, g)) = frontier.pop() {
        for (i, l) in alpha.letters().iter().enumerate() {
            if wt + l.weight() > n {
                continue;
            }
            let anti = (&g * &densities[i]).antiderivative();
            let g2 = &anti - &Poly::constant(anti.eval(&minus_one));
            let mut w2 = w.clone();
            w2.push(i as u8);
            let c = g2.eval(&Scalar::zero());
            u.add_term(w2.clone(), c.re().clone());
            frontier.push((w2, wt + l.weight(), g2));
        }
    }
    u
}

/// z = log U split into bihomogeneous components z_{p,q}, as Lie polynomials in the α's.
pub fn universal_log_pexp(n: u32) -> Result<BTreeMap<(u32, u32), LiePolynomial>> {
    Ok(lie_tables(n)?.z_in_alpha.clone())
}

fn compute_z(alpha: &Arc<Alphabet>) -> Result<BTreeMap<(u32, u32), LiePolynomial>> {
    let z = universal_pexp(alpha).log();
    if !z.is_primitive() {
        return Err(Error::Internal("log of the universal transport is not primitive".into()));
    }
    let lie = LiePolynomial::from_tensor(&z)?;
    if lie.to_tensor() != z {
        return Err(Error::Internal("Lyndon coordinates do not reproduce log U".into()));
    }
    Ok(alpha
        .letters()
        .iter()
        .map(|l| ((l.p, l.q), lie.component(l.p, l.q)))
        .collect())
}

/// Solves z_{p,q} = c_{p,q}·α_{p,q} + S_{p,q}(α) for the α's, level by level.
pub fn invert_generator_change(
    alpha: &Arc<Alphabet>,
    zab: &Arc<Alphabet>,
    z_in_alpha: &BTreeMap<(u32, u32), LiePolynomial>,
) -> Result<BTreeMap<(u32, u32), LiePolynomial>> {
    let mut images: Vec<TensorSeries> = Vec::new();
    let mut out = BTreeMap::new();
    for (i, l) in alpha.letters().iter().enumerate() {
        let (p, q) = (l.p, l.q);
        let zpq = &z_in_alpha[&(p, q)];
        let c = zpq.coeff(&[i as u8]);
        if c.is_zero() {
            return Err(Error::ZeroLeadingCoefficient { p, q });
        }
        let rest = zpq.sub(&LiePolynomial::letter(alpha, i as u8).scale(&c));
        for w in rest.coords().keys() {
            for &a in w {
                let m = alpha.letter(a);
                if !(m.p < p && m.q < q) {
                    return Err(Error::Internal(format!(
                        "z[{p},{q}] is not triangular: contains {}",
                        m.name
                    )));
                }
            }
        }
        let zero = TensorSeries::zero(zab);
        let s = rest.evaluate(&zero, &|a| images[a as usize].clone());
        let zi = zab.index_of(p, q).expect("same shape alphabets");
        let rhs = TensorSeries::letter(zab, zi).sub(&s);
        let expr = LiePolynomial::from_tensor(&rhs)?.scale(&(Coeff::one() / c));
        images.push(expr.to_tensor());
        out.insert((p, q), expr);
    }
    Ok(out)
}

/// The generator-change tables for one truncation.
#[derive(Debug)]
pub struct LieTables {
    pub truncation: u32,
    pub alpha: Arc<Alphabet>,
    pub z: Arc<Alphabet>,
    pub z_in_alpha: BTreeMap<(u32, u32), LiePolynomial>,
    pub alpha_in_z: BTreeMap<(u32, u32), LiePolynomial>,
}

impl LieTables {
    fn compute(n: u32) -> Result<Self> {
        let alpha = Alphabet::alpha(n);
        let z = Alphabet::z(n);
        let z_in_alpha = compute_z(&alpha)?;
        let alpha_in_z = invert_generator_change(&alpha, &z, &z_in_alpha)?;
        Ok(LieTables {
            truncation: n,
            alpha,
            z,
            z_in_alpha,
            alpha_in_z,
        })
    }

    /// Leading coefficient of α_{p,q} in z_{p,q}.
    pub fn leading(&self, p: u32, q: u32) -> Coeff {
        let i = self.alpha.index_of(p, q).expect("bidegree within truncation");
        self.z_in_alpha[&(p, q)].coeff(&[i])
    }

    /// Substituting the α-in-z expressions into z_{p,q}(α) returns the letter z_{p,q}.
    pub fn roundtrip_holds(&self) -> bool {
        let images: Vec<TensorSeries> = self
            .alpha
            .letters()
            .iter()
            .map(|l| self.alpha_in_z[&(l.p, l.q)].to_tensor())
            .collect();
        let zero = TensorSeries::zero(&self.z);
        self.z_in_alpha.iter().all(|(&(p, q), x)| {
            let back = x.evaluate(&zero, &|a| images[a as usize].clone());
            back == TensorSeries::letter(&self.z, self.z.index_of(p, q).unwrap())
        })
    }

    /// A_{p,q} = α_{p,q}(z ↦ D) for the components D_{p,q} of log δ.
    pub fn connection_blocks(
        &self,
        n: usize,
        d: &BTreeMap<(i32, i32), Matrix>,
    ) -> BTreeMap<(i32, i32), Matrix> {
        let zero = Matrix::zeros(n, n);
        let image = |a: u8| {
            let l = self.z.letter(a);
            d.get(&(l.p as i32, l.q as i32)).cloned().unwrap_or_else(|| zero.clone())
        };
        let mut memo = HashMap::new();
        let mut out = BTreeMap::new();
        for (&(p, q), expr) in &self.alpha_in_z {
            let m = expr.evaluate_memo(&zero, &image, &mut memo);
            if !m.is_zero() {
                out.insert((p as i32, q as i32), m);
            }
        }
        out
    }

    /// z_{p,q}(A) for FS-gauge blocks A_{p,q}; this is log of the triangle holonomy.
    pub fn log_components(
        &self,
        n: usize,
        a: &BTreeMap<(i32, i32), Matrix>,
    ) -> BTreeMap<(i32, i32), Matrix> {
        let zero = Matrix::zeros(n, n);
        let image = |i: u8| {
            let l = self.alpha.letter(i);
            a.get(&(l.p as i32, l.q as i32)).cloned().unwrap_or_else(|| zero.clone())
        };
        let mut memo = HashMap::new();
        let mut out = BTreeMap::new();
        for (&(p, q), expr) in &self.z_in_alpha {
            let m = expr.evaluate_memo(&zero, &image, &mut memo);
            if !m.is_zero() {
                out.insert((p as i32, q as i32), m);
            }
        }
        out
    }

    /// One line per bidegree: `z[p,q] = …` then `a[p,q] = …`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for ((p, q), x) in &self.z_in_alpha {
            s.push_str(&format!("z[{p},{q}] = {x}\n"));
        }
        for ((p, q), x) in &self.alpha_in_z {
            s.push_str(&format!("a[{p},{q}] = {x}\n"));
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
struct StoredTerm {
    word: Vec<u8>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct StoredPoly {
    p: u32,
    q: u32,
    terms: Vec<StoredTerm>,
}

#[derive(Serialize, Deserialize)]
struct StoredTables {
    truncation: u32,
    z_in_alpha: Vec<StoredPoly>,
    alpha_in_z: Vec<StoredPoly>,
}

fn store(map: &BTreeMap<(u32, u32), LiePolynomial>) -> Vec<StoredPoly> {
    map.iter()
        .map(|(&(p, q), x)| StoredPoly {
            p,
            q,
            terms: x
                .coords()
                .iter()
                .map(|(w, c)| StoredTerm {
                    word: w.clone(),
                    coeff: format!("{}/{}", c.numer(), c.denom()),
                })
                .collect(),
        })
        .collect()
}

fn restore(alphabet: &Arc<Alphabet>, v: Vec<StoredPoly>) -> Option<BTreeMap<(u32, u32), LiePolynomial>> {
    let mut out = BTreeMap::new();
    for sp in v {
        let mut coords = BTreeMap::new();
        for t in sp.terms {
            if t.word.iter().any(|&a| a as usize >= alphabet.len()) {
                return None;
            }
            coords.insert(t.word, t.coeff.parse::<Coeff>().ok()?);
        }
        out.insert((sp.p, sp.q), LiePolynomial::from_coords(alphabet, coords).ok()?);
    }
    Some(out)
}

fn cache_file(n: u32) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    Some(PathBuf::from(dir).join(format!("lie-tables-{n}.json")))
}

fn load_from_disk(n: u32) -> Option<LieTables> {
    let text = std::fs::read_to_string(cache_file(n)?).ok()?;
    let stored: StoredTables = serde_json::from_str(&text).ok()?;
    if stored.truncation != n {
        return None;
    }
    let alpha = Alphabet::alpha(n);
    let z = Alphabet::z(n);
    let z_in_alpha = restore(&alpha, stored.z_in_alpha)?;
    let alpha_in_z = restore(&z, stored.alpha_in_z)?;
    if z_in_alpha.len() != alpha.len() || alpha_in_z.len() != z.len() {
        return None;
    }
    Some(LieTables {
        truncation: n,
        alpha,
        z,
        z_in_alpha,
        alpha_in_z,
    })
}

fn save_to_disk(t: &LieTables) {
    let Some(path) = cache_file(t.truncation) else {
        return;
    };
    let stored = StoredTables {
        truncation: t.truncation,
        z_in_alpha: store(&t.z_in_alpha),
        alpha_in_z: store(&t.alpha_in_z),
    };
    if let Ok(text) = serde_json::to_string(&stored) {
        // best effort: a missing or read-only cache directory only costs recomputation
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if std::fs::write(&tmp, text).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
    }
}

static TABLES: OnceLock<Mutex<HashMap<u32, Arc<LieTables>>>> = OnceLock::new();

/// Cached generator-change tables for truncation `n` (2 ≤ n ≤ 12).
pub fn lie_tables(n: u32) -> Result<Arc<LieTables>> {
    if !(2..=MAX_TRUNCATION).contains(&n) {
        return Err(Error::Parse(format!(
            "truncation {n} outside the supported range 2..={MAX_TRUNCATION}"
        )));
    }
    let cache = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let tables = match load_from_disk(n) {
        Some(t) => t,
        None => {
            let t = LieTables::compute(n)?;
            save_to_disk(&t);
            t
        }
    };
    let tables = Arc::new(tables);
    Ok(cache.lock().unwrap().entry(n).or_insert(tables).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use num_traits::Signed;

    #[test]
    fn low_degree_coefficients() {
        let t = lie_tables(5).unwrap();
        let a = &t.alpha;
        let z11 = &t.z_in_alpha[&(1, 1)];
        assert_eq!(z11, &LiePolynomial::letter(a, a.index_of(1, 1).unwrap()).scale(&rat(-1, 1)));
        let z21 = &t.z_in_alpha[&(2, 1)];
        assert_eq!(z21, &LiePolynomial::letter(a, a.index_of(2, 1).unwrap()).scale(&rat(1, 2)));
        let z32 = &t.z_in_alpha[&(3, 2)];
        let i11 = a.index_of(1, 1).unwrap();
        let i21 = a.index_of(2, 1).unwrap();
        assert_eq!(z32.coeff(&[a.index_of(3, 2).unwrap()]), rat(1, 12));
        assert_eq!(z32.coeff(&[i11, i21]), rat(1, 12));
        assert_eq!(z32.coords().len(), 2);
        let a11 = &t.alpha_in_z[&(1, 1)];
        assert_eq!(a11.coeff(&[t.z.index_of(1, 1).unwrap()]), rat(-1, 1));
        let a21 = &t.alpha_in_z[&(2, 1)];
        assert_eq!(a21.coeff(&[t.z.index_of(2, 1).unwrap()]), rat(2, 1));
    }

    #[test]
    fn abelian_coefficients() {
        assert_eq!(abelian_coefficient(1, 1), rat(-1, 1));
        assert_eq!(abelian_coefficient(2, 1), rat(1, 2));
        assert_eq!(abelian_coefficient(2, 2), rat(-1, 6));
        for p in 1..8 {
            for q in 1..8 - p {
                assert_eq!(abelian_coefficient(p, q), beta_coefficient(p, q));
            }
        }
        assert_eq!(stated_coefficient(1, 1), rat(2, 1));
        assert!(!coefficient_comparison(3)[0].agree);
        let t = lie_tables(6).unwrap();
        for l in t.alpha.letters() {
            assert_eq!(t.leading(l.p, l.q), abelian_coefficient(l.p, l.q));
        }
    }

    #[test]
    fn roundtrip_and_range() {
        assert!(lie_tables(6).unwrap().roundtrip_holds());
        assert!(lie_tables(1).is_err());
        assert!(lie_tables(13).is_err());
        assert!(hypotenuse_density(1, 1).integrate(&Scalar::from_int(-1), &Scalar::zero()).re().is_negative());
    }
}
