//! Free generators of the commutant of the free Lie algebra on t₁, t₂.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::lie::LiePolynomial;
use super::tensor::TensorSeries;
use super::words::{necklace_count, Alphabet};
use crate::algebra::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Rank data for one bidegree (a, b) of the commutant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidegreeRank {
    pub a: u32,
    pub b: u32,
    /// Rank of the images of the z-Lyndon basis.
    pub image_rank: usize,
    /// Number of Lyndon words on the z's in this bidegree.
    pub source_dim: usize,
    /// Dimension of the commutant here (two-letter necklace count).
    pub target_dim: usize,
}

impl BidegreeRank {
    pub fn pass(&self) -> bool {
        self.image_rank == self.source_dim && self.image_rank == self.target_dim
    }
}

#[derive(Clone, Debug)]
pub struct CommutantReport {
    pub truncation: u32,
    pub generators: BTreeMap<(u32, u32), LiePolynomial>,
    pub ranks: Vec<BidegreeRank>,
}

impl CommutantReport {
    pub fn pass(&self) -> bool {
        self.ranks.iter().all(BidegreeRank::pass)
    }
}

/// φ(z_{p,q}) = ad(t₂)^{q−1} ad(t₁)^p (t₂) for p, q ≥ 1, p + q ≤ n, with rank
/// checks showing the map from the free Lie algebra on the z's is bijective
/// onto the commutant in every bidegree of weight ≤ n.
pub fn commutant_generators(n: u32) -> Result<CommutantReport> {
    if n < 2 {
        return Err(Error::Parse(format!("truncation {n} must be at least 2")));
    }
    let t = Alphabet::planar(n);
    let z = Alphabet::z(n);
    let t1 = LiePolynomial::letter(&t, 0);
    let t2 = LiePolynomial::letter(&t, 1);
    let mut generators = BTreeMap::new();
    for l in z.letters() {
        let mut x = t2.clone();
        for _ in 0..l.p {
            x = t1.bracket(&x);
        }
        for _ in 1..l.q {
            x = t2.bracket(&x);
        }
        generators.insert((l.p, l.q), x);
    }

    let images: Vec<TensorSeries> = z
        .letters()
        .iter()
        .map(|l| generators[&(l.p, l.q)].to_tensor())
        .collect();
    let zero = TensorSeries::zero(&t);
    let target_basis = t.lyndon_basis(n);
    let mut memo = HashMap::new();
    let mut ranks = Vec::new();
    for ((a, b), words) in z.lyndon_basis(n) {
        let cols = target_basis.get(&(a, b)).cloned().unwrap_or_default();
        let index: BTreeMap<_, _> = cols.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut rows = Vec::new();
        for w in &words {
            let x = LiePolynomial::basis(&z, w.clone(), num_traits::One::one());
            let img = x.evaluate_memo(&zero, &|i| images[i as usize].clone(), &mut memo);
            let lie = LiePolynomial::from_tensor(&img)?;
            let mut row = vec![Scalar::from_int(0); cols.len()];
            for (u, c) in lie.coords() {
                let j = index.get(u).ok_or_else(|| {
                    Error::RankCheck(format!("image outside bidegree ({a},{b})"))
                })?;
                row[*j] = Scalar::from_rational(c.clone());
            }
            rows.push(row);
        }
        let image_rank = if cols.is_empty() {
            0
        } else {
            Matrix::from_rows(cols.len(), rows)?.rank()
        };
        ranks.push(BidegreeRank {
            a,
            b,
            image_rank,
            source_dim: words.len(),
            target_dim: necklace_count(a as u64, b as u64) as usize,
        });
    }
    // bidegrees with an empty z side still need the commutant to vanish there
    for (&(a, b), words) in &target_basis {
        if a >= 1 && b >= 1 && !ranks.iter().any(|r| (r.a, r.b) == (a, b)) {
            ranks.push(BidegreeRank {
                a,
                b,
                image_rank: 0,
                source_dim: 0,
                target_dim: words.len(),
            });
        }
    }
    ranks.sort_by_key(|r| (r.a + r.b, r.a));
    let report = CommutantReport {
        truncation: n,
        generators,
        ranks,
    };
    if let Some(r) = report.ranks.iter().find(|r| !r.pass()) {
        return Err(Error::RankCheck(format!(
            "bidegree ({},{}): rank {} vs source {} vs target {}",
            r.a, r.b, r.image_rank, r.source_dim, r.target_dim
        )));
    }
    Ok(report)
}
