//! Seeded random generators for deltas, mixed Hodge structures, corruptions,
//! connections and gauge transformations, and the named fixture corpus.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Matrix, Scalar, Subspace};
use crate::connection::{Blocks, EquivariantConnection, GaugeTransformation};
use crate::doc::{ConnectionDoc, DeltaDoc, Document, MhsDoc, PathDoc, RealMhsDoc};
use crate::error::{Error, Result};
use crate::mhs::{ComplexMHS, Direction, Filtration, HodgeNumbers, RealMHS};
use crate::splitting::{basis_labels, delta_to_mhs, DeltaObject};

/// Shape of random fixtures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixtureParams {
    pub max_dim: usize,
    /// Labels p, q are drawn from `-label_bound..=label_bound`.
    pub label_bound: i32,
    /// Allow Gaussian-integer entries.
    pub complex: bool,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams {
            max_dim: 6,
            label_bound: 3,
            complex: true,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_scalar(rng: &mut impl Rng, complex: bool) -> Scalar {
    let re = rng.gen_range(-3..=3);
    if complex && rng.gen_bool(0.25) {
        Scalar::gaussian(re, rng.gen_range(-2..=2))
    } else {
        Scalar::from_int(re)
    }
}

fn nonzero_scalar(rng: &mut impl Rng, complex: bool) -> Scalar {
    loop {
        let x = small_scalar(rng, complex);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn random_hodge(rng: &mut impl Rng, p: &FixtureParams) -> HodgeNumbers {
    let n = rng.gen_range(1..=p.max_dim);
    let b = p.label_bound;
    let mut h = BTreeMap::new();
    for _ in 0..n {
        *h.entry((rng.gen_range(-b..=b), rng.gen_range(-b..=b))).or_insert(0) += 1;
    }
    HodgeNumbers::new(h)
}

/// Random δ: identity plus random entries wherever strict double lowering allows.
pub fn random_delta(rng: &mut impl Rng, p: &FixtureParams) -> DeltaObject {
    let hodge = random_hodge(rng, p);
    let labels = basis_labels(&hodge);
    let n = labels.len();
    let mut delta = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if labels[i].0 < labels[j].0 && labels[i].1 < labels[j].1 && rng.gen_bool(0.6) {
                delta[(i, j)] = small_scalar(rng, p.complex);
            }
        }
    }
    DeltaObject::new(hodge, delta).expect("generated delta is strictly double lowering")
}

/// A random invertible matrix with small integer entries.
pub fn random_invertible(rng: &mut impl Rng, n: usize, complex: bool) -> Matrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| small_scalar(rng, complex));
        if m.rank() == n {
            return m;
        }
    }
}

/// A valid MHS in general position: R · (split model of a random δ).
pub fn random_valid_mhs(rng: &mut impl Rng, p: &FixtureParams) -> Result<(DeltaObject, ComplexMHS)> {
    let d = random_delta(rng, p);
    let v = delta_to_mhs(&d)?;
    let r = random_invertible(rng, d.dim(), p.complex);
    Ok((d, v.transform(&r)?))
}

/// How a valid structure was broken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corruption {
    /// W_n replaced by W_{n−1} at a jump n.
    MergeWeight(i32),
    /// F′^p replaced by F′^{p+1} at a jump p.
    DropHodgeJump(i32),
    /// Same for F″.
    DropConjugateJump(i32),
}

/// Perturbs one filtration step so that opposedness must fail: merging a weight
/// jump puts two weights in one graded piece, and dropping a Hodge jump breaks
/// the symmetry of graded dimensions in some weight.
pub fn corrupt(rng: &mut impl Rng, v: &ComplexMHS) -> Result<(Corruption, ComplexMHS)> {
    if v.dim() == 0 {
        return Err(Error::Internal("cannot corrupt the zero structure".into()));
    }
    let wj: Vec<i32> = v.w().jumps().collect();
    let kind = if wj.len() >= 2 { rng.gen_range(0..3) } else { rng.gen_range(1..3) };
    match kind {
        0 => {
            let n = wj[rng.gen_range(1..wj.len())];
            let w = v.w().with_step(n, v.w().step(n - 1).clone())?;
            Ok((Corruption::MergeWeight(n), ComplexMHS::new(w, v.fp().clone(), v.fpp().clone())?))
        }
        1 => {
            let js: Vec<i32> = v.fp().jumps().collect();
            let p = js[rng.gen_range(0..js.len())];
            let fp = v.fp().with_step(p, v.fp().step(p + 1).clone())?;
            Ok((Corruption::DropHodgeJump(p), ComplexMHS::new(v.w().clone(), fp, v.fpp().clone())?))
        }
        _ => {
            let js: Vec<i32> = v.fpp().jumps().collect();
            let q = js[rng.gen_range(0..js.len())];
            let fpp = v.fpp().with_step(q, v.fpp().step(q + 1).clone())?;
            Ok((Corruption::DropConjugateJump(q), ComplexMHS::new(v.w().clone(), v.fp().clone(), fpp)?))
        }
    }
}

/// A random real MHS: a real split model with F moved by a random complex
/// automorphism that strictly lowers W (which leaves gr^W untouched).
pub fn random_real_mhs(rng: &mut impl Rng, p: &FixtureParams) -> Result<RealMHS> {
    let b = p.label_bound;
    let pairs = rng.gen_range(1..=p.max_dim.div_ceil(2));
    // (p, q) types of the real coordinates, each conjugate pair contributing two
    let mut types: Vec<(i32, i32)> = Vec::new();
    for _ in 0..pairs {
        let (x, y) = (rng.gen_range(-b..=b), rng.gen_range(-b..=b));
        if x == y {
            types.push((x, x));
        } else {
            types.push((x, y));
            types.push((y, x));
        }
    }
    let n = types.len();
    // complex vectors e_{p,q} in real coordinates
    let mut hodge_vectors: Vec<((i32, i32), Vec<Scalar>)> = Vec::new();
    let mut k = 0;
    while k < n {
        let (x, y) = types[k];
        let mut v = vec![Scalar::zero(); n];
        if x == y {
            v[k] = Scalar::from_int(1);
            hodge_vectors.push(((x, y), v));
            k += 1;
        } else {
            // real coordinates u = e + ē, w = i(e − ē): e = (u − i w)/2, ē = (u + i w)/2
            let mut w = vec![Scalar::zero(); n];
            v[k] = Scalar::from_frac(1, 2);
            v[k + 1] = Scalar::gaussian(0, -1) * Scalar::from_frac(1, 2);
            w[k] = Scalar::from_frac(1, 2);
            w[k + 1] = Scalar::gaussian(0, 1) * Scalar::from_frac(1, 2);
            hodge_vectors.push(((x, y), v));
            hodge_vectors.push(((y, x), w));
            k += 2;
        }
    }
    let weights: Vec<i32> = types.iter().map(|&(x, y)| x + y).collect();
    let mut g = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if weights[i] < weights[j] && rng.gen_bool(0.5) {
                g[(i, j)] = small_scalar(rng, true);
            }
        }
    }
    let (wlo, whi) = (*weights.iter().min().unwrap(), *weights.iter().max().unwrap());
    let w = Filtration::from_fn(Direction::Increasing, n, wlo, whi, |m| {
        Ok(Subspace::coordinate(n, (0..n).filter(|&i| weights[i] <= m)))
    })?;
    let f = Filtration::from_fn(Direction::Decreasing, n, -b, b, |m| {
        let vs: Vec<Vec<Scalar>> = hodge_vectors
            .iter()
            .filter(|((x, _), _)| *x >= m)
            .map(|(_, v)| g.apply(v))
            .collect();
        Subspace::span(n, &vs)
    })?;
    RealMHS::new(w, f)
}

fn random_blocks(rng: &mut impl Rng, labels: &[(i32, i32)], complex: bool) -> Blocks {
    let n = labels.len();
    let mut out = Blocks::new();
    for i in 0..n {
        for j in 0..n {
            let (p, q) = (labels[j].0 - labels[i].0, labels[j].1 - labels[i].1);
            if p >= 1 && q >= 1 && rng.gen_bool(0.5) {
                out.entry((p, q)).or_insert_with(|| Matrix::zeros(n, n))[(i, j)] =
                    nonzero_scalar(rng, complex);
            }
        }
    }
    out
}

/// Random admissible connection, generally not in the Fock–Schwinger gauge.
pub fn random_connection(rng: &mut impl Rng, hodge: &HodgeNumbers, complex: bool) -> EquivariantConnection {
    let labels = basis_labels(hodge);
    let a = random_blocks(rng, &labels, complex);
    let b = random_blocks(rng, &labels, complex);
    EquivariantConnection::new(hodge.clone(), a, b).expect("homogeneous blocks")
}

pub fn random_gauge(rng: &mut impl Rng, hodge: &HodgeNumbers, complex: bool) -> GaugeTransformation {
    let labels = basis_labels(hodge);
    GaugeTransformation::new(hodge, random_blocks(rng, &labels, complex)).expect("homogeneous blocks")
}

fn int_tag(x: i32) -> String {
    if x < 0 {
        format!("m{}", -x)
    } else {
        x.to_string()
    }
}

/// K(c): basis (e₋₁, e₀), W₋₂ = ⟨e₋₁⟩, F′⁰ = ⟨e₀⟩, F″⁰ = ⟨e₀ + c·e₋₁⟩.
pub fn kummer_mhs(c: &Scalar) -> ComplexMHS {
    let w = Filtration::new(
        Direction::Increasing,
        2,
        BTreeMap::from([(-2, Subspace::coordinate(2, [0])), (0, Subspace::full(2))]),
    )
    .expect("nested");
    let fp = Filtration::new(
        Direction::Decreasing,
        2,
        BTreeMap::from([(-1, Subspace::full(2)), (0, Subspace::coordinate(2, [1]))]),
    )
    .expect("nested");
    let line = Subspace::span(2, &[vec![c.clone(), Scalar::from_int(1)]]).expect("one vector");
    let fpp = Filtration::new(Direction::Decreasing, 2, BTreeMap::from([(-1, Subspace::full(2)), (0, line)]))
        .expect("nested");
    ComplexMHS::new(w, fp, fpp).expect("same ambient")
}

/// The δ of K(c): ē₀ ↦ ē₀ − c·ē₋₁.
pub fn kummer_delta(c: &Scalar) -> DeltaObject {
    let h = HodgeNumbers::new(BTreeMap::from([((-1, -1), 1), ((0, 0), 1)]));
    let mut m = Matrix::identity(2);
    m[(0, 1)] = -c.clone();
    DeltaObject::new(h, m).expect("strictly lowering")
}

/// Depth-two chain (−2,−2) ← (−1,−1) ← (0,0) with superdiagonal entries a, b.
pub fn t3_delta(a: &Scalar, b: &Scalar) -> DeltaObject {
    let h = HodgeNumbers::new(BTreeMap::from([((-2, -2), 1), ((-1, -1), 1), ((0, 0), 1)]));
    let mut m = Matrix::identity(3);
    m[(0, 1)] = a.clone();
    m[(1, 2)] = b.clone();
    DeltaObject::new(h, m).expect("strictly lowering")
}

/// The real Kummer structure: W₋₂ = ⟨e₋₁⟩ over ℚ and F⁰ = ⟨e₀ + c·e₋₁⟩.
pub fn real_kummer(c: &Scalar) -> RealMHS {
    let w = Filtration::new(
        Direction::Increasing,
        2,
        BTreeMap::from([(-2, Subspace::coordinate(2, [0])), (0, Subspace::full(2))]),
    )
    .expect("nested");
    let line = Subspace::span(2, &[vec![c.clone(), Scalar::from_int(1)]]).expect("one vector");
    let f = Filtration::new(Direction::Decreasing, 2, BTreeMap::from([(-1, Subspace::full(2)), (0, line)]))
        .expect("nested");
    RealMHS::new(w, f).expect("rational weight filtration")
}

/// Pure real structure of type (p, q) + (q, p), p > q, on ℚ² with F^p = ⟨(1, i)⟩.
pub fn real_pure_pair(p: i32, q: i32) -> RealMHS {
    let w = Filtration::trivial(Direction::Increasing, 2, p + q);
    let line = Subspace::span(2, &[vec![Scalar::from_int(1), Scalar::i()]]).expect("one vector");
    let f = Filtration::new(Direction::Decreasing, 2, BTreeMap::from([(q, Subspace::full(2)), (p, line)]))
        .expect("nested");
    RealMHS::new(w, f).expect("rational weight filtration")
}

fn scalar(s: &str) -> Scalar {
    s.parse().expect("literal scalar")
}

/// The shipped fixture corpus, in file-name order.
pub fn corpus() -> Result<Vec<Document>> {
    let mut out = Vec::new();
    for p in -2..=2 {
        for q in -2..=2 {
            let name = format!("pure_{}_{}", int_tag(p), int_tag(q));
            out.push(Document::Mhs(MhsDoc::from_mhs(Some(name), &ComplexMHS::pure(p, q))));
        }
    }
    for (tag, c) in [("0", "0"), ("1", "1"), ("m1", "-1"), ("half", "1/2"), ("i", "i"), ("2pi", "2+i")] {
        let c = scalar(c);
        out.push(Document::Mhs(MhsDoc::from_mhs(Some(format!("kummer_{tag}")), &kummer_mhs(&c))));
        out.push(Document::Delta(DeltaDoc::from_delta(
            Some(format!("kummer_delta_{tag}")),
            &kummer_delta(&c),
        )));
    }
    for (tag, a, b) in [("1_1", "1", "1"), ("1_m1", "1", "-1"), ("2_i", "2", "i"), ("0_1", "0", "1"), ("3_half", "3", "1/2")] {
        out.push(Document::Delta(DeltaDoc::from_delta(
            Some(format!("t3_{tag}")),
            &t3_delta(&scalar(a), &scalar(b)),
        )));
    }
    let (k1, k2i) = (kummer_mhs(&scalar("1")), kummer_mhs(&scalar("2+i")));
    let tensors = [
        ("tensor_kummer_1_kummer_2pi", k1.tensor(&k2i)?),
        ("tensor_kummer_1_pure_1_1", k1.tensor(&ComplexMHS::pure(1, 1))?),
        ("tensor_kummer_i_dual", kummer_mhs(&Scalar::i()).dual()?),
        ("tensor_t3_1_1_kummer_i", delta_to_mhs(&t3_delta(&scalar("1"), &scalar("1")).tensor(&kummer_delta(&Scalar::i())))?),
    ];
    for (name, v) in tensors {
        out.push(Document::Mhs(MhsDoc::from_mhs(Some(name.into()), &v)));
    }
    let mut reals = vec![
        ("real_tate_0".to_string(), RealMHS::tate(0)),
        ("real_tate_1".to_string(), RealMHS::tate(1)),
        ("real_tate_m1".to_string(), RealMHS::tate(-1)),
        ("real_pure_1_0".to_string(), real_pure_pair(1, 0)),
        ("real_pure_0_m1".to_string(), real_pure_pair(0, -1)),
        ("real_kummer_i".to_string(), real_kummer(&Scalar::i())),
        ("real_kummer_1_2i".to_string(), real_kummer(&scalar("1+2*i"))),
        ("real_kummer_3".to_string(), real_kummer(&scalar("3"))),
    ];
    let params = FixtureParams {
        max_dim: 5,
        label_bound: 2,
        complex: true,
    };
    let mut r = rng(2024);
    for k in 0..3 {
        reals.push((format!("real_random_{k}"), random_real_mhs(&mut r, &params)?));
    }
    for (name, v) in reals {
        out.push(Document::RealMhs(RealMhsDoc::from_real(Some(name), &v)));
    }
    for k in 0..4 {
        let (_, v) = random_valid_mhs(&mut r, &params)?;
        out.push(Document::Mhs(MhsDoc::from_mhs(Some(format!("random_mhs_{k}")), &v)));
    }
    for k in 0..3 {
        let d = random_delta(&mut r, &params);
        let c = random_connection(&mut r, d.hodge(), true);
        out.push(Document::Connection(ConnectionDoc::from_connection(Some(format!("random_connection_{k}")), &c)));
    }
    out.sort_by(|a, b| a.name().cmp(&b.name()));
    Ok(out)
}

/// Triples that are not mixed Hodge structures, plus a path; shipped beside the corpus.
pub fn counterexamples() -> Result<Vec<Document>> {
    let k = kummer_mhs(&Scalar::from_int(1));
    // W₋₂ := ⟨e₀⟩ puts weight −2 on a vector of type (0, 0)
    let w = Filtration::new(
        Direction::Increasing,
        2,
        BTreeMap::from([(-2, Subspace::coordinate(2, [1])), (0, Subspace::full(2))]),
    )?;
    let bad = ComplexMHS::new(w, k.fp().clone(), k.fpp().clone())?;
    let mut r = rng(99);
    let (_, v) = random_valid_mhs(&mut r, &FixtureParams::default())?;
    let (_, broken) = corrupt(&mut r, &v)?;
    let square = crate::holonomy::PolygonalPath::from_ints(&[(0, 0), (-1, 0), (-1, -1), (0, -1), (0, 0)])?;
    Ok(vec![
        Document::Mhs(MhsDoc::from_mhs(Some("nonhodge_kummer_swapped_weight".into()), &bad)),
        Document::Mhs(MhsDoc::from_mhs(Some("nonhodge_random_corruption".into()), &broken)),
        Document::Path(PathDoc::from_path(Some("path_square".into()), &square)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_structures_are_valid_and_corruptions_are_not() {
        let params = FixtureParams {
            max_dim: 8,
            ..Default::default()
        };
        let mut r = rng(7);
        for _ in 0..20 {
            let (d, v) = random_valid_mhs(&mut r, &params).unwrap();
            assert_eq!(&v.validate().unwrap(), d.hodge());
            let (_, bad) = corrupt(&mut r, &v).unwrap();
            assert!(!bad.is_valid());
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let p = FixtureParams::default();
        assert_eq!(random_delta(&mut rng(3), &p), random_delta(&mut rng(3), &p));
    }
}
