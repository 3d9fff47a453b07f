//! Deligne's splittings of a mixed Hodge structure, the operator δ, and the
//! inverse construction from a bigraded space with δ.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{Matrix, RowSolver, Scalar, Subspace};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::mhs::{ComplexMHS, Direction, Filtration, HodgeNumbers};

/// Which Hodge filtration a splitting is adapted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Fp,
    Fpp,
}

/// A decomposition V = ⊕ V^{p,q}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bigrading {
    ambient: usize,
    pieces: BTreeMap<(i32, i32), Subspace>,
}

impl Bigrading {
    pub fn new(ambient: usize, pieces: BTreeMap<(i32, i32), Subspace>) -> Result<Self> {
        let total: usize = pieces.values().map(Subspace::dim).sum();
        let span = Subspace::sum_all(ambient, pieces.values())?;
        if total != ambient || !span.is_full() {
            return Err(Error::Internal(format!(
                "pieces of total dimension {total} do not decompose a space of dimension {ambient}"
            )));
        }
        Ok(Bigrading { ambient, pieces })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn piece(&self, p: i32, q: i32) -> Subspace {
        self.pieces
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.ambient))
    }

    pub fn pieces(&self) -> &BTreeMap<(i32, i32), Subspace> {
        &self.pieces
    }

    /// Sum of the pieces whose bidegree satisfies `pred`.
    pub fn sum_where(&self, pred: impl Fn(i32, i32) -> bool) -> Subspace {
        Subspace::sum_all(
            self.ambient,
            self.pieces.iter().filter(|((p, q), _)| pred(*p, *q)).map(|(_, s)| s),
        )
        .expect("pieces share the ambient space")
    }
}

/// Ordered labels of the canonical adapted basis: by weight, then p.
pub fn basis_labels(h: &HodgeNumbers) -> Vec<(i32, i32)> {
    let mut keys: Vec<(i32, i32)> = h.iter().map(|(k, _)| k).collect();
    keys.sort_by_key(|&(p, q)| (p + q, p));
    keys.into_iter()
        .flat_map(|k| std::iter::repeat(k).take(h.get(k.0, k.1)))
        .collect()
}

/// `true` iff a label pair may carry a nonzero entry of δ − 1 (row `i`, column `j`).
fn strictly_below(row: (i32, i32), col: (i32, i32)) -> bool {
    row.0 < col.0 && row.1 < col.1
}

/// A bigraded space (given by its Hodge numbers, in the canonical basis order)
/// with a unipotent δ such that δ − 1 strictly lowers both degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaObject {
    hodge: HodgeNumbers,
    labels: Vec<(i32, i32)>,
    delta: Matrix,
}

impl DeltaObject {
    pub fn new(hodge: HodgeNumbers, delta: Matrix) -> Result<Self> {
        let labels = basis_labels(&hodge);
        let n = labels.len();
        if delta.rows() != n || delta.cols() != n {
            return Err(Error::InvalidDelta(format!(
                "delta is {}x{} but the hodge numbers add up to {n}",
                delta.rows(),
                delta.cols()
            )));
        }
        for (i, j, x) in delta.entries() {
            let ok = if i == j {
                x.is_one()
            } else {
                x.is_zero() || strictly_below(labels[i], labels[j])
            };
            if !ok {
                return Err(Error::InvalidDelta(format!(
                    "entry ({i},{j}) = {x} breaks strict double lowering between {:?} and {:?}",
                    labels[i], labels[j]
                )));
            }
        }
        Ok(DeltaObject {
            hodge,
            labels,
            delta,
        })
    }

    pub fn identity(hodge: HodgeNumbers) -> Self {
        let n = hodge.total();
        DeltaObject::new(hodge, Matrix::identity(n)).unwrap()
    }

    pub fn hodge(&self) -> &HodgeNumbers {
        &self.hodge
    }

    pub fn labels(&self) -> &[(i32, i32)] {
        &self.labels
    }

    pub fn delta(&self) -> &Matrix {
        &self.delta
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_split(&self) -> bool {
        self.delta.is_identity()
    }

    pub fn log(&self) -> Matrix {
        self.delta.log_unipotent().expect("delta is unipotent")
    }

    /// Indices carrying label `(p, q)`.
    pub fn block(&self, p: i32, q: i32) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&i| self.labels[i] == (p, q))
            .collect()
    }

    /// Tensor product in the product bigrading, reordered canonically.
    pub fn tensor(&self, other: &DeltaObject) -> DeltaObject {
        let m = other.dim();
        let raw: Vec<(i32, i32)> = (0..self.dim() * m)
            .map(|k| {
                let (a, b) = (self.labels[k / m], other.labels[k % m]);
                (a.0 + b.0, a.1 + b.1)
            })
            .collect();
        let perm = stable_order(&raw, |(p, q)| (p + q, p));
        let delta = self.delta.kron(&other.delta).permuted(&perm);
        DeltaObject::new(self.hodge.convolve(&other.hodge), delta).expect("tensor of deltas")
    }
}

/// Permutation (new position ↦ old index) sorting `labels` stably by `key`.
fn stable_order<K: Ord>(labels: &[(i32, i32)], key: impl Fn((i32, i32)) -> K) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..labels.len()).collect();
    perm.sort_by_key(|&i| key(labels[i]));
    perm
}

/// The splitting V^{p,q} adapted to one Hodge filtration.
pub fn deligne_splitting(v: &ComplexMHS, side: Side) -> Result<Bigrading> {
    let h = v.validate()?;
    splitting_with(v, &h, side)
}

fn splitting_with(v: &ComplexMHS, h: &HodgeNumbers, side: Side) -> Result<Bigrading> {
    let (own, other) = match side {
        Side::Fp => (v.fp(), v.fpp()),
        Side::Fpp => (v.fpp(), v.fp()),
    };
    let w = v.w();
    let w_lo = w.range().map_or(0, |r| r.0);
    let mut pieces = BTreeMap::new();
    for ((p, q), _) in h.iter() {
        let n = p + q;
        // the own-side index and the other-side index
        let (a, b) = match side {
            Side::Fp => (p, q),
            Side::Fpp => (q, p),
        };
        let first = own.step(a).intersect(w.step(n))?;
        let mut second = other.step(b).intersect(w.step(n))?;
        let mut j = 1;
        while n - j - 1 >= w_lo {
            let t = other.step(b - j).intersect(w.step(n - j - 1))?;
            second = second.sum(&t)?;
            j += 1;
        }
        pieces.insert((p, q), first.intersect(&second)?);
    }
    Bigrading::new(v.dim(), pieces)
}

/// The canonical basis of gr, its lifts through both splittings, and δ.
#[derive(Clone, Debug)]
pub struct DeltaComputation {
    pub hodge: HodgeNumbers,
    pub split_fp: Bigrading,
    pub split_fpp: Bigrading,
    /// Columns: lifts of the gr basis into the F′-splitting.
    pub lift_fp: Matrix,
    /// Columns: lifts of the gr basis into the F″-splitting.
    pub lift_fpp: Matrix,
    pub object: DeltaObject,
}

pub fn delta_computation(v: &ComplexMHS) -> Result<DeltaComputation> {
    let hodge = v.validate()?;
    let split_fp = splitting_with(v, &hodge, Side::Fp)?;
    let split_fpp = splitting_with(v, &hodge, Side::Fpp)?;
    let n = v.dim();
    let mut cols_fp: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    let mut cols_fpp: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for wt in v.w().jumps() {
        let wq = v.weight_quotient(wt)?;
        let lower = v.w().step(wt - 1);
        let mut ps: Vec<i32> = hodge
            .iter()
            .filter(|((p, q), _)| p + q == wt)
            .map(|((p, _), _)| p)
            .collect();
        ps.sort();
        for p in ps {
            let q = wt - p;
            let gr = wq.fp.step(p).intersect(wq.fpp.step(q))?;
            let solvers = [
                RowSolver::new(split_fp.piece(p, q).basis().vstack(lower.basis()))?,
                RowSolver::new(split_fpp.piece(p, q).basis().vstack(lower.basis()))?,
            ];
            let h = hodge.get(p, q);
            for b in gr.basis_vectors() {
                let x = wq.quotient.complement().transpose().apply(&b);
                for (solver, cols) in solvers.iter().zip([&mut cols_fp, &mut cols_fpp]) {
                    let c = solver
                        .solve(&x)
                        .ok_or_else(|| Error::Internal("gr vector does not lift".into()))?;
                    let lift = solver.rows().select_rows(&(0..h).collect::<Vec<_>>()).transpose().apply(&c[..h]);
                    cols.push(lift);
                }
            }
        }
    }
    let lift_fp = Matrix::from_rows(n, cols_fp)?.transpose();
    let lift_fpp = Matrix::from_rows(n, cols_fpp)?.transpose();
    let inv = lift_fpp
        .inverse()
        .ok_or_else(|| Error::Internal("F'' lifts are not a basis".into()))?;
    let delta = &inv * &lift_fp;
    let object = DeltaObject::new(hodge.clone(), delta)
        .map_err(|e| Error::Internal(format!("computed delta is not admissible: {e}")))?;
    Ok(DeltaComputation {
        hodge,
        split_fp,
        split_fpp,
        lift_fp,
        lift_fpp,
        object,
    })
}

/// δ = a_{F″} ∘ a_{F′}⁻¹ in the canonical basis of gr.
pub fn delta_operator(v: &ComplexMHS) -> Result<DeltaObject> {
    Ok(delta_computation(v)?.object)
}

/// The components D_{p,q} (p, q ≥ 1) of log δ, each of bidegree (−p, −q).
pub fn log_delta_components(d: &DeltaObject) -> BTreeMap<(i32, i32), Matrix> {
    let log = d.log();
    let n = d.dim();
    let labels = d.labels();
    let mut out: BTreeMap<(i32, i32), Matrix> = BTreeMap::new();
    for (i, j, x) in log.entries() {
        if x.is_zero() {
            continue;
        }
        let key = (labels[j].0 - labels[i].0, labels[j].1 - labels[i].1);
        debug_assert!(key.0 >= 1 && key.1 >= 1);
        out.entry(key).or_insert_with(|| Matrix::zeros(n, n))[(i, j)] = x.clone();
    }
    out
}

/// The split model ⊕V^{p,q} with F″ twisted by δ⁻¹, without the roundtrip check.
pub(crate) fn delta_to_mhs_unchecked(d: &DeltaObject) -> Result<ComplexMHS> {
    let n = d.dim();
    let labels = d.labels();
    let coord = |pred: &dyn Fn((i32, i32)) -> bool| {
        Subspace::coordinate(n, (0..n).filter(|&i| pred(labels[i])))
    };
    let Some((wlo, whi)) = d.hodge().weight_range() else {
        return Ok(ComplexMHS::zero());
    };
    let plo = labels.iter().map(|l| l.0).min().unwrap();
    let phi = labels.iter().map(|l| l.0).max().unwrap();
    let qlo = labels.iter().map(|l| l.1).min().unwrap();
    let qhi = labels.iter().map(|l| l.1).max().unwrap();
    let inv = d.delta().unipotent_inverse()?;
    let w = Filtration::from_fn(Direction::Increasing, n, wlo, whi, |k| {
        Ok(coord(&|(p, q)| p + q <= k))
    })?;
    let fp = Filtration::from_fn(Direction::Decreasing, n, plo, phi, |k| Ok(coord(&|(p, _)| p >= k)))?;
    let fpp = Filtration::from_fn(Direction::Decreasing, n, qlo, qhi, |k| {
        coord(&|(_, q)| q >= k).image(&inv)
    })?;
    ComplexMHS::new(w, fp, fpp)
}

/// The inverse functor Δ → MHS, with an exact roundtrip self-check.
pub fn delta_to_mhs(d: &DeltaObject) -> Result<ComplexMHS> {
    let v = delta_to_mhs_unchecked(d)?;
    let back = delta_operator(&v)?;
    if &back != d {
        return Err(Error::Internal("delta_to_mhs does not roundtrip".into()));
    }
    Ok(v)
}

/// A filtration-preserving isomorphism V → delta_to_mhs(δ(V)) inducing the identity on gr.
pub fn canonical_isomorphism(v: &ComplexMHS) -> Result<(DeltaObject, Matrix)> {
    let comp = delta_computation(v)?;
    let f = comp
        .lift_fp
        .inverse()
        .ok_or_else(|| Error::Internal("F' lifts are not a basis".into()))?;
    Ok((comp.object, f))
}

/// The δ datum of the complex conjugate structure, computed directly.
pub fn conjugate_delta(d: &DeltaObject) -> DeltaObject {
    let swapped: Vec<(i32, i32)> = d.labels().iter().map(|&(p, q)| (q, p)).collect();
    let perm = stable_order(&swapped, |(p, q)| (p + q, p));
    let eps = d.delta().conj().unipotent_inverse().expect("unipotent");
    DeltaObject::new(d.hodge().transpose(), eps.permuted(&perm)).expect("conjugate delta")
}

/// The splitting contracts: both splittings split W, each splits its own
/// filtration exactly, and they agree modulo lower weight.
pub fn splitting_contracts(v: &ComplexMHS) -> Result<Vec<Check>> {
    let h = v.validate()?;
    let sp = splitting_with(v, &h, Side::Fp)?;
    let spp = splitting_with(v, &h, Side::Fpp)?;
    let mut checks = Vec::new();
    let (wlo, whi) = v.w().range().unwrap_or((0, 0));
    let mut w_ok = true;
    for n in wlo - 1..=whi + 1 {
        for s in [&sp, &spp] {
            w_ok &= &s.sum_where(|p, q| p + q <= n) == v.w().step(n);
        }
    }
    checks.push(Check::new("splittings sum to W_n", w_ok));
    let mut f_ok = true;
    for (s, f, side) in [(&sp, v.fp(), Side::Fp), (&spp, v.fpp(), Side::Fpp)] {
        let (lo, hi) = f.range().unwrap_or((0, 0));
        for k in lo - 1..=hi + 1 {
            let sum = s.sum_where(|p, q| match side {
                Side::Fp => p >= k,
                Side::Fpp => q >= k,
            });
            f_ok &= &sum == f.step(k);
        }
    }
    checks.push(Check::new("each splitting splits its own Hodge filtration", f_ok));
    let mut mod_ok = true;
    for ((p, q), _) in h.iter() {
        let lower = v.w().step(p + q - 1);
        mod_ok &= sp.piece(p, q).sum(lower)? == spp.piece(p, q).sum(lower)?;
    }
    checks.push(Check::new("splittings agree modulo W_{n-1}", mod_ok));
    Ok(checks)
}

/// Canonical-basis δ of the conjugate computed through the MHS, for comparison.
pub fn conjugate_delta_via_mhs(d: &DeltaObject) -> Result<DeltaObject> {
    delta_operator(&delta_to_mhs(d)?.conjugate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::mhs::validate_morphism;

    fn hodge(entries: &[((i32, i32), usize)]) -> HodgeNumbers {
        HodgeNumbers::new(entries.iter().copied().collect())
    }

    fn kummer_delta(c: Scalar) -> DeltaObject {
        let mut m = Matrix::identity(2);
        m[(0, 1)] = -c;
        DeltaObject::new(hodge(&[((0, 0), 1), ((-1, -1), 1)]), m).unwrap()
    }

    fn t3(a: Scalar, b: Scalar) -> DeltaObject {
        let mut m = Matrix::identity(3);
        m[(0, 1)] = a;
        m[(1, 2)] = b;
        DeltaObject::new(hodge(&[((0, 0), 1), ((-1, -1), 1), ((-2, -2), 1)]), m).unwrap()
    }

    #[test]
    fn labels_are_weight_then_p() {
        let h = hodge(&[((0, 0), 1), ((1, -1), 2), ((-1, 1), 1), ((-1, -1), 1)]);
        assert_eq!(
            basis_labels(&h),
            vec![(-1, -1), (-1, 1), (0, 0), (1, -1), (1, -1)]
        );
    }

    #[test]
    fn kummer_splittings_and_delta() {
        let c = q(3, 1);
        let v = delta_to_mhs(&kummer_delta(c.clone())).unwrap();
        let sp = deligne_splitting(&v, Side::Fp).unwrap();
        assert_eq!(sp.piece(0, 0), Subspace::coordinate(2, [1]));
        assert_eq!(sp.piece(-1, -1), Subspace::coordinate(2, [0]));
        let spp = deligne_splitting(&v, Side::Fpp).unwrap();
        assert!(spp.piece(0, 0).contains_vector(&[c.clone(), Scalar::one()]));
        let d = delta_operator(&v).unwrap();
        assert_eq!(d.delta()[(0, 1)], -c);
        let comps = log_delta_components(&d);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[&(1, 1)][(0, 1)], q(-3, 1));
    }

    #[test]
    fn pure_delta_is_identity() {
        let v = ComplexMHS::pure(2, 3).direct_sum(&ComplexMHS::pure(0, 0)).unwrap();
        let d = delta_operator(&v).unwrap();
        assert!(d.is_split());
        assert!(log_delta_components(&d).is_empty());
        assert_eq!(delta_to_mhs(&DeltaObject::identity(hodge(&[((0, 0), 1)]))).unwrap(), ComplexMHS::pure(0, 0));
    }

    #[test]
    fn t3_log_components() {
        let (a, b) = (q(2, 1), q(-5, 3));
        let d = t3(a.clone(), b.clone());
        let comps = log_delta_components(&d);
        assert_eq!(comps[&(1, 1)][(0, 1)], a);
        assert_eq!(comps[&(1, 1)][(1, 2)], b);
        assert_eq!(comps[&(2, 2)][(0, 2)], -&(&a * &b) * q(1, 2));
        let v = delta_to_mhs(&d).unwrap();
        assert_eq!(delta_operator(&v).unwrap(), d);
    }

    #[test]
    fn inadmissible_delta_is_rejected() {
        let mut m = Matrix::identity(2);
        m[(1, 0)] = q(1, 1);
        assert!(DeltaObject::new(hodge(&[((0, 0), 1), ((-1, -1), 1)]), m).is_err());
        let mut m = Matrix::identity(2);
        m[(0, 1)] = q(1, 1);
        assert!(DeltaObject::new(hodge(&[((0, 0), 1), ((-1, 0), 1)]), m).is_err());
    }

    #[test]
    fn conjugate_delta_matches_mhs_route() {
        let c = Scalar::gaussian(2, 1);
        let d = kummer_delta(c.clone());
        let direct = conjugate_delta(&d);
        assert_eq!(direct.delta()[(0, 1)], c.conj());
        assert_eq!(direct, conjugate_delta_via_mhs(&d).unwrap());
        assert_eq!(conjugate_delta(&direct), d);
        let t = t3(Scalar::gaussian(1, -1), q(1, 2));
        assert_eq!(conjugate_delta(&t), conjugate_delta_via_mhs(&t).unwrap());
    }

    #[test]
    fn tensor_functoriality() {
        let d1 = kummer_delta(q(2, 1));
        let d2 = kummer_delta(Scalar::gaussian(0, 1));
        let v = delta_to_mhs(&d1).unwrap().tensor(&delta_to_mhs(&d2).unwrap()).unwrap();
        assert_eq!(delta_operator(&v).unwrap(), d1.tensor(&d2));
    }

    #[test]
    fn isomorphism_back_to_model() {
        let v = delta_to_mhs(&t3(q(1, 1), q(2, 1))).unwrap();
        let g = Matrix::from_ints(&[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let v = v.transform(&g).unwrap();
        let (d, f) = canonical_isomorphism(&v).unwrap();
        let model = delta_to_mhs(&d).unwrap();
        assert!(validate_morphism(&f, &v, &model).unwrap());
        assert!(validate_morphism(&f.inverse().unwrap(), &model, &v).unwrap());
        assert!(splitting_contracts(&v).unwrap().iter().all(|c| c.pass));
    }
}
