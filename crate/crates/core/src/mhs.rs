//! Filtrations and (complex or real) mixed Hodge structures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, Quotient, Subspace};
use crate::error::{check_dim, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A finite filtration of Kⁿ stored by its jumps.
///
/// Increasing: `W_i` is the step at the largest stored index `≤ i`, and 0 below
/// all of them. Decreasing: `F^p` is the step at the smallest stored index
/// `≥ p`, and 0 above all of them. The extreme stored step is always Kⁿ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Filtration {
    ambient: usize,
    direction: Direction,
    steps: BTreeMap<i32, Subspace>,
    zero: Subspace,
    full: Subspace,
}

impl Filtration {
    pub fn new(direction: Direction, ambient: usize, steps: BTreeMap<i32, Subspace>) -> Result<Self> {
        for (k, s) in &steps {
            if s.ambient() != ambient {
                return Err(Error::InvalidFiltration(format!(
                    "step {k} lives in dimension {} instead of {ambient}",
                    s.ambient()
                )));
            }
        }
        let pairs: Vec<_> = steps.iter().collect();
        for w in pairs.windows(2) {
            let ((i, a), (j, b)) = (w[0], w[1]);
            let ok = match direction {
                Direction::Increasing => a.is_subspace_of(b),
                Direction::Decreasing => b.is_subspace_of(a),
            };
            if !ok {
                return Err(Error::InvalidFiltration(format!(
                    "steps {i} and {j} are not nested"
                )));
            }
        }
        let extreme = match direction {
            Direction::Increasing => steps.values().next_back(),
            Direction::Decreasing => steps.values().next(),
        };
        if ambient > 0 && !extreme.is_some_and(Subspace::is_full) {
            return Err(Error::InvalidFiltration(
                "filtration is not exhaustive (no step equals the whole space)".into(),
            ));
        }
        let mut f = Filtration {
            ambient,
            direction,
            steps,
            zero: Subspace::zero(ambient),
            full: Subspace::full(ambient),
        };
        f.normalize();
        Ok(f)
    }

    /// Filtration with a single jump: 0 before `index`, everything from it on.
    pub fn trivial(direction: Direction, ambient: usize, index: i32) -> Self {
        let steps = if ambient == 0 {
            BTreeMap::new()
        } else {
            BTreeMap::from([(index, Subspace::full(ambient))])
        };
        Filtration::new(direction, ambient, steps).expect("trivial filtration")
    }

    /// Samples `f` on `lo..=hi`. Outside that range the filtration takes its
    /// constant extension, so `f` must already be 0 / full at the ends.
    pub fn from_fn(
        direction: Direction,
        ambient: usize,
        lo: i32,
        hi: i32,
        mut f: impl FnMut(i32) -> Result<Subspace>,
    ) -> Result<Self> {
        let mut steps = BTreeMap::new();
        if ambient > 0 {
            for k in lo..=hi {
                steps.insert(k, f(k)?);
            }
        }
        Filtration::new(direction, ambient, steps)
    }

    fn normalize(&mut self) {
        let keys: Vec<i32> = self.steps.keys().copied().collect();
        let keep: Vec<i32> = keys
            .iter()
            .copied()
            .filter(|&k| {
                let neighbour = match self.direction {
                    Direction::Increasing => k - 1,
                    Direction::Decreasing => k + 1,
                };
                self.step(k) != self.step(neighbour)
            })
            .collect();
        self.steps.retain(|k, _| keep.contains(k));
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn step(&self, i: i32) -> &Subspace {
        let found = match self.direction {
            Direction::Increasing => self.steps.range(..=i).next_back(),
            Direction::Decreasing => self.steps.range(i..).next(),
        };
        found.map_or(&self.zero, |(_, s)| s)
    }

    /// Indices where the filtration changes.
    pub fn jumps(&self) -> impl Iterator<Item = i32> + '_ {
        self.steps.keys().copied()
    }

    pub fn steps(&self) -> &BTreeMap<i32, Subspace> {
        &self.steps
    }

    pub fn full_space(&self) -> &Subspace {
        &self.full
    }

    /// `(lowest, highest)` jump, `None` for the zero space.
    pub fn range(&self) -> Option<(i32, i32)> {
        Some((*self.steps.keys().next()?, *self.steps.keys().next_back()?))
    }

    /// Jump sizes: `dim W_i − dim W_{i−1}` or `dim F^p − dim F^{p+1}`.
    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        self.jumps()
            .map(|k| {
                let prev = match self.direction {
                    Direction::Increasing => self.step(k - 1),
                    Direction::Decreasing => self.step(k + 1),
                };
                (k, self.step(k).dim() - prev.dim())
            })
            .collect()
    }

    /// Replaces one step, keeping the others. Fails if the result is not a filtration.
    pub fn with_step(&self, index: i32, s: Subspace) -> Result<Self> {
        let lo_hi = self.range().unwrap_or((index, index));
        let (lo, hi) = (lo_hi.0.min(index) - 1, lo_hi.1.max(index) + 1);
        let mut steps = BTreeMap::new();
        for k in lo..=hi {
            steps.insert(k, if k == index { s.clone() } else { self.step(k).clone() });
        }
        Filtration::new(self.direction, self.ambient, steps)
    }

    pub fn map_steps(&self, ambient: usize, f: impl Fn(&Subspace) -> Result<Subspace>) -> Result<Self> {
        let steps = self
            .steps
            .iter()
            .map(|(k, s)| Ok((*k, f(s)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Filtration::new(self.direction, ambient, steps)
    }

    pub fn conj(&self) -> Self {
        self.map_steps(self.ambient, |s| Ok(s.conj())).expect("conjugate filtration")
    }

    /// Image under an isomorphism.
    pub fn transform(&self, g: &Matrix) -> Result<Self> {
        check_dim(self.ambient, g.cols())?;
        self.map_steps(g.rows(), |s| s.image(g))
    }

    pub fn is_real(&self) -> bool {
        self.steps.values().all(Subspace::is_real)
    }

    /// Induced filtration on a subquotient S/T.
    pub fn induced(&self, qt: &Quotient, s: &Subspace) -> Result<Self> {
        let mut steps = BTreeMap::new();
        if qt.dim() > 0 {
            for (k, u) in &self.steps {
                steps.insert(*k, qt.induced(u, s)?);
            }
            match self.direction {
                Direction::Increasing => {
                    let top = self.range().map_or(0, |r| r.1);
                    steps.insert(top + 1, Subspace::full(qt.dim()));
                }
                Direction::Decreasing => {
                    let bottom = self.range().map_or(0, |r| r.0);
                    steps.insert(bottom - 1, Subspace::full(qt.dim()));
                }
            }
        }
        Filtration::new(self.direction, qt.dim(), steps)
    }

    /// (F ⊗ G)^k = Σ_a F^a ⊗ G^{k−a}, likewise for increasing filtrations.
    pub fn tensor(&self, other: &Filtration) -> Result<Self> {
        if self.direction != other.direction {
            return Err(Error::InvalidFiltration("tensor of mixed directions".into()));
        }
        let n = self.ambient * other.ambient;
        let (Some((a0, a1)), Some((b0, b1))) = (self.range(), other.range()) else {
            return Filtration::from_fn(self.direction, n, 0, 0, |_| Ok(Subspace::full(n)));
        };
        Filtration::from_fn(self.direction, n, a0 + b0 - 1, a1 + b1 + 1, |k| {
            let parts: Vec<Subspace> = (a0..=a1)
                .map(|a| self.step(a).tensor(other.step(k - a)))
                .collect();
            Subspace::sum_all(n, &parts)
        })
    }

    /// Dual filtration: (F*)^p = ann F^{1−p}, W*_n = ann W_{−n−1}.
    pub fn dual(&self) -> Result<Self> {
        let n = self.ambient;
        let Some((lo, hi)) = self.range() else {
            return Ok(self.clone());
        };
        match self.direction {
            Direction::Decreasing => Filtration::from_fn(self.direction, n, -hi - 1, 1 - lo, |p| {
                Ok(self.step(1 - p).annihilator())
            }),
            Direction::Increasing => Filtration::from_fn(self.direction, n, -hi - 2, -lo, |k| {
                Ok(self.step(-k - 1).annihilator())
            }),
        }
    }

    pub fn direct_sum(&self, other: &Filtration) -> Result<Self> {
        if self.direction != other.direction {
            return Err(Error::InvalidFiltration("direct sum of mixed directions".into()));
        }
        let n = self.ambient + other.ambient;
        let keys: BTreeSet<i32> = self.jumps().chain(other.jumps()).collect();
        let (Some(&lo), Some(&hi)) = (keys.first(), keys.last()) else {
            return Ok(Filtration::trivial(self.direction, n, 0));
        };
        Filtration::from_fn(self.direction, n, lo - 1, hi + 1, |k| {
            Ok(self.step(k).direct_sum(other.step(k)))
        })
    }

    /// `true` iff `f` maps every step of `self` into the same-index step of `target`.
    pub fn is_preserved_by(&self, f: &Matrix, target: &Filtration) -> Result<bool> {
        if f.cols() != self.ambient || f.rows() != target.ambient {
            return Err(Error::ShapeMismatch(format!(
                "map is {}x{}, filtrations live in {} -> {}",
                f.rows(),
                f.cols(),
                self.ambient,
                target.ambient
            )));
        }
        for (k, s) in &self.steps {
            if !s.image(f)?.is_subspace_of(target.step(*k)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.direction)?;
        f.debug_map().entries(self.steps.iter()).finish()
    }
}

/// Hodge numbers h^{p,q}, zero entries omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HodgeNumbers(BTreeMap<(i32, i32), usize>);

impl HodgeNumbers {
    pub fn new(map: BTreeMap<(i32, i32), usize>) -> Self {
        HodgeNumbers(map.into_iter().filter(|&(_, h)| h > 0).collect())
    }

    pub fn get(&self, p: i32, q: i32) -> usize {
        self.0.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), usize)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    pub fn as_map(&self) -> &BTreeMap<(i32, i32), usize> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        HodgeNumbers::new(self.iter().map(|((p, q), h)| ((q, p), h)).collect())
    }

    pub fn negate(&self) -> Self {
        HodgeNumbers::new(self.iter().map(|((p, q), h)| ((-p, -q), h)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, h) in other.iter() {
            *m.entry(k).or_default() += h;
        }
        HodgeNumbers::new(m)
    }

    pub fn convolve(&self, other: &Self) -> Self {
        let mut m = BTreeMap::new();
        for ((p, q), h) in self.iter() {
            for ((r, s), g) in other.iter() {
                *m.entry((p + r, q + s)).or_default() += h * g;
            }
        }
        HodgeNumbers::new(m)
    }

    /// `(min weight, max weight)`, `None` when empty.
    pub fn weight_range(&self) -> Option<(i32, i32)> {
        let w = self.0.keys().map(|(p, q)| p + q);
        let lo = w.clone().min()?;
        Some((lo, w.max()?))
    }

    /// Largest drop in weight between two pieces.
    pub fn weight_spread(&self) -> i32 {
        self.weight_range().map_or(0, |(lo, hi)| hi - lo)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HodgeEntry {
    pub p: i32,
    pub q: i32,
    pub h: usize,
}

impl Serialize for HodgeNumbers {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<HodgeEntry> = self.iter().map(|((p, q), h)| HodgeEntry { p, q, h }).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HodgeNumbers {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<HodgeEntry>::deserialize(d)?;
        let mut m = BTreeMap::new();
        for e in v {
            if m.insert((e.p, e.q), e.h).is_some() {
                return Err(serde::de::Error::custom(format!(
                    "duplicate hodge entry ({}, {})",
                    e.p, e.q
                )));
            }
        }
        Ok(HodgeNumbers::new(m))
    }
}

/// A nonzero piece gr^p_{F′} gr^q_{F″} gr^W_n with n ≠ p + q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub n: i32,
    pub p: i32,
    pub q: i32,
    pub dim: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gr^{}_F' gr^{}_F'' gr^W_{} has dimension {} although {} + {} != {}",
            self.p, self.q, self.n, self.dim, self.p, self.q, self.n
        )
    }
}

/// The pieces of one graded quotient gr^W_n together with the two induced filtrations.
pub struct WeightQuotient {
    pub n: i32,
    pub quotient: Quotient,
    pub fp: Filtration,
    pub fpp: Filtration,
}

impl WeightQuotient {
    /// dim gr^p_{F′} gr^q_{F″} of this quotient.
    pub fn piece_dim(&self, p: i32, q: i32) -> Result<usize> {
        let d = |a: i32, b: i32| -> Result<usize> {
            Ok(self.fp.step(a).intersect(self.fpp.step(b))?.dim())
        };
        let v = d(p, q)? + d(p + 1, q + 1)?;
        let w = d(p + 1, q)? + d(p, q + 1)?;
        Ok(v - w)
    }

}

/// gr^W_n with the filtrations induced by F′ and F″, in some basis.
pub struct GradedPiece {
    pub n: i32,
    pub fp: Filtration,
    pub fpp: Filtration,
}

impl GradedPiece {
    /// dim gr^p_{F′} gr^q_{F″}.
    pub fn piece_dim(&self, p: i32, q: i32) -> Result<usize> {
        let d = |a: i32, b: i32| -> Result<usize> { Ok(self.fp.step(a).intersect(self.fpp.step(b))?.dim()) };
        Ok(d(p, q)? + d(p + 1, q + 1)? - d(p + 1, q)? - d(p, q + 1)?)
    }

    /// When F′ and F″ are n-opposed on gr^W_n, i.e. F′^p ⊕ F″^{n+1−p} is everything
    /// for every p, returns the nonzero h^{p,n−p} = dim F′^p ∩ F″^{n−p}.
    pub fn opposed_pieces(&self) -> Result<Option<Vec<((i32, i32), usize)>>> {
        let n = self.n;
        let dim = self.fp.ambient();
        let (lo, hi) = self.fp.range().unwrap_or((0, -1));
        for p in lo..=hi + 1 {
            let (a, b) = (self.fp.step(p), self.fpp.step(n + 1 - p));
            if a.dim() + b.dim() != dim || a.sum(b)?.dim() != dim {
                return Ok(None);
            }
        }
        let mut out = Vec::new();
        for p in lo..=hi {
            let d = self.fp.step(p).intersect(self.fpp.step(n - p))?.dim();
            if d > 0 {
                out.push(((p, n - p), d));
            }
        }
        Ok(Some(out))
    }

    /// The first nonzero gr^p_{F′} gr^q_{F″} with p + q ≠ n, scanning the jumps in order.
    pub fn first_violation(&self) -> Result<Violation> {
        for p in self.fp.jumps() {
            for q in self.fpp.jumps() {
                let dim = self.piece_dim(p, q)?;
                if dim > 0 && p + q != self.n {
                    return Ok(Violation { n: self.n, p, q, dim });
                }
            }
        }
        Err(Error::Internal(format!("gr^W_{} fails opposedness without a forbidden piece", self.n)))
    }
}

/// A vector space with an increasing W and two decreasing filtrations F′, F″.
/// Construction only checks shapes; [`ComplexMHS::validate`] checks opposedness.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexMHS {
    dim: usize,
    w: Filtration,
    fp: Filtration,
    fpp: Filtration,
}

impl ComplexMHS {
    pub fn new(w: Filtration, fp: Filtration, fpp: Filtration) -> Result<Self> {
        let dim = w.ambient();
        check_dim(dim, fp.ambient())?;
        check_dim(dim, fpp.ambient())?;
        let dirs = [w.direction(), fp.direction(), fpp.direction()];
        if dirs != [Direction::Increasing, Direction::Decreasing, Direction::Decreasing] {
            return Err(Error::InvalidFiltration(
                "expected W increasing and F', F'' decreasing".into(),
            ));
        }
        Ok(ComplexMHS { dim, w, fp, fpp })
    }

    pub fn zero() -> Self {
        let t = |d| Filtration::trivial(d, 0, 0);
        ComplexMHS::new(t(Direction::Increasing), t(Direction::Decreasing), t(Direction::Decreasing))
            .unwrap()
    }

    /// The one-dimensional pure structure of type (p, q).
    pub fn pure(p: i32, q: i32) -> Self {
        ComplexMHS::new(
            Filtration::trivial(Direction::Increasing, 1, p + q),
            Filtration::trivial(Direction::Decreasing, 1, p),
            Filtration::trivial(Direction::Decreasing, 1, q),
        )
        .unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn w(&self) -> &Filtration {
        &self.w
    }

    pub fn fp(&self) -> &Filtration {
        &self.fp
    }

    pub fn fpp(&self) -> &Filtration {
        &self.fpp
    }

    pub fn weight_quotient(&self, n: i32) -> Result<WeightQuotient> {
        let s = self.w.step(n);
        let quotient = Quotient::new(s, self.w.step(n - 1))?;
        let fp = self.fp.induced(&quotient, s)?;
        let fpp = self.fpp.induced(&quotient, s)?;
        Ok(WeightQuotient {
            n,
            quotient,
            fp,
            fpp,
        })
    }

    /// F′ and F″ induced on every gr^W_n, computed in one basis adapted to W:
    /// W_n is the span of the last dim W_n coordinates, so for an RREF basis of a
    /// step U the rows pivoting inside W_n span U ∩ W_n, and cutting them down to
    /// the columns of gr^W_n gives the induced step without further elimination.
    pub fn graded_pieces(&self) -> Result<Vec<GradedPiece>> {
        let n = self.dim;
        let jumps: Vec<i32> = self.w.jumps().collect();
        // blocks of the adapted basis, lowest weight first
        let mut blocks: Vec<Matrix> = Vec::new();
        let mut prev = Subspace::zero(n);
        for &k in &jumps {
            let cur = self.w.step(k);
            blocks.push(Quotient::new(cur, &prev)?.complement().clone());
            prev = cur.clone();
        }
        let mut basis = Matrix::zeros(0, n);
        for b in blocks.iter().rev() {
            basis = basis.vstack(b);
        }
        // rows of `basis` are the adapted vectors; coordinates c satisfy v = c·basis
        let to_adapted = basis.try_inverse()?;
        let adapt = |f: &Filtration| -> Vec<(i32, Matrix, Vec<usize>)> {
            f.steps()
                .iter()
                .map(|(&k, u)| {
                    let (r, piv) = (u.basis() * &to_adapted).rref();
                    (k, r, piv)
                })
                .collect()
        };
        let (fp, fpp) = (adapt(&self.fp), adapt(&self.fpp));
        let mut out = Vec::new();
        for (idx, &k) in jumps.iter().enumerate() {
            let hi = n - if idx == 0 { 0 } else { self.w.step(jumps[idx - 1]).dim() };
            let lo = n - self.w.step(k).dim();
            // the lowest stored step of F′ and F″ is the whole space, so each cut is exhaustive
            let cut = |steps: &[(i32, Matrix, Vec<usize>)]| -> Result<Filtration> {
                let cols: Vec<usize> = (lo..hi).collect();
                let mut map = BTreeMap::new();
                for (key, r, piv) in steps {
                    let rows: Vec<usize> = (0..piv.len()).filter(|&i| (lo..hi).contains(&piv[i])).collect();
                    map.insert(*key, Subspace::row_space(&r.submatrix(&rows, &cols)));
                }
                Filtration::new(Direction::Decreasing, hi - lo, map)
            };
            out.push(GradedPiece {
                n: k,
                fp: cut(&fp)?,
                fpp: cut(&fpp)?,
            });
        }
        Ok(out)
    }

    /// Checks opposedness; on success returns the Hodge numbers.
    pub fn validate(&self) -> Result<HodgeNumbers> {
        let mut h = BTreeMap::new();
        for piece in self.graded_pieces()? {
            match piece.opposed_pieces()? {
                Some(pieces) => h.extend(pieces),
                None => return Err(Error::InvalidMhs(piece.first_violation()?)),
            }
        }
        let h = HodgeNumbers::new(h);
        if h.total() != self.dim {
            return Err(Error::Internal("hodge numbers do not add up".into()));
        }
        Ok(h)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Complex conjugate structure: conjugate everything and swap F′ with F″.
    pub fn conjugate(&self) -> Self {
        ComplexMHS {
            dim: self.dim,
            w: self.w.conj(),
            fp: self.fpp.conj(),
            fpp: self.fp.conj(),
        }
    }

    /// Transports the structure along an isomorphism `g`.
    pub fn transform(&self, g: &Matrix) -> Result<Self> {
        if !g.is_square() || g.rows() != self.dim || g.inverse().is_none() {
            return Err(Error::ShapeMismatch("transform needs an invertible square matrix".into()));
        }
        ComplexMHS::new(self.w.transform(g)?, self.fp.transform(g)?, self.fpp.transform(g)?)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        ComplexMHS::new(
            self.w.tensor(&other.w)?,
            self.fp.tensor(&other.fp)?,
            self.fpp.tensor(&other.fpp)?,
        )
    }

    pub fn dual(&self) -> Result<Self> {
        ComplexMHS::new(self.w.dual()?, self.fp.dual()?, self.fpp.dual()?)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        ComplexMHS::new(
            self.w.direct_sum(&other.w)?,
            self.fp.direct_sum(&other.fp)?,
            self.fpp.direct_sum(&other.fpp)?,
        )
    }

    /// Whether all three filtrations are defined over ℚ.
    pub fn is_rational(&self) -> bool {
        self.w.is_real() && self.fp.is_real() && self.fpp.is_real()
    }
}

pub fn validate_mhs(v: &ComplexMHS) -> Result<HodgeNumbers> {
    v.validate()
}

pub fn conjugate_mhs(v: &ComplexMHS) -> ComplexMHS {
    v.conjugate()
}

pub fn tensor_mhs(a: &ComplexMHS, b: &ComplexMHS) -> Result<ComplexMHS> {
    a.tensor(b)
}

pub fn dual_mhs(v: &ComplexMHS) -> Result<ComplexMHS> {
    v.dual()
}

pub fn direct_sum_mhs(a: &ComplexMHS, b: &ComplexMHS) -> Result<ComplexMHS> {
    a.direct_sum(b)
}

/// `true` iff `f : V → V′` preserves W, F′ and F″.
pub fn validate_morphism(f: &Matrix, v: &ComplexMHS, target: &ComplexMHS) -> Result<bool> {
    Ok(v.w.is_preserved_by(f, &target.w)?
        && v.fp.is_preserved_by(f, &target.fp)?
        && v.fpp.is_preserved_by(f, &target.fpp)?)
}

/// A real MHS: W defined over ℚ and a single Hodge filtration F over ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealMHS {
    dim: usize,
    w: Filtration,
    f: Filtration,
}

impl RealMHS {
    pub fn new(w: Filtration, f: Filtration) -> Result<Self> {
        let dim = w.ambient();
        check_dim(dim, f.ambient())?;
        if w.direction() != Direction::Increasing || f.direction() != Direction::Decreasing {
            return Err(Error::InvalidFiltration("expected W increasing and F decreasing".into()));
        }
        if !w.is_real() {
            return Err(Error::InvalidFiltration("weight filtration must be defined over Q".into()));
        }
        Ok(RealMHS { dim, w, f })
    }

    /// ℝ(n): one-dimensional, of type (−n, −n).
    pub fn tate(n: i32) -> Self {
        RealMHS::new(
            Filtration::trivial(Direction::Increasing, 1, -2 * n),
            Filtration::trivial(Direction::Decreasing, 1, -n),
        )
        .unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn w(&self) -> &Filtration {
        &self.w
    }

    pub fn f(&self) -> &Filtration {
        &self.f
    }

    /// The complexification (W, F, F̄); validated.
    pub fn realize(&self) -> Result<ComplexMHS> {
        let v = ComplexMHS::new(self.w.clone(), self.f.clone(), self.f.conj())?;
        v.validate()?;
        Ok(v)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        RealMHS::new(self.w.direct_sum(&other.w)?, self.f.direct_sum(&other.f)?)
    }
}

pub fn realize_real(v: &RealMHS) -> Result<ComplexMHS> {
    v.realize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Scalar};
    use num_traits::{One, Zero};

    /// K(c) in the basis (e₋₁, e₀).
    fn kummer(c: Scalar) -> ComplexMHS {
        let w = Filtration::new(
            Direction::Increasing,
            2,
            BTreeMap::from([(-2, Subspace::coordinate(2, [0])), (0, Subspace::full(2))]),
        )
        .unwrap();
        let fp = Filtration::new(
            Direction::Decreasing,
            2,
            BTreeMap::from([(-1, Subspace::full(2)), (0, Subspace::coordinate(2, [1]))]),
        )
        .unwrap();
        let line = Subspace::span(2, &[vec![c, Scalar::one()]]).unwrap();
        let fpp = Filtration::new(
            Direction::Decreasing,
            2,
            BTreeMap::from([(-1, Subspace::full(2)), (0, line)]),
        )
        .unwrap();
        ComplexMHS::new(w, fp, fpp).unwrap()
    }

    #[test]
    fn filtration_queries() {
        let w = &kummer(q(3, 1)).w;
        assert!(w.step(-3).is_zero());
        assert_eq!(w.step(-1).dim(), 1);
        assert!(w.step(7).is_full());
        let fp = &kummer(q(3, 1)).fp;
        assert!(fp.step(-5).is_full());
        assert_eq!(fp.step(0).dim(), 1);
        assert!(fp.step(1).is_zero());
        assert_eq!(fp.jumps().collect::<Vec<_>>(), vec![-1, 0]);
    }

    #[test]
    fn normalization_drops_redundant_steps() {
        let f = Filtration::from_fn(Direction::Decreasing, 2, -4, 4, |p| {
            Ok(if p <= 0 { Subspace::full(2) } else { Subspace::zero(2) })
        })
        .unwrap();
        assert_eq!(f, Filtration::trivial(Direction::Decreasing, 2, 0));
        let bad = BTreeMap::from([(0, Subspace::coordinate(2, [0]))]);
        assert!(Filtration::new(Direction::Increasing, 2, bad).is_err());
    }

    #[test]
    fn pure_and_kummer_hodge_numbers() {
        let h = ComplexMHS::pure(2, -1).validate().unwrap();
        assert_eq!(h.get(2, -1), 1);
        let h = kummer(q(5, 2)).validate().unwrap();
        assert_eq!((h.get(0, 0), h.get(-1, -1), h.total()), (1, 1, 2));
        assert_eq!(ComplexMHS::zero().validate().unwrap().total(), 0);
    }

    #[test]
    fn kummer_with_bad_weight_line_is_rejected() {
        let k = kummer(q(1, 1));
        let w = Filtration::new(
            Direction::Increasing,
            2,
            BTreeMap::from([(-2, Subspace::coordinate(2, [1])), (0, Subspace::full(2))]),
        )
        .unwrap();
        let bad = ComplexMHS::new(w, k.fp.clone(), k.fpp.clone()).unwrap();
        match bad.validate() {
            Err(Error::InvalidMhs(v)) => assert_eq!((v.n, v.p, v.q), (-2, 0, -1)),
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn conjugation() {
        assert_eq!(ComplexMHS::pure(2, -3).conjugate(), ComplexMHS::pure(-3, 2));
        let k = kummer(Scalar::gaussian(2, 1));
        assert_eq!(k.conjugate().conjugate(), k);
        let h = k.conjugate().validate().unwrap();
        assert_eq!(h, k.validate().unwrap().transpose());
        let fp0 = k.conjugate().fp().step(0).clone();
        assert!(fp0.contains_vector(&[Scalar::gaussian(2, -1), Scalar::one()]));
    }

    #[test]
    fn tensor_dual_sum() {
        let t = ComplexMHS::pure(1, 2).tensor(&ComplexMHS::pure(-3, 5)).unwrap();
        assert_eq!(t, ComplexMHS::pure(-2, 7));
        assert_eq!(ComplexMHS::pure(1, 2).dual().unwrap(), ComplexMHS::pure(-1, -2));
        let k = kummer(q(2, 1));
        let kt = k.tensor(&ComplexMHS::pure(1, 1)).unwrap();
        let h = kt.validate().unwrap();
        assert_eq!((h.get(1, 1), h.get(0, 0)), (1, 1));
        assert_eq!(k.dual().unwrap().dual().unwrap(), k);
        let kk = k.tensor(&kummer(q(-1, 3))).unwrap();
        let h = kk.validate().unwrap();
        assert_eq!(h, k.validate().unwrap().convolve(&kummer(q(-1, 3)).validate().unwrap()));
        let s = k.direct_sum(&ComplexMHS::pure(4, 4)).unwrap();
        assert_eq!(s.validate().unwrap().get(4, 4), 1);
        assert_eq!(s.dim(), 3);
    }

    #[test]
    fn morphisms() {
        let k = kummer(q(2, 1));
        assert!(validate_morphism(&Matrix::identity(2), &k, &k).unwrap());
        assert!(validate_morphism(&Matrix::zeros(2, 2), &k, &k).unwrap());
        // e₋₁ ↦ e₀
        let raise = Matrix::unit(2, 2, 1, 0);
        assert!(!validate_morphism(&raise, &k, &k).unwrap());
        assert!(validate_morphism(&Matrix::zeros(3, 2), &k, &k).is_err());
    }

    #[test]
    fn real_structures() {
        assert_eq!(RealMHS::tate(0).realize().unwrap(), ComplexMHS::pure(0, 0));
        assert_eq!(RealMHS::tate(2).realize().unwrap(), ComplexMHS::pure(-2, -2));
        let k = kummer(Scalar::gaussian(3, 2));
        let r = RealMHS::new(k.w().clone(), k.fpp().clone()).unwrap();
        let c = r.realize().unwrap();
        assert_eq!(c.conjugate(), c);
        let line = c.fpp().step(0);
        assert!(line.contains_vector(&[Scalar::gaussian(3, -2), Scalar::one()]));
        assert!(Scalar::zero().is_zero());
    }
}
