//! Absolute Hodge cohomology as the cohomology of the invariant two-term de Rham
//! complex Γ(E)^T → Γ(E ⊗ Ω¹)^T of the associated connection.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, Quotient, RowSolver, Scalar, Subspace};
use crate::connection::{connection_form, connection_from_delta, EquivariantConnection};
use crate::error::{Error, Result};
use crate::mhs::{dual_mhs, tensor_mhs, ComplexMHS, RealMHS};
use crate::splitting::delta_computation;

/// v_i · t₁^a t₂^b, optionally times dt₁ (slot 1) or dt₂ (slot 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonomialLabel {
    pub index: usize,
    pub a: u32,
    pub b: u32,
    pub slot: u8,
}

impl fmt::Display for MonomialLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{} t1^{} t2^{}", self.index, self.a, self.b)?;
        match self.slot {
            1 => f.write_str(" dt1"),
            2 => f.write_str(" dt2"),
            _ => Ok(()),
        }
    }
}

/// The map s ↦ ds + Ωs on torus-invariant sections, in monomial bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermComplex {
    pub domain: Vec<MonomialLabel>,
    pub codomain: Vec<MonomialLabel>,
    /// codomain × domain.
    pub map: Matrix,
}

fn nonneg(x: i32) -> Option<u32> {
    u32::try_from(x).ok()
}

/// Builds the invariant complex. Invariant sections pair e_i with t₁^{−pᵢ} t₂^{−qᵢ}.
pub fn invariant_complex(c: &EquivariantConnection) -> Result<TwoTermComplex> {
    let labels = c.labels();
    let mut domain = Vec::new();
    let mut codomain = Vec::new();
    for (i, &(p, q)) in labels.iter().enumerate() {
        if let (Some(a), Some(b)) = (nonneg(-p), nonneg(-q)) {
            domain.push(MonomialLabel { index: i, a, b, slot: 0 });
        }
    }
    for (i, &(p, q)) in labels.iter().enumerate() {
        if let (Some(a), Some(b)) = (nonneg(-p - 1), nonneg(-q)) {
            codomain.push(MonomialLabel { index: i, a, b, slot: 1 });
        }
    }
    for (i, &(p, q)) in labels.iter().enumerate() {
        if let (Some(a), Some(b)) = (nonneg(-p), nonneg(-q - 1)) {
            codomain.push(MonomialLabel { index: i, a, b, slot: 2 });
        }
    }
    let pos: BTreeMap<MonomialLabel, usize> = codomain.iter().enumerate().map(|(k, l)| (*l, k)).collect();
    let (pf, qf) = connection_form(c);
    let mut map = Matrix::zeros(codomain.len(), domain.len());
    let mut put = |row: MonomialLabel, col: usize, x: Scalar| -> Result<()> {
        let r = *pos
            .get(&row)
            .ok_or_else(|| Error::Internal(format!("{row} is not an invariant 1-form")))?;
        map[(r, col)] += &x;
        Ok(())
    };
    for (col, s) in domain.iter().enumerate() {
        if s.a > 0 {
            put(MonomialLabel { a: s.a - 1, slot: 1, ..*s }, col, Scalar::from_int(s.a as i64))?;
        }
        if s.b > 0 {
            put(MonomialLabel { b: s.b - 1, slot: 2, ..*s }, col, Scalar::from_int(s.b as i64))?;
        }
        for (form, slot) in [(&pf, 1u8), (&qf, 2u8)] {
            for (e, m) in form.terms() {
                for k in 0..m.rows() {
                    let x = &m[(k, s.index)];
                    if x.is_zero() {
                        continue;
                    }
                    let row = MonomialLabel {
                        index: k,
                        a: s.a + e[0] as u32,
                        b: s.b + e[1] as u32,
                        slot,
                    };
                    put(row, col, x.clone())?;
                }
            }
        }
    }
    Ok(TwoTermComplex { domain, codomain, map })
}

/// Dimensions of Ext⁰ and Ext¹ with explicit representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtGroups {
    pub ext0: usize,
    pub ext1: usize,
    /// Kernel basis in domain coordinates.
    pub kernel: Vec<Vec<Scalar>>,
    /// Codomain vectors spanning a complement of the image.
    pub cokernel: Vec<Vec<Scalar>>,
    pub domain: Vec<String>,
    pub codomain: Vec<String>,
}

impl TwoTermComplex {
    pub fn cohomology(&self) -> Result<ExtGroups> {
        let (m, n) = (self.codomain.len(), self.domain.len());
        let kernel = if n == 0 { Vec::new() } else { self.map.kernel().row_vecs() };
        let image = if m == 0 || n == 0 {
            Subspace::zero(m)
        } else {
            Subspace::col_space(&self.map)
        };
        let cokernel = Quotient::new(&Subspace::full(m), &image)?.complement().row_vecs();
        Ok(ExtGroups {
            ext0: kernel.len(),
            ext1: cokernel.len(),
            kernel,
            cokernel,
            domain: self.domain.iter().map(ToString::to_string).collect(),
            codomain: self.codomain.iter().map(ToString::to_string).collect(),
        })
    }
}

/// R Hom(1, V) for a complex MHS through the Fock–Schwinger connection of δ(V).
pub fn absolute_cohomology(v: &ComplexMHS) -> Result<ExtGroups> {
    let comp = delta_computation(v)?;
    let conn = connection_from_delta(&comp.object)?;
    invariant_complex(&conn)?.cohomology()
}

/// R Hom(V′, V) = R Hom(1, V′* ⊗ V).
pub fn ext_between(source: &ComplexMHS, target: &ComplexMHS) -> Result<ExtGroups> {
    absolute_cohomology(&tensor_mhs(&dual_mhs(source)?, target)?)
}

/// dim (W₀ ∩ F′⁰ ∩ F″⁰) = dim Hom(1, V).
pub fn hom_from_unit(v: &ComplexMHS) -> Result<usize> {
    Ok(v.w().step(0).intersect(v.fp().step(0))?.intersect(v.fpp().step(0))?.dim())
}

/// h^{0,0} − Σ_{p,q ≤ −1} h^{p,q}.
pub fn euler_characteristic(v: &ComplexMHS) -> Result<i64> {
    let h = v.validate()?;
    let neg: usize = h.iter().filter(|((p, q), _)| *p <= -1 && *q <= -1).map(|(_, d)| d).sum();
    Ok(h.get(0, 0) as i64 - neg as i64)
}

/// An antilinear map x ↦ M·x̄.
fn antilinear_commutes(map: &Matrix, sigma_dom: &Matrix, sigma_cod: &Matrix) -> bool {
    &(map * sigma_dom) == &(sigma_cod * &map.conj())
}

/// The matrix of x ↦ σ(x) on a monomial basis, given σ on the fibre.
fn sigma_on(labels: &[MonomialLabel], s: &Matrix) -> Result<Matrix> {
    let pos: BTreeMap<MonomialLabel, usize> = labels.iter().enumerate().map(|(k, l)| (*l, k)).collect();
    let mut out = Matrix::zeros(labels.len(), labels.len());
    for (col, l) in labels.iter().enumerate() {
        for k in 0..s.rows() {
            let x = &s[(k, l.index)];
            if x.is_zero() {
                continue;
            }
            let slot = match l.slot {
                1 => 2,
                2 => 1,
                s => s,
            };
            let target = MonomialLabel { index: k, a: l.b, b: l.a, slot };
            let r = pos
                .get(&target)
                .ok_or_else(|| Error::Internal(format!("real structure sends {l} outside the complex")))?;
            out[(*r, col)] = x.clone();
        }
    }
    Ok(out)
}

/// (re, im) coordinates.
fn realify(v: &[Scalar]) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = v.iter().map(|x| Scalar::from_rational(x.re().clone())).collect();
    out.extend(v.iter().map(|x| Scalar::from_rational(x.im().clone())));
    out
}

/// A ℚ-basis (realified) of the fixed points of x ↦ σ·x̄ on ℚ(i)^n.
fn fixed_basis(sigma: &Matrix) -> Result<Vec<Vec<Scalar>>> {
    let n = sigma.rows();
    let mut rows = Vec::new();
    for k in 0..n {
        for c in [Scalar::from_int(1), Scalar::i()] {
            let mut x = vec![Scalar::zero(); n];
            x[k] = c;
            let sx = sigma.apply(&x.iter().map(Scalar::conj).collect::<Vec<_>>());
            let y: Vec<Scalar> = x.iter().zip(&sx).map(|(a, b)| a + b).collect();
            rows.push(realify(&y));
        }
    }
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let basis = Subspace::row_space(&Matrix::from_rows(2 * n, rows)?).basis_vectors();
    if basis.len() != n {
        return Err(Error::Internal("real structure is not an involution".into()));
    }
    Ok(basis)
}

/// Cohomology over ℚ of the σ-fixed part of the invariant complex of a real MHS.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealExtGroups {
    pub ext0: usize,
    pub ext1: usize,
}

pub fn real_absolute_cohomology(v: &RealMHS) -> Result<RealExtGroups> {
    let vc = v.realize()?;
    let comp = delta_computation(&vc)?;
    // the real structure on gr, transported through the two splittings
    let fpp_inv = comp
        .lift_fpp
        .inverse()
        .ok_or_else(|| Error::Internal("F'' lifts are not a basis".into()))?;
    let s = &fpp_inv * &comp.lift_fp.conj();
    let labels = comp.object.labels();
    for (i, j, x) in s.entries() {
        if !x.is_zero() && labels[i] != (labels[j].1, labels[j].0) {
            return Err(Error::Internal("real structure on gr is not of type (q,p)".into()));
        }
    }
    if !(&s * &s.conj()).is_identity() {
        return Err(Error::Internal("real structure on gr is not an involution".into()));
    }
    let conn = connection_from_delta(&comp.object)?;
    let cx = invariant_complex(&conn)?;
    let sd = sigma_on(&cx.domain, &s)?;
    let sc = sigma_on(&cx.codomain, &s)?;
    if !antilinear_commutes(&cx.map, &sd, &sc) {
        return Err(Error::Internal("connection is not compatible with the real structure".into()));
    }
    let dom = fixed_basis(&sd)?;
    let cod = fixed_basis(&sc)?;
    let (nd, nc) = (cx.domain.len(), cx.codomain.len());
    let rank = if dom.is_empty() || cod.is_empty() {
        0
    } else {
        let solver = RowSolver::new(Matrix::from_rows(2 * nc, cod)?)?;
        let mut rows = Vec::with_capacity(dom.len());
        for u in &dom {
            // back from (re, im) to ℚ(i) coordinates
            let x: Vec<Scalar> = (0..nd)
                .map(|k| &u[k] + &(&u[nd + k] * &Scalar::i()))
                .collect();
            let y = realify(&cx.map.apply(&x));
            rows.push(
                solver
                    .solve(&y)
                    .ok_or_else(|| Error::Internal("image of a real section is not real".into()))?,
            );
        }
        Matrix::from_rows(nc, rows)?.rank()
    };
    Ok(RealExtGroups {
        ext0: nd - rank,
        ext1: nc - rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::connection::Blocks;
    use crate::mhs::HodgeNumbers;
    use crate::splitting::{delta_to_mhs, DeltaObject};

    fn k_mhs(c: Scalar) -> ComplexMHS {
        let h = HodgeNumbers::new(BTreeMap::from([((-1, -1), 1), ((0, 0), 1)]));
        let mut m = Matrix::identity(2);
        m[(0, 1)] = -c;
        delta_to_mhs(&DeltaObject::new(h, m).unwrap()).unwrap()
    }

    #[test]
    fn pure_structures() {
        let e = absolute_cohomology(&ComplexMHS::pure(0, 0)).unwrap();
        assert_eq!((e.ext0, e.ext1), (1, 0));
        let e = absolute_cohomology(&ComplexMHS::pure(-1, -1)).unwrap();
        assert_eq!((e.ext0, e.ext1), (0, 1));
        let e = absolute_cohomology(&ComplexMHS::pure(1, -1)).unwrap();
        assert_eq!((e.ext0, e.ext1), (0, 0));
    }

    #[test]
    fn p_minus_one_complex_shape() {
        let h = HodgeNumbers::new(BTreeMap::from([((-1, -1), 1)]));
        let c = EquivariantConnection::new(h, Blocks::new(), Blocks::new()).unwrap();
        let cx = invariant_complex(&c).unwrap();
        assert_eq!(cx.domain.len(), 1);
        assert_eq!(cx.codomain.len(), 2);
        assert_eq!(cx.map.rank(), 1);
    }

    #[test]
    fn kummer_extensions() {
        for c in [q(2, 1), Scalar::gaussian(2, 1)] {
            let v = k_mhs(c);
            let e = absolute_cohomology(&v).unwrap();
            assert_eq!((e.ext0, e.ext1), (0, 0));
            assert_eq!(hom_from_unit(&v).unwrap(), 0);
        }
        let e = absolute_cohomology(&k_mhs(Scalar::zero())).unwrap();
        assert_eq!((e.ext0, e.ext1), (1, 1));
    }

    #[test]
    fn real_tate() {
        let r = real_absolute_cohomology(&RealMHS::tate(0)).unwrap();
        assert_eq!((r.ext0, r.ext1), (1, 0));
        let r = real_absolute_cohomology(&RealMHS::tate(1)).unwrap();
        assert_eq!((r.ext0, r.ext1), (0, 1));
        let sum = RealMHS::tate(0).direct_sum(&RealMHS::tate(1)).unwrap();
        let r = real_absolute_cohomology(&sum).unwrap();
        assert_eq!((r.ext0, r.ext1), (1, 1));
    }
}
