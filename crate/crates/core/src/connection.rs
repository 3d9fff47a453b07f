//! Torus-equivariant connections d + Ω on the affine plane attached to a
//! bigraded space, their curvature, gauge action and the Fock–Schwinger gauge.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{Matrix, PolyMatrix, Scalar};
use crate::error::{Error, Result};
use crate::freelie::lie_tables;
use crate::mhs::HodgeNumbers;
use crate::splitting::{basis_labels, log_delta_components, DeltaObject};

/// Polynomial matrices in (t₁, t₂).
pub type Poly2 = PolyMatrix<2>;

/// Blocks keyed by their drop (p, q), p, q ≥ 1; each is a full n×n matrix
/// mapping the basis vector labelled (p′, q′) into the span of those labelled (p′−p, q′−q).
pub type Blocks = BTreeMap<(i32, i32), Matrix>;

fn check_blocks(labels: &[(i32, i32)], blocks: &Blocks, what: &str) -> Result<Blocks> {
    let n = labels.len();
    let mut out = Blocks::new();
    for (&(p, q), m) in blocks {
        if p < 1 || q < 1 {
            return Err(Error::Bidegree(format!("{what}[{p},{q}]: drops must be at least 1")));
        }
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if m.rows() != n { m.rows() } else { m.cols() },
            });
        }
        for (i, j, x) in m.entries() {
            if !x.is_zero() && (labels[j].0 - labels[i].0, labels[j].1 - labels[i].1) != (p, q) {
                return Err(Error::Bidegree(format!(
                    "{what}[{p},{q}] has entry ({i},{j}) from {:?} to {:?}",
                    labels[j], labels[i]
                )));
            }
        }
        if !m.is_zero() {
            out.insert((p, q), m.clone());
        }
    }
    Ok(out)
}

/// Admissible connection data: Ω = Σ A_{p,q} t₁^{p−1}t₂^q dt₁ + B_{p,q} t₁^p t₂^{q−1} dt₂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantConnection {
    hodge: HodgeNumbers,
    labels: Vec<(i32, i32)>,
    a: Blocks,
    b: Blocks,
}

impl EquivariantConnection {
    pub fn new(hodge: HodgeNumbers, a: Blocks, b: Blocks) -> Result<Self> {
        let labels = basis_labels(&hodge);
        let a = check_blocks(&labels, &a, "A")?;
        let b = check_blocks(&labels, &b, "B")?;
        Ok(EquivariantConnection { hodge, labels, a, b })
    }

    pub fn zero(hodge: HodgeNumbers) -> Self {
        EquivariantConnection::new(hodge, Blocks::new(), Blocks::new()).unwrap()
    }

    pub fn hodge(&self) -> &HodgeNumbers {
        &self.hodge
    }

    pub fn labels(&self) -> &[(i32, i32)] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn a(&self) -> &Blocks {
        &self.a
    }

    pub fn b(&self) -> &Blocks {
        &self.b
    }

    pub fn a_block(&self, p: i32, q: i32) -> Matrix {
        self.a.get(&(p, q)).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(), self.dim()))
    }

    pub fn b_block(&self, p: i32, q: i32) -> Matrix {
        self.b.get(&(p, q)).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(), self.dim()))
    }

    /// Drops carrying a nonzero A or B block.
    pub fn support(&self) -> Vec<(i32, i32)> {
        let mut keys: Vec<_> = self.a.keys().chain(self.b.keys()).copied().collect();
        keys.sort_by_key(|&(p, q)| (p + q, p));
        keys.dedup();
        keys
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    /// A_{p,q} + B_{p,q} = 0 for every drop.
    pub fn is_fock_schwinger(&self) -> bool {
        self.support()
            .into_iter()
            .all(|(p, q)| (&self.a_block(p, q) + &self.b_block(p, q)).is_zero())
    }

    /// (P, Q) with Ω = P dt₁ + Q dt₂.
    pub fn form(&self) -> (Poly2, Poly2) {
        let n = self.dim();
        let mut p_form = Poly2::zero(n, n);
        let mut q_form = Poly2::zero(n, n);
        for (&(p, q), m) in &self.a {
            p_form.add_term([p - 1, q], m);
        }
        for (&(p, q), m) in &self.b {
            q_form.add_term([p, q - 1], m);
        }
        (p_form, q_form)
    }

    /// Reads the blocks back from a form; fails unless the form is admissible.
    pub fn from_form(hodge: HodgeNumbers, p_form: &Poly2, q_form: &Poly2) -> Result<Self> {
        let mut a = Blocks::new();
        let mut b = Blocks::new();
        for (e, m) in p_form.terms() {
            if e[1] < 1 {
                return Err(Error::Bidegree(format!("dt1 term t1^{} t2^{} is not admissible", e[0], e[1])));
            }
            a.insert((e[0] + 1, e[1]), m.clone());
        }
        for (e, m) in q_form.terms() {
            if e[0] < 1 {
                return Err(Error::Bidegree(format!("dt2 term t1^{} t2^{} is not admissible", e[0], e[1])));
            }
            b.insert((e[0], e[1] + 1), m.clone());
        }
        EquivariantConnection::new(hodge, a, b)
    }
}

/// Ω = P dt₁ + Q dt₂.
pub fn connection_form(c: &EquivariantConnection) -> (Poly2, Poly2) {
    c.form()
}

/// The dt₁∧dt₂ coefficient ∂₁Q − ∂₂P + [P, Q].
pub fn curvature(c: &EquivariantConnection) -> Poly2 {
    let (p, q) = c.form();
    let d = &q.derivative(0) - &p.derivative(1);
    let br = &(&p * &q) - &(&q * &p);
    &d + &br
}

pub fn is_flat(c: &EquivariantConnection) -> bool {
    curvature(c).is_zero()
}

/// g = 1 + Σ C_{p,q} t₁^p t₂^q with strictly double-lowering C's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeTransformation {
    labels: Vec<(i32, i32)>,
    c: Blocks,
}

impl GaugeTransformation {
    pub fn new(hodge: &HodgeNumbers, c: Blocks) -> Result<Self> {
        let labels = basis_labels(hodge);
        let c = check_blocks(&labels, &c, "C")?;
        Ok(GaugeTransformation { labels, c })
    }

    pub fn identity(hodge: &HodgeNumbers) -> Self {
        GaugeTransformation::new(hodge, Blocks::new()).unwrap()
    }

    pub fn blocks(&self) -> &Blocks {
        &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.c.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn to_poly(&self) -> Poly2 {
        let mut g = Poly2::identity(self.dim());
        for (&(p, q), m) in &self.c {
            g.add_term([p, q], m);
        }
        g
    }

    /// g⁻¹ as a finite geometric series in 1 − g.
    pub fn inverse_poly(&self) -> Poly2 {
        let n = self.dim();
        let x = &Poly2::identity(n) - &self.to_poly();
        let mut acc = Poly2::identity(n);
        let mut power = x.clone();
        while !power.is_zero() {
            acc = &acc + &power;
            power = &power * &x;
        }
        acc
    }

    /// The product g·h; acting by it equals acting by g and then by h.
    pub fn compose(&self, h: &GaugeTransformation) -> GaugeTransformation {
        assert_eq!(self.labels, h.labels, "gauge transformations on different spaces");
        let prod = &self.to_poly() * &h.to_poly();
        let mut c = Blocks::new();
        for (e, m) in prod.terms() {
            if *e != [0, 0] {
                c.insert((e[0], e[1]), m.clone());
            }
        }
        GaugeTransformation {
            labels: self.labels.clone(),
            c,
        }
    }
}

/// Ω ↦ g⁻¹dg + g⁻¹Ωg.
pub fn apply_gauge(c: &EquivariantConnection, g: &GaugeTransformation) -> Result<EquivariantConnection> {
    if c.labels != g.labels {
        return Err(Error::ShapeMismatch("gauge and connection live on different spaces".into()));
    }
    let (p, q) = c.form();
    let gp = g.to_poly();
    let gi = g.inverse_poly();
    let p2 = &gi * &(&gp.derivative(0) + &(&p * &gp));
    let q2 = &gi * &(&gp.derivative(1) + &(&q * &gp));
    EquivariantConnection::from_form(c.hodge.clone(), &p2, &q2)
}

/// The Fock–Schwinger representative of the gauge class of `c` and a gauge reaching it.
pub fn normalize_fock_schwinger(
    c: &EquivariantConnection,
) -> Result<(EquivariantConnection, GaugeTransformation)> {
    let spread = c.hodge.weight_spread();
    let mut cur = c.clone();
    let mut total = GaugeTransformation::identity(&c.hodge);
    for d in 2..=spread {
        let mut blocks = Blocks::new();
        for p in 1..d {
            let q = d - p;
            let s = &cur.a_block(p, q) + &cur.b_block(p, q);
            if !s.is_zero() {
                blocks.insert((p, q), s.scale(&Scalar::from_frac(-1, d as i64)));
            }
        }
        if blocks.is_empty() {
            continue;
        }
        let g = GaugeTransformation::new(&c.hodge, blocks)?;
        cur = apply_gauge(&cur, &g)?;
        total = total.compose(&g);
    }
    debug_assert!(cur.is_fock_schwinger());
    Ok((cur, total))
}

/// The Fock–Schwinger connection whose triangle holonomy is δ: A_{p,q} is the
/// inverted universal Lie polynomial α_{p,q} evaluated at z ↦ D, and B = −A.
pub fn connection_from_delta(d: &DeltaObject) -> Result<EquivariantConnection> {
    if d.is_split() {
        return Ok(EquivariantConnection::zero(d.hodge().clone()));
    }
    let spread = d.hodge().weight_spread().max(2) as u32;
    let tables = lie_tables(spread)?;
    let comps = log_delta_components(d);
    let a = tables.connection_blocks(d.dim(), &comps);
    let b = a.iter().map(|(k, m)| (*k, -m)).collect();
    EquivariantConnection::new(d.hodge().clone(), a, b)
}

/// z_{p,q}(A): the components of log δ predicted by the universal Lie polynomials.
pub fn log_holonomy_components(c: &EquivariantConnection) -> Result<Blocks> {
    if c.is_zero() {
        return Ok(Blocks::new());
    }
    if !c.is_fock_schwinger() {
        return Err(Error::Bidegree("universal formula needs the Fock-Schwinger gauge".into()));
    }
    let spread = c.hodge.weight_spread().max(2) as u32;
    Ok(lie_tables(spread)?.log_components(c.dim(), &c.a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::mhs::HodgeNumbers;

    fn k_hodge() -> HodgeNumbers {
        HodgeNumbers::new(BTreeMap::from([((-1, -1), 1), ((0, 0), 1)]))
    }

    fn k_conn(a: Scalar, b: Scalar) -> EquivariantConnection {
        let e = Matrix::unit(2, 2, 0, 1);
        EquivariantConnection::new(
            k_hodge(),
            Blocks::from([((1, 1), e.scale(&a))]),
            Blocks::from([((1, 1), e.scale(&b))]),
        )
        .unwrap()
    }

    #[test]
    fn homogeneity_is_enforced() {
        let bad = Blocks::from([((1, 1), Matrix::unit(2, 2, 1, 0))]);
        assert!(EquivariantConnection::new(k_hodge(), bad, Blocks::new()).is_err());
        let bad = Blocks::from([((1, 0), Matrix::unit(2, 2, 0, 1))]);
        assert!(EquivariantConnection::new(k_hodge(), bad, Blocks::new()).is_err());
    }

    #[test]
    fn k_type_form_and_curvature() {
        let c = k_conn(q(3, 1), q(-3, 1));
        let (p, qq) = c.form();
        assert_eq!(p.coeff(&[0, 1]), Matrix::unit(2, 2, 0, 1).scale(&q(3, 1)));
        assert_eq!(qq.coeff(&[1, 0]), Matrix::unit(2, 2, 0, 1).scale(&q(-3, 1)));
        let f = curvature(&c);
        assert_eq!(f.coeff(&[0, 0]), Matrix::unit(2, 2, 0, 1).scale(&q(-6, 1)));
        assert!(is_flat(&EquivariantConnection::zero(k_hodge())));
    }

    #[test]
    fn gauge_first_order() {
        let m = Matrix::unit(2, 2, 0, 1).scale(&q(5, 1));
        let g = GaugeTransformation::new(&k_hodge(), Blocks::from([((1, 1), m.clone())])).unwrap();
        let c = apply_gauge(&EquivariantConnection::zero(k_hodge()), &g).unwrap();
        assert_eq!(c.a_block(1, 1), m);
        assert_eq!(c.b_block(1, 1), m);
        let id = GaugeTransformation::identity(&k_hodge());
        assert_eq!(apply_gauge(&c, &id).unwrap(), c);
    }

    #[test]
    fn fock_schwinger_k_type() {
        let c = k_conn(q(2, 1), Scalar::zero());
        let (n, g) = normalize_fock_schwinger(&c).unwrap();
        assert_eq!(n.a_block(1, 1), Matrix::unit(2, 2, 0, 1));
        assert_eq!(n.b_block(1, 1), Matrix::unit(2, 2, 0, 1).scale(&q(-1, 1)));
        assert_eq!(g.blocks()[&(1, 1)], Matrix::unit(2, 2, 0, 1).scale(&q(-1, 1)));
        assert_eq!(apply_gauge(&c, &g).unwrap(), n);
        let (n2, g2) = normalize_fock_schwinger(&n).unwrap();
        assert_eq!(n2, n);
        assert!(g2.is_identity());
    }

    #[test]
    fn from_delta_k_type() {
        let c = q(7, 3);
        let mut delta = Matrix::identity(2);
        delta[(0, 1)] = -c.clone();
        let d = DeltaObject::new(k_hodge(), delta).unwrap();
        let conn = connection_from_delta(&d).unwrap();
        assert_eq!(conn.a_block(1, 1), Matrix::unit(2, 2, 0, 1).scale(&c));
        assert!(conn.is_fock_schwinger());
        assert_eq!(log_holonomy_components(&conn).unwrap(), log_delta_components(&d));
        assert!(!is_flat(&conn));
        let id = connection_from_delta(&DeltaObject::identity(k_hodge())).unwrap();
        assert!(id.is_zero());
    }
}
