//! Exact parallel transport of nilpotent polynomial connections along
//! polygonal paths, by terminating Picard iteration.
//!
//! Convention: a section s along γ is flat when ds + Ω(γ′)s = 0. The
//! holonomy of a path is the transport of its last segment times … times
//! the transport of its first. The triangle is run (0,0) → (0,−1) → (−1,0) → (0,0).

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, Poly, PolyMatrix, Scalar};
use crate::connection::{connection_form, EquivariantConnection, Poly2};
use crate::error::{Error, Result};
use crate::splitting::DeltaObject;

pub type Point = [Scalar; 2];

/// At least two points, consecutive points distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonalPath {
    points: Vec<Point>,
}

impl PolygonalPath {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Parse("a path needs at least two points".into()));
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parse("consecutive path points coincide".into()));
        }
        Ok(PolygonalPath { points })
    }

    pub fn from_ints(points: &[(i64, i64)]) -> Result<Self> {
        PolygonalPath::new(
            points
                .iter()
                .map(|&(x, y)| [Scalar::from_int(x), Scalar::from_int(y)])
                .collect(),
        )
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        PolygonalPath { points }
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn concat(&self, other: &PolygonalPath) -> Result<Self> {
        if self.points.last() != other.points.first() {
            return Err(Error::Parse("paths do not meet".into()));
        }
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        PolygonalPath::new(points)
    }

    /// The boundary of the triangle with vertices (0,0), (0,−1), (−1,0) in that order.
    pub fn triangle() -> Self {
        PolygonalPath::from_ints(&[(0, 0), (0, -1), (-1, 0), (0, 0)]).unwrap()
    }
}

/// Pulls P dt₁ + Q dt₂ back along s ↦ a + s(b − a).
pub fn pullback_segment(p: &Poly2, q: &Poly2, a: &Point, b: &Point) -> PolyMatrix<1> {
    let d = [&b[0] - &a[0], &b[1] - &a[1]];
    let coord = |k: usize| Poly::new(vec![a[k].clone(), d[k].clone()]);
    let (x, y) = (coord(0), coord(1));
    let mut out = PolyMatrix::<1>::zero(p.rows(), p.cols());
    for (form, dk) in [(p, &d[0]), (q, &d[1])] {
        if dk.is_zero() {
            continue;
        }
        for (e, m) in form.terms() {
            let s = &x.pow(e[0] as u32) * &y.pow(e[1] as u32);
            let term = PolyMatrix::<1>::constant(m.scale(dk)).mul_poly(&s);
            out = &out + &term;
        }
    }
    out
}

/// Solves X′ = −ωX, X(base) = 1 by Picard iteration. Returns the
/// fundamental solution and the number of nonzero correction terms.
fn picard(omega: &PolyMatrix<1>, base: &Scalar, max_terms: usize) -> Result<(PolyMatrix<1>, usize)> {
    let n = omega.rows();
    let mut total = PolyMatrix::<1>::identity(n);
    let mut term = PolyMatrix::<1>::identity(n);
    let mut count = 0;
    loop {
        let integrand = &omega.scale(&-Scalar::one()) * &term;
        let anti = integrand.antiderivative();
        let at_base = anti.eval(&[base.clone()]);
        term = &anti - &PolyMatrix::<1>::constant(at_base);
        if term.is_zero() {
            return Ok((total, count));
        }
        count += 1;
        if count > max_terms {
            return Err(Error::NotNilpotent);
        }
        total = &total + &term;
    }
}

/// Transport T(a → b) together with the Picard depth.
pub fn transport_segment_counted(p: &Poly2, q: &Poly2, a: &Point, b: &Point) -> Result<(Matrix, usize)> {
    let omega = pullback_segment(p, q, a, b);
    let (sol, k) = picard(&omega, &Scalar::zero(), p.rows())?;
    Ok((sol.eval(&[Scalar::one()]), k))
}

/// The exact transport matrix T(a → b).
pub fn transport_segment(p: &Poly2, q: &Poly2, a: &Point, b: &Point) -> Result<Matrix> {
    Ok(transport_segment_counted(p, q, a, b)?.0)
}

/// T_last ⋯ T_first.
pub fn holonomy_path(p: &Poly2, q: &Poly2, path: &PolygonalPath) -> Result<Matrix> {
    let mut acc = Matrix::identity(p.rows());
    for w in path.points().windows(2) {
        acc = &transport_segment(p, q, &w[0], &w[1])? * &acc;
    }
    Ok(acc)
}

pub fn connection_holonomy(c: &EquivariantConnection, path: &PolygonalPath) -> Result<Matrix> {
    let (p, q) = connection_form(c);
    holonomy_path(&p, &q, path)
}

/// Holonomy around the triangle; the axis edges contribute nothing, so this
/// is the transport along the hypotenuse from (0,−1) to (−1,0).
pub fn triangle_delta(c: &EquivariantConnection) -> Result<DeltaObject> {
    let m = connection_holonomy(c, &PolygonalPath::triangle())?;
    DeltaObject::new(c.hodge().clone(), m)
}

/// `true` iff Ω pulls back to zero on both coordinate axes.
pub fn axes_trivial(c: &EquivariantConnection) -> bool {
    let (p, q) = connection_form(c);
    // on t₂ = 0 only P with no t₂ survives; on t₁ = 0 only Q with no t₁
    p.terms().all(|(e, _)| e[1] > 0) && q.terms().all(|(e, _)| e[0] > 0)
}

/// Fundamental solution S(u) along t₁ = u, t₂ = −1 − u, with S(−1) = 1.
pub fn flat_sections_on_line(c: &EquivariantConnection) -> Result<PolyMatrix<1>> {
    let (p, q) = connection_form(c);
    let a = [Scalar::from_int(-1), Scalar::zero()];
    let b = [Scalar::zero(), Scalar::from_int(-1)];
    // the unit segment parameter s equals u + 1
    let omega_s = pullback_segment(&p, &q, &a, &b);
    let mut omega_u = PolyMatrix::<1>::zero(c.dim(), c.dim());
    let shift = Poly::new(vec![Scalar::one(), Scalar::one()]);
    for (e, m) in omega_s.terms() {
        omega_u = &omega_u + &PolyMatrix::<1>::constant(m.clone()).mul_poly(&shift.pow(e[0] as u32));
    }
    Ok(picard(&omega_u, &Scalar::from_int(-1), c.dim())?.0)
}

/// Upper bound on the Picard depth for a connection on this space.
pub fn picard_bound(c: &EquivariantConnection) -> usize {
    let spread = c.hodge().weight_spread().max(0) as usize;
    spread.div_ceil(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::connection::{apply_gauge, connection_from_delta, Blocks, GaugeTransformation};
    use crate::mhs::HodgeNumbers;
    use std::collections::BTreeMap;

    fn k_hodge() -> HodgeNumbers {
        HodgeNumbers::new(BTreeMap::from([((-1, -1), 1), ((0, 0), 1)]))
    }

    fn k_fs(c: Scalar) -> EquivariantConnection {
        let e = Matrix::unit(2, 2, 0, 1).scale(&c);
        EquivariantConnection::new(k_hodge(), Blocks::from([((1, 1), e.clone())]), Blocks::from([((1, 1), -&e)]))
            .unwrap()
    }

    fn pt(x: i64, y: i64) -> Point {
        [Scalar::from_int(x), Scalar::from_int(y)]
    }

    #[test]
    fn k_type_transport() {
        let c = k_fs(Scalar::one());
        let (p, qq) = connection_form(&c);
        let a = Matrix::unit(2, 2, 0, 1);
        let t = transport_segment(&p, &qq, &pt(-1, 0), &pt(0, -1)).unwrap();
        assert_eq!(t, &Matrix::identity(2) + &a);
        let back = transport_segment(&p, &qq, &pt(0, -1), &pt(-1, 0)).unwrap();
        assert_eq!(&t * &back, Matrix::identity(2));
        let zero = Poly2::zero(2, 2);
        assert!(transport_segment(&zero, &zero, &pt(0, 0), &pt(3, 1)).unwrap().is_identity());
    }

    #[test]
    fn triangle_recovers_k_delta() {
        let cval = q(5, 2);
        let mut delta = Matrix::identity(2);
        delta[(0, 1)] = -cval.clone();
        let d = DeltaObject::new(k_hodge(), delta).unwrap();
        let conn = connection_from_delta(&d).unwrap();
        assert_eq!(triangle_delta(&conn).unwrap(), d);
        assert!(axes_trivial(&conn));
    }

    #[test]
    fn rectangle_defect() {
        let c = k_fs(Scalar::one());
        let rect = PolygonalPath::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]).unwrap();
        let h = connection_holonomy(&c, &rect).unwrap();
        let two_a = Matrix::unit(2, 2, 0, 1).scale(&q(2, 1));
        assert_eq!(h, &Matrix::identity(2) + &two_a);
    }

    #[test]
    fn flat_sections_k_type() {
        let c = k_fs(Scalar::one());
        let s = flat_sections_on_line(&c).unwrap();
        let a = Matrix::unit(2, 2, 0, 1);
        assert_eq!(s.coeff(&[0]), &Matrix::identity(2) + &a);
        assert_eq!(s.coeff(&[1]), a);
        assert!(s.eval(&[Scalar::from_int(-1)]).is_identity());
        let (p, qq) = connection_form(&c);
        let t = transport_segment(&p, &qq, &pt(-1, 0), &pt(0, -1)).unwrap();
        assert_eq!(s.eval(&[Scalar::zero()]), t);
    }

    #[test]
    fn pure_gauge_is_path_independent() {
        let m = Matrix::unit(2, 2, 0, 1);
        let g = GaugeTransformation::new(&k_hodge(), Blocks::from([((1, 1), m)])).unwrap();
        let c = apply_gauge(&EquivariantConnection::zero(k_hodge()), &g).unwrap();
        assert!(triangle_delta(&c).unwrap().is_split());
        let sub = PolygonalPath::from_ints(&[(0, 0), (0, -1), (-1, 0), (-1, -1), (0, 0)]).unwrap();
        assert!(connection_holonomy(&c, &sub).unwrap().is_identity());
        let open = PolygonalPath::from_ints(&[(0, 0), (2, 1)]).unwrap();
        let bent = PolygonalPath::from_ints(&[(0, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(connection_holonomy(&c, &open).unwrap(), connection_holonomy(&c, &bent).unwrap());
    }
}
