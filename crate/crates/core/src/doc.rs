//! The JSON document format read and written by the command line front end.
//!
//! Every document is a record with a `kind` tag. Scalars are written as
//! canonical strings (`"3/1"`, `"-1/2"`, `"2/1+1/1*i"`) and read back from those
//! or from shorthands like `"2+i"`. Matrices are lists of rows, and a
//! filtration as the list of its jumps, each with an RREF basis of that step.
//! Parsing canonicalizes, so `serialize ∘ parse` is the identity on any
//! document produced by this module.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{Field, Matrix, Scalar, Subspace};
use crate::connection::{Blocks, EquivariantConnection};
use crate::error::{Error, Result};
use crate::holonomy::PolygonalPath;
use crate::mhs::{ComplexMHS, Direction, Filtration, HodgeNumbers, RealMHS};
use crate::splitting::DeltaObject;

/// One jump of a filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub index: i32,
    pub basis: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MhsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: Field,
    pub dim: usize,
    #[serde(rename = "W")]
    pub w: Vec<StepDoc>,
    #[serde(rename = "Fp")]
    pub fp: Vec<StepDoc>,
    #[serde(rename = "Fpp")]
    pub fpp: Vec<StepDoc>,
}

/// W over ℚ and one Hodge filtration; the conjugate filtration is implied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealMhsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: Field,
    pub dim: usize,
    #[serde(rename = "W")]
    pub w: Vec<StepDoc>,
    #[serde(rename = "F")]
    pub f: Vec<StepDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: Field,
    pub hodge: HodgeNumbers,
    pub delta: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDoc {
    pub p: i32,
    pub q: i32,
    pub matrix: Vec<Vec<Scalar>>,
}

/// Coefficient blocks A_{p,q} (of dt₁) and B_{p,q} (of dt₂).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: Field,
    pub hodge: HodgeNumbers,
    #[serde(rename = "A")]
    pub a: Vec<BlockDoc>,
    #[serde(rename = "B")]
    pub b: Vec<BlockDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub points: Vec<[Scalar; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    Mhs(MhsDoc),
    RealMhs(RealMhsDoc),
    Delta(DeltaDoc),
    Connection(ConnectionDoc),
    Path(PathDoc),
}

/// The smallest field holding all the given scalars.
pub fn field_of<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Field {
    if xs.into_iter().all(Scalar::is_real) {
        Field::Q
    } else {
        Field::Qi
    }
}

fn check_field<'a>(declared: Field, xs: impl IntoIterator<Item = &'a Scalar>) -> Result<()> {
    if declared == Field::Q && field_of(xs) == Field::Qi {
        return Err(Error::Parse("document is tagged Q but has entries outside Q".into()));
    }
    Ok(())
}

fn steps_field(steps: &[StepDoc]) -> impl Iterator<Item = &Scalar> {
    steps.iter().flat_map(|s| s.basis.iter().flatten())
}

fn matrix_from_rows(rows: usize, cols: usize, data: &[Vec<Scalar>], what: &str) -> Result<Matrix> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse(format!("{what} must be {rows}x{cols}")));
    }
    Matrix::from_rows(cols, data.to_vec())
}

fn filtration_doc(f: &Filtration) -> Vec<StepDoc> {
    f.steps()
        .iter()
        .map(|(&index, s)| StepDoc {
            index,
            basis: s.basis_vectors(),
        })
        .collect()
}

fn filtration_from_doc(direction: Direction, dim: usize, steps: &[StepDoc], what: &str) -> Result<Filtration> {
    let mut map = BTreeMap::new();
    for s in steps {
        if s.basis.iter().any(|v| v.len() != dim) {
            return Err(Error::Parse(format!("{what} step {}: vectors must have length {dim}", s.index)));
        }
        if map.insert(s.index, Subspace::span(dim, &s.basis)?).is_some() {
            return Err(Error::Parse(format!("{what} step {} given twice", s.index)));
        }
    }
    Filtration::new(direction, dim, map)
}

fn blocks_doc(blocks: &Blocks) -> Vec<BlockDoc> {
    blocks
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(&(p, q), m)| BlockDoc {
            p,
            q,
            matrix: m.row_vecs(),
        })
        .collect()
}

fn blocks_from_doc(n: usize, blocks: &[BlockDoc], what: &str) -> Result<Blocks> {
    let mut out = Blocks::new();
    for b in blocks {
        let m = matrix_from_rows(n, n, &b.matrix, &format!("{what}[{},{}]", b.p, b.q))?;
        if out.insert((b.p, b.q), m).is_some() {
            return Err(Error::Parse(format!("{what}[{},{}] given twice", b.p, b.q)));
        }
    }
    Ok(out)
}

impl MhsDoc {
    pub fn from_mhs(name: Option<String>, v: &ComplexMHS) -> Self {
        let (w, fp, fpp) = (filtration_doc(v.w()), filtration_doc(v.fp()), filtration_doc(v.fpp()));
        let field = field_of(steps_field(&fp).chain(steps_field(&fpp)).chain(steps_field(&w)));
        MhsDoc {
            name,
            field,
            dim: v.dim(),
            w,
            fp,
            fpp,
        }
    }

    /// The filtration triple; opposedness is not checked here.
    pub fn to_mhs(&self) -> Result<ComplexMHS> {
        check_field(self.field, steps_field(&self.w).chain(steps_field(&self.fp)).chain(steps_field(&self.fpp)))?;
        ComplexMHS::new(
            filtration_from_doc(Direction::Increasing, self.dim, &self.w, "W")?,
            filtration_from_doc(Direction::Decreasing, self.dim, &self.fp, "Fp")?,
            filtration_from_doc(Direction::Decreasing, self.dim, &self.fpp, "Fpp")?,
        )
    }
}

impl RealMhsDoc {
    pub fn from_real(name: Option<String>, v: &RealMHS) -> Self {
        let (w, f) = (filtration_doc(v.w()), filtration_doc(v.f()));
        RealMhsDoc {
            name,
            field: field_of(steps_field(&f)),
            dim: v.dim(),
            w,
            f,
        }
    }

    pub fn to_real(&self) -> Result<RealMHS> {
        check_field(self.field, steps_field(&self.w).chain(steps_field(&self.f)))?;
        RealMHS::new(
            filtration_from_doc(Direction::Increasing, self.dim, &self.w, "W")?,
            filtration_from_doc(Direction::Decreasing, self.dim, &self.f, "F")?,
        )
        .map_err(|e| match e {
            Error::InvalidFiltration(m) => Error::Parse(m),
            e => e,
        })
    }
}

impl DeltaDoc {
    pub fn from_delta(name: Option<String>, d: &DeltaObject) -> Self {
        let delta = d.delta().row_vecs();
        DeltaDoc {
            name,
            field: field_of(delta.iter().flatten()),
            hodge: d.hodge().clone(),
            delta,
        }
    }

    pub fn to_delta(&self) -> Result<DeltaObject> {
        check_field(self.field, self.delta.iter().flatten())?;
        let n = self.hodge.total();
        DeltaObject::new(self.hodge.clone(), matrix_from_rows(n, n, &self.delta, "delta")?)
    }
}

impl ConnectionDoc {
    pub fn from_connection(name: Option<String>, c: &EquivariantConnection) -> Self {
        let (a, b) = (blocks_doc(c.a()), blocks_doc(c.b()));
        let field = field_of(a.iter().chain(&b).flat_map(|x| x.matrix.iter().flatten()));
        ConnectionDoc {
            name,
            field,
            hodge: c.hodge().clone(),
            a,
            b,
        }
    }

    pub fn to_connection(&self) -> Result<EquivariantConnection> {
        check_field(self.field, self.a.iter().chain(&self.b).flat_map(|x| x.matrix.iter().flatten()))?;
        let n = self.hodge.total();
        EquivariantConnection::new(
            self.hodge.clone(),
            blocks_from_doc(n, &self.a, "A")?,
            blocks_from_doc(n, &self.b, "B")?,
        )
    }
}

impl PathDoc {
    pub fn from_path(name: Option<String>, p: &PolygonalPath) -> Self {
        PathDoc {
            name,
            points: p.points().to_vec(),
        }
    }

    pub fn to_path(&self) -> Result<PolygonalPath> {
        PolygonalPath::new(self.points.clone())
    }
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Pretty JSON with a trailing newline; the on-disk form of the corpus.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Mhs(_) => "mhs",
            Document::RealMhs(_) => "real_mhs",
            Document::Delta(_) => "delta",
            Document::Connection(_) => "connection",
            Document::Path(_) => "path",
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Document::Mhs(d) => d.name.as_deref(),
            Document::RealMhs(d) => d.name.as_deref(),
            Document::Delta(d) => d.name.as_deref(),
            Document::Connection(d) => d.name.as_deref(),
            Document::Path(d) => d.name.as_deref(),
        }
    }

    /// `None` for paths, which carry no field tag.
    pub fn field(&self) -> Option<Field> {
        match self {
            Document::Mhs(d) => Some(d.field),
            Document::RealMhs(d) => Some(d.field),
            Document::Delta(d) => Some(d.field),
            Document::Connection(d) => Some(d.field),
            Document::Path(_) => None,
        }
    }

    /// Parses the payload into the library types and re-serializes it.
    pub fn canonical(&self) -> Result<Document> {
        let name = self.name().map(str::to_owned);
        Ok(match self {
            Document::Mhs(d) => Document::Mhs(MhsDoc::from_mhs(name, &d.to_mhs()?)),
            Document::RealMhs(d) => Document::RealMhs(RealMhsDoc::from_real(name, &d.to_real()?)),
            Document::Delta(d) => Document::Delta(DeltaDoc::from_delta(name, &d.to_delta()?)),
            Document::Connection(d) => Document::Connection(ConnectionDoc::from_connection(name, &d.to_connection()?)),
            Document::Path(d) => Document::Path(PathDoc::from_path(name, &d.to_path()?)),
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Sparse Laurent entries of a polynomial matrix: `(row, col, exponent, coefficient)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentEntry<const V: usize> {
    pub row: usize,
    pub col: usize,
    #[serde(with = "exponent_serde")]
    pub exponent: [i32; V],
    pub coeff: Scalar,
}

mod exponent_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, const V: usize>(e: &[i32; V], s: S) -> Result<S::Ok, S::Error> {
        e.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const V: usize>(d: D) -> Result<[i32; V], D::Error> {
        let v = Vec::<i32>::deserialize(d)?;
        v.try_into()
            .map_err(|_| serde::de::Error::custom(format!("exponent must have {V} entries")))
    }
}

pub fn laurent_entries<const V: usize>(m: &crate::algebra::PolyMatrix<V>) -> Vec<LaurentEntry<V>> {
    let mut out = Vec::new();
    for row in 0..m.rows() {
        for col in 0..m.cols() {
            for (exponent, coeff) in m.entry(row, col) {
                out.push(LaurentEntry { row, col, exponent, coeff });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{random_connection, random_real_mhs, random_valid_mhs, rng, FixtureParams};

    fn roundtrip(d: &Document) {
        let text = d.to_json();
        let back = Document::parse(&text).unwrap();
        assert_eq!(&back, d);
        assert_eq!(&back.canonical().unwrap(), d);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn documents_roundtrip() {
        let p = FixtureParams::default();
        let mut r = rng(21);
        for k in 0..15 {
            let (d, v) = random_valid_mhs(&mut r, &p).unwrap();
            let m = MhsDoc::from_mhs(Some(format!("m{k}")), &v);
            assert_eq!(m.to_mhs().unwrap(), v);
            roundtrip(&Document::Mhs(m));
            let dd = DeltaDoc::from_delta(None, &d);
            assert_eq!(dd.to_delta().unwrap(), d);
            roundtrip(&Document::Delta(dd));
            let c = random_connection(&mut r, d.hodge(), true);
            let cd = ConnectionDoc::from_connection(None, &c);
            assert_eq!(cd.to_connection().unwrap(), c);
            roundtrip(&Document::Connection(cd));
            let rv = random_real_mhs(&mut r, &p).unwrap();
            let rd = RealMhsDoc::from_real(None, &rv);
            assert_eq!(rd.to_real().unwrap(), rv);
            roundtrip(&Document::RealMhs(rd));
        }
        roundtrip(&Document::Path(PathDoc::from_path(None, &PolygonalPath::triangle())));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let bad = [
            r#"{"kind":"delta","field":"Q","hodge":[{"p":0,"q":0,"h":1}],"delta":[["1","0"]]}"#,
            r#"{"kind":"delta","field":"Q","hodge":[{"p":0,"q":0,"h":1}],"delta":[["i"]]}"#,
            r#"{"kind":"mhs","field":"Q","dim":1,"W":[{"index":0,"basis":[["1","2"]]}],"Fp":[],"Fpp":[]}"#,
            r#"{"kind":"mhs","field":"Q","dim":1,"W":[],"Fp":[],"Fpp":[],"extra":1}"#,
            r#"{"kind":"poem"}"#,
            "not json",
        ];
        for text in bad {
            let r = Document::parse(text).and_then(|d| d.canonical());
            assert!(matches!(r, Err(ref e) if e.is_input_error()), "{text}: {r:?}");
        }
    }

    #[test]
    fn pure_document_by_hand() {
        let text = r#"{"kind":"mhs","field":"Q","dim":1,
            "W":[{"index":0,"basis":[["1"]]}],
            "Fp":[{"index":0,"basis":[["1"]]}],
            "Fpp":[{"index":0,"basis":[["1"]]}]}"#;
        let Document::Mhs(m) = Document::parse(text).unwrap() else { panic!() };
        assert_eq!(m.to_mhs().unwrap(), ComplexMHS::pure(0, 0));
    }
}
