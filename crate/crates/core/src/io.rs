//! JSON input files: CDGAs, Lie algebras, group actions, almost complex
//! structures and lattice models.
//!
//! Elements are either JSON term lists `[{"coeff": .., "monomial": [..]}]`
//! or expression strings. Lie algebra and `J` indices are 1-based, matching
//! the basis labels `X1, ..., Xn`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::catalog::Model;
use crate::cdga::{Cdga, GroupAction, LieAlgebraPresentation};
use crate::error::{Error, Result};
use crate::expr::parse_element;
use crate::gca::{Algebra, Element, TermJson};
use crate::geomcheck::AlmostComplexStructure;
use crate::lattice::LatticeModel;
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Terms(Vec<TermJson>),
    Text(String),
}

impl ElementJson {
    pub fn resolve(&self, algebra: &Algebra) -> Result<Element> {
        match self {
            ElementJson::Terms(t) => Element::from_json(algebra, t),
            ElementJson::Text(s) => parse_element(algebra, s),
        }
    }
}

/// `"Q"`, `"Q(zeta12)"` or a bare cyclotomic order.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Name(String),
    Order(u32),
}

impl FieldJson {
    pub fn resolve(&self) -> Result<Field> {
        match self {
            FieldJson::Name(s) => Field::parse_name(s),
            FieldJson::Order(1) => Ok(Field::rationals()),
            FieldJson::Order(n) => Field::cyclotomic(*n),
        }
    }
}

fn default_field() -> FieldJson {
    FieldJson::Name("Q".into())
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdgaFile {
    #[serde(default = "default_field")]
    pub field: FieldJson,
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub differential: BTreeMap<String, ElementJson>,
    #[serde(default)]
    pub conjugation: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub cap: Option<u32>,
}

impl CdgaFile {
    pub fn build(&self) -> Result<Cdga> {
        let field = self.field.resolve()?;
        let algebra = Algebra::new(
            field,
            self.generators.iter().map(|g| (g.name.clone(), g.degree)),
            self.cap,
        )?;
        let mut d = vec![algebra.zero(); algebra.num_generators()];
        for (name, e) in &self.differential {
            d[algebra.index_of(name)?] = e.resolve(&algebra)?;
        }
        let cdga = Cdga::new(algebra, d)?;
        match &self.conjugation {
            None => Ok(cdga),
            Some(pairs) => {
                let pairs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
                cdga.with_named_conjugation(&pairs)
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, Scalar>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieFile {
    #[serde(default = "default_field")]
    pub field: FieldJson,
    pub dimension: usize,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
    /// Generator names of the Chevalley–Eilenberg complex; `x1..xn` if absent.
    #[serde(default)]
    pub names: Option<Vec<String>>,
}

fn one_based(k: usize, n: usize) -> Result<usize> {
    if k == 0 || k > n {
        return Err(Error::Parse(format!("basis index {k} outside 1..={n}")));
    }
    Ok(k - 1)
}

impl LieFile {
    pub fn build(&self) -> Result<LieAlgebraPresentation> {
        let field = self.field.resolve()?;
        let n = self.dimension;
        let entries = self
            .brackets
            .iter()
            .map(|b| {
                let coeffs = b
                    .coeffs
                    .iter()
                    .map(|(k, c)| {
                        let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad basis index `{k}`")))?;
                        Ok((one_based(k, n)?, field.embed(c)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((one_based(b.i, n)?, one_based(b.j, n)?, coeffs))
            })
            .collect::<Result<Vec<_>>>()?;
        LieAlgebraPresentation::new(&field, n, &entries)
    }

    pub fn cdga(&self, lie: &LieAlgebraPresentation) -> Result<Cdga> {
        match &self.names {
            Some(names) => lie.chevalley_eilenberg(names),
            None => lie.chevalley_eilenberg_default(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub order: u32,
    pub images: BTreeMap<String, ElementJson>,
}

impl ActionFile {
    /// Generators without an image are fixed.
    pub fn build(&self, cdga: &Cdga) -> Result<GroupAction> {
        let alg = cdga.algebra();
        let mut images: Vec<Element> = (0..alg.num_generators()).map(|i| alg.generator(i)).collect();
        for (name, e) in &self.images {
            images[alg.index_of(name)?] = e.resolve(alg)?;
        }
        GroupAction::new(cdga, self.order, images)
    }
}

/// `images[j]` maps 1-based indices to the coefficients of `J(X_{j+1})`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JFile {
    #[serde(default = "default_field")]
    pub field: FieldJson,
    pub images: Vec<BTreeMap<String, Scalar>>,
}

impl JFile {
    pub fn build(&self) -> Result<AlmostComplexStructure> {
        let field = self.field.resolve()?;
        let n = self.images.len();
        let mut m = Matrix::zeros(&field, n, n);
        for (j, img) in self.images.iter().enumerate() {
            for (i, c) in img {
                let i: usize = i.parse().map_err(|_| Error::Parse(format!("bad basis index `{i}`")))?;
                m.set(one_based(i, n)?, j, field.embed(c)?);
            }
        }
        AlmostComplexStructure::new(m)
    }
}

/// Any supported input file, told apart by its keys.
#[derive(Clone, Debug)]
pub enum InputFile {
    Cdga(CdgaFile),
    Lie(LieFile),
    Lattice(LatticeModel),
}

pub fn parse_input(text: &str) -> Result<InputFile> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let has = |k: &str| v.get(k).is_some();
    if has("generators") {
        Ok(InputFile::Cdga(serde_json::from_value(v)?))
    } else if has("dimension") {
        Ok(InputFile::Lie(serde_json::from_value(v)?))
    } else if has("coords") {
        Ok(InputFile::Lattice(serde_json::from_value(v)?))
    } else {
        Err(Error::Parse(
            "input must have `generators` (CDGA), `dimension` (Lie algebra) or `coords` (lattice)".into(),
        ))
    }
}

/// Model from the text of a CDGA or Lie algebra file.
pub fn model_from_text(text: &str) -> Result<Model> {
    match parse_input(text)? {
        InputFile::Cdga(f) => Ok(Model::bare("file", f.build()?)),
        InputFile::Lie(f) => {
            let lie = f.build()?;
            Ok(Model {
                lie: Some(lie.clone()),
                ..Model::bare("file", f.cdga(&lie)?)
            })
        }
        InputFile::Lattice(_) => Err(Error::Parse("a lattice file is only valid for fixed-points".into())),
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn cdga_file_matches_catalog() {
        let text = r#"{
            "field": "Q",
            "generators": [{"name": "x1", "degree": 1}, {"name": "x2", "degree": 1},
                           {"name": "x3", "degree": 1}, {"name": "x4", "degree": 1}],
            "differential": {"x3": [{"coeff": "1", "monomial": ["x1", "x2"]}]}
        }"#;
        let InputFile::Cdga(f) = parse_input(text).unwrap() else {
            panic!("expected a CDGA file")
        };
        assert_eq!(f.build().unwrap().differential(), catalog::kt().differential());
    }

    #[test]
    fn lie_file_matches_catalog() {
        let text = r#"{"dimension": 4, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "-1"}}]}"#;
        let InputFile::Lie(f) = parse_input(text).unwrap() else {
            panic!("expected a Lie file")
        };
        let lie = f.build().unwrap();
        assert_eq!(f.cdga(&lie).unwrap().differential(), catalog::kt().differential());
        let bad = r#"{"dimension": 2, "brackets": [{"i": 1, "j": 3, "coeffs": {}}]}"#;
        let InputFile::Lie(f) = parse_input(bad).unwrap() else {
            panic!()
        };
        assert!(f.build().is_err());
    }

    #[test]
    fn even_generators_and_expressions() {
        let text = r#"{"generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 3}],
                       "differential": {"y": "x^2"}, "cap": 8}"#;
        let InputFile::Cdga(f) = parse_input(text).unwrap() else {
            panic!()
        };
        let c = f.build().unwrap();
        let a = c.algebra();
        assert_eq!(c.d(&a.named("y").unwrap()), a.named("x").unwrap().pow(2));
    }

    #[test]
    fn action_and_j_files() {
        let c = catalog::heisenberg_c();
        let act: ActionFile = serde_json::from_str(
            r#"{"order": 3, "images": {"mu": "zeta3 mu", "nu": "zeta3 nu", "theta": "zeta3^2 theta",
                "eta": "zeta3 eta", "mubar": "zeta3^2 mubar", "nubar": "zeta3^2 nubar",
                "thetabar": "zeta3 thetabar", "etabar": "zeta3^2 etabar"}}"#,
        )
        .unwrap();
        assert_eq!(
            act.build(&c).unwrap().images(),
            catalog::z3_action(&c).unwrap().images()
        );
        let j: JFile = serde_json::from_str(r#"{"images": [{"2": "1"}, {"1": "-1"}, {"4": 1}, {"3": -1}]}"#).unwrap();
        assert_eq!(j.build().unwrap(), catalog::j_kt());
        let not_j: JFile = serde_json::from_str(r#"{"images": [{"1": "1"}, {"2": "1"}]}"#).unwrap();
        assert!(matches!(not_j.build(), Err(Error::NotAlmostComplex)));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_input("{"), Err(Error::Json(_))));
        assert!(matches!(parse_input("{}"), Err(Error::Parse(_))));
        assert!(parse_input(r#"{"generators": [], "bogus": 1}"#).is_err());
    }
}
