//! Scenario files: an ordered list of named declarations and a list of
//! commands over them.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use novikov_core::assembly::json::GammaDoc;
use novikov_core::assembly::{AlgebraicCobordism, FilteredEndomorphism};
use novikov_core::chain::json::ComplexDoc;
use novikov_core::chain::ChainComplex;
use novikov_core::cobordism::json::{SplittingDoc, TripleDoc};
use novikov_core::cobordism::{MorseTriple, SplittingData};
use novikov_core::corpus;
use novikov_core::dmt::{
    morse_complex, random_acyclic_field, square_complex, CellComplex, CellComplexDoc, CircleFunction, CircleFunctionDoc,
    FundamentalDomain, FundamentalDomainDoc, SplitManifold, Square, VectorField,
};
use novikov_core::matrix::{CoefficientSpec, Matrix, NovikovContext};
use novikov_core::rings::{NovikovElement, RingContext};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub declarations: Vec<Declaration>,
    #[serde(default)]
    pub commands: Vec<Command>,
}

#[derive(Debug, Deserialize)]
pub struct Declaration {
    pub name: String,
    pub kind: String,
    #[serde(flatten)]
    pub body: serde_json::Map<String, Value>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Command {
    pub op: String,
    pub target: String,
    #[serde(default)]
    pub precision: Option<i64>,
    #[serde(default)]
    pub stages: Option<usize>,
    /// A rational such as `"1/2"`.
    #[serde(default)]
    pub epsilon: Option<String>,
    /// Expected homology or series text; a mismatch fails the command.
    #[serde(default)]
    pub expect: Option<String>,
}

/// A resolved declaration.
#[derive(Clone, Debug)]
pub enum Object {
    CellComplex(CellComplex),
    Field { complex: String, field: VectorField },
    Complex(Complex),
    Triple(MorseTriple<i64>),
    Splitting(SplittingData<i64>),
    SplitManifold { manifold: SplitManifold, level_field: VectorField },
    Gamma(AlgebraicCobordism),
    Domain { domain: FundamentalDomain, level_field: VectorField },
    Circle(CircleFunction),
    Series(NovikovElement),
    Filtered(FilteredEndomorphism),
    Square(Square),
}

#[derive(Clone, Debug)]
pub enum Complex {
    Integer(ChainComplex<i64>),
    Novikov(ChainComplex<NovikovElement>),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::CellComplex(_) => "cell_complex",
            Object::Field { .. } => "field",
            Object::Complex(_) => "chain_complex",
            Object::Triple(_) => "triple",
            Object::Splitting(_) => "splitting",
            Object::SplitManifold { .. } => "split_manifold",
            Object::Gamma(_) => "gamma",
            Object::Domain { .. } => "domain",
            Object::Circle(_) => "circle_function",
            Object::Series(_) => "series",
            Object::Filtered(_) => "filtered",
            Object::Square(_) => "square",
        }
    }
}

pub struct Scenario {
    pub description: Option<String>,
    pub objects: BTreeMap<String, Object>,
    pub commands: Vec<Command>,
}

fn body<T: serde::de::DeserializeOwned>(decl: &Declaration) -> Result<T, CliError> {
    serde_json::from_value(Value::Object(decl.body.clone()))
        .map_err(|e| CliError::Schema(format!("declaration `{}`: {e}", decl.name)))
}

fn invalid(decl: &Declaration, e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("declaration `{}`: {e}", decl.name))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusRef {
    corpus: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldBody {
    complex: String,
    #[serde(default)]
    pairs: Option<Vec<(String, String)>>,
    #[serde(default)]
    corpus: Option<String>,
    /// Probability of keeping each candidate pair in a random field.
    #[serde(default)]
    random_keep: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MorseBody {
    complex: String,
    field: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitBody {
    #[serde(default)]
    corpus: Option<String>,
    #[serde(default)]
    randomize: bool,
    #[serde(default)]
    lower: Option<String>,
    #[serde(default)]
    lower_field: Option<String>,
    #[serde(default)]
    level: Option<String>,
    #[serde(default)]
    level_field: Option<String>,
    #[serde(default)]
    upper: Option<String>,
    #[serde(default)]
    upper_field: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainBody {
    #[serde(default)]
    corpus: Option<String>,
    #[serde(default)]
    domain: Option<FundamentalDomainDoc>,
    /// Field on the interface used when the domain is split.
    #[serde(default)]
    level_field: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesBody {
    twist: RingContext,
    value: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FilteredBody {
    twist: RingContext,
    labels: Vec<String>,
    rows: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareBody {
    complex: String,
    fields: [String; 4],
    scale: i64,
}

struct Resolver<'a> {
    objects: BTreeMap<String, Object>,
    seed: Option<u64>,
    decl: Option<&'a Declaration>,
}

impl Resolver<'_> {
    fn get(&self, name: &str) -> Result<&Object, CliError> {
        let user = self.decl.map_or("", |d| d.name.as_str());
        self.objects
            .get(name)
            .ok_or_else(|| CliError::NameResolution(format!("`{user}` refers to `{name}`, which is not declared before it")))
    }

    fn cell_complex(&self, name: &str) -> Result<CellComplex, CliError> {
        match self.get(name)? {
            Object::CellComplex(k) => Ok(k.clone()),
            other => Err(CliError::NameResolution(format!("`{name}` is a {}, not a cell_complex", other.kind()))),
        }
    }

    fn field(&self, name: &str) -> Result<VectorField, CliError> {
        match self.get(name)? {
            Object::Field { field, .. } => Ok(field.clone()),
            other => Err(CliError::NameResolution(format!("`{name}` is a {}, not a field", other.kind()))),
        }
    }

    fn optional_field(&self, name: &Option<String>) -> Result<VectorField, CliError> {
        name.as_deref().map_or(Ok(VectorField::empty()), |n| self.field(n))
    }
}

fn corpus_complex(name: &str) -> Option<CellComplex> {
    let small = [("point", corpus::point()), ("two_points", corpus::two_points()), ("two_circles", corpus::two_circles())];
    corpus::closed_complexes().into_iter().chain(small).find(|(n, _)| *n == name).map(|(_, k)| k)
}

fn corpus_field(name: &str) -> Option<VectorField> {
    match name {
        "circle_fixing_0" => Some(corpus::circle_field_fixing_0()),
        "circle_moving_0" => Some(corpus::circle_field_moving_0()),
        _ => None,
    }
}

fn corpus_splitting(name: &str) -> Option<corpus::SplittingExample> {
    corpus::splitting_examples()
        .into_iter()
        .chain([corpus::torus_splitting_skewed()])
        .find(|e| e.name == name)
}

fn corpus_domain(name: &str) -> Option<FundamentalDomain> {
    match name {
        "circle_domain" => Some(corpus::circle_domain()),
        "torus_domain" => Some(corpus::torus_domain()),
        "torus_projection_domain" => Some(corpus::torus_projection_domain()),
        _ => None,
    }
}

fn unknown_corpus(decl: &Declaration, name: &str) -> CliError {
    CliError::NameResolution(format!("declaration `{}`: no corpus entry `{name}`", decl.name))
}

fn resolve_one(r: &Resolver, decl: &Declaration) -> Result<Object, CliError> {
    Ok(match decl.kind.as_str() {
        "cell_complex" => {
            if decl.body.contains_key("corpus") {
                let c: CorpusRef = body(decl)?;
                Object::CellComplex(corpus_complex(&c.corpus).ok_or_else(|| unknown_corpus(decl, &c.corpus))?)
            } else {
                let doc: CellComplexDoc = body(decl)?;
                Object::CellComplex(CellComplex::from_doc(&doc).map_err(|e| invalid(decl, e))?)
            }
        }
        "field" => {
            let b: FieldBody = body(decl)?;
            let k = r.cell_complex(&b.complex)?;
            let field = match (b.pairs, b.corpus, b.random_keep) {
                (Some(pairs), None, None) => VectorField::new(pairs),
                (None, Some(c), None) => corpus_field(&c).ok_or_else(|| unknown_corpus(decl, &c))?,
                (None, None, Some(p)) => {
                    let seed = r.seed.or(b.seed).unwrap_or(0);
                    random_acyclic_field(&k, seed, &Default::default(), p)
                }
                _ => return Err(CliError::Schema(format!("declaration `{}`: give exactly one of pairs, corpus, random_keep", decl.name))),
            };
            let report = novikov_core::dmt::validate_field(&k, &field);
            if !report.violations.is_empty() {
                return Err(invalid(decl, report.violations.join("; ")));
            }
            Object::Field { complex: b.complex, field }
        }
        "morse_complex" => {
            let b: MorseBody = body(decl)?;
            let k = r.cell_complex(&b.complex)?;
            let v = r.field(&b.field)?;
            Object::Complex(Complex::Integer(morse_complex(&k, &v).map_err(|e| invalid(decl, e))?))
        }
        "chain_complex" => {
            let doc: ComplexDoc = body(decl)?;
            match &doc.coefficients {
                CoefficientSpec::Integer => {
                    Object::Complex(Complex::Integer(ChainComplex::from_doc(&(), &doc).map_err(|e| invalid(decl, e))?))
                }
                CoefficientSpec::Novikov { ring, precision } => {
                    let ctx = NovikovContext::new(Arc::new(ring.clone()), *precision);
                    Object::Complex(Complex::Novikov(ChainComplex::from_doc(&ctx, &doc).map_err(|e| invalid(decl, e))?))
                }
            }
        }
        "triple" => {
            let doc: TripleDoc = body(decl)?;
            Object::Triple(MorseTriple::from_doc(&(), &doc).map_err(|e| invalid(decl, e))?)
        }
        "splitting" => {
            let doc: SplittingDoc = body(decl)?;
            Object::Splitting(SplittingData::from_doc(&(), &doc).map_err(|e| invalid(decl, e))?)
        }
        "split_manifold" => {
            let b: SplitBody = body(decl)?;
            let ex = if let Some(c) = &b.corpus {
                let ex = corpus_splitting(c).ok_or_else(|| unknown_corpus(decl, c))?;
                match (b.randomize, r.seed) {
                    (true, seed) => ex.randomized(seed.unwrap_or(0)),
                    (false, _) => ex,
                }
            } else {
                let need = |x: &Option<String>, what: &str| {
                    x.clone().ok_or_else(|| CliError::Schema(format!("declaration `{}`: missing `{what}`", decl.name)))
                };
                corpus::SplittingExample {
                    name: "scenario",
                    lower: r.cell_complex(&need(&b.lower, "lower")?)?,
                    lower_field: r.optional_field(&b.lower_field)?,
                    level: r.cell_complex(&need(&b.level, "level")?)?,
                    level_field: r.optional_field(&b.level_field)?,
                    upper: r.cell_complex(&need(&b.upper, "upper")?)?,
                    upper_field: r.optional_field(&b.upper_field)?,
                }
            };
            let manifold = SplitManifold::glue(&ex.lower, &ex.lower_field, &ex.level, &ex.upper, &ex.upper_field)
                .map_err(|e| invalid(decl, e))?;
            Object::SplitManifold { manifold, level_field: ex.level_field }
        }
        "gamma" => {
            let doc: GammaDoc = body(decl)?;
            Object::Gamma(AlgebraicCobordism::from_doc(&doc).map_err(|e| invalid(decl, e))?)
        }
        "domain" => {
            let b: DomainBody = body(decl)?;
            let domain = match (&b.corpus, &b.domain) {
                (Some(c), None) => corpus_domain(c).ok_or_else(|| unknown_corpus(decl, c))?,
                (None, Some(doc)) => FundamentalDomain::from_doc(doc).map_err(|e| invalid(decl, e))?,
                _ => return Err(CliError::Schema(format!("declaration `{}`: give exactly one of corpus, domain", decl.name))),
            };
            Object::Domain { domain, level_field: r.optional_field(&b.level_field)? }
        }
        "circle_function" => {
            let doc: CircleFunctionDoc = body(decl)?;
            Object::Circle(CircleFunction::from_doc(&doc).map_err(|e| invalid(decl, e))?)
        }
        "series" => {
            let b: SeriesBody = body(decl)?;
            let ring = Arc::new(b.twist);
            Object::Series(NovikovElement::parse(&ring, &b.value).map_err(|e| invalid(decl, e))?)
        }
        "filtered" => {
            let b: FilteredBody = body(decl)?;
            let ring = Arc::new(b.twist);
            let n = b.labels.len();
            if b.rows.len() != n || b.rows.iter().any(|row| row.len() != n) {
                return Err(invalid(decl, format!("expected a {n}x{n} matrix")));
            }
            let ctx = NovikovContext::new(ring.clone(), None);
            let rows = b
                .rows
                .iter()
                .map(|row| row.iter().map(|s| NovikovElement::parse(&ring, s)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| invalid(decl, e))?;
            let m = Matrix::from_rows(&ctx, rows, n);
            Object::Filtered(FilteredEndomorphism::new(b.labels, m).map_err(|e| invalid(decl, e))?)
        }
        "square" => {
            let b: SquareBody = body(decl)?;
            let k = r.cell_complex(&b.complex)?;
            let fields = [r.field(&b.fields[0])?, r.field(&b.fields[1])?, r.field(&b.fields[2])?, r.field(&b.fields[3])?];
            let sq = square_complex(&k, [&fields[0], &fields[1], &fields[2], &fields[3]], b.scale).map_err(|e| invalid(decl, e))?;
            Object::Square(sq)
        }
        other => return Err(CliError::Schema(format!("declaration `{}`: unknown kind `{other}`", decl.name))),
    })
}

impl Scenario {
    pub fn parse(text: &str, seed: Option<u64>) -> Result<Self, CliError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        let mut r = Resolver { objects: BTreeMap::new(), seed, decl: None };
        for decl in &file.declarations {
            if r.objects.contains_key(&decl.name) {
                return Err(CliError::NameResolution(format!("`{}` is declared twice", decl.name)));
            }
            r.decl = Some(decl);
            let obj = resolve_one(&r, decl)?;
            r.objects.insert(decl.name.clone(), obj);
        }
        Ok(Scenario { description: file.description, objects: r.objects, commands: file.commands })
    }
}
