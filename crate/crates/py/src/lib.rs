//! Python bindings: series arithmetic, chain complexes, discrete Morse
//! complexes and the Novikov assembly checks.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use novikov_core::assembly::json::GammaDoc;
use novikov_core::assembly::{diff_congruence, AlgebraicCobordism};
use novikov_core::chain::json::ComplexDoc;
use novikov_core::chain::{homology_z, novikov_ranks, ChainComplex as Complex};
use novikov_core::cobordism::glue_check;
use novikov_core::corpus;
use novikov_core::dmt::{self, CellComplexDoc, VectorField};
use novikov_core::matrix::{CoefficientSpec, NovikovContext};
use novikov_core::rings::{NovikovElement, RingContext};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(pairs: Option<Vec<(String, String)>>) -> VectorField {
    pairs.map_or_else(VectorField::empty, VectorField::new)
}

/// A truncated Novikov series, written like `(-1)*x^[2]*z^3 + O(z^8)`.
#[pyclass(module = "novikov_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Series(NovikovElement);

#[pymethods]
impl Series {
    /// `twist` is the matrix of the automorphism of Z^rank; identity if omitted.
    #[new]
    #[pyo3(signature = (text, rank = 0, twist = None))]
    fn new(text: &str, rank: usize, twist: Option<Vec<Vec<i64>>>) -> PyResult<Self> {
        let twist = twist.unwrap_or_else(|| (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect());
        let ring = Arc::new(RingContext::new(rank, twist).map_err(value_err)?);
        NovikovElement::parse(&ring, text).map(Series).map_err(value_err)
    }

    /// `None` for an exact element.
    #[getter]
    fn precision(&self) -> Option<i64> {
        self.0.precision()
    }

    fn __add__(&self, other: &Series) -> PyResult<Series> {
        self.0.try_add(&other.0).map(Series).map_err(value_err)
    }

    fn __sub__(&self, other: &Series) -> PyResult<Series> {
        self.0.try_sub(&other.0).map(Series).map_err(value_err)
    }

    fn __mul__(&self, other: &Series) -> PyResult<Series> {
        self.0.try_mul(&other.0).map(Series).map_err(value_err)
    }

    fn __neg__(&self) -> Series {
        Series(self.0.neg())
    }

    fn __eq__(&self, other: &Series) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Series('{}')", self.0)
    }

    /// Inverse modulo `z^n`; fails unless the series is a unit.
    fn invert(&self, n: i64) -> PyResult<Series> {
        self.0.invert_unit(n).map(Series).map_err(value_err)
    }

    fn congruent(&self, other: &Series, n: i64) -> bool {
        self.0.congruent(&other.0, n)
    }

    fn truncate(&self, n: i64) -> Series {
        Series(self.0.truncate(n))
    }
}

#[derive(Clone)]
enum Inner {
    Integer(Complex<i64>),
    Novikov(Complex<NovikovElement>),
}

/// A based free chain complex over Z or over a Novikov ring.
#[pyclass(module = "novikov_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct ChainComplex(Inner);

#[pymethods]
impl ChainComplex {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: ComplexDoc = serde_json::from_str(text).map_err(value_err)?;
        Ok(ChainComplex(match &doc.coefficients {
            CoefficientSpec::Integer => Inner::Integer(Complex::from_doc(&(), &doc).map_err(value_err)?),
            CoefficientSpec::Novikov { ring, precision } => {
                let ctx = NovikovContext::new(Arc::new(ring.clone()), *precision);
                Inner::Novikov(Complex::from_doc(&ctx, &doc).map_err(value_err)?)
            }
        }))
    }

    fn to_json(&self) -> String {
        match &self.0 {
            Inner::Integer(c) => c.to_json(),
            Inner::Novikov(c) => c.to_json(),
        }
    }

    /// `(degree, dimension)` pairs.
    fn dims(&self) -> Vec<(i32, usize)> {
        match &self.0 {
            Inner::Integer(c) => c.basis().dims(),
            Inner::Novikov(c) => c.basis().dims(),
        }
    }

    /// Nonzero entries of d^2 as `(degree, row, col, value)`; modulo `z^n` if given.
    #[pyo3(signature = (n = None))]
    fn verify(&self, n: Option<i64>) -> Vec<(i32, String, String, String)> {
        let defects = match (&self.0, n) {
            (Inner::Integer(c), _) => c.verify(),
            (Inner::Novikov(c), Some(n)) => c.verify_mod(n),
            (Inner::Novikov(c), None) => c.verify(),
        };
        defects.into_iter().map(|d| (d.degree, d.row, d.col, d.value)).collect()
    }

    /// Integer homology as `(degree, group)`, e.g. `(1, "Z/2")`.
    fn homology(&self) -> PyResult<Vec<(i32, String)>> {
        match &self.0 {
            Inner::Integer(c) => Ok(homology_z(c).into_iter().map(|(i, g)| (i, g.to_string())).collect()),
            Inner::Novikov(_) => Err(PyValueError::new_err("use novikov_ranks for series coefficients")),
        }
    }

    /// Ranks of Novikov homology, certified at precision `n`.
    fn novikov_ranks(&self, n: i64) -> PyResult<Vec<(i32, usize)>> {
        match &self.0 {
            Inner::Novikov(c) => novikov_ranks(c, n).map_err(value_err),
            Inner::Integer(c) => {
                let ctx = NovikovContext::integral(Some(n));
                novikov_ranks(&dmt::to_novikov(c, &ctx), n).map_err(value_err)
            }
        }
    }

    /// Entrywise congruence modulo `z^n`; `None` or the first differing entry.
    fn congruence(&self, other: &ChainComplex, n: i64) -> PyResult<Option<(i32, String, String, String, String)>> {
        let (Inner::Novikov(a), Inner::Novikov(b)) = (&self.0, &other.0) else {
            return Err(PyValueError::new_err("both complexes need series coefficients"));
        };
        let r = diff_congruence(a, b, n).map_err(value_err)?;
        Ok(r.first_discrepancy.map(|d| (d.degree, d.row, d.col, d.left, d.right)))
    }
}

/// A finite regular CW complex.
#[pyclass(module = "novikov_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct CellComplex(dmt::CellComplex);

#[pymethods]
impl CellComplex {
    /// One of circle, sphere, torus, projective_plane, klein_bottle,
    /// point, two_points, two_circles.
    #[staticmethod]
    fn corpus(name: &str) -> PyResult<Self> {
        let small = [("point", corpus::point()), ("two_points", corpus::two_points()), ("two_circles", corpus::two_circles())];
        corpus::closed_complexes()
            .into_iter()
            .chain(small)
            .find(|(n, _)| *n == name)
            .map(|(_, k)| CellComplex(k))
            .ok_or_else(|| PyValueError::new_err(format!("no corpus complex `{name}`")))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: CellComplexDoc = serde_json::from_str(text).map_err(value_err)?;
        dmt::CellComplex::from_doc(&doc).map(CellComplex).map_err(value_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0.to_doc()).expect("serializable")
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Violations of acyclicity or the matching conditions; empty if valid.
    fn validate_field(&self, pairs: Vec<(String, String)>) -> Vec<String> {
        dmt::validate_field(&self.0, &VectorField::new(pairs)).violations
    }

    /// A seeded random acyclic matching.
    #[pyo3(signature = (seed, keep = 1.0))]
    fn random_field(&self, seed: u64, keep: f64) -> Vec<(String, String)> {
        dmt::random_acyclic_field(&self.0, seed, &Default::default(), keep).pairs
    }

    /// Critical cell ids of a field.
    #[pyo3(signature = (pairs = None))]
    fn critical_cells(&self, pairs: Option<Vec<(String, String)>>) -> PyResult<Vec<String>> {
        dmt::critical_cells(&self.0, &field(pairs)).map_err(value_err)
    }

    /// The Morse complex of a field; the cellular complex if `pairs` is omitted.
    #[pyo3(signature = (pairs = None))]
    fn morse_complex(&self, pairs: Option<Vec<(String, String)>>) -> PyResult<ChainComplex> {
        dmt::morse_complex(&self.0, &field(pairs)).map(|c| ChainComplex(Inner::Integer(c))).map_err(value_err)
    }
}

/// Gluing along a corpus splitting: whether `phi = theta' theta''` holds.
#[pyfunction]
fn glue_check_corpus(name: &str) -> PyResult<bool> {
    let ex = corpus::splitting_examples()
        .into_iter()
        .chain([corpus::torus_splitting_skewed()])
        .find(|e| e.name == name)
        .ok_or_else(|| PyValueError::new_err(format!("no corpus splitting `{name}`")))?;
    let r = ex.manifold().read(&ex.level_field).map_err(value_err)?;
    let phi = r.data.phi.as_ref().ok_or_else(|| PyValueError::new_err("no attaching map"))?;
    Ok(glue_check(phi, &r.data.thetaprime, &r.data.thetasecond).map_err(value_err)?.holds)
}

/// An algebraic cobordism `(F, D, theta, theta', psi)`.
#[pyclass(module = "novikov_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Gamma(AlgebraicCobordism);

#[pymethods]
impl Gamma {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: GammaDoc = serde_json::from_str(text).map_err(value_err)?;
        AlgebraicCobordism::from_doc(&doc).map(Gamma).map_err(value_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0.to_doc()).expect("serializable")
    }

    /// Number of identity violations modulo `z^n`.
    fn validate(&self, n: i64) -> usize {
        self.0.validate(n).len()
    }

    /// The Novikov differential `d_F + z theta' (1 - z psi)^{-1} theta` mod `z^n`.
    fn assemble_fhat(&self, n: i64) -> PyResult<ChainComplex> {
        self.0.assemble_fhat(n).map(|c| ChainComplex(Inner::Novikov(c))).map_err(value_err)
    }

    /// The complex `E` on `D_{i-1} + D_i + F_i`.
    fn build_e(&self, n: i64) -> PyResult<ChainComplex> {
        self.0.build_e(n).map(|c| ChainComplex(Inner::Novikov(c))).map_err(value_err)
    }
}

/// A fundamental domain of a circle-valued function.
#[pyclass(module = "novikov_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct FundamentalDomain(dmt::FundamentalDomain);

#[pymethods]
impl FundamentalDomain {
    /// One of circle_domain, torus_domain, torus_projection_domain.
    #[staticmethod]
    fn corpus(name: &str) -> PyResult<Self> {
        match name {
            "circle_domain" => Ok(corpus::circle_domain()),
            "torus_domain" => Ok(corpus::torus_domain()),
            "torus_projection_domain" => Ok(corpus::torus_projection_domain()),
            _ => Err(PyValueError::new_err(format!("no corpus domain `{name}`"))),
        }
        .map(FundamentalDomain)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: dmt::FundamentalDomainDoc = serde_json::from_str(text).map_err(value_err)?;
        dmt::FundamentalDomain::from_doc(&doc).map(FundamentalDomain).map_err(value_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0.to_doc()).expect("serializable")
    }

    /// Morse complex of `l + 1` unrolled copies, graded by copy, mod `z^(l+1)`.
    fn z_graded_complex(&self, l: usize) -> PyResult<ChainComplex> {
        self.0.z_graded_complex(l).map(|c| ChainComplex(Inner::Novikov(c))).map_err(value_err)
    }

    /// Inserts the splitting collar for the given interface field and reads off Gamma.
    #[pyo3(signature = (level_pairs = None))]
    fn extract_gamma(&self, level_pairs: Option<Vec<(String, String)>>) -> PyResult<Gamma> {
        self.0.split(&field(level_pairs)).and_then(|s| s.extract_gamma()).map(Gamma).map_err(value_err)
    }
}

#[pymodule]
pub fn novikov_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Series>()?;
    m.add_class::<ChainComplex>()?;
    m.add_class::<CellComplex>()?;
    m.add_class::<Gamma>()?;
    m.add_class::<FundamentalDomain>()?;
    m.add_function(wrap_pyfunction!(glue_check_corpus, m)?)?;
    Ok(())
}
