//! Python bindings: finite algebras with their syntactic congruences and
//! determining sets, automata with their syntactic monoids, and inverse
//! systems of finite quotients.  Scalar results come back as native Python
//! values; structured reports come back as JSON strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use syncong::algebra::AlgFile;
use syncong::congruence::Congruence;
use syncong::profinite::{CylinderSet, OmegaExponent, Thread};
use syncong::{Assignment, Error, Partition, SubsetL, Term};

fn err(e: Error) -> PyErr {
    match e {
        Error::Internal(inner) => PyRuntimeError::new_err(inner.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// A finite algebra with named subsets, as parsed from `.alg` text.
#[pyclass]
struct Algebra {
    inner: AlgFile,
}

impl Algebra {
    fn subset(&self, indices: &[usize]) -> PyResult<SubsetL> {
        SubsetL::from_indices(self.inner.algebra.carrier_size(), indices).map_err(err)
    }
}

#[pymethods]
impl Algebra {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Algebra {
            inner: syncong::parse_algebra(text).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.algebra.name().to_string()
    }

    #[getter]
    fn carrier(&self) -> usize {
        self.inner.algebra.carrier_size()
    }

    /// Operation symbols with their arities.
    fn signature(&self) -> Vec<(String, usize)> {
        self.inner
            .algebra
            .signature()
            .symbols()
            .iter()
            .map(|s| (s.name.clone(), s.arity))
            .collect()
    }

    /// Named subsets declared in the source text.
    fn subsets(&self) -> Vec<(String, Vec<usize>)> {
        self.inner
            .subsets
            .iter()
            .map(|(name, l)| (name.clone(), l.indices().to_vec()))
            .collect()
    }

    fn serialize(&self) -> String {
        syncong::serialize_algebra(&self.inner)
    }

    /// Evaluate a term under an assignment like `{"x": 1, "y": 2}`.
    fn eval(&self, term: &str, assign: std::collections::HashMap<String, usize>) -> PyResult<usize> {
        let t = Term::parse(term, self.inner.algebra.signature()).map_err(err)?;
        let mut a = Assignment::new();
        for (var, value) in assign {
            a.set(var, value);
        }
        syncong::eval_term(&self.inner.algebra, &t, &a).map_err(err)
    }

    /// Classes of the syntactic congruence of a subset.
    fn syntactic_classes(&self, subset: Vec<usize>) -> PyResult<Vec<Vec<usize>>> {
        let l = self.subset(&subset)?;
        let analysis = syncong::syntactic_congruence(&self.inner.algebra, &l).map_err(err)?;
        Ok(analysis.congruence.partition().classes())
    }

    /// Quotient by the syntactic congruence of a subset: the quotient
    /// algebra and the element-wise projection.
    fn syntactic_quotient(&self, subset: Vec<usize>) -> PyResult<(Algebra, Vec<usize>)> {
        let l = self.subset(&subset)?;
        let analysis = syncong::syntactic_congruence(&self.inner.algebra, &l).map_err(err)?;
        Ok((
            Algebra {
                inner: AlgFile {
                    algebra: analysis.quotient,
                    subsets: Vec::new(),
                },
            },
            analysis.eta.image().to_vec(),
        ))
    }

    /// Quotient by an explicit congruence given as blocks.
    fn quotient(&self, blocks: Vec<Vec<usize>>) -> PyResult<(Algebra, Vec<usize>)> {
        let p = Partition::from_classes(self.inner.algebra.carrier_size(), &blocks).map_err(err)?;
        let theta = Congruence::certify(&self.inner.algebra, p).map_err(err)?;
        let (q, projection) = theta.quotient().map_err(err)?;
        Ok((
            Algebra {
                inner: AlgFile {
                    algebra: q,
                    subsets: Vec::new(),
                },
            },
            projection.image().to_vec(),
        ))
    }

    /// All elements of the translation monoid, as self-map images.
    fn translations(&self) -> PyResult<Vec<Vec<usize>>> {
        let monoid = syncong::translation_monoid(&self.inner.algebra).map_err(err)?;
        Ok(monoid.elements().iter().map(|f| f.image().to_vec()).collect())
    }

    /// A determining set of self-maps for a subset.
    fn determining_set(&self, subset: Vec<usize>) -> PyResult<Vec<Vec<usize>>> {
        let l = self.subset(&subset)?;
        let set = syncong::determining_set_from_quotient(&self.inner.algebra, &l).map_err(err)?;
        Ok(set.functions().iter().map(|f| f.image().to_vec()).collect())
    }

    /// An inclusion-minimal determining set for a subset.
    fn minimal_determining_set(&self, subset: Vec<usize>) -> PyResult<Vec<Vec<usize>>> {
        let l = self.subset(&subset)?;
        let set = syncong::determining_set_from_quotient(&self.inner.algebra, &l).map_err(err)?;
        let minimal =
            syncong::minimal_determining_subset(&self.inner.algebra, &l, &set).map_err(err)?;
        Ok(minimal.functions().iter().map(|f| f.image().to_vec()).collect())
    }

    /// Idempotent power of an element (`factorial=None`), or its n!-th
    /// power, under the unique binary operation.
    #[pyo3(signature = (element, factorial=None))]
    fn omega_power(&self, element: usize, factorial: Option<u64>) -> PyResult<usize> {
        let exponent = match factorial {
            None => OmegaExponent::Omega,
            Some(n) => OmegaExponent::Factorial(n),
        };
        syncong::omega_power(&self.inner.algebra, element, exponent).map_err(err)
    }

    /// Ten-condition recognizability report for a subset, as JSON.
    fn determination_report(&self, subset: Vec<usize>) -> PyResult<String> {
        let l = self.subset(&subset)?;
        let report = syncong::determination_report(&self.inner.algebra, &l).map_err(err)?;
        to_json(&report)
    }

    /// Splits of a term at each occurrence of one variable.
    #[pyo3(signature = (term, var="x1"))]
    fn linearize(&self, term: &str, var: &str) -> PyResult<Vec<String>> {
        let t = Term::parse(term, self.inner.algebra.signature()).map_err(err)?;
        let lin = syncong::linearize(&t, var).map_err(err)?;
        Ok(lin.terms.iter().map(|s| s.to_string()).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Algebra(name={:?}, carrier={})",
            self.inner.algebra.name(),
            self.inner.algebra.carrier_size()
        )
    }
}

/// A deterministic finite automaton, as parsed from `.dfa` text.
#[pyclass]
struct Dfa {
    inner: syncong::Dfa,
}

#[pymethods]
impl Dfa {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Dfa {
            inner: syncong::parse_dfa(text).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn states(&self) -> usize {
        self.inner.state_count()
    }

    #[getter]
    fn alphabet(&self) -> Vec<String> {
        self.inner.alphabet().to_vec()
    }

    fn serialize(&self) -> String {
        syncong::serialize_dfa(&self.inner)
    }

    fn accepts(&self, word: Vec<String>) -> PyResult<bool> {
        let tokens: Vec<&str> = word.iter().map(|s| s.as_str()).collect();
        self.inner.accepts_tokens(&tokens).map_err(err)
    }

    fn minimize(&self) -> PyResult<Dfa> {
        Ok(Dfa {
            inner: syncong::minimal_dfa(&self.inner).map_err(err)?,
        })
    }

    /// Syntactic monoid as a finite algebra, with the accepted subset.
    fn syntactic_monoid(&self) -> PyResult<(Algebra, Vec<usize>)> {
        let sm = syncong::syntactic_monoid(&self.inner).map_err(err)?;
        let accepted = sm.accepted.indices().to_vec();
        Ok((
            Algebra {
                inner: AlgFile {
                    algebra: sm.algebra,
                    subsets: vec![("accepted".to_string(), sm.accepted)],
                },
            },
            accepted,
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Dfa(name={:?}, states={})",
            self.inner.name(),
            self.inner.state_count()
        )
    }
}

/// A finite inverse system of algebras, as parsed from `.sys` text.
#[pyclass]
struct System {
    inner: syncong::InverseSystem,
}

#[pymethods]
impl System {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(System {
            inner: syncong::parse_system(text).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    fn serialize(&self) -> String {
        syncong::serialize_system(&self.inner)
    }

    fn level(&self, k: usize) -> PyResult<Algebra> {
        Ok(Algebra {
            inner: self.inner.level_file(k).map_err(err)?.clone(),
        })
    }

    /// Whether every connecting map is a surjective homomorphism.
    fn is_valid(&self) -> bool {
        self.inner.validate().ok()
    }

    /// Per-map diagnostics, as JSON.
    fn diagnostics(&self) -> PyResult<String> {
        to_json(&self.inner.validate())
    }

    /// Composed projection from level `m` down to level `k`.
    fn projection(&self, m: usize, k: usize) -> PyResult<Vec<usize>> {
        Ok(self.inner.projection(m, k).map_err(err)?.image().to_vec())
    }

    /// First level at which two threads differ, or None.
    fn separates_at(&self, t1: Vec<usize>, t2: Vec<usize>) -> PyResult<Option<usize>> {
        let a = Thread::new(&self.inner, t1).map_err(err)?;
        let b = Thread::new(&self.inner, t2).map_err(err)?;
        syncong::separate_points(&a, &b).map_err(err)
    }

    /// Recognize the cylinder over `indices` at `level` by one finite
    /// quotient: the recognizer algebra and the accepted image.
    fn recognize(&self, level: usize, indices: Vec<usize>) -> PyResult<(Algebra, Vec<usize>)> {
        let cylinder = CylinderSet::new(&self.inner, level, &indices).map_err(err)?;
        let rec = syncong::recognize_clopen(&self.inner, &cylinder).map_err(err)?;
        let image = rec.image.indices().to_vec();
        Ok((
            Algebra {
                inner: AlgFile {
                    algebra: rec.recognizer,
                    subsets: vec![("image".to_string(), rec.image)],
                },
            },
            image,
        ))
    }

    /// Quotient the whole system by one congruence per level, each given
    /// as blocks.
    fn quotient(&self, thetas: Vec<Vec<Vec<usize>>>) -> PyResult<System> {
        if thetas.len() != self.inner.depth() {
            return Err(PyValueError::new_err(format!(
                "need one partition per level: got {}, depth is {}",
                thetas.len(),
                self.inner.depth()
            )));
        }
        let mut congruences = Vec::with_capacity(thetas.len());
        for (i, blocks) in thetas.iter().enumerate() {
            let a = self.inner.level(i + 1).map_err(err)?;
            let p = Partition::from_classes(a.carrier_size(), blocks).map_err(err)?;
            congruences.push(Congruence::certify(a, p).map_err(err)?);
        }
        let q = syncong::quotient_system(&self.inner, &congruences).map_err(err)?;
        Ok(System { inner: q.system })
    }

    fn __repr__(&self) -> String {
        format!(
            "System(name={:?}, depth={})",
            self.inner.name(),
            self.inner.depth()
        )
    }
}

/// Terms determining subsets of classical semigroup-like algebras: the
/// identity and multiplications by parameters on either side.
#[pyfunction]
fn classical_terms(symbol: &str) -> Vec<String> {
    syncong::classical_term_set(symbol)
        .iter()
        .map(|t| t.to_string())
        .collect()
}

#[pymodule]
fn _syncong(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    m.add_class::<Dfa>()?;
    m.add_class::<System>()?;
    m.add_function(wrap_pyfunction!(classical_terms, m)?)?;
    Ok(())
}
