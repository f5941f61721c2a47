use serde::Serialize;

use crate::algebra::{carrier_tuples, Assignment, FiniteAlgebra};
use crate::congruence::{largest_congruence_saturating, Congruence};
use crate::error::{Error, InternalError, Result};
use crate::homomorphism::Homomorphism;
use crate::partition::Partition;
use crate::subset::SubsetL;
use crate::term::Term;
use crate::translations::{
    elementary_translations, transformation_of_linear_term, translation_monoid, Provenance,
    Transformation, TransformationMonoid,
};

/// The syntactic congruence of a subset `l` of a finite algebra, together
/// with everything produced on the way: the quotient algebra, the quotient
/// morphism, and the translation monoid used by the fingerprint route.
#[derive(Debug, Clone)]
pub struct SyntacticAnalysis {
    pub congruence: Congruence,
    pub quotient: FiniteAlgebra,
    pub eta: Homomorphism,
    pub monoid: TransformationMonoid,
}

/// Compute the syntactic congruence of `l` twice, by independent routes,
/// and insist the answers agree.
///
/// Route one fingerprints each element `a` by the bit vector
/// `(f(a) ∈ l)` over all `f` in the translation monoid; two elements are
/// related iff their fingerprints match. Route two refines the two-block
/// partition `{l, complement}` until it is stable under every elementary
/// translation, yielding the largest congruence saturating `l`. A
/// disagreement would mean one of the implementations is wrong and is
/// reported as an internal invariant violation, never patched over.
pub fn syntactic_congruence(a: &FiniteAlgebra, l: &SubsetL) -> Result<SyntacticAnalysis> {
    if l.carrier_size() != a.carrier_size() {
        return Err(Error::LengthMismatch {
            expected: a.carrier_size(),
            got: l.carrier_size(),
        });
    }
    let monoid = translation_monoid(a)?;
    let by_fingerprint = Partition::universal(a.carrier_size()).refine_by(|e| {
        monoid
            .elements()
            .iter()
            .map(|f| l.contains(f.apply(e)))
            .collect::<Vec<bool>>()
    });
    let refined = largest_congruence_saturating(a, l)?;
    if &by_fingerprint != refined.partition() {
        let (x, y) = by_fingerprint
            .first_disagreement(refined.partition())
            .expect("distinct partitions disagree somewhere");
        return Err(InternalError::AlgorithmDisagreement(x, y).into());
    }
    let (quotient, eta) = refined.quotient()?;
    Ok(SyntacticAnalysis {
        congruence: refined,
        quotient,
        eta,
        monoid,
    })
}

/// How a determining set was specified.
#[derive(Debug, Clone)]
pub enum DeterminingKind {
    /// A plain set of self-maps.
    SelfMaps,
    /// All instantiations of finitely many terms, each linear in the
    /// distinguished variable, with parameters ranging over the carrier.
    TermInstances {
        terms: Vec<Term>,
        distinguished: String,
    },
}

/// A finite set of self-maps used to pin down a syntactic congruence:
/// `a ~ b` iff `f(a) ∈ L ⇔ f(b) ∈ L` for every `f` in the set. Functions
/// are deduplicated by image and kept sorted by image.
#[derive(Debug, Clone)]
pub struct DeterminingSet {
    functions: Vec<Transformation>,
    kind: DeterminingKind,
}

impl DeterminingSet {
    pub fn from_transformations(functions: Vec<Transformation>) -> Self {
        DeterminingSet::with_kind(functions, DeterminingKind::SelfMaps)
    }

    pub fn with_kind(mut functions: Vec<Transformation>, kind: DeterminingKind) -> Self {
        functions.sort();
        functions.dedup();
        DeterminingSet { functions, kind }
    }

    pub fn functions(&self) -> &[Transformation] {
        &self.functions
    }

    pub fn kind(&self) -> &DeterminingKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

/// Verdict of a determination check: the partition induced by the set's
/// fingerprints, the syntactic congruence itself, and the first pair on
/// which they disagree (in either direction), if any.
#[derive(Debug, Clone)]
pub struct DeterminationCheck {
    pub determined: bool,
    pub induced: Partition,
    pub syntactic: Partition,
    pub witness: Option<(usize, usize)>,
}

fn fingerprint_partition(n: usize, l: &SubsetL, functions: &[&Transformation]) -> Partition {
    Partition::universal(n).refine_by(|e| {
        functions
            .iter()
            .map(|f| l.contains(f.apply(e)))
            .collect::<Vec<bool>>()
    })
}

/// Does the set of self-maps determine the syntactic congruence of `l`?
///
/// Both inclusions are checked: the set may be too weak (its fingerprints
/// merge syntactically distinct elements) or, when it contains maps outside
/// the translation monoid, too strong (separating syntactically equal
/// elements). Either defect yields a witness pair.
pub fn is_s_determined(
    a: &FiniteAlgebra,
    l: &SubsetL,
    set: &DeterminingSet,
) -> Result<DeterminationCheck> {
    if l.carrier_size() != a.carrier_size() {
        return Err(Error::LengthMismatch {
            expected: a.carrier_size(),
            got: l.carrier_size(),
        });
    }
    for f in set.functions() {
        if f.degree() != a.carrier_size() {
            return Err(Error::LengthMismatch {
                expected: a.carrier_size(),
                got: f.degree(),
            });
        }
    }
    let sigma = largest_congruence_saturating(a, l)?;
    let refs: Vec<&Transformation> = set.functions().iter().collect();
    let induced = fingerprint_partition(a.carrier_size(), l, &refs);
    let witness = induced.first_disagreement(sigma.partition());
    Ok(DeterminationCheck {
        determined: witness.is_none(),
        induced,
        syntactic: sigma.partition().clone(),
        witness,
    })
}

/// All instantiations of the given terms, each linear in `var`, with the
/// remaining variables frozen at every possible tuple of carrier elements.
pub fn term_instance_set(
    a: &FiniteAlgebra,
    terms: &[Term],
    var: &str,
) -> Result<DeterminingSet> {
    let mut functions = Vec::new();
    for t in terms {
        t.check_against(a.signature())?;
        if !t.is_linear_in(var) {
            return Err(Error::NotLinear(var.to_string()));
        }
        let params: Vec<&str> = t.variables().into_iter().filter(|v| *v != var).collect();
        for tuple in carrier_tuples(a.carrier_size(), params.len()) {
            let assignment: Assignment = params
                .iter()
                .zip(&tuple)
                .map(|(v, &val)| (v.to_string(), val))
                .collect();
            functions.push(transformation_of_linear_term(a, t, var, &assignment)?);
        }
    }
    Ok(DeterminingSet::with_kind(
        functions,
        DeterminingKind::TermInstances {
            terms: terms.to_vec(),
            distinguished: var.to_string(),
        },
    ))
}

/// The four-term set that determines every syntactic congruence over a
/// single associative binary operation: `x1`, `f(x2,x1)`, `f(x1,x2)`, and
/// `f(f(x2,x1),x3)` — the identity together with left, right, and
/// two-sided multiplication by parameters.
pub fn classical_term_set(symbol: &str) -> Vec<Term> {
    let x1 = Term::var("x1");
    let x2 = Term::var("x2");
    let x3 = Term::var("x3");
    vec![
        x1.clone(),
        Term::apply(symbol, vec![x2.clone(), x1.clone()]),
        Term::apply(symbol, vec![x1.clone(), x2.clone()]),
        Term::apply(symbol, vec![Term::apply(symbol, vec![x2, x1]), x3]),
    ]
}

/// Does the finite set of terms (each linear in `var`) determine the
/// syntactic congruence of `l` once all parameters are instantiated?
pub fn is_term_determined(
    a: &FiniteAlgebra,
    l: &SubsetL,
    terms: &[Term],
    var: &str,
) -> Result<DeterminationCheck> {
    let set = term_instance_set(a, terms, var)?;
    is_s_determined(a, l, &set)
}

/// Build a determining set for `σ_l` by lifting the translation monoid of
/// the quotient `A/σ_l` back through the quotient morphism `η`.
///
/// Each element of the quotient's monoid is a composite of elementary
/// translations of the quotient; each of those freezes some argument slots
/// at quotient classes. Freezing the same slots at the smallest member of
/// each class instead gives an elementary translation of `A`, and composing
/// these in the same order gives a lift `f̂` with `η ∘ f̂ = f ∘ η` — an
/// equation verified here for every element, not assumed. The lifted maps
/// carry `Composite` provenance whose indices point into
/// [`elementary_translations`] of `A` (identity lifts keep `Identity`).
///
/// Since `η` is surjective, distinct monoid elements get distinct lifts, so
/// the result has exactly as many functions as the quotient's translation
/// monoid. That the result determines `σ_l` is also verified, not assumed.
pub fn determining_set_from_quotient(a: &FiniteAlgebra, l: &SubsetL) -> Result<DeterminingSet> {
    let analysis = syntactic_congruence(a, l)?;
    let q = &analysis.quotient;
    let eta = &analysis.eta;
    let classes = analysis.congruence.partition().classes();
    let mq = translation_monoid(q)?;
    let elem_a = elementary_translations(a);
    let n = a.carrier_size();

    let mut lifts = Vec::with_capacity(mq.len());
    for idx in 0..mq.len() {
        let word = mq.generator_word(idx);
        let mut image: Vec<usize> = (0..n).collect();
        let mut lifted_word = Vec::new();
        for j in word {
            let g = &mq.generators()[j];
            let Provenance::Elementary {
                symbol,
                coordinate,
                fixed,
            } = g.provenance()
            else {
                unreachable!("generators of a translation monoid are elementary");
            };
            let op = a
                .signature()
                .index_of(symbol)
                .expect("quotient shares the signature");
            let mut args: Vec<usize> = fixed.iter().map(|&c| classes[c][0]).collect();
            args.insert(*coordinate, 0);
            let lifted_g: Vec<usize> = (0..n)
                .map(|x| {
                    args[*coordinate] = x;
                    a.eval_indexed(op, &args)
                })
                .collect();
            let pos = elem_a
                .iter()
                .position(|t| t.image() == lifted_g.as_slice())
                .expect("a frozen-slot map is an elementary translation");
            lifted_word.push(pos);
            image = image.iter().map(|&v| lifted_g[v]).collect();
        }
        let f = &mq.elements()[idx];
        for x in 0..n {
            if eta.apply(image[x]) != f.apply(eta.apply(x)) {
                return Err(InternalError::LiftMismatch.into());
            }
        }
        let provenance = if lifted_word.is_empty() {
            Provenance::Identity
        } else {
            Provenance::Composite {
                generators: lifted_word,
            }
        };
        lifts.push(Transformation::new(image, provenance));
    }

    let set = DeterminingSet::from_transformations(lifts);
    let check = is_s_determined(a, l, &set)?;
    if !check.determined {
        return Err(InternalError::ConstructedSetNotDetermining {
            witness: check.witness.expect("failed check has a witness"),
        }
        .into());
    }
    Ok(set)
}

/// Greedily shrink a determining set to one that is minimal under
/// inclusion: no kept function can be dropped without losing determination.
///
/// Candidates are tried for removal in descending order of their image
/// arrays. A single pass suffices: subsets of a non-determining set are
/// never determining (dropping functions only coarsens the induced
/// partition, which already contains the syntactic congruence), so a
/// function that must be kept now must still be kept later. Minimal under
/// inclusion, not of smallest possible size.
pub fn minimal_determining_subset(
    a: &FiniteAlgebra,
    l: &SubsetL,
    set: &DeterminingSet,
) -> Result<DeterminingSet> {
    let base = is_s_determined(a, l, set)?;
    if !base.determined {
        return Err(Error::NotDetermining {
            witness: base.witness.expect("failed check has a witness"),
        });
    }
    let sigma = base.syntactic;
    let funcs = set.functions().to_vec();
    let mut keep = vec![true; funcs.len()];
    for i in (0..funcs.len()).rev() {
        keep[i] = false;
        let trial: Vec<&Transformation> = funcs
            .iter()
            .zip(&keep)
            .filter_map(|(f, &k)| k.then_some(f))
            .collect();
        let induced = fingerprint_partition(a.carrier_size(), l, &trial);
        if induced != sigma {
            keep[i] = true;
        }
    }
    let kept: Vec<Transformation> = funcs
        .into_iter()
        .zip(keep)
        .filter_map(|(f, k)| k.then_some(f))
        .collect();
    Ok(DeterminingSet::with_kind(kept, set.kind().clone()))
}

/// The number of syntactic classes against the capacity of the determining
/// set: a set of `|F|` membership bits can tell at most `2^|F|` elements
/// apart.
#[derive(Debug, Clone, Serialize)]
pub struct IndexBoundReport {
    pub class_count: usize,
    pub set_size: usize,
    pub holds: bool,
}

/// Check `class_count ≤ 2^|F|` for a determining set, comparing without
/// ever forming `2^|F|` when the shift would overflow. The bound is a
/// theorem for genuinely determining sets, so a violation is reported as an
/// internal error; non-determining input is a domain error.
pub fn index_bound_check(
    a: &FiniteAlgebra,
    l: &SubsetL,
    set: &DeterminingSet,
) -> Result<IndexBoundReport> {
    let check = is_s_determined(a, l, set)?;
    if !check.determined {
        return Err(Error::NotDetermining {
            witness: check.witness.expect("failed check has a witness"),
        });
    }
    let class_count = check.syntactic.class_count();
    let set_size = set.len();
    let holds = set_size >= usize::BITS as usize || class_count <= (1usize << set_size);
    if !holds {
        return Err(InternalError::CertifyFailed(format!(
            "determining set of size {set_size} cannot separate {class_count} classes"
        ))
        .into());
    }
    Ok(IndexBoundReport {
        class_count,
        set_size,
        holds,
    })
}

/// The pullback identity for syntactic congruences along a surjective
/// homomorphism `φ : A → B`, plus the isomorphism it induces.
#[derive(Debug, Clone)]
pub struct PullbackReport {
    /// `φ⁻¹(l)` in the source.
    pub preimage: SubsetL,
    /// Syntactic congruence of the preimage in the source.
    pub source_congruence: Congruence,
    /// Syntactic congruence of `l` in the target.
    pub target_congruence: Congruence,
    /// `(φ×φ)⁻¹` of the target congruence, as a partition of the source.
    pub pullback: Partition,
    /// The induced bijective homomorphism between the two quotients.
    pub induced: Homomorphism,
}

/// Verify that pulling the syntactic congruence of `l` back along a
/// surjective `φ` gives exactly the syntactic congruence of `φ⁻¹(l)`, and
/// construct the induced isomorphism between the quotients. Both the
/// identity of partitions and the bijectivity of the induced map are
/// checked; failures are internal errors since both are theorems.
pub fn pullback_syntactic_check(phi: &Homomorphism, l: &SubsetL) -> Result<PullbackReport> {
    let b = phi.target();
    if l.carrier_size() != b.carrier_size() {
        return Err(Error::LengthMismatch {
            expected: b.carrier_size(),
            got: l.carrier_size(),
        });
    }
    if !phi.is_surjective() {
        let mut hit = vec![false; b.carrier_size()];
        for &v in phi.image() {
            hit[v] = true;
        }
        let missing = hit.iter().position(|&h| !h).expect("non-surjective map misses something");
        return Err(Error::NotSurjective { missing });
    }
    let a = phi.source();
    let preimage = l.preimage(phi.image());
    let target_congruence = largest_congruence_saturating(b, l)?;
    let source_congruence = largest_congruence_saturating(a, &preimage)?;
    let pullback = Partition::from_class_ids(
        phi.image()
            .iter()
            .map(|&v| target_congruence.partition().class_of(v))
            .collect(),
    );
    if &pullback != source_congruence.partition() {
        let (x, y) = pullback
            .first_disagreement(source_congruence.partition())
            .expect("distinct partitions disagree somewhere");
        return Err(InternalError::PullbackMismatch(x, y).into());
    }
    let (qa, _) = source_congruence.quotient()?;
    let (qb, projb) = target_congruence.quotient()?;
    let classes = source_congruence.partition().classes();
    let image: Vec<usize> = classes
        .iter()
        .map(|c| projb.apply(phi.apply(c[0])))
        .collect();
    let induced = Homomorphism::new(qa, qb, image)
        .map_err(|e| InternalError::InducedMapNotIso(e.to_string()))?;
    if !induced.is_bijective() {
        return Err(InternalError::InducedMapNotIso(format!(
            "sizes {} vs {}",
            induced.source().carrier_size(),
            induced.target().carrier_size()
        ))
        .into());
    }
    Ok(PullbackReport {
        preimage,
        source_congruence,
        target_congruence,
        pullback,
        induced,
    })
}
