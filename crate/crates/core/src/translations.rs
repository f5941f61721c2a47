use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::algebra::{carrier_tuples, Assignment, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::term::{eval_term, Term};

/// A self-map of a carrier `{0, …, n−1}`, stored as an image array, with a
/// record of where it came from. Equality, ordering, and hashing use the
/// image only: two transformations are the same map even if they were built
/// differently.
#[derive(Debug, Clone)]
pub struct Transformation {
    image: Vec<usize>,
    provenance: Provenance,
}

/// How a transformation arose.
#[derive(Debug, Clone)]
pub enum Provenance {
    /// The identity map.
    Identity,
    /// One operation with one argument slot left open: `x ↦ w(…, x, …)`
    /// with the other slots frozen at `fixed` (slot order preserved,
    /// distinguished slot omitted).
    Elementary {
        symbol: String,
        coordinate: usize,
        fixed: Vec<usize>,
    },
    /// A composition of generators, applied left to right; the indices
    /// refer to the generator list of the monoid that produced this element.
    Composite { generators: Vec<usize> },
    /// Instantiated from a term linear in `distinguished` by freezing all
    /// other variables.
    TermInstance {
        term: Term,
        distinguished: String,
        parameters: Assignment,
    },
}

impl PartialEq for Transformation {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
    }
}

impl Eq for Transformation {}

impl PartialOrd for Transformation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Transformation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.image.cmp(&other.image)
    }
}

impl std::hash::Hash for Transformation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.image.hash(state);
    }
}

impl Serialize for Transformation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.image.len()))?;
        for v in &self.image {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

impl Transformation {
    pub fn identity(n: usize) -> Self {
        Transformation {
            image: (0..n).collect(),
            provenance: Provenance::Identity,
        }
    }

    pub fn new(image: Vec<usize>, provenance: Provenance) -> Self {
        Transformation { image, provenance }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn into_image(self) -> Vec<usize> {
        self.image
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn apply(&self, e: usize) -> usize {
        self.image[e]
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Image array of `self` followed by `other`.
    pub fn then_image(&self, other: &Transformation) -> Vec<usize> {
        self.image.iter().map(|&v| other.image[v]).collect()
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// All distinct elementary translations of an algebra: for every operation
/// of arity ≥ 1, every argument slot, and every way to freeze the remaining
/// slots, the self-map obtained by varying the open slot. Deduplicated by
/// image (first construction wins) and sorted by image.
pub fn elementary_translations(a: &FiniteAlgebra) -> Vec<Transformation> {
    let n = a.carrier_size();
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    let mut out = Vec::new();
    for (op, sym) in a.signature().symbols().iter().enumerate() {
        if sym.arity == 0 {
            continue;
        }
        for coord in 0..sym.arity {
            for fixed in carrier_tuples(n, sym.arity - 1) {
                let mut args = fixed.clone();
                args.insert(coord, 0);
                let image: Vec<usize> = (0..n)
                    .map(|x| {
                        args[coord] = x;
                        a.eval_indexed(op, &args)
                    })
                    .collect();
                if seen.insert(image.clone(), ()).is_none() {
                    out.push(Transformation::new(
                        image,
                        Provenance::Elementary {
                            symbol: sym.name.clone(),
                            coordinate: coord,
                            fixed,
                        },
                    ));
                }
            }
        }
    }
    out.sort();
    out
}

/// A monoid of self-maps of `{0, …, n−1}`, closed under composition,
/// generated from a finite set of transformations by breadth-first closure.
///
/// Elements are deduplicated by image and kept sorted by image, so equal
/// monoids have equal element lists. Every element records how it arises
/// from the generators.
#[derive(Debug, Clone)]
pub struct TransformationMonoid {
    carrier_size: usize,
    generators: Vec<Transformation>,
    elements: Vec<Transformation>,
    index: HashMap<Vec<usize>, usize>,
}

impl TransformationMonoid {
    /// Close `{identity} ∪ generators` under composition. Generators are
    /// deduplicated by image and sorted first, so generator indices in
    /// element provenance are stable. `cap` bounds the element count; the
    /// count can never exceed `n^n` mathematically, so hitting a smaller
    /// cap (or `n^n` being exceeded) reveals a bug rather than bad input.
    pub fn generate(
        carrier_size: usize,
        generators: Vec<Transformation>,
        cap: usize,
    ) -> Result<Self> {
        let mut gens = generators;
        gens.sort();
        gens.dedup();
        for g in &gens {
            assert_eq!(g.degree(), carrier_size, "generator degree mismatch");
        }

        // Breadth-first closure; remember one generator word per element.
        let mut words: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let mut order: Vec<Vec<usize>> = Vec::new();
        let identity: Vec<usize> = (0..carrier_size).collect();
        words.insert(identity.clone(), Vec::new());
        order.push(identity.clone());
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        queue.push_back(identity);
        while let Some(img) = queue.pop_front() {
            let word = words[&img].clone();
            for (j, g) in gens.iter().enumerate() {
                let next: Vec<usize> = img.iter().map(|&v| g.image()[v]).collect();
                if !words.contains_key(&next) {
                    if words.len() + 1 > cap {
                        return Err(Error::SizeCapExceeded { cap });
                    }
                    let mut w = word.clone();
                    w.push(j);
                    words.insert(next.clone(), w);
                    order.push(next.clone());
                    queue.push_back(next);
                }
            }
        }

        let mut elements: Vec<Transformation> = order
            .into_iter()
            .map(|img| {
                let word = &words[&img];
                let provenance = match word.len() {
                    0 => Provenance::Identity,
                    1 => gens[word[0]].provenance().clone(),
                    _ => Provenance::Composite {
                        generators: word.clone(),
                    },
                };
                Transformation::new(img, provenance)
            })
            .collect();
        elements.sort();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, t)| (t.image().to_vec(), i))
            .collect();
        Ok(TransformationMonoid {
            carrier_size,
            generators: gens,
            elements,
            index,
        })
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, image: &[usize]) -> bool {
        self.index.contains_key(image)
    }

    pub fn index_of(&self, image: &[usize]) -> Option<usize> {
        self.index.get(image).copied()
    }

    pub fn identity_index(&self) -> usize {
        self.index_of(&(0..self.carrier_size).collect::<Vec<_>>())
            .expect("monoid always contains the identity")
    }

    /// Index of the generator with this image, if any.
    pub fn generator_index(&self, image: &[usize]) -> Option<usize> {
        self.generators.iter().position(|g| g.image() == image)
    }

    /// Index of `elements[i]` followed by `elements[j]`; `None` would mean
    /// the closure was not closed, which cannot happen.
    pub fn compose(&self, i: usize, j: usize) -> Option<usize> {
        self.index_of(&self.elements[i].then_image(&self.elements[j]))
    }

    /// The generator word recorded for an element: empty for the identity,
    /// otherwise indices into `generators()`, applied left to right.
    pub fn generator_word(&self, element: usize) -> Vec<usize> {
        match self.elements[element].provenance() {
            Provenance::Identity => Vec::new(),
            Provenance::Composite { generators } => generators.clone(),
            _ => {
                // Single-generator element keeps the generator's own
                // provenance; recover its index by image.
                let img = self.elements[element].image().to_vec();
                vec![self
                    .generator_index(&img)
                    .expect("single-step element must be a generator")]
            }
        }
    }

    /// Recompute an element's image from its provenance. Used by tests to
    /// confirm that provenance really reproduces the map.
    pub fn replay(&self, element: usize) -> Vec<usize> {
        let word = self.generator_word(element);
        let mut img: Vec<usize> = (0..self.carrier_size).collect();
        for j in word {
            img = img.iter().map(|&v| self.generators[j].image()[v]).collect();
        }
        img
    }
}

impl fmt::Display for TransformationMonoid {
    /// Element count header, then one image array per line, sorted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "monoid {}", self.elements.len())?;
        for t in &self.elements {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

/// The default closure cap for an algebra's translation monoid: `n^n`, the
/// number of all self-maps, which no monoid of self-maps can exceed.
pub fn self_map_cap(n: usize) -> usize {
    (n as u128)
        .checked_pow(n as u32)
        .map(|v| usize::try_from(v).unwrap_or(usize::MAX))
        .unwrap_or(usize::MAX)
}

/// The translation monoid of an algebra: all maps `x ↦ t(x, …)` for terms
/// linear in the open variable, equivalently the closure of the elementary
/// translations under composition (with the identity adjoined).
pub fn translation_monoid(a: &FiniteAlgebra) -> Result<TransformationMonoid> {
    TransformationMonoid::generate(
        a.carrier_size(),
        elementary_translations(a),
        self_map_cap(a.carrier_size()),
    )
}

/// The self-map `x ↦ t[var↦x, parameters]` of a term linear in `var`.
pub fn transformation_of_linear_term(
    a: &FiniteAlgebra,
    term: &Term,
    var: &str,
    parameters: &Assignment,
) -> Result<Transformation> {
    if !term.is_linear_in(var) {
        return Err(Error::NotLinear(var.to_string()));
    }
    term.check_against(a.signature())?;
    let image: Result<Vec<usize>> = (0..a.carrier_size())
        .map(|x| eval_term(a, term, &parameters.extended(var, x)))
        .collect();
    Ok(Transformation::new(
        image?,
        Provenance::TermInstance {
            term: term.clone(),
            distinguished: var.to_string(),
            parameters: parameters.clone(),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn z4_elementary_translations_are_the_four_shifts() {
        let z4 = samples::cyclic(4);
        let ts = elementary_translations(&z4);
        assert_eq!(ts.len(), 4);
        let images: Vec<Vec<usize>> = ts.iter().map(|t| t.image().to_vec()).collect();
        assert!(images.contains(&vec![0, 1, 2, 3]));
        assert!(images.contains(&vec![1, 2, 3, 0]));
        assert!(images.contains(&vec![2, 3, 0, 1]));
        assert!(images.contains(&vec![3, 0, 1, 2]));
    }

    #[test]
    fn z4_translation_monoid_is_the_four_shifts() {
        let z4 = samples::cyclic(4);
        let m = translation_monoid(&z4).unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.contains(&[0, 1, 2, 3]));
        assert!(m.contains(&[3, 0, 1, 2]));
    }

    #[test]
    fn constant_algebra_monoid_is_identity_plus_constant() {
        // A single binary operation returning 0: the only elementary
        // translation is the constant-0 map.
        let c3 = samples::constant_op(3, 0);
        let ts = elementary_translations(&c3);
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].image(), &[0, 0, 0]);
        let m = translation_monoid(&c3).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.contains(&[0, 1, 2]));
        assert!(m.contains(&[0, 0, 0]));
    }

    #[test]
    fn semilattice_monoid() {
        // meet on {0,1}: translations are the identity (meet with 1) and
        // the constant 0 (meet with 0).
        let sl = samples::two_element_semilattice();
        let m = translation_monoid(&sl).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.contains(&[0, 0]));
        assert!(m.contains(&[0, 1]));
    }

    #[test]
    fn closure_is_closed_and_deduplicated() {
        let z6 = samples::cyclic(6);
        let m = translation_monoid(&z6).unwrap();
        for i in 0..m.len() {
            for j in 0..m.len() {
                assert!(m.compose(i, j).is_some());
            }
        }
        let mut images: Vec<_> = m.elements().iter().map(|t| t.image().to_vec()).collect();
        let before = images.len();
        images.dedup();
        assert_eq!(images.len(), before);
        // Sorted by image.
        let mut sorted = images.clone();
        sorted.sort();
        assert_eq!(images, sorted);
    }

    #[test]
    fn provenance_replays_to_the_same_image() {
        for a in [
            samples::cyclic(5),
            samples::two_element_semilattice(),
            samples::constant_op(4, 2),
        ] {
            let m = translation_monoid(&a).unwrap();
            for i in 0..m.len() {
                assert_eq!(m.replay(i), m.elements()[i].image().to_vec());
            }
        }
    }

    #[test]
    fn cap_is_a_hard_stop() {
        let z4 = samples::cyclic(4);
        let err =
            TransformationMonoid::generate(4, elementary_translations(&z4), 3).unwrap_err();
        assert!(matches!(err, Error::SizeCapExceeded { cap: 3 }));
        assert_eq!(self_map_cap(4), 256);
        assert_eq!(self_map_cap(1), 1);
    }

    #[test]
    fn term_instance_requires_linearity_and_known_symbols() {
        let z4 = samples::cyclic(4);
        let sig = z4.signature().clone();
        let t = Term::parse("add(x,add(y,y))", &sig).unwrap();
        let v: Assignment = [("y", 1usize)].into_iter().collect();
        let tr = transformation_of_linear_term(&z4, &t, "x", &v).unwrap();
        assert_eq!(tr.image(), &[2, 3, 0, 1]);
        assert!(matches!(
            transformation_of_linear_term(&z4, &t, "y", &v),
            Err(Error::NotLinear(_))
        ));
        let unassigned = Assignment::new();
        assert!(matches!(
            transformation_of_linear_term(&z4, &t, "x", &unassigned),
            Err(Error::UnassignedVariable(_))
        ));
    }

    /// Soundness of the generation claim: instantiating random linear
    /// terms always lands inside the generated monoid.
    #[test]
    fn random_linear_term_instances_lie_in_the_monoid() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0001);
        let mut checked = 0;
        while checked < 500 {
            let n = rng.random_range(2..=4);
            let a = crate::suites::random_binary_algebra(
                &format!("rand{n}"),
                n,
                &mut rng,
            );
            let t = crate::suites::random_linear_term(&mut rng, 4, "x1");
            let params: Assignment = t
                .variables()
                .into_iter()
                .filter(|v| *v != "x1")
                .map(|v| (v.to_string(), rng.random_range(0..n)))
                .collect();
            let tr = transformation_of_linear_term(&a, &t, "x1", &params).unwrap();
            let m = translation_monoid(&a).unwrap();
            assert!(
                m.contains(tr.image()),
                "instance {tr} of {t} escaped the monoid of {}",
                a.name()
            );
            checked += 1;
        }
    }
}
