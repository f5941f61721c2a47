use crate::algebra::{carrier_tuples, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// A homomorphism between two finite algebras over the same signature,
/// validated exhaustively at construction: for every operation and every
/// argument tuple, mapping then applying agrees with applying then mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct Homomorphism {
    source: FiniteAlgebra,
    target: FiniteAlgebra,
    image: Vec<usize>,
    surjective: bool,
}

impl Homomorphism {
    pub fn new(source: FiniteAlgebra, target: FiniteAlgebra, image: Vec<usize>) -> Result<Self> {
        if source.signature() != target.signature() {
            return Err(Error::NotAHomomorphism(
                "source and target have different signatures".into(),
            ));
        }
        if image.len() != source.carrier_size() {
            return Err(Error::LengthMismatch {
                expected: source.carrier_size(),
                got: image.len(),
            });
        }
        for &v in &image {
            if v >= target.carrier_size() {
                return Err(Error::ElementOutOfRange {
                    value: v,
                    carrier: target.carrier_size(),
                });
            }
        }
        for (op, sym) in source.signature().symbols().iter().enumerate() {
            for args in carrier_tuples(source.carrier_size(), sym.arity) {
                let mapped: Vec<usize> = args.iter().map(|&a| image[a]).collect();
                let lhs = image[source.eval_indexed(op, &args)];
                let rhs = target.eval_indexed(op, &mapped);
                if lhs != rhs {
                    return Err(Error::NotAHomomorphism(format!(
                        "operation `{}` at {:?}: map({}) = {} but {}({:?}) = {}",
                        sym.name,
                        args,
                        source.eval_indexed(op, &args),
                        lhs,
                        sym.name,
                        mapped,
                        rhs
                    )));
                }
            }
        }
        let mut hit = vec![false; target.carrier_size()];
        for &v in &image {
            hit[v] = true;
        }
        let surjective = hit.iter().all(|&h| h);
        Ok(Homomorphism {
            source,
            target,
            image,
            surjective,
        })
    }

    pub fn identity(a: &FiniteAlgebra) -> Self {
        Homomorphism {
            source: a.clone(),
            target: a.clone(),
            image: (0..a.carrier_size()).collect(),
            surjective: true,
        }
    }

    pub fn source(&self) -> &FiniteAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteAlgebra {
        &self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, e: usize) -> usize {
        self.image[e]
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn is_bijective(&self) -> bool {
        self.surjective && self.source.carrier_size() == self.target.carrier_size()
    }

    /// The kernel partition: elements are related iff they map to the same
    /// target element. It is always a congruence of the source.
    pub fn kernel(&self) -> Partition {
        Partition::from_class_ids(self.image.clone())
    }

    /// Composition `self` then `next`; requires `self.target == next.source`.
    pub fn then(&self, next: &Homomorphism) -> Result<Homomorphism> {
        if self.target != next.source {
            return Err(Error::AlgebraMismatch);
        }
        let image = self.image.iter().map(|&v| next.image[v]).collect();
        // Compositions of homomorphisms are homomorphisms; revalidate anyway
        // since construction is the only trusted door.
        Homomorphism::new(self.source.clone(), next.target.clone(), image)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn mod_projection_is_a_homomorphism() {
        let h = samples::mod_projection(4, 2).unwrap();
        assert!(h.is_surjective());
        assert_eq!(h.image(), &[0, 1, 0, 1]);
        assert_eq!(h.kernel().to_string(), "{0,2}/{1,3}");
    }

    #[test]
    fn non_homomorphism_rejected_with_witness() {
        let z4 = samples::cyclic(4);
        let z2 = samples::cyclic(2);
        // Rounding down halves is not compatible with addition.
        let err = Homomorphism::new(z4.clone(), z2.clone(), vec![0, 0, 1, 1]).unwrap_err();
        match err {
            Error::NotAHomomorphism(msg) => assert!(msg.contains("add"), "{msg}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn signature_mismatch_rejected() {
        let z2 = samples::cyclic(2);
        let sl = samples::two_element_semilattice();
        assert!(matches!(
            Homomorphism::new(z2, sl, vec![0, 1]),
            Err(Error::NotAHomomorphism(_))
        ));
    }

    #[test]
    fn composition_checks_endpoints() {
        let h84 = samples::mod_projection(8, 4).unwrap();
        let h42 = samples::mod_projection(4, 2).unwrap();
        let h82 = h84.then(&h42).unwrap();
        assert_eq!(h82.image(), &[0, 1, 0, 1, 0, 1, 0, 1]);
        assert!(matches!(h42.then(&h84), Err(Error::AlgebraMismatch)));
    }

    #[test]
    fn kernel_of_identity_is_equality() {
        let z4 = samples::cyclic(4);
        let id = Homomorphism::identity(&z4);
        assert_eq!(id.kernel(), Partition::identity(4));
        assert!(id.is_bijective());
    }
}
