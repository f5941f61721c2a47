use crate::algebra::{carrier_tuples, FiniteAlgebra};
use crate::error::{Error, InternalError, Result};
use crate::homomorphism::Homomorphism;
use crate::partition::{all_partitions, coarsest_stable_refinement, Partition};
use crate::subset::SubsetL;
use crate::translations::elementary_translations;

/// Largest carrier for which brute-force congruence enumeration is allowed;
/// partition counts grow as the Bell numbers, so this is kept deliberately
/// small and exceeding it is an explicit refusal, not an attempt.
pub const ENUMERATION_LIMIT: usize = 5;

/// A partition of an algebra's carrier certified to be a congruence:
/// compatible, coordinate by coordinate, with every operation. Instances
/// can only be built through [`Congruence::certify`] (or operations that
/// preserve congruences), so holding one is proof of compatibility.
#[derive(Debug, Clone, PartialEq)]
pub struct Congruence {
    algebra: FiniteAlgebra,
    partition: Partition,
}

/// First compatibility failure, if any: `(symbol index, a, b)` such that
/// `a ~ b` but substituting `a` vs `b` into some slot of the operation
/// (other slots fixed) lands in different classes.
///
/// One slot at a time suffices: compatibility in each coordinate chains
/// into compatibility for full tuples by replacing arguments one by one.
fn compatibility_failure(a: &FiniteAlgebra, p: &Partition) -> Option<(usize, usize, usize)> {
    let n = a.carrier_size();
    let classes = p.classes();
    for (op, sym) in a.signature().symbols().iter().enumerate() {
        if sym.arity == 0 {
            continue;
        }
        for coord in 0..sym.arity {
            for fixed in carrier_tuples(n, sym.arity - 1) {
                let mut args = fixed.clone();
                args.insert(coord, 0);
                for class in &classes {
                    let rep = class[0];
                    args[coord] = rep;
                    let rep_class = p.class_of(a.eval_indexed(op, &args));
                    for &other in &class[1..] {
                        args[coord] = other;
                        if p.class_of(a.eval_indexed(op, &args)) != rep_class {
                            return Some((op, rep, other));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Is the partition compatible with every operation of the algebra?
pub fn is_congruence(a: &FiniteAlgebra, p: &Partition) -> Result<bool> {
    if p.len() != a.carrier_size() {
        return Err(Error::LengthMismatch {
            expected: a.carrier_size(),
            got: p.len(),
        });
    }
    Ok(compatibility_failure(a, p).is_none())
}

impl Congruence {
    /// Check compatibility and wrap the partition; the only way in.
    pub fn certify(algebra: &FiniteAlgebra, partition: Partition) -> Result<Self> {
        if partition.len() != algebra.carrier_size() {
            return Err(Error::LengthMismatch {
                expected: algebra.carrier_size(),
                got: partition.len(),
            });
        }
        if let Some((op, a, b)) = compatibility_failure(algebra, &partition) {
            return Err(Error::NotACongruence {
                symbol: algebra.signature().symbols()[op].name.clone(),
                a,
                b,
            });
        }
        Ok(Congruence {
            algebra: algebra.clone(),
            partition,
        })
    }

    pub fn equality(algebra: &FiniteAlgebra) -> Self {
        Congruence {
            partition: Partition::identity(algebra.carrier_size()),
            algebra: algebra.clone(),
        }
    }

    pub fn universal(algebra: &FiniteAlgebra) -> Self {
        Congruence {
            partition: Partition::universal(algebra.carrier_size()),
            algebra: algebra.clone(),
        }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn class_count(&self) -> usize {
        self.partition.class_count()
    }

    pub fn saturates(&self, l: &SubsetL) -> bool {
        self.partition.saturates(l)
    }

    /// Meet of two congruences of the same algebra. The intersection of
    /// congruences is again a congruence, so no recheck is needed.
    pub fn meet(&self, other: &Congruence) -> Result<Congruence> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let partition = self.partition.meet(&other.partition)?;
        debug_assert!(is_congruence(&self.algebra, &partition).unwrap());
        Ok(Congruence {
            algebra: self.algebra.clone(),
            partition,
        })
    }

    /// The quotient algebra on the classes, together with the projection
    /// homomorphism. Class ids follow the canonical partition order.
    ///
    /// Although representatives would suffice, well-definedness is
    /// re-verified over every argument tuple; a failure would mean the
    /// certification invariant was broken and is reported as internal.
    pub fn quotient(&self) -> Result<(FiniteAlgebra, Homomorphism)> {
        let a = &self.algebra;
        let n = a.carrier_size();
        let q_size = self.partition.class_count();
        let classes = self.partition.classes();
        let mut tables = Vec::with_capacity(a.signature().len());
        for (op, sym) in a.signature().symbols().iter().enumerate() {
            let mut table = Vec::with_capacity(q_size.pow(sym.arity as u32));
            for q_args in carrier_tuples(q_size, sym.arity) {
                let reps: Vec<usize> = q_args.iter().map(|&c| classes[c][0]).collect();
                table.push(self.partition.class_of(a.eval_indexed(op, &reps)));
            }
            tables.push(table);
            // Re-verify with every member, not just representatives.
            let table = tables.last().unwrap();
            for args in carrier_tuples(n, sym.arity) {
                let q_args: Vec<usize> = args.iter().map(|&e| self.partition.class_of(e)).collect();
                let mut off = 0;
                for &qa in &q_args {
                    off = off * q_size + qa;
                }
                if table[off] != self.partition.class_of(a.eval_indexed(op, &args)) {
                    return Err(InternalError::QuotientIllDefined {
                        symbol: sym.name.clone(),
                        args: q_args,
                    }
                    .into());
                }
            }
        }
        let q = FiniteAlgebra::new(
            format!("{}_mod{}", a.name(), q_size),
            a.signature().clone(),
            q_size,
            tables,
        )?;
        let proj = Homomorphism::new(a.clone(), q.clone(), self.partition.class_ids().to_vec())
            .map_err(|e| InternalError::CertifyFailed(format!("projection: {e}")))?;
        Ok((q, proj))
    }
}

/// The largest congruence that saturates `l` (no class straddles the
/// boundary of `l`), computed by refining the two-block partition induced
/// by `l` until it is stable under every elementary translation.
///
/// Stability under all one-variable-slot translations is exactly
/// compatibility with the operations, and coarsest-stable is largest, so
/// this is the syntactic congruence of `l` in the algebra.
pub fn largest_congruence_saturating(a: &FiniteAlgebra, l: &SubsetL) -> Result<Congruence> {
    if l.carrier_size() != a.carrier_size() {
        return Err(Error::LengthMismatch {
            expected: a.carrier_size(),
            got: l.carrier_size(),
        });
    }
    let maps: Vec<Vec<usize>> = elementary_translations(a)
        .into_iter()
        .map(|t| t.into_image())
        .collect();
    let start = Partition::from_subset(l);
    let partition = coarsest_stable_refinement(&start, &maps);
    let cong = Congruence::certify(a, partition)
        .map_err(|e| InternalError::CertifyFailed(format!("refinement result: {e}")))?;
    debug_assert!(cong.saturates(l));
    Ok(cong)
}

/// Every congruence of the algebra, by filtering all partitions of the
/// carrier. Refuses carriers above [`ENUMERATION_LIMIT`].
pub fn enumerate_congruences(a: &FiniteAlgebra) -> Result<Vec<Congruence>> {
    let n = a.carrier_size();
    if n > ENUMERATION_LIMIT {
        return Err(Error::CarrierTooLarge {
            carrier: n,
            max: ENUMERATION_LIMIT,
        });
    }
    Ok(all_partitions(n)
        .into_iter()
        .filter(|p| compatibility_failure(a, p).is_none())
        .map(|partition| Congruence {
            algebra: a.clone(),
            partition,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    /// Definition-level congruence oracle: full tuple substitution instead
    /// of the one-coordinate chain used by the implementation.
    fn is_congruence_oracle(a: &FiniteAlgebra, p: &Partition) -> bool {
        for (op, sym) in a.signature().symbols().iter().enumerate() {
            for args in carrier_tuples(a.carrier_size(), sym.arity) {
                for args2 in carrier_tuples(a.carrier_size(), sym.arity) {
                    if args.iter().zip(&args2).all(|(&x, &y)| p.same(x, y))
                        && !p.same(a.eval_indexed(op, &args), a.eval_indexed(op, &args2))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn coordinatewise_check_matches_definition() {
        let algebras = [
            samples::cyclic(3),
            samples::cyclic(4),
            samples::constant_op(3, 0),
            samples::two_element_semilattice(),
        ];
        for a in &algebras {
            for p in all_partitions(a.carrier_size()) {
                assert_eq!(
                    is_congruence(a, &p).unwrap(),
                    is_congruence_oracle(a, &p),
                    "disagreement on {a:?} with {p}"
                );
            }
        }
    }

    #[test]
    fn z4_has_three_congruences() {
        let z4 = samples::cyclic(4);
        let congs = enumerate_congruences(&z4).unwrap();
        assert_eq!(congs.len(), 3);
        let strings: Vec<String> = congs.iter().map(|c| c.partition().to_string()).collect();
        assert!(strings.contains(&"{0}/{1}/{2}/{3}".to_string()));
        assert!(strings.contains(&"{0,2}/{1,3}".to_string()));
        assert!(strings.contains(&"{0,1,2,3}".to_string()));
    }

    #[test]
    fn certify_rejects_with_witness() {
        let z4 = samples::cyclic(4);
        let bad = Partition::from_classes(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        match Congruence::certify(&z4, bad) {
            Err(Error::NotACongruence { symbol, .. }) => assert_eq!(symbol, "add"),
            other => panic!("expected NotACongruence, got {other:?}"),
        }
    }

    #[test]
    fn quotient_of_z4_mod_evens_is_z2() {
        let z4 = samples::cyclic(4);
        let p = Partition::from_classes(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let c = Congruence::certify(&z4, p).unwrap();
        let (q, proj) = c.quotient().unwrap();
        assert_eq!(q.carrier_size(), 2);
        // Class 0 = {0,2}, class 1 = {1,3}: addition mod 2.
        assert_eq!(q.table(0), &[0, 1, 1, 0]);
        assert_eq!(proj.image(), &[0, 1, 0, 1]);
        assert_eq!(proj.kernel(), *c.partition());
        assert!(proj.is_surjective());
    }

    #[test]
    fn quotient_projection_kernel_equals_congruence_everywhere() {
        for a in [
            samples::cyclic(4),
            samples::constant_op(4, 1),
            samples::two_element_semilattice(),
        ] {
            for c in enumerate_congruences(&a).unwrap() {
                let (_, proj) = c.quotient().unwrap();
                assert_eq!(&proj.kernel(), c.partition());
            }
        }
    }

    #[test]
    fn meet_of_congruences() {
        let z4 = samples::cyclic(4);
        let evens = Congruence::certify(
            &z4,
            Partition::from_classes(4, &[vec![0, 2], vec![1, 3]]).unwrap(),
        )
        .unwrap();
        let top = Congruence::universal(&z4);
        assert_eq!(evens.meet(&top).unwrap().partition(), evens.partition());
        assert_eq!(
            evens.meet(&Congruence::equality(&z4)).unwrap().partition(),
            &Partition::identity(4)
        );
    }

    #[test]
    fn enumeration_refuses_large_carriers() {
        let big = samples::cyclic(6);
        assert!(matches!(
            enumerate_congruences(&big),
            Err(Error::CarrierTooLarge { carrier: 6, max: 5 })
        ));
    }

    #[test]
    fn largest_saturating_on_z4() {
        let z4 = samples::cyclic(4);
        let evens = SubsetL::from_indices(4, &[0, 2]).unwrap();
        let c = largest_congruence_saturating(&z4, &evens).unwrap();
        assert_eq!(c.partition().to_string(), "{0,2}/{1,3}");
        let zero = SubsetL::from_indices(4, &[0]).unwrap();
        let c0 = largest_congruence_saturating(&z4, &zero).unwrap();
        assert_eq!(c0.partition(), &Partition::identity(4));
    }

    #[test]
    fn largest_saturating_matches_enumeration_oracle() {
        // Oracle: among all congruences that saturate l, take the coarsest.
        for a in [
            samples::cyclic(4),
            samples::cyclic(5),
            samples::constant_op(3, 2),
            samples::two_element_semilattice(),
        ] {
            let congs = enumerate_congruences(&a).unwrap();
            for l in SubsetL::all_subsets(a.carrier_size()) {
                let got = largest_congruence_saturating(&a, &l).unwrap();
                let best = congs
                    .iter()
                    .filter(|c| c.saturates(&l))
                    .max_by_key(|c| a.carrier_size() - c.class_count())
                    .unwrap();
                assert_eq!(got.partition(), best.partition());
            }
        }
    }

    #[test]
    fn trivial_subsets_give_universal_congruence() {
        let z4 = samples::cyclic(4);
        for l in [SubsetL::empty(4), SubsetL::full(4)] {
            let c = largest_congruence_saturating(&z4, &l).unwrap();
            assert_eq!(c.partition(), &Partition::universal(4));
        }
    }
}
