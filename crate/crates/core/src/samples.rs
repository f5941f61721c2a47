//! Small standard objects used throughout the tests, the command-line
//! sweeps, and the documentation examples: cyclic groups, constant-result
//! algebras, a two-element semilattice, modular projections between cyclic
//! groups, and (once the relevant modules are in scope) a three-level
//! power-of-two tower and the two-letter automaton for `(ab)*`.

use crate::algebra::FiniteAlgebra;
use crate::error::Result;
use crate::homomorphism::Homomorphism;
use crate::signature::Signature;

/// The cyclic group of order `n` as `({0,…,n−1}, add)` with addition mod
/// `n`; the signature has the single binary symbol `add`.
pub fn cyclic(n: usize) -> FiniteAlgebra {
    assert!(n >= 1);
    let sig = Signature::new([("add", 2)]).unwrap();
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push((a + b) % n);
        }
    }
    FiniteAlgebra::new(format!("z{n}"), sig, n, vec![table]).unwrap()
}

/// A single binary operation that ignores its arguments and returns
/// `value`. Its only elementary translation is the constant map.
pub fn constant_op(n: usize, value: usize) -> FiniteAlgebra {
    assert!(value < n);
    let sig = Signature::new([("c", 2)]).unwrap();
    FiniteAlgebra::new(format!("const{n}_{value}"), sig, n, vec![vec![value; n * n]]).unwrap()
}

/// The two-element meet semilattice `({0,1}, meet)` with `meet = min`.
pub fn two_element_semilattice() -> FiniteAlgebra {
    let sig = Signature::new([("meet", 2)]).unwrap();
    FiniteAlgebra::new("semilattice2", sig, 2, vec![vec![0, 0, 0, 1]]).unwrap()
}

/// The reduction map `cyclic(m) → cyclic(k)`, `i ↦ i mod k`; a surjective
/// homomorphism whenever `k` divides `m`.
pub fn mod_projection(m: usize, k: usize) -> Result<Homomorphism> {
    Homomorphism::new(cyclic(m), cyclic(k), (0..m).map(|i| i % k).collect())
}

/// The three-level tower `z2 ← z4 ← z8` with the mod-reduction connecting
/// maps; level 1 is the coarsest.
pub fn power_tower() -> crate::profinite::InverseSystem {
    crate::profinite::InverseSystem::new(
        "tower2",
        vec![cyclic(2), cyclic(4), cyclic(8)],
        vec![
            (0..4).map(|i| i % 2).collect(),
            (0..8).map(|i| i % 4).collect(),
        ],
    )
    .unwrap()
}

/// The three-state minimal automaton for the language of alternating
/// `ab`-blocks — words in `(ab)*`: state 0 accepts, state 1 has seen a
/// dangling `a`, state 2 is the sink.
pub fn abstar_dfa() -> crate::languages::Dfa {
    crate::languages::Dfa::new(
        "abstar",
        vec!["a".into(), "b".into()],
        3,
        0,
        crate::subset::SubsetL::from_indices(3, &[0]).unwrap(),
        vec![vec![1, 2], vec![2, 0], vec![2, 2]],
    )
    .unwrap()
}
