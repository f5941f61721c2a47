//! Seeded randomized sweeps cross-checking the fast algorithms against
//! brute-force oracles, plus the random generators they draw from. The
//! command-line `check` verb and the acceptance tests both run these, so
//! the reports carry counts and human-readable failure strings rather than
//! panicking mid-sweep.

use rand::Rng;

use crate::algebra::FiniteAlgebra;
use crate::signature::Signature;
use crate::term::Term;

/// A random algebra with one binary operation and a uniformly random table.
pub fn random_binary_algebra(name: &str, n: usize, rng: &mut impl Rng) -> FiniteAlgebra {
    let sig = Signature::new([("f", 2)]).unwrap();
    let table = (0..n * n).map(|_| rng.random_range(0..n)).collect();
    FiniteAlgebra::new(name, sig, n, vec![table]).unwrap()
}

/// A random term over the single binary symbol `f` and variables
/// `{var, x2, x3}`, built top-down with the given depth budget, retried
/// until `var` occurs between `min_occ` and `max_occ` times.
pub fn random_term(
    rng: &mut impl Rng,
    max_depth: usize,
    var: &str,
    min_occ: usize,
    max_occ: usize,
) -> Term {
    fn build(rng: &mut impl Rng, depth: usize, var: &str) -> Term {
        if depth == 0 || rng.random_range(0..10) < 3 {
            let vars = [var, "x2", "x3"];
            Term::var(vars[rng.random_range(0..vars.len())])
        } else {
            Term::apply(
                "f",
                vec![build(rng, depth - 1, var), build(rng, depth - 1, var)],
            )
        }
    }
    loop {
        let t = build(rng, max_depth, var);
        let c = t.count_occurrences(var);
        if c >= min_occ && c <= max_occ {
            return t;
        }
    }
}

/// A random term linear in `var` (exactly one occurrence).
pub fn random_linear_term(rng: &mut impl Rng, max_depth: usize, var: &str) -> Term {
    random_term(rng, max_depth, var, 1, 1)
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{carrier_tuples, Assignment};
use crate::congruence::enumerate_congruences;
use crate::error::Result;
use crate::homomorphism::Homomorphism;
use crate::partition::Partition;
use crate::profinite::{omega_power, OmegaExponent};
use crate::samples;
use crate::subset::SubsetL;
use crate::syntactic::{
    determining_set_from_quotient, index_bound_check, is_s_determined,
    minimal_determining_subset, pullback_syntactic_check, syntactic_congruence,
};
use crate::term::{eval_term, linearize};
use crate::translations::translation_monoid;

/// Outcome of one sweep: how many samples were drawn, how many individual
/// checks ran, and a human-readable line per failure (capped, so a broken
/// build reports the shape of the problem without flooding).
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub label: String,
    pub samples: usize,
    pub checks: u64,
    pub failures: Vec<String>,
}

const FAILURE_CAP: usize = 32;

impl SweepReport {
    fn new(label: &str) -> Self {
        SweepReport {
            label: label.to_string(),
            samples: 0,
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, message: String) {
        if self.failures.len() < FAILURE_CAP {
            self.failures.push(message);
        }
    }
}

/// Cross-check the syntactic congruence against exhaustive enumeration:
/// for random one-binary-op algebras and every subset of their carriers,
/// the refinement-plus-fingerprint answer must equal the coarsest
/// enumerated congruence that saturates the subset (which must exist and
/// be unique).
pub fn oracle_sweep(samples: usize, max_carrier: usize, seed: u64) -> Result<SweepReport> {
    let mut report = SweepReport::new("oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        report.samples += 1;
        let n = rng.random_range(2..=max_carrier);
        let a = random_binary_algebra(&format!("r{s}"), n, &mut rng);
        let congruences = enumerate_congruences(&a)?;
        for l in SubsetL::all_subsets(n) {
            report.checks += 1;
            let saturating: Vec<_> = congruences.iter().filter(|c| c.saturates(&l)).collect();
            let oracle = saturating.iter().find(|c| {
                saturating
                    .iter()
                    .all(|d| c.partition().is_coarser_or_equal(d.partition()))
            });
            let Some(oracle) = oracle else {
                report.fail(format!(
                    "sample {s}: saturating congruences of {l} have no maximum"
                ));
                continue;
            };
            let analysis = syntactic_congruence(&a, &l)?;
            if analysis.congruence.partition() != oracle.partition() {
                report.fail(format!(
                    "sample {s}: syntactic congruence of {l} is {} but enumeration gives {}",
                    analysis.congruence.partition(),
                    oracle.partition()
                ));
            }
        }
    }
    Ok(report)
}

/// A copy of an algebra with its elements renamed by a permutation.
fn permuted_algebra(q: &crate::algebra::FiniteAlgebra, perm: &[usize]) -> Result<FiniteAlgebra> {
    let n = q.carrier_size();
    let mut inv = vec![0usize; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let sig = q.signature().clone();
    let mut tables = Vec::new();
    for (k, sym) in sig.symbols().iter().enumerate() {
        let mut table = Vec::new();
        for tuple in carrier_tuples(n, sym.arity) {
            let pre: Vec<usize> = tuple.iter().map(|&y| inv[y]).collect();
            table.push(perm[q.eval_indexed(k, &pre)]);
        }
        tables.push(table);
    }
    FiniteAlgebra::new(format!("{}p", q.name()), sig, n, tables)
}

fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Exercise the pullback identity on random surjective homomorphisms:
/// each is a random quotient composed with a random relabeling of the
/// quotient's elements, and every subset of the target is pulled back.
/// The per-subset identity and induced-isomorphism checks live inside
/// [`pullback_syntactic_check`]; this sweep drives them broadly.
pub fn pullback_sweep(samples: usize, seed: u64) -> Result<SweepReport> {
    let mut report = SweepReport::new("pullback");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        report.samples += 1;
        let n = rng.random_range(2..=4);
        let a = random_binary_algebra(&format!("r{s}"), n, &mut rng);
        let congruences = enumerate_congruences(&a)?;
        let theta = &congruences[rng.random_range(0..congruences.len())];
        let (q, proj) = theta.quotient()?;
        let m = q.carrier_size();
        let perm = random_permutation(&mut rng, m);
        let b = permuted_algebra(&q, &perm)?;
        let image: Vec<usize> = proj.image().iter().map(|&v| perm[v]).collect();
        let phi = Homomorphism::new(a.clone(), b, image)?;
        for l in SubsetL::all_subsets(m) {
            report.checks += 1;
            pullback_syntactic_check(&phi, &l)?;
        }
    }
    Ok(report)
}

/// Drive the determining-set construction across random algebras and all
/// subsets: the lifted set must consist of translations, determine the
/// syntactic congruence, respect the `2^|F|` index bound, and survive
/// greedy minimization with determination intact.
pub fn determining_set_sweep(samples: usize, seed: u64) -> Result<SweepReport> {
    let mut report = SweepReport::new("determining-set");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        report.samples += 1;
        let n = rng.random_range(2..=4);
        let a = random_binary_algebra(&format!("r{s}"), n, &mut rng);
        let monoid = translation_monoid(&a)?;
        for l in SubsetL::all_subsets(n) {
            report.checks += 1;
            let set = determining_set_from_quotient(&a, &l)?;
            for f in set.functions() {
                if !monoid.contains(f.image()) {
                    report.fail(format!(
                        "sample {s}: lifted map {f} for {l} lies outside the translation monoid"
                    ));
                }
            }
            if !is_s_determined(&a, &l, &set)?.determined {
                report.fail(format!("sample {s}: lifted set fails to determine {l}"));
            }
            let bound = index_bound_check(&a, &l, &set)?;
            if !bound.holds {
                report.fail(format!(
                    "sample {s}: index bound violated for {l}: {} classes vs {} maps",
                    bound.class_count, bound.set_size
                ));
            }
            let minimal = minimal_determining_subset(&a, &l, &set)?;
            if minimal.len() > set.len() {
                report.fail(format!("sample {s}: minimization grew the set for {l}"));
            }
            if !is_s_determined(&a, &l, &minimal)?.determined {
                report.fail(format!(
                    "sample {s}: minimized set fails to determine {l}"
                ));
            }
        }
    }
    Ok(report)
}

/// Exercise term splitting on random terms: with the two pinned values
/// substituted for the before/after variables, the end splits evaluate
/// like the original term and consecutive splits agree on the crossover,
/// while every split stays linear in the moving variable.
pub fn linearization_sweep(samples: usize, seed: u64) -> Result<SweepReport> {
    let mut report = SweepReport::new("linearization");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        report.samples += 1;
        let n = rng.random_range(2..=4);
        let a = random_binary_algebra(&format!("r{s}"), n, &mut rng);
        let t = random_term(&mut rng, 3, "x1", 1, 3);
        let r = t.count_occurrences("x1");
        let lin = linearize(&t, "x1")?;
        report.checks += 1;
        if lin.terms.len() != r {
            report.fail(format!("sample {s}: {r} occurrences but {} splits", lin.terms.len()));
            continue;
        }
        if let Some(bad) = lin.terms.iter().find(|st| !st.is_linear_in(&lin.x)) {
            report.fail(format!("sample {s}: split {bad} is not linear in {}", lin.x));
            continue;
        }
        let mut v = Assignment::new();
        for var in t.variables() {
            if var != "x1" {
                v.set(var, rng.random_range(0..n));
            }
        }
        let first = rng.random_range(0..n);
        let second = rng.random_range(0..n);
        let ctx = v.extended(&lin.y, first).extended(&lin.z, second);
        let t_first = eval_term(&a, &t, &v.extended("x1", first))?;
        let t_second = eval_term(&a, &t, &v.extended("x1", second))?;
        let split_at = |i: usize, b: usize| -> Result<usize> {
            eval_term(&a, &lin.terms[i], &ctx.extended(&lin.x, b))
        };
        if split_at(0, second)? != t_second {
            report.fail(format!("sample {s}: first split disagrees with the term"));
        }
        if split_at(r - 1, first)? != t_first {
            report.fail(format!("sample {s}: last split disagrees with the term"));
        }
        for i in 0..r - 1 {
            if split_at(i, first)? != split_at(i + 1, second)? {
                report.fail(format!("sample {s}: splits {i} and {} disagree", i + 1));
            }
        }
    }
    Ok(report)
}

/// For algebras whose single operation returns a constant, the syntactic
/// congruence of every subset is exactly the two-block partition of that
/// subset against its complement. Checked for all carriers 2…6 and all
/// subsets.
pub fn constant_op_sweep() -> Result<SweepReport> {
    let mut report = SweepReport::new("constant-op");
    for n in 2..=6usize {
        for value in 0..n {
            report.samples += 1;
            let a = samples::constant_op(n, value);
            for l in SubsetL::all_subsets(n) {
                report.checks += 1;
                let analysis = syntactic_congruence(&a, &l)?;
                let expected = Partition::from_subset(&l);
                if analysis.congruence.partition() != &expected {
                    report.fail(format!(
                        "carrier {n}, value {value}: syntactic congruence of {l} is {}, expected {expected}",
                        analysis.congruence.partition()
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// A random associative table: small carriers are rejection-sampled, larger
/// ones draw from constructive families (cyclic, one-generated with chosen
/// tail and cycle lengths, left/right-zero, constant, chain meet), all
/// relabeled by a random permutation so tables look arbitrary.
pub fn random_semigroup(rng: &mut impl Rng, n: usize) -> FiniteAlgebra {
    fn associative(a: &FiniteAlgebra) -> bool {
        let n = a.carrier_size();
        for x in 0..n {
            for y in 0..n {
                let xy = a.eval_indexed(0, &[x, y]);
                for z in 0..n {
                    let yz = a.eval_indexed(0, &[y, z]);
                    if a.eval_indexed(0, &[xy, z]) != a.eval_indexed(0, &[x, yz]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    let sig = Signature::new([("f", 2)]).unwrap();
    let base = match rng.random_range(0..7usize) {
        0 if n <= 3 => {
            // Rejection sampling is fast enough below carrier 4.
            loop {
                let a = random_binary_algebra("rs", n, rng);
                if associative(&a) {
                    break a;
                }
            }
        }
        0 | 1 => samples::cyclic(n),
        2 => {
            let table = (0..n * n).map(|i| i / n).collect();
            FiniteAlgebra::new("leftzero", sig.clone(), n, vec![table]).unwrap()
        }
        3 => {
            let table = (0..n * n).map(|i| i % n).collect();
            FiniteAlgebra::new("rightzero", sig.clone(), n, vec![table]).unwrap()
        }
        4 => {
            let c = rng.random_range(0..n);
            samples::constant_op(n, c)
        }
        5 => {
            let mut table = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    table.push(x.min(y));
                }
            }
            FiniteAlgebra::new("chain", sig.clone(), n, vec![table]).unwrap()
        }
        _ => {
            // One-generated: exponents 1…n with tail length `index − 1`
            // before a cycle of length `period`.
            let period = rng.random_range(1..=n);
            let index = n + 1 - period;
            let reduce = |e: usize| {
                if e <= n {
                    e
                } else {
                    index + ((e - index) % period)
                }
            };
            let mut table = Vec::with_capacity(n * n);
            for x in 1..=n {
                for y in 1..=n {
                    table.push(reduce(x + y) - 1);
                }
            }
            FiniteAlgebra::new("monogenic", sig.clone(), n, vec![table]).unwrap()
        }
    };
    let relabeled = permuted_algebra(&base, &random_permutation(rng, n)).unwrap();
    debug_assert!(associative(&relabeled));
    relabeled
}

/// Check idempotent powers against brute force on random associative
/// tables: the computed `a^ω` must be the unique idempotent among the
/// powers of `a`, factorial powers must match step-by-step multiplication,
/// and every factorial at or beyond the carrier size must land on `a^ω`.
pub fn omega_sweep(samples: usize, seed: u64) -> Result<SweepReport> {
    let mut report = SweepReport::new("omega");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        report.samples += 1;
        let n = rng.random_range(2..=5);
        let a = random_semigroup(&mut rng, n);
        let elem = rng.random_range(0..n);
        let omega = omega_power(&a, elem, OmegaExponent::Omega)?;
        report.checks += 1;

        let mul = |x: usize, y: usize| a.eval_indexed(0, &[x, y]);
        let mut powers = vec![elem];
        for _ in 0..2 * n {
            let next = mul(*powers.last().unwrap(), elem);
            powers.push(next);
        }
        let mut distinct = powers.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let idempotents: Vec<usize> =
            distinct.iter().copied().filter(|&v| mul(v, v) == v).collect();
        if idempotents != vec![omega] {
            report.fail(format!(
                "sample {s}: powers of {elem} have idempotents {idempotents:?}, computed omega {omega}"
            ));
        }

        for nt in n as u64..=(n as u64 + 2) {
            let factorial: u64 = (2..=nt).product();
            let mut brute = elem;
            for _ in 1..factorial {
                brute = mul(brute, elem);
            }
            let fast = omega_power(&a, elem, OmegaExponent::Factorial(nt))?;
            if fast != brute {
                report.fail(format!(
                    "sample {s}: {elem}^{nt}! is {fast} by reduction but {brute} by brute force"
                ));
            }
            if fast != omega {
                report.fail(format!(
                    "sample {s}: {elem}^{nt}! = {fast} differs from omega {omega}"
                ));
            }
        }
        let big = omega_power(&a, elem, OmegaExponent::Factorial(1_000_003))?;
        if big != omega {
            report.fail(format!("sample {s}: huge factorial power missed omega"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_sweep_agrees() {
        let r = oracle_sweep(40, 4, 0x5EED_0201).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.samples, 40);
        assert!(r.checks >= 40 * 4);
    }

    #[test]
    fn pullback_sweep_holds() {
        let r = pullback_sweep(25, 0x5EED_0202).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn determining_set_sweep_holds() {
        let r = determining_set_sweep(40, 0x5EED_0203).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn linearization_sweep_holds() {
        let r = linearization_sweep(120, 0x5EED_0204).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.samples, 120);
    }

    #[test]
    fn constant_op_sweep_holds() {
        let r = constant_op_sweep().unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.samples, 2 + 3 + 4 + 5 + 6);
    }

    #[test]
    fn random_semigroups_are_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0205);
        for _ in 0..60 {
            let n = rng.random_range(2..=5);
            let a = random_semigroup(&mut rng, n);
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let xy = a.eval_indexed(0, &[x, y]);
                        let yz = a.eval_indexed(0, &[y, z]);
                        assert_eq!(a.eval_indexed(0, &[xy, z]), a.eval_indexed(0, &[x, yz]));
                    }
                }
            }
        }
    }

    #[test]
    fn omega_sweep_holds() {
        let r = omega_sweep(30, 0x5EED_0206).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn sweep_reports_serialize() {
        let r = constant_op_sweep().unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["label"], "constant-op");
        assert_eq!(json["failures"], serde_json::json!([]));
    }
}
