use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{parse_algebra, serialize_algebra, AlgFile, FiniteAlgebra};
use crate::congruence::{largest_congruence_saturating, Congruence};
use crate::error::{Error, InternalError, Result};
use crate::homomorphism::Homomorphism;
use crate::partition::Partition;
use crate::subset::SubsetL;
use crate::syntactic::{
    classical_term_set, determining_set_from_quotient, is_s_determined, is_term_determined,
    minimal_determining_subset, syntactic_congruence, term_instance_set,
};
use crate::term::Term;
use crate::translations::{elementary_translations, Provenance};

/// A finite inverse system: algebras `A_1, …, A_d` over one signature with
/// connecting maps `A_{k+1} → A_k`. Level 1 is the coarsest, level `d` the
/// finest; levels are addressed 1-based throughout.
///
/// Construction validates only structure (depth, array lengths, element
/// ranges, matching signatures). Whether the connecting maps really are
/// surjective homomorphisms is checked by [`InverseSystem::validate`], so a
/// broken system can be loaded, inspected, and diagnosed.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseSystem {
    name: String,
    levels: Vec<AlgFile>,
    connecting: Vec<Vec<usize>>,
}

/// Diagnostics for one connecting map.
#[derive(Debug, Clone, Serialize)]
pub struct MapDiagnostic {
    pub upper: usize,
    pub lower: usize,
    pub homomorphism: bool,
    pub surjective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Diagnostics for a whole system: one entry per connecting map, in order.
#[derive(Debug, Clone, Serialize)]
pub struct SystemDiagnostics {
    pub checks: Vec<MapDiagnostic>,
}

impl SystemDiagnostics {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.homomorphism && c.surjective)
    }

    pub fn first_failure(&self) -> Option<&MapDiagnostic> {
        self.checks.iter().find(|c| !c.homomorphism || !c.surjective)
    }
}

impl InverseSystem {
    pub fn new(
        name: impl Into<String>,
        levels: Vec<FiniteAlgebra>,
        connecting: Vec<Vec<usize>>,
    ) -> Result<Self> {
        InverseSystem::from_parts(
            name,
            levels
                .into_iter()
                .map(|algebra| AlgFile {
                    algebra,
                    subsets: Vec::new(),
                })
                .collect(),
            connecting,
        )
    }

    pub fn from_parts(
        name: impl Into<String>,
        levels: Vec<AlgFile>,
        connecting: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidSystem("a system needs at least one level".into()));
        }
        if connecting.len() + 1 != levels.len() {
            return Err(Error::InvalidSystem(format!(
                "{} levels need {} connecting maps, found {}",
                levels.len(),
                levels.len() - 1,
                connecting.len()
            )));
        }
        let sig = levels[0].algebra.signature();
        for (i, l) in levels.iter().enumerate() {
            if l.algebra.signature() != sig {
                return Err(Error::InvalidSystem(format!(
                    "level {} signature differs from level 1",
                    i + 1
                )));
            }
        }
        for (i, map) in connecting.iter().enumerate() {
            let upper = levels[i + 1].algebra.carrier_size();
            let lower = levels[i].algebra.carrier_size();
            if map.len() != upper {
                return Err(Error::InvalidSystem(format!(
                    "map {} {} expects {} entries, found {}",
                    i + 2,
                    i + 1,
                    upper,
                    map.len()
                )));
            }
            if let Some(&v) = map.iter().find(|&&v| v >= lower) {
                return Err(Error::InvalidSystem(format!(
                    "map {} {} entry {} out of range for carrier of size {}",
                    i + 2,
                    i + 1,
                    v,
                    lower
                )));
            }
        }
        Ok(InverseSystem {
            name: name.into(),
            levels,
            connecting,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> Result<&FiniteAlgebra> {
        if k == 0 || k > self.depth() {
            return Err(Error::LevelOutOfRange {
                level: k,
                depth: self.depth(),
            });
        }
        Ok(&self.levels[k - 1].algebra)
    }

    pub fn level_file(&self, k: usize) -> Result<&AlgFile> {
        if k == 0 || k > self.depth() {
            return Err(Error::LevelOutOfRange {
                level: k,
                depth: self.depth(),
            });
        }
        Ok(&self.levels[k - 1])
    }

    /// The raw image array of the map from level `upper` to `upper − 1`.
    pub fn connecting_raw(&self, upper: usize) -> Result<&[usize]> {
        if upper < 2 || upper > self.depth() {
            return Err(Error::LevelOutOfRange {
                level: upper,
                depth: self.depth(),
            });
        }
        Ok(&self.connecting[upper - 2])
    }

    /// Check every connecting map for the homomorphism property and
    /// surjectivity; all maps are checked so a report can show every
    /// defect, not just the first.
    pub fn validate(&self) -> SystemDiagnostics {
        let mut checks = Vec::new();
        for i in 0..self.connecting.len() {
            let upper = &self.levels[i + 1].algebra;
            let lower = &self.levels[i].algebra;
            let (homomorphism, surjective, detail) = match Homomorphism::new(
                upper.clone(),
                lower.clone(),
                self.connecting[i].clone(),
            ) {
                Ok(h) => {
                    let s = h.is_surjective();
                    let d = (!s).then(|| "map is not surjective".to_string());
                    (true, s, d)
                }
                Err(e) => (false, false, Some(e.to_string())),
            };
            checks.push(MapDiagnostic {
                upper: i + 2,
                lower: i + 1,
                homomorphism,
                surjective,
                detail,
            });
        }
        SystemDiagnostics { checks }
    }

    /// Error out (with the first diagnostic) unless every connecting map is
    /// a surjective homomorphism.
    pub fn require_valid(&self) -> Result<()> {
        let diag = self.validate();
        if let Some(bad) = diag.first_failure() {
            return Err(Error::InvalidSystem(format!(
                "map {} {}: {}",
                bad.upper,
                bad.lower,
                bad.detail.clone().unwrap_or_else(|| "invalid".into())
            )));
        }
        Ok(())
    }

    /// The projection `A_m → A_k` (`m ≥ k`) obtained by composing the
    /// connecting maps; built as a checked homomorphism.
    pub fn projection(&self, m: usize, k: usize) -> Result<Homomorphism> {
        if m == 0 || m > self.depth() {
            return Err(Error::LevelOutOfRange {
                level: m,
                depth: self.depth(),
            });
        }
        if k == 0 || k > m {
            return Err(Error::LevelOutOfRange {
                level: k,
                depth: self.depth(),
            });
        }
        let am = &self.levels[m - 1].algebra;
        let ak = &self.levels[k - 1].algebra;
        let mut image: Vec<usize> = (0..am.carrier_size()).collect();
        for lvl in ((k + 1)..=m).rev() {
            let map = &self.connecting[lvl - 2];
            image = image.into_iter().map(|v| map[v]).collect();
        }
        Homomorphism::new(am.clone(), ak.clone(), image)
    }
}

/// One element per level, coherent with the connecting maps: the value at
/// level `k` is the image of the value at level `k+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    values: Vec<usize>,
}

impl Thread {
    pub fn new(sys: &InverseSystem, values: Vec<usize>) -> Result<Self> {
        if values.len() != sys.depth() {
            return Err(Error::LengthMismatch {
                expected: sys.depth(),
                got: values.len(),
            });
        }
        for (i, &v) in values.iter().enumerate() {
            let n = sys.levels[i].algebra.carrier_size();
            if v >= n {
                return Err(Error::ElementOutOfRange { value: v, carrier: n });
            }
        }
        for upper in 2..=sys.depth() {
            if sys.connecting[upper - 2][values[upper - 1]] != values[upper - 2] {
                return Err(Error::IncoherentThread { level: upper });
            }
        }
        Ok(Thread { values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn at(&self, level: usize) -> usize {
        self.values[level - 1]
    }
}

/// The first (coarsest) level at which two threads differ, if any. Two
/// threads of the same finite system are equal iff no level separates them.
pub fn separate_points(t1: &Thread, t2: &Thread) -> Result<Option<usize>> {
    if t1.values.len() != t2.values.len() {
        return Err(Error::LengthMismatch {
            expected: t1.values.len(),
            got: t2.values.len(),
        });
    }
    Ok(t1
        .values
        .iter()
        .zip(&t2.values)
        .position(|(a, b)| a != b)
        .map(|i| i + 1))
}

/// A basic open-and-closed set of the limit: all threads whose level-`k`
/// value lies in a chosen subset of `A_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderSet {
    pub level: usize,
    pub subset: SubsetL,
}

impl CylinderSet {
    pub fn new(sys: &InverseSystem, level: usize, indices: &[usize]) -> Result<Self> {
        let algebra = sys.level(level)?;
        Ok(CylinderSet {
            level,
            subset: SubsetL::from_indices(algebra.carrier_size(), indices)?,
        })
    }

    pub fn contains(&self, t: &Thread) -> bool {
        self.subset.contains(t.at(self.level))
    }
}

/// How a cylinder set is recognized at one level of the system: the lifted
/// cylinder, the composed map into the recognizer, and whether membership
/// is exactly the preimage of the recognized image.
#[derive(Debug, Clone)]
pub struct RecognitionLevel {
    pub level: usize,
    pub cylinder: SubsetL,
    pub into_recognizer: Homomorphism,
    pub identity_holds: bool,
}

/// A finite recognizer for a cylinder set: the syntactic quotient of its
/// base subset, plus the per-level verification that the cylinder at every
/// finer level is the preimage of the recognized image.
#[derive(Debug, Clone)]
pub struct ClopenRecognition {
    pub base_level: usize,
    pub recognizer: FiniteAlgebra,
    pub eta: Homomorphism,
    pub image: SubsetL,
    pub levels: Vec<RecognitionLevel>,
}

/// Recognize a cylinder set through a single finite quotient: take the
/// syntactic quotient `B = A_k/σ` of the base subset, and check that at
/// every level `m ≥ k` the lifted cylinder `π_{m→k}⁻¹(S)` equals the
/// preimage of `η(S)` under `η ∘ π_{m→k}`. The equality is a theorem
/// (saturation transports along the projections), so a failure is internal.
pub fn recognize_clopen(sys: &InverseSystem, cyl: &CylinderSet) -> Result<ClopenRecognition> {
    sys.require_valid()?;
    let base = sys.level(cyl.level)?;
    if cyl.subset.carrier_size() != base.carrier_size() {
        return Err(Error::LengthMismatch {
            expected: base.carrier_size(),
            got: cyl.subset.carrier_size(),
        });
    }
    let analysis = syntactic_congruence(base, &cyl.subset)?;
    let image = cyl
        .subset
        .image_under(analysis.eta.image(), analysis.quotient.carrier_size());
    let mut levels = Vec::new();
    for m in cyl.level..=sys.depth() {
        let pi = sys.projection(m, cyl.level)?;
        let phi = pi.then(&analysis.eta)?;
        let cylinder = cyl.subset.preimage(pi.image());
        let back = image.preimage(phi.image());
        let identity_holds = back == cylinder;
        if !identity_holds {
            return Err(InternalError::RecognitionFailed { level: m }.into());
        }
        levels.push(RecognitionLevel {
            level: m,
            cylinder,
            into_recognizer: phi,
            identity_holds,
        });
    }
    Ok(ClopenRecognition {
        base_level: cyl.level,
        recognizer: analysis.quotient,
        eta: analysis.eta,
        image,
        levels,
    })
}

/// The syntactic congruence of a cylinder set viewed at a finer level `m`:
/// the syntactic congruence of `π_{m→k}⁻¹(S)` in `A_m`.
///
/// Two consequences of the pullback identity are verified along the way:
/// the result equals the pullback of the base congruence through the
/// projection, and the projection's kernel is contained in it.
pub fn cylinder_syntactic(
    sys: &InverseSystem,
    cyl: &CylinderSet,
    m: usize,
) -> Result<Congruence> {
    sys.require_valid()?;
    if m < cyl.level || m > sys.depth() {
        return Err(Error::LevelOutOfRange {
            level: m,
            depth: sys.depth(),
        });
    }
    let pi = sys.projection(m, cyl.level)?;
    let lifted = cyl.subset.preimage(pi.image());
    let upper = syntactic_congruence(sys.level(m)?, &lifted)?;
    let base = syntactic_congruence(sys.level(cyl.level)?, &cyl.subset)?;
    let pullback = Partition::from_class_ids(
        pi.image()
            .iter()
            .map(|&v| base.congruence.partition().class_of(v))
            .collect(),
    );
    if &pullback != upper.congruence.partition() {
        let (x, y) = pullback
            .first_disagreement(upper.congruence.partition())
            .expect("distinct partitions disagree somewhere");
        return Err(InternalError::PullbackMismatch(x, y).into());
    }
    let kernel = pi.kernel();
    if !upper.congruence.partition().is_coarser_or_equal(&kernel) {
        let witness = kernel
            .first_disagreement(upper.congruence.partition())
            .expect("containment failure has a witness");
        return Err(InternalError::KernelNotContained { witness }.into());
    }
    Ok(upper.congruence)
}

/// The meet of the syntactic congruences of a family of blocks that
/// partition the carrier. The result saturates every block — each block is
/// a union of classes — which is re-verified rather than assumed.
pub fn partition_meet_congruence(a: &FiniteAlgebra, blocks: &[SubsetL]) -> Result<Congruence> {
    if blocks.is_empty() {
        return Err(Error::NotAPartitionOfCarrier("no blocks given".into()));
    }
    let n = a.carrier_size();
    let mut count = vec![0usize; n];
    for b in blocks {
        if b.carrier_size() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: b.carrier_size(),
            });
        }
        for e in 0..n {
            if b.contains(e) {
                count[e] += 1;
            }
        }
    }
    for (e, &c) in count.iter().enumerate() {
        if c == 0 {
            return Err(Error::NotAPartitionOfCarrier(format!(
                "element {e} is not covered"
            )));
        }
        if c > 1 {
            return Err(Error::NotAPartitionOfCarrier(format!(
                "element {e} appears in {c} blocks"
            )));
        }
    }
    let mut theta: Option<Congruence> = None;
    for b in blocks {
        let c = largest_congruence_saturating(a, b)?;
        theta = Some(match theta {
            None => c,
            Some(t) => t.meet(&c)?,
        });
    }
    let theta = theta.expect("at least one block");
    for (i, b) in blocks.iter().enumerate() {
        if !theta.saturates(b) {
            return Err(InternalError::MeetDoesNotSaturate { block: i }.into());
        }
    }
    Ok(theta)
}

/// Exponent selector for [`omega_power`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaExponent {
    /// `a` raised to `n!` — factorials are cofinal, so these powers
    /// stabilize on the idempotent as `n` grows.
    Factorial(u64),
    /// The idempotent power `a^ω`: the unique idempotent among the powers.
    Omega,
}

fn single_associative_binary(a: &FiniteAlgebra) -> Result<usize> {
    let binaries = a.signature().of_arity(2);
    let other = a
        .signature()
        .symbols()
        .iter()
        .filter(|s| s.arity != 0 && s.arity != 2)
        .count();
    if binaries.len() != 1 || other != 0 {
        return Err(Error::NotASemigroupSignature(binaries.len()));
    }
    let op = binaries[0];
    let n = a.carrier_size();
    for x in 0..n {
        for y in 0..n {
            let xy = a.eval_indexed(op, &[x, y]);
            for z in 0..n {
                let yz = a.eval_indexed(op, &[y, z]);
                if a.eval_indexed(op, &[xy, z]) != a.eval_indexed(op, &[x, yz]) {
                    return Err(Error::NotAssociative(
                        a.signature().symbols()[op].name.clone(),
                    ));
                }
            }
        }
    }
    Ok(op)
}

/// Powers of an element of a finite semigroup (one associative binary
/// operation; constants allowed): `a^{n!}` computed through the index and
/// period of the power sequence — never by forming `n!` — and `a^ω`, the
/// unique idempotent power.
pub fn omega_power(a: &FiniteAlgebra, elem: usize, exponent: OmegaExponent) -> Result<usize> {
    let op = single_associative_binary(a)?;
    if elem >= a.carrier_size() {
        return Err(Error::ElementOutOfRange {
            value: elem,
            carrier: a.carrier_size(),
        });
    }
    // Walk a, a², a³, … until the first repeat: powers[t] = a^{t+1}; the
    // sequence has pairwise-distinct values a^1 … a^{i+p−1} with
    // a^{i+p} = a^i (index i, period p).
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut powers: Vec<usize> = Vec::new();
    let mut cur = elem;
    let mut e = 1usize;
    let (index, period) = loop {
        if let Some(&first) = seen.get(&cur) {
            break (first, e - first);
        }
        seen.insert(cur, e);
        powers.push(cur);
        cur = a.eval_indexed(op, &[cur, elem]);
        e += 1;
    };

    match exponent {
        OmegaExponent::Omega => {
            let idempotents: Vec<usize> = powers
                .iter()
                .copied()
                .filter(|&v| a.eval_indexed(op, &[v, v]) == v)
                .collect();
            if idempotents.len() != 1 {
                return Err(InternalError::IdempotentNotUnique(idempotents.len()).into());
            }
            Ok(idempotents[0])
        }
        OmegaExponent::Factorial(n) => {
            // Exact n! while it stays at most index+period; beyond that
            // only the residue modulo the period matters.
            let cap = (index + period) as u128;
            let mut exact: u128 = 1;
            let mut beyond = false;
            let mut j = 2u128;
            while j <= n as u128 {
                exact *= j;
                if exact > cap {
                    beyond = true;
                    break;
                }
                j += 1;
            }
            let t = if !beyond {
                let e = exact as usize;
                if e < index {
                    e
                } else {
                    index + ((e - index) % period)
                }
            } else {
                // n! mod period: zero once n reaches the period.
                let m = if n as u128 >= period as u128 {
                    0
                } else {
                    let mut r = 1usize;
                    for j in 2..=(n as usize) {
                        r = (r * j) % period;
                    }
                    r
                };
                index + ((m + period - (index % period)) % period)
            };
            Ok(powers[t - 1])
        }
    }
}

/// Levelwise quotient of a system by one congruence per level, together
/// with the per-level projections. The congruences must be compatible with
/// the connecting maps (related elements stay related after mapping down);
/// the quotient system's own validity is re-verified at the end.
#[derive(Debug, Clone)]
pub struct QuotientSystem {
    pub system: InverseSystem,
    pub projections: Vec<Homomorphism>,
}

pub fn quotient_system(sys: &InverseSystem, thetas: &[Congruence]) -> Result<QuotientSystem> {
    sys.require_valid()?;
    if thetas.len() != sys.depth() {
        return Err(Error::LengthMismatch {
            expected: sys.depth(),
            got: thetas.len(),
        });
    }
    for (i, th) in thetas.iter().enumerate() {
        if th.algebra() != &sys.levels[i].algebra {
            return Err(Error::AlgebraMismatch);
        }
    }
    // Compatibility: θ_{k+1}-related elements map to θ_k-related images.
    for upper in 2..=sys.depth() {
        let fine = thetas[upper - 1].partition();
        let coarse = thetas[upper - 2].partition();
        let map = &sys.connecting[upper - 2];
        let n = fine.len();
        for x in 0..n {
            for y in (x + 1)..n {
                if fine.same(x, y) && !coarse.same(map[x], map[y]) {
                    return Err(Error::IncompatibleCongruences {
                        level: upper,
                        witness: (x, y),
                    });
                }
            }
        }
    }
    let mut q_levels = Vec::with_capacity(sys.depth());
    let mut projections = Vec::with_capacity(sys.depth());
    for th in thetas {
        let (q, proj) = th.quotient()?;
        q_levels.push(q);
        projections.push(proj);
    }
    let mut q_connecting = Vec::with_capacity(sys.depth().saturating_sub(1));
    for upper in 2..=sys.depth() {
        let fine_classes = thetas[upper - 1].partition().classes();
        let map = &sys.connecting[upper - 2];
        let coarse = thetas[upper - 2].partition();
        let induced: Vec<usize> = fine_classes
            .iter()
            .map(|c| coarse.class_of(map[c[0]]))
            .collect();
        q_connecting.push(induced);
    }
    let system = InverseSystem::new(format!("{}_q", sys.name()), q_levels, q_connecting)?;
    let diag = system.validate();
    if !diag.ok() {
        let bad = diag.first_failure().expect("failing diagnostics");
        return Err(InternalError::QuotientSystemInvalid(format!(
            "map {} {}: {}",
            bad.upper,
            bad.lower,
            bad.detail.clone().unwrap_or_default()
        ))
        .into());
    }
    // The quotient square commutes: projecting then connecting equals
    // connecting then projecting.
    for upper in 2..=sys.depth() {
        let map = &sys.connecting[upper - 2];
        let qmap = system.connecting_raw(upper)?;
        for x in 0..map.len() {
            let down_then_project = projections[upper - 2].apply(map[x]);
            let project_then_down = qmap[projections[upper - 1].apply(x)];
            if down_then_project != project_then_down {
                return Err(InternalError::QuotientSystemInvalid(format!(
                    "square does not commute at level {upper}, element {x}"
                ))
                .into());
            }
        }
    }
    Ok(QuotientSystem {
        system,
        projections,
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parse the line-oriented system format:
///
/// ```text
/// system <name>
/// depth <d>
/// <d algebra blocks, each in the algebra file format>
/// map 2 1
/// <entries: one per element of level 2, images in level 1>
/// map 3 2
/// …
/// ```
///
/// Map blocks must appear in ascending order. `#` comments as usual.
pub fn parse_system(text: &str) -> Result<InverseSystem> {
    let lines: Vec<&str> = text.lines().collect();
    let significant = |raw: &str| -> Vec<String> {
        raw.split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .map(|s| s.to_string())
            .collect()
    };

    let mut idx = 0;
    let next_tokens = |idx: &mut usize| -> Option<(usize, Vec<String>)> {
        while *idx < lines.len() {
            let toks = significant(lines[*idx]);
            *idx += 1;
            if !toks.is_empty() {
                return Some((*idx, toks));
            }
        }
        None
    };

    let (ln, toks) = next_tokens(&mut idx).ok_or_else(|| parse_err(1, "empty file"))?;
    if toks[0] != "system" || toks.len() < 2 {
        return Err(parse_err(ln, "expected `system <name>`"));
    }
    let name = toks[1].clone();
    let (ln, toks) = next_tokens(&mut idx).ok_or_else(|| parse_err(ln, "missing `depth`"))?;
    if toks[0] != "depth" || toks.len() < 2 {
        return Err(parse_err(ln, "expected `depth <d>`"));
    }
    let depth: usize = toks[1]
        .parse()
        .map_err(|_| parse_err(ln, format!("depth `{}` is not a number", toks[1])))?;
    if depth == 0 {
        return Err(parse_err(ln, "depth must be at least 1"));
    }

    // Segment the remaining lines: `algebra` and `map` open new blocks.
    enum Segment {
        Algebra { start: usize, lines: Vec<String> },
        Map { start: usize, upper: usize, lower: usize, tokens: Vec<(usize, String)> },
    }
    let mut segments: Vec<Segment> = Vec::new();
    while idx < lines.len() {
        let raw = lines[idx];
        let ln = idx + 1;
        let toks = significant(raw);
        idx += 1;
        if toks.is_empty() {
            continue;
        }
        match toks[0].as_str() {
            "algebra" => segments.push(Segment::Algebra {
                start: ln,
                lines: vec![raw.to_string()],
            }),
            "map" => {
                if toks.len() < 3 {
                    return Err(parse_err(ln, "expected `map <upper> <lower>`"));
                }
                let upper: usize = toks[1]
                    .parse()
                    .map_err(|_| parse_err(ln, format!("level `{}` is not a number", toks[1])))?;
                let lower: usize = toks[2]
                    .parse()
                    .map_err(|_| parse_err(ln, format!("level `{}` is not a number", toks[2])))?;
                let extra = toks[3..].iter().map(|t| (ln, t.clone())).collect();
                segments.push(Segment::Map {
                    start: ln,
                    upper,
                    lower,
                    tokens: extra,
                });
            }
            _ => match segments.last_mut() {
                Some(Segment::Algebra { lines, .. }) => lines.push(raw.to_string()),
                Some(Segment::Map { tokens, .. }) => {
                    for t in toks {
                        tokens.push((ln, t));
                    }
                }
                None => {
                    return Err(parse_err(
                        ln,
                        format!("expected `algebra` or `map`, found `{}`", toks[0]),
                    ))
                }
            },
        }
    }

    let mut levels: Vec<AlgFile> = Vec::new();
    let mut maps: Vec<(usize, usize, usize, Vec<(usize, String)>)> = Vec::new();
    for seg in segments {
        match seg {
            Segment::Algebra { start, lines } => {
                if !maps.is_empty() {
                    return Err(parse_err(start, "algebra blocks must precede map blocks"));
                }
                let file = parse_algebra(&lines.join("\n")).map_err(|e| match e {
                    Error::Parse { line, message } => parse_err(start + line - 1, message),
                    other => other,
                })?;
                levels.push(file);
            }
            Segment::Map {
                start,
                upper,
                lower,
                tokens,
            } => maps.push((start, upper, lower, tokens)),
        }
    }
    if levels.len() != depth {
        return Err(parse_err(
            lines.len(),
            format!("declared depth {depth} but found {} algebra blocks", levels.len()),
        ));
    }
    if maps.len() != depth - 1 {
        return Err(parse_err(
            lines.len(),
            format!(
                "depth {depth} needs {} map blocks, found {}",
                depth - 1,
                maps.len()
            ),
        ));
    }
    let mut connecting = Vec::with_capacity(depth.saturating_sub(1));
    for (i, (start, upper, lower, tokens)) in maps.into_iter().enumerate() {
        if upper != i + 2 || lower != i + 1 {
            return Err(parse_err(
                start,
                format!("expected `map {} {}`, found `map {upper} {lower}`", i + 2, i + 1),
            ));
        }
        let expected = levels[i + 1].algebra.carrier_size();
        if tokens.len() != expected {
            return Err(parse_err(
                start,
                format!(
                    "map {} {} expects {} entries, found {}",
                    upper,
                    lower,
                    expected,
                    tokens.len()
                ),
            ));
        }
        let mut entries = Vec::with_capacity(expected);
        for (ln, tok) in tokens {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err(ln, format!("map entry `{tok}` is not a number")))?;
            if v >= levels[i].algebra.carrier_size() {
                return Err(parse_err(
                    ln,
                    format!(
                        "map entry {v} out of range for carrier of size {}",
                        levels[i].algebra.carrier_size()
                    ),
                ));
            }
            entries.push(v);
        }
        connecting.push(entries);
    }
    InverseSystem::from_parts(name, levels, connecting)
}

/// Serialize to the canonical system format: algebra blocks in level order
/// (each canonical), then map blocks ascending, entries ten per line.
pub fn serialize_system(sys: &InverseSystem) -> String {
    let mut out = String::new();
    out.push_str(&format!("system {}\n", sys.name()));
    out.push_str(&format!("depth {}\n", sys.depth()));
    for level in &sys.levels {
        out.push_str(&serialize_algebra(level));
    }
    for upper in 2..=sys.depth() {
        out.push_str(&format!("map {} {}\n", upper, upper - 1));
        for chunk in sys.connecting[upper - 2].chunks(10) {
            let words: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
            out.push_str(&words.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Status of one condition in the determination report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    /// Verified here, with a witness.
    Holds,
    /// True for every finite algebra; nothing to compute.
    Trivial,
    /// Follows from another condition under the finiteness in force here.
    ImpliedBy { condition: u8 },
    /// Genuinely topological content with no finite representation here.
    OutOfScope,
}

/// Witness data attached to a condition.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionWitness {
    Saturation {
        classes: Vec<Vec<usize>>,
        subset_class_ids: Vec<usize>,
    },
    Recognition {
        recognizer: String,
        recognizer_size: usize,
        image: Vec<usize>,
        preimage_identity: bool,
    },
    Terms {
        terms: Vec<String>,
        distinguished: String,
        instance_count: usize,
        determined: bool,
    },
    Functions {
        size: usize,
        determined: bool,
        minimal_size: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionEntry {
    pub id: u8,
    pub status: ConditionStatus,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ConditionWitness>,
}

/// The ten-condition determination report for a subset of a finite algebra:
/// each condition in the classical equivalence list for recognizability is
/// either verified with a witness, trivially true in the finite setting,
/// implied by a verified condition, or marked as out of scope because its
/// content is topological.
#[derive(Debug, Clone, Serialize)]
pub struct DeterminationReport {
    pub algebra: String,
    pub carrier_size: usize,
    pub subset: Vec<usize>,
    pub class_count: usize,
    pub conditions: Vec<ConditionEntry>,
}

/// Rebuild a linear term from a composite word over the elementary
/// translations: wrap the distinguished variable `x1` with one operation
/// per step, introducing a fresh parameter variable for every frozen slot.
fn term_of_elementary_word(
    a: &FiniteAlgebra,
    word: &[usize],
    elementary: &[crate::translations::Transformation],
) -> Term {
    let mut t = Term::var("x1");
    let mut next_param = 2;
    for &j in word {
        let Provenance::Elementary {
            symbol, coordinate, ..
        } = elementary[j].provenance()
        else {
            unreachable!("elementary translations carry elementary provenance");
        };
        let arity = a
            .signature()
            .arity_of(symbol)
            .expect("symbol comes from this signature");
        let mut args = Vec::with_capacity(arity);
        for slot in 0..arity {
            if slot == *coordinate {
                args.push(t.clone());
            } else {
                args.push(Term::var(format!("x{next_param}")));
                next_param += 1;
            }
        }
        t = Term::apply(symbol.clone(), args);
    }
    t
}

pub fn determination_report(a: &FiniteAlgebra, l: &SubsetL) -> Result<DeterminationReport> {
    let analysis = syntactic_congruence(a, l)?;
    let class_count = analysis.congruence.class_count();
    let classes = analysis.congruence.partition().classes();
    let mut conditions = Vec::new();

    conditions.push(ConditionEntry {
        id: 1,
        status: ConditionStatus::Trivial,
        summary: format!(
            "the syntactic congruence has finitely many classes ({class_count} here); automatic on a finite carrier"
        ),
        witness: None,
    });

    let subset_class_ids: Vec<usize> = {
        let mut ids: Vec<usize> = l
            .indices()
            .into_iter()
            .map(|e| analysis.congruence.partition().class_of(e))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    };
    if !analysis.congruence.saturates(l) {
        return Err(InternalError::CertifyFailed(
            "syntactic congruence does not saturate its subset".into(),
        )
        .into());
    }
    conditions.push(ConditionEntry {
        id: 2,
        status: ConditionStatus::Holds,
        summary: "the subset is a union of syntactic classes".into(),
        witness: Some(ConditionWitness::Saturation {
            classes: classes.clone(),
            subset_class_ids,
        }),
    });

    for (id, what) in [
        (3u8, "openness of the congruence as an entourage of the limit"),
        (4u8, "each class clopen in the limit topology"),
        (5u8, "uniform continuity of the quotient morphism"),
    ] {
        conditions.push(ConditionEntry {
            id,
            status: ConditionStatus::OutOfScope,
            summary: format!("{what}: topological content not represented on finite data"),
            witness: None,
        });
    }

    let image = l.image_under(analysis.eta.image(), analysis.quotient.carrier_size());
    let back = image.preimage(analysis.eta.image());
    if back != *l {
        return Err(InternalError::RecognitionFailed { level: 0 }.into());
    }
    conditions.push(ConditionEntry {
        id: 6,
        status: ConditionStatus::Holds,
        summary: "recognized by a finite algebra: the subset is the preimage of its image under the quotient morphism".into(),
        witness: Some(ConditionWitness::Recognition {
            recognizer: analysis.quotient.name().to_string(),
            recognizer_size: analysis.quotient.carrier_size(),
            image: image.indices(),
            preimage_identity: true,
        }),
    });

    // Condition 7: a finite set of terms, each linear in x1. For a
    // semigroup, the classical four terms; otherwise terms rebuilt from the
    // provenance of the lifted determining set.
    let lifted = determining_set_from_quotient(a, l)?;
    let terms: Vec<Term> = if let Ok(op) = single_associative_binary(a) {
        classical_term_set(&a.signature().symbols()[op].name)
    } else {
        let elementary = elementary_translations(a);
        let mut ts: Vec<Term> = Vec::new();
        for f in lifted.functions() {
            let word = match f.provenance() {
                Provenance::Identity => Vec::new(),
                Provenance::Composite { generators } => generators.clone(),
                Provenance::Elementary { .. } => {
                    // A lift consisting of a single elementary step.
                    vec![elementary
                        .iter()
                        .position(|t| t.image() == f.image())
                        .expect("elementary lift appears in the elementary list")]
                }
                Provenance::TermInstance { .. } => {
                    unreachable!("lifts never carry term provenance")
                }
            };
            let t = term_of_elementary_word(a, &word, &elementary);
            if !ts.contains(&t) {
                ts.push(t);
            }
        }
        ts
    };
    let instance_set = term_instance_set(a, &terms, "x1")?;
    let term_check = is_term_determined(a, l, &terms, "x1")?;
    if !term_check.determined {
        return Err(InternalError::ConstructedSetNotDetermining {
            witness: term_check.witness.expect("failed check has a witness"),
        }
        .into());
    }
    conditions.push(ConditionEntry {
        id: 7,
        status: ConditionStatus::Holds,
        summary: "determined by finitely many terms, each linear in the distinguished variable".into(),
        witness: Some(ConditionWitness::Terms {
            terms: terms.iter().map(|t| t.to_string()).collect(),
            distinguished: "x1".into(),
            instance_count: instance_set.len(),
            determined: true,
        }),
    });

    let lifted_check = is_s_determined(a, l, &lifted)?;
    if !lifted_check.determined {
        return Err(InternalError::ConstructedSetNotDetermining {
            witness: lifted_check.witness.expect("failed check has a witness"),
        }
        .into());
    }
    let minimal = minimal_determining_subset(a, l, &lifted)?;
    conditions.push(ConditionEntry {
        id: 8,
        status: ConditionStatus::Holds,
        summary: "determined by a finite set of translation self-maps, lifted from the quotient's translation monoid".into(),
        witness: Some(ConditionWitness::Functions {
            size: lifted.len(),
            determined: true,
            minimal_size: minimal.len(),
        }),
    });

    conditions.push(ConditionEntry {
        id: 9,
        status: ConditionStatus::ImpliedBy { condition: 8 },
        summary: "determined by a finite set of continuous self-maps: every map on finite discrete data is continuous".into(),
        witness: None,
    });
    conditions.push(ConditionEntry {
        id: 10,
        status: ConditionStatus::ImpliedBy { condition: 8 },
        summary: "determined by a compact family of self-maps: finite sets are compact".into(),
        witness: None,
    });

    Ok(DeterminationReport {
        algebra: a.name().to_string(),
        carrier_size: a.carrier_size(),
        subset: l.indices(),
        class_count,
        conditions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn tower() -> InverseSystem {
        samples::power_tower()
    }

    #[test]
    fn tower_is_valid_and_projects() {
        let sys = tower();
        assert_eq!(sys.depth(), 3);
        assert!(sys.validate().ok());
        sys.require_valid().unwrap();
        let p31 = sys.projection(3, 1).unwrap();
        assert_eq!(p31.image(), &[0, 1, 0, 1, 0, 1, 0, 1]);
        let p22 = sys.projection(2, 2).unwrap();
        assert_eq!(p22.image(), &[0, 1, 2, 3]);
        assert!(sys.projection(1, 3).is_err());
        assert!(sys.projection(4, 1).is_err());
    }

    #[test]
    fn broken_map_diagnosed_but_loadable() {
        let levels = vec![samples::cyclic(2), samples::cyclic(4)];
        // Constant map kills surjectivity and the homomorphism property.
        let sys = InverseSystem::new("bad", levels, vec![vec![1, 1, 1, 1]]).unwrap();
        let diag = sys.validate();
        assert!(!diag.ok());
        let first = diag.first_failure().unwrap();
        assert_eq!((first.upper, first.lower), (2, 1));
        assert!(!first.homomorphism);
        assert!(sys.require_valid().is_err());
    }

    #[test]
    fn structural_errors_at_construction() {
        assert!(matches!(
            InverseSystem::new("e", vec![], vec![]),
            Err(Error::InvalidSystem(_))
        ));
        assert!(matches!(
            InverseSystem::new(
                "e",
                vec![samples::cyclic(2), samples::cyclic(4)],
                vec![vec![0, 1]],
            ),
            Err(Error::InvalidSystem(_))
        ));
        assert!(matches!(
            InverseSystem::new(
                "e",
                vec![samples::cyclic(2), samples::two_element_semilattice()],
                vec![vec![0, 1]],
            ),
            Err(Error::InvalidSystem(_))
        ));
    }

    #[test]
    fn threads_and_separation() {
        let sys = tower();
        let t1 = Thread::new(&sys, vec![1, 3, 7]).unwrap();
        let t2 = Thread::new(&sys, vec![1, 3, 3]).unwrap();
        let t3 = Thread::new(&sys, vec![1, 1, 5]).unwrap();
        assert_eq!(separate_points(&t1, &t2).unwrap(), Some(3));
        assert_eq!(separate_points(&t1, &t3).unwrap(), Some(2));
        assert_eq!(separate_points(&t1, &t1).unwrap(), None);
        assert!(matches!(
            Thread::new(&sys, vec![0, 3, 7]),
            Err(Error::IncoherentThread { level: 2 })
        ));
        assert!(matches!(
            Thread::new(&sys, vec![1, 3]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            Thread::new(&sys, vec![1, 3, 9]),
            Err(Error::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn recognize_evens_cylinder() {
        let sys = tower();
        // Evens at level 2 (inside the four-element cyclic group).
        let cyl = CylinderSet::new(&sys, 2, &[0, 2]).unwrap();
        let rec = recognize_clopen(&sys, &cyl).unwrap();
        assert_eq!(rec.recognizer.carrier_size(), 2);
        assert_eq!(rec.image.indices(), vec![0]);
        assert_eq!(rec.levels.len(), 2);
        for lvl in &rec.levels {
            assert!(lvl.identity_holds);
        }
        // At level 3 the lifted cylinder is the evens of the eight-element
        // group.
        assert_eq!(rec.levels[1].cylinder.indices(), vec![0, 2, 4, 6]);
    }

    #[test]
    fn recognition_covers_every_subset_of_the_tower() {
        let sys = tower();
        for k in 1..=3usize {
            let n = sys.level(k).unwrap().carrier_size();
            for l in SubsetL::all_subsets(n) {
                let cyl = CylinderSet {
                    level: k,
                    subset: l,
                };
                let rec = recognize_clopen(&sys, &cyl).unwrap();
                assert!(rec.levels.iter().all(|lv| lv.identity_holds));
            }
        }
    }

    #[test]
    fn cylinder_syntactic_pullback() {
        let sys = tower();
        let cyl = CylinderSet::new(&sys, 1, &[0]).unwrap();
        let c3 = cylinder_syntactic(&sys, &cyl, 3).unwrap();
        // Parity at level 3: evens vs odds of the eight-element group.
        assert_eq!(c3.partition().to_string(), "{0,2,4,6}/{1,3,5,7}");
        let c1 = cylinder_syntactic(&sys, &cyl, 1).unwrap();
        assert_eq!(c1.class_count(), 2);
        assert!(matches!(
            cylinder_syntactic(&sys, &cyl, 4),
            Err(Error::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn meet_congruence_of_blocks() {
        let z8 = samples::cyclic(8);
        let blocks = [
            SubsetL::from_indices(8, &[0, 4]).unwrap(),
            SubsetL::from_indices(8, &[1, 2, 3, 5, 6, 7]).unwrap(),
        ];
        let theta = partition_meet_congruence(&z8, &blocks).unwrap();
        for b in &blocks {
            assert!(theta.saturates(b));
        }
        // {0,4} forces the mod-4 congruence.
        assert_eq!(theta.partition().to_string(), "{0,4}/{1,5}/{2,6}/{3,7}");
    }

    #[test]
    fn meet_congruence_rejects_non_partitions() {
        let z4 = samples::cyclic(4);
        let overlap = [
            SubsetL::from_indices(4, &[0, 1]).unwrap(),
            SubsetL::from_indices(4, &[1, 2, 3]).unwrap(),
        ];
        assert!(matches!(
            partition_meet_congruence(&z4, &overlap),
            Err(Error::NotAPartitionOfCarrier(_))
        ));
        let gap = [SubsetL::from_indices(4, &[0, 1]).unwrap()];
        assert!(matches!(
            partition_meet_congruence(&z4, &gap),
            Err(Error::NotAPartitionOfCarrier(_))
        ));
    }

    #[test]
    fn omega_power_in_a_cyclic_group() {
        let z6 = samples::cyclic(6);
        // Identity of the group is the unique idempotent.
        for e in 0..6 {
            assert_eq!(omega_power(&z6, e, OmegaExponent::Omega).unwrap(), 0);
        }
        // 1 has order 6; 6! is divisible by 6, so a^{6!} = 0; 2! = 2.
        assert_eq!(omega_power(&z6, 1, OmegaExponent::Factorial(6)).unwrap(), 0);
        assert_eq!(omega_power(&z6, 1, OmegaExponent::Factorial(2)).unwrap(), 2);
        assert_eq!(omega_power(&z6, 1, OmegaExponent::Factorial(0)).unwrap(), 1);
        // Large n: n! mod 6 = 0 from n = 3 on.
        assert_eq!(
            omega_power(&z6, 1, OmegaExponent::Factorial(1_000_000_007)).unwrap(),
            0
        );
    }

    #[test]
    fn omega_power_with_nontrivial_index() {
        // Threshold semigroup on {0,1,2}: x·y = min(x+y, 2); powers of 1
        // are 1, 2, 2, …: index 2, period 1, idempotent 2.
        let sig = crate::signature::Signature::new([("add", 2)]).unwrap();
        let mut table = Vec::new();
        for x in 0..3usize {
            for y in 0..3usize {
                table.push((x + y).min(2));
            }
        }
        let cap = FiniteAlgebra::new("cap3", sig, 3, vec![table]).unwrap();
        assert_eq!(omega_power(&cap, 1, OmegaExponent::Omega).unwrap(), 2);
        assert_eq!(omega_power(&cap, 1, OmegaExponent::Factorial(1)).unwrap(), 1);
        assert_eq!(omega_power(&cap, 1, OmegaExponent::Factorial(2)).unwrap(), 2);
        assert_eq!(omega_power(&cap, 1, OmegaExponent::Factorial(50)).unwrap(), 2);
        assert_eq!(omega_power(&cap, 0, OmegaExponent::Omega).unwrap(), 0);
    }

    #[test]
    fn omega_power_requires_a_semigroup() {
        let bad = samples::cyclic(3);
        // Two binary symbols.
        let sig = crate::signature::Signature::new([("f", 2), ("g", 2)]).unwrap();
        let t: Vec<usize> = vec![0; 9];
        let two = FiniteAlgebra::new("two", sig, 3, vec![t.clone(), t]).unwrap();
        assert!(matches!(
            omega_power(&two, 0, OmegaExponent::Omega),
            Err(Error::NotASemigroupSignature(2))
        ));
        // Non-associative table.
        let sig = crate::signature::Signature::new([("f", 2)]).unwrap();
        let nassoc =
            FiniteAlgebra::new("na", sig, 2, vec![vec![1, 0, 0, 0]]).unwrap();
        assert!(matches!(
            omega_power(&nassoc, 0, OmegaExponent::Omega),
            Err(Error::NotAssociative(_))
        ));
        assert!(matches!(
            omega_power(&bad, 7, OmegaExponent::Omega),
            Err(Error::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn quotient_tower_by_parity_everywhere() {
        let sys = tower();
        // Pull the parity congruence to every level.
        let thetas: Vec<Congruence> = (1..=3)
            .map(|k| {
                let a = sys.level(k).unwrap();
                let evens: Vec<usize> =
                    (0..a.carrier_size()).filter(|e| e % 2 == 0).collect();
                let l = SubsetL::from_indices(a.carrier_size(), &evens).unwrap();
                largest_congruence_saturating(a, &l).unwrap()
            })
            .collect();
        let q = quotient_system(&sys, &thetas).unwrap();
        assert!(q.system.validate().ok());
        for k in 1..=3 {
            assert_eq!(q.system.level(k).unwrap().carrier_size(), 2);
        }
        assert_eq!(q.system.connecting_raw(2).unwrap(), &[0, 1]);
    }

    #[test]
    fn quotient_system_rejects_incompatible_congruences() {
        let sys = tower();
        // Equality upstairs but universal at the top level is fine;
        // the reverse is incompatible: universal at level 3 must map into
        // whatever level 2 has, so equality at level 2 breaks.
        let thetas = vec![
            Congruence::equality(sys.level(1).unwrap()),
            Congruence::equality(sys.level(2).unwrap()),
            Congruence::universal(sys.level(3).unwrap()),
        ];
        assert!(matches!(
            quotient_system(&sys, &thetas),
            Err(Error::IncompatibleCongruences { level: 3, .. })
        ));
        let fine = vec![
            Congruence::universal(sys.level(1).unwrap()),
            Congruence::universal(sys.level(2).unwrap()),
            Congruence::universal(sys.level(3).unwrap()),
        ];
        let q = quotient_system(&sys, &fine).unwrap();
        assert_eq!(q.system.level(1).unwrap().carrier_size(), 1);
    }

    #[test]
    fn system_round_trip_is_byte_identical() {
        let sys = tower();
        let text = serialize_system(&sys);
        let parsed = parse_system(&text).unwrap();
        assert_eq!(parsed, sys);
        assert_eq!(serialize_system(&parsed), text);
    }

    #[test]
    fn system_parse_errors_carry_line_numbers() {
        // Depth mismatch.
        let text = "system s\ndepth 2\nalgebra a\ncarrier 2\nop f 1\n0 1\n";
        assert!(parse_system(text).is_err());
        // Bad entry inside an inline algebra block: line number must point
        // into the original file.
        let text = "system s\ndepth 1\nalgebra a\ncarrier 2\nop f 1\n0 9\n";
        match parse_system(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        // Maps out of order.
        let z2 = serialize_algebra(&AlgFile {
            algebra: samples::cyclic(2),
            subsets: vec![],
        });
        let z4 = serialize_algebra(&AlgFile {
            algebra: samples::cyclic(4),
            subsets: vec![],
        });
        let text = format!("system s\ndepth 2\n{z2}{z4}map 1 2\n0 1 0 1\n");
        assert!(parse_system(&text).is_err());
    }

    #[test]
    fn determination_report_on_z4_evens() {
        let z4 = samples::cyclic(4);
        let evens = SubsetL::from_indices(4, &[0, 2]).unwrap();
        let report = determination_report(&z4, &evens).unwrap();
        assert_eq!(report.class_count, 2);
        assert_eq!(report.conditions.len(), 10);
        let status = |id: u8| {
            &report
                .conditions
                .iter()
                .find(|c| c.id == id)
                .unwrap()
                .status
        };
        assert_eq!(*status(1), ConditionStatus::Trivial);
        for id in [2, 6, 7, 8] {
            assert_eq!(*status(id), ConditionStatus::Holds, "condition {id}");
        }
        for id in [3, 4, 5] {
            assert_eq!(*status(id), ConditionStatus::OutOfScope, "condition {id}");
        }
        assert_eq!(*status(9), ConditionStatus::ImpliedBy { condition: 8 });
        assert_eq!(*status(10), ConditionStatus::ImpliedBy { condition: 8 });
        // Semigroup route: four classical terms.
        let c7 = report.conditions.iter().find(|c| c.id == 7).unwrap();
        match c7.witness.as_ref().unwrap() {
            ConditionWitness::Terms { terms, determined, .. } => {
                assert_eq!(terms.len(), 4);
                assert!(determined);
                assert!(terms.contains(&"x1".to_string()));
                assert!(terms.contains(&"add(add(x2,x1),x3)".to_string()));
            }
            other => panic!("expected term witness, got {other:?}"),
        }
    }

    #[test]
    fn determination_report_reconstructs_terms_without_a_semigroup() {
        // A unary operation is not a semigroup signature; condition 7 must
        // fall back to provenance-reconstructed terms.
        let sig = crate::signature::Signature::new([("s", 1)]).unwrap();
        let a = FiniteAlgebra::new("succ4", sig, 4, vec![vec![1, 2, 3, 0]]).unwrap();
        let l = SubsetL::from_indices(4, &[0]).unwrap();
        let report = determination_report(&a, &l).unwrap();
        let c7 = report.conditions.iter().find(|c| c.id == 7).unwrap();
        assert_eq!(c7.status, ConditionStatus::Holds);
        match c7.witness.as_ref().unwrap() {
            ConditionWitness::Terms { terms, determined, .. } => {
                assert!(determined);
                assert!(terms.contains(&"x1".to_string()));
                assert!(terms.iter().any(|t| t.starts_with("s(")), "{terms:?}");
            }
            other => panic!("expected term witness, got {other:?}"),
        }
    }

    #[test]
    fn report_serializes_to_json() {
        let z4 = samples::cyclic(4);
        let evens = SubsetL::from_indices(4, &[0, 2]).unwrap();
        let report = determination_report(&z4, &evens).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["class_count"], 2);
        assert_eq!(json["conditions"][0]["status"], "trivial");
        assert_eq!(
            json["conditions"][8]["status"]["implied_by"]["condition"],
            8
        );
    }
}
