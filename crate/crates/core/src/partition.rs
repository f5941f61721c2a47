use std::collections::HashMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::subset::SubsetL;

/// A partition of `{0, …, n−1}` in canonical form: each element stores its
/// class id, and ids are assigned by first occurrence, so class 0 always
/// contains element 0 and ids increase with the smallest member of each
/// class. Two equal partitions therefore have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    class_id: Vec<usize>,
    class_count: usize,
}

fn canonicalize(raw: &[usize]) -> (Vec<usize>, usize) {
    let mut relabel: HashMap<usize, usize> = HashMap::new();
    let mut out = Vec::with_capacity(raw.len());
    for &r in raw {
        let next = relabel.len();
        let id = *relabel.entry(r).or_insert(next);
        out.push(id);
    }
    let count = relabel.len();
    (out, count)
}

impl Partition {
    /// The finest partition: every element alone in its class.
    pub fn identity(n: usize) -> Self {
        Partition {
            class_id: (0..n).collect(),
            class_count: n,
        }
    }

    /// The coarsest partition: one class holding everything.
    pub fn universal(n: usize) -> Self {
        Partition {
            class_id: vec![0; n],
            class_count: if n == 0 { 0 } else { 1 },
        }
    }

    /// Build from arbitrary class labels; they are canonicalized.
    pub fn from_class_ids(raw: Vec<usize>) -> Self {
        let (class_id, class_count) = canonicalize(&raw);
        Partition {
            class_id,
            class_count,
        }
    }

    /// The two-class partition separating a subset from its complement
    /// (or fewer classes if the subset is empty or everything).
    pub fn from_subset(l: &SubsetL) -> Self {
        Partition::from_class_ids(
            (0..l.carrier_size())
                .map(|e| usize::from(l.contains(e)))
                .collect(),
        )
    }

    /// Build from explicit classes; every element of `{0, …, n−1}` must
    /// appear in exactly one class.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; n];
        for (id, class) in classes.iter().enumerate() {
            for &e in class {
                if e >= n {
                    return Err(Error::ElementOutOfRange {
                        value: e,
                        carrier: n,
                    });
                }
                if raw[e] != usize::MAX {
                    return Err(Error::NotAPartitionOfCarrier(format!(
                        "element {e} appears in more than one class"
                    )));
                }
                raw[e] = id;
            }
        }
        if let Some(e) = raw.iter().position(|&id| id == usize::MAX) {
            return Err(Error::NotAPartitionOfCarrier(format!(
                "element {e} is not covered"
            )));
        }
        Ok(Partition::from_class_ids(raw))
    }

    /// Parse `{0,2}/{1,3}` (braces optional: `0,2/1,3`) as a partition of
    /// `{0, …, n−1}`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut classes = Vec::new();
        for part in text.split('/') {
            let cleaned = part.trim().trim_start_matches('{').trim_end_matches('}');
            let mut class = Vec::new();
            for tok in cleaned.split(',') {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                let v: usize = tok.parse().map_err(|_| {
                    Error::NotAPartitionOfCarrier(format!("`{tok}` is not a number"))
                })?;
                class.push(v);
            }
            if !class.is_empty() {
                classes.push(class);
            }
        }
        Partition::from_classes(n, &classes)
    }

    pub fn len(&self) -> usize {
        self.class_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_id.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn class_ids(&self) -> &[usize] {
        &self.class_id
    }

    pub fn class_of(&self, e: usize) -> usize {
        self.class_id[e]
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.class_id[a] == self.class_id[b]
    }

    /// The classes in canonical order (by smallest member), each ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count];
        for (e, &id) in self.class_id.iter().enumerate() {
            out[id].push(e);
        }
        out
    }

    /// Split every class by an extra key; the result refines `self`.
    pub fn refine_by<K: std::hash::Hash + Eq>(&self, key: impl Fn(usize) -> K) -> Partition {
        let mut relabel: HashMap<(usize, K), usize> = HashMap::new();
        let mut raw = Vec::with_capacity(self.class_id.len());
        for e in 0..self.class_id.len() {
            let next = relabel.len();
            let id = *relabel.entry((self.class_id[e], key(e))).or_insert(next);
            raw.push(id);
        }
        let count = relabel.len();
        Partition {
            class_id: raw,
            class_count: count,
        }
    }

    /// The common refinement (meet): classes are intersections of classes.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(self.refine_by(|e| other.class_of(e)))
    }

    /// Does every class lie inside or outside `l` (no class straddles)?
    pub fn saturates(&self, l: &SubsetL) -> bool {
        if l.carrier_size() != self.len() {
            return false;
        }
        let mut verdict: Vec<Option<bool>> = vec![None; self.class_count];
        for e in 0..self.len() {
            let inl = l.contains(e);
            match verdict[self.class_id[e]] {
                None => verdict[self.class_id[e]] = Some(inl),
                Some(v) if v != inl => return false,
                _ => {}
            }
        }
        true
    }

    /// Is `self` coarser than or equal to `finer` (every class of `finer`
    /// contained in a class of `self`)?
    pub fn is_coarser_or_equal(&self, finer: &Partition) -> bool {
        if self.len() != finer.len() {
            return false;
        }
        // finer-class id -> self-class id must be a function.
        let mut seen: Vec<Option<usize>> = vec![None; finer.class_count];
        for e in 0..self.len() {
            match seen[finer.class_id[e]] {
                None => seen[finer.class_id[e]] = Some(self.class_id[e]),
                Some(c) if c != self.class_id[e] => return false,
                _ => {}
            }
        }
        true
    }

    /// First pair `(a, b)`, `a < b`, on which the two partitions disagree.
    pub fn first_disagreement(&self, other: &Partition) -> Option<(usize, usize)> {
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if self.same(a, b) != other.same(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let classes = self.classes();
        let mut seq = serializer.serialize_seq(Some(classes.len()))?;
        for c in classes {
            seq.serialize_element(&c)?;
        }
        seq.end()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, class) in self.classes().into_iter().enumerate() {
            if i > 0 {
                write!(f, "/")?;
            }
            write!(f, "{{")?;
            for (j, e) in class.into_iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// The coarsest refinement of `start` stable under every map in `maps`:
/// in the result, related elements stay related after applying any map.
/// Each map is an image array over the same carrier.
///
/// Splitting by the class of each image can only separate elements that any
/// stable refinement of `start` must separate, so the fixpoint reached by
/// repeated splitting is exactly the coarsest stable refinement.
pub fn coarsest_stable_refinement(start: &Partition, maps: &[Vec<usize>]) -> Partition {
    let mut p = start.clone();
    loop {
        let before = p.class_count();
        for m in maps {
            debug_assert_eq!(m.len(), p.len());
            p = p.refine_by(|e| p.class_of(m[e]));
        }
        if p.class_count() == before {
            return p;
        }
    }
}

/// Every partition of `{0, …, n−1}`, generated via restricted growth
/// strings in lexicographic order. Counts follow the Bell numbers, so this
/// is only for small `n`; callers enforce their own caps.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max_used: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
        let n = rgs.len();
        if i == n {
            out.push(Partition::from_class_ids(rgs.clone()));
            return;
        }
        for c in 0..=max_used + 1 {
            rgs[i] = c;
            rec(i + 1, max_used.max(c), rgs, out);
        }
    }
    if n == 0 {
        out.push(Partition::identity(0));
        return out;
    }
    // First element is always in class 0.
    rec(1, 0, &mut rgs, &mut out);
    out
}
