use std::fmt;
use std::hash::{Hash, Hasher};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A subset of a carrier `{0, …, n−1}`, stored as a bit vector, with an
/// optional display name. Equality and hashing ignore the name: two subsets
/// with the same members are the same subset.
#[derive(Debug, Clone)]
pub struct SubsetL {
    bits: Vec<bool>,
    name: Option<String>,
}

impl PartialEq for SubsetL {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
    }
}

impl Eq for SubsetL {}

impl Hash for SubsetL {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl Serialize for SubsetL {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let ix = self.indices();
        let mut seq = serializer.serialize_seq(Some(ix.len()))?;
        for i in ix {
            seq.serialize_element(&i)?;
        }
        seq.end()
    }
}

impl SubsetL {
    pub fn empty(carrier_size: usize) -> Self {
        SubsetL {
            bits: vec![false; carrier_size],
            name: None,
        }
    }

    pub fn full(carrier_size: usize) -> Self {
        SubsetL {
            bits: vec![true; carrier_size],
            name: None,
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        SubsetL { bits, name: None }
    }

    pub fn from_indices(carrier_size: usize, indices: &[usize]) -> Result<Self> {
        let mut bits = vec![false; carrier_size];
        for &i in indices {
            if i >= carrier_size {
                return Err(Error::ElementOutOfRange {
                    value: i,
                    carrier: carrier_size,
                });
            }
            bits[i] = true;
        }
        Ok(SubsetL { bits, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn carrier_size(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.bits.get(e).copied().unwrap_or(false)
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i]).collect()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.bits.len()
    }

    pub fn complement(&self) -> SubsetL {
        SubsetL {
            bits: self.bits.iter().map(|&b| !b).collect(),
            name: None,
        }
    }

    /// Preimage under a map given as an image array: element `j` of the
    /// map's domain belongs to the result iff `map[j]` belongs to `self`.
    pub fn preimage(&self, map: &[usize]) -> SubsetL {
        let bits = map.iter().map(|&v| self.contains(v)).collect();
        SubsetL { bits, name: None }
    }

    /// Forward image under a map into a carrier of size `target_size`.
    pub fn image_under(&self, map: &[usize], target_size: usize) -> SubsetL {
        let mut bits = vec![false; target_size];
        for (e, &v) in map.iter().enumerate() {
            if self.contains(e) {
                bits[v] = true;
            }
        }
        SubsetL { bits, name: None }
    }

    /// All subsets of a carrier in numeric order of their characteristic
    /// bit pattern. Intended for small carriers only.
    pub fn all_subsets(carrier_size: usize) -> impl Iterator<Item = SubsetL> {
        assert!(carrier_size < usize::BITS as usize, "carrier too large to enumerate subsets");
        (0usize..(1 << carrier_size)).map(move |mask| {
            SubsetL::from_bits((0..carrier_size).map(|i| mask & (1 << i) != 0).collect())
        })
    }
}

impl fmt::Display for SubsetL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
