//! Set families over a small ground set `[n] = {1, ..., n}`.
//!
//! A subset is a single `u32` mask (element `i` lives at bit `i - 1`), so the
//! ground set is capped at [`MAX_GROUND`]. Families are uniform, sorted by
//! mask value and duplicate free, which makes equality and hashing canonical.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combin::{deposit, KSubsets};
use crate::{Error, Result};

pub const MAX_GROUND: u32 = 30;

fn check_ground(n: u32) -> Result<()> {
    if n > MAX_GROUND {
        Err(Error::GroundTooLarge { n, max: MAX_GROUND })
    } else {
        Ok(())
    }
}

/// Mask with the low `n` bits set.
pub(crate) fn full_mask(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    n: u32,
}

impl SubsetMask {
    pub fn new(n: u32, bits: u32) -> Result<Self> {
        check_ground(n)?;
        let stray = bits & !full_mask(n);
        if stray != 0 {
            return Err(Error::ElementOutOfRange {
                element: 32 - stray.leading_zeros(),
                n,
            });
        }
        Ok(SubsetMask { bits, n })
    }

    pub fn empty(n: u32) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn full(n: u32) -> Result<Self> {
        Self::new(n, full_mask(n))
    }

    /// Builds the subset from 1-based elements.
    pub fn from_elements(n: u32, elements: &[u32]) -> Result<Self> {
        check_ground(n)?;
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            bits |= 1 << (e - 1);
        }
        Ok(SubsetMask { bits, n })
    }

    pub(crate) fn from_raw(n: u32, bits: u32) -> Self {
        debug_assert!(bits & !full_mask(n) == 0);
        SubsetMask { bits, n }
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn ground(self) -> u32 {
        self.n
    }

    #[inline]
    pub fn len(self) -> u32 {
        self.bits.count_ones()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, element: u32) -> bool {
        element >= 1 && element <= self.n && self.bits & (1 << (element - 1)) != 0
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn intersection_len(self, other: SubsetMask) -> u32 {
        (self.bits & other.bits).count_ones()
    }

    pub fn complement(self) -> SubsetMask {
        SubsetMask {
            bits: !self.bits & full_mask(self.n),
            n: self.n,
        }
    }

    /// 1-based elements in increasing order.
    pub fn elements(self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len() as usize);
        let mut rest = self.bits;
        while rest != 0 {
            out.push(rest.trailing_zeros() + 1);
            rest &= rest - 1;
        }
        out
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct SubsetDoc {
    n: u32,
    elements: Vec<u32>,
}

impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubsetDoc {
            n: self.n,
            elements: self.elements(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubsetMask {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SubsetDoc::deserialize(d)?;
        SubsetMask::from_elements(doc.n, &doc.elements).map_err(serde::de::Error::custom)
    }
}

/// A `k`-uniform family of subsets of `[n]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family {
    n: u32,
    k: u32,
    members: Vec<SubsetMask>,
}

impl Family {
    /// Sorts and deduplicates `members`; every member must have size `k`.
    pub fn new(n: u32, k: u32, members: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        check_ground(n)?;
        let mut members: Vec<SubsetMask> = members.into_iter().collect();
        for m in &members {
            if m.n != n {
                return Err(Error::GroundMismatch { left: n, right: m.n });
            }
            if m.len() != k {
                return Err(Error::CardinalityMismatch {
                    expected: k,
                    found: m.len(),
                });
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { n, k, members })
    }

    /// Convenience constructor from lists of 1-based elements. The uniform
    /// size is taken from the first member (0 for an empty list).
    pub fn from_sets(n: u32, sets: &[&[u32]]) -> Result<Self> {
        let members = sets
            .iter()
            .map(|s| SubsetMask::from_elements(n, s))
            .collect::<Result<Vec<_>>>()?;
        let k = members.first().map_or(0, |m| m.len());
        Family::new(n, k, members)
    }

    pub fn empty(n: u32, k: u32) -> Result<Self> {
        Family::new(n, k, std::iter::empty())
    }

    /// Every `k`-subset of `[n]`.
    pub fn complete(n: u32, k: u32) -> Result<Self> {
        check_ground(n)?;
        let members = KSubsets::new(n, k)
            .map(|b| SubsetMask::from_raw(n, b))
            .collect();
        Ok(Family { n, k, members })
    }

    /// Members given as raw masks already sorted, distinct and `k`-uniform.
    pub(crate) fn from_sorted_raw(n: u32, k: u32, bits: impl IntoIterator<Item = u32>) -> Self {
        let members: Vec<SubsetMask> = bits
            .into_iter()
            .map(|b| SubsetMask::from_raw(n, b))
            .collect();
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|m| m.len() == k));
        Family { n, k, members }
    }

    #[inline]
    pub fn ground(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn uniformity(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: SubsetMask) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.members.iter().copied()
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyDoc {
    n: u32,
    k: u32,
    members: Vec<Vec<u32>>,
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyDoc {
            n: self.n,
            k: self.k,
            members: self.members.iter().map(|m| m.elements()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = FamilyDoc::deserialize(d)?;
        let members = doc
            .members
            .iter()
            .map(|e| SubsetMask::from_elements(doc.n, e))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Family::new(doc.n, doc.k, members).map_err(serde::de::Error::custom)
    }
}

/// A two-colouring of `[n]` given by its 0-class.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Colouring {
    zero_class: SubsetMask,
}

impl Colouring {
    pub fn new(zero_class: SubsetMask) -> Self {
        Colouring { zero_class }
    }

    pub fn ground(&self) -> u32 {
        self.zero_class.ground()
    }

    pub fn zero_class(&self) -> SubsetMask {
        self.zero_class
    }

    pub fn one_class(&self) -> SubsetMask {
        self.zero_class.complement()
    }

    /// Size of the 0-class; the colouring belongs to `[n]`-choose-`[m]` for this `m`.
    pub fn class_size(&self) -> u32 {
        self.zero_class.len()
    }

    pub fn colour(&self, element: u32) -> u8 {
        if self.zero_class.contains(element) {
            0
        } else {
            1
        }
    }

    /// All colourings of `[n]` whose 0-class has exactly `m` elements.
    pub fn all_with_class_size(n: u32, m: u32) -> Result<impl Iterator<Item = Colouring>> {
        check_ground(n)?;
        if m > n {
            return Err(Error::LevelExceedsGround { m, n });
        }
        Ok(KSubsets::new(n, m).map(move |b| Colouring::new(SubsetMask::from_raw(n, b))))
    }
}

/// Sets `y` with `|y| = |x| + 1` and `x ⊂ y`.
pub fn shade(x: SubsetMask) -> Family {
    let n = x.ground();
    let k = x.len() + 1;
    let mut members = Vec::with_capacity((n - x.len()) as usize);
    let mut free = !x.bits() & full_mask(n);
    while free != 0 {
        let low = free & free.wrapping_neg();
        members.push(x.bits() | low);
        free &= free - 1;
    }
    members.sort_unstable();
    Family::from_sorted_raw(n, k, members)
}

/// Upper shade at level `m` of a single set, as raw masks (unsorted).
fn push_supersets(x: u32, n: u32, m: u32, out: &mut Vec<u32>) {
    let k = x.count_ones();
    if m < k || m > n {
        return;
    }
    let free = !x & full_mask(n);
    let slots = free.count_ones();
    for pattern in KSubsets::new(slots, m - k) {
        out.push(x | deposit(pattern, free));
    }
}

/// All `m`-element supersets of members of `family`.
///
/// Returns an empty family when `m` is below the uniformity, and an error
/// when `m` exceeds the ground set.
pub fn m_shade(family: &Family, m: u32) -> Result<Family> {
    let n = family.ground();
    if m > n {
        return Err(Error::LevelExceedsGround { m, n });
    }
    let mut raw = Vec::new();
    if m >= family.uniformity() {
        for x in family.iter() {
            push_supersets(x.bits(), n, m, &mut raw);
        }
    }
    raw.sort_unstable();
    raw.dedup();
    Ok(Family::from_sorted_raw(n, m, raw))
}

/// `m_shade` of a single set.
pub fn m_shade_of(x: SubsetMask, m: u32) -> Result<Family> {
    let family = Family::new(x.ground(), x.len(), [x])?;
    m_shade(&family, m)
}

/// `|E ∩ F| >= t` for every ordered pair of members, `E = F` included.
pub fn is_t_intersecting(family: &Family, t: u32) -> Result<bool> {
    if t == 0 {
        return Err(Error::params("intersection threshold t must be at least 1"));
    }
    let ms = family.members();
    for (i, &e) in ms.iter().enumerate() {
        for &f in &ms[i..] {
            if e.intersection_len(f) < t {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `|E ∩ F| >= t` for all `E ∈ a`, `F ∈ b`; vacuously true when either is empty.
pub fn is_cross_t_intersecting(a: &Family, b: &Family, t: u32) -> Result<bool> {
    if a.ground() != b.ground() {
        return Err(Error::GroundMismatch {
            left: a.ground(),
            right: b.ground(),
        });
    }
    Ok(a
        .iter()
        .all(|e| b.iter().all(|f| e.intersection_len(f) >= t)))
}

/// `c` is constant on `x`. The empty set is homogeneous for every colouring.
pub fn is_homogeneous(x: SubsetMask, c: &Colouring) -> bool {
    let zero = c.zero_class().bits();
    x.bits() & !zero == 0 || x.bits() & zero == 0
}

/// Number of colourings of `[2m]` with an `m`-element 0-class for which some
/// member of `family` is homogeneous. Exhaustive over all `C(2m, m)` colourings.
pub fn count_homogeneous_colourings(family: &Family, m: u32) -> Result<u64> {
    let n = family.ground();
    if n != 2 * m {
        return Err(Error::NotBalanced { n, m });
    }
    let mut count = 0u64;
    for c in Colouring::all_with_class_size(n, m)? {
        if family.iter().any(|x| is_homogeneous(x, &c)) {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::binom;

    fn fam(n: u32, sets: &[&[u32]]) -> Family {
        Family::from_sets(n, sets).unwrap()
    }

    fn set(n: u32, e: &[u32]) -> SubsetMask {
        SubsetMask::from_elements(n, e).unwrap()
    }

    #[test]
    fn subset_mask_validation() {
        assert!(SubsetMask::new(3, 0b1000).is_err());
        assert!(SubsetMask::from_elements(3, &[0]).is_err());
        assert!(SubsetMask::from_elements(31, &[1]).is_err());
        let x = set(5, &[2, 5]);
        assert_eq!(x.elements(), vec![2, 5]);
        assert_eq!(x.len(), 2);
        assert_eq!(x.complement().elements(), vec![1, 3, 4]);
        assert_eq!(x.to_string(), "{2,5}");
    }

    #[test]
    fn family_is_canonical() {
        let a = fam(4, &[&[1, 3], &[1, 2], &[1, 3]]);
        assert_eq!(a.len(), 2);
        assert_eq!(a.members()[0], set(4, &[1, 2]));
        let err = Family::new(4, 2, [set(4, &[1])]).unwrap_err();
        assert_eq!(err, Error::CardinalityMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn shade_examples() {
        assert_eq!(shade(set(3, &[1, 2])), fam(3, &[&[1, 2, 3]]));
        assert_eq!(shade(set(3, &[1])), fam(3, &[&[1, 2], &[1, 3]]));
        assert_eq!(shade(set(2, &[])), fam(2, &[&[1], &[2]]));
        assert!(shade(set(2, &[1, 2])).is_empty());
    }

    #[test]
    fn m_shade_examples() {
        assert_eq!(m_shade(&fam(3, &[&[1]]), 1).unwrap(), fam(3, &[&[1]]));
        assert_eq!(
            m_shade(&fam(3, &[&[1], &[2]]), 2).unwrap(),
            fam(3, &[&[1, 2], &[1, 3], &[2, 3]])
        );
        let empty = Family::empty(3, 1).unwrap();
        for m in 0..=3 {
            assert!(m_shade(&empty, m).unwrap().is_empty());
        }
        assert!(m_shade(&fam(3, &[&[1, 2]]), 1).unwrap().is_empty());
        assert_eq!(
            m_shade(&fam(3, &[&[1]]), 4).unwrap_err(),
            Error::LevelExceedsGround { m: 4, n: 3 }
        );
    }

    #[test]
    fn intersection_predicates() {
        assert!(is_t_intersecting(&fam(4, &[&[1, 2], &[1, 3]]), 1).unwrap());
        assert!(!is_t_intersecting(&fam(4, &[&[1, 2], &[3, 4]]), 1).unwrap());
        assert!(is_t_intersecting(&fam(4, &[&[1, 2]]), 2).unwrap());
        // self pairs count: a single 2-set is not 3-intersecting
        assert!(!is_t_intersecting(&fam(4, &[&[1, 2]]), 3).unwrap());
        assert!(is_t_intersecting(&Family::empty(4, 2).unwrap(), 3).unwrap());
        assert!(is_t_intersecting(&fam(4, &[&[1]]), 0).is_err());

        let a = fam(4, &[&[1, 2]]);
        assert!(is_cross_t_intersecting(&a, &fam(4, &[&[1, 3]]), 1).unwrap());
        assert!(!is_cross_t_intersecting(&a, &fam(4, &[&[3, 4]]), 1).unwrap());
        assert!(is_cross_t_intersecting(&Family::empty(4, 2).unwrap(), &a, 5).unwrap());
        assert!(is_cross_t_intersecting(&a, &fam(5, &[&[1, 2]]), 1).is_err());
    }

    #[test]
    fn homogeneity_examples() {
        let c = Colouring::new(set(4, &[1, 2]));
        assert!(is_homogeneous(set(4, &[1, 2]), &c));
        assert!(!is_homogeneous(set(4, &[1, 3]), &c));
        assert!(is_homogeneous(set(4, &[]), &c));
        assert!(is_homogeneous(set(4, &[3, 4]), &c));
    }

    #[test]
    fn homogeneous_colouring_counts() {
        // enumerated by hand over the six balanced colourings of [4]
        assert_eq!(count_homogeneous_colourings(&fam(4, &[&[1, 2]]), 2).unwrap(), 2);
        assert_eq!(count_homogeneous_colourings(&Family::empty(4, 1).unwrap(), 2).unwrap(), 0);
        assert_eq!(count_homogeneous_colourings(&fam(2, &[&[1]]), 1).unwrap(), 2);
        assert_eq!(
            count_homogeneous_colourings(&fam(5, &[&[1]]), 2).unwrap_err(),
            Error::NotBalanced { n: 5, m: 2 }
        );
    }

    #[test]
    fn shade_sizes_match_binomials() {
        for n in 0..=7u32 {
            for bits in 0..(1u32 << n) {
                let x = SubsetMask::new(n, bits).unwrap();
                for m in x.len()..=n {
                    let expected = binom((n - x.len()) as u64, (m - x.len()) as u64).unwrap();
                    assert_eq!(m_shade_of(x, m).unwrap().len() as u64, expected);
                }
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let a = fam(5, &[&[1, 2], &[2, 5]]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"n":5,"k":2,"members":[[1,2],[2,5]]}"#);
        let back: Family = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Family>(r#"{"n":3,"k":2,"members":[[1,4]]}"#).is_err());
    }
}
