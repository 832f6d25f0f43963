//! Exact Farey fractions and Farey sequences between 0/1 and 1/1.
//!
//! A [`FareySequence`] always carries full fractions; the denominator-only
//! view (`{1,4,3,2,1}`) is produced on demand by
//! [`FareySequence::brace_notation`]. The cusp at infinity (`1/0`) is never
//! stored in a sequence: the polygon's cusp set is the entries plus `1/0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma0::{Level, SideLabel};

/// A reduced fraction `num/den` with `0 <= num/den <= 1`, or `1/0` (infinity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FareyFraction {
    num: i64,
    den: i64,
}

impl FareyFraction {
    pub const ZERO: FareyFraction = FareyFraction { num: 0, den: 1 };
    pub const ONE: FareyFraction = FareyFraction { num: 1, den: 1 };
    pub const INFINITY: FareyFraction = FareyFraction { num: 1, den: 0 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        let ok = if den == 0 {
            num == 1
        } else {
            den > 0 && (0..=den).contains(&num) && crate::arith::gcd(num, den) == 1
        };
        if ok {
            Ok(FareyFraction { num, den })
        } else {
            Err(Error::InvalidFraction { num, den })
        }
    }

    /// Builds a fraction the caller already knows to be valid.
    pub(crate) const fn new_unchecked(num: i64, den: i64) -> Self {
        FareyFraction { num, den }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn is_infinity(self) -> bool {
        self.den == 0
    }

    /// `self.den * other.num - self.num * other.den`; equals `1` exactly when
    /// `self < other` and the two are Farey neighbors.
    pub fn cross(self, other: FareyFraction) -> i128 {
        self.den as i128 * other.num as i128 - self.num as i128 * other.den as i128
    }

    pub fn is_neighbor(self, other: FareyFraction) -> bool {
        self.cross(other).abs() == 1
    }

    /// The Stern–Brocot parents `(l, r)` with `l < self < r` and
    /// `l ⊕ r = self`. `None` for `0/1`, `1/1` and infinity.
    pub fn parents(self) -> Option<(FareyFraction, FareyFraction)> {
        if self.den < 2 {
            return None;
        }
        // Left parent b: self.num * b ≡ 1 (mod den), 0 < b < den.
        let b = crate::arith::mod_inv(self.num, self.den)?;
        let a = ((self.num as i128 * b as i128 - 1) / self.den as i128) as i64;
        let left = FareyFraction::new_unchecked(a, b);
        let right = FareyFraction::new_unchecked(self.num - a, self.den - b);
        Some((left, right))
    }
}

impl fmt::Display for FareyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Farey sum `(a+c)/(b+d)` of two Farey neighbors.
pub fn mediant(left: FareyFraction, right: FareyFraction) -> Result<FareyFraction> {
    if !left.is_neighbor(right) {
        return Err(Error::NotNeighbors(left, right));
    }
    let num = left.num.checked_add(right.num).ok_or(Error::Overflow)?;
    let den = left.den.checked_add(right.den).ok_or(Error::Overflow)?;
    // Neighbors always produce a reduced sum.
    Ok(FareyFraction::new_unchecked(num, den))
}

/// An ordered chain of Farey neighbors from `0/1` to `1/1`, with optional
/// side annotations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareySequence {
    entries: Vec<FareyFraction>,
    sides: Vec<Option<SideLabel>>,
    level: Option<Level>,
}

impl FareySequence {
    /// The trivial sequence `{0/1, 1/1}`.
    pub fn unit() -> Self {
        Self::from_entries_unchecked(vec![FareyFraction::ZERO, FareyFraction::ONE])
    }

    /// Validates that `entries` runs from `0/1` to `1/1` through consecutive
    /// Farey neighbors in increasing order.
    pub fn from_entries(entries: Vec<FareyFraction>) -> Result<Self> {
        if entries.len() < 2
            || entries[0] != FareyFraction::ZERO
            || entries[entries.len() - 1] != FareyFraction::ONE
        {
            return Err(Error::Structural(
                "a Farey sequence must start at 0/1 and end at 1/1".into(),
            ));
        }
        for w in entries.windows(2) {
            if w[0].cross(w[1]) != 1 {
                return Err(Error::NotNeighbors(w[0], w[1]));
            }
        }
        Ok(Self::from_entries_unchecked(entries))
    }

    /// Wraps an untrusted list without any checks, so that
    /// [`verify_sequence`](crate::verifier::verify_sequence) can report what
    /// is wrong with it.
    pub fn unverified(entries: Vec<FareyFraction>) -> Self {
        Self::from_entries_unchecked(entries)
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<FareyFraction>) -> Self {
        let n = entries.len().saturating_sub(1);
        FareySequence {
            entries,
            sides: vec![None; n],
            level: None,
        }
    }

    pub fn entries(&self) -> &[FareyFraction] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<FareyFraction> {
        self.entries
    }

    /// Number of members (vertices other than infinity).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn side_count(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    /// The two endpoints of side `i`.
    pub fn side(&self, i: usize) -> (FareyFraction, FareyFraction) {
        (self.entries[i], self.entries[i + 1])
    }

    /// Denominator pair of side `i`.
    pub fn side_denominators(&self, i: usize) -> (i64, i64) {
        (self.entries[i].den, self.entries[i + 1].den)
    }

    pub fn denominators(&self) -> Vec<i64> {
        self.entries.iter().map(|f| f.den).collect()
    }

    pub fn labels(&self) -> &[Option<SideLabel>] {
        &self.sides
    }

    pub fn label(&self, side: usize) -> Option<SideLabel> {
        self.sides.get(side).copied().flatten()
    }

    pub fn level(&self) -> Option<&Level> {
        self.level.as_ref()
    }

    pub(crate) fn set_labels(&mut self, labels: Vec<SideLabel>, level: Level) {
        debug_assert_eq!(labels.len(), self.side_count());
        self.sides = labels.into_iter().map(Some).collect();
        self.level = Some(level);
    }

    /// Inserts the mediant into side `side_index`, returning a new sequence.
    /// Side labels are dropped, since insertion invalidates them.
    pub fn insert_at(&self, side_index: usize) -> Result<Self> {
        if side_index >= self.side_count() {
            return Err(Error::SideOutOfRange {
                index: side_index,
                sides: self.side_count(),
            });
        }
        let (l, r) = self.side(side_index);
        let m = mediant(l, r)?;
        let mut entries = Vec::with_capacity(self.entries.len() + 1);
        entries.extend_from_slice(&self.entries[..=side_index]);
        entries.push(m);
        entries.extend_from_slice(&self.entries[side_index + 1..]);
        let mut out = Self::from_entries_unchecked(entries);
        out.level = self.level.clone();
        Ok(out)
    }

    /// Largest denominator and how often it occurs.
    pub fn max_denominator(&self) -> (i64, usize) {
        let max = self.entries.iter().map(|f| f.den).max().unwrap_or(0);
        let mult = self.entries.iter().filter(|f| f.den == max).count();
        (max, mult)
    }

    /// True if every entry of `other` occurs in `self`, in order.
    pub fn contains_subsequence(&self, other: &FareySequence) -> bool {
        let mut it = self.entries.iter();
        other.entries.iter().all(|x| it.any(|y| y == x))
    }

    /// Denominators in brace notation, e.g. `{1,4,3,2,1}`.
    pub fn brace_notation(&self) -> String {
        let dens: Vec<String> = self.entries.iter().map(|f| f.den.to_string()).collect();
        format!("{{{}}}", dens.join(","))
    }
}

/// The Farey sequence of order `r`: all reduced fractions in `[0, 1]` with
/// denominator at most `r`, in increasing order.
pub fn farey_order_sequence(r: i64) -> Result<FareySequence> {
    if r < 1 {
        return Err(Error::Structural(format!("Farey order must be >= 1, got {r}")));
    }
    let mut entries = vec![FareyFraction::ZERO];
    // Standard next-term recurrence starting from 0/1, 1/r.
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, r);
    while c <= d {
        entries.push(FareyFraction::new_unchecked(c, d));
        let k = (r + b) / d;
        (a, b, c, d) = (c, d, k * c - a, k * d - b);
    }
    Ok(FareySequence::from_entries_unchecked(entries))
}

/// Recovers numerators from a denominator list: `a_1 = 0` and
/// `a_{i+1} = (1 + a_i e_{i+1}) / e_i`, which must be exact at every step.
pub fn numerators_from_denominators(dens: &[i64]) -> Result<FareySequence> {
    let bad = |msg: String| Error::InconsistentDenominators(msg);
    if dens.len() < 2 || dens[0] != 1 || dens[dens.len() - 1] != 1 {
        return Err(bad("list must start and end with 1".into()));
    }
    if let Some(&d) = dens.iter().find(|&&d| d < 1) {
        return Err(bad(format!("denominator {d} is not positive")));
    }
    let mut entries = Vec::with_capacity(dens.len());
    entries.push(FareyFraction::ZERO);
    let mut a: i128 = 0;
    for w in dens.windows(2) {
        let (e, e_next) = (w[0] as i128, w[1] as i128);
        let t = 1 + a * e_next;
        if t % e != 0 {
            return Err(bad(format!("no integral numerator between {} and {}", w[0], w[1])));
        }
        a = t / e;
        if a < 0 || a > e_next {
            return Err(bad(format!("numerator {a} leaves [0, 1] at denominator {}", w[1])));
        }
        entries.push(FareyFraction::new_unchecked(a as i64, w[1]));
    }
    if entries[entries.len() - 1] != FareyFraction::ONE {
        return Err(bad("sequence does not end at 1/1".into()));
    }
    Ok(FareySequence::from_entries_unchecked(entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64, d: i64) -> FareyFraction {
        FareyFraction::new(n, d).unwrap()
    }

    #[test]
    fn mediant_examples() {
        assert_eq!(mediant(f(0, 1), f(1, 1)).unwrap(), f(1, 2));
        assert_eq!(mediant(f(1, 3), f(1, 2)).unwrap(), f(2, 5));
        assert_eq!(mediant(f(1, 7), f(1, 6)).unwrap(), f(2, 13));
    }

    #[test]
    fn mediant_rejects_non_neighbors() {
        assert!(matches!(
            mediant(f(0, 1), f(2, 3)),
            Err(Error::NotNeighbors(_, _))
        ));
    }

    #[test]
    fn fraction_validation() {
        assert!(FareyFraction::new(2, 4).is_err());
        assert!(FareyFraction::new(3, 2).is_err());
        assert!(FareyFraction::new(2, 0).is_err());
        assert!(FareyFraction::new(1, 0).unwrap().is_infinity());
    }

    #[test]
    fn order_sequences_from_worked_examples() {
        assert_eq!(farey_order_sequence(2).unwrap().denominators(), vec![1, 2, 1]);
        assert_eq!(
            farey_order_sequence(4).unwrap().denominators(),
            vec![1, 4, 3, 2, 3, 4, 1]
        );
        assert_eq!(
            farey_order_sequence(8).unwrap().denominators(),
            vec![1, 8, 7, 6, 5, 4, 7, 3, 8, 5, 7, 2, 7, 5, 8, 3, 7, 4, 5, 6, 7, 8, 1]
        );
        assert_eq!(farey_order_sequence(1).unwrap().denominators(), vec![1, 1]);
        assert!(farey_order_sequence(0).is_err());
    }

    #[test]
    fn insert_at_examples() {
        let d2 = FareySequence::unit().insert_at(0).unwrap();
        assert_eq!(d2.denominators(), vec![1, 2, 1]);
        let d3 = d2.insert_at(0).unwrap();
        assert_eq!(d3.denominators(), vec![1, 3, 2, 1]);
        assert_eq!(d3.entries()[1], f(1, 3));
        assert!(matches!(
            d3.insert_at(3),
            Err(Error::SideOutOfRange { index: 3, sides: 3 })
        ));
    }

    #[test]
    fn numerators_examples() {
        let s = numerators_from_denominators(&[1, 2, 1]).unwrap();
        assert_eq!(s.entries(), &[f(0, 1), f(1, 2), f(1, 1)]);
        let s = numerators_from_denominators(&[1, 3, 2, 3, 1]).unwrap();
        assert_eq!(s.entries(), &[f(0, 1), f(1, 3), f(1, 2), f(2, 3), f(1, 1)]);
        let s = numerators_from_denominators(&[1, 4, 3, 2, 1]).unwrap();
        assert_eq!(s.entries(), &[f(0, 1), f(1, 4), f(1, 3), f(1, 2), f(1, 1)]);
    }

    #[test]
    fn numerators_reject_inconsistent_lists() {
        assert!(numerators_from_denominators(&[1, 4, 2, 1]).is_err());
        assert!(numerators_from_denominators(&[1, 3, 1]).is_err());
        assert!(numerators_from_denominators(&[2, 1]).is_err());
        assert!(numerators_from_denominators(&[1]).is_err());
    }

    #[test]
    fn parents_of_mediants() {
        assert_eq!(f(2, 5).parents(), Some((f(1, 3), f(1, 2))));
        assert_eq!(f(1, 2).parents(), Some((f(0, 1), f(1, 1))));
        assert_eq!(f(1, 1).parents(), None);
    }

    #[test]
    fn brace_notation_and_subsequence() {
        let f8 = farey_order_sequence(8).unwrap();
        let f4 = farey_order_sequence(4).unwrap();
        assert!(f8.contains_subsequence(&f4));
        assert!(!f4.contains_subsequence(&f8));
        assert_eq!(f4.brace_notation(), "{1,4,3,2,3,4,1}");
    }
}
