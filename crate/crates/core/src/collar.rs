//! The `p^n` Farey triangles around the cusp `0/1` and how much of them a
//! polygon covers.
//!
//! `Δ = {[0,1], [1,2], …, [p^n - 1, p^n]}`, where `[a, a+1]` is the triangle
//! with vertices `0/1`, `1/a`, `1/(a+1)` (and `1/0` is infinity). A Farey
//! triangle of a polygon covers every element of Δ it is Γ0(p^n)-equivalent
//! to; uncovered runs are gaps.

use std::collections::BTreeSet;

use crate::arith::{ext_gcd, gcd, mod_inv};
use crate::error::{Error, Result};
use crate::farey::{mediant, FareyFraction, FareySequence};
use crate::gamma0::{classify_side, Level, SideClass};
use crate::generators::UnimodularMatrix;

fn prime_power(level: &Level) -> Result<(i64, u32)> {
    level.prime_power().ok_or(Error::NotPrimePower(level.value()))
}

/// The element `[a, a+1]` of Δ, `0 <= a < p^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeltaTriangle(pub i64);

/// A maximal run of uncovered triangles `[start, start+1], …`, of the
/// given length, read cyclically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gap {
    pub start: i64,
    pub length: i64,
}

/// Two distinct triangles `[a, a+1]` and `[b, b+1]` are equivalent iff
/// `p^n` divides `a(b+1) + 1` or `b(a+1) + 1`.
pub fn triangles_equivalent(s: DeltaTriangle, t: DeltaTriangle, level: &Level) -> bool {
    let n = level.value() as i128;
    let (a, b) = (s.0 as i128, t.0 as i128);
    (a * (b + 1) + 1) % n == 0 || (b * (a + 1) + 1) % n == 0
}

/// Size of the Γ0(p^n)-class of `[a, a+1]` inside Δ, from the closed-form
/// trichotomy.
pub fn orbit_count(t: DeltaTriangle, level: &Level) -> Result<i64> {
    let (p, _) = prime_power(level)?;
    let n = level.value() as i128;
    let prod = t.0 as i128 * (t.0 as i128 + 1);
    Ok(if (prod + 1) % n == 0 {
        1
    } else if prod % p as i128 == 0 {
        2
    } else {
        3
    })
}

/// The triangles of Δ covered because one of their vertices is a cusp of
/// width `p^n-2i`, `1 <= i <= n/2`, or the width-1 cusp at infinity.
pub fn closed_form_cover(level: &Level) -> Result<BTreeSet<DeltaTriangle>> {
    let (p, n) = prime_power(level)?;
    let big = level.value();
    let mut out = BTreeSet::new();
    for i in 1..=n / 2 {
        let pi = p.pow(i);
        let top = p.pow(n - i);
        // U_L: [k p^i - 1, k p^i]
        for k in 1..=top {
            if k == top || gcd(k, p) == 1 {
                out.insert(DeltaTriangle((k * pi - 1).rem_euclid(big)));
            }
        }
        // U_R: [k p^i, k p^i + 1]
        for k in 0..top {
            if k == 0 || gcd(k, p) == 1 {
                out.insert(DeltaTriangle(k * pi));
            }
        }
    }
    Ok(out)
}

/// Farey triangles of the ideal polygon with vertices `seq ∪ {∞}`: the root
/// triangle `(0/1, 1/1, ∞)` and, for every other vertex, the triangle it
/// forms with its two Stern–Brocot parents.
pub fn polygon_triangles(seq: &FareySequence) -> Vec<[FareyFraction; 3]> {
    let mut out = vec![[FareyFraction::ZERO, FareyFraction::ONE, FareyFraction::INFINITY]];
    out.extend(
        seq.entries()
            .iter()
            .filter_map(|&m| m.parents().map(|(l, r)| [l, m, r])),
    );
    out
}

/// Elements of Δ equivalent to the Farey triangle `tri`. Each vertex in the
/// class of `0/1` is moved to `0/1` by an explicit element of Γ0(p^n); the
/// other two vertices then land on `1/k, 1/(k+1)`, giving `[k mod p^n]`.
pub fn delta_images(tri: &[FareyFraction; 3], level: &Level) -> Result<Vec<DeltaTriangle>> {
    let (p, _) = prime_power(level)?;
    let big = level.value() as i128;
    let mut out = Vec::new();
    for (k, &u) in tri.iter().enumerate() {
        if u.is_infinity() || u.den() % p == 0 {
            continue;
        }
        let (num, den) = (u.num() as i128, u.den() as i128);
        // [[den, -num], [N g, d]] with den·d + num·N·g = 1.
        let (g, d, c) = ext_gcd(den, num * big);
        debug_assert_eq!(g, 1);
        let gamma = UnimodularMatrix::new(den, -num, big * c, d)
            .ok_or_else(|| Error::Internal("non-unimodular frame".into()))?;
        let mut ks = Vec::with_capacity(2);
        for (j, &w) in tri.iter().enumerate() {
            if j == k {
                continue;
            }
            let (wn, wd) = gamma.apply(w);
            // image is a Farey neighbor of 0/1, i.e. ±1/k'
            let k_val = match wn {
                1 => wd,
                -1 => -wd,
                _ => {
                    return Err(Error::Internal(format!(
                        "vertex {w} of a Farey triangle did not land next to 0/1"
                    )))
                }
            };
            ks.push(k_val);
        }
        let lo = ks[0].min(ks[1]);
        if (ks[0] - ks[1]).abs() != 1 {
            return Err(Error::Internal("images are not adjacent in Δ".into()));
        }
        out.push(DeltaTriangle(lo.rem_euclid(big) as i64));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Elements of Δ covered by the polygon of `seq`. The special triangle on
/// an odd side is a third of the Farey triangle just outside that side, so
/// that Farey triangle counts as covered too.
pub fn covered_by_sequence(seq: &FareySequence, level: &Level) -> Result<BTreeSet<DeltaTriangle>> {
    let mut out = BTreeSet::new();
    for tri in polygon_triangles(seq) {
        out.extend(delta_images(&tri, level)?);
    }
    for i in 0..seq.side_count() {
        let (l, r) = seq.side(i);
        if classify_side(l, r, level) == SideClass::Odd {
            out.extend(delta_images(&[l, mediant(l, r)?, r], level)?);
        }
    }
    Ok(out)
}

/// Closes a set under the equivalence relation of [`triangles_equivalent`],
/// solving the two congruences for each member.
pub fn saturate(set: &BTreeSet<DeltaTriangle>, level: &Level) -> BTreeSet<DeltaTriangle> {
    let n = level.value();
    let mut out = set.clone();
    for &DeltaTriangle(a) in set {
        // a(b+1) + 1 ≡ 0  =>  b ≡ -a⁻¹ - 1
        if let Some(inv) = mod_inv(a, n) {
            out.insert(DeltaTriangle((-inv - 1).rem_euclid(n)));
        }
        // b(a+1) + 1 ≡ 0  =>  b ≡ -(a+1)⁻¹
        if let Some(inv) = mod_inv(a + 1, n) {
            out.insert(DeltaTriangle((-inv).rem_euclid(n)));
        }
    }
    out
}

/// Elements of Δ covered by `S_1`. The closed-form cover must be contained
/// in the result.
pub fn covered_by_s1(level: &Level) -> Result<BTreeSet<DeltaTriangle>> {
    let s1 = crate::dklt::build_s1(level)?;
    let covered = saturate(&covered_by_sequence(&s1.sequence, level)?, level);
    let closed = closed_form_cover(level)?;
    if let Some(t) = closed.difference(&covered).next() {
        return Err(Error::Internal(format!("closed-form triangle {t:?} is not covered by S_1")));
    }
    Ok(covered)
}

/// Maximal runs of Δ outside `covered`, read cyclically; a run crossing
/// `[p^n - 1, p^n] → [0, 1]` is reported once, starting at its first element.
pub fn gaps(level: &Level, covered: &BTreeSet<DeltaTriangle>) -> Vec<Gap> {
    let n = level.value();
    let is_covered = |a: i64| covered.contains(&DeltaTriangle(a.rem_euclid(n)));
    let Some(anchor) = (0..n).find(|&a| is_covered(a)) else {
        return vec![Gap { start: 0, length: n }];
    };
    let mut out = Vec::new();
    let mut run: Option<Gap> = None;
    for step in 1..=n {
        let a = (anchor + step).rem_euclid(n);
        if is_covered(a) {
            if let Some(g) = run.take() {
                out.push(g);
            }
        } else {
            match run.as_mut() {
                Some(g) => g.length += 1,
                None => run = Some(Gap { start: a, length: 1 }),
            }
        }
    }
    out.sort_by_key(|g| g.start);
    out
}
