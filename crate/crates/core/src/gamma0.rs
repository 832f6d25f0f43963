//! Arithmetic of the congruence subgroups Γ0(N): index, cusps and their
//! widths, and the even / odd / paired / free classification of sides.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd, mod_inv, mul_mod};
use crate::error::{Error, Result};
use crate::farey::{FareyFraction, FareySequence};
use crate::generators::UnimodularMatrix;

/// Largest accepted level. Keeps every product formed below (matrix
/// entries, pairing sums) comfortably inside `i128`.
pub const MAX_LEVEL: i64 = 1 << 40;

/// A level `N >= 2` together with its factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    n: i64,
    factors: Vec<(i64, u32)>,
    // (prime power q, CRT idempotent for q modulo N)
    crt: Vec<(i64, i64, i64)>,
}

impl Level {
    pub fn new(n: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidLevel { level: n, reason: "level must be at least 2" });
        }
        if n > MAX_LEVEL {
            return Err(Error::InvalidLevel { level: n, reason: "level exceeds 2^40" });
        }
        let factors = arith::factorize(n);
        let crt = factors
            .iter()
            .map(|&(p, e)| {
                let q = p.pow(e);
                let rest = n / q;
                let coef = mul_mod(rest, mod_inv(rest, q).unwrap_or(0), n);
                (p, q, coef)
            })
            .collect();
        Ok(Level { n, factors, crt })
    }

    /// The level as an integer.
    pub fn value(&self) -> i64 {
        self.n
    }

    pub fn factorization(&self) -> &[(i64, u32)] {
        &self.factors
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    /// `(p, n)` when the level is `p^n`.
    pub fn prime_power(&self) -> Option<(i64, u32)> {
        if self.is_prime_power() {
            Some(self.factors[0])
        } else {
            None
        }
    }

    /// Canonical representative of `(c : d)` in P¹(ℤ/N). Requires
    /// `gcd(c, d, N) = 1`.
    ///
    /// Each prime-power component is normalized to `(c/d, 1)` when `d` is a
    /// unit and to `(1, d/c)` otherwise; the components are glued by CRT.
    pub(crate) fn p1_key(&self, c: i64, d: i64) -> (i64, i64) {
        if let [(p, q, _)] = self.crt[..] {
            return p1_component(c, d, p, q);
        }
        let (mut kc, mut kd) = (0i64, 0i64);
        for &(p, q, coef) in &self.crt {
            let (cc, dd) = p1_component(c, d, p, q);
            kc = (kc + mul_mod(cc, coef, self.n)) % self.n;
            kd = (kd + mul_mod(dd, coef, self.n)) % self.n;
        }
        (kc, kd)
    }

    /// Key of the side with denominators `(a, b)`.
    pub(crate) fn side_key(&self, a: i64, b: i64) -> (i64, i64) {
        self.p1_key(a, b)
    }

    /// Key that any side paired with `(a, b)` must have: `a·x + b·y ≡ 0`
    /// holds exactly when `(x : y) = (-b : a)`.
    pub(crate) fn partner_key(&self, a: i64, b: i64) -> (i64, i64) {
        self.p1_key(-b, a)
    }
}

fn p1_component(c: i64, d: i64, p: i64, q: i64) -> (i64, i64) {
    let (c, d) = (c.rem_euclid(q), d.rem_euclid(q));
    if d % p != 0 {
        (mul_mod(c, mod_inv(d, q).expect("unit"), q), 1)
    } else {
        (1, mul_mod(d, mod_inv(c, q).expect("primitive pair"), q))
    }
}

/// Index of Γ0(N) in PSL(2, ℤ): `N · ∏_{p | N} (1 + 1/p)`.
pub fn index_gamma0(level: &Level) -> i64 {
    level
        .factorization()
        .iter()
        .fold(level.value(), |acc, &(p, _)| acc / p * (p + 1))
}

/// Number of inequivalent cusps: `Σ_{d | N} φ(gcd(d, N/d))`.
pub fn cusp_count(level: &Level) -> i64 {
    let n = level.value();
    arith::divisors(n)
        .into_iter()
        .map(|d| arith::euler_phi(gcd(d, n / d)))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CuspKind {
    Maximal,
    Intermediate,
    Minimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CuspClass {
    pub representative: FareyFraction,
    pub width: i64,
    /// Only meaningful for prime-power levels.
    pub kind: Option<CuspKind>,
}

/// The cusp class of `x` under Γ0(N).
pub fn cusp_class(x: FareyFraction, level: &Level) -> CuspClass {
    let width = cusp_width(x, level);
    let kind = level.is_prime_power().then(|| {
        if width == level.value() {
            CuspKind::Maximal
        } else if width == 1 {
            CuspKind::Minimal
        } else {
            CuspKind::Intermediate
        }
    });
    CuspClass { representative: x, width, kind }
}

/// Width of the cusp `x`.
///
/// For `N = p^n` and `x = a/(b·p^i)` this is `p^(n-2i)` when `2i <= n` and
/// `1` otherwise. Other levels search the divisors of `N` for the least `w`
/// with `A·T^w·A⁻¹ ∈ Γ0(N)`, `A` sending infinity to `x`.
pub fn cusp_width(x: FareyFraction, level: &Level) -> i64 {
    if x.is_infinity() {
        return 1;
    }
    if let Some((p, n)) = level.prime_power() {
        let i = arith::valuation(x.den(), p);
        return if 2 * i >= n { 1 } else { p.pow(n - 2 * i) };
    }
    let a = UnimodularMatrix::sending_infinity_to(x.num(), x.den());
    let a_inv = a.inverse();
    arith::divisors(level.value())
        .into_iter()
        .find(|&w| {
            let m = a.mul(&UnimodularMatrix::translation(w as i128)).mul(&a_inv);
            m.lower_left() % level.value() as i128 == 0
        })
        .unwrap_or(level.value())
}

/// Complete Γ0(N)-invariant of a cusp: `(d, x·(y/d) mod gcd(d, N/d))` with
/// `d = gcd(y, N)` for `x = num/y`.
pub fn cusp_class_key(x: FareyFraction, level: &Level) -> (i64, i64) {
    let n = level.value();
    if x.is_infinity() {
        return (n, 0);
    }
    let d = gcd(x.den(), n);
    let g = gcd(d, n / d);
    (d, mul_mod(x.num(), x.den() / d, g))
}

/// Whether `x` and `y` lie in the same Γ0(N)-orbit.
///
/// Both are first moved to denominator `gcd(den, N)`; representatives with
/// a common denominator `d` are then compared modulo `gcd(d, N/d)`.
pub fn cusp_equivalent(x: FareyFraction, y: FareyFraction, level: &Level) -> bool {
    cusp_class_key(x, level) == cusp_class_key(y, level)
}

/// Elliptic type of a side, decided from its denominators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SideClass {
    Even,
    Odd,
    Neither,
}

pub fn classify_denominators(a: i64, b: i64, level: &Level) -> SideClass {
    let (a, b, n) = (a as i128, b as i128, level.value() as i128);
    if (a * a + b * b) % n == 0 {
        SideClass::Even
    } else if (a * a + a * b + b * b) % n == 0 {
        SideClass::Odd
    } else {
        SideClass::Neither
    }
}

/// Classifies the side `(left, right)`. Even takes precedence; the two
/// predicates can only overlap for `N <= 3`.
pub fn classify_side(left: FareyFraction, right: FareyFraction, level: &Level) -> SideClass {
    classify_denominators(left.den(), right.den(), level)
}

/// `N | a·x + b·y` for sides with denominators `s = (a, b)`, `t = (x, y)`.
pub fn sides_paired(s: (i64, i64), t: (i64, i64), level: &Level) -> bool {
    let sum = s.0 as i128 * t.0 as i128 + s.1 as i128 * t.1 as i128;
    sum % level.value() as i128 == 0
}

/// Final label of a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SideLabel {
    Even,
    Odd,
    /// Paired with the side at the given index.
    Paired(usize),
    Free,
}

impl SideLabel {
    pub fn tag(self) -> &'static str {
        match self {
            SideLabel::Even => "even",
            SideLabel::Odd => "odd",
            SideLabel::Paired(_) => "paired",
            SideLabel::Free => "free",
        }
    }

    pub fn partner(self) -> Option<usize> {
        match self {
            SideLabel::Paired(j) => Some(j),
            _ => None,
        }
    }

    pub fn is_elliptic(self) -> bool {
        matches!(self, SideLabel::Even | SideLabel::Odd)
    }
}

/// Labels every side of `seq`. Sides are scanned left to right and each
/// unmatched non-elliptic side is matched with the leftmost unmatched side
/// it pairs with; whatever stays unmatched is free.
pub fn label_all_sides(seq: &FareySequence, level: &Level) -> FareySequence {
    let sides = seq.side_count();
    let mut labels = vec![SideLabel::Free; sides];
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut candidates = Vec::new();
    for (i, label) in labels.iter_mut().enumerate() {
        let (a, b) = seq.side_denominators(i);
        match classify_denominators(a, b, level) {
            SideClass::Even => *label = SideLabel::Even,
            SideClass::Odd => *label = SideLabel::Odd,
            SideClass::Neither => {
                buckets.entry(level.side_key(a, b)).or_default().push(i);
                candidates.push(i);
            }
        }
    }
    let mut cursor: HashMap<(i64, i64), usize> = HashMap::new();
    let mut matched = vec![false; sides];
    for i in candidates {
        if matched[i] {
            continue;
        }
        let (a, b) = seq.side_denominators(i);
        let pk = level.partner_key(a, b);
        let Some(bucket) = buckets.get(&pk) else { continue };
        let pos = cursor.entry(pk).or_insert(0);
        while *pos < bucket.len() && matched[bucket[*pos]] {
            *pos += 1;
        }
        if let Some(&j) = bucket.get(*pos) {
            matched[i] = true;
            matched[j] = true;
            labels[i] = SideLabel::Paired(j);
            labels[j] = SideLabel::Paired(i);
        }
    }
    let mut out = seq.clone();
    out.set_labels(labels, level.clone());
    out
}

/// A side may receive a mediant when it is not elliptic and pairs with no
/// side of the current sequence. Direct scan over all sides.
pub fn is_insertable(side_index: usize, seq: &FareySequence, level: &Level) -> Result<bool> {
    if side_index >= seq.side_count() {
        return Err(Error::SideOutOfRange { index: side_index, sides: seq.side_count() });
    }
    let s = seq.side_denominators(side_index);
    if classify_denominators(s.0, s.1, level) != SideClass::Neither {
        return Ok(false);
    }
    Ok((0..seq.side_count())
        .filter(|&j| j != side_index)
        .all(|j| !sides_paired(s, seq.side_denominators(j), level)))
}

/// Multiset of side keys of an evolving sequence, for O(1) freeness tests.
#[derive(Clone, Debug)]
pub(crate) struct PairingCounter {
    level: Level,
    counts: HashMap<(i64, i64), u32>,
}

impl PairingCounter {
    pub(crate) fn new(level: &Level) -> Self {
        PairingCounter { level: level.clone(), counts: HashMap::new() }
    }

    pub(crate) fn from_sequence(seq: &FareySequence, level: &Level) -> Self {
        let mut c = Self::new(level);
        for i in 0..seq.side_count() {
            let (a, b) = seq.side_denominators(i);
            c.add(a, b);
        }
        c
    }

    pub(crate) fn add(&mut self, a: i64, b: i64) {
        *self.counts.entry(self.level.side_key(a, b)).or_insert(0) += 1;
    }

    pub(crate) fn remove(&mut self, a: i64, b: i64) {
        let key = self.level.side_key(a, b);
        if let Some(c) = self.counts.get_mut(&key) {
            *c -= 1;
            if *c == 0 {
                self.counts.remove(&key);
            }
        }
    }

    /// Number of current sides that pair with `(a, b)`.
    pub(crate) fn partners(&self, a: i64, b: i64) -> u32 {
        self.counts
            .get(&self.level.partner_key(a, b))
            .copied()
            .unwrap_or(0)
    }

    pub(crate) fn is_free(&self, a: i64, b: i64) -> bool {
        classify_denominators(a, b, &self.level) == SideClass::Neither && self.partners(a, b) == 0
    }
}

/// Indices of the free sides of `seq`.
pub fn free_sides(seq: &FareySequence, level: &Level) -> Vec<usize> {
    let counter = PairingCounter::from_sequence(seq, level);
    (0..seq.side_count())
        .filter(|&i| {
            let (a, b) = seq.side_denominators(i);
            counter.is_free(a, b)
        })
        .collect()
}
