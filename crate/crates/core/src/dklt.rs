//! Optimized construction of a Farey sequence for Γ0(p^n).
//!
//! The pipeline is
//!
//! 1. the Farey sequence `F_r` of order `r = ⌊p^(n/2)⌋`;
//! 2. for every free side `(a, b₀p^m)` of `F_r` (`p ∤ a b₀`, `1 <= m < n/2`),
//!    a balanced chain of mediants closing the gap in the collar of the
//!    intermediate-width cusp at `b₀p^m`, giving `S_1`;
//! 3. completion of the remaining free sides, which all have denominators
//!    prime to `p`: one mediant per side when `p = 2`, otherwise rounds of
//!    single mediants (at most `p - 1` rounds).
//!
//! For `p = 2` the result has largest denominator exactly `2^(n-1)`, attained
//! once.

use std::collections::{BTreeMap, HashMap};

use crate::arith::{isqrt, mod_inv, mul_mod, valuation};
use crate::error::{Error, Result};
use crate::farey::{farey_order_sequence, mediant, FareyFraction, FareySequence};
use crate::gamma0::{free_sides, label_all_sides, sides_paired, Level, PairingCounter};

fn prime_power(level: &Level) -> Result<(i64, u32)> {
    level.prime_power().ok_or(Error::NotPrimePower(level.value()))
}

/// A balanced chain attached to the free side `(a, b)` of `F_r`, closing
/// against the partner side `(x, y)` of `F_r`.
///
/// The inserted vertices read `a+b, …, a+v1·b` inside `(a, b)` and
/// `y+v2·x, …, y+x` inside `(x, y)`; afterwards `(a+v1·b, b)` pairs with
/// `(x, y+v2·x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chain {
    pub a: i64,
    pub b: i64,
    /// Valuation of `b` at `p`.
    pub m: u32,
    /// Least `v >= 1` with `(a + v·b, b)` paired to a side of `F_r`.
    pub v: i64,
    pub v1: i64,
    pub v2: i64,
    pub x: i64,
    pub y: i64,
    /// Index of the side `(a, b)` in `F_r`.
    pub side: usize,
    /// Index of the side `(x, y)` in `F_r`.
    pub partner_side: usize,
    /// Number of further partner sides found at the same `v` (expected 0).
    pub ambiguity: usize,
}

impl Chain {
    /// Interior denominators inserted into `(a, b)`, left to right.
    pub fn left_vertices(&self) -> Vec<i64> {
        (1..=self.v1).map(|k| self.a + k * self.b).collect()
    }

    /// Interior denominators inserted into `(x, y)`, left to right.
    pub fn right_vertices(&self) -> Vec<i64> {
        (1..=self.v2).rev().map(|k| self.y + k * self.x).collect()
    }

    /// The two paired sides created by the chain.
    pub fn closing_pair(&self) -> ((i64, i64), (i64, i64)) {
        ((self.a + self.v1 * self.b, self.b), (self.x, self.y + self.v2 * self.x))
    }
}

/// Locates chain partners in `F_r` in logarithmic time.
///
/// For a side `(x, y)` with `x = x₀p^m` put `c = y·x₀⁻¹ mod p^(n-m)`, written
/// `c = r + q·p^m`. The side `(a + v·b, b)`, `b = b₀p^m`, pairs with `(x, y)`
/// exactly when `r ≡ -a·b₀⁻¹ (mod p^m)` and `q ≡ q_e - v (mod p^(n-2m))`,
/// so the least `v` is the cyclic predecessor of `q_e` among the candidates.
pub struct ChainFinder<'a> {
    fr: &'a FareySequence,
    level: Level,
    p: i64,
    n: u32,
    buckets: HashMap<(u32, i64), BTreeMap<i64, Vec<usize>>>,
}

impl<'a> ChainFinder<'a> {
    pub fn new(fr: &'a FareySequence, level: &Level) -> Result<Self> {
        let (p, n) = prime_power(level)?;
        let mut buckets: HashMap<(u32, i64), BTreeMap<i64, Vec<usize>>> = HashMap::new();
        for j in 0..fr.side_count() {
            let (x, y) = fr.side_denominators(j);
            let m = valuation(x, p);
            if m == 0 || 2 * m >= n {
                continue;
            }
            let pm = p.pow(m);
            let modulus = p.pow(n - m);
            let c = mul_mod(y, mod_inv(x / pm, modulus).expect("unit"), modulus);
            buckets
                .entry((m, c % pm))
                .or_default()
                .entry(c / pm)
                .or_default()
                .push(j);
        }
        Ok(ChainFinder { fr, level: level.clone(), p, n, buckets })
    }

    /// Builds the chain for the free side `side_index` of `F_r`.
    pub fn build_chain(&self, side_index: usize) -> Result<Chain> {
        let (p, n) = (self.p, self.n);
        if side_index >= self.fr.side_count() {
            return Err(Error::SideOutOfRange { index: side_index, sides: self.fr.side_count() });
        }
        let (a, b) = self.fr.side_denominators(side_index);
        if a % p == 0 || b % p != 0 {
            return Err(Error::Structural(format!(
                "side ({a}, {b}) is not of the form (a, b0*p^m) with p not dividing a"
            )));
        }
        let m = valuation(b, p);
        if 2 * m >= n {
            return Err(Error::Structural(format!(
                "free side ({a}, {b}) has valuation {m} >= n/2"
            )));
        }
        let pm = p.pow(m);
        let modulus = p.pow(n - m);
        let width = p.pow(n - 2 * m);
        let c_e = mul_mod(-a, mod_inv(b / pm, modulus).expect("unit"), modulus);
        let (r_e, q_e) = (c_e % pm, c_e / pm);
        let no_partner = || {
            Error::Internal(format!("no partner side for ({a}, {b}) below v = {width}"))
        };
        let tree = self.buckets.get(&(m, r_e)).ok_or_else(no_partner)?;
        let (&q, sides) = tree
            .range(..q_e)
            .next_back()
            .or_else(|| tree.range(q_e + 1..).next_back())
            .ok_or_else(no_partner)?;
        let v = (q_e - q).rem_euclid(width);
        let partner_side = sides[0];
        let (x, y) = self.fr.side_denominators(partner_side);
        if !sides_paired((a + v * b, b), (x, y), &self.level) {
            return Err(Error::Internal(format!(
                "chain partner ({x}, {y}) does not pair with ({}, {b})",
                a + v * b
            )));
        }
        Ok(Chain {
            a,
            b,
            m,
            v,
            v1: (v + 1) / 2,
            v2: v / 2,
            x,
            y,
            side: side_index,
            partner_side,
            ambiguity: sides.len() - 1,
        })
    }
}

/// Builds the chain for one free side of `fr = F_r`.
pub fn build_chain(fr: &FareySequence, side_index: usize, level: &Level) -> Result<Chain> {
    ChainFinder::new(fr, level)?.build_chain(side_index)
}

/// `S_1` together with how it was assembled.
#[derive(Clone, Debug)]
pub struct S1Build {
    pub fr: FareySequence,
    pub chains: Vec<Chain>,
    pub sequence: FareySequence,
    /// For every entry of `sequence`, the chain that inserted it.
    pub provenance: Vec<Option<usize>>,
}

impl S1Build {
    /// The chain that side `i` of `S_1` belongs to, if an endpoint of the
    /// side was inserted by a chain.
    pub fn chain_of_side(&self, i: usize) -> Option<usize> {
        self.provenance[i].or(self.provenance[i + 1])
    }
}

/// `F_r` with the chains of all its free sides `(a, b₀p^m)` inserted,
/// processed left to right.
pub fn build_s1(level: &Level) -> Result<S1Build> {
    let (p, n) = prime_power(level)?;
    if n < 2 {
        return Err(Error::InvalidLevel { level: level.value(), reason: "need N = p^n with n >= 2" });
    }
    let fr = farey_order_sequence(isqrt(level.value()))?;
    let finder = ChainFinder::new(&fr, level)?;
    let chain_sides: Vec<usize> = free_sides(&fr, level)
        .into_iter()
        .filter(|&i| {
            let (a, b) = fr.side_denominators(i);
            a % p != 0 && b % p == 0
        })
        .collect();
    let chains = chain_sides
        .iter()
        .map(|&i| finder.build_chain(i))
        .collect::<Result<Vec<_>>>()?;

    // side index of F_r -> (chain id, fractions to insert)
    let mut inserts: HashMap<usize, (usize, Vec<FareyFraction>)> = HashMap::new();
    let entries = fr.entries();
    for (id, chain) in chains.iter().enumerate() {
        let (l, r) = (entries[chain.side], entries[chain.side + 1]);
        let left = (1..=chain.v1).map(|k| combine(l, r, 1, k)).collect();
        let (xl, yr) = (entries[chain.partner_side], entries[chain.partner_side + 1]);
        let right = (1..=chain.v2).rev().map(|k| combine(xl, yr, k, 1)).collect();
        for (side, verts) in [(chain.side, left), (chain.partner_side, right)] {
            if inserts.insert(side, (id, verts)).is_some() {
                return Err(Error::Internal(format!(
                    "side {side} of F_r is used by two chains"
                )));
            }
        }
    }

    let mut out = Vec::with_capacity(entries.len() + inserts.len() * 2);
    let mut provenance = Vec::with_capacity(out.capacity());
    for (i, &e) in entries.iter().enumerate() {
        out.push(e);
        provenance.push(None);
        if let Some((id, verts)) = inserts.get(&i) {
            for &v in verts {
                out.push(v);
                provenance.push(Some(*id));
            }
        }
    }
    let sequence = FareySequence::from_entries(out)?;
    Ok(S1Build { fr, chains, sequence, provenance })
}

/// `k_l·l + k_r·r` taken entrywise on numerators and denominators.
fn combine(l: FareyFraction, r: FareyFraction, k_l: i64, k_r: i64) -> FareyFraction {
    FareyFraction::new_unchecked(k_l * l.num() + k_r * r.num(), k_l * l.den() + k_r * r.den())
}

/// Completion for `p = 2`: one mediant into every free side of `S_1`.
/// Every such side has odd denominators whose sum has 2-adic valuation
/// greater than `n/2`.
pub fn complete_p2(s1: &FareySequence, level: &Level) -> Result<FareySequence> {
    let (p, n) = prime_power(level)?;
    if p != 2 {
        return Err(Error::Structural(format!("single-mediant completion needs p = 2, got {p}")));
    }
    let free = free_sides(s1, level);
    for &i in &free {
        let (a, b) = s1.side_denominators(i);
        if a % 2 == 0 || b % 2 == 0 {
            return Err(Error::Structural(format!("free side ({a}, {b}) of S_1 is not odd")));
        }
        let val = valuation(a + b, 2);
        if 2 * val <= n {
            return Err(Error::Structural(format!(
                "free side ({a}, {b}) has sum of 2-adic valuation {val} <= n/2"
            )));
        }
    }
    let out = insert_mediants(s1, &free)?;
    let remaining = free_sides(&out, level).len();
    if remaining > 0 {
        return Err(Error::FreeSidesRemain(remaining));
    }
    Ok(out)
}

fn insert_mediants(seq: &FareySequence, sides: &[usize]) -> Result<FareySequence> {
    let entries = seq.entries();
    let mut out = Vec::with_capacity(entries.len() + sides.len());
    let mut next = sides.iter().peekable();
    for i in 0..entries.len() {
        out.push(entries[i]);
        if next.peek() == Some(&&i) {
            next.next();
            out.push(mediant(entries[i], entries[i + 1])?);
        }
    }
    Ok(FareySequence::from_entries_unchecked(out))
}

/// Round-based completion for any prime. Each round snapshots the free
/// sides at its start and inserts a mediant into each of them that is still
/// free when reached; sides created during the round wait for the next one.
/// Returns the sequence after every round.
pub fn complete_rounds(s1: &FareySequence, level: &Level) -> Result<Vec<FareySequence>> {
    let (p, _) = prime_power(level)?;
    let mut rounds = Vec::new();
    let mut current = s1.clone();
    loop {
        let snapshot = free_sides(&current, level);
        if snapshot.is_empty() {
            return Ok(rounds);
        }
        if rounds.len() as i64 >= p - 1 {
            return Err(Error::Internal(format!(
                "completion needs more than p - 1 = {} rounds",
                p - 1
            )));
        }
        let mut counter = PairingCounter::from_sequence(&current, level);
        let entries = current.entries();
        let mut out = Vec::with_capacity(entries.len() + snapshot.len());
        let mut next = snapshot.iter().peekable();
        for i in 0..entries.len() {
            out.push(entries[i]);
            if next.peek() == Some(&&i) {
                next.next();
                let (l, r) = (entries[i], entries[i + 1]);
                if counter.is_free(l.den(), r.den()) {
                    let m = mediant(l, r)?;
                    counter.remove(l.den(), r.den());
                    counter.add(l.den(), m.den());
                    counter.add(m.den(), r.den());
                    out.push(m);
                }
            }
        }
        current = FareySequence::from_entries_unchecked(out);
        rounds.push(current.clone());
    }
}

/// Full run of the prime-power construction.
#[derive(Clone, Debug)]
pub struct DkltRun {
    pub s1: S1Build,
    /// Sequence after each completion round (one round for `p = 2`).
    pub rounds: Vec<FareySequence>,
    /// Final labeled sequence.
    pub sequence: FareySequence,
}

pub fn run_dklt(level: &Level) -> Result<DkltRun> {
    let (p, _) = prime_power(level)?;
    let s1 = build_s1(level)?;
    let rounds = if p == 2 {
        let t = complete_p2(&s1.sequence, level)?;
        if t == s1.sequence {
            Vec::new()
        } else {
            vec![t]
        }
    } else {
        complete_rounds(&s1.sequence, level)?
    };
    let last = rounds.last().unwrap_or(&s1.sequence);
    let sequence = label_all_sides(last, level);
    Ok(DkltRun { s1, rounds, sequence })
}
