//! Independent certification of claimed Farey sequences for Γ0(N).
//!
//! Nothing here trusts the labels or intermediate state of the
//! constructions: pairings are recounted from denominators, cusp classes
//! from their invariants, and the appendix claims by full enumeration.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::arith::{ceil_sqrt, fibonacci, isqrt};
use crate::collar::{
    covered_by_s1, covered_by_sequence, gaps, orbit_count, saturate, triangles_equivalent,
    DeltaTriangle, Gap,
};
use crate::dklt::run_dklt;
use crate::farey::{farey_order_sequence, FareyFraction, FareySequence};
use crate::gamma0::{
    classify_denominators, cusp_class_key, cusp_count, index_gamma0, Level, SideClass, SideLabel,
};
use crate::generators::UnimodularMatrix;

/// Largest level accepted by [`verify_appendix`].
pub const APPENDIX_LIMIT: i64 = 3125;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub level: i64,
    pub checks: Vec<Check>,
    pub max_denominator: i64,
    pub max_denominator_multiplicity: usize,
    pub member_count: usize,
    pub cusp_classes_covered: usize,
}

impl VerificationReport {
    fn new(level: &Level, seq: Option<&FareySequence>) -> Self {
        let (max, mult) = seq.map_or((0, 0), |s| s.max_denominator());
        VerificationReport {
            level: level.value(),
            checks: Vec::new(),
            max_denominator: max,
            max_denominator_multiplicity: mult,
            member_count: seq.map_or(0, |s| s.len()),
            cusp_classes_covered: 0,
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends the checks of `other`, which must be for the same level.
    pub fn merge(&mut self, other: VerificationReport) {
        debug_assert_eq!(self.level, other.level);
        self.checks.extend(other.checks);
    }
}

/// How every side pairs, recomputed from denominators alone.
struct PairingCensus {
    class: Vec<SideClass>,
    /// Other sides each side pairs with.
    partners: Vec<Vec<usize>>,
}

fn census(seq: &FareySequence, level: &Level) -> PairingCensus {
    let sides = seq.side_count();
    let mut by_key: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut class = Vec::with_capacity(sides);
    for i in 0..sides {
        let (a, b) = seq.side_denominators(i);
        class.push(classify_denominators(a, b, level));
        by_key.entry(level.side_key(a, b)).or_default().push(i);
    }
    let partners = (0..sides)
        .map(|i| {
            let (a, b) = seq.side_denominators(i);
            by_key
                .get(&level.partner_key(a, b))
                .map(|v| v.iter().copied().filter(|&j| j != i).collect())
                .unwrap_or_default()
        })
        .collect();
    PairingCensus { class, partners }
}

fn list<T: std::fmt::Debug>(items: &[T]) -> String {
    const SHOWN: usize = 8;
    let mut s = format!("{:?}", &items[..items.len().min(SHOWN)]);
    if items.len() > SHOWN {
        s.push_str(&format!(" and {} more", items.len() - SHOWN));
    }
    s
}

/// Structural validity of `seq` as a Farey sequence for Γ0(N).
///
/// Every level gets the area identity `index = 3·(members − 1) + #odd`
/// (each Farey triangle contributes three fundamental triangles, each odd
/// side one special triangle); prime powers also get the member-count
/// formula `1 + ⌊index/3⌋`.
pub fn verify_sequence(seq: &FareySequence, level: &Level) -> VerificationReport {
    let mut report = VerificationReport::new(level, Some(seq));
    let entries = seq.entries();
    let n = level.value();
    let index = index_gamma0(level);

    let bad: Vec<usize> = (0..entries.len().saturating_sub(1))
        .filter(|&i| entries[i].cross(entries[i + 1]) != 1)
        .collect();
    let endpoints = entries.first() == Some(&FareyFraction::ZERO)
        && entries.last() == Some(&FareyFraction::ONE);
    report.check(
        "neighbors",
        bad.is_empty() && endpoints && entries.len() >= 2,
        if !endpoints {
            "sequence must run from 0/1 to 1/1".to_string()
        } else if bad.is_empty() {
            format!("{} consecutive pairs have determinant 1", entries.len() - 1)
        } else {
            format!("sides {} are not Farey neighbors", list(&bad))
        },
    );
    if !bad.is_empty() || !endpoints || entries.len() < 2 {
        // Nothing below is meaningful without a valid chain of neighbors.
        return report;
    }

    let r = isqrt(n);
    let contains = farey_order_sequence(r).is_ok_and(|fr| seq.contains_subsequence(&fr));
    report.check(
        "contains_order_sequence",
        contains,
        format!("Farey sequence of order {r} {} a subsequence", if contains { "is" } else { "is not" }),
    );

    let c = census(seq, level);
    let odd = c.class.iter().filter(|k| **k == SideClass::Odd).count();
    let even = c.class.iter().filter(|k| **k == SideClass::Even).count();
    let members = entries.len() as i64;
    let area = 3 * (members - 1) + odd as i64;
    report.check(
        "area",
        area == index,
        format!("3·({members} − 1) + {odd} odd sides = {area}, index {index}"),
    );
    if level.is_prime_power() {
        let expected = 1 + index / 3;
        report.check(
            "member_count",
            members == expected,
            format!("{members} members, expected 1 + ⌊{index}/3⌋ = {expected}"),
        );
    }

    let free: Vec<usize> = (0..c.class.len())
        .filter(|&i| c.class[i] == SideClass::Neither && c.partners[i].is_empty())
        .collect();
    report.check(
        "no_free_sides",
        free.is_empty(),
        if free.is_empty() {
            "every side is elliptic or paired".to_string()
        } else {
            let dens: Vec<_> = free.iter().map(|&i| seq.side_denominators(i)).collect();
            format!("{} free sides: {}", free.len(), list(&dens))
        },
    );

    // Each non-elliptic side pairs with exactly one other side, elliptic
    // sides with none.
    let ambiguous: Vec<usize> = (0..c.class.len())
        .filter(|&i| {
            let want = usize::from(c.class[i] == SideClass::Neither);
            c.partners[i].len() != want && !(want == 1 && c.partners[i].is_empty())
        })
        .collect();
    report.check(
        "unique_matching",
        ambiguous.is_empty() && free.is_empty(),
        if ambiguous.is_empty() {
            format!("{} pairs, {even} even, {odd} odd", (c.class.len() - even - odd) / 2)
        } else {
            let dens: Vec<_> = ambiguous.iter().map(|&i| seq.side_denominators(i)).collect();
            format!("sides without a unique partner: {}", list(&dens))
        },
    );

    if seq.labels().iter().any(Option::is_some) {
        let wrong: Vec<usize> = (0..c.class.len())
            .filter(|&i| {
                let expected = match c.class[i] {
                    SideClass::Even => Some(SideLabel::Even),
                    SideClass::Odd => Some(SideLabel::Odd),
                    SideClass::Neither => match c.partners[i].as_slice() {
                        [] => Some(SideLabel::Free),
                        [j] => Some(SideLabel::Paired(*j)),
                        _ => None,
                    },
                };
                expected.is_some_and(|e| seq.label(i) != Some(e))
            })
            .collect();
        report.check(
            "labels",
            wrong.is_empty(),
            if wrong.is_empty() {
                "stored labels agree with the recomputed pairing".to_string()
            } else {
                format!("stored labels disagree on sides {}", list(&wrong))
            },
        );
    }

    let classes: HashSet<(i64, i64)> = entries
        .iter()
        .copied()
        .chain([FareyFraction::INFINITY])
        .map(|x| cusp_class_key(x, level))
        .collect();
    let expected = cusp_count(level);
    report.cusp_classes_covered = classes.len();
    report.check(
        "cusp_classes",
        classes.len() as i64 == expected,
        format!("{} classes among vertices and ∞, expected {expected}", classes.len()),
    );

    if let Some((2, e)) = level.prime_power() {
        if e >= 2 {
            report.check(
                "no_elliptic_sides",
                odd + even == 0,
                format!("{even} even and {odd} odd sides at level 2^{e}"),
            );
        }
    }
    report
}

/// Bounds on the largest denominator for prime-power levels.
///
/// For `p = 2`, `n >= 2` the maximum must be exactly `2^(n−1)` and occur
/// once. For odd `p` it must satisfy
/// `2·max <= f_{p+1}·p^(n−1) + 2·f_p·⌈√(p^n)⌉`, an integer
/// over-approximation of `(f_{p+1}/2)·p^(n−1) + f_p·p^(n/2)`.
pub fn verify_bounds(seq: &FareySequence, level: &Level) -> VerificationReport {
    let mut report = VerificationReport::new(level, Some(seq));
    let (max, mult) = seq.max_denominator();
    match level.prime_power() {
        None => report.check("bounds", false, format!("level {} is not a prime power", level.value())),
        Some((2, n)) if n >= 2 => {
            let target = 1i64 << (n - 1);
            report.check(
                "optimal_maximum",
                max == target && mult == 1,
                format!("max {max} (×{mult}), expected {target} exactly once"),
            );
        }
        Some((2, _)) => report.check("optimal_maximum", true, "no bound claimed at level 2"),
        Some((p, n)) => {
            let (fp, fp1) = (fibonacci(p as u32), fibonacci(p as u32 + 1));
            let rhs = fp1 as i128 * p.pow(n - 1) as i128
                + 2 * fp as i128 * ceil_sqrt(level.value()) as i128;
            report.check(
                "fibonacci_bound",
                2 * max as i128 <= rhs,
                format!("2·{max} <= {fp1}·{p}^{} + 2·{fp}·⌈√{}⌉ = {rhs}", n - 1, level.value()),
            );
        }
    }
    report
}

/// Cusp width by direct search: the least `w >= 1` with `A·T^w·A⁻¹` in
/// Γ0(N), where `A` sends infinity to `x`.
pub fn width_oracle(x: FareyFraction, level: &Level) -> i64 {
    let a = if x.is_infinity() {
        UnimodularMatrix::IDENTITY
    } else {
        UnimodularMatrix::sending_infinity_to(x.num(), x.den())
    };
    let a_inv = a.inverse();
    (1..=level.value())
        .find(|&w| a.mul(&UnimodularMatrix::translation(w as i128)).mul(&a_inv).in_gamma0(level))
        .expect("w = N always works")
}

fn gap_summary(g: &[Gap]) -> String {
    let lens: Vec<i64> = g.iter().map(|g| g.length).collect();
    format!("{} gaps of lengths {:?}", g.len(), lens)
}

/// Full enumeration of Δ for a prime-power level `p^n <= 3125`, `n >= 2`:
/// orbit sizes against the equivalence criterion, and the gap bounds after
/// `S_1` and after each completion round.
pub fn verify_appendix(level: &Level) -> VerificationReport {
    let mut report = VerificationReport::new(level, None);
    let n_val = level.value();
    let Some((p, _)) = level.prime_power().filter(|&(_, n)| n >= 2) else {
        report.check("appendix", false, "needs a level p^n with n >= 2");
        return report;
    };
    if n_val > APPENDIX_LIMIT {
        report.check("appendix", false, format!("level exceeds the enumeration limit {APPENDIX_LIMIT}"));
        return report;
    }

    let mut orbits: Vec<BTreeSet<i64>> = Vec::with_capacity(n_val as usize);
    let mut mismatched = Vec::new();
    for a in 0..n_val {
        let mut orbit: BTreeSet<i64> = (0..n_val)
            .filter(|&b| b != a && triangles_equivalent(DeltaTriangle(a), DeltaTriangle(b), level))
            .collect();
        orbit.insert(a);
        if orbit_count(DeltaTriangle(a), level).ok() != Some(orbit.len() as i64) {
            mismatched.push(a);
        }
        orbits.push(orbit);
    }
    report.check(
        "orbit_counts",
        mismatched.is_empty(),
        if mismatched.is_empty() {
            format!("all {n_val} triangles match the closed-form orbit size")
        } else {
            format!("orbit size differs at {}", list(&mismatched))
        },
    );
    let distinct: BTreeSet<&BTreeSet<i64>> = orbits.iter().collect();
    let total: usize = distinct.iter().map(|o| o.len()).sum();
    let consistent = orbits.iter().all(|o| o.iter().all(|&b| orbits[b as usize] == *o))
        && total as i64 == n_val;
    report.check(
        "orbit_partition",
        consistent,
        format!("{} orbits of total size {total}", distinct.len()),
    );

    let run = match run_dklt(level) {
        Ok(run) => run,
        Err(e) => {
            report.check("construction", false, e.to_string());
            return report;
        }
    };
    let limit = 2 * p - 2;
    let after_s1 = covered_by_s1(level).map(|c| gaps(level, &c));
    let mut previous = match after_s1 {
        Ok(g) => {
            let worst = g.iter().map(|g| g.length).max().unwrap_or(0);
            report.check(
                "gaps_after_s1",
                worst <= limit,
                format!("{}; bound {limit}", gap_summary(&g)),
            );
            worst
        }
        Err(e) => {
            report.check("gaps_after_s1", false, e.to_string());
            return report;
        }
    };

    for (i, seq) in run.rounds.iter().enumerate() {
        let round = i as i64 + 1;
        let g = match covered_by_sequence(seq, level) {
            Ok(c) => gaps(level, &saturate(&c, level)),
            Err(e) => {
                report.check("gaps_after_round", false, e.to_string());
                return report;
            }
        };
        let worst = g.iter().map(|g| g.length).max().unwrap_or(0);
        let bound = (limit - 2 * round).max(0);
        report.check(
            &format!("gaps_after_round_{round}"),
            worst <= bound && worst <= (previous - 2).max(0),
            format!("{}; bound {bound}, previous maximum {previous}", gap_summary(&g)),
        );
        previous = worst;
    }
    report.check(
        "delta_covered",
        previous == 0,
        format!("largest gap after completion: {previous}"),
    );
    report
}
