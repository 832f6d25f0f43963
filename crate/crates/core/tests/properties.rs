//! Invariants of the Farey machinery under random inputs.

use gamma0_core::arith::{euler_phi, gcd};
use gamma0_core::gamma0::free_sides;
use gamma0_core::generators::{even_self_pairing, odd_self_pairing};
use gamma0_core::*;
use proptest::prelude::*;

/// A sequence grown from `{0/1, 1/1}` by inserting at the given positions,
/// each taken modulo the current side count.
fn grown(picks: &[usize]) -> FareySequence {
    picks.iter().fold(FareySequence::unit(), |seq, &k| {
        seq.insert_at(k % seq.side_count()).unwrap()
    })
}

fn picks() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..1000, 0..60)
}

proptest! {
    #[test]
    fn insertions_keep_neighbors(picks in picks()) {
        let seq = grown(&picks);
        prop_assert_eq!(seq.len(), picks.len() + 2);
        for w in seq.entries().windows(2) {
            prop_assert_eq!(w[0].cross(w[1]), 1);
        }
        for f in seq.entries() {
            prop_assert_eq!(gcd(f.num(), f.den()), 1);
        }
    }

    #[test]
    fn denominators_determine_numerators(picks in picks()) {
        let seq = grown(&picks);
        let back = numerators_from_denominators(&seq.denominators()).unwrap();
        prop_assert_eq!(back.entries(), seq.entries());
    }

    #[test]
    fn order_sequence_length(r in 1i64..200) {
        let fr = farey_order_sequence(r).unwrap();
        let expected: i64 = 1 + (1..=r).map(euler_phi).sum::<i64>();
        prop_assert_eq!(fr.len() as i64, expected);
    }

    #[test]
    fn mediant_has_least_denominator(r in 2i64..40, k in 0usize..1000) {
        let fr = farey_order_sequence(r).unwrap();
        let (l, rt) = fr.side(k % fr.side_count());
        let m = mediant(l, rt).unwrap();
        // no fraction strictly between l and rt has a smaller denominator
        for den in 1..m.den() {
            for num in 0..=den {
                let above_l = num as i128 * l.den() as i128 > l.num() as i128 * den as i128;
                let below_r = (num as i128) * (rt.den() as i128) < (rt.num() as i128) * (den as i128);
                prop_assert!(!(above_l && below_r), "{num}/{den} lies between {l} and {rt}");
            }
        }
        prop_assert!(l.cross(m) == 1 && m.cross(rt) == 1);
    }

    #[test]
    fn parents_rebuild_the_fraction(picks in picks()) {
        let seq = grown(&picks);
        for &f in seq.entries() {
            if let Some((l, r)) = f.parents() {
                prop_assert_eq!(mediant(l, r).unwrap(), f);
            }
        }
    }

    #[test]
    fn pairing_is_symmetric(a in 1i64..500, b in 1i64..500, x in 1i64..500, y in 1i64..500, n in 2i64..300) {
        let l = Level::new(n).unwrap();
        prop_assert_eq!(sides_paired((a, b), (x, y), &l), sides_paired((x, y), (a, b), &l));
    }

    #[test]
    fn cllt_output_verifies(n in 4i64..400) {
        let l = Level::new(n).unwrap();
        let seq = run_cllt(&l, Seed::Unit).unwrap();
        let report = verify_sequence(&seq, &l);
        prop_assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        prop_assert!(free_sides(&seq, &l).is_empty());
    }

    #[test]
    fn generators_are_valid(n in 4i64..300) {
        let l = Level::new(n).unwrap();
        let seq = run_cllt(&l, Seed::OrderR).unwrap();
        let gens = generator_set(&seq, &l).unwrap();
        let elliptic = seq.labels().iter().filter(|x| x.unwrap().is_elliptic()).count();
        prop_assert_eq!(gens.len(), (seq.side_count() - elliptic) / 2 + elliptic);
        for g in gens {
            let m = g.matrix;
            let [_, _, c, d] = m.entries();
            prop_assert_eq!(m.determinant(), 1);
            prop_assert!(c > 0 || (c == 0 && d > 0));
            prop_assert!(m.in_gamma0(&l));
            let (sl, sr) = seq.side(g.side);
            match g.kind {
                GeneratorKind::Pairing => {
                    let (tl, tr) = seq.side(g.partner.unwrap());
                    let pair = |f: FareyFraction| (f.num() as i128, f.den() as i128);
                    prop_assert_eq!(m.apply(sl), pair(tr));
                    prop_assert_eq!(m.apply(sr), pair(tl));
                    prop_assert_eq!(m.inverse().apply(tr), pair(sl));
                    prop_assert_eq!(m.inverse().apply(tl), pair(sr));
                    let (a, b, x, y) = (sl.den(), sr.den(), tl.den(), tr.den());
                    prop_assert_eq!(c.abs(), (a * x + b * y) as i128);
                }
                GeneratorKind::Even => {
                    prop_assert!(m.pow(2).is_identity());
                    prop_assert_eq!(c.abs(), (sl.den().pow(2) + sr.den().pow(2)) as i128);
                }
                GeneratorKind::Odd => {
                    prop_assert!(m.pow(3).is_identity());
                    let (a, b) = (sl.den(), sr.den());
                    prop_assert_eq!(c.abs(), (a * a + a * b + b * b) as i128);
                }
            }
        }
    }

    #[test]
    fn cusp_key_is_invariant(n in 2i64..200, num in 0i64..400, den in 1i64..400, k in -5i64..5) {
        prop_assume!(gcd(num, den) == 1 && num <= den);
        let l = Level::new(n).unwrap();
        let x = FareyFraction::new(num, den).unwrap();
        // move x by a lower-triangular element [[1, 0], [kN, 1]] of Γ0(N)
        let g = UnimodularMatrix::new(1, 0, (k * n) as i128, 1).unwrap();
        let (p, q) = g.apply(x);
        prop_assume!(q > 0);
        // and back into [0, 1] by a translation
        let gx = FareyFraction::new(p.rem_euclid(q) as i64, q as i64).unwrap();
        prop_assert!(cusp_equivalent(x, gx, &l));
    }
}

#[test]
fn self_pairing_examples() {
    let f = |a, b| FareyFraction::new(a, b).unwrap();
    let m = even_self_pairing((f(0, 1), f(1, 2)), &Level::new(5).unwrap()).unwrap();
    assert_eq!(m.lower_left(), 5);
    assert_eq!(m.apply(f(0, 1)), (1, 2));
    let m = odd_self_pairing((f(0, 1), f(1, 2)), &Level::new(7).unwrap()).unwrap();
    assert_eq!(m.lower_left(), 7);
    assert_eq!(m.apply(f(0, 1)), (1, 2));
    assert_eq!(m.apply(f(1, 2)), (1, 3));
    assert_eq!(m.apply(f(1, 3)), (0, 1));
}

#[test]
fn elliptic_involutions_for_small_primes() {
    for p in [5, 13, 17] {
        let l = Level::new(p).unwrap();
        let seq = run_cllt(&l, Seed::Unit).unwrap();
        let even: Vec<_> = generator_set(&seq, &l)
            .unwrap()
            .into_iter()
            .filter(|g| g.kind == GeneratorKind::Even)
            .collect();
        assert_eq!(even.len(), 2, "N = {p}");
        assert!(even.iter().all(|g| g.matrix.pow(2).is_identity()));
    }
}
