use bhcount::asymptotics::li;
use bhcount::census::*;
use bhcount::polynomial::{check_family, parse_family, PolyFamily};
use bhcount::primes::is_prime_u64;

fn fam(s: &str) -> PolyFamily {
    check_family(&parse_family(s).unwrap()).unwrap()
}

#[test]
fn q_counts_are_monotone() {
    let f = fam("t^2+1");
    let mut last = 0;
    for x in (0..=5_000).step_by(250) {
        let c = count_q(&f, x).unwrap().count;
        assert!(c >= last);
        last = c;
    }
    assert_eq!(count_q(&f, 0).unwrap().count, 0);
    let expect = [(100, 19), (1_000, 112), (10_000, 841), (100_000, 6_656)];
    for (x, e) in expect {
        assert_eq!(count_q(&f, x).unwrap().count, e, "x = {x}");
    }
}

#[test]
fn q_count_matches_direct_enumeration() {
    let f = fam("t, t+2, t+6");
    let direct = (1..=20_000u64)
        .filter(|&n| is_prime_u64(n) && is_prime_u64(n + 2) && is_prime_u64(n + 6))
        .count() as u64;
    assert_eq!(count_q(&f, 20_000).unwrap().count, direct);
}

#[test]
fn landau_is_q_at_square_root() {
    assert_eq!(
        count_landau(1_000_000).unwrap().count,
        count_q(&fam("t^2+1"), 999).unwrap().count
    );
    assert_eq!(
        count_landau(1_000_001).unwrap().count,
        count_q(&fam("t^2+1"), 1000).unwrap().count
    );
}

#[test]
fn progressions_equidistribute() {
    let one = count_ap(4, 1, 100_000).unwrap().count as f64;
    let three = count_ap(4, 3, 100_000).unwrap().count as f64;
    assert!((one - three).abs() / one.max(three) < 0.01);
    let half_li = 0.5 * li(1e5).unwrap();
    for c in [one, three] {
        assert!((c / half_li - 1.0).abs() < 0.01, "{c} vs {half_li}");
    }
}

#[test]
fn pair_counts() {
    assert_eq!(
        count_pairs(2, PairMode::FirstPrimes(1_000)).unwrap().count,
        174
    );
    let c: Vec<f64> = [2u64, 4, 8]
        .iter()
        .map(|&k| count_pairs(k, PairMode::FirstPrimes(10_000)).unwrap().count as f64)
        .collect();
    assert_eq!(c, vec![1270.0, 1264.0, 1303.0]);
    for a in &c {
        for b in &c {
            assert!((a - b).abs() <= 0.03 * a.max(*b));
        }
    }
    // Bound mode counts p <= x, with p + k allowed past x.
    assert_eq!(count_pairs(2, PairMode::Bound(5)).unwrap().count, 2);
}

#[test]
fn sophie_identity() {
    let f = fam("t, 2t+1");
    for x in [1_000, 10_000, 100_000] {
        assert_eq!(
            count_sophie(x).unwrap().count,
            count_q(&f, x).unwrap().count
        );
    }
}

#[test]
fn chains_obey_fermat_bound_and_are_maximal() {
    for kind in [ChainKind::First, ChainKind::Second] {
        let chains = cunningham_chains(kind, 1_000_000, 1).unwrap();
        let mut seen = std::collections::HashSet::new();
        for c in &chains {
            let p1 = c.first();
            if p1 % 2 == 1 {
                assert!(c.len() as u64 <= p1 - 1, "{c:?}");
            }
            for w in c.elements.windows(2) {
                let next = match kind {
                    ChainKind::First => 2 * w[0] + 1,
                    ChainKind::Second => 2 * w[0] - 1,
                };
                assert_eq!(w[1], next);
            }
            assert!(c.elements.iter().all(|&p| is_prime_u64(p)));
            assert!(c.complete);
            let last = *c.elements.last().unwrap();
            let next = match kind {
                ChainKind::First => 2 * last + 1,
                ChainKind::Second => 2 * last - 1,
            };
            assert!(!is_prime_u64(next));
            // every prime belongs to at most one emitted chain
            for &p in &c.elements {
                assert!(seen.insert(p), "{p} emitted twice");
            }
        }
        // every prime up to the bound starts or continues exactly one chain
        let covered = chains.iter().map(|c| c.first()).collect::<Vec<_>>();
        assert!(covered.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn brun_partial_sums() {
    let decades: Vec<f64> = [1_000u64, 10_000, 100_000, 1_000_000, 10_000_000]
        .iter()
        .map(|&x| brun_partial(x).unwrap())
        .collect();
    assert!(decades.windows(2).all(|w| w[0] < w[1]));
    assert!(decades[3] < 2.347);
    assert!(decades[4] < 2.347);
}
