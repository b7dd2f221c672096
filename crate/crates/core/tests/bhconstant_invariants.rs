use bhcount::bhconstant::*;
use bhcount::polynomial::{check_family, parse_family, IntPoly, PolyFamily};
use bhcount::primes::{gcd_u64, primes_up_to, SieveConfig};
use bhcount::rootcount::omega_family;
use bhcount::CompensatedSum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fam(s: &str) -> PolyFamily {
    check_family(&parse_family(s).unwrap()).unwrap()
}

#[test]
fn sharding_is_bit_identical_to_sequential() {
    let family = fam("t, t^2+t+1");
    let bound = 2_000_000;
    let mut seq = CompensatedSum::new();
    for p in primes_up_to(bound) {
        let w = omega_family(&family, p).unwrap() as f64;
        let pf = p as f64;
        seq.add(-2.0 * (-1.0 / pf).ln_1p() + (-w / pf).ln_1p());
    }
    for segment_bytes in [512usize, 4096, 1 << 16, 1 << 20] {
        let opts = ConstantOptions {
            allow_override: false,
            sieve: SieveConfig {
                segment_bytes,
                ..SieveConfig::default()
            },
        };
        let est = bh_constant_with(&family, bound, &CheckpointSchedule::none(), &opts).unwrap();
        assert_eq!(
            est.log_value.to_bits(),
            seq.value().to_bits(),
            "segment {segment_bytes}"
        );
    }
}

#[test]
fn closed_form_quadratics_match_euler_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let bound = 200_000;
    let mut done = 0;
    while done < 20 {
        let a = rng.gen_range(1..=50i64);
        let b = rng.gen_range(-50..=50i64);
        let c = rng.gen_range(-50..=50i64);
        let Ok(h) = hlf_constant(a, b, c, bound) else {
            continue;
        };
        let f = check_family(&[IntPoly::from_i64s(&[c, b, a])]).unwrap();
        let est = bh_constant(&f, bound, &CheckpointSchedule::none()).unwrap();
        assert!(
            (h.value - est.value).abs() < 1e-6,
            "({a},{b},{c}): {} vs {}",
            h.value,
            est.value
        );
        done += 1;
    }
}

#[test]
fn euler_polynomial_forms_agree() {
    let h = hlf_constant(1, 1, 41, 10_000_000).unwrap();
    assert_eq!(h.epsilon, 1.0);
    let est = bh_constant(&fam("t^2+t+41"), 10_000_000, &CheckpointSchedule::none()).unwrap();
    assert!((h.value - est.value).abs() < 1e-6);
    assert!((h.value - 6.63985).abs() < 5e-3);
}

#[test]
fn ap_constant_depends_only_on_modulus() {
    for a in [1u64, 2, 3, 4, 10, 12, 30, 97, 210, 1000] {
        let reference = ap_constant(a, 1).unwrap();
        for b in -(a as i64)..(2 * a as i64) {
            if gcd_u64(a, b.unsigned_abs()) == 1 {
                assert_eq!(ap_constant(a, b).unwrap(), reference, "a = {a}, b = {b}");
            } else {
                assert!(ap_constant(a, b).is_err());
            }
        }
    }
    assert_eq!(
        ap_constant(1_000_000_000, 123_456_789).unwrap().value(),
        2.5
    );
}

#[test]
fn ck_depends_only_on_prime_divisors() {
    for (k, k2) in [(2, 4), (2, 8), (6, 12), (10, 50)] {
        let a = ck_constant(k, 1_000_000).unwrap().value;
        let b = ck_constant(k2, 1_000_000).unwrap().value;
        assert_eq!(a.to_bits(), b.to_bits(), "C_{k} vs C_{k2}");
    }
}

#[test]
fn ck_ratio_identity_and_twin_value() {
    let c2 = ck_constant(2, 10_000_000).unwrap();
    let c6 = ck_constant(6, 10_000_000).unwrap();
    assert!((c6.value / c2.value - 2.0).abs() < 1e-9);
    assert!((c2.value - 0.660161815).abs() < 1e-6);
    assert!((ck_constant(30, 1_000_000).unwrap().value - 1.76043).abs() < 5e-6);
}

#[test]
fn ck_tail_bound_holds_across_decades() {
    for k in [2u64, 6, 14, 30, 128] {
        let vals: Vec<CkConstant> = [10_000u64, 100_000, 1_000_000, 10_000_000]
            .iter()
            .map(|&b| ck_constant(k, b).unwrap())
            .collect();
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                let diff = (vals[i].value - vals[j].value).abs();
                assert!(
                    diff <= vals[i].tail_bound,
                    "k = {k}: {diff} > {}",
                    vals[i].tail_bound
                );
            }
        }
    }
}

#[test]
fn diverge_zero_table_prefix() {
    let opts = ConstantOptions {
        allow_override: true,
        ..Default::default()
    };
    let est = bh_constant_with(
        &fam("t^2-1"),
        200_000,
        &CheckpointSchedule::PrimeCounts(vec![10, 100, 1_000, 10_000]),
        &opts,
    )
    .unwrap();
    let expect = [0.210114, 0.117208, 0.0824772, 0.0641136];
    assert_eq!(est.checkpoints.len(), 4);
    for (cp, e) in est.checkpoints.iter().zip(expect) {
        assert!((cp.value - e).abs() < 1e-5, "{} vs {e}", cp.value);
    }
}

#[test]
fn verdicts_for_convergent_families() {
    for f in ["t^2+1", "t, t+2"] {
        let est = bh_constant(
            &fam(f),
            100_000_000,
            &CheckpointSchedule::decades(100_000_000),
        )
        .unwrap();
        assert_eq!(est.verdict, Some(Verdict::Converging), "{f}");
        assert!(est.checkpoints.windows(2).all(|w| w[0].at < w[1].at));
    }
}

#[test]
fn greentao_matches_explicit_families() {
    let bound = 1_000_000;
    let g3 = greentao_constant(3, bound).unwrap();
    let explicit = bh_constant(&fam("t, t+30, t+60"), bound, &CheckpointSchedule::none()).unwrap();
    assert!((g3 - explicit.value).abs() < 1e-6);
    let g4 = greentao_constant(4, bound).unwrap();
    let explicit = bh_constant(
        &fam("t, t+210, t+420, t+630"),
        bound,
        &CheckpointSchedule::none(),
    )
    .unwrap();
    assert!((g4 - explicit.value).abs() < 1e-6);
    // Non-primorial steps from the worked examples.
    let twins = ap_family_constant(2, 2, bound).unwrap();
    assert!((twins - 2.0 * ck_constant(2, bound).unwrap().value).abs() < 1e-9);
    let six = ap_family_constant(3, 6, bound).unwrap();
    let explicit = bh_constant(&fam("t, t+6, t+12"), bound, &CheckpointSchedule::none()).unwrap();
    assert!((six - explicit.value).abs() < 1e-6);
    assert_eq!(greentao_constant(1, bound).unwrap(), 1.0);
}
