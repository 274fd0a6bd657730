use proptest::prelude::*;
use zerolab::correlations::thue_morse::tm_correlation_brute;
use zerolab::correlations::TmCorrelationSums;
use zerolab::sequences::{generate, read_csv, write_csv, MultiplierKind, PrimeDistribution, SequenceBuffer};

fn kinds() -> impl Strategy<Value = MultiplierKind> {
    let base = prop_oneof![Just(PrimeDistribution::Rademacher), Just(PrimeDistribution::Steinhaus)];
    prop_oneof![
        Just(MultiplierKind::IidGaussian),
        Just(MultiplierKind::IidRademacher),
        Just(MultiplierKind::IidSteinhaus),
        (-10.0f64..10.0).prop_map(|alpha| MultiplierKind::Quadratic { alpha }),
        base.clone().prop_map(|base| MultiplierKind::RandMult { base }),
        base.prop_map(|base| MultiplierKind::RandComplMult { base }),
        Just(MultiplierKind::Grs),
        Just(MultiplierKind::Squarefree),
        Just(MultiplierKind::ThueMorse),
        Just(MultiplierKind::Constant),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn slices_match_prefixes(kind in kinds(), seed: u64, n0 in 0u64..3000, len in 1u64..500) {
        let a = generate(kind, n0, n0 + len, seed).unwrap();
        let b = generate(kind, 0, n0 + len, seed).unwrap();
        prop_assert_eq!(a.values(), b.slice(n0, n0 + len).unwrap());
        let again = generate(kind, n0, n0 + len, seed).unwrap();
        prop_assert_eq!(a.values(), again.values());
    }

    #[test]
    fn binary_and_csv_roundtrip(kind in kinds(), seed: u64, n0 in 0u64..1000, len in 1u64..200) {
        let a = generate(kind, n0, n0 + len, seed).unwrap();
        let b = SequenceBuffer::from_bytes(&a.to_bytes()).unwrap();
        prop_assert_eq!(&a, &b);
        let mut text = Vec::new();
        write_csv(&a, &mut text).unwrap();
        let (start, values) = read_csv(&text[..]).unwrap();
        prop_assert_eq!(start, n0);
        prop_assert_eq!(values.as_slice(), a.values());
    }

    #[test]
    fn multiplicativity(seed: u64, m in 1u64..300, n in 1u64..300, steinhaus: bool) {
        let base = if steinhaus { PrimeDistribution::Steinhaus } else { PrimeDistribution::Rademacher };
        let full = generate(MultiplierKind::RandComplMult { base }, 0, m * n + 1, seed).unwrap();
        let x = |k: u64| full.get(k).unwrap();
        prop_assert!((x(m * n) - x(m) * x(n)).norm() < 1e-12);
        let part = generate(MultiplierKind::RandMult { base }, 0, m * n + 1, seed).unwrap();
        let y = |k: u64| part.get(k).unwrap();
        if gcd(m, n) == 1 {
            prop_assert!((y(m * n) - y(m) * y(n)).norm() < 1e-12);
        }
    }

    #[test]
    fn tm_recurrence_matches_brute_force(x in 0u64..5000, h in 0u64..600) {
        prop_assert_eq!(TmCorrelationSums::new().get(x, h), tm_correlation_brute(x, h));
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}
