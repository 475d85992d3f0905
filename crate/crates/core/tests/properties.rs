//! Cross-module property tests and statistical smoke checks.

use proptest::collection::vec;
use proptest::prelude::*;

use bayescode::baselines::Lz78Codec;
use bayescode::container::{read_container, write_container};
use bayescode::measures::{sample_sequence, Alphabet, GeometricMixture};
use bayescode::{Codec, IntegerCode};

proptest! {
    #[test]
    fn omega_round_trips_any_positive(n in 1u64..=u64::MAX) {
        let code = IntegerCode::omega();
        let w = code.encode(n).unwrap();
        prop_assert_eq!(code.decode(&w).unwrap(), (n, w.len()));
        prop_assert_eq!(code.len(n).unwrap() as usize, w.len());
    }

    #[test]
    fn unary_round_trips(n in 1u64..=4096) {
        let code = IntegerCode::unary();
        let w = code.encode(n).unwrap();
        prop_assert_eq!(code.decode(&w).unwrap(), (n, w.len()));
    }

    #[test]
    fn bayes_laplace_payload_round_trips(x in vec(0u64..=1, 1..=64)) {
        let codec = Codec::bayes_laplace();
        let payload = codec.encode_payload(&x).unwrap();
        prop_assert_eq!(codec.decode_payload(&payload).unwrap(), (x, payload.len()));
    }

    #[test]
    fn bayes_geometric_payload_round_trips(x in vec(1u64..=60, 1..=32)) {
        let codec = Codec::bayes_geometric();
        let payload = codec.encode_payload(&x).unwrap();
        prop_assert_eq!(codec.decode_payload(&payload).unwrap(), (x, payload.len()));
    }

    #[test]
    fn lz78_payload_round_trips(x in vec(1u64..=30, 1..=120)) {
        let codec = Codec::lz78(Alphabet::Positive);
        let payload = codec.encode_payload(&x).unwrap();
        prop_assert_eq!(codec.decode_payload(&payload).unwrap(), (x, payload.len()));
    }

    #[test]
    fn containers_round_trip(x in vec(0u64..=1, 1..=48), which in 0usize..4) {
        let codec = match which {
            0 => Codec::bayes_laplace(),
            1 => Codec::lz78(Alphabet::Finite(2)),
            2 => Codec::per_symbol(Alphabet::Finite(2)),
            _ => Codec::bayes_bernoulli(
                bayescode::measures::BernoulliSource::from_parts(2, 5).unwrap(),
            ),
        };
        let bytes = write_container(&codec, &x).unwrap();
        let (_codec, back) = read_container(&bytes).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn distinct_strings_never_prefix_related(
        a in vec(0u64..=1, 1..=10),
        b in vec(0u64..=1, 1..=10),
    ) {
        prop_assume!(a != b);
        let codec = Codec::bayes_laplace();
        let wa = codec.encode_payload(&a).unwrap();
        let wb = codec.encode_payload(&b).unwrap();
        prop_assert!(!wa.is_proper_prefix_of(&wb));
        prop_assert!(!wb.is_proper_prefix_of(&wa));
        prop_assert_ne!(wa, wb);
    }
}

/// Universality smoke on a 2-bit-entropy source: the LZ78 phrase statistic
/// c·log₂c approaches n·H, and the implemented wire format compresses
/// monotonically toward it from above without ever hypercompressing.
#[test]
fn lz78_universality_smoke_on_geometric_source() {
    let measure = GeometricMixture::new();
    let codec = Lz78Codec::new(Alphabet::Positive);
    let n = 1usize << 15;
    let x = sample_sequence(&measure, n, 42).unwrap();

    let (phrases, _) = codec.parse(&x).unwrap();
    let c = phrases.len() as f64;
    let phrase_stat = c * c.log2() / n as f64;
    assert!(
        (phrase_stat - 2.0).abs() <= 0.4,
        "phrase statistic {phrase_stat} outside 20% of the entropy rate"
    );

    let total = codec.total_len(&x).unwrap();
    let rate = total as f64 / n as f64;
    let symbol_sum: u64 = x.iter().sum();
    assert!(
        total > symbol_sum,
        "wire format hypercompressed below the ideal code length"
    );
    assert!(rate < 3.6, "wire rate {rate} unexpectedly far from entropy");

    let small_n = 1usize << 11;
    let small = sample_sequence(&measure, small_n, 42).unwrap();
    let small_rate = codec.total_len(&small).unwrap() as f64 / small_n as f64;
    assert!(
        rate < small_rate,
        "wire rate must shrink with n: {rate} vs {small_rate} at 2^11"
    );
}
