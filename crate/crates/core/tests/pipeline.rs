//! Cross-module checks through the public API.

use lensknot::dual::{basic_stats, fibonacci_kplus_data, kplus_dual};
use lensknot::knots::{distinct, lens_surgery, natural_slope, Distinctness, Knot, KnotFamily};
use lensknot::lens::homeomorphic;
use lensknot::search::{enumerate_surgeries, find_coincidences, SearchConfig};
use lensknot::sequences::fib;
use num_bigint::BigInt;

#[test]
fn parsed_knots_round_trip_through_surgery() {
    for text in [
        "torus(3,4)",
        "cable(2,3,+1)",
        "kplus(2,3)",
        "tangleHH(1)",
        "tangleTH(1)",
    ] {
        let knot: Knot = text.parse().unwrap();
        assert_eq!(knot.to_string(), text);
        let rebuilt = Knot::from_params(knot.family(), &knot.params()).unwrap();
        assert_eq!(rebuilt, knot);
        if knot.family() != KnotFamily::Torus {
            let slope = natural_slope(&knot).unwrap();
            assert!(lens_surgery(&knot, &slope).lens().is_some(), "{text}");
        }
    }
}

#[test]
fn fibonacci_duals_match_kplus_surgeries() {
    for n in 3..=12 {
        let (a, b) = (fib(n + 2), fib(n));
        let closed = fibonacci_kplus_data(n).unwrap();
        assert_eq!(closed, kplus_dual(&a, &b).unwrap());
        let knot = Knot::kplus(a, b).unwrap();
        let lens = lens_surgery(&knot, &natural_slope(&knot).unwrap());
        let lens = lens.lens().unwrap();
        assert_eq!(lens.p(), closed.p());
        assert!(basic_stats(&closed).is_hyperbolic());
    }
}

#[test]
fn coincidences_agree_with_direct_pairwise_scan() {
    let config = SearchConfig::covering(120);
    // kplus(1,b) is torus(b,b+1), which the covering ranges also enumerate
    let surgeries: Vec<_> = enumerate_surgeries(&config)
        .unwrap()
        .into_iter()
        .filter(|s| !matches!(&s.knot, Knot::Kplus { a, .. } if a == &BigInt::from(1)))
        .collect();
    let mut pairs = 0;
    for (i, x) in surgeries.iter().enumerate() {
        for y in &surgeries[i + 1..] {
            if x.slope == y.slope
                && homeomorphic(&x.lens, &y.lens)
                && distinct(&x.knot, &y.knot) != Distinctness::Equal
            {
                pairs += 1;
            }
        }
    }
    let records = find_coincidences(&config).unwrap();
    let from_records: usize = records
        .iter()
        .map(|r| r.multiplicity() * (r.multiplicity() - 1) / 2)
        .sum();
    assert_eq!(pairs, from_records);
    assert!(records.iter().all(|r| r.lens_class.p <= BigInt::from(120)));
}
