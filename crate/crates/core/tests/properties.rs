mod common;

use common::{min_qk_size, n_minus, n_minus_closed, n_plus};
use proptest::prelude::*;
use qkernel::format::{from_json, parse, serialize, to_json};
use qkernel::harness::{sweep, ConjectureSpec, Corpus, Keep, Variant};
use qkernel::solvers::{find_kernel, is_quasi_kernel, max_large_quasi_kernel, min_quasi_kernel};
use qkernel::{Digraph, RationalAlpha, VertexSet};

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (0..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<u64>(), n).prop_map(move |rows| {
            let mask = if n == 0 { 0 } else { (1u64 << n) - 1 };
            let rows: Vec<u64> = rows.iter().enumerate().map(|(v, r)| r & mask & !(1 << v)).collect();
            Digraph::from_out_rows(&rows).unwrap()
        })
    })
}

fn with_set(max_n: usize) -> impl Strategy<Value = (Digraph, VertexSet)> {
    digraph(max_n).prop_flat_map(|d| {
        let full = d.vertices().bits();
        (Just(d), any::<u64>().prop_map(move |b| VertexSet::from_bits(b & full)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn neighbourhoods_match_distance_oracle((d, s) in with_set(9)) {
        prop_assert_eq!(d.n_minus_set(s).bits(), n_minus(&d, s.bits()));
        prop_assert_eq!(d.n_minus_closed(s).bits(), n_minus_closed(&d, s.bits()));
        prop_assert_eq!(d.n_plus_set(s).bits(), n_plus(&d, s.bits()));
    }

    #[test]
    fn second_in_neighbourhood_is_closed_twice((d, s) in with_set(12)) {
        prop_assert_eq!(d.n_minus_minus_closed(s), d.n_minus_closed(d.n_minus_closed(s)));
    }

    #[test]
    fn reversal_swaps_directions((d, s) in with_set(12)) {
        let r = d.reverse();
        prop_assert_eq!(&r.reverse(), &d);
        prop_assert_eq!(r.n_minus_closed(s), d.n_plus_closed(s));
        prop_assert_eq!(r.sinks(), d.sources());
    }

    #[test]
    fn text_and_json_round_trip(d in digraph(20)) {
        prop_assert_eq!(&parse(&serialize(&d)).unwrap(), &d);
        prop_assert_eq!(&from_json(&to_json(&d)).unwrap(), &d);
    }

    #[test]
    fn kernels_are_quasi_kernels(d in digraph(10)) {
        if let Some(k) = find_kernel(&d).witness {
            prop_assert!(is_quasi_kernel(&d, k));
            prop_assert!(d.n_minus_closed(k) == d.vertices());
        }
    }

    #[test]
    fn minimum_quasi_kernel_matches_oracle(d in digraph(7)) {
        let r = min_quasi_kernel(&d);
        prop_assert!(r.verified);
        prop_assert_eq!(r.objective, min_qk_size(&d));
        if let Some(q) = r.witness {
            prop_assert!(is_quasi_kernel(&d, q));
        }
    }

    #[test]
    fn small_or_large_quasi_kernel_exists(d in digraph(8)) {
        let n = d.n();
        let small = 2 * min_quasi_kernel(&d).objective <= n;
        let large = 2 * max_large_quasi_kernel(&d).objective >= n;
        prop_assert!(small || large);
    }

    #[test]
    fn shard_reports_merge_to_whole(shards in 1usize..6, keep_all in any::<bool>()) {
        let corpus = Corpus::Enumeration { n: 3, sink_free: false, canonical: false };
        let spec = ConjectureSpec::new(Variant::Large, RationalAlpha::HALF, false).unwrap();
        let keep = if keep_all { Keep::All } else { Keep::Failures };
        let whole = sweep(&corpus, &spec, (0, 1), keep).unwrap();
        let parts: Vec<_> = (0..shards).map(|i| sweep(&corpus, &spec, (i, shards), keep).unwrap()).collect();
        let left = parts.iter().cloned().reduce(|a, b| a.merge(b).unwrap()).unwrap();
        let right = parts.into_iter().rev().reduce(|b, a| a.merge(b).unwrap()).unwrap();
        prop_assert_eq!(&left.aggregates, &whole.aggregates);
        prop_assert_eq!(&left.records, &whole.records);
        prop_assert_eq!(left.to_json(), right.to_json());
    }
}
