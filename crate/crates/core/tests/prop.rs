//! Property tests for the structural invariants.

use proptest::prelude::*;

use ewens_cycles::perm::{enumerate_permutations, relabel_by_rank, Permutation};
use ewens_cycles::records::{lower_records, RecordTrace, Stretch};
use ewens_cycles::stretch_ppp::reconstruct_prefix;

fn distinct_unit_values(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(1u32..=1_000_000, 1..=max_len).prop_map(|set| {
        set.into_iter()
            .map(|k| f64::from(k) / 1_000_001.0)
            .collect()
    })
}

proptest! {
    // Recomposing the canonical cycle decomposition gives back the permutation.
    #[test]
    fn cycles_round_trip(image in prop::collection::vec(0u32..12, 1..=12)
        .prop_filter("bijection", |v| {
            let mut seen = vec![false; v.len()];
            v.iter().all(|&x| {
                let i = x as usize;
                i < seen.len() && !std::mem::replace(&mut seen[i], true)
            })
        }))
    {
        let p = Permutation::from_image(image).unwrap();
        prop_assert_eq!(p.cycles().to_permutation().unwrap(), p.clone());
        prop_assert_eq!(p.cycle_counts().weighted_size() as usize, p.n());
    }

    // The rank relabeling depends only on relative order: any strictly
    // increasing transform of the values leaves the output unchanged.
    #[test]
    fn relabel_is_order_invariant(
        values in distinct_unit_values(10),
        seed in any::<u64>(),
        scale in 0.1f64..10.0,
        shift in -5.0f64..5.0,
    ) {
        let n = values.len();
        // derive a bijection of positions from the seed
        let mut image: Vec<usize> = (0..n).collect();
        let mut state = seed | 1;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            image.swap(i, (state >> 33) as usize % (i + 1));
        }
        let base = relabel_by_rank(&values, &image).unwrap();

        // affine and strictly-monotone nonlinear transforms
        let affine: Vec<f64> = values.iter().map(|&v| scale * v + shift).collect();
        let cubed: Vec<f64> = values.iter().map(|&v| v * v * v + 2.0 * v).collect();
        prop_assert_eq!(relabel_by_rank(&affine, &image).unwrap(), base.clone());
        prop_assert_eq!(relabel_by_rank(&cubed, &image).unwrap(), base);
    }

    // Lower-record indices always start at 0 and carry strictly decreasing
    // values; indicators agree with the index list.
    #[test]
    fn lower_record_structure(values in distinct_unit_values(40)) {
        let (idx, ind) = lower_records(&values).unwrap();
        prop_assert_eq!(idx[0], 0);
        for w in idx.windows(2) {
            prop_assert!(values[w[1]] < values[w[0]]);
        }
        for (i, &b) in ind.iter().enumerate() {
            prop_assert_eq!(b == 1, idx.contains(&i));
        }
    }

    // Stretch decomposition concatenates back to the prefix, and
    // reconstruction from stretches is the exact inverse.
    #[test]
    fn stretch_reconstruction_round_trip(values in distinct_unit_values(30)) {
        let n = values.len();
        let trace = RecordTrace::from_values(values.clone()).unwrap();
        let (complete, trailing) = ewens_cycles::records::stretches(&trace, n);
        let mut all: Vec<Stretch> = complete;
        all.push(trailing);

        let flat: Vec<f64> = all.iter().flat_map(|s| s.values().iter().copied()).collect();
        prop_assert_eq!(&flat, &values);

        // record values decrease in time, so reconstruction re-sorts to the
        // original order even after shuffling the stretch list
        all.reverse();
        let rebuilt = reconstruct_prefix(&all).unwrap();
        prop_assert_eq!(rebuilt, values);
    }
}

// Exhaustive (not sampled) round trip over every permutation of small orders.
#[test]
fn cycles_round_trip_exhaustive() {
    for n in 1..=7 {
        for p in enumerate_permutations(n).unwrap() {
            assert_eq!(p.cycles().to_permutation().unwrap(), p);
            assert_eq!(p.cycle_counts().weighted_size() as usize, n);
        }
    }
}
