use proptest::prelude::*;
use ringcolor::graph::{find_coloring, from_dimacs, is_proper, to_dimacs, Graph, GraphJson};
use ringcolor::harness::{gen_holed, GenParams};
use ringcolor::holes::extract_ring;
use ringcolor::parity::{in_t_exhaustive, in_t_greedy, Parity, ParitySeq};
use ringcolor::ring::RingCode;

/// Valid ring codes with 2..=4 fan pairs and small runs.
fn ring_code() -> impl Strategy<Value = RingCode> {
    (2usize..=4)
        .prop_flat_map(|pairs| prop::collection::vec(1u32..=4, 2 * pairs))
        .prop_filter_map("cycle sums below 3", |runs| RingCode::new(runs).ok())
}

fn word(max_half: usize) -> impl Strategy<Value = ParitySeq> {
    (2usize..=max_half).prop_flat_map(|h| {
        prop::collection::vec(prop::bool::ANY, 2 * h).prop_map(|bits| {
            ParitySeq::new(bits.into_iter().map(|b| if b { Parity::O } else { Parity::E }).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn decide3_matches_oracle(code in ring_code()) {
        let g = code.realize();
        let truth = find_coloring(&g, 3).unwrap().is_some();
        prop_assert_eq!(code.decide3(), truth);
        if let Some(c) = ringcolor::ring::color3(&code).unwrap() {
            prop_assert!(is_proper(&g, &c).unwrap());
        }
    }

    #[test]
    fn even_rotations_are_the_same_ring(code in ring_code(), shift in 0usize..8) {
        let runs = code.runs();
        let k = (2 * shift) % runs.len();
        let rotated = RingCode::new([&runs[k..], &runs[..k]].concat()).unwrap();
        prop_assert_eq!(&rotated, &code);
        prop_assert_eq!(rotated.canonical().runs().to_vec(), code.canonical().runs().to_vec());
        prop_assert_eq!(rotated.decide3(), code.decide3());
    }

    #[test]
    fn fan_collapse_mirrors_e_collapse(code in ring_code(), pick in 0usize..8) {
        let evens: Vec<usize> = (0..code.fan_count()).filter(|&j| code.runs()[j] % 2 == 0).collect();
        prop_assume!(!evens.is_empty());
        let j = evens[pick % evens.len()];
        let fc = code.fan_collapse(j).unwrap();
        let collapsed = ParitySeq::from_runs(&fc.ring.runs).unwrap();
        let expected = code.cps().e_collapse(j).unwrap();
        prop_assert_eq!(collapsed.canonicalize().to_string(), expected.canonicalize().to_string());
    }

    #[test]
    fn membership_deciders_agree_and_collapses_preserve_it(w in word(9)) {
        let member = in_t_exhaustive(&w);
        prop_assert_eq!(in_t_greedy(&w), member);
        for j in w.collapse_positions() {
            prop_assert_eq!(in_t_exhaustive(&w.e_collapse(j).unwrap()), member);
        }
        // membership is a property of the cyclic word
        prop_assert_eq!(in_t_exhaustive(&w.canonicalize()), member);
        prop_assert_eq!(in_t_exhaustive(&w.reversed()), member);
    }

    #[test]
    fn graph_formats_round_trip(code in ring_code()) {
        let g = code.realize();
        let back = from_dimacs(&to_dimacs(&g)).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        let json = serde_json::to_string(&g.to_json()).unwrap();
        let parsed: GraphJson = serde_json::from_str(&json).unwrap();
        let g2 = Graph::try_from(parsed).unwrap();
        prop_assert_eq!(g2, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_instances_extract_cleanly(seed in any::<u64>(), holes in 1usize..=3) {
        let ht = gen_holed(seed, &GenParams::new(holes, 40)).unwrap();
        prop_assert!(ht.vertex_count() <= 40);
        prop_assert_eq!(ht.hole_count(), holes);
        for h in 0..holes {
            let ring = extract_ring(&ht, h).unwrap();
            prop_assert_eq!(ring.code.inner_len(), ht.hole_boundary(h).len());
            // every ring edge is an edge of the instance
            for (a, b) in ring.edges() {
                prop_assert!(ht.graph().has_edge(a, b));
            }
        }
    }
}
