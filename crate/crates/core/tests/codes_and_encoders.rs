use std::sync::Arc;

use codeloss::code::{hamming_code, paper_code_c3, LinearCode};
use codeloss::encoder::{
    generator_encoder, gray_encoder, lexicographic_encoder, random_encoder, systematic_encoder,
    weight_priority_encoder, EncoderMap,
};
use codeloss::gf2::BinMatrix;
use proptest::prelude::*;

fn code_strategy() -> impl Strategy<Value = LinearCode> {
    (2usize..=9)
        .prop_flat_map(|n| (Just(n), 1usize..=n.min(5)))
        .prop_flat_map(|(n, k)| (Just(n), proptest::collection::vec(1u64..(1 << n), k)))
        .prop_filter_map("full rank", |(n, rows)| {
            LinearCode::from_generator(BinMatrix::from_packed_rows(rows, n).ok()?).ok()
        })
}

fn pairwise_linear(f: &EncoderMap) -> bool {
    let w = f.code().codeword_values();
    let img = |j: usize| w[f.encode_index(j)];
    (0..f.size()).all(|a| (0..f.size()).all(|b| img(a ^ b) == img(a) ^ img(b)))
}

fn is_bijection(f: &EncoderMap) -> bool {
    let mut seen = vec![false; f.size()];
    for j in 0..f.size() {
        let c = f.encode_index(j);
        if seen[c] || f.decode_index(c) != j {
            return false;
        }
        seen[c] = true;
    }
    true
}

proptest! {
    #[test]
    fn generator_times_parity_is_zero(code in code_strategy()) {
        let h = code.parity_check();
        prop_assert_eq!(h.rows(), code.n() - code.k());
        prop_assert_eq!(code.size(), 1 << code.k());
        if h.rows() == 0 {
            return Ok(());
        }
        for c in code.codewords() {
            prop_assert_eq!(h.mul_vec(c).unwrap().weight(), 0);
        }
        let products = code.generator().mul_transpose(h).unwrap();
        prop_assert!(products.iter().all(|&r| r == 0));
    }

    #[test]
    fn codewords_closed_under_addition(code in code_strategy()) {
        let w = code.codeword_values();
        for &a in w {
            for &b in w {
                prop_assert!(code.index_of(code.word(a ^ b).unwrap()).is_some());
            }
        }
    }

    #[test]
    fn every_encoder_is_a_bijection(code in code_strategy(), seed in any::<u64>()) {
        let code = Arc::new(code);
        for f in [
            lexicographic_encoder(code.clone()),
            weight_priority_encoder(code.clone()),
            random_encoder(code.clone(), seed),
            systematic_encoder(code.clone()),
        ] {
            prop_assert!(is_bijection(&f));
        }
    }

    #[test]
    fn linearity_check_agrees_with_pairwise(code in code_strategy(), seed in any::<u64>()) {
        let code = Arc::new(code);
        let f = random_encoder(code.clone(), seed);
        prop_assert_eq!(f.is_linear(), pairwise_linear(&f));
        let s = systematic_encoder(code.clone());
        prop_assert!(s.is_linear() && pairwise_linear(&s));
        let g = generator_encoder(code.clone(), code.generator().packed_rows()).unwrap();
        prop_assert!(g.is_linear());
    }

    #[test]
    fn lexicographic_encoder_is_ordered_and_linear(code in code_strategy()) {
        let code = Arc::new(code);
        let f = lexicographic_encoder(code);
        let v: Vec<u64> = (0..f.size()).map(|j| f.encode(j).value()).collect();
        for a in 0..v.len() {
            for b in 0..v.len() {
                prop_assert_eq!(a < b, v[a] < v[b]);
            }
        }
        prop_assert!(pairwise_linear(&f));
    }

    #[test]
    fn weight_priority_is_non_decreasing(code in code_strategy()) {
        let f = weight_priority_encoder(Arc::new(code));
        let w: Vec<u32> = (0..f.size()).map(|j| f.encode(j).weight()).collect();
        prop_assert!(w.windows(2).all(|p| p[0] <= p[1]));
    }
}

#[test]
fn lexicographic_order_exhaustive_for_large_k() {
    let code = Arc::new(hamming_code(4).unwrap());
    let f = lexicographic_encoder(code);
    let v: Vec<u64> = (0..f.size()).map(|j| f.encode(j).value()).collect();
    assert_eq!(v.len(), 2048);
    assert!(v.windows(2).all(|p| p[0] < p[1]));
}

#[test]
fn gray_adjacency_up_to_ten_bits() {
    for k in 1..=10 {
        let f = gray_encoder(k).unwrap();
        for j in 1..f.size() {
            assert_eq!(
                (f.encode(j - 1).value() ^ f.encode(j).value()).count_ones(),
                1
            );
        }
    }
}

#[test]
fn paper_codes() {
    let c3 = paper_code_c3();
    assert_eq!((c3.n(), c3.k(), c3.min_distance().unwrap()), (7, 4, 2));
    let h3 = hamming_code(3).unwrap();
    assert_eq!(h3.min_distance().unwrap(), 3);
    assert_eq!(h3.weight_distribution(), vec![1, 0, 0, 7, 7, 0, 0, 1]);
}
