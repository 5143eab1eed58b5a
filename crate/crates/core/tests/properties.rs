use std::collections::HashSet;

use orbgrand_ai::block::{BlockClass, BlockLikelihoods, ReliabilityEntry};
use orbgrand_ai::channel::{loglik_block, loglik_chain, modulate, transmit};
use orbgrand_ai::code::random_code;
use orbgrand_ai::{
    BlockPartition, ChannelModel, DecoderConfig, DecoderKind, DecoderSuite, PatternState, ReliabilityTable, Step,
};
use proptest::prelude::*;

fn code_dims() -> impl Strategy<Value = (usize, usize, u64)> {
    (6usize..20).prop_flat_map(|n| (Just(n), 1..n, any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extension_is_a_bijection_onto_codewords((n, k, seed) in code_dims(), base in any::<u32>()) {
        let code = random_code(n, k, seed).unwrap();
        let bits: Vec<u8> = (0..k).map(|i| (base >> (i % 32) & 1) as u8).collect();
        let cw = code.extend_base(&bits).unwrap();
        prop_assert!(code.is_codeword(&cw).unwrap());
        let back: Vec<u8> = code.base_set().iter().map(|&p| cw[p]).collect();
        prop_assert_eq!(back, bits);
        // Any codeword is the extension of its own base bits.
        let msg: Vec<u8> = (0..k).map(|i| (base.rotate_left(7) >> (i % 32) & 1) as u8).collect();
        let other = code.encode(&msg).unwrap();
        let other_base: Vec<u8> = code.base_set().iter().map(|&p| other[p]).collect();
        prop_assert_eq!(code.extend_base(&other_base).unwrap(), other);
    }

    #[test]
    fn likelihood_depends_only_on_the_residual(
        y in prop::collection::vec(-3.0f64..3.0, 1..10),
        flips in any::<u16>(),
        sigma in 0.3f64..2.0,
        rho in -0.9f64..0.9,
    ) {
        let model = ChannelModel::new(sigma, rho).unwrap();
        let x: Vec<u8> = (0..y.len()).map(|i| (flips >> i & 1) as u8).collect();
        // Moving both y and the symbol by the same amount leaves the residual fixed.
        let y0: Vec<f64> = y.iter().zip(modulate(&x)).map(|(a, s)| a - s + 1.0).collect();
        let a = loglik_chain(&y, &x, &model);
        let b = loglik_chain(&y0, &vec![0; y.len()], &model);
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn emission_weights_never_decrease(blocks in prop::collection::vec(0usize..5, 1..10)) {
        let entries = blocks
            .iter()
            .enumerate()
            .map(|(i, &block)| ReliabilityEntry { block, pattern: 1, delta: i as f64 })
            .collect();
        let table = ReliabilityTable::from_entries(entries, vec![0; 5]);
        let mut st = PatternState::new(&table, u64::MAX);
        let mut last = 0;
        let mut seen = HashSet::new();
        while st.advance() == Step::Emitted {
            prop_assert!(st.current_weight() >= last);
            prop_assert_eq!(st.current_ranks().iter().sum::<usize>(), st.current_weight());
            prop_assert!(seen.insert(st.current_ranks().to_vec()));
            last = st.current_weight();
        }
        prop_assert_eq!(st.queries(), 1u64 << blocks.len());
    }

    #[test]
    fn decoders_return_codewords(seed in any::<u64>(), ebn0 in 0.0f64..4.0, b in 1usize..4) {
        let code = random_code(14, 7, seed % 16).unwrap();
        let suite = DecoderSuite::new(code, b, DecoderConfig { cap: 5000, ..DecoderConfig::default() });
        let model = ChannelModel::from_ebn0(ebn0, suite.code.rate(), 0.5).unwrap();
        let sent = suite.code.encode(&[1, 0, 0, 1, 1, 0, 1]).unwrap();
        let y = transmit(&sent, &model, seed);
        let ml = suite.decode(DecoderKind::Ml, &y, &model).unwrap();
        for kind in [DecoderKind::Ai, DecoderKind::Gp, DecoderKind::Gt] {
            let res = suite.decode(kind, &y, &model).unwrap();
            if let Some(cw) = &res.codeword {
                prop_assert!(suite.code.is_codeword(cw).unwrap());
                prop_assert!(res.loglik_full <= ml.loglik_full + 1e-9);
            }
            prop_assert!(res.queries <= 5000);
        }
    }

    #[test]
    fn partition_blocks_are_class_pure_and_cover((n, k, seed) in code_dims(), b in 1usize..5) {
        let code = random_code(n, k, seed).unwrap();
        let part = BlockPartition::new(n, b, code.base_set());
        let mut next = 0;
        for blk in part.blocks() {
            prop_assert_eq!(blk.start, next);
            prop_assert!(blk.width >= 1 && blk.width <= b);
            let base = blk.positions().filter(|p| code.base_set().contains(p)).count();
            let class = if base == blk.width { BlockClass::Base } else { BlockClass::Comp };
            prop_assert!(base == 0 || base == blk.width);
            prop_assert_eq!(blk.class, class);
            next += blk.width;
        }
        prop_assert_eq!(next, n);
    }
}

/// Midpoint-rule integral of `exp(loglik_block)` over the plane; a density
/// integrates to one.
#[test]
fn two_symbol_block_density_integrates_to_one() {
    for (sigma, rho) in [(0.5, 0.0), (0.7, 0.5), (1.0, -0.8), (0.6, 0.9)] {
        let model = ChannelModel::new(sigma, rho).unwrap();
        let half = 9.0 * sigma;
        let steps = 600;
        let h = 2.0 * half / steps as f64;
        let mut total = 0.0;
        for i in 0..steps {
            for j in 0..steps {
                let y = [1.0 - half + (i as f64 + 0.5) * h, -1.0 - half + (j as f64 + 0.5) * h];
                total += loglik_block(&y, &[0, 1], &model).exp() * h * h;
            }
        }
        assert!((total - 1.0).abs() < 1e-6, "sigma {sigma} rho {rho}: {total}");
    }
}

#[test]
fn block_hard_decision_maximises_each_block() {
    let model = ChannelModel::new(0.8, 0.7).unwrap();
    let part = BlockPartition::uniform(9, 3);
    let y = transmit(&[0, 1, 1, 0, 0, 1, 0, 1, 1], &model, 3);
    let lik = BlockLikelihoods::new(&y, &part, &model);
    for (id, blk) in part.blocks().iter().enumerate() {
        let best = (0..1u32 << blk.width).max_by(|&a, &b| lik.loglik(id, a).total_cmp(&lik.loglik(id, b))).unwrap();
        assert_eq!(lik.hard()[id], best);
    }
}
