//! Cross-checks against independent reference computations.

use nalgebra::{DMatrix, DVector};
use orbgrand_ai::block::{BlockLikelihoods, BlockPartition};
use orbgrand_ai::channel::{loglik_chain, modulate, seeded_rng, transmit};
use orbgrand_ai::code::{crc16_remainder, random_code};
use orbgrand_ai::decoder::{decode_gp_traced, decode_gt_traced, decode_ml_oracle, Candidate};
use orbgrand_ai::{semi_systematize, BitMatrix, ChannelModel, DecoderConfig, LinearCode, StopMetric};
use rand::Rng;

/// Dense multivariate normal log-density with covariance `σ²ρ^|i-j|`.
fn mvn_logpdf(z: &[f64], sigma: f64, rho: f64) -> f64 {
    let m = z.len();
    let cov = DMatrix::from_fn(m, m, |i, j| sigma * sigma * rho.powi((i as i32 - j as i32).abs()));
    let chol = cov.cholesky().expect("covariance is positive definite");
    let logdet: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
    let zv = DVector::from_column_slice(z);
    let quad = zv.dot(&chol.solve(&zv));
    -0.5 * (m as f64 * (2.0 * std::f64::consts::PI).ln() + logdet + quad)
}

fn residual(y: &[f64], x: &[u8]) -> Vec<f64> {
    y.iter().zip(modulate(x)).map(|(a, s)| a - s).collect()
}

#[test]
fn chain_density_matches_dense_gaussian() {
    let mut rng = seeded_rng(11);
    for case in 0..200 {
        let m = rng.random_range(1..=12);
        let rho = [0.0, 0.5, -0.5, 0.9, 0.3][case % 5];
        let sigma = rng.random_range(0.3..2.0);
        let model = ChannelModel::new(sigma, rho).unwrap();
        let x: Vec<u8> = (0..m).map(|_| rng.random_range(0..2)).collect();
        let y: Vec<f64> = (0..m).map(|_| rng.random_range(-3.0..3.0)).collect();
        let want = mvn_logpdf(&residual(&y, &x), sigma, rho);
        let got = loglik_chain(&y, &x, &model);
        assert!((got - want).abs() < 1e-9, "case {case}: {got} vs {want}");
    }
}

fn rank_u8(cols: &[Vec<u8>]) -> usize {
    // Plain elimination on column vectors, independent of the crate's GF(2) code.
    let mut v: Vec<Vec<u8>> = cols.to_vec();
    let rows = v.first().map_or(0, |c| c.len());
    let mut rank = 0;
    for r in 0..rows {
        let Some(p) = (rank..v.len()).find(|&i| v[i][r] == 1) else { continue };
        v.swap(rank, p);
        let pivot = v[rank].clone();
        for (i, col) in v.iter_mut().enumerate() {
            if i != rank && col[r] == 1 {
                for (a, b) in col.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Lexicographically first set of `r` independent columns, by exhaustive
/// search over all column subsets.
fn first_basis(h: &[Vec<u8>], r: usize) -> Vec<usize> {
    let n = h[0].len();
    let col = |c: usize| h.iter().map(|row| row[c]).collect::<Vec<u8>>();
    let mut best: Option<Vec<usize>> = None;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|c| mask >> c & 1 == 1).collect();
        let cols: Vec<Vec<u8>> = set.iter().map(|&c| col(c)).collect();
        if rank_u8(&cols) == r && best.as_ref().is_none_or(|b| set < *b) {
            best = Some(set);
        }
    }
    best.unwrap()
}

#[test]
fn pivot_columns_match_exhaustive_search() {
    let mut rng = seeded_rng(5);
    let mut checked = 0;
    while checked < 60 {
        let rows: Vec<Vec<u8>> = (0..4).map(|_| (0..8).map(|_| rng.random_range(0..2)).collect()).collect();
        let h = BitMatrix::from_bit_rows(&rows);
        if h.rank() < 4 {
            assert!(semi_systematize(&h).is_err());
            continue;
        }
        let ss = semi_systematize(&h).unwrap();
        assert_eq!(ss.comp_set, first_basis(&rows, 4));
        checked += 1;
    }
}

/// Remainder of `m(x)·x^16` modulo `x^16 + poly` by schoolbook division.
fn long_division(msg: &[u8], poly: u16) -> u16 {
    let mut g = vec![1u8];
    g.extend((0..16).rev().map(|j| (poly >> j & 1) as u8));
    let mut work: Vec<u8> = msg.to_vec();
    work.extend([0; 16]);
    for i in 0..msg.len() {
        if work[i] == 1 {
            for (w, gj) in work[i..i + 17].iter_mut().zip(&g) {
                *w ^= gj;
            }
        }
    }
    work[msg.len()..].iter().fold(0, |acc, &b| acc << 1 | b as u16)
}

#[test]
fn crc_register_matches_long_division_and_catalogue() {
    let text = b"123456789";
    let msb_first: Vec<u8> = text.iter().flat_map(|&c| (0..8).rev().map(move |i| c >> i & 1)).collect();
    assert_eq!(crc16_remainder(&msb_first, 0x3D65), long_division(&msb_first, 0x3D65));

    // The catalogued CRC-16/DNP reflects input and output and inverts the
    // result; its check value is 0xEA82.
    let lsb_first: Vec<u8> = text.iter().flat_map(|&c| (0..8).map(move |i| c >> i & 1)).collect();
    let reflected = crc16_remainder(&lsb_first, 0x3D65).reverse_bits() ^ 0xFFFF;
    assert_eq!(reflected, 0xEA82);
}

fn all_codewords(code: &LinearCode) -> Vec<Vec<u8>> {
    (0u32..1 << code.k())
        .map(|m| {
            let msg: Vec<u8> = (0..code.k()).map(|i| (m >> i & 1) as u8).collect();
            code.encode(&msg).unwrap()
        })
        .collect()
}

#[test]
fn ml_oracle_matches_dense_gaussian_argmax() {
    let code = random_code(12, 6, 4).unwrap();
    let words = all_codewords(&code);
    let model = ChannelModel::from_ebn0(2.0, code.rate(), 0.6).unwrap();
    for t in 0..50 {
        let y = transmit(&words[t % words.len()], &model, t as u64);
        let best = words
            .iter()
            .max_by(|a, b| {
                let la = mvn_logpdf(&residual(&y, a), model.sigma(), model.rho());
                let lb = mvn_logpdf(&residual(&y, b), model.sigma(), model.rho());
                la.total_cmp(&lb)
            })
            .unwrap();
        let res = decode_ml_oracle(&y, &code, &model).unwrap();
        assert_eq!(res.codeword.as_ref(), Some(best), "trial {t}");
    }
}

fn traced(gt: bool, y: &[f64], code: &LinearCode, part: &BlockPartition, model: &ChannelModel, cfg: &DecoderConfig) -> (Vec<Candidate>, orbgrand_ai::DecodeResult) {
    let mut seen = Vec::new();
    let res = if gt {
        decode_gt_traced(y, code, part, model, cfg, |c| seen.push(c.clone()))
    } else {
        decode_gp_traced(y, code, part, model, cfg, |c| seen.push(c.clone()))
    };
    (seen, res)
}

#[test]
fn returned_codeword_is_running_maximum_of_its_metric() {
    let code = random_code(16, 8, 1).unwrap();
    let part = BlockPartition::new(16, 2, code.base_set());
    let model = ChannelModel::from_ebn0(3.0, code.rate(), 0.5).unwrap();
    let words = all_codewords(&code);
    let cfg = DecoderConfig::default();
    for t in 0..300u64 {
        let y = transmit(&words[t as usize % words.len()], &model, 1000 + t);
        for gt in [false, true] {
            let (seen, res) = traced(gt, &y, &code, &part, &model, &cfg);
            let cw = res.codeword.clone().unwrap();
            assert!(code.is_codeword(&cw).unwrap());
            let metric = |c: &Candidate| if gt { c.loglik_gt } else { c.loglik_gp };
            let top = seen.iter().map(metric).fold(f64::NEG_INFINITY, f64::max);
            if seen.is_empty() {
                continue; // early exit before any candidate was scored
            }
            let returned = if gt { res.loglik_full } else { res.loglik_block_product };
            assert!((returned - top).abs() < 1e-9, "trial {t} gt={gt}");
            assert!(seen.iter().any(|c| c.codeword == cw));
            // Candidate metrics agree with the stand-alone likelihoods.
            let lik = BlockLikelihoods::new(&y, &part, &model);
            for c in &seen {
                assert!((c.loglik_gt - loglik_chain(&y, &c.codeword, &model)).abs() < 1e-9);
                assert!((c.loglik_gp - lik.product_loglik(&part, &c.codeword)).abs() < 1e-9);
            }
        }
    }
}

/// Chain density exactly as written without the `(1-ρ²)^{-1/2}` factors.
fn unscaled_chain(z: &[f64], sigma: f64, rho: f64) -> f64 {
    let f = |v: f64| -0.5 * (2.0 * std::f64::consts::PI * sigma * sigma).ln() - v * v / (2.0 * sigma * sigma);
    let s = (1.0 - rho * rho).sqrt();
    f(z[0]) + z.windows(2).map(|w| f((w[1] - rho * w[0]) / s)).sum::<f64>()
}

#[test]
fn unscaled_threshold_shift_matches_direct_densities() {
    // The unscaled stop metric lowers the threshold by (n_b - 1)·½·ln(1/(1-ρ²)).
    // Recompute that gap from unscaled densities of a whole sequence and its blocks.
    let (sigma, rho) = (0.8, 0.5);
    let model = ChannelModel::new(sigma, rho).unwrap();
    let mut rng = seeded_rng(9);
    let code = random_code(16, 8, 1).unwrap();
    let part = BlockPartition::new(16, 2, code.base_set());
    let shift = (part.len() as f64 - 1.0) * -0.5 * (1.0 - rho * rho).ln();
    for _ in 0..20 {
        let y: Vec<f64> = (0..16).map(|_| rng.random_range(-2.0..2.0)).collect();
        let x: Vec<u8> = (0..16).map(|_| rng.random_range(0..2)).collect();
        let z = residual(&y, &x);
        let full_u = unscaled_chain(&z, sigma, rho);
        let prod_u: f64 = part.blocks().iter().map(|b| unscaled_chain(&z[b.positions()], sigma, rho)).sum();
        let full = loglik_chain(&y, &x, &model);
        let prod = BlockLikelihoods::new(&y, &part, &model).product_loglik(&part, &x);
        assert!(((full_u - prod_u) - (full - prod - shift)).abs() < 1e-9);
    }
}

#[test]
fn gt_stop_metrics_only_change_where_the_search_ends() {
    let code = random_code(16, 8, 2).unwrap();
    let part = BlockPartition::new(16, 2, code.base_set());
    let model = ChannelModel::from_ebn0(2.0, code.rate(), 0.5).unwrap();
    let words = all_codewords(&code);
    for t in 0..200u64 {
        let y = transmit(&words[t as usize % words.len()], &model, t);
        let runs: Vec<(Vec<Candidate>, _)> = [StopMetric::Bound, StopMetric::Full, StopMetric::Unscaled]
            .iter()
            .map(|&m| {
                let cfg = DecoderConfig { gt_stop_metric: m, ..DecoderConfig::default() };
                traced(true, &y, &code, &part, &model, &cfg)
            })
            .collect();
        // Same emission order, so each trace is a prefix of the longest one.
        let longest = runs.iter().map(|r| r.0.len()).max().unwrap();
        let full = &runs.iter().find(|r| r.0.len() == longest).unwrap().0;
        for (seen, _) in &runs {
            assert_eq!(&full[..seen.len()], &seen[..]);
        }
    }
}
