//! Empirical autocovariance of Gauss-Markov noise and the chain likelihood
//! against a product of independent blocks.
//!
//! cargo run --release --example channel_stats -- [rho] [sigma]

use orbgrand_ai::block::BlockLikelihoods;
use orbgrand_ai::channel::{loglik_chain, sample_noise, transmit};
use orbgrand_ai::{BlockPartition, ChannelModel};

fn main() {
    let mut args = std::env::args().skip(1);
    let rho: f64 = args.next().map_or(0.5, |s| s.parse().expect("rho"));
    let sigma: f64 = args.next().map_or(1.0, |s| s.parse().expect("sigma"));
    let model = ChannelModel::new(sigma, rho).unwrap();

    let n = 1_000_000;
    let noise = sample_noise(n, &model, 1);
    println!("{n} samples, sigma = {sigma}, rho = {rho}");
    println!("lag  empirical  expected");
    for lag in 0..=4 {
        let c = noise[..n - lag].iter().zip(&noise[lag..]).map(|(a, b)| a * b).sum::<f64>() / (n - lag) as f64;
        println!("{lag:>3}  {c:>9.5}  {:>8.5}", model.covariance(lag));
    }

    // Average log-likelihood of the sent word: full chain versus blocks of b.
    let x = vec![0u8; 64];
    let trials = 2000;
    println!("\nmean log f(y|x) of the sent word over {trials} draws, n = 64");
    for b in [1, 2, 4, 8] {
        let part = BlockPartition::uniform(64, b);
        let (mut full, mut prod) = (0.0, 0.0);
        for t in 0..trials {
            let y = transmit(&x, &model, t);
            full += loglik_chain(&y, &x, &model);
            prod += BlockLikelihoods::new(&y, &part, &model).product_loglik(&part, &x);
        }
        println!("b = {b}: chain {:>8.3}  block product {:>8.3}", full / trials as f64, prod / trials as f64);
    }
}
