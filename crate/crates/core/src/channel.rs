//! BPSK over a first-order Gauss-Markov noise channel.
//!
//! Bit 0 maps to `+1`, bit 1 to `-1`, and the receiver sees
//! `y = (1 - 2x) + N` where `N_1 = σZ_1`, `N_i = ρN_{i-1} + sqrt(1-ρ²)σZ_i`.
//! The process is stationary with `Cov(N_i, N_j) = σ²ρ^|i-j|`.
//!
//! Likelihoods are log-densities of the noise residual `z = y - (1 - 2x)`,
//! evaluated with the AR(1) chain rule and including every normalising
//! constant, so they agree with the dense multivariate Gaussian density.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Noise standard deviation and lag-1 correlation of the Gauss-Markov process.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelModel {
    sigma: f64,
    rho: f64,
}

impl ChannelModel {
    pub fn new(sigma: f64, rho: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Channel(format!("sigma must be positive and finite, got {sigma}")));
        }
        if !(rho > -1.0 && rho < 1.0) {
            return Err(Error::Channel(format!("rho must lie in (-1, 1), got {rho}")));
        }
        Ok(ChannelModel { sigma, rho })
    }

    /// Model at a given Eb/N0 for a code of the given rate.
    pub fn from_ebn0(ebn0_db: f64, rate: f64, rho: f64) -> Result<Self> {
        ChannelModel::new(ebn0_to_sigma(ebn0_db, rate), rho)
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    #[inline]
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Covariance of two noise samples `lag` symbols apart.
    pub fn covariance(&self, lag: usize) -> f64 {
        self.sigma * self.sigma * self.rho.powi(lag as i32)
    }

    pub(crate) fn kernel(&self) -> Kernel {
        Kernel::new(self)
    }
}

/// Unit-energy BPSK: `Es = R·Eb`, `N0 = 2σ²`.
pub fn ebn0_to_sigma(ebn0_db: f64, rate: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt()
}

/// Mixes a master seed with a stream id and a counter (splitmix64 finaliser
/// applied to each input in turn).
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(mix(mix(master) ^ stream) ^ index)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fills `out` with a Gauss-Markov noise realisation drawn from `rng`.
pub fn fill_noise<R: Rng + ?Sized>(rng: &mut R, model: &ChannelModel, out: &mut [f64]) {
    let innovation = model.sigma * (1.0 - model.rho * model.rho).sqrt();
    let mut prev = 0.0;
    for (i, slot) in out.iter_mut().enumerate() {
        let z: f64 = rng.sample(StandardNormal);
        prev = if i == 0 {
            model.sigma * z
        } else {
            model.rho * prev + innovation * z
        };
        *slot = prev;
    }
}

/// `n` noise samples from the generator seeded with `seed`.
pub fn sample_noise(n: usize, model: &ChannelModel, seed: u64) -> Vec<f64> {
    let mut out = vec![0.0; n];
    fill_noise(&mut seeded_rng(seed), model, &mut out);
    out
}

/// BPSK symbols for a bit sequence.
pub fn modulate(x: &[u8]) -> Vec<f64> {
    x.iter().map(|&b| if b & 1 == 0 { 1.0 } else { -1.0 }).collect()
}

/// Adds a given noise vector to the modulated bits.
pub fn transmit_with_noise(x: &[u8], noise: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), noise.len(), "noise length differs from codeword length");
    modulate(x).into_iter().zip(noise).map(|(s, n)| s + n).collect()
}

/// `y = (1 - 2x) + N` with `N` drawn from `seed`.
pub fn transmit(x: &[u8], model: &ChannelModel, seed: u64) -> Vec<f64> {
    transmit_with_noise(x, &sample_noise(x.len(), model, seed))
}

/// `log f(y | x)` over the whole sequence with full correlation.
pub fn loglik_chain(y: &[f64], x: &[u8], model: &ChannelModel) -> f64 {
    assert_eq!(y.len(), x.len(), "y and x lengths differ");
    model.kernel().chain(y.iter().zip(x).map(|(&yi, &xi)| yi - bpsk(xi)))
}

/// `log f(y_blk | x_blk)` for one block under the stationary marginal; equal
/// to [`loglik_chain`] on the block taken alone.
pub fn loglik_block(y_blk: &[f64], x_blk: &[u8], model: &ChannelModel) -> f64 {
    loglik_chain(y_blk, x_blk, model)
}

#[inline]
pub(crate) fn bpsk(bit: u8) -> f64 {
    1.0 - 2.0 * (bit & 1) as f64
}

/// Precomputed constants for the chain-rule log-density.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Kernel {
    rho: f64,
    first_const: f64,
    first_scale: f64,
    step_const: f64,
    step_scale: f64,
}

impl Kernel {
    fn new(model: &ChannelModel) -> Self {
        let var = model.sigma * model.sigma;
        let step_var = var * (1.0 - model.rho * model.rho);
        let ln_2pi = (2.0 * std::f64::consts::PI).ln();
        Kernel {
            rho: model.rho,
            first_const: -0.5 * (ln_2pi + var.ln()),
            first_scale: 0.5 / var,
            step_const: -0.5 * (ln_2pi + step_var.ln()),
            step_scale: 0.5 / step_var,
        }
    }

    /// Chain-rule log-density of a residual sequence.
    #[inline]
    pub(crate) fn chain(&self, residuals: impl IntoIterator<Item = f64>) -> f64 {
        let mut it = residuals.into_iter();
        let Some(z0) = it.next() else {
            return 0.0;
        };
        let mut acc = self.first_const - self.first_scale * z0 * z0;
        let mut prev = z0;
        for z in it {
            let e = z - self.rho * prev;
            acc += self.step_const - self.step_scale * e * e;
            prev = z;
        }
        acc
    }
}
