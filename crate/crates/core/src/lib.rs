//! Soft-decision decoding of binary linear codes over BPSK channels with
//! first-order Gauss-Markov noise.
//!
//! The crate provides ORBGRAND-AI, which guesses noise effects block by
//! block using relative reliabilities that account for correlation inside
//! each block, and two guessing-codeword decoders driven by it:
//!
//! * **GP** keeps the best extended codeword under the block-product
//!   likelihood and stops once no later query can beat it.
//! * **GT** keeps the best extended codeword under the full-correlation
//!   likelihood of the whole sequence, with the same stopping bound
//!   compared against that running maximum.
//!
//! [`sim`] runs seeded Monte-Carlo sweeps of block error rate and query
//! counts and writes CSV. See the crate's `examples/` directory for one
//! runnable program per capability.
//!
//! ```
//! use orbgrand_ai::{build_crc_code, channel, ChannelModel, DecoderConfig, DecoderKind, DecoderSuite, CRC16_DNP};
//!
//! let code = build_crc_code(48, CRC16_DNP).unwrap();
//! let suite = DecoderSuite::new(code, 2, DecoderConfig::default());
//! let model = ChannelModel::from_ebn0(4.0, suite.code.rate(), 0.5).unwrap();
//! let cw = suite.code.encode(&[0; 48]).unwrap();
//! let y = channel::transmit(&cw, &model, 42);
//! let res = suite.decode(DecoderKind::Gt, &y, &model).unwrap();
//! assert!(suite.code.is_codeword(res.codeword.as_ref().unwrap()).unwrap());
//! ```

pub mod block;
pub mod channel;
pub mod code;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod pattern;
pub mod sim;

pub use block::{make_partition, BlockClass, BlockPartition, ReliabilityTable, Scope};
pub use channel::{ebn0_to_sigma, ChannelModel};
pub use code::{build_crc_code, load_code, semi_systematize, LinearCode, CRC16_DNP};
pub use decoder::{
    decode_gp, decode_gt, decode_ml_oracle, decode_orbgrand_ai, DecodeResult, DecoderConfig, DecoderKind,
    DecoderSuite, Status, StopMetric,
};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use pattern::{Pattern, PatternState, Step};
