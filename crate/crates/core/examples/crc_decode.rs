//! Decode one noisy CRC[64,48] codeword with every decoder.
//!
//! cargo run --release --example crc_decode -- [ebn0_db] [seed]

use orbgrand_ai::channel::transmit;
use orbgrand_ai::{build_crc_code, ChannelModel, DecoderConfig, DecoderKind, DecoderSuite, CRC16_DNP};

fn main() {
    let mut args = std::env::args().skip(1);
    let ebn0: f64 = args.next().map_or(2.5, |s| s.parse().expect("Eb/N0 in dB"));
    let seed: u64 = args.next().map_or(17, |s| s.parse().expect("integer seed"));

    let code = build_crc_code(48, CRC16_DNP).unwrap();
    let suite = DecoderSuite::new(code, 2, DecoderConfig::default());
    let model = ChannelModel::from_ebn0(ebn0, suite.code.rate(), 0.5).unwrap();

    let msg: Vec<u8> = (0..48).map(|i| ((i * 7 + 3) % 5 == 0) as u8).collect();
    let sent = suite.code.encode(&msg).unwrap();
    let y = transmit(&sent, &model, seed);
    let flipped = y.iter().zip(&sent).filter(|(v, &b)| (**v < 0.0) != (b == 1)).count();
    println!("[64, 48] CRC, rho = 0.5, Eb/N0 = {ebn0} dB, sigma = {:.4}", model.sigma());
    println!("hard decision disagrees with the sent word in {flipped} positions");

    for kind in [DecoderKind::Ai, DecoderKind::Gp, DecoderKind::Gt] {
        let r = suite.decode(kind, &y, &model).unwrap();
        let ok = r.codeword.as_deref() == Some(&sent[..]);
        println!(
            "{kind}: {:<10} queries {:>7} (discarded {:>6})  log f(y|x) {:>9.3}  {}",
            r.status.as_str(),
            r.queries,
            r.discarded,
            r.loglik_full,
            if ok { "correct" } else { "block error" }
        );
    }
}
