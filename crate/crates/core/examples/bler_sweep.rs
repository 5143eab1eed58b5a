//! BLER and query-count sweep of AI, GP and GT on CRC[64,48] with rho = 0.5,
//! written as CSV. Prints the Eb/N0 at BLER 1e-3 of each decoder.
//!
//! cargo run --release --example bler_sweep -- [b] [out.csv] [min_errors]

use orbgrand_ai::decoder::DecoderKind;
use orbgrand_ai::sim::{ebn0_at_bler, write_csv, Experiment, ExperimentConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let b: usize = args.next().map_or(2, |s| s.parse().expect("block size"));
    let out = args.next().unwrap_or_else(|| format!("crc64_48_b{b}.csv"));
    let min_errors: u64 = args.next().map_or(100, |s| s.parse().expect("error target"));

    let cfg = ExperimentConfig {
        b,
        ebn0_db: vec![2.0, 2.5, 3.0, 3.5, 4.0],
        trials: 5_000_000,
        min_block_errors: min_errors,
        ..ExperimentConfig::default()
    };
    let exp = Experiment::new(cfg).unwrap();
    let rows = exp.run_sweep().unwrap();
    write_csv(&out, &rows).unwrap();
    println!("wrote {out}");
    for r in &rows {
        println!(
            "{} {:>4} dB  bler {:.3e}  avg queries {:>9.1}  vs AI {:.3}",
            r.decoder,
            r.ebn0_db,
            r.bler,
            r.avg_queries,
            r.avg_queries_ratio_vs_ai.unwrap_or(f64::NAN)
        );
    }
    for kind in [DecoderKind::Ai, DecoderKind::Gp, DecoderKind::Gt] {
        let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.decoder == kind).map(|r| (r.ebn0_db, r.bler)).collect();
        match ebn0_at_bler(&pts, 1e-3) {
            Some(e) => println!("{kind} reaches BLER 1e-3 at {e:.3} dB"),
            None => println!("{kind} does not cross BLER 1e-3 in range"),
        }
    }
}
