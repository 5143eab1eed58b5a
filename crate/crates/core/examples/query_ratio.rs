//! Average query counts of GP and GT relative to AI for CRC codes of several
//! dimensions, b = 2, rho = 0.5. Writes one CSV per code.
//!
//! cargo run --release --example query_ratio -- [ebn0_db] [trials]

use orbgrand_ai::decoder::DecoderKind;
use orbgrand_ai::sim::{write_csv, CodeSpec, Experiment, ExperimentConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let ebn0: f64 = args.next().map_or(3.0, |s| s.parse().expect("Eb/N0 in dB"));
    let trials: u64 = args.next().map_or(2000, |s| s.parse().expect("trials"));

    println!("   n    k   rate   GP/AI   GT/AI");
    for k in [16, 32, 48, 64, 96, 112] {
        let cfg = ExperimentConfig {
            code: CodeSpec::Crc { k, poly: orbgrand_ai::CRC16_DNP },
            ebn0_db: vec![ebn0],
            trials,
            min_block_errors: u64::MAX,
            ..ExperimentConfig::default()
        };
        let exp = Experiment::new(cfg).unwrap();
        let rows = exp.run_sweep().unwrap();
        write_csv(format!("ratio_crc_{}_{k}.csv", k + 16), &rows).unwrap();
        let ratio = |kind| rows.iter().find(|r| r.decoder == kind).and_then(|r| r.avg_queries_ratio_vs_ai).unwrap();
        println!(
            "{:>4} {k:>4}  {:.3}  {:>6.3}  {:>6.3}",
            k + 16,
            exp.code().rate(),
            ratio(DecoderKind::Gp),
            ratio(DecoderKind::Gt)
        );
    }
}
