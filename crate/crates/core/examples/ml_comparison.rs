//! GP and GT against exhaustive ML decoding on a random [16,8] code.
//!
//! cargo run --release --example ml_comparison -- [ebn0_db] [trials] [code_seed]

use orbgrand_ai::decoder::DecoderKind;
use orbgrand_ai::sim::{CodeSpec, Experiment, ExperimentConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let ebn0: f64 = args.next().map_or(4.0, |s| s.parse().expect("Eb/N0 in dB"));
    let trials: u64 = args.next().map_or(10_000, |s| s.parse().expect("trials"));
    let code_seed: u64 = args.next().map_or(1, |s| s.parse().expect("code seed"));

    let cfg = ExperimentConfig {
        code: CodeSpec::Random { n: 16, k: 8, seed: code_seed },
        ebn0_db: vec![ebn0],
        decoders: vec![DecoderKind::Ai, DecoderKind::Gp, DecoderKind::Gt, DecoderKind::Ml],
        trials,
        min_block_errors: u64::MAX,
        ..ExperimentConfig::default()
    };
    let exp = Experiment::new(cfg).unwrap();
    println!("base set {:?}", exp.code().base_set_one_based());
    let rows = exp.run_sweep().unwrap();
    let ml = rows.iter().find(|r| r.decoder == DecoderKind::Ml).unwrap().block_errors;
    for r in &rows {
        println!(
            "{}: {:>5} errors / {} ({:.2}x ML), avg queries {:.2}",
            r.decoder,
            r.block_errors,
            r.trials_run,
            r.block_errors as f64 / ml.max(1) as f64,
            r.avg_queries
        );
    }
}
