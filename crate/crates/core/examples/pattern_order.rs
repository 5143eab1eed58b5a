//! Print the first patterns of a reliability table built from one received
//! block sequence.
//!
//! cargo run --example pattern_order -- [count]

use orbgrand_ai::block::BlockLikelihoods;
use orbgrand_ai::channel::transmit;
use orbgrand_ai::{BlockPartition, ChannelModel, PatternState, ReliabilityTable, Scope, Step};

fn main() {
    let count: usize = std::env::args().nth(1).map_or(20, |s| s.parse().expect("count"));
    let model = ChannelModel::new(0.8, 0.5).unwrap();
    let part = BlockPartition::uniform(8, 2);
    let y = transmit(&[0, 1, 1, 0, 1, 0, 0, 0], &model, 4);
    let lik = BlockLikelihoods::new(&y, &part, &model);
    let table = ReliabilityTable::from_likelihoods(&lik, &part, Scope::All);

    println!("y = {:.3?}", y);
    println!("hard block patterns {:?}", lik.hard().iter().map(|p| format!("{p:02b}")).collect::<Vec<_>>());
    println!("rank  block  pattern  delta");
    for (i, e) in table.entries().iter().enumerate() {
        println!("{:>4}  {:>5}  {:>7}  {:.3}", i + 1, e.block, format!("{:02b}", e.pattern), e.delta);
    }

    let mut st = PatternState::new(&table, 10_000);
    println!("\nquery  W  ranks        delta sum");
    for _ in 0..count {
        if st.advance() != Step::Emitted {
            break;
        }
        println!(
            "{:>5} {:>2}  {:<12} {:.3}",
            st.queries(),
            st.current_weight(),
            format!("{:?}", st.current_ranks()),
            st.current_delta_sum()
        );
    }
    println!("{} discarded so far", st.discarded());
}
