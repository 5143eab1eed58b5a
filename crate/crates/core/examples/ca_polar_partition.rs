//! Load the [128,110] CA-Polar parity-check matrix and show how its base set
//! splits into blocks.
//!
//! cargo run --example ca_polar_partition -- [b]

use orbgrand_ai::{load_code, make_partition, BlockClass};

fn ranges(set: &[usize]) -> String {
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < set.len() {
        let mut j = i;
        while j + 1 < set.len() && set[j + 1] == set[j] + 1 {
            j += 1;
        }
        out.push(if i == j { set[i].to_string() } else { format!("{}..{}", set[i], set[j]) });
        i = j + 1;
    }
    format!("{{{}}}", out.join(", "))
}

fn main() {
    let b: usize = std::env::args().nth(1).map_or(2, |s| s.parse().expect("block size"));
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/ca_polar_128_110.txt");
    let code = load_code(path).unwrap();
    println!("[{}, {}] code from {path}", code.n(), code.k());
    println!("base set       {}", ranges(&code.base_set_one_based()));
    println!("complement set {}", ranges(&code.comp_set_one_based()));

    let part = make_partition(code.n(), b, code.base_set());
    let count = |c: BlockClass| part.blocks().iter().filter(|blk| blk.class == c).count();
    println!("b = {b}: {} blocks ({} base, {} complement)", part.len(), count(BlockClass::Base), count(BlockClass::Comp));
    for blk in part.blocks().iter().filter(|blk| blk.width < b) {
        let pos: Vec<usize> = blk.positions().map(|p| p + 1).collect();
        println!("  short {:?} block at {pos:?}", blk.class);
    }
}
