// The complexity-reduction table on a small synthetic corpus: full
// masking weighting, its three reductions and the classic gamma filter.
//
// Run with `cargo run --release --example complexity_table [files]`.

use celpsy::celp::Mode;
use celpsy::harness::corpus::{synthetic_corpus, CORPUS_SEED};
use celpsy::harness::{complexity_table, ComplexityTable};

pub fn run_example(files: usize) -> celpsy::Result<ComplexityTable> {
    let items = synthetic_corpus(CORPUS_SEED, files, 1.0);
    complexity_table(&items, Mode::High)
}

#[allow(dead_code)]
fn main() -> celpsy::Result<()> {
    let files = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    println!("{}", run_example(files)?);
    Ok(())
}
