//! Dimensions of tensor families and trimmed spaces, as printed by `feec dims`.
//!
//!     cargo run --example dimension_table -- 3 4

use feec::cli::dims_table;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(2);
    let rmax = args.get(1).copied().unwrap_or(4);
    print!("{}", dims_table(n, rmax));
}
