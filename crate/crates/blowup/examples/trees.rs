//! Counts of planar trees behind the scalar blow-up flows `x' = x^m`.

use blowup::scenarios::tree_count;

fn main() -> blowup::Result<()> {
    for m in 2..=16 {
        println!("{m:>3} {}", tree_count(m)?);
    }
    Ok(())
}
