//! Outward rounding keeps every bound on the safe side of the exact value.
//!
//! cargo run --example rounding

use nnverify::{Interval, RoundingPolicy};

fn main() -> nnverify::Result<()> {
    for (label, p) in [("f64", RoundingPolicy::OUTWARD_64), ("f32", RoundingPolicy::OUTWARD_32)] {
        let tenth = Interval::point(0.1)?;
        let mut acc = Interval::point(0.0)?;
        for _ in 0..10 {
            acc = p.add(acc, tenth)?;
        }
        println!("{label}: ten additions of 0.1 -> [{:.20}, {:.20}]", acc.lo(), acc.hi());
        println!("{label}: 1/3 in [{:.20}, {:.20}]", p.div_down(1.0, 3.0), p.div_up(1.0, 3.0));
        let sq = p.mul(Interval::new(-1.0, 3.0)?, Interval::new(-1.0, 3.0)?)?;
        println!("{label}: [-1, 3] * [-1, 3] = [{}, {}]", sq.lo(), sq.hi());
    }
    let naive = 0.1 + 0.2;
    println!("plain f64: 0.1 + 0.2 = {naive:.20}");
    Ok(())
}
