//! Interval Jacobian over a box and the input the smear heuristic would
//! bisect first.
//!
//! cargo run --example gradient

use nnverify::gradient::{backward_gradient, smear_split_choice};
use nnverify::{symbolic_forward, IntervalBox, Network, RoundingPolicy};

fn main() -> nnverify::Result<()> {
    let net = Network::from_nnet_lite(include_str!("../data/two_neuron.nnl"))?;
    let p = RoundingPolicy::OUTWARD_64;

    for bounds in [[(4.0, 6.0), (1.0, 5.0)], [(-1.0, 1.0), (-1.0, 1.0)], [(0.0, 1.0), (0.0, 10.0)]] {
        let b = IntervalBox::from_bounds(&bounds)?;
        let fr = symbolic_forward(&net, &b, p)?;
        let masks = fr.masks.as_ref().expect("symbolic analysis records masks");
        let j = backward_gradient(&net, masks, p)?;
        let row: Vec<String> = j.row(0).iter().map(|g| format!("[{}, {}]", g.lo(), g.hi())).collect();
        println!(
            "box {bounds:?}: dy/dx = {}  split x{}",
            row.join(" "),
            smear_split_choice(&j, &b, 1e-6)?
        );
    }
    Ok(())
}
