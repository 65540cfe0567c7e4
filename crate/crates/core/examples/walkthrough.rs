//! The two-neuron network on [4, 6] x [1, 5]: naive and symbolic bounds,
//! then a proof of `y <= 20` and a counterexample to `y <= 15`.
//!
//! cargo run --example walkthrough

use nnverify::{naive_forward, parse_property, symbolic_forward, verify, Config, IntervalBox, Network, RoundingPolicy};

const NET: &str = include_str!("../data/two_neuron.nnl");
const LE15: &str = include_str!("../data/le15.prop");
const LE20: &str = include_str!("../data/le20.prop");

fn main() -> nnverify::Result<()> {
    let net = Network::from_nnet_lite(NET)?;
    let region = IntervalBox::from_bounds(&[(4.0, 6.0), (1.0, 5.0)])?;
    let p = RoundingPolicy::OUTWARD_64;

    let naive = naive_forward(&net, &region, p)?;
    let sym = symbolic_forward(&net, &region, p)?;
    println!("f(4, 1)  = {:?}", net.eval(&[4.0, 1.0])?);
    println!("naive    = {:?}", naive.out_bounds[0]);
    println!("symbolic = {:?}", sym.out_bounds[0]);

    for text in [LE20, LE15] {
        let prop = parse_property(text)?;
        let v = verify(&net, &prop, &Config::default())?;
        println!(
            "{:<5} {} cex={:?} nodes={}",
            prop.name.as_deref().unwrap_or("?"),
            v.status,
            v.counterexample,
            v.stats.nodes_explored
        );
    }
    Ok(())
}
