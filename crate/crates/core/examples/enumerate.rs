//! Split the region of `le15.prop` into secure, insecure and unknown boxes.
//!
//! cargo run --example enumerate

use nnverify::{enumerate, parse_property, Config, Network, SubStatus};

fn main() -> nnverify::Result<()> {
    let net = Network::from_nnet_lite(include_str!("../data/two_neuron.nnl"))?;
    let prop = parse_property(include_str!("../data/le15.prop"))?;
    let cfg = Config {
        precision: 0.25,
        ..Config::default()
    };

    let r = enumerate(&net, &prop, &cfg)?;
    for e in &r.entries {
        let dims: Vec<String> = e.bx.dims().iter().map(|i| format!("[{}, {}]", i.lo(), i.hi())).collect();
        println!("{:<12} {}", format!("{:?}", e.status), dims.join(" x "));
    }
    let total = prop.input.regions[0].volume();
    for s in [SubStatus::SecureSub, SubStatus::InsecureSub, SubStatus::UnknownSub] {
        println!("{s:?}: {:.2}% of the region", 100.0 * r.volume(s) / total);
    }
    Ok(())
}
