//! Print the JSON run report of a verification and of an enumeration.
//!
//! cargo run --example report

use nnverify::engine::report::RunReport;
use nnverify::{enumerate, parse_property, verify, Config, Network};

fn main() -> nnverify::Result<()> {
    let net = Network::from_nnet_lite(include_str!("../data/two_neuron.nnl"))?;
    let prop = parse_property(include_str!("../data/le15.prop"))?;
    let cfg = Config {
        precision: 0.5,
        workers: 2,
        ..Config::default()
    };

    let v = verify(&net, &prop, &cfg)?;
    println!("{}", RunReport::from_verdict(&v, &cfg).with_sources("two_neuron.nnl", "le15.prop").to_json());
    let r = enumerate(&net, &prop, &cfg)?;
    println!("{}", RunReport::from_partition(&r, &cfg).with_sources("two_neuron.nnl", "le15.prop").to_json());
    Ok(())
}
