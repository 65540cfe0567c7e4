//! Verify a property file against a network file.
//!
//! cargo run --example verify -- [NETWORK] [PROPERTY]
//!
//! Defaults to the bundled two-neuron network and `le15.prop`.

use std::path::PathBuf;

use nnverify::{parse_property, verify, Config, Network};

fn main() -> nnverify::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut args = std::env::args().skip(1);
    let net_path = args.next().map(PathBuf::from).unwrap_or(data.join("two_neuron.nnl"));
    let prop_path = args.next().map(PathBuf::from).unwrap_or(data.join("le15.prop"));

    let net = Network::load_path(&net_path)?;
    let text = std::fs::read_to_string(&prop_path).map_err(|e| nnverify::Error::Io(e.to_string()))?;
    let prop = parse_property(&text)?;

    let v = verify(&net, &prop, &Config::default())?;
    println!("status: {}", v.status);
    if let Some(x) = &v.counterexample {
        println!("counterexample: {x:?} -> {:?}", net.eval(x)?);
    }
    println!(
        "nodes {}  max depth {}  {:.3}s",
        v.stats.nodes_explored, v.stats.max_depth, v.stats.wall_time
    );
    Ok(())
}
