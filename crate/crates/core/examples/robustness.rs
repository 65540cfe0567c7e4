//! Largest certified L-infinity radius around a seed input of a small
//! classifier, found by bisecting on the radius.
//!
//! cargo run --example robustness

use std::time::Duration;

use nnverify::property::{robustness_to_property, RobustnessSpec};
use nnverify::{verify, Activation, Config, Layer, Network, Status};

fn classifier() -> nnverify::Result<Network> {
    let hidden = Layer::new(
        ndarray::array![[1.0, -1.0], [-1.0, 1.0], [0.5, 0.5]],
        ndarray::array![0.0, 0.0, -0.5],
        Activation::Relu,
    )?;
    let out = Layer::new(
        ndarray::array![[1.0, 0.0, 0.2], [0.0, 1.0, 0.2], [0.0, 0.0, 1.5]],
        ndarray::array![0.0, 0.0, 0.0],
        Activation::Identity,
    )?;
    Network::new(vec![hidden, out], None)
}

fn main() -> nnverify::Result<()> {
    let net = classifier()?;
    let seed = vec![1.0, 0.2];
    let y = net.eval(&seed)?;
    let label = (0..y.len()).max_by(|&a, &b| y[a].total_cmp(&y[b])).unwrap_or(0);
    println!("f({seed:?}) = {y:?}, label {label}");

    let cfg = Config {
        precision: 1e-4,
        timeout: Duration::from_secs(10),
        ..Config::default()
    };
    let (mut safe, mut unsafe_r) = (0.0, 1.0);
    while unsafe_r - safe > 1e-3 {
        let radius = (safe + unsafe_r) / 2.0;
        let ball = RobustnessSpec {
            seed: seed.clone(),
            radius,
            label,
            domain: None,
        };
        let v = verify(&net, &robustness_to_property(&ball, net.output_dim())?, &cfg)?;
        println!("radius {radius:.4}: {}", v.status);
        match v.status {
            Status::Secure => safe = radius,
            _ => unsafe_r = radius,
        }
    }
    println!("certified radius >= {safe:.4}");
    Ok(())
}
