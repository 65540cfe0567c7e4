//! How much tighter symbolic bounds are than naive ones as the input box
//! grows, on a fixed pseudo-random 3-layer network. Once every hidden
//! neuron is unstable the two coincide.
//!
//! cargo run --example bounds

use ndarray::Array2;
use nnverify::{naive_forward, symbolic_forward, Activation, IntervalBox, Layer, Network, RoundingPolicy};

/// Deterministic weights in [-1, 1] without pulling in an RNG.
fn weights(rows: usize, cols: usize, salt: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |(i, j)| {
        let k = (i * 31 + j * 17 + salt * 7) % 41;
        k as f64 / 20.0 - 1.0
    })
}

fn main() -> nnverify::Result<()> {
    let sizes = [4, 16, 16, 3];
    let layers = sizes
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            let act = if k + 2 == sizes.len() { Activation::Identity } else { Activation::Relu };
            Layer::new(weights(w[1], w[0], k), ndarray::Array1::from_elem(w[1], 0.1), act)
        })
        .collect::<nnverify::Result<Vec<_>>>()?;
    let net = Network::new(layers, None)?;
    let p = RoundingPolicy::OUTWARD_64;

    println!("{:>8}  {:>12}  {:>12}  {:>9}", "radius", "naive", "symbolic", "reduction");
    for r in [0.001, 0.005, 0.01, 0.02, 0.05, 0.1] {
        let b = IntervalBox::from_bounds(&[(-r, r); 4])?;
        let n = naive_forward(&net, &b, p)?.total_width();
        let s = symbolic_forward(&net, &b, p)?.total_width();
        println!("{r:>8}  {n:>12.5}  {s:>12.5}  {:>8.1}%", 100.0 * (n - s) / n);
    }
    Ok(())
}
