#![allow(dead_code)]

use std::cmp::Ordering;

use ndarray::{Array1, Array2};
use num::bigint::BigInt;
use num::{Signed, Zero};
use rand::Rng;

use nnverify::interval::IntervalBox;
use nnverify::network::{Activation, Layer, Network};

pub fn two_neuron_net() -> Network {
    Network::new(
        vec![
            Layer::new(ndarray::array![[2.0, 3.0], [1.0, 1.0]], ndarray::array![0.0, 0.0], Activation::Relu).unwrap(),
            Layer::new(ndarray::array![[1.0, -1.0]], ndarray::array![0.0], Activation::Identity).unwrap(),
        ],
        None,
    )
    .unwrap()
}

pub fn data_path(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

/// Shape limits for [`random_net`].
#[derive(Clone, Copy)]
pub struct NetShape {
    pub inputs: (usize, usize),
    /// Number of affine layers, output layer included.
    pub layers: (usize, usize),
    pub width: usize,
    pub outputs: (usize, usize),
}

pub const SMALL: NetShape = NetShape {
    inputs: (1, 5),
    layers: (2, 4),
    width: 20,
    outputs: (1, 4),
};

/// Weights U[-2, 2], biases U[-1, 1].
pub fn random_net<R: Rng>(rng: &mut R, shape: NetShape) -> Network {
    let d = rng.gen_range(shape.inputs.0..=shape.inputs.1);
    let n_layers = rng.gen_range(shape.layers.0..=shape.layers.1);
    let m = rng.gen_range(shape.outputs.0..=shape.outputs.1);
    let mut sizes = vec![d];
    for _ in 0..n_layers - 1 {
        sizes.push(rng.gen_range(1..=shape.width));
    }
    sizes.push(m);
    let layers = sizes
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            let weights = Array2::from_shape_fn((w[1], w[0]), |_| rng.gen_range(-2.0..=2.0));
            let biases = Array1::from_shape_fn(w[1], |_| rng.gen_range(-1.0..=1.0));
            let act = if k + 2 == sizes.len() {
                Activation::Identity
            } else {
                Activation::Relu
            };
            Layer::new(weights, biases, act).unwrap()
        })
        .collect();
    Network::new(layers, None).unwrap()
}

/// Box with centres in [-1, 1] and widths in `widths`.
pub fn random_box<R: Rng>(rng: &mut R, d: usize, widths: (f64, f64)) -> IntervalBox {
    let b: Vec<(f64, f64)> = (0..d)
        .map(|_| {
            let c = rng.gen_range(-1.0..=1.0);
            let w = rng.gen_range(widths.0..=widths.1);
            (c - w / 2.0, c + w / 2.0)
        })
        .collect();
    IntervalBox::from_bounds(&b).unwrap()
}

pub fn sample_in<R: Rng>(rng: &mut R, b: &IntervalBox) -> Vec<f64> {
    b.dims()
        .iter()
        .map(|i| if i.is_point() { i.lo() } else { rng.gen_range(i.lo()..=i.hi()) })
        .collect()
}

/// Exact value `mant * 2^exp`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Dyadic {
            mant: BigInt::from(m) * sign,
            exp: e,
        }
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        (
            &a.mant << (a.exp - e) as usize,
            &b.mant << (b.exp - e) as usize,
            e,
        )
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.mant.is_zero() {
            return o.clone();
        }
        if o.mant.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Dyadic::aligned(self, o);
        Dyadic { mant: a + b, exp: e }
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic {
            mant: &self.mant * &o.mant,
            exp: self.exp + o.exp,
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn relu(self) -> Dyadic {
        if self.mant.is_negative() {
            Dyadic::zero()
        } else {
            self
        }
    }

    pub fn cmp_f64(&self, x: f64) -> Ordering {
        let (a, b, _) = Dyadic::aligned(self, &Dyadic::from_f64(x));
        a.cmp(&b)
    }
}

/// Exact network output at a float input (no normalization).
pub fn exact_eval(net: &Network, x: &[f64]) -> Vec<Dyadic> {
    exact_layers(net, x).pop().unwrap()
}

/// Exact pre-activation values of every layer, the output layer last.
pub fn exact_layers(net: &Network, x: &[f64]) -> Vec<Vec<Dyadic>> {
    assert!(net.normalization().is_none());
    let mut h: Vec<Dyadic> = x.iter().map(|&v| Dyadic::from_f64(v)).collect();
    let mut out = Vec::new();
    for layer in net.layers() {
        let w = layer.weights();
        let b = layer.biases();
        let pre: Vec<Dyadic> = (0..layer.out_size())
            .map(|i| {
                let mut acc = Dyadic::from_f64(b[i]);
                for (j, hj) in h.iter().enumerate() {
                    acc = acc.add(&Dyadic::from_f64(w[[i, j]]).mul(hj));
                }
                acc
            })
            .collect();
        h = if layer.activation() == Activation::Relu {
            pre.iter().cloned().map(Dyadic::relu).collect()
        } else {
            pre.clone()
        };
        out.push(pre);
    }
    out
}

/// `lo <= v <= hi` exactly.
pub fn within(v: &Dyadic, lo: f64, hi: f64) -> bool {
    v.cmp_f64(lo) != Ordering::Less && v.cmp_f64(hi) != Ordering::Greater
}
