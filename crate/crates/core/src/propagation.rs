//! Forward output-range analysis: naive interval extension and symbolic
//! interval propagation.
//!
//! Both entry points take a box in raw input units. When the network carries
//! an input normalization the box is first mapped (outward) onto network
//! coordinates; symbolic expressions are over those coordinates and
//! [`ForwardResult::input_box`] records the box they are valid over.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox};
use crate::network::{Activation, Network};
use crate::rounding::RoundingPolicy;
use crate::symbolic::{affine_sym, relu_sym, ReluState, SymInterval};

/// Activation state of every hidden neuron, one row per ReLU layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReluMaskMatrix {
    layers: Vec<Vec<ReluState>>,
}

impl ReluMaskMatrix {
    pub fn new(layers: Vec<Vec<ReluState>>) -> Self {
        ReluMaskMatrix { layers }
    }

    /// A mask where every neuron has the same state.
    pub fn uniform(net: &Network, state: ReluState) -> Self {
        ReluMaskMatrix {
            layers: net.hidden_sizes().into_iter().map(|n| vec![state; n]).collect(),
        }
    }

    pub fn layers(&self) -> &[Vec<ReluState>] {
        &self.layers
    }

    pub fn matches(&self, net: &Network) -> bool {
        let sizes = net.hidden_sizes();
        sizes.len() == self.layers.len() && sizes.iter().zip(&self.layers).all(|(n, l)| *n == l.len())
    }

    pub fn count(&self, state: ReluState) -> usize {
        self.layers.iter().flatten().filter(|s| **s == state).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForwardResult {
    pub out_bounds: Vec<Interval>,
    /// Output expressions (symbolic mode only).
    pub out_sym: Option<Vec<SymInterval>>,
    /// Hidden activation states (symbolic mode only).
    pub masks: Option<ReluMaskMatrix>,
    /// The analysed box in network input coordinates.
    pub input_box: IntervalBox,
}

impl ForwardResult {
    /// Sum of output widths.
    pub fn total_width(&self) -> f64 {
        self.out_bounds.iter().map(Interval::width).sum()
    }
}

/// Layer-by-layer interval extension of the network.
pub fn naive_forward(net: &Network, x: &IntervalBox, policy: RoundingPolicy) -> Result<ForwardResult> {
    let input_box = net.to_network_input(x, policy)?;
    let mut h: Vec<Interval> = input_box.dims().to_vec();
    for layer in net.layers() {
        h = policy.matvec(layer.weights(), layer.biases(), &h)?;
        if layer.activation() == Activation::Relu {
            h.iter_mut().for_each(|v| *v = v.relu());
        }
    }
    Ok(ForwardResult {
        out_bounds: h,
        out_sym: None,
        masks: None,
        input_box,
    })
}

/// Symbolic interval propagation with ReLU concretization. Output bounds
/// are never wider than those of [`naive_forward`].
pub fn symbolic_forward(net: &Network, x: &IntervalBox, policy: RoundingPolicy) -> Result<ForwardResult> {
    let input_box = net.to_network_input(x, policy)?;
    let d = input_box.len();
    let mut eqs = SymInterval::inputs(d);
    let mut masks = Vec::with_capacity(net.layers().len().saturating_sub(1));
    // plain interval pass alongside; both are sound, so the outputs can be intersected
    let mut plain: Vec<Interval> = input_box.dims().to_vec();
    for layer in net.layers() {
        plain = policy.matvec(layer.weights(), layer.biases(), &plain)?;
        if layer.activation() == Activation::Relu {
            plain.iter_mut().for_each(|v| *v = v.relu());
        }
        eqs = affine_sym(&eqs, layer.weights(), layer.biases(), &input_box, policy)?;
        if layer.activation() == Activation::Relu {
            let mut states = Vec::with_capacity(eqs.len());
            for e in eqs.iter_mut() {
                let (next, state) = relu_sym(e, &input_box, policy)?;
                *e = next;
                states.push(state);
            }
            masks.push(states);
        }
    }
    let out_bounds = eqs
        .iter()
        .zip(&plain)
        .map(|(s, p)| {
            let c = s.concretize(&input_box, policy)?;
            Ok(Interval::new(c.lo().max(p.lo()), c.hi().min(p.hi())).unwrap_or(*p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ForwardResult {
        out_bounds,
        out_sym: Some(eqs),
        masks: Some(ReluMaskMatrix::new(masks)),
        input_box,
    })
}

/// Which forward analysis to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Symbolic,
    Naive,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbolic" => Ok(Mode::Symbolic),
            "naive" => Ok(Mode::Naive),
            other => Err(Error::InvalidConfig(format!("unknown mode `{other}`"))),
        }
    }
}

pub fn forward(net: &Network, x: &IntervalBox, mode: Mode, policy: RoundingPolicy) -> Result<ForwardResult> {
    match mode {
        Mode::Symbolic => symbolic_forward(net, x, policy),
        Mode::Naive => naive_forward(net, x, policy),
    }
}
