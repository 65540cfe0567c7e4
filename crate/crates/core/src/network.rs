//! ReLU feed-forward networks: validation, loading and concrete evaluation.
//!
//! Three on-disk formats are understood:
//!
//! * [`NetworkFormat::NnetLite`]: a compact text format. Line 1 is
//!   `numLayers d m maxLayerSize`; line 2 holds the `numLayers + 1` layer
//!   sizes; an optional `norm:` line with `d` `mean,range` pairs; then per
//!   layer `out` lines of `in` weights followed by one line of `out` biases.
//!   Separators may be commas or whitespace and `#` starts a comment.
//! * [`NetworkFormat::Json`]: the same fields as a JSON document.
//! * [`NetworkFormat::Nnet`]: the original ACAS Xu `.nnet` layout. Input
//!   means/ranges become the input normalization and the output mean/range
//!   is folded into the last layer. Input clipping to the min/max lines is
//!   not modelled.

use std::fmt::Write as _;
use std::io::Read;
use std::str::FromStr;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalBox};
use crate::rounding::RoundingPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Identity,
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "relu" => Ok(Activation::Relu),
            "identity" | "linear" | "none" => Ok(Activation::Identity),
            other => Err(Error::UnsupportedActivation(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    weights: Array2<f64>,
    biases: Array1<f64>,
    activation: Activation,
}

impl Layer {
    pub fn new(weights: Array2<f64>, biases: Array1<f64>, activation: Activation) -> Result<Self> {
        if weights.nrows() != biases.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} weight rows but {} biases",
                weights.nrows(),
                biases.len()
            )));
        }
        if weights.iter().chain(biases.iter()).any(|v| !v.is_finite()) {
            return Err(Error::ShapeMismatch("non-finite parameter".into()));
        }
        Ok(Layer {
            weights,
            biases,
            activation,
        })
    }

    pub fn weights(&self) -> &Array2<f64> {
        &self.weights
    }

    pub fn biases(&self) -> &Array1<f64> {
        &self.biases
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn in_size(&self) -> usize {
        self.weights.ncols()
    }

    pub fn out_size(&self) -> usize {
        self.weights.nrows()
    }
}

/// Per-input affine normalization `(x - mean) / range`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub mean: Vec<f64>,
    pub range: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    layers: Vec<Layer>,
    normalization: Option<Normalization>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetworkFormat {
    NnetLite,
    Json,
    Nnet,
}

impl NetworkFormat {
    /// Guess the format from a file extension.
    pub fn from_extension(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => NetworkFormat::Json,
            Some("nnet") => NetworkFormat::Nnet,
            _ => NetworkFormat::NnetLite,
        }
    }
}

impl Network {
    pub fn new(layers: Vec<Layer>, normalization: Option<Normalization>) -> Result<Self> {
        let Some(last) = layers.last() else {
            return Err(Error::ShapeMismatch("network has no layers".into()));
        };
        if last.activation != Activation::Identity {
            return Err(Error::ShapeMismatch("output layer must be affine".into()));
        }
        for (k, pair) in layers.windows(2).enumerate() {
            if pair[0].activation != Activation::Relu {
                return Err(Error::ShapeMismatch(format!("hidden layer {k} must use relu")));
            }
            if pair[0].out_size() != pair[1].in_size() {
                return Err(Error::ShapeMismatch(format!(
                    "layer {k} outputs {} values but layer {} expects {}",
                    pair[0].out_size(),
                    k + 1,
                    pair[1].in_size()
                )));
            }
        }
        if let Some(n) = &normalization {
            let d = layers[0].in_size();
            if n.mean.len() != d || n.range.len() != d {
                return Err(Error::dims("normalization", d, n.mean.len().min(n.range.len())));
            }
            if n.mean.iter().any(|m| !m.is_finite())
                || n.range.iter().any(|r| !r.is_finite() || *r <= 0.0)
            {
                return Err(Error::ShapeMismatch(
                    "normalization ranges must be positive and finite".into(),
                ));
            }
        }
        Ok(Network {
            layers,
            normalization,
        })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn normalization(&self) -> Option<&Normalization> {
        self.normalization.as_ref()
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_size()
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].out_size()
    }

    /// Sizes of the ReLU layers.
    pub fn hidden_sizes(&self) -> Vec<usize> {
        self.layers[..self.layers.len() - 1]
            .iter()
            .map(Layer::out_size)
            .collect()
    }

    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.biases.len())
            .sum()
    }

    /// A copy that treats its inputs as already normalized.
    pub fn without_normalization(&self) -> Network {
        Network {
            layers: self.layers.clone(),
            normalization: None,
        }
    }

    /// Concrete forward pass (normalization first, when present).
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::dims("network input", self.input_dim(), x.len()));
        }
        let mut h: Vec<f64> = match &self.normalization {
            Some(n) => x
                .iter()
                .zip(n.mean.iter().zip(&n.range))
                .map(|(v, (m, r))| (v - m) / r)
                .collect(),
            None => x.to_vec(),
        };
        for layer in &self.layers {
            let mut next = Vec::with_capacity(layer.out_size());
            for (row, &b) in layer.weights.outer_iter().zip(layer.biases.iter()) {
                let v = row.iter().zip(&h).fold(b, |acc, (w, x)| acc + w * x);
                next.push(match layer.activation {
                    Activation::Relu => v.max(0.0),
                    Activation::Identity => v,
                });
            }
            h = next;
        }
        Ok(h)
    }

    /// Pre-activation values of every hidden neuron at `x`.
    pub fn hidden_preactivations(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        if x.len() != self.input_dim() {
            return Err(Error::dims("network input", self.input_dim(), x.len()));
        }
        let mut h: Vec<f64> = match &self.normalization {
            Some(n) => x
                .iter()
                .zip(n.mean.iter().zip(&n.range))
                .map(|(v, (m, r))| (v - m) / r)
                .collect(),
            None => x.to_vec(),
        };
        let mut out = Vec::new();
        for layer in &self.layers[..self.layers.len() - 1] {
            let pre: Vec<f64> = layer
                .weights
                .outer_iter()
                .zip(layer.biases.iter())
                .map(|(row, &b)| row.iter().zip(&h).fold(b, |acc, (w, x)| acc + w * x))
                .collect();
            h = pre.iter().map(|v| v.max(0.0)).collect();
            out.push(pre);
        }
        Ok(out)
    }

    /// Map a box in raw input units onto the network's input coordinates,
    /// rounding outward.
    pub fn to_network_input(&self, x: &IntervalBox, policy: RoundingPolicy) -> Result<IntervalBox> {
        if x.len() != self.input_dim() {
            return Err(Error::dims("input box", self.input_dim(), x.len()));
        }
        match &self.normalization {
            None => Ok(x.clone()),
            Some(n) => x
                .dims()
                .iter()
                .zip(n.mean.iter().zip(&n.range))
                .map(|(d, (&m, &r))| {
                    let lo = policy.div_down(policy.sub_down(d.lo(), m), r);
                    let hi = policy.div_up(policy.sub_up(d.hi(), m), r);
                    if !lo.is_finite() || !hi.is_finite() {
                        return Err(Error::IntervalOverflow);
                    }
                    Interval::new(lo, hi)
                })
                .collect::<Result<Vec<_>>>()
                .map(IntervalBox::new),
        }
    }

    pub fn load<R: Read>(mut source: R, format: NetworkFormat) -> Result<Network> {
        let mut text = String::new();
        source.read_to_string(&mut text)?;
        match format {
            NetworkFormat::NnetLite => Network::from_nnet_lite(&text),
            NetworkFormat::Json => Network::from_json(&text),
            NetworkFormat::Nnet => Network::from_nnet(&text),
        }
    }

    pub fn load_path(path: impl AsRef<std::path::Path>) -> Result<Network> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Network::load(file, NetworkFormat::from_extension(path))
    }

    pub fn from_nnet_lite(text: &str) -> Result<Network> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .peekable();

        let (n, header) = lines.next().ok_or_else(|| Error::parse(1, "empty network"))?;
        let header: Vec<usize> = parse_row(n, header)?;
        let [num_layers, d, m, max_size] = header[..] else {
            return Err(Error::parse(n, "header must be `numLayers d m maxLayerSize`"));
        };
        if num_layers == 0 {
            return Err(Error::parse(n, "network needs at least one layer"));
        }

        let (n, sizes_line) = lines
            .next()
            .ok_or_else(|| Error::parse(n + 1, "missing layer sizes"))?;
        let sizes: Vec<usize> = parse_row(n, sizes_line)?;
        if sizes.len() != num_layers + 1 {
            return Err(Error::ShapeMismatch(format!(
                "line {n}: expected {} layer sizes, found {}",
                num_layers + 1,
                sizes.len()
            )));
        }
        if sizes[0] != d || sizes[num_layers] != m {
            return Err(Error::ShapeMismatch(format!(
                "line {n}: layer sizes disagree with d={d}, m={m}"
            )));
        }
        if sizes.iter().any(|&s| s == 0 || s > max_size) {
            return Err(Error::ShapeMismatch(format!(
                "line {n}: layer sizes must be in 1..={max_size}"
            )));
        }

        let mut normalization = None;
        if let Some((n, l)) = lines.peek().copied() {
            if let Some(rest) = l.strip_prefix("norm:") {
                lines.next();
                let vals: Vec<f64> = parse_row(n, rest)?;
                if vals.len() != 2 * d {
                    return Err(Error::parse(n, format!("expected {d} mean,range pairs")));
                }
                normalization = Some(Normalization {
                    mean: vals.iter().step_by(2).copied().collect(),
                    range: vals.iter().skip(1).step_by(2).copied().collect(),
                });
            }
        }

        let mut layers = Vec::with_capacity(num_layers);
        let mut last_line = n;
        for k in 0..num_layers {
            let (rows, cols) = (sizes[k + 1], sizes[k]);
            let mut w = Vec::with_capacity(rows * cols);
            for _ in 0..rows {
                let (n, l) = lines
                    .next()
                    .ok_or_else(|| Error::parse(last_line + 1, "unexpected end of weights"))?;
                last_line = n;
                let row: Vec<f64> = parse_row(n, l)?;
                if row.len() != cols {
                    return Err(Error::ShapeMismatch(format!(
                        "line {n}: layer {k} weight row has {} entries, expected {cols}",
                        row.len()
                    )));
                }
                w.extend(row);
            }
            let (n, l) = lines
                .next()
                .ok_or_else(|| Error::parse(last_line + 1, "unexpected end of biases"))?;
            last_line = n;
            let b: Vec<f64> = parse_row(n, l)?;
            if b.len() != rows {
                return Err(Error::ShapeMismatch(format!(
                    "line {n}: layer {k} has {} biases, expected {rows}",
                    b.len()
                )));
            }
            let act = if k + 1 == num_layers {
                Activation::Identity
            } else {
                Activation::Relu
            };
            let w = Array2::from_shape_vec((rows, cols), w).expect("row lengths checked");
            layers.push(Layer::new(w, Array1::from(b), act)?);
        }
        if let Some((n, _)) = lines.next() {
            return Err(Error::ShapeMismatch(format!(
                "line {n}: trailing data after the last layer"
            )));
        }
        Network::new(layers, normalization)
    }

    pub fn to_nnet_lite(&self) -> String {
        let mut sizes = vec![self.input_dim()];
        sizes.extend(self.layers.iter().map(Layer::out_size));
        let max = sizes.iter().copied().max().unwrap_or(0);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} {} {} {}",
            self.layers.len(),
            self.input_dim(),
            self.output_dim(),
            max
        );
        let _ = writeln!(s, "{}", join(sizes.iter()));
        if let Some(n) = &self.normalization {
            let pairs: Vec<String> = n
                .mean
                .iter()
                .zip(&n.range)
                .map(|(m, r)| format!("{m},{r}"))
                .collect();
            let _ = writeln!(s, "norm: {}", pairs.join(" "));
        }
        for layer in &self.layers {
            for row in layer.weights.outer_iter() {
                let _ = writeln!(s, "{}", join(row.iter()));
            }
            let _ = writeln!(s, "{}", join(layer.biases.iter()));
        }
        s
    }

    pub fn from_json(text: &str) -> Result<Network> {
        let doc: NetworkDoc = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.line(), e.to_string()))?;
        let mut layers = Vec::with_capacity(doc.layers.len());
        for (k, l) in doc.layers.into_iter().enumerate() {
            let rows = l.weights.len();
            let cols = l.weights.first().map_or(0, Vec::len);
            if l.weights.iter().any(|r| r.len() != cols) {
                return Err(Error::ShapeMismatch(format!("layer {k}: ragged weight matrix")));
            }
            let w = Array2::from_shape_vec((rows, cols), l.weights.concat())
                .map_err(|e| Error::ShapeMismatch(e.to_string()))?;
            let act = l.activation.parse()?;
            layers.push(Layer::new(w, Array1::from(l.biases), act)?);
        }
        let net = Network::new(layers, doc.normalization)?;
        if let Some(d) = doc.input_dim {
            if d != net.input_dim() {
                return Err(Error::dims("declared input_dim", d, net.input_dim()));
            }
        }
        if let Some(m) = doc.output_dim {
            if m != net.output_dim() {
                return Err(Error::dims("declared output_dim", m, net.output_dim()));
            }
        }
        Ok(net)
    }

    pub fn to_json(&self) -> String {
        let doc = NetworkDoc {
            input_dim: Some(self.input_dim()),
            output_dim: Some(self.output_dim()),
            normalization: self.normalization.clone(),
            layers: self
                .layers
                .iter()
                .map(|l| LayerDoc {
                    weights: l.weights.outer_iter().map(|r| r.to_vec()).collect(),
                    biases: l.biases.to_vec(),
                    activation: match l.activation {
                        Activation::Relu => "relu".into(),
                        Activation::Identity => "identity".into(),
                    },
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("network serializes")
    }

    pub fn from_nnet(text: &str) -> Result<Network> {
        let mut tokens = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim_start().starts_with("//"))
            .flat_map(|(i, l)| {
                l.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(move |t| (i + 1, t))
            });
        let mut next = |what: &str| -> Result<f64> {
            let (n, t) = tokens
                .next()
                .ok_or_else(|| Error::parse(0, format!("unexpected end of file reading {what}")))?;
            t.parse::<f64>()
                .map_err(|_| Error::parse(n, format!("bad number `{t}` in {what}")))
        };
        let count = |v: f64, n: &str| -> Result<usize> {
            if v < 0.0 || v.fract() != 0.0 {
                return Err(Error::parse(0, format!("{n} must be a non-negative integer")));
            }
            Ok(v as usize)
        };
        let num_layers = count(next("header")?, "numLayers")?;
        let d = count(next("header")?, "inputSize")?;
        let m = count(next("header")?, "outputSize")?;
        let _max = next("header")?;
        let mut sizes = Vec::with_capacity(num_layers + 1);
        for _ in 0..=num_layers {
            sizes.push(count(next("layer sizes")?, "layer size")?);
        }
        if num_layers == 0 || sizes[0] != d || sizes[num_layers] != m {
            return Err(Error::ShapeMismatch("layer sizes disagree with header".into()));
        }
        let _symmetric = next("flag")?;
        for _ in 0..2 * d {
            next("input bounds")?;
        }
        let mut mean = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            mean.push(next("means")?);
        }
        let mut range = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            range.push(next("ranges")?);
        }
        let mut layers = Vec::with_capacity(num_layers);
        for k in 0..num_layers {
            let (rows, cols) = (sizes[k + 1], sizes[k]);
            let mut w = Vec::with_capacity(rows * cols);
            for _ in 0..rows * cols {
                w.push(next("weights")?);
            }
            let mut b = Vec::with_capacity(rows);
            for _ in 0..rows {
                b.push(next("biases")?);
            }
            let mut w = Array2::from_shape_vec((rows, cols), w).expect("sized");
            let mut b = Array1::from(b);
            let act = if k + 1 == num_layers {
                let (om, or) = (mean[d], range[d]);
                w.mapv_inplace(|v| v * or);
                b.mapv_inplace(|v| v * or + om);
                Activation::Identity
            } else {
                Activation::Relu
            };
            layers.push(Layer::new(w, b, act)?);
        }
        mean.truncate(d);
        range.truncate(d);
        Network::new(layers, Some(Normalization { mean, range }))
    }
}

#[derive(Serialize, Deserialize)]
struct NetworkDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    input_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normalization: Option<Normalization>,
    layers: Vec<LayerDoc>,
}

#[derive(Serialize, Deserialize)]
struct LayerDoc {
    weights: Vec<Vec<f64>>,
    biases: Vec<f64>,
    activation: String,
}

fn parse_row<T: FromStr>(line: usize, text: &str) -> Result<Vec<T>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| Error::parse(line, format!("bad number `{t}`")))
        })
        .collect()
}

fn join<'a>(it: impl Iterator<Item = &'a (impl std::fmt::Display + 'a)>) -> String {
    it.map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}
