//! Classical multilayer-perceptron actors and critics for the comparison
//! frameworks.
//!
//! Parameter vectors are flat: for each layer its weights (row-major,
//! `out × in`) then its biases, followed by the optional linear skip
//! weights (`n_out × skip_inputs`) and the optional output scale.
//!
//! Budgets:
//!
//! | model            | layout                        | params |
//! |------------------|-------------------------------|--------|
//! | compact actor    | 4 → 5 tanh → 4, × scale       | 50     |
//! | compact critic   | 16 → 2 tanh → 1, + skip(13)   | 50     |
//! | wide actor       | 4 → 200 → 200 → 4             | 42 004 |
//! | wide critic      | 16 → 200 → 200 → 1            | 43 801 |

use rand::Rng;

use crate::model::{
    check_len, log_softmax_weights, softmax, Actor, Critic, ModelError, ModelText, Result,
};

pub const COMPACT_BUDGET: usize = 50;
pub const WIDE_MIN_PARAMS: usize = 40_000;
pub const WIDE_HIDDEN: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlpLayout {
    /// Input, hidden..., output widths.
    pub sizes: Vec<usize>,
    /// Direct linear connection from the first `skip_inputs` inputs to every output.
    pub skip_inputs: usize,
    /// Trainable scalar multiplying the outputs.
    pub output_scale: bool,
}

impl MlpLayout {
    pub fn compact_actor(obs_dim: usize, n_actions: usize) -> Self {
        MlpLayout {
            sizes: vec![obs_dim, 5, n_actions],
            skip_inputs: 0,
            output_scale: true,
        }
    }

    pub fn compact_critic(state_dim: usize) -> Self {
        MlpLayout {
            sizes: vec![state_dim, 2, 1],
            skip_inputs: 13.min(state_dim),
            output_scale: false,
        }
    }

    pub fn wide_actor(obs_dim: usize, n_actions: usize) -> Self {
        MlpLayout {
            sizes: vec![obs_dim, WIDE_HIDDEN, WIDE_HIDDEN, n_actions],
            skip_inputs: 0,
            output_scale: false,
        }
    }

    pub fn wide_critic(state_dim: usize) -> Self {
        MlpLayout {
            sizes: vec![state_dim, WIDE_HIDDEN, WIDE_HIDDEN, 1],
            skip_inputs: 0,
            output_scale: false,
        }
    }

    pub fn n_inputs(&self) -> usize {
        self.sizes[0]
    }

    pub fn n_outputs(&self) -> usize {
        *self.sizes.last().expect("layout has at least two layers")
    }

    pub fn n_params(&self) -> usize {
        let dense: usize = self.sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        dense + self.skip_inputs * self.n_outputs() + usize::from(self.output_scale)
    }

    fn validate(&self) -> Result<()> {
        if self.sizes.len() < 2 || self.sizes.contains(&0) {
            return Err(ModelError::Format(format!(
                "invalid layer sizes {:?}",
                self.sizes
            )));
        }
        if self.skip_inputs > self.n_inputs() {
            return Err(ModelError::Format(format!(
                "skip_inputs {} exceeds input width {}",
                self.skip_inputs,
                self.n_inputs()
            )));
        }
        Ok(())
    }

    fn header(&self) -> Vec<(&'static str, String)> {
        let sizes: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        vec![
            ("sizes", sizes.join(",")),
            ("skip_inputs", self.skip_inputs.to_string()),
            ("output_scale", self.output_scale.to_string()),
        ]
    }

    fn from_text(text: &ModelText) -> Result<Self> {
        let sizes = text
            .get("sizes")?
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| ModelError::Format(format!("bad layer size `{s}`")))
            })
            .collect::<Result<Vec<usize>>>()?;
        let layout = MlpLayout {
            sizes,
            skip_inputs: text.parse_value("skip_inputs")?,
            output_scale: text.parse_value("output_scale")?,
        };
        layout.validate()?;
        Ok(layout)
    }
}

/// Dense tanh network with a linear head.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layout: MlpLayout,
    params: Vec<f64>,
}

struct Trace {
    /// Layer inputs: `acts[0]` is the network input, `acts[l]` the output of hidden layer `l`.
    acts: Vec<Vec<f64>>,
    /// Head output before the output scale.
    raw: Vec<f64>,
}

impl Mlp {
    pub fn new(layout: MlpLayout, params: Vec<f64>) -> Result<Self> {
        layout.validate()?;
        check_len("mlp parameters", layout.n_params(), params.len())?;
        Ok(Mlp { layout, params })
    }

    /// Glorot-uniform weights, zero biases, unit output scale.
    pub fn random<R: Rng + ?Sized>(layout: MlpLayout, rng: &mut R) -> Result<Self> {
        layout.validate()?;
        let mut params = Vec::with_capacity(layout.n_params());
        for w in layout.sizes.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            params.extend((0..fan_in * fan_out).map(|_| rng.gen_range(-limit..=limit)));
            params.extend(std::iter::repeat_n(0.0, fan_out));
        }
        if layout.skip_inputs > 0 {
            let limit = (6.0 / (layout.skip_inputs + layout.n_outputs()) as f64).sqrt();
            params.extend(
                (0..layout.skip_inputs * layout.n_outputs()).map(|_| rng.gen_range(-limit..=limit)),
            );
        }
        if layout.output_scale {
            params.push(1.0);
        }
        Self::new(layout, params)
    }

    pub fn layout(&self) -> &MlpLayout {
        &self.layout
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn skip_offset(&self) -> usize {
        self.layout
            .sizes
            .windows(2)
            .map(|w| w[0] * w[1] + w[1])
            .sum()
    }

    fn scale(&self) -> f64 {
        if self.layout.output_scale {
            self.params[self.params.len() - 1]
        } else {
            1.0
        }
    }

    fn trace(&self, input: &[f64]) -> Trace {
        let n_layers = self.layout.sizes.len() - 1;
        let mut acts = Vec::with_capacity(n_layers);
        acts.push(input.to_vec());
        let mut offset = 0;
        let mut raw = Vec::new();
        for (l, w) in self.layout.sizes.windows(2).enumerate() {
            let (n_in, n_out) = (w[0], w[1]);
            let weights = &self.params[offset..offset + n_in * n_out];
            let biases = &self.params[offset + n_in * n_out..offset + n_in * n_out + n_out];
            offset += n_in * n_out + n_out;
            let x = &acts[l];
            let z: Vec<f64> = weights
                .chunks_exact(n_in)
                .zip(biases)
                .map(|(row, b)| b + row.iter().zip(x).map(|(w, x)| w * x).sum::<f64>())
                .collect();
            if l + 1 < n_layers {
                acts.push(z.into_iter().map(f64::tanh).collect());
            } else {
                raw = z;
            }
        }
        let skip = self.layout.skip_inputs;
        if skip > 0 {
            let s = &self.params[offset..offset + skip * raw.len()];
            for (r, row) in raw.iter_mut().zip(s.chunks_exact(skip)) {
                *r += row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>();
            }
        }
        Trace { acts, raw }
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        check_len("mlp input", self.layout.n_inputs(), input.len())?;
        let scale = self.scale();
        Ok(self.trace(input).raw.into_iter().map(|r| scale * r).collect())
    }

    /// Reverse-mode gradient of `Σ_j output_grad_j · out_j` with respect to
    /// every parameter.
    pub fn backward(&self, input: &[f64], output_grad: &[f64]) -> Result<Vec<f64>> {
        check_len("mlp input", self.layout.n_inputs(), input.len())?;
        check_len("mlp output gradient", self.layout.n_outputs(), output_grad.len())?;
        let mut grad = vec![0.0; self.params.len()];
        if output_grad.iter().all(|g| *g == 0.0) {
            return Ok(grad);
        }
        let trace = self.trace(input);
        let scale = self.scale();
        if self.layout.output_scale {
            let n = grad.len();
            grad[n - 1] = output_grad.iter().zip(&trace.raw).map(|(g, r)| g * r).sum();
        }
        let mut delta: Vec<f64> = output_grad.iter().map(|g| g * scale).collect();

        let skip = self.layout.skip_inputs;
        let skip_offset = self.skip_offset();
        if skip > 0 {
            for (j, d) in delta.iter().enumerate() {
                for i in 0..skip {
                    grad[skip_offset + j * skip + i] = d * input[i];
                }
            }
        }

        let mut offset = skip_offset;
        let n_layers = self.layout.sizes.len() - 1;
        for l in (0..n_layers).rev() {
            let (n_in, n_out) = (self.layout.sizes[l], self.layout.sizes[l + 1]);
            offset -= n_in * n_out + n_out;
            let x = &trace.acts[l];
            for (j, d) in delta.iter().enumerate() {
                let row = offset + j * n_in;
                for i in 0..n_in {
                    grad[row + i] = d * x[i];
                }
                grad[offset + n_in * n_out + j] = *d;
            }
            if l > 0 {
                let weights = &self.params[offset..offset + n_in * n_out];
                let mut back = vec![0.0; n_in];
                for (row, d) in weights.chunks_exact(n_in).zip(&delta) {
                    for (b, w) in back.iter_mut().zip(row) {
                        *b += w * d;
                    }
                }
                // tanh' = 1 − tanh²
                delta = back
                    .into_iter()
                    .zip(x)
                    .map(|(b, h)| b * (1.0 - h * h))
                    .collect();
            }
        }
        Ok(grad)
    }
}

fn expect_compact(layout: &str, n_params: usize) -> Result<()> {
    if n_params == COMPACT_BUDGET {
        Ok(())
    } else {
        Err(ModelError::ParamCount {
            layout: layout.to_string(),
            expected: COMPACT_BUDGET,
            got: n_params,
        })
    }
}

fn expect_wide(layout: &str, n_params: usize) -> Result<()> {
    if n_params >= WIDE_MIN_PARAMS {
        Ok(())
    } else {
        Err(ModelError::ParamCount {
            layout: layout.to_string(),
            expected: WIDE_MIN_PARAMS,
            got: n_params,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpActor {
    net: Mlp,
}

impl MlpActor {
    pub const LAYOUT: &'static str = "mlp-actor";

    pub fn new(net: Mlp) -> Self {
        MlpActor { net }
    }

    /// Exactly 50 parameters.
    pub fn compact<R: Rng + ?Sized>(obs_dim: usize, n_actions: usize, rng: &mut R) -> Result<Self> {
        let layout = MlpLayout::compact_actor(obs_dim, n_actions);
        expect_compact("compact mlp actor", layout.n_params())?;
        Ok(Self::new(Mlp::random(layout, rng)?))
    }

    /// At least 40 000 parameters.
    pub fn wide<R: Rng + ?Sized>(obs_dim: usize, n_actions: usize, rng: &mut R) -> Result<Self> {
        let layout = MlpLayout::wide_actor(obs_dim, n_actions);
        expect_wide("wide mlp actor", layout.n_params())?;
        Ok(Self::new(Mlp::random(layout, rng)?))
    }

    pub fn from_text(text: &ModelText) -> Result<Self> {
        let layout = MlpLayout::from_text(text)?;
        Ok(Self::new(Mlp::new(layout, text.params.clone())?))
    }

    pub fn net(&self) -> &Mlp {
        &self.net
    }
}

impl Actor for MlpActor {
    fn layout(&self) -> &'static str {
        Self::LAYOUT
    }

    fn obs_dim(&self) -> usize {
        self.net.layout.n_inputs()
    }

    fn n_actions(&self) -> usize {
        self.net.layout.n_outputs()
    }

    fn params(&self) -> &[f64] {
        self.net.params()
    }

    fn params_mut(&mut self) -> &mut [f64] {
        self.net.params_mut()
    }

    fn policy(&self, obs: &[f64]) -> Result<Vec<f64>> {
        Ok(softmax(&self.net.forward(obs)?))
    }

    fn log_prob_and_grad(
        &self,
        obs: &[f64],
        action: usize,
        weight: f64,
    ) -> Result<(f64, Vec<f64>)> {
        let probs = self.policy(obs)?;
        if action >= probs.len() {
            return Err(ModelError::ActionOutOfRange {
                action,
                n_actions: probs.len(),
            });
        }
        let grad = self
            .net
            .backward(obs, &log_softmax_weights(&probs, action, weight))?;
        Ok((probs[action].ln(), grad))
    }

    fn header(&self) -> Vec<(&'static str, String)> {
        self.net.layout.header()
    }

    fn box_clone(&self) -> Box<dyn Actor> {
        Box::new(self.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpCritic {
    net: Mlp,
}

impl MlpCritic {
    pub const LAYOUT: &'static str = "mlp-critic";

    pub fn new(net: Mlp) -> Result<Self> {
        check_len("critic outputs", 1, net.layout.n_outputs())?;
        Ok(MlpCritic { net })
    }

    /// Exactly 50 parameters.
    pub fn compact<R: Rng + ?Sized>(state_dim: usize, rng: &mut R) -> Result<Self> {
        let layout = MlpLayout::compact_critic(state_dim);
        expect_compact("compact mlp critic", layout.n_params())?;
        Self::new(Mlp::random(layout, rng)?)
    }

    /// At least 40 000 parameters.
    pub fn wide<R: Rng + ?Sized>(state_dim: usize, rng: &mut R) -> Result<Self> {
        let layout = MlpLayout::wide_critic(state_dim);
        expect_wide("wide mlp critic", layout.n_params())?;
        Self::new(Mlp::random(layout, rng)?)
    }

    pub fn from_text(text: &ModelText) -> Result<Self> {
        let layout = MlpLayout::from_text(text)?;
        Self::new(Mlp::new(layout, text.params.clone())?)
    }

    pub fn net(&self) -> &Mlp {
        &self.net
    }
}

impl Critic for MlpCritic {
    fn layout(&self) -> &'static str {
        Self::LAYOUT
    }

    fn state_dim(&self) -> usize {
        self.net.layout.n_inputs()
    }

    fn params(&self) -> &[f64] {
        self.net.params()
    }

    fn params_mut(&mut self) -> &mut [f64] {
        self.net.params_mut()
    }

    fn value(&self, state: &[f64]) -> Result<f64> {
        Ok(self.net.forward(state)?[0])
    }

    fn value_grad(&self, state: &[f64], weight: f64) -> Result<Vec<f64>> {
        self.net.backward(state, &[weight])
    }

    fn header(&self) -> Vec<(&'static str, String)> {
        self.net.layout.header()
    }

    fn box_clone(&self) -> Box<dyn Critic> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn budgets() {
        assert_eq!(MlpLayout::compact_actor(4, 4).n_params(), 50);
        assert_eq!(MlpLayout::compact_critic(16).n_params(), 50);
        assert_eq!(MlpLayout::wide_actor(4, 4).n_params(), 42_004);
        assert_eq!(MlpLayout::wide_critic(16).n_params(), 43_801);
    }

    #[test]
    fn budget_enforced_at_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(MlpActor::compact(4, 4, &mut rng).is_ok());
        assert!(matches!(
            MlpActor::compact(5, 4, &mut rng),
            Err(ModelError::ParamCount { .. })
        ));
        assert!(matches!(
            MlpCritic::compact(8, &mut rng),
            Err(ModelError::ParamCount { .. })
        ));
    }

    #[test]
    fn zero_network_outputs() {
        let actor_layout = MlpLayout::compact_actor(4, 4);
        let mut params = vec![0.0; 50];
        params[49] = 1.0;
        let actor = MlpActor::new(Mlp::new(actor_layout, params).unwrap());
        assert_eq!(actor.policy(&[0.3, 0.1, 0.9, 0.2]).unwrap(), vec![0.25; 4]);

        let layout = MlpLayout::compact_critic(16);
        let mut params = vec![0.0; 50];
        // head bias sits right after the 2 → 1 weights
        params[16 * 2 + 2 + 2] = -3.5;
        let critic = MlpCritic::new(Mlp::new(layout, params).unwrap()).unwrap();
        assert_eq!(critic.value(&[0.4; 16]).unwrap(), -3.5);
    }

    #[test]
    fn zero_output_grad_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let net = Mlp::random(MlpLayout::compact_critic(16), &mut rng).unwrap();
        assert_eq!(net.backward(&[0.2; 16], &[0.0]).unwrap(), vec![0.0; 50]);
    }

    #[test]
    fn shape_mismatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let net = Mlp::random(MlpLayout::compact_actor(4, 4), &mut rng).unwrap();
        assert!(net.forward(&[0.0; 3]).is_err());
        assert!(net.backward(&[0.0; 4], &[1.0]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let critic = MlpCritic::compact(16, &mut rng).unwrap();
        let text: ModelText = ModelText::from_critic(&critic).to_string().parse().unwrap();
        assert_eq!(MlpCritic::from_text(&text).unwrap(), critic);
    }
}
