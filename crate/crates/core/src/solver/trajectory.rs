use crate::error::{Error, Result};
use crate::lp::besov::combine_blocks;
use crate::lp::DyadicPartition;
use crate::state::State;

/// Per-block L² norms of one state (slot 0 is `j = -1`). Weighted sums for
/// any regularity follow from [`combine_blocks`].
#[derive(Clone, Debug, PartialEq)]
pub struct BlockNorms {
    pub u: Vec<f64>,
    pub w: Vec<f64>,
}

impl BlockNorms {
    pub fn of(partition: &DyadicPartition, state: &State) -> Self {
        BlockNorms {
            u: partition.block_l2_norms(&state.u),
            w: partition.block_l2_norms(&state.w),
        }
    }

    /// `B^s_{2,1}` norm of the velocity.
    pub fn u_besov(&self, s: f64) -> f64 {
        combine_blocks(&self.u, s, 1.0)
    }

    pub fn w_besov(&self, s: f64) -> f64 {
        combine_blocks(&self.w, s, 1.0)
    }
}

/// Time-ordered states of one solve or one Picard iterate.
#[derive(Clone, Debug)]
pub struct Trajectory {
    states: Vec<State>,
    block_norms: Vec<BlockNorms>,
}

impl Trajectory {
    pub fn new(partition: &DyadicPartition, states: Vec<State>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InsufficientData("trajectory needs at least one state".into()));
        }
        for pair in states.windows(2) {
            if !(pair[1].t > pair[0].t) {
                return Err(Error::Contract(format!(
                    "trajectory times must increase ({} then {})",
                    pair[0].t, pair[1].t
                )));
            }
            if pair[1].grid() != pair[0].grid() {
                return Err(Error::Config("trajectory states live on different grids".into()));
            }
        }
        if states[0].grid() != partition.grid() {
            return Err(Error::Config("trajectory and partition live on different grids".into()));
        }
        let block_norms = states.iter().map(|s| BlockNorms::of(partition, s)).collect();
        Ok(Trajectory { states, block_norms })
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn block_norms(&self) -> &[BlockNorms] {
        &self.block_norms
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn first(&self) -> &State {
        &self.states[0]
    }

    pub fn last(&self) -> &State {
        self.states.last().expect("trajectory is nonempty")
    }

    pub fn horizon(&self) -> f64 {
        self.last().t
    }

    /// State at time `t`, linearly interpolated between stored neighbours and
    /// clamped to the stored range.
    pub fn sample(&self, t: f64) -> State {
        let s = &self.states;
        let hi = s.partition_point(|x| x.t < t);
        if hi == 0 {
            return s[0].clone();
        }
        if hi == s.len() {
            return s[hi - 1].clone();
        }
        let (a, b) = (&s[hi - 1], &s[hi]);
        if b.t == t {
            return b.clone();
        }
        let theta = (t - a.t) / (b.t - a.t);
        State {
            u: &a.u.scale(1.0 - theta) + &b.u.scale(theta),
            w: &a.w.scale(1.0 - theta) + &b.w.scale(theta),
            t,
        }
    }

    /// `(sup_t ‖u − u'‖, sup_t ‖w − w'‖)` over matching stored states.
    pub fn sup_distance(&self, other: &Trajectory) -> Result<(f64, f64)> {
        if self.len() != other.len() {
            return Err(Error::Config(format!(
                "trajectories have {} and {} stored states",
                self.len(),
                other.len()
            )));
        }
        let mut du: f64 = 0.0;
        let mut dw: f64 = 0.0;
        for (a, b) in self.states.iter().zip(&other.states) {
            if (a.t - b.t).abs() > 1e-12 * a.t.abs().max(1.0) {
                return Err(Error::Config("trajectories use different time grids".into()));
            }
            let (x, y) = a.distance(b);
            du = du.max(x);
            dw = dw.max(y);
        }
        Ok((du, dw))
    }

    pub fn max_divergence(&self) -> f64 {
        self.states.iter().map(State::max_divergence).fold(0.0, f64::max)
    }
}

/// Trapezoid rule over possibly non-uniform samples.
pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// Running trapezoid integral, starting at 0.
pub fn cumulative_trapezoid(times: &[f64], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    out.push(0.0);
    for (t, v) in times.windows(2).zip(values.windows(2)) {
        acc += 0.5 * (t[1] - t[0]) * (v[0] + v[1]);
        out.push(acc);
    }
    out.truncate(times.len());
    out
}
