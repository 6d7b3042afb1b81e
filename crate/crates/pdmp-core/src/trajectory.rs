//! Trajectories, the embedded post-jump chain, and reconstruction.
//!
//! A trajectory stores one segment of deterministic motion per inter-event
//! interval plus a record of every jump. The post-jump-location and
//! inter-jump-time chain `(Z_n, S_n)` extracted by [`canonical_chain`]
//! carries all the randomness of the process; [`reconstruct_trajectory`]
//! rebuilds any intermediate state from it by flowing from the latest jump.

use std::io;

use serde::{Deserialize, Serialize};

use crate::error::PdmpError;
use crate::model::PdmpModel;
use crate::state::HybridState;

/// Slack applied when a queried time falls just outside the simulated
/// range, absorbing the rounding error of summed sojourn durations.
pub const QUERY_TIME_SLACK: f64 = 1e-9;

/// Cause of a jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JumpKind {
    /// The flow reached the boundary of the mode's region.
    Boundary,
    /// The state-dependent intensity fired.
    Random,
    /// An intervention teleported the process to a restart state.
    Impulse,
}

/// One interval of deterministic motion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    /// Absolute start time.
    pub start_time: f64,
    /// State at the start of the interval.
    pub start_state: HybridState,
    /// Length of the interval.
    pub duration: f64,
}

impl Segment {
    /// Absolute end time of the interval.
    pub fn end_time(&self) -> f64 {
        self.start_time + self.duration
    }
}

/// One jump: when it happened, the states on both sides, and why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpRecord {
    /// Absolute jump time `T_n`.
    pub time: f64,
    /// State just before the jump, at the jump location.
    pub pre: HybridState,
    /// Post-jump state `Z_n`.
    pub post: HybridState,
    /// Cause of the jump.
    pub kind: JumpKind,
}

/// A simulated path: deterministic segments interleaved with jumps.
///
/// Jump `n` closes segment `n`; the post-jump state opens segment `n + 1`
/// when the simulation continues past the jump. A trajectory that ends
/// exactly at a jump has as many segments as jumps; one that ends by
/// reaching a time horizon has one trailing segment more.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// State at time zero.
    pub initial: HybridState,
    /// Deterministic-motion intervals in time order.
    pub segments: Vec<Segment>,
    /// Jumps in time order.
    pub jumps: Vec<JumpRecord>,
}

impl Trajectory {
    /// Last simulated time.
    pub fn end_time(&self) -> f64 {
        let seg_end = self.segments.last().map_or(0.0, Segment::end_time);
        let jump_end = self.jumps.last().map_or(0.0, |j| j.time);
        seg_end.max(jump_end)
    }

    /// State at the last simulated time (right-continuous at jumps).
    pub fn end_state(&self, model: &PdmpModel) -> Result<HybridState, PdmpError> {
        self.state_at(model, self.end_time())
    }

    /// State at time `t`, right-continuous at jumps: exactly at a jump time
    /// the post-jump state is returned. Queries within [`QUERY_TIME_SLACK`]
    /// of the simulated range clamp onto it, since sojourn durations
    /// accumulate rounding error over long trajectories.
    ///
    /// # Errors
    /// [`PdmpError::OutOfRange`] when `t` is negative or beyond the last
    /// simulated time.
    pub fn state_at(&self, model: &PdmpModel, t: f64) -> Result<HybridState, PdmpError> {
        let end = self.end_time();
        let t = if t > end && t - end <= QUERY_TIME_SLACK {
            end
        } else if t < 0.0 && t >= -QUERY_TIME_SLACK {
            0.0
        } else {
            t
        };
        if !(0.0..=end).contains(&t) {
            return Err(PdmpError::OutOfRange { t, max: end });
        }
        if let Some(last) = self.jumps.last() {
            if t >= last.time && last.time >= self.segments.last().map_or(0.0, Segment::end_time) {
                return Ok(last.post.clone());
            }
        }
        if self.segments.is_empty() {
            return Ok(self.initial.clone());
        }
        let idx = match self
            .segments
            .binary_search_by(|seg| seg.start_time.partial_cmp(&t).expect("non-finite segment time"))
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        };
        let seg = &self.segments[idx];
        let offset = (t - seg.start_time).min(seg.duration).max(0.0);
        model.flow_at(&seg.start_state, offset)
    }

    /// Checks the structural invariants: segments contiguous, jump times
    /// strictly increasing, each segment's end state matching the flow from
    /// its start state within `tol`, and each jump's pre state matching the
    /// closing segment's end state.
    pub fn validate(&self, model: &PdmpModel, tol: f64) -> Result<(), PdmpError> {
        let mut clock = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            if (seg.start_time - clock).abs() > tol {
                return Err(PdmpError::InvalidState(format!(
                    "segment {i} starts at {} but the previous interval ends at {clock}",
                    seg.start_time
                )));
            }
            clock = seg.end_time();
        }
        let mut prev_jump = f64::NEG_INFINITY;
        for (n, jump) in self.jumps.iter().enumerate() {
            if jump.time <= prev_jump {
                return Err(PdmpError::InvalidState(format!(
                    "jump {n} at {} does not follow jump at {prev_jump}",
                    jump.time
                )));
            }
            prev_jump = jump.time;
            let seg = self.segments.get(n).ok_or_else(|| {
                PdmpError::InvalidState(format!("jump {n} has no matching segment"))
            })?;
            let end = model.flow_at(&seg.start_state, seg.duration)?;
            if state_distance(&end, &jump.pre) > tol {
                return Err(PdmpError::InvalidState(format!(
                    "jump {n} pre-state disagrees with its segment's flow endpoint"
                )));
            }
        }
        for (i, seg) in self.segments.iter().enumerate() {
            let expected_start = if i == 0 {
                &self.initial
            } else if let Some(jump) = self.jumps.get(i - 1) {
                &jump.post
            } else {
                continue;
            };
            if state_distance(&seg.start_state, expected_start) > tol {
                return Err(PdmpError::InvalidState(format!(
                    "segment {i} does not start at the preceding post-jump state"
                )));
            }
        }
        Ok(())
    }

    /// Exports the trajectory as CSV with one row per event: the initial
    /// state, each post-jump state, and the final state. Columns are
    /// `t, mode, euclid_0.., elapsed, event`.
    pub fn to_csv<W: io::Write>(&self, model: &PdmpModel, out: W) -> Result<(), PdmpError> {
        let dim = self.initial.euclid.len();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string(), "mode".to_string()];
        header.extend((0..dim).map(|i| format!("euclid_{i}")));
        header.push("elapsed".to_string());
        header.push("event".to_string());
        w.write_record(&header).map_err(|e| PdmpError::Export(e.to_string()))?;

        let mut write_row = |t: f64, x: &HybridState, event: &str| -> Result<(), PdmpError> {
            let mut row = vec![format!("{t}"), format!("{}", x.mode)];
            row.extend(x.euclid.iter().map(|c| format!("{c}")));
            row.push(x.elapsed.map_or_else(String::new, |u| format!("{u}")));
            row.push(event.to_string());
            w.write_record(&row).map_err(|e| PdmpError::Export(e.to_string()))
        };

        write_row(0.0, &self.initial, "start")?;
        for jump in &self.jumps {
            let event = match jump.kind {
                JumpKind::Boundary => "boundary",
                JumpKind::Random => "random",
                JumpKind::Impulse => "impulse",
            };
            write_row(jump.time, &jump.post, event)?;
        }
        let end_time = self.end_time();
        if self.jumps.last().map_or(true, |j| j.time < end_time) {
            let end = self.end_state(model)?;
            write_row(end_time, &end, "end")?;
        }
        Ok(())
    }
}

fn state_distance(a: &HybridState, b: &HybridState) -> f64 {
    if a.mode != b.mode || a.euclid.len() != b.euclid.len() {
        return f64::INFINITY;
    }
    let euclid = a
        .euclid
        .iter()
        .zip(&b.euclid)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt();
    let clock = match (a.elapsed, b.elapsed) {
        (Some(u), Some(v)) => (u - v).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    };
    euclid.max(clock)
}

/// Incremental trajectory assembly shared by the simulators. Keeps one open
/// segment; advances along the flow extend it, jumps close it.
pub(crate) struct TrajectoryBuilder {
    initial: HybridState,
    segments: Vec<Segment>,
    jumps: Vec<JumpRecord>,
    open_start_time: f64,
    open_start_state: HybridState,
    open_duration: f64,
    current: HybridState,
}

impl TrajectoryBuilder {
    pub fn new(x0: HybridState) -> Self {
        Self {
            initial: x0.clone(),
            segments: Vec::new(),
            jumps: Vec::new(),
            open_start_time: 0.0,
            open_start_state: x0.clone(),
            open_duration: 0.0,
            current: x0,
        }
    }

    pub fn now(&self) -> f64 {
        self.open_start_time + self.open_duration
    }

    pub fn current(&self) -> &HybridState {
        &self.current
    }

    pub fn jump_count(&self) -> usize {
        self.jumps.len()
    }

    /// Extends the open segment by `dt`, landing on `state`.
    pub fn advance(&mut self, dt: f64, state: HybridState) {
        self.open_duration += dt;
        self.current = state;
    }

    /// Closes the open segment with a jump at the current time and opens a
    /// new one at the post-jump state.
    pub fn jump(&mut self, kind: JumpKind, post: HybridState) {
        let time = self.now();
        self.segments.push(Segment {
            start_time: self.open_start_time,
            start_state: self.open_start_state.clone(),
            duration: self.open_duration,
        });
        self.jumps.push(JumpRecord { time, pre: self.current.clone(), post: post.clone(), kind });
        self.open_start_time = time;
        self.open_start_state = post.clone();
        self.open_duration = 0.0;
        self.current = post;
    }

    /// Copies the content so far into a trajectory, including the open
    /// segment when the process has moved since the last jump.
    pub fn snapshot(&self) -> Trajectory {
        let mut segments = self.segments.clone();
        if self.open_duration > 0.0 {
            segments.push(Segment {
                start_time: self.open_start_time,
                start_state: self.open_start_state.clone(),
                duration: self.open_duration,
            });
        }
        Trajectory { initial: self.initial.clone(), segments, jumps: self.jumps.clone() }
    }

    /// Finishes the trajectory, keeping the open segment only if the
    /// process moved since the last jump.
    pub fn finish(mut self) -> Trajectory {
        if self.open_duration > 0.0 {
            self.segments.push(Segment {
                start_time: self.open_start_time,
                start_state: self.open_start_state,
                duration: self.open_duration,
            });
        }
        Trajectory { initial: self.initial, segments: self.segments, jumps: self.jumps }
    }
}

/// Extracts the post-jump-location and inter-jump-time chain `(Z_n, S_n)`:
/// the initial state with `S_0 = 0`, then each post-jump state with the
/// time since the previous jump.
pub fn canonical_chain(traj: &Trajectory) -> Vec<(HybridState, f64)> {
    let mut chain = vec![(traj.initial.clone(), 0.0)];
    let mut prev = 0.0;
    for jump in &traj.jumps {
        chain.push((jump.post.clone(), jump.time - prev));
        prev = jump.time;
    }
    chain
}

/// Rebuilds the state at time `t` from a post-jump chain by flowing from
/// the latest jump at or before `t`: `X_t = Phi(Z_n, t - T_n)` with
/// `T_n = S_0 + .. + S_n`.
///
/// Past the last jump the flow is followed as far as it remains defined,
/// which is valid as long as no further jump occurred there.
///
/// # Errors
/// [`PdmpError::OutOfRange`] for negative `t` or an empty chain;
/// [`PdmpError::BoundaryOverrun`] when `t` runs past the reach of the last
/// recorded state's flow.
pub fn reconstruct_trajectory(
    model: &PdmpModel,
    chain: &[(HybridState, f64)],
    t: f64,
) -> Result<HybridState, PdmpError> {
    if chain.is_empty() || t < 0.0 {
        return Err(PdmpError::OutOfRange { t, max: 0.0 });
    }
    let mut jump_time = 0.0;
    let mut bracket: (&HybridState, f64) = (&chain[0].0, 0.0);
    for (z, s) in chain {
        jump_time += s;
        if jump_time > t {
            break;
        }
        bracket = (z, jump_time);
    }
    model.flow_at(bracket.0, t - bracket.1)
}
