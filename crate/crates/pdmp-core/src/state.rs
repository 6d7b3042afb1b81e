//! Hybrid states: a discrete mode plus Euclidean coordinates, optionally
//! augmented with the time elapsed since the last jump.

use std::fmt;

use serde::{Deserialize, Serialize};

/// State of a piecewise-deterministic process.
///
/// `mode` selects the active dynamics, `euclid` holds the continuous
/// coordinates, and `elapsed` carries the time since the last jump for
/// time-augmented models (`None` otherwise). The elapsed clock advances at
/// speed one along the flow and is reset to zero by the built-in jump
/// kernels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridState {
    /// Discrete mode label.
    pub mode: i32,
    /// Continuous coordinates, in model units.
    pub euclid: Vec<f64>,
    /// Time since the last jump, present iff the model is time-augmented.
    pub elapsed: Option<f64>,
}

impl HybridState {
    /// State without an elapsed-time clock.
    pub fn new(mode: i32, euclid: Vec<f64>) -> Self {
        Self { mode, euclid, elapsed: None }
    }

    /// One-dimensional state without an elapsed-time clock.
    pub fn scalar(mode: i32, value: f64) -> Self {
        Self::new(mode, vec![value])
    }

    /// One-dimensional state carrying an elapsed-time clock.
    pub fn augmented_scalar(mode: i32, value: f64, elapsed: f64) -> Self {
        Self { mode, euclid: vec![value], elapsed: Some(elapsed) }
    }

    /// First Euclidean coordinate.
    ///
    /// # Panics
    /// Panics if the state has no Euclidean coordinates.
    pub fn value(&self) -> f64 {
        self.euclid[0]
    }
}

impl fmt::Display for HybridState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, x={:?}", self.mode, self.euclid)?;
        if let Some(u) = self.elapsed {
            write!(f, ", u={u}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_constructors_round_trip() {
        let x = HybridState::scalar(-1, 2.0);
        assert_eq!(x.mode, -1);
        assert_eq!(x.value(), 2.0);
        assert!(x.elapsed.is_none());

        let y = HybridState::augmented_scalar(0, 1.0, 3.5);
        assert_eq!(y.elapsed, Some(3.5));
    }

    #[test]
    fn display_mentions_all_coordinates() {
        let x = HybridState::augmented_scalar(1, 2.0, 0.5);
        let s = format!("{x}");
        assert!(s.contains("m=1"));
        assert!(s.contains("u=0.5"));
    }
}
