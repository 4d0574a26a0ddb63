use std::ops::Deref;

use crate::ext::{self, INF};

/// `h(m) = min_k a(k) + b(m − k)`, saturating at the sentinel.
pub fn minplus_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut h = vec![INF; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if ext::is_forbidden(x) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let v = ext::add(x, y);
            if v < h[i + j] {
                h[i + j] = v;
            }
        }
    }
    h
}

/// Minimum value per count of (flip-masked) ones for one component.
#[derive(Debug, Clone, PartialEq)]
pub struct CardinalityProfile(pub Vec<f64>);

impl CardinalityProfile {
    /// The neutral element `[0]`.
    pub fn identity() -> Self {
        CardinalityProfile(vec![0.0])
    }

    pub fn convolve(&self, other: &CardinalityProfile) -> CardinalityProfile {
        CardinalityProfile(minplus_convolve(&self.0, &other.0))
    }

    /// Number of counted variables.
    pub fn width(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
}

impl Deref for CardinalityProfile {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}
