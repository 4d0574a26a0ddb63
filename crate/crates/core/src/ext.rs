//! Extended-real energies.
//!
//! Positive infinity is represented by the sentinel [`INF`]. Anything at or
//! above [`FORBIDDEN`] is treated as infinite, so sums involving the sentinel
//! saturate instead of drifting.

pub const INF: f64 = 1e15;

/// Threshold above which a value is reported as forbidden / infeasible.
pub const FORBIDDEN: f64 = 1e14;

/// Penalty used in place of a forbidden entry when a finite stand-in is needed.
pub const SOFT_PENALTY: f64 = 1e6;

#[inline]
pub fn is_forbidden(v: f64) -> bool {
    v >= FORBIDDEN
}

#[inline]
pub fn is_finite(v: f64) -> bool {
    v < FORBIDDEN
}

/// Saturating addition.
#[inline]
pub fn add(a: f64, b: f64) -> f64 {
    if a >= FORBIDDEN || b >= FORBIDDEN {
        INF
    } else {
        let s = a + b;
        if s >= FORBIDDEN {
            INF
        } else {
            s
        }
    }
}

/// Clamp any value above the forbidden threshold to the sentinel.
#[inline]
pub fn normalize(v: f64) -> f64 {
    if v >= FORBIDDEN {
        INF
    } else {
        v
    }
}

/// Minimum over the finite entries, `None` if every entry is forbidden.
pub fn finite_min(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    values
        .into_iter()
        .filter(|v| is_finite(*v))
        .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v))))
}

/// Maximum over the finite entries, `None` if every entry is forbidden.
pub fn finite_max(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    values
        .into_iter()
        .filter(|v| is_finite(*v))
        .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
}

/// Replace forbidden entries by `largest finite entry + SOFT_PENALTY`.
///
/// Keeps argmins and orderings among finite entries unchanged.
pub fn soften(values: &mut [f64]) {
    let cap = finite_max(values.iter().copied()).unwrap_or(0.0) + SOFT_PENALTY;
    for v in values.iter_mut() {
        if is_forbidden(*v) {
            *v = cap;
        }
    }
}

/// Minimum of a slice with saturation (returns `INF` for an empty or
/// all-forbidden slice).
pub fn min_of(values: &[f64]) -> f64 {
    finite_min(values.iter().copied()).unwrap_or(INF)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_saturates() {
        assert_eq!(add(INF, -5.0), INF);
        assert_eq!(add(3.0, INF), INF);
        assert_eq!(add(1.0, 2.0), 3.0);
        assert_eq!(add(9e13, 9e13), INF);
    }

    #[test]
    fn soften_keeps_order() {
        let mut t = [INF, 2.0, -1.0, INF];
        soften(&mut t);
        assert_eq!(t, [2.0 + SOFT_PENALTY, 2.0, -1.0, 2.0 + SOFT_PENALTY]);
        let mut all = [INF, INF];
        soften(&mut all);
        assert_eq!(all, [SOFT_PENALTY, SOFT_PENALTY]);
    }

    #[test]
    fn min_of_all_forbidden_is_inf() {
        assert_eq!(min_of(&[INF, INF]), INF);
        assert_eq!(min_of(&[INF, 4.0]), 4.0);
    }
}
