//! Width-budget feasibility for the three-phase constraint oracles.
//!
//! The coloring and assignment oracles defer work across three phases, and
//! each phase needs its own slice of the constraint width to keep its bad
//! events rare enough. `k1` guards the first random pass, `k2` the bounded
//! recoloring pass, and `k3` must leave enough slack for the exhaustive
//! finish to be guaranteed a solution.

/// A split of the constraint width into per-phase budgets, `k1 + k2 + k3 = k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WidthSplit {
    pub k1: u32,
    pub k2: u32,
    pub k3: u32,
}

impl WidthSplit {
    pub fn total(&self) -> u32 {
        self.k1 + self.k2 + self.k3
    }
}

impl std::fmt::Display for WidthSplit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {}", self.k1, self.k2, self.k3)
    }
}

/// Smallest feasible split for two-coloring a k-uniform hypergraph whose
/// hyperedges intersect at most `d` others, or `None` when no split exists.
///
/// Feasibility requires `16d(d-1)³(d+1) < 2^k1`, the same for `k2`, and
/// `2e(d+1) < 2^k3`. The lexicographically smallest positive triple is
/// returned.
pub fn coloring_params(k: usize, d: usize) -> Option<WidthSplit> {
    smallest_split(k, phase_threshold(d, 16), 2.0 * std::f64::consts::E * (d as f64 + 1.0))
}

/// Smallest feasible split for satisfying a k-CNF formula whose clauses
/// intersect at most `d` others, or `None`.
///
/// Clause events are one-sided, so the bounds relax to `8d(d-1)³(d+1) < 2^k1`
/// (and `k2`) and `e(d+1) < 2^k3`.
pub fn cnf_params(k: usize, d: usize) -> Option<WidthSplit> {
    smallest_split(k, phase_threshold(d, 8), std::f64::consts::E * (d as f64 + 1.0))
}

fn phase_threshold(d: usize, scale: i128) -> i128 {
    let d = d as i128;
    scale * d * (d - 1).pow(3) * (d + 1)
}

fn smallest_split(k: usize, threshold12: i128, threshold3: f64) -> Option<WidthSplit> {
    if k < 3 {
        return None;
    }
    let k = k as u32;
    for k1 in 1..=k.saturating_sub(2) {
        if !power_exceeds(k1, threshold12) {
            continue;
        }
        for k2 in 1..=(k - k1 - 1) {
            if !power_exceeds(k2, threshold12) {
                continue;
            }
            let k3 = k - k1 - k2;
            if threshold3 < exp2(k3) {
                return Some(WidthSplit { k1, k2, k3 });
            }
        }
    }
    None
}

// threshold < 2^bits, in exact integer arithmetic
fn power_exceeds(bits: u32, threshold: i128) -> bool {
    if bits >= 127 {
        return true;
    }
    threshold < (1i128 << bits)
}

fn exp2(bits: u32) -> f64 {
    (bits as f64).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: enumerate every triple, collect the feasible ones,
    /// and take the lexicographic minimum by sorting.
    fn oracle(k: usize, d: usize, scale: i128, slack: f64) -> Option<WidthSplit> {
        let mut feasible = Vec::new();
        let k = k as u32;
        let di = d as i128;
        let t12 = scale * di * (di - 1).pow(3) * (di + 1);
        for k1 in 1..k {
            for k2 in 1..k {
                for k3 in 1..k {
                    if k1 + k2 + k3 != k {
                        continue;
                    }
                    let ok1 = (t12 as f64) < (k1 as f64).exp2();
                    let ok2 = (t12 as f64) < (k2 as f64).exp2();
                    let ok3 = slack * (d as f64 + 1.0) < (k3 as f64).exp2();
                    if ok1 && ok2 && ok3 {
                        feasible.push((k1, k2, k3));
                    }
                }
            }
        }
        feasible.sort_unstable();
        feasible.first().map(|&(k1, k2, k3)| WidthSplit { k1, k2, k3 })
    }

    #[test]
    fn coloring_examples() {
        assert_eq!(coloring_params(6, 1), Some(WidthSplit { k1: 1, k2: 1, k3: 4 }));
        assert_eq!(coloring_params(3, 1), None);
        assert_eq!(coloring_params(19, 2), Some(WidthSplit { k1: 7, k2: 7, k3: 5 }));
    }

    #[test]
    fn cnf_examples() {
        assert_eq!(cnf_params(5, 1), Some(WidthSplit { k1: 1, k2: 1, k3: 3 }));
        assert_eq!(cnf_params(4, 1), None);
        assert_eq!(cnf_params(16, 2), Some(WidthSplit { k1: 6, k2: 6, k3: 4 }));
    }

    #[test]
    fn matches_enumeration_oracle() {
        for k in 1..=32 {
            for d in 0..=6 {
                assert_eq!(
                    coloring_params(k, d),
                    oracle(k, d, 16, 2.0 * std::f64::consts::E),
                    "coloring split mismatch at k={k} d={d}"
                );
                assert_eq!(
                    cnf_params(k, d),
                    oracle(k, d, 8, std::f64::consts::E),
                    "cnf split mismatch at k={k} d={d}"
                );
            }
        }
    }

    #[test]
    fn splits_sum_to_width() {
        for k in 3..=32 {
            for d in 0..=6 {
                if let Some(s) = coloring_params(k, d) {
                    assert_eq!(s.total() as usize, k);
                }
                if let Some(s) = cnf_params(k, d) {
                    assert_eq!(s.total() as usize, k);
                }
            }
        }
    }
}
