//! Least dyadic sums `p_H = Σ_{n∈H} 2^-n` above a target, by branch-and-bound.

/// A nonempty `H ⊆ {1..depth}` encoded as the numerator `j = p_H · 2^depth`.
///
/// Bit `depth - n` of `j` is set iff `n ∈ H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicSum {
    pub numerator: u64,
    pub depth: u32,
}

impl DyadicSum {
    pub fn value(self) -> f64 {
        self.numerator as f64 * (-(self.depth as f64)).exp2()
    }

    /// Members of `H`, ascending.
    pub fn indices(self) -> Vec<u32> {
        (1..=self.depth)
            .filter(|&n| self.numerator >> (self.depth - n) & 1 == 1)
            .collect()
    }

    pub fn from_indices(indices: &[u32], depth: u32) -> Option<Self> {
        let mut numerator = 0u64;
        for &n in indices {
            if n == 0 || n > depth {
                return None;
            }
            numerator |= 1 << (depth - n);
        }
        (numerator > 0).then_some(DyadicSum { numerator, depth })
    }
}

/// Least `p_H >= target` over nonempty `H ⊆ {1..depth}`, or `None` when
/// `target` exceeds `1 − 2^-depth`.
///
/// The search walks the bits of `H` from `n = 1` down, pruning a branch when
/// even all remaining bits cannot reach `target` and when the partial sum is
/// already no better than the incumbent. Comparisons are made on `target ·
/// 2^depth`, which is exact in floating point.
pub fn least_dyadic_at_least(target: f64, depth: u32) -> Option<DyadicSum> {
    assert!((1..=crate::tolerances::MAX_DEPTH).contains(&depth), "depth out of range");
    let scaled = target * (depth as f64).exp2();
    let mut best: Option<u64> = None;
    search(scaled, depth, 1, 0, &mut best);
    best.map(|numerator| DyadicSum { numerator, depth })
}

fn search(scaled: f64, depth: u32, n: u32, partial: u64, best: &mut Option<u64>) {
    if partial > 0 && partial as f64 >= scaled {
        if best.is_none_or(|b| partial < b) {
            *best = Some(partial);
        }
        return;
    }
    if n > depth {
        return;
    }
    // bits n..=depth together add 2^(depth-n+1) - 1
    let remaining = (1u64 << (depth - n + 1)) - 1;
    if ((partial + remaining) as f64) < scaled {
        return;
    }
    if best.is_some_and(|b| partial >= b) {
        return;
    }
    let bit = 1u64 << (depth - n);
    search(scaled, depth, n + 1, partial, best);
    search(scaled, depth, n + 1, partial | bit, best);
}
