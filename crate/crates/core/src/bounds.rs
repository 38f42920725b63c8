//! Binomial arithmetic, the falling-factorial polynomial `p_r(x) = C(x, r)`,
//! its inverse on `[r-1, inf)`, the Bai–Lu edge bound, and the named
//! thresholds of the Hamiltonicity theorems.
//!
//! Integer quantities are exact `u128`; floating point only appears inside
//! `p`, `p_inverse` and `bai_lu_bound`.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("C({a}, {b}) overflows 128-bit arithmetic")]
    Overflow { a: u64, b: u64 },
    #[error("threshold {name:?} is not defined for n = {n}, r = {r}: {reason}")]
    NotApplicable { name: ThresholdName, n: u64, r: u64, reason: &'static str },
    #[error("convexity chain needs r >= 3 and n >= r + 3, got n = {n}, r = {r}")]
    ChainRange { n: u64, r: u64 },
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact binomial coefficient `C(a, b)`, zero when `b > a`.
pub fn binom(a: u64, b: u64) -> Result<u128, BoundsError> {
    if b > a {
        return Ok(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc * (a - i) / (i + 1) is integral; cancel before multiplying.
        let num = (a - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd(acc, den);
        let (acc_red, den_red) = (acc / g, den / g);
        debug_assert_eq!(num % den_red, 0);
        acc = acc_red
            .checked_mul(num / den_red)
            .ok_or(BoundsError::Overflow { a, b })?;
    }
    Ok(acc)
}

/// `binom` for arguments known to fit; panics on overflow.
pub(crate) fn binom_small(a: usize, b: usize) -> u128 {
    binom(a as u64, b as u64).expect("binomial overflow")
}

/// `p_r(x) = x (x-1) ... (x-r+1) / r!`.
pub fn p(r: u32, x: f64) -> f64 {
    let mut acc = 1.0;
    for k in 0..r {
        acc *= (x - k as f64) / (k + 1) as f64;
    }
    acc
}

fn p_derivative(r: u32, x: f64) -> f64 {
    // d/dx prod (x - k)/(k+1) = p(x) * sum 1/(x - k), computed without the division.
    let mut total = 0.0;
    for skip in 0..r {
        let mut term = 1.0 / (skip + 1) as f64;
        for k in 0..r {
            if k != skip {
                term *= (x - k as f64) / (k + 1) as f64;
            }
        }
        total += term;
    }
    total
}

/// The unique `x >= r-1` with `p_r(x) = y`.
///
/// Bisection down to a relative bracket of `1e-13`, one Newton step, and a snap
/// to the integer `k` when `C(k, r) = y` holds exactly.
pub fn p_inverse(r: u32, y: f64) -> f64 {
    assert!(r >= 1, "p_inverse needs r >= 1");
    assert!(y >= 0.0 && y.is_finite(), "p_inverse needs finite y >= 0, got {y}");
    let floor = (r - 1) as f64;
    if y == 0.0 {
        return floor;
    }
    if y.fract() == 0.0 && y < 2f64.powi(100) {
        if let Some(k) = integer_preimage(r, y as u128) {
            return k as f64;
        }
    }
    let mut lo = floor;
    let mut hi = floor + 1.0;
    while p(r, hi) < y {
        lo = hi;
        hi = floor + 2.0 * (hi - floor);
    }
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p(r, mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    let d = p_derivative(r, x);
    if d > 0.0 {
        let polished = x - (p(r, x) - y) / d;
        if polished >= lo && polished <= hi {
            x = polished;
        }
    }
    x
}

/// Integer `k >= r-1` with `C(k, r) = y` exactly, if any.
fn integer_preimage(r: u32, y: u128) -> Option<u64> {
    // C(k, r) >= ((k - r + 1) / r)^r gives a crude upper limit via doubling.
    let mut lo = (r - 1) as u64;
    let mut hi = lo + 1;
    loop {
        match binom(hi, r as u64) {
            Ok(v) if v < y => {
                lo = hi;
                hi = hi.checked_mul(2)?;
            }
            Ok(_) => break,
            Err(_) => break,
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match binom(mid, r as u64) {
            Ok(v) if v < y => lo = mid,
            _ => hi = mid,
        }
    }
    (binom(hi, r as u64).ok()? == y).then_some(hi)
}

/// Bai–Lu bound `f_r(m) = p_{r-1}(p_r^{-1}(m) - 1)` on the spectral radius of
/// an `r`-graph with `m` edges.
pub fn bai_lu_bound(r: u32, m: u64) -> f64 {
    assert!(r >= 2, "bai_lu_bound needs r >= 2");
    p(r - 1, p_inverse(r, m as f64) - 1.0)
}

/// Stanley's closed form for graphs, `(sqrt(1 + 8m) - 1) / 2`.
pub fn stanley_bound(m: u64) -> f64 {
    ((1.0 + 8.0 * m as f64).sqrt() - 1.0) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdName {
    /// `|H| > C(n-1, r)` forces a Hamiltonian Berge cycle (barring `K_{n-1}^r + e`).
    EdgeCycle,
    /// `|H| >= C(n-1, r)` forces a Hamiltonian Berge path (barring `K_{n-1}^r + v`).
    EdgePath,
    /// `lambda > C(n-2, r-1)` forces a Hamiltonian Berge cycle.
    SpectralCycle,
    /// `lambda >= C(n-2, r-1)` forces a Hamiltonian Berge path.
    SpectralPath,
    /// Minimum degree for Hamiltonicity when `r <= (n-1)/2`.
    Klm1i,
    /// Minimum degree for Hamiltonicity when `n/2 <= r <= n-1`.
    Klm1ii,
    /// Minimum degree for Hamiltonian-connectedness when `r <= n/2`.
    Klm2i,
    /// Minimum degree for Hamiltonian-connectedness when `n/2 < r <= n-1`, `n >= 6`.
    Klm2ii,
}

impl ThresholdName {
    pub const ALL: [ThresholdName; 8] = [
        ThresholdName::EdgeCycle,
        ThresholdName::EdgePath,
        ThresholdName::SpectralCycle,
        ThresholdName::SpectralPath,
        ThresholdName::Klm1i,
        ThresholdName::Klm1ii,
        ThresholdName::Klm2i,
        ThresholdName::Klm2ii,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ThresholdName::EdgeCycle => "edge_cycle",
            ThresholdName::EdgePath => "edge_path",
            ThresholdName::SpectralCycle => "spectral_cycle",
            ThresholdName::SpectralPath => "spectral_path",
            ThresholdName::Klm1i => "klm_1i",
            ThresholdName::Klm1ii => "klm_1ii",
            ThresholdName::Klm2i => "klm_2i",
            ThresholdName::Klm2ii => "klm_2ii",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Threshold {
    pub name: ThresholdName,
    pub value: u128,
}

/// Exact value of a named threshold.
pub fn threshold(name: ThresholdName, n: u64, r: u64) -> Result<Threshold, BoundsError> {
    use ThresholdName::*;
    let na = |reason| BoundsError::NotApplicable { name, n, r, reason };
    if r < 3 || n <= r {
        return Err(na("requires n > r >= 3"));
    }
    let value = match name {
        EdgeCycle | EdgePath | SpectralCycle | SpectralPath if n < r + 2 => {
            return Err(na("requires n >= r + 2"));
        }
        EdgeCycle | EdgePath => binom(n - 1, r)?,
        SpectralCycle | SpectralPath => binom(n - 2, r - 1)?,
        Klm1i if 2 * r > n - 1 => return Err(na("requires r <= (n-1)/2")),
        Klm1i => binom((n - 1) / 2, r - 1)? + 1,
        Klm1ii if 2 * r < n => return Err(na("requires n-1 >= r >= n/2")),
        Klm1ii => r as u128,
        Klm2i if 2 * r > n => return Err(na("requires r <= n/2")),
        Klm2i => binom(n / 2, r - 1)? + 1,
        Klm2ii if 2 * r <= n || n < 6 => return Err(na("requires n-1 >= r > n/2 >= 3")),
        Klm2ii => (r - 1) as u128,
    };
    Ok(Threshold { name, value })
}

/// The edge-count inequality chain, evaluated line by line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexityChain {
    pub n: u64,
    pub r: u64,
    /// `true` for the `n >= 2r+1` chain, `false` for the `r+3 <= n <= 2r` variant.
    pub large_range: bool,
    /// Values of the successive lines; consecutive lines must satisfy `<=`,
    /// and the last line is `C(n-1, r)`.
    pub lines: Vec<u128>,
    /// Index `i` of the first comparison `lines[i] <= lines[i+1]` that fails.
    pub failed_step: Option<usize>,
}

impl ConvexityChain {
    pub fn holds(&self) -> bool {
        self.failed_step.is_none()
    }
}

/// Checks the edge-count upper bound chain in exact arithmetic.
///
/// For `n >= 2r+1` the lines are
/// `C(n-2,r) + 2 C(a, r-1)`,
/// `C(n-2,r) + C(a+b, r-1) + C(a-b, r-1)`,
/// `C(n-2,r) + C(n-2,r-1)`, and `C(n-1,r)` (which must be equal to the line
/// before it), where `a = floor((n-1)/2)` and `b = floor((n-2)/2)`.
/// For `r+3 <= n <= 2r` it checks `C(n-2,r) + (r-1) + (r-2) <= C(n-1,r)`.
pub fn check_convexity_chain(n: u64, r: u64) -> Result<ConvexityChain, BoundsError> {
    if r < 3 || n < r + 3 {
        return Err(BoundsError::ChainRange { n, r });
    }
    let base = binom(n - 2, r)?;
    let last = binom(n - 1, r)?;
    let (large_range, lines) = if n > 2 * r {
        let a = (n - 1) / 2;
        let b = (n - 2) / 2;
        let l1 = base + 2 * binom(a, r - 1)?;
        let l2 = base + binom(a + b, r - 1)? + binom(a - b, r - 1)?;
        let l3 = base + binom(n - 2, r - 1)?;
        (true, vec![l1, l2, l3, last])
    } else {
        let l1 = base + (r - 1) as u128 + (r - 2) as u128;
        (false, vec![l1, last])
    };
    let mut failed_step = lines.windows(2).position(|w| w[0] > w[1]);
    // The final step of the large-range chain is Pascal's rule: an equality.
    if failed_step.is_none() && large_range && lines[2] != lines[3] {
        failed_step = Some(2);
    }
    Ok(ConvexityChain { n, r, large_range, lines, failed_step })
}
