//! Shared plumbing: seeded RNG, adaptive quadrature, deterministic sums,
//! CSV quoting.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Splitmix64: tiny, deterministic across platforms, good enough for
/// property sweeps. Seeded runs are replayable byte-for-byte.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in [lo, hi).
    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn range_u64(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.next_u64() % (hi - lo)
    }

    /// Unit-exponential draw; a vector of these normalized is a uniform
    /// (Dirichlet(1,...,1)) point on the simplex.
    pub fn next_exp(&mut self) -> f64 {
        let u = 1.0 - self.next_f64();
        -u.ln()
    }
}

/// Deterministic pairwise (tree) summation: the result depends only on the
/// order of `xs`, never on thread scheduling.
pub fn tree_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let (a, b) = xs.split_at(n / 2);
            tree_sum(a) + tree_sum(b)
        }
    }
}

/// Adaptive Simpson quadrature for complex-valued integrands on [a, b].
///
/// `tol` is an absolute tolerance; refinement past `max_depth` is a
/// numeric error (non-convergent refinement).
pub fn adaptive_simpson<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<Complex64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fb, fm, whole, tol, max_depth, tol)
}

#[allow(clippy::too_many_arguments)]
#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fb: Complex64,
    fm: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
    global_tol: f64,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // the tolerance never shrinks below global/2^14: halving it per level
    // past that would chase evaluation jitter with exponential work
    let accept = 15.0 * tol.max(global_tol / 16384.0);
    if delta.norm() <= accept
        || delta.norm() <= 1e-15 * (left.norm() + right.norm())
        || (b - a) <= 1e-13 * (a.abs() + b.abs() + 1.0)
    {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        // at the bottom a residual below the caller's overall tolerance is
        // harmless; above it, the refinement genuinely failed
        if delta.norm() <= global_tol {
            return Ok(left + right + delta / 15.0);
        }
        return Err(Error::Numeric(format!(
            "quadrature did not converge on [{a}, {b}] (residual {:.3e})",
            delta.norm()
        )));
    }
    let l = simpson_rec(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1, global_tol)?;
    let r = simpson_rec(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1, global_tol)?;
    Ok(l + r)
}

/// Real-valued adaptive Simpson, same contract.
pub fn adaptive_simpson_real<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let g = |x: f64| Complex64::new(f(x), 0.0);
    adaptive_simpson(&g, a, b, tol, max_depth).map(|v| v.re)
}

/// RFC 4180 CSV field quoting.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
