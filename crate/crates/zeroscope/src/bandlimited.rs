//! Band-limited test functions.
//!
//! `FejerKernel` is the square of a sinc: its Fourier transform is a
//! triangle exactly supported in [-ν, ν], which is the whole point: the
//! prime sums it weights are *finite*. `SmoothBump` is the usual mollified
//! indicator used for the weights Φ, Ψ, f, g, and `dyadic_*` builds the
//! partition of unity Σ_j V(x/2^j) = 1 by telescoping a smooth cutoff.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::util::{adaptive_simpson, adaptive_simpson_real};

/// Fejér kernel φ(x) = (sin(πνx)/(πνx))², with φ̂ the triangle of base
/// [-ν, ν] and peak 1/ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FejerKernel {
    pub nu: f64,
}

impl FejerKernel {
    pub fn new(nu: f64) -> Result<FejerKernel> {
        if nu <= 0.0 || !nu.is_finite() {
            return Err(Error::Domain(format!("Fejér support radius must be positive, got {nu}")));
        }
        Ok(FejerKernel { nu })
    }

    /// φ at a complex argument; entire, so fine anywhere in ℂ.
    /// Near w = πνz = 0 the ratio sin(w)/w is evaluated by its power series
    /// to dodge the 0/0 cancellation.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let w = std::f64::consts::PI * self.nu * z;
        let sinc = if w.norm() < 1e-2 {
            let w2 = w * w;
            1.0 - w2 / 6.0 + w2 * w2 / 120.0 - w2 * w2 * w2 / 5040.0
        } else {
            w.sin() / w
        };
        sinc * sinc
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_complex(Complex64::new(x, 0.0)).re
    }

    /// φ̂(t) = (1/ν) max(0, 1 - |t|/ν); exactly zero outside [-ν, ν].
    pub fn hat(&self, t: f64) -> f64 {
        let a = t.abs();
        if a >= self.nu {
            0.0
        } else {
            (1.0 - a / self.nu) / self.nu
        }
    }

    /// φ̂(t) recomputed as ∫ φ(x) e(-xt) dx with the |x| > cutoff tail of the
    /// 1/x² decay handled in closed form (sine-integral asymptotics). The
    /// quadrature oracle for the triangle.
    pub fn hat_by_quadrature(&self, t: f64, cutoff: f64, tol: f64) -> Result<f64> {
        let f = |x: f64| self.eval(x) * (2.0 * std::f64::consts::PI * t * x).cos();
        // unit panels keep the adaptive rule honest against oscillation
        let mut acc = 0.0;
        let mut x0 = 0.0;
        while x0 < cutoff {
            let x1 = (x0 + 1.0).min(cutoff);
            acc += adaptive_simpson_real(&f, x0, x1, tol / cutoff, 30)?;
            x0 = x1;
        }
        Ok(2.0 * acc + self.tail_integral(t, cutoff))
    }

    /// ∫_{|x| > X} φ(x) e(-xt) dx, exactly, via
    /// φ(x) = (1 - cos(2πνx)) / (2π²ν²x²) and C(b) = ∫_X^∞ cos(bx)/x² dx.
    fn tail_integral(&self, t: f64, x_big: f64) -> f64 {
        let nu = self.nu;
        let c = |b: f64| cos_over_x2_tail(b.abs(), x_big);
        (c(2.0 * std::f64::consts::PI * t)
            - 0.5 * c(2.0 * std::f64::consts::PI * (nu + t))
            - 0.5 * c(2.0 * std::f64::consts::PI * (nu - t)))
            / (std::f64::consts::PI * std::f64::consts::PI * nu * nu)
    }
}

/// ∫_X^∞ cos(bx)/x² dx = cos(bX)/X - b (π/2 - Si(bX)), b ≥ 0.
fn cos_over_x2_tail(b: f64, x_big: f64) -> f64 {
    if b == 0.0 {
        return 1.0 / x_big;
    }
    let y = b * x_big;
    (y.cos()) / x_big - b * si_complement(y)
}

/// π/2 - Si(y) for y ≥ 0.
fn si_complement(y: f64) -> f64 {
    if y < 2.0 {
        // power series for Si
        let mut term = y;
        let mut si = y;
        let y2 = y * y;
        for k in 1..40 {
            let k2 = (2 * k) as f64;
            term *= -y2 / (k2 * (k2 + 1.0));
            si += term / (k2 + 1.0);
            if term.abs() < 1e-18 {
                break;
            }
        }
        std::f64::consts::FRAC_PI_2 - si
    } else {
        // π/2 - Si(y) = f(y) cos y + g(y) sin y with Laplace integrals
        // f(y) = ∫_0^∞ e^{-yu} / (1+u²) du, g(y) = ∫_0^∞ u e^{-yu}/(1+u²) du
        let f = |u: f64| (-y * u).exp() / (1.0 + u * u);
        let g = |u: f64| u * (-y * u).exp() / (1.0 + u * u);
        let hi = 60.0 / y;
        let fv = adaptive_simpson_real(&f, 0.0, hi, 1e-14, 30).unwrap_or(0.0);
        let gv = adaptive_simpson_real(&g, 0.0, hi, 1e-14, 30).unwrap_or(0.0);
        fv * y.cos() + gv * y.sin()
    }
}

fn mollifier(v: f64) -> f64 {
    if v.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - v * v)).exp()
    }
}

const EDGE_NODES: usize = 4096;

/// Cumulative mollifier integral on a uniform grid over [-1, 1], normalized
/// to end at 1. Computed once; evaluation interpolates.
fn edge_table() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut acc = Vec::with_capacity(EDGE_NODES + 1);
        let mut total = 0.0;
        acc.push(0.0);
        for i in 0..EDGE_NODES {
            let a = -1.0 + 2.0 * i as f64 / EDGE_NODES as f64;
            let b = -1.0 + 2.0 * (i + 1) as f64 / EDGE_NODES as f64;
            total += adaptive_simpson_real(&mollifier, a, b, 1e-17, 24).expect("mollifier cell");
            acc.push(total);
        }
        let mass = total;
        for v in acc.iter_mut() {
            *v /= mass;
        }
        acc
    })
}

/// Smooth rising edge: 0 for u ≤ -1, 1 for u ≥ 1, the normalized integral of
/// exp(-1/(1-v²)) in between. Six-point Lagrange interpolation on the cached
/// cumulative table keeps the error near 1e-17, far below every tolerance
/// this crate uses.
fn edge(u: f64) -> f64 {
    if u <= -1.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let table = edge_table();
    let x = (u + 1.0) * 0.5 * EDGE_NODES as f64;
    let mut base = x.floor() as isize - 2;
    base = base.clamp(0, EDGE_NODES as isize - 5);
    let base = base as usize;
    let mut acc = 0.0;
    for j in 0..6 {
        let xj = (base + j) as f64;
        let mut w = table[base + j];
        for k in 0..6 {
            if k != j {
                let xk = (base + k) as f64;
                w *= (x - xk) / (xj - xk);
            }
        }
        acc += w;
    }
    acc.clamp(0.0, 1.0)
}

/// Mollified indicator: identically 1 on the plateau, identically 0 outside
/// the support, C^∞ transitions in between.
#[derive(Debug, Clone, Copy)]
pub struct SmoothBump {
    pub support: (f64, f64),
    pub plateau: (f64, f64),
}

impl SmoothBump {
    pub fn new(support: (f64, f64), plateau: (f64, f64)) -> Result<SmoothBump> {
        let (a, b) = support;
        let (a1, b1) = plateau;
        if !(a < b && a1 < b1 && a < a1 && b1 < b) {
            return Err(Error::Domain(format!(
                "plateau [{a1}, {b1}] must sit strictly inside support [{a}, {b}]"
            )));
        }
        Ok(SmoothBump { support, plateau })
    }

    /// Default plateau: transition widths of 1/8 of the support length on
    /// each side. Fixed once so every run is reproducible.
    pub fn with_default_plateau(support: (f64, f64)) -> Result<SmoothBump> {
        let w = (support.1 - support.0) / 8.0;
        SmoothBump::new(support, (support.0 + w, support.1 - w))
    }

    /// The Theorem-style modulus weight: supported in [3/4, 9/4].
    pub fn standard_phi() -> SmoothBump {
        SmoothBump::with_default_plateau((0.75, 2.25)).unwrap()
    }

    /// A test function supported inside [1/2, 3] for the prime sums.
    pub fn standard_f() -> SmoothBump {
        SmoothBump::with_default_plateau((0.5, 3.0)).unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.support;
        let (a1, b1) = self.plateau;
        if x <= a || x >= b {
            0.0
        } else if x >= a1 && x <= b1 {
            1.0
        } else if x < a1 {
            edge(2.0 * (x - a) / (a1 - a) - 1.0)
        } else {
            1.0 - edge(2.0 * (x - b1) / (b - b1) - 1.0)
        }
    }

    /// Sup of |d^k/dx^k| estimated by central differences on a grid.
    pub fn derivative_sup(&self, k: usize, grid: usize) -> f64 {
        let (a, b) = self.support;
        let h = 1e-2 * (b - a);
        let mut sup: f64 = 0.0;
        for i in 0..=grid {
            let x = a + (b - a) * i as f64 / grid as f64;
            let d = central_difference(|y| self.eval(y), x, h, k);
            sup = sup.max(d.abs());
        }
        sup
    }
}

fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64, k: usize) -> f64 {
    match k {
        0 => f(x),
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h),
        4 => {
            (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h))
                / (h * h * h * h)
        }
        _ => panic!("derivative order {k} not supported"),
    }
}

/// Smooth cutoff H: 1 on (0, 1], 0 on [2, ∞), built from the same mollifier,
/// so V(x) = H(x) - H(2x) telescopes the partition of unity exactly.
pub fn smooth_cutoff(x: f64) -> f64 {
    if x <= 1.0 {
        1.0
    } else if x >= 2.0 {
        0.0
    } else {
        1.0 - edge(2.0 * (x - 1.0) - 1.0)
    }
}

/// One dyadic piece V(x/2^j) with V(x) = H(x) - H(2x), supported in [1/2, 2].
pub fn dyadic_piece(j: i32, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("dyadic argument must be positive, got {x}")));
    }
    let y = x / 2.0f64.powi(j);
    Ok(smooth_cutoff(y) - smooth_cutoff(2.0 * y))
}

/// Σ_{|j| ≤ 64} V(x/2^j); equals 1 to rounding by telescoping.
pub fn dyadic_partition_value(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("dyadic argument must be positive, got {x}")));
    }
    let mut s = 0.0;
    for j in -64..=64 {
        let y = x / 2.0f64.powi(j);
        if (0.25..4.0).contains(&y) {
            s += smooth_cutoff(y) - smooth_cutoff(2.0 * y);
        }
    }
    Ok(s)
}

/// ∫ f(x) e(-xt) dx for f smooth and compactly supported in `support`.
///
/// Slowly oscillating integrands go to adaptive Simpson; once the phase
/// turns more than a few times across the support, a Filon-type rule takes
/// over (quadratic fit per panel, oscillatory moments in closed form), so
/// the cost does not grow with |t|.
pub fn fourier_quadrature<F: Fn(f64) -> f64>(
    f: &F,
    t: f64,
    support: (f64, f64),
    tol: f64,
) -> Result<Complex64> {
    let (a, b) = support;
    if !(a < b) {
        return Err(Error::Domain(format!("empty support [{a}, {b}]")));
    }
    if t.abs() * (b - a) > 4.0 {
        return filon(f, t, a, b, tol);
    }
    let g = |x: f64| {
        let phase = -2.0 * std::f64::consts::PI * x * t;
        f(x) * Complex64::new(phase.cos(), phase.sin())
    };
    // panel per unit length so oscillation cannot hide from the error check
    let mut acc = Complex64::new(0.0, 0.0);
    let n_panels = ((b - a).ceil() as usize).max(1);
    let width = (b - a) / n_panels as f64;
    for i in 0..n_panels {
        let x0 = a + i as f64 * width;
        let x1 = x0 + width;
        acc += adaptive_simpson(&g, x0, x1, tol / n_panels as f64, 40)?;
    }
    Ok(acc)
}

/// Filon rule with panel doubling until two refinements agree to tol.
fn filon<F: Fn(f64) -> f64>(f: &F, t: f64, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    let mut m = 64usize;
    let mut prev = filon_pass(f, t, a, b, m);
    loop {
        m *= 2;
        let cur = filon_pass(f, t, a, b, m);
        if (cur - prev).norm() <= tol.max(1e-15) {
            return Ok(cur);
        }
        if m >= 1 << 17 {
            return Err(Error::Numeric(format!(
                "oscillatory quadrature did not settle at {m} panels (residual {:.3e})",
                (cur - prev).norm()
            )));
        }
        prev = cur;
    }
}

fn filon_pass<F: Fn(f64) -> f64>(f: &F, t: f64, a: f64, b: f64, m: usize) -> Complex64 {
    let h = (b - a) / m as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    // θ is the phase half-swing per panel; the moments below are
    // I_k(θ) = ∫_{-1}^{1} u^k e^{iθu} du
    let theta = -std::f64::consts::PI * t * h;
    let (i0, i1, i2) = filon_moments(theta);
    for j in 0..m {
        let x0 = a + j as f64 * h;
        let x1 = x0 + h;
        let xc = 0.5 * (x0 + x1);
        let f0 = f(x0);
        let fm = f(xc);
        let f1 = f(x1);
        let c0 = fm;
        let c1 = 0.5 * (f1 - f0);
        let c2 = 0.5 * (f1 + f0) - fm;
        let phase = -2.0 * std::f64::consts::PI * xc * t;
        let rot = Complex64::new(phase.cos(), phase.sin());
        acc += rot * (c0 * i0 + c1 * i1 + c2 * i2) * (0.5 * h);
    }
    acc
}

fn filon_moments(theta: f64) -> (Complex64, Complex64, Complex64) {
    if theta.abs() < 0.3 {
        let t2 = theta * theta;
        let i0 = 2.0 * (1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0);
        let i1 = 2.0 * theta * (1.0 / 3.0 - t2 / 30.0 + t2 * t2 / 840.0);
        let i2 = 2.0 * (1.0 / 3.0 - t2 / 10.0 + t2 * t2 / 168.0 - t2 * t2 * t2 / 6480.0);
        (
            Complex64::new(i0, 0.0),
            Complex64::new(0.0, i1),
            Complex64::new(i2, 0.0),
        )
    } else {
        let (s, c) = theta.sin_cos();
        let i0 = 2.0 * s / theta;
        let i1 = 2.0 * (s / (theta * theta) - c / theta);
        let i2 = 2.0 * ((theta * theta - 2.0) * s + 2.0 * theta * c) / (theta * theta * theta);
        (
            Complex64::new(i0, 0.0),
            Complex64::new(0.0, i1),
            Complex64::new(i2, 0.0),
        )
    }
}
