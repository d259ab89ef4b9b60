//! Complex special functions in plain f64: log-gamma (Lanczos), digamma,
//! and the upper incomplete gamma used by the fast path of the L-function
//! evaluator.

use num_complex::Complex64;

/// Lanczos g=7, n=9 coefficients (as in the GNU Scientific Library).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// log Γ(z), principal branch up to multiples of 2πi.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Γ(z)Γ(1-z) = π / sin(πz)
        let pi = std::f64::consts::PI;
        let lnpi = Complex64::new(pi.ln(), 0.0);
        return lnpi - (Complex64::new(pi, 0.0) * z).sin().ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_P[0], 0.0);
    for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        acc += p / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (zm1 + 0.5) * t.ln() - t + acc.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// Digamma ψ(z) by recurrence into Re z ≥ 10 plus the asymptotic series.
pub fn digamma(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while w.re < 10.0 {
        acc -= 1.0 / w;
        w += 1.0;
    }
    // ψ(w) ~ ln w - 1/(2w) - Σ B_{2n} / (2n w^{2n})
    const COEF: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let inv2 = 1.0 / (w * w);
    let mut s = w.ln() - 0.5 / w;
    let mut p = inv2;
    for &c in COEF.iter() {
        s -= c * p;
        p *= inv2;
    }
    acc + s
}

/// Scaled upper incomplete gamma G(z, x) = x^{-z} Γ(z, x) for real x > 0.
///
/// Series branch for x below `x_switch`, modified-Lentz continued fraction
/// above. The caller fixes `x_switch` once per scan so the branch choice
/// never flips while a zero is being bracketed.
pub fn gamma_up_scaled(z: Complex64, x: f64, x_switch: f64) -> Complex64 {
    debug_assert!(x > 0.0);
    if x < x_switch {
        if z.norm_sqr() < 0.35 * 0.35 {
            // near the Γ pole at z = 0 the head and the k = 0 series term
            // both blow up like 1/z; their combination
            //   x^{-z}Γ(z) - 1/z = (exp(-z ln x + lnΓ(z+1)) - 1)/z
            // stays finite, and the rest of the series is alternating:
            //   G = that - Σ_{k≥1} (-x)^k / (k! (z+k))
            let head = if z.norm_sqr() < 1e-8 {
                // (e^w - 1)/z = (w/z)(1 + w/2 + ...) with
                // w/z = -ln x + lnΓ(1+z)/z = -ln x - γ + ζ(2)z/2 - ζ(3)z²/3 + ...
                const EULER: f64 = 0.5772156649015328606;
                const Z2: f64 = 1.6449340668482264;
                const Z3: f64 = 1.2020569031595943;
                const Z4: f64 = 1.0823232337111382;
                let w_over_z = -x.ln() - EULER
                    + z * (Z2 / 2.0 - z * (Z3 / 3.0 - z * (Z4 / 4.0)));
                let w = w_over_z * z;
                w_over_z * (1.0 + w * (0.5 + w / 6.0))
            } else {
                let w = -z * x.ln() + ln_gamma(z + 1.0);
                expm1_complex(w) / z
            };
            let mut sum = Complex64::new(0.0, 0.0);
            let mut pow = Complex64::new(1.0, 0.0);
            for k in 1..200 {
                pow *= -x / k as f64;
                let term = pow / (z + k as f64);
                sum += term;
                if term.norm_sqr() < 1e-36 * (1.0 + sum.norm_sqr()) {
                    break;
                }
            }
            return head - sum;
        }
        // x^{-z} Γ(z) - e^{-x} Σ_k x^k / (z (z+1) ... (z+k))
        let head = (ln_gamma(z) - z * x.ln()).exp();
        let mut term = 1.0 / z;
        let mut sum = term;
        for k in 1..500 {
            term *= x / (z + k as f64);
            sum += term;
            if term.norm_sqr() < 1e-36 * sum.norm_sqr() {
                break;
            }
        }
        head - (-x).exp() * sum
    } else {
        // Γ(z,x) = e^{-x} x^z / (x + 1 - z - 1(1-z)/(x + 3 - z - 2(2-z)/(...)))
        // scaled form drops the x^z factor.
        let tiny = 1e-290;
        let mut b = Complex64::new(x + 1.0, 0.0) - z;
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = b.inv();
        let mut h = d;
        for i in 1..2000 {
            let an = -(i as f64) * (Complex64::new(i as f64, 0.0) - z);
            b += 2.0;
            d = an * d + b;
            if d.norm_sqr() < tiny * tiny {
                d = Complex64::new(tiny, 0.0);
            }
            c = b + an / c;
            if c.norm_sqr() < tiny * tiny {
                c = Complex64::new(tiny, 0.0);
            }
            d = d.inv();
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).norm_sqr() < 1e-32 {
                break;
            }
        }
        (-x).exp() * h
    }
}

/// e^w - 1 without cancellation for small |w|.
fn expm1_complex(w: Complex64) -> Complex64 {
    if w.norm_sqr() > 0.25 {
        return w.exp() - 1.0;
    }
    let mut term = w;
    let mut sum = w;
    for m in 2..30 {
        term *= w / m as f64;
        sum += term;
        if term.norm_sqr() < 1e-36 * sum.norm_sqr() {
            break;
        }
    }
    sum
}
