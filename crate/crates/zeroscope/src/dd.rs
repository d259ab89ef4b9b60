//! Double-double arithmetic (~31 significant digits).
//!
//! The critical-line evaluation of `Λ(s, χ)` cancels catastrophically: the
//! summands of the smoothed approximate functional equation are of size
//! `O(1/|t|)` while the sum is of size `e^{-π|t|/4}`. Plain `f64` therefore
//! runs out of signal near `|t| ≈ 20`. Carrying the sum in double-double
//! keeps ~12 honest digits up to `|t| ≈ 70`, which covers every height this
//! crate certifies.
//!
//! The representation is the classical unevaluated pair `hi + lo` with
//! `|lo| ≤ ulp(hi)/2` (Dekker/Knuth error-free transformations, no FMA
//! dependence so results are bit-identical across targets).

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

/// Dekker split of a f64 into high/low 26-bit halves.
#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134217729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    let lo = a - hi;
    (hi, lo)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// π to double-double precision.
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };
    /// 2π to double-double precision.
    pub const TWO_PI: Dd = Dd {
        hi: std::f64::consts::TAU,
        lo: 2.4492935982947064e-16,
    };
    /// π/2 to double-double precision.
    pub const FRAC_PI_2: Dd = Dd {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123233995736766e-17,
    };
    /// ln 2 to double-double precision.
    pub const LN_2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.3190468138462996e-17,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    /// Exact ratio of two small integers.
    pub fn from_ratio(num: i64, den: i64) -> Dd {
        Dd::from_f64(num as f64) / Dd::from_f64(den as f64)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    pub fn floor(self) -> Dd {
        let fh = self.hi.floor();
        if fh == self.hi {
            let fl = self.lo.floor();
            Dd::new(fh, fl)
        } else {
            Dd { hi: fh, lo: 0.0 }
        }
    }

    pub fn round(self) -> Dd {
        (self + Dd::from_f64(0.5)).floor()
    }

    pub fn sqr(self) -> Dd {
        let (p, e) = two_prod(self.hi, self.hi);
        let e = e + 2.0 * self.hi * self.lo + self.lo * self.lo;
        let (s, e) = quick_two_sum(p, e);
        Dd { hi: s, lo: e }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        // one Newton step on a f64 seed doubles the working precision
        let approx = self.hi.sqrt();
        let a = Dd::from_f64(approx);
        let r = self / a;
        (a + r) * Dd::from_f64(0.5)
    }

    pub fn powi(self, n: u32) -> Dd {
        let mut acc = Dd::ONE;
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            k >>= 1;
        }
        acc
    }

    /// exp(x) by range reduction `x = k ln2 + r` and a Taylor series in r.
    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -709.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = self - Dd::LN_2 * Dd::from_f64(k);
        // |r| <= ln2/2; Taylor to 1e-35
        let mut sum = Dd::ONE + r;
        let mut term = r;
        for j in 2..40 {
            term = term * r / Dd::from_f64(j as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        // scale by 2^k
        let scale = f64::powi(2.0, k as i32);
        Dd {
            hi: sum.hi * scale,
            lo: sum.lo * scale,
        }
    }

    /// ln(x) for x > 0 via a f64 seed plus one Newton correction.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let y0 = Dd::from_f64(self.hi.ln());
        // y = y0 + x e^{-y0} - 1
        y0 + self * (-y0).exp() - Dd::ONE
    }

    /// Simultaneous sin and cos via reduction mod π/2.
    pub fn sin_cos(self) -> (Dd, Dd) {
        // x = q (π/2) + r with |r| <= π/4
        let q = (self.hi / std::f64::consts::FRAC_PI_2).round();
        let r = self - Dd::FRAC_PI_2 * Dd::from_f64(q);
        let (s, c) = sin_cos_taylor(r);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    /// atan2(y, x) via a f64 seed refined by one correction step.
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        let th0 = y.hi.atan2(x.hi);
        let t = Dd::from_f64(th0);
        let (s, c) = t.sin_cos();
        // residual rotation e = (y cos - x sin) / (x cos + y sin); |e| ~ 1e-16
        let num = y * c - x * s;
        let den = x * c + y * s;
        if den.hi == 0.0 {
            return t;
        }
        let e = num / den;
        // atan(e) ≈ e - e^3/3, second term below 1e-48
        t + e
    }
}

fn sin_cos_taylor(r: Dd) -> (Dd, Dd) {
    // |r| <= π/4
    let r2 = r.sqr();
    let mut s = r;
    let mut term = r;
    let mut k = 1.0f64;
    loop {
        term = term * r2 / Dd::from_f64((k + 1.0) * (k + 2.0));
        term = -term;
        s = s + term;
        k += 2.0;
        if term.hi.abs() < 1e-36 {
            break;
        }
    }
    let mut c = Dd::ONE;
    let mut term = Dd::ONE;
    let mut k = 0.0f64;
    loop {
        term = term * r2 / Dd::from_f64((k + 1.0) * (k + 2.0));
        term = -term;
        c = c + term;
        k += 2.0;
        if term.hi.abs() < 1e-36 {
            break;
        }
    }
    (s, c)
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let e = e + self.lo + rhs.lo;
        let (s, e) = quick_two_sum(s, e);
        Dd { hi: s, lo: e }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (s, e) = quick_two_sum(p, e);
        Dd { hi: s, lo: e }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e) + Dd::from_f64(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<std::cmp::Ordering> {
        (self.hi, self.lo).partial_cmp(&(other.hi, other.lo))
    }
}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: CDd = CDd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> CDd {
        CDd { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> CDd {
        CDd {
            re: Dd::from_f64(re),
            im: Dd::from_f64(im),
        }
    }

    #[inline]
    pub fn conj(self) -> CDd {
        CDd {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(self) -> Dd {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, k: Dd) -> CDd {
        CDd {
            re: self.re * k,
            im: self.im * k,
        }
    }

    pub fn exp(self) -> CDd {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        CDd {
            re: m * c,
            im: m * s,
        }
    }

    pub fn ln(self) -> CDd {
        CDd {
            re: self.norm_sqr().ln() * Dd::from_f64(0.5),
            im: Dd::atan2(self.im, self.re),
        }
    }

    pub fn sqrt(self) -> CDd {
        // principal branch via exp(ln/2)
        if self.re.hi == 0.0 && self.im.hi == 0.0 {
            return CDd::ZERO;
        }
        (self.ln().scale(Dd::from_f64(0.5))).exp()
    }

    pub fn recip(self) -> CDd {
        let d = self.norm_sqr();
        CDd {
            re: self.re / d,
            im: -self.im / d,
        }
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for CDd {
    type Output = CDd;
    #[inline]
    fn add(self, rhs: CDd) -> CDd {
        CDd {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for CDd {
    type Output = CDd;
    #[inline]
    fn sub(self, rhs: CDd) -> CDd {
        CDd {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for CDd {
    type Output = CDd;
    fn neg(self) -> CDd {
        CDd {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for CDd {
    type Output = CDd;
    #[inline]
    fn mul(self, rhs: CDd) -> CDd {
        CDd {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for CDd {
    type Output = CDd;
    #[inline]
    fn div(self, rhs: CDd) -> CDd {
        self * rhs.recip()
    }
}

/// ln(2π)/2 to full double-double accuracy.
fn half_ln_two_pi() -> Dd {
    static V: std::sync::OnceLock<Dd> = std::sync::OnceLock::new();
    *V.get_or_init(|| Dd::TWO_PI.ln() * Dd::from_f64(0.5))
}

/// log Γ(z) in double-double via Stirling's series after shifting
/// Re z upward; valid away from the poles.
pub fn ln_gamma_cdd(z: CDd) -> CDd {
    // push |z| beyond 26 so sixteen Bernoulli terms reach ~1e-33
    let mut w = z;
    let mut products = Vec::new();
    while w.norm_sqr().to_f64() < 26.0 * 26.0 {
        products.push(w);
        w = w + CDd::ONE;
    }
    // Stirling: (w - 1/2) ln w - w + ln(2π)/2 + Σ B_{2j} / (2j(2j-1) w^{2j-1})
    let lnw = w.ln();
    let half = Dd::from_f64(0.5);
    let mut acc = (w - CDd::new(half, Dd::ZERO)) * lnw - w
        + CDd::new(half_ln_two_pi(), Dd::ZERO);
    // B_{2j}/(2j(2j-1)) for j = 1..16
    const STIRLING: [(i64, i64); 16] = [
        (1, 12),
        (-1, 360),
        (1, 1260),
        (-1, 1680),
        (1, 1188),
        (-691, 360360),
        (1, 156),
        (-3617, 122400),
        (43867, 244188),
        (-174611, 125400),
        (77683, 5796),
        (-236364091, 1506960),
        (657931, 300),
        (-3392780147, 93960),
        (1723168255201, 2492028),
        (-7709321041217, 505920),
    ];
    let winv2 = (w * w).recip();
    let mut wpow = w.recip();
    for &(num, den) in STIRLING.iter() {
        acc = acc + wpow.scale(Dd::from_ratio(num, den));
        wpow = wpow * winv2;
    }
    // undo the recurrence Γ(z) = Γ(z+m) / (z (z+1) ... (z+m-1))
    for p in products {
        acc = acc - p.ln();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_basic_arithmetic() {
        let a = Dd::from_f64(1.0) / Dd::from_f64(3.0);
        let b = a * Dd::from_f64(3.0);
        assert!((b - Dd::ONE).abs().to_f64() < 1e-31);

        let x = Dd::from_f64(2.0).sqrt();
        assert!((x.sqr() - Dd::from_f64(2.0)).abs().to_f64() < 1e-31);
    }

    #[test]
    fn dd_exp_ln_roundtrip() {
        for &v in &[0.1, 1.0, 2.5, 10.0, 40.0] {
            let x = Dd::from_f64(v);
            let r = x.exp().ln();
            assert!((r - x).abs().to_f64() < 1e-30, "v={v}");
        }
        // e^1 against the known constant
        let e = Dd::ONE.exp();
        assert!((e.to_f64() - std::f64::consts::E).abs() < 1e-16);
        assert!((e.lo - 1.4456468917292502e-16).abs() < 1e-30);
    }

    #[test]
    fn dd_sincos_known_values() {
        let (s, c) = (Dd::PI / Dd::from_f64(6.0)).sin_cos();
        assert!((s - Dd::from_f64(0.5)).abs().to_f64() < 1e-31);
        let expected = (Dd::from_f64(3.0).sqrt()) * Dd::from_f64(0.5);
        assert!((c - expected).abs().to_f64() < 1e-31);

        // large-argument reduction
        let x = Dd::from_f64(300.0);
        let (s, _) = x.sin_cos();
        assert!((s.to_f64() - 300.0f64.sin()).abs() < 1e-13);
    }

    #[test]
    fn dd_atan2_matches() {
        let y = Dd::from_f64(0.7);
        let x = Dd::from_f64(-1.3);
        let th = Dd::atan2(y, x);
        assert!((th.to_f64() - 0.7f64.atan2(-1.3)).abs() < 1e-15);
        let (s, c) = th.sin_cos();
        // tan(th) = y/x to dd accuracy
        assert!(((s / c) - y / x).abs().to_f64() < 1e-29);
    }

    #[test]
    fn ln_gamma_cdd_reference_values() {
        // Γ(1/2) = √π
        let z = CDd::from_f64(0.5, 0.0);
        let lg = ln_gamma_cdd(z);
        let expected = Dd::PI.ln() * Dd::from_f64(0.5);
        assert!((lg.re - expected).abs().to_f64() < 1e-29);
        assert!(lg.im.to_f64().abs() < 1e-29);

        // Γ(5) = 24
        let z = CDd::from_f64(5.0, 0.0);
        let lg = ln_gamma_cdd(z).re.exp();
        assert!((lg - Dd::from_f64(24.0)).abs().to_f64() < 1e-27);

        // |Γ(1/4 + 15 i)| via the reflection-free Stirling path against
        // the asymptotic |Γ(σ+iy)| ~ √(2π) y^{σ-1/2} e^{-π y/2}; only a
        // smoke test of magnitude, the digits are checked via Γ(z+1)=zΓ(z).
        let z = CDd::from_f64(0.25, 15.0);
        let a = ln_gamma_cdd(z + CDd::ONE);
        let b = ln_gamma_cdd(z) + z.ln();
        assert!((a - b).abs().to_f64() < 1e-28);
    }
}
