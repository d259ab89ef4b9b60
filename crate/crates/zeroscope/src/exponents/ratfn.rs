//! Exact rational polynomials in one variable and the linear-fractional
//! expressions built from them. Everything here is BigRational arithmetic;
//! no floating point touches the feasibility geometry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    BigRational::from(BigInt::from(num))
}

/// Polynomial with rational coefficients, low degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(coeffs: Vec<Rat>) -> Poly {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::new(vec![c])
    }

    /// c0 + c1·x
    pub fn affine(c0: Rat, c1: Rat) -> Poly {
        Poly::new(vec![c0, c1])
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().map(|c| c.is_zero()) == Some(true) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::constant(Rat::zero());
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::constant(Rat::zero());
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(i as i64))
                .collect(),
        )
    }

    /// Polynomial remainder (self mod other), other nonzero.
    fn rem(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        let d = other.degree();
        let lead = other.coeffs[d].clone();
        while !r.is_zero() && r.degree() >= d && !(r.degree() == 0 && r.coeffs[0].is_zero()) {
            let k = r.degree() - d;
            let factor = &r.coeffs[r.degree()] / &lead;
            let mut sub = vec![Rat::zero(); k];
            sub.extend(other.coeffs.iter().map(|c| c * &factor));
            r = r.sub(&Poly::new(sub));
            if r.degree() < d || r.is_zero() {
                break;
            }
        }
        r
    }

    /// Sturm chain of self.
    fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    fn sign_variations(chain: &[Poly], x: &Rat) -> usize {
        let mut last: Option<bool> = None;
        let mut v = 0;
        for p in chain {
            let s = p.eval(x);
            if s.is_zero() {
                continue;
            }
            let pos = s.is_positive();
            if let Some(prev) = last {
                if prev != pos {
                    v += 1;
                }
            }
            last = Some(pos);
        }
        v
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn count_roots(&self, a: &Rat, b: &Rat) -> usize {
        if self.is_zero() {
            panic!("root counting on the zero polynomial");
        }
        let chain = self.sturm_chain();
        let va = Poly::sign_variations(&chain, a);
        let vb = Poly::sign_variations(&chain, b);
        va.saturating_sub(vb)
    }

    /// All rational roots in (lo, hi], found by the rational-root theorem on
    /// the integer-cleared polynomial and verified by exact evaluation.
    pub fn rational_roots_in(&self, lo: &Rat, hi: &Rat) -> Vec<Rat> {
        if self.is_zero() {
            return Vec::new();
        }
        // clear denominators
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            let d = c.denom();
            let g = num_bigint::BigInt::from(num_integer::Integer::gcd(&lcm, d));
            lcm = &lcm / g * d;
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from(lcm.clone())).to_integer())
            .collect();
        // strip trailing zero coefficients at the low end (roots at 0)
        let mut low = 0;
        while low < ints.len() - 1 && ints[low].is_zero() {
            low += 1;
        }
        let a0 = ints[low].clone();
        let an = ints.last().unwrap().clone();
        let mut out = Vec::new();
        if Rat::zero() > *lo && Rat::zero() <= *hi && low > 0 {
            out.push(Rat::zero());
        }
        for p in divisors_bigint(&a0.abs()) {
            for q in divisors_bigint(&an.abs()) {
                for sign in [1i64, -1] {
                    let cand = Rat::new(&p * BigInt::from(sign), q.clone());
                    if cand > *lo && cand <= *hi && self.eval(&cand).is_zero() {
                        if !out.contains(&cand) {
                            out.push(cand);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

fn divisors_bigint(n: &BigInt) -> Vec<BigInt> {
    // coefficients in this crate stay small; fall back to 1..=n scan capped
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let n_u = n.magnitude().to_u64_digits();
    if n_u.len() > 1 || n_u.first().copied().unwrap_or(0) > 5_000_000 {
        // too large to enumerate; return trivial divisors (sound but may
        // miss roots; callers cross-check with Sturm counts)
        return vec![BigInt::one(), n.abs()];
    }
    let m = n_u.first().copied().unwrap_or(1).max(1);
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(BigInt::from(d));
            out.push(BigInt::from(m / d));
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// A ratio of polynomials in ϖ with positive denominator on the domain.
/// Covers both shapes the constraint systems need: (a + bϖ)/(2 + ϖ) and
/// plain rational-coefficient affine/constant expressions.
#[derive(Debug, Clone)]
pub struct LinFrac {
    pub num: Poly,
    pub den: Poly,
}

impl PartialEq for LinFrac {
    fn eq(&self, other: &LinFrac) -> bool {
        // as functions: cross-multiplied polynomials must coincide
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for LinFrac {}

impl LinFrac {
    /// (a + bϖ) / (c (2 + ϖ)) with integer a, b and positive integer c.
    pub fn over_two_plus_varpi(a: i64, b: i64, c: i64) -> LinFrac {
        assert!(c > 0);
        LinFrac {
            num: Poly::affine(rat_int(a), rat_int(b)),
            den: Poly::affine(rat_int(2 * c), rat_int(c)),
        }
    }

    pub fn constant(c: Rat) -> LinFrac {
        LinFrac {
            num: Poly::constant(c),
            den: Poly::constant(Rat::one()),
        }
    }

    /// c0 + c1 ϖ
    pub fn affine(c0: Rat, c1: Rat) -> LinFrac {
        LinFrac {
            num: Poly::affine(c0, c1),
            den: Poly::constant(Rat::one()),
        }
    }

    /// General exponent pair (α + βϖ)/(2 + ϖ) with rational α, β.
    pub fn exponent_pair(alpha: Rat, beta: Rat) -> LinFrac {
        LinFrac {
            num: Poly::affine(alpha, beta),
            den: Poly::affine(rat_int(2), rat_int(1)),
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.num.eval(x) / self.den.eval(x)
    }

    /// self - other as a single fraction with positive denominator.
    pub fn sub(&self, other: &LinFrac) -> LinFrac {
        LinFrac {
            num: self
                .num
                .mul(&other.den)
                .sub(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn add(&self, other: &LinFrac) -> LinFrac {
        LinFrac {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn scale(&self, k: &Rat) -> LinFrac {
        LinFrac {
            num: Poly::new(self.num.coeffs.iter().map(|c| c * k).collect()),
            den: self.den.clone(),
        }
    }

    /// Strictly increasing / decreasing / constant verification on (lo, hi):
    /// the derivative numerator must keep one sign, certified by a Sturm
    /// root count plus a sign probe at the midpoint.
    pub fn monotonicity(&self, lo: &Rat, hi: &Rat) -> Monotonicity {
        // d/dx (N/D) has numerator N'D - ND'
        let dnum = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        if dnum.is_zero() {
            return Monotonicity::Constant;
        }
        let roots_inside = dnum.count_roots(lo, hi);
        let hi_is_root = dnum.eval(hi).is_zero();
        let interior_roots = roots_inside - usize::from(hi_is_root);
        if interior_roots > 0 {
            return Monotonicity::Mixed;
        }
        let mid = (lo + hi) / rat_int(2);
        let s = dnum.eval(&mid);
        if s.is_positive() {
            Monotonicity::Increasing
        } else if s.is_negative() {
            Monotonicity::Decreasing
        } else {
            Monotonicity::Mixed
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_eval_and_arith() {
        let p = Poly::new(vec![rat_int(-2), rat_int(7), rat_int(3)]); // 3x² + 7x - 2
        assert_eq!(p.eval(&rat(1, 1)), rat_int(8));
        let d = p.derivative();
        assert_eq!(d.eval(&rat_int(0)), rat_int(7));
        let q = p.mul(&p);
        assert_eq!(q.eval(&rat(1, 2)), p.eval(&rat(1, 2)).pow(2));
    }

    #[test]
    fn sturm_counts_roots() {
        // 3ϖ² + 7ϖ - 2 has exactly one root in (0, 1), none in (0, 1/8)
        let p = Poly::new(vec![rat_int(-2), rat_int(7), rat_int(3)]);
        assert_eq!(p.count_roots(&rat_int(0), &rat_int(1)), 1);
        assert_eq!(p.count_roots(&rat_int(0), &rat(1, 8)), 0);
        // its root lies in (0.25, 0.26): the "4/15-scale" closing point
        assert_eq!(p.count_roots(&rat(25, 100), &rat(26, 100)), 1);
        // 1093ϖ - 50 root at 50/1093
        let q = Poly::affine(rat_int(-50), rat_int(1093));
        let roots = q.rational_roots_in(&rat_int(0), &rat(1, 8));
        assert_eq!(roots, vec![rat(50, 1093)]);
    }

    #[test]
    fn linfrac_shapes() {
        // δ lower bound 242ϖ/(75(2+ϖ)) at ϖ = 50/1093 equals 121/1677
        let lo = LinFrac::over_two_plus_varpi(0, 242, 75);
        assert_eq!(lo.eval(&rat(50, 1093)), rat(121, 1677));
        // δ upper bound 1/12 - ϖ/(2(2+ϖ)) there equals the same number
        let hi = LinFrac::constant(rat(1, 12)).sub(&LinFrac::over_two_plus_varpi(0, 1, 2));
        assert_eq!(hi.eval(&rat(50, 1093)), rat(121, 1677));
        // so their difference has the root exactly at 50/1093
        let diff = lo.sub(&hi);
        let roots = diff.num.rational_roots_in(&rat_int(0), &rat(1, 8));
        assert_eq!(roots, vec![rat(50, 1093)]);
    }

    #[test]
    fn monotonicity_detection() {
        let inc = LinFrac::over_two_plus_varpi(0, 1, 3); // ϖ/(3(2+ϖ))
        assert_eq!(
            inc.monotonicity(&rat_int(0), &rat(1, 8)),
            Monotonicity::Increasing
        );
        let dec = LinFrac::affine(rat(1, 6), rat(-1, 2));
        assert_eq!(
            dec.monotonicity(&rat_int(0), &rat(1, 8)),
            Monotonicity::Decreasing
        );
        let cst = LinFrac::constant(rat(1, 12));
        assert_eq!(
            cst.monotonicity(&rat_int(0), &rat(1, 8)),
            Monotonicity::Constant
        );
    }
}
