//! The Type-II exponent bookkeeping: the six-vector table of (Q, N, Y, D,
//! D₁, Q₀) exponents, its reduction to (Q, N, Y) exponents after the dyadic
//! suprema, the induced N-thresholds as exponents of X, the majorization
//! checks behind dropping two of the six terms, and the K-function of the
//! underlying exponential-sum bound.

use num_traits::Zero;

use super::lp::Lp;
use super::ratfn::{rat, rat_int, LinFrac, Rat};
use crate::error::{Error, Result};

/// A rational affine function c + t·θ of the spectral-gap parameter θ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffTheta {
    pub c: Rat,
    pub t: Rat,
}

impl AffTheta {
    fn new(c: Rat, t: Rat) -> AffTheta {
        AffTheta { c, t }
    }

    pub fn eval(&self, theta: &Rat) -> Rat {
        &self.c + &self.t * theta
    }
}

fn aff(cn: i64, cd: i64, tn: i64, td: i64) -> AffTheta {
    AffTheta::new(rat(cn, cd), rat(tn, td))
}

/// Exponents of (Q, N, Y, D, D₁, Q₀), each affine in θ.
pub type ExponentVector = [AffTheta; 6];

/// The six-term exponent table of the dispersion remainder.
pub fn eta_table() -> [ExponentVector; 6] {
    [
        // k = 1
        [
            aff(1, 1, 0, 1),
            aff(3, 1, 0, 1),
            aff(-1, 2, 0, 1),
            aff(1, 2, 0, 1),
            aff(3, 2, 0, 1),
            aff(-3, 2, 0, 1),
        ],
        // k = 2
        [
            aff(1, 1, 0, 1),
            aff(7, 2, 0, 1),
            aff(-1, 2, 0, 1),
            aff(0, 1, 0, 1),
            aff(3, 2, 0, 1),
            aff(-2, 1, 0, 1),
        ],
        // k = 3
        [
            aff(1, 1, 2, 1),
            aff(3, 1, -3, 1),
            aff(-1, 2, 0, 1),
            aff(0, 1, 1, 1),
            aff(1, 1, -1, 1),
            aff(-3, 2, -2, 1),
        ],
        // k = 4
        [
            aff(1, 1, 2, 1),
            aff(7, 2, -3, 1),
            aff(-1, 2, 0, 1),
            aff(-1, 2, 1, 1),
            aff(1, 1, -1, 1),
            aff(-2, 1, -2, 1),
        ],
        // k = 5
        [
            aff(1, 1, 0, 1),
            aff(5, 2, 0, 1),
            aff(-1, 1, 0, 1),
            aff(1, 2, 0, 1),
            aff(3, 2, 0, 1),
            aff(-5, 2, 0, 1),
        ],
        // k = 6
        [
            aff(1, 1, 0, 1),
            aff(3, 1, 0, 1),
            aff(-1, 1, 0, 1),
            aff(0, 1, 0, 1),
            aff(3, 2, 0, 1),
            aff(-3, 1, 0, 1),
        ],
    ]
}

/// Reduce one six-exponent term to (Q, N, Y) exponents at a fixed rational θ:
/// the N-normalization shifts the N-exponent by -1 and the dyadic suprema
/// over Q₀ ≤ Y and D·D₁ ≤ Y contribute max(0, η₆+2) + max(0, η₄+3, η₅+2)
/// to the Y-exponent.
pub fn reduced_qny(k: usize, theta: &Rat) -> Result<[Rat; 3]> {
    if !(1..=6).contains(&k) {
        return Err(Error::Domain(format!("term index {k} out of 1..=6")));
    }
    let eta = &eta_table()[k - 1];
    let e: Vec<Rat> = eta.iter().map(|a| a.eval(theta)).collect();
    let zero = Rat::zero();
    let m1 = (&e[5] + rat_int(2)).max(zero.clone());
    let m2 = (&e[3] + rat_int(3)).max(&e[4] + rat_int(2)).max(zero);
    Ok([
        e[0].clone(),
        &e[1] - rat_int(1),
        &e[2] + rat_int(1) + m1 + m2,
    ])
}

/// The four retained (Q, N, Y) exponent triples in the order the bound
/// displays them; k = 5, 6 are majorized away (see `majorization_check`).
pub fn theta_table(theta: &Rat) -> [[Rat; 3]; 4] {
    [
        [rat_int(1), rat_int(2), rat(9, 2)],
        [rat_int(1), rat(5, 2), rat_int(4)],
        [
            rat_int(1) + rat_int(2) * theta,
            rat_int(2) - rat_int(3) * theta,
            rat_int(4) - theta,
        ],
        [
            rat_int(1) + rat_int(2) * theta,
            rat(5, 2) - rat_int(3) * theta,
            rat(7, 2) - theta,
        ],
    ]
}

/// N-thresholds as exponents of X: each retained triple (e_Q, e_N, e_Y)
/// with e_N > 1 forces N ≤ Q^{(2-e_Q)/(e_N-1)} Y^{-e_Y/(e_N-1)}, which under
/// Q = X^{1/(2+ϖ)}, Y = X^{ϖ/(2+ϖ)} is the linear-fractional exponent
/// (α + βϖ)/(2 + ϖ). Returned in the display order k = 1, 2, 4, 3 so that
/// the third and fourth entries carry the 75- and 43-denominator forms.
pub fn tii_thresholds(theta: &Rat) -> Result<Vec<LinFrac>> {
    if theta < &Rat::zero() || theta >= &rat(1, 3) {
        return Err(Error::Domain(format!(
            "θ must lie in [0, 1/3), got {theta}"
        )));
    }
    let mut out = Vec::with_capacity(4);
    for &k in &[1usize, 2, 4, 3] {
        let [eq, en, ey] = reduced_qny(k, theta)?;
        let denom = &en - rat_int(1);
        if denom <= Rat::zero() {
            return Err(Error::Domain(format!(
                "term {k} has N-exponent {en} ≤ 1 at θ = {theta}"
            )));
        }
        let alpha = (rat_int(2) - eq) / &denom;
        let beta = -(ey / denom);
        out.push(LinFrac::exponent_pair(alpha, beta));
    }
    Ok(out)
}

/// The cone of admissible log-scales: all six variables nonnegative,
/// log Q₀ ≤ log Y and log D + log D₁ ≤ log Y.
pub struct MajorizationRegion {
    pub ineqs: Vec<(Vec<Rat>, Rat)>,
}

impl Default for MajorizationRegion {
    fn default() -> Self {
        let mut ineqs = Vec::new();
        for i in 0..6 {
            let mut row = vec![Rat::zero(); 6];
            row[i] = rat_int(-1);
            ineqs.push((row, Rat::zero())); // x_i >= 0
        }
        // Q0 <= Y  (x5 - x2 <= 0)
        let mut row = vec![Rat::zero(); 6];
        row[5] = rat_int(1);
        row[2] = rat_int(-1);
        ineqs.push((row, Rat::zero()));
        // D + D1 <= Y  (x3 + x4 - x2 <= 0)
        let mut row = vec![Rat::zero(); 6];
        row[3] = rat_int(1);
        row[4] = rat_int(1);
        row[2] = rat_int(-1);
        ineqs.push((row, Rat::zero()));
        MajorizationRegion { ineqs }
    }
}

/// Outcome of a majorization check, with the certificate direction when the
/// answer is "not majorized".
#[derive(Debug, Clone)]
pub struct MajorizationVerdict {
    pub majorized: bool,
    pub ascent_direction: Option<Vec<Rat>>,
}

/// Is the k-th term dominated by the first over the whole region?
/// Decided exactly: maximize (η_k - η_1)·x over the cone cut by Σx = 1.
pub fn majorization_check(
    k: usize,
    region: &MajorizationRegion,
    theta: &Rat,
) -> Result<MajorizationVerdict> {
    if !(2..=6).contains(&k) {
        return Err(Error::Domain(format!("term index {k} must be in 2..=6")));
    }
    let table = eta_table();
    let objective: Vec<Rat> = (0..6)
        .map(|i| table[k - 1][i].eval(theta) - table[0][i].eval(theta))
        .collect();
    let lp = Lp {
        n: 6,
        ineqs: region.ineqs.clone(),
        eqs: vec![(vec![rat_int(1); 6], rat_int(1))],
    };
    match lp.maximize(&objective) {
        None => Err(Error::Indeterminate(
            "majorization region came back empty".into(),
        )),
        Some((v, x)) => {
            if v <= Rat::zero() {
                Ok(MajorizationVerdict {
                    majorized: true,
                    ascent_direction: None,
                })
            } else {
                Ok(MajorizationVerdict {
                    majorized: false,
                    ascent_direction: Some(x),
                })
            }
        }
    }
}

/// K(C, D, N, R, S)² = qCS(RS+N)(C+RD) + C^{1+4θ} DS ((RS+N)R)^{1-2θ} + D²NR.
pub fn k_function(c: f64, d: f64, n: f64, r: f64, s: f64, q: f64, theta: &Rat) -> Result<f64> {
    if [c, d, n, r, s, q].iter().any(|&v| v <= 0.0) {
        return Err(Error::Domain("K-function arguments must be positive".into()));
    }
    let th = rat_to_f64(theta);
    let first = q * c * s * (r * s + n) * (c + r * d);
    let second = c.powf(1.0 + 4.0 * th) * d * s * ((r * s + n) * r).powf(1.0 - 2.0 * th);
    let third = d * d * n * r;
    Ok((first + second + third).sqrt())
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("rational fits in f64")
}
