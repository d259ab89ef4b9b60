//! Family statistics: the weighted 1-level density of low-lying zeros, the
//! per-character explicit-formula balance, the prime-side sum S_κ(Q)
//! computed along two independent routes, and empirical non-vanishing
//! proportions at the central point.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, SieveTable};
use crate::bandlimited::{FejerKernel, SmoothBump};
use crate::characters::{primitive_characters, DirichletCharacter, PrimitiveFamily};
use crate::error::{Error, Result};
use crate::lfunc::CompletedLContext;
use crate::special::digamma;
use crate::util::{adaptive_simpson_real, tree_sum};

/// One modulus row of the family statistic.
#[derive(Debug, Clone, Serialize)]
pub struct ModulusRow {
    pub q: u64,
    pub n_primitive: usize,
    pub weight: f64,
    pub lhs_q: f64,
}

/// The family 1-level density report: zero-side statistic against the
/// φ̂(0)-weighted family size.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub q_scale: f64,
    pub nu: f64,
    pub phi_support: (f64, f64),
    pub phi_plateau: (f64, f64),
    pub t_height: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub tail_estimate: f64,
    pub rows: Vec<ModulusRow>,
    /// characters dropped for failing certification (empty when strict)
    pub excluded: Vec<String>,
}

/// Zero side of eq-style statistic for one character: Σ_{|γ| ≤ T} φ(Lγ/2π).
fn zero_side_sum(ordinates: &[f64], phi: &FejerKernel, log_q_scale: f64) -> f64 {
    let scale = log_q_scale / (2.0 * std::f64::consts::PI);
    let terms: Vec<f64> = ordinates.iter().map(|g| phi.eval(scale * g)).collect();
    tree_sum(&terms)
}

/// Fejér tail of the zero sum beyond T for one modulus, estimated from the
/// zero-counting density (1/π) log(q(t+3)/2π) with a 25% slack factor.
fn zero_tail_estimate(q: u64, t_height: f64, phi: &FejerKernel, log_q_scale: f64) -> f64 {
    let scale = log_q_scale / (2.0 * std::f64::consts::PI);
    let density = |t: f64| (q as f64 * (t + 3.0) / (2.0 * std::f64::consts::PI)).ln() / std::f64::consts::PI;
    let f = |t: f64| phi.eval(scale * t) * density(t);
    let far = 100.0 * t_height;
    let main = adaptive_simpson_real(&f, t_height, far, 1e-10, 40).unwrap_or(0.0);
    // beyond 100T: φ(x) ≤ 1/(πνx)²
    let nu = phi.nu;
    let rest = (2.0 / (nu * log_q_scale)).powi(2)
        * ((q as f64 * far).ln() + 1.0)
        / far
        * (2.0 * std::f64::consts::PI);
    1.25 * (main + rest)
}

/// The 1-level density statistic over the Φ-weighted family.
///
/// `strict` propagates any certification failure as an error naming the
/// character; otherwise failing characters are excluded and listed.
pub fn one_level_density(
    q_scale: f64,
    phi: &FejerKernel,
    big_phi: &SmoothBump,
    t_height: f64,
    strict: bool,
) -> Result<DensityReport> {
    if q_scale < 4.0 {
        return Err(Error::Domain(format!("family scale Q = {q_scale} too small")));
    }
    let q_lo = (big_phi.support.0 * q_scale).floor().max(3.0) as u64;
    let q_hi = (big_phi.support.1 * q_scale).ceil() as u64;
    let family = PrimitiveFamily::collect(q_lo, q_hi, |q| big_phi.eval(q as f64 / q_scale))?;
    let log_q_scale = q_scale.ln();

    // flatten, compute per character in parallel, then reduce in canonical
    // order so scheduling cannot change the sums
    let jobs: Vec<(u64, f64, DirichletCharacter)> = family
        .moduli
        .iter()
        .flat_map(|m| m.chars.iter().map(move |c| (m.q, m.weight, c.clone())))
        .collect();
    let per_char: Vec<(u64, f64, std::result::Result<f64, Error>)> = jobs
        .par_iter()
        .map(|(q, w, chi)| {
            let out = CompletedLContext::new(chi.clone())
                .and_then(|ctx| ctx.find_zeros(t_height))
                .map(|zs| zero_side_sum(&zs.ordinates, phi, log_q_scale));
            (*q, *w, out)
        })
        .collect();

    let mut rows: Vec<ModulusRow> = Vec::new();
    let mut excluded = Vec::new();
    let mut lhs_terms = Vec::new();
    let mut rhs = 0.0;
    let mut tail = 0.0;
    let mut idx = 0usize;
    for m in &family.moduli {
        let mut lhs_q = 0.0;
        let mut kept = 0usize;
        for chi in &m.chars {
            let (q, w, out) = &per_char[idx];
            debug_assert_eq!(*q, m.q);
            idx += 1;
            match out {
                Ok(v) => {
                    lhs_q += v;
                    kept += 1;
                }
                Err(e) => {
                    if strict {
                        return Err(e.clone());
                    }
                    excluded.push(chi.id());
                }
            }
            let _ = w;
        }
        rows.push(ModulusRow {
            q: m.q,
            n_primitive: m.chars.len(),
            weight: m.weight,
            lhs_q,
        });
        lhs_terms.push(m.weight * lhs_q);
        rhs += phi.hat(0.0) * m.weight * kept as f64;
        tail += m.weight * kept as f64 * zero_tail_estimate(m.q, t_height, phi, log_q_scale);
    }
    let lhs = tree_sum(&lhs_terms);
    Ok(DensityReport {
        q_scale,
        nu: phi.nu,
        phi_support: big_phi.support,
        phi_plateau: big_phi.plateau,
        t_height,
        lhs,
        rhs,
        ratio: lhs / rhs,
        tail_estimate: tail,
        rows,
        excluded,
    })
}

/// The φ̂(0)-weighted family size recomputed through the divisor formula
/// for the primitive count; must agree exactly with the enumeration route.
pub fn main_term_by_divisor_formula(
    q_scale: f64,
    phi: &FejerKernel,
    big_phi: &SmoothBump,
) -> f64 {
    let q_lo = (big_phi.support.0 * q_scale).floor().max(3.0) as u64;
    let q_hi = (big_phi.support.1 * q_scale).ceil() as u64;
    let mut acc = 0.0;
    for q in q_lo..=q_hi {
        let w = big_phi.eval(q as f64 / q_scale);
        if w == 0.0 {
            continue;
        }
        acc += phi.hat(0.0) * w * crate::characters::primitive_count(q) as f64;
    }
    acc
}

/// Prime side of the per-character balance (without archimedean terms):
/// φ̂(0) log q / log Q - (1/log Q) Σ_n (χ(n)+χ̄(n)) Λ(n) φ̂(log n / log Q)/√n.
pub fn explicit_prime_side(
    chi: &DirichletCharacter,
    q_scale: f64,
    phi: &FejerKernel,
    sieve: &SieveTable,
) -> Result<f64> {
    if chi.modulus() < 2 || !chi.is_primitive() {
        return Err(Error::Domain(format!(
            "prime side needs a primitive character of modulus > 1, got {}",
            chi.id()
        )));
    }
    let log_q_scale = q_scale.ln();
    let n_max = (q_scale.powf(phi.nu)).floor() as usize;
    if n_max > sieve.limit {
        return Err(Error::Resource(format!(
            "prime side needs the sieve up to Q^ν = {n_max}, table stops at {}",
            sieve.limit
        )));
    }
    let table = chi.value_table();
    let q = chi.modulus() as usize;
    let mut terms = Vec::new();
    for n in 2..=n_max {
        let lam = sieve.lambda[n];
        if lam == 0.0 {
            continue;
        }
        let c = table[n % q];
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let hat = phi.hat((n as f64).ln() / log_q_scale);
        if hat == 0.0 {
            continue;
        }
        terms.push(2.0 * c.re * lam / (n as f64).sqrt() * hat);
    }
    Ok(phi.hat(0.0) * (chi.modulus() as f64).ln() / log_q_scale
        - tree_sum(&terms) / log_q_scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BalanceMode {
    /// prime side only; the archimedean block is absorbed into O(1/log Q)
    Approximate,
    /// archimedean digamma integral evaluated, closing the formula to the
    /// truncation tail
    Exact,
}

#[derive(Debug, Clone, Serialize)]
pub struct BalanceReport {
    pub q: u64,
    pub char_id: String,
    pub mode: BalanceMode,
    pub zero_side: f64,
    pub prime_side: f64,
    pub residual: f64,
    pub zero_tail_estimate: f64,
}

/// The archimedean block of the explicit formula:
/// (1/L) ∫ φ(x) [log(q/π) + Re ψ(1/4 + a/2 + iπx/L)] dx
/// with the |x| > X Fejér tail appended in closed form.
pub fn archimedean_term(q: u64, parity: u8, q_scale: f64, phi: &FejerKernel) -> f64 {
    let lg = q_scale.ln();
    let base = 0.25 + 0.5 * parity as f64;
    let g = |x: f64| {
        let psi = digamma(Complex64::new(base, std::f64::consts::PI * x / lg)).re;
        phi.eval(x) * ((q as f64 / std::f64::consts::PI).ln() + psi)
    };
    let x_big = 4000.0f64;
    let mut main = 0.0;
    let mut x0 = 0.0;
    while x0 < x_big {
        let x1 = (x0 + 8.0).min(x_big);
        main += adaptive_simpson_real(&g, x0, x1, 1e-9, 36).expect("archimedean integrand is smooth");
        x0 = x1;
    }
    main *= 2.0; // even integrand
    // tail: φ(x) ≈ (1 - cos(2πνx))/(2π²ν²x²) against the slowly growing
    // bracket ≈ log(q/π) + log(πx/L); the oscillatory part is O(x^{-2})
    let nu = phi.nu;
    let c = (q as f64 / std::f64::consts::PI).ln();
    let tail = ((c + (std::f64::consts::PI * x_big / lg).ln()) + 1.0)
        / (std::f64::consts::PI * std::f64::consts::PI * nu * nu * x_big)
        * 1.0;
    (main + tail) / lg
}

/// Explicit-formula balance for one character: the zero sum against the
/// prime/archimedean side, with the zero-truncation tail reported.
pub fn explicit_balance(
    chi: &DirichletCharacter,
    q_scale: f64,
    phi: &FejerKernel,
    t_height: f64,
    mode: BalanceMode,
    sieve: &SieveTable,
) -> Result<BalanceReport> {
    let ctx = CompletedLContext::new(chi.clone())?;
    let zeros = ctx.find_zeros(t_height)?;
    let lg = q_scale.ln();
    let zero_side = zero_side_sum(&zeros.ordinates, phi, lg);
    let prime_side = match mode {
        BalanceMode::Approximate => explicit_prime_side(chi, q_scale, phi, sieve)?,
        BalanceMode::Exact => {
            let arch = archimedean_term(chi.modulus(), chi.parity, q_scale, phi);
            let approx = explicit_prime_side(chi, q_scale, phi, sieve)?;
            // swap the φ̂(0) log(q)/L head for the full archimedean block
            approx - phi.hat(0.0) * (chi.modulus() as f64).ln() / lg + arch
        }
    };
    Ok(BalanceReport {
        q: chi.modulus(),
        char_id: chi.id(),
        mode,
        zero_side,
        prime_side,
        residual: zero_side - prime_side,
        zero_tail_estimate: zero_tail_estimate(chi.modulus(), t_height, phi, lg),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SKappaReport {
    pub q_scale: f64,
    pub nu: f64,
    pub direct: f64,
    pub orthog: f64,
    pub difference: f64,
}

/// S_κ(Q) computed two ways:
/// - direct: enumerate primitive characters and sum their exact values;
/// - orthog: the divisor-weighted congruence rearrangement
///   (2/L) Σ_{v,w} Ψ(vw/Q) (μ(v)/v)(φ(w)/w) Σ_{n ≡ 1 (w), (n,v)=1} Λ(n) φ̂(log n/L)/√n.
///
/// The rearrangement needs the coprimality condition (n, v) = 1: a prime
/// power n = p^k with p | v contributes zero on the character side. With it,
/// the two routes are algebraically identical for every finite truncation.
pub fn s_kappa_two_ways(
    q_scale: f64,
    phi: &FejerKernel,
    big_phi: &SmoothBump,
    sieve: &SieveTable,
) -> Result<SKappaReport> {
    let lg = q_scale.ln();
    let n_max = q_scale.powf(phi.nu).floor() as usize;
    let need = n_max.max((big_phi.support.1 * q_scale).ceil() as usize);
    if need > sieve.limit {
        return Err(Error::Resource(format!(
            "S_κ needs the sieve up to max(Q^ν, weighted-modulus range) = {need}, table stops at {}",
            sieve.limit
        )));
    }
    // the weight is Ψ(x) = Φ(x)/x
    let psi = |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            big_phi.eval(x) / x
        }
    };
    let q_lo = (big_phi.support.0 * q_scale).floor().max(1.0) as u64;
    let q_hi = (big_phi.support.1 * q_scale).ceil() as u64;

    // prime-power weights shared by both routes
    let mut pw: Vec<(usize, f64)> = Vec::new();
    for n in 2..=n_max {
        let lam = sieve.lambda[n];
        if lam == 0.0 {
            continue;
        }
        let hat = phi.hat((n as f64).ln() / lg);
        if hat == 0.0 {
            continue;
        }
        pw.push((n, lam / (n as f64).sqrt() * hat));
    }

    // direct route: enumerated primitive characters
    let moduli: Vec<u64> = (q_lo..=q_hi)
        .filter(|&q| psi(q as f64 / q_scale) != 0.0)
        .collect();
    let per_q: Vec<f64> = moduli
        .par_iter()
        .map(|&q| {
            let prims = primitive_characters(q).expect("modulus in range");
            if prims.is_empty() {
                return 0.0;
            }
            let mut acc = 0.0;
            for chi in &prims {
                let table = chi.value_table();
                for &(n, w) in &pw {
                    let c = table[n % q as usize];
                    if c.norm_sqr() != 0.0 {
                        acc += 2.0 * c.re * w;
                    }
                }
            }
            psi(q as f64 / q_scale) / q as f64 * acc
        })
        .collect();
    let direct = tree_sum(&per_q) / lg;

    // orthogonality route: congruence sums with the coprimality condition
    let mut orthog_terms = Vec::new();
    for w in 1..=q_hi {
        let phi_w = sieve.phi[w as usize] as f64;
        let mut inner = Vec::new();
        for v in 1..=(q_hi / w).max(1) {
            let mu = sieve.mobius[v as usize];
            if mu == 0 {
                continue;
            }
            let weight = psi((v * w) as f64 / q_scale);
            if weight == 0.0 {
                continue;
            }
            let mut congr = 0.0;
            for &(n, wt) in &pw {
                if n as u64 % w == 1 % w && arith::gcd(n as u64, v) == 1 {
                    congr += wt;
                }
            }
            inner.push(weight * mu as f64 / v as f64 * congr);
        }
        if !inner.is_empty() {
            orthog_terms.push(phi_w / w as f64 * tree_sum(&inner));
        }
    }
    let orthog = 2.0 * tree_sum(&orthog_terms) / lg;

    Ok(SKappaReport {
        q_scale,
        nu: phi.nu,
        direct,
        orthog,
        difference: direct - orthog,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NonvanishingReport {
    pub q_scale: f64,
    pub threshold: f64,
    pub count_nonvanishing: usize,
    pub total: usize,
    pub proportion: f64,
    /// Σ_χ max(0, 1 - Σ_γ φ((log Q/2π) γ)) / total with Fejér ν = 2 + κ
    pub density_side_bound: f64,
    pub kappa_nu: f64,
    pub bound_height: f64,
    pub excluded: Vec<String>,
    pub note: String,
}

/// Empirical non-vanishing proportion over primitive characters with
/// modulus in [Q/2, Q], plus the zero-side lower bound that the Fejér
/// inequality 1 - Σ_γ φ ≤ 1(L(1/2,χ) ≠ 0) yields per character.
pub fn nonvanishing_proportion(
    q_scale: f64,
    threshold: f64,
    nu: f64,
    bound_height: f64,
    strict: bool,
) -> Result<NonvanishingReport> {
    let q_lo = (q_scale / 2.0).ceil() as u64;
    let q_hi = q_scale.floor() as u64;
    if q_lo < 3 {
        return Err(Error::Domain(format!("family window [{q_lo}, {q_hi}] too small")));
    }
    let phi = FejerKernel::new(nu)?;
    let lg = q_scale.ln();
    let jobs: Vec<DirichletCharacter> = (q_lo..=q_hi)
        .flat_map(|q| primitive_characters(q).expect("modulus in range"))
        .collect();
    let results: Vec<(String, std::result::Result<(f64, f64), Error>)> = jobs
        .par_iter()
        .map(|chi| {
            let id = chi.id();
            let out = CompletedLContext::new(chi.clone()).and_then(|ctx| {
                let central = ctx.l_eval(Complex64::new(0.5, 0.0))?;
                let zeros = ctx.find_zeros(bound_height)?;
                let sum = zero_side_sum(&zeros.ordinates, &phi, lg);
                Ok((central.norm(), (1.0 - sum).max(0.0)))
            });
            (id, out)
        })
        .collect();
    let mut count = 0usize;
    let mut total = 0usize;
    let mut bound_terms = Vec::new();
    let mut excluded = Vec::new();
    for (id, r) in results {
        match r {
            Ok((central_abs, bound)) => {
                total += 1;
                if central_abs > threshold {
                    count += 1;
                }
                bound_terms.push(bound);
            }
            Err(e) => {
                if strict {
                    return Err(e);
                }
                excluded.push(id);
            }
        }
    }
    if total == 0 {
        return Err(Error::Domain("empty family".into()));
    }
    let density_side_bound = tree_sum(&bound_terms) / total as f64;
    let proportion = count as f64 / total as f64;
    Ok(NonvanishingReport {
        q_scale,
        threshold,
        count_nonvanishing: count,
        total,
        proportion,
        density_side_bound,
        kappa_nu: nu,
        bound_height,
        excluded,
        note: crate::exponents::nonvanishing_denominator_note(),
    })
}
