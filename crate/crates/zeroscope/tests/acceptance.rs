//! Acceptance suite: one test per numbered criterion, each printing a
//! PASS/FAIL line with the measured quantities before asserting them.
//!
//! Criterion 12 is a desk-scale sanity *trend* for an asymptotic statement;
//! its band is asserted as stated and the measured ratios are printed either
//! way so the report is honest about what a finite family can show.

use num_complex::Complex64;
use rayon::prelude::*;

use zeroscope::arith;
use zeroscope::bandlimited::{dyadic_partition_value, FejerKernel, SmoothBump};
use zeroscope::characters::{
    enumerate_characters, gauss_sum, primitive_characters, CharValue,
};
use zeroscope::density::{
    explicit_balance, one_level_density, s_kappa_two_ways, BalanceMode,
};
use zeroscope::dispersion::{
    classify, heath_brown_table, weil_violation, witness_is_valid, ExponentTuple,
};
use zeroscope::exponents::{
    nonvanishing_bound_limit, nonvanishing_denominator_note, rat, rat_to_f64, tii_thresholds,
    ConstraintSystem, LinFrac, Param, Rat,
};
use zeroscope::lfunc::CompletedLContext;
use zeroscope::util::SplitMix64;

#[test]
fn criterion_01_exponent_synthesis() {
    let t0 = std::time::Instant::now();
    let sys = ConstraintSystem::paper_system();
    let report = sys.sup_varpi().expect("solver");
    let elapsed = t0.elapsed();
    let pass = report.sup == rat(50, 1093) && report.binding == Some(Param::Delta);
    println!(
        "criterion 1: {} — sup of the feasibility parameter = {} (binding: {:?}), {:?}",
        if pass { "PASS" } else { "FAIL" },
        report.sup,
        report.binding,
        elapsed
    );
    assert_eq!(report.sup, rat(50, 1093));
    assert_eq!(report.binding, Some(Param::Delta));
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
}

#[test]
fn criterion_02_nonvanishing_constant() {
    let t0 = std::time::Instant::now();
    let limit = nonvanishing_bound_limit();
    let as_f64 = rat_to_f64(&limit);
    let note = nonvanishing_denominator_note();
    let elapsed = t0.elapsed();
    let pass = limit == rat(1143, 2236) && as_f64 > 0.51118 && note.contains("2235");
    println!(
        "criterion 2: {} — limiting non-vanishing bound = {} ≈ {:.7} (> 0.51118), note emitted: {}",
        if pass { "PASS" } else { "FAIL" },
        limit,
        as_f64,
        note.contains("2235") && note.contains("2236"),
    );
    assert_eq!(limit, rat(1143, 2236));
    assert!(as_f64 > 0.51118);
    assert!(note.contains("2235") && note.contains("2236"));
    assert!(elapsed.as_secs_f64() < 1.0);
}

#[test]
fn criterion_03_type_ii_threshold_reproduction() {
    let t0 = std::time::Instant::now();
    let entries = tii_thresholds(&rat(7, 64)).expect("thresholds");
    let want = [
        LinFrac::over_two_plus_varpi(2, -9, 2),
        LinFrac::over_two_plus_varpi(50, -249, 43),
        LinFrac::over_two_plus_varpi(50, -217, 75),
    ];
    let got = [&entries[0], &entries[3], &entries[2]];
    let thresholds_ok = got.iter().zip(want.iter()).all(|(g, w)| **g == *w);

    // ρ-bound re-derivation: R⁵N ≤ Q², N ≤ X^{1/3}, R = X^ρ
    let rederived = LinFrac::exponent_pair(rat(2, 1), rat(0, 1))
        .sub(&LinFrac::constant(rat(1, 3)))
        .scale(&rat(1, 5));
    let displayed = LinFrac::over_two_plus_varpi(4, -1, 15);
    let rho_ok = rederived == displayed;
    let elapsed = t0.elapsed();
    println!(
        "criterion 3: {} — X-exponents at the Kim–Sarnak point reproduced: {}, ρ-bound re-derived: {}, {:?}",
        if thresholds_ok && rho_ok { "PASS" } else { "FAIL" },
        thresholds_ok,
        rho_ok,
        elapsed
    );
    assert!(thresholds_ok);
    assert!(rho_ok);
    assert!(elapsed.as_secs_f64() < 1.0);
}

#[test]
fn criterion_04_orthogonality_oracle() {
    let t0 = std::time::Instant::now();
    let big_phi = SmoothBump::standard_phi();
    let mut worst: f64 = 0.0;
    for (q_scale, nu) in [(20.0f64, 1.0f64), (50.0, 1.0), (50.0, 1.5), (100.0, 1.0)] {
        let phi = FejerKernel::new(nu).unwrap();
        let need = q_scale.powf(nu).max(2.3 * q_scale).ceil() as usize + 8;
        let sieve = arith::build_sieve(need).unwrap();
        let rep = s_kappa_two_ways(q_scale, &phi, &big_phi, &sieve).unwrap();
        let rel = rep.difference.abs() / rep.direct.abs().max(1.0);
        worst = worst.max(rel);
        assert!(
            rel < 1e-9,
            "(Q={q_scale}, ν={nu}): direct {} vs orthog {}",
            rep.direct,
            rep.orthog
        );
    }
    let elapsed = t0.elapsed();
    println!(
        "criterion 4: PASS — S_κ two-route agreement, worst relative difference {worst:.3e}, {elapsed:?}"
    );
    assert!(elapsed.as_secs_f64() < 60.0);
}

#[test]
fn criterion_05_explicit_formula_closure() {
    let t0 = std::time::Instant::now();
    let phi = FejerKernel::new(1.0).unwrap();
    let jobs: Vec<_> = (3..=50u64)
        .flat_map(|q| primitive_characters(q).unwrap())
        .collect();
    let total = jobs.len();
    let results: Vec<(String, f64, f64)> = jobs
        .par_iter()
        .map(|chi| {
            let q = chi.modulus();
            let sieve = arith::build_sieve(64).unwrap();
            let rep = explicit_balance(chi, q as f64, &phi, 50.0, BalanceMode::Exact, &sieve)
                .unwrap_or_else(|e| panic!("balance failed for {}: {e}", chi.id()));
            (rep.char_id.clone(), rep.residual, rep.zero_tail_estimate)
        })
        .collect();
    let mut worst_margin = f64::NEG_INFINITY;
    let mut worst_id = String::new();
    for (id, residual, tail) in &results {
        let margin = residual.abs() - (1e-3 + tail);
        if margin > worst_margin {
            worst_margin = margin;
            worst_id = id.clone();
        }
        assert!(
            residual.abs() <= 1e-3 + tail,
            "{id}: residual {residual} vs budget {}",
            1e-3 + tail
        );
    }
    let elapsed = t0.elapsed();
    println!(
        "criterion 5: PASS — explicit formula closes (exact mode) for all {total} primitive characters q ≤ 50; worst margin {worst_margin:.3e} at {worst_id}, {elapsed:?}"
    );
    assert!(elapsed.as_secs_f64() < 600.0);
}

#[test]
fn criterion_06_zero_certification_and_stability() {
    let t0 = std::time::Instant::now();
    let jobs: Vec<_> = (3..=50u64)
        .flat_map(|q| primitive_characters(q).unwrap())
        .collect();
    let total = jobs.len();
    let worst_shift: f64 = jobs
        .par_iter()
        .map(|chi| {
            let ctx = CompletedLContext::new(chi.clone()).unwrap();
            let a = ctx
                .find_zeros(30.0)
                .unwrap_or_else(|e| panic!("certification failed for {}: {e}", chi.id()));
            assert!(a.certificate.matched, "{} unmatched", chi.id());
            // counting-heuristic sanity band
            let est = zeroscope::lfunc::zero_count_estimate(chi.modulus(), 30.0);
            assert!(
                (a.ordinates.len() as f64 - est).abs() <= 3.0,
                "{}: {} zeros vs estimate {est:.2}",
                chi.id(),
                a.ordinates.len()
            );
            let step = 0.5 * 0.25f64
                .min(std::f64::consts::PI / (chi.modulus() as f64 * 33.0).ln());
            let b = ctx.find_zeros_with_step(30.0, Some(step)).unwrap();
            assert_eq!(
                a.ordinates.len(),
                b.ordinates.len(),
                "{}: zero count changed under grid halving",
                chi.id()
            );
            a.ordinates
                .iter()
                .zip(b.ordinates.iter())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let elapsed = t0.elapsed();
    let pass = worst_shift < 1e-9;
    println!(
        "criterion 6: {} — {total} characters certified (sign changes = winding) at T = 30; worst ordinate shift under grid halving {worst_shift:.3e}, {elapsed:?}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "ordinate stability {worst_shift:.3e} exceeds 1e-9");
    assert!(elapsed.as_secs_f64() < 600.0);
}

#[test]
fn criterion_07_character_layer() {
    let t0 = std::time::Instant::now();
    // Gauss sums: |τ(χ)| = √q for every primitive χ, q ≤ 500
    let worst_gauss: f64 = (3..=500u64)
        .into_par_iter()
        .map(|q| {
            let mut worst = 0.0f64;
            for chi in primitive_characters(q).unwrap() {
                let t = gauss_sum(&chi);
                worst = worst.max((t.norm() - (q as f64).sqrt()).abs());
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst_gauss < 1e-10, "Gauss modulus off by {worst_gauss:.3e}");

    // primitive character sums: divisor identity vs direct enumeration
    for q in 1..=200u64 {
        let prim = primitive_characters(q).unwrap();
        for n in 1..q.max(2) {
            if arith::gcd(n, q.max(1)) != 1 {
                continue;
            }
            let direct: Complex64 = prim.iter().map(|c| c.eval_u64(n).to_complex()).sum();
            let formula = zeroscope::characters::primitive_character_sum(q, n as i64).unwrap();
            assert!(
                (direct.re - formula as f64).abs() < 1e-9 && direct.im.abs() < 1e-9,
                "sum mismatch q={q} n={n}"
            );
        }
    }

    // conductors: structure formula vs brute force
    for q in 1..=200u64 {
        for chi in enumerate_characters(q).unwrap() {
            let brute = conductor_brute_force(&chi);
            assert_eq!(chi.conductor, brute, "conductor mismatch at {}", chi.id());
        }
    }
    let elapsed = t0.elapsed();
    println!(
        "criterion 7: PASS — Gauss |τ| = √q to {worst_gauss:.3e} (q ≤ 500); primitive sums and conductors exact (q ≤ 200), {elapsed:?}"
    );
    assert!(elapsed.as_secs_f64() < 300.0);
}

fn conductor_brute_force(chi: &zeroscope::characters::DirichletCharacter) -> u64 {
    let q = chi.modulus();
    let divisors = {
        let mut d: Vec<u64> = (1..=q).filter(|d| q % d == 0).collect();
        d.sort_unstable();
        d
    };
    'outer: for &d in &divisors {
        let mut class_val: Vec<Option<CharValue>> = vec![None; d as usize];
        for n in 0..q.max(1) {
            let v = chi.eval_u64(n);
            if v == CharValue::Zero {
                continue;
            }
            let r = (n % d) as usize;
            match class_val[r] {
                None => class_val[r] = Some(v),
                Some(prev) => {
                    if prev != v {
                        continue 'outer;
                    }
                }
            }
        }
        return d;
    }
    q
}

#[test]
fn criterion_08_bandlimited_layer() {
    let t0 = std::time::Instant::now();
    // partition of unity on a log grid spanning [1e-3, 1e6]
    let mut worst_partition: f64 = 0.0;
    for i in 0..=270 {
        let x = 10f64.powf(-3.0 + 9.0 * i as f64 / 270.0);
        worst_partition = worst_partition.max((dyadic_partition_value(x).unwrap() - 1.0).abs());
    }
    assert!(worst_partition < 1e-12, "partition off by {worst_partition:.3e}");

    // Fejér pair consistency with the analytic tail correction
    let mut worst_pair: f64 = 0.0;
    for nu in [1.0, 2.0, 2.0 + 50.0 / 1093.0] {
        let k = FejerKernel::new(nu).unwrap();
        for j in 0..20 {
            let t = -nu - 0.35 + (2.0 * nu + 0.7) * j as f64 / 19.0;
            let v = k.hat_by_quadrature(t, 2000.0, 1e-9).unwrap();
            worst_pair = worst_pair.max((v - k.hat(t)).abs());
        }
    }
    assert!(worst_pair < 1e-6, "Fejér pair off by {worst_pair:.3e}");
    let elapsed = t0.elapsed();
    println!(
        "criterion 8: PASS — partition of unity within {worst_partition:.3e}; Fejér transform pair within {worst_pair:.3e}, {elapsed:?}"
    );
    assert!(elapsed.as_secs_f64() < 60.0);
}

#[test]
fn criterion_09_classifier_totality() {
    let t0 = std::time::Instant::now();
    let seed = 0xD15C0_u64;
    let mut rng = SplitMix64::new(seed);
    let mut counts = [0usize; 3];
    for round in 0..100_000u32 {
        let tuple = random_tuple(&mut rng);
        let case = classify(&tuple)
            .unwrap_or_else(|e| panic!("round {round} (seed {seed:#x}): {e} on {tuple:?}"));
        assert!(
            witness_is_valid(&tuple, &case),
            "round {round} (seed {seed:#x}): invalid witness {case:?} for {tuple:?}"
        );
        match case {
            zeroscope::dispersion::Case::D1 { .. } => counts[0] += 1,
            zeroscope::dispersion::Case::D2 { .. } => counts[1] += 1,
            zeroscope::dispersion::Case::TypeII { .. } => counts[2] += 1,
        }
    }
    let elapsed = t0.elapsed();
    println!(
        "criterion 9: PASS — 100000 random admissible tuples classified with valid witnesses (seed {seed:#x}; d1 {} / d2 {} / II {}), {elapsed:?}",
        counts[0], counts[1], counts[2]
    );
    assert!(elapsed.as_secs_f64() < 60.0);
}

fn random_tuple(rng: &mut SplitMix64) -> ExponentTuple {
    loop {
        let j = rng.range_u64(1, 13) as usize;
        let mut t: Vec<f64> = (0..j).map(|_| rng.next_exp()).collect();
        let total: f64 = t.iter().sum();
        t.iter_mut().for_each(|x| *x /= total);
        let delta = rng.range_f64(0.0, 1.0 / 12.0 - 1e-9);
        let sigma = rng.range_f64(0.0, 1.0 / 6.0 - delta / 2.0);
        let lambda = rng.range_f64(0.0, (1.0 / 3.0 - sigma) / 2.0 - 1e-9);
        if let Ok(tuple) = ExponentTuple::new(t, lambda, sigma, delta) {
            return tuple;
        }
    }
}

#[test]
fn criterion_10_heath_brown_identity() {
    let t0 = std::time::Instant::now();
    let table = heath_brown_table(5000, 3, 18);
    let sieve = arith::build_sieve(5000).unwrap();
    let mut worst: f64 = 0.0;
    for n in 1..=5000usize {
        worst = worst.max((table[n] - sieve.lambda[n]).abs());
    }
    let elapsed = t0.elapsed();
    let pass = worst < 1e-9;
    println!(
        "criterion 10: {} — Heath-Brown expansion matches the sieve Λ for n ≤ 5000 (J = 3, z = 18), worst |Δ| = {worst:.3e}, {elapsed:?}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
    assert!(elapsed.as_secs_f64() < 300.0);
}

#[test]
fn criterion_11_weil_bound_exhaustive() {
    let t0 = std::time::Instant::now();
    let violation = weil_violation(500, 20).unwrap();
    let elapsed = t0.elapsed();
    println!(
        "criterion 11: {} — Weil bound exhaustive for c ≤ 500, |m|,|n| ≤ 20: violations {:?}, {elapsed:?}",
        if violation.is_none() { "PASS" } else { "FAIL" },
        violation
    );
    assert_eq!(violation, None);
    assert!(elapsed.as_secs_f64() < 60.0);
}

#[test]
fn criterion_12_density_sanity_trend() {
    let t0 = std::time::Instant::now();
    let phi = FejerKernel::new(1.0).unwrap();
    let big_phi = SmoothBump::standard_phi();
    let rep60 = one_level_density(60.0, &phi, &big_phi, 60.0, true).expect("Q=60 family");
    let rep120 = one_level_density(120.0, &phi, &big_phi, 30.0, true).expect("Q=120 family");
    let elapsed = t0.elapsed();
    let band_ok = rep60.ratio >= 0.75 && rep60.ratio <= 1.25;
    let trend_ok = (rep120.ratio - 1.0).abs() <= 1.5 * (rep60.ratio - 1.0).abs();
    println!(
        "criterion 12: {} — ratio(Q=60, T=60) = {:.4} (band [0.75, 1.25]: {}), ratio(Q=120, T=30) = {:.4}, |ratio-1| trend 120 vs 60: {:.4} ≤ 1.5·{:.4}: {}, tails ({:.3}, {:.3}), {elapsed:?}",
        if band_ok && trend_ok { "PASS" } else { "FAIL" },
        rep60.ratio,
        band_ok,
        rep120.ratio,
        (rep120.ratio - 1.0).abs(),
        (rep60.ratio - 1.0).abs(),
        trend_ok,
        rep60.tail_estimate / rep60.rhs,
        rep120.tail_estimate / rep120.rhs,
    );
    assert!(
        trend_ok,
        "the |ratio - 1| trend must not grow: {} vs {}",
        (rep120.ratio - 1.0).abs(),
        (rep60.ratio - 1.0).abs()
    );
    // The band below does NOT hold at desk scale: the statistic approaches
    // its main term only like 1/log Q with a constant ≈ 2.5 (the archimedean
    // digamma block plus log(q/Q) spread), so ratio(Q=60) sits near 0.45 and
    // would enter [0.75, 1.25] only around Q ≈ 10^5. The assertion is kept
    // as stated rather than weakened to fit; see the criterion-12 line above
    // for the measured values.
    assert!(
        band_ok,
        "ratio(Q=60) = {:.4} outside [0.75, 1.25] (expected at desk scale; see printed analysis)",
        rep60.ratio
    );
    assert!(elapsed.as_secs_f64() < 3600.0);
}
