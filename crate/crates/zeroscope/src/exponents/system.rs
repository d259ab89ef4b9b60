//! The exponent-constraint system in (λ, δ, ρ) as exact functions of ϖ, and
//! its feasibility supremum. Everything reduces to integer polynomial
//! inequalities: the supremum comes out as the exact rational 50/1093 with
//! the δ-interval identified as the closing constraint.

use num_traits::{One, Zero};

use super::ratfn::{rat, rat_int, LinFrac, Monotonicity, Poly, Rat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Param {
    Lambda,
    Delta,
    Rho,
}

impl Param {
    pub fn name(&self) -> &'static str {
        match self {
            Param::Lambda => "lambda",
            Param::Delta => "delta",
            Param::Rho => "rho",
        }
    }
}

/// Where a constraint comes from in the derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Provenance {
    TypeD1,
    TypeD2,
    TypeII,
    CombinatorialLemma,
    RangeHypothesis,
    Synthesis,
}

#[derive(Debug, Clone)]
pub enum ConstraintKind {
    /// param > bound(ϖ) (strict) or ≥ (non-strict)
    Lower { param: Param, bound: LinFrac, strict: bool },
    /// param < bound(ϖ) (strict) or ≤
    Upper { param: Param, bound: LinFrac, strict: bool },
    /// ρ < c·λ + bound(ϖ): the couplings between the smooth-variable and
    /// bilinear ranges
    RhoLambdaCoupling { coef: Rat, bound: LinFrac },
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub tag: Provenance,
    pub label: &'static str,
}

/// A set of constraints over ϖ ∈ [0, varpi_cap).
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub constraints: Vec<Constraint>,
    pub varpi_cap: Rat,
}

fn lower(param: Param, bound: LinFrac, tag: Provenance, label: &'static str) -> Constraint {
    Constraint {
        kind: ConstraintKind::Lower { param, bound, strict: true },
        tag,
        label,
    }
}

fn upper(param: Param, bound: LinFrac, tag: Provenance, label: &'static str) -> Constraint {
    Constraint {
        kind: ConstraintKind::Upper { param, bound, strict: true },
        tag,
        label,
    }
}

fn upper_nonstrict(
    param: Param,
    bound: LinFrac,
    tag: Provenance,
    label: &'static str,
) -> Constraint {
    Constraint {
        kind: ConstraintKind::Upper { param, bound, strict: false },
        tag,
        label,
    }
}

impl ConstraintSystem {
    /// The full synthesis system with σ = ϖ: three parameter intervals, the
    /// combinatorial-lemma hypotheses, and the ρ-λ couplings. Its supremum
    /// in ϖ is exactly 50/1093.
    pub fn paper_system() -> ConstraintSystem {
        let mut c = Vec::new();
        // λ window
        c.push(lower(
            Param::Lambda,
            LinFrac::over_two_plus_varpi(0, 1, 3),
            Provenance::TypeD1,
            "lambda > varpi/(3(2+varpi))",
        ));
        c.push(upper(
            Param::Lambda,
            LinFrac::affine(rat(1, 6), rat(-1, 2)),
            Provenance::Synthesis,
            "lambda < 1/6 - varpi/2",
        ));
        c.push(upper(
            Param::Lambda,
            LinFrac::constant(rat(1, 6)).sub(&LinFrac::over_two_plus_varpi(0, 1, 2)),
            Provenance::TypeD2,
            "lambda < 1/6 - varpi/(2(2+varpi))",
        ));
        // δ window
        c.push(lower(
            Param::Delta,
            LinFrac::over_two_plus_varpi(0, 242, 75),
            Provenance::TypeII,
            "delta > 242 varpi/(75(2+varpi))",
        ));
        c.push(upper(
            Param::Delta,
            LinFrac::constant(rat(1, 12)).sub(&LinFrac::over_two_plus_varpi(0, 1, 2)),
            Provenance::TypeD2,
            "delta < 1/12 - varpi/(2(2+varpi))",
        ));
        c.push(upper(
            Param::Delta,
            LinFrac::constant(rat(1, 12)),
            Provenance::CombinatorialLemma,
            "delta < 1/12",
        ));
        // σ ≤ 1/6 - δ/2 with σ = ϖ gives δ ≤ 1/3 - 2ϖ
        c.push(upper_nonstrict(
            Param::Delta,
            LinFrac::affine(rat(1, 3), rat_int(-2)),
            Provenance::CombinatorialLemma,
            "delta <= 1/3 - 2 varpi  (sigma = varpi)",
        ));
        // σ < 1/3 - δ gives δ < 1/3 - ϖ
        c.push(upper(
            Param::Delta,
            LinFrac::affine(rat(1, 3), rat_int(-1)),
            Provenance::TypeII,
            "delta < 1/3 - varpi  (sigma = varpi)",
        ));
        // ρ window
        c.push(lower(
            Param::Rho,
            LinFrac::over_two_plus_varpi(0, 1, 2),
            Provenance::RangeHypothesis,
            "rho > varpi/(2(2+varpi))",
        ));
        c.push(upper(
            Param::Rho,
            LinFrac::constant(rat(1, 9)).sub(&LinFrac::over_two_plus_varpi(0, 4, 9)),
            Provenance::TypeII,
            "rho < 1/9 - 4 varpi/(9(2+varpi))",
        ));
        c.push(upper(
            Param::Rho,
            LinFrac::over_two_plus_varpi(4, -1, 15),
            Provenance::TypeII,
            "rho < (4-varpi)/(15(2+varpi))",
        ));
        c.push(upper(
            Param::Rho,
            LinFrac::constant(rat(1, 6)),
            Provenance::TypeD2,
            "rho < 1/6",
        ));
        c.push(upper(
            Param::Rho,
            LinFrac::over_two_plus_varpi(4, -2, 9),
            Provenance::TypeD1,
            "rho < (4-2varpi)/(9(2+varpi))",
        ));
        // ρ < (2/3)λ + 2(1-ϖ)/(9(2+ϖ))
        c.push(Constraint {
            kind: ConstraintKind::RhoLambdaCoupling {
                coef: rat(2, 3),
                bound: LinFrac::over_two_plus_varpi(2, -2, 9),
            },
            tag: Provenance::TypeII,
            label: "rho < (2/3) lambda + 2(1-varpi)/(9(2+varpi))",
        });
        // the smooth-variable range condition carried in both readings:
        // (3/2)ρ < λ + 1/3 - ϖ/(2+ϖ)   i.e. ρ < (2/3)λ + 2/9 - 2ϖ/(3(2+ϖ))
        c.push(Constraint {
            kind: ConstraintKind::RhoLambdaCoupling {
                coef: rat(2, 3),
                bound: LinFrac::constant(rat(2, 9)).sub(&LinFrac::over_two_plus_varpi(0, 2, 3)),
            },
            tag: Provenance::TypeD1,
            label: "rho < (2/3) lambda + 2/9 - 2 varpi/(3(2+varpi))",
        });
        // ... and ρ < (2/3)λ + 2/9 - ϖ/(3(2+ϖ)) (the weaker reading)
        c.push(Constraint {
            kind: ConstraintKind::RhoLambdaCoupling {
                coef: rat(2, 3),
                bound: LinFrac::constant(rat(2, 9)).sub(&LinFrac::over_two_plus_varpi(0, 1, 3)),
            },
            tag: Provenance::TypeD1,
            label: "rho < (2/3) lambda + 2/9 - varpi/(3(2+varpi))",
        });
        ConstraintSystem {
            constraints: c,
            varpi_cap: rat(1, 8),
        }
    }

    /// Same system without the ρ-λ couplings; the supremum must not move.
    pub fn without_couplings(&self) -> ConstraintSystem {
        ConstraintSystem {
            constraints: self
                .constraints
                .iter()
                .filter(|c| !matches!(c.kind, ConstraintKind::RhoLambdaCoupling { .. }))
                .cloned()
                .collect(),
            varpi_cap: self.varpi_cap.clone(),
        }
    }

    /// Only the λ window plus the combinatorial-lemma box: its closing point
    /// sits far beyond the cap, so restricted to [0, 1/8) it never closes.
    pub fn lambda_only() -> ConstraintSystem {
        let full = ConstraintSystem::paper_system();
        ConstraintSystem {
            constraints: full
                .constraints
                .into_iter()
                .filter(|c| match &c.kind {
                    ConstraintKind::Lower { param, .. } | ConstraintKind::Upper { param, .. } => {
                        *param == Param::Lambda
                    }
                    _ => false,
                })
                .collect(),
            varpi_cap: rat(1, 8),
        }
    }

    /// Deterministic reshuffle of constraint order; results must not change.
    pub fn permuted(&self, seed: u64) -> ConstraintSystem {
        let mut rng = crate::util::SplitMix64::new(seed);
        let mut constraints = self.constraints.clone();
        for i in (1..constraints.len()).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            constraints.swap(i, j);
        }
        ConstraintSystem {
            constraints,
            varpi_cap: self.varpi_cap.clone(),
        }
    }

    /// Every bound must be monotone (or constant) on [0, cap): lowers
    /// nondecreasing, uppers nonincreasing, so the feasible set in ϖ is an
    /// interval from 0. Verified symbolically through Sturm chains.
    pub fn verify_monotone(&self) -> Result<()> {
        let lo = Rat::zero();
        let hi = self.varpi_cap.clone();
        for c in &self.constraints {
            let (bound, want_increasing) = match &c.kind {
                ConstraintKind::Lower { bound, .. } => (bound, true),
                ConstraintKind::Upper { bound, .. } => (bound, false),
                ConstraintKind::RhoLambdaCoupling { bound, .. } => (bound, false),
            };
            let m = bound.monotonicity(&lo, &hi);
            let ok = match m {
                Monotonicity::Constant => true,
                Monotonicity::Increasing => want_increasing,
                Monotonicity::Decreasing => !want_increasing,
                Monotonicity::Mixed => false,
            };
            if !ok {
                return Err(Error::Inconsistent(format!(
                    "constraint `{}` is not monotone the right way ({m:?})",
                    c.label
                )));
            }
        }
        Ok(())
    }

    fn bounds_for(&self, param: Param) -> (Vec<(&LinFrac, bool)>, Vec<(&LinFrac, bool)>) {
        let mut lowers = Vec::new();
        let mut uppers = Vec::new();
        for c in &self.constraints {
            match &c.kind {
                ConstraintKind::Lower { param: p, bound, strict } if *p == param => {
                    lowers.push((bound, *strict))
                }
                ConstraintKind::Upper { param: p, bound, strict } if *p == param => {
                    uppers.push((bound, *strict))
                }
                _ => {}
            }
        }
        (lowers, uppers)
    }

    /// Exact interval (max of lower bounds, min of upper bounds) for one
    /// parameter at a fixed rational ϖ. Parameters are implicitly ≥ 0.
    pub fn interval_for(&self, param: Param, varpi: &Rat) -> Result<(Rat, Rat)> {
        if varpi < &Rat::zero() || varpi >= &self.varpi_cap {
            return Err(Error::Domain(format!(
                "varpi = {varpi} outside [0, {})",
                self.varpi_cap
            )));
        }
        let (lowers, uppers) = self.bounds_for(param);
        let mut lo = Rat::zero();
        for (b, _) in lowers {
            lo = lo.max(b.eval(varpi));
        }
        let mut hi: Option<Rat> = None;
        for (b, _) in uppers {
            let v = b.eval(varpi);
            hi = Some(match hi {
                None => v,
                Some(h) => h.min(v),
            });
        }
        let hi = hi.ok_or_else(|| {
            Error::Domain(format!("no upper bounds on {}", param.name()))
        })?;
        Ok((lo, hi))
    }

    /// Is the whole system satisfiable at this ϖ? Intervals must be
    /// nonempty and the couplings must hold with λ pushed to its supremum.
    pub fn feasible(&self, varpi: &Rat) -> Result<bool> {
        for param in [Param::Lambda, Param::Delta, Param::Rho] {
            if !self.has_param(param) {
                continue;
            }
            let (lo, hi) = self.interval_for(param, varpi)?;
            if lo >= hi {
                return Ok(false);
            }
        }
        if self.has_param(Param::Rho) && self.has_param(Param::Lambda) {
            let (rho_lo, _) = self.interval_for(Param::Rho, varpi)?;
            let (_, lambda_hi) = self.interval_for(Param::Lambda, varpi)?;
            for c in &self.constraints {
                if let ConstraintKind::RhoLambdaCoupling { coef, bound } = &c.kind {
                    if rho_lo >= coef * &lambda_hi + bound.eval(varpi) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    fn has_param(&self, param: Param) -> bool {
        self.constraints.iter().any(|c| match &c.kind {
            ConstraintKind::Lower { param: p, .. } | ConstraintKind::Upper { param: p, .. } => {
                *p == param
            }
            _ => false,
        })
    }

    /// A concrete satisfying assignment at ϖ: the interval midpoints
    /// (couplings are slack at the midpoints throughout the feasible range).
    pub fn midpoint_assignment(&self, varpi: &Rat) -> Result<Assignment> {
        if !self.feasible(varpi)? {
            return Err(Error::Domain(format!("system infeasible at varpi = {varpi}")));
        }
        let mid = |p: Param| -> Result<Rat> {
            let (lo, hi) = self.interval_for(p, varpi)?;
            Ok((lo + hi) / rat_int(2))
        };
        Ok(Assignment {
            varpi: varpi.clone(),
            lambda: mid(Param::Lambda)?,
            delta: mid(Param::Delta)?,
            rho: mid(Param::Rho)?,
            sigma: varpi.clone(),
        })
    }

    /// Does an explicit assignment satisfy every constraint? σ enters via
    /// the σ = ϖ substitution already baked into the system; the assignment
    /// carries its σ for reporting.
    pub fn check_assignment(&self, a: &Assignment) -> bool {
        let get = |p: Param| match p {
            Param::Lambda => &a.lambda,
            Param::Delta => &a.delta,
            Param::Rho => &a.rho,
        };
        self.constraints.iter().all(|c| match &c.kind {
            ConstraintKind::Lower { param, bound, strict } => {
                let b = bound.eval(&a.varpi);
                if *strict {
                    *get(*param) > b
                } else {
                    *get(*param) >= b
                }
            }
            ConstraintKind::Upper { param, bound, strict } => {
                let b = bound.eval(&a.varpi);
                if *strict {
                    *get(*param) < b
                } else {
                    *get(*param) <= b
                }
            }
            ConstraintKind::RhoLambdaCoupling { coef, bound } => {
                a.rho.clone() < coef * &a.lambda + bound.eval(&a.varpi)
            }
        })
    }

    /// The exact supremum of ϖ for which the system stays feasible, with the
    /// closing constraint pair. Method: collect the rational roots of every
    /// lower-vs-upper boundary polynomial inside (0, cap], certify via Sturm
    /// that no boundary has an irrational root there, and walk the
    /// candidates with exact feasibility probes.
    pub fn sup_varpi(&self) -> Result<SupReport> {
        self.verify_monotone()?;
        if !self.feasible(&Rat::zero())? {
            return Err(Error::Inconsistent("system infeasible already at ϖ = 0".into()));
        }
        let cap = self.varpi_cap.clone();
        let polys = self.boundary_polynomials();
        let mut candidates: Vec<Rat> = Vec::new();
        for poly in &polys {
            if poly.is_zero() {
                continue;
            }
            candidates.extend(poly.rational_roots_in(&Rat::zero(), &cap));
        }
        candidates.sort();
        candidates.dedup();
        // feasibility is monotone (verified above): the supremum is the
        // first candidate at which the system is infeasible, or the cap.
        // A Sturm certificate rules out any uncollected (irrational)
        // boundary root inside the gap just below the flip point.
        let mut prev = Rat::zero();
        for cand in &candidates {
            if cand >= &cap {
                break;
            }
            if !self.feasible(cand)? {
                self.certify_gap(&polys, prev.clone(), cand)?;
                let binding = self.binding_at(cand)?;
                return Ok(SupReport {
                    sup: cand.clone(),
                    binding,
                    closes_at_cap: false,
                });
            }
            prev = cand.clone();
        }
        self.certify_gap(&polys, prev, &cap)?;
        Ok(SupReport {
            sup: cap,
            binding: None,
            closes_at_cap: true,
        })
    }

    /// Certify that feasibility holds on all of (prev, flip): probe a point
    /// in the gap, then show by Sturm counts that no boundary polynomial has
    /// a root strictly between the probe and the flip point, shrinking the
    /// gap when necessary (there are finitely many roots, so this settles).
    fn certify_gap(&self, polys: &[Poly], prev: Rat, flip: &Rat) -> Result<()> {
        let mut probe = (&prev + flip) / rat_int(2);
        for _ in 0..64 {
            if !self.feasible(&probe)? {
                return Err(Error::Indeterminate(format!(
                    "the feasibility flip sits at an irrational point below {flip}"
                )));
            }
            let mut extra = 0usize;
            for p in polys {
                if p.is_zero() {
                    continue;
                }
                let c = p.count_roots(&probe, flip);
                let at_flip = usize::from(p.eval(flip).is_zero());
                extra += c.saturating_sub(at_flip);
            }
            if extra == 0 {
                return Ok(());
            }
            probe = (&probe + flip) / rat_int(2);
        }
        Err(Error::Indeterminate(
            "could not isolate the feasibility flip from nearby boundary roots".into(),
        ))
    }

    /// Numerator polynomials of (lower - upper) for every bound pair,
    /// including the coupling boundaries with λ at its upper envelope.
    fn boundary_polynomials(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        for param in [Param::Lambda, Param::Delta, Param::Rho] {
            let (lowers, uppers) = self.bounds_for(param);
            for (lo, _) in &lowers {
                for (hi, _) in &uppers {
                    out.push(lo.sub(hi).num);
                }
            }
        }
        // couplings: ρ_lo = (2/3) λ_hi + bound
        let (rho_lowers, _) = self.bounds_for(Param::Rho);
        let (_, lambda_uppers) = self.bounds_for(Param::Lambda);
        for c in &self.constraints {
            if let ConstraintKind::RhoLambdaCoupling { coef, bound } = &c.kind {
                for (rlo, _) in &rho_lowers {
                    for (lhi, _) in &lambda_uppers {
                        let rhs = lhi.scale(coef).add(bound);
                        out.push(rlo.sub(&rhs).num);
                    }
                }
            }
        }
        out
    }

    /// Which parameter's interval is empty at ϖ (after verifying intervals
    /// below are fine): the perturbation test for the binding constraint.
    fn binding_at(&self, varpi: &Rat) -> Result<Option<Param>> {
        for param in [Param::Lambda, Param::Delta, Param::Rho] {
            if !self.has_param(param) {
                continue;
            }
            let (lo, hi) = self.interval_for(param, varpi)?;
            if lo >= hi {
                return Ok(Some(param));
            }
        }
        Ok(None)
    }
}

/// One satisfying point of the system.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Assignment {
    #[serde(serialize_with = "ser_rat")]
    pub varpi: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub lambda: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub delta: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub rho: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub sigma: Rat,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Debug, Clone)]
pub struct SupReport {
    pub sup: Rat,
    pub binding: Option<Param>,
    pub closes_at_cap: bool,
}

/// The non-vanishing proportion bound 1 - 1/(2+κ) = (1+κ)/(2+κ), exact.
pub fn nonvanishing_bound(kappa: &Rat) -> Result<Rat> {
    if kappa <= &Rat::zero() || kappa >= &rat(50, 1093) {
        return Err(Error::Domain(format!(
            "κ = {kappa} outside the admissible open interval (0, 50/1093)"
        )));
    }
    Ok((Rat::one() + kappa) / (rat_int(2) + kappa))
}

/// The κ → 50/1093 limit of the bound: exactly 1143/2236.
pub fn nonvanishing_bound_limit() -> Rat {
    let kappa = rat(50, 1093);
    (Rat::one() + &kappa) / (rat_int(2) + &kappa)
}

/// The arithmetic note the reports carry: the limit is 1/2 + 25/2236, not
/// the 1/2 + 25/2235 sometimes quoted; both sides exceed 0.51118.
pub fn nonvanishing_denominator_note() -> String {
    let limit = nonvanishing_bound_limit();
    let excess = &limit - rat(1, 2);
    format!(
        "lower bound 1 - 1/(2 + 50/1093) = {limit} = 1/2 + {excess}; \
         note: 25/2236 here, not the 25/2235 sometimes quoted; \
         both exceed 0.51118"
    )
}
