//! A tiny exact linear-programming routine: maximize c·x over a bounded
//! polytope given by inequalities A x ≤ b and equalities E x = f, by
//! enumerating basic feasible points (vertex enumeration). Dimensions here
//! are ≤ 6 with ≈ 10 constraints, so exhaustive enumeration in exact
//! rational arithmetic is the simplest trustworthy solver.

use num_traits::Zero;

use super::ratfn::Rat;

pub struct Lp {
    pub n: usize,
    /// rows (a, b) meaning a·x ≤ b
    pub ineqs: Vec<(Vec<Rat>, Rat)>,
    /// rows (e, f) meaning e·x = f
    pub eqs: Vec<(Vec<Rat>, Rat)>,
}

impl Lp {
    /// Returns (max value, a maximizer) or None when infeasible.
    /// The polytope must be bounded (callers add a normalization equality).
    pub fn maximize(&self, objective: &[Rat]) -> Option<(Rat, Vec<Rat>)> {
        assert_eq!(objective.len(), self.n);
        let mut best: Option<(Rat, Vec<Rat>)> = None;
        let m = self.ineqs.len();
        let k = self.eqs.len();
        assert!(k <= self.n);
        let need = self.n - k;
        // choose `need` inequalities to make tight
        let mut combo: Vec<usize> = (0..need).collect();
        loop {
            if let Some(x) = self.solve_tight(&combo) {
                if self.is_feasible(&x) {
                    let val = dot(objective, &x);
                    let better = match &best {
                        None => true,
                        Some((v, _)) => val > *v,
                    };
                    if better {
                        best = Some((val, x));
                    }
                }
            }
            // next combination
            if !next_combination(&mut combo, m, need) {
                break;
            }
        }
        best
    }

    fn solve_tight(&self, combo: &[usize]) -> Option<Vec<Rat>> {
        let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(self.n);
        let mut rhs: Vec<Rat> = Vec::with_capacity(self.n);
        for (e, f) in &self.eqs {
            rows.push(e.clone());
            rhs.push(f.clone());
        }
        for &i in combo {
            rows.push(self.ineqs[i].0.clone());
            rhs.push(self.ineqs[i].1.clone());
        }
        gaussian_solve(rows, rhs)
    }

    fn is_feasible(&self, x: &[Rat]) -> bool {
        self.ineqs.iter().all(|(a, b)| dot(a, x) <= *b)
            && self.eqs.iter().all(|(e, f)| dot(e, x) == *f)
    }
}

fn dot(a: &[Rat], x: &[Rat]) -> Rat {
    a.iter().zip(x).map(|(p, q)| p * q).sum()
}

fn next_combination(combo: &mut [usize], m: usize, k: usize) -> bool {
    if k == 0 {
        return false;
    }
    let mut i = k;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if combo[i] + 1 <= m - (k - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
}

/// Exact Gaussian elimination; None for singular systems.
fn gaussian_solve(mut rows: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = rows.len();
    if n == 0 {
        return None;
    }
    let cols = rows[0].len();
    if n != cols {
        return None;
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = rows[col][col].clone();
        for r in 0..n {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &p;
            for c in col..n {
                let sub = &rows[col][c] * &factor;
                rows[r][c] = &rows[r][c] - sub;
            }
            let sub = &rhs[col] * &factor;
            rhs[r] = &rhs[r] - sub;
        }
    }
    Some(
        (0..n)
            .map(|i| &rhs[i] / &rows[i][i])
            .collect(),
    )
}
