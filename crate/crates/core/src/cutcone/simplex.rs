//! Exact rational simplex with Bland's anti-cycling rule.
//!
//! Small programs run a pure exact two-phase dense tableau. Larger ones
//! (the cut-cone programs, a few thousand columns) first run a floating
//! point simplex to propose an optimal basis, then refactorize that basis
//! in exact rational arithmetic, price every column exactly, and continue
//! with exact Bland pivots if the proposal was not optimal. Either way,
//! the returned solution is exact and carries a checked dual certificate;
//! the float stage only ever chooses which basis to look at first, never
//! a number that is reported.

use num::{BigRational, Signed, Zero};

use crate::error::{Error, Result};

pub type BigRat = BigRational;

pub fn rat_int(v: i64) -> BigRat {
    BigRat::from_integer(v.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    pub coeffs: Vec<BigRat>,
    pub cmp: Cmp,
    pub rhs: BigRat,
}

/// minimize `objective · x` subject to `rows`, x ≥ 0.
#[derive(Debug, Clone)]
pub struct StandardLp {
    pub objective: Vec<BigRat>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub objective: BigRat,
    pub x: Vec<BigRat>,
    /// One multiplier per input row (≥ 0 for Ge rows, ≤ 0 for Le rows);
    /// checked for dual feasibility and a zero duality gap before return.
    pub duals: Vec<BigRat>,
}

/// Below this tableau size the pure exact path runs directly.
const PURE_EXACT_CELLS: usize = 20_000;
/// Failsafe on warm-started exact Bland pivots.
const MAX_WARM_PIVOTS: usize = 4_000;

/// Solve to proven optimality. Infeasibility or unboundedness are
/// structural errors: the callers construct programs that admit neither.
pub fn simplex_solve(lp: &StandardLp) -> Result<LpSolution> {
    let internal = Internal::build(lp)?;
    let solution = if internal.m * internal.n_cols <= PURE_EXACT_CELLS {
        exact_two_phase(&internal)?
    } else {
        match float_guided(&internal)? {
            Some(sol) => sol,
            None => exact_two_phase(&internal)?,
        }
    };
    check_optimality(lp, &solution)?;
    Ok(solution)
}

type SparseCol = Vec<(usize, BigRat)>;

/// The standardized system: normalized rows (rhs ≥ 0), one slack or
/// surplus column per inequality, one artificial column per Ge/Eq row.
struct Internal {
    m: usize,
    n_struct: usize,
    /// Columns [art_start, n_cols) are artificial.
    art_start: usize,
    n_cols: usize,
    cols: Vec<SparseCol>,
    /// Phase-2 costs (structural objective; 0 elsewhere).
    cost: Vec<BigRat>,
    rhs: Vec<BigRat>,
    flipped: Vec<bool>,
    ss_col: Vec<Option<usize>>,
    art_col: Vec<Option<usize>>,
    cmp: Vec<Cmp>,
}

impl Internal {
    fn build(lp: &StandardLp) -> Result<Self> {
        let n = lp.objective.len();
        let m = lp.rows.len();
        for (i, row) in lp.rows.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(Error::Validation(format!(
                    "row {i} has {} coefficients, expected {n}",
                    row.coeffs.len()
                )));
            }
        }

        let mut flipped = vec![false; m];
        let mut cmp = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut row_coeffs: Vec<Vec<BigRat>> = Vec::with_capacity(m);
        for (i, row) in lp.rows.iter().enumerate() {
            if row.rhs.is_negative() {
                flipped[i] = true;
                cmp.push(match row.cmp {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                });
                rhs.push(-&row.rhs);
                row_coeffs.push(row.coeffs.iter().map(|c| -c).collect());
            } else {
                cmp.push(row.cmp);
                rhs.push(row.rhs.clone());
                row_coeffs.push(row.coeffs.clone());
            }
        }

        let n_ss = cmp.iter().filter(|c| **c != Cmp::Eq).count();
        let n_art = cmp.iter().filter(|c| **c != Cmp::Le).count();
        let art_start = n + n_ss;
        let n_cols = art_start + n_art;

        let mut cols: Vec<SparseCol> = vec![Vec::new(); n_cols];
        for j in 0..n {
            for i in 0..m {
                if !row_coeffs[i][j].is_zero() {
                    cols[j].push((i, row_coeffs[i][j].clone()));
                }
            }
        }
        let mut ss_col = vec![None; m];
        let mut art_col = vec![None; m];
        let mut next_ss = n;
        let mut next_art = art_start;
        for i in 0..m {
            if cmp[i] != Cmp::Eq {
                let v = if cmp[i] == Cmp::Le { rat_int(1) } else { rat_int(-1) };
                cols[next_ss].push((i, v));
                ss_col[i] = Some(next_ss);
                next_ss += 1;
            }
            if cmp[i] != Cmp::Le {
                cols[next_art].push((i, rat_int(1)));
                art_col[i] = Some(next_art);
                next_art += 1;
            }
        }

        let mut cost = vec![BigRat::zero(); n_cols];
        cost[..n].clone_from_slice(&lp.objective);

        Ok(Internal {
            m,
            n_struct: n,
            art_start,
            n_cols,
            cols,
            cost,
            rhs,
            flipped,
            ss_col,
            art_col,
            cmp,
        })
    }

    /// Map normalized-row duals back to the caller's row orientation.
    fn orient_duals(&self, y: Vec<BigRat>) -> Vec<BigRat> {
        y.into_iter()
            .zip(&self.flipped)
            .map(|(v, &f)| if f { -v } else { v })
            .collect()
    }

    fn solution_from_primal(&self, x_internal: &[BigRat], y: Vec<BigRat>) -> LpSolution {
        let x: Vec<BigRat> = x_internal[..self.n_struct].to_vec();
        let objective = self
            .cost
            .iter()
            .zip(x_internal)
            .map(|(c, v)| c * v)
            .sum();
        LpSolution { objective, x, duals: self.orient_duals(y) }
    }
}

// ---------------------------------------------------------------------
// Pure exact two-phase dense tableau (small programs; fallback).
// ---------------------------------------------------------------------

struct Tableau {
    /// m constraint rows, each of length `cols + 1` (last entry: rhs).
    rows: Vec<Vec<BigRat>>,
    z1: Vec<BigRat>,
    z2: Vec<BigRat>,
    basis: Vec<usize>,
    cols: usize,
    art_start: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &BigRat {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let pivot = self.rows[p][q].clone();
        debug_assert!(!pivot.is_zero());
        for entry in &mut self.rows[p] {
            if !entry.is_zero() {
                *entry /= &pivot;
            }
        }
        let prow = self.rows[p].clone();
        let nz: Vec<usize> = prow
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, _)| c)
            .collect();
        let apply = |row: &mut Vec<BigRat>| {
            let factor = row[q].clone();
            if factor.is_zero() {
                return;
            }
            for &c in &nz {
                let delta = &factor * &prow[c];
                row[c] -= delta;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != p {
                apply(row);
            }
        }
        apply(&mut self.z1);
        apply(&mut self.z2);
        self.basis[p] = q;
    }

    /// Dantzig pricing while the objective moves, permanent Bland
    /// (lowest index) once it stalls.
    fn entering(&self, phase1: bool, bland: bool) -> Option<usize> {
        let z = if phase1 { &self.z1 } else { &self.z2 };
        let limit = if phase1 { self.cols } else { self.art_start };
        if bland {
            return (0..limit).find(|&j| z[j].is_negative());
        }
        let mut best: Option<usize> = None;
        for j in 0..limit {
            if z[j].is_negative() && best.map_or(true, |b| z[j] < z[b]) {
                best = Some(j);
            }
        }
        best
    }

    /// Leaving row = min ratio, ties to the lowest basis index (Bland).
    fn leaving(&self, q: usize) -> Option<usize> {
        let mut best: Option<(BigRat, usize)> = None;
        for i in 0..self.rows.len() {
            let t = &self.rows[i][q];
            if !t.is_positive() {
                continue;
            }
            let ratio = self.rhs(i) / t;
            let better = match &best {
                None => true,
                Some((r, row)) => {
                    ratio < *r || (ratio == *r && self.basis[i] < self.basis[*row])
                }
            };
            if better {
                best = Some((ratio, i));
            }
        }
        best.map(|(_, i)| i)
    }

    fn run_phase(&mut self, phase1: bool) -> Result<()> {
        const STALL_LIMIT: u32 = 30;
        let mut bland = false;
        let mut stalled = 0u32;
        loop {
            let Some(q) = self.entering(phase1, bland) else { return Ok(()) };
            let Some(p) = self.leaving(q) else {
                return Err(Error::Internal(
                    "LP is unbounded; the cut-cone construction guarantees boundedness".into(),
                ));
            };
            let degenerate = self.rhs(p).is_zero();
            self.pivot(p, q);
            if !bland {
                stalled = if degenerate { stalled + 1 } else { 0 };
                if stalled >= STALL_LIMIT {
                    bland = true;
                }
            }
        }
    }
}

fn exact_two_phase(int: &Internal) -> Result<LpSolution> {
    let m = int.m;
    let cols = int.n_cols;
    let mut rows = vec![vec![BigRat::zero(); cols + 1]; m];
    for (j, col) in int.cols.iter().enumerate() {
        for (i, v) in col {
            rows[*i][j] = v.clone();
        }
    }
    for i in 0..m {
        rows[i][cols] = int.rhs[i].clone();
    }
    let basis: Vec<usize> = (0..m)
        .map(|i| int.art_col[i].or(int.ss_col[i]).expect("row has a basic column"))
        .collect();

    let mut z1 = vec![BigRat::zero(); cols + 1];
    for i in 0..m {
        if int.art_col[i].is_some() {
            for (j, v) in rows[i].iter().enumerate() {
                z1[j] -= v;
            }
        }
    }
    for &a in int.art_col.iter().flatten() {
        z1[a] += rat_int(1);
    }
    let mut z2 = vec![BigRat::zero(); cols + 1];
    z2[..cols].clone_from_slice(&int.cost);

    let mut t = Tableau { rows, z1, z2, basis, cols, art_start: int.art_start };

    t.run_phase(true)?;
    let phase1_obj = -t.z1[cols].clone();
    if !phase1_obj.is_zero() {
        return Err(Error::Internal(
            "LP is infeasible; the cut-cone construction guarantees feasibility".into(),
        ));
    }
    for i in 0..m {
        if t.basis[i] >= int.art_start {
            if !t.rhs(i).is_zero() {
                return Err(Error::Internal(
                    "artificial variable basic at nonzero value after phase 1".into(),
                ));
            }
            if let Some(q) = (0..int.art_start).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, q);
            }
        }
    }
    t.run_phase(false)?;

    let mut x_internal = vec![BigRat::zero(); cols];
    for (i, &b) in t.basis.iter().enumerate() {
        x_internal[b] = t.rhs(i).clone();
    }
    // Duals from the reduced costs of each row's signature column.
    let mut y = Vec::with_capacity(m);
    for i in 0..m {
        let v = match (int.cmp[i], int.ss_col[i], int.art_col[i]) {
            (Cmp::Le, Some(s), _) => -&t.z2[s],
            (Cmp::Ge, Some(s), _) => t.z2[s].clone(),
            (Cmp::Eq, _, Some(a)) => -&t.z2[a],
            _ => unreachable!("every row has a signature column"),
        };
        y.push(v);
    }
    Ok(int.solution_from_primal(&x_internal, y))
}

// ---------------------------------------------------------------------
// Float stage: propose an optimal basis quickly.
// ---------------------------------------------------------------------

const F_EPS: f64 = 1e-9;

struct FloatTableau {
    rows: Vec<Vec<f64>>,
    z1: Vec<f64>,
    z2: Vec<f64>,
    basis: Vec<usize>,
    cols: usize,
    art_start: usize,
}

impl FloatTableau {
    fn pivot(&mut self, p: usize, q: usize) {
        let pivot = self.rows[p][q];
        let inv = 1.0 / pivot;
        for v in &mut self.rows[p] {
            *v *= inv;
        }
        self.rows[p][q] = 1.0;
        let prow = self.rows[p].clone();
        let apply = |row: &mut Vec<f64>| {
            let f = row[q];
            if f == 0.0 {
                return;
            }
            for (c, pv) in prow.iter().enumerate() {
                if *pv != 0.0 {
                    row[c] -= f * pv;
                }
            }
            row[q] = 0.0;
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != p {
                apply(row);
            }
        }
        apply(&mut self.z1);
        apply(&mut self.z2);
        self.basis[p] = q;
    }

    fn run_phase(&mut self, phase1: bool) -> Option<()> {
        let limit = if phase1 { self.cols } else { self.art_start };
        for _ in 0..100_000 {
            let z: &Vec<f64> = if phase1 { &self.z1 } else { &self.z2 };
            let mut q = usize::MAX;
            let mut best = -F_EPS;
            for j in 0..limit {
                if z[j] < best {
                    best = z[j];
                    q = j;
                }
            }
            if q == usize::MAX {
                return Some(());
            }
            let mut p = usize::MAX;
            let mut best_ratio = f64::INFINITY;
            for i in 0..self.rows.len() {
                let t = self.rows[i][q];
                if t > F_EPS {
                    let ratio = self.rows[i][self.cols] / t;
                    if ratio < best_ratio - F_EPS
                        || (ratio < best_ratio + F_EPS
                            && (p == usize::MAX || self.basis[i] < self.basis[p]))
                    {
                        best_ratio = ratio;
                        p = i;
                    }
                }
            }
            if p == usize::MAX {
                return None; // numerically unbounded; let the exact path decide
            }
            self.pivot(p, q);
        }
        None
    }
}

/// Run a float two-phase simplex and return the final basis, if it looks
/// clean (feasible, no artificial columns left).
fn float_basis(int: &Internal) -> Option<Vec<usize>> {
    let m = int.m;
    let cols = int.n_cols;
    let mut rows = vec![vec![0.0f64; cols + 1]; m];
    for (j, col) in int.cols.iter().enumerate() {
        for (i, v) in col {
            rows[*i][j] = rat_to_f64(v);
        }
    }
    for i in 0..m {
        rows[i][cols] = rat_to_f64(&int.rhs[i]);
    }
    let basis: Vec<usize> = (0..m)
        .map(|i| int.art_col[i].or(int.ss_col[i]).expect("row has a basic column"))
        .collect();
    let mut z1 = vec![0.0f64; cols + 1];
    for i in 0..m {
        if int.art_col[i].is_some() {
            for (j, v) in rows[i].iter().enumerate() {
                z1[j] -= v;
            }
        }
    }
    for &a in int.art_col.iter().flatten() {
        z1[a] += 1.0;
    }
    let mut z2 = vec![0.0f64; cols + 1];
    for (j, c) in int.cost.iter().enumerate() {
        z2[j] = rat_to_f64(c);
    }

    let mut t = FloatTableau { rows, z1, z2, basis, cols, art_start: int.art_start };
    t.run_phase(true)?;
    if -t.z1[cols] > 1e-6 {
        return None;
    }
    for i in 0..m {
        if t.basis[i] >= int.art_start {
            if let Some(q) = (0..int.art_start).find(|&j| t.rows[i][j].abs() > 1e-7) {
                t.pivot(i, q);
            }
        }
    }
    t.run_phase(false)?;
    if t.basis.iter().any(|&b| b >= int.art_start) {
        return None;
    }
    Some(t.basis)
}

fn rat_to_f64(v: &BigRat) -> f64 {
    use num::ToPrimitive;
    v.to_f64().unwrap_or(0.0)
}

// ---------------------------------------------------------------------
// Exact polish: verify a candidate basis, continue with Bland if needed.
// ---------------------------------------------------------------------

fn float_guided(int: &Internal) -> Result<Option<LpSolution>> {
    let trace = std::env::var_os("LAAKSO_LP_TRACE").is_some();
    let t0 = std::time::Instant::now();
    let Some(basis) = float_basis(int) else {
        if trace {
            eprintln!("lp trace: float stage failed after {:?}", t0.elapsed());
        }
        return Ok(None);
    };
    if trace {
        eprintln!("lp trace: float stage done in {:?}", t0.elapsed());
    }
    exact_polish(int, basis)
}

/// From a candidate basis, compute the exact basic solution and duals and
/// run exact Bland pivots until optimal. Returns None when the candidate
/// is unusable (singular or primal infeasible), in which case the caller
/// falls back to the pure exact path.
fn exact_polish(int: &Internal, mut basis: Vec<usize>) -> Result<Option<LpSolution>> {
    let m = int.m;
    if basis.len() != m || basis.iter().any(|&b| b >= int.art_start) {
        return Ok(None);
    }
    let mut in_basis = vec![false; int.n_cols];
    for &b in &basis {
        if in_basis[b] {
            return Ok(None);
        }
        in_basis[b] = true;
    }

    let trace = std::env::var_os("LAAKSO_LP_TRACE").is_some();
    for iter in 0..MAX_WARM_PIVOTS {
        let t0 = std::time::Instant::now();
        let Some(lu) = ExactLu::factor(int, &basis) else { return Ok(None) };
        if trace {
            eprintln!("lp trace: polish iter {iter}: factor {:?}", t0.elapsed());
        }
        let xb = lu.solve(&int.rhs);
        if xb.iter().any(|v| v.is_negative()) {
            return Ok(None);
        }
        let cb: Vec<BigRat> = basis.iter().map(|&b| int.cost[b].clone()).collect();
        let y = lu.solve_transposed(&cb);

        // Bland: first non-basic column with a negative exact reduced
        // cost enters.
        let mut entering = None;
        for j in 0..int.art_start {
            if in_basis[j] {
                continue;
            }
            let dot: BigRat = int.cols[j].iter().map(|(i, v)| &y[*i] * v).sum();
            if int.cost[j] < dot {
                entering = Some(j);
                break;
            }
        }
        let Some(q) = entering else {
            let mut x_internal = vec![BigRat::zero(); int.n_cols];
            for (slot, &b) in basis.iter().enumerate() {
                x_internal[b] = xb[slot].clone();
            }
            return Ok(Some(int.solution_from_primal(&x_internal, y)));
        };

        let mut aq = vec![BigRat::zero(); m];
        for (i, v) in &int.cols[q] {
            aq[*i] = v.clone();
        }
        let w = lu.solve(&aq);
        let mut leave: Option<(BigRat, usize)> = None;
        for i in 0..m {
            if w[i].is_positive() {
                let ratio = &xb[i] / &w[i];
                let better = match &leave {
                    None => true,
                    Some((r, li)) => ratio < *r || (ratio == *r && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((ratio, i));
                }
            }
        }
        let Some((_, p)) = leave else {
            return Err(Error::Internal(
                "LP is unbounded; the cut-cone construction guarantees boundedness".into(),
            ));
        };
        in_basis[basis[p]] = false;
        in_basis[q] = true;
        basis[p] = q;
    }
    Ok(None)
}

/// Dense exact LU factorization with row pivoting of the basis matrix.
struct ExactLu {
    /// Combined L (unit diagonal, below) and U (diagonal and above).
    f: Vec<Vec<BigRat>>,
    /// perm[k] = original row index placed at elimination step k.
    perm: Vec<usize>,
    m: usize,
}

impl ExactLu {
    fn factor(int: &Internal, basis: &[usize]) -> Option<Self> {
        let m = int.m;
        let mut f = vec![vec![BigRat::zero(); m]; m];
        for (k, &b) in basis.iter().enumerate() {
            for (i, v) in &int.cols[b] {
                f[*i][k] = v.clone();
            }
        }
        let mut perm: Vec<usize> = (0..m).collect();
        for k in 0..m {
            // Among nonzero pivots pick one with small representation;
            // keeps the rational growth down.
            let pivot_row = (k..m)
                .filter(|&r| !f[r][k].is_zero())
                .min_by_key(|&r| {
                    f[r][k].numer().bits() + f[r][k].denom().bits()
                })?;
            f.swap(k, pivot_row);
            perm.swap(k, pivot_row);
            let pivot = f[k][k].clone();
            for r in (k + 1)..m {
                if f[r][k].is_zero() {
                    continue;
                }
                let factor = &f[r][k] / &pivot;
                for c in (k + 1)..m {
                    if !f[k][c].is_zero() {
                        let delta = &factor * &f[k][c];
                        f[r][c] -= delta;
                    }
                }
                f[r][k] = factor;
            }
        }
        Some(ExactLu { f, perm, m })
    }

    /// Solve B x = b.
    fn solve(&self, b: &[BigRat]) -> Vec<BigRat> {
        let m = self.m;
        let mut x: Vec<BigRat> = self.perm.iter().map(|&i| b[i].clone()).collect();
        for k in 0..m {
            for r in (k + 1)..m {
                if !self.f[r][k].is_zero() && !x[k].is_zero() {
                    let delta = &self.f[r][k] * &x[k];
                    x[r] -= delta;
                }
            }
        }
        for k in (0..m).rev() {
            for c in (k + 1)..m {
                if !self.f[k][c].is_zero() && !x[c].is_zero() {
                    let delta = &self.f[k][c] * &x[c];
                    x[k] -= delta;
                }
            }
            if !x[k].is_zero() {
                x[k] /= &self.f[k][k];
            }
        }
        x
    }

    /// Solve Bᵀ y = c.
    fn solve_transposed(&self, c: &[BigRat]) -> Vec<BigRat> {
        let m = self.m;
        // B = P⁻¹ L U, so Bᵀ y = Uᵀ Lᵀ P y = c: forward solve Uᵀ, back
        // solve Lᵀ, then undo the permutation.
        let mut z = c.to_vec();
        for k in 0..m {
            for r in 0..k {
                if !self.f[r][k].is_zero() && !z[r].is_zero() {
                    let delta = &self.f[r][k] * &z[r];
                    z[k] -= delta;
                }
            }
            if !z[k].is_zero() {
                z[k] /= &self.f[k][k];
            }
        }
        for k in (0..m).rev() {
            for r in (k + 1)..m {
                if !self.f[r][k].is_zero() && !z[r].is_zero() {
                    let delta = &self.f[r][k] * &z[r];
                    z[k] -= delta;
                }
            }
        }
        let mut y = vec![BigRat::zero(); m];
        for k in 0..m {
            y[self.perm[k]] = z[k].clone();
        }
        y
    }
}

/// Exact optimality certificate on the caller's system: primal
/// feasibility by substitution, dual feasibility with the right sign
/// pattern, and a zero duality gap. By LP duality this proves optimality
/// of both sides.
fn check_optimality(lp: &StandardLp, sol: &LpSolution) -> Result<()> {
    let n = lp.objective.len();
    let mut dual_obj = BigRat::zero();
    for (i, row) in lp.rows.iter().enumerate() {
        let lhs: BigRat = row.coeffs.iter().zip(&sol.x).map(|(a, x)| a * x).sum();
        let ok = match row.cmp {
            Cmp::Le => lhs <= row.rhs,
            Cmp::Ge => lhs >= row.rhs,
            Cmp::Eq => lhs == row.rhs,
        };
        if !ok {
            return Err(Error::Internal(format!("primal constraint {i} violated")));
        }
        let sign_ok = match row.cmp {
            Cmp::Le => !sol.duals[i].is_positive(),
            Cmp::Ge => !sol.duals[i].is_negative(),
            Cmp::Eq => true,
        };
        if !sign_ok {
            return Err(Error::Internal(format!("dual multiplier {i} has the wrong sign")));
        }
        dual_obj += &sol.duals[i] * &row.rhs;
    }
    for j in 0..n {
        let col_dual: BigRat = lp
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| &sol.duals[i] * &row.coeffs[j])
            .sum();
        if col_dual > lp.objective[j] {
            return Err(Error::Internal(format!("dual constraint {j} violated")));
        }
    }
    let primal_obj: BigRat = lp.objective.iter().zip(&sol.x).map(|(c, x)| c * x).sum();
    if primal_obj != sol.objective || dual_obj != sol.objective {
        return Err(Error::Internal(format!(
            "duality gap: primal {primal_obj}, dual {dual_obj}, reported {}",
            sol.objective
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(coeffs: &[i64], cmp: Cmp, rhs: i64) -> LpRow {
        LpRow { coeffs: coeffs.iter().map(|&c| rat_int(c)).collect(), cmp, rhs: rat_int(rhs) }
    }

    #[test]
    fn maximize_x_up_to_3() {
        // max x s.t. x <= 3  ==  min -x.
        let lp = StandardLp {
            objective: vec![rat_int(-1)],
            rows: vec![row(&[1], Cmp::Le, 3)],
        };
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.objective, rat_int(-3));
        assert_eq!(sol.x[0], rat_int(3));
    }

    #[test]
    fn degenerate_ties_terminate() {
        // Multiple redundant constraints active at the optimum.
        let lp = StandardLp {
            objective: vec![rat_int(-1), rat_int(-1)],
            rows: vec![
                row(&[1, 1], Cmp::Le, 2),
                row(&[1, 1], Cmp::Le, 2),
                row(&[2, 2], Cmp::Le, 4),
                row(&[1, 0], Cmp::Le, 2),
                row(&[0, 1], Cmp::Le, 2),
            ],
        };
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.objective, rat_int(-2));
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + y s.t. x + y = 2, x >= 1/2.
        let lp = StandardLp {
            objective: vec![rat_int(1), rat_int(1)],
            rows: vec![
                row(&[1, 1], Cmp::Eq, 2),
                LpRow {
                    coeffs: vec![rat_int(1), rat_int(0)],
                    cmp: Cmp::Ge,
                    rhs: BigRat::new(1.into(), 2.into()),
                },
            ],
        };
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.objective, rat_int(2));
    }

    #[test]
    fn exact_fractions_survive() {
        // min y s.t. 3y >= 1 → y = 1/3.
        let lp = StandardLp {
            objective: vec![rat_int(1)],
            rows: vec![row(&[3], Cmp::Ge, 1)],
        };
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.objective, BigRat::new(1.into(), 3.into()));
    }

    #[test]
    fn negative_rhs_rows_are_normalized() {
        // min x s.t. -x <= -2 (i.e. x >= 2).
        let lp = StandardLp {
            objective: vec![rat_int(1)],
            rows: vec![row(&[-1], Cmp::Le, -2)],
        };
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.objective, rat_int(2));
        assert_eq!(sol.x[0], rat_int(2));
    }

    #[test]
    fn infeasible_is_a_structural_error() {
        let lp = StandardLp {
            objective: vec![rat_int(0)],
            rows: vec![row(&[1], Cmp::Le, 1), row(&[1], Cmp::Ge, 2)],
        };
        assert!(matches!(simplex_solve(&lp), Err(Error::Internal(_))));
    }

    #[test]
    fn unbounded_is_a_structural_error() {
        let lp = StandardLp {
            objective: vec![rat_int(-1)],
            rows: vec![row(&[-1], Cmp::Le, 0)],
        };
        assert!(matches!(simplex_solve(&lp), Err(Error::Internal(_))));
    }

    #[test]
    fn lu_solves_match_direct_multiplication() {
        // Basis = the structural columns of a 3x3 system.
        let lp = StandardLp {
            objective: vec![rat_int(1), rat_int(2), rat_int(3)],
            rows: vec![
                row(&[2, 1, 0], Cmp::Eq, 5),
                row(&[1, 3, 1], Cmp::Eq, 10),
                row(&[0, 1, 4], Cmp::Eq, 11),
            ],
        };
        let int = Internal::build(&lp).unwrap();
        let lu = ExactLu::factor(&int, &[0, 1, 2]).unwrap();
        let x = lu.solve(&int.rhs);
        for (i, r) in lp.rows.iter().enumerate() {
            let lhs: BigRat = r.coeffs.iter().zip(&x).map(|(a, v)| a * v).sum();
            assert_eq!(lhs, r.rhs, "row {i}");
        }
        let c: Vec<BigRat> = vec![rat_int(7), rat_int(-2), rat_int(4)];
        let y = lu.solve_transposed(&c);
        for j in 0..3 {
            let lhs: BigRat = lp.rows.iter().zip(&y).map(|(r, v)| &r.coeffs[j] * v).sum();
            assert_eq!(lhs, c[j], "column {j}");
        }
    }

    #[test]
    fn singular_basis_is_rejected() {
        let lp = StandardLp {
            objective: vec![rat_int(1), rat_int(1)],
            rows: vec![row(&[1, 2], Cmp::Eq, 3), row(&[2, 4], Cmp::Eq, 6)],
        };
        let int = Internal::build(&lp).unwrap();
        assert!(ExactLu::factor(&int, &[0, 1]).is_none());
    }

    #[test]
    fn float_guided_agrees_with_pure_exact() {
        // Big enough to have an interesting basis, small enough to solve
        // both ways.
        let lp = StandardLp {
            objective: vec![rat_int(3), rat_int(1), rat_int(4), rat_int(1)],
            rows: vec![
                row(&[1, 1, 0, 0], Cmp::Ge, 2),
                row(&[0, 1, 1, 0], Cmp::Ge, 3),
                row(&[0, 0, 1, 1], Cmp::Ge, 4),
                row(&[1, 0, 0, 1], Cmp::Ge, 1),
                row(&[1, 1, 1, 1], Cmp::Le, 12),
            ],
        };
        let int = Internal::build(&lp).unwrap();
        let pure = exact_two_phase(&int).unwrap();
        let guided = float_guided(&int).unwrap().expect("float basis is usable");
        assert_eq!(pure.objective, guided.objective);
        check_optimality(&lp, &guided).unwrap();
        check_optimality(&lp, &pure).unwrap();
    }
}
