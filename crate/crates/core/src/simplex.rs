//! Bounded revised simplex for packing programs `max c.x, A x <= b, x >= 0`
//! with 0/1 constraint rows.
//!
//! A basis is described by the structural variables `S` it contains and
//! the rows `R` whose slacks are nonbasic (the tight rows). Feasibility of
//! the basis forces `|R| = |S|`, and the only matrix that needs inverting
//! is the kernel `K = A[R, S]`. Its inverse is kept densely and updated in
//! O(k^2) per pivot, so the cost of a pivot scales with the number of
//! basic structural variables rather than with the full row count.
//!
//! The primal phase works on a slightly perturbed right-hand side, which
//! removes the heavy degeneracy of all-ones packing constraints. The exact
//! side is then restored and any small infeasibility repaired with dual
//! pivots.

use crate::error::{Error, Result};
use crate::lp::{LpModel, PivotRule, SimplexOptions, EPS_FEAS};

/// Smallest pivot element accepted in ratio tests.
const PIVOT_TOL: f64 = 1e-7;
/// Relative size of the right-hand-side perturbation.
const PERTURBATION: f64 = 1e-4;
/// Pivots between recomputations of the basic values from the kernel.
const REFRESH_EVERY: u64 = 64;
/// Residual above which the kernel inverse is rebuilt from scratch.
const REFACTOR_TOL: f64 = 1e-10;

const NONE: usize = usize::MAX;

/// Distinct offsets in `[1, 2) * PERTURBATION`, fixed per row.
fn perturbed_rhs(r: usize) -> f64 {
    let h = (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 40;
    1.0 + PERTURBATION * (1.0 + h as f64 / (1u64 << 24) as f64)
}

/// Solves the model and returns the structural values.
pub(crate) fn solve(model: &LpModel, opts: &SimplexOptions) -> Result<Vec<f64>> {
    let mut s = Simplex::new(model);
    s.primal(opts)?;
    s.b = vec![1.0; s.m];
    s.refresh()?;
    loop {
        s.dual(opts)?;
        if s.entering(PivotRule::Bland).is_none() {
            break;
        }
        s.primal(opts)?;
    }
    Ok(s.x.iter().map(|v| v.max(0.0)).collect())
}

/// Which basic variable leaves.
#[derive(Debug, Clone, Copy)]
enum Leaving {
    /// Structural variable at kernel column `q`.
    Structural(usize),
    /// Slack of loose row `l`.
    Slack(usize),
}

/// Column of the entering variable in the current basis: basic structural
/// values move by `-t * alpha`, loose slacks by `-t * beta`.
struct Direction {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

struct Simplex<'a> {
    n: usize,
    m: usize,
    rows: &'a [Vec<usize>],
    cols: Vec<Vec<usize>>,
    c: &'a [f64],
    b: Vec<f64>,
    /// Kernel column `q` -> structural variable.
    slist: Vec<usize>,
    /// Kernel row `p` -> tight constraint row.
    rlist: Vec<usize>,
    spos: Vec<usize>,
    rpos: Vec<usize>,
    cap: usize,
    /// `kinv[q * cap + p]`.
    kinv: Vec<f64>,
    x: Vec<f64>,
    slack: Vec<f64>,
    pivots: u64,
}

impl<'a> Simplex<'a> {
    fn new(model: &'a LpModel) -> Self {
        let n = model.num_vars();
        let m = model.constraints.len();
        let mut cols = vec![Vec::new(); n];
        for (r, row) in model.constraints.iter().enumerate() {
            for &v in row {
                cols[v].push(r);
            }
        }
        let cap = n.min(m);
        let b: Vec<f64> = (0..m).map(perturbed_rhs).collect();
        Simplex {
            n,
            m,
            rows: &model.constraints,
            cols,
            c: &model.objective,
            slack: b.clone(),
            b,
            slist: Vec::new(),
            rlist: Vec::new(),
            spos: vec![NONE; n],
            rpos: vec![NONE; m],
            cap,
            kinv: vec![0.0; cap * cap],
            x: vec![0.0; n],
            pivots: 0,
        }
    }

    fn k(&self) -> usize {
        self.slist.len()
    }

    fn count_pivot(&mut self, opts: &SimplexOptions) -> Result<()> {
        if self.pivots >= opts.max_pivots {
            return Err(Error::IterationLimit(self.pivots));
        }
        self.pivots += 1;
        Ok(())
    }

    /// Dual values: `y_R = c_S^T K^-1`, zero on loose rows.
    fn duals(&self) -> Vec<f64> {
        let k = self.k();
        let mut yr = vec![0.0; k];
        for q in 0..k {
            let cq = self.c[self.slist[q]];
            if cq != 0.0 {
                let row = &self.kinv[q * self.cap..q * self.cap + k];
                for (y, a) in yr.iter_mut().zip(row) {
                    *y += cq * a;
                }
            }
        }
        let mut y = vec![0.0; self.m];
        for (p, &r) in self.rlist.iter().enumerate() {
            y[r] = yr[p];
        }
        y
    }

    /// Reduced costs of every nonbasic variable, indexed by variable id
    /// (`v < n` structural, `n + r` slack of row `r`). Basic entries are 0.
    fn reduced_costs(&self) -> Vec<f64> {
        let y = self.duals();
        let mut d = vec![0.0; self.n + self.m];
        for v in 0..self.n {
            if self.spos[v] == NONE {
                d[v] = self.c[v] - self.cols[v].iter().map(|&r| y[r]).sum::<f64>();
            }
        }
        for &r in &self.rlist {
            d[self.n + r] = -y[r];
        }
        d
    }

    fn entering(&self, rule: PivotRule) -> Option<usize> {
        let d = self.reduced_costs();
        let candidates = (0..d.len()).filter(|&j| d[j] > EPS_FEAS);
        match rule {
            PivotRule::Bland => candidates.min(),
            PivotRule::Dantzig => candidates.fold(None, |best: Option<usize>, j| match best {
                Some(b) if d[b] >= d[j] => Some(b),
                _ => Some(j),
            }),
        }
    }

    fn direction(&self, j: usize) -> Direction {
        let k = self.k();
        let mut alpha = vec![0.0; k];
        let mut beta = vec![0.0; self.m];
        if j < self.n {
            for &r in &self.cols[j] {
                beta[r] += 1.0;
                let p = self.rpos[r];
                if p != NONE {
                    for (q, a) in alpha.iter_mut().enumerate() {
                        *a += self.kinv[q * self.cap + p];
                    }
                }
            }
        } else {
            let p = self.rpos[j - self.n];
            for (q, a) in alpha.iter_mut().enumerate() {
                *a = self.kinv[q * self.cap + p];
            }
        }
        for (q, &a) in alpha.iter().enumerate() {
            if a != 0.0 {
                for &r in &self.cols[self.slist[q]] {
                    beta[r] -= a;
                }
            }
        }
        Direction { alpha, beta }
    }

    /// Two-pass ratio test: the largest step keeping every basic variable
    /// above `-EPS_FEAS`, then among rows blocking within that step the
    /// largest pivot element (Dantzig) or the smallest variable id (Bland).
    fn leaving(&self, dir: &Direction, rule: PivotRule) -> Option<Leaving> {
        let mut cands: Vec<(Leaving, f64, f64, usize)> = Vec::new();
        for (q, &a) in dir.alpha.iter().enumerate() {
            if a > PIVOT_TOL {
                cands.push((Leaving::Structural(q), self.x[self.slist[q]].max(0.0), a, self.slist[q]));
            }
        }
        for (l, &bl) in dir.beta.iter().enumerate() {
            if bl > PIVOT_TOL && self.rpos[l] == NONE {
                cands.push((Leaving::Slack(l), self.slack[l].max(0.0), bl, self.n + l));
            }
        }
        let limit = cands
            .iter()
            .map(|&(_, val, rate, _)| (val + EPS_FEAS) / rate)
            .min_by(f64::total_cmp)?;
        let blocking = cands.into_iter().filter(|&(_, val, rate, _)| val / rate <= limit);
        let best = match rule {
            PivotRule::Bland => blocking.min_by_key(|&(_, _, _, id)| id),
            PivotRule::Dantzig => blocking.min_by(|a, b| b.2.total_cmp(&a.2).then(a.3.cmp(&b.3))),
        };
        best.map(|(leave, ..)| leave)
    }

    fn primal(&mut self, opts: &SimplexOptions) -> Result<()> {
        let mut rule = opts.rule;
        let mut streak = 0u32;
        while let Some(j) = self.entering(rule) {
            let dir = self.direction(j);
            let Some(leave) = self.leaving(&dir, rule) else {
                // Unreachable for a model whose every variable sits in a row.
                return Err(Error::IterationLimit(self.pivots));
            };
            self.count_pivot(opts)?;
            let (val, rate) = self.leaving_value(leave, &dir);
            let theta = val.max(0.0) / rate;
            if theta <= EPS_FEAS {
                streak += 1;
                if streak > opts.degenerate_streak {
                    rule = PivotRule::Bland;
                }
            } else {
                streak = 0;
            }
            self.pivot(j, leave, &dir, theta)?;
        }
        Ok(())
    }

    fn leaving_value(&self, leave: Leaving, dir: &Direction) -> (f64, f64) {
        match leave {
            Leaving::Structural(q) => (self.x[self.slist[q]], dir.alpha[q]),
            Leaving::Slack(l) => (self.slack[l], dir.beta[l]),
        }
    }

    /// Repairs negative basic values while keeping reduced costs
    /// non-positive.
    fn dual(&mut self, opts: &SimplexOptions) -> Result<()> {
        loop {
            let mut worst: Option<(Leaving, f64)> = None;
            for (q, &v) in self.slist.iter().enumerate() {
                if self.x[v] < -EPS_FEAS && worst.is_none_or(|(_, w)| self.x[v] < w) {
                    worst = Some((Leaving::Structural(q), self.x[v]));
                }
            }
            for l in 0..self.m {
                if self.rpos[l] == NONE
                    && self.slack[l] < -EPS_FEAS
                    && worst.is_none_or(|(_, w)| self.slack[l] < w)
                {
                    worst = Some((Leaving::Slack(l), self.slack[l]));
                }
            }
            let Some((leave, _)) = worst else {
                return Ok(());
            };

            // Row of the leaving variable over the tight rows, plus the
            // structural coefficient it contributes directly.
            let k = self.k();
            let (u, own): (Vec<f64>, Option<usize>) = match leave {
                Leaving::Structural(q) => (self.kinv[q * self.cap..q * self.cap + k].to_vec(), None),
                Leaving::Slack(l) => {
                    let mut h = vec![0.0; k];
                    for &v in &self.rows[l] {
                        let q = self.spos[v];
                        if q != NONE {
                            for (hp, a) in h.iter_mut().zip(&self.kinv[q * self.cap..q * self.cap + k]) {
                                *hp -= a;
                            }
                        }
                    }
                    (h, Some(l))
                }
            };
            let mut tight = vec![0.0; self.m];
            for (p, &r) in self.rlist.iter().enumerate() {
                tight[r] = u[p];
            }
            let entry = |j: usize| -> f64 {
                if j < self.n {
                    let direct = match own {
                        Some(l) if self.rows[l].binary_search(&j).is_ok() => 1.0,
                        _ => 0.0,
                    };
                    direct + self.cols[j].iter().map(|&r| tight[r]).sum::<f64>()
                } else {
                    tight[j - self.n]
                }
            };

            let d = self.reduced_costs();
            let nonbasic = (0..self.n)
                .filter(|&v| self.spos[v] == NONE)
                .chain(self.rlist.iter().map(|&r| self.n + r));
            let mut best: Option<(usize, f64)> = None;
            for j in nonbasic {
                let t = entry(j);
                if t < -PIVOT_TOL {
                    let ratio = d[j].min(0.0) / t;
                    if best.is_none_or(|(bj, br)| ratio < br || (ratio == br && j < bj)) {
                        best = Some((j, ratio));
                    }
                }
            }
            let Some((j, _)) = best else {
                // A negative basic value with no negative entry would make
                // x = 0 infeasible, which cannot happen for a packing program.
                return Err(Error::IterationLimit(self.pivots));
            };
            self.count_pivot(opts)?;
            let dir = self.direction(j);
            let (val, rate) = self.leaving_value(leave, &dir);
            self.pivot(j, leave, &dir, val / rate)?;
        }
    }

    /// Moves `theta` along `dir` and swaps `j` into the basis for `leave`.
    fn pivot(&mut self, j: usize, leave: Leaving, dir: &Direction, theta: f64) -> Result<()> {
        for (q, &a) in dir.alpha.iter().enumerate() {
            self.x[self.slist[q]] -= theta * a;
        }
        for l in 0..self.m {
            if self.rpos[l] == NONE {
                self.slack[l] -= theta * dir.beta[l];
            }
        }
        if j < self.n {
            self.x[j] = theta;
        } else {
            self.slack[j - self.n] = theta;
        }

        let k = self.k();
        let cap = self.cap;
        match (j < self.n, leave) {
            (true, Leaving::Structural(q0)) => {
                // Column q0 of the kernel replaced by A[R, j].
                self.x[self.slist[q0]] = 0.0;
                let piv = dir.alpha[q0];
                let (head, rest) = self.kinv.split_at_mut(q0 * cap);
                let (row0, tail) = rest.split_at_mut(cap);
                for v in &mut row0[..k] {
                    *v /= piv;
                }
                for (q, chunk) in head.chunks_mut(cap).chain(tail.chunks_mut(cap)).enumerate() {
                    let q = if q < q0 { q } else { q + 1 };
                    if q >= k {
                        break;
                    }
                    let a = dir.alpha[q];
                    if a != 0.0 {
                        for (v, r0) in chunk[..k].iter_mut().zip(&row0[..k]) {
                            *v -= a * r0;
                        }
                    }
                }
                self.spos[self.slist[q0]] = NONE;
                self.slist[q0] = j;
                self.spos[j] = q0;
            }
            (true, Leaving::Slack(l)) => {
                // Border the kernel with row l and column j.
                self.slack[l] = 0.0;
                let sigma = dir.beta[l];
                let h = self.row_times_kinv(l);
                for q in 0..k {
                    let a = dir.alpha[q] / sigma;
                    if a != 0.0 {
                        let row = &mut self.kinv[q * cap..q * cap + k];
                        for (v, hp) in row.iter_mut().zip(&h) {
                            *v += a * hp;
                        }
                    }
                    self.kinv[q * cap + k] = -dir.alpha[q] / sigma;
                }
                for p in 0..k {
                    self.kinv[k * cap + p] = -h[p] / sigma;
                }
                self.kinv[k * cap + k] = 1.0 / sigma;
                self.slist.push(j);
                self.spos[j] = k;
                self.rlist.push(l);
                self.rpos[l] = k;
            }
            (false, Leaving::Slack(l)) => {
                // Kernel row p0 replaced by A[l, S].
                self.slack[l] = 0.0;
                let r0 = j - self.n;
                let p0 = self.rpos[r0];
                let mut h = self.row_times_kinv(l);
                let hp0 = h[p0];
                h[p0] -= 1.0;
                for q in 0..k {
                    let a = dir.alpha[q] / hp0;
                    if a != 0.0 {
                        let row = &mut self.kinv[q * cap..q * cap + k];
                        for (v, hp) in row.iter_mut().zip(&h) {
                            *v -= a * hp;
                        }
                    }
                }
                self.rpos[r0] = NONE;
                self.rlist[p0] = l;
                self.rpos[l] = p0;
            }
            (false, Leaving::Structural(q0)) => {
                // Drop kernel row p0 and column q0.
                self.x[self.slist[q0]] = 0.0;
                let r0 = j - self.n;
                let p0 = self.rpos[r0];
                let piv = self.kinv[q0 * cap + p0];
                let row0: Vec<f64> = self.kinv[q0 * cap..q0 * cap + k].to_vec();
                for q in 0..k {
                    if q == q0 {
                        continue;
                    }
                    let a = self.kinv[q * cap + p0] / piv;
                    if a != 0.0 {
                        let row = &mut self.kinv[q * cap..q * cap + k];
                        for (v, r) in row.iter_mut().zip(&row0) {
                            *v -= a * r;
                        }
                    }
                }
                let last = k - 1;
                if q0 != last {
                    self.kinv.copy_within(last * cap..last * cap + k, q0 * cap);
                }
                if p0 != last {
                    for q in 0..last {
                        self.kinv[q * cap + p0] = self.kinv[q * cap + last];
                    }
                }
                let left = self.slist.swap_remove(q0);
                self.spos[left] = NONE;
                if q0 < self.slist.len() {
                    self.spos[self.slist[q0]] = q0;
                }
                self.rlist.swap_remove(p0);
                self.rpos[r0] = NONE;
                if p0 < self.rlist.len() {
                    self.rpos[self.rlist[p0]] = p0;
                }
            }
        }
        if self.pivots.is_multiple_of(REFRESH_EVERY) {
            self.refresh()?;
        }
        Ok(())
    }

    /// `A[l, S] K^-1`, a vector over kernel rows.
    fn row_times_kinv(&self, l: usize) -> Vec<f64> {
        let k = self.k();
        let mut h = vec![0.0; k];
        for &v in &self.rows[l] {
            let q = self.spos[v];
            if q != NONE {
                for (hp, a) in h.iter_mut().zip(&self.kinv[q * self.cap..q * self.cap + k]) {
                    *hp += a;
                }
            }
        }
        h
    }

    /// Recomputes basic values from the kernel inverse, rebuilding the
    /// inverse first when it no longer reproduces the tight rows.
    fn refresh(&mut self) -> Result<()> {
        self.recompute_values();
        if self.kernel_residual() > REFACTOR_TOL {
            self.refactor()?;
            self.recompute_values();
        }
        Ok(())
    }

    fn recompute_values(&mut self) {
        let k = self.k();
        for q in 0..k {
            let row = &self.kinv[q * self.cap..q * self.cap + k];
            let v: f64 = row.iter().zip(&self.rlist).map(|(a, &r)| a * self.b[r]).sum();
            self.x[self.slist[q]] = v;
        }
        for l in 0..self.m {
            self.slack[l] = if self.rpos[l] == NONE {
                self.b[l] - self.rows[l].iter().map(|&v| self.x[v]).sum::<f64>()
            } else {
                0.0
            };
        }
    }

    fn kernel_residual(&self) -> f64 {
        self.rlist
            .iter()
            .map(|&r| (self.rows[r].iter().map(|&v| self.x[v]).sum::<f64>() - self.b[r]).abs())
            .fold(0.0, f64::max)
    }

    /// Gauss-Jordan inversion of the kernel with partial pivoting.
    fn refactor(&mut self) -> Result<()> {
        let k = self.k();
        let w = 2 * k;
        let mut a = vec![0.0f64; k * w];
        for (p, &r) in self.rlist.iter().enumerate() {
            for &v in &self.rows[r] {
                let q = self.spos[v];
                if q != NONE {
                    a[p * w + q] = 1.0;
                }
            }
            a[p * w + k + p] = 1.0;
        }
        for col in 0..k {
            let piv = (col..k)
                .max_by(|&i, &j| a[i * w + col].abs().total_cmp(&a[j * w + col].abs()))
                .expect("nonempty range");
            if a[piv * w + col].abs() < PIVOT_TOL {
                return Err(Error::IterationLimit(self.pivots));
            }
            if piv != col {
                for t in 0..w {
                    a.swap(piv * w + t, col * w + t);
                }
            }
            let inv = 1.0 / a[col * w + col];
            for t in 0..w {
                a[col * w + t] *= inv;
            }
            let pivot_row: Vec<f64> = a[col * w..(col + 1) * w].to_vec();
            for i in 0..k {
                if i != col {
                    let f = a[i * w + col];
                    if f != 0.0 {
                        for (x, pr) in a[i * w..(i + 1) * w].iter_mut().zip(&pivot_row) {
                            *x -= f * pr;
                        }
                    }
                }
            }
        }
        // Row i of the reduced system now holds row q = i of K^-1.
        for q in 0..k {
            self.kinv[q * self.cap..q * self.cap + k].copy_from_slice(&a[q * w + k..q * w + w]);
        }
        Ok(())
    }
}
