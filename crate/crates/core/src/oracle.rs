//! Brute-force reference implementations used by the test suite to
//! validate the optimized kernels and solvers.
//!
//! Everything here is a literal transliteration of the statistic
//! definitions as unguarded triple loops over all actors, beliefs, and
//! events. No code is shared with `netstats` or `inference`; agreement
//! between the two paths is the point.

use crate::corpus::{ActorId, ActorType, BeliefId, Stance};
use crate::error::StatError;
use crate::netstats::{HalfLife, SignMode, StatColumn, StatName, StatOptions};

/// One past event as a plain tuple: (time, actor, belief, stance).
pub type RawEvent = (f64, u32, u32, Stance);

/// Small event history the oracle can afford to scan repeatedly.
pub struct NaiveHistory<'a> {
    pub n_actors: usize,
    pub n_beliefs: usize,
    pub events: &'a [RawEvent],
    pub actor_types: &'a [ActorType],
}

const MAX_ACTORS: usize = 32;
const MAX_BELIEFS: usize = 32;
const MAX_EVENTS: usize = 1000;

impl<'a> NaiveHistory<'a> {
    fn check_guard(&self) -> Result<(), StatError> {
        if self.n_actors > MAX_ACTORS || self.n_beliefs > MAX_BELIEFS || self.events.len() > MAX_EVENTS
        {
            return Err(StatError::OracleGuard(format!(
                "{} actors, {} beliefs, {} events (limits {MAX_ACTORS}/{MAX_BELIEFS}/{MAX_EVENTS})",
                self.n_actors,
                self.n_beliefs,
                self.events.len()
            )));
        }
        Ok(())
    }

    /// Literal decayed edge weight: scan every event.
    fn w(&self, t: f64, i: u32, j: u32, s: Stance, h: HalfLife) -> f64 {
        let rate = std::f64::consts::LN_2 / h.value();
        let mut sum = 0.0;
        for &(te, ei, ej, es) in self.events {
            if ei == i && ej == j && es == s && te < t {
                sum += (-(t - te) * rate).exp() * rate;
            }
        }
        sum
    }

    fn w_modes(&self, t: f64, i: u32, j: u32, stances: &[Stance], h: HalfLife) -> f64 {
        stances.iter().map(|&s| self.w(t, i, j, s, h)).sum()
    }

    fn stated_before(&self, t: f64, i: u32, j: u32, s: Stance) -> bool {
        self.events
            .iter()
            .any(|&(te, ei, ej, es)| ei == i && ej == j && es == s && te < t)
    }
}

fn ib_stances(sign: SignMode, candidate: Stance) -> Vec<Stance> {
    match sign {
        SignMode::Candidate => vec![candidate],
        SignMode::Positive => vec![Stance::Positive],
        SignMode::Negative => vec![Stance::Negative],
        SignMode::Unsigned => vec![Stance::Positive, Stance::Negative],
    }
}

/// Evaluate one named statistic by literal summation.
#[allow(clippy::too_many_arguments)]
pub fn naive_statistic(
    hist: &NaiveHistory<'_>,
    t: f64,
    a: ActorId,
    b: BeliefId,
    candidate: Stance,
    column: StatColumn,
    h: HalfLife,
    opts: StatOptions,
) -> Result<f64, StatError> {
    hist.check_guard()?;
    let a = a.0;
    let b = b.0;
    let ib = ib_stances(column.sign, candidate);

    let cycle = |aj_sign: Stance, ij_sign: Stance| -> f64 {
        let mut sum = 0.0;
        for i in 0..hist.n_actors as u32 {
            if !opts.literal_index_sets && i == a {
                continue;
            }
            for j in 0..hist.n_beliefs as u32 {
                if !opts.literal_index_sets && j == b {
                    continue;
                }
                sum += hist.w(t, a, j, aj_sign, h)
                    * hist.w_modes(t, i, b, &ib, h)
                    * hist.w(t, i, j, ij_sign, h);
            }
        }
        sum
    };

    let value = match column.name {
        StatName::PositiveReciprocity => {
            cycle(Stance::Positive, Stance::Positive).cbrt()
                + cycle(Stance::Negative, Stance::Negative).cbrt()
        }
        StatName::NegativeReciprocity => {
            cycle(Stance::Positive, Stance::Negative).cbrt()
                + cycle(Stance::Negative, Stance::Positive).cbrt()
        }
        StatName::InnovationLearning => {
            let mut total = 0.0;
            for congruence in Stance::BOTH {
                let mut zeta = 0usize;
                for i in 0..hist.n_actors as u32 {
                    if i != a && hist.stated_before(t, i, b, congruence) {
                        zeta += 1;
                    }
                }
                let eta = zeta.max(1) as f64;
                let mut num = 0.0;
                for i in 0..hist.n_actors as u32 {
                    if i == a {
                        continue;
                    }
                    for j in 0..hist.n_beliefs as u32 {
                        if j == b {
                            continue;
                        }
                        let ind_a = hist.stated_before(t, a, j, congruence);
                        let ind_i = hist.stated_before(t, i, j, congruence);
                        if ind_a && ind_i {
                            num += hist.w_modes(t, i, b, &ib, h);
                        }
                    }
                }
                total += num.cbrt() / eta;
            }
            total
        }
        StatName::Inertia => hist.w_modes(t, a, b, &ib, h),
        StatName::Activity => {
            let mut sum = 0.0;
            for j in 0..hist.n_beliefs as u32 {
                sum += hist.w_modes(t, a, j, &Stance::BOTH, h);
            }
            sum
        }
        StatName::Popularity => {
            let mut sum = 0.0;
            for i in 0..hist.n_actors as u32 {
                if !opts.literal_index_sets && i == a {
                    continue;
                }
                sum += hist.w_modes(t, i, b, &ib, h);
            }
            sum
        }
        StatName::Homophily => {
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..hist.n_actors as u32 {
                if !opts.literal_index_sets && i == a {
                    continue;
                }
                let w = hist.w_modes(t, i, b, &ib, h);
                den += w;
                if hist.actor_types[i as usize] == hist.actor_types[a as usize] {
                    num += w;
                }
            }
            if den == 0.0 {
                0.0
            } else {
                num / den
            }
        }
        StatName::Heterophily => {
            let social =
                |ty: ActorType| ty == ActorType::TradeUnionSocial;
            let liberal =
                |ty: ActorType| matches!(ty, ActorType::EmployerLiberal | ActorType::Financial);
            let x_a = social(hist.actor_types[a as usize]);
            let y_a = liberal(hist.actor_types[a as usize]);
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..hist.n_actors as u32 {
                if !opts.literal_index_sets && i == a {
                    continue;
                }
                let w = hist.w_modes(t, i, b, &ib, h);
                den += w;
                let ty = hist.actor_types[i as usize];
                if x_a && liberal(ty) {
                    num += w;
                }
                if y_a && social(ty) {
                    num += w;
                }
            }
            if den == 0.0 {
                0.0
            } else {
                num / den
            }
        }
    };
    Ok(value)
}

/// Result of the grid/golden-section maximizer.
#[derive(Debug, Clone)]
pub struct GridMle {
    pub argmax: Vec<f64>,
    pub value: f64,
    /// True when the objective was flat over the whole grid.
    pub flat: bool,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Maximize a 1- or 2-parameter scalar likelihood by grid search followed
/// by golden-section refinement. Accuracy about 1e-5 on each coordinate.
pub fn grid_mle<F>(
    objective: F,
    bounds: &[(f64, f64)],
    resolution: usize,
) -> Result<GridMle, StatError>
where
    F: Fn(&[f64]) -> f64,
{
    assert!(
        bounds.len() == 1 || bounds.len() == 2,
        "grid_mle supports 1 or 2 parameters"
    );
    let axis = |k: usize| -> Vec<f64> {
        let (lo, hi) = bounds[k];
        (0..=resolution)
            .map(|i| lo + (hi - lo) * i as f64 / resolution as f64)
            .collect()
    };

    let mut best = vec![bounds[0].0; bounds.len()];
    let mut best_val = f64::NEG_INFINITY;
    let mut min_val = f64::INFINITY;
    let check = |point: &[f64], val: f64, best: &mut Vec<f64>, best_val: &mut f64| {
        if val > *best_val {
            *best_val = val;
            best.clear();
            best.extend_from_slice(point);
        }
    };

    if bounds.len() == 1 {
        for x in axis(0) {
            let v = objective(&[x]);
            if !v.is_finite() {
                return Err(StatError::OracleGuard(format!(
                    "non-finite objective at grid point {x}"
                )));
            }
            min_val = min_val.min(v);
            check(&[x], v, &mut best, &mut best_val);
        }
    } else {
        for x in axis(0) {
            for y in axis(1) {
                let v = objective(&[x, y]);
                if !v.is_finite() {
                    return Err(StatError::OracleGuard(format!(
                        "non-finite objective at grid point ({x}, {y})"
                    )));
                }
                min_val = min_val.min(v);
                check(&[x, y], v, &mut best, &mut best_val);
            }
        }
    }

    let flat = (best_val - min_val).abs() <= f64::EPSILON * best_val.abs().max(1.0);
    if flat {
        return Ok(GridMle {
            argmax: best,
            value: best_val,
            flat,
        });
    }

    // Golden-section refinement, coordinate-wise for two parameters.
    let span: Vec<f64> = bounds
        .iter()
        .map(|(lo, hi)| (hi - lo) / resolution as f64)
        .collect();
    for _ in 0..if bounds.len() == 1 { 1 } else { 12 } {
        for k in 0..bounds.len() {
            let fixed = best.clone();
            let f1 = |x: f64| {
                let mut p = fixed.clone();
                p[k] = x;
                objective(&p)
            };
            let lo = (best[k] - span[k]).max(bounds[k].0);
            let hi = (best[k] + span[k]).min(bounds[k].1);
            best[k] = golden_section(&f1, lo, hi, 1e-7);
        }
    }
    best_val = objective(&best);
    Ok(GridMle {
        argmax: best,
        value: best_val,
        flat,
    })
}

/// Independently coded iteratively-reweighted least squares for logistic
/// regression, with its own Gaussian-elimination solver. Used to
/// cross-check `inference::fit_logistic`.
pub fn irls_logistic(x: &[Vec<f64>], y: &[bool], max_iter: usize) -> Vec<f64> {
    let n = x.len();
    let k = x[0].len();
    let mut beta = vec![0.0; k];
    for _ in 0..max_iter {
        // Weighted normal equations X'WX delta = X'(y - p)
        let mut xtwx = vec![vec![0.0; k]; k];
        let mut xtr = vec![0.0; k];
        for r in 0..n {
            let score: f64 = (0..k).map(|c| x[r][c] * beta[c]).sum();
            let p = 1.0 / (1.0 + (-score).exp());
            let w = p * (1.0 - p);
            let resid = (y[r] as u8 as f64) - p;
            for c1 in 0..k {
                xtr[c1] += x[r][c1] * resid;
                for c2 in 0..k {
                    xtwx[c1][c2] += w * x[r][c1] * x[r][c2];
                }
            }
        }
        let delta = gaussian_solve(&mut xtwx, &mut xtr);
        let mut max_step = 0.0f64;
        for c in 0..k {
            beta[c] += delta[c];
            max_step = max_step.max(delta[c].abs());
        }
        if max_step < 1e-12 {
            break;
        }
    }
    beta
}

// Partial-pivot Gaussian elimination; consumes its inputs.
fn gaussian_solve(a: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r1, &r2| a[r1][col].abs().partial_cmp(&a[r2][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let diag = a[col][col];
        for row in (col + 1)..n {
            let factor = a[row][col] / diag;
            for c in col..n {
                a[row][c] -= factor * a[col][c];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut sum = b[row];
        for c in (row + 1)..n {
            sum -= a[row][c] * x[c];
        }
        x[row] = sum / a[row][row];
    }
    x
}
