//! Monte Carlo estimators over independent replications of the motion.
//!
//! Replication `i` draws from `ChaCha8` stream `i` of the master seed, so
//! every estimate is a pure function of `(params, t, n, seed)`. Work is
//! split into fixed-size chunks whose partial sums are reduced in chunk
//! order with compensated accumulation; the result is bit-identical no
//! matter how many worker threads rayon schedules.

use crate::model::ModelParams;
use crate::sim::{simulate, SimOutcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Replications per parallel work item; fixed so the reduction tree does
/// not depend on the thread count.
const CHUNK: u64 = 8192;

/// RNG for one replication: stream `index` of the master seed.
pub fn replication_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Neumaier-compensated sum: the running compensation captures what plain
/// addition rounds away, keeping 10^7-term sums exact to the last bit or so.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    hi: f64,
    lo: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.hi + v;
        if self.hi.abs() >= v.abs() {
            self.lo += (self.hi - t) + v;
        } else {
            self.lo += (v - t) + self.hi;
        }
        self.hi = t;
    }

    pub(crate) fn merge(&mut self, other: CompensatedSum) {
        self.add(other.hi);
        self.add(other.lo);
    }

    pub(crate) fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Map every replication index in fixed chunks, in parallel, and fold the
/// per-chunk partials in chunk order.
fn chunked_fold<A, Per, Fold, Acc>(n: u64, per_chunk: Per, init: Acc, mut fold: Fold) -> Acc
where
    A: Send,
    Per: Fn(u64, u64) -> A + Sync,
    Fold: FnMut(Acc, A) -> Acc,
{
    let n_chunks = n.div_ceil(CHUNK);
    let partials: Vec<A> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| per_chunk(ci * CHUNK, ((ci + 1) * CHUNK).min(n)))
        .collect();
    partials.into_iter().fold(init, |acc, a| fold(acc, a))
}

/// A Monte Carlo point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

impl McEstimate {
    /// |mean - reference| in units of the standard error (infinite if the
    /// estimate is exact and wrong).
    pub fn z_against(&self, reference: f64) -> f64 {
        let gap = (self.mean - reference).abs();
        if gap == 0.0 {
            0.0
        } else {
            gap / self.stderr
        }
    }
}

/// Frequency of an event over `n` replications, with Bernoulli stderr.
pub fn estimate_event<F>(
    params: &ModelParams,
    t: f64,
    n: u64,
    seed: u64,
    event: F,
) -> McEstimate
where
    F: Fn(&SimOutcome) -> bool + Sync,
{
    assert!(n >= 1, "need at least one replication");
    let hits = chunked_fold(
        n,
        |lo, hi| {
            let mut count = 0u64;
            for i in lo..hi {
                let o = simulate(params, t, &mut replication_rng(seed, i));
                if event(&o) {
                    count += 1;
                }
            }
            count
        },
        0u64,
        |acc, c| acc + c,
    );
    let mean = hits as f64 / n as f64;
    McEstimate {
        mean,
        stderr: (mean * (1.0 - mean) / n as f64).sqrt(),
        n,
    }
}

/// Partial sums for one phase point of a restricted empirical
/// characteristic function.
#[derive(Default, Clone, Copy)]
struct PhaseAcc {
    cos: CompensatedSum,
    sin: CompensatedSum,
    cos2: CompensatedSum,
    sin2: CompensatedSum,
}

impl PhaseAcc {
    fn push(&mut self, phase: Option<f64>) {
        if let Some(ph) = phase {
            let (s, c) = ph.sin_cos();
            self.cos.add(c);
            self.sin.add(s);
            self.cos2.add(c * c);
            self.sin2.add(s * s);
        }
        // An excluded sample contributes exact zeros; skipping the adds
        // leaves the sums unchanged, which is the same thing.
    }

    fn merge(&mut self, o: PhaseAcc) {
        self.cos.merge(o.cos);
        self.sin.merge(o.sin);
        self.cos2.merge(o.cos2);
        self.sin2.merge(o.sin2);
    }

    fn estimates(&self, n: u64) -> (McEstimate, McEstimate) {
        let nf = n as f64;
        let make = |sum: &CompensatedSum, sum2: &CompensatedSum| {
            let mean = sum.value() / nf;
            let var = ((sum2.value() - nf * mean * mean) / (nf - 1.0)).max(0.0);
            McEstimate {
                mean,
                stderr: (var / nf).sqrt(),
                n,
            }
        };
        (make(&self.cos, &self.cos2), make(&self.sin, &self.sin2))
    }
}

/// Empirical restricted characteristic function at several phase points
/// sharing one batch of paths: each outcome is simulated once and queried
/// for every point index. The functional returns the phase of the sample,
/// or `None` where the restriction indicator is zero.
pub fn empirical_charfn_batch<F>(
    params: &ModelParams,
    t: f64,
    n: u64,
    seed: u64,
    n_points: usize,
    functional: F,
) -> Vec<(McEstimate, McEstimate)>
where
    F: Fn(&SimOutcome, usize) -> Option<f64> + Sync,
{
    assert!(n >= 2, "variance needs at least two replications");
    let folded = chunked_fold(
        n,
        |lo, hi| {
            let mut accs = vec![PhaseAcc::default(); n_points];
            for i in lo..hi {
                let o = simulate(params, t, &mut replication_rng(seed, i));
                for (k, acc) in accs.iter_mut().enumerate() {
                    acc.push(functional(&o, k));
                }
            }
            accs
        },
        vec![PhaseAcc::default(); n_points],
        |mut acc, chunk| {
            for (a, c) in acc.iter_mut().zip(chunk) {
                a.merge(c);
            }
            acc
        },
    );
    folded.iter().map(|acc| acc.estimates(n)).collect()
}

/// Single-point version of [`empirical_charfn_batch`].
pub fn empirical_charfn<F>(
    params: &ModelParams,
    t: f64,
    n: u64,
    seed: u64,
    functional: F,
) -> (McEstimate, McEstimate)
where
    F: Fn(&SimOutcome) -> Option<f64> + Sync,
{
    empirical_charfn_batch(params, t, n, seed, 1, |o, _| functional(o))
        .pop()
        .unwrap()
}

/// Counts of a real functional over uniform bins, with out-of-interval mass
/// reported separately. `n` counts all replications; samples where the
/// functional is `None` fall in no bin and are not counted anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    /// Total replications (the denominator for bin masses).
    pub n: u64,
    pub below: u64,
    pub above: u64,
}

impl Histogram {
    pub fn bin_bounds(&self, i: usize) -> (f64, f64) {
        let width = (self.hi - self.lo) / self.counts.len() as f64;
        (self.lo + width * i as f64, self.lo + width * (i + 1) as f64)
    }

    /// Per-bin z-scores of the counts against a Binomial(n, mass) model,
    /// where `expected_bin_mass(a, b)` integrates the reference density (or
    /// sums the reference atoms) over [a, b).
    pub fn z_scores<M>(&self, mut expected_bin_mass: M) -> Vec<f64>
    where
        M: FnMut(f64, f64) -> f64,
    {
        let nf = self.n as f64;
        (0..self.counts.len())
            .map(|i| {
                let (a, b) = self.bin_bounds(i);
                let m = expected_bin_mass(a, b);
                let var = (nf * m * (1.0 - m)).max(f64::MIN_POSITIVE);
                (self.counts[i] as f64 - nf * m) / var.sqrt()
            })
            .collect()
    }
}

/// Histogram of a restricted real functional of the outcome over `n`
/// replications.
pub fn density_histogram<F>(
    params: &ModelParams,
    t: f64,
    n: u64,
    seed: u64,
    interval: (f64, f64),
    bins: usize,
    sample: F,
) -> Histogram
where
    F: Fn(&SimOutcome) -> Option<f64> + Sync,
{
    assert!(bins >= 10, "need at least 10 bins, got {bins}");
    let (lo, hi) = interval;
    assert!(lo < hi, "empty histogram interval [{lo}, {hi})");
    let width = (hi - lo) / bins as f64;

    #[derive(Clone)]
    struct Part {
        counts: Vec<u64>,
        below: u64,
        above: u64,
    }
    let folded = chunked_fold(
        n,
        |ilo, ihi| {
            let mut part = Part {
                counts: vec![0u64; bins],
                below: 0,
                above: 0,
            };
            for i in ilo..ihi {
                let o = simulate(params, t, &mut replication_rng(seed, i));
                if let Some(v) = sample(&o) {
                    if v < lo {
                        part.below += 1;
                    } else {
                        let b = ((v - lo) / width) as usize;
                        if b >= bins {
                            part.above += 1;
                        } else {
                            part.counts[b] += 1;
                        }
                    }
                }
            }
            part
        },
        Part {
            counts: vec![0u64; bins],
            below: 0,
            above: 0,
        },
        |mut acc, p| {
            for (a, c) in acc.counts.iter_mut().zip(p.counts) {
                *a += c;
            }
            acc.below += p.below;
            acc.above += p.above;
            acc
        },
    );
    Histogram {
        lo,
        hi,
        counts: folded.counts,
        n,
        below: folded.below,
        above: folded.above,
    }
}

/// Sample moments of the terminal state used by the hydrodynamic checks.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SampleMoments {
    pub n: u64,
    pub mean_x: f64,
    pub var_x: f64,
    pub mean_y: f64,
    pub var_y: f64,
    pub corr_xy: f64,
    /// Standardized third central moment of Y.
    pub skew_y: f64,
    /// Standardized fourth central moment of Y (3 for a Gaussian).
    pub kurt_y: f64,
    pub mean_t_vertical: f64,
    pub var_t_vertical: f64,
}

/// First-through-fourth moments of (X, Y) and first two of T over `n`
/// replications.
pub fn estimate_moments(params: &ModelParams, t: f64, n: u64, seed: u64) -> SampleMoments {
    assert!(n >= 2, "variance needs at least two replications");

    #[derive(Default, Clone, Copy)]
    struct Sums {
        x: CompensatedSum,
        x2: CompensatedSum,
        y: CompensatedSum,
        y2: CompensatedSum,
        y3: CompensatedSum,
        y4: CompensatedSum,
        xy: CompensatedSum,
        s: CompensatedSum,
        s2: CompensatedSum,
    }
    let sums = chunked_fold(
        n,
        |lo, hi| {
            let mut q = Sums::default();
            for i in lo..hi {
                let o = simulate(params, t, &mut replication_rng(seed, i));
                let (x, y, s) = (o.final_state.x, o.final_state.y, o.t_vertical);
                q.x.add(x);
                q.x2.add(x * x);
                q.y.add(y);
                q.y2.add(y * y);
                q.y3.add(y * y * y);
                q.y4.add(y * y * y * y);
                q.xy.add(x * y);
                q.s.add(s);
                q.s2.add(s * s);
            }
            q
        },
        Sums::default(),
        |mut acc, q| {
            acc.x.merge(q.x);
            acc.x2.merge(q.x2);
            acc.y.merge(q.y);
            acc.y2.merge(q.y2);
            acc.y3.merge(q.y3);
            acc.y4.merge(q.y4);
            acc.xy.merge(q.xy);
            acc.s.merge(q.s);
            acc.s2.merge(q.s2);
            acc
        },
    );

    let nf = n as f64;
    let mx = sums.x.value() / nf;
    let my = sums.y.value() / nf;
    let ms = sums.s.value() / nf;
    let var_x = ((sums.x2.value() - nf * mx * mx) / (nf - 1.0)).max(0.0);
    let var_y = ((sums.y2.value() - nf * my * my) / (nf - 1.0)).max(0.0);
    let var_s = ((sums.s2.value() - nf * ms * ms) / (nf - 1.0)).max(0.0);
    let cov_xy = (sums.xy.value() - nf * mx * my) / (nf - 1.0);
    let corr_xy = if var_x > 0.0 && var_y > 0.0 {
        cov_xy / (var_x * var_y).sqrt()
    } else {
        0.0
    };
    // Central moments of Y via the binomial expansion of E[(Y - m)^k].
    let ey2 = sums.y2.value() / nf;
    let ey3 = sums.y3.value() / nf;
    let ey4 = sums.y4.value() / nf;
    let m2 = (ey2 - my * my).max(0.0);
    let m3 = ey3 - 3.0 * my * ey2 + 2.0 * my.powi(3);
    let m4 = ey4 - 4.0 * my * ey3 + 6.0 * my * my * ey2 - 3.0 * my.powi(4);
    let (skew_y, kurt_y) = if m2 > 0.0 {
        (m3 / m2.powf(1.5), m4 / (m2 * m2))
    } else {
        (0.0, 0.0)
    };

    SampleMoments {
        n,
        mean_x: mx,
        var_x,
        mean_y: my,
        var_y,
        corr_xy,
        skew_y,
        kurt_y,
        mean_t_vertical: ms,
        var_t_vertical: var_s,
    }
}
