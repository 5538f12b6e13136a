//! Adaptive Gauss Kronrod quadrature on dyadic panels.
//!
//! The 7/15 point pair gives a cheap embedded error estimate per panel;
//! panels are bisected until the local estimate passes its share of the
//! tolerance.  Half line integrals walk dyadic blocks [0,1], [1,2], [2,4],
//! ... and stop once two consecutive blocks are negligible against the
//! running total, which the exponential decay of the K and I weights in
//! the mode integrands guarantees long before the hard cap.

use crate::error::ConeError;

const KRONROD_NODES: [f64; 8] = [
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
];

const KRONROD_WEIGHTS: [f64; 8] = [
    0.02293532201052922,
    0.06309209262997855,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
    0.2094821410847278,
];

const GAUSS_WEIGHTS: [f64; 4] = [
    0.1294849661688697,
    0.2797053914892767,
    0.3818300505051189,
    0.4179591836734694,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadRule {
    GaussKronrod,
}

#[derive(Clone, Debug)]
pub struct QuadConfig {
    pub lam_max: f64,
    pub nodes: usize,
    pub rule: QuadRule,
    pub tol: f64,
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            lam_max: 1e4,
            nodes: 15,
            rule: QuadRule::GaussKronrod,
            tol: 1e-9,
            max_panels: 400_000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadOutcome {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

fn panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut kronrod = KRONROD_WEIGHTS[7] * f(mid);
    let mut gauss = GAUSS_WEIGHTS[3] * f(mid);
    for i in 0..7 {
        let dx = half * KRONROD_NODES[i];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (half * kronrod, half * (kronrod - gauss).abs())
}

struct Worker<'a, F: Fn(f64) -> f64> {
    f: &'a F,
    panels: usize,
    max_panels: usize,
    exhausted: bool,
    mass: f64,
}

impl<F: Fn(f64) -> f64> Worker<'_, F> {
    fn refine(&mut self, a: f64, b: f64, tol_abs: f64, depth: u32) -> (f64, f64) {
        let (value, err) = panel(self.f, a, b);
        self.panels += 1;
        if err <= tol_abs || !err.is_finite() {
            self.mass += value.abs();
            return (value, err);
        }
        if depth >= 45 || self.panels >= self.max_panels {
            self.exhausted = true;
            self.mass += value.abs();
            return (value, err);
        }
        let mid = 0.5 * (a + b);
        let left = self.refine(a, mid, 0.5 * tol_abs, depth + 1);
        let right = self.refine(mid, b, 0.5 * tol_abs, depth + 1);
        (left.0 + right.0, left.1 + right.1)
    }
}

fn run_worker(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol_abs: f64,
    max_panels: usize,
) -> (QuadOutcome, bool, f64) {
    let mut worker = Worker {
        f,
        panels: 0,
        max_panels,
        exhausted: false,
        mass: 0.0,
    };
    let (value, error) = worker.refine(a, b, tol_abs, 0);
    (
        QuadOutcome {
            value,
            error,
            panels: worker.panels,
        },
        worker.exhausted,
        worker.mass,
    )
}

/// Integrate f over [a, b] to the given absolute tolerance.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol_abs: f64,
    max_panels: usize,
) -> Result<QuadOutcome, ConeError> {
    let (outcome, exhausted, _) = run_worker(&f, a, b, tol_abs, max_panels);
    if exhausted && outcome.error > tol_abs {
        return Err(ConeError::ToleranceFailure {
            estimate: outcome.value,
            error: outcome.error,
            tol: tol_abs,
        });
    }
    Ok(outcome)
}

/// Cap on panels per dyadic block; integrands sitting on the evaluation
/// noise floor stop polishing quickly instead of draining the global budget.
const BLOCK_PANELS: usize = 6_000;

/// Headroom factor for the final error check: per-panel error estimates are
/// conservative and a noise-floored block can overstate its error by an order
/// of magnitude without the value being anywhere near that wrong.
const ERROR_HEADROOM: f64 = 20.0;

/// Integrate f over [0, infinity) to the configured relative tolerance,
/// walking dyadic blocks until the tail is negligible.  Individual blocks may
/// stop refining early; reaching the hard cutoff charges the last block value
/// as a tail estimate.  The walk fails only when the accumulated error misses
/// the tolerance relative to the integrand's absolute mass, the honest
/// yardstick when oscillation cancels most of that mass.
pub fn integrate_half_line(
    f: impl Fn(f64) -> f64,
    cfg: &QuadConfig,
) -> Result<QuadOutcome, ConeError> {
    let mut total = 0.0_f64;
    let mut error = 0.0_f64;
    let mut panels = 0usize;
    let mut magnitude = 0.0_f64;
    let mut mass = 0.0_f64;
    let mut quiet_blocks = 0;
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    loop {
        let (probe, _) = panel(&f, lo, hi);
        let scale = magnitude.max(probe.abs()).max(f64::MIN_POSITIVE);
        let budget = cfg.max_panels.saturating_sub(panels).min(BLOCK_PANELS).max(1);
        let (block, _, block_mass) = run_worker(&f, lo, hi, 0.25 * cfg.tol * scale, budget);
        total += block.value;
        error += block.error;
        panels += block.panels;
        mass += block_mass;
        magnitude = magnitude.max(total.abs()).max(block.value.abs());
        if block.value.abs() <= cfg.tol * magnitude.max(f64::MIN_POSITIVE) {
            quiet_blocks += 1;
            if quiet_blocks >= 2 {
                break;
            }
        } else {
            quiet_blocks = 0;
        }
        if hi >= cfg.lam_max {
            error += block.value.abs();
            break;
        }
        lo = hi;
        hi = (2.0 * hi).min(cfg.lam_max);
    }
    if error > ERROR_HEADROOM * cfg.tol * mass.max(f64::MIN_POSITIVE) {
        return Err(ConeError::ToleranceFailure {
            estimate: total,
            error,
            tol: cfg.tol,
        });
    }
    Ok(QuadOutcome {
        value: total,
        error,
        panels,
    })
}
