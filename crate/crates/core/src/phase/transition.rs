//! Finite-window verdicts for the three phase-transition conditions.
//!
//! - cond1: right of the threshold, fractions never drop by more than
//!   `mono` from one slice to the next, and the rightmost fraction is at
//!   least `1 − limit`.
//! - cond2: the mirror image on the left, ending at most `limit`.
//! - cond3: on each side, the log of the mass in windows `[A, A+δ]` grows
//!   linearly with the distance of the window midpoint from the threshold
//!   (positive slope, `R² ≥ r2`). Only windows at distance `≥ cutoff` count.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::{CurveReport, SliceStats};
use crate::report;

#[derive(Clone, Debug, Serialize)]
pub struct TransitionTolerances {
    #[serde(serialize_with = "report::rational")]
    pub mono: BigRational,
    #[serde(serialize_with = "report::rational")]
    pub limit: BigRational,
    pub r2: f64,
    #[serde(serialize_with = "report::rational")]
    pub delta: BigRational,
    #[serde(serialize_with = "report::rational")]
    pub cutoff: BigRational,
    pub min_side_slices: usize,
    pub min_fit_points: usize,
}

impl Default for TransitionTolerances {
    fn default() -> Self {
        TransitionTolerances {
            mono: BigRational::zero(),
            limit: BigRational::new(BigInt::one(), BigInt::from(20)),
            r2: 0.9,
            delta: BigRational::one(),
            cutoff: BigRational::from_integer(BigInt::from(2)),
            min_side_slices: 5,
            min_fit_points: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Verdict { pass, detail }
    }

    pub fn label(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

/// Least-squares fit of `ln(mass)` against distance from the threshold.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthFit {
    pub side: &'static str,
    /// `(window start, distance of midpoint, mass)`.
    pub windows: Vec<(String, f64, u64)>,
    pub slope: f64,
    pub r2: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionVerdicts {
    #[serde(serialize_with = "report::rational")]
    pub threshold: BigRational,
    pub cond1: Verdict,
    pub cond2: Verdict,
    pub cond3: Verdict,
    /// Running minimum of the fractions, from the right edge inward.
    #[serde(serialize_with = "report::rationals")]
    pub lower_envelope: Vec<BigRational>,
    /// Running maximum of the fractions, from the left edge inward.
    #[serde(serialize_with = "report::rationals")]
    pub upper_envelope: Vec<BigRational>,
    pub left_fit: Option<GrowthFit>,
    pub right_fit: Option<GrowthFit>,
    pub tolerances: TransitionTolerances,
}

impl TransitionVerdicts {
    pub fn all_pass(&self) -> bool {
        self.cond1.pass && self.cond2.pass && self.cond3.pass
    }
}

fn show(x: &BigRational) -> String {
    report::compact(x)
}

fn check_right(side: &[SliceStats], tol: &TransitionTolerances) -> (Verdict, Vec<BigRational>) {
    let fr: Vec<BigRational> = side.iter().map(SliceStats::fraction).collect();
    let mut envelope = fr.clone();
    for i in (0..envelope.len().saturating_sub(1)).rev() {
        if envelope[i + 1] < envelope[i] {
            envelope[i] = envelope[i + 1].clone();
        }
    }
    let drop = side.windows(2).zip(fr.windows(2)).find(|(_, f)| f[1] < &f[0] - &tol.mono).map(|(s, f)| {
        format!(
            "fraction drops from {} at {} to {} at {}",
            show(&f[0]),
            show(&s[0].value),
            show(&f[1]),
            show(&s[1].value)
        )
    });
    let edge = fr.last().expect("side is nonempty");
    let edge_ok = edge >= &(BigRational::one() - &tol.limit);
    let detail = match (&drop, edge_ok) {
        (Some(d), _) => d.clone(),
        (None, false) => format!("right-edge fraction {} is below 1 - {}", show(edge), show(&tol.limit)),
        (None, true) => format!("nondecreasing over {} slices, right-edge fraction {}", side.len(), show(edge)),
    };
    (Verdict::new(drop.is_none() && edge_ok, detail), envelope)
}

fn check_left(side: &[SliceStats], tol: &TransitionTolerances) -> (Verdict, Vec<BigRational>) {
    let fr: Vec<BigRational> = side.iter().map(SliceStats::fraction).collect();
    let mut envelope = fr.clone();
    for i in 1..envelope.len() {
        if envelope[i - 1] > envelope[i] {
            envelope[i] = envelope[i - 1].clone();
        }
    }
    let rise = side.windows(2).zip(fr.windows(2)).find(|(_, f)| f[0] > &f[1] + &tol.mono).map(|(s, f)| {
        format!(
            "fraction rises from {} at {} to {} at {} moving left",
            show(&f[1]),
            show(&s[1].value),
            show(&f[0]),
            show(&s[0].value)
        )
    });
    let edge = fr.first().expect("side is nonempty");
    let edge_ok = edge <= &tol.limit;
    let detail = match (&rise, edge_ok) {
        (Some(d), _) => d.clone(),
        (None, false) => format!("left-edge fraction {} exceeds {}", show(edge), show(&tol.limit)),
        (None, true) => format!("nonincreasing leftward over {} slices, left-edge fraction {}", side.len(), show(edge)),
    };
    (Verdict::new(rise.is_none() && edge_ok, detail), envelope)
}

fn window_mass(slices: &[SliceStats], lo: &BigRational, hi: &BigRational) -> u64 {
    slices.iter().filter(|s| &s.value >= lo && &s.value <= hi).map(|s| s.total).sum()
}

fn fit(
    side: &'static str,
    slices: &[SliceStats],
    lo: &BigRational,
    hi: &BigRational,
    t: &BigRational,
    tol: &TransitionTolerances,
) -> GrowthFit {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut windows = Vec::new();
    for s in slices {
        let a = &s.value;
        let b = a + &tol.delta;
        if a < lo || &b > hi {
            continue;
        }
        let mid = (a + &b) / &two;
        let dist = if &mid >= t { &mid - t } else { t - &mid };
        if dist < tol.cutoff {
            continue;
        }
        let mass = window_mass(slices, a, &b);
        if mass == 0 {
            continue;
        }
        windows.push((show(a), dist.to_f64().unwrap_or(f64::NAN), mass));
    }
    let (slope, r2) = least_squares(&windows.iter().map(|w| (w.1, (w.2 as f64).ln())).collect::<Vec<_>>());
    GrowthFit { side, windows, slope, r2 }
}

/// Slope and coefficient of determination of `y` against `x`.
fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    if points.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return (f64::NAN, f64::NAN);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, r2)
}

fn growth_ok(f: &GrowthFit, tol: &TransitionTolerances) -> (bool, String) {
    if f.windows.len() < tol.min_fit_points {
        return (false, format!("{} side: only {} windows beyond the cutoff", f.side, f.windows.len()));
    }
    let ok = f.slope > 0.0 && f.r2 >= tol.r2;
    (ok, format!("{} side: slope {:.4}, R² {:.4} over {} windows", f.side, f.slope, f.r2, f.windows.len()))
}

/// Evaluates the three conditions on `r` around its threshold estimate.
pub fn detect_transition(r: &CurveReport, tol: &TransitionTolerances) -> Result<TransitionVerdicts> {
    let t = &r.threshold;
    let left: Vec<SliceStats> = r.slices.iter().filter(|s| &s.value < t).cloned().collect();
    let right: Vec<SliceStats> = r.slices.iter().filter(|s| &s.value > t).cloned().collect();
    if left.len() < tol.min_side_slices || right.len() < tol.min_side_slices {
        return Err(Error::InsufficientData(format!(
            "need {} slices on each side of the threshold {}, found {} left and {} right",
            tol.min_side_slices,
            show(t),
            left.len(),
            right.len()
        )));
    }
    let (cond1, lower_envelope) = check_right(&right, tol);
    let (cond2, upper_envelope) = check_left(&left, tol);

    let vmin = r.slices.first().expect("nonempty").value.clone();
    let vmax = r.slices.last().expect("nonempty").value.clone();
    let lf = fit("left", &r.slices, &vmin, t, t, tol);
    let rf = fit("right", &r.slices, t, &vmax, t, tol);
    let (lok, ld) = growth_ok(&lf, tol);
    let (rok, rd) = growth_ok(&rf, tol);
    let cond3 = Verdict::new(lok && rok, format!("{ld}; {rd}"));

    Ok(TransitionVerdicts {
        threshold: t.clone(),
        cond1,
        cond2,
        cond3,
        lower_envelope,
        upper_envelope,
        left_fit: Some(lf),
        right_fit: Some(rf),
        tolerances: tol.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_squares_on_a_line() {
        let (s, r2) = least_squares(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]);
        assert!((s - 2.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
        assert!(least_squares(&[(1.0, 1.0)]).0.is_nan());
    }
}
