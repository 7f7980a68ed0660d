//! Logistic-map amplification of the flag probability.
//!
//! The map x → a·x·(1−x) on [0,1] has two properties this module
//! trades on: 0 is a fixed point, and in the chaotic regime (a = 3.71
//! by default) any positive seed grows by a factor ≈ a per step until
//! it reaches the invariant band [a²(4−a)/16, a/4] ≈ [0.2495, 0.9275].
//! Iterating the flag component m₀ = q² therefore separates q² = 0
//! (stays 0 forever) from q² ≥ 2⁻ⁿ (crosses any threshold below the
//! band within O(n) steps). Only the |1⟩⟨1| diagonal entry of the
//! density matrix is tracked; detection needs nothing else.

use serde::Serialize;
use thiserror::Error;

/// Default map parameter, inside the chaotic regime.
pub const DEFAULT_A: f64 = 3.71;

/// Default detection threshold, below the chaotic band floor for the
/// default `a` so a trajectory that enters the band stays above it.
pub const DEFAULT_TAU: f64 = 0.2;

#[derive(Debug, Error)]
pub enum ChaosError {
    #[error("map parameter a={0} outside (0, 4]")]
    ParamA(f64),
    #[error("threshold tau={0} outside (0, 1)")]
    ParamTau(f64),
    #[error("iteration budget k_max must be at least 1")]
    ParamKMax,
    #[error("value x={0} outside [0, 1]")]
    DomainX(f64),
    #[error("lyapunov start x0={0} outside the open interval (0, 1)")]
    DomainX0(f64),
    #[error("burn_in and samples must both be at least 1")]
    LyapunovCounts,
}

/// Amplifier configuration: map parameter, detection threshold, and
/// iteration budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogisticParams {
    pub a: f64,
    pub tau: f64,
    pub k_max: u32,
}

impl LogisticParams {
    pub fn new(a: f64, tau: f64, k_max: u32) -> Result<Self, ChaosError> {
        if !(a > 0.0 && a <= 4.0) {
            return Err(ChaosError::ParamA(a));
        }
        if !(tau > 0.0 && tau < 1.0) {
            return Err(ChaosError::ParamTau(tau));
        }
        if k_max == 0 {
            return Err(ChaosError::ParamKMax);
        }
        Ok(LogisticParams { a, tau, k_max })
    }

    /// Defaults sized for an n-variable instance, whose smallest
    /// nonzero flag probability is 2⁻ⁿ.
    pub fn for_qubits(n: u32) -> Self {
        LogisticParams {
            a: DEFAULT_A,
            tau: DEFAULT_TAU,
            k_max: default_k_max(n, DEFAULT_A),
        }
    }
}

/// Iteration budget ⌈n·ln2 / ln a⌉ + 8: small seeds grow by ≈ a per
/// step, so 2⁻ⁿ needs about n·ln2/ln a steps to reach order one; the
/// margin absorbs the (1−x) slowdown near the band.
pub fn default_k_max(n: u32, a: f64) -> u32 {
    (f64::from(n) * std::f64::consts::LN_2 / a.ln()).ceil() as u32 + 8
}

#[inline]
fn step_unchecked(x: f64, a: f64) -> f64 {
    a * x * (1.0 - x)
}

/// One application of the map. The result stays in [0,1] because
/// a·x·(1−x) ≤ a/4 ≤ 1 there.
pub fn logistic_step(x: f64, a: f64) -> Result<f64, ChaosError> {
    if !(a > 0.0 && a <= 4.0) {
        return Err(ChaosError::ParamA(a));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(ChaosError::DomainX(x));
    }
    Ok(step_unchecked(x, a))
}

/// Flag component after some number of amplifier steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplifierState {
    pub m: f64,
    pub step: u32,
}

/// The first amplifier step: the flag entry of the density matrix
/// becomes a·q²·(1−q²) after one application of the map.
pub fn amplifier_first_step(q_squared: f64, a: f64) -> Result<AmplifierState, ChaosError> {
    let m = logistic_step(q_squared, a)?;
    Ok(AmplifierState { m, step: 1 })
}

/// Iterated flag component, starting at m₀ = q².
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogisticTrajectory {
    pub params: LogisticParams,
    /// values[k] is the flag component after k steps; values[0] = q².
    pub values: Vec<f64>,
    /// First k with values[k] ≥ tau, if any within the budget.
    pub crossing_step: Option<u32>,
}

/// Iterate the map from q², recording every value. Stops as soon as a
/// value reaches tau (that includes q² itself at step 0) or after
/// k_max steps.
pub fn iterate(q_squared: f64, params: &LogisticParams) -> Result<LogisticTrajectory, ChaosError> {
    if !(0.0..=1.0).contains(&q_squared) {
        return Err(ChaosError::DomainX(q_squared));
    }
    let mut values = Vec::with_capacity(params.k_max as usize + 1);
    let mut crossing_step = None;
    let mut x = q_squared;
    values.push(x);
    if x >= params.tau {
        crossing_step = Some(0);
    } else {
        for k in 1..=params.k_max {
            x = step_unchecked(x, params.a);
            values.push(x);
            if x >= params.tau {
                crossing_step = Some(k);
                break;
            }
        }
    }
    Ok(LogisticTrajectory {
        params: *params,
        values,
        crossing_step,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
        })
    }
}

/// Classify q² by threshold crossing. q² ≥ tau is SAT outright (this
/// covers the degenerate q² = 1, which one naive map step would send
/// to 0); otherwise SAT exactly when some trajectory value reaches tau
/// within the budget. An exact zero can never leave the fixed point,
/// so UNSAT is certain there.
pub fn classify(
    q_squared: f64,
    params: &LogisticParams,
) -> Result<(Verdict, LogisticTrajectory), ChaosError> {
    let trajectory = iterate(q_squared, params)?;
    let verdict = if trajectory.crossing_step.is_some() {
        Verdict::Sat
    } else {
        Verdict::Unsat
    };
    Ok((verdict, trajectory))
}

/// Lyapunov exponent estimate with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub lambda: f64,
    pub samples_used: u64,
    /// Samples landing exactly on x = 1/2, where the derivative
    /// vanishes and the log diverges; they are skipped.
    pub skipped: u64,
}

/// Time-averaged log-derivative estimate of the Lyapunov exponent:
/// λ ≈ (1/samples)·Σ ln|a(1−2x_k)| along the post-burn-in trajectory.
/// If every sample sits on the zero-derivative point the estimate is
/// −∞ (superstable orbit).
pub fn lyapunov(a: f64, x0: f64, burn_in: u32, samples: u32) -> Result<LyapunovEstimate, ChaosError> {
    if !(a > 0.0 && a <= 4.0) {
        return Err(ChaosError::ParamA(a));
    }
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(ChaosError::DomainX0(x0));
    }
    if burn_in == 0 || samples == 0 {
        return Err(ChaosError::LyapunovCounts);
    }
    let mut x = x0;
    for _ in 0..burn_in {
        x = step_unchecked(x, a);
    }
    let mut sum = 0.0;
    let mut used = 0u64;
    let mut skipped = 0u64;
    for _ in 0..samples {
        let deriv = a * (1.0 - 2.0 * x);
        if deriv == 0.0 {
            skipped += 1;
        } else {
            sum += deriv.abs().ln();
            used += 1;
        }
        x = step_unchecked(x, a);
    }
    let lambda = if used > 0 { sum / used as f64 } else { f64::NEG_INFINITY };
    Ok(LyapunovEstimate {
        lambda,
        samples_used: used,
        skipped,
    })
}

/// One trajectory per seed, for side-by-side plotting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplificationTable {
    pub params: LogisticParams,
    pub columns: Vec<AmplificationColumn>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplificationColumn {
    pub q_squared: f64,
    pub values: Vec<f64>,
    pub crossing_step: Option<u32>,
}

impl AmplificationTable {
    /// Rows are step indices, one column per seed. Trajectories that
    /// crossed early leave their later cells empty.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        write!(w, "step")?;
        for col in &self.columns {
            write!(w, ",{}", col.q_squared)?;
        }
        writeln!(w)?;
        let rows = self.columns.iter().map(|c| c.values.len()).max().unwrap_or(0);
        for step in 0..rows {
            write!(w, "{step}")?;
            for col in &self.columns {
                match col.values.get(step) {
                    Some(v) => write!(w, ",{v}")?,
                    None => write!(w, ",")?,
                }
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Run the amplifier on each seed and collect the traces as a table.
pub fn trace_amplification(
    q_squared_list: &[f64],
    params: &LogisticParams,
) -> Result<AmplificationTable, ChaosError> {
    let columns = q_squared_list
        .iter()
        .map(|&q2| {
            iterate(q2, params).map(|t| AmplificationColumn {
                q_squared: q2,
                values: t.values,
                crossing_step: t.crossing_step,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AmplificationTable {
        params: *params,
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k_max: u32) -> LogisticParams {
        LogisticParams::new(DEFAULT_A, DEFAULT_TAU, k_max).unwrap()
    }

    #[test]
    fn step_fixes_zero_and_one_to_zero() {
        for a in [0.3, 1.0, DEFAULT_A, 4.0] {
            assert_eq!(logistic_step(0.0, a).unwrap(), 0.0);
            assert_eq!(logistic_step(1.0, a).unwrap(), 0.0);
        }
    }

    #[test]
    fn step_at_half() {
        assert_eq!(logistic_step(0.5, DEFAULT_A).unwrap(), 0.9275);
    }

    #[test]
    fn step_validates_domain() {
        assert!(matches!(logistic_step(-0.1, 2.0), Err(ChaosError::DomainX(_))));
        assert!(matches!(logistic_step(1.1, 2.0), Err(ChaosError::DomainX(_))));
        assert!(matches!(logistic_step(0.5, 0.0), Err(ChaosError::ParamA(_))));
        assert!(matches!(logistic_step(0.5, 4.5), Err(ChaosError::ParamA(_))));
    }

    #[test]
    fn first_step_matches_map() {
        assert_eq!(amplifier_first_step(0.0, DEFAULT_A).unwrap().m, 0.0);
        let s = amplifier_first_step(0.125, DEFAULT_A).unwrap();
        assert_eq!(s.m, 0.40578125);
        assert_eq!(s.step, 1);
        assert_eq!(amplifier_first_step(1.0, DEFAULT_A).unwrap().m, 0.0);
        // Same expression, bit for bit.
        for q2 in [0.0, 1e-9, 0.125, 0.5, 0.99, 1.0] {
            assert_eq!(
                amplifier_first_step(q2, DEFAULT_A).unwrap().m.to_bits(),
                logistic_step(q2, DEFAULT_A).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn zero_seed_stays_exactly_zero() {
        let t = iterate(0.0, &params(1000)).unwrap();
        assert_eq!(t.values.len(), 1001);
        assert!(t.values.iter().all(|&v| v == 0.0));
        assert_eq!(t.crossing_step, None);
    }

    #[test]
    fn paper_instance_seed_crosses_at_step_one() {
        let t = iterate(0.125, &params(20)).unwrap();
        assert_eq!(t.crossing_step, Some(1));
        assert_eq!(t.values, vec![0.125, 0.40578125]);
    }

    #[test]
    fn smallest_qsim_seed_crosses_at_step_ten() {
        let t = iterate(2f64.powi(-20), &params(default_k_max(20, DEFAULT_A))).unwrap();
        assert_eq!(t.crossing_step, Some(10));
        assert_eq!(t.values.len(), 11);
    }

    #[test]
    fn trajectory_recurrence_is_exact() {
        let t = iterate(0.01, &params(40)).unwrap();
        for k in 0..t.values.len() - 1 {
            assert_eq!(t.values[k + 1], DEFAULT_A * t.values[k] * (1.0 - t.values[k]));
        }
    }

    #[test]
    fn trajectories_stay_in_unit_interval() {
        for q2 in [1e-12, 0.1, 0.3, 0.7, 0.999] {
            let t = iterate(q2, &LogisticParams::new(4.0, 0.9999, 200).unwrap()).unwrap();
            assert!(t.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn growth_is_monotone_below_band_entry() {
        // While x < 1 − 1/a the map increases x (for a > 1).
        let bound = 1.0 - 1.0 / DEFAULT_A;
        let t = iterate(1e-10, &params(60)).unwrap();
        for k in 0..t.values.len() - 1 {
            if t.values[k] > 0.0 && t.values[k] < bound {
                assert!(t.values[k + 1] > t.values[k]);
            }
        }
    }

    #[test]
    fn classify_separates_zero_from_small_positive() {
        let (v, t) = classify(0.0, &params(30)).unwrap();
        assert_eq!(v, Verdict::Unsat);
        assert_eq!(t.crossing_step, None);

        let (v, t) = classify(0.125, &params(30)).unwrap();
        assert_eq!(v, Verdict::Sat);
        assert_eq!(t.crossing_step, Some(1));
    }

    #[test]
    fn classify_handles_degenerate_one_without_iterating() {
        let (v, t) = classify(1.0, &params(30)).unwrap();
        assert_eq!(v, Verdict::Sat);
        assert_eq!(t.crossing_step, Some(0));
        assert_eq!(t.values, vec![1.0]);
    }

    #[test]
    fn separation_holds_for_all_dyadic_seeds_up_to_40() {
        for n in 1..=40 {
            let p = LogisticParams::for_qubits(n);
            let (v, t) = classify(2f64.powi(-(n as i32)), &p).unwrap();
            assert_eq!(v, Verdict::Sat, "q²=2^-{n} must amplify");
            assert!(t.crossing_step.unwrap() <= p.k_max);
        }
    }

    #[test]
    fn lyapunov_is_positive_in_chaotic_regime() {
        let est = lyapunov(DEFAULT_A, 0.3, 1000, 100_000).unwrap();
        assert!(est.lambda > 0.3, "lambda = {}", est.lambda);
        assert_eq!(est.skipped, 0);
    }

    #[test]
    fn lyapunov_matches_fixed_point_multiplier() {
        // x* = 0 attracts with multiplier a, so λ → ln a.
        let est = lyapunov(0.5, 0.3, 1000, 100_000).unwrap();
        assert!((est.lambda - 0.5f64.ln()).abs() < 1e-3, "lambda = {}", est.lambda);
    }

    #[test]
    fn lyapunov_reports_superstable_orbit_as_strongly_negative() {
        let est = lyapunov(2.0, 0.3, 1000, 100_000).unwrap();
        assert!(est.lambda < -5.0, "lambda = {}", est.lambda);
    }

    #[test]
    fn lyapunov_validates_inputs() {
        assert!(matches!(lyapunov(5.0, 0.3, 1, 1), Err(ChaosError::ParamA(_))));
        assert!(matches!(lyapunov(2.0, 0.0, 1, 1), Err(ChaosError::DomainX0(_))));
        assert!(matches!(lyapunov(2.0, 0.3, 0, 1), Err(ChaosError::LyapunovCounts)));
        assert!(matches!(lyapunov(2.0, 0.3, 1, 0), Err(ChaosError::LyapunovCounts)));
    }

    #[test]
    fn trace_table_layout() {
        let p = params(25);
        let table = trace_amplification(&[0.0, 2f64.powi(-5), 0.5], &p).unwrap();
        assert_eq!(table.columns.len(), 3);
        assert_eq!(table.columns[0].crossing_step, None);
        assert_eq!(table.columns[1].crossing_step, Some(2));
        assert_eq!(table.columns[2].crossing_step, Some(0));
        assert_eq!(table.columns[2].values, vec![0.5]);

        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "step,0,0.00000095367431640625,0.5");
        assert!(lines[1].starts_with("0,0,"));
        // the zero column runs the full budget; the others stop early
        assert_eq!(lines.len(), 2 + p.k_max as usize);
    }

    #[test]
    fn crossing_steps_increase_with_smaller_seeds() {
        let p = params(40);
        let table =
            trace_amplification(&[2f64.powi(-5), 2f64.powi(-10), 2f64.powi(-20)], &p).unwrap();
        let steps: Vec<u32> = table
            .columns
            .iter()
            .map(|c| c.crossing_step.unwrap())
            .collect();
        assert_eq!(steps, vec![2, 5, 10]);
    }

    #[test]
    fn params_validation() {
        assert!(matches!(LogisticParams::new(0.0, 0.2, 10), Err(ChaosError::ParamA(_))));
        assert!(matches!(LogisticParams::new(4.1, 0.2, 10), Err(ChaosError::ParamA(_))));
        assert!(matches!(LogisticParams::new(3.7, 0.0, 10), Err(ChaosError::ParamTau(_))));
        assert!(matches!(LogisticParams::new(3.7, 1.0, 10), Err(ChaosError::ParamTau(_))));
        assert!(matches!(LogisticParams::new(3.7, 0.2, 0), Err(ChaosError::ParamKMax)));
    }

    #[test]
    fn default_budget_is_linear_in_n() {
        assert_eq!(default_k_max(20, DEFAULT_A), 19);
        assert_eq!(default_k_max(40, DEFAULT_A), 30);
    }
}
