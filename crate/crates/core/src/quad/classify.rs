//! Convergence classification of shell ledgers.
//!
//! Contributions of geometric shells toward the singular set are fitted by
//! two one-parameter decay models over the deepest twelve resolved shells:
//!
//! * geometric: log2(c_k) linear in k, slope -beta; pure powers rho^-q land
//!   here exactly, with beta = (critical exponent gap);
//! * log-power: ln(c_k) linear in ln(w_k) with w = log(e/rho), exponent q;
//!   this is the natural frame for the cusp family, whose shell masses decay
//!   like w^-q and look like beta -> 0 to the geometric fit at every q.
//!
//! The better-fitting model decides. Thresholds beta >= 0.1 (convergent) and
//! beta <= 0.02 (divergent) from the geometric rule are applied to q - 1 in
//! the log-power frame; the band between is reported as Inconclusive rather
//! than forced either way.

use super::gauss::compensated_sum;
use super::shell::{ShellLedger, Verdict};
use crate::error::{Error, Result};
use crate::profile::w_of_rho;

/// Fitted decay at least this steep classifies as Convergent.
pub const BETA_CONV: f64 = 0.1;
/// Fitted decay at most this shallow classifies as Divergent.
pub const BETA_DIV: f64 = 0.02;
/// Slack so data sitting exactly on a threshold classifies deterministically.
const EDGE_EPS: f64 = 1e-6;
/// Number of deepest shells entering the fits.
pub const FIT_WINDOW: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitModel {
    Geometric,
    LogPower,
}

/// Diagnostics of the tail fit that produced a verdict.
#[derive(Clone, Copy, Debug)]
pub struct TailFit {
    pub model: FitModel,
    /// Geometric slope: contributions ~ 2^(-beta k).
    pub beta: f64,
    pub beta_rms: f64,
    /// Log-power exponent: contributions ~ w^-q per shell.
    pub q: f64,
    pub q_rms: f64,
    /// Extrapolated mass beyond the resolved shells (0 unless Convergent).
    pub tail: f64,
    /// Clean log-divergence or otherwise threshold-adjacent divergent fit.
    pub borderline: bool,
}

fn linfit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let r = y - (intercept + slope * x);
        ss += r * r;
    }
    (slope, intercept, (ss / n).sqrt())
}

/// Classifies a ledger accumulating toward rho = 0.
///
/// Requires at least [`FIT_WINDOW`] shells resolved to 1% relative accuracy.
pub fn classify(ledger: &ShellLedger) -> Result<(Verdict, TailFit)> {
    let rows = &ledger.rows;
    if rows.len() < FIT_WINDOW {
        return Err(Error::InsufficientShells(format!(
            "{} shells resolved, need {FIT_WINDOW}",
            rows.len()
        )));
    }
    let window = &rows[rows.len() - FIT_WINDOW..];
    let cmax = rows.iter().fold(0.0f64, |m, r| m.max(r.contribution));
    let dead = cmax * 1e-14 + 1e-290;

    let total = ledger.total();
    let err_sum: f64 = rows.iter().map(|r| r.est_error).sum();
    let last3: f64 = rows.iter().rev().take(3).map(|r| r.contribution).sum();

    // integrand died out near the axis: nothing left to extrapolate
    if window.iter().all(|r| r.contribution <= dead) {
        let fit = TailFit {
            model: FitModel::Geometric,
            beta: f64::INFINITY,
            beta_rms: 0.0,
            q: f64::INFINITY,
            q_rms: 0.0,
            tail: 0.0,
            borderline: false,
        };
        let verdict = Verdict::Convergent { value: total, abs_err: err_sum + last3 };
        return Ok((verdict, fit));
    }

    let live: Vec<_> = window.iter().filter(|r| r.contribution > dead).collect();
    if live.len() < FIT_WINDOW / 2 {
        return Err(Error::InsufficientShells(
            "shell contributions vanish irregularly inside the fit window".into(),
        ));
    }
    for r in &live {
        if r.est_error > 0.01 * r.contribution {
            return Err(Error::InsufficientShells(format!(
                "shell k={} resolved to {:.2e} relative, need 1e-2",
                r.k,
                r.est_error / r.contribution
            )));
        }
    }

    let ys: Vec<f64> = live.iter().map(|r| r.contribution.ln()).collect();
    let ks: Vec<f64> = live.iter().map(|r| r.k as f64).collect();
    let (slope_g, _icept_g, rms_g) = linfit(&ks, &ys);
    let beta = -slope_g / std::f64::consts::LN_2;

    let ws: Vec<f64> = live
        .iter()
        .map(|r| w_of_rho((r.rho_lo * r.rho_hi).sqrt()))
        .collect();
    let log_ok = ws.iter().all(|&w| w > 1e-9);
    let (q, icept_l, rms_l) = if log_ok {
        let xs: Vec<f64> = ws.iter().map(|w| w.ln()).collect();
        let (s, i, r) = linfit(&xs, &ys);
        (-s, i, r)
    } else {
        (f64::NAN, 0.0, f64::INFINITY)
    };

    let model = if log_ok && rms_l < 0.5 * rms_g {
        FitModel::LogPower
    } else {
        FitModel::Geometric
    };
    let crit = match model {
        FitModel::Geometric => beta,
        FitModel::LogPower => q - 1.0,
    };

    let mut fit = TailFit {
        model,
        beta,
        beta_rms: rms_g,
        q,
        q_rms: rms_l,
        tail: 0.0,
        borderline: false,
    };

    let verdict = if crit >= BETA_CONV - EDGE_EPS {
        let last = rows.last().expect("nonempty ledger");
        fit.tail = match model {
            FitModel::Geometric => {
                let r = 2.0f64.powf(-beta);
                last.contribution * r / (1.0 - r)
            }
            FitModel::LogPower => {
                // sum A w_m^-q over the unresolved shells, w spaced by ln 2
                let a = icept_l.exp();
                let w_last = w_of_rho((last.rho_lo * last.rho_hi).sqrt());
                let ln2 = std::f64::consts::LN_2;
                let mut acc = 0.0;
                let mut m = 1usize;
                while m <= 200_000 {
                    let term = a * (w_last + m as f64 * ln2).powf(-q);
                    acc += term;
                    if term < 1e-16 * acc {
                        break;
                    }
                    m += 1;
                }
                if m > 200_000 {
                    let w_edge = w_last + (m as f64 + 0.5) * ln2;
                    acc += a * w_edge.powf(1.0 - q) / ((q - 1.0) * ln2);
                }
                acc
            }
        };
        Verdict::Convergent {
            value: total + fit.tail,
            abs_err: err_sum + fit.tail.max(last3),
        }
    } else if crit <= BETA_DIV + EDGE_EPS {
        fit.borderline = crit.abs() <= BETA_DIV + EDGE_EPS;
        Verdict::Divergent { beta }
    } else {
        Verdict::Inconclusive { beta }
    };
    Ok((verdict, fit))
}

/// Compensated sum of shell contributions, deepest first.
pub(crate) fn ledger_total(rows_deep_first: impl Iterator<Item = f64>) -> f64 {
    compensated_sum(rows_deep_first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::shell::{ShellLedger, ShellRow};

    fn ledger_from(contributions: &[f64]) -> ShellLedger {
        let rows = contributions
            .iter()
            .enumerate()
            .map(|(k, &c)| ShellRow {
                k: k as u32,
                rho_lo: 2.0f64.powi(-(k as i32) - 1),
                rho_hi: 2.0f64.powi(-(k as i32)),
                contribution: c,
                est_error: c.abs() * 1e-6,
                cells: 1,
            })
            .collect();
        ShellLedger { rho0: 1.0, rho_min: 0.0, rows }
    }

    #[test]
    fn geometric_halving_is_convergent() {
        let c: Vec<f64> = (0..16).map(|k| 2.0f64.powi(-k)).collect();
        let (v, fit) = classify(&ledger_from(&c)).unwrap();
        assert!((fit.beta - 1.0).abs() < 1e-9);
        match v {
            Verdict::Convergent { value, .. } => {
                // full geometric series sums to 2
                assert!((value - 2.0).abs() < 1e-9, "value {value}");
            }
            other => panic!("expected Convergent, got {other:?}"),
        }
    }

    #[test]
    fn flat_contributions_are_log_divergent() {
        let c = vec![0.7; 16];
        let (v, fit) = classify(&ledger_from(&c)).unwrap();
        assert!(matches!(v, Verdict::Divergent { .. }));
        assert!(fit.beta.abs() < 1e-12);
        assert!(fit.borderline, "clean log divergence flags borderline");
    }

    #[test]
    fn growing_contributions_diverge() {
        let c: Vec<f64> = (0..16).map(|k| 2.0f64.powf(0.5 * k as f64)).collect();
        let (v, fit) = classify(&ledger_from(&c)).unwrap();
        assert!(matches!(v, Verdict::Divergent { .. }));
        assert!((fit.beta + 0.5).abs() < 1e-9);
        assert!(!fit.borderline);
    }

    #[test]
    fn log_power_family_is_recognized() {
        // c_k ~ w_k^-1.5 with w = 1 + (k + 1/2) ln 2: convergent in truth,
        // nearly flat to the geometric fit
        let ln2 = std::f64::consts::LN_2;
        let c: Vec<f64> = (0..41)
            .map(|k| (1.0 + (k as f64 + 0.5) * ln2).powf(-1.5))
            .collect();
        let (v, fit) = classify(&ledger_from(&c)).unwrap();
        assert_eq!(fit.model, FitModel::LogPower);
        assert!((fit.q - 1.5).abs() < 0.02, "q = {}", fit.q);
        assert!(matches!(v, Verdict::Convergent { .. }));
        // 3/4-power version diverges
        let c: Vec<f64> = (0..41)
            .map(|k| (1.0 + (k as f64 + 0.5) * ln2).powf(-0.75))
            .collect();
        let (v, fit) = classify(&ledger_from(&c)).unwrap();
        assert_eq!(fit.model, FitModel::LogPower);
        assert!(matches!(v, Verdict::Divergent { .. }));
    }

    #[test]
    fn near_critical_power_is_inconclusive() {
        let c: Vec<f64> = (0..20).map(|k| 2.0f64.powf(-0.05 * k as f64)).collect();
        let (v, _) = classify(&ledger_from(&c)).unwrap();
        assert!(matches!(v, Verdict::Inconclusive { .. }));
    }

    #[test]
    fn too_few_or_noisy_shells_error() {
        let c = vec![1.0; 8];
        assert!(matches!(
            classify(&ledger_from(&c)),
            Err(Error::InsufficientShells(_))
        ));
        let mut led = ledger_from(&vec![1.0; 14]);
        led.rows[13].est_error = 0.5;
        assert!(matches!(classify(&led), Err(Error::InsufficientShells(_))));
    }
}
