use serde::{Deserialize, Serialize};

use super::scaling::{ScalingProfile, ScalingQuery};
use super::sequence::RescalingTrace;
use crate::error::{Error, Result};
use crate::maps::JetExpansion;

/// Room for rounding when testing that Cauchy differences do not grow.
const CAUCHY_SLACK: f64 = 1e-10;
/// Suppressed magnitudes below this are treated as exactly zero.
const DECAY_FLOOR: f64 = 1e-12;
/// Decay slope (in `t_n`) accepted as "like `e^{-t/2}` or faster", with a
/// small allowance for the finite fit.
const DECAY_SLOPE: f64 = -0.45;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub tail: usize,
    /// `max |jet_n - jet_{n-1}|` for the last `tail` indices, oldest first.
    pub differences: Vec<f64>,
    pub max_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub t: Vec<f64>,
    /// Largest coefficient of `g_n` in a class with negative scaling exponent.
    pub magnitudes: Vec<f64>,
    /// Least-squares slope of `ln magnitude` against `t_n`, when at least two
    /// magnitudes are above the floor.
    pub slope: Option<f64>,
    pub decaying: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitJet {
    pub jet: JetExpansion,
    pub cauchy: CauchyReport,
    pub decay: DecayReport,
}

fn suppressed_magnitude(jet: &JetExpansion, profile: &ScalingProfile) -> Result<f64> {
    let mut mag: f64 = 0.0;
    for j in 0..profile.big_m {
        for k in 0..profile.m {
            if profile.exponent(ScalingQuery::First { j: j + 1, k: k + 1 })? < 0.0 {
                mag = mag.max(jet.first[j][k].norm());
            }
            for l in 0..profile.m {
                if profile.exponent(ScalingQuery::Second { j: j + 1, k: k + 1, l: l + 1 })? < 0.0 {
                    mag = mag.max(jet.second[j][k][l].norm());
                }
            }
        }
    }
    Ok(mag)
}

fn slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Some(sxy / sxx)
}

/// The jet of `g_n` at the largest index, with a Cauchy report over the
/// last `tail` consecutive differences and the decay of the suppressed
/// coefficients over the whole trace.
pub fn extract_limit_jet(trace: &RescalingTrace, tail: usize) -> Result<LimitJet> {
    let n = trace.entries.len();
    if tail == 0 || n < tail + 1 {
        return Err(Error::input(format!(
            "extract_limit_jet: tail {tail} needs at least {} entries, trace has {n}",
            tail + 1
        )));
    }
    let jets: Vec<&JetExpansion> = trace.entries.iter().map(|e| &e.jet_g).collect();
    let differences: Vec<f64> = (n - tail..n).map(|i| jets[i].max_difference(jets[i - 1])).collect();
    if let Some(w) = differences.windows(2).find(|w| w[1] > w[0] + CAUCHY_SLACK) {
        return Err(Error::Diagnostic(format!(
            "jets of g_n are not Cauchy over the tail: difference grows from {:.3e} to {:.3e}",
            w[0], w[1]
        )));
    }
    let profile = ScalingProfile::new(trace.domain_dim(), trace.target_dim())?;
    let t: Vec<f64> = trace.entries.iter().map(|e| e.t).collect();
    let magnitudes = jets
        .iter()
        .map(|j| suppressed_magnitude(j, &profile))
        .collect::<Result<Vec<f64>>>()?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(&magnitudes)
        .filter(|(_, &m)| m > DECAY_FLOOR)
        .map(|(&x, &m)| (x, m.ln()))
        .unzip();
    let s = slope(&xs, &ys);
    let decaying = match s {
        Some(s) => s <= DECAY_SLOPE,
        None => xs.is_empty(),
    };
    Ok(LimitJet {
        jet: jets[n - 1].clone(),
        cauchy: CauchyReport {
            tail,
            max_difference: differences.iter().copied().fold(0.0, f64::max),
            differences,
        },
        decay: DecayReport {
            t,
            magnitudes,
            slope: s,
            decaying,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exponential() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|t| -0.5 * t + 3.0).collect();
        assert!((slope(&x, &y).unwrap() + 0.5).abs() < 1e-14);
        assert_eq!(slope(&[1.0], &[2.0]), None);
    }
}
