use serde::{Deserialize, Serialize};

use super::sequence::RescalingTrace;
use crate::error::{Error, Result};

/// A jet coefficient, 1-based: `∂g_j/∂z_k` or `∂²g_j/∂z_k∂z_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingQuery {
    First { j: usize, k: usize },
    Second { j: usize, k: usize, l: usize },
}

/// Exponents `e` with `σ = exp(e t)` relating the jets of `a_{-t} h a_t` to
/// those of `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingProfile {
    pub m: usize,
    pub big_m: usize,
    /// `first[j][k]`, 0-based.
    pub first: Vec<Vec<f64>>,
    /// `second[j][k][l]`, 0-based.
    pub second: Vec<Vec<Vec<f64>>>,
}

fn first_exponent(j: usize, k: usize) -> f64 {
    match (j, k) {
        (1, 1) => 0.0,
        (1, _) => 0.5,
        (_, 1) => -0.5,
        _ => 0.0,
    }
}

fn second_exponent(j: usize, k: usize, l: usize) -> f64 {
    let ones = (k == 1) as u8 + (l == 1) as u8;
    match (j == 1, ones) {
        (true, 2) => -1.0,
        (true, 1) => -0.5,
        (true, _) => 0.0,
        (false, 2) => -1.5,
        (false, 1) => -1.0,
        (false, _) => -0.5,
    }
}

impl ScalingProfile {
    pub fn new(m: usize, big_m: usize) -> Result<Self> {
        if m == 0 || big_m < m {
            return Err(Error::input(format!("scaling profile for C^{m} -> C^{big_m}")));
        }
        let first = (1..=big_m)
            .map(|j| (1..=m).map(|k| first_exponent(j, k)).collect())
            .collect();
        let second = (1..=big_m)
            .map(|j| {
                (1..=m)
                    .map(|k| (1..=m).map(|l| second_exponent(j, k, l)).collect())
                    .collect()
            })
            .collect();
        Ok(ScalingProfile { m, big_m, first, second })
    }

    pub fn exponent(&self, q: ScalingQuery) -> Result<f64> {
        let (j, k, l) = match q {
            ScalingQuery::First { j, k } => (j, k, 1),
            ScalingQuery::Second { j, k, l } => (j, k, l),
        };
        if !(1..=self.big_m).contains(&j) || !(1..=self.m).contains(&k) || !(1..=self.m).contains(&l) {
            return Err(Error::input(format!(
                "scaling query {q:?} out of range for C^{} -> C^{}",
                self.m, self.big_m
            )));
        }
        Ok(match q {
            ScalingQuery::First { .. } => self.first[j - 1][k - 1],
            ScalingQuery::Second { .. } => self.second[j - 1][k - 1][l - 1],
        })
    }

    /// `σ = exp(e t)`.
    pub fn factor(&self, q: ScalingQuery, t: f64) -> Result<f64> {
        Ok((self.exponent(q)? * t).exp())
    }
}

/// `σ` for a query against `profile` at time `t`.
pub fn scaling_factors(profile: &ScalingProfile, q: ScalingQuery, t: f64) -> Result<f64> {
    profile.factor(q, t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    /// Worst `|g - σ h| / max(|g|, |σ h|, 1)` over every coefficient and index.
    pub max_relative_error: f64,
    pub worst: Option<(usize, ScalingQuery)>,
    pub coefficients: usize,
}

/// Compares every first- and second-order coefficient of `g_n` with the
/// scaled coefficient of `h_n`, using `σ` at the Siegel time of each entry.
pub fn verify_scaling_law(trace: &RescalingTrace) -> Result<ScalingReport> {
    let profile = ScalingProfile::new(trace.domain_dim(), trace.target_dim())?;
    let mut report = ScalingReport {
        max_relative_error: 0.0,
        worst: None,
        coefficients: 0,
    };
    let (m, big_m) = (profile.m, profile.big_m);
    for (idx, e) in trace.entries.iter().enumerate() {
        let tau = e.siegel_time;
        let mut record = |g: num_complex::Complex64, h: num_complex::Complex64, q: ScalingQuery| -> Result<()> {
            let sh = h * profile.factor(q, tau)?;
            let err = (g - sh).norm() / g.norm().max(sh.norm()).max(1.0);
            report.coefficients += 1;
            if err > report.max_relative_error || report.worst.is_none() {
                report.max_relative_error = report.max_relative_error.max(err);
                report.worst = Some((idx, q));
            }
            Ok(())
        };
        for j in 0..big_m {
            for k in 0..m {
                record(e.jet_g.first[j][k], e.jet_h.first[j][k], ScalingQuery::First { j: j + 1, k: k + 1 })?;
                for l in 0..m {
                    record(
                        e.jet_g.second[j][k][l],
                        e.jet_h.second[j][k][l],
                        ScalingQuery::Second { j: j + 1, k: k + 1, l: l + 1 },
                    )?;
                }
            }
        }
    }
    Ok(report)
}
