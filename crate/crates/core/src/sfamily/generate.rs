use num::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::{BarChart, SFamilyError};
use crate::rational::{serde_q, Q};

/// Parameters of an S(C, D) chart on platforms `d` units long.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SFamilySpec {
    #[serde(rename = "C")]
    pub c: u32,
    #[serde(rename = "D", with = "serde_q")]
    pub d_steps: Q,
    pub d: u32,
}

impl SFamilySpec {
    /// Step size `h = d/D`, in units.
    pub fn step(&self) -> Q {
        Q::from_integer(self.d.into()) / &self.d_steps
    }

    /// Smallest platform length making the steps integral: the numerator of `D`.
    pub fn with_minimal_platform(c: u32, d_steps: Q) -> Self {
        let d = d_steps.numer().to_u32().unwrap_or(u32::MAX);
        Self { c, d_steps, d }
    }
}

/// Default bar labels `A, B, C, ...`, bottom to top.
pub fn default_labels(c: u32) -> Vec<String> {
    (0..c)
        .map(|i| match char::from_u32('A' as u32 + i) {
            Some(ch) if i < 26 => ch.to_string(),
            _ => format!("S{}", i + 1),
        })
        .collect()
}

/// S(C, D) chart: `b_i = d + (i-1)·d/D` for `i = 1..C`, bottom to top, and `M = b_C`.
pub fn generate_s(c: u32, d_steps: &Q, d: u32) -> Result<BarChart, SFamilyError> {
    generate_s_labeled(c, d_steps, d, &default_labels(c))
}

pub fn generate_s_labeled(c: u32, d_steps: &Q, d: u32, labels: &[String]) -> Result<BarChart, SFamilyError> {
    if c == 0 || d == 0 || !d_steps.is_positive() {
        return Err(SFamilyError::InvalidParameter("need C >= 1, D > 0 and d >= 1".into()));
    }
    if labels.len() != c as usize {
        return Err(SFamilyError::InvalidParameter(format!("{} labels for {c} bars", labels.len())));
    }
    let spec = SFamilySpec { c, d_steps: d_steps.clone(), d };
    let h = spec.step();
    let mut bars = Vec::with_capacity(c as usize);
    for (i, label) in labels.iter().enumerate() {
        let b = Q::from_integer(d.into()) + Q::from_integer((i as u32).into()) * &h;
        if !b.is_integer() {
            return Err(SFamilyError::NonIntegralStep { c, d });
        }
        let b = b.to_integer().to_u32().ok_or(SFamilyError::NonIntegralStep { c, d })?;
        bars.push((label.clone(), b, d));
    }
    let m = bars.last().map_or(d, |b| b.1);
    let chart = BarChart::new(m, bars);
    chart.validate()?;
    Ok(chart)
}
