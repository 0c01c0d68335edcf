use num::{One, Signed, ToPrimitive};

use super::FlowError;
use crate::rational::Q;

/// Integer section sizes summing to `m`, proportional to `fractions`.
///
/// Largest-remainder rounding; equal remainders go to the lower index.
pub fn size_sections_proportional(fractions: &[Q], m: u32) -> Result<Vec<u32>, FlowError> {
    if fractions.is_empty() {
        return Err(FlowError::InvalidInput("no fractions given".into()));
    }
    if fractions.iter().any(Signed::is_negative) {
        return Err(FlowError::InvalidInput("fractions must be nonnegative".into()));
    }
    let total: Q = fractions.iter().sum();
    if !total.is_one() {
        return Err(FlowError::InvalidInput(format!("fractions sum to {total}, not 1")));
    }
    let exact: Vec<Q> = fractions.iter().map(|f| f * Q::from_integer(m.into())).collect();
    let mut sizes: Vec<u32> = exact.iter().map(|x| x.floor().to_integer().to_u32().unwrap_or(0)).collect();
    let assigned: u32 = sizes.iter().sum();
    let mut order: Vec<usize> = (0..fractions.len()).collect();
    order.sort_by(|&a, &b| exact[b].fract().cmp(&exact[a].fract()).then(a.cmp(&b)));
    for &x in order.iter().take((m - assigned) as usize) {
        sizes[x] += 1;
    }
    debug_assert!(sizes.iter().zip(&exact).all(|(&s, e)| (Q::from_integer(s.into()) - e).abs() < Q::one()));
    Ok(sizes)
}
