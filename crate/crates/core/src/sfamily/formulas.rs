//! Closed-form S(C, D) quantities.

use num::{One, Signed};

use super::SFamilyError;
use crate::rational::{strict_floor, Q};

fn check_d(d: &Q) -> Result<(), SFamilyError> {
    if d.is_positive() {
        Ok(())
    } else {
        Err(SFamilyError::InvalidParameter("D must be positive".into()))
    }
}

/// `M/d = 1 + (C-1)/D`.
pub fn train_length_ratio(c: u32, d: &Q) -> Result<Q, SFamilyError> {
    check_d(d)?;
    if c == 0 {
        return Err(SFamilyError::InvalidParameter("C must be at least 1".into()));
    }
    Ok(Q::one() + Q::from_integer((c - 1).into()) / d)
}

/// Number of station types reachable with at most `t` transfers:
/// `1 + (t+1)·⌊D⁻⌋`, which is 1 when `D <= 1`.
pub fn max_connected_classes(t: u64, d: &Q) -> Result<u64, SFamilyError> {
    check_d(d)?;
    Ok(1 + (t + 1) * strict_floor(d))
}

/// Smallest `T` with `max_connected_classes(T, D) >= C`.
pub fn worst_case_transfers(c: u32, d: &Q) -> Result<u64, SFamilyError> {
    check_d(d)?;
    if c == 0 {
        return Err(SFamilyError::InvalidParameter("C must be at least 1".into()));
    }
    if c == 1 {
        return Ok(0);
    }
    let f = strict_floor(d);
    if f == 0 {
        return Err(SFamilyError::Unreachable);
    }
    Ok((u64::from(c) - 1).div_ceil(f) - 1)
}

/// `(M/d)_T = 1 + (T+1)·⌊D⁻⌋/D`, always below `2 + T`.
pub fn max_length_with_transfers(t: u64, d: &Q) -> Result<Q, SFamilyError> {
    check_d(d)?;
    let f = Q::from_integer(strict_floor(d).into());
    let value = Q::one() + Q::from_integer((t + 1).into()) * f / d;
    let bound = Q::from_integer((t + 2).into());
    assert!(value < bound, "length with {t} transfers must stay below {t} + 2 platforms");
    Ok(value)
}

/// `M < (2 + T)·d` for a chart of length `m` on platforms of length `d`.
pub fn within_length_bound(m: u32, d: u32, t: u64) -> bool {
    u64::from(m) < (2 + t) * u64::from(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    #[test]
    fn length_ratios() {
        assert_eq!(train_length_ratio(3, &q(3)).unwrap(), qr(5, 3));
        assert_eq!(train_length_ratio(7, &q(4)).unwrap(), qr(5, 2));
        assert_eq!(train_length_ratio(1, &qr(7, 3)).unwrap(), q(1));
        assert_eq!(train_length_ratio(2, &q(2)).unwrap(), qr(3, 2));
    }

    #[test]
    fn connected_classes() {
        assert_eq!(max_connected_classes(0, &q(2)).unwrap(), 2);
        assert_eq!(max_connected_classes(1, &q(4)).unwrap(), 7);
        assert_eq!(max_connected_classes(0, &q(3)).unwrap(), 3);
        assert_eq!(max_connected_classes(5, &qr(1, 2)).unwrap(), 1);
    }

    #[test]
    fn worst_transfers() {
        assert_eq!(worst_case_transfers(5, &q(2)).unwrap(), 3);
        assert_eq!(worst_case_transfers(3, &q(2)).unwrap(), 1);
        assert_eq!(worst_case_transfers(3, &q(3)).unwrap(), 0);
        assert_eq!(worst_case_transfers(2, &q(1)), Err(SFamilyError::Unreachable));
        assert_eq!(worst_case_transfers(1, &q(1)).unwrap(), 0);
    }

    #[test]
    fn max_lengths() {
        assert_eq!(max_length_with_transfers(1, &q(2)).unwrap(), q(2));
        assert_eq!(max_length_with_transfers(0, &q(2)).unwrap(), qr(3, 2));
        let big = max_length_with_transfers(2, &qr(100_001, 1000)).unwrap();
        assert!(big < q(4) && big > qr(399, 100));
    }
}
