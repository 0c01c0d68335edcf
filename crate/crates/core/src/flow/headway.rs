use super::FlowError;

/// Extra minimum headway, in seconds, for trains `extra_length` metres longer
/// than ordinary ones cruising at `speed` m/s.
pub fn headway_correction(extra_length: f64, speed: f64) -> Result<f64, FlowError> {
    if speed.is_nan() || speed <= 0.0 {
        return Err(FlowError::NonpositiveSpeed);
    }
    Ok(extra_length / speed)
}

/// Fractional capacity lost when `extra` seconds are added to a `base` headway.
pub fn capacity_reduction(base: f64, extra: f64) -> f64 {
    extra / (base + extra)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_evaluation() {
        assert!((headway_correction(70.0, 30.0).unwrap() - 2.3333).abs() < 1e-3);
        assert_eq!(headway_correction(0.0, 30.0).unwrap(), 0.0);
        assert!((headway_correction(200.0, 30.0).unwrap() - 6.667).abs() < 1e-3);
        assert_eq!(headway_correction(1.0, 0.0), Err(FlowError::NonpositiveSpeed));
        assert_eq!(headway_correction(1.0, -3.0), Err(FlowError::NonpositiveSpeed));
    }

    #[test]
    fn reduction_near_one_and_a_half_percent() {
        let r = capacity_reduction(157.0, headway_correction(70.0, 30.0).unwrap());
        assert!((r - 0.01464).abs() < 1e-4);
    }
}
