//! Number formatting shared by the CSV and JSON writers.

/// Formats with 17 significant digits in scientific notation.
///
/// This round-trips every `f64` exactly, so written files are bit-faithful.
pub fn sig17(x: f64) -> String {
    if x == 0.0 {
        // keep the sign of negative zero out of output files
        return "0.0000000000000000e0".to_string();
    }
    format!("{:.16e}", x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for &x in &[1.0, -0.1, 1.0 / 3.0, 6.02e23, 1e-300, std::f64::consts::PI] {
            let s = sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(sig17(-0.0), sig17(0.0));
    }
}
