//! Lossless float formatting shared by every JSON and CSV emitter.

/// Formats `x` with 17 significant digits, enough to round-trip any `f64`.
///
/// Non-finite values are rendered as `NaN`, `inf` and `-inf`.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    format!("{x:.16e}")
}

/// A JSON number printed with exactly 17 significant digits.
///
/// Relies on `serde_json`'s `arbitrary_precision` feature, which keeps the
/// textual form of a number. Non-finite values become `null`.
pub fn json17(x: f64) -> serde_json::Value {
    if !x.is_finite() {
        return serde_json::Value::Null;
    }
    fmt17(x)
        .parse::<serde_json::Number>()
        .map_or(serde_json::Value::Null, serde_json::Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02214076e23,
            std::f64::consts::PI,
        ] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let mantissa: String = s
                .split('e')
                .next()
                .unwrap()
                .chars()
                .filter(char::is_ascii_digit)
                .collect();
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn non_finite_values() {
        assert_eq!(fmt17(f64::NAN), "NaN");
        assert_eq!(fmt17(f64::NEG_INFINITY), "-inf");
        assert!(json17(f64::INFINITY).is_null());
    }

    #[test]
    fn json_keeps_all_digits() {
        let v = serde_json::json!({ "x": json17(0.1) });
        assert_eq!(v.to_string(), r#"{"x":1.0000000000000001e-1}"#);
    }
}
