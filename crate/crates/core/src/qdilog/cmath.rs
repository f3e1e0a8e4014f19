//! Numerically careful complex logarithms.

use crate::C64;

/// `ln(1 + u)` on the principal branch, accurate for small `|u|`.
pub(crate) fn log1p(u: C64) -> C64 {
    let re = 0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p();
    C64::new(re, u.im.atan2(1.0 + u.re))
}

/// `ln(1 + e^a)`, equal to the principal value modulo `2πi`.
///
/// For `Re a > 0` it is rewritten as `a + ln(1 + e^{−a})`, so huge arguments
/// never overflow.
pub(crate) fn log1pexp(a: C64) -> C64 {
    if a.re > 0.0 {
        a + log1p((-a).exp())
    } else {
        log1p(a.exp())
    }
}

/// `|1 + e^a|`, without overflow.
pub(crate) fn abs1pexp(a: C64) -> f64 {
    if a.re > 0.0 {
        a.re.exp() * (1.0 + (-a).exp()).norm()
    } else {
        (1.0 + a.exp()).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_argument_keeps_precision() {
        let u = C64::new(1e-17, -2e-17);
        let l = log1p(u);
        assert!((l - u).norm() < 1e-30);
    }

    #[test]
    fn large_argument_does_not_overflow() {
        let a = C64::new(800.0, 0.3);
        let l = log1pexp(a);
        assert!((l - a).norm() < 1e-300 + 1e-12);
        assert!(abs1pexp(C64::new(800.0, 0.0)).is_infinite());
        assert!((abs1pexp(C64::new(0.0, std::f64::consts::PI)) - 0.0).abs() < 1e-15);
    }
}
