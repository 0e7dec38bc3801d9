//! Fixed-precision decimal rendering shared by every output format.

/// Number of significant digits written for floating-point output.
pub const SIGNIFICANT_DIGITS: usize = 15;

/// Renders `x` with 15 significant digits, `%.15g` style: plain decimal
/// notation for moderate exponents, scientific otherwise, trailing zeros
/// removed.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if negative { "-" } else { "" };

    if !(-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let m = trim_fraction(mantissa);
        return format!("{m}e{exp}");
    }
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    };
    format!("{sign}{}", trim_fraction(&body))
}

/// Rounds `x` to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    sig15(x).parse().unwrap_or(x)
}

fn trim_fraction(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_like_printf_g() {
        assert_eq!(sig15(0.0), "0");
        assert_eq!(sig15(1.0), "1");
        assert_eq!(sig15(-2.5), "-2.5");
        assert_eq!(sig15(0.75), "0.75");
        assert_eq!(sig15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(sig15(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(sig15(1.5e-7), "1.5e-7");
        assert_eq!(sig15(0.000123), "0.000123");
        assert_eq!(sig15(123456.0), "123456");
        assert_eq!(sig15(1e20), "1e20");
        assert_eq!(sig15(0.9999999999999999), "1");
    }

    #[test]
    fn round_trip_is_stable() {
        for &x in &[0.238732414637843, 1.0 / 7.0, -3.0e-12, 12345.678901234567] {
            let r = round15(x);
            assert_eq!(round15(r), r);
            assert!((r - x).abs() <= 1e-14 * x.abs());
        }
    }
}
