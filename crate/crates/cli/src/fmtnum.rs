//! Canonical numeric formatting: 12 significant digits, no trailing
//! zeros, lowercase exponent only outside the positional range.

use fordom_core::{BoundaryPoint, ComplexValue};

/// Formats with 12 significant digits; positional when the decimal
/// exponent lies in [-4, 11], exponential otherwise.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let formatted = format!("{:.11e}", x.abs());
    let (mantissa, exponent) = formatted.split_once('e').expect("exponential form");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    debug_assert_eq!(digits.len(), 12);
    let sign = if x < 0.0 { "-" } else { "" };
    let body = if (-4..=11).contains(&exponent) {
        if exponent >= 0 {
            let split = exponent as usize + 1;
            let int = &digits[..split];
            let frac = digits[split..].trim_end_matches('0');
            if frac.is_empty() {
                int.to_string()
            } else {
                format!("{int}.{frac}")
            }
        } else {
            let frac = digits.trim_end_matches('0');
            format!("0.{}{}", "0".repeat(-exponent as usize - 1), frac)
        }
    } else {
        let head = &digits[..1];
        let tail = digits[1..].trim_end_matches('0');
        if tail.is_empty() {
            format!("{head}e{exponent}")
        } else {
            format!("{head}.{tail}e{exponent}")
        }
    };
    format!("{sign}{body}")
}

/// Formats a complex value as "re,im", both parts canonical.
pub fn fmt_complex(z: ComplexValue) -> String {
    format!("{},{}", fmt_f64(z.re), fmt_f64(z.im))
}

/// Parses "re,im" or a bare real part.
pub fn parse_complex(text: &str) -> Result<ComplexValue, String> {
    let bad = |part: &str| format!("invalid number {part:?} in {text:?}");
    match text.split_once(',') {
        Some((re, im)) => {
            let re: f64 = re.trim().parse().map_err(|_| bad(re))?;
            let im: f64 = im.trim().parse().map_err(|_| bad(im))?;
            Ok(ComplexValue::new(re, im))
        }
        None => {
            let re: f64 = text.trim().parse().map_err(|_| bad(text))?;
            Ok(ComplexValue::new(re, 0.0))
        }
    }
}

/// Parses an ideal endpoint: "inf" or a complex value.
pub fn parse_endpoint(text: &str) -> Result<BoundaryPoint, String> {
    let t = text.trim();
    if t == "inf" {
        Ok(BoundaryPoint::Infinity)
    } else {
        parse_complex(t).map(BoundaryPoint::Finite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positional_and_exponential_forms() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(-0.0), "0");
        assert_eq!(fmt_f64(2.0), "2");
        assert_eq!(fmt_f64(3.0), "3");
        assert_eq!(fmt_f64(-5.0), "-5");
        assert_eq!(fmt_f64(100.0), "100");
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(4.9), "4.9");
        assert_eq!(fmt_f64(0.0001), "0.0001");
        assert_eq!(fmt_f64(1e-5), "1e-5");
        assert_eq!(fmt_f64(-2.5e-7), "-2.5e-7");
        assert_eq!(fmt_f64(1e11), "100000000000");
        assert_eq!(fmt_f64(1e12), "1e12");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_f64(core::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_f64(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_f64(2.0 + 1e-13), "2");
        assert_eq!(fmt_f64(0.99999999999999), "1");
    }

    #[test]
    fn complex_round_trip() {
        let z = ComplexValue::new(-5.25, 0.5);
        assert_eq!(fmt_complex(z), "-5.25,0.5");
        assert_eq!(parse_complex("-5.25,0.5").unwrap(), z);
        assert_eq!(parse_complex("3").unwrap(), ComplexValue::new(3.0, 0.0));
        assert!(parse_complex("3,x").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn endpoints_accept_infinity() {
        assert_eq!(parse_endpoint("inf").unwrap(), BoundaryPoint::Infinity);
        assert_eq!(
            parse_endpoint("4.9,-2").unwrap(),
            BoundaryPoint::Finite(ComplexValue::new(4.9, -2.0))
        );
        assert!(parse_endpoint("infx").is_err());
    }
}
