//! Angle literals shared by the circuit language and the CLI.
//!
//! Accepted forms: decimal literals (`0.5`, `-1e-3`) and pi tokens
//! `[sign][k][*]pi[/m]` with positive integers `k`, `m` (`pi`, `-pi/4`,
//! `3pi/4`, `3*pi/4`). The token is case-insensitive.

use std::f64::consts::PI;

fn pi_fraction(k: u64, m: u64) -> f64 {
    k as f64 * PI / m as f64
}

fn parse_positive_int(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok().filter(|&v| v > 0)
}

pub fn parse_angle(token: &str) -> Option<f64> {
    let lower = token.trim().to_ascii_lowercase();
    let (sign, body) = match lower.as_bytes().first()? {
        b'-' => (-1.0, &lower[1..]),
        b'+' => (1.0, &lower[1..]),
        _ => (1.0, lower.as_str()),
    };
    if let Some(at) = body.find("pi") {
        let coeff = body[..at].strip_suffix('*').unwrap_or(&body[..at]);
        let k = if coeff.is_empty() { 1 } else { parse_positive_int(coeff)? };
        let rest = &body[at + 2..];
        let m = if rest.is_empty() { 1 } else { parse_positive_int(rest.strip_prefix('/')?)? };
        if body[..at].ends_with('*') && coeff.is_empty() {
            return None;
        }
        return Some(sign * pi_fraction(k, m));
    }
    let decimal_chars = |c: char| c.is_ascii_digit() || matches!(c, '.' | 'e' | '+' | '-');
    if body.is_empty()
        || !body.chars().all(decimal_chars)
        || !body.starts_with(|c: char| c.is_ascii_digit() || c == '.')
    {
        return None;
    }
    body.parse::<f64>().ok().filter(|v| v.is_finite()).map(|v| sign * v)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Canonical spelling that [`parse_angle`] maps back to the identical `f64`:
/// a reduced pi fraction when one reproduces the value bit-for-bit, else the
/// shortest round-trip decimal.
pub fn format_angle(angle: f64) -> String {
    let magnitude = angle.abs();
    let sign = if angle.is_sign_negative() && angle != 0.0 { "-" } else { "" };
    if magnitude != 0.0 {
        for m in 1..=64u64 {
            for k in 1..=256u64 {
                if gcd(k, m) == 1 && pi_fraction(k, m) == magnitude {
                    let coeff = if k == 1 { String::new() } else { k.to_string() };
                    let denom = if m == 1 { String::new() } else { format!("/{m}") };
                    return format!("{sign}{coeff}pi{denom}");
                }
            }
        }
    }
    let text = format!("{magnitude}");
    format!("{sign}{text}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn pi_tokens() {
        assert_eq!(parse_angle("pi"), Some(PI));
        assert_eq!(parse_angle("PI/2"), Some(FRAC_PI_2));
        assert_eq!(parse_angle("-pi/4"), Some(-FRAC_PI_4));
        assert_eq!(parse_angle("3pi/4"), Some(3.0 * PI / 4.0));
        assert_eq!(parse_angle("-3*pi/4"), Some(-3.0 * PI / 4.0));
        assert_eq!(parse_angle("+pi/8"), Some(PI / 8.0));
    }

    #[test]
    fn decimals() {
        assert_eq!(parse_angle("0"), Some(0.0));
        assert_eq!(parse_angle("-0.25"), Some(-0.25));
        assert_eq!(parse_angle("1e-3"), Some(1e-3));
        assert_eq!(parse_angle(".5"), Some(0.5));
    }

    #[test]
    fn malformed() {
        for bad in ["", "pi/", "pi/0", "2pi/x", "*pi", "0pi", "nan", "inf", "-inf", "1.2.3", "pie", "pi4", "e5", "--1"]
        {
            assert_eq!(parse_angle(bad), None, "{bad:?}");
        }
    }

    #[test]
    fn format_round_trips() {
        for v in [0.0, PI, -PI, FRAC_PI_2, -FRAC_PI_4, 3.0 * PI / 4.0, 0.1, -2.5e-7, 1.0 / 3.0, 123.456] {
            let text = format_angle(v);
            assert_eq!(parse_angle(&text), Some(v), "{v} -> {text}");
        }
        assert_eq!(format_angle(FRAC_PI_4), "pi/4");
        assert_eq!(format_angle(-3.0 * PI / 4.0), "-3pi/4");
        assert_eq!(format_angle(0.5), "0.5");
    }
}
