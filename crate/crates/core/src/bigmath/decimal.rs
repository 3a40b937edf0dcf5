//! Decimal rendering and parsing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExactRat, PrecReal};
use crate::error::{Error, Result};

/// Significant decimal digits needed to identify a `precision`-bit value.
pub fn faithful_digits(precision: u32) -> usize {
    (precision as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Nearest,
    Away,
}

/// Nearest `digits`-significant-digit rendering.
pub fn to_decimal(x: &PrecReal, digits: usize) -> String {
    render(&x.to_rational(), digits, Direction::Nearest)
}

/// Rendering rounded away from zero, for error bounds that must not shrink.
pub fn to_decimal_upper(x: &PrecReal, digits: usize) -> String {
    render(&x.to_rational(), digits, Direction::Away)
}

pub fn rational_to_decimal(q: &ExactRat, digits: usize) -> String {
    render(q, digits, Direction::Nearest)
}

fn render(q: &ExactRat, digits: usize, dir: Direction) -> String {
    let digits = digits.max(1);
    if q.is_zero() {
        return "0".to_string();
    }
    let negative = q.is_negative();
    let q = q.abs();
    let mut e10 = estimate_log10(&q);
    let (scaled, e10) = loop {
        let s = scaled_digits(&q, digits as i64 - 1 - e10, dir);
        let n = s.to_string().len();
        if n > digits {
            // either the estimate was low or rounding carried into a new digit
            let s_up = scaled_digits(&q, digits as i64 - 2 - e10, dir);
            if s_up.to_string().len() == digits {
                break (s_up, e10 + 1);
            }
            e10 += 1;
        } else if n < digits {
            e10 -= 1;
        } else {
            break (s, e10);
        }
    };
    let body = scaled.to_string();
    let sign = if negative { "-" } else { "" };
    if (-6..40).contains(&e10) {
        let point = e10 + 1;
        let (int_part, frac_part) = if point <= 0 {
            (
                "0".to_string(),
                format!("{}{}", "0".repeat((-point) as usize), body),
            )
        } else if point as usize >= body.len() {
            (
                format!("{}{}", body, "0".repeat(point as usize - body.len())),
                String::new(),
            )
        } else {
            (
                body[..point as usize].to_string(),
                body[point as usize..].to_string(),
            )
        };
        let frac = frac_part.trim_end_matches('0');
        if frac.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    } else {
        let frac = body[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{sign}{}e{}", &body[..1], e10)
        } else {
            format!("{sign}{}.{}e{}", &body[..1], frac, e10)
        }
    }
}

fn estimate_log10(q: &ExactRat) -> i64 {
    let bits = q.numer().bits() as f64 - q.denom().bits() as f64;
    (bits * std::f64::consts::LOG10_2).floor() as i64
}

// round(q · 10^k) in the given direction
fn scaled_digits(q: &ExactRat, k: i64, dir: Direction) -> BigInt {
    let ten = BigInt::from(10);
    let (num, den) = if k >= 0 {
        (
            q.numer() * num_traits::pow(ten, k as usize),
            q.denom().clone(),
        )
    } else {
        (
            q.numer().clone(),
            q.denom() * num_traits::pow(ten, (-k) as usize),
        )
    };
    let (quot, rem) = num.div_rem(&den);
    if rem.is_zero() {
        return quot;
    }
    match dir {
        Direction::Away => quot + 1,
        Direction::Nearest => {
            let twice: BigInt = rem * 2;
            if twice > den || (twice == den && quot.is_odd()) {
                quot + 1
            } else {
                quot
            }
        }
    }
}

/// Parses `"p/q"`, an integer, or a decimal such as `-2.5e-3` into an exact rational.
pub fn parse_rational(s: &str) -> Result<ExactRat> {
    let s = s.trim();
    let err = || Error::Parse(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(ExactRat::new(p, q));
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    if exp10.abs() > 100_000 {
        return Err(err());
    }
    let digits: BigInt = format!("0{int_part}{frac_part}")
        .parse()
        .map_err(|_| err())?;
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if shift >= 0 {
        ExactRat::from_integer(digits * num_traits::pow(ten, shift as usize))
    } else {
        ExactRat::new(digits, num_traits::pow(ten, (-shift) as usize))
    };
    if negative {
        q = -q;
    }
    Ok(q)
}

/// Renders an exact rational as `p` or `p/q`.
pub fn rational_string(q: &ExactRat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> ExactRat {
        ExactRat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn renders_positional_and_scientific() {
        assert_eq!(rational_to_decimal(&rat(52, 1), 10), "52");
        assert_eq!(rational_to_decimal(&rat(1, 3), 5), "0.33333");
        assert_eq!(rational_to_decimal(&rat(-2, 3), 5), "-0.66667");
        assert_eq!(rational_to_decimal(&rat(1, 1_000_000_000), 3), "1e-9");
        assert_eq!(rational_to_decimal(&rat(999_999, 1), 3), "1000000");
        assert_eq!(rational_to_decimal(&rat(1, 8), 1), "0.1");
    }

    #[test]
    fn upper_rendering_never_shrinks() {
        let x = PrecReal::from_rational(&rat(1, 3), 64);
        let s = to_decimal_upper(&x, 3);
        assert_eq!(s, "0.334");
        assert!(parse_rational(&s).unwrap() >= x.to_rational());
    }

    #[test]
    fn parses_numbers() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-2.5e-1").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn faithful_rendering_round_trips() {
        for p in [24u32, 53, 128, 256] {
            let x = PrecReal::from_rational(&rat(22, 7), p);
            let s = x.to_string();
            let back = PrecReal::from_rational(&parse_rational(&s).unwrap(), p);
            assert_eq!(back, x, "precision {p}: {s}");
        }
    }
}
