//! Parsing of parameter values: reals (with `pi` multiples), complex numbers
//! like `0.3+0.4i`, integers and integer ranges `a..b`, and rationals.

use std::f64::consts::PI;

use num_complex::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Real,
    Complex,
    Int,
    /// Kept as text and handed to the exact parser of the core crate.
    Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Complex(Complex<f64>),
    Int(i64),
    Rational(String),
}

impl Value {
    pub fn real(&self) -> f64 {
        match self {
            Value::Real(x) => *x,
            Value::Int(n) => *n as f64,
            Value::Complex(z) => z.re,
            Value::Rational(_) => f64::NAN,
        }
    }

    pub fn complex(&self) -> Complex<f64> {
        match self {
            Value::Complex(z) => *z,
            other => Complex::new(other.real(), 0.0),
        }
    }

    pub fn int(&self) -> i64 {
        match self {
            Value::Int(n) => *n,
            other => other.real() as i64,
        }
    }

    pub fn text(&self) -> String {
        match self {
            Value::Real(x) => format!("{x}"),
            Value::Complex(z) if z.im == 0.0 => format!("{}", z.re),
            Value::Complex(z) if z.im < 0.0 => format!("{}-{}i", z.re, -z.im),
            Value::Complex(z) => format!("{}+{}i", z.re, z.im),
            Value::Int(n) => n.to_string(),
            Value::Rational(s) => s.clone(),
        }
    }
}

/// A real, optionally written as `pi`, `2pi/3`, `-pi/2` or `0.5*pi`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let bad = || format!("not a real number: {s:?}");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let coef = match num.strip_suffix("pi") {
        Some(c) => {
            let c = c.trim().trim_end_matches('*');
            match c {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            }
        }
        None => return num.parse::<f64>().map(|x| x / den).map_err(|_| bad()),
    };
    Ok(coef * PI / den)
}

/// `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> Result<Complex<f64>, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("not a complex number: {s:?}");
    let Some(body) = t.strip_suffix('i') else {
        return parse_real(&t).map(|x| Complex::new(x, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_real(&body[..i])?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => parse_real(x).map_err(|_| bad())?,
    };
    Ok(Complex::new(re, im))
}

fn parse_int(s: &str) -> Result<i64, String> {
    s.trim().parse::<i64>().map_err(|_| format!("not an integer: {s:?}"))
}

/// One comma-separated list, with `a..b` expanding to an inclusive integer range.
pub fn parse_list(kind: Kind, s: &str) -> Result<Vec<Value>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        match kind {
            Kind::Int => {
                if let Some((a, b)) = item.split_once("..") {
                    let (a, b) = (parse_int(a)?, parse_int(b)?);
                    if b < a {
                        return Err(format!("empty range {item}"));
                    }
                    out.extend((a..=b).map(Value::Int));
                } else {
                    out.push(Value::Int(parse_int(item)?));
                }
            }
            Kind::Real => out.push(Value::Real(parse_real(item)?)),
            Kind::Complex => out.push(Value::Complex(parse_complex(item)?)),
            Kind::Rational => {
                if hostler_core::exact::parse_rational(item).is_none() {
                    return Err(format!("not a rational: {item:?}"));
                }
                out.push(Value::Rational(item.to_string()));
            }
        }
    }
    if out.is_empty() {
        return Err(format!("empty value list {s:?}"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_with_pi() {
        assert_eq!(parse_real("pi/3").unwrap(), PI / 3.0);
        assert_eq!(parse_real("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real("1.5e-3").unwrap(), 1.5e-3);
        assert!(parse_real("pie").is_err());
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.3+0.4i").unwrap(), Complex::new(0.3, 0.4));
        assert_eq!(parse_complex("1-2i").unwrap(), Complex::new(1.0, -2.0));
        assert_eq!(parse_complex("-0.5").unwrap(), Complex::new(-0.5, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), Complex::new(0.0, 2.0));
        assert_eq!(parse_complex("1e-3+1e-2i").unwrap(), Complex::new(1e-3, 1e-2));
        assert_eq!(parse_complex("-i").unwrap(), Complex::new(0.0, -1.0));
    }

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list(Kind::Int, "0..3").unwrap().len(), 4);
        assert_eq!(parse_list(Kind::Int, "1,4..5").unwrap(), vec![Value::Int(1), Value::Int(4), Value::Int(5)]);
        assert!(parse_list(Kind::Rational, "7/3,1").is_ok());
        assert!(parse_list(Kind::Rational, "x").is_err());
        assert!(parse_list(Kind::Real, "").is_err());
    }
}
