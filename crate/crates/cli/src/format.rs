//! Number formatting shared by the table, JSON and CSV writers.

use num_complex::Complex;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, which round-trips every `f64`.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// 10 significant digits for human-readable tables.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..10).contains(&e) {
        let decimals = (9 - e).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.9e}")
    }
}

pub fn sig10_c(z: Complex<f64>) -> String {
    if z.im == 0.0 {
        sig10(z.re)
    } else if z.im < 0.0 {
        format!("{} - {}i", sig10(z.re), sig10(-z.im))
    } else {
        format!("{} + {}i", sig10(z.re), sig10(z.im))
    }
}

/// A float written into JSON as a 17-digit literal, `null` when not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CNum {
    pub re: Num,
    pub im: Num,
}

impl From<Complex<f64>> for CNum {
    fn from(z: Complex<f64>) -> Self {
        CNum {
            re: Num(z.re),
            im: Num(z.im),
        }
    }
}

/// Ordered `name -> text` pairs serialized as a JSON object.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params(pub Vec<(String, String)>);

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl Params {
    /// `k=v;k=v`, the single CSV column.
    pub fn joined(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.2313016014842982e-1, 6.02e23, 5e-324] {
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(serde_json::to_string(&Num(0.5)).unwrap(), "5.0000000000000000e-1");
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
    }

    #[test]
    fn ten_digit_table_values() {
        assert_eq!(sig10(0.22313016014842982), "0.2231301601");
        assert_eq!(sig10(-0.125), "-0.1250000000");
        assert_eq!(sig10(1.5e-7), "1.500000000e-7");
    }
}
