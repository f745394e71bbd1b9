//! Complex numbers on the wire: `[re, im]` pairs, plain numbers, or strings
//! such as `"0.5-2i"`.

use num_complex::Complex64;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("cannot read a complex number from {0}")]
pub struct ComplexParseError(pub String);

/// Parses `"re"`, `"re+imi"`, `"re-imi"`, `"imi"`, `"i"`, `"-i"`.
pub fn parse_complex_str(s: &str) -> Result<Complex64, ComplexParseError> {
    let err = || ComplexParseError(format!("{s:?}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| err());
    };
    // split at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let mut split = 0;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = k;
            break;
        }
    }
    let (re_part, im_part) = body.split_at(split);
    let re = if re_part.is_empty() {
        0.0
    } else {
        re_part.parse::<f64>().map_err(|_| err())?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        p => p.parse::<f64>().map_err(|_| err())?,
    };
    Ok(Complex64::new(re, im))
}

pub fn parse_complex(v: &Value) -> Result<Complex64, ComplexParseError> {
    let err = || ComplexParseError(v.to_string());
    match v {
        Value::Number(n) => n.as_f64().map(|x| Complex64::new(x, 0.0)).ok_or_else(err),
        Value::String(s) => parse_complex_str(s),
        Value::Array(a) if a.len() == 2 => match (a[0].as_f64(), a[1].as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(err()),
        },
        _ => Err(err()),
    }
}

pub fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn complex_value(z: Complex64) -> Value {
    serde_json::json!([z.re, z.im])
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn string_forms() {
        let cases = [
            ("0.5", (0.5, 0.0)),
            ("0.5+1i", (0.5, 1.0)),
            ("-0.25-2.5i", (-0.25, -2.5)),
            ("1e-3+2e-4i", (1e-3, 2e-4)),
            ("1e+2-1E-1i", (100.0, -0.1)),
            ("i", (0.0, 1.0)),
            ("-i", (0.0, -1.0)),
            ("3i", (0.0, 3.0)),
            ("2 + 3i", (2.0, 3.0)),
        ];
        for (s, (re, im)) in cases {
            assert_eq!(parse_complex_str(s).unwrap(), Complex64::new(re, im), "{s}");
        }
        assert!(parse_complex_str("abc").is_err());
        assert!(parse_complex_str("").is_err());
    }

    #[test]
    fn value_forms() {
        assert_eq!(parse_complex(&json!([1.0, -2.0])).unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(parse_complex(&json!(0.25)).unwrap(), Complex64::new(0.25, 0.0));
        assert!(parse_complex(&json!({"re": 1})).is_err());
    }
}
