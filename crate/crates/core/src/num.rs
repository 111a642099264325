//! Fixed-precision number rendering shared by every file writer.

use serde::{Deserialize, Deserializer, Serializer};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to 12 significant digits. Non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Shortest text that round-trips the 12-significant-digit value of `x`.
/// Infinities render as `inf` / `-inf`, NaN as `nan`.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        let r = round_sig(x);
        // normalise -0
        if r == 0.0 {
            "0".into()
        } else {
            format!("{r}")
        }
    }
}

/// Parses a number written by [`fmt_sig`], accepting the `inf` tokens.
pub fn parse_num(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" | "Inf" | "∞" => Some(f64::INFINITY),
        "-inf" | "-Inf" | "-∞" | "−∞" => Some(f64::NEG_INFINITY),
        t => t.parse().ok(),
    }
}

/// Serde helper: finite values as JSON numbers rounded to 12 significant
/// digits, infinities as the strings `"inf"` / `"-inf"`.
pub mod sig {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(round_sig(*x))
        } else {
            s.serialize_str(&fmt_sig(*x))
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrText {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match NumOrText::deserialize(d)? {
            NumOrText::Num(x) => Ok(x),
            NumOrText::Text(t) => parse_num(&t)
                .ok_or_else(|| serde::de::Error::custom(format!("bad number {t:?}"))),
        }
    }
}

pub mod sig_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => super::sig::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::sig")] f64);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_to_twelve_digits() {
        assert_eq!(fmt_sig(0.1), "0.1");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(2.0), "2");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
        assert_eq!(parse_num("-inf"), Some(f64::NEG_INFINITY));
        assert_eq!(parse_num("1.5"), Some(1.5));
    }

    #[test]
    fn sig_serde_roundtrip() {
        #[derive(serde::Serialize, serde::Deserialize)]
        struct T(#[serde(with = "sig")] f64);
        let s = serde_json::to_string(&T(f64::INFINITY)).unwrap();
        assert_eq!(s, "\"inf\"");
        let back: T = serde_json::from_str(&s).unwrap();
        assert!(back.0.is_infinite());
        let s = serde_json::to_string(&T(1.0 / 7.0)).unwrap();
        assert_eq!(s, "0.142857142857");
    }
}
