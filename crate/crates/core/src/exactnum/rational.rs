use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactError;

/// Shorthand for building a rational from machine integers. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p"` or `"p/q"` with an optional sign on `p`.
///
/// Decimal notation is rejected: a silent decimal-to-rational conversion would
/// break every equality-based predicate downstream.
pub fn parse_rational(text: &str) -> Result<BigRational, ExactError> {
    let bad = |reason: &str| ExactError::BadRational {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(bad("empty"));
    }
    if trimmed.contains(['.', 'e', 'E']) {
        return Err(bad("decimal notation is not accepted; write P/Q"));
    }
    let (num_text, den_text) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let numer: BigInt = num_text
        .parse()
        .map_err(|_| bad("numerator is not an integer"))?;
    if den_text.starts_with(['+', '-']) {
        return Err(bad("denominator must be an unsigned integer"));
    }
    let denom: BigInt = den_text
        .parse()
        .map_err(|_| bad("denominator is not an integer"))?;
    if denom.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(value: &BigRational) -> String {
    value.to_string()
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(text: &str) -> Result<Vec<BigRational>, ExactError> {
    text.split(',').map(parse_rational).collect()
}

pub(crate) fn in_open_unit_interval(value: &BigRational) -> bool {
    value.is_positive() && value < &BigRational::one()
}

/// Serde adapter storing a rational as its canonical string.
pub mod serde_rational {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_rational(&text).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<BigRational>` as a list of canonical strings.
pub mod serde_rational_vec {
    use num_rational::BigRational;
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&super::format_rational(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| super::parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}

/// Serde adapter storing a big integer as its decimal string.
pub mod serde_bigint {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// Serde adapter writing a natural number as a JSON number when it fits in
/// `u64`, otherwise as a decimal string.
pub mod serde_natural {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Wire {
        Number(u64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match value.to_u64() {
            Some(small) => s.serialize_u64(small),
            None => s.serialize_str(&value.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        match Wire::deserialize(d)? {
            Wire::Number(n) => Ok(BigUint::from(n)),
            Wire::Text(t) => t.parse().map_err(D::Error::custom),
        }
    }
}
