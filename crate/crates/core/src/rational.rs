//! Exact rationals used for circle-map data, Bohr radii and phase thresholds.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Parses `"p/q"` or a bare integer `"p"`. A zero denominator is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: i128 = num.parse().map_err(|_| Error::InvalidRational(s.to_string()))?;
    let den: i128 = den.parse().map_err(|_| Error::InvalidRational(s.to_string()))?;
    if den == 0 {
        return Err(Error::InvalidRational(s.to_string()));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// Distance from `r` to the nearest integer, exactly.
pub fn dist_to_int(r: &Rational) -> Rational {
    let f = frac(r);
    let g = Rational::from_integer(1) - f;
    if f < g {
        f
    } else {
        g
    }
}

/// Least common multiple of the denominators, or `None` on overflow.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> Option<i128> {
    let mut d: i128 = 1;
    for r in it {
        let g = d.gcd(r.denom());
        d = (d / g).checked_mul(*r.denom())?;
    }
    Some(d)
}

pub fn is_positive(r: &Rational) -> bool {
    !r.is_zero() && r.is_positive()
}

pub(crate) mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_str_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/8").unwrap(), Rational::new(3, 8));
        assert_eq!(parse_rational("-2").unwrap(), Rational::from_integer(-2));
        assert_eq!(parse_rational(" 4 / 8 ").unwrap(), Rational::new(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn nearest_integer_distance() {
        assert_eq!(dist_to_int(&Rational::new(3, 8)), Rational::new(3, 8));
        assert_eq!(dist_to_int(&Rational::new(6, 8)), Rational::new(1, 4));
        assert_eq!(dist_to_int(&Rational::new(-1, 8)), Rational::new(1, 8));
        assert_eq!(dist_to_int(&Rational::from_integer(2)), Rational::zero());
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [Rational::new(1, 4), Rational::new(1, 6), Rational::from_integer(3)];
        assert_eq!(common_denominator(&v), Some(12));
    }
}
