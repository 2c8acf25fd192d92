//! Rational helpers on top of `num_rational::BigRational`.
//!
//! Rationals travel through JSON as strings, either `"p/q"` or `"p"`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse(s: &str) -> Result<Rational, Error> {
    let trimmed = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match trimmed.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("invalid rational {s:?}: zero denominator")));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = trimmed.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Exact square root when `r` is the square of a rational.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Compares `p * sqrt(p_sq)` against `q * sqrt(q_sq)` for nonnegative `p_sq`, `q_sq`.
pub fn cmp_scaled_roots(p: &Rational, p_sq: &Rational, q: &Rational, q_sq: &Rational) -> Ordering {
    let lhs_sign = if p_sq.is_zero() { 0 } else { sign(p) };
    let rhs_sign = if q_sq.is_zero() { 0 } else { sign(q) };
    if lhs_sign != rhs_sign {
        return lhs_sign.cmp(&rhs_sign);
    }
    if lhs_sign == 0 {
        return Ordering::Equal;
    }
    let lhs = p * p * p_sq;
    let rhs = q * q * q_sq;
    if lhs_sign > 0 {
        lhs.cmp(&rhs)
    } else {
        rhs.cmp(&lhs)
    }
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub fn pow2(k: u32) -> Rational {
    Rational::from_integer(BigInt::one() << k)
}

pub fn inv_pow2(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Dyadic rational of least denominator in the open set described by `inside`,
/// searched outward from `anchor` (which must satisfy `inside`).
///
/// `inside` must describe an interval, so at each level only the two dyadics
/// bracketing the anchor need testing. Ties go to the one nearer the anchor,
/// then to the smaller value.
pub fn least_dyadic_near(anchor: &Rational, inside: impl Fn(&Rational) -> bool) -> Rational {
    debug_assert!(inside(anchor));
    for k in 0..=256u32 {
        let scale = pow2(k);
        let scaled = anchor * &scale;
        let lo = scaled.floor() / &scale;
        let hi = scaled.ceil() / &scale;
        let mut picks: Vec<Rational> = Vec::with_capacity(2);
        for c in [lo, hi] {
            if inside(&c) && !picks.contains(&c) {
                picks.push(c);
            }
        }
        picks.sort_by(|a, b| {
            let da = (a - anchor).abs();
            let db = (b - anchor).abs();
            da.cmp(&db).then_with(|| a.cmp(b))
        });
        if let Some(best) = picks.into_iter().next() {
            return best;
        }
    }
    anchor.clone()
}

pub(crate) mod serde_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse(&raw).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_str_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&super::format(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|r| super::parse(r).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) mod serde_str_opt {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&super::format(r)),
            None => s.serialize_str("inf"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let raw = String::deserialize(d)?;
        if raw == "inf" {
            return Ok(None);
        }
        super::parse(&raw).map(Some).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("6/4").unwrap(), frac(3, 2));
        assert_eq!(parse(" -7 ").unwrap(), int(-7));
        assert_eq!(format(&frac(-3, 6)), "-1/2");
        assert_eq!(format(&int(5)), "5");
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1/2/3").is_err());
    }

    #[test]
    fn sqrt_of_squares() {
        assert_eq!(exact_sqrt(&frac(9, 16)), Some(frac(3, 4)));
        assert_eq!(exact_sqrt(&int(2)), None);
        assert_eq!(exact_sqrt(&int(-4)), None);
    }

    #[test]
    fn scaled_root_comparison() {
        // 1*sqrt(2) vs 3/2*sqrt(1)
        assert_eq!(cmp_scaled_roots(&int(1), &int(2), &frac(3, 2), &int(1)), Ordering::Less);
        assert_eq!(cmp_scaled_roots(&int(-1), &int(2), &frac(-3, 2), &int(1)), Ordering::Greater);
        assert_eq!(cmp_scaled_roots(&int(2), &int(1), &int(1), &int(4)), Ordering::Equal);
        assert_eq!(cmp_scaled_roots(&int(0), &int(3), &int(-1), &int(1)), Ordering::Greater);
    }

    #[test]
    fn dyadic_search_prefers_small_denominators() {
        // interval (1/3, 1): 1/2 is the least-denominator dyadic inside
        let inside = |s: &Rational| s > &frac(1, 3) && s < &int(1);
        assert_eq!(least_dyadic_near(&frac(2, 3), inside), frac(1, 2));
        let narrow = |s: &Rational| s > &frac(5, 16) && s < &frac(11, 32);
        assert_eq!(least_dyadic_near(&frac(21, 64), narrow), frac(21, 64));
    }
}
