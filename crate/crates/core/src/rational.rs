//! Exact rational scalars and vectors shared by every module.
//!
//! Rationals travel through JSON as strings: either a fraction (`"-2/3"`,
//! `"5"`) or a finite decimal (`"1.25"`, `"-0.5"`, `"3e-2"`), which is
//! converted exactly.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRatError(pub String);

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = || ParseRatError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{}{}", int_part, frac_part);
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| err())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rat::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rat::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator overflow f64 separately
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact conversion of a finite double.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Serde adapter for a single rational stored as a string.
pub mod rat_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let raw = RatInput::deserialize(d)?;
        raw.into_rat().map_err(serde::de::Error::custom)
    }
}

/// Accepts `"3/4"`, `"0.75"` and bare JSON integers.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum RatInput {
    Str(String),
    Int(i64),
}

impl RatInput {
    pub(crate) fn into_rat(self) -> Result<Rat, ParseRatError> {
        match self {
            RatInput::Str(s) => parse_rat(&s),
            RatInput::Int(i) => Ok(rat(i)),
        }
    }
}

/// A point of ℚ^d. Used for both a space and its dual; the pairing is the
/// coordinate dot product.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVec(pub Vec<Rat>);

impl RatVec {
    pub fn zeros(d: usize) -> Self {
        RatVec(vec![Rat::zero(); d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = Self::zeros(d);
        v.0[i] = Rat::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        RatVec(xs.iter().map(|&x| rat(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RatVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, c: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|x| x * c).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rat_to_f64).collect()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    /// Positive rescaling so that the entries are coprime integers.
    pub fn primitive(&self) -> RatVec {
        if self.is_zero() {
            return self.clone();
        }
        let lcm_den = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| num_integer_lcm(&acc, x.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| (x * Rat::from_integer(lcm_den.clone())).to_integer())
            .collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |acc, x| num_integer_gcd(&acc, x));
        RatVec(ints.into_iter().map(|x| Rat::from_integer(x / &g)).collect())
    }

    /// True when `self = c * other` for some `c > 0`.
    pub fn same_ray(&self, other: &RatVec) -> bool {
        !self.is_zero() && !other.is_zero() && self.primitive() == other.primitive()
    }
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a * b).abs() / num_integer_gcd(a, b)
}

impl Index<usize> for RatVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl Add for &RatVec {
    type Output = RatVec;
    fn add(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        RatVec(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Rat> for &RatVec {
    type Output = RatVec;
    fn mul(self, rhs: &Rat) -> RatVec {
        self.scale(rhs)
    }
}

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rat(x))?;
        }
        write!(f, ")")
    }
}

impl Serialize for RatVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.0.iter().map(format_rat).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<RatInput>::deserialize(d)?;
        raw.into_iter()
            .map(RatInput::into_rat)
            .collect::<Result<Vec<_>, _>>()
            .map(RatVec)
            .map_err(serde::de::Error::custom)
    }
}

/// Dense rational matrix helpers (row-major `Vec<RatVec>`).
pub mod linalg {
    use super::*;

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(rows: &mut [Vec<Rat>]) -> Vec<usize> {
        let m = rows.len();
        if m == 0 {
            return Vec::new();
        }
        let n = rows[0].len();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].recip();
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..m {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    let (src, dst) = if i < r {
                        let (a, b) = rows.split_at_mut(r);
                        (&b[0], &mut a[i])
                    } else {
                        let (a, b) = rows.split_at_mut(i);
                        (&a[r], &mut b[0])
                    };
                    for (d, s) in dst.iter_mut().zip(src.iter()) {
                        *d = &*d - &f * s;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(vectors: &[RatVec]) -> usize {
        let mut rows: Vec<Vec<Rat>> = vectors.iter().map(|v| v.0.clone()).collect();
        rref(&mut rows).len()
    }

    /// Basis of `{x : <v, x> = 0 for all v in rows}` in ℚ^dim.
    pub fn kernel(rows: &[RatVec], dim: usize) -> Vec<RatVec> {
        let mut m: Vec<Vec<Rat>> = rows.iter().map(|v| v.0.clone()).collect();
        let pivots = rref(&mut m);
        let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = RatVec::zeros(dim);
                x.0[f] = Rat::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    x.0[pc] = -m[r][f].clone();
                }
                x
            })
            .collect()
    }

    /// Solves the square system `a x = b`; `None` when singular.
    pub fn solve(a: &[RatVec], b: &[Rat]) -> Option<RatVec> {
        let n = a.len();
        let mut aug: Vec<Vec<Rat>> = a
            .iter()
            .zip(b)
            .map(|(row, bi)| {
                let mut r = row.0.clone();
                r.push(bi.clone());
                r
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some(RatVec(aug.into_iter().map(|r| r[n].clone()).collect()))
    }

    pub fn det(a: &[RatVec]) -> Rat {
        let n = a.len();
        let mut m: Vec<Vec<Rat>> = a.iter().map(|v| v.0.clone()).collect();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det = &det * &m[c][c];
            let inv = m[c][c].recip();
            for i in c + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = &m[i][c] * &inv;
                for j in c..n {
                    let s = &f * &m[c][j];
                    m[i][j] = &m[i][j] - s;
                }
            }
        }
        det
    }

    /// Matrix-vector product for a row-major matrix.
    pub fn mat_vec(m: &[RatVec], v: &RatVec) -> RatVec {
        RatVec(m.iter().map(|row| row.dot(v)).collect())
    }

    pub fn mat_mul(a: &[RatVec], b: &[RatVec]) -> Vec<RatVec> {
        let cols = b.first().map_or(0, RatVec::dim);
        a.iter()
            .map(|row| {
                RatVec(
                    (0..cols)
                        .map(|j| {
                            row.0
                                .iter()
                                .zip(b)
                                .fold(Rat::zero(), |acc, (x, brow)| acc + x * &brow.0[j])
                        })
                        .collect(),
                )
            })
            .collect()
    }

    pub fn identity(d: usize) -> Vec<RatVec> {
        (0..d).map(|i| RatVec::unit(d, i)).collect()
    }

    pub fn transpose(m: &[RatVec]) -> Vec<RatVec> {
        let cols = m.first().map_or(0, RatVec::dim);
        (0..cols)
            .map(|j| RatVec(m.iter().map(|r| r.0[j].clone()).collect()))
            .collect()
    }

    pub fn inverse(m: &[RatVec]) -> Option<Vec<RatVec>> {
        let n = m.len();
        let mut aug: Vec<Vec<Rat>> = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.0.clone();
                r.extend(RatVec::unit(n, i).0);
                r
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(aug.into_iter().map(|r| RatVec(r[n..].to_vec())).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rat("-2/3").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rat("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse_rat("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rat("3e-2").unwrap(), ratio(3, 100));
        assert_eq!(parse_rat("7").unwrap(), rat(7));
        assert_eq!(parse_rat(".5").unwrap(), ratio(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn format_round_trips() {
        for s in ["0", "-4", "5/7", "-11/3"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
    }

    #[test]
    fn kernel_and_det() {
        let rows = vec![RatVec::from_ints(&[1, 1, 0]), RatVec::from_ints(&[0, 1, 1])];
        let k = linalg::kernel(&rows, 3);
        assert_eq!(k.len(), 1);
        assert!(rows.iter().all(|r| r.dot(&k[0]).is_zero()));
        let m = vec![RatVec::from_ints(&[2, 1]), RatVec::from_ints(&[1, 1])];
        assert_eq!(linalg::det(&m), rat(1));
        let inv = linalg::inverse(&m).unwrap();
        assert_eq!(linalg::mat_mul(&m, &inv), linalg::identity(2));
    }

    #[test]
    fn primitive_rays() {
        let a = RatVec(vec![ratio(2, 3), ratio(4, 3)]);
        assert_eq!(a.primitive(), RatVec::from_ints(&[1, 2]));
        assert!(a.same_ray(&RatVec::from_ints(&[3, 6])));
        assert!(!a.same_ray(&RatVec::from_ints(&[-1, -2])));
    }
}
