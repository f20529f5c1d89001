//! Exact scalars: complex rationals for the operator algebra and sums of
//! square roots for on-shell energies.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type Scalar = Complex<BigRational>;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qq(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn re(x: Rational) -> Scalar {
    Complex::new(x, Rational::zero())
}

pub fn int(n: i64) -> Scalar {
    re(q(n))
}

pub fn imag_unit() -> Scalar {
    Complex::new(Rational::zero(), Rational::one())
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn scalar_to_c64(z: &Scalar) -> Complex<f64> {
    Complex::new(to_f64(&z.re), to_f64(&z.im))
}

/// Parses `3`, `-3/4` or a plain decimal such as `0.125` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        if ip.is_empty() && fp.is_empty() {
            return None;
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Prints a complex rational the way the expression grammar reads it back.
pub fn fmt_scalar(z: &Scalar) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => fmt_rational(&z.re),
        (true, false) => {
            if z.im.is_one() {
                "i".to_string()
            } else if (-&z.im).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", fmt_rational(&z.im))
            }
        }
        (false, false) => {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            let im = z.im.abs();
            let im = if im.is_one() { String::new() } else { fmt_rational(&im) };
            format!("({}{}{}i)", fmt_rational(&z.re), sign, im)
        }
    }
}

const SQUARE_SCAN_LIMIT: u32 = 2000;

/// Writes `sqrt(r)` as `c * sqrt(n)` with `n` an integer stripped of the
/// square factors found below the scan limit.
fn sqrt_parts(r: &Rational) -> (Rational, BigInt) {
    debug_assert!(!r.is_negative());
    let qd = r.denom().clone();
    let mut rest = r.numer() * &qd;
    let mut out = BigInt::one();
    if rest.is_zero() {
        return (Rational::zero(), BigInt::one());
    }
    let mut d = 2u32;
    while d <= SQUARE_SCAN_LIMIT {
        let dd = BigInt::from(d) * BigInt::from(d);
        if dd > rest {
            break;
        }
        while (&rest % &dd).is_zero() {
            rest /= &dd;
            out *= d;
        }
        d += 1;
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        out *= root;
        rest = BigInt::one();
    }
    (Rational::new(out, qd), rest)
}

/// A finite sum `Σ c_i sqrt(n_i)` with rational `c_i` and integer radicands.
///
/// Radicand 1 carries the rational part. Used for exact on-shell energies,
/// where `ω = sqrt(|k|² + m²)` is irrational for generic rational input.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurdSum {
    terms: BTreeMap<BigInt, Rational>,
}

impl SurdSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(x: Rational) -> Self {
        let mut s = Self::zero();
        s.push(BigInt::one(), x);
        s
    }

    pub fn sqrt(r: &Rational) -> Self {
        assert!(!r.is_negative(), "sqrt of negative rational");
        let (c, n) = sqrt_parts(r);
        let mut s = Self::zero();
        s.push(n, c);
        s
    }

    fn push(&mut self, radicand: BigInt, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(radicand.clone()).or_insert_with(Rational::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, by: &Rational) -> Self {
        let mut out = Self::zero();
        for (n, c) in &self.terms {
            out.push(n.clone(), c * by);
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(n, c)| to_f64(c) * n.to_f64().unwrap_or(f64::NAN).sqrt())
            .sum()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&BigInt::one()).cloned(),
            _ => None,
        }
    }
}

impl Add for &SurdSum {
    type Output = SurdSum;
    fn add(self, rhs: &SurdSum) -> SurdSum {
        let mut out = self.clone();
        for (n, c) in &rhs.terms {
            out.push(n.clone(), c.clone());
        }
        out
    }
}

impl Add for SurdSum {
    type Output = SurdSum;
    fn add(self, rhs: SurdSum) -> SurdSum {
        &self + &rhs
    }
}

impl Neg for &SurdSum {
    type Output = SurdSum;
    fn neg(self) -> SurdSum {
        self.scale(&-Rational::one())
    }
}

impl Sub for &SurdSum {
    type Output = SurdSum;
    fn sub(self, rhs: &SurdSum) -> SurdSum {
        self + &(-rhs)
    }
}

impl Mul for &SurdSum {
    type Output = SurdSum;
    fn mul(self, rhs: &SurdSum) -> SurdSum {
        let mut out = SurdSum::zero();
        for (n, c) in &self.terms {
            for (m, d) in &rhs.terms {
                let (f, r) = sqrt_parts(&Rational::from_integer(n * m));
                out.push(r, c * d * f);
            }
        }
        out
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if n.is_one() {
                write!(f, "{}", fmt_rational(c))?;
            } else {
                write!(f, "{}*sqrt({})", fmt_rational(c), n)?;
            }
        }
        Ok(())
    }
}

/// A four-vector with exact components (contravariant).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExactFourVector(pub [SurdSum; 4]);

impl ExactFourVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rationals(c: &[Rational; 4]) -> Self {
        Self(c.clone().map(SurdSum::rational))
    }

    /// `(ω, k)` with `ω = sqrt(|k|² + m²)`.
    pub fn on_shell(spatial: &[Rational; 3], mass: &Rational) -> Self {
        let r2 = spatial.iter().fold(mass * mass, |acc, x| acc + x * x);
        Self([
            SurdSum::sqrt(&r2),
            SurdSum::rational(spatial[0].clone()),
            SurdSum::rational(spatial[1].clone()),
            SurdSum::rational(spatial[2].clone()),
        ])
    }

    pub fn scale(&self, by: &Rational) -> Self {
        Self([0, 1, 2, 3].map(|i| self.0[i].scale(by)))
    }

    /// Covariant components, `k_μ = η_μν k^ν`.
    pub fn lowered(&self) -> Self {
        let m1 = -Rational::one();
        Self([
            self.0[0].clone(),
            self.0[1].scale(&m1),
            self.0[2].scale(&m1),
            self.0[3].scale(&m1),
        ])
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.0[i].to_f64())
    }
}

impl Add for &ExactFourVector {
    type Output = ExactFourVector;
    fn add(self, rhs: &ExactFourVector) -> ExactFourVector {
        ExactFourVector([0, 1, 2, 3].map(|i| &self.0[i] + &rhs.0[i]))
    }
}

impl fmt::Display for ExactFourVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3"), Some(q(3)));
        assert_eq!(parse_rational("-3/4"), Some(qq(-3, 4)));
        assert_eq!(parse_rational("0.125"), Some(qq(1, 8)));
        assert_eq!(parse_rational("-1.5"), Some(qq(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn surds_fold_square_factors() {
        assert_eq!(SurdSum::sqrt(&q(25)), SurdSum::rational(q(5)));
        assert_eq!(SurdSum::sqrt(&q(8)), SurdSum::sqrt(&q(2)).scale(&q(2)));
        assert_eq!(SurdSum::sqrt(&qq(1, 2)), SurdSum::sqrt(&q(2)).scale(&qq(1, 2)));
        let s = &SurdSum::sqrt(&q(8)) + &SurdSum::sqrt(&q(2));
        assert_eq!(s, SurdSum::sqrt(&q(2)).scale(&q(3)));
        assert!((s.to_f64() - 3.0 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn surd_products() {
        let r2 = SurdSum::sqrt(&q(2));
        assert_eq!(&r2 * &r2, SurdSum::rational(q(2)));
        let r6 = &r2 * &SurdSum::sqrt(&q(3));
        assert_eq!(r6, SurdSum::sqrt(&q(6)));
    }

    #[test]
    fn on_shell_pythagorean() {
        let v = ExactFourVector::on_shell(&[q(1), q(2), q(2)], &q(4));
        assert_eq!(v.0[0], SurdSum::rational(q(5)));
    }

    #[test]
    fn scalar_printing() {
        assert_eq!(fmt_scalar(&int(-2)), "-2");
        assert_eq!(fmt_scalar(&imag_unit()), "i");
        assert_eq!(fmt_scalar(&Complex::new(q(1), qq(-1, 2))), "(1-1/2i)");
    }
}
