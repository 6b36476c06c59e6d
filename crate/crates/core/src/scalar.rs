//! Exact scalars in ℚ or a real quadratic field ℚ(√d).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `a + b·√d`. Purely rational values carry `d = 1` and adapt to whatever
/// field they are combined with.
#[derive(Clone)]
pub struct Scalar {
    a: Rational,
    b: Rational,
    d: u32,
}

fn is_square_free(d: u32) -> bool {
    let mut k = 2u32;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn join_field(x: u32, y: u32) -> Result<u32> {
    match (x, y) {
        (1, e) | (e, 1) => Ok(e),
        (e, f) if e == f => Ok(e),
        (e, f) => Err(Error::MismatchedField(e, f)),
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { a: Rational::zero(), b: Rational::zero(), d: 1 }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(a: Rational) -> Self {
        Scalar { a, b: Rational::zero(), d: 1 }
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::from_rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `a + b√d`; `d` must be square-free and greater than one.
    pub fn quad(a: Rational, b: Rational, d: u32) -> Result<Self> {
        if d < 2 || !is_square_free(d) {
            return Err(Error::BadDiscriminant(d));
        }
        Ok(Scalar::norm_field(Scalar { a, b, d }))
    }

    /// `√d`.
    pub fn sqrt(d: u32) -> Result<Self> {
        Scalar::quad(Rational::zero(), Rational::one(), d)
    }

    fn norm_field(mut s: Scalar) -> Scalar {
        if s.b.is_zero() {
            s.d = 1;
        }
        s
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    /// Field tag: 1 for a rational value, otherwise the square-free `d`.
    pub fn field(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Returns the value as an integer when it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.b.is_zero() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar> {
        let d = join_field(self.d, o.d)?;
        Ok(Scalar::norm_field(Scalar { a: &self.a + &o.a, b: &self.b + &o.b, d }))
    }

    pub fn checked_sub(&self, o: &Scalar) -> Result<Scalar> {
        let d = join_field(self.d, o.d)?;
        Ok(Scalar::norm_field(Scalar { a: &self.a - &o.a, b: &self.b - &o.b, d }))
    }

    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar> {
        let d = join_field(self.d, o.d)?;
        if self.b.is_zero() && o.b.is_zero() {
            return Ok(Scalar::from_rational(&self.a * &o.a));
        }
        let dd = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &o.a + &self.b * &o.b * dd;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Scalar::norm_field(Scalar { a, b, d }))
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(Scalar::from_rational(self.a.recip()));
        }
        let dd = Rational::from_integer(BigInt::from(self.d));
        let norm = &self.a * &self.a - &self.b * &self.b * dd;
        Ok(Scalar { a: &self.a / &norm, b: -(&self.b / &norm), d: self.d })
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar> {
        join_field(self.d, o.d)?;
        self.checked_mul(&o.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Parses `"p/q"`, `"p"`, or a quadratic form `"a+b*sqrt(d)"` as emitted by `Display`.
    pub fn parse(text: &str) -> Result<Scalar> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(pos) = t.find("sqrt(") {
            let close = t[pos..].find(')').ok_or_else(|| Error::Parse(text.to_string()))? + pos;
            let d: u32 = t[pos + 5..close].parse().map_err(|_| Error::Parse(text.to_string()))?;
            let head = &t[..pos];
            let head = head.strip_suffix('*').unwrap_or(head);
            // split head into rational part and the coefficient of the root
            let split = head
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(i, _)| i)
                .filter(|&i| !head[..i].ends_with('/'))
                .last();
            let (a, b) = match split {
                Some(i) => (&head[..i], &head[i..]),
                None => ("0", head),
            };
            let b = match b.trim_start_matches('+') {
                "" => "1".to_string(),
                "-" => "-1".to_string(),
                s => s.to_string(),
            };
            return Scalar::quad(parse_rational(a)?, parse_rational(&b)?, d);
        }
        Ok(Scalar::from_rational(parse_rational(&t)?))
    }
}

pub fn parse_rational(t: &str) -> Result<Rational> {
    let bad = || Error::Parse(t.to_string());
    let t = t.trim().trim_start_matches('+');
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Jones index `4cos²(π/(n+3))` for the two quadratic cases.
pub fn beta_of(n: u32) -> Result<Scalar> {
    match n {
        2 => Scalar::quad(Rational::new(3.into(), 2.into()), Rational::new(1.into(), 2.into()), 5),
        3 => Ok(Scalar::from_int(3)),
        _ => Err(Error::UnsupportedIndex(n)),
    }
}

/// Loop parameter `2cos(π/(n+3))`, the positive square root of `beta_of(n)`.
pub fn delta_of(n: u32) -> Result<Scalar> {
    match n {
        2 => Scalar::quad(Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into()), 5),
        3 => Scalar::sqrt(3),
        _ => Err(Error::UnsupportedIndex(n)),
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Scalar) -> bool {
        self.a == o.a && self.b == o.b && (self.b.is_zero() || self.d == o.d)
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(a: Rational) -> Self {
        Scalar::from_rational(a)
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let coeff = if self.b.is_one() {
            String::new()
        } else if (-&self.b).is_one() {
            "-".to_string()
        } else {
            format!("{}*", fmt_rational(&self.b))
        };
        if self.a.is_zero() {
            write!(f, "{coeff}sqrt({})", self.d)
        } else {
            let sign = if self.b.is_negative() { "" } else { "+" };
            write!(f, "{}{sign}{coeff}sqrt({})", fmt_rational(&self.a), self.d)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$checked(o).expect("scalars from different quadratic fields")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        if o.b.is_zero() {
            self.a += &o.a;
        } else {
            *self = &*self + o;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        if o.b.is_zero() {
            self.a -= &o.a;
        } else {
            *self = &*self - o;
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(it: I) -> Scalar {
        let mut acc = Scalar::zero();
        for x in it {
            acc += &x;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn phi() -> Scalar {
        delta_of(2).unwrap()
    }

    #[test]
    fn golden_square() {
        let x = beta_of(2).unwrap();
        let expect = Scalar::quad(Rational::new(7.into(), 2.into()), Rational::new(3.into(), 2.into()), 5).unwrap();
        assert_eq!(&x * &x, expect);
        assert_eq!(&expect / &x, x);
    }

    #[test]
    fn golden_norm() {
        let conj = Scalar::quad(Rational::new((-1).into(), 2.into()), Rational::new(1.into(), 2.into()), 5).unwrap();
        assert_eq!(phi() * conj, Scalar::one());
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta_of(3).unwrap(), Scalar::from_int(3));
        let b = beta_of(2).unwrap();
        // minimal polynomial x² − 3x + 1
        assert!((&b * &b - Scalar::from_int(3) * &b + Scalar::one()).is_zero());
        for n in [2, 3] {
            let d = delta_of(n).unwrap();
            assert_eq!(&d * &d, beta_of(n).unwrap());
        }
        assert!(matches!(beta_of(4), Err(Error::UnsupportedIndex(4))));
        assert!(matches!(delta_of(1), Err(Error::UnsupportedIndex(1))));
    }

    #[test]
    fn mixing_fields_fails() {
        let r5 = Scalar::sqrt(5).unwrap();
        let r3 = Scalar::sqrt(3).unwrap();
        assert!(matches!(r5.checked_add(&r3), Err(Error::MismatchedField(5, 3))));
        // rationals join either field
        assert!(r5.checked_add(&Scalar::from_int(2)).is_ok());
        assert!(matches!(Scalar::one().checked_div(&Scalar::zero()), Err(Error::DivisionByZero)));
        assert!(Scalar::sqrt(8).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3/7", "-2", "1/2+1/2*sqrt(5)", "sqrt(3)", "-sqrt(3)", "2-3/4*sqrt(5)", "-1/2+sqrt(5)"] {
            let x = Scalar::parse(s).unwrap();
            assert_eq!(Scalar::parse(&x.to_string()).unwrap(), x, "{s}");
        }
        assert_eq!(Scalar::parse("1/2+1/2*sqrt(5)").unwrap(), phi());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..9, -20i64..20, 1i64..9).prop_map(|(p, q, r, s)| {
            Scalar::quad(Rational::new(p.into(), q.into()), Rational::new(r.into(), s.into()), 5).unwrap()
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), Scalar::one());
                prop_assert_eq!(&(&y / &x) * &x, y.clone());
            }
            prop_assert!((&x - &x).is_zero());
        }
    }
}
