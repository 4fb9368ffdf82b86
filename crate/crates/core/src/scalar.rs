//! Exact field elements over ℚ and prime fields 𝔽_p.
//!
//! Rationals keep a machine-word fast path and promote to arbitrary precision on
//! overflow, so results never depend on the size of intermediate values.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime modulus accepted; keeps products inside `u64`.
pub const MAX_PRIME: u32 = 2_147_483_647;

/// The ground field: ℚ or 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || p > MAX_PRIME as u64 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p as u32))
    }

    /// Parses `q`, `0`, `p:7` or a bare prime such as `7`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        match s {
            "q" | "Q" | "0" | "rational" => Ok(Field::Rational),
            _ => {
                let digits = s.strip_prefix("p:").unwrap_or(s);
                let p: u64 = digits
                    .parse()
                    .map_err(|_| Error::InvalidField(format!("cannot parse field `{s}`")))?;
                Field::prime(p)
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p as u64,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Small(Ratio::from_integer(0)),
            Field::Prime(p) => Scalar::Mod { v: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Small(Ratio::from_integer(n)),
            Field::Prime(p) => Scalar::Mod {
                v: n.rem_euclid(*p as i64) as u32,
                p: *p,
            },
        }
    }

    /// Maps the rational `num/den` into this field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Rational => Ok(Scalar::from_big(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(p) => {
                let m = BigInt::from(*p);
                let n = num.mod_floor(&m).to_u32().unwrap_or(0);
                let d = den.mod_floor(&m).to_u32().unwrap_or(0);
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                let n = Scalar::Mod { v: n, p: *p };
                let d = Scalar::Mod { v: d, p: *p };
                Ok(&n * &d.inv()?)
            }
        }
    }

    /// Parses `"p/q"` or `"p"` into this field.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid scalar `{s}`"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<BigInt>().map_err(|_| bad())?,
                d.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        self.from_ratio(&n, &d)
    }

    /// Re-interprets a scalar of another field in this one (ℚ → 𝔽_p reduction).
    pub fn convert(&self, x: &Scalar) -> Result<Scalar> {
        match (self, x) {
            (Field::Rational, Scalar::Mod { .. }) => Err(Error::InvalidField(
                "cannot lift a prime-field scalar to the rationals".into(),
            )),
            (Field::Prime(p), Scalar::Mod { p: q, .. }) if p != q => Err(Error::InvalidField(
                "cannot convert between distinct prime fields".into(),
            )),
            _ => {
                let (n, d) = x.to_ratio_parts();
                self.from_ratio(&n, &d)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element.
///
/// Invariant: a rational is stored as `Big` only when it does not fit the
/// `Small` representation, so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Small(Ratio<i64>),
    Big(BigRational),
    Mod { v: u32, p: u32 },
}

impl Scalar {
    fn from_big(r: BigRational) -> Scalar {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Scalar::Small(Ratio::new_raw(n, d)),
            _ => Scalar::Big(r),
        }
    }

    fn from_small(r: Ratio<i64>, slow: impl FnOnce() -> BigRational) -> Scalar {
        if *r.numer() == i64::MIN || *r.denom() == i64::MIN {
            Scalar::from_big(slow())
        } else {
            Scalar::Small(r)
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Scalar::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Scalar::Big(r) => r.clone(),
            Scalar::Mod { .. } => unreachable!("prime-field scalar used as rational"),
        }
    }

    fn to_ratio_parts(&self) -> (BigInt, BigInt) {
        match self {
            Scalar::Mod { v, .. } => (BigInt::from(*v), BigInt::one()),
            _ => {
                let b = self.to_big();
                (b.numer().clone(), b.denom().clone())
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod { p, .. } => Field::Prime(*p),
            _ => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Small(r) => r.numer().is_zero(),
            Scalar::Big(r) => r.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Small(r) => *r.numer() == 1 && *r.denom() == 1,
            Scalar::Big(r) => r.is_one(),
            Scalar::Mod { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Small(r) => {
                let (n, d) = (*r.numer(), *r.denom());
                if n < 0 {
                    match (d.checked_neg(), n.checked_neg()) {
                        (Some(a), Some(b)) => Scalar::Small(Ratio::new_raw(a, b)),
                        _ => Scalar::from_big(self.to_big().recip()),
                    }
                } else {
                    Scalar::Small(Ratio::new_raw(d, n))
                }
            }
            Scalar::Big(r) => Scalar::from_big(r.recip()),
            Scalar::Mod { v, p } => Scalar::Mod {
                v: pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32,
                p: *p,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    fn check_same(&self, other: &Scalar) {
        let (a, b) = (self.field(), other.field());
        assert!(a == b, "field mismatch: {a} vs {b}");
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Scalar::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Scalar::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Mod { v, p }, Scalar::Mod { v: w, .. }) => Scalar::Mod {
                v: ((*v as u64 + *w as u64) % *p as u64) as u32,
                p: *p,
            },
            (Scalar::Small(a), Scalar::Small(b)) => match a.checked_add(b) {
                Some(r) => Scalar::from_small(r, || self.to_big() + rhs.to_big()),
                None => Scalar::from_big(self.to_big() + rhs.to_big()),
            },
            _ => Scalar::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Mod { v, p }, Scalar::Mod { v: w, .. }) => Scalar::Mod {
                v: ((*v as u64 + *p as u64 - *w as u64) % *p as u64) as u32,
                p: *p,
            },
            (Scalar::Small(a), Scalar::Small(b)) => match a.checked_sub(b) {
                Some(r) => Scalar::from_small(r, || self.to_big() - rhs.to_big()),
                None => Scalar::from_big(self.to_big() - rhs.to_big()),
            },
            _ => Scalar::from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Mod { v, p }, Scalar::Mod { v: w, .. }) => Scalar::Mod {
                v: ((*v as u64 * *w as u64) % *p as u64) as u32,
                p: *p,
            },
            (Scalar::Small(a), Scalar::Small(b)) => match a.checked_mul(b) {
                Some(r) => Scalar::from_small(r, || self.to_big() * rhs.to_big()),
                None => Scalar::from_big(self.to_big() * rhs.to_big()),
            },
            _ => Scalar::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { v, p } => Scalar::Mod {
                v: ((*p as u64 - *v as u64) % *p as u64) as u32,
                p: *p,
            },
            Scalar::Small(r) => match r.numer().checked_neg() {
                Some(n) => Scalar::Small(Ratio::new_raw(n, *r.denom())),
                None => Scalar::from_big(-self.to_big()),
            },
            Scalar::Big(r) => Scalar::from_big(-r.clone()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

/// `acc += a * b`, skipping the work when either factor vanishes.
#[inline]
pub fn fma(acc: &mut Scalar, a: &Scalar, b: &Scalar) {
    if a.is_zero() || b.is_zero() {
        return;
    }
    *acc = &*acc + &(a * b);
}

/// Sign helper: `(-1)^e` in the given field.
pub fn sign(field: Field, e: usize) -> Scalar {
    if e.is_multiple_of(2) {
        field.one()
    } else {
        field.from_i64(-1)
    }
}
