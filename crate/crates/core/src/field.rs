//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! Elements are stored as rational polynomials in ζ reduced modulo the N-th
//! cyclotomic polynomial Φ_N, so the representation is canonical: two scalars
//! are equal exactly when their coefficient vectors are equal.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("cyclotomic orders differ ({left} vs {right})")]
    OrderMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
}

/// Dense rational polynomials, lowest degree first. Trailing zeros are trimmed.
mod poly {
    use super::Rational;
    use alloc::vec;
    use alloc::vec::Vec;
    use num_traits::Zero;

    pub fn trim(p: &mut Vec<Rational>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); a.len().max(b.len())];
        for (i, c) in a.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in b.iter().enumerate() {
            out[i] -= c;
        }
        trim(&mut out);
        out
    }

    pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut rem = a.to_vec();
        trim(&mut rem);
        let db = b.len() - 1;
        let lead = &b[db];
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![Rational::zero(); rem.len() - db];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let c = rem.last().unwrap() / lead;
            for (i, y) in b.iter().enumerate() {
                rem[shift + i] -= &c * y;
            }
            quot[shift] = c;
            rem.pop();
            trim(&mut rem);
        }
        trim(&mut quot);
        (quot, rem)
    }
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Φ_n by dividing x^n - 1 by Φ_d for every proper divisor d.
fn cyclotomic_polynomial(n: u32) -> Vec<Rational> {
    let mut p = vec![Rational::zero(); n as usize + 1];
    p[0] = -Rational::one();
    p[n as usize] = Rational::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let (q, r) = poly::div_rem(&p, &cyclotomic_polynomial(d));
        debug_assert!(r.is_empty());
        p = q;
    }
    p
}

#[derive(Debug)]
struct FieldData {
    order: u32,
    /// Monic Φ_N, lowest degree first; length φ(N) + 1.
    modulus: Vec<Rational>,
}

/// Handle to Q(ζ_N). Cheap to clone; two handles are equal iff their orders are.
#[derive(Clone)]
pub struct CycField(Arc<FieldData>);

impl fmt::Debug for CycField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(z_{})", self.0.order)
    }
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.0.order == other.0.order
    }
}

impl Eq for CycField {}

impl CycField {
    pub fn new(order: u32) -> Result<Self, FieldError> {
        if order == 0 {
            return Err(FieldError::ZeroOrder);
        }
        Ok(CycField(Arc::new(FieldData {
            order,
            modulus: cyclotomic_polynomial(order),
        })))
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// φ(N), the dimension of the field over Q.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    /// Φ_N with lowest-degree coefficient first.
    pub fn modulus(&self) -> &[Rational] {
        &self.0.modulus
    }

    pub fn zero(&self) -> CycScalar {
        CycScalar {
            field: self.clone(),
            coeffs: vec![Rational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> CycScalar {
        self.rational(Rational::one())
    }

    pub fn rational(&self, r: Rational) -> CycScalar {
        let mut s = self.zero();
        s.coeffs[0] = r;
        s
    }

    pub fn integer(&self, n: i64) -> CycScalar {
        self.rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn fraction(&self, num: i64, den: i64) -> CycScalar {
        self.rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// ζ_N^k, with k reduced modulo N.
    pub fn root_of_unity(&self, k: i64) -> CycScalar {
        let n = i64::from(self.order());
        let e = k.rem_euclid(n) as usize;
        let mut p = vec![Rational::zero(); e + 1];
        p[e] = Rational::one();
        self.from_poly(p)
    }

    /// The scalar represented by an arbitrary polynomial in ζ (lowest degree first).
    pub fn from_poly(&self, mut p: Vec<Rational>) -> CycScalar {
        poly::trim(&mut p);
        let (_, r) = poly::div_rem(&p, self.modulus());
        let mut coeffs = r;
        coeffs.resize(self.degree(), Rational::zero());
        CycScalar {
            field: self.clone(),
            coeffs,
        }
    }
}

/// An element of Q(ζ_N) in canonical form.
#[derive(Clone)]
pub struct CycScalar {
    field: CycField,
    coeffs: Vec<Rational>,
}

/// ζ_N^k in a freshly constructed Q(ζ_N).
pub fn root_of_unity(order: u32, k: i64) -> Result<CycScalar, FieldError> {
    Ok(CycField::new(order)?.root_of_unity(k))
}

impl CycScalar {
    pub fn field(&self) -> &CycField {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    /// Coefficients of 1, ζ, ζ², …, ζ^{φ(N)-1}.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycScalar {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycScalar {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        if self.field.degree() == 1 {
            return Ok(self.field.rational(&self.coeffs[0] * &other.coeffs[0]));
        }
        Ok(self.field.from_poly(poly::mul(&self.coeffs, &other.coeffs)))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let mut a = self.coeffs.clone();
        poly::trim(&mut a);
        let (mut r0, mut r1) = (self.field.modulus().to_vec(), a);
        let (mut s0, mut s1) = (Vec::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (quot, rem) = poly::div_rem(&r0, &r1);
            let s2 = poly::sub(&s0, &poly::mul(&quot, &s1));
            r0 = core::mem::replace(&mut r1, rem);
            s0 = core::mem::replace(&mut s1, s2);
        }
        // Φ_N is irreducible, so the gcd is a nonzero constant.
        debug_assert_eq!(r0.len(), 1);
        let scale = r0[0].recip();
        let s: Vec<Rational> = s0.into_iter().map(|c| c * &scale).collect();
        Ok(self.field.from_poly(s))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inverse()?)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, exp: i64) -> Result<Self, FieldError> {
        let base = if exp < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = self.field.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// True when the scalar is a single term c·ζ^k with c a negative rational.
    /// Used to print `a - b` instead of `a + -b`.
    pub fn is_negative_monomial(&self) -> bool {
        let mut nonzero = self.coeffs.iter().filter(|c| !c.is_zero());
        matches!((nonzero.next(), nonzero.next()), (Some(c), None) if c.is_negative())
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for CycScalar {}

impl PartialOrd for CycScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order (by field order, then coefficients); not a field ordering.
impl Ord for CycScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<'a, 'b> $trait<&'b CycScalar> for &'a CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &'b CycScalar) -> CycScalar {
                self.$try(rhs).expect("cyclotomic orders differ")
            }
        }
        impl $trait<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $trait<&'b CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &'b CycScalar) -> CycScalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<CycScalar> for &'a CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        assert!(self.field == rhs.field, "cyclotomic orders differ");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        assert!(self.field == rhs.field, "cyclotomic orders differ");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl MulAssign<&CycScalar> for CycScalar {
    fn mul_assign(&mut self, rhs: &CycScalar) {
        *self = &*self * rhs;
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [N={}]", self, self.order())
    }
}

/// Renders in the scalar literal syntax, highest power of `z` first,
/// e.g. `1/2*z^3 - 2`.
impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{}", abs)?,
                (_, true) => {}
                (_, false) => write!(f, "{}*", abs)?,
            }
            match k {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{}", k)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn field(n: u32) -> CycField {
        CycField::new(n).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_ints = |n| {
            cyclotomic_polynomial(n)
                .into_iter()
                .map(|c| c.to_integer().try_into().unwrap())
                .collect::<Vec<i64>>()
        };
        assert_eq!(as_ints(1), vec![-1, 1]);
        assert_eq!(as_ints(2), vec![1, 1]);
        assert_eq!(as_ints(3), vec![1, 1, 1]);
        assert_eq!(as_ints(4), vec![1, 0, 1]);
        assert_eq!(as_ints(6), vec![1, -1, 1]);
        assert_eq!(as_ints(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(as_ints(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_squared_in_gaussian_field() {
        let k = field(4);
        let z = k.root_of_unity(1);
        assert_eq!(&z * &z, k.integer(-1));
    }

    #[test]
    fn sum_of_cube_roots_vanishes() {
        let k = field(3);
        let z = k.root_of_unity(1);
        let s = (k.one() + &z) + k.root_of_unity(2);
        assert!(s.is_zero());
    }

    #[test]
    fn rational_product() {
        let k = field(1);
        assert_eq!(k.fraction(2, 3) * k.fraction(3, 4), k.fraction(1, 2));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = field(3).one();
        let b = field(4).one();
        assert_eq!(
            a.try_add(&b),
            Err(FieldError::OrderMismatch { left: 3, right: 4 })
        );
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn inverses() {
        let k8 = field(8);
        assert_eq!(k8.root_of_unity(1).inverse().unwrap(), k8.root_of_unity(7));
        for n in [1, 2, 5, 12] {
            let k = field(n);
            assert_eq!(k.integer(-1).inverse().unwrap(), k.integer(-1));
        }
        // (1 + i)(1 - i)/2 = 1
        let k4 = field(4);
        let i = k4.root_of_unity(1);
        let a = k4.one() + &i;
        let expected = (k4.one() - &i) * k4.fraction(1, 2);
        assert_eq!(a.inverse().unwrap(), expected);
        assert_eq!(k4.zero().inverse(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(root_of_unity(2, 1).unwrap(), field(2).integer(-1));
        assert!(root_of_unity(6, 6).unwrap().is_one());
        let p = root_of_unity(5, 2).unwrap() * root_of_unity(5, 3).unwrap();
        assert!(p.is_one());
        assert_eq!(root_of_unity(7, -1).unwrap(), root_of_unity(7, 6).unwrap());
        assert_eq!(root_of_unity(0, 1).unwrap_err(), FieldError::ZeroOrder);
    }

    #[test]
    fn powers() {
        let k = field(5);
        let z = k.root_of_unity(1);
        assert!(z.pow(5).unwrap().is_one());
        assert_eq!(z.pow(-2).unwrap(), k.root_of_unity(3));
        assert!(k.integer(7).pow(0).unwrap().is_one());
        assert_eq!(k.zero().pow(-1), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn display() {
        let k = field(8);
        let z3 = k.root_of_unity(3);
        let s = &z3 * &k.fraction(1, 2) - k.integer(2);
        assert_eq!(s.to_string(), "1/2*z^3 - 2");
        assert_eq!(k.zero().to_string(), "0");
        assert_eq!((-k.root_of_unity(1)).to_string(), "-z");
        assert_eq!(field(4).root_of_unity(3).to_string(), "-z");
        assert_eq!(field(1).fraction(-3, 4).to_string(), "-3/4");
    }
}
