use rug::{Integer, Rational};

/// Exact coefficient ring used by [`super::Poly`].
pub trait Coeff: Clone + PartialEq + Eq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn sub_assign_ref(&mut self, other: &Self);
    /// `self += a·b`
    fn add_mul_assign(&mut self, a: &Self, b: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn to_decimal(&self) -> String;
    fn parse_decimal(s: &str) -> Option<Self>;
}

impl Coeff for Integer {
    fn zero() -> Self {
        Integer::new()
    }
    fn one() -> Self {
        Integer::from(1)
    }
    fn from_i64(v: i64) -> Self {
        Integer::from(v)
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Integer::from(self * other)
    }
    fn neg_ref(&self) -> Self {
        Integer::from(-self)
    }
    fn to_f64(&self) -> f64 {
        self.to_f64()
    }
    fn to_decimal(&self) -> String {
        self.to_string()
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        Integer::from_str_radix(s, 10).ok()
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::new()
    }
    fn one() -> Self {
        Rational::from(1)
    }
    fn from_i64(v: i64) -> Self {
        Rational::from(v)
    }
    fn is_zero(&self) -> bool {
        self.numer().is_zero()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += Rational::from(a * b);
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn neg_ref(&self) -> Self {
        Rational::from(-self)
    }
    fn to_f64(&self) -> f64 {
        self.to_f64()
    }
    fn to_decimal(&self) -> String {
        self.to_string()
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        Rational::from_str_radix(s, 10).ok()
    }
}
