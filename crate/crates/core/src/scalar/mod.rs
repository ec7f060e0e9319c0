//! Exact scalar fields: ℚ and ℚ(q).
//!
//! Everything above this module is generic over [`Field`]. The tagged
//! [`Scalar`] exists for file and command-line input, where the field is only
//! known at run time.

mod parse;
pub mod poly;
mod ratfunc;

use std::fmt;
use std::ops::{Div, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
pub use poly::IntPoly;
pub use ratfunc::RationalFunction;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    #[serde(rename = "Q")]
    Q,
    #[serde(rename = "Qq")]
    Qq,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldTag::Q => "Q",
            FieldTag::Qq => "Qq",
        })
    }
}

impl FromStr for FieldTag {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s {
            "Q" => Ok(FieldTag::Q),
            "Qq" => Ok(FieldTag::Qq),
            other => Err(ParseError::UnknownField(other.to_string())),
        }
    }
}

/// An exact field of characteristic zero with a canonical text form.
///
/// `Display` must print the canonical form accepted back by [`Field::parse`].
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    const TAG: FieldTag;

    fn inv(&self) -> Option<Self>;

    /// Embedding of ℚ.
    fn from_rational(r: &Rational) -> Self;

    fn parse(text: &str) -> Result<Self, ParseError>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(v.into()))
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let inv = rhs.inv().ok_or(Error::DivisionByZero)?;
        Ok(self.clone() * inv)
    }

    fn into_scalar(self) -> Scalar;

    fn from_scalar(s: Scalar) -> Result<Self>;
}

impl Field for Rational {
    const TAG: FieldTag = FieldTag::Q;

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn parse(text: &str) -> Result<Self, ParseError> {
        let (num, den) = parse::parse_fraction(text)?;
        let num = num.as_constant().ok_or(ParseError::VariableInRationals)?;
        let den = match den {
            Some(d) => d.as_constant().ok_or(ParseError::VariableInRationals)?,
            None => One::one(),
        };
        if den.is_zero() {
            return Err(ParseError::ZeroDenominator);
        }
        Ok(Rational::new(num, den))
    }

    fn into_scalar(self) -> Scalar {
        Scalar::Q(self)
    }

    fn from_scalar(s: Scalar) -> Result<Self> {
        match s {
            Scalar::Q(r) => Ok(r),
            Scalar::Qq(_) => Err(Error::FieldMismatch {
                left: FieldTag::Q,
                right: FieldTag::Qq,
            }),
        }
    }
}

impl Field for RationalFunction {
    const TAG: FieldTag = FieldTag::Qq;

    fn inv(&self) -> Option<Self> {
        RationalFunction::inv(self)
    }

    fn from_rational(r: &Rational) -> Self {
        RationalFunction::from_rational(r)
    }

    fn parse(text: &str) -> Result<Self, ParseError> {
        let (num, den) = parse::parse_fraction(text)?;
        RationalFunction::new(num, den.unwrap_or_else(IntPoly::one)).ok_or(ParseError::ZeroDenominator)
    }

    fn into_scalar(self) -> Scalar {
        Scalar::Qq(self)
    }

    fn from_scalar(s: Scalar) -> Result<Self> {
        match s {
            Scalar::Qq(r) => Ok(r),
            Scalar::Q(_) => Err(Error::FieldMismatch {
                left: FieldTag::Qq,
                right: FieldTag::Q,
            }),
        }
    }
}

/// A scalar whose field is chosen at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Q(Rational),
    Qq(RationalFunction),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn apply<F: Field>(a: F, b: F, op: ArithOp) -> Result<F> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(&b)?,
    })
}

impl Scalar {
    pub fn tag(&self) -> FieldTag {
        match self {
            Scalar::Q(_) => FieldTag::Q,
            Scalar::Qq(_) => FieldTag::Qq,
        }
    }

    pub fn parse(text: &str, field: FieldTag) -> Result<Self, ParseError> {
        Ok(match field {
            FieldTag::Q => Scalar::Q(Rational::parse(text)?),
            FieldTag::Qq => Scalar::Qq(RationalFunction::parse(text)?),
        })
    }

    /// Exact arithmetic; operands must carry the same field tag.
    pub fn arith(&self, other: &Scalar, op: ArithOp) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => apply(a.clone(), b.clone(), op).map(Scalar::Q),
            (Scalar::Qq(a), Scalar::Qq(b)) => apply(a.clone(), b.clone(), op).map(Scalar::Qq),
            _ => Err(Error::FieldMismatch {
                left: self.tag(),
                right: other.tag(),
            }),
        }
    }

    /// The explicit embedding ℚ → ℚ(q); identity on ℚ(q).
    pub fn promote(&self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Qq(RationalFunction::from_rational(r)),
            Scalar::Qq(_) => self.clone(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::Qq(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(text: &str) -> Scalar {
        Scalar::parse(text, FieldTag::Q).unwrap()
    }

    fn qq(text: &str) -> Scalar {
        Scalar::parse(text, FieldTag::Qq).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q("2/3").arith(&q("1/6"), ArithOp::Add).unwrap(), q("5/6"));
    }

    #[test]
    fn polynomial_product_and_quotient() {
        let a = qq("1-q").arith(&qq("1+q"), ArithOp::Mul).unwrap();
        assert_eq!(a.to_string(), "1-q^2");
        let b = qq("1-q^2").arith(&qq("1-q"), ArithOp::Div).unwrap();
        assert_eq!(b.to_string(), "1+q");
    }

    #[test]
    fn parse_examples() {
        assert_eq!(q("-3/4").to_string(), "-3/4");
        let r = qq("(1-q)/(1-q^2)");
        assert_eq!(r.to_string(), "1/(1+q)");
        assert_eq!(qq("q^0").to_string(), "1");
        assert_eq!(q("q^0").to_string(), "1");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            q("1").arith(&qq("1"), ArithOp::Add),
            Err(Error::FieldMismatch { .. })
        ));
        assert!(matches!(q("1").arith(&q("0"), ArithOp::Div), Err(Error::DivisionByZero)));
        assert!(matches!(Scalar::parse("1/0", FieldTag::Q), Err(ParseError::ZeroDenominator)));
        assert!(matches!(Scalar::parse("q/(q-q)", FieldTag::Qq), Err(ParseError::ZeroDenominator)));
        assert!(matches!(Scalar::parse("q", FieldTag::Q), Err(ParseError::VariableInRationals)));
        assert_eq!(q("1/2").promote(), qq("1/2"));
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-4i64..=4, 0..4)
            .prop_map(|c| IntPoly::from_coeffs(c.into_iter().map(Into::into).collect()))
    }

    fn small_rf() -> impl Strategy<Value = RationalFunction> {
        (small_poly(), small_poly())
            .prop_filter_map("zero denominator", |(n, d)| RationalFunction::new(n, d))
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=9).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    proptest! {
        #[test]
        fn rf_format_parse_roundtrip(a in small_rf()) {
            let text = a.to_string();
            let back = RationalFunction::parse(&text).unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_string(), text);
        }

        #[test]
        fn rational_format_parse_roundtrip(a in small_rat()) {
            prop_assert_eq!(Rational::parse(&a.to_string()).unwrap(), a);
        }

        #[test]
        fn rf_field_axioms(a in small_rf(), b in small_rf(), c in small_rf()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!(a.clone() - a.clone(), RationalFunction::zero());
            if let Some(inv) = a.inv() {
                prop_assert_eq!(a * inv, RationalFunction::one());
            }
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in small_rf(), b in small_rf(), at in small_rat()) {
            if let (Some(x), Some(y)) = (a.eval(&at), b.eval(&at)) {
                prop_assert_eq!((a.clone() * b.clone()).eval(&at), Some(x.clone() * y.clone()));
                prop_assert_eq!((a + b).eval(&at), Some(x + y));
            }
        }
    }
}
