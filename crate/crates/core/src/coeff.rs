//! Exact coefficient arithmetic.
//!
//! Two coefficient modes share one interface: plain arbitrary-precision
//! rationals, and Laurent polynomials in a formal weight variable `L` with
//! rational coefficients. Everything is exact; there is no floating point
//! anywhere in this crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// Shorthand constructor for small rationals, mostly used in tests.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn bigint_json(b: &BigInt) -> Value {
    match i64::try_from(b) {
        Ok(n) => json!(n),
        Err(_) => json!(b.to_string()),
    }
}

fn rational_latex(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else if r.is_negative() {
        format!("-\\frac{{{}}}{{{}}}", r.numer().magnitude(), r.denom())
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// Coefficient ring shared by the series machinery.
///
/// Implemented by [`Rational`] and [`Laurent`]. Series over the two modes are
/// distinct types, so mixing them is a compile error.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
    + Send
    + Sync
    + 'static
{
    fn from_rational(r: Rational) -> Self;

    fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from(BigInt::from(n)))
    }

    /// Rendering used by the plain-text series format.
    fn text(&self) -> String {
        self.to_string()
    }

    /// Rendering for LaTeX output; the result is self-delimiting.
    fn latex(&self) -> String;

    /// Rendering for the JSON series schema.
    fn json(&self) -> Value;
}

impl Coeff for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn latex(&self) -> String {
        rational_latex(self)
    }

    fn json(&self) -> Value {
        json!({ "num": bigint_json(self.numer()), "den": bigint_json(self.denom()) })
    }
}

/// Laurent polynomial in the formal weight variable with rational coefficients.
///
/// Terms are kept sorted by exponent and zero coefficients are never stored,
/// so equality is plain structural equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Laurent {
    terms: Vec<(i32, Rational)>,
}

impl Laurent {
    pub fn new(mut terms: Vec<(i32, Rational)>) -> Self {
        terms.sort_by_key(|(k, _)| *k);
        let mut merged: Vec<(i32, Rational)> = Vec::with_capacity(terms.len());
        for (k, c) in terms {
            match merged.last_mut() {
                Some((k0, c0)) if *k0 == k => *c0 += c,
                _ => merged.push((k, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Laurent { terms: merged }
    }

    /// The single term `c * L^k`.
    pub fn monomial(k: i32, c: Rational) -> Self {
        if c.is_zero() {
            Laurent::zero()
        } else {
            Laurent { terms: vec![(k, c)] }
        }
    }

    /// The weight variable itself.
    pub fn var() -> Self {
        Laurent::monomial(1, Rational::one())
    }

    pub fn terms(&self) -> &[(i32, Rational)] {
        &self.terms
    }

    /// Multiply by `L^k`; exact for any sign of `k`.
    pub fn shift(&self, k: i32) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.first().map(|(k, _)| *k)
    }

    /// Substitute a nonzero rational value for the weight variable.
    pub fn eval(&self, weight: &Rational) -> Rational {
        assert!(
            !weight.is_zero() || self.terms.iter().all(|(k, _)| *k >= 0),
            "weight 0 substituted into a Laurent polynomial with negative exponents"
        );
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            let p = if *k >= 0 {
                pow_rational(weight, *k as u32)
            } else {
                pow_rational(weight, k.unsigned_abs()).recip()
            };
            acc += c * p;
        }
        acc
    }

    /// The rational value when the polynomial is a constant.
    pub fn try_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }
}

fn pow_rational(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

impl Zero for Laurent {
    fn zero() -> Self {
        Laurent { terms: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Laurent {
    fn one() -> Self {
        Laurent::monomial(0, Rational::one())
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(self, rhs: Laurent) -> Laurent {
        let mut terms = self.terms;
        terms.extend(rhs.terms);
        Laurent::new(terms)
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(self, rhs: Laurent) -> Laurent {
        self + (-rhs)
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                terms.push((ka + kb, ca * cb));
            }
        }
        Laurent::new(terms)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("({})*L^{}", c, k))
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

impl Coeff for Laurent {
    fn from_rational(r: Rational) -> Self {
        Laurent::monomial(0, r)
    }

    fn latex(&self) -> String {
        if let Some(c) = self.try_constant() {
            return rational_latex(&c);
        }
        let den = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut poly = String::new();
        for (k, c) in self.terms.iter().rev() {
            let n = c.numer() * &den / c.denom();
            let sign = if n.is_negative() {
                "-"
            } else if poly.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = n.magnitude();
            let var = match k {
                0 => String::new(),
                1 => "\\lambda".to_string(),
                _ => format!("\\lambda^{{{}}}", k),
            };
            let coeff = if *k != 0 && mag.is_one() {
                String::new()
            } else {
                mag.to_string()
            };
            poly.push_str(sign);
            poly.push_str(&coeff);
            poly.push_str(&var);
        }
        if den.is_one() {
            if self.terms.len() > 1 {
                format!("\\left({}\\right)", poly)
            } else {
                poly
            }
        } else {
            format!("\\frac{{{}}}{{{}}}", poly, den)
        }
    }

    fn json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(k, c)| {
                    Value::Array(vec![
                        json!(k),
                        bigint_json(c.numer()),
                        bigint_json(c.denom()),
                    ])
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> Laurent {
        Laurent::var()
    }

    #[test]
    fn laurent_normalizes_on_construction() {
        let p = Laurent::new(vec![(2, rat(1, 2)), (0, rat(3, 1)), (2, rat(-1, 2))]);
        assert_eq!(p.terms(), &[(0, rat(3, 1))]);
        assert!(Laurent::new(vec![(5, rat(0, 1))]).is_zero());
    }

    #[test]
    fn laurent_ring_ops() {
        // (L - 1)(L + 1) = L^2 - 1
        let a = lam() - Laurent::one();
        let b = lam() + Laurent::one();
        let p = a * b;
        assert_eq!(p.terms(), &[(0, rat(-1, 1)), (2, rat(1, 1))][..]);
        let inv = Laurent::monomial(-1, Rational::one());
        assert_eq!(inv.clone() * lam(), Laurent::one());
        assert_eq!(inv.min_exponent(), Some(-1));
    }

    #[test]
    fn laurent_eval_and_constants() {
        let p = Laurent::new(vec![(1, rat(1, 24)), (0, rat(-1, 24))]);
        assert_eq!(p.eval(&rat(1, 1)), rat(0, 1));
        assert_eq!(p.eval(&rat(3, 1)), rat(1, 12));
        let q = Laurent::monomial(-2, rat(4, 1));
        assert_eq!(q.eval(&rat(2, 1)), rat(1, 1));
        assert_eq!(Laurent::from_rational(rat(5, 7)).try_constant(), Some(rat(5, 7)));
        assert_eq!(p.try_constant(), None);
    }

    #[test]
    fn laurent_text_format() {
        let p = Laurent::new(vec![(1, rat(1, 24)), (0, rat(-1, 24))]);
        assert_eq!(p.to_string(), "(-1/24)*L^0 + (1/24)*L^1");
        assert_eq!(Laurent::zero().to_string(), "0");
    }

    #[test]
    fn latex_pulls_out_a_common_denominator() {
        let p = Laurent::new(vec![(1, rat(1, 24)), (0, rat(-1, 24))]);
        assert_eq!(p.latex(), "\\frac{\\lambda-1}{24}");
        let q = Laurent::new(vec![(1, rat(-1, 24)), (0, rat(-1, 24))]);
        assert_eq!(q.latex(), "\\frac{-\\lambda-1}{24}");
        let r = Laurent::new(vec![(1, rat(1, 1)), (0, rat(2, 1))]);
        assert_eq!(r.latex(), "\\left(\\lambda+2\\right)");
        assert_eq!(Laurent::from_rational(rat(-1, 2)).latex(), "-\\frac{1}{2}");
        assert_eq!(Laurent::monomial(-1, rat(1, 2)).latex(), "\\frac{\\lambda^{-1}}{2}");
    }

    #[test]
    fn json_renders_both_modes() {
        assert_eq!(
            rat(-1, 2).json(),
            json!({ "num": -1, "den": 2 })
        );
        let p = Laurent::new(vec![(1, rat(1, 24)), (0, rat(-1, 24))]);
        assert_eq!(p.json(), json!([[0, -1, 24], [1, 1, 24]]));
    }

    #[test]
    fn rational_latex_integer_case() {
        assert_eq!(rat(3, 1).latex(), "3");
        assert_eq!(rat(-3, 1).latex(), "-3");
    }
}
