//! Exact numeric substrate: arbitrary-precision rationals, dense univariate
//! polynomials and truncated power series.
//!
//! Nothing in this crate ever touches floating point; every quantity is a
//! [`Rational`] kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always normalized (lowest terms, denominator > 0).
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `p/q`.
pub fn rat<T: Into<BigInt>, U: Into<BigInt>>(p: T, q: U) -> Rational {
    Rational::new(p.into(), q.into())
}

/// Renders a rational as `p/q`, with `/q` omitted when the denominator is 1.
/// This is the serialization format used by every downstream interface.
pub fn rat_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the `p/q` format produced by [`rat_to_string`].
pub fn rat_from_str(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidInput(format!("malformed rational {s:?}")))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_int(p)?, q))
        }
    }
}

/// Dense univariate polynomial with exact rational coefficients.
///
/// `coeffs[k]` is the coefficient of `t^k`. There is never a trailing zero
/// coefficient except for the zero polynomial, which is stored as `[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial::new(vec![])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading_coefficient(&self) -> &Rational {
        self.coeffs.last().unwrap()
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluation at an integer point.
    pub fn eval_int<T: Into<BigInt>>(&self, x: T) -> Rational {
        self.eval(&Rational::from_integer(x.into()))
    }

    /// Renders the polynomial as e.g. `1 + 11/6 t + t^2 + 1/6 t^3`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            let body = if k == 0 {
                rat_to_string(c)
            } else if c.abs().is_one() {
                mono
            } else {
                format!("{} {}", rat_to_string(&c.abs()), mono)
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{body}")
                } else {
                    body
                });
            } else if c.is_negative() {
                parts.push(format!("- {body}"));
            } else {
                parts.push(format!("+ {body}"));
            }
        }
        parts.join(" ")
    }
}

/// Exact interpolation through `points` (integer arguments, rational values)
/// using the Newton divided-difference form. Returns the unique polynomial of
/// degree below the number of points.
pub fn poly_interpolate(points: &[(i64, Rational)]) -> Result<Polynomial> {
    if points.is_empty() {
        return Err(Error::InvalidInput("interpolation needs at least one point".into()));
    }
    for (i, (xi, _)) in points.iter().enumerate() {
        for (xj, _) in &points[..i] {
            if xi == xj {
                return Err(Error::InvalidInput(format!(
                    "duplicate interpolation argument {xi}"
                )));
            }
        }
    }

    // Divided differences: diffs[j] holds f[x_{j-k} .. x_j] at stage k.
    let xs: Vec<Rational> = points.iter().map(|(x, _)| rat_int(*x)).collect();
    let mut diffs: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    let mut newton_coeffs = vec![diffs[0].clone()];
    for k in 1..points.len() {
        for j in (k..points.len()).rev() {
            let num = &diffs[j] - &diffs[j - 1];
            let den = &xs[j] - &xs[j - k];
            diffs[j] = num / den;
        }
        newton_coeffs.push(diffs[k].clone());
    }

    // Expand the Newton form into the monomial basis.
    let mut result = vec![Rational::zero(); points.len()];
    let mut basis = vec![Rational::one()]; // product of (t - x_0)..(t - x_{k-1})
    for (k, c) in newton_coeffs.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            result[i] += c * b;
        }
        if k + 1 < newton_coeffs.len() {
            // basis *= (t - x_k)
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b;
                next[i] -= b * &xs[k];
            }
            basis = next;
        }
    }
    Ok(Polynomial::new(result))
}

/// Power series in a formal variable, exact modulo `tau^{order+1}`.
///
/// `coeffs` always has length `order + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty());
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        if self.order() != other.order() {
            return Err(Error::InvalidInput("series order mismatch".into()));
        }
        Ok(TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: &Rational) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }
}

/// Exact product of two series truncated at their common order.
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    if a.order() != b.order() {
        return Err(Error::InvalidInput("series order mismatch".into()));
    }
    let order = a.order();
    let mut coeffs = vec![Rational::zero(); order + 1];
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().take(order + 1 - i).enumerate() {
            if !bj.is_zero() {
                coeffs[i + j] += ai * bj;
            }
        }
    }
    Ok(TruncatedSeries { coeffs })
}
