//! Todd polynomial values td_j(xi_1, .., xi_d) at explicit rational
//! arguments, computed as truncated products of the series
//! tau*xi / (1 - exp(-tau*xi)).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::exactmath::{rat_int, series_mul, Rational, TruncatedSeries};

/// Read-only cache of Bernoulli numbers with the B_1 = +1/2 convention,
/// which pins the expansion 1/(1 - e^{-x}) used throughout. Built once
/// before any parallel phase.
#[derive(Debug, Clone)]
pub struct ToddEngine {
    /// bernoulli[k] = B_k^+
    bernoulli: Vec<Rational>,
    /// factorial[k] = k!
    factorial: Vec<BigInt>,
}

/// Todd values td_0 .. td_order for one argument multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToddValues {
    pub values: Vec<Rational>,
}

impl ToddEngine {
    /// Prepares Bernoulli numbers and factorials up to index `max_order`.
    pub fn new(max_order: usize) -> Self {
        // Recurrence for B_m^- : sum_{j=0}^{m} C(m+1, j) B_j = 0, B_0 = 1,
        // then flip the sign of B_1.
        let mut bernoulli = Vec::with_capacity(max_order + 1);
        bernoulli.push(Rational::one());
        for m in 1..=max_order {
            let mut acc = Rational::zero();
            let mut binom = BigInt::one(); // C(m+1, j), starting at j = 0
            for (j, b) in bernoulli.iter().enumerate() {
                acc += b * Rational::from_integer(binom.clone());
                binom = binom * (m + 1 - j) / (j + 1);
            }
            bernoulli.push(-acc / rat_int(m as i64 + 1));
        }
        if max_order >= 1 {
            let b1 = bernoulli[1].clone();
            bernoulli[1] = -b1;
        }
        let mut factorial = Vec::with_capacity(max_order + 1);
        factorial.push(BigInt::one());
        for k in 1..=max_order {
            let next = factorial[k - 1].clone() * k;
            factorial.push(next);
        }
        ToddEngine {
            bernoulli,
            factorial,
        }
    }

    pub fn max_order(&self) -> usize {
        self.bernoulli.len() - 1
    }

    pub fn bernoulli(&self, k: usize) -> &Rational {
        &self.bernoulli[k]
    }

    pub fn factorial(&self, k: usize) -> &BigInt {
        &self.factorial[k]
    }

    /// Expansion of tau*xi / (1 - exp(-tau*xi)) up to the given order:
    /// coefficient of tau^k is B_k^+ xi^k / k!.
    pub fn g_series(&self, xi: &Rational, order: usize) -> TruncatedSeries {
        assert!(order <= self.max_order(), "ToddEngine built too small");
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut xi_pow = Rational::one();
        for k in 0..=order {
            let c = if self.bernoulli[k].is_zero() {
                Rational::zero()
            } else {
                &self.bernoulli[k] * &xi_pow / Rational::from_integer(self.factorial[k].clone())
            };
            coeffs.push(c);
            if k < order {
                xi_pow *= xi;
            }
        }
        TruncatedSeries::from_coeffs(coeffs)
    }

    /// td_0 .. td_order evaluated at the given arguments, as the
    /// tau-coefficients of the product of their g-series.
    pub fn todd_values(&self, xis: &[Rational], order: usize) -> Result<ToddValues> {
        let mut product = TruncatedSeries::one(order);
        for xi in xis {
            product = series_mul(&product, &self.g_series(xi, order))?;
        }
        Ok(ToddValues {
            values: product.coeffs().to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use proptest::prelude::*;

    #[test]
    fn bernoulli_plus_values() {
        let engine = ToddEngine::new(8);
        assert_eq!(engine.bernoulli(0), &rat_int(1));
        assert_eq!(engine.bernoulli(1), &rat(1, 2));
        assert_eq!(engine.bernoulli(2), &rat(1, 6));
        assert_eq!(engine.bernoulli(3), &rat_int(0));
        assert_eq!(engine.bernoulli(4), &rat(-1, 30));
        assert_eq!(engine.bernoulli(6), &rat(1, 42));
        assert_eq!(engine.bernoulli(8), &rat(-1, 30));
    }

    #[test]
    fn g_series_examples() {
        let engine = ToddEngine::new(4);
        let g1 = engine.g_series(&rat_int(1), 2);
        assert_eq!(g1.coeffs(), &[rat_int(1), rat(1, 2), rat(1, 12)]);

        let g0 = engine.g_series(&rat_int(0), 4);
        assert_eq!(
            g0.coeffs(),
            &[rat_int(1), rat_int(0), rat_int(0), rat_int(0), rat_int(0)]
        );

        let g2 = engine.g_series(&rat_int(2), 1);
        assert_eq!(g2.coeffs(), &[rat_int(1), rat_int(1)]);
    }

    #[test]
    fn todd_value_examples() {
        let engine = ToddEngine::new(4);
        // td_1(1,2,3) = (1+2+3)/2 = 3
        let td = engine
            .todd_values(&[rat_int(1), rat_int(2), rat_int(3)], 1)
            .unwrap();
        assert_eq!(td.values[1], rat_int(3));

        // td_2(1,1,1) = 3*(1/12) + 3*(1/4) = 1
        let td = engine
            .todd_values(&[rat_int(1), rat_int(1), rat_int(1)], 2)
            .unwrap();
        assert_eq!(td.values[2], rat_int(1));

        // td_3(1,1,1) = (1/24) * 3 * 3 = 3/8
        let td = engine
            .todd_values(&[rat_int(1), rat_int(1), rat_int(1)], 3)
            .unwrap();
        assert_eq!(td.values[3], rat(3, 8));

        // td_0 is always 1
        let td = engine.todd_values(&[rat(7, 3), rat(-2, 5)], 0).unwrap();
        assert_eq!(td.values[0], rat_int(1));
    }

    fn td2_formula(x: &[Rational; 3]) -> Rational {
        // printed second Todd polynomial at d = 3
        let twelfth = rat(1, 12);
        let quarter = rat(1, 4);
        &twelfth * (&x[0] * &x[0] + &x[1] * &x[1] + &x[2] * &x[2])
            + &quarter * (&x[0] * &x[1] + &x[1] * &x[2] + &x[2] * &x[0])
    }

    fn td3_formula(x: &[Rational; 3]) -> Rational {
        rat(1, 24)
            * (&x[0] + &x[1] + &x[2])
            * (&x[0] * &x[1] + &x[1] * &x[2] + &x[2] * &x[0])
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..12).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn printed_formulas_agree(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            let engine = ToddEngine::new(3);
            let xs = [a, b, c];
            let td = engine.todd_values(&xs, 3).unwrap();
            prop_assert_eq!(&td.values[2], &td2_formula(&xs));
            prop_assert_eq!(&td.values[3], &td3_formula(&xs));
        }

        #[test]
        fn todd_is_symmetric(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            let engine = ToddEngine::new(3);
            let fwd = engine.todd_values(&[a.clone(), b.clone(), c.clone()], 3).unwrap();
            let rev = engine.todd_values(&[c, a, b], 3).unwrap();
            prop_assert_eq!(fwd, rev);
        }

        #[test]
        fn todd_is_homogeneous(a in arb_rat(), b in arb_rat(),
                               lp in -9i64..9, lq in 1i64..5) {
            prop_assume!(lp != 0);
            let lambda = rat(lp, lq);
            let engine = ToddEngine::new(4);
            let base = engine.todd_values(&[a.clone(), b.clone()], 4).unwrap();
            let scaled = engine
                .todd_values(&[&a * &lambda, &b * &lambda], 4)
                .unwrap();
            let mut pow = Rational::one();
            for j in 0..=4 {
                prop_assert_eq!(&scaled.values[j], &(&base.values[j] * &pow));
                pow *= &lambda;
            }
        }
    }
}
