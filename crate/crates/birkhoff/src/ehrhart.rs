//! Lattice-point counts, Ehrhart polynomials and normalized volumes extracted
//! from a cone-term stream by Todd-polynomial residue computation.
//!
//! Sign convention: substituting z = exp(tau * c) turns a term
//! z^{ta} / prod(1 - z^{b_j}) into
//!
//!   exp(t*tau*<c,a>) * (-1)^K / (tau^K * prod <c,b_j>) * prod g(-<c,b_j>),
//!
//! with g the Todd generating series and K the term's ray count, because
//! 1/(1 - e^{tau*xi}) = -g(-xi)/(tau*xi). Reading off the tau^0 coefficient
//! gives the per-term contribution
//!
//!   coeff of t^k: (-1)^K * <c,a>^k / (k! * prod <c,b_j>) * td_{K-k}({-<c,b_j>}).
//!
//! The convention is pinned by the hard e(0) = 1 check below and by the
//! count(B_3, 1) = 6 test.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::combinatorics::{Permutation, RayMatrix};
use crate::error::{Error, Result};
use crate::exactmath::{Polynomial, Rational};
use crate::mgf::ConeTerm;
use crate::todd::ToddEngine;

/// Progress sink: called with the number of terms processed so far.
pub type ProgressFn = dyn Fn(u64) + Sync;

/// Terms per parallel batch. Partial results are summed in batch order, so
/// output is bit-identical at any worker count.
const BATCH: usize = 1024;

/// The deterministic auxiliary vector c with c(i,j) = 2^{(i-1)n + (j-1)}.
/// Every ray entry lies in {-1, 0, 1}, and a signed sum of distinct powers
/// of two is nonzero unless empty, so <c, b> never vanishes and the residue
/// formulas are pole-free without any checking loop.
#[derive(Debug, Clone)]
pub struct GenericVector {
    n: usize,
    data: Vec<BigInt>,
}

impl GenericVector {
    pub fn new(n: usize) -> Self {
        let data = (0..n * n).map(|k| BigInt::one() << k).collect();
        GenericVector { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn dot_ray(&self, ray: &RayMatrix) -> BigInt {
        let mut acc = BigInt::zero();
        for (k, &e) in ray.entries().iter().enumerate() {
            match e {
                1 => acc += &self.data[k],
                -1 => acc -= &self.data[k],
                _ => {}
            }
        }
        acc
    }

    pub fn dot_vertex(&self, sigma: &Permutation) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..self.n {
            acc += self.entry(i, sigma.apply(i));
        }
        acc
    }
}

/// Ehrhart data of one polytope or face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EhrhartResult {
    pub polynomial: Polynomial,
    pub dimension: usize,
    pub lead_coefficient: Rational,
    /// dimension! times the leading coefficient.
    pub normalized_volume: Rational,
    pub term_count: u64,
}

/// Streams `terms` through `per_term` in deterministic batches, reducing the
/// partial values in stream order.
pub(crate) fn process_terms<R, F>(
    terms: impl Iterator<Item = ConeTerm>,
    per_term: F,
    mut acc: R,
    reduce: impl Fn(&mut R, R),
    progress: Option<&ProgressFn>,
) -> Result<(R, u64)>
where
    R: Send,
    F: Fn(&ConeTerm) -> Result<R> + Sync,
{
    let mut terms = terms.peekable();
    let mut seen: u64 = 0;
    let mut next_report: u64 = 10_000;
    while terms.peek().is_some() {
        let batch: Vec<ConeTerm> = terms.by_ref().take(BATCH).collect();
        let partials: Vec<R> = batch
            .par_iter()
            .map(&per_term)
            .collect::<Result<Vec<R>>>()?;
        for p in partials {
            reduce(&mut acc, p);
        }
        seen += batch.len() as u64;
        if let Some(report) = progress {
            if seen >= next_report {
                report(seen);
                next_report += 10_000;
            }
        }
    }
    Ok((acc, seen))
}

/// Per-term coefficient contributions: index k holds the coefficient of t^k.
fn term_coefficients(
    term: &ConeTerm,
    c: &GenericVector,
    engine: &ToddEngine,
    dimension: usize,
) -> Result<Vec<Rational>> {
    let k_count = term.rays.len();
    if k_count > dimension {
        return Err(Error::InternalInconsistency(format!(
            "term with {k_count} rays exceeds dimension {dimension}"
        )));
    }
    let mut xi_product = BigInt::one();
    let mut neg_xis = Vec::with_capacity(k_count);
    for ray in &term.rays {
        let xi = c.dot_ray(ray);
        if xi.is_zero() {
            return Err(Error::InternalInconsistency(
                "generic vector produced a zero ray inner product".into(),
            ));
        }
        neg_xis.push(Rational::from_integer(-&xi));
        xi_product *= xi;
    }
    let todd = engine.todd_values(&neg_xis, k_count)?;
    let a = c.dot_vertex(&term.vertex);

    // sign * (-1)^K / prod(xi)
    let mut front = Rational::new(BigInt::from(term.sign), xi_product);
    if k_count % 2 == 1 {
        front = -front;
    }

    let mut coeffs = vec![Rational::zero(); dimension + 1];
    let mut a_pow = BigInt::one();
    for (k, slot) in coeffs.iter_mut().enumerate().take(k_count + 1) {
        let td = &todd.values[k_count - k];
        if !td.is_zero() {
            *slot = &front * td * Rational::new(a_pow.clone(), engine.factorial(k).clone());
        }
        if k < k_count {
            a_pow *= &a;
        }
    }
    Ok(coeffs)
}

fn add_vectors(acc: &mut [Rational], other: Vec<Rational>) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

/// Full Ehrhart polynomial of the polytope or face described by `terms`.
/// `dimension` must be the maximal ray count over the stream.
pub fn ehrhart_polynomial(
    terms: impl Iterator<Item = ConeTerm>,
    dimension: usize,
    c: &GenericVector,
    progress: Option<&ProgressFn>,
) -> Result<EhrhartResult> {
    let engine = ToddEngine::new(dimension);
    let (coeffs, term_count) = process_terms(
        terms,
        |term| term_coefficients(term, c, &engine, dimension),
        vec![Rational::zero(); dimension + 1],
        |acc, other| add_vectors(acc, other),
        progress,
    )?;
    if !coeffs[0].is_one() {
        return Err(Error::InternalInconsistency(format!(
            "e(0) = {} instead of 1",
            coeffs[0]
        )));
    }
    let polynomial = Polynomial::new(coeffs);
    if polynomial.degree() != dimension {
        return Err(Error::InternalInconsistency(format!(
            "polynomial degree {} does not match dimension {dimension}",
            polynomial.degree()
        )));
    }
    let lead = polynomial.leading_coefficient().clone();
    let normalized = &lead * Rational::from_integer(engine.factorial(dimension).clone());
    if !normalized.is_positive() {
        return Err(Error::InternalInconsistency(
            "nonpositive normalized volume".into(),
        ));
    }
    Ok(EhrhartResult {
        polynomial,
        dimension,
        lead_coefficient: lead,
        normalized_volume: normalized,
        term_count,
    })
}

/// Number of lattice points of the t-th dilation, straight from the residue
/// formula (no polynomial is materialized).
pub fn count_lattice_points(
    terms: impl Iterator<Item = ConeTerm>,
    t: u64,
    c: &GenericVector,
    progress: Option<&ProgressFn>,
) -> Result<BigInt> {
    // Ray counts never exceed (n-1)^2, so one engine covers every term.
    let engine = ToddEngine::new((c.n() - 1) * (c.n() - 1));
    let t_big = BigInt::from(t);
    let (total, _) = process_terms(
        terms,
        |term| {
            let k_count = term.rays.len();
            let mut xi_product = BigInt::one();
            let mut neg_xis = Vec::with_capacity(k_count);
            for ray in &term.rays {
                let xi = c.dot_ray(ray);
                if xi.is_zero() {
                    return Err(Error::InternalInconsistency(
                        "generic vector produced a zero ray inner product".into(),
                    ));
                }
                neg_xis.push(Rational::from_integer(-&xi));
                xi_product *= xi;
            }
            let todd = engine.todd_values(&neg_xis, k_count)?;
            let ta = c.dot_vertex(&term.vertex) * &t_big;
            let mut front = Rational::new(BigInt::from(term.sign), xi_product);
            if k_count % 2 == 1 {
                front = -front;
            }
            let mut value = Rational::zero();
            let mut ta_pow = BigInt::one();
            for k in 0..=k_count {
                let td = &todd.values[k_count - k];
                if !td.is_zero() {
                    value += td * Rational::new(ta_pow.clone(), engine.factorial(k).clone());
                }
                if k < k_count {
                    ta_pow *= &ta;
                }
            }
            Ok(front * value)
        },
        Rational::zero(),
        |acc, v| *acc += v,
        progress,
    )?;
    if !total.denom().is_one() || total.is_negative() {
        return Err(Error::InternalInconsistency(format!(
            "lattice-point total {total} is not a nonnegative integer"
        )));
    }
    Ok(total.numer().clone())
}

/// Normalized volume (dimension! times the leading Ehrhart coefficient),
/// skipping all Todd computation: only full-ray-count terms contribute.
pub fn volume(
    terms: impl Iterator<Item = ConeTerm>,
    dimension: usize,
    c: &GenericVector,
    progress: Option<&ProgressFn>,
) -> Result<Rational> {
    let (sum, _) = process_terms(
        terms,
        |term| {
            if term.rays.len() < dimension {
                return Ok(Rational::zero());
            }
            let mut xi_product = BigInt::one();
            for ray in &term.rays {
                let xi = c.dot_ray(ray);
                if xi.is_zero() {
                    return Err(Error::InternalInconsistency(
                        "generic vector produced a zero ray inner product".into(),
                    ));
                }
                xi_product *= xi;
            }
            let a = c.dot_vertex(&term.vertex);
            let mut value = Rational::new(a.pow(dimension as u32), xi_product);
            if term.sign < 0 {
                value = -value;
            }
            Ok(value)
        },
        Rational::zero(),
        |acc, v| *acc += v,
        progress,
    )?;
    let normalized = if dimension % 2 == 1 { -sum } else { sum };
    if !normalized.is_positive() {
        return Err(Error::InternalInconsistency(format!(
            "nonpositive normalized volume {normalized}"
        )));
    }
    Ok(normalized)
}
