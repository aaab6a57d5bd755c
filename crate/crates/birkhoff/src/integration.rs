//! Exact integration of powers of linear forms over the polytope, from the
//! same unimodular cone data as the Ehrhart extraction.
//!
//! The summation formula is
//!
//!   integral of <y,x>^p = (-1)^d * d! / ((p+1)...(p+d))
//!                         * sum_i sign_i * <y,a_i>^{p+d} / prod_j <y,b_ij>,
//!
//! normalized so that p = 0 reproduces the normalized volume (the measure on
//! the affine span giving the fundamental domain volume 1). For degenerate y
//! with vanishing denominators the sum is evaluated at y + eps*c as a Laurent
//! expansion per term; the poles cancel across terms and the eps^0
//! coefficient is the answer.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{rat_from_str, rat_to_string, Rational, TruncatedSeries};
use crate::combinatorics::{Permutation, RayMatrix};
use crate::ehrhart::{GenericVector, ProgressFn};
use crate::mgf::ConeTerm;

/// An n x n rational matrix y defining the linear form <y, x>.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    n: usize,
    entries: Vec<Rational>,
}

impl LinearForm {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if entries.iter().all(|e| e.is_zero()) {
            return Err(Error::InvalidInput("linear form is identically zero".into()));
        }
        Ok(LinearForm { n, entries })
    }

    /// The coordinate form picking out entry (i, j).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        entries[i * n + j] = Rational::one();
        LinearForm { n, entries }
    }

    /// All-ones on row i: constantly 1 on the polytope.
    pub fn ones_row(n: usize, i: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for j in 0..n {
            entries[i * n + j] = Rational::one();
        }
        LinearForm { n, entries }
    }

    pub fn from_generic(c: &GenericVector) -> Self {
        let n = c.n();
        let entries = (0..n * n)
            .map(|k| Rational::from_integer(c.entry(k / n, k % n).clone()))
            .collect();
        LinearForm { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    fn dot_ray(&self, ray: &RayMatrix) -> Rational {
        let mut acc = Rational::zero();
        for (k, &e) in ray.entries().iter().enumerate() {
            match e {
                1 => acc += &self.entries[k],
                -1 => acc -= &self.entries[k],
                _ => {}
            }
        }
        acc
    }

    fn dot_vertex(&self, sigma: &Permutation) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.n {
            acc += self.entry(i, sigma.apply(i));
        }
        acc
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let parsed: LinearFormJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("bad linear form JSON: {e}")))?;
        parsed.try_into()
    }
}

/// File schema: {"n": int, "y": [[rational strings]]}.
#[derive(Debug, Serialize, Deserialize)]
pub struct LinearFormJson {
    pub n: usize,
    pub y: Vec<Vec<String>>,
}

impl TryFrom<LinearFormJson> for LinearForm {
    type Error = Error;

    fn try_from(j: LinearFormJson) -> Result<LinearForm> {
        if j.y.len() != j.n || j.y.iter().any(|row| row.len() != j.n) {
            return Err(Error::InvalidInput("linear form matrix shape mismatch".into()));
        }
        let entries = j
            .y
            .iter()
            .flatten()
            .map(|s| rat_from_str(s))
            .collect::<Result<Vec<_>>>()?;
        LinearForm::new(j.n, entries)
    }
}

impl From<&LinearForm> for LinearFormJson {
    fn from(f: &LinearForm) -> Self {
        LinearFormJson {
            n: f.n,
            y: (0..f.n)
                .map(|i| (0..f.n).map(|j| rat_to_string(f.entry(i, j))).collect())
                .collect(),
        }
    }
}

/// Laurent contribution of one term: slot k holds the coefficient of
/// eps^{-k} (slot 0 is the analytic value).
type LaurentTail = Vec<Rational>;

fn merge_tails(acc: &mut LaurentTail, other: LaurentTail) {
    if other.len() > acc.len() {
        acc.resize(other.len(), Rational::zero());
    }
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

/// Truncated expansion of (u + v*eps)^power.
fn binomial_series(u: &Rational, v: &Rational, power: usize, order: usize) -> TruncatedSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    // C(power, k) u^{power-k} v^k
    let mut binom = BigInt::one();
    for (k, slot) in coeffs.iter_mut().enumerate().take(order.min(power) + 1) {
        let c = Rational::from_integer(binom.clone());
        *slot = c * pow_rat(u, power - k) * pow_rat(v, k);
        binom = binom * (power - k) / (k + 1);
    }
    TruncatedSeries::from_coeffs(coeffs)
}

fn pow_rat(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Truncated expansion of 1/(u + v*eps) for u != 0.
fn inverse_linear_series(u: &Rational, v: &Rational, order: usize) -> TruncatedSeries {
    let inv_u = Rational::one() / u;
    let ratio = -v * &inv_u;
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut acc = inv_u;
    for k in 0..=order {
        coeffs.push(acc.clone());
        if k < order {
            acc *= &ratio;
        }
    }
    TruncatedSeries::from_coeffs(coeffs)
}

fn term_tail(
    term: &ConeTerm,
    dimension: usize,
    y: &LinearForm,
    p: usize,
    c: &GenericVector,
    force_perturb: bool,
) -> Result<LaurentTail> {
    if term.rays.len() != dimension {
        return Err(Error::InvalidInput(
            "integration requires a full-dimensional term stream".into(),
        ));
    }
    let u_a = y.dot_vertex(&term.vertex);
    let us: Vec<Rational> = term.rays.iter().map(|b| y.dot_ray(b)).collect();
    let pole_order = us.iter().filter(|u| u.is_zero()).count();

    let sign = Rational::from_integer(BigInt::from(term.sign));

    if pole_order == 0 && !force_perturb {
        // direct evaluation at eps = 0
        let mut value = pow_rat(&u_a, p + dimension) * sign;
        for u in &us {
            value /= u;
        }
        return Ok(vec![value]);
    }

    // expand at y + eps*c to order m = pole_order
    let v_a = Rational::from_integer(c.dot_vertex(&term.vertex));
    let mut series = binomial_series(&u_a, &v_a, p + dimension, pole_order);
    let mut scale = sign;
    for (u, ray) in us.iter().zip(&term.rays) {
        let v = Rational::from_integer(c.dot_ray(ray));
        if u.is_zero() {
            // factor 1/(v*eps): shift into the Laurent offset, scale by 1/v
            scale /= v;
        } else {
            series = crate::exactmath::series_mul(
                &series,
                &inverse_linear_series(u, &v, pole_order),
            )?;
        }
    }
    // tail[k] = coeff of eps^{-k} = series coeff at index pole_order - k
    let tail = (0..=pole_order)
        .map(|k| series.coeff(pole_order - k) * &scale)
        .collect();
    Ok(tail)
}

/// Exact integral of <y, x>^p over the polytope described by `terms`, in the
/// lattice-normalized measure (p = 0 gives the normalized volume).
pub fn integrate_power(
    terms: impl Iterator<Item = ConeTerm>,
    dimension: usize,
    y: &LinearForm,
    p: usize,
    c: &GenericVector,
    force_perturb: bool,
    progress: Option<&ProgressFn>,
) -> Result<Rational> {
    let (tail, _) = crate::ehrhart::process_terms(
        terms,
        |term| term_tail(term, dimension, y, p, c, force_perturb),
        Vec::new(),
        merge_tails,
        progress,
    )?;
    for (k, coeff) in tail.iter().enumerate().skip(1) {
        if !coeff.is_zero() {
            return Err(Error::InternalInconsistency(format!(
                "residual eps^-{k} pole after summation"
            )));
        }
    }
    let value = tail.into_iter().next().unwrap_or_else(Rational::zero);

    // (-1)^d * d! / ((p+1)...(p+d))
    let mut factor = Rational::one();
    for k in 1..=dimension {
        factor *= Rational::new(BigInt::from(k), BigInt::from(p + k));
    }
    if dimension % 2 == 1 {
        factor = -factor;
    }
    Ok(value * factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ehrhart::volume;
    use crate::exactmath::{rat, rat_int};
    use crate::mgf::birkhoff_terms;

    #[test]
    fn p0_equals_volume_for_b2_and_b3() {
        for (n, d) in [(2usize, 1usize), (3, 4)] {
            let c = GenericVector::new(n);
            let y = LinearForm::from_generic(&c);
            let vol = volume(birkhoff_terms(n, 0).unwrap(), d, &c, None).unwrap();
            let int = integrate_power(birkhoff_terms(n, 0).unwrap(), d, &y, 0, &c, false, None)
                .unwrap();
            assert_eq!(int, vol, "n={n}");
        }
    }

    #[test]
    fn coordinate_integral_is_volume_over_n() {
        let c = GenericVector::new(3);
        let vol = volume(birkhoff_terms(3, 0).unwrap(), 4, &c, None).unwrap();
        let y = LinearForm::unit(3, 0, 0);
        let int =
            integrate_power(birkhoff_terms(3, 0).unwrap(), 4, &y, 1, &c, false, None).unwrap();
        assert_eq!(int, vol / rat_int(3));
    }

    #[test]
    fn degenerate_all_ones_row_returns_volume() {
        // <y, x> is identically 1 on B_3; every <y, b> vanishes, so this
        // exercises the full perturbation path.
        let c = GenericVector::new(3);
        let vol = volume(birkhoff_terms(3, 0).unwrap(), 4, &c, None).unwrap();
        let y = LinearForm::ones_row(3, 0);
        for p in [0usize, 1, 2, 5] {
            let int =
                integrate_power(birkhoff_terms(3, 0).unwrap(), 4, &y, p, &c, false, None).unwrap();
            assert_eq!(int, vol, "p={p}");
        }
    }

    #[test]
    fn forced_perturbation_agrees_with_direct_path() {
        let c = GenericVector::new(3);
        let y = LinearForm::from_generic(&c);
        for p in [0usize, 1, 3] {
            let direct =
                integrate_power(birkhoff_terms(3, 0).unwrap(), 4, &y, p, &c, false, None).unwrap();
            let forced =
                integrate_power(birkhoff_terms(3, 0).unwrap(), 4, &y, p, &c, true, None).unwrap();
            assert_eq!(direct, forced, "p={p}");
        }
    }

    #[test]
    fn row_sum_of_coordinate_integrals_is_volume() {
        let c = GenericVector::new(3);
        let vol = volume(birkhoff_terms(3, 0).unwrap(), 4, &c, None).unwrap();
        let mut total = Rational::zero();
        for j in 0..3 {
            let y = LinearForm::unit(3, 0, j);
            total +=
                integrate_power(birkhoff_terms(3, 0).unwrap(), 4, &y, 1, &c, false, None).unwrap();
        }
        assert_eq!(total, vol);
    }

    #[test]
    fn linear_form_json_round_trip() {
        let text = r#"{"n": 2, "y": [["1/2", "-3"], ["0", "7/5"]]}"#;
        let f = LinearForm::from_json_str(text).unwrap();
        assert_eq!(f.entry(0, 0), &rat(1, 2));
        assert_eq!(f.entry(1, 1), &rat(7, 5));
        let back = serde_json::to_string(&LinearFormJson::from(&f)).unwrap();
        let f2 = LinearForm::from_json_str(&back).unwrap();
        assert_eq!(f, f2);
    }

    #[test]
    fn zero_form_is_rejected() {
        assert!(LinearForm::new(2, vec![Rational::zero(); 4]).is_err());
    }
}
