//! Self-checks tying the formula machinery to independent evidence:
//! structural invariants of the cone data, Brion-style evaluation against
//! explicit lattice-point sums, agreement with the counting oracle, and
//! independence from the arbitrary choices (root vertex, face weights).

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{
    det_bareiss, dual_rays, enumerate_arborescences, projected_inner_product, ray_matrix,
};
use crate::ehrhart::{count_lattice_points, ehrhart_polynomial, GenericVector};
use crate::error::Result;
use crate::exactmath::{rat, Rational};
use crate::mgf::{birkhoff_terms, evaluate_mgf, face_terms, FaceWeights, ZeroPattern};
use crate::oracle;

/// One verification outcome, printable as a single line.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &str, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            passed: true,
            detail,
        }
    }

    fn fail(name: &str, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            passed: false,
            detail,
        }
    }
}

/// Arborescence counts must match Cayley's formula n^{n-2} for every root.
pub fn check_arborescence_counts(max_n: usize) -> Result<CheckResult> {
    for n in 2..=max_n {
        let expected = (n as u64).pow(n as u32 - 2);
        for root in 0..n {
            let got = enumerate_arborescences(n, root)?.len() as u64;
            if got != expected {
                return Ok(CheckResult::fail(
                    "arborescence-count",
                    format!("n={n} root={} gave {got}, expected {expected}", root + 1),
                ));
            }
        }
    }
    Ok(CheckResult::pass(
        "arborescence-count",
        format!("n^(n-2) for n=2..={max_n}, all roots"),
    ))
}

/// Every ray matrix must have entries in {-1,0,1} and zero row and column
/// sums.
pub fn check_ray_structure(max_n: usize) -> Result<CheckResult> {
    let mut rays = 0u64;
    for n in 2..=max_n {
        for tree in enumerate_arborescences(n, 0)? {
            for e in tree.off_tree_edges() {
                let w = ray_matrix(&tree, e)?;
                if !w.is_valid_ray() {
                    return Ok(CheckResult::fail(
                        "ray-structure",
                        format!("invalid ray for n={n}, edge {e:?}"),
                    ));
                }
                rays += 1;
            }
        }
    }
    Ok(CheckResult::pass(
        "ray-structure",
        format!("{rays} ray matrices for n=2..={max_n}"),
    ))
}

/// The projected rays of one cone must pair to the Kronecker delta against
/// the dual rays indexed by the same off-tree edges.
pub fn check_duality(max_n: usize) -> Result<CheckResult> {
    for n in 2..=max_n {
        let duals = dual_rays(n);
        for tree in enumerate_arborescences(n, 0)? {
            let off = tree.off_tree_edges();
            for &e in &off {
                let w = ray_matrix(&tree, e)?;
                for ((i, j), dual) in &duals {
                    if tree.has_edge(*i, *j) {
                        continue;
                    }
                    let expected = i32::from((*i, *j) == e);
                    let got = projected_inner_product(&w, dual);
                    if got != expected {
                        return Ok(CheckResult::fail(
                            "duality",
                            format!("n={n} edge {e:?} vs dual ({i},{j}): {got} != {expected}"),
                        ));
                    }
                }
            }
        }
    }
    Ok(CheckResult::pass(
        "duality",
        format!("delta pairing for n=2..={max_n}"),
    ))
}

/// The projected rays of every cone must form a matrix of determinant +-1.
pub fn check_unimodularity(max_n: usize) -> Result<CheckResult> {
    for n in 2..=max_n {
        let d = (n - 1) * (n - 1);
        for tree in enumerate_arborescences(n, 0)? {
            let rows: Vec<Vec<i128>> = tree
                .off_tree_edges()
                .into_iter()
                .map(|e| {
                    let w = ray_matrix(&tree, e)?;
                    Ok((0..n - 1)
                        .flat_map(|i| (0..n - 1).map(move |j| (i, j)))
                        .map(|(i, j)| w.entry(i, j) as i128)
                        .collect())
                })
                .collect::<Result<_>>()?;
            if rows.len() != d {
                return Ok(CheckResult::fail(
                    "unimodularity",
                    format!("n={n}: {} rays, expected {d}", rows.len()),
                ));
            }
            let det = det_bareiss(&rows);
            if det != 1 && det != -1 {
                return Ok(CheckResult::fail(
                    "unimodularity",
                    format!("n={n}: determinant {det}"),
                ));
            }
        }
    }
    Ok(CheckResult::pass(
        "unimodularity",
        format!("det = +-1 for every cone, n=2..={max_n}"),
    ))
}

/// The Ehrhart polynomial must not depend on which root the arborescences
/// are grown from.
pub fn check_root_independence(n: usize) -> Result<CheckResult> {
    let d = (n - 1) * (n - 1);
    let c = GenericVector::new(n);
    let first = ehrhart_polynomial(birkhoff_terms(n, 0)?, d, &c, None)?;
    let last = ehrhart_polynomial(birkhoff_terms(n, n - 1)?, d, &c, None)?;
    if first.polynomial == last.polynomial {
        Ok(CheckResult::pass(
            "root-independence",
            format!("n={n}: roots 1 and {n} give identical coefficients"),
        ))
    } else {
        Ok(CheckResult::fail(
            "root-independence",
            format!(
                "n={n}: root 1 gave {}, root {n} gave {}",
                first.polynomial.to_text(),
                last.polynomial.to_text()
            ),
        ))
    }
}

fn random_z(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| rat(rng.gen_range(2..40), rng.gen_range(1..12)))
                .collect()
        })
        .collect()
}

/// Evaluates the cone-term sum at random rational points z and compares it
/// with the explicit monomial sum over the lattice points of the dilation.
pub fn check_brion_identity(n: usize, t: u64, points: usize, seed: u64) -> Result<CheckResult> {
    let zeros = ZeroPattern::empty();
    let lattice = oracle::enumerate_points(n, t, &zeros)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < points {
        let z = random_z(n, &mut rng);
        let lhs = match evaluate_mgf(birkhoff_terms(n, 0)?, t as u32, &z) {
            Ok(v) => v,
            // a random z landed on a pole hyperplane; draw again
            Err(crate::error::Error::PoleEncountered) => continue,
            Err(e) => return Err(e),
        };
        let mut rhs = Rational::zero();
        for point in &lattice {
            let mut monomial = Rational::one();
            for (cell, &exp) in point.iter().enumerate() {
                for _ in 0..exp {
                    monomial *= &z[cell / n][cell % n];
                }
            }
            rhs += monomial;
        }
        if lhs != rhs {
            return Ok(CheckResult::fail(
                "brion-identity",
                format!("n={n} t={t}: cone sum {lhs} != monomial sum {rhs}"),
            ));
        }
        done += 1;
    }
    Ok(CheckResult::pass(
        "brion-identity",
        format!("n={n} t={t}: {points} random rational points"),
    ))
}

/// Residue-formula lattice-point counts must equal the independent
/// column-DP counts.
pub fn check_oracle_agreement(n: usize, t_values: &[u64]) -> Result<CheckResult> {
    let c = GenericVector::new(n);
    let zeros = ZeroPattern::empty();
    for &t in t_values {
        let formula = count_lattice_points(birkhoff_terms(n, 0)?, t, &c, None)?;
        let dp = oracle::count_semimagic(n, t, &zeros)?;
        if formula != dp.into() {
            return Ok(CheckResult::fail(
                "oracle-agreement",
                format!("n={n} t={t}: formula {formula} != oracle"),
            ));
        }
    }
    Ok(CheckResult::pass(
        "oracle-agreement",
        format!("n={n}, t in {t_values:?}"),
    ))
}

/// The face polynomial must not depend on which admissible weights drive
/// the limit, and must have constant term 1.
pub fn check_weight_independence(n: usize, pattern: &ZeroPattern) -> Result<CheckResult> {
    let c = GenericVector::new(n);
    let d = (n - 1) * (n - 1) - pattern.len();
    let default = ehrhart_polynomial(
        face_terms(n, 0, pattern, &FaceWeights::default_for(pattern))?,
        d,
        &c,
        None,
    )?;
    let reversed = ehrhart_polynomial(
        face_terms(n, 0, pattern, &FaceWeights::reversed_for(pattern))?,
        d,
        &c,
        None,
    )?;
    if default.polynomial != reversed.polynomial {
        return Ok(CheckResult::fail(
            "weight-independence",
            format!(
                "n={n}: default weights gave {}, reversed gave {}",
                default.polynomial.to_text(),
                reversed.polynomial.to_text()
            ),
        ));
    }
    if !default.polynomial.coeff(0).is_one() {
        return Ok(CheckResult::fail(
            "weight-independence",
            format!("n={n}: constant term {}", default.polynomial.coeff(0)),
        ));
    }
    Ok(CheckResult::pass(
        "weight-independence",
        format!(
            "n={n}, zeros {:?}: both weight choices give {}",
            pattern.positions_one_based(),
            default.polynomial.to_text()
        ),
    ))
}

/// The default battery run by the command-line `verify` subcommand. Sized to
/// finish in seconds.
pub fn run_standard_suite() -> Result<Vec<CheckResult>> {
    let corner3 = ZeroPattern::new(3, [(0, 0)])?;
    let corner4 = ZeroPattern::new(4, [(0, 0)])?;
    Ok(vec![
        check_arborescence_counts(6)?,
        check_ray_structure(5)?,
        check_duality(5)?,
        check_unimodularity(4)?,
        check_root_independence(3)?,
        check_brion_identity(2, 2, 5, 7)?,
        check_brion_identity(3, 1, 5, 7)?,
        check_oracle_agreement(3, &[0, 1, 2, 3, 4])?,
        check_weight_independence(3, &corner3)?,
        check_weight_independence(4, &corner4)?,
    ])
}
