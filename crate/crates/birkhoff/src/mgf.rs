//! The generating function of the dilated Birkhoff polytope, materialized as
//! a lazy stream of unimodular cone terms, together with the structural-zero
//! limit that produces the analogous stream for any face.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::combinatorics::{
    enumerate_arborescences, enumerate_permutations, permute_columns, ray_matrix, Permutation,
    RayMatrix,
};
use crate::error::{Error, Result};
use crate::exactmath::Rational;

/// One rational-function summand: sign * z^{t*vertex} / prod (1 - z^ray).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeTerm {
    pub sign: i8,
    pub vertex: Permutation,
    pub rays: Vec<RayMatrix>,
}

/// A set of forbidden (row, col) entries selecting a face of B_n. 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZeroPattern {
    zeros: BTreeSet<(usize, usize)>,
}

impl ZeroPattern {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(n: usize, zeros: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, j) in zeros {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "zero position ({}, {}) out of range for n={n}",
                    i + 1,
                    j + 1
                )));
            }
            if !set.insert((i, j)) {
                return Err(Error::InvalidInput(format!(
                    "duplicate zero position ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(ZeroPattern { zeros: set })
    }

    /// Parses the 1-based CLI grammar `"i,j;i,j;..."`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (i, j) = part
                .split_once(',')
                .ok_or_else(|| Error::InvalidInput(format!("bad zero entry {part:?}")))?;
            let parse = |t: &str| -> Result<usize> {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&v| (1..=n).contains(&v))
                    .ok_or_else(|| {
                        Error::InvalidInput(format!("bad 1-based index {t:?} for n={n}"))
                    })
            };
            pairs.push((parse(i)? - 1, parse(j)? - 1));
        }
        ZeroPattern::new(n, pairs)
    }

    /// The Chan-Robbins-Yuen pattern: every entry strictly below the first
    /// subdiagonal is forced to zero.
    pub fn cry(n: usize) -> Self {
        let mut zeros = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if i >= j + 2 {
                    zeros.insert((i, j));
                }
            }
        }
        ZeroPattern { zeros }
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.zeros.contains(&(i, j))
    }

    /// Row-major list of zero positions.
    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.zeros.iter().copied()
    }

    pub fn positions_one_based(&self) -> Vec<(usize, usize)> {
        self.zeros.iter().map(|&(i, j)| (i + 1, j + 1)).collect()
    }

    /// A permutation avoids the pattern if no (i, sigma(i)) is forbidden.
    pub fn admits(&self, sigma: &Permutation) -> bool {
        (0..sigma.n()).all(|i| !self.contains(i, sigma.apply(i)))
    }

    /// Whether at least one permutation avoids the pattern (the face is a
    /// nonempty polytope iff so).
    pub fn face_is_nonempty(&self, n: usize) -> bool {
        fn rec(zp: &ZeroPattern, n: usize, row: usize, used: &mut Vec<bool>) -> bool {
            if row == n {
                return true;
            }
            for col in 0..n {
                if !used[col] && !zp.contains(row, col) {
                    used[col] = true;
                    if rec(zp, n, row + 1, used) {
                        used[col] = false;
                        return true;
                    }
                    used[col] = false;
                }
            }
            false
        }
        rec(self, n, 0, &mut vec![false; n])
    }
}

/// Positive weights attached to the zero positions, driving the s -> 0 limit.
///
/// The default assigns the k-th zero (row-major) the weight 2^k. Ray entries
/// lie in {-1, 0, 1}, and a signed sum of distinct powers of two vanishes
/// only when every contributing entry vanishes, so mu(b) = 0 exactly when b
/// is identically zero on the pattern. No randomness or retry needed.
#[derive(Debug, Clone)]
pub struct FaceWeights {
    lambda: Vec<((usize, usize), BigInt)>,
}

impl FaceWeights {
    pub fn default_for(pattern: &ZeroPattern) -> Self {
        let lambda = pattern
            .positions()
            .enumerate()
            .map(|(k, pos)| (pos, BigInt::one() << k))
            .collect();
        FaceWeights { lambda }
    }

    /// Distinct powers of two in reverse row-major order; shares the
    /// "mu = 0 iff zero on the pattern" property with the default, so the
    /// two assignments must produce identical downstream polynomials.
    pub fn reversed_for(pattern: &ZeroPattern) -> Self {
        let m = pattern.len();
        let lambda = pattern
            .positions()
            .enumerate()
            .map(|(k, pos)| (pos, BigInt::one() << (m - 1 - k)))
            .collect();
        FaceWeights { lambda }
    }

    pub fn from_pairs(pairs: Vec<((usize, usize), BigInt)>) -> Self {
        FaceWeights { lambda: pairs }
    }

    /// mu(b) = sum over zero positions of lambda_ij * b(i, j).
    pub fn mu(&self, ray: &RayMatrix) -> BigInt {
        let mut acc = BigInt::zero();
        for ((i, j), w) in &self.lambda {
            let e = ray.entry(*i, *j);
            if e != 0 {
                acc += w * e;
            }
        }
        acc
    }
}

/// Lazy stream over the cone terms of the generating function. For the full
/// polytope it yields n! * n^{n-2} terms with (n-1)^2 rays each; with a zero
/// pattern it yields the s -> 0 limit stream.
#[derive(Debug)]
pub struct TermStream {
    perms: Vec<Permutation>,
    /// Per arborescence, the ray matrices W^{T,e} for all off-tree e.
    templates: Vec<Vec<RayMatrix>>,
    face: Option<(ZeroPattern, FaceWeights)>,
    pi: usize,
    ti: usize,
}

impl TermStream {
    /// Number of (vertex, arborescence) pairs before any face filtering.
    pub fn candidate_count(&self) -> u64 {
        self.perms.len() as u64 * self.templates.len() as u64
    }
}

impl Iterator for TermStream {
    type Item = ConeTerm;

    fn next(&mut self) -> Option<ConeTerm> {
        loop {
            if self.pi >= self.perms.len() {
                return None;
            }
            let sigma = &self.perms[self.pi];
            let template = &self.templates[self.ti];
            self.ti += 1;
            if self.ti == self.templates.len() {
                self.ti = 0;
                self.pi += 1;
            }

            let permuted = template.iter().map(|w| permute_columns(w, sigma));
            let rays: Vec<RayMatrix> = match &self.face {
                None => permuted.collect(),
                Some((_, weights)) => {
                    let mut kept = Vec::new();
                    let mut dropped_term = false;
                    for ray in permuted {
                        let mu = weights.mu(&ray);
                        if mu.is_negative() {
                            dropped_term = true;
                            break;
                        }
                        if mu.is_zero() {
                            kept.push(ray);
                        }
                        // mu > 0: the factor tends to 1, the ray disappears
                    }
                    if dropped_term {
                        continue;
                    }
                    kept
                }
            };
            return Some(ConeTerm {
                sign: 1,
                vertex: sigma.clone(),
                rays,
            });
        }
    }
}

fn build_templates(n: usize, root: usize) -> Result<Vec<Vec<RayMatrix>>> {
    enumerate_arborescences(n, root)?
        .iter()
        .map(|t| {
            t.off_tree_edges()
                .into_iter()
                .map(|e| ray_matrix(t, e))
                .collect()
        })
        .collect()
}

/// The term stream of the full Birkhoff polytope: for each permutation
/// (lexicographic, outer) and each root-arborescence (inner), the unimodular
/// cone with rays {W^{T,e} sigma}. All signs are +1.
pub fn birkhoff_terms(n: usize, root: usize) -> Result<TermStream> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
    }
    if root >= n {
        return Err(Error::InvalidInput(format!(
            "root {} out of range for n={n}",
            root + 1
        )));
    }
    Ok(TermStream {
        perms: enumerate_permutations(n),
        templates: build_templates(n, root)?,
        face: None,
        pi: 0,
        ti: 0,
    })
}

/// The s -> 0 limit of the full stream under the substitution
/// z_ij := s^{lambda_ij} at the zero positions: vertices hitting the pattern
/// vanish, rays with positive weight are removed, terms owning a ray of
/// negative weight are dropped.
pub fn face_terms(
    n: usize,
    root: usize,
    pattern: &ZeroPattern,
    weights: &FaceWeights,
) -> Result<TermStream> {
    if !pattern.face_is_nonempty(n) {
        return Err(Error::EmptyFace);
    }
    let mut stream = birkhoff_terms(n, root)?;
    stream.perms.retain(|sigma| pattern.admits(sigma));
    stream.face = Some((pattern.clone(), weights.clone()));
    Ok(stream)
}

/// Monomial z^M with integer exponent matrix M. Requires nonzero entries.
fn z_power(z: &[Vec<Rational>], exponent: impl Fn(usize, usize) -> i64, n: usize) -> Rational {
    let mut num = Rational::one();
    let mut den = Rational::one();
    for (i, row) in z.iter().enumerate().take(n) {
        for (j, zij) in row.iter().enumerate().take(n) {
            let e = exponent(i, j);
            match e.cmp(&0) {
                std::cmp::Ordering::Greater => {
                    for _ in 0..e {
                        num *= zij;
                    }
                }
                std::cmp::Ordering::Less => {
                    for _ in 0..-e {
                        den *= zij;
                    }
                }
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    num / den
}

/// Evaluates the generating function at an explicit rational matrix z for
/// dilation t. By Brion's identity the result equals the finite monomial sum
/// over the lattice points of the dilated polytope or face.
pub fn evaluate_mgf(
    terms: impl Iterator<Item = ConeTerm>,
    t: u32,
    z: &[Vec<Rational>],
) -> Result<Rational> {
    if z.iter().any(|row| row.iter().any(|e| e.is_zero())) {
        return Err(Error::InvalidInput("z entries must be nonzero".into()));
    }
    let mut total = Rational::zero();
    for term in terms {
        let n = term.vertex.n();
        let vertex_part = z_power(
            z,
            |i, j| {
                if term.vertex.apply(i) == j {
                    t as i64
                } else {
                    0
                }
            },
            n,
        );
        let mut value = vertex_part;
        for ray in &term.rays {
            let zb = z_power(z, |i, j| ray.entry(i, j) as i64, n);
            let denom = Rational::one() - zb;
            if denom.is_zero() {
                return Err(Error::PoleEncountered);
            }
            value /= denom;
        }
        if term.sign < 0 {
            total -= value;
        } else {
            total += value;
        }
    }
    Ok(total)
}

/// JSON shape of one term for the debugging/interop export.
#[derive(Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub sign: i8,
    /// 1-based permutation image.
    pub vertex: Vec<usize>,
    /// Row-major entries of each ray matrix.
    pub rays: Vec<Vec<i32>>,
}

impl From<&ConeTerm> for TermJson {
    fn from(term: &ConeTerm) -> Self {
        TermJson {
            sign: term.sign,
            vertex: term.vertex.image_one_based(),
            rays: term.rays.iter().map(|r| r.entries().to_vec()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat_int;

    fn z_matrix(vals: &[&[i64]]) -> Vec<Vec<Rational>> {
        vals.iter()
            .map(|row| row.iter().map(|&v| rat_int(v)).collect())
            .collect()
    }

    #[test]
    fn n2_terms_are_the_two_hand_computed_ones() {
        let terms: Vec<ConeTerm> = birkhoff_terms(2, 0).unwrap().collect();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].vertex.image(), &[0, 1]);
        assert_eq!(terms[0].rays.len(), 1);
        assert_eq!(terms[0].rays[0].entries(), &[-1, 1, 1, -1]);
        assert_eq!(terms[1].vertex.image(), &[1, 0]);
        assert_eq!(terms[1].rays[0].entries(), &[1, -1, -1, 1]);
        assert!(terms.iter().all(|t| t.sign == 1));
    }

    #[test]
    fn n3_has_18_terms_of_4_rays() {
        let terms: Vec<ConeTerm> = birkhoff_terms(3, 2).unwrap().collect();
        assert_eq!(terms.len(), 18);
        assert!(terms.iter().all(|t| t.rays.len() == 4));
    }

    #[test]
    fn n4_has_384_terms_of_9_rays() {
        let stream = birkhoff_terms(4, 0).unwrap();
        assert_eq!(stream.candidate_count(), 384);
        let terms: Vec<ConeTerm> = stream.collect();
        assert_eq!(terms.len(), 384);
        assert!(terms.iter().all(|t| t.rays.len() == 9));
    }

    #[test]
    fn evaluate_n2_hand_example() {
        let z = z_matrix(&[&[2, 3], &[5, 7]]);
        let value = evaluate_mgf(birkhoff_terms(2, 0).unwrap(), 1, &z).unwrap();
        // 29 = 2*7 + 3*5, the two lattice points of B_2
        assert_eq!(value, rat_int(29));
    }

    #[test]
    fn evaluate_all_ones_is_a_pole() {
        let z = z_matrix(&[&[1, 1], &[1, 1]]);
        let err = evaluate_mgf(birkhoff_terms(2, 0).unwrap(), 1, &z).unwrap_err();
        assert!(matches!(err, Error::PoleEncountered));
    }

    #[test]
    fn empty_pattern_face_stream_matches_full_stream() {
        let pattern = ZeroPattern::empty();
        let weights = FaceWeights::default_for(&pattern);
        let full: Vec<ConeTerm> = birkhoff_terms(3, 0).unwrap().collect();
        let face: Vec<ConeTerm> = face_terms(3, 0, &pattern, &weights).unwrap().collect();
        assert_eq!(full, face);
    }

    #[test]
    fn facet_pattern_keeps_derangement_like_vertices() {
        let pattern = ZeroPattern::new(3, [(0, 0)]).unwrap();
        let weights = FaceWeights::default_for(&pattern);
        let terms: Vec<ConeTerm> = face_terms(3, 0, &pattern, &weights).unwrap().collect();
        let vertices: BTreeSet<Vec<usize>> =
            terms.iter().map(|t| t.vertex.image().to_vec()).collect();
        assert_eq!(vertices.len(), 4); // 3! - 2! permutations with sigma(1) != 1
        assert!(vertices.iter().all(|img| img[0] != 0));
    }

    #[test]
    fn empty_face_is_rejected() {
        // forbidding the whole first row kills every permutation
        let pattern = ZeroPattern::new(2, [(0, 0), (0, 1)]).unwrap();
        let weights = FaceWeights::default_for(&pattern);
        assert!(matches!(
            face_terms(2, 0, &pattern, &weights).unwrap_err(),
            Error::EmptyFace
        ));
    }

    #[test]
    fn cry_pattern_shape() {
        let p = ZeroPattern::cry(4);
        assert_eq!(p.positions_one_based(), vec![(3, 1), (4, 1), (4, 2)]);
        assert_eq!(ZeroPattern::cry(5).len(), 6);
        assert_eq!(ZeroPattern::cry(3).len(), 1);
    }

    #[test]
    fn zero_pattern_parsing() {
        let p = ZeroPattern::parse(3, "1,1;2,3").unwrap();
        assert_eq!(p.positions_one_based(), vec![(1, 1), (2, 3)]);
        assert!(ZeroPattern::parse(3, "0,1").is_err());
        assert!(ZeroPattern::parse(3, "4,1").is_err());
        assert!(ZeroPattern::parse(3, "1;1").is_err());
        assert!(ZeroPattern::parse(3, "1,1;1,1").is_err());
    }

    #[test]
    fn term_json_round_trip() {
        let term = birkhoff_terms(2, 0).unwrap().next().unwrap();
        let json = serde_json::to_string(&TermJson::from(&term)).unwrap();
        let back: TermJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.vertex, vec![1, 2]);
        assert_eq!(back.rays, vec![vec![-1, 1, 1, -1]]);
    }
}
