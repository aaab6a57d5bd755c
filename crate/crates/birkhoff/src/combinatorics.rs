//! Permutations, arborescences on the complete directed graph, the cycle
//! matrices attached to (tree, off-tree edge) pairs and the dual rays they
//! pair against.
//!
//! All indices are 0-based internally; constructors taking 1-based data are
//! provided where the external interfaces need them.

use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}`, doubling as its 0/1 matrix with entry
/// `(i, sigma(i)) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(Error::InvalidInput(format!("not a permutation: {image:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// 1-based image, as used in serialized output.
    pub fn image_one_based(&self) -> Vec<usize> {
        self.image.iter().map(|v| v + 1).collect()
    }
}

/// All permutations of `{0, .., n-1}` in lexicographic order of their images.
pub fn enumerate_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut image: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation {
            image: image.clone(),
        });
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| image[i] < image[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| image[j] > image[i]).unwrap();
        image.swap(i, j);
        image[i + 1..].reverse();
    }
    out
}

/// A spanning tree of `{0, .., n-1}` with every edge directed away from the
/// root. Edges are stored parent -> child.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arborescence {
    root: usize,
    /// parent[v] for v != root; parent[root] == root.
    parent: Vec<usize>,
}

impl Arborescence {
    pub fn from_parents(root: usize, parent: Vec<usize>) -> Result<Self> {
        let n = parent.len();
        if root >= n || parent[root] != root {
            return Err(Error::InvalidInput("bad root".into()));
        }
        let t = Arborescence { root, parent };
        for v in 0..n {
            if !t.reaches_root(v) {
                return Err(Error::InvalidInput(format!(
                    "parent map has a cycle at vertex {v}"
                )));
            }
        }
        Ok(t)
    }

    fn reaches_root(&self, mut v: usize) -> bool {
        let mut steps = 0;
        while v != self.root {
            v = self.parent[v];
            steps += 1;
            if steps > self.parent.len() {
                return false;
            }
        }
        true
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> usize {
        self.parent[v]
    }

    /// Directed edges (parent, child), ordered by child.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n())
            .filter(move |&v| v != self.root)
            .map(move |v| (self.parent[v], v))
    }

    pub fn has_edge(&self, s: usize, t: usize) -> bool {
        t != self.root && self.parent[t] == s
    }

    /// The directed edges of the complete graph not in the tree, in
    /// lexicographic order. There are exactly (n-1)^2 of them.
    pub fn off_tree_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::with_capacity((n - 1) * (n - 1));
        for s in 0..n {
            for t in 0..n {
                if s != t && !self.has_edge(s, t) {
                    out.push((s, t));
                }
            }
        }
        out
    }
}

/// Yields every `root`-arborescence on `{0, .., n-1}` exactly once, in
/// lexicographic order of the parent vector. The count is n^{n-2}.
pub fn enumerate_arborescences(n: usize, root: usize) -> Result<Vec<Arborescence>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2, got {n}")));
    }
    if root >= n {
        return Err(Error::InvalidInput(format!("root {root} out of range for n={n}")));
    }
    let mut out = Vec::new();
    let mut parent = vec![0usize; n];
    parent[root] = root;
    fn rec(n: usize, root: usize, v: usize, parent: &mut Vec<usize>, out: &mut Vec<Arborescence>) {
        if v == n {
            let cand = Arborescence {
                root,
                parent: parent.clone(),
            };
            if (0..n).all(|u| cand.reaches_root(u)) {
                out.push(cand);
            }
            return;
        }
        if v == root {
            rec(n, root, v + 1, parent, out);
            return;
        }
        for p in 0..n {
            if p != v {
                parent[v] = p;
                rec(n, root, v + 1, parent, out);
            }
        }
    }
    rec(n, root, 0, &mut parent, &mut out);
    Ok(out)
}

/// The n x n cycle matrix W^{T,e}: entries in {-1,0,1}, all row and column
/// sums zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RayMatrix {
    n: usize,
    data: Vec<i32>,
}

impl RayMatrix {
    pub fn zero(n: usize) -> Self {
        RayMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn from_rows(rows: &[&[i32]]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            data.extend_from_slice(r);
        }
        RayMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> i32 {
        self.data[i * self.n + j]
    }

    fn entry_mut(&mut self, i: usize, j: usize) -> &mut i32 {
        &mut self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[i32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    /// Membership in the subspace of matrices with all row and column sums
    /// zero, with entries restricted to {-1, 0, 1}.
    pub fn is_valid_ray(&self) -> bool {
        if self.is_zero() || self.data.iter().any(|&e| e.abs() > 1) {
            return false;
        }
        for i in 0..self.n {
            let row: i32 = (0..self.n).map(|j| self.entry(i, j)).sum();
            let col: i32 = (0..self.n).map(|j| self.entry(j, i)).sum();
            if row != 0 || col != 0 {
                return false;
            }
        }
        true
    }
}

/// Weight of a directed edge (s, t): +1 at (s, t), -1 at (t, t).
fn add_edge_weight(m: &mut RayMatrix, s: usize, t: usize, sign: i32) {
    *m.entry_mut(s, t) += sign;
    *m.entry_mut(t, t) -= sign;
}

/// Adds `sign` times the weight of the root-to-v path of `tree` into `m`.
fn add_path_weight(m: &mut RayMatrix, tree: &Arborescence, mut v: usize, sign: i32) {
    while v != tree.root() {
        let p = tree.parent(v);
        add_edge_weight(m, p, v, sign);
        v = p;
    }
}

/// Builds W^{T,e} for an off-tree directed edge e = (s, t): the signed
/// incidence matrix of the unique cycle in T + e, via the weight identity
/// W^{T,e} = w^T(s) - w^T(t) + w(e).
pub fn ray_matrix(tree: &Arborescence, e: (usize, usize)) -> Result<RayMatrix> {
    let (s, t) = e;
    let n = tree.n();
    if s >= n || t >= n || s == t {
        return Err(Error::InvalidInput(format!("bad edge ({s}, {t})")));
    }
    if tree.has_edge(s, t) {
        return Err(Error::InvalidInput(format!(
            "edge ({s}, {t}) already belongs to the tree"
        )));
    }
    let mut m = RayMatrix::zero(n);
    add_path_weight(&mut m, tree, s, 1);
    add_path_weight(&mut m, tree, t, -1);
    add_edge_weight(&mut m, s, t, 1);
    debug_assert!(m.is_valid_ray());
    Ok(m)
}

/// Right-multiplies by the permutation matrix: entry (i, sigma(j)) of the
/// result equals entry (i, j) of `w`.
pub fn permute_columns(w: &RayMatrix, sigma: &Permutation) -> RayMatrix {
    let n = w.n();
    let mut out = RayMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            *out.entry_mut(i, sigma.apply(j)) = w.entry(i, j);
        }
    }
    out
}

/// An (n-1) x (n-1) dual ray M-bar_{i,j}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualRay {
    m: usize,
    data: Vec<i32>,
}

impl DualRay {
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> i32 {
        self.data[i * self.m + j]
    }

    pub fn entries(&self) -> &[i32] {
        &self.data
    }
}

/// All n(n-1) dual rays, keyed by their 0-based (i, j) index with i != j.
/// The three shapes: a single +1 entry (i, j < n-1), a row of -1 (j = n-1),
/// a column of -1 (i = n-1).
pub fn dual_rays(n: usize) -> Vec<((usize, usize), DualRay)> {
    let m = n - 1;
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut data = vec![0i32; m * m];
            if i < m && j < m {
                data[i * m + j] = 1;
            } else if j == m {
                for k in 0..m {
                    data[i * m + k] = -1;
                }
            } else {
                for k in 0..m {
                    data[k * m + j] = -1;
                }
            }
            out.push(((i, j), DualRay { m, data }));
        }
    }
    out
}

/// Inner product of the top-left (n-1) x (n-1) block of `w` with a dual ray.
pub fn projected_inner_product(w: &RayMatrix, ray: &DualRay) -> i32 {
    let m = ray.dim();
    let mut acc = 0;
    for i in 0..m {
        for j in 0..m {
            acc += w.entry(i, j) * ray.entry(i, j);
        }
    }
    acc
}

/// Fraction-free integer determinant (Bareiss), used by the unimodularity
/// checks. Entries stay bounded by Hadamard's inequality, well within i128
/// at the sizes we ever test.
pub fn det_bareiss(matrix: &[Vec<i128>]) -> i128 {
    let n = matrix.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = matrix.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}
