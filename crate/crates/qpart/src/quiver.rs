//! Quivers as skew-symmetric integer matrices: mutation, framed/ice quivers,
//! c-vectors, green/red signs, sequence classification and frozen
//! isomorphism detection.
//!
//! Vertices are 1-indexed in every external interface; internally everything
//! is 0-indexed. Quiver values are immutable — `mutate` returns fresh values.

use serde::Serialize;
use thiserror::Error;

use crate::qcoeff::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("matrix is not skew-symmetric at ({i}, {j})")]
    NotSkewSymmetric { i: usize, j: usize },
    #[error("matrix row {row} has length {len}, expected {expected}")]
    RaggedMatrix { row: usize, len: usize, expected: usize },
    #[error("vertex {v} out of range 1..={n}")]
    VertexOutOfRange { v: i64, n: usize },
    #[error("cannot mutate at frozen vertex {v}")]
    FrozenVertex { v: usize },
    #[error("loop at vertex {v}")]
    LoopArrow { v: i64 },
    #[error("c-vector of vertex {v} has mixed signs: {entries:?}")]
    MixedSign { v: usize, entries: Vec<i64> },
    #[error("arrow between frozen vertices {i} and {j}")]
    FrozenArrows { i: usize, j: usize },
    #[error("ice quivers have mismatched sizes: ({0}, {1}) vs ({2}, {3})")]
    SizeMismatch(usize, usize, usize, usize),
}

/// A quiver without loops or 2-cycles, identified with its skew-symmetric
/// exchange matrix `B` (`B_ij` = arrows `i -> j` minus arrows `j -> i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    n: usize,
    b: Vec<Vec<i64>>,
}

fn check_skew(b: &[Vec<i64>]) -> Result<(), QuiverError> {
    let n = b.len();
    for (i, row) in b.iter().enumerate() {
        if row.len() != n {
            return Err(QuiverError::RaggedMatrix { row: i, len: row.len(), expected: n });
        }
    }
    for i in 0..n {
        for j in i..n {
            if b[i][j] != -b[j][i] {
                return Err(QuiverError::NotSkewSymmetric { i: i + 1, j: j + 1 });
            }
        }
    }
    Ok(())
}

impl Quiver {
    pub fn new(b: Vec<Vec<i64>>) -> Result<Self, QuiverError> {
        check_skew(&b)?;
        Ok(Quiver { n: b.len(), b })
    }

    /// Builds a quiver from a 1-indexed arrow list `(i, j, multiplicity)`.
    /// Opposite arrows cancel (`B_ij = Q_ij - Q_ji`); loops are rejected.
    pub fn from_arrows(n: usize, arrows: &[(i64, i64, i64)]) -> Result<Self, QuiverError> {
        let mut b = vec![vec![0i64; n]; n];
        for &(i, j, mult) in arrows {
            if i == j {
                return Err(QuiverError::LoopArrow { v: i });
            }
            let check = |v: i64| -> Result<usize, QuiverError> {
                if v < 1 || v > n as i64 {
                    Err(QuiverError::VertexOutOfRange { v, n })
                } else {
                    Ok((v - 1) as usize)
                }
            };
            let (i, j) = (check(i)?, check(j)?);
            b[i][j] += mult;
            b[j][i] -= mult;
        }
        Ok(Quiver { n, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Vec<Vec<i64>> {
        &self.b
    }

    /// Mutation at the 0-indexed vertex `k`:
    /// entries in row/column `k` flip sign, every other entry picks up
    /// `sgn(B_ik) * max(B_ik * B_kj, 0)`.
    pub fn mutate(&self, k: usize) -> Result<Quiver, QuiverError> {
        if k >= self.n {
            return Err(QuiverError::VertexOutOfRange { v: k as i64 + 1, n: self.n });
        }
        Ok(Quiver { n: self.n, b: mutate_matrix(&self.b, k) })
    }

    pub fn mutate_sequence(&self, m: &MutationSequence) -> Result<Quiver, QuiverError> {
        let mut q = self.clone();
        for &k in m.steps() {
            q = q.mutate(k)?;
        }
        Ok(q)
    }

    /// The framed quiver: one new frozen vertex `i'` per vertex `i`, with an
    /// arrow `i -> i'`; top-right block of the extended matrix is the
    /// identity and the frozen-frozen block is zero.
    pub fn framed(&self) -> IceQuiver {
        let n = self.n;
        let mut b = vec![vec![0i64; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                b[i][j] = self.b[i][j];
            }
            b[i][n + i] = 1;
            b[n + i][i] = -1;
        }
        IceQuiver { n, f: n, b }
    }
}

fn mutate_matrix(b: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let size = b.len();
    let mut out = vec![vec![0i64; size]; size];
    for i in 0..size {
        for j in 0..size {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + b[i][k].signum() * (b[i][k] * b[k][j]).max(0)
            };
        }
    }
    out
}

/// An ice quiver: `n` mutable vertices followed by `f` frozen ones, with no
/// arrows between frozen vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IceQuiver {
    n: usize,
    f: usize,
    b: Vec<Vec<i64>>,
}

impl IceQuiver {
    pub fn new(n: usize, f: usize, b: Vec<Vec<i64>>) -> Result<Self, QuiverError> {
        check_skew(&b)?;
        if b.len() != n + f {
            return Err(QuiverError::RaggedMatrix { row: 0, len: b.len(), expected: n + f });
        }
        for i in n..n + f {
            for j in n..n + f {
                if b[i][j] != 0 {
                    return Err(QuiverError::FrozenArrows { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(IceQuiver { n, f, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frozen_count(&self) -> usize {
        self.f
    }

    pub fn matrix(&self) -> &Vec<Vec<i64>> {
        &self.b
    }

    /// Mutation at a mutable vertex (0-indexed); frozen vertices are never
    /// mutated.
    pub fn mutate(&self, k: usize) -> Result<IceQuiver, QuiverError> {
        if k >= self.n + self.f {
            return Err(QuiverError::VertexOutOfRange { v: k as i64 + 1, n: self.n });
        }
        if k >= self.n {
            return Err(QuiverError::FrozenVertex { v: k + 1 });
        }
        Ok(IceQuiver { n: self.n, f: self.f, b: mutate_matrix(&self.b, k) })
    }

    pub fn mutate_sequence(&self, m: &MutationSequence) -> Result<IceQuiver, QuiverError> {
        let mut q = self.clone();
        for &k in m.steps() {
            q = q.mutate(k)?;
        }
        Ok(q)
    }

    /// The mutable-mutable block as a plain quiver.
    pub fn mutable_part(&self) -> Quiver {
        let b = (0..self.n)
            .map(|i| self.b[i][..self.n].to_vec())
            .collect();
        Quiver { n: self.n, b }
    }

    /// Entry `B_ij` of the mutable block.
    pub fn b_entry(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    /// c-vector of the mutable vertex `v`: row `v` of the mutable-to-frozen
    /// block.
    pub fn c_vector(&self, v: usize) -> Result<CVector, QuiverError> {
        if v >= self.n {
            return Err(QuiverError::VertexOutOfRange { v: v as i64 + 1, n: self.n });
        }
        Ok(CVector(self.b[v][self.n..self.n + self.f].to_vec()))
    }

    /// The c-matrix: rows are the c-vectors of the mutable vertices.
    pub fn c_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|v| self.b[v][self.n..self.n + self.f].to_vec())
            .collect()
    }

    /// `+1` if vertex `v` is green, `-1` if red; a sign-incoherent c-vector
    /// is a [`QuiverError::MixedSign`] error.
    pub fn vertex_sign(&self, v: usize) -> Result<Sign, QuiverError> {
        let c = self.c_vector(v)?;
        c.sign().ok_or(QuiverError::MixedSign { v: v + 1, entries: c.0 })
    }

    /// True when every mutable vertex is red.
    pub fn all_red(&self) -> Result<bool, QuiverError> {
        for v in 0..self.n {
            if self.vertex_sign(v)? == Sign::Plus {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A c-vector: one row of the c-matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CVector(pub Vec<i64>);

impl CVector {
    /// Sign of a sign-coherent vector: `Plus` if all entries are >= 0 with at
    /// least one positive, `Minus` in the mirrored case; `None` for a zero
    /// or mixed vector, which violates sign coherence.
    pub fn sign(&self) -> Option<Sign> {
        let any_pos = self.0.iter().any(|&x| x > 0);
        let any_neg = self.0.iter().any(|&x| x < 0);
        match (any_pos, any_neg) {
            (true, false) => Some(Sign::Plus),
            (false, true) => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }
}

/// A finite sequence of mutable vertices to mutate at, stored 0-indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationSequence {
    steps: Vec<usize>,
}

impl MutationSequence {
    /// Builds a sequence from 1-indexed vertices, validating the range.
    pub fn from_one_indexed(steps: &[i64], n: usize) -> Result<Self, QuiverError> {
        let mut out = Vec::with_capacity(steps.len());
        for &v in steps {
            if v < 1 || v > n as i64 {
                return Err(QuiverError::VertexOutOfRange { v, n });
            }
            out.push((v - 1) as usize);
        }
        Ok(MutationSequence { steps: out })
    }

    pub fn empty() -> Self {
        MutationSequence { steps: Vec::new() }
    }

    /// 0-indexed steps.
    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_one_indexed(&self) -> Vec<i64> {
        self.steps.iter().map(|&v| v as i64 + 1).collect()
    }
}

impl std::fmt::Display for MutationSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.to_one_indexed().iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Classification of a mutation sequence by the signs of its steps and the
/// colors of the final quiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceClassification {
    pub signs: Vec<Sign>,
    pub is_green: bool,
    pub is_reddening: bool,
    pub is_maximal_green: bool,
}

/// Runs the sequence on the framed quiver, recording the sign of each step
/// (taken on the quiver *before* that mutation).
pub fn classify_sequence(
    q: &Quiver,
    m: &MutationSequence,
) -> Result<SequenceClassification, QuiverError> {
    let mut ice = q.framed();
    let mut signs = Vec::with_capacity(m.len());
    for &v in m.steps() {
        signs.push(ice.vertex_sign(v)?);
        ice = ice.mutate(v)?;
    }
    let is_green = signs.iter().all(|&s| s == Sign::Plus);
    let is_reddening = ice.all_red()?;
    Ok(SequenceClassification {
        signs,
        is_green,
        is_reddening,
        is_maximal_green: is_green && is_reddening,
    })
}

/// Searches for a permutation `σ` of the mutable vertices (identity on the
/// frozen ones) carrying the extended matrix of `a` onto that of `b`:
/// `B_a[i][j] = B_b[σ(i)][σ(j)]` with `σ` extended by the identity on frozen
/// indices. Returns the lexicographically smallest such `σ` (0-indexed), or
/// `None` if the ice quivers are not frozen isomorphic.
pub fn frozen_isomorphism(
    a: &IceQuiver,
    b: &IceQuiver,
) -> Result<Option<Vec<usize>>, QuiverError> {
    if a.n != b.n || a.f != b.f {
        return Err(QuiverError::SizeMismatch(a.n, a.f, b.n, b.f));
    }
    let n = a.n;
    // Candidate images must agree on the rows to frozen vertices, which σ
    // fixes pointwise.
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let row_a = &a.b[i][n..];
        let cands: Vec<usize> = (0..n).filter(|&j| b.b[j][n..] == *row_a).collect();
        if cands.is_empty() {
            return Ok(None);
        }
        candidates.push(cands);
    }
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if backtrack(a, b, &candidates, &mut sigma, &mut used, 0) {
        Ok(Some(sigma))
    } else {
        Ok(None)
    }
}

fn backtrack(
    a: &IceQuiver,
    b: &IceQuiver,
    candidates: &[Vec<usize>],
    sigma: &mut Vec<usize>,
    used: &mut Vec<bool>,
    i: usize,
) -> bool {
    let n = a.n;
    if i == n {
        return true;
    }
    // Candidates are tried in increasing order, so the first complete
    // assignment is the lexicographically smallest one.
    for &j in &candidates[i] {
        if used[j] {
            continue;
        }
        let consistent = (0..i).all(|i0| {
            a.b[i][i0] == b.b[j][sigma[i0]] && a.b[i0][i] == b.b[sigma[i0]][j]
        }) && a.b[i][i] == b.b[j][j];
        if !consistent {
            continue;
        }
        sigma[i] = j;
        used[j] = true;
        if backtrack(a, b, candidates, sigma, used, i + 1) {
            return true;
        }
        used[j] = false;
        sigma[i] = usize::MAX;
    }
    false
}
