//! The truncated quantum torus: graded noncommutative series with
//! [`RationalV`] coefficients, monomial commutation `y^α y^β =
//! q^(⟨α,β⟩/2) y^(α+β)`, series products and inverses, and quantum
//! dilogarithm series `E(q^s y^α; q^ε)`.
//!
//! Series are truncated by total degree `|β| = Σ β_i ≤ D`. Since every
//! grading direction `α` used here is a nonzero vector of nonnegative
//! integers, all coefficient sums below are finite.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcoeff::{qbinom, qpochhammer, ArithError, LaurentPoly, RationalV, Sign};
use crate::quiver::Quiver;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("vector length {got} does not match rank {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("series have different skew forms")]
    FormMismatch,
    #[error("form matrix is not skew-symmetric at ({0}, {1})")]
    NotSkewSymmetric(usize, usize),
    #[error("series have different cutoffs: {0} vs {1}")]
    CutoffMismatch(u32, u32),
    #[error("series has zero constant term and is not invertible")]
    ZeroConstantTerm,
    #[error("grading direction alpha must be nonzero")]
    ZeroAlpha,
    #[error("term of degree {degree} exceeds cutoff {cutoff}")]
    DegreeAboveCutoff { degree: u32, cutoff: u32 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// The skew-symmetric bilinear form `⟨e_i, e_j⟩ = B_ij` of the initial
/// quiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewForm {
    b: Vec<Vec<i64>>,
}

impl SkewForm {
    pub fn new(b: Vec<Vec<i64>>) -> Result<Self, TorusError> {
        let n = b.len();
        for row in &b {
            if row.len() != n {
                return Err(TorusError::LengthMismatch { expected: n, got: row.len() });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if b[i][j] != -b[j][i] {
                    return Err(TorusError::NotSkewSymmetric(i + 1, j + 1));
                }
            }
        }
        Ok(SkewForm { b })
    }

    pub fn from_quiver(q: &Quiver) -> Self {
        SkewForm { b: q.matrix().clone() }
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// `⟨a, b⟩ = Σ_{i,j} B_ij a_i b_j`; bilinear and antisymmetric.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> Result<i64, TorusError> {
        let n = self.n();
        if a.len() != n {
            return Err(TorusError::LengthMismatch { expected: n, got: a.len() });
        }
        if b.len() != n {
            return Err(TorusError::LengthMismatch { expected: n, got: b.len() });
        }
        let mut acc = 0i64;
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                acc += self.b[i][j] * a[i] * b[j];
            }
        }
        Ok(acc)
    }

    /// Pairing of two degree vectors; lengths are maintained by [`Series`].
    pub(crate) fn pairing_deg(&self, a: &[u32], b: &[u32]) -> i64 {
        debug_assert_eq!(a.len(), self.n());
        debug_assert_eq!(b.len(), self.n());
        let mut acc = 0i64;
        for i in 0..self.n() {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.n() {
                acc += self.b[i][j] * i64::from(a[i]) * i64::from(b[j]);
            }
        }
        acc
    }
}

/// A single term `coeff * y^alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub alpha: Vec<u32>,
    pub coeff: RationalV,
}

impl Monomial {
    pub fn new(alpha: Vec<u32>, coeff: RationalV) -> Self {
        Monomial { alpha, coeff }
    }

    pub fn unit(alpha: Vec<u32>) -> Self {
        Monomial { alpha, coeff: RationalV::one() }
    }

    pub fn degree(&self) -> u32 {
        self.alpha.iter().sum()
    }
}

fn degree_of(beta: &[u32]) -> u32 {
    beta.iter().sum()
}

/// All vectors in `N^n` of total degree exactly `d`, in lexicographic order.
pub(crate) fn degree_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(cur, pos + 1, left - v, out);
        }
        cur[pos] = 0;
    }
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(&mut cur, 0, d, &mut out);
    out
}

/// All vectors in `N^n` of total degree at most `max`, by degree then
/// lexicographic.
pub(crate) fn degree_vectors_up_to(n: usize, max: u32) -> Vec<Vec<u32>> {
    (0..=max).flat_map(|d| degree_vectors(n, d)).collect()
}

/// A truncated element of the quantum torus: a finite map from degree
/// vectors `β ∈ N^n` with `|β| ≤ cutoff` to coefficients.
///
/// Two series are equal iff their cutoffs and term maps agree; comparing
/// series with different cutoffs never re-truncates.
#[derive(Debug, Clone)]
pub struct Series {
    form: SkewForm,
    cutoff: u32,
    terms: BTreeMap<Vec<u32>, RationalV>,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.cutoff == other.cutoff && self.terms == other.terms
    }
}

impl Eq for Series {}

impl Series {
    pub fn zero(form: SkewForm, cutoff: u32) -> Self {
        Series { form, cutoff, terms: BTreeMap::new() }
    }

    pub fn one(form: SkewForm, cutoff: u32) -> Self {
        let n = form.n();
        let mut s = Series::zero(form, cutoff);
        s.terms.insert(vec![0; n], RationalV::one());
        s
    }

    pub fn from_monomial(form: SkewForm, cutoff: u32, m: Monomial) -> Result<Self, TorusError> {
        Series::from_terms(form, cutoff, [(m.alpha, m.coeff)])
    }

    pub fn from_terms<I>(form: SkewForm, cutoff: u32, terms: I) -> Result<Self, TorusError>
    where
        I: IntoIterator<Item = (Vec<u32>, RationalV)>,
    {
        let n = form.n();
        let mut s = Series::zero(form, cutoff);
        for (beta, coeff) in terms {
            if beta.len() != n {
                return Err(TorusError::LengthMismatch { expected: n, got: beta.len() });
            }
            let d = degree_of(&beta);
            if d > cutoff {
                return Err(TorusError::DegreeAboveCutoff { degree: d, cutoff });
            }
            s.accumulate(beta, &coeff);
        }
        Ok(s)
    }

    pub(crate) fn accumulate(&mut self, beta: Vec<u32>, coeff: &RationalV) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&beta) {
            Some(c) => {
                let sum = &*c + coeff;
                if sum.is_zero() {
                    self.terms.remove(&beta);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(beta, coeff.clone());
            }
        }
    }

    pub fn form(&self) -> &SkewForm {
        &self.form
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RationalV)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, beta: &[u32]) -> RationalV {
        self.terms.get(beta).cloned().unwrap_or_else(RationalV::zero)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0u32; self.form.n()])
                .is_some_and(RationalV::is_one)
    }

    /// Re-truncates to a smaller cutoff, dropping higher-degree terms.
    pub fn truncated(&self, cutoff: u32) -> Result<Series, TorusError> {
        if cutoff > self.cutoff {
            return Err(TorusError::CutoffMismatch(self.cutoff, cutoff));
        }
        let terms = self
            .terms
            .iter()
            .filter(|(b, _)| degree_of(b) <= cutoff)
            .map(|(b, c)| (b.clone(), c.clone()))
            .collect();
        Ok(Series { form: self.form.clone(), cutoff, terms })
    }

    /// Noncommutative product: the coefficient of `y^γ` is
    /// `Σ_{α+β=γ} v^(⟨α,β⟩) s[α] t[β]`, discarding terms beyond the cutoff.
    pub fn mul(&self, rhs: &Series) -> Result<Series, TorusError> {
        if self.form != rhs.form {
            return Err(TorusError::FormMismatch);
        }
        if self.cutoff != rhs.cutoff {
            return Err(TorusError::CutoffMismatch(self.cutoff, rhs.cutoff));
        }
        let mut out = Series::zero(self.form.clone(), self.cutoff);
        for (a, ca) in &self.terms {
            let da = degree_of(a);
            for (b, cb) in &rhs.terms {
                if da + degree_of(b) > self.cutoff {
                    continue;
                }
                let twist = self.form.pairing_deg(a, b);
                let gamma: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let coeff = (ca * cb).mul_v_pow(twist);
                out.accumulate(gamma, &coeff);
            }
        }
        Ok(out)
    }

    /// Two-sided inverse up to the cutoff, computed degree by degree;
    /// requires an invertible (nonzero) constant term.
    pub fn inverse(&self) -> Result<Series, TorusError> {
        let n = self.form.n();
        let zero_key = vec![0u32; n];
        let c0 = self.coefficient(&zero_key);
        if c0.is_zero() {
            return Err(TorusError::ZeroConstantTerm);
        }
        let c0_inv = c0.inverse().expect("nonzero constant term");
        let mut inv = Series::zero(self.form.clone(), self.cutoff);
        inv.terms.insert(zero_key.clone(), c0_inv.clone());
        for d in 1..=self.cutoff {
            for gamma in degree_vectors(n, d) {
                // (s * inv)[γ] = 0 for γ ≠ 0 pins inv[γ]:
                // inv[γ] = -s[0]^{-1} Σ_{α≠0, α+β=γ} v^(⟨α,β⟩) s[α] inv[β]
                let mut acc = RationalV::zero();
                for (alpha, ca) in &self.terms {
                    if alpha == &zero_key {
                        continue;
                    }
                    if alpha.iter().zip(&gamma).any(|(a, g)| a > g) {
                        continue;
                    }
                    let beta: Vec<u32> =
                        gamma.iter().zip(alpha).map(|(g, a)| g - a).collect();
                    let Some(cb) = inv.terms.get(&beta) else { continue };
                    let twist = self.form.pairing_deg(alpha, &beta);
                    acc = &acc + &(ca * cb).mul_v_pow(twist);
                }
                if !acc.is_zero() {
                    inv.terms.insert(gamma, -&(&c0_inv * &acc));
                }
            }
        }
        Ok(inv)
    }

    pub fn to_repr(&self) -> SeriesRepr {
        let mut terms: Vec<SeriesTermRepr> = self
            .terms
            .iter()
            .map(|(beta, c)| SeriesTermRepr {
                beta: beta.clone(),
                num: c.num().clone(),
                den: c.den().clone(),
            })
            .collect();
        terms.sort_by(|a, b| {
            (degree_of(&a.beta), &a.beta).cmp(&(degree_of(&b.beta), &b.beta))
        });
        SeriesRepr { cutoff: self.cutoff, terms }
    }

    pub fn from_repr(repr: &SeriesRepr, form: SkewForm) -> Result<Series, TorusError> {
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in &repr.terms {
            let coeff = RationalV::new(t.num.clone(), t.den.clone())?;
            terms.push((t.beta.clone(), coeff));
        }
        Series::from_terms(form, repr.cutoff, terms)
    }
}

/// Wire form of a series: terms sorted by degree then lexicographic `β`,
/// coefficients as normalized numerator/denominator pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRepr {
    pub cutoff: u32,
    pub terms: Vec<SeriesTermRepr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTermRepr {
    pub beta: Vec<u32>,
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

fn check_alpha(form: &SkewForm, alpha: &[u32]) -> Result<(), TorusError> {
    if alpha.len() != form.n() {
        return Err(TorusError::LengthMismatch { expected: form.n(), got: alpha.len() });
    }
    if alpha.iter().all(|&a| a == 0) {
        return Err(TorusError::ZeroAlpha);
    }
    Ok(())
}

/// `(q^ε; q^ε)_k` as a Laurent polynomial.
fn pochhammer_signed(k: u32, eps: Sign) -> LaurentPoly {
    let p = qpochhammer(2, k);
    match eps {
        Sign::Plus => p,
        Sign::Minus => p.substitute_inverse(),
    }
}

/// Quantum dilogarithm series `E(q^shift · y^alpha; q^eps)` truncated to the
/// cutoff, via the Euler expansion
/// `E(x; q) = Σ_k (-1)^k q^(k/2) x^k / (q; q)_k`.
pub fn dilog_series(
    form: &SkewForm,
    cutoff: u32,
    alpha: &[u32],
    shift: i64,
    eps: Sign,
) -> Result<Series, TorusError> {
    check_alpha(form, alpha)?;
    let weight = degree_of(alpha);
    let mut terms = Vec::new();
    let mut k = 0u32;
    while k * weight <= cutoff {
        let kk = i64::from(k);
        // x^k contributes q^(εk/2 + shift·k) since (y^α)^k = y^(kα)
        let exp = eps.as_i64() * kk + 2 * shift * kk;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let num = LaurentPoly::term(exp, sign);
        let coeff = RationalV::new(num, pochhammer_signed(k, eps))?;
        let beta: Vec<u32> = alpha.iter().map(|&a| a * k).collect();
        terms.push((beta, coeff));
        k += 1;
    }
    Series::from_terms(form.clone(), cutoff, terms)
}

/// The ratio `E(x; q^eps)^(-1) E(q^m x; q^eps)` with `x = y^alpha`, as the
/// q-binomial sum `Σ_k q^(εk²/2) [εm choose k]_{q^ε} x^k`; its coefficients
/// are denominator-free.
pub fn dilog_ratio_series(
    form: &SkewForm,
    cutoff: u32,
    alpha: &[u32],
    m: i64,
    eps: Sign,
) -> Result<Series, TorusError> {
    check_alpha(form, alpha)?;
    let weight = degree_of(alpha);
    let mut terms = Vec::new();
    let mut k = 0u32;
    while k * weight <= cutoff {
        let kk = i64::from(k);
        let poly = qbinom(eps.as_i64() * m, k, eps).shifted(eps.as_i64() * kk * kk);
        let beta: Vec<u32> = alpha.iter().map(|&a| a * k).collect();
        terms.push((beta, RationalV::from(poly)));
        k += 1;
    }
    Series::from_terms(form.clone(), cutoff, terms)
}

/// Expands the dilogarithm-product ratio of a whole sequence directly as the
/// q-binomial multisum
///
/// `Σ_{k≥0} (∏_t q^(ε_t k_t²/2) [ε_t(n_t + Σ_{i<t} ⟨α_i,α_t⟩ k_i) choose k_t]_{q^{ε_t}})
///  · y^{k_T α_T} ⋯ y^{k_1 α_1}`,
///
/// with the ordered monomials normalized through the commutation relation.
/// Enumeration is restricted to `Σ_t k_t |α_t| ≤ cutoff`.
pub fn ordered_product_expand(
    form: &SkewForm,
    cutoff: u32,
    factors: &[(Vec<u32>, Sign)],
    n_shifts: &[i64],
) -> Result<Series, TorusError> {
    if factors.len() != n_shifts.len() {
        return Err(TorusError::LengthMismatch { expected: factors.len(), got: n_shifts.len() });
    }
    for (alpha, _) in factors {
        check_alpha(form, alpha)?;
    }
    let dfs = MultisumDfs {
        form,
        cutoff,
        factors,
        n_shifts,
        weights: factors.iter().map(|(a, _)| degree_of(a)).collect(),
    };
    let mut out = Series::zero(form.clone(), cutoff);
    let mut ks = vec![0u32; factors.len()];
    dfs.expand(
        0,
        0,
        vec![0u32; form.n()],
        LaurentPoly::one(),
        0,
        &mut ks,
        &mut out,
    );
    Ok(out)
}

/// Depth-first enumeration of `k ∈ N^T` with `Σ k_t |α_t| ≤ cutoff`. At
/// level `t` the binomial factor depends only on `k_1..k_t`, so the partial
/// weight product and the commutation exponent accumulate downward.
struct MultisumDfs<'a> {
    form: &'a SkewForm,
    cutoff: u32,
    factors: &'a [(Vec<u32>, Sign)],
    n_shifts: &'a [i64],
    weights: Vec<u32>,
}

impl MultisumDfs<'_> {
    #[allow(clippy::too_many_arguments)]
    fn expand(
        &self,
        t: usize,
        used: u32,
        beta: Vec<u32>,
        partial: LaurentPoly,
        comm: i64,
        ks: &mut Vec<u32>,
        out: &mut Series,
    ) {
        if t == self.factors.len() {
            // y^{k_T α_T} ⋯ y^{k_1 α_1} = v^(-Σ_{i<j} k_i k_j ⟨α_i,α_j⟩) y^β
            out.accumulate(beta, &RationalV::from(partial.shifted(-comm)));
            return;
        }
        let (alpha, eps) = &self.factors[t];
        let w = self.weights[t];
        let mut k = 0u32;
        while used + k * w <= self.cutoff {
            let kk = i64::from(k);
            // n_t + Σ_{i<t} ⟨α_i, α_t⟩ k_i
            let mut arg = self.n_shifts[t];
            for i in 0..t {
                arg += self.form.pairing_deg(&self.factors[i].0, alpha) * i64::from(ks[i]);
            }
            let factor = qbinom(eps.as_i64() * arg, k, *eps).shifted(eps.as_i64() * kk * kk);
            if !factor.is_zero() {
                ks[t] = k;
                let mut comm_add = 0i64;
                for i in 0..t {
                    comm_add +=
                        i64::from(ks[i]) * kk * self.form.pairing_deg(&self.factors[i].0, alpha);
                }
                let beta2: Vec<u32> = beta.iter().zip(alpha).map(|(b, a)| b + a * k).collect();
                self.expand(
                    t + 1,
                    used + k * w,
                    beta2,
                    &partial * &factor,
                    comm + comm_add,
                    ks,
                    out,
                );
            }
            k += 1;
        }
        ks[t] = 0;
    }
}
