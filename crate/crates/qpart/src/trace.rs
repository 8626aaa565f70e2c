//! Executes a mutation sequence while tracking the s-, k- and k∨-variables
//! as exact integer linear forms in `(k_1..k_T, r_1..r_n)`, the per-step
//! signs and sign-corrected c-vectors, and computes the partition function
//! of the sequence.
//!
//! Trace construction is sequential; weight evaluation for distinct k-tuples
//! and coefficient extraction for distinct degrees are pure functions over
//! the finished trace.

use serde::Serialize;
use thiserror::Error;

use crate::qcoeff::{qbinom, LaurentPoly, RationalV, Sign};
use crate::quiver::{CVector, IceQuiver, MutationSequence, Quiver, QuiverError};
use crate::torus::{Series, SkewForm, TorusError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error("step {t} out of range 0..={max}")]
    StepOutOfRange { t: usize, max: usize },
    #[error("vector length {got} does not match vertex count {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// An integer linear form `Σ a_t k_t + Σ b_i r_i + c` in the k-variables of
/// a trace and the initial s-variables `r`.
///
/// Every form produced by a trace has zero constant slot; a nonzero constant
/// is an internal error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinForm {
    k: Vec<i64>,
    r: Vec<i64>,
    c: i64,
}

impl LinForm {
    pub fn zero(t_len: usize, n: usize) -> Self {
        LinForm { k: vec![0; t_len], r: vec![0; n], c: 0 }
    }

    /// The form `k_t` (`t` is 0-indexed here).
    pub fn k_unit(t: usize, t_len: usize, n: usize) -> Self {
        let mut f = LinForm::zero(t_len, n);
        f.k[t] = 1;
        f
    }

    /// The form `r_i` (`i` is 0-indexed here).
    pub fn r_unit(i: usize, t_len: usize, n: usize) -> Self {
        let mut f = LinForm::zero(t_len, n);
        f.r[i] = 1;
        f
    }

    pub fn k_coeffs(&self) -> &[i64] {
        &self.k
    }

    pub fn r_coeffs(&self) -> &[i64] {
        &self.r
    }

    pub fn constant(&self) -> i64 {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c == 0 && self.k.iter().all(|&x| x == 0) && self.r.iter().all(|&x| x == 0)
    }

    pub fn add(&self, rhs: &LinForm) -> LinForm {
        LinForm {
            k: self.k.iter().zip(&rhs.k).map(|(a, b)| a + b).collect(),
            r: self.r.iter().zip(&rhs.r).map(|(a, b)| a + b).collect(),
            c: self.c + rhs.c,
        }
    }

    pub fn sub(&self, rhs: &LinForm) -> LinForm {
        self.add(&rhs.scaled(-1))
    }

    pub fn scaled(&self, s: i64) -> LinForm {
        LinForm {
            k: self.k.iter().map(|a| a * s).collect(),
            r: self.r.iter().map(|a| a * s).collect(),
            c: self.c * s,
        }
    }

    /// Evaluates at integer points `k` and `r`.
    pub fn eval(&self, k: &[i64], r: &[i64]) -> i64 {
        debug_assert_eq!(k.len(), self.k.len());
        debug_assert_eq!(r.len(), self.r.len());
        let sk: i64 = self.k.iter().zip(k).map(|(a, x)| a * x).sum();
        let sr: i64 = self.r.iter().zip(r).map(|(a, x)| a * x).sum();
        sk + sr + self.c
    }

    /// Builds a form from explicit coefficient vectors; test helper.
    pub fn from_coeffs(k: Vec<i64>, r: Vec<i64>) -> Self {
        LinForm { k, r, c: 0 }
    }

    fn to_repr(&self) -> LinFormRepr {
        assert_eq!(self.c, 0, "trace-produced linear form has nonzero constant slot");
        LinFormRepr { k: self.k.clone(), r: self.r.clone() }
    }
}

/// Wire form of a [`LinForm`]: the constant slot is structurally zero for
/// all trace-produced forms and is not part of the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinFormRepr {
    pub k: Vec<i64>,
    pub r: Vec<i64>,
}

/// Per-step record of a mutation sequence execution: ice quivers, signs,
/// sign-corrected c-vectors `α_t`, the k∨-forms, and the evolving s-forms.
#[derive(Debug, Clone)]
pub struct MutationTrace {
    initial: Quiver,
    form: SkewForm,
    sequence: MutationSequence,
    ices: Vec<IceQuiver>,
    s_forms: Vec<Vec<LinForm>>,
    signs: Vec<Sign>,
    alphas: Vec<Vec<u32>>,
    kvees: Vec<LinForm>,
}

impl MutationTrace {
    pub fn initial(&self) -> &Quiver {
        &self.initial
    }

    pub fn form(&self) -> &SkewForm {
        &self.form
    }

    pub fn sequence(&self) -> &MutationSequence {
        &self.sequence
    }

    /// Sequence length `T`.
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn n(&self) -> usize {
        self.initial.n()
    }

    /// Ice quiver after `t` steps; `t = 0` is the framed initial quiver.
    pub fn ice(&self, t: usize) -> Result<&IceQuiver, TraceError> {
        self.ices.get(t).ok_or(TraceError::StepOutOfRange { t, max: self.len() })
    }

    pub fn final_ice(&self) -> &IceQuiver {
        self.ices.last().expect("trace holds T+1 ice quivers")
    }

    /// Sign `ε_t` of step `t = 1..T`.
    pub fn sign(&self, t: usize) -> Result<Sign, TraceError> {
        if t == 0 || t > self.len() {
            return Err(TraceError::StepOutOfRange { t, max: self.len() });
        }
        Ok(self.signs[t - 1])
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Sign-corrected c-vector `α_t = ε_t c_{m_t}(t-1)` of step `t = 1..T`.
    pub fn alpha(&self, t: usize) -> Result<&Vec<u32>, TraceError> {
        if t == 0 || t > self.len() {
            return Err(TraceError::StepOutOfRange { t, max: self.len() });
        }
        Ok(&self.alphas[t - 1])
    }

    pub fn alphas(&self) -> &[Vec<u32>] {
        &self.alphas
    }

    /// k∨-form of step `t = 1..T` as a linear form in `(k, r)`.
    pub fn kvee_form(&self, t: usize) -> Result<&LinForm, TraceError> {
        if t == 0 || t > self.len() {
            return Err(TraceError::StepOutOfRange { t, max: self.len() });
        }
        Ok(&self.kvees[t - 1])
    }

    pub fn kvee_forms(&self) -> &[LinForm] {
        &self.kvees
    }

    /// s-form of vertex `i` (0-indexed) after `t` steps.
    pub fn s_form(&self, t: usize, i: usize) -> Result<&LinForm, TraceError> {
        let row = self
            .s_forms
            .get(t)
            .ok_or(TraceError::StepOutOfRange { t, max: self.len() })?;
        row.get(i).ok_or(TraceError::LengthMismatch { expected: self.n(), got: i })
    }

    pub fn c_vector(&self, t: usize, v: usize) -> Result<CVector, TraceError> {
        Ok(self.ice(t)?.c_vector(v)?)
    }

    /// State vector `ψ(t) = Σ_i s_i(t) c_i(t)` as a vector of linear forms.
    pub fn state_vector(&self, t: usize) -> Result<Vec<LinForm>, TraceError> {
        let ice = self.ice(t)?;
        let n = self.n();
        let t_len = self.len();
        let mut psi = vec![LinForm::zero(t_len, n); n];
        for i in 0..n {
            let c = ice.c_vector(i)?;
            let s = &self.s_forms[t][i];
            for (j, component) in psi.iter_mut().enumerate() {
                *component = component.add(&s.scaled(c.entries()[j]));
            }
        }
        Ok(psi)
    }

    /// The grading weights `|α_t|` of all steps.
    fn alpha_degrees(&self) -> Vec<u32> {
        self.alphas.iter().map(|a| a.iter().sum()).collect()
    }

    pub fn report(&self) -> TraceReport {
        let steps = (1..=self.len())
            .map(|t| TraceStepReport {
                t,
                vertex: self.sequence.to_one_indexed()[t - 1],
                sign: self.signs[t - 1],
                alpha: self.alphas[t - 1].clone(),
                kvee_form: self.kvees[t - 1].to_repr(),
            })
            .collect();
        let s_table = self
            .s_forms
            .iter()
            .map(|row| row.iter().map(LinForm::to_repr).collect())
            .collect();
        TraceReport { steps, s_table }
    }
}

/// Wire form of a trace: per-step data plus the full s-table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub steps: Vec<TraceStepReport>,
    pub s_table: Vec<Vec<LinFormRepr>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStepReport {
    pub t: usize,
    pub vertex: i64,
    pub sign: Sign,
    pub alpha: Vec<u32>,
    pub kvee_form: LinFormRepr,
}

/// Runs the mutation sequence on the framed quiver, evolving the s-forms and
/// solving each step's linear relation for the k∨-form.
pub fn run_trace(q: &Quiver, m: &MutationSequence) -> Result<MutationTrace, TraceError> {
    let n = q.n();
    let t_len = m.len();
    let mut ices = Vec::with_capacity(t_len + 1);
    ices.push(q.framed());
    let mut s_forms = Vec::with_capacity(t_len + 1);
    s_forms.push((0..n).map(|i| LinForm::r_unit(i, t_len, n)).collect::<Vec<_>>());
    let mut signs = Vec::with_capacity(t_len);
    let mut alphas = Vec::with_capacity(t_len);
    let mut kvees = Vec::with_capacity(t_len);

    for (idx, &v) in m.steps().iter().enumerate() {
        let prev = ices.last().unwrap().clone();
        let s_prev = s_forms.last().unwrap().clone();
        let sign = prev.vertex_sign(v)?;
        let c = prev.c_vector(v)?;
        let alpha: Vec<u32> = c
            .entries()
            .iter()
            .map(|&x| {
                let corrected = sign.as_i64() * x;
                debug_assert!(corrected >= 0, "sign-corrected c-vector must be nonnegative");
                corrected as u32
            })
            .collect();
        debug_assert!(alpha.iter().any(|&a| a > 0), "sign-corrected c-vector must be nonzero");

        // k_t + k_t∨ = Σ_i B(t-1)_{v,i} s_i(t-1)
        let mut kvee = LinForm::zero(t_len, n);
        for i in 0..n {
            let b = prev.b_entry(v, i);
            if b != 0 {
                kvee = kvee.add(&s_prev[i].scaled(b));
            }
        }
        let k_t = LinForm::k_unit(idx, t_len, n);
        kvee = kvee.sub(&k_t);

        // s-evolution: only the mutated vertex changes. The arrow sums run
        // over the quiver before the mutation; arrow multiplicities are the
        // positive parts of B(t-1).
        let mut s_new = s_prev.clone();
        let mut arrow_sum = LinForm::zero(t_len, n);
        for i in 0..n {
            let mult = match sign {
                Sign::Plus => prev.b_entry(i, v).max(0),  // arrows i -> v
                Sign::Minus => prev.b_entry(v, i).max(0), // arrows v -> i
            };
            if mult != 0 {
                arrow_sum = arrow_sum.add(&s_prev[i].scaled(mult));
            }
        }
        s_new[v] = k_t.scaled(sign.as_i64()).sub(&s_prev[v]).add(&arrow_sum);

        ices.push(prev.mutate(v)?);
        s_forms.push(s_new);
        signs.push(sign);
        alphas.push(alpha);
        kvees.push(kvee);
    }

    Ok(MutationTrace {
        initial: q.clone(),
        form: SkewForm::from_quiver(q),
        sequence: m.clone(),
        ices,
        s_forms,
        signs,
        alphas,
        kvees,
    })
}

/// Mutation weight `W^ε(k, k∨) = q^(-εkk∨/2) [k + k∨ choose k]_{q^ε}`, a
/// Laurent polynomial in `v`.
pub fn mutation_weight(k: u32, kvee: i64, eps: Sign) -> LaurentPoly {
    qbinom(i64::from(k) + kvee, k, eps).shifted(-eps.as_i64() * i64::from(k) * kvee)
}

fn check_r(tr: &MutationTrace, r: &[i64]) -> Result<(), TraceError> {
    if r.len() != tr.n() {
        return Err(TraceError::LengthMismatch { expected: tr.n(), got: r.len() });
    }
    Ok(())
}

/// Enumerates `k ∈ N^T` with `Σ k_t w_t <= budget`, building the weight
/// product incrementally; calls `leaf` with the complete tuple, its degree
/// vector and the product of mutation weights. Branches whose partial
/// product vanishes are pruned.
fn for_each_weighted_tuple(
    tr: &MutationTrace,
    r: &[i64],
    budget: u32,
    leaf: &mut impl FnMut(&[u32], &[u32], &LaurentPoly, u32),
) {
    let t_len = tr.len();
    let dfs = WeightDfs { tr, r, budget, degrees: tr.alpha_degrees() };
    let mut ks = vec![0u32; t_len];
    let mut kvals = vec![0i64; t_len];
    dfs.walk(
        0,
        0,
        vec![0u32; tr.n()],
        LaurentPoly::one(),
        &mut ks,
        &mut kvals,
        leaf,
    );
}

struct WeightDfs<'a> {
    tr: &'a MutationTrace,
    r: &'a [i64],
    budget: u32,
    degrees: Vec<u32>,
}

impl WeightDfs<'_> {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        t: usize,
        used: u32,
        beta: Vec<u32>,
        partial: LaurentPoly,
        ks: &mut Vec<u32>,
        kvals: &mut Vec<i64>,
        leaf: &mut impl FnMut(&[u32], &[u32], &LaurentPoly, u32),
    ) {
        let tr = self.tr;
        if t == tr.len() {
            leaf(ks, &beta, &partial, used);
            return;
        }
        let w = self.degrees[t];
        let alpha = &tr.alphas[t];
        let mut k = 0u32;
        while used + k * w <= self.budget {
            ks[t] = k;
            kvals[t] = i64::from(k);
            // kvee_t depends only on k_1..k_t, all of which are chosen
            let kv = tr.kvees[t].eval(kvals, self.r);
            let weight = mutation_weight(k, kv, tr.signs[t]);
            if !weight.is_zero() {
                let beta2: Vec<u32> = beta.iter().zip(alpha).map(|(b, a)| b + a * k).collect();
                self.walk(
                    t + 1,
                    used + k * w,
                    beta2,
                    &partial * &weight,
                    ks,
                    kvals,
                    leaf,
                );
            }
            k += 1;
        }
        ks[t] = 0;
        kvals[t] = 0;
    }
}

/// Partition function `Z_m(r)` truncated to total degree `cutoff`: the sum
/// over `k ∈ N^T` of `∏_t W^{ε_t}(k_t, k_t∨(k, r)) · y^{Σ_t k_t α_t}`.
pub fn partition_function(
    tr: &MutationTrace,
    r: &[i64],
    cutoff: u32,
) -> Result<Series, TraceError> {
    partition_function_flagged(tr, r, cutoff).map(|(z, _)| z)
}

/// As [`partition_function`], also reporting whether any contributing
/// k-tuple touched the cutoff boundary — a heuristic "possibly truncated"
/// flag. The series may be genuinely infinite; no finiteness detection is
/// attempted.
pub fn partition_function_flagged(
    tr: &MutationTrace,
    r: &[i64],
    cutoff: u32,
) -> Result<(Series, bool), TraceError> {
    check_r(tr, r)?;
    let mut z = Series::zero(tr.form.clone(), cutoff);
    let mut boundary = false;
    for_each_weighted_tuple(tr, r, cutoff, &mut |_ks, beta, weight, used| {
        if used == cutoff && !tr.is_empty() {
            boundary = true;
        }
        z_accumulate(&mut z, beta.to_vec(), weight);
    });
    Ok((z, boundary))
}

fn z_accumulate(z: &mut Series, beta: Vec<u32>, weight: &LaurentPoly) {
    z.accumulate(beta, &RationalV::from(weight.clone()));
}

/// Coefficient `[y^β] Z_m(r)` as a Laurent polynomial: the finite sum over
/// `{k ∈ N^T : Σ_t k_t α_t = β}` of the weight products.
pub fn coefficient(
    tr: &MutationTrace,
    r: &[i64],
    beta: &[u32],
) -> Result<LaurentPoly, TraceError> {
    check_r(tr, r)?;
    if beta.len() != tr.n() {
        return Err(TraceError::LengthMismatch { expected: tr.n(), got: beta.len() });
    }
    let budget: u32 = beta.iter().sum();
    let mut acc = LaurentPoly::zero();
    for_each_weighted_tuple(tr, r, budget, &mut |_ks, b, weight, _used| {
        if b == beta {
            acc += weight;
        }
    });
    Ok(acc)
}
