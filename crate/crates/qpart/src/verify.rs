//! Machine checks of the two partition-function identities and rendering of
//! the q-binomial multisum identities they produce.
//!
//! The first check compares, coefficient by coefficient, the partition
//! function of a sequence against the ratio of quantum dilogarithm products
//! along that sequence; the ratio is computed twice — by genuine series
//! arithmetic (inverse and products) and by the direct q-binomial multisum —
//! and the two paths are required to agree exactly. The second check
//! compares the partition functions of two frozen-isomorphic sequences.
//! Identities are checked at instantiated integer `r`; the symbolic (exact
//! in `r`) content lives in the linear-form identities of the trace module.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::qcoeff::{qbinom, LaurentPoly, RationalV, Sign};
use crate::quiver::{frozen_isomorphism, MutationSequence, Quiver, QuiverError};
use crate::torus::{
    degree_vectors_up_to, dilog_series, ordered_product_expand, Series, TorusError,
};
use crate::trace::{partition_function, run_trace, MutationTrace, TraceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("the final ice quivers are not frozen isomorphic")]
    NotApplicable,
    #[error("series coefficient at {beta:?} is not denominator-free")]
    NonLaurentCoefficient { beta: Vec<u32> },
}

/// Outcome of a verification job.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// The lexicographically first differing degree vector with both values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FirstDiff {
    pub beta: Vec<u32>,
    pub lhs: RationalV,
    pub rhs: RationalV,
}

/// Result of one verification job; `status` is `Pass` exactly when no
/// coefficient differed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub status: Status,
    pub first_diff: Option<FirstDiff>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    fn finish(claim: String, diffs: Vec<FirstDiff>, start: Instant) -> Self {
        let first_diff = diffs.into_iter().min_by(|a, b| a.beta.cmp(&b.beta));
        VerificationReport {
            claim,
            status: if first_diff.is_none() { Status::Pass } else { Status::Fail },
            first_diff,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn signed_entries(alpha: &[u32]) -> Vec<i64> {
    alpha.iter().map(|&a| i64::from(a)).collect()
}

/// Checks that `q^(⟨β,r⟩/2) [y^β] Z_m(r)` equals the coefficient of `y^β` in
/// `(E(y^{α_1}; q^{ε_1}) ⋯ E(y^{α_T}; q^{ε_T}))^{-1}
///  (E(q^{⟨α_1,r⟩} y^{α_1}; q^{ε_1}) ⋯ E(q^{⟨α_T,r⟩} y^{α_T}; q^{ε_T}))`
/// for every `β` with `|β| ≤ cutoff`.
///
/// The right-hand side is computed both by series arithmetic and by the
/// q-binomial multisum expansion; the two paths must agree exactly, and
/// every compared right-hand coefficient must be denominator-free.
pub fn theorem1_check(
    q: &Quiver,
    m: &MutationSequence,
    r: &[i64],
    cutoff: u32,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let claim = format!("thm1 n={} m={} r={:?} D={}", q.n(), m, r, cutoff);
    let tr = run_trace(q, m)?;
    let form = tr.form().clone();
    let z = partition_function(&tr, r, cutoff)?;

    let mut plain = Series::one(form.clone(), cutoff);
    let mut shifted = Series::one(form.clone(), cutoff);
    let mut factors: Vec<(Vec<u32>, Sign)> = Vec::with_capacity(tr.len());
    let mut shifts: Vec<i64> = Vec::with_capacity(tr.len());
    for t in 1..=tr.len() {
        let alpha = tr.alpha(t)?.clone();
        let eps = tr.sign(t)?;
        let shift = form.pairing(&signed_entries(&alpha), r)?;
        plain = plain.mul(&dilog_series(&form, cutoff, &alpha, 0, eps)?)?;
        shifted = shifted.mul(&dilog_series(&form, cutoff, &alpha, shift, eps)?)?;
        factors.push((alpha, eps));
        shifts.push(shift);
    }
    let rhs = plain.inverse()?.mul(&shifted)?;
    let rhs_multisum = ordered_product_expand(&form, cutoff, &factors, &shifts)?;

    let mut diffs = Vec::new();
    for beta in degree_vectors_up_to(q.n(), cutoff) {
        let series_c = rhs.coefficient(&beta);
        let multisum_c = rhs_multisum.coefficient(&beta);
        if series_c != multisum_c {
            diffs.push(FirstDiff { beta: beta.clone(), lhs: series_c.clone(), rhs: multisum_c });
            continue;
        }
        if series_c.as_laurent().is_none() {
            return Err(VerifyError::NonLaurentCoefficient { beta });
        }
        let pairing = form.pairing(&signed_entries(&beta), r)?;
        let lhs = z.coefficient(&beta).mul_v_pow(pairing);
        if lhs != series_c {
            diffs.push(FirstDiff { beta, lhs, rhs: series_c });
        }
    }
    Ok(VerificationReport::finish(claim, diffs, start))
}

/// Checks `Z_m(r) = Z_{m'}(r)` up to the cutoff for two sequences whose
/// final framed quivers are frozen isomorphic; reports `NotApplicable` when
/// no frozen isomorphism exists.
pub fn theorem2_check(
    q: &Quiver,
    m: &MutationSequence,
    m2: &MutationSequence,
    r: &[i64],
    cutoff: u32,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let claim = format!("thm2 n={} m={} m'={} r={:?} D={}", q.n(), m, m2, r, cutoff);
    let tr1 = run_trace(q, m)?;
    let tr2 = run_trace(q, m2)?;
    if frozen_isomorphism(tr1.final_ice(), tr2.final_ice())?.is_none() {
        return Ok(VerificationReport {
            claim,
            status: Status::NotApplicable,
            first_diff: None,
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
    let z1 = partition_function(&tr1, r, cutoff)?;
    let z2 = partition_function(&tr2, r, cutoff)?;
    let mut diffs = Vec::new();
    let mut betas: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    betas.extend(z1.terms().map(|(b, _)| b.clone()));
    betas.extend(z2.terms().map(|(b, _)| b.clone()));
    for beta in betas {
        let lhs = z1.coefficient(&beta);
        let rhs = z2.coefficient(&beta);
        if lhs != rhs {
            diffs.push(FirstDiff { beta, lhs, rhs });
        }
    }
    Ok(VerificationReport::finish(claim, diffs, start))
}

/// One q-binomial factor `[upper choose lower]_{q^eps}` of an identity term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinomFactor {
    pub upper: i64,
    pub lower: u32,
    pub eps: Sign,
}

/// One term of a rendered identity: the contributing k-tuple, the power of
/// `v = q^(1/2)` in front, and the binomial factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityTerm {
    pub k: Vec<u32>,
    pub q_half_power: i64,
    pub factors: Vec<BinomFactor>,
}

impl IdentityTerm {
    pub fn evaluate(&self) -> LaurentPoly {
        let mut p = LaurentPoly::v_pow(self.q_half_power);
        for f in &self.factors {
            p = &p * &qbinom(f.upper, f.lower, f.eps);
        }
        p
    }
}

/// A q-binomial multisum identity extracted from one degree `β` of the
/// partition functions of two frozen-isomorphic sequences. The constraint
/// set of each side is spelled out by the recorded k-tuples, which all
/// satisfy `Σ_t k_t α_t = β`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedIdentity {
    pub beta: Vec<u32>,
    pub r: Vec<i64>,
    pub lhs_terms: Vec<IdentityTerm>,
    pub rhs_terms: Vec<IdentityTerm>,
    pub lhs_value: LaurentPoly,
    pub rhs_value: LaurentPoly,
    pub equal: bool,
}

fn identity_terms(
    tr: &MutationTrace,
    r: &[i64],
    beta: &[u32],
) -> Result<Vec<IdentityTerm>, VerifyError> {
    let t_len = tr.len();
    let budget: u32 = beta.iter().sum();
    let alphas = tr.alphas().to_vec();
    let degrees: Vec<u32> = alphas.iter().map(|a| a.iter().sum()).collect();
    let mut terms = Vec::new();
    let mut ks = vec![0u32; t_len];
    enumerate_matching(
        0,
        0,
        budget,
        beta,
        &alphas,
        &degrees,
        &mut ks,
        &mut |ks: &[u32]| {
            let kvals: Vec<i64> = ks.iter().map(|&k| i64::from(k)).collect();
            let mut q_half_power = 0i64;
            let mut factors = Vec::with_capacity(t_len);
            for t in 1..=t_len {
                let eps = tr.sign(t).expect("step in range");
                let kv = tr.kvee_form(t).expect("step in range").eval(&kvals, r);
                let k_t = kvals[t - 1];
                q_half_power -= eps.as_i64() * k_t * kv;
                factors.push(BinomFactor { upper: k_t + kv, lower: ks[t - 1], eps });
            }
            terms.push(IdentityTerm { k: ks.to_vec(), q_half_power, factors });
        },
    );
    Ok(terms)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_matching(
    t: usize,
    used: u32,
    budget: u32,
    beta: &[u32],
    alphas: &[Vec<u32>],
    degrees: &[u32],
    ks: &mut Vec<u32>,
    leaf: &mut impl FnMut(&[u32]),
) {
    if t == alphas.len() {
        // check Σ k_t α_t = β
        let mut acc = vec![0u32; beta.len()];
        for (k, alpha) in ks.iter().zip(alphas) {
            for (a, b) in acc.iter_mut().zip(alpha) {
                *a += k * b;
            }
        }
        if acc == beta {
            leaf(ks);
        }
        return;
    }
    let mut k = 0u32;
    while used + k * degrees[t] <= budget {
        ks[t] = k;
        enumerate_matching(t + 1, used + k * degrees[t], budget, beta, alphas, degrees, ks, leaf);
        k += 1;
    }
    ks[t] = 0;
}

/// Renders the identity obtained by comparing the coefficient of `y^β` in
/// the partition functions of two frozen-isomorphic sequences, as explicit
/// q-binomial term lists plus the evaluated polynomial value of each side.
///
/// When the left side consists of a single term, both sides are divided by
/// that term's `v`-power, which reproduces the prefactor-free q-binomial
/// form of the identity; a common shift never changes whether the sides are
/// equal.
pub fn render_identity(
    q: &Quiver,
    m: &MutationSequence,
    m2: &MutationSequence,
    r: &[i64],
    beta: &[u32],
) -> Result<RenderedIdentity, VerifyError> {
    let tr1 = run_trace(q, m)?;
    let tr2 = run_trace(q, m2)?;
    if frozen_isomorphism(tr1.final_ice(), tr2.final_ice())?.is_none() {
        return Err(VerifyError::NotApplicable);
    }
    let mut lhs_terms = identity_terms(&tr1, r, beta)?;
    let mut rhs_terms = identity_terms(&tr2, r, beta)?;
    if lhs_terms.len() == 1 {
        let offset = lhs_terms[0].q_half_power;
        for term in lhs_terms.iter_mut().chain(rhs_terms.iter_mut()) {
            term.q_half_power -= offset;
        }
    }
    let eval_side = |terms: &[IdentityTerm]| {
        terms
            .iter()
            .fold(LaurentPoly::zero(), |acc, t| acc + t.evaluate())
    };
    let lhs_value = eval_side(&lhs_terms);
    let rhs_value = eval_side(&rhs_terms);
    let equal = lhs_value == rhs_value;
    Ok(RenderedIdentity {
        beta: beta.to_vec(),
        r: r.to_vec(),
        lhs_terms,
        rhs_terms,
        lhs_value,
        rhs_value,
        equal,
    })
}

/// Checks one instance of the q-binomial identity
/// `[c+a choose a][d+b choose b] = Σ_{k=0}^{min(a,b)} q^((a-k)(b-k))
///  [c+d+k choose k][c+a-b choose a-k][d+b-a choose b-k]`.
pub fn stanley_check(a: u32, b: u32, c: u32, d: u32) -> VerificationReport {
    let start = Instant::now();
    let claim = format!("stanley a={a} b={b} c={c} d={d}");
    let (ai, bi, ci, di) = (i64::from(a), i64::from(b), i64::from(c), i64::from(d));
    let lhs = qbinom(ci + ai, a, Sign::Plus) * qbinom(di + bi, b, Sign::Plus);
    let mut rhs = LaurentPoly::zero();
    for k in 0..=a.min(b) {
        let ki = i64::from(k);
        let term = qbinom(ci + di + ki, k, Sign::Plus)
            * qbinom(ci + ai - bi, a - k, Sign::Plus)
            * qbinom(di + bi - ai, b - k, Sign::Plus);
        rhs += &term.shifted(2 * (ai - ki) * (bi - ki));
    }
    let diffs = if lhs == rhs {
        Vec::new()
    } else {
        vec![FirstDiff {
            beta: vec![a, b, c, d],
            lhs: RationalV::from(lhs),
            rhs: RationalV::from(rhs),
        }]
    };
    VerificationReport::finish(claim, diffs, start)
}

/// Runs [`stanley_check`] over the full box `(a,b,c,d) ∈ [0,max]^4`,
/// reporting the first failing instance if any.
pub fn stanley_suite(max: u32) -> VerificationReport {
    let start = Instant::now();
    let claim = format!("stanley all (a,b,c,d) in [0,{max}]^4");
    let mut diffs = Vec::new();
    'outer: for a in 0..=max {
        for b in 0..=max {
            for c in 0..=max {
                for d in 0..=max {
                    let rep = stanley_check(a, b, c, d);
                    if !rep.passed() {
                        diffs = rep.first_diff.into_iter().collect();
                        break 'outer;
                    }
                }
            }
        }
    }
    VerificationReport::finish(claim, diffs, start)
}
