//! Job parsing, validation and dispatch.
//!
//! A job is a single JSON object describing the quiver (exchange matrix or
//! 1-indexed arrow list), one or two mutation sequences, the initial
//! s-variables `r`, the truncation degree, an optional degree vector `beta`
//! and optionally the command name. Command-line flags override the
//! corresponding job fields.

use serde::Deserialize;
use thiserror::Error;

use qpart::quiver::{classify_sequence, MutationSequence, Quiver};
use qpart::trace::{partition_function, run_trace};
use qpart::verify::{
    render_identity, stanley_suite, theorem1_check, theorem2_check, Status, VerifyError,
};

#[derive(Debug, Error)]
pub enum JobError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid job: {0}")]
    Validation(String),
}

fn invalid(msg: impl Into<String>) -> JobError {
    JobError::Validation(msg.into())
}

/// Exit codes: 0 success/pass, 1 verification failure, 2 input error.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Mutate,
    CMatrix,
    Classify,
    ZFun,
    Coeff,
    VerifyThm1,
    VerifyThm2,
    Identity,
    Stanley,
}

impl Command {
    pub fn parse(name: &str) -> Result<Command, JobError> {
        Ok(match name {
            "mutate" => Command::Mutate,
            "cmatrix" => Command::CMatrix,
            "classify" => Command::Classify,
            "zfun" => Command::ZFun,
            "coeff" => Command::Coeff,
            "verify-thm1" => Command::VerifyThm1,
            "verify-thm2" => Command::VerifyThm2,
            "identity" => Command::Identity,
            "stanley" => Command::Stanley,
            other => {
                return Err(invalid(format!(
                    "unknown command {other:?}; expected one of mutate, cmatrix, classify, \
                     zfun, coeff, verify-thm1, verify-thm2, identity, stanley"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Format {
    pub fn parse(name: &str) -> Result<Format, JobError> {
        match name {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(invalid(format!("unknown format {other:?}; expected json or text"))),
        }
    }
}

/// Flag-level overrides applied on top of the job file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub command: Option<String>,
    pub degree: Option<u32>,
    pub r: Option<Vec<i64>>,
    pub beta: Option<Vec<i64>>,
    pub format: Option<Format>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    n: Option<usize>,
    #[serde(rename = "B")]
    b: Option<Vec<Vec<i64>>>,
    arrows: Option<Vec<(i64, i64, i64)>>,
    sequence: Option<Vec<i64>>,
    sequence2: Option<Vec<i64>>,
    r: Option<Vec<i64>>,
    degree: Option<i64>,
    beta: Option<Vec<i64>>,
    command: Option<String>,
    format: Option<String>,
}

/// A validated job ready for dispatch.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub format: Format,
    pub quiver: Option<Quiver>,
    pub sequence: Option<MutationSequence>,
    pub sequence2: Option<MutationSequence>,
    pub r: Vec<i64>,
    pub degree: u32,
    pub beta: Option<Vec<u32>>,
}

/// Parses and validates a JSON job description, applying flag overrides.
pub fn parse_job(input: &str, overrides: &Overrides) -> Result<JobSpec, JobError> {
    let raw: RawJob = serde_json::from_str(input)?;

    let command_name = overrides
        .command
        .clone()
        .or(raw.command)
        .ok_or_else(|| invalid("no command given (use --command or the \"command\" field)"))?;
    let command = Command::parse(&command_name)?;

    let format = match (&overrides.format, &raw.format) {
        (Some(f), _) => *f,
        (None, Some(name)) => Format::parse(name)?,
        (None, None) => Format::Json,
    };

    let quiver = match (raw.b, raw.arrows) {
        (Some(_), Some(_)) => {
            return Err(invalid("give either \"B\" or \"arrows\", not both"));
        }
        (Some(b), None) => {
            if let Some(n) = raw.n {
                if n != b.len() {
                    return Err(invalid(format!(
                        "field n = {n} does not match the {} rows of B",
                        b.len()
                    )));
                }
            }
            Some(Quiver::new(b).map_err(|e| invalid(format!("B: {e}")))?)
        }
        (None, Some(arrows)) => {
            let n = raw.n.ok_or_else(|| invalid("arrow-list quivers need the field n"))?;
            Some(Quiver::from_arrows(n, &arrows).map_err(|e| invalid(format!("arrows: {e}")))?)
        }
        (None, None) => None,
    };

    let n = quiver.as_ref().map(Quiver::n);
    let parse_seq = |steps: &[i64], field: &str| -> Result<MutationSequence, JobError> {
        let n = n.ok_or_else(|| invalid(format!("{field} needs a quiver")))?;
        MutationSequence::from_one_indexed(steps, n).map_err(|e| invalid(format!("{field}: {e}")))
    };
    let sequence = raw.sequence.as_deref().map(|s| parse_seq(s, "sequence")).transpose()?;
    let sequence2 = raw.sequence2.as_deref().map(|s| parse_seq(s, "sequence2")).transpose()?;

    let degree = match overrides.degree {
        Some(d) => d,
        None => match raw.degree {
            Some(d) if d >= 0 => d as u32,
            Some(d) => return Err(invalid(format!("degree must be nonnegative, got {d}"))),
            None => 4,
        },
    };

    let r = match overrides.r.clone().or(raw.r) {
        Some(r) => {
            if let Some(n) = n {
                if r.len() != n {
                    return Err(invalid(format!(
                        "r has length {}, expected {n}",
                        r.len()
                    )));
                }
            }
            r
        }
        None => vec![0; n.unwrap_or(0)],
    };

    let beta = match overrides.beta.clone().or(raw.beta) {
        Some(raw_beta) => {
            if let Some(n) = n {
                if raw_beta.len() != n {
                    return Err(invalid(format!(
                        "beta has length {}, expected {n}",
                        raw_beta.len()
                    )));
                }
            }
            let mut beta = Vec::with_capacity(raw_beta.len());
            for x in raw_beta {
                if x < 0 {
                    return Err(invalid(format!("beta entries must be nonnegative, got {x}")));
                }
                beta.push(x as u32);
            }
            Some(beta)
        }
        None => None,
    };

    Ok(JobSpec {
        command,
        format,
        quiver,
        sequence,
        sequence2,
        r,
        degree,
        beta,
    })
}

/// The result of a dispatched job: a process exit code and the report text
/// for stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
}

fn need_quiver(job: &JobSpec) -> Result<&Quiver, JobError> {
    job.quiver.as_ref().ok_or_else(|| invalid("this command needs a quiver (\"B\" or \"arrows\")"))
}

fn need_sequence(job: &JobSpec) -> Result<&MutationSequence, JobError> {
    job.sequence.as_ref().ok_or_else(|| invalid("this command needs the field \"sequence\""))
}

fn need_sequence2(job: &JobSpec) -> Result<&MutationSequence, JobError> {
    job.sequence2.as_ref().ok_or_else(|| invalid("this command needs the field \"sequence2\""))
}

fn need_beta(job: &JobSpec) -> Result<&Vec<u32>, JobError> {
    job.beta.as_ref().ok_or_else(|| invalid("this command needs beta (field or --beta)"))
}

fn compute_err(e: impl std::fmt::Display) -> JobError {
    invalid(format!("{e}"))
}

fn signs_line(signs: &[qpart::qcoeff::Sign]) -> String {
    signs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

fn report_text(rep: &qpart::verify::VerificationReport) -> String {
    let mut out = format!(
        "claim: {}\nstatus: {}\nelapsed: {} ms\n",
        rep.claim,
        match rep.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
        },
        rep.elapsed_ms
    );
    if let Some(diff) = &rep.first_diff {
        out.push_str(&format!(
            "first difference at beta = {:?}\n  lhs: {}\n  rhs: {}\n",
            diff.beta, diff.lhs, diff.rhs
        ));
    }
    out
}

fn report_exit(status: Status) -> i32 {
    match status {
        Status::Pass => EXIT_PASS,
        Status::Fail | Status::NotApplicable => EXIT_FAIL,
    }
}

fn series_text(z: &qpart::torus::Series) -> String {
    let repr = z.to_repr();
    let mut out = format!("cutoff: {}\n", repr.cutoff);
    for term in &repr.terms {
        let beta: Vec<String> = term.beta.iter().map(u32::to_string).collect();
        let coeff = qpart::qcoeff::RationalV::new(term.num.clone(), term.den.clone())
            .expect("normalized term");
        out.push_str(&format!("y^({}): {}\n", beta.join(","), coeff));
    }
    out
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report serialization");
    s.push('\n');
    s
}

/// Runs a validated job and renders the report.
pub fn dispatch(job: &JobSpec) -> Result<Outcome, JobError> {
    let json = job.format == Format::Json;
    match job.command {
        Command::Mutate => {
            let q = need_quiver(job)?;
            let m = need_sequence(job)?;
            let fin = q.mutate_sequence(m).map_err(compute_err)?;
            let stdout = if json {
                json_line(&serde_json::json!({"n": fin.n(), "B": fin.matrix()}))
            } else {
                let mut s = String::new();
                for row in fin.matrix() {
                    s.push_str(&format!("{row:?}\n"));
                }
                s
            };
            Ok(Outcome { exit_code: EXIT_PASS, stdout })
        }
        Command::CMatrix => {
            let q = need_quiver(job)?;
            let m = need_sequence(job)?;
            let ice = q.framed().mutate_sequence(m).map_err(compute_err)?;
            let c = ice.c_matrix();
            let stdout = if json {
                json_line(&serde_json::json!({"C": c}))
            } else {
                let mut s = String::new();
                for row in &c {
                    s.push_str(&format!("{row:?}\n"));
                }
                s
            };
            Ok(Outcome { exit_code: EXIT_PASS, stdout })
        }
        Command::Classify => {
            let q = need_quiver(job)?;
            let m = need_sequence(job)?;
            let cls = classify_sequence(q, m).map_err(compute_err)?;
            let stdout = if json {
                json_line(&cls)
            } else {
                format!(
                    "signs: {}\ngreen: {}\nreddening: {}\nmaximal green: {}\n",
                    signs_line(&cls.signs),
                    cls.is_green,
                    cls.is_reddening,
                    cls.is_maximal_green
                )
            };
            Ok(Outcome { exit_code: EXIT_PASS, stdout })
        }
        Command::ZFun => {
            let q = need_quiver(job)?;
            let m = need_sequence(job)?;
            let tr = run_trace(q, m).map_err(compute_err)?;
            let z = partition_function(&tr, &job.r, job.degree).map_err(compute_err)?;
            let stdout = if json { json_line(&z.to_repr()) } else { series_text(&z) };
            Ok(Outcome { exit_code: EXIT_PASS, stdout })
        }
        Command::Coeff => {
            let q = need_quiver(job)?;
            let m = need_sequence(job)?;
            let beta = need_beta(job)?;
            let tr = run_trace(q, m).map_err(compute_err)?;
            let c = qpart::trace::coefficient(&tr, &job.r, beta).map_err(compute_err)?;
            let stdout = if json { json_line(&c) } else { format!("{c}\n") };
            Ok(Outcome { exit_code: EXIT_PASS, stdout })
        }
        Command::VerifyThm1 => {
            let q = need_quiver(job)?;
            let m = need_sequence(job)?;
            let rep = theorem1_check(q, m, &job.r, job.degree).map_err(compute_err)?;
            let stdout = if json { json_line(&rep) } else { report_text(&rep) };
            Ok(Outcome { exit_code: report_exit(rep.status), stdout })
        }
        Command::VerifyThm2 => {
            let q = need_quiver(job)?;
            let m = need_sequence(job)?;
            let m2 = need_sequence2(job)?;
            let rep = theorem2_check(q, m, m2, &job.r, job.degree).map_err(compute_err)?;
            let stdout = if json { json_line(&rep) } else { report_text(&rep) };
            Ok(Outcome { exit_code: report_exit(rep.status), stdout })
        }
        Command::Identity => {
            let q = need_quiver(job)?;
            let m = need_sequence(job)?;
            let m2 = need_sequence2(job)?;
            let beta = need_beta(job)?;
            let id = match render_identity(q, m, m2, &job.r, beta) {
                Ok(id) => id,
                Err(VerifyError::NotApplicable) => {
                    return Err(invalid(
                        "the final ice quivers are not frozen isomorphic; identity is not applicable",
                    ))
                }
                Err(e) => return Err(compute_err(e)),
            };
            let exit_code = if id.equal { EXIT_PASS } else { EXIT_FAIL };
            let stdout = if json {
                json_line(&id)
            } else {
                let mut s = format!(
                    "beta: {:?}\nr: {:?}\nterms: {} = {}\nlhs: {}\nrhs: {}\nequal: {}\n",
                    id.beta,
                    id.r,
                    id.lhs_terms.len(),
                    id.rhs_terms.len(),
                    id.lhs_value,
                    id.rhs_value,
                    id.equal
                );
                for (side, terms) in [("lhs", &id.lhs_terms), ("rhs", &id.rhs_terms)] {
                    for term in terms.iter() {
                        let factors: Vec<String> = term
                            .factors
                            .iter()
                            .map(|f| format!("[{} {}]_{{q^{}1}}", f.upper, f.lower, f.eps))
                            .collect();
                        s.push_str(&format!(
                            "{side} k={:?}: v^{} {}\n",
                            term.k,
                            term.q_half_power,
                            factors.join(" ")
                        ));
                    }
                }
                s
            };
            Ok(Outcome { exit_code, stdout })
        }
        Command::Stanley => {
            let rep = stanley_suite(4);
            let stdout = if json { json_line(&rep) } else { report_text(&rep) };
            Ok(Outcome { exit_code: report_exit(rep.status), stdout })
        }
    }
}
