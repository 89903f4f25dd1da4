//! Identity reports and the verdict rules.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::sampler::ParamRecord;

pub const SCHEMA_VERSION: &str = "1";

/// Share of failed evaluations above which a run is inconclusive.
pub const MAX_FAILURE_SHARE: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    HoldsWithCorrectedConvention,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithCorrectedConvention => "holds_with_corrected_convention",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// Whether this verdict makes a gating check fail.
    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fails | Verdict::Inconclusive)
    }
}

/// One comparison of a sample under one convention variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_err: f64,
}

/// What an identity produces for one sample: a comparison per variant, in
/// the identity's variant order, plus auxiliary diagnostics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub comparisons: Vec<Comparison>,
    pub aux: BTreeMap<String, f64>,
}

/// `|lhs − rhs| / max(|rhs|, floor)`; non-finite values give infinity.
pub fn rel_err(lhs: Complex64, rhs: Complex64, floor: f64) -> f64 {
    let e = (lhs - rhs).norm() / rhs.norm().max(floor).max(f64::MIN_POSITIVE);
    if e.is_finite() {
        e
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub index: usize,
    pub params: ParamRecord,
    pub lhs: Option<Cx>,
    pub rhs: Option<Cx>,
    pub rel_err: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub aux: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantSummary {
    pub name: String,
    /// Largest relative error over the evaluated samples.
    pub max_rel_err: Option<f64>,
    pub samples_within_tolerance: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub title: String,
    pub tolerance: f64,
    pub seed: u64,
    pub sample_count: usize,
    pub evaluation_failures: usize,
    pub samples: Vec<SampleRecord>,
    pub max_rel_err: Option<f64>,
    pub verdict: Verdict,
    /// Variant whose comparisons fill the sample records.
    pub reported_variant: String,
    pub variants: Vec<VariantSummary>,
    pub convention_note: String,
}

/// Reduces per-sample outcomes (in index order) to a report.
///
/// Variant 0 is the formula as displayed. The run holds if it agrees on every
/// sample; otherwise the best-agreeing variant is named, and it holds with a
/// corrected convention if that variant agrees everywhere.
pub fn build_report(
    identity_id: &str,
    title: &str,
    variant_names: &[&str],
    tolerance: f64,
    seed: u64,
    params: Vec<ParamRecord>,
    outcomes: Vec<Result<Outcome, String>>,
) -> IdentityReport {
    let n = outcomes.len();
    let failures = outcomes.iter().filter(|o| o.is_err()).count();
    let summaries: Vec<VariantSummary> = variant_names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let errs: Vec<f64> = outcomes
                .iter()
                .filter_map(|o| o.as_ref().ok())
                .map(|o| o.comparisons[k].rel_err)
                .collect();
            VariantSummary {
                name: name.to_string(),
                max_rel_err: errs.iter().copied().reduce(f64::max),
                samples_within_tolerance: errs.iter().filter(|&&e| e <= tolerance).count(),
            }
        })
        .collect();
    let key = |s: &VariantSummary| s.max_rel_err.unwrap_or(f64::INFINITY);
    let best = (0..summaries.len())
        .min_by(|&a, &b| key(&summaries[a]).total_cmp(&key(&summaries[b])))
        .unwrap_or(0);
    let displayed_ok = key(&summaries[0]) <= tolerance;
    let best_ok = key(&summaries[best]) <= tolerance;
    let too_many_failures = failures as f64 > MAX_FAILURE_SHARE * n as f64;
    let (verdict, chosen) = if too_many_failures {
        (Verdict::Inconclusive, best)
    } else if failures == 0 && displayed_ok {
        (Verdict::Holds, 0)
    } else if failures == 0 && best_ok {
        (Verdict::HoldsWithCorrectedConvention, best)
    } else {
        (Verdict::Fails, if displayed_ok { 0 } else { best })
    };

    let samples = params
        .into_iter()
        .zip(outcomes)
        .enumerate()
        .map(|(index, (params, o))| match o {
            Ok(o) => {
                let c = o.comparisons[chosen];
                SampleRecord {
                    index,
                    params,
                    lhs: Some(c.lhs.into()),
                    rhs: Some(c.rhs.into()),
                    rel_err: Some(c.rel_err),
                    aux: o.aux,
                    error: None,
                }
            }
            Err(e) => SampleRecord {
                index,
                params,
                lhs: None,
                rhs: None,
                rel_err: None,
                aux: BTreeMap::new(),
                error: Some(e),
            },
        })
        .collect();

    let convention_note = convention_note(&summaries, chosen, verdict, failures, n);
    IdentityReport {
        identity_id: identity_id.to_string(),
        title: title.to_string(),
        tolerance,
        seed,
        sample_count: n,
        evaluation_failures: failures,
        samples,
        max_rel_err: summaries[chosen].max_rel_err,
        verdict,
        reported_variant: summaries[chosen].name.clone(),
        variants: summaries,
        convention_note,
    }
}

fn fmt_err(e: Option<f64>) -> String {
    e.map_or_else(|| "n/a".to_string(), |e| format!("{e:.3e}"))
}

fn convention_note(
    summaries: &[VariantSummary],
    chosen: usize,
    verdict: Verdict,
    failures: usize,
    n: usize,
) -> String {
    let mut note = String::new();
    if summaries.len() > 1 {
        let parts: Vec<String> = summaries
            .iter()
            .map(|s| format!("{} max_rel_err {}", s.name, fmt_err(s.max_rel_err)))
            .collect();
        note.push_str(&format!(
            "best-agreeing variant: {}; measured: {}",
            summaries[chosen].name,
            parts.join(", ")
        ));
    } else {
        note.push_str(&format!(
            "single variant {} max_rel_err {}",
            summaries[0].name,
            fmt_err(summaries[0].max_rel_err)
        ));
    }
    if failures > 0 {
        note.push_str(&format!("; {failures} of {n} samples failed to evaluate"));
    }
    if verdict == Verdict::HoldsWithCorrectedConvention {
        note.push_str(&format!(
            "; the displayed form ({}) does not hold",
            summaries[0].name
        ));
    }
    note
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(errs: &[f64]) -> Result<Outcome, String> {
        Ok(Outcome {
            comparisons: errs
                .iter()
                .map(|&e| Comparison {
                    lhs: Complex64::new(1.0 + e, 0.0),
                    rhs: Complex64::new(1.0, 0.0),
                    rel_err: e,
                })
                .collect(),
            aux: BTreeMap::new(),
        })
    }

    fn run(outcomes: Vec<Result<Outcome, String>>) -> IdentityReport {
        let params = vec![ParamRecord::new(); outcomes.len()];
        build_report("T", "test", &["displayed", "negated"], 1e-8, 0, params, outcomes)
    }

    #[test]
    fn displayed_variant_holds() {
        let r = run(vec![outcome(&[1e-10, 0.5]), outcome(&[1e-9, 0.4])]);
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.reported_variant, "displayed");
        assert_eq!(r.max_rel_err, Some(1e-9));
    }

    #[test]
    fn corrected_variant_is_named() {
        let r = run(vec![outcome(&[0.3, 1e-12]), outcome(&[2.0, 1e-11])]);
        assert_eq!(r.verdict, Verdict::HoldsWithCorrectedConvention);
        assert_eq!(r.reported_variant, "negated");
        assert!(r.convention_note.contains("best-agreeing variant: negated"));
    }

    #[test]
    fn failed_evaluation_blocks_holds() {
        let mut o: Vec<_> = (0..9).map(|_| outcome(&[1e-12, 1.0])).collect();
        o.push(Err("boom".into()));
        let r = run(o);
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.samples.len(), 10);
        assert_eq!(r.samples[9].error.as_deref(), Some("boom"));
    }

    #[test]
    fn many_failures_are_inconclusive() {
        let mut o: Vec<_> = (0..7).map(|_| outcome(&[1e-12, 1.0])).collect();
        o.extend((0..3).map(|_| Err("x".to_string())));
        assert_eq!(run(o).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn disagreement_fails() {
        let r = run(vec![outcome(&[0.1, 0.2])]);
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.reported_variant, "displayed");
    }

    #[test]
    fn rel_err_uses_floor() {
        let e = rel_err(Complex64::new(1e-9, 0.0), Complex64::new(0.0, 0.0), 1e-3);
        assert!((e - 1e-6).abs() < 1e-18);
        assert_eq!(rel_err(Complex64::new(f64::NAN, 0.0), Complex64::new(1.0, 0.0), 0.0), f64::INFINITY);
    }
}
