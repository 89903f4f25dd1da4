//! Registry of the identities checked by the harness and the parallel runner.

mod classical;
mod novel;
pub mod oracles;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::report::{build_report, IdentityReport, Outcome};
use crate::sampler::{ParamRecord, ParamSampler};
use oracles::Eval;

/// Default number of samples per identity.
pub const DEFAULT_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    I1,
    I2,
    I3,
    I4,
    I5,
    I6,
    I7,
    I8,
    I9,
    I10,
}

impl IdentityId {
    pub const ALL: [IdentityId; 10] = [
        IdentityId::I1,
        IdentityId::I2,
        IdentityId::I3,
        IdentityId::I4,
        IdentityId::I5,
        IdentityId::I6,
        IdentityId::I7,
        IdentityId::I8,
        IdentityId::I9,
        IdentityId::I10,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::I1 => "I1",
            IdentityId::I2 => "I2",
            IdentityId::I3 => "I3",
            IdentityId::I4 => "I4",
            IdentityId::I5 => "I5",
            IdentityId::I6 => "I6",
            IdentityId::I7 => "I7",
            IdentityId::I8 => "I8",
            IdentityId::I9 => "I9",
            IdentityId::I10 => "I10",
        }
    }

    pub fn definition(self) -> IdentityDef {
        match self {
            IdentityId::I1 => classical::i1(),
            IdentityId::I2 => novel::i2(),
            IdentityId::I3 => classical::i3(),
            IdentityId::I4 => classical::i4(),
            IdentityId::I5 => novel::i5(),
            IdentityId::I6 => novel::i6(),
            IdentityId::I7 => novel::i7(),
            IdentityId::I8 => novel::i8(),
            IdentityId::I9 => classical::i9(),
            IdentityId::I10 => classical::i10(),
        }
    }

    /// Whether a failing verdict sets the exit status without `--strict`.
    pub fn gates_by_default(self) -> bool {
        self.definition().gates_by_default
    }

    pub fn default_tolerance(self) -> f64 {
        self.definition().default_tol
    }

    /// The identity's standard sampling ranges.
    pub fn default_sampler(self, seed: u64, count: usize) -> ParamSampler {
        (self.definition().sampler)(seed, count)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown identity '{s}' (expected I1..I10)"))
    }
}

/// Everything the runner needs to know about one identity.
pub struct IdentityDef {
    pub title: &'static str,
    /// Convention variants; the first is the formula as displayed.
    pub variants: &'static [&'static str],
    pub default_tol: f64,
    pub gates_by_default: bool,
    pub sampler: fn(u64, usize) -> ParamSampler,
    /// Rejection rule keeping samples inside the identity's windows.
    pub accept: fn(&ParamRecord) -> bool,
    /// Per-index adjustments such as fixed test cases.
    pub fixup: fn(usize, &mut ParamRecord),
    pub eval: fn(&ParamRecord, f64) -> Eval<Outcome>,
}

fn no_fixup(_: usize, _: &mut ParamRecord) {}

fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("ISQK_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Runs identity `id` on every sample of `sampler` with tolerance `tol`.
///
/// Samples are evaluated in parallel and reduced in index order, so the
/// report depends only on the sampler and the tolerance.
pub fn run_identity_check(id: IdentityId, sampler: &ParamSampler, tol: f64) -> IdentityReport {
    let def = id.definition();
    let params: Vec<ParamRecord> = (0..sampler.count)
        .map(|i| {
            let mut r = sampler.draw(i, def.accept);
            (def.fixup)(i, &mut r);
            r
        })
        .collect();
    let eval = def.eval;
    let outcomes: Vec<Eval<Outcome>> = thread_pool().install(|| {
        params
            .par_iter()
            .map(|p| {
                eval(p, tol).and_then(|o| {
                    if o.comparisons.len() == def.variants.len() {
                        Ok(o)
                    } else {
                        Err("internal: variant count mismatch".to_string())
                    }
                })
            })
            .collect()
    });
    build_report(
        id.as_str(),
        def.title,
        def.variants,
        tol,
        sampler.seed,
        params,
        outcomes,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
            assert_eq!(id.as_str().to_lowercase().parse::<IdentityId>().unwrap(), id);
        }
        assert!("I11".parse::<IdentityId>().is_err());
    }

    #[test]
    fn gating_split() {
        let gating: Vec<_> = IdentityId::ALL.into_iter().filter(|i| i.gates_by_default()).collect();
        use IdentityId::*;
        assert_eq!(gating, vec![I1, I3, I4, I9, I10]);
    }

    #[test]
    fn default_samplers_respect_windows() {
        for id in IdentityId::ALL {
            let def = id.definition();
            let s = id.default_sampler(11, 40);
            for i in 0..s.count {
                assert!((def.accept)(&s.draw(i, def.accept)), "{id} sample {i}");
            }
        }
    }
}
