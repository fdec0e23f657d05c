//! Exhaustive cross-checks of the diagram theorems against the Jantzen oracle
//! and the combinatorial lemmas, reported as JSON lines.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::diagrams::{
    arrow_diagram, cap_curl, dagger, overlay, Arrow, DiagramContext, Mode, WallDrawing,
};
use crate::error::{Error, Result};
use crate::jantzen::{
    cancellation_pairs, check_linkage_bounds, collect_terms, distinct_l_values, full_jsf,
    reduced_jsf, DecompositionOracle,
};
use crate::multiplicities::{
    dagger_duality_check, decomposition_number, decomposition_number_with, tilting_mult,
    tilting_mult_with,
};
use crate::order::{
    conjugate, is_weyl_irreducible, jsf_arrow_pairs, lower_set, maximal_targets, preceq, WeylGroup,
};
use crate::weights::{in_lambda_region, is_p_core, GroupContext, Partition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub primes: Vec<u32>,
    pub m_max: u32,
    pub size_max: u64,
    /// Worker threads; 0 uses the available parallelism.
    pub jobs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub check: &'static str,
    pub detail: String,
}

/// Everything checked for one weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightRecord {
    pub p: u32,
    pub m: u32,
    pub lambda: Partition,
    /// `lambda_1 + l(lambda) <= p`; otherwise only the Jantzen-level checks run.
    pub in_region: bool,
    pub checks: BTreeMap<&'static str, u64>,
    pub discrepancies: Vec<Discrepancy>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub weights: usize,
    pub checks: u64,
    pub discrepancies: usize,
    pub diagnostics: usize,
    pub checks_by_kind: BTreeMap<&'static str, u64>,
    pub discrepancies_by_kind: BTreeMap<&'static str, usize>,
    pub elapsed_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub records: Vec<WeightRecord>,
    pub summary: SweepSummary,
}

impl SweepReport {
    /// One JSON object per weight followed by the summary object.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        let summary = json!({ "summary": self.summary });
        out.push_str(&serde_json::to_string(&summary).expect("summary serializes"));
        out.push('\n');
        out
    }

    pub fn discrepancy_count(&self, check: &str) -> usize {
        self.summary.discrepancies_by_kind.get(check).copied().unwrap_or(0)
    }

    pub fn check_count(&self, check: &str) -> u64 {
        self.summary.checks_by_kind.get(check).copied().unwrap_or(0)
    }
}

struct Recorder<'a> {
    record: &'a mut WeightRecord,
}

impl Recorder<'_> {
    fn check(&mut self, kind: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        *self.record.checks.entry(kind).or_insert(0) += 1;
        if !ok {
            self.record.discrepancies.push(Discrepancy { check: kind, detail: detail() });
        }
    }

    fn result<T>(&mut self, kind: &'static str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(kind, false, || e.to_string());
                None
            }
        }
    }
}

fn ctx_at(g: &GroupContext, s: u32) -> Result<DiagramContext> {
    DiagramContext::new(*g, s)
}

fn check_core(lambda: &Partition, g: &GroupContext, rec: &mut Recorder) {
    let tag = |lambda: &Partition| format!("p={} m={} lambda={lambda}", g.p(), g.m());
    let (full, reduced) = match (full_jsf(lambda, g), reduced_jsf(lambda, g)) {
        (Ok(f), Ok(r)) => (f, r),
        (Err(e), _) | (_, Err(e)) => {
            rec.check("full_vs_reduced", false, || format!("{}: {e}", tag(lambda)));
            return;
        }
    };
    match collect_terms(&reduced) {
        Ok(c) => rec.check("full_vs_reduced", c == full, || {
            format!("{}: full {full} vs reduced {c}", tag(lambda))
        }),
        Err(e) => rec.check("full_vs_reduced", false, || e.to_string()),
    }
    let pairs = cancellation_pairs(lambda, g);
    rec.check("cancellation", pairs.is_ok(), || {
        format!("{}: {}", tag(lambda), pairs.unwrap_err())
    });
    let ls = distinct_l_values(&reduced);
    if ls.len() > 2 {
        rec.record.diagnostics.push(format!("{}: reduced terms use l-values {ls:?}", tag(lambda)));
    }
}

/// Valid `s` for `lambda`: `max(1, l) ..= min(m, p - lambda_1)`.
fn s_range(lambda: &Partition, g: &GroupContext) -> std::ops::RangeInclusive<u32> {
    (lambda.len() as u32).max(1)..=g.m().min(g.p() - lambda.first())
}

fn check_region(lambda: &Partition, g: &GroupContext, oracle: &DecompositionOracle, rec: &mut Recorder) {
    let s = *s_range(lambda, g).start();
    let tag = format!("p={} m={} s={s} lambda={lambda}", g.p(), g.m());
    let Some(ctx) = rec.result("context", ctx_at(g, s)) else { return };

    let r = check_linkage_bounds(lambda, g);
    rec.check("linkage_bounds", r.is_ok(), || format!("{tag}: {}", r.unwrap_err()));
    let r = jsf_arrow_pairs(lambda, &ctx);
    rec.check("jsf_arrow_pairs", r.is_ok(), || format!("{tag}: {}", r.unwrap_err()));

    let Some(lower) = rec.result("lower_set", lower_set(lambda, &ctx)) else { return };
    let mut decomp = BTreeMap::new();
    let mut tilt = BTreeMap::new();
    for mu in &lower {
        let (Some(d), Some(t)) = (
            rec.result("decomposition", decomposition_number(lambda, mu, &ctx)),
            rec.result("tilting", tilting_mult(lambda, mu, &ctx)),
        ) else {
            return;
        };
        decomp.insert(mu.clone(), d);
        tilt.insert(mu.clone(), t);
    }

    // theorem against oracle
    let theorem: BTreeSet<&Partition> =
        decomp.iter().filter(|(mu, d)| **d == 1 && *mu != lambda).map(|(mu, _)| mu).collect();
    match oracle.row(lambda) {
        Ok(row) => {
            let oracle_support: BTreeSet<&Partition> = row.keys().collect();
            rec.check("oracle", oracle_support == theorem, || {
                format!("{tag}: oracle {oracle_support:?} vs theorem {theorem:?}")
            });
        }
        Err(Error::OracleInconsistency(msg)) => {
            rec.check("oracle_negative", false, || format!("{tag}: {msg}"));
        }
        Err(e) => rec.check("oracle", false, || format!("{tag}: {e}")),
    }

    rec.check("diagonal", decomp[lambda] == 1 && tilt[lambda] == 1, || tag.clone());
    for (mu, &d) in &decomp {
        if d == 1 {
            let ok = preceq(mu, lambda, &ctx).unwrap_or(false)
                && conjugate(lambda, mu, &ctx, WeylGroup::WpD).unwrap_or(false);
            rec.check("triangularity", ok, || format!("{tag} mu={mu}"));
        }
    }

    // irreducibility
    let irreducible = is_weyl_irreducible(lambda, &ctx);
    let reduced_empty = reduced_jsf(lambda, g).map(|t| t.is_empty());
    let full_zero = full_jsf(lambda, g).map(|c| c.is_zero());
    let unit = |m: &BTreeMap<Partition, u8>| m.iter().all(|(mu, &v)| (mu == lambda) == (v == 1));
    match (irreducible, reduced_empty, full_zero) {
        (Ok(a), Ok(b), Ok(c)) => rec.check(
            "irreducibility",
            a == b && b == c && a == unit(&decomp) && a == unit(&tilt),
            || format!("{tag}: diagram {a}, reduced empty {b}, full zero {c}"),
        ),
        _ => rec.check("irreducibility", false, || format!("{tag}: evaluation failed")),
    }

    // maximal targets
    if let Some(targets) = rec.result("maximal_targets", maximal_targets(lambda, &ctx)) {
        let strict: Vec<&Partition> = lower.iter().filter(|mu| *mu != lambda).collect();
        for t in &targets {
            let maximal = strict.contains(&t)
                && !strict.iter().any(|nu| {
                    *nu != t && preceq(t, nu, &ctx).unwrap_or(false)
                });
            rec.check("maximal_targets", maximal && decomp.get(t) == Some(&1), || {
                format!("{tag} target={t}")
            });
        }
    }

    // overlays that are oriented agree off their endpoints
    if let Ok(d) = arrow_diagram(lambda, &ctx, Arrow::Down) {
        let c = cap_curl(&d, Mode::C);
        for mu in &lower {
            if let Ok(o) = overlay(&c, mu) {
                if o.oriented {
                    rec.check("oriented_agreement", o.agrees_off_links, || {
                        format!("{tag} c overlay mu={mu}")
                    });
                }
            }
            if let Ok(md) = arrow_diagram(mu, &ctx, Arrow::Down) {
                if let Ok(o) = overlay(&cap_curl(&md, Mode::Co), lambda) {
                    if o.oriented {
                        rec.check("oriented_agreement", o.agrees_off_links, || {
                            format!("{tag} co_{mu} overlay")
                        });
                    }
                }
            }
        }
    }

    // dagger
    match dagger(lambda, &ctx).and_then(|d| dagger(&d, &ctx)) {
        Ok(back) => rec.check("dagger_involution", &back == lambda, || {
            format!("{tag}: dagger twice gives {back}")
        }),
        Err(e) => rec.check("dagger_involution", false, || format!("{tag}: {e}")),
    }
    for mu in &lower {
        let r = dagger_duality_check(lambda, mu, &ctx);
        rec.check("duality", matches!(r, Ok(true)), || format!("{tag} mu={mu}: {r:?}"));
    }

    // node-1 choice
    for mu in &lower {
        let ok = [Arrow::Up, Arrow::Down].iter().all(|&a| {
            tilting_mult_with(lambda, mu, &ctx, a).ok() == Some(tilt[mu])
                && decomposition_number_with(lambda, mu, &ctx, a).ok() == Some(decomp[mu])
        });
        rec.check("zero_arrow_invariance", ok, || format!("{tag} mu={mu}"));
    }

    // wall drawing
    if ctx.drawing_is_free() {
        for drawing in [WallDrawing::Above, WallDrawing::Below] {
            let ok = DiagramContext::with_drawing(*g, s, Some(drawing)).is_ok_and(|c2| {
                lower.iter().all(|mu| {
                    tilting_mult(lambda, mu, &c2).ok() == Some(tilt[mu])
                        && decomposition_number(lambda, mu, &c2).ok() == Some(decomp[mu])
                })
            });
            rec.check("wall_drawing_invariance", ok, || format!("{tag} drawing={drawing:?}"));
        }
    }

    // other s
    for s2 in s_range(lambda, g).skip(1) {
        let Ok(c2) = ctx_at(g, s2) else {
            rec.check("s_invariance", false, || format!("{tag} s'={s2}: no context"));
            continue;
        };
        let Ok(lower2) = lower_set(lambda, &c2) else {
            rec.check("s_invariance", false, || format!("{tag} s'={s2}: no lower set"));
            continue;
        };
        let in2 = |mu: &Partition| in_lambda_region(mu, s2, g).unwrap_or(false);
        let in1 = |mu: &Partition| in_lambda_region(mu, s, g).unwrap_or(false);
        let a: BTreeSet<&Partition> = lower.iter().filter(|mu| in2(mu)).collect();
        let b: BTreeSet<&Partition> = lower2.iter().filter(|mu| in1(mu)).collect();
        rec.check("s_invariance", a == b, || format!("{tag} s'={s2}: lower sets {a:?} vs {b:?}"));
        for mu in a {
            let ok = tilting_mult(lambda, mu, &c2).ok() == Some(tilt[mu])
                && decomposition_number(lambda, mu, &c2).ok() == Some(decomp[mu]);
            rec.check("s_invariance", ok, || format!("{tag} s'={s2} mu={mu}"));
        }
    }
}

fn check_weight(lambda: &Partition, g: &GroupContext, oracle: &DecompositionOracle) -> WeightRecord {
    let in_region = lambda.first() as u64 + lambda.len() as u64 <= g.p() as u64;
    let mut record = WeightRecord {
        p: g.p(),
        m: g.m(),
        lambda: lambda.clone(),
        in_region,
        checks: BTreeMap::new(),
        discrepancies: Vec::new(),
        diagnostics: Vec::new(),
    };
    let mut rec = Recorder { record: &mut record };
    check_core(lambda, g, &mut rec);
    if in_region {
        check_region(lambda, g, oracle, &mut rec);
    }
    record
}

/// Runs every check on every p-core `lambda` with `l(lambda) <= m`,
/// `|lambda| <= size_max`, for each `p` and `m <= m_max`; weights with
/// `lambda_1 + l(lambda) <= p` get the full set of checks.
pub fn verify_sweep(config: &SweepConfig) -> Result<SweepReport> {
    let start = Instant::now();
    let mut items = Vec::new();
    let mut oracles = HashMap::new();
    let mut primes = config.primes.clone();
    primes.sort_unstable();
    primes.dedup();
    for &p in &primes {
        for m in 1..=config.m_max {
            let g = GroupContext::new(p, m)?;
            let oracle = Arc::new(DecompositionOracle::new(g));
            oracles.insert((p, m), Arc::clone(&oracle));
            for lambda in Partition::enumerate(m as usize, config.size_max) {
                if is_p_core(&lambda, &g)? {
                    items.push((g, lambda, Arc::clone(&oracle)));
                }
            }
        }
    }
    let jobs = if config.jobs == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        config.jobs
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let mut records: Vec<WeightRecord> = pool.install(|| {
        items.par_iter().map(|(g, lambda, oracle)| check_weight(lambda, g, oracle)).collect()
    });
    records.sort_by(|a, b| (a.p, a.m, &a.lambda).cmp(&(b.p, b.m, &b.lambda)));

    let mut checks_by_kind = BTreeMap::new();
    let mut discrepancies_by_kind = BTreeMap::new();
    for r in &records {
        for (k, n) in &r.checks {
            *checks_by_kind.entry(*k).or_insert(0) += n;
        }
        for d in &r.discrepancies {
            *discrepancies_by_kind.entry(d.check).or_insert(0) += 1;
        }
    }
    let summary = SweepSummary {
        weights: records.len(),
        checks: checks_by_kind.values().sum(),
        discrepancies: discrepancies_by_kind.values().sum(),
        diagnostics: records.iter().map(|r| r.diagnostics.len()).sum(),
        checks_by_kind,
        discrepancies_by_kind,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(SweepReport { records, summary })
}
