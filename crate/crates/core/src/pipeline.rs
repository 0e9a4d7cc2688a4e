//! Subcommand drivers producing deterministic JSON reports.
//!
//! Every report has the shape
//! `{command, version, input, results, ledger, summary, exit_code}` and is
//! rendered with sorted keys. Ledger entries record one identity check each
//! with status `holds`, `fails`, `vacuous` or `skipped`.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::field::{parse_rational, Field, Rationals};
use crate::arith::gf::Gf;
use crate::config::{FieldSpec, LocalSpec, RunConfig};
use crate::error::{Error, Result};
use crate::hitchin::{
    bnr_euler_check, bnr_line_bundle_degree, coefficient_degrees, dimension_report, integrability_report,
    normalized_genus_closed_form, IdentityStatus, H0,
};
use crate::par::{self, Strategy};
use crate::parabolic::{
    delta_p, filtration_dims, gerbe_compatible, min_level_data, ramification_multiplicity_counts, MarkedPoint,
    ParabolicData, Partition,
};
use crate::resolution::{
    default_precision, local_equation_from_type, newton_polygon_profile, resolve, LocalEquation, ResidueField,
    ResolutionResult,
};
use crate::spectral::{
    ledger_genus, newton_agrees, sample_characteristic, sample_divisor_gcd, stats_map, zeta_data, FqSpec, Sample,
};
use crate::stringy::{
    parse_sector_file, stringy_count, stringy_count_symbolic, stringy_count_twisted, stringy_count_twisted_symbolic,
    stringy_e, stringy_e_twisted, weight_consistency,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest field `GF(q^m)` the default zeta depth will count over.
const DEFAULT_COUNT_LIMIT: u64 = 1 << 16;

/// `q` values at which sector files are evaluated besides any requested one.
pub const STRINGY_SAMPLE_QS: [u64; 4] = [2, 3, 4, 5];

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub strategy: Strategy,
    /// Adds wall-clock timing to the report, which makes it nondeterministic.
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Holds,
    Fails,
    Vacuous,
    Skipped,
}

impl From<IdentityStatus> for CheckStatus {
    fn from(s: IdentityStatus) -> Self {
        match s {
            IdentityStatus::Holds => CheckStatus::Holds,
            IdentityStatus::Fails => CheckStatus::Fails,
            IdentityStatus::Vacuous => CheckStatus::Vacuous,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub check: String,
    /// The library invariant this entry instantiates.
    pub invariant: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Default)]
struct Ledger {
    entries: Vec<LedgerEntry>,
    exhausted: bool,
}

impl Ledger {
    fn push(&mut self, check: impl Into<String>, invariant: &'static str, status: CheckStatus, detail: impl Into<String>) {
        self.entries.push(LedgerEntry { check: check.into(), invariant, status, detail: detail.into() });
    }

    fn check(&mut self, check: impl Into<String>, invariant: &'static str, ok: bool, detail: impl Into<String>) {
        self.push(check, invariant, if ok { CheckStatus::Holds } else { CheckStatus::Fails }, detail);
    }

    /// Records an error as a skipped check; resource errors mark the run
    /// as exhausted.
    fn skip_error(&mut self, check: impl Into<String>, invariant: &'static str, e: &Error) {
        if e.exit_code() == 3 {
            self.exhausted = true;
        }
        self.push(check, invariant, CheckStatus::Skipped, e.to_string());
    }

    fn exit_code(&self) -> i32 {
        if self.entries.iter().any(|e| e.status == CheckStatus::Fails) {
            1
        } else if self.exhausted {
            3
        } else {
            0
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub input: Value,
    pub results: Value,
    pub ledger: Vec<LedgerEntry>,
    pub exit_code: i32,
    pub elapsed_ms: Option<u128>,
}

impl Report {
    fn new(command: &'static str, input: Value, results: Value, ledger: Ledger, started: Option<Instant>) -> Report {
        let exit_code = ledger.exit_code();
        Report {
            command,
            input,
            results,
            ledger: ledger.entries,
            exit_code,
            elapsed_ms: started.map(|t| t.elapsed().as_millis()),
        }
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.ledger.iter().filter(|e| e.status == status).count()
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "command": self.command,
            "version": VERSION,
            "input": self.input,
            "results": self.results,
            "ledger": self.ledger,
            "summary": {
                "holds": self.count(CheckStatus::Holds),
                "fails": self.count(CheckStatus::Fails),
                "vacuous": self.count(CheckStatus::Vacuous),
                "skipped": self.count(CheckStatus::Skipped),
            },
            "exit_code": self.exit_code,
        });
        if let Some(ms) = self.elapsed_ms {
            out["timing"] = json!({"elapsed_ms": ms});
        }
        out
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn started(opts: RunOptions) -> Option<Instant> {
    opts.timing.then(Instant::now)
}

fn point_json(p: &MarkedPoint) -> Value {
    let stages: Vec<Value> = (1..=p.partition.len())
        .filter_map(|i| min_level_data(&p.partition, &p.gamma, i).ok())
        .map(|s| {
            json!({
                "stage": s.stage,
                "min_value": s.min_value,
                "level_set": s.level_set,
                "part_a_witness": s.part_a_witness,
                // The literal γ-range reading; false is expected for some types.
                "literal_part_b": s.literal_part_b_holds(),
            })
        })
        .collect();
    json!({
        "level_stages": stages,
        "position": p.position.label(),
        "partition": p.partition.parts(),
        "mu": p.mu.parts(),
        "gamma": p.gamma.values(),
        "flag_dim": p.flag_dim,
        "delta": p.delta(),
        "filtration_dims": filtration_dims(&p.mu),
        "ramification_counts": ramification_multiplicity_counts(&p.mu)
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<BTreeMap<_, _>>(),
    })
}

fn h0_json(h: H0) -> Value {
    match h {
        H0::Value(v) => json!(v),
        H0::Indeterminate => json!("indeterminate"),
    }
}

fn analysis_json(cfg: &RunConfig) -> Value {
    let data = &cfg.data;
    let dp = delta_p(data);
    let degrees: Vec<Value> = coefficient_degrees(data)
        .entries
        .iter()
        .map(|e| json!({"j": e.j, "degree": e.degree, "h0": h0_json(e.h0), "rule": e.rule}))
        .collect();
    let (d, e) = (cfg.options.d, cfg.options.e);
    json!({
        "points": data.points.iter().map(point_json).collect::<Vec<_>>(),
        "delta_p": dp,
        "gerbe": {"d": d, "e": e, "lambda": gerbe_compatible(d, e, dp as u64)},
        "degrees": degrees,
        "dimensions": dimension_report(data),
        "normalized_genus": normalized_genus_closed_form(data),
        "integrability": integrability_report(data),
        "bnr": {"d": d, "line_bundle_degree": bnr_line_bundle_degree(data, d)},
    })
}

/// `δ_x` as the closed form, optionally corrupted by the test hook.
fn closed_delta(cfg: &RunConfig, p: &MarkedPoint) -> usize {
    p.delta() + usize::from(cfg.hooks.corrupt_delta)
}

fn record_global_identities(cfg: &RunConfig, ledger: &mut Ledger) {
    let data = &cfg.data;
    let ng = normalized_genus_closed_form(data);
    let closed_total: i64 = data.points.iter().map(|p| closed_delta(cfg, p) as i64).sum();
    ledger.check(
        "normalized genus: r²(g-1)+1+Σ dim G/P = p_a - Σδ",
        "hitchin::normalized_genus_closed_form",
        ng.g_tilde == ng.p_a - closed_total,
        format!("g̃ = {}, p_a = {}, Σδ = {closed_total}", ng.g_tilde, ng.p_a),
    );
    let rep = integrability_report(data);
    ledger.push(
        "dimension identities: dim H_P = g̃ and dim H_P^0 = g̃ - g",
        "hitchin::integrability_report",
        rep.status.into(),
        rep.reason,
    );
    let d = cfg.options.d;
    ledger.check(
        "BNR Euler characteristic",
        "hitchin::bnr_euler_check",
        bnr_euler_check(data, d),
        format!("d = {d}, deg L = {}", bnr_line_bundle_degree(data, d)),
    );
}

pub fn run_analyze(cfg: &RunConfig, opts: RunOptions) -> Result<Report> {
    let t = started(opts);
    let mut ledger = Ledger::default();
    record_global_identities(cfg, &mut ledger);
    Ok(Report::new("analyze", cfg.to_json(), analysis_json(cfg), ledger, t))
}

fn parse_elements<F, P>(spec: &LocalSpec, parse: P) -> Result<Vec<Vec<F>>>
where
    P: Fn(&str) -> Option<F>,
{
    spec.coeffs
        .iter()
        .enumerate()
        .map(|(i, series)| {
            series
                .iter()
                .map(|s| parse(s).ok_or_else(|| Error::InvalidInput(format!("local.coeffs[{i}]: cannot read {s:?}"))))
                .collect()
        })
        .collect()
}

fn gf_parser(f: &Gf) -> impl Fn(&str) -> Option<u32> + '_ {
    move |s: &str| {
        let v: i64 = s.trim().parse().ok()?;
        if f.degree() == 1 {
            Some(f.from_i64(v))
        } else {
            (0..f.size() as i64).contains(&v).then_some(v as u32)
        }
    }
}

fn local_checks<F: ResidueField>(
    label: &str,
    eq: &LocalEquation<F::Elem>,
    res: &ResolutionResult<F::Elem>,
    closed_delta: usize,
    f: &F,
    ledger: &mut Ledger,
) {
    let mu = eq.mu.parts().to_vec();
    if !res.generic {
        ledger.push(
            format!("local profile at {label}"),
            "resolution::resolve",
            CheckStatus::Vacuous,
            "the equation is not generic",
        );
        return;
    }
    let counts = ramification_multiplicity_counts(&eq.mu);
    let roots: Vec<usize> = res.stages.iter().map(|s| s.distinct_nonzero_roots).collect();
    let expect: Vec<usize> = (1..=res.stages.len()).map(|i| counts.get(&i).copied().unwrap_or(0)).collect();
    ledger.check(
        format!("nonzero roots of R_i at {label}"),
        "resolution::ramification_polynomial",
        roots == expect,
        format!("roots {roots:?}, #{{ℓ: μ_ℓ = i}} {expect:?}"),
    );
    ledger.check(
        format!("δ ledger at {label}"),
        "resolution::DeltaLedger",
        res.ledger.delta == closed_delta,
        format!("ledger {}, closed form {closed_delta}", res.ledger.delta),
    );
    let geometric = res.profile.geometric();
    match newton_polygon_profile(eq, f) {
        Ok(np) => ledger.check(
            format!("ramification profile at {label}"),
            "resolution::newton_polygon_profile",
            geometric == mu && np.geometric() == mu,
            format!("blow-up {geometric:?}, Newton {:?}, μ {mu:?}", np.geometric()),
        ),
        Err(e) => ledger.skip_error(format!("ramification profile at {label}"), "resolution::newton_polygon_profile", &e),
    }
    ledger.check(
        format!("singular locus at {label}"),
        "resolution::resolve",
        res.singular_locus_in_origin,
        "every stage is smooth away from its origin",
    );
}

/// Draws nonzero constant coefficients until the equation of type `mu`
/// resolves generically. Returns the number of draws used.
fn generic_draw<F, D>(
    mu: &Partition,
    f: &F,
    precision: usize,
    max_draws: usize,
    mut draw: D,
) -> Result<Option<(usize, LocalEquation<F::Elem>, ResolutionResult<F::Elem>)>>
where
    F: ResidueField,
    D: FnMut() -> F::Elem,
{
    for k in 1..=max_draws {
        let coeffs: Vec<Vec<F::Elem>> = (0..mu.total()).map(|_| vec![draw()]).collect();
        let eq = local_equation_from_type(mu, coeffs, f, precision)?;
        let res = resolve(&eq, f)?;
        if res.generic {
            return Ok(Some((k, eq, res)));
        }
    }
    Ok(None)
}

struct LocalRun<E> {
    field: String,
    label: String,
    closed_delta: usize,
    outcome: Result<Option<(usize, LocalEquation<E>, ResolutionResult<E>)>>,
}

fn resolve_points<F, D>(
    cfg: &RunConfig,
    f: &F,
    stream: u64,
    max_draws: usize,
    strategy: Strategy,
    draw: D,
) -> Vec<LocalRun<F::Elem>>
where
    F: ResidueField,
    D: Fn(&mut ChaCha8Rng) -> F::Elem + Sync + Send,
{
    let indexed: Vec<(usize, &MarkedPoint)> = cfg.data.points.iter().enumerate().collect();
    par::map_collect(strategy, &indexed, |&(idx, p)| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream * 1024 + idx as u64);
        let precision = cfg.precision.unwrap_or_else(|| default_precision(p.rank(), p.gamma.at(p.rank())));
        LocalRun {
            field: f.describe(),
            label: p.position.label().to_string(),
            closed_delta: closed_delta(cfg, p),
            outcome: generic_draw(&p.mu, f, precision, max_draws, || draw(&mut rng)),
        }
    })
}

fn record_local_runs<F: ResidueField>(runs: Vec<LocalRun<F::Elem>>, f: &F, ledger: &mut Ledger) -> Vec<Value> {
    let mut out = Vec::new();
    for run in runs {
        let label = format!("{} over {}", run.label, run.field);
        match run.outcome {
            Ok(Some((draws, eq, res))) => {
                local_checks(&label, &eq, &res, run.closed_delta, f, ledger);
                out.push(json!({
                    "position": run.label,
                    "field": run.field,
                    "draws": draws,
                    "equation": eq.to_json(f),
                    "profile": res.profile,
                    "geometric_profile": res.profile.geometric(),
                    "delta": res.ledger.delta,
                    "multiplicities": res.ledger.multiplicities,
                }));
            }
            Ok(None) => {
                ledger.exhausted = true;
                ledger.push(
                    format!("local resolution at {label}"),
                    "resolution::resolve",
                    CheckStatus::Skipped,
                    "no generic coefficient draw found",
                );
            }
            Err(e) => ledger.skip_error(format!("local resolution at {label}"), "resolution::resolve", &e),
        }
    }
    out
}

fn rational_draw(rng: &mut ChaCha8Rng) -> num_rational::BigRational {
    let v = loop {
        let v: i64 = rng.gen_range(-12..=12);
        if v != 0 {
            break v;
        }
    };
    Rationals.from_i64(v)
}

fn gf_draw(q: u64) -> impl Fn(&mut ChaCha8Rng) -> u32 + Sync + Send {
    move |rng| rng.gen_range(1..q as u32)
}

pub fn run_resolve(cfg: &RunConfig, opts: RunOptions) -> Result<Report> {
    let t = started(opts);
    let mut ledger = Ledger::default();
    let results = if let Some(spec) = &cfg.local {
        let r = spec.mu.total();
        let gamma_r = crate::parabolic::level_function(&spec.mu, r)?.at(r);
        let longest = spec.coeffs.iter().map(Vec::len).max().unwrap_or(1);
        let precision = cfg.precision.unwrap_or_else(|| default_precision(r, gamma_r).max(longest));
        let closed = (spec.mu.dual().sum_of_squares() - r) / 2 + usize::from(cfg.hooks.corrupt_delta);
        match cfg.field {
            FieldSpec::Rationals => {
                let f = Rationals;
                let coeffs = parse_elements(spec, parse_rational)?;
                let eq = local_equation_from_type(&spec.mu, coeffs, &f, precision)?;
                let res = resolve(&eq, &f)?;
                local_checks("the local equation", &eq, &res, closed, &f, &mut ledger);
                local_result_json(&eq, &res, &f)
            }
            FieldSpec::Finite(q) => {
                let f = Gf::new(q)?;
                let coeffs = parse_elements(spec, gf_parser(&f))?;
                let eq = local_equation_from_type(&spec.mu, coeffs, &f, precision)?;
                let res = resolve(&eq, &f)?;
                local_checks("the local equation", &eq, &res, closed, &f, &mut ledger);
                local_result_json(&eq, &res, &f)
            }
        }
    } else {
        let points = match cfg.field {
            FieldSpec::Rationals => {
                let runs = resolve_points(cfg, &Rationals, 0, cfg.options.max_draws, opts.strategy, rational_draw);
                record_local_runs(runs, &Rationals, &mut ledger)
            }
            FieldSpec::Finite(q) => {
                let f = Gf::new(q)?;
                let runs = resolve_points(cfg, &f, 1, cfg.options.max_draws, opts.strategy, gf_draw(q));
                record_local_runs(runs, &f, &mut ledger)
            }
        };
        json!({"points": points})
    };
    Ok(Report::new("resolve", cfg.to_json(), results, ledger, t))
}

fn local_result_json<F: ResidueField>(eq: &LocalEquation<F::Elem>, res: &ResolutionResult<F::Elem>, f: &F) -> Value {
    json!({
        "equation": eq.to_json(f),
        "resolution": res.to_json(f),
        "newton_profile": newton_polygon_profile(eq, f).ok().map(|p| p.geometric()),
    })
}

fn finite_field(cfg: &RunConfig, command: &str) -> Result<FqSpec> {
    let q = cfg
        .field
        .q()
        .ok_or_else(|| Error::InvalidInput(format!("{command} requires a field block with q")))?;
    FqSpec::new(q, cfg.data.rank)
}

/// `2g̃` counts when `GF(q^{2g̃})` is small, else as many as fit, but at
/// least `g̃`.
pub fn default_zeta_depth(q: u64, genus: usize) -> u32 {
    let fits = |m: usize| q.checked_pow(m as u32).is_some_and(|s| s <= DEFAULT_COUNT_LIMIT);
    let mut depth = genus.max(1);
    while depth < 2 * genus && fits(depth + 1) {
        depth += 1;
    }
    depth as u32
}

fn sample_json(sample: &Sample) -> Value {
    json!({
        "characteristic": sample.characteristic.to_json(),
        "rejections": stats_map(&sample.stats),
        "marked_points": sample
            .characteristic
            .marked
            .iter()
            .zip(&sample.resolutions)
            .map(|(m, r)| json!({
                "position": m.label,
                "profile": r.profile,
                "geometric_profile": r.profile.geometric(),
                "delta": r.ledger.delta,
            }))
            .collect::<Vec<_>>(),
    })
}

/// Sampling, counting and the zeta checks. Returns the results block.
fn count_stage(cfg: &RunConfig, fq: &FqSpec, strategy: Strategy, ledger: &mut Ledger) -> Result<Value> {
    let data = &cfg.data;
    let g_tilde = normalized_genus_closed_form(data).g_tilde;
    if g_tilde < 0 {
        return Err(Error::Degenerate(format!("normalized genus {g_tilde} is negative")));
    }
    let genus = g_tilde as usize;
    let sample = match sample_characteristic(data, fq, cfg.seed, cfg.options.max_draws, strategy) {
        Ok(s) => s,
        Err(e) => {
            ledger.skip_error("sampling a generic characteristic", "spectral::sample_characteristic", &e);
            return Err(e);
        }
    };
    let mut out = sample_json(&sample);

    match newton_agrees(&sample.characteristic, &sample.resolutions) {
        Ok(ok) => ledger.check(
            "sample profiles match the Newton polygon",
            "resolution::newton_polygon_profile",
            ok,
            "every marked point",
        ),
        Err(e) => ledger.skip_error("sample profiles match the Newton polygon", "resolution::newton_polygon_profile", &e),
    }
    for (p, r) in data.points.iter().zip(&sample.resolutions) {
        let closed = closed_delta(cfg, p);
        ledger.check(
            format!("sample δ ledger at {}", p.position.label()),
            "resolution::DeltaLedger",
            r.ledger.delta == closed,
            format!("ledger {}, closed form {closed}", r.ledger.delta),
        );
    }
    let dp = delta_p(data);
    let gcd = sample_divisor_gcd(data, &sample.resolutions);
    ledger.check(
        "rational divisor degree gcd equals Δ_P",
        "resolution::rational_divisor_gcd",
        gcd.group_gcd == dp,
        format!("gcd {}, Δ_P {dp}", gcd.group_gcd),
    );
    out["divisor_gcd"] = json!(gcd);

    let depth = cfg.options.zeta_depth.unwrap_or_else(|| default_zeta_depth(fq.q, genus));
    let z = match zeta_data(&sample, genus, depth, strategy) {
        Ok(z) => z,
        Err(e @ Error::ZetaFit(_)) => {
            ledger.check("zeta fit", "spectral::zeta_fit", false, e.to_string());
            return Ok(out);
        }
        Err(e) => {
            ledger.skip_error("zeta fit", "spectral::zeta_fit", &e);
            return Ok(out);
        }
    };
    let lg = ledger_genus(data, &sample.resolutions);
    ledger.check(
        "genus triangulation: deg L = 2g̃ = 2(p_a - Σδ)",
        "spectral::zeta_fit",
        z.l.degree() == 2 * genus && lg == g_tilde,
        format!("deg L = {}, closed form g̃ = {g_tilde}, ledger genus = {lg}", z.l.degree()),
    );
    match z.inferred_genus {
        Some(g) => ledger.check(
            "genus read off the counts",
            "spectral::infer_genus",
            g == genus,
            format!("{} counts give genus {g}", z.counts.len()),
        ),
        None => ledger.push(
            "genus read off the counts",
            "spectral::infer_genus",
            CheckStatus::Skipped,
            format!("{} counts are fewer than 2g̃ = {}", z.counts.len(), 2 * genus),
        ),
    }
    ledger.check("functional equation", "spectral::LPolynomial", z.functional_equation, z.l.render());
    ledger.check("Weil bound", "spectral::weil_check", z.weil, format!("counts {:?}", z.counts));
    out["zeta"] = json!({
        "counts": z.counts,
        "l_polynomial": z.l.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "l_rendered": z.l.render(),
        "class_number": z.class_numbers.h_jac.to_string(),
        "prym_class_number": z.class_numbers.h_prym.to_string(),
        "genus": {"closed_form": g_tilde, "ledger": lg, "from_counts": z.inferred_genus},
    });
    Ok(out)
}

pub fn run_count(cfg: &RunConfig, opts: RunOptions) -> Result<Report> {
    let t = started(opts);
    let fq = finite_field(cfg, "count")?;
    let mut ledger = Ledger::default();
    let results = count_stage(cfg, &fq, opts.strategy, &mut ledger)?;
    Ok(Report::new("count", cfg.to_json(), results, ledger, t))
}

/// The full chain of cross-checks. Input problems surface as errors; every
/// identity outcome goes to the ledger.
pub fn run_verify(cfg: &RunConfig, opts: RunOptions) -> Result<Report> {
    let t = started(opts);
    let data = &cfg.data;
    let mut ledger = Ledger::default();
    let fq = match cfg.field {
        FieldSpec::Finite(_) => Some(finite_field(cfg, "verify")?),
        FieldSpec::Rationals => None,
    };

    for p in &data.points {
        let stages: Vec<_> =
            (1..=p.partition.len()).map(|i| min_level_data(&p.partition, &p.gamma, i)).collect::<Result<_>>()?;
        ledger.check(
            format!("level minimum at {}", p.position.label()),
            "parabolic::min_level_data",
            stages.iter().all(|s| s.min_holds() && s.part_a_holds()),
            format!("n = {}, minima {:?}", p.partition, stages.iter().map(|s| s.min_value).collect::<Vec<_>>()),
        );
    }

    let mut local = Vec::new();
    let runs = resolve_points(cfg, &Rationals, 0, cfg.options.max_draws, opts.strategy, rational_draw);
    local.extend(record_local_runs(runs, &Rationals, &mut ledger));
    if let Some(fq) = &fq {
        let runs = resolve_points(cfg, &fq.field, 1, cfg.options.max_draws, opts.strategy, gf_draw(fq.q));
        local.extend(record_local_runs(runs, &fq.field, &mut ledger));
    }

    record_global_identities(cfg, &mut ledger);

    let dp = delta_p(data);
    let full_flag = data.points.iter().any(|p| p.partition.is_full_flag());
    if full_flag {
        ledger.check("Δ_P = 1 with a full flag", "parabolic::delta_p", dp == 1, format!("Δ_P = {dp}"));
    } else {
        ledger.push("Δ_P = 1 with a full flag", "parabolic::delta_p", CheckStatus::Vacuous, "no full-flag point");
    }

    let mut results = analysis_json(cfg);
    results["local_resolutions"] = json!(local);
    match &fq {
        Some(_) if data.genus != 0 => {
            ledger.push(
                "point counting",
                "spectral::count_curve",
                CheckStatus::Skipped,
                "point counting is implemented over the projective line only",
            );
        }
        Some(fq) => match count_stage(cfg, fq, opts.strategy, &mut ledger) {
            Ok(v) => results["spectral"] = v,
            Err(e) => {
                if !ledger.entries.iter().any(|x| x.invariant == "spectral::sample_characteristic") {
                    ledger.skip_error("point counting", "spectral::count_curve", &e);
                }
            }
        },
        None => {}
    }
    Ok(Report::new("verify", cfg.to_json(), results, ledger, t))
}

/// Evaluates a sector file. `extra_q` adds an evaluation point.
pub fn run_stringy(text: &str, extra_q: Option<u64>, opts: RunOptions) -> Result<Report> {
    let t = started(opts);
    let desc = parse_sector_file(text)?;
    let input: Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut ledger = Ledger::default();
    let mut qs: Vec<u64> = STRINGY_SAMPLE_QS.to_vec();
    if let Some(q) = extra_q {
        if q < 2 {
            return Err(Error::InvalidInput(format!("q = {q} must be at least 2")));
        }
        if !qs.contains(&q) {
            qs.push(q);
        }
    }

    let e = stringy_e(&desc)?;
    let count = stringy_count_symbolic(&desc)?;
    let twisted_e = stringy_e_twisted(&desc);
    let twisted = stringy_count_twisted_symbolic(&desc);
    let mut evaluations = BTreeMap::new();
    for &q in &qs {
        let value = match stringy_count(&desc, q) {
            Ok(v) => json!(crate::arith::field::format_rational(&v)),
            Err(Error::FractionalPower(_)) => json!("symbolic"),
            Err(e) => return Err(e),
        };
        let tw = match stringy_count_twisted(&desc, q) {
            Ok(v) => json!(v.to_string()),
            Err(Error::FractionalPower(_)) => json!("symbolic"),
            Err(Error::MissingSectorData(_)) => Value::Null,
            Err(e) => return Err(e),
        };
        let w = weight_consistency(&desc, q)?;
        ledger.check(
            format!("weight consistency at q = {q}"),
            "stringy::weight_consistency",
            w.holds,
            format!("count(q²) = {}, E(q, q) = {}", w.count_side, w.e_side),
        );
        evaluations.insert(q.to_string(), json!({"count": value, "twisted_count": tw}));
    }
    let results = json!({
        "e_stringy": e.to_string(),
        "e_stringy_terms": e.to_json(),
        "e_stringy_twisted": twisted_e.as_ref().ok().map(ToString::to_string),
        "count": count.render(),
        "count_twisted": twisted.as_ref().ok().map(|c| c.render()),
        "evaluations": evaluations,
    });
    Ok(Report::new("stringy", input, results, ledger, t))
}

/// Shared data for tests and benches: the `(1,1)` type at `k` points
/// `0, 1, …` of the projective line, the last one at infinity.
pub fn borel_data(rank: usize, k: usize) -> ParabolicData {
    use crate::parabolic::Position;
    let ones = vec![1; rank];
    let points = (0..k)
        .map(|i| {
            let pos = if i + 1 == k { Position::infinity() } else { Position(i.to_string()) };
            MarkedPoint::new(pos, &ones, None).expect("valid partition")
        })
        .collect();
    ParabolicData::new(rank, 0, points).expect("valid data")
}
