//! Acceptance suite. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use paraspec::arith::{Cyclotomic, Field, Gf, Rationals};
use paraspec::config::parse_config;
use paraspec::hitchin::{hitchin_dims, normalized_genus_closed_form, spectral_arithmetic_genus};
use paraspec::par::Strategy;
use paraspec::parabolic::{delta_p, gerbe_compatible, level_function, min_level_data, MarkedPoint, ParabolicData, Partition, Position};
use paraspec::pipeline::{borel_data, run_verify, RunOptions};
use paraspec::resolution::{local_equation_from_constants, newton_polygon_profile, resolve, ResidueField};
use paraspec::spectral::{ledger_genus, sample_characteristic, sample_divisor_gcd, zeta_data, FqSpec, Sample};
use paraspec::stringy::{
    parse_sector_file, stringy_count_symbolic, stringy_count_twisted, stringy_count_twisted_symbolic, stringy_e,
    weight_consistency, EPolynomial, OrbifoldDescription,
};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

// ---- independent oracles ----

/// Conjugate partition by column counting.
fn conjugate(n: &[usize]) -> Vec<usize> {
    let top = n.iter().copied().max().unwrap_or(0);
    (1..=top).map(|l| n.iter().filter(|&&x| x >= l).count()).collect()
}

/// `γ_j = 1 + #{l : μ_1 + … + μ_l < j}`.
fn gamma_oracle(mu: &[usize]) -> Vec<usize> {
    let r: usize = mu.iter().sum();
    let prefix: Vec<usize> = mu.iter().scan(0, |a, &m| {
        *a += m;
        Some(*a)
    }).collect();
    (1..=r).map(|j| 1 + prefix.iter().filter(|&&s| s < j).count()).collect()
}

fn delta_oracle(n: &[usize]) -> usize {
    n.iter().map(|&x| x * (x - 1) / 2).sum()
}

fn counts_oracle(mu: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &x in mu {
        *m.entry(x).or_insert(0) += 1;
    }
    m
}

/// `Σ_j h^0` by Riemann-Roch, `None` in the special range.
fn dims_oracle(rank: usize, genus: i64, mus: &[Vec<usize>]) -> Option<(i64, i64)> {
    let gammas: Vec<Vec<usize>> = mus.iter().map(|m| gamma_oracle(m)).collect();
    let mut total = 0;
    for j in 1..=rank {
        let twist: i64 = gammas.iter().map(|g| j as i64 - g[j - 1] as i64).sum();
        let d = j as i64 * (2 * genus - 2) + twist;
        let h = if d < 0 {
            0
        } else if j == 1 {
            genus
        } else if genus == 0 {
            d + 1
        } else if genus == 1 && d == 0 {
            i64::from(twist == 0)
        } else if d > 2 * genus - 2 {
            d + 1 - genus
        } else {
            return None;
        };
        total += h;
    }
    Some((total, total - genus))
}

fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn part(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

// ---- criteria ----

struct Outcome {
    ok: bool,
    note: String,
}

fn outcome(ok: bool, note: impl Into<String>) -> Outcome {
    Outcome { ok, note: note.into() }
}

/// Resolves random constant-coefficient equations of type `mu` until `want`
/// generic ones were seen; calls `check` on each and returns the number of
/// generic draws found.
fn generic_draws<F: ResidueField>(
    mu: &Partition,
    f: &F,
    want: usize,
    attempts: usize,
    rng: &mut ChaCha8Rng,
    mut sample: impl FnMut(&mut ChaCha8Rng) -> F::Elem,
    mut check: impl FnMut(&paraspec::resolution::LocalEquation<F::Elem>, &paraspec::resolution::ResolutionResult<F::Elem>) -> bool,
) -> (usize, bool) {
    let mut found = 0;
    let mut all_ok = true;
    let precision = paraspec::resolution::default_precision(mu.total(), *gamma_oracle(mu.parts()).last().unwrap());
    for _ in 0..attempts {
        if found == want {
            break;
        }
        let coeffs: Vec<F::Elem> = (0..mu.total()).map(|_| sample(rng)).collect();
        let eq = local_equation_from_constants(mu, &coeffs, f, precision).unwrap();
        let res = match resolve(&eq, f) {
            Ok(r) => r,
            Err(_) => {
                all_ok = false;
                continue;
            }
        };
        if res.generic {
            found += 1;
            all_ok &= check(&eq, &res);
        }
    }
    (found, all_ok)
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for r in 1..=10 {
        for n in partitions(r) {
            let p = part(&n);
            let mu = conjugate(&n);
            let gamma = level_function(&part(&mu), r).unwrap();
            if gamma.values() != gamma_oracle(&mu).as_slice() {
                failures.push(format!("γ for {n:?}"));
            }
            let go = gamma_oracle(&mu);
            for i in 1..=n.len() {
                let tail: usize = n[i - 1..].iter().sum();
                let vals: Vec<i64> = (1..=r).map(|l| (i * go[l - 1] + tail) as i64 - l as i64).collect();
                let min = *vals.iter().min().unwrap();
                let witness = (1..=r).any(|l| vals[l - 1] == min && ((i - 1) * go[l - 1] + tail) as i64 - l as i64 == 0);
                let d = min_level_data(&p, &gamma, i).unwrap();
                if min != n[i - 1] as i64 || !witness || d.min_value as i64 != min || !d.part_a_holds() {
                    failures.push(format!("stage {i} of {n:?}"));
                }
                checked += 1;
            }
        }
    }
    let mut short = Vec::new();
    for prime in [11u64, 97] {
        let f = Gf::new(prime).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(prime);
        for r in 1..=10 {
            for n in partitions(r) {
                let mu = part(&conjugate(&n));
                let counts = counts_oracle(mu.parts());
                let (found, ok) = generic_draws(&mu, &f, 20, 4000, &mut rng, |g| g.gen_range(1..prime as u32), |_, res| {
                    res.stages
                        .iter()
                        .all(|s| s.distinct_nonzero_roots == counts.get(&s.index).copied().unwrap_or(0))
                });
                if found < 20 {
                    short.push(format!("{n:?} over GF({prime}): {found} generic draws"));
                }
                if !ok {
                    failures.push(format!("root counts for {n:?} over GF({prime})"));
                }
            }
        }
    }
    let ok = failures.is_empty() && short.is_empty();
    outcome(
        ok,
        if ok {
            format!("{checked} (partition, stage) pairs; 20 generic draws per partition over GF(11) and GF(97)")
        } else {
            format!("failures {failures:?}; insufficient draws {short:?}")
        },
    )
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    let mut total = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for r in 1..=8 {
        for n in partitions(r) {
            let mu_v = conjugate(&n);
            let mu = part(&mu_v);
            let delta = delta_oracle(&n);
            let check_one = |eq_geom: Vec<usize>, newton: Option<Vec<usize>>, ledger: usize| {
                eq_geom == mu_v && newton.as_ref() == Some(&mu_v) && ledger == delta
            };
            let (found_q, ok_q) = generic_draws(&mu, &Rationals, 3, 200, &mut rng, |g| {
                let v: i64 = g.gen_range(1..=30) * if g.gen_bool(0.5) { 1 } else { -1 };
                Rationals.from_i64(v)
            }, |eq, res| {
                let np = newton_polygon_profile(eq, &Rationals).ok().map(|p| p.geometric());
                check_one(res.profile.geometric(), np, res.ledger.delta)
            });
            let f = Gf::new(101).unwrap();
            let (found_p, ok_p) = generic_draws(&mu, &f, 3, 200, &mut rng, |g| g.gen_range(1..101u32), |eq, res| {
                let np = newton_polygon_profile(eq, &f).ok().map(|p| p.geometric());
                res.profile.geometric() == mu_v && np.as_ref() == Some(&mu_v) && res.ledger.delta == delta
            });
            total += found_q + found_p;
            if found_q < 3 || found_p < 3 || !ok_q || !ok_p {
                failures.push(format!("{n:?}: Q {found_q}/{ok_q}, GF(101) {found_p}/{ok_p}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() { format!("{total} generic equations over Q and GF(101)") } else { format!("{failures:?}") },
    )
}

fn load_catalogue() -> Vec<(String, Value)> {
    let text = std::fs::read_to_string(data_dir().join("catalogue.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    v.as_array()
        .unwrap()
        .iter()
        .map(|e| (e["name"].as_str().unwrap().to_string(), e.clone()))
        .collect()
}

fn criterion_3() -> Outcome {
    let catalogue = load_catalogue();
    let mut failures = Vec::new();
    let mut genera = std::collections::BTreeSet::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, entry) in &catalogue {
        let cfg = parse_config(&entry["config"].to_string()).unwrap();
        let data = &cfg.data;
        genera.insert(data.genus);
        let mus: Vec<Vec<usize>> = data.points.iter().map(|p| conjugate(p.partition.parts())).collect();
        let oracle = dims_oracle(data.rank, data.genus as i64, &mus);
        let dims = hitchin_dims(data).ok().map(|(a, b)| (a as i64, b as i64));
        let g_tilde = normalized_genus_closed_form(data).g_tilde;
        // δ from a generic resolution at every point.
        let mut ledger_delta = 0i64;
        for p in &data.points {
            let (_, _) = generic_draws(&p.mu, &Rationals, 1, 100, &mut rng, |g| Rationals.from_i64(g.gen_range(1..=20)), |_, res| {
                ledger_delta += res.ledger.delta as i64;
                true
            });
        }
        let p_a = spectral_arithmetic_genus(data);
        let ok = oracle.is_some()
            && dims == oracle
            && dims == Some((g_tilde, g_tilde - data.genus as i64))
            && p_a - ledger_delta == g_tilde;
        let expect_ok = match entry.get("expect") {
            Some(e) => {
                e["dim_hp"].as_i64() == dims.map(|d| d.0)
                    && e["dim_hp0"].as_i64() == dims.map(|d| d.1)
                    && e["g_tilde"].as_i64() == Some(g_tilde)
            }
            None => true,
        };
        if !ok || !expect_ok {
            failures.push(format!("{name}: dims {dims:?}, oracle {oracle:?}, g̃ {g_tilde}, p_a - Σδ {}", p_a - ledger_delta));
        }
    }
    let ok = failures.is_empty() && catalogue.len() >= 20 && genera.len() == 3;
    outcome(ok, if ok { format!("{} catalogue entries, genera {genera:?}", catalogue.len()) } else { format!("{failures:?}") })
}

// GF(25) = GF(5)[i]/(i² - 2) for the brute-force count.
type F25 = (u64, u64);

fn f25_mul(a: F25, b: F25) -> F25 {
    ((a.0 * b.0 + 2 * a.1 * b.1) % 5, (a.0 * b.1 + a.1 * b.0) % 5)
}

fn f25_add(a: F25, b: F25) -> F25 {
    ((a.0 + b.0) % 5, (a.1 + b.1) % 5)
}

/// Points of the smooth model of `λ² + α(t) = 0` with `α` squarefree of
/// odd degree 3: one point over each root and over `∞`, two over each
/// `t` where `-α(t)` is a nonzero square.
fn brute_elliptic_count(alpha: &[u64], m: u32) -> u64 {
    let elems: Vec<F25> = if m == 1 {
        (0..5).map(|a| (a, 0)).collect()
    } else {
        (0..25).map(|a| (a % 5, a / 5)).collect()
    };
    let mut n = 1;
    for &t in &elems {
        let mut v = (0, 0);
        let mut pw = (1, 0);
        for &c in alpha {
            v = f25_add(v, f25_mul((c % 5, 0), pw));
            pw = f25_mul(pw, t);
        }
        let target = ((5 - v.0) % 5, (5 - v.1) % 5);
        n += elems.iter().filter(|&&l| f25_mul(l, l) == target).count() as u64;
    }
    n
}

fn seeded_sample(data: &ParabolicData, q: u64, seed: u64) -> paraspec::Result<Sample> {
    let fq = FqSpec::new(q, data.rank)?;
    sample_characteristic(data, &fq, seed, 2000, Strategy::Parallel)
}

fn criterion_4(samples: &mut Vec<(ParabolicData, Sample)>) -> Outcome {
    let mut failures = Vec::new();
    // The pinned run.
    let cfg = parse_config(&std::fs::read_to_string(data_dir().join("configs/four_borel_q5.json")).unwrap()).unwrap();
    match seeded_sample(&cfg.data, 5, cfg.seed) {
        Ok(s) => {
            let z = zeta_data(&s, 1, 2, Strategy::Parallel).unwrap();
            let alpha: Vec<u64> = s.characteristic.alphas[1].coeffs().iter().map(|&c| c as u64).collect();
            let brute = [brute_elliptic_count(&alpha, 1), brute_elliptic_count(&alpha, 2)];
            if z.counts != brute || z.counts[0] != 8 || z.l.coeffs != vec![1, 2, 5] || z.class_numbers.h_jac != 8 {
                failures.push(format!("pinned run: counts {:?} brute {brute:?} L {:?}", z.counts, z.l.coeffs));
            }
        }
        Err(e) => failures.push(format!("pinned run: {e}")),
    }

    let three = |r: usize, parts: &[&[usize]]| {
        let pts: Vec<MarkedPoint> = parts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let pos = if i + 1 == parts.len() { Position::infinity() } else { Position(i.to_string()) };
                MarkedPoint::new(pos, p, None).unwrap()
            })
            .collect();
        ParabolicData::new(r, 0, pts).unwrap()
    };
    let runs: Vec<(ParabolicData, u64, u64)> = vec![
        (borel_data(2, 4), 3, 1),
        (borel_data(2, 4), 5, 2),
        (borel_data(2, 4), 7, 3),
        (borel_data(2, 4), 9, 4),
        (borel_data(2, 5), 5, 5),
        (borel_data(2, 5), 7, 6),
        (borel_data(2, 5), 9, 7),
        (borel_data(2, 6), 7, 8),
        (borel_data(2, 6), 9, 9),
        (borel_data(3, 3), 5, 10),
        (borel_data(3, 3), 7, 11),
        (three(3, &[&[2, 1], &[2, 1], &[1, 1, 1], &[1, 1, 1]]), 7, 12),
        (borel_data(4, 3), 7, 13),
    ];
    let mut done = 0;
    for (data, q, seed) in runs {
        let g_tilde = normalized_genus_closed_form(&data).g_tilde;
        let label = format!("r={} deg D={} q={q} seed={seed}", data.rank, data.points.len());
        let s = match seeded_sample(&data, q, seed) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        let depth = paraspec::pipeline::default_zeta_depth(q, g_tilde as usize);
        match zeta_data(&s, g_tilde as usize, depth, Strategy::Parallel) {
            Ok(z) => {
                let lg = ledger_genus(&data, &s.resolutions);
                let ok = g_tilde <= 3
                    && z.l.degree() == 2 * g_tilde as usize
                    && lg == g_tilde
                    && z.functional_equation
                    && z.weil;
                if ok {
                    done += 1;
                } else {
                    failures.push(format!("{label}: L {:?}, ledger genus {lg}", z.l.coeffs));
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
        samples.push((data, s));
    }
    let ok = failures.is_empty() && done >= 10;
    outcome(ok, if ok { format!("pinned run N1 = 8, h = 8; {done} seeded samples") } else { format!("{failures:?}") })
}

fn criterion_5(samples: &[(ParabolicData, Sample)]) -> Outcome {
    let mut failures = Vec::new();
    let mut multisets = 0;
    for r in 2..=8usize {
        let ps = partitions(r);
        let mut combos: Vec<Vec<usize>> = Vec::new();
        for a in 0..ps.len() {
            combos.push(vec![a]);
            for b in a..ps.len() {
                combos.push(vec![a, b]);
                for c in b..ps.len() {
                    combos.push(vec![a, b, c]);
                }
            }
        }
        for combo in combos {
            multisets += 1;
            let pts: Vec<MarkedPoint> = combo
                .iter()
                .enumerate()
                .map(|(i, &k)| MarkedPoint::new(Position(i.to_string()), &ps[k], None).unwrap())
                .collect();
            let data = ParabolicData::new(r, 1, pts).unwrap();
            let dp = delta_p(&data);
            let oracle = combo
                .iter()
                .flat_map(|&k| counts_oracle(&conjugate(&ps[k])).into_values())
                .fold(0usize, |g, c| g.gcd(&c));
            let full = combo.iter().any(|&k| ps[k].iter().all(|&x| x == 1));
            if dp != oracle || (full && dp != 1) {
                failures.push(format!("{combo:?} of {r}: Δ_P {dp}, oracle {oracle}"));
            }
        }
    }
    for delta in 1..=12u64 {
        for d in -20i64..=20 {
            for e in -20i64..=20 {
                let brute = (1..=delta).find(|&l| (e - l as i64 * d) % delta as i64 == 0);
                if gerbe_compatible(d, e, delta) != brute {
                    failures.push(format!("gerbe d={d} e={e} Δ={delta}"));
                }
            }
        }
    }
    let mut gcd_checked = 0;
    for (data, s) in samples {
        if delta_p(data) == 1 {
            gcd_checked += 1;
            let g = sample_divisor_gcd(data, &s.resolutions);
            if g.group_gcd != 1 {
                failures.push(format!("divisor gcd {} for a sample with Δ_P = 1", g.group_gcd));
            }
        }
    }
    let ok = failures.is_empty() && gcd_checked > 0;
    outcome(
        ok,
        if ok {
            format!("{multisets} multisets, gerbe window |d|,|e| ≤ 20, {gcd_checked} samples with divisor gcd 1")
        } else {
            format!("{failures:?}")
        },
    )
}

fn with_unit_traces(d: &OrbifoldDescription) -> OrbifoldDescription {
    let mut out = d.clone();
    for comps in out.sectors.values_mut() {
        for c in comps {
            c.trace = Some((0, 1));
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let dir = data_dir().join("sectors");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let desc = parse_sector_file(&std::fs::read_to_string(path).unwrap()).unwrap();
        for q in [2, 3, 4, 5] {
            match weight_consistency(&desc, q) {
                Ok(w) if w.holds => {}
                other => failures.push(format!("{name} at q={q}: {other:?}")),
            }
        }
        let unit = with_unit_traces(&desc);
        let twisted = stringy_count_twisted_symbolic(&unit).unwrap();
        let plain = stringy_count_symbolic(&desc).unwrap();
        let agree = plain.terms.len() == twisted.terms.len()
            && plain.terms.iter().all(|(e, c)| {
                twisted.terms.get(e) == Some(&Cyclotomic::from_rational(BigRational::from_integer(c.clone())))
            });
        if !agree {
            failures.push(format!("{name}: unit traces change the count"));
        }
    }

    let z2 = parse_sector_file(&std::fs::read_to_string(dir.join("z2_plane.json")).unwrap()).unwrap();
    let expect_e = EPolynomial::uv_power(2).add(&EPolynomial::uv_power(1));
    if stringy_e(&z2).unwrap() != expect_e {
        failures.push("Z/2 stringy E".into());
    }
    for q in [2u64, 3, 4, 5, 9] {
        let v = stringy_count_twisted(&z2, q).unwrap();
        let want = (q * q) as i64 - q as i64;
        if v != Cyclotomic::from_integer(want) {
            failures.push(format!("Z/2 twisted count at q={q}: {v}"));
        }
    }
    if stringy_count_twisted_symbolic(&z2).unwrap().render() != "q^2 - q" {
        failures.push("Z/2 twisted count symbolic".into());
    }

    let trivial = parse_sector_file(&std::fs::read_to_string(dir.join("trivial_plane.json")).unwrap()).unwrap();
    let component = trivial.sectors["id"][0].e_poly.clone().unwrap();
    if stringy_e(&trivial).unwrap() != component {
        failures.push("trivial group E".into());
    }
    let ok = failures.is_empty() && files.len() >= 3;
    outcome(ok, if ok { format!("{} sector files", files.len()) } else { format!("{failures:?}") })
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let catalogue = load_catalogue();
    for (name, entry) in &catalogue {
        let cfg = parse_config(&entry["config"].to_string()).unwrap();
        let a = run_verify(&cfg, RunOptions::default()).map(|r| r.render());
        let b = run_verify(&cfg, RunOptions::default()).map(|r| r.render());
        let c = run_verify(&cfg, RunOptions { strategy: Strategy::Sequential, timing: false }).map(|r| r.render());
        match (a, b, c) {
            (Ok(a), Ok(b), Ok(c)) if a == b && b == c => {}
            _ => failures.push(name.clone()),
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} catalogue reports identical across runs and strategies", catalogue.len())
        } else {
            format!("differing reports: {failures:?}")
        },
    )
}

fn main() {
    // Keep libtest-style flags (e.g. --nocapture) harmless.
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut samples = Vec::new();
    let mut all_ok = true;
    let mut run = |n: usize, title: &str, f: &mut dyn FnMut() -> Outcome| {
        if !filter.is_empty() && !filter.iter().any(|x| title.contains(x.as_str())) {
            return;
        }
        let t = Instant::now();
        let o = f();
        all_ok &= o.ok;
        println!(
            "{} criterion {n} {title}: {} ({:.1}s)",
            if o.ok { "PASS" } else { "FAIL" },
            o.note,
            t.elapsed().as_secs_f64()
        );
    };
    run(1, "level minima and root counts", &mut criterion_1);
    run(2, "delta triangulation", &mut criterion_2);
    run(3, "dimension identities", &mut criterion_3);
    run(4, "zeta pipeline", &mut || criterion_4(&mut samples));
    run(5, "delta_P and gerbe arithmetic", &mut || criterion_5(&samples));
    run(6, "stringy evaluators", &mut criterion_6);
    run(7, "determinism", &mut criterion_7);
    if !all_ok {
        std::process::exit(1);
    }
}
