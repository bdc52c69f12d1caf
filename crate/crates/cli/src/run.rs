use std::io::Read;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};
use shafdyn::arith::{factorize, SIdeal};
use shafdyn::dynamics::{good_reduction_search, rational_preperiodic, MorphismPN};
use shafdyn::projective::{combinations, det_points, ProjLinearMap, ProjPoint};
use shafdyn::shafarevich::{
    classify_twists, enumerate_twist_set, form_of_point_set, in_class_p, is_k_isomorphic, maps_between,
    KIsoVerdict, PointSet,
};
use shafdyn::verify::{run_suite, Suite};
use shafdyn::{Error, Result};

use crate::config::{CommandKind, Format, RunConfig};

pub const SCHEMA: &str = "shafdyn/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Result of one run: exit status, the report (standard output) and
/// diagnostics (standard error).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub report: String,
    pub diagnostics: String,
}

pub fn exit_status(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::Inconclusive(_) => EXIT_INCONCLUSIVE,
        _ => EXIT_DOMAIN,
    }
}

struct Report {
    status: i32,
    json: Value,
    text: String,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { status: EXIT_OK, json, text }
    }
}

fn big(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

/// Primes go out as JSON integers of arbitrary size.
fn prime(p: &BigInt) -> Value {
    Value::Number(Number::from_str(&p.to_string()).expect("integer literal"))
}

fn point(p: &ProjPoint) -> Value {
    Value::Array(p.coords().iter().map(big).collect())
}

fn map_value(f: &ProjLinearMap) -> Value {
    Value::Array(f.lift().iter().map(|r| Value::Array(r.iter().map(big).collect())).collect())
}

fn morphism_value(phi: &MorphismPN) -> Value {
    json!({ "n": phi.n(), "d": phi.degree(), "forms": phi.to_json().forms })
}

fn ideal_value(d: &SIdeal) -> Value {
    let exps: Map<String, Value> =
        d.exponents().iter().map(|(p, e)| (p.to_string(), Value::String(e.to_string()))).collect();
    json!({ "generator": d.generator().to_string(), "exponents": exps, "unit": d.is_unit() })
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn badprimes(cfg: &RunConfig, phi: &MorphismPN) -> Result<Report> {
    let res = phi.resultant()?;
    let bad = phi.bad_primes()?;
    let factors: Vec<Value> = if res == BigInt::from(0) {
        vec![]
    } else {
        factorize(&res)?.iter().map(|(p, e)| json!({ "p": prime(p), "e": e })).collect()
    };
    let s_model = phi.is_s_model(&cfg.s)?;
    let json = json!({
        "morphism": morphism_value(phi),
        "resultant": big(&res),
        "factorization": factors,
        "bad_primes": bad.iter().map(prime).collect::<Vec<_>>(),
        "s_model": s_model,
    });
    let text = format!(
        "morphism: {phi}\nresultant: {res}\nbad primes: {}\ngood reduction outside S = {}: {s_model}\n",
        join(&bad),
        cfg.s
    );
    Ok(Report::ok(json, text))
}

fn reduce(cfg: &RunConfig, phi: &MorphismPN) -> Result<Report> {
    let primes: Vec<u64> = if cfg.primes.is_empty() {
        phi.bad_primes()?
            .iter()
            .map(|p| u64::try_from(p).map_err(|_| Error::Resource(format!("prime {p} exceeds 64 bits"))))
            .collect::<Result<_>>()?
    } else {
        cfg.primes.clone()
    };
    let res = phi.resultant()?;
    let mut rows = Vec::new();
    let mut text = format!("morphism: {phi}\nresultant: {res}\n");
    for p in primes {
        let r = phi.reduce_at_p(p)?;
        let v = phi.valuation_of_resultant(p)?;
        let reduced: Vec<String> = r.reduced.iter().map(|f| f.to_string()).collect();
        let mut row = json!({
            "p": p,
            "valuation": v.to_string(),
            "reduced": reduced,
            "degree": r.degree,
            "is_morphism": r.is_morphism,
        });
        text.push_str(&format!(
            "p = {p}: v_p(Res) = {v}, reduction [{}], degree {}, morphism {}\n",
            reduced.join("; "),
            r.degree.map_or("?".into(), |d| d.to_string()),
            r.is_morphism
        ));
        if !r.is_morphism && phi.n() == 1 {
            let s = good_reduction_search(phi, p, cfg.budget)?;
            row["search"] = json!({
                "found": s.found,
                "best_valuation": s.best_valuation.to_string(),
                "witness": s.witness.as_ref().map(map_value),
                "model": s.model.as_ref().map(morphism_value),
            });
            text.push_str(&format!(
                "  search (budget {}): found {}, best valuation {}{}\n",
                cfg.budget,
                s.found,
                s.best_valuation,
                s.witness.map_or(String::new(), |w| format!(", witness {w}"))
            ));
        }
        rows.push(row);
    }
    let json = json!({ "morphism": morphism_value(phi), "resultant": big(&res), "reductions": rows });
    Ok(Report::ok(json, text))
}

fn preper(cfg: &RunConfig, phi: &MorphismPN) -> Result<Report> {
    let m = cfg.m as usize;
    let pts = rational_preperiodic(phi, m, cfg.height_bound)?;
    let mut orbits = Vec::new();
    let mut text = format!("morphism: {phi}\nM = {m}, height bound {}\n", cfg.height_bound);
    for p in &pts {
        let o = phi.orbit(p, m + 1)?;
        orbits.push(json!({
            "point": point(p),
            "orbit": o.points.iter().map(point).collect::<Vec<_>>(),
            "tail_length": o.tail_length,
            "cycle_length": o.cycle_length,
        }));
        text.push_str(&format!(
            "{p}: {} (tail {}, cycle {})\n",
            join(&o.points).replace(", ", " -> "),
            o.tail_length,
            o.cycle_length
        ));
    }
    let json = json!({
        "morphism": morphism_value(phi),
        "points": pts.iter().map(point).collect::<Vec<_>>(),
        "orbits": orbits,
    });
    Ok(Report::ok(json, text))
}

fn determinant_table(v: &PointSet) -> Result<(Vec<Value>, String)> {
    let pts = v.to_vec();
    let mut rows = Vec::new();
    let mut text = String::new();
    for idx in combinations(pts.len(), v.n() + 1) {
        let tuple: Vec<ProjPoint> = idx.iter().map(|&i| pts[i].clone()).collect();
        let det = det_points(&tuple)?;
        text.push_str(&format!("  det[{}] = {det}\n", join(&tuple)));
        rows.push(json!({ "points": tuple.iter().map(point).collect::<Vec<_>>(), "det": big(&det) }));
    }
    Ok((rows, text))
}

fn disc(cfg: &RunConfig, v: &PointSet) -> Result<Report> {
    let f = form_of_point_set(v);
    let d = shafdyn::shafarevich::discriminant_ideal(&f, &cfg.s)?;
    let (dets, table) = determinant_table(v)?;
    let json = json!({
        "points": v.to_vec().iter().map(point).collect::<Vec<_>>(),
        "form": f.expand().to_string(),
        "determinants": dets,
        "discriminant": ideal_value(&d),
    });
    let text = format!("V = {v}\nF_V = {}\ndeterminants:\n{table}discriminant ideal away from S = {}: {d}\n", f.expand(), cfg.s);
    Ok(Report::ok(json, text))
}

fn classp(cfg: &RunConfig, v: &PointSet) -> Result<Report> {
    let n = cfg.n_points.map_or(v.len(), |n| n as usize);
    let r = in_class_p(v, &cfg.s, n)?;
    let json = json!({
        "points": v.to_vec().iter().map(point).collect::<Vec<_>>(),
        "N": n.to_string(),
        "cardinality": r.cardinality,
        "galois_stable": r.galois_stable,
        "independent_frame": r.independent_frame,
        "discriminant": r.discriminant.as_ref().map(ideal_value),
        "unit_discriminant": r.unit_discriminant,
        "in_class": r.holds(),
    });
    let text = format!(
        "V = {v}, S = {}, N = {n}\n|V| = N: {}\nGalois stable: {} (rational points)\nindependent frame: {}\nunit discriminant: {}{}\nin P(S, N): {}\n",
        cfg.s,
        r.cardinality,
        r.galois_stable,
        r.independent_frame,
        r.unit_discriminant,
        r.discriminant.as_ref().map_or(String::new(), |d| format!(" ({d})")),
        r.holds()
    );
    Ok(Report::ok(json, text))
}

fn maps(v: &PointSet, w: &PointSet) -> Result<Report> {
    let found = maps_between(v, w)?;
    let json = json!({
        "source": v.to_vec().iter().map(point).collect::<Vec<_>>(),
        "target": w.to_vec().iter().map(point).collect::<Vec<_>>(),
        "count": found.len(),
        "maps": found.iter().map(map_value).collect::<Vec<_>>(),
    });
    let mut text = format!("{} maps from {v} onto {w}\n", found.len());
    for f in &found {
        text.push_str(&format!("  {f}\n"));
    }
    Ok(Report::ok(json, text))
}

fn twists(cfg: &RunConfig, phi: &MorphismPN) -> Result<Report> {
    let mut report = enumerate_twist_set(phi, &cfg.s)?;
    if cfg.check_iso {
        classify_twists(&mut report, cfg.m as usize, cfg.height_bound)?;
    }
    let records: Vec<Value> = report
        .records
        .iter()
        .map(|r| {
            json!({
                "gamma": r.gamma.to_string(),
                "model": morphism_value(&r.model),
                "resultant": big(&r.resultant),
                "bad_primes": r.bad_primes.iter().map(prime).collect::<Vec<_>>(),
                "s_model": r.s_model,
                "k_iso_class": r.k_iso_class,
            })
        })
        .collect();
    let json = json!({
        "morphism": morphism_value(phi),
        "count": records.len(),
        "records": records,
        "completeness": report.completeness,
        "iso_checked": report.iso_checked,
        "inconclusive_pairs": report.inconclusive_pairs,
    });
    let mut text = format!("twists of {phi} with good reduction outside S = {}\n", cfg.s);
    for r in &report.records {
        text.push_str(&format!(
            "  gamma = {}: {} (Res = {}, bad primes {{{}}}, S-model {}, class {})\n",
            r.gamma,
            r.model,
            r.resultant,
            join(&r.bad_primes),
            r.s_model,
            r.k_iso_class
        ));
    }
    text.push_str(&format!("{} records, {}\n", report.records.len(), report.completeness));
    Ok(Report::ok(json, text))
}

fn iso(cfg: &RunConfig, phi: &MorphismPN, psi: &MorphismPN) -> Result<Report> {
    let verdict = is_k_isomorphic(phi, psi, cfg.m as usize, cfg.height_bound)?;
    let (witness, reason) = match &verdict {
        KIsoVerdict::Yes { witness } => (Some(witness), None),
        KIsoVerdict::NoRationalWitness { reason } | KIsoVerdict::Inconclusive { reason } => (None, Some(reason)),
    };
    let json = json!({
        "phi": morphism_value(phi),
        "psi": morphism_value(psi),
        "verdict": verdict.label(),
        "witness": witness.map(map_value),
        "reason": reason,
    });
    let text = format!(
        "phi = {phi}\npsi = {psi}\nverdict: {}{}\n",
        verdict.label(),
        witness.map_or_else(|| reason.map_or(String::new(), |r| format!(" ({r})")), |w| format!(", witness {w}"))
    );
    let status = if matches!(verdict, KIsoVerdict::Inconclusive { .. }) { EXIT_INCONCLUSIVE } else { EXIT_OK };
    Ok(Report { status, json, text })
}

fn verify(cfg: &RunConfig) -> Result<Report> {
    let suite: Suite = cfg.suite.as_deref().unwrap_or("all").parse()?;
    let r = run_suite(suite, cfg.trials as usize, cfg.rng_seed);
    let json = json!({
        "suite": r.suite,
        "seed": r.seed.to_string(),
        "trials": r.trials,
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "trials": c.trials,
            "failures": c.failures,
            "first_failure": c.first_failure,
            "passed": c.passed(),
        })).collect::<Vec<_>>(),
    });
    let mut text = format!("suite {} seed {} trials {}\n", r.suite, r.seed, r.trials);
    for c in &r.checks {
        text.push_str(&format!(
            "{:<4} {:<52} {}/{} failed\n",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.failures,
            c.trials
        ));
    }
    let status = if r.passed() { EXIT_OK } else { EXIT_DOMAIN };
    Ok(Report { status, json, text })
}

fn read_input(input: &str, stdin: &mut dyn Read) -> Result<String> {
    if input != "-" {
        return Ok(input.to_string());
    }
    let mut s = String::new();
    stdin.read_to_string(&mut s).map_err(|e| Error::Parse(format!("reading standard input: {e}")))?;
    Ok(s)
}

fn dispatch(cfg: &RunConfig, stdin: &mut dyn Read) -> Result<Report> {
    let mut input = |i: usize| -> Result<String> {
        let raw = cfg.inputs.get(i).ok_or_else(|| Error::Parse("missing input".into()))?;
        read_input(raw, stdin)
    };
    match cfg.command {
        CommandKind::Badprimes => badprimes(cfg, &MorphismPN::parse(&input(0)?)?),
        CommandKind::Reduce => reduce(cfg, &MorphismPN::parse(&input(0)?)?),
        CommandKind::Preper => preper(cfg, &MorphismPN::parse(&input(0)?)?),
        CommandKind::Disc => disc(cfg, &PointSet::parse(&input(0)?)?),
        CommandKind::Classp => classp(cfg, &PointSet::parse(&input(0)?)?),
        CommandKind::Maps => {
            let v = PointSet::parse(&input(0)?)?;
            maps(&v, &PointSet::parse(&input(1)?)?)
        }
        CommandKind::Twists => twists(cfg, &MorphismPN::parse(&input(0)?)?),
        CommandKind::Iso => {
            let phi = MorphismPN::parse(&input(0)?)?;
            iso(cfg, &phi, &MorphismPN::parse(&input(1)?)?)
        }
        CommandKind::Verify => verify(cfg),
    }
}

fn command_name(c: CommandKind) -> String {
    serde_json::to_value(c).unwrap().as_str().unwrap().to_string()
}

/// Runs one command. Reports never contain error text; errors go to the
/// diagnostics with an empty report.
pub fn run(cfg: &RunConfig, stdin: &mut dyn Read) -> Outcome {
    match dispatch(cfg, stdin) {
        Ok(r) => {
            let report = match cfg.format {
                Format::Json => {
                    let mut doc = Map::new();
                    doc.insert("schema".into(), SCHEMA.into());
                    doc.insert("command".into(), command_name(cfg.command).into());
                    doc.insert("config".into(), serde_json::to_value(cfg).unwrap());
                    if let Value::Object(body) = r.json {
                        doc.extend(body);
                    }
                    serde_json::to_string_pretty(&Value::Object(doc)).unwrap() + "\n"
                }
                Format::Text => r.text,
            };
            Outcome { status: r.status, report, diagnostics: String::new() }
        }
        Err(e) => Outcome { status: exit_status(&e), report: String::new(), diagnostics: format!("shafdyn: {e}\n") },
    }
}
