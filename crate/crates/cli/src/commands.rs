use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use kcascade::cache::{cache_file_name, load_cache, save_cache, CacheError};
use kcascade::fixtures::{check_witness_file, Source};
use kcascade::orthenum::{build_index, OrthSubsetIndex};
use kcascade::reconstruct::{evaluate_xi, parse_tuple, xi_from_c, ReconstructError};
use kcascade::subsystem::perp_subsystem;
use kcascade::weights::{load_weights_from, restricted_weight_check};
use kcascade::witness::{fill_signatures, sweep as run_sweep, validate_fixture_file, Context, Counting, WitnessReport};
use kcascade::{kostant_cascade, Cascade, RootSystem, RootSystemType, WeightTable};

use crate::emit::{bits, joined, json as to_json, markdown, table, Output};
use crate::{Basis, CacheArgs, CliError, Emit, Format};

fn parse_type(s: &str) -> Result<RootSystemType, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("{e}")))
}

fn build(s: &str) -> Result<(RootSystem, Cascade), CliError> {
    let sys = RootSystem::build(parse_type(s)?).map_err(|e| CliError::Usage(e.to_string()))?;
    let cascade = kostant_cascade(&sys).map_err(|e| CliError::Validation(e.to_string()))?;
    Ok((sys, cascade))
}

fn weights_for(sys: &RootSystem, cascade: &Cascade, source: &Source) -> Result<WeightTable, CliError> {
    load_weights_from(sys, cascade, source).map_err(|e| CliError::Usage(e.to_string()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn inputs_digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0]);
    }
    hex(&h.finalize())
}

fn render(f: Format, v: Value, text: impl FnOnce() -> String) -> Output {
    match f {
        Format::Json => Output::ok(to_json(&v)),
        Format::Table => Output::ok(text()),
    }
}

pub fn roots(ty: &str, f: Format) -> Result<Output, CliError> {
    let (sys, _) = build(ty)?;
    let rows: Vec<Value> = sys
        .positives()
        .iter()
        .map(|r| json!({"index": r.index, "root": sys.digits(r.index), "coeffs": r.coeffs, "height": r.height}))
        .collect();
    let v = json!({"type": sys.ty().to_string(), "count": sys.num_positive(), "roots": rows});
    Ok(render(f, v, || {
        let rows: Vec<Vec<String>> = sys
            .positives()
            .iter()
            .map(|r| vec![r.index.to_string(), sys.digits(r.index), r.height.to_string()])
            .collect();
        format!("{} positive roots: {}\n{}", sys.ty(), sys.num_positive(), table(&["index", "root", "height"], &rows))
    }))
}

fn layer_of(c: &Cascade, k: usize) -> usize {
    c.layers.iter().position(|r| r.contains(&k)).unwrap_or(0) + 1
}

pub fn cascade(ty: &str, f: Format) -> Result<Output, CliError> {
    let (sys, c) = build(ty)?;
    let rows: Vec<Value> = c
        .roots
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            json!({"position": k + 1, "root": sys.digits(r), "layer": layer_of(&c, k), "simple": c.is_simple[k]})
        })
        .collect();
    let v = json!({"type": sys.ty().to_string(), "cascade": rows});
    Ok(render(f, v, || {
        let rows: Vec<Vec<String>> = c
            .roots
            .iter()
            .enumerate()
            .map(|(k, &r)| {
                vec![
                    format!("beta{}", k + 1),
                    sys.digits(r),
                    layer_of(&c, k).to_string(),
                    if c.is_simple[k] { "yes" } else { "" }.to_string(),
                ]
            })
            .collect();
        table(&["", "root", "layer", "simple"], &rows)
    }))
}

pub fn weights(ty: &str, basis: Basis, f: Format) -> Result<Output, CliError> {
    let (sys, c) = build(ty)?;
    let w = weights_for(&sys, &c, &Source::Embedded)?;
    let rows: Vec<Vec<String>> = (0..c.len())
        .map(|i| match basis {
            Basis::Simple => w.mu_simple[i].iter().map(i64::to_string).collect(),
            Basis::Euclidean => w.mu_euclid[i].iter().map(|x| x.to_string()).collect(),
            Basis::Cascade => w.r[i].iter().map(i64::to_string).collect(),
        })
        .collect();
    let basis_name = match basis {
        Basis::Simple => "simple",
        Basis::Euclidean => "euclidean",
        Basis::Cascade => "cascade",
    };
    let v = json!({
        "type": sys.ty().to_string(),
        "basis": basis_name,
        "columns": columns(&sys, &c, basis),
        "rows": rows,
    });
    Ok(render(f, v, || {
        let cols = columns(&sys, &c, basis);
        let mut headers = vec!["weight"];
        headers.extend(cols.iter().map(String::as_str));
        let body: Vec<Vec<String>> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut line = vec![format!("mu_beta{}", i + 1)];
                line.extend(r.iter().cloned());
                line
            })
            .collect();
        table(&headers, &body)
    }))
}

fn columns(sys: &RootSystem, c: &Cascade, basis: Basis) -> Vec<String> {
    match basis {
        Basis::Simple => (1..=sys.rank()).map(|k| format!("alpha{k}")).collect(),
        Basis::Euclidean => {
            let dim = sys.euclid().map_or(0, |e| e.dim);
            (1..=dim).map(|k| format!("eps{k}")).collect()
        }
        Basis::Cascade => (1..=c.len()).map(|k| format!("beta{k}")).collect(),
    }
}

pub fn subsystem(ty: &str, f: Format) -> Result<Output, CliError> {
    let (sys, _) = build(ty)?;
    let view = perp_subsystem(&sys, sys.highest_root()).map_err(|e| CliError::Validation(e.to_string()))?;
    let types: Vec<String> = view.identified_types().iter().map(|t| t.to_string()).collect();
    let label = if types.is_empty() { "empty".to_string() } else { types.join(" + ") };
    let identity = match restricted_weight_check(&sys) {
        Ok(r) => Some(r.ok),
        Err(_) => None,
    };
    let v = json!({
        "type": sys.ty().to_string(),
        "perp": types,
        "positiveRoots": view.roots.len(),
        "restrictionIdentity": identity,
    });
    Ok(render(f, v, || {
        let id = match identity {
            Some(true) => "holds",
            Some(false) => "FAILS",
            None => "not available",
        };
        format!(
            "{label}\npositive roots: {}\nweight restriction identity: {id}\n",
            view.roots.len()
        )
    }))
}

fn cache_dir(args: &CacheArgs) -> Option<PathBuf> {
    if args.no_cache {
        return None;
    }
    if let Some(p) = &args.cache {
        return Some(p.clone());
    }
    let env = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
    env("KCASCADE_CACHE_DIR")
        .or_else(|| env("XDG_CACHE_HOME").map(|p| p.join("kcascade")))
        .or_else(|| env("HOME").map(|p| p.join(".cache").join("kcascade")))
}

/// Full index for `sys`, from the cache when possible. Returns where it came from.
fn obtain_index(sys: &RootSystem, args: &CacheArgs) -> Result<(OrthSubsetIndex, &'static str), CliError> {
    let Some(dir) = cache_dir(args) else {
        return Ok((build_index(sys, sys.rank(), args.threads), "computed"));
    };
    let path = dir.join(cache_file_name(sys));
    match load_cache(sys, &path) {
        Ok(idx) => Ok((idx, "cache")),
        Err(CacheError::Missing(_)) => {
            let idx = build_index(sys, sys.rank(), args.threads);
            save(&idx, &path)?;
            Ok((idx, "computed"))
        }
        Err(e) => Err(CliError::Io(format!(
            "{e} ({}); delete the file or pass --no-cache to recompute",
            path.display()
        ))),
    }
}

fn save(idx: &OrthSubsetIndex, path: &std::path::Path) -> Result<(), CliError> {
    save_cache(idx, path).map_err(|e| CliError::Io(e.to_string()))
}

pub fn enumerate(ty: &str, max_size: Option<usize>, count_only: bool, args: &CacheArgs, f: Format) -> Result<Output, CliError> {
    let (sys, _) = build(ty)?;
    let full = max_size.map_or(true, |k| k >= sys.rank());
    let (idx, _) = if full {
        obtain_index(&sys, args)?
    } else {
        (build_index(&sys, max_size.unwrap_or(0), args.threads), "computed")
    };
    let counts = idx.counts_by_size();
    let listing = |k: usize| -> Vec<String> {
        idx.of_size(k)
            .iter()
            .map(|s| s.iter().map(|&x| sys.digits(x as usize)).collect::<Vec<_>>().join(" "))
            .collect()
    };
    let mut v = json!({
        "type": sys.ty().to_string(),
        "countsBySize": counts,
        "total": idx.len(),
    });
    if !count_only {
        v["subsets"] = (1..=counts.len()).map(|k| json!(listing(k))).collect();
    }
    Ok(render(f, v, || {
        let rows: Vec<Vec<String>> = counts
            .iter()
            .enumerate()
            .map(|(k, n)| vec![(k + 1).to_string(), n.to_string()])
            .collect();
        let mut out = table(&["size", "count"], &rows);
        out.push_str(&format!("total {}\n", idx.len()));
        if !count_only {
            for k in 1..=counts.len() {
                out.push_str(&format!("\nsize {k}\n"));
                for line in listing(k) {
                    out.push_str(&line);
                    out.push('\n');
                }
            }
        }
        out
    }))
}

fn root_list(sys: &RootSystem, v: &[usize]) -> Vec<String> {
    v.iter().map(|&r| sys.digits(r)).collect()
}

fn report_json(sys: &RootSystem, rep: &WitnessReport) -> Value {
    json!({
        "D": root_list(sys, &rep.d),
        "signature": rep.signature,
        "coefficientMatrix": rep.coefficient_matrix,
        "dprimeMax": rep.dprime_max.as_ref().map(|v| root_list(sys, v)),
        "dprimeFixture": rep.dprime_fixture.as_ref().map(|v| root_list(sys, v)),
        "alpha0": rep.alpha0.map(|a| a + 1),
        "beta0": rep.beta0.map(|b| sys.digits(b)),
        "eta": rep.eta,
        "checks": rep.checks.iter().map(|(c, ok)| json!({"check": c.name(), "pass": ok})).collect::<Vec<_>>(),
        "notes": rep.notes,
    })
}

fn check_summary(rep: &WitnessReport) -> String {
    let failed = rep.failed();
    if failed.is_empty() {
        "all pass".to_string()
    } else {
        failed.iter().map(|c| c.name()).collect::<Vec<_>>().join("; ")
    }
}

fn counting_name(c: Counting) -> &'static str {
    match c {
        Counting::Exact => "exact",
        Counting::Graded => "graded",
    }
}

fn with_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return job();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(job)
}

pub fn sweep(ty: &str, emit: Emit, all: bool, counting: Counting, args: &CacheArgs) -> Result<Output, CliError> {
    let start = Instant::now();
    let (sys, c) = build(ty)?;
    let w = weights_for(&sys, &c, &Source::Embedded)?;
    let ctx = Context::new(&sys, &c, &w).with_counting(counting);
    let (mut idx, _) = obtain_index(&sys, args)?;
    if idx.signatures.is_none() || idx.signature_width != c.len() {
        with_pool(args.threads, || fill_signatures(&ctx, &mut idx));
        if let Some(dir) = cache_dir(args) {
            save(&idx, &dir.join(cache_file_name(&sys)))?;
        }
    }
    let entries = with_pool(args.threads, || run_sweep(&ctx, &idx, all));
    let missing: Vec<String> = entries
        .iter()
        .filter(|e| e.witness.is_none())
        .map(|e| bits(&e.pattern))
        .collect();
    let fixture_digest = if sys.ty().is_exceptional() {
        Source::Embedded.input_digest(sys.ty()).unwrap_or_default()
    } else {
        String::new()
    };
    let flags = format!("{} all={all}", counting_name(counting));
    let digest = inputs_digest(&["sweep", &sys.ty().to_string(), &flags, &fixture_digest]);
    let elapsed = start.elapsed().as_millis() as u64;
    let failure = (!missing.is_empty()).then(|| format!("no witness found for {} pattern(s)", missing.len()));

    let text = match emit {
        Emit::Json => {
            let rows: Vec<Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "pattern": bits(&e.pattern),
                        "space": e.space,
                        "witness": e.witness.as_ref().map(|r| report_json(&sys, r)),
                        "alternatives": e.alternatives.iter().map(|d| root_list(&sys, d)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            to_json(&json!({
                "command": "sweep",
                "type": sys.ty().to_string(),
                "counting": counting_name(counting),
                "inputsDigest": digest,
                "patterns": entries.len(),
                "missing": missing,
                "rows": rows,
                "timing": {"elapsedMs": elapsed},
            }))
        }
        Emit::Markdown => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .enumerate()
                .map(|(k, e)| {
                    let mut row = vec![(k + 1).to_string(), bits(&e.pattern)];
                    match &e.witness {
                        Some(r) => {
                            row.push(root_list(&sys, &r.d).join(", "));
                            row.push(r.dprime_max.as_ref().map_or(String::new(), |v| root_list(&sys, v).join(", ")));
                            row.push(match (r.alpha0, r.beta0) {
                                (Some(a), Some(b)) => format!("(alpha{}, {})", a + 1, sys.digits(b)),
                                _ => String::new(),
                            });
                            row.push(match e.space {
                                Some(kcascade::witness::SearchSpace::Orthogonal) => "orthogonal".into(),
                                Some(kcascade::witness::SearchSpace::NonPositive) => "non-positive".into(),
                                None => String::new(),
                            });
                            row.push(check_summary(r));
                        }
                        None => row.extend(["none".to_string(), String::new(), String::new(), String::new(), "NO WITNESS".into()]),
                    }
                    if all {
                        row.push(e.alternatives.len().to_string());
                    }
                    row
                })
                .collect();
            let mut headers = vec!["#", "pattern", "D", "D' max", "(alpha0, beta0)", "search", "checks"];
            if all {
                headers.push("alternatives");
            }
            eprintln!("sweep {}: {elapsed} ms", sys.ty());
            format!(
                "{} sweep, {} counting: {} patterns, {} without witness\n\n{}",
                sys.ty(),
                counting_name(counting),
                entries.len(),
                missing.len(),
                markdown(&headers, &rows)
            )
        }
    };
    Ok(Output { text, failure })
}

pub fn validate(ty: &str, fixtures: Option<PathBuf>, counting: Counting, f: Format) -> Result<Output, CliError> {
    let start = Instant::now();
    let types = if ty.eq_ignore_ascii_case("all") {
        RootSystemType::exceptional()
    } else {
        let t = parse_type(ty)?;
        if !t.is_exceptional() {
            return Err(CliError::Usage(format!("no tabulated witnesses for {t}")));
        }
        vec![t]
    };
    let source = match fixtures {
        Some(d) => Source::Dir(d),
        None => Source::Embedded,
    };
    let usage = |e: &dyn std::fmt::Display| CliError::Usage(e.to_string());
    let mut per_type = Vec::new();
    let mut digests = vec!["validate".to_string(), counting_name(counting).to_string()];
    let mut failures = 0;
    let mut text = String::new();
    for t in types {
        let (sys, c) = build(&t.to_string())?;
        let w = weights_for(&sys, &c, &source)?;
        let file = source.witnesses(t).map_err(|e| usage(&e))?;
        check_witness_file(&sys, c.len(), &file).map_err(|e| usage(&e))?;
        digests.push(source.input_digest(t).map_err(|e| usage(&e))?);
        let ctx = Context::new(&sys, &c, &w).with_counting(counting);
        let results = validate_fixture_file(&ctx, &file).map_err(|e| usage(&e))?;
        let mut outcomes = Vec::new();
        let (mut valid, mut noted, mut failed) = (0, 0, 0);
        let mut lines = Vec::new();
        for (row, rep) in &results {
            let status = if !rep.valid() {
                failed += 1;
                "failed"
            } else if rep.pass_with_note() {
                noted += 1;
                "pass-with-note"
            } else {
                valid += 1;
                "valid"
            };
            if status != "valid" {
                lines.push(vec![
                    row.case.to_string(),
                    bits(&w.to_table(&row.pattern)),
                    status.to_string(),
                    if rep.valid() { rep.notes.join("; ") } else { check_summary(rep) },
                ]);
            }
            outcomes.push(json!({
                "case": row.case,
                "pattern": bits(&w.to_table(&row.pattern)),
                "status": status,
                "failedChecks": rep.failed().iter().map(|c| c.name()).collect::<Vec<_>>(),
                "signature": w.to_table(&rep.signature),
                "notes": rep.notes,
            }));
        }
        failures += failed;
        text.push_str(&format!(
            "{t}: {} rows, {valid} valid, {noted} pass-with-note, {failed} failed\n",
            results.len()
        ));
        if !lines.is_empty() {
            text.push_str(&table(&["case", "pattern", "status", "detail"], &lines));
        }
        text.push('\n');
        per_type.push(json!({
            "type": t.to_string(),
            "rows": results.len(),
            "valid": valid,
            "passWithNote": noted,
            "failed": failed,
            "outcomes": outcomes,
        }));
    }
    let refs: Vec<&str> = digests.iter().map(String::as_str).collect();
    let elapsed = start.elapsed().as_millis() as u64;
    let report = json!({
        "command": "validate",
        "counting": counting_name(counting),
        "inputsDigest": inputs_digest(&refs),
        "outcomes": per_type,
        "failures": failures,
        "timing": {"elapsedMs": elapsed},
    });
    let failure = (failures > 0).then(|| format!("{failures} fixture row(s) failed validation"));
    let mut out = render(f, report, || {
        eprintln!("validate: {elapsed} ms");
        text
    });
    out.failure = failure;
    Ok(out)
}

pub fn xi(ty: &str, c_str: &str, f: Format) -> Result<Output, CliError> {
    let (sys, c) = build(ty)?;
    let w = weights_for(&sys, &c, &Source::Embedded)?;
    let cv = parse_tuple(c_str).map_err(|e| CliError::Usage(e.to_string()))?;
    let xi = match xi_from_c(&cv, &w.r, &c.is_simple) {
        Ok(x) => x,
        Err(ReconstructError::Inadmissible { position }) => {
            return Err(CliError::Validation(format!(
                "c_beta{} is zero but beta{} = {} is not a simple root; the scalars off the simple cascade roots must be nonzero",
                position + 1,
                position + 1,
                sys.digits(c.roots[position])
            )))
        }
        Err(e @ ReconstructError::Length { .. }) => return Err(CliError::Usage(e.to_string())),
        Err(e) => return Err(CliError::Validation(e.to_string())),
    };
    let mut checks = Vec::new();
    for (i, ci) in cv.iter().enumerate() {
        let back = evaluate_xi(&xi, &w.r, i).map_err(|e| CliError::Validation(e.to_string()))?;
        checks.push((back.clone(), back == *ci));
    }
    let ok = checks.iter().all(|(_, ok)| *ok);
    let v = json!({
        "type": sys.ty().to_string(),
        "c": cv.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "xi": xi.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "roundtrip": checks.iter().map(|(b, ok)| json!({"value": b.to_string(), "ok": ok})).collect::<Vec<_>>(),
    });
    let mut out = render(f, v, || {
        let rows: Vec<Vec<String>> = (0..cv.len())
            .map(|i| {
                vec![
                    format!("beta{}", i + 1),
                    cv[i].to_string(),
                    xi[i].to_string(),
                    checks[i].0.to_string(),
                    if checks[i].1 { "ok" } else { "MISMATCH" }.to_string(),
                ]
            })
            .collect();
        format!("xi = {}\n{}", joined(&xi), table(&["", "c", "xi", "xi_beta(xi)", "roundtrip"], &rows))
    });
    if !ok {
        out.failure = Some("round trip does not reproduce c".into());
    }
    Ok(out)
}
