use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::Rng;
use rayon::prelude::*;
use serde_json::Value;
use stabboot::ansatz::{build_ansatz_circuit, build_with_convention};
use stabboot::bootstrap::{run_bootstrap, BootstrapConfig, ForestParams};
use stabboot::dataset::{generate_classification, Dataset};
use stabboot::dense::{expectation_dense_complex, simulate_dense, MAX_DENSE_QUBITS};
use stabboot::prob::{
    exact_counts_with, fit_exponent, scan, theory_probability, theory_zero_probability, ExponentFit, ObservableKind,
    OutcomeCounts, ScanRecord, ENUMERATION_BUDGET_LOG4,
};
use stabboot::rng::trial_rng;
use stabboot::{
    expectation_heisenberg, expectation_tableau, AngleVector, AnsatzSpec, Circuit, Entanglement,
    EntanglementConvention, Gate, Letter, PauliString, StabilizerTableau,
};

use crate::manifest::{manifest_path, Run};
use crate::{
    BootstrapArgs, EvalArgs, ExponentFitArgs, GenDataArgs, OracleValidateArgs, ProbScanArgs, TheoremCheckArgs,
};

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn finish(run: Run, outputs: &[&Path]) -> Result<()> {
    if let Some(m) = run.finish(outputs)? {
        eprintln!("manifest: {}", m.display());
    }
    Ok(())
}

fn parse_observable(spec: &str, n: usize) -> Result<PauliString> {
    let s = spec.trim();
    if let Some(r) = s.strip_prefix("dw:") {
        let r: f64 = r.parse().with_context(|| format!("bad domain-wall fraction {r:?}"))?;
        return Ok(PauliString::domain_wall(n, r)?);
    }
    if let Ok(kind) = s.parse::<ObservableKind>() {
        return Ok(kind.build(n)?);
    }
    let p: PauliString = s.parse()?;
    if p.n() != n {
        bail!("observable {s:?} has {} letters, circuit has {n} qubits", p.n());
    }
    Ok(p)
}

pub fn theorem_check(a: &TheoremCheckArgs) -> Result<bool> {
    let run = Run::start("theorem-check", a, None);
    if a.layers != 1 {
        bail!("closed forms exist only for a single layer (got --layers {})", a.layers);
    }
    if a.n_max == 0 {
        bail!("--n-max must be at least 1");
    }
    if a.n_max * a.layers > ENUMERATION_BUDGET_LOG4 {
        bail!(
            "enumeration budget exceeded: n-max {} needs 4^{} angle vectors, the limit is 4^{}",
            a.n_max,
            a.n_max * a.layers,
            ENUMERATION_BUDGET_LOG4
        );
    }
    let conv = EntanglementConvention::by_name(&a.convention)?;
    let mut csv = String::from("n,ent,observable,total,plus,minus,zero,expected_plus,expected_zero,ok\n");
    let (mut passed, mut checks) = (0, 0);
    for n in 1..=a.n_max {
        for ent in Entanglement::ALL {
            let spec = AnsatzSpec::new(n, a.layers, ent)?;
            for kind in ObservableKind::ALL {
                let c = exact_counts_with(&spec, &kind.build(n)?, conv)?;
                let p = theory_probability(n, kind, ent)?;
                let z = theory_zero_probability(n, kind, ent)?;
                let ok = p.equals_ratio(c.plus_one, c.total)
                    && p.equals_ratio(c.minus_one, c.total)
                    && z.equals_ratio(c.zero, c.total);
                checks += 1;
                passed += ok as usize;
                csv += &format!(
                    "{n},{ent},{},{},{},{},{},{p},{z},{ok}\n",
                    kind.as_str(),
                    c.total,
                    c.plus_one,
                    c.minus_one,
                    c.zero
                );
            }
        }
    }
    emit(a.out.as_deref(), &csv)?;
    eprintln!("{passed}/{checks} checks passed (convention {})", a.convention);
    if let Some(out) = &a.out {
        finish(run, &[out])?;
    }
    Ok(passed == checks)
}

pub fn prob_scan(a: &ProbScanArgs) -> Result<bool> {
    let run = Run::start("prob-scan", a, Some(a.seed));
    let ent: Entanglement = a.ent.parse()?;
    let records = scan(&a.n_list, &a.r_list, a.layers, ent, a.samples, a.seed)?;
    let mut csv = String::from(ScanRecord::CSV_HEADER);
    csv.push('\n');
    for r in &records {
        csv += &r.csv_row();
        csv.push('\n');
    }
    emit(a.out.as_deref(), &csv)?;
    if let Some(out) = &a.out {
        finish(run, &[out])?;
    }
    Ok(records.iter().all(|r| r.counts.is_consistent()))
}

pub fn gen_data(a: &GenDataArgs) -> Result<bool> {
    let run = Run::start("gen-data", a, Some(a.seed));
    let data = generate_classification(a.n_samples, a.n_features, a.class_sep, a.informative_fraction, a.seed)?;
    let f = File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let mut w = BufWriter::new(f);
    data.write_to(&mut w)?;
    w.flush()?;
    finish(run, &[&a.out])?;
    Ok(true)
}

pub fn bootstrap(a: &BootstrapArgs) -> Result<bool> {
    let run = Run::start("bootstrap", a, Some(a.seed));
    let f = File::open(&a.data).with_context(|| format!("opening {}", a.data.display()))?;
    let data = Dataset::read_from(BufReader::new(f))?;
    let spec = AnsatzSpec::new(data.n_features, a.layers, a.ent.parse()?)?;
    let obs = parse_observable(&a.observable, spec.n_qubits)?;
    let cfg = BootstrapConfig {
        sample_budget: a.sample_budget,
        opt_iterations: a.opt_iterations,
        forest: ForestParams {
            n_trees: a.n_trees,
            min_leaf: a.min_leaf,
            feature_subsample_fraction: a.feature_fraction,
            ..ForestParams::default()
        },
        pool_size: a.pool_size,
        mutation_count: a.mutation_count,
        seed: a.seed,
    };
    let out = run_bootstrap(&cfg, &spec, &obs, &data)?;

    let mut w = BufWriter::new(File::create(&a.trace).with_context(|| format!("creating {}", a.trace.display()))?);
    out.trace.write_jsonl(&mut w)?;
    w.flush()?;

    let mut summary = serde_json::to_value(out.summary(&cfg))?;
    if let Value::Object(m) = &mut summary {
        m.insert("ansatz".into(), Value::String(spec.to_string()));
        m.insert("observable".into(), Value::String(obs.to_string()));
        m.insert(
            "manifest".into(),
            Value::String(manifest_path(&a.summary).display().to_string()),
        );
    }
    std::fs::write(&a.summary, serde_json::to_string_pretty(&summary)? + "\n")
        .with_context(|| format!("writing {}", a.summary.display()))?;

    let mut outputs: Vec<&Path> = vec![&a.summary, &a.trace];
    if let Some(p) = &a.dump_circuit {
        std::fs::write(p, build_ansatz_circuit(&spec, &out.best)?.dump())?;
        outputs.push(p);
    }
    eprintln!("best loss {:.6} after {} evaluations", out.best_loss, out.trace.len());
    finish(run, &outputs)?;
    Ok(true)
}

fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    let q = rng.random_range(0..n);
    match rng.random_range(0..if n > 1 { 7 } else { 6 }) {
        0 | 1 => Gate::RyQuarter { q, k: rng.random_range(0..4) },
        2 => Gate::H(q),
        3 => Gate::S(q),
        4 => Gate::X(q),
        5 => Gate::Z(q),
        _ => {
            let t = (q + rng.random_range(1..n)) % n;
            Gate::Cnot { control: q, target: t }
        }
    }
}

struct OracleRow {
    n: usize,
    gates: usize,
    observable: PauliString,
    heisenberg: i8,
    tableau: i8,
    dense: f64,
    ok: bool,
}

fn oracle_case(seed: u64, index: usize, n_max: usize, max_gates: usize) -> Result<OracleRow> {
    let mut rng = trial_rng(seed, index as u64);
    let n = rng.random_range(1..=n_max);
    let len = rng.random_range(0..=max_gates);
    let c = Circuit::with_gates(n, (0..len).map(|_| random_gate(n, &mut rng)).collect())?;
    let letters: Vec<Letter> = (0..n).map(|_| [Letter::I, Letter::X, Letter::Z][rng.random_range(0..3)]).collect();
    let observable = PauliString::from_letters(letters, false)?;
    let heisenberg = expectation_heisenberg(&c, &observable)?;
    let tableau = expectation_tableau(&StabilizerTableau::from_circuit(&c)?, &observable)?;
    let d = expectation_dense_complex(&simulate_dense(&c)?, &observable)?;
    let ok = heisenberg == tableau && (d.re - heisenberg as f64).abs() < 1e-9 && d.im.abs() < 1e-9;
    Ok(OracleRow {
        n,
        gates: len,
        observable,
        heisenberg,
        tableau,
        dense: d.re,
        ok,
    })
}

pub fn oracle_validate(a: &OracleValidateArgs) -> Result<bool> {
    let run = Run::start("oracle-validate", a, Some(a.seed));
    if a.n_max == 0 || a.n_max > MAX_DENSE_QUBITS {
        bail!("--n-max must be in 1..={MAX_DENSE_QUBITS}");
    }
    let rows: Vec<OracleRow> = (0..a.circuits)
        .into_par_iter()
        .map(|i| oracle_case(a.seed, i, a.n_max, a.max_gates))
        .collect::<Result<_>>()?;
    let mut csv = String::from("index,n,gates,observable,heisenberg,tableau,dense,ok\n");
    for (i, r) in rows.iter().enumerate() {
        csv += &format!(
            "{i},{},{},{},{},{},{:.12},{}\n",
            r.n, r.gates, r.observable, r.heisenberg, r.tableau, r.dense, r.ok
        );
    }
    if let Some(out) = &a.out {
        emit(Some(out), &csv)?;
    }
    let bad = rows.iter().filter(|r| !r.ok).count();
    eprintln!("{} circuits, {bad} mismatches", rows.len());
    if let Some(out) = &a.out {
        finish(run, &[out])?;
    }
    Ok(bad == 0)
}

/// Closed-form exponent of `1/2^(⌈n/2⌉+1)`: `((⌈n/2⌉ - 1) ln 2) / ln n`.
fn weak_nu(n: usize) -> f64 {
    ((n.div_ceil(2) as f64 - 1.0) * std::f64::consts::LN_2) / (n as f64).ln()
}

fn fit_theory(kind: &str, n_list: &[usize]) -> Result<(String, bool)> {
    let mut csv = String::from("n,p,nu,expected_nu,abs_error\n");
    let mut ok = true;
    for &n in n_list {
        let (p, expected) = match kind {
            "strong" => (theory_probability(n, ObservableKind::ZString, Entanglement::ReverseLinear)?, 0.0),
            "weak" => (theory_probability(n, ObservableKind::ZString, Entanglement::Linear)?, weak_nu(n)),
            other => bail!("--theory must be strong or weak, got {other:?}"),
        };
        let fit = fit_exponent(p.to_f64(), n)?;
        let err = (fit.nu - expected).abs();
        ok &= err <= 1e-12;
        csv += &format!("{n},{:.17e},{:.17},{expected:.17},{err:.3e}\n", p.to_f64(), fit.nu);
    }
    Ok((csv, ok))
}

fn fit_scan_csv(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().context("empty scan file")?.split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).with_context(|| format!("missing column {name}"));
    let (ci_n, ci_r, ci_s, ci_p, ci_m, ci_z) =
        (col("n")?, col("r")?, col("samples")?, col("plus")?, col("minus")?, col("zero")?);
    let mut csv = String::from("n,r,p_hat,nu,stderr,noise_excursion\n");
    for (lineno, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        let get = |i: usize| -> Result<u64> {
            f.get(i)
                .with_context(|| format!("row {}: too few fields", lineno + 2))?
                .parse::<u64>()
                .with_context(|| format!("row {}: bad integer", lineno + 2))
        };
        let n = get(ci_n)? as usize;
        let r = f.get(ci_r).copied().unwrap_or_default();
        let counts = OutcomeCounts {
            total: get(ci_s)?,
            plus_one: get(ci_p)?,
            minus_one: get(ci_m)?,
            zero: get(ci_z)?,
        };
        match ExponentFit::from_counts(&counts, n) {
            Ok(fit) => {
                csv += &format!(
                    "{n},{r},{:.12},{:.12},{:.12},{}\n",
                    fit.p_hat, fit.nu, fit.stderr, fit.noise_excursion
                )
            }
            Err(_) => csv += &format!("{n},{r},{:.12},,,\n", counts.p_hat()),
        }
    }
    Ok(csv)
}

pub fn exponent_fit(a: &ExponentFitArgs) -> Result<bool> {
    let run = Run::start("exponent-fit", a, None);
    let (csv, ok) = match (&a.input, &a.theory) {
        (Some(path), None) => (fit_scan_csv(path)?, true),
        (None, Some(kind)) => fit_theory(kind, &a.n_list)?,
        _ => bail!("pass exactly one of --input or --theory"),
    };
    emit(a.out.as_deref(), &csv)?;
    if let Some(out) = &a.out {
        finish(run, &[out])?;
    }
    Ok(ok)
}

pub fn eval(a: &EvalArgs) -> Result<bool> {
    let spec: AnsatzSpec = a.ansatz.parse()?;
    let angles = AngleVector::new(a.angles.clone())?;
    let c = build_with_convention(&spec, &angles, EntanglementConvention::FROZEN)?;
    let obs = parse_observable(&a.observable, spec.n_qubits)?;
    if a.dump_circuit {
        print!("{}", c.dump());
    }
    let h = expectation_heisenberg(&c, &obs)?;
    let t = expectation_tableau(&StabilizerTableau::from_circuit(&c)?, &obs)?;
    println!("expectation {h}");
    if h != t {
        eprintln!("tableau disagrees: {t}");
        return Ok(false);
    }
    Ok(true)
}
