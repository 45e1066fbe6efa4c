//! Experiment runners behind the CLI: every subcommand maps to one runner
//! that reads its input (or draws a seeded corpus), verifies the module
//! invariants on the data at hand, and assembles a deterministic report
//! `{"command", "config", "results", "violations"}`.
//!
//! Reports serialize with sorted keys and shortest-round-trip floats, so
//! identical configurations reproduce identical bytes.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::atoms::{decompose_greedy, synthesize};
use crate::corpus::{
    random_family, random_grid_sequence, random_sequence, random_step_function, random_weights,
    rng_from_seed,
};
use crate::dyadic::{DyadicIndex, DyadicSequence};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::geometry::{
    balls_intersect, color_family, discrete_duality_check, ess_sup_overlap, is_proper,
    maximal_weak_type, piercing_heuristic, s1_discrete_norm, separated_net, t1_discrete_norm,
    total_overlap, vitali_select, BallFamily, ConvexBody, NormKind,
};
use crate::haar::{
    haar_multiplier_norm, haar_osc_identity_check, haar_transform, inverse_haar, jnp_dyadic_norm,
    jnp_growth_check, multiplier_norm_oracle, osc_sequence, oscillation,
    square_function_and_slinfty, OscKind, StepFunction, MAX_STEP_DEPTH,
};
use crate::io;
use crate::orlicz::{
    embedding_checks, luxemburg_norm, orlicz_integral, young_axiom_check, YoungFunction,
};
use crate::tol::{
    DEFAULT_MWIS_LIMIT, DEFAULT_ORACLE_DEPTH, NET_RESOLUTION_DIVISOR, TOL_EXACT, TOL_EXTREMIZER,
};
use crate::xpq::{
    brute_force_xp_infty, dual_extremizer, evaluate_witness, holder_check, max_cone_norm, pairing,
    xpq_norm, xpq_norm_truncated,
};

/// Exponent sweep used by the duality and oracle corpora.
pub const EXPONENT_GRID: [Exponent; 5] = [
    Exponent::ONE,
    Exponent::Finite(1.5),
    Exponent::TWO,
    Exponent::Finite(3.0),
    Exponent::Infinite,
];

/// Effective settings of a run, serialized into the report verbatim.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub depth: u32,
    pub p: Exponent,
    pub q: Exponent,
    pub osc: OscKind,
    pub oracle_limit: u32,
    pub mwis_limit: usize,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            trials: 100,
            depth: DEFAULT_ORACLE_DEPTH,
            p: Exponent::TWO,
            q: Exponent::Infinite,
            osc: OscKind::L1,
            oracle_limit: DEFAULT_ORACLE_DEPTH,
            mwis_limit: DEFAULT_MWIS_LIMIT,
            tolerance: TOL_EXACT,
            input: None,
        }
    }
}

/// A checked property that failed, with enough data to replay it.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub property: String,
    pub detail: String,
    pub counterexample: Value,
}

impl Violation {
    pub fn new(property: &str, detail: String, counterexample: Value) -> Self {
        Violation { property: property.to_string(), detail, counterexample }
    }
}

/// The single JSON document a run produces.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: ExperimentConfig,
    pub results: Value,
    pub violations: Vec<Violation>,
}

impl Report {
    /// `0` clean, `1` when any checked property failed.
    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }

    /// Flat `key,value` rows of the results section, for plotting.
    pub fn to_csv(&self) -> String {
        let mut rows = vec!["key,value".to_string()];
        flatten_csv("results", &self.results, &mut rows);
        rows.push(format!("violations,{}", self.violations.len()));
        let mut text = rows.join("\n");
        text.push('\n');
        text
    }
}

fn flatten_csv(prefix: &str, value: &Value, rows: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten_csv(&format!("{prefix}.{k}"), v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten_csv(&format!("{prefix}[{i}]"), v, rows);
            }
        }
        other => rows.push(format!("{prefix},{other}")),
    }
}

type Runner = fn(&ExperimentConfig) -> Result<(Value, Vec<Violation>)>;

/// Runs one subcommand to a finished report.  Commands with `input` unset
/// fall back to a seeded corpus and verify invariants across it.
pub fn run(command: &str, config: &ExperimentConfig) -> Result<Report> {
    let runner: Runner = match command {
        "norm" => run_norm,
        "jnp" => run_jnp,
        "duality" => run_duality,
        "haar" => run_haar,
        "atoms" => run_atoms,
        "orlicz" => run_orlicz,
        "overlap" => run_overlap,
        "weaktype" => run_weaktype,
        "net" => run_net,
        "selftest" => run_selftest,
        other => return Err(Error::Input(format!("unknown command `{other}`"))),
    };
    let (results, violations) = runner(config)?;
    Ok(Report { command: command.to_string(), config: config.clone(), results, violations })
}

fn object(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map,
        _ => unreachable!("struct serializes to an object"),
    }
}

fn to_value<T: Serialize + ?Sized>(data: &T) -> Value {
    serde_json::to_value(data).expect("plain data serializes")
}

// ---------------------------------------------------------------- norm --

fn run_norm(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    match &config.input {
        Some(path) => norm_input(config, Path::new(path)),
        None => norm_corpus(config),
    }
}

fn norm_input(config: &ExperimentConfig, path: &Path) -> Result<(Value, Vec<Violation>)> {
    let g = io::read_sequence(path)?;
    let mut violations = Vec::new();
    let report = xpq_norm(&g, config.p, config.q);
    if let Some(witness) = &report.witness {
        let attained = evaluate_witness(&g, config.p, config.q, witness);
        if (attained - report.value).abs() > config.tolerance {
            violations.push(Violation::new(
                "witness evaluates to the norm",
                format!("witness value {attained} vs norm {}", report.value),
                io::sequence_to_value(&g),
            ));
        }
    }
    let truncated = xpq_norm_truncated(&g, config.p, config.q);
    if (truncated - report.value).abs() > config.tolerance {
        violations.push(Violation::new(
            "norm agrees with its truncation supremum",
            format!("truncated {truncated} vs norm {}", report.value),
            io::sequence_to_value(&g),
        ));
    }
    let mut results = object(to_value(&report));
    results.insert("support".into(), json!(g.support_size()));
    results.insert("depth".into(), json!(g.depth()));
    results.insert("truncated_value".into(), json!(truncated));
    if config.q.is_infinite() && g.depth().unwrap_or(0) <= config.oracle_limit {
        let oracle = brute_force_xp_infty(&g, config.p, config.oracle_limit)?;
        if (oracle.value - report.value).abs() > config.tolerance {
            violations.push(Violation::new(
                "norm matches the exhaustive antichain oracle",
                format!("value {} vs oracle {}", report.value, oracle.value),
                io::sequence_to_value(&g),
            ));
        }
        results.insert("oracle_value".into(), json!(oracle.value));
    }
    if config.p.is_infinite() {
        let cone = max_cone_norm(&g, config.q);
        if cone != report.value {
            violations.push(Violation::new(
                "cone formula equality is exact",
                format!("value {} vs cone maximum {cone}", report.value),
                io::sequence_to_value(&g),
            ));
        }
        results.insert("cone_value".into(), json!(cone));
    }
    Ok((Value::Object(results), violations))
}

fn norm_corpus(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    let mut rng = rng_from_seed(config.seed);
    let depth = config.depth.min(config.oracle_limit);
    let finite_ps = [Exponent::ONE, Exponent::Finite(1.5), Exponent::TWO, Exponent::Finite(3.0)];
    let cone_qs = [Exponent::ONE, Exponent::TWO, Exponent::Infinite];
    let mut violations = Vec::new();
    let mut max_oracle_gap = 0.0f64;
    let mut max_witness_gap = 0.0f64;
    let mut cone_mismatches = 0usize;
    for trial in 0..config.trials {
        let g = random_sequence(&mut rng, depth, 0.6);
        for p in finite_ps {
            let fast = xpq_norm(&g, p, Exponent::Infinite);
            let oracle = brute_force_xp_infty(&g, p, config.oracle_limit)?;
            let gap = (fast.value - oracle.value).abs();
            max_oracle_gap = max_oracle_gap.max(gap);
            if gap > TOL_EXACT {
                violations.push(Violation::new(
                    "norm matches the exhaustive antichain oracle",
                    format!(
                        "trial {trial}, p = {p}: value {} vs oracle {}",
                        fast.value, oracle.value
                    ),
                    io::sequence_to_value(&g),
                ));
            }
            let witness = fast.witness.as_ref().expect("q = inf reports a witness");
            let attained = evaluate_witness(&g, p, Exponent::Infinite, witness);
            let wgap = (attained - fast.value).abs();
            max_witness_gap = max_witness_gap.max(wgap);
            if wgap > TOL_EXACT {
                violations.push(Violation::new(
                    "witness evaluates to the norm",
                    format!(
                        "trial {trial}, p = {p}: witness value {attained} vs norm {}",
                        fast.value
                    ),
                    io::sequence_to_value(&g),
                ));
            }
        }
        for q in cone_qs {
            let fast = xpq_norm(&g, Exponent::Infinite, q);
            let cone = max_cone_norm(&g, q);
            if fast.value != cone {
                cone_mismatches += 1;
                violations.push(Violation::new(
                    "cone formula equality is exact",
                    format!("trial {trial}, q = {q}: value {} vs cone maximum {cone}", fast.value),
                    io::sequence_to_value(&g),
                ));
            }
        }
    }
    let results = json!({
        "trials": config.trials,
        "depth": depth,
        "oracle_exponents": finite_ps,
        "cone_exponents": cone_qs,
        "max_oracle_gap": max_oracle_gap,
        "max_witness_gap": max_witness_gap,
        "cone_mismatches": cone_mismatches,
    });
    Ok((results, violations))
}

// ----------------------------------------------------------------- jnp --

fn run_jnp(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    match &config.input {
        Some(path) => jnp_input(config, Path::new(path)),
        None => jnp_corpus(config),
    }
}

fn jnp_input(config: &ExperimentConfig, path: &Path) -> Result<(Value, Vec<Violation>)> {
    let f = io::read_step(path)?;
    let mut violations = Vec::new();
    let report = jnp_dyadic_norm(&f, config.p, config.osc)?;
    if let Some(witness) = &report.witness {
        let g = osc_sequence(&f, config.p, config.osc)?;
        let attained = evaluate_witness(&g, config.p, Exponent::Infinite, witness);
        if (attained - report.value).abs() > config.tolerance {
            violations.push(Violation::new(
                "witness evaluates to the norm",
                format!("witness value {attained} vs norm {}", report.value),
                to_value(&f),
            ));
        }
    }
    let growth = jnp_growth_check(
        &osc_sequence(&f, config.p, OscKind::L2Direct)?,
        config.p.value(),
        config.tolerance,
    )?;
    if let Some(g) = &growth {
        violations.push(Violation::new(
            "square oscillation sequences satisfy the growth inequality",
            format!("at {}: {} < {}", g.interval, g.lhs, g.rhs),
            to_value(&f),
        ));
    }
    let mut results = object(to_value(&report));
    results.insert("depth".into(), json!(f.depth()));
    results.insert("mean".into(), json!(f.mean()));
    results.insert("osc_kind".into(), to_value(&config.osc));
    results.insert("growth_violation".into(), to_value(&growth));
    Ok((Value::Object(results), violations))
}

fn jnp_corpus(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    if config.depth > MAX_STEP_DEPTH {
        return Err(Error::Input(format!("step depth {} exceeds {MAX_STEP_DEPTH}", config.depth)));
    }
    let mut rng = rng_from_seed(config.seed);
    let ps = [Exponent::Finite(1.5), Exponent::TWO, Exponent::Finite(3.0)];
    let mut violations = Vec::new();
    let mut max_kind_gap = 0.0f64;
    for trial in 0..config.trials {
        let f = random_step_function(&mut rng, config.depth);
        for p in ps {
            let l1 = jnp_dyadic_norm(&f, p, OscKind::L1)?.value;
            let l2 = jnp_dyadic_norm(&f, p, OscKind::L2Direct)?.value;
            let l2h = jnp_dyadic_norm(&f, p, OscKind::L2Haar)?.value;
            let gap = (l2 - l2h).abs();
            max_kind_gap = max_kind_gap.max(gap);
            if gap > config.tolerance {
                violations.push(Violation::new(
                    "direct and coefficient square oscillations agree",
                    format!("trial {trial}, p = {p}: {l2} vs {l2h}"),
                    to_value(&f),
                ));
            }
            if l1 > l2 + config.tolerance {
                violations.push(Violation::new(
                    "mean oscillation bounded by square oscillation",
                    format!("trial {trial}, p = {p}: {l1} > {l2}"),
                    to_value(&f),
                ));
            }
            let growth = jnp_growth_check(
                &osc_sequence(&f, p, OscKind::L2Direct)?,
                p.value(),
                config.tolerance,
            )?;
            if let Some(g) = growth {
                violations.push(Violation::new(
                    "square oscillation sequences satisfy the growth inequality",
                    format!("trial {trial}, p = {p}, at {}: {} < {}", g.interval, g.lhs, g.rhs),
                    to_value(&f),
                ));
            }
        }
    }
    let results = json!({
        "trials": config.trials,
        "depth": config.depth,
        "exponents": ps,
        "max_kind_gap": max_kind_gap,
    });
    Ok((results, violations))
}

// ------------------------------------------------------------- duality --

fn run_duality(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    match &config.input {
        Some(path) => duality_input(config, Path::new(path)),
        None => duality_corpus(config),
    }
}

/// One Hölder + extremizer check; returns (holder ratio, extremizer norm,
/// dual-norm deficit) for aggregation.
fn duality_checks(
    f: &DyadicSequence,
    g: &DyadicSequence,
    p: Exponent,
    q: Exponent,
    label: &str,
    violations: &mut Vec<Violation>,
) -> (Option<f64>, f64, f64) {
    let holder = holder_check(f, g, p, q);
    if !holder.holds(TOL_EXACT * holder.bound) {
        violations.push(Violation::new(
            "pairing bounded by the product of conjugate norms",
            format!("{label}: pairing {}, bound {}", holder.pairing, holder.bound),
            json!({"f": io::sequence_to_value(f), "g": io::sequence_to_value(g)}),
        ));
    }
    let ratio = (holder.bound > 0.0).then(|| holder.pairing.abs() / holder.bound);
    let extremizer = dual_extremizer(g, p, q);
    let extremizer_norm = xpq_norm(&extremizer, p, q).value;
    if extremizer_norm > 1.0 + TOL_EXACT {
        violations.push(Violation::new(
            "extremizer stays inside the unit ball",
            format!("{label}: extremizer norm {extremizer_norm}"),
            io::sequence_to_value(g),
        ));
    }
    let attained = pairing(&extremizer, g);
    let deficit = holder.g_conjugate_norm - attained;
    if attained < holder.g_conjugate_norm - TOL_EXTREMIZER {
        violations.push(Violation::new(
            "extremizer attains the dual norm",
            format!("{label}: pairing {attained} vs dual norm {}", holder.g_conjugate_norm),
            io::sequence_to_value(g),
        ));
    }
    (ratio, extremizer_norm, deficit)
}

fn duality_input(_config: &ExperimentConfig, path: &Path) -> Result<(Value, Vec<Violation>)> {
    let g = io::read_sequence(path)?;
    let mut violations = Vec::new();
    let mut pairs = Vec::new();
    for p in EXPONENT_GRID {
        for q in EXPONENT_GRID {
            let label = format!("p = {p}, q = {q}");
            let extremizer = dual_extremizer(&g, p, q);
            let (_, extremizer_norm, _) =
                duality_checks(&extremizer, &g, p, q, &label, &mut violations);
            let conjugate_norm = xpq_norm(&g, p.conjugate(), q.conjugate()).value;
            pairs.push(json!({
                "p": p,
                "q": q,
                "conjugate_norm": conjugate_norm,
                "extremizer_norm": extremizer_norm,
                "attained": pairing(&extremizer, &g),
            }));
        }
    }
    Ok((json!({"pairs": pairs}), violations))
}

fn duality_corpus(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    let mut rng = rng_from_seed(config.seed);
    let mut violations = Vec::new();
    let mut checks = 0usize;
    let mut max_holder_ratio: Option<f64> = None;
    let mut max_extremizer_norm: Option<f64> = None;
    let mut max_extremizer_deficit: Option<f64> = None;
    for trial in 0..config.trials {
        let f = random_sequence(&mut rng, config.depth, 0.6);
        let g = random_sequence(&mut rng, config.depth, 0.6);
        for p in EXPONENT_GRID {
            for q in EXPONENT_GRID {
                checks += 1;
                let label = format!("trial {trial}, p = {p}, q = {q}");
                let (ratio, norm, deficit) = duality_checks(&f, &g, p, q, &label, &mut violations);
                if let Some(r) = ratio {
                    max_holder_ratio = Some(max_holder_ratio.map_or(r, |m| m.max(r)));
                }
                max_extremizer_norm = Some(max_extremizer_norm.map_or(norm, |m| m.max(norm)));
                max_extremizer_deficit =
                    Some(max_extremizer_deficit.map_or(deficit, |m| m.max(deficit)));
            }
        }
    }
    let results = json!({
        "trials": config.trials,
        "exponent_grid": EXPONENT_GRID,
        "checks": checks,
        "max_holder_ratio": max_holder_ratio,
        "max_extremizer_norm": max_extremizer_norm,
        "max_extremizer_deficit": max_extremizer_deficit,
    });
    Ok((results, violations))
}

// ---------------------------------------------------------------- haar --

struct StepChecks {
    round_trip_residual: f64,
    parseval_residual: f64,
    max_identity_residual: f64,
    square_gap: f64,
}

fn verify_step_invariants(
    f: &StepFunction,
    tol: f64,
    label: &str,
    violations: &mut Vec<Violation>,
) -> Result<StepChecks> {
    let expansion = haar_transform(f);
    let back = inverse_haar(&expansion, f.depth())?;
    let round_trip_residual =
        f.values().iter().zip(back.values()).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
    if round_trip_residual > tol {
        violations.push(Violation::new(
            "transform round trip reproduces the function",
            format!("{label}: residual {round_trip_residual}"),
            to_value(f),
        ));
    }
    let energy = expansion.mean * expansion.mean
        + expansion.coefficients.iter().map(|(i, v)| v * v * i.length()).sum::<f64>();
    let parseval_residual = (energy - f.square_integral()).abs();
    if parseval_residual > tol {
        violations.push(Violation::new(
            "coefficient energy matches the square integral",
            format!("{label}: residual {parseval_residual}"),
            to_value(f),
        ));
    }
    let mut max_identity_residual = 0.0f64;
    for level in 0..f.depth() {
        for position in 0..(1u64 << level) {
            let report = haar_osc_identity_check(f, DyadicIndex::new(level, position)?)?;
            max_identity_residual = max_identity_residual.max(report.residual.abs());
            if !report.holds(tol) {
                violations.push(Violation::new(
                    "coefficient square matches the oscillation difference",
                    format!(
                        "{label}, level {level} position {position}: lhs {} rhs {}",
                        report.lhs, report.rhs
                    ),
                    to_value(f),
                ));
            }
        }
    }
    let (_, slinfty) = square_function_and_slinfty(f);
    let cone = xpq_norm(&expansion.coefficients, Exponent::Infinite, Exponent::TWO).value;
    let square_gap = (slinfty - cone).abs();
    if square_gap > tol {
        violations.push(Violation::new(
            "square function maximum matches the cone norm",
            format!("{label}: {slinfty} vs {cone}"),
            to_value(f),
        ));
    }
    Ok(StepChecks { round_trip_residual, parseval_residual, max_identity_residual, square_gap })
}

fn multiplier_checks(
    a: &DyadicSequence,
    oracle_limit: u32,
    label: &str,
    violations: &mut Vec<Violation>,
) -> Result<(f64, f64)> {
    let report = haar_multiplier_norm(a);
    let oracle = multiplier_norm_oracle(a, oracle_limit)?;
    let oracle_gap = (report.norm - oracle).abs();
    if oracle_gap > TOL_EXTREMIZER {
        violations.push(Violation::new(
            "multiplier norm matches the antichain oracle",
            format!("{label}: norm {} vs oracle {oracle}", report.norm),
            io::sequence_to_value(a),
        ));
    }
    let mut rayleigh_gap = 0.0f64;
    match report.rayleigh {
        Some(rayleigh) => {
            rayleigh_gap = (rayleigh - report.norm).abs();
            if rayleigh_gap > TOL_EXTREMIZER {
                violations.push(Violation::new(
                    "extremal input attains the multiplier norm",
                    format!("{label}: rayleigh {rayleigh} vs norm {}", report.norm),
                    io::sequence_to_value(a),
                ));
            }
        }
        None => {
            if !a.is_empty() {
                violations.push(Violation::new(
                    "nonzero multipliers produce an extremal input",
                    format!("{label}: missing extremal"),
                    io::sequence_to_value(a),
                ));
            }
        }
    }
    Ok((oracle_gap, rayleigh_gap))
}

fn run_haar(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    match &config.input {
        Some(path) => haar_input(config, Path::new(path)),
        None => haar_corpus(config),
    }
}

fn haar_input(config: &ExperimentConfig, path: &Path) -> Result<(Value, Vec<Violation>)> {
    let f = io::read_step(path)?;
    let mut violations = Vec::new();
    let checks = verify_step_invariants(&f, config.tolerance, "input", &mut violations)?;
    let expansion = haar_transform(&f);
    let mut osc_map = Map::new();
    for (name, kind) in
        [("l1", OscKind::L1), ("l2_direct", OscKind::L2Direct), ("l2_haar", OscKind::L2Haar)]
    {
        osc_map.insert(name.into(), json!(oscillation(&f, DyadicIndex::ROOT, kind)?));
    }
    let mut results = Map::new();
    results.insert("depth".into(), json!(f.depth()));
    results.insert("mean".into(), json!(expansion.mean));
    results.insert("coefficients".into(), io::sequence_to_value(&expansion.coefficients));
    results.insert("osc_root".into(), Value::Object(osc_map));
    results.insert("slinfty".into(), json!(square_function_and_slinfty(&f).1));
    results.insert("parseval_residual".into(), json!(checks.parseval_residual));
    results.insert("max_identity_residual".into(), json!(checks.max_identity_residual));
    if !expansion.coefficients.is_empty() {
        let multiplier = haar_multiplier_norm(&expansion.coefficients);
        if expansion.coefficients.depth().unwrap_or(0) <= config.oracle_limit {
            multiplier_checks(
                &expansion.coefficients,
                config.oracle_limit,
                "input coefficients",
                &mut violations,
            )?;
        }
        results.insert(
            "multiplier".into(),
            json!({
                "norm": multiplier.norm,
                "witness": multiplier.witness,
                "rayleigh": multiplier.rayleigh,
            }),
        );
    }
    Ok((Value::Object(results), violations))
}

fn haar_corpus(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    if config.depth > MAX_STEP_DEPTH {
        return Err(Error::Input(format!("step depth {} exceeds {MAX_STEP_DEPTH}", config.depth)));
    }
    let mut rng = rng_from_seed(config.seed);
    let mut violations = Vec::new();
    let mut max_round_trip = 0.0f64;
    let mut max_parseval = 0.0f64;
    let mut max_identity = 0.0f64;
    let mut max_square_gap = 0.0f64;
    for trial in 0..config.trials {
        let f = random_step_function(&mut rng, config.depth);
        let checks = verify_step_invariants(
            &f,
            config.tolerance,
            &format!("trial {trial}"),
            &mut violations,
        )?;
        max_round_trip = max_round_trip.max(checks.round_trip_residual);
        max_parseval = max_parseval.max(checks.parseval_residual);
        max_identity = max_identity.max(checks.max_identity_residual);
        max_square_gap = max_square_gap.max(checks.square_gap);
    }
    let multiplier_depth = config.depth.min(3);
    let oracle_limit = config.oracle_limit.max(multiplier_depth);
    let mut max_oracle_gap = 0.0f64;
    let mut max_rayleigh_gap = 0.0f64;
    for trial in 0..config.trials {
        let a = random_sequence(&mut rng, multiplier_depth, 0.7);
        let (oracle_gap, rayleigh_gap) = multiplier_checks(
            &a,
            oracle_limit,
            &format!("multiplier trial {trial}"),
            &mut violations,
        )?;
        max_oracle_gap = max_oracle_gap.max(oracle_gap);
        max_rayleigh_gap = max_rayleigh_gap.max(rayleigh_gap);
    }
    let results = json!({
        "trials": config.trials,
        "depth": config.depth,
        "max_round_trip_residual": max_round_trip,
        "max_parseval_residual": max_parseval,
        "max_identity_residual": max_identity,
        "max_square_gap": max_square_gap,
        "multiplier": {
            "trials": config.trials,
            "depth": multiplier_depth,
            "max_oracle_gap": max_oracle_gap,
            "max_rayleigh_gap": max_rayleigh_gap,
        },
    });
    Ok((results, violations))
}

// --------------------------------------------------------------- atoms --

fn run_atoms(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    match &config.input {
        Some(path) => {
            let text = std::fs::read_to_string(Path::new(path))?;
            let probe: Value = serde_json::from_str(&text)?;
            if probe.get("atoms").is_some() {
                atoms_synthesize(config, &text)
            } else if probe.get("entries").is_some() {
                atoms_decompose(config, &text)
            } else {
                Err(Error::Input("expected an object with `atoms` or `entries`".to_string()))
            }
        }
        None => atoms_corpus(config),
    }
}

fn atoms_synthesize(config: &ExperimentConfig, text: &str) -> Result<(Value, Vec<Violation>)> {
    let atoms = io::atoms_from_json(text)?;
    let depth = atoms.iter().flat_map(|a| a.signs().keys().map(|i| i.level)).max().unwrap_or(0);
    let f = synthesize(&atoms, depth);
    let norm = xpq_norm(&f, Exponent::ONE, Exponent::Infinite);
    let weight_sum: f64 = atoms.iter().map(|a| a.weight()).sum();
    let mut violations = Vec::new();
    if norm.value > weight_sum + config.tolerance * weight_sum.max(1.0) {
        violations.push(Violation::new(
            "total weight dominates the synthesis norm",
            format!("norm {} vs total weight {weight_sum}", norm.value),
            to_value(&atoms),
        ));
    }
    let results = json!({
        "mode": "synthesize",
        "atom_count": atoms.len(),
        "weight_sum": weight_sum,
        "value": norm.value,
        "witness": norm.witness,
        "sequence": io::sequence_to_value(&f),
    });
    Ok((results, violations))
}

fn atoms_decompose(config: &ExperimentConfig, text: &str) -> Result<(Value, Vec<Violation>)> {
    let g = io::sequence_from_json(text)?;
    let decomposition = decompose_greedy(&g);
    let back = synthesize(&decomposition.atoms, g.depth().unwrap_or(0));
    let round_trip_exact = back == g;
    let mut violations = Vec::new();
    if !round_trip_exact {
        violations.push(Violation::new(
            "decomposition resynthesizes exactly",
            "resynthesized sequence differs".to_string(),
            io::sequence_to_value(&g),
        ));
    }
    if decomposition.norm
        > decomposition.weight_sum + config.tolerance * decomposition.weight_sum.max(1.0)
    {
        violations.push(Violation::new(
            "total weight dominates the norm",
            format!("norm {} vs total weight {}", decomposition.norm, decomposition.weight_sum),
            io::sequence_to_value(&g),
        ));
    }
    let mut results = object(to_value(&decomposition));
    results.insert("mode".into(), json!("decompose"));
    results.insert("atom_count".into(), json!(decomposition.atoms.len()));
    results.insert("ratio".into(), json!(decomposition.ratio()));
    results.insert("round_trip_exact".into(), json!(round_trip_exact));
    Ok((Value::Object(results), violations))
}

fn atoms_corpus(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    let mut rng = rng_from_seed(config.seed);
    let mut violations = Vec::new();
    let mut grid_trials = 0usize;
    let mut max_ratio: Option<f64> = None;
    let mut max_atom_count = 0usize;
    for trial in 0..config.trials {
        let grid = trial % 2 == 0;
        let g = if grid {
            grid_trials += 1;
            random_grid_sequence(&mut rng, config.depth, 0.55)
        } else {
            random_sequence(&mut rng, config.depth, 0.55)
        };
        let decomposition = decompose_greedy(&g);
        let back = synthesize(&decomposition.atoms, g.depth().unwrap_or(0));
        if back != g {
            violations.push(Violation::new(
                "decomposition resynthesizes exactly",
                format!("trial {trial}: resynthesized sequence differs"),
                io::sequence_to_value(&g),
            ));
        }
        // Weights on the 1/1024 grid sum exactly, so the bound is strict
        // float `≤` there.
        if grid && decomposition.norm > decomposition.weight_sum {
            violations.push(Violation::new(
                "total weight dominates the norm",
                format!(
                    "trial {trial}: norm {} vs total weight {}",
                    decomposition.norm, decomposition.weight_sum
                ),
                io::sequence_to_value(&g),
            ));
        }
        if let Some(ratio) = decomposition.ratio() {
            max_ratio = Some(max_ratio.map_or(ratio, |m| m.max(ratio)));
        }
        max_atom_count = max_atom_count.max(decomposition.atoms.len());
    }
    let results = json!({
        "trials": config.trials,
        "grid_trials": grid_trials,
        "depth": config.depth,
        "max_ratio": max_ratio,
        "max_atom_count": max_atom_count,
    });
    Ok((results, violations))
}

// -------------------------------------------------------------- orlicz --

fn young_key(phi: YoungFunction) -> String {
    match to_value(&phi) {
        Value::String(s) => s,
        _ => unreachable!("young functions serialize as strings"),
    }
}

fn luxemburg_checks(
    f: &StepFunction,
    label: &str,
    violations: &mut Vec<Violation>,
) -> Map<String, Value> {
    let mut map = Map::new();
    for phi in YoungFunction::ALL {
        let gauge = luxemburg_norm(f, phi);
        if gauge > 0.0 {
            if orlicz_integral(f, phi, gauge) > 1.0 + TOL_EXTREMIZER {
                violations.push(Violation::new(
                    "luxemburg gauge is feasible",
                    format!("{label}, {}: integral above one at the gauge", young_key(phi)),
                    to_value(f),
                ));
            }
            if orlicz_integral(f, phi, gauge * (1.0 - 1e-6)) <= 1.0 {
                violations.push(Violation::new(
                    "luxemburg gauge is minimal",
                    format!("{label}, {}: integral feasible below the gauge", young_key(phi)),
                    to_value(f),
                ));
            }
        }
        map.insert(young_key(phi), json!(gauge));
    }
    map
}

fn run_orlicz(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    let mut violations = Vec::new();
    for phi in YoungFunction::ALL {
        if let Err(e) = young_axiom_check(phi) {
            violations.push(Violation::new("young function axioms", e.to_string(), to_value(&phi)));
        }
    }
    let results = match &config.input {
        Some(path) => {
            let f = io::read_step(Path::new(path))?;
            let gauges = luxemburg_checks(&f, "input", &mut violations);
            let embedding = embedding_checks(&f);
            json!({"luxemburg": gauges, "embedding": embedding})
        }
        None => {
            if config.depth > MAX_STEP_DEPTH {
                return Err(Error::Input(format!(
                    "step depth {} exceeds {MAX_STEP_DEPTH}",
                    config.depth
                )));
            }
            let mut rng = rng_from_seed(config.seed);
            let mut max_ratio: Option<f64> = None;
            let mut min_exp_constant: Option<f64> = None;
            for trial in 0..config.trials {
                let f = random_step_function(&mut rng, config.depth);
                luxemburg_checks(&f, &format!("trial {trial}"), &mut violations);
                let embedding = embedding_checks(&f);
                if let Some(ratio) = embedding.ratio {
                    if !ratio.is_finite() {
                        violations.push(Violation::new(
                            "embedding ratio is finite",
                            format!("trial {trial}: ratio {ratio}"),
                            to_value(&f),
                        ));
                    } else {
                        max_ratio = Some(max_ratio.map_or(ratio, |m| m.max(ratio)));
                    }
                }
                if let Some(c) = embedding.exp_constant {
                    if !(c > 0.0) {
                        violations.push(Violation::new(
                            "exponential constant is positive",
                            format!("trial {trial}: constant {c}"),
                            to_value(&f),
                        ));
                    }
                    min_exp_constant = Some(min_exp_constant.map_or(c, |m| m.min(c)));
                }
            }
            json!({
                "trials": config.trials,
                "depth": config.depth,
                "max_embedding_ratio": max_ratio,
                "min_exp_constant": min_exp_constant,
            })
        }
    };
    Ok((results, violations))
}

// ------------------------------------------------------------- overlap --

fn coloring_checks(family: &BallFamily, label: &str, violations: &mut Vec<Violation>) -> Value {
    let coloring = color_family(family);
    if !is_proper(family, &coloring.colors) {
        violations.push(Violation::new(
            "coloring is proper",
            format!("{label}: intersecting balls share a color"),
            to_value(family.balls.as_slice()),
        ));
    }
    if coloring.color_count > coloring.max_back_degree + 1 {
        violations.push(Violation::new(
            "greedy color count bounded by back degree plus one",
            format!(
                "{label}: {} colors, back degree {}",
                coloring.color_count, coloring.max_back_degree
            ),
            to_value(family.balls.as_slice()),
        ));
    }
    if let Some(exact) = coloring.chromatic_exact {
        if exact > coloring.color_count {
            violations.push(Violation::new(
                "chromatic number bounded by the greedy count",
                format!("{label}: exact {exact} vs greedy {}", coloring.color_count),
                to_value(family.balls.as_slice()),
            ));
        }
    }
    to_value(&coloring)
}

fn overlap_input(config: &ExperimentConfig, path: &Path) -> Result<(Value, Vec<Violation>)> {
    let family = io::read_family(path)?;
    let weights = family.weights_or_ones();
    let ones = vec![1.0; family.len()];
    let mut violations = Vec::new();
    let overlap = total_overlap(&family);
    let ess_sup = match ess_sup_overlap(&family) {
        Ok(value) => {
            if value > overlap.count {
                violations.push(Violation::new(
                    "essential overlap bounded by the pointwise maximum",
                    format!("essential {value} vs pointwise {}", overlap.count),
                    to_value(family.balls.as_slice()),
                ));
            }
            json!(value)
        }
        Err(Error::Input(_)) => Value::Null,
        Err(e) => return Err(e),
    };
    let coloring = coloring_checks(&family, "input", &mut violations);
    let s1 = s1_discrete_norm(&family, &weights, config.mwis_limit)?;
    for (a, &i) in s1.witness.iter().enumerate() {
        for &j in s1.witness.iter().skip(a + 1) {
            if balls_intersect(&family.body, &family.balls[i], &family.balls[j]) {
                violations.push(Violation::new(
                    "independent witness is pairwise disjoint",
                    format!("balls {i} and {j} intersect"),
                    to_value(family.balls.as_slice()),
                ));
            }
        }
    }
    let t1 = t1_discrete_norm(&family, &ones)?;
    let duality = discrete_duality_check(&family, &weights, &ones, config.mwis_limit)?;
    let vitali = vitali_select(&family);
    if !vitali.cover_ok {
        violations.push(Violation::new(
            "dilated kept balls cover the family",
            format!("uncovered members {:?}", vitali.cover_failures),
            to_value(family.balls.as_slice()),
        ));
    }
    let piercing =
        if family.is_empty() { Value::Null } else { to_value(&piercing_heuristic(&family)?) };
    let results = json!({
        "balls": family.len(),
        "total_overlap": overlap,
        "ess_sup": ess_sup,
        "coloring": coloring,
        "s1": s1,
        "t1": t1,
        "duality": duality,
        "vitali": vitali,
        "piercing": piercing,
    });
    Ok((results, violations))
}

fn overlap_corpus(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    let mut rng = rng_from_seed(config.seed);
    let mut violations = Vec::new();
    let mut max_color_ratio = 0.0f64;
    let mut max_duality_ratio: Option<f64> = None;
    for trial in 0..config.trials {
        let dim = 1 + trial % 2;
        let family = random_family(&mut rng, dim, NormKind::Linf, 10);
        let f = random_weights(&mut rng, family.len());
        let g = random_weights(&mut rng, family.len());
        coloring_checks(&family, &format!("trial {trial}"), &mut violations);
        let coloring = color_family(&family);
        let overlap = total_overlap(&family);
        let color_ratio = coloring.color_count as f64 / (overlap.count as f64 + 1.0);
        max_color_ratio = max_color_ratio.max(color_ratio);
        let duality = discrete_duality_check(&family, &f, &g, config.mwis_limit)?;
        if let Some(ratio) = duality.ratio {
            if !ratio.is_finite() {
                violations.push(Violation::new(
                    "duality ratio is finite",
                    format!("trial {trial}: ratio {ratio}"),
                    to_value(family.balls.as_slice()),
                ));
            } else {
                max_duality_ratio = Some(max_duality_ratio.map_or(ratio, |m| m.max(ratio)));
            }
        }
    }
    let results = json!({
        "families": config.trials,
        "max_color_ratio": max_color_ratio,
        "max_duality_ratio": max_duality_ratio,
    });
    Ok((results, violations))
}

fn run_overlap(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    match &config.input {
        Some(path) => overlap_input(config, Path::new(path)),
        None => overlap_corpus(config),
    }
}

// ------------------------------------------------------------ weaktype --

/// Five evenly spaced thresholds below the largest ball ratio
/// `|f_B|/|B|^{1/p}`, or none when every weight vanishes.
fn lambda_grid(family: &BallFamily, weights: &[f64], p: f64) -> Vec<f64> {
    let max_ratio = family
        .balls
        .iter()
        .zip(weights)
        .map(|(ball, w)| w.abs() / ball.volume(&family.body).powf(1.0 / p))
        .fold(0.0f64, f64::max);
    if max_ratio <= 0.0 {
        return Vec::new();
    }
    (1..=5).map(|j| max_ratio * j as f64 / 6.0).collect()
}

fn run_weaktype(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    let mut violations = Vec::new();
    let results = match &config.input {
        Some(path) => {
            let family = io::read_family(Path::new(path))?;
            let weights = family.weights_or_ones();
            let p = match config.p {
                Exponent::Finite(v) => v,
                Exponent::Infinite => {
                    return Err(Error::Input("weak-type exponent must be finite".to_string()))
                }
            };
            let mut reports = Vec::new();
            for lambda in lambda_grid(&family, &weights, p) {
                let report = maximal_weak_type(&family, &weights, p, lambda, config.mwis_limit)?;
                if !report.holds {
                    violations.push(Violation::new(
                        "maximal operator weak type bound",
                        format!("lambda {lambda}: lhs {} vs rhs {}", report.lhs, report.rhs),
                        to_value(family.balls.as_slice()),
                    ));
                }
                reports.push(to_value(&report));
            }
            json!({"balls": family.len(), "p": p, "reports": reports})
        }
        None => {
            let mut rng = rng_from_seed(config.seed);
            let mut checks = 0usize;
            let mut max_ratio: Option<f64> = None;
            for trial in 0..config.trials {
                let dim = 1 + trial % 2;
                let family = random_family(&mut rng, dim, NormKind::Linf, 10);
                let weights = random_weights(&mut rng, family.len());
                for p in [1.0, 2.0] {
                    for lambda in lambda_grid(&family, &weights, p) {
                        let report =
                            maximal_weak_type(&family, &weights, p, lambda, config.mwis_limit)?;
                        checks += 1;
                        if report.rhs > 0.0 {
                            let ratio = report.lhs / report.rhs;
                            max_ratio = Some(max_ratio.map_or(ratio, |m| m.max(ratio)));
                        }
                        if !report.holds {
                            violations.push(Violation::new(
                                "maximal operator weak type bound",
                                format!(
                                    "trial {trial}, p = {p}, lambda {lambda}: lhs {} vs rhs {}",
                                    report.lhs, report.rhs
                                ),
                                json!({
                                    "balls": &family.balls,
                                    "weights": &weights,
                                }),
                            ));
                        }
                    }
                }
            }
            json!({"families": config.trials, "checks": checks, "max_lhs_over_rhs": max_ratio})
        }
    };
    Ok((results, violations))
}

// ----------------------------------------------------------------- net --

fn run_net(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    let _ = config;
    let mut violations = Vec::new();
    let mut entries = Vec::new();
    let mut exceedances_3n = 0usize;
    for norm in [NormKind::Linf, NormKind::L2, NormKind::L1] {
        for dim in [1usize, 2] {
            for a in [0.5f64, 1.0, 2.0] {
                let body = ConvexBody::new(dim, norm)?;
                let report = separated_net(&body, a, NET_RESOLUTION_DIVISOR)?;
                let label = format!("norm {}, dim {dim}, a = {a}", norm_label(norm));
                if !report.separation_ok {
                    violations.push(Violation::new(
                        "net points are half-scale separated",
                        label.clone(),
                        to_value(&report.points),
                    ));
                }
                if !report.cover_ok {
                    violations.push(Violation::new(
                        "net covers the truncated cone",
                        format!("{label}: {} sampled failures", report.cover_failures.len()),
                        to_value(&report.cover_failures),
                    ));
                }
                if !report.within_5n {
                    violations.push(Violation::new(
                        "net cardinality within the packing cap",
                        format!("{label}: {} points vs 5^{dim}", report.cardinality),
                        to_value(&report.points),
                    ));
                }
                if !report.within_3n {
                    exceedances_3n += 1;
                }
                entries.push(json!({
                    "norm": norm,
                    "dim": dim,
                    "a": a,
                    "cardinality": report.cardinality,
                    "bound_3n": report.bound_3n,
                    "bound_5n": report.bound_5n,
                    "within_3n": report.within_3n,
                    "cover_ok": report.cover_ok,
                }));
            }
        }
    }
    let results = json!({"nets": entries, "exceedances_3n": exceedances_3n});
    Ok((results, violations))
}

fn norm_label(norm: NormKind) -> String {
    match to_value(&norm) {
        Value::String(s) => s,
        _ => unreachable!("norm kinds serialize as strings"),
    }
}

// ------------------------------------------------------------ selftest --

fn run_selftest(config: &ExperimentConfig) -> Result<(Value, Vec<Violation>)> {
    let sections: [(&str, Runner, usize, u32); 9] = [
        ("norm", run_norm, 60, 4),
        ("jnp", run_jnp, 30, 5),
        ("duality", run_duality, 20, 4),
        ("haar", run_haar, 40, 6),
        ("atoms", run_atoms, 80, 4),
        ("orlicz", run_orlicz, 30, 6),
        ("overlap", run_overlap, 60, 2),
        ("weaktype", run_weaktype, 40, 2),
        ("net", run_net, 1, 1),
    ];
    let mut all = Vec::new();
    let mut map = Map::new();
    for (offset, (name, runner, trials, depth)) in sections.iter().enumerate() {
        let section = ExperimentConfig {
            seed: config.seed.wrapping_add(offset as u64 + 1),
            trials: *trials,
            depth: *depth,
            input: None,
            ..config.clone()
        };
        let (results, violations) = runner(&section)?;
        map.insert((*name).to_string(), results);
        for v in violations {
            all.push(Violation::new(
                &format!("{name}: {}", v.property),
                v.detail,
                v.counterexample,
            ));
        }
    }
    Ok((json!({"sections": map}), all))
}
