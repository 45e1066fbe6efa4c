//! End-to-end acceptance suite.  Each test checks one published guarantee
//! of the library at desk scale and prints a single
//! `acceptance NN <name>: PASS|FAIL` line (visible with `--nocapture`)
//! before asserting.

use std::process::Command;

use rand::Rng;

use tentnorm::atoms::{decompose_greedy, synthesize, ChainAtom, DyadicPoint};
use tentnorm::corpus::{
    random_family, random_grid_sequence, random_sequence, random_step_function, random_weights,
    rng_from_seed,
};
use tentnorm::geometry::{
    color_family, discrete_duality_check, is_proper, maximal_weak_type, separated_net, ConvexBody,
    NormKind,
};
use tentnorm::haar::{
    haar_multiplier_norm, haar_osc_identity_check, haar_transform, multiplier_norm_oracle,
};
use tentnorm::report::EXPONENT_GRID;
use tentnorm::tol::{DEFAULT_MWIS_LIMIT, NET_RESOLUTION_DIVISOR, TOL_EXACT, TOL_EXTREMIZER};
use tentnorm::xpq::{
    brute_force_xp_infty, dual_extremizer, evaluate_witness, holder_check, max_cone_norm, pairing,
    xpq_norm,
};
use tentnorm::{DyadicIndex, Exponent};

/// Prints the per-criterion verdict line, then fails the test on violations.
fn verdict(number: u32, name: &str, detail: &str, failures: &[String]) {
    let suffix = if detail.is_empty() { String::new() } else { format!(" ({detail})") };
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("acceptance {number:02} {name}: {status}{suffix}");
    assert!(failures.is_empty(), "{name}: {} failures, first: {}", failures.len(), failures[0]);
}

fn finite_grid() -> [Exponent; 4] {
    [Exponent::ONE, Exponent::Finite(1.5), Exponent::TWO, Exponent::Finite(3.0)]
}

#[test]
fn oracle_equivalence() {
    let mut rng = rng_from_seed(0xACC + 1);
    let mut failures = Vec::new();
    for trial in 0..500u32 {
        let depth = trial % 5;
        let g = random_sequence(&mut rng, depth, 0.6);
        for p in finite_grid() {
            let fast = xpq_norm(&g, p, Exponent::Infinite);
            let oracle = brute_force_xp_infty(&g, p, 4).expect("depth is within the oracle limit");
            let scale = fast.value.max(1.0);
            if (fast.value - oracle.value).abs() > TOL_EXACT * scale {
                failures.push(format!(
                    "trial {trial} p {p}: reduction {} vs oracle {}",
                    fast.value, oracle.value
                ));
            }
            for witness in [&fast.witness, &oracle.witness] {
                let witness = witness.as_deref().expect("finite p with q = ∞ yields a witness");
                let attained = evaluate_witness(&g, p, Exponent::Infinite, witness);
                if (attained - fast.value).abs() > TOL_EXACT * scale {
                    failures.push(format!(
                        "trial {trial} p {p}: witness evaluates to {attained}, norm {}",
                        fast.value
                    ));
                }
            }
        }
    }
    verdict(1, "oracle_equivalence", "", &failures);
}

#[test]
fn cone_formula_equivalence() {
    let mut rng = rng_from_seed(0xACC + 2);
    let mut failures = Vec::new();
    for trial in 0..500u32 {
        let g = random_sequence(&mut rng, 4 + trial % 3, 0.6);
        for q in [Exponent::ONE, Exponent::TWO, Exponent::Infinite] {
            let tree = xpq_norm(&g, Exponent::Infinite, q).value;
            let cone = max_cone_norm(&g, q);
            if tree.to_bits() != cone.to_bits() {
                failures.push(format!("trial {trial} q {q}: tree {tree} vs cone {cone}"));
            }
        }
    }
    verdict(2, "cone_formula_equivalence", "", &failures);
}

#[test]
fn pairing_bounded_by_conjugate_norms() {
    let mut rng = rng_from_seed(0xACC + 3);
    let mut failures = Vec::new();
    for trial in 0..1000u32 {
        let f = random_sequence(&mut rng, 4, 0.6);
        let g = random_sequence(&mut rng, 4, 0.6);
        for p in EXPONENT_GRID {
            for q in EXPONENT_GRID {
                let holder = holder_check(&f, &g, p, q);
                if !holder.holds(TOL_EXACT * holder.bound) {
                    failures.push(format!(
                        "trial {trial} p {p} q {q}: pairing {} exceeds bound {}",
                        holder.pairing, holder.bound
                    ));
                }
            }
        }
    }
    verdict(3, "pairing_bounded_by_conjugate_norms", "", &failures);
}

#[test]
fn extremizer_attains_dual_norm() {
    let mut rng = rng_from_seed(0xACC + 4);
    let mut failures = Vec::new();
    for trial in 0..1000u32 {
        let g = random_sequence(&mut rng, 4, 0.6);
        for p in EXPONENT_GRID {
            for q in EXPONENT_GRID {
                let f = dual_extremizer(&g, p, q);
                let f_norm = xpq_norm(&f, p, q).value;
                if f_norm > 1.0 + TOL_EXACT {
                    failures.push(format!("trial {trial} p {p} q {q}: extremizer norm {f_norm}"));
                }
                let conjugate = xpq_norm(&g, p.conjugate(), q.conjugate()).value;
                let attained = pairing(&f, &g);
                if attained < conjugate - TOL_EXTREMIZER {
                    failures.push(format!(
                        "trial {trial} p {p} q {q}: pairing {attained} vs dual norm {conjugate}"
                    ));
                }
            }
        }
    }
    verdict(4, "extremizer_attains_dual_norm", "", &failures);
}

#[test]
fn haar_identity_and_parseval() {
    let mut rng = rng_from_seed(0xACC + 5);
    let mut failures = Vec::new();
    for trial in 0..500u32 {
        let f = random_step_function(&mut rng, 8);
        for level in 0..f.depth() {
            for position in 0..(1u64 << level) {
                let interval = DyadicIndex::new(level, position).expect("level is within range");
                let identity =
                    haar_osc_identity_check(&f, interval).expect("level is above the cells");
                if !identity.holds(TOL_EXACT) {
                    failures
                        .push(format!("trial {trial} {interval}: residual {}", identity.residual));
                }
            }
        }
        let expansion = haar_transform(&f);
        let energy = expansion.mean * expansion.mean
            + expansion.coefficients.iter().map(|(i, v)| v * v * i.length()).sum::<f64>();
        let square = f.square_integral();
        if (energy - square).abs() > TOL_EXACT * square.max(1.0) {
            failures.push(format!("trial {trial}: coefficient energy {energy} vs ∫f² {square}"));
        }
    }
    verdict(5, "haar_identity_and_parseval", "", &failures);
}

#[test]
fn multiplier_norm_matches_oracle() {
    let mut rng = rng_from_seed(0xACC + 6);
    let mut failures = Vec::new();
    for trial in 0..200u32 {
        let a = random_sequence(&mut rng, 3, 0.6);
        let report = haar_multiplier_norm(&a);
        let oracle = multiplier_norm_oracle(&a, 3).expect("depth is within the oracle limit");
        let scale = report.norm.max(1.0);
        if (report.norm - oracle).abs() > TOL_EXTREMIZER * scale {
            failures.push(format!("trial {trial}: norm {} vs oracle {oracle}", report.norm));
        }
        match report.rayleigh {
            Some(rayleigh) => {
                if (rayleigh - report.norm).abs() > TOL_EXTREMIZER * scale {
                    failures.push(format!(
                        "trial {trial}: extremal attains {rayleigh}, norm {}",
                        report.norm
                    ));
                }
            }
            None => {
                if report.norm != 0.0 {
                    failures
                        .push(format!("trial {trial}: no extremal despite norm {}", report.norm));
                }
            }
        }
    }
    verdict(6, "multiplier_norm_matches_oracle", "", &failures);
}

#[test]
fn maximal_operator_weak_type() {
    let mut rng = rng_from_seed(0xACC + 7);
    let mut failures = Vec::new();
    for dim in [1usize, 2] {
        for trial in 0..200u32 {
            let family = random_family(&mut rng, dim, NormKind::Linf, 10);
            let weights = random_weights(&mut rng, family.len());
            for p in [1.0f64, 2.0] {
                let peak = family
                    .balls
                    .iter()
                    .zip(&weights)
                    .map(|(ball, w)| w.abs() / ball.volume(&family.body).powf(1.0 / p))
                    .fold(0.0f64, f64::max);
                if peak <= 0.0 {
                    continue;
                }
                for j in 1..=5 {
                    let lambda = peak * j as f64 / 6.0;
                    let report =
                        maximal_weak_type(&family, &weights, p, lambda, DEFAULT_MWIS_LIMIT)
                            .expect("box family within the search limit");
                    if !report.holds {
                        failures.push(format!(
                            "dim {dim} trial {trial} p {p} λ {lambda}: {} > {}",
                            report.lhs, report.rhs
                        ));
                    }
                }
            }
        }
    }
    verdict(7, "maximal_operator_weak_type", "", &failures);
}

/// Corpus statistics for one seed: max colors/(overlap+1) and max discrete
/// duality ratio over 500 box families.
fn overlap_statistics(seed: u64, failures: &mut Vec<String>) -> (f64, f64) {
    let mut rng = rng_from_seed(seed);
    let mut color_ratio = 0.0f64;
    let mut duality_ratio = 0.0f64;
    for trial in 0..500usize {
        let family = random_family(&mut rng, 1 + trial % 2, NormKind::Linf, 10);
        let coloring = color_family(&family);
        if !is_proper(&family, &coloring.colors) {
            failures.push(format!("seed {seed} trial {trial}: coloring is not proper"));
        }
        let overlap = tentnorm::geometry::total_overlap(&family);
        color_ratio = color_ratio.max(coloring.color_count as f64 / (overlap.count + 1) as f64);
        let f = random_weights(&mut rng, family.len());
        let g = random_weights(&mut rng, family.len());
        let duality = discrete_duality_check(&family, &f, &g, DEFAULT_MWIS_LIMIT)
            .expect("family is within the search limit");
        if let Some(ratio) = duality.ratio {
            if !ratio.is_finite() {
                failures.push(format!("seed {seed} trial {trial}: duality ratio {ratio}"));
            }
            duality_ratio = duality_ratio.max(ratio);
        }
    }
    (color_ratio, duality_ratio)
}

#[test]
fn coloring_proper_and_duality_ratio_stable() {
    let mut failures = Vec::new();
    let (color_a, duality_a) = overlap_statistics(1001, &mut failures);
    let (color_b, duality_b) = overlap_statistics(2002, &mut failures);
    let stable = |a: f64, b: f64| (a - b).abs() <= 0.2 * a.max(b);
    if !stable(color_a, color_b) {
        failures.push(format!("color ratio drifts under reseeding: {color_a} vs {color_b}"));
    }
    if !stable(duality_a, duality_b) {
        failures.push(format!("duality ratio drifts under reseeding: {duality_a} vs {duality_b}"));
    }
    let detail = format!(
        "max colors/(O+1) {color_a:.3}/{color_b:.3}, max duality ratio {duality_a:.3}/{duality_b:.3}"
    );
    verdict(8, "coloring_proper_and_duality_ratio_stable", &detail, &failures);
}

#[test]
fn atom_synthesis_bound_and_round_trip() {
    let mut rng = rng_from_seed(0xACC + 9);
    let mut failures = Vec::new();
    for trial in 0..300u32 {
        // Weights on the 1/1024 grid sum exactly, so the synthesis bound is
        // a strict float `≤` for these atoms.
        let atom_count = rng.gen_range(1..=6);
        let atoms: Vec<ChainAtom> = (0..atom_count)
            .map(|_| {
                let point = DyadicPoint::new(rng.gen_range(0..16), 4).expect("numerator < 2^4");
                let signs = (0..=4u32)
                    .map(|level| {
                        let interval =
                            point.chain_interval(level).expect("level is within the chain");
                        (interval, if rng.gen_bool(0.5) { 1i8 } else { -1 })
                    })
                    .collect();
                let weight = rng.gen_range(1..=2048) as f64 / 1024.0;
                ChainAtom::new(point, weight, signs).expect("signs follow the chain")
            })
            .collect();
        let weight_sum: f64 = atoms.iter().map(ChainAtom::weight).sum();
        let synthesized = synthesize(&atoms, 4);
        let norm = xpq_norm(&synthesized, Exponent::ONE, Exponent::Infinite).value;
        if norm > weight_sum {
            failures.push(format!("trial {trial}: norm {norm} exceeds weight sum {weight_sum}"));
        }

        let g = if trial % 2 == 0 {
            random_grid_sequence(&mut rng, 4, 0.6)
        } else {
            random_sequence(&mut rng, 4, 0.6)
        };
        let decomposition = decompose_greedy(&g);
        let depth = g.depth().unwrap_or(0);
        if synthesize(&decomposition.atoms, depth) != g {
            failures.push(format!("trial {trial}: decompose→synthesize is not the identity"));
        }
        let bound = if trial % 2 == 0 {
            decomposition.norm <= decomposition.weight_sum
        } else {
            decomposition.norm <= decomposition.weight_sum * (1.0 + TOL_EXACT)
        };
        if !bound {
            failures.push(format!(
                "trial {trial}: norm {} exceeds decomposition weight sum {}",
                decomposition.norm, decomposition.weight_sum
            ));
        }
    }
    verdict(9, "atom_synthesis_bound_and_round_trip", "", &failures);
}

#[test]
fn cone_point_net_covering() {
    let mut failures = Vec::new();
    let mut exceedances = Vec::new();
    let mut cases = 0usize;
    for kind in [NormKind::Linf, NormKind::L2, NormKind::L1] {
        for dim in [1usize, 2] {
            for a in [0.5f64, 1.0, 2.0] {
                cases += 1;
                let body = ConvexBody::new(dim, kind).expect("dimension is supported");
                let net = separated_net(&body, a, NET_RESOLUTION_DIVISOR)
                    .expect("scale and divisor are valid");
                let label = format!("{kind:?} n={dim} a={a}");
                if !net.cover_ok {
                    failures.push(format!(
                        "{label}: {} uncovered cone points",
                        net.cover_failures.len()
                    ));
                }
                if !net.separation_ok {
                    failures.push(format!("{label}: net is not a/2-separated"));
                }
                if !net.within_5n {
                    failures.push(format!(
                        "{label}: cardinality {} exceeds 5^n = {}",
                        net.cardinality, net.bound_5n
                    ));
                }
                if !net.within_3n {
                    exceedances.push(format!("{label}: {} > {}", net.cardinality, net.bound_3n));
                }
            }
        }
    }
    let detail = if exceedances.is_empty() {
        format!("all {cases} nets within 3^n")
    } else {
        format!("3^n exceeded in {}/{cases} cases: {}", exceedances.len(), exceedances.join("; "))
    };
    verdict(10, "cone_point_net_covering", &detail, &failures);
}

#[test]
fn selftest_reports_are_byte_identical() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_tentnorm"))
            .args(["selftest", "--seed", "424242"])
            .output()
            .expect("selftest binary runs")
    };
    let first = run();
    let second = run();
    let mut failures = Vec::new();
    if !first.status.success() {
        failures.push(format!(
            "selftest exited with {:?}: {}",
            first.status.code(),
            String::from_utf8_lossy(&first.stderr)
        ));
    }
    if first.stdout.is_empty() {
        failures.push("selftest produced no output".to_string());
    }
    if first.stdout != second.stdout {
        failures.push("two runs with the same seed differ".to_string());
    }
    verdict(11, "selftest_reports_are_byte_identical", "", &failures);
}
