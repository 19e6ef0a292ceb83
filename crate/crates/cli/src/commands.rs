//! Dispatch from a config to the owning module.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use spectra_core::exact::AlgebraicScalar;
use spectra_core::faces::{enumerate_faces, face_of, verify_all_faces};
use spectra_core::linalg::SubspaceModel;
use spectra_core::multiscale::{covering_number, flattening_sweep, multiplicative_energy, sample_float_walk, PointCloud};
use spectra_core::proxdecay::{decay_estimate, proximality_check, sanov_ensemble, Hyperplane, LocalField};
use spectra_core::rootsys::{build_root_system, classify_highest_root, weyl_dimension, HighestRootClass, RootSystemSpec, Weight};
use spectra_core::stabcert::{certify_common_invariant_subspace, height_ledger, is_symmetric_set, word_ball, DEFAULT_HEIGHT_BUDGET};
use spectra_core::su2harm::{homomorphism_defect, parseval_check, spectral_radius_estimate, FourierSpectrum, SpinLevel, UnitQuaternion};
use spectra_core::walkdio::{block_rng, diophantine_profile, entry_to_json, kesten_baseline, FamilyOptions};
use spectra_core::wedge::{chevalley_basis, generate_subrep, is_closed, xi_vector};
use spectra_core::Rational;

use crate::config::*;
use crate::input::{load_ensemble, load_generators, load_measure, EnsembleSpec};
use crate::report::{Report, Results, SCHEMA_VERSION, TOOL_VERSION};
use crate::CliError;

type Outcome = Result<(Results, Vec<String>), CliError>;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

fn fw(w: &Weight) -> Vec<String> {
    w.fw_coords.iter().map(Rational::to_string).collect()
}

/// Runs the experiment. With `timings` the report carries wall-clock
/// seconds, which makes it non-reproducible byte for byte.
pub fn run(config: &ExperimentConfig, timings: bool) -> Result<Report, CliError> {
    let start = Instant::now();
    let seed = config.seed;
    let (results, warnings) = match &config.command {
        Command::FacesVerify(p) => faces_verify(p),
        Command::TildeClassify(p) => tilde_classify(p),
        Command::WedgeBuild(p) => wedge_build(p),
        Command::HarmGap(p) => harm_gap(p),
        Command::Parseval(p) => parseval(p, seed),
        Command::DioProfile(p) => dio_profile(p, seed),
        Command::Kesten(p) => kesten(p),
        Command::Flatten(p) => flatten(p, seed),
        Command::Energy(p) => energy(p, seed),
        Command::Decay(p) => decay(p, seed),
        Command::Cert(p) => cert(p),
    }?;
    let timings = timings.then(|| BTreeMap::from([("total".to_string(), start.elapsed().as_secs_f64())]));
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool: "spectra",
        tool_version: TOOL_VERSION,
        config: config.clone(),
        seed,
        results,
        warnings,
        timings,
    })
}

fn specs_up_to(max_rank: usize, family: Option<spectra_core::rootsys::Family>) -> Vec<RootSystemSpec> {
    RootSystemSpec::all_up_to(max_rank).into_iter().filter(|s| family.is_none_or(|f| s.family == f)).collect()
}

fn faces_verify(p: &FacesParams) -> Outcome {
    let specs = specs_up_to(p.max_rank, p.family);
    let per_type: Vec<Result<Vec<Value>, CliError>> = specs
        .par_iter()
        .map(|&spec| {
            let rs = build_root_system(spec)?;
            Ok(verify_all_faces(&rs)?
                .into_iter()
                .map(|(face, data, verdict)| {
                    json!({
                        "type": spec.to_string(),
                        "support": face.support,
                        "m": data.m,
                        "omega_x": fw(&data.omega_x),
                        "intersection_size": verdict.intersection.len(),
                        "hypothesis_met": verdict.hypothesis_met,
                        "holds": verdict.holds,
                        // The lemma says nothing about faces outside its hypothesis.
                        "verdict": verdict.holds || !verdict.hypothesis_met,
                    })
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_type {
        rows.extend(r?);
    }
    let mut warnings = Vec::new();
    if specs.is_empty() {
        warnings.push("no irreducible type matches the filter".into());
    }
    let summary = json!({
        "types": specs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "faces": rows.len(),
        "hypothesis_faces": rows.iter().filter(|r| r["hypothesis_met"] == true).count(),
        "all_verdicts_true": rows.iter().all(|r| r["verdict"] == true),
    });
    Ok((Results { summary, rows }, warnings))
}

fn tilde_classify(p: &TildeParams) -> Outcome {
    let mut rows = Vec::new();
    for spec in specs_up_to(p.max_rank, None) {
        let rs = build_root_system(spec)?;
        let class = classify_highest_root(&rs)?;
        let (kind, indices) = match class {
            HighestRootClass::Fundamental { index } => ("fundamental", vec![index]),
            HighestRootClass::SumDual { omega, omega_star } => ("sum_dual", vec![omega, omega_star]),
        };
        rows.push(json!({
            "type": spec.to_string(),
            "class": kind,
            "indices": indices,
            "distinct_dual": class.has_distinct_dual(),
        }));
    }
    let distinct: Vec<&Value> = rows.iter().filter(|r| r["distinct_dual"] == true).map(|r| &r["type"]).collect();
    let summary = json!({ "types": rows.len(), "distinct_dual_types": distinct });
    Ok((Results { summary, rows }, Vec::new()))
}

fn wedge_build(p: &WedgeParams) -> Outcome {
    let spec = RootSystemSpec::new(p.family, p.rank);
    let rs = build_root_system(spec)?;
    let alg = chevalley_basis(&rs)?;
    let mut rows = Vec::new();
    for face in enumerate_faces(&rs) {
        let data = face_of(&rs, &face.canonical_x)?;
        let sub = generate_subrep(&alg, &xi_vector(&alg, &data))?;
        let expected = weyl_dimension(&rs, &data.omega_x)?.to_string();
        rows.push(json!({
            "support": face.support,
            "degree": data.m,
            "highest_weight": fw(&sub.highest_weight),
            "dim": sub.dim(),
            "weyl_dimension": expected,
            "matches": expected == sub.dim().to_string(),
            "closed": is_closed(&alg, &sub),
        }));
    }
    let summary = json!({
        "type": spec.to_string(),
        "algebra_dim": alg.dim(),
        "faces": rows.len(),
        "all_match": rows.iter().all(|r| r["matches"] == true && r["closed"] == true),
    });
    Ok((Results { summary, rows }, Vec::new()))
}

fn harm_gap(p: &HarmGapParams) -> Outcome {
    let mu = load_measure(&p.measure)?.to_float();
    let rep = spectral_radius_estimate(&mu, SpinLevel::from_j(p.jmax), p.n)?;
    let rows = rep.per_j.iter().map(to_value).collect();
    let summary = json!({ "n": rep.n, "sup": rep.sup, "sup_eigen": rep.sup_eigen });
    Ok((Results { summary, rows }, Vec::new()))
}

fn parseval(p: &ParsevalParams, seed: u64) -> Outcome {
    let j_max = SpinLevel::from_j(p.jmax);
    let mut rows = Vec::new();
    let mut worst_parseval: f64 = 0.0;
    for i in 0..p.functions {
        let spectrum = FourierSpectrum::random(&mut block_rng(seed, i as u64), j_max);
        let r = parseval_check(&spectrum)?;
        worst_parseval = worst_parseval.max(r.relative_error);
        rows.push(json!({ "check": "parseval", "index": i, "lhs": r.lhs, "rhs": r.rhs, "error": r.relative_error }));
    }
    let mut worst_hom: f64 = 0.0;
    for i in 0..p.pairs {
        // Streams disjoint from the function draws.
        let mut rng = block_rng(seed, (1 << 32) + i as u64);
        let g = UnitQuaternion::random(&mut rng);
        let h = UnitQuaternion::random(&mut rng);
        let defect = (0..=j_max.0).map(|tj| homomorphism_defect(&g, &h, SpinLevel(tj))).fold(0.0, f64::max);
        worst_hom = worst_hom.max(defect);
        rows.push(json!({ "check": "homomorphism", "index": i, "error": defect }));
    }
    let summary = json!({
        "j_max": j_max.j(),
        "max_parseval_error": worst_parseval,
        "max_homomorphism_defect": worst_hom,
    });
    Ok((Results { summary, rows }, Vec::new()))
}

fn dio_profile(p: &DioParams, seed: u64) -> Outcome {
    let mu = load_measure(&p.measure)?;
    let prof = diophantine_profile(&mu, p.c1, p.nmin, p.nmax, p.samples, seed, None, &FamilyOptions::default())?;
    let mut warnings = Vec::new();
    if prof.fit.is_none() {
        warnings.push("fewer than two leading rows have enough hits for a fit".into());
    }
    let rows = prof.rows.iter().map(to_value).collect();
    let summary = json!({
        "c1": prof.c1,
        "samples": prof.samples,
        "family": prof.family,
        "fit_window": prof.fit_window,
        "fit": prof.fit,
        "c2_hat": prof.c2_hat,
    });
    Ok((Results { summary, rows }, warnings))
}

fn kesten(p: &KestenParams) -> Outcome {
    let rep = kesten_baseline(p.generators, p.nmax)?;
    let rows = rep
        .return_probabilities
        .iter()
        .enumerate()
        .map(|(i, q)| json!({ "steps": 2 * (i + 1), "return_probability": q }))
        .collect();
    let summary = json!({
        "m": rep.m,
        "n_max": rep.n_max,
        "theory": rep.theory,
        "empirical": rep.empirical,
        "relative_error": (rep.empirical - rep.theory).abs() / rep.theory,
        "root_estimate": rep.root_estimate,
    });
    Ok((Results { summary, rows }, Vec::new()))
}

fn flatten(p: &FlattenParams, seed: u64) -> Outcome {
    let mu = load_measure(&p.measure)?.to_float();
    let deltas: Vec<f64> = p.exponents.iter().map(|&k| 2f64.powi(-k)).collect();
    let sweep = flattening_sweep(&mu, &deltas, p.c, p.samples, seed)?;
    let warnings = sweep
        .rows
        .iter()
        .filter(|r| r.under_resolved)
        .map(|r| format!("δ = {} is under-resolved at {} samples", r.delta, p.samples))
        .collect();
    let rows = sweep.rows.iter().map(to_value).collect();
    let summary = json!({ "c": sweep.c, "epsilon_hat": sweep.epsilon_hat, "fit": sweep.fit });
    Ok((Results { summary, rows }, warnings))
}

fn energy(p: &EnergyParams, seed: u64) -> Outcome {
    let mu = load_measure(&p.measure)?.to_float();
    let a = PointCloud::uniform(mu.group, sample_float_walk(&mu, p.n, p.samples, seed));
    let b = PointCloud::uniform(mu.group, sample_float_walk(&mu, p.n, p.samples, seed.wrapping_add(1)));
    let rep = multiplicative_energy(&a, &b, p.delta)?;
    let rows = [("A", &a), ("B", &b)]
        .iter()
        .map(|(name, c)| {
            let cov = covering_number(c, p.delta)?;
            Ok(json!({ "set": name, "points": c.len(), "covering_lower": cov.lower, "covering_upper": cov.upper }))
        })
        .collect::<Result<_, CliError>>()?;
    Ok((Results { summary: to_value(&rep), rows }, Vec::new()))
}

fn decay(p: &DecayParams, seed: u64) -> Outcome {
    let spec = match &p.ensemble {
        Some(path) => load_ensemble(path)?,
        None => {
            let one = Rational::from_integer(1.into());
            let zero = Rational::from_integer(0.into());
            EnsembleSpec {
                ensemble: sanov_ensemble(LocalField::Real),
                v: vec![one.clone(), zero.clone()],
                hyperplane: Hyperplane::from_basis(&[vec![one, zero]], 2)?,
            }
        }
    };
    let rep = decay_estimate(&spec.ensemble, &spec.v, &spec.hyperplane, p.epsilon, p.nmin..=p.nmax, p.samples, seed, p.exact_up_to)?;
    let mut warnings = Vec::new();
    // z-scores against the exact values; degenerate rows must agree exactly.
    let zs: Vec<Option<f64>> = rep
        .rows
        .iter()
        .map(|r| {
            r.exact.map(|q| {
                let sd = (q * (1.0 - q) / p.samples as f64).sqrt();
                if sd > 0.0 {
                    (r.probability - q) / sd
                } else if (r.probability - q).abs() < 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
        })
        .collect();
    if p.exact_up_to.is_some_and(|m| m < p.nmax) {
        warnings.push("exact enumeration covers only part of the n range".into());
    }
    let max_z = zs.iter().flatten().map(|z| z.abs()).fold(None, |m: Option<f64>, z| Some(m.map_or(z, |m| m.max(z))));
    let proximality = if p.proximality_samples > 0 {
        Some(proximality_check(&spec.ensemble, 1..=p.nmax.max(2), p.proximality_samples, seed)?)
    } else {
        None
    };
    let rows = rep
        .rows
        .iter()
        .zip(&zs)
        .map(|(r, z)| {
            let mut v = to_value(r);
            v["z"] = to_value(z);
            v
        })
        .collect();
    let summary = json!({
        "field": spec.ensemble.field,
        "epsilon": rep.epsilon,
        "samples": rep.samples,
        "kappa_hat": rep.kappa_hat,
        "fit": rep.fit,
        "max_abs_z": max_z,
        "proximality": proximality,
    });
    Ok((Results { summary, rows }, warnings))
}

fn entries(v: &[AlgebraicScalar]) -> Vec<Value> {
    v.iter().map(entry_to_json).collect()
}

fn cert(p: &CertParams) -> Outcome {
    let spec = load_generators(&p.generators)?;
    let mut warnings = Vec::new();
    if !is_symmetric_set(&spec.generators) {
        warnings.push("generating set is not closed under inverses".into());
    }
    let l0 = SubspaceModel::from_basis(spec.subspace.clone()).ok_or_else(|| CliError::InvalidInput {
        path: p.generators.clone(),
        detail: "/subspace: vectors are linearly dependent".into(),
    })?;
    let ball = word_ball(&spec.generators, p.radius, DEFAULT_HEIGHT_BUDGET)?;
    let cert = certify_common_invariant_subspace(&ball, &l0, p.threshold)?;
    let mut rows = vec![match &cert {
        Some(c) => json!({
            "kind": "certificate",
            "found": true,
            "sign": c.sign,
            "near_set": c.near_set,
            "degenerate": c.degenerate,
            "method": c.method,
            "verified": c.verified,
            "basis": c.subspace.basis.iter().map(|b| entries(b)).collect::<Vec<_>>(),
            "plucker": entries(&c.subspace.plucker),
        }),
        None => json!({ "kind": "certificate", "found": false }),
    }];
    if cert.is_none() {
        warnings.push("no common invariant subspace found on the near set".into());
    }
    if cert.as_ref().is_some_and(|c| c.degenerate) {
        warnings.push("near set is trivial; the certificate is vacuous".into());
    }
    let mut summary = json!({
        "ball_size": ball.len(),
        "radius": p.radius,
        "found": cert.is_some(),
        "verified": cert.as_ref().is_some_and(|c| c.verified),
    });
    if let Some(n) = p.ledger_nmax {
        let ledger = height_ledger(&spec.generators, l0.dim(), n)?;
        summary["ledger"] = json!({
            "q": ledger.q,
            "integrality_factor": ledger.integrality_factor,
            "integral": ledger.integral(),
            "within_bound": ledger.within_bound(),
            "submultiplicative": ledger.submultiplicative,
        });
        rows.extend(ledger.rows.iter().map(|r| {
            let mut v = to_value(r);
            v["kind"] = json!("ledger");
            v
        }));
    }
    Ok((Results { summary, rows }, warnings))
}
