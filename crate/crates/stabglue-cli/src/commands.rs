use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use stabglue::doublecover::{
    build_stability, check_u_bar, classify_in_u, theta_map, GlobalObject, GlobalStability,
    GlobalStabilityJson, GlobalSummand, PartitionData, ThetaPointJson,
};
use stabglue::exact::{format_q, parse_q, QComplex, Q};
use stabglue::glue::{
    check_parameter, exc_p1_check, find_gluing_parameter, glue_stabilities, Decomposition,
    ExtPattern, StabilitySummary,
};
use stabglue::klattice::{CentralCharge, ChargeFile, Geometry, KClass};
use stabglue::local_stab::{uniformize, uniformize_derivative, Cplx};
use stabglue::par::{chamber_grid, Exec};
use stabglue::slicing::{num_lem_bound, HnResultJson};
use stabglue::Error;

use crate::render::{certificate_json, chambers_csv, chambers_svg, proof_name, to_json};
use crate::{Cli, CliError, Command};

/// Text to emit and the failure, if any; a failed command may still produce a report.
pub struct Outcome {
    pub output: Option<String>,
    pub error: Option<CliError>,
}

impl Outcome {
    fn done(output: String) -> Self {
        Self {
            output: Some(output),
            error: None,
        }
    }

    fn failed(error: CliError) -> Self {
        Self {
            output: None,
            error: Some(error),
        }
    }
}

type CmdResult = Result<Outcome, CliError>;

pub fn dispatch(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Classify { charge } => classify(charge),
        Command::Build { charge, partition } => build(charge, partition),
        Command::Hn { object, stability } => hn(object, stability),
        Command::Theta { stability } => theta(stability),
        Command::Chambers {
            grid,
            svg,
            sequential,
            ..
        } => chambers(*grid, svg.as_deref(), *sequential),
        Command::GlueCheck { pattern } => glue_check(pattern),
        Command::ExcP1 { stability, a } => exc_p1(stability, a),
        Command::NumLem { charge, trials } => {
            num_lem(charge, *trials, cli.global.seed, cli.global.tol)
        }
        Command::Uniformize { re, im } => uniformize_at(*re, *im, cli.global.tol),
    };
    result.unwrap_or_else(Outcome::failed)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_charge(path: &Path) -> Result<(Geometry, CentralCharge), CliError> {
    Ok(read_json::<ChargeFile>(path)?.into_parts()?)
}

/// A stability file, either bare or as emitted by `classify`.
#[derive(Deserialize)]
#[serde(untagged)]
enum StabilityFile {
    Wrapped { stability: GlobalStabilityJson },
    Bare(GlobalStabilityJson),
}

fn read_stability(path: &Path) -> Result<GlobalStability, CliError> {
    let json = match read_json::<StabilityFile>(path)? {
        StabilityFile::Wrapped { stability } | StabilityFile::Bare(stability) => stability,
    };
    Ok(GlobalStability::try_from(&json)?)
}

fn stability_json(s: &GlobalStability) -> Result<Value, CliError> {
    serde_json::to_value(GlobalStabilityJson::try_from(s)?).map_err(|e| CliError::Io(e.to_string()))
}

fn classify(charge: &Path) -> CmdResult {
    let (geom, z) = read_charge(charge)?;
    let region = check_u_bar(&z, &geom)?;
    match classify_in_u(&z, &geom) {
        Ok(s) => Ok(Outcome::done(to_json(
            &json!({ "stability": stability_json(&s)?, "u_bar": region }),
        )?)),
        Err(e) => Ok(Outcome {
            output: Some(to_json(&json!({ "u_bar": region }))?),
            error: Some(e.into()),
        }),
    }
}

fn build(charge: &Path, partition: &str) -> CmdResult {
    let (geom, z) = read_charge(charge)?;
    let partition = PartitionData::parse(partition, geom.n)?;
    let s = build_stability(&z, &partition, &geom)?;
    Ok(Outcome::done(to_json(&stability_json(&s)?)?))
}

fn hn(object: &str, stability: &Path) -> CmdResult {
    let s = read_stability(stability)?;
    let obj: GlobalObject = object.parse()?;
    match s.hn_global(&obj) {
        Ok(hn) => Ok(Outcome::done(to_json(
            &json!({ "object": obj.to_string(), "hn": HnResultJson::from(&hn) }),
        )?)),
        Err(Error::UnsupportedObject(_))
            if obj
                .terms
                .iter()
                .any(|t| matches!(t.summand, GlobalSummand::LineBundle { .. })) =>
        {
            let cert = s.reduce_line_bundle(&obj)?;
            Ok(Outcome::done(to_json(
                &json!({ "object": obj.to_string(), "certificate": certificate_json(&cert) }),
            )?))
        }
        Err(e) => Err(e.into()),
    }
}

fn theta(stability: &Path) -> CmdResult {
    let s = read_stability(stability)?;
    let t = theta_map(&s)?;
    let lhs = t.lhs()?;
    Ok(Outcome::done(to_json(
        &json!({ "theta": ThetaPointJson::from(&t), "lhs": format_q(&lhs) }),
    )?))
}

fn chambers(grid: usize, svg: Option<&Path>, sequential: bool) -> CmdResult {
    if grid == 0 {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    let exec = if sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let cells = chamber_grid(exec, grid);
    if let Some(path) = svg {
        std::fs::write(path, chambers_svg(&cells, grid))
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Outcome::done(chambers_csv(&cells)))
}

/// Gluing input: the generator pattern plus the simple charges of both hearts.
#[derive(Deserialize)]
struct PatternFile {
    #[serde(flatten)]
    pattern: ExtPattern,
    #[serde(rename = "Z1")]
    z1: Vec<QComplex>,
    #[serde(rename = "Z2")]
    z2: Vec<QComplex>,
    /// Parameter to check directly, as an exact rational string.
    #[serde(default)]
    a: Option<String>,
}

fn summary(labels: &[String], charges: &[QComplex]) -> Result<StabilitySummary, CliError> {
    if labels.len() != charges.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            found: charges.len(),
        }
        .into());
    }
    Ok(StabilitySummary::finite(
        labels
            .iter()
            .cloned()
            .zip(charges.iter().cloned())
            .collect(),
    )?)
}

fn glue_check(path: &Path) -> CmdResult {
    let file: PatternFile = read_json(path)?;
    let p = &file.pattern;
    let s1 = summary(&p.g1, &file.z1)?;
    let s2 = summary(&p.g2, &file.z2)?;
    let search = find_gluing_parameter(&s1, &s2, p)?;
    let mut report = json!({ "search": search });
    if let Some(text) = &file.a {
        let a = parse_q(text)?;
        let witness = check_parameter(&s1, &s2, p, &a)?;
        report["check"] =
            json!({ "a": format_q(&a), "holds": witness.is_none(), "witness": witness });
    }
    let len = p.g1.len() + p.g2.len();
    let decomp = Decomposition::from_bases(
        (0..p.g1.len()).map(|k| KClass::basis(len, k)).collect(),
        (p.g1.len()..len).map(|k| KClass::basis(len, k)).collect(),
    )?;
    match glue_stabilities(&s1, &s2, p, &decomp) {
        Ok(glued) => {
            report["glued"] = json!({ "heart": glued.heart, "charge": glued.charge.values, "proof": proof_name(&glued.proof) });
            Ok(Outcome::done(to_json(&report)?))
        }
        Err(e) => Ok(Outcome {
            output: Some(to_json(&report)?),
            error: Some(e.into()),
        }),
    }
}

fn exc_p1(stability: &Path, a: &str) -> CmdResult {
    let s = read_stability(stability)?;
    let a = parse_q(a)?;
    Ok(Outcome::done(to_json(&exc_p1_check(&s, &a)?)?))
}

/// Torsion classes and bundle classes of rank ≤ 10 and `|deg| ≤ 20` with point corrections.
fn num_lem_samples(n: usize) -> Vec<KClass> {
    let mut out = vec![KClass::fiber(n)];
    for i in 0..n {
        out.push(KClass::point(n, i));
        out.push(KClass::zeta_point(n, i));
    }
    for rank in 1..=10i64 {
        for deg in -20..=20i64 {
            let base = KClass::pullback(n, rank, deg);
            out.push(base.clone());
            for i in 0..n {
                for c in 1..=rank {
                    out.push(&base + &KClass::point(n, i).scale(c));
                    out.push(&base + &KClass::zeta_point(n, i).scale(c));
                }
            }
        }
    }
    out
}

fn random_charge(rng: &mut ChaCha8Rng, n: usize) -> Result<CentralCharge, CliError> {
    let mut value = || {
        let mut part = || {
            Q::new(
                rng.random_range(-20..=20).into(),
                rng.random_range(1..=7).into(),
            )
        };
        QComplex::new(part(), part())
    };
    let ox = value();
    let fiber = value();
    let points = (0..n).map(|_| value()).collect();
    Ok(CentralCharge::new(ox, fiber, points)?)
}

fn num_lem(charge: &Path, trials: usize, seed: u64, tol: f64) -> CmdResult {
    let (geom, z) = read_charge(charge)?;
    let samples = num_lem_samples(geom.n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut r1, mut r2, mut r, mut max_ratio) = (0.0, 0.0, 0.0, 0.0f64);
    let mut failing = Vec::new();
    for trial in 0..trials {
        let zp = random_charge(&mut rng, geom.n)?;
        let report = num_lem_bound(&z, &zp, &geom, &samples)?;
        (r1, r2, r) = (report.r1, report.r2, report.r);
        max_ratio = max_ratio.max(report.max_ratio);
        if report.max_ratio > report.r * (1.0 + tol) {
            failing.push(trial);
        }
    }
    let report = json!({
        "trials": trials,
        "samples": samples.len(),
        "seed": seed,
        "approx": { "r1": r1, "r2": r2, "r": r, "max_ratio": max_ratio },
        "failing_trials": failing,
        "holds": failing.is_empty(),
    });
    Ok(Outcome::done(to_json(&report)?))
}

fn uniformize_at(re: f64, im: f64, tol: f64) -> CmdResult {
    let z = Cplx::new(re, im);
    let f = uniformize(z);
    let df = uniformize_derivative(z);
    let residual = (f + uniformize(-z) - Cplx::new(1.0, 0.0)).norm();
    let report = json!({
        "approx": { "z": [re, im], "F": [f.re, f.im], "dF": [df.re, df.im], "symmetry_residual": residual },
        "within_tol": residual <= tol * f.norm().max(1.0),
    });
    Ok(Outcome::done(to_json(&report)?))
}
