use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use dhym_core::lemmas::{run_all, SampleSpec};
use dhym_core::path::{compute_ct_with_tolerance, compute_theta_hat};
use dhym_core::solver::{continue_path, verify_solution};
use dhym_core::torus::{class_integrals_grid, write_field, BackgroundData};
use dhym_core::Error;

use crate::config::{RunConfig, Validated};
use crate::failure::{exit_code, FailureReport, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

/// Number of evenly spaced `t` values in the phase table.
const PHASE_TABLE_POINTS: usize = 11;

/// Outcome of a command that got far enough to have a meaningful exit code.
pub enum Outcome {
    Done(u8),
    /// Rejected before any output was written.
    Usage(anyhow::Error),
}

fn load(config: &Path) -> Result<Validated, anyhow::Error> {
    RunConfig::load(config)?.validate()
}

fn create_out(out: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut w = BufWriter::new(
        File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
    );
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn fail(err: &Error, cfg: &Validated, out: &Path) -> anyhow::Result<u8> {
    eprintln!("error: {err}");
    let code = exit_code(err);
    if code == EXIT_USAGE {
        return Ok(code);
    }
    create_out(out)?;
    if let Error::ContinuationStalled { trace, .. } = err {
        let path = out.join(&cfg.raw.outputs.trace);
        trace.write_csv(BufWriter::new(File::create(&path)?))?;
    }
    let path = out.join(&cfg.raw.outputs.failure);
    write_json(&path, &FailureReport::new(err, &cfg.raw, None))?;
    eprintln!("failure report written to {}", path.display());
    Ok(code)
}

fn background_or_fail(cfg: &Validated, out: &Path) -> anyhow::Result<Result<BackgroundData, u8>> {
    match cfg.build() {
        Ok(bg) => Ok(Ok(bg)),
        Err(e) => Ok(Err(fail(&e, cfg, out)?)),
    }
}

pub fn solve(config: &Path, out: &Path) -> anyhow::Result<Outcome> {
    let cfg = match load(config) {
        Ok(c) => c,
        Err(e) => return Ok(Outcome::Usage(e)),
    };
    let bg = match background_or_fail(&cfg, out)? {
        Ok(bg) => bg,
        Err(code) => return Ok(Outcome::Done(code)),
    };
    let (point, margins) = bg.subsolution_margins();
    println!(
        "theta_hat = {}; subsolution margins: min_lambda = {:e}, min_pair_product = {:e} (grid point {point})",
        bg.phase().theta_hat(),
        margins.min_lambda,
        margins.min_pair_product_margin
    );

    let (phi, trace) = match continue_path(&bg, &cfg.raw.solver) {
        Ok(r) => r,
        Err(e) => return Ok(Outcome::Done(fail(&e, &cfg, out)?)),
    };
    create_out(out)?;
    let outputs = &cfg.raw.outputs;
    trace.write_csv(BufWriter::new(File::create(out.join(&outputs.trace))?))?;
    let mut w = BufWriter::new(File::create(out.join(&outputs.phi))?);
    write_field(&mut w, &phi)?;
    w.flush()?;

    let report = match verify_solution(&bg, &phi, bg.phase()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            let path = out.join(&outputs.failure);
            write_json(&path, &FailureReport::new(&e, &cfg.raw, Some(&trace)))?;
            return Ok(Outcome::Done(exit_code(&e)));
        }
    };
    write_json(&out.join(&outputs.verification), &report)?;
    let last = trace.last().expect("a successful path has records");
    println!(
        "reached t = {} in {} steps: sup|phi| = {:e}, residual = {:e}, phase deviation = {:e}",
        last.t,
        trace.len(),
        last.sup_phi,
        report.residual_sup,
        report.phase_deviation_sup
    );
    Ok(Outcome::Done(EXIT_OK))
}

pub fn check_lemmas(
    spec_path: Option<&Path>,
    out: &Path,
    seed: Option<u64>,
    count: Option<usize>,
) -> anyhow::Result<Outcome> {
    let spec = match spec_path {
        None => Ok(SampleSpec::default()),
        Some(p) => fs::read_to_string(p)
            .with_context(|| format!("cannot read sample spec {}", p.display()))
            .and_then(|s| {
                serde_json::from_str::<SampleSpec>(&s)
                    .with_context(|| format!("malformed sample spec {}", p.display()))
            }),
    };
    let mut spec = match spec {
        Ok(s) => s,
        Err(e) => return Ok(Outcome::Usage(e)),
    };
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    if let Some(count) = count {
        spec.count = count;
    }
    if let Err(e) = spec.validate() {
        return Ok(Outcome::Usage(e.into()));
    }

    let reports = match run_all(&spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(Outcome::Done(EXIT_FAILURE));
        }
    };
    create_out(out)?;
    let mut all_pass = true;
    for r in &reports {
        let path: PathBuf = out.join(format!("{}.json", r.lemma.as_str()));
        fs::write(&path, r.to_json() + "\n")?;
        all_pass &= r.pass;
        println!(
            "{:<22} {}  worst slack {:e} (tolerance {:e}), {} samples",
            r.lemma.as_str(),
            if r.pass { "PASS" } else { "FAIL" },
            r.worst_slack,
            r.tolerance,
            r.count
        );
    }
    Ok(Outcome::Done(if all_pass { EXIT_OK } else { EXIT_FAILURE }))
}

pub fn phase(config: &Path) -> anyhow::Result<Outcome> {
    let cfg = match load(config) {
        Ok(c) => c,
        Err(e) => return Ok(Outcome::Usage(e)),
    };
    let report = |e: Error| {
        eprintln!("error: {e}");
        Outcome::Done(exit_code(&e))
    };
    let bg = match cfg.build() {
        Ok(bg) => bg,
        Err(e) => return Ok(report(e)),
    };
    let phase = match compute_theta_hat(bg.curvature_integral()) {
        Ok(p) => p,
        Err(e) => return Ok(report(e)),
    };
    let integrals = class_integrals_grid(&bg);
    let mut rows = Vec::with_capacity(PHASE_TABLE_POINTS);
    for k in 0..PHASE_TABLE_POINTS {
        let t = k as f64 / (PHASE_TABLE_POINTS - 1) as f64;
        match compute_ct_with_tolerance(&integrals, t, &phase, bg.admissibility_tol()) {
            Ok(p) => rows.push(p),
            Err(e) => return Ok(report(e)),
        }
    }

    let theta = phase.theta_hat();
    println!("theta_hat = {theta:.17e}");
    println!("theta_hat/pi = {:.17e}", theta / std::f64::consts::PI);
    println!("tan_theta_hat = {:.17e}", phase.tan());
    println!("t c_t");
    for p in &rows {
        println!("{:.1} {:.17e}", p.t, p.c_t);
    }
    let (point, m) = bg.subsolution_margins();
    println!("subsolution min_lambda = {:.17e}", m.min_lambda);
    println!(
        "subsolution min_pair_product_margin = {:.17e}",
        m.min_pair_product_margin
    );
    println!("subsolution worst_point = {point}");
    Ok(Outcome::Done(EXIT_OK))
}
