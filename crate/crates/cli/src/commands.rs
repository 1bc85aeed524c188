//! One function per subcommand; each returns the JSON envelope
//! `{command, inputs, result, diagnostics}`.

use std::path::Path;

use nalgebra::DVector;
use pseudodet::calculus::{
    canonical_gradient, check_class_equations, fd_directional_derivative, pdet, pdet_differential,
    pdet_limit, pdet_minor, penrose_residuals, pinv, pinv_berg, DirectionalProbe, FdScheme, PdetMethod,
    PinvMethod, DEFAULT_DELTAS,
};
use pseudodet::gaussian::{
    log_density, mle_covariance, projected_gradient_norm, residual_matrix, sample_degenerate, sample_mean,
    GaussianModel, MleMode,
};
use pseudodet::matrix::{projector_distance, HermitianMatrix, Spectrum};
use serde_json::{json, Value};

use crate::io::{
    format_csv_row, hermitian_json, read_dataset, read_matrix, read_vector, real_matrix_json,
};
use crate::{CliError, Command, GlobalArgs, Output};

fn envelope(command: &str, g: &GlobalArgs, mut inputs: Value, result: Value, diagnostics: Value) -> Value {
    inputs["rel_tol"] = json!(g.rel_tol);
    inputs["symmetrize"] = json!(g.symmetrize);
    json!({ "command": command, "inputs": inputs, "result": result, "diagnostics": diagnostics })
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn spectrum_diagnostics(s: &Spectrum) -> Value {
    json!({
        "rank": s.rank(),
        "tolerance": s.profile.tolerance,
        "eigenvalues": s.decomposition.eigenvalues,
    })
}

pub fn dispatch(g: &GlobalArgs, command: &Command) -> Result<Output, CliError> {
    let envelope_only = |v: Value| Output { envelope: v, csv: None };
    match command {
        Command::Pdet { input, method, deltas } => {
            cmd_pdet(g, input, method.parse()?, deltas.as_deref()).map(envelope_only)
        }
        Command::Pinv { input, method } => cmd_pinv(g, input, method.parse()?).map(envelope_only),
        Command::Grad { input } => cmd_grad(g, input).map(envelope_only),
        Command::Check { input, direction, tau, forward } => {
            let scheme = if *forward { FdScheme::Forward } else { FdScheme::Central };
            cmd_check(g, input, direction, *tau, scheme).map(envelope_only)
        }
        Command::Mle { data, mean, mean_zero, mean_sample, projector } => {
            let mean = match (mean, mean_zero, mean_sample) {
                (Some(p), _, _) => MeanSource::File(p),
                (None, true, _) => MeanSource::Zero,
                (None, false, true) => MeanSource::Sample,
                (None, false, false) => return Err(CliError::input("one of --mean, --mean-zero, --mean-sample is required")),
            };
            cmd_mle(g, data, mean, projector.as_deref()).map(envelope_only)
        }
        Command::Density { x, mean, cov } => cmd_density(g, x, mean, cov).map(envelope_only),
        Command::Sample { cov, mean, count, seed, out } => sample(g, cov, mean, *count, *seed, out.as_deref()),
    }
}

pub fn cmd_pdet(g: &GlobalArgs, input: &Path, method: PdetMethod, deltas: Option<&[f64]>) -> Result<Value, CliError> {
    let a = read_matrix(input, g.policy())?;
    let s = Spectrum::new(&a, g.rel_tol)?;
    let inputs = json!({ "input": path_str(input), "method": method.as_str() });
    let spectral = pdet(&s);
    let result = match method {
        PdetMethod::Spectral => json!({ "value": spectral.value, "rank": spectral.rank, "method": "spectral" }),
        PdetMethod::Limit => {
            let deltas = deltas.unwrap_or(&DEFAULT_DELTAS);
            let seq = pdet_limit(&a, s.rank(), deltas)?;
            let value = seq.last().map(|e| e.value);
            let estimates: Vec<Value> = seq.iter().map(|e| json!({ "delta": e.delta, "value": e.value })).collect();
            json!({ "value": value, "rank": s.rank(), "method": "limit", "estimates": estimates })
        }
        PdetMethod::Minor => {
            let value = pdet_minor(&a, s.rank(), g.minor_cap)?;
            json!({ "value": value, "rank": s.rank(), "method": "minor", "signed": false })
        }
    };
    let mut diagnostics = spectrum_diagnostics(&s);
    diagnostics["spectral_value"] = json!(spectral.value);
    Ok(envelope("pdet", g, inputs, result, diagnostics))
}

pub fn cmd_pinv(g: &GlobalArgs, input: &Path, method: PinvMethod) -> Result<Value, CliError> {
    let a = read_matrix(input, g.policy())?;
    let s = Spectrum::new(&a, g.rel_tol)?;
    let p = match method {
        PinvMethod::Spectral => pinv(&s),
        PinvMethod::Berg => pinv_berg(&a, s.rank(), g.minor_cap)?,
    };
    let residuals = penrose_residuals(&a, p.as_matrix());
    let mut diagnostics = spectrum_diagnostics(&s);
    diagnostics["penrose_residuals"] = json!(residuals);
    Ok(envelope(
        "pinv",
        g,
        json!({ "input": path_str(input), "method": method.as_str() }),
        json!({ "pinv": hermitian_json(&p), "rank": s.rank(), "method": method.as_str() }),
        diagnostics,
    ))
}

pub fn cmd_grad(g: &GlobalArgs, input: &Path) -> Result<Value, CliError> {
    let a = read_matrix(input, g.policy())?;
    let s = Spectrum::new(&a, g.rel_tol)?;
    let bundle = canonical_gradient(&s);
    let opts = g.options();
    let report = check_class_equations(&a, &bundle.can, opts.class_tol, &opts)?;
    let mut diagnostics = spectrum_diagnostics(&s);
    diagnostics["class_residuals"] = json!([report.residual1, report.residual2]);
    diagnostics["class_equations_passed"] = json!(report.passed);
    Ok(envelope(
        "grad",
        g,
        json!({ "input": path_str(input) }),
        json!({
            "det": bundle.det,
            "rank": bundle.rank,
            "pinv": hermitian_json(&bundle.pinv),
            "can": hermitian_json(&bundle.can),
        }),
        diagnostics,
    ))
}

pub fn cmd_check(g: &GlobalArgs, input: &Path, direction: &Path, tau: f64, scheme: FdScheme) -> Result<Value, CliError> {
    let a = read_matrix(input, g.policy())?;
    let b = read_matrix(direction, g.policy())?;
    if a.n() != b.n() {
        return Err(CliError::input(format!("dimension mismatch: {} vs {}", a.n(), b.n())));
    }
    let opts = g.options();
    let sa = Spectrum::new(&a, g.rel_tol)?;
    let sb = Spectrum::new(&b, g.rel_tol)?;
    let distance = projector_distance(&sa, &sb);
    let analytic = pdet_differential(&a, &b, &opts)?;
    let probe = DirectionalProbe::new(&a, b, tau, &opts)?;
    let fd = fd_directional_derivative(&probe, &a, scheme, &opts)?;
    let abs_err = (analytic - fd).abs();
    let rel_err = if analytic != 0.0 { abs_err / analytic.abs() } else { abs_err };
    Ok(envelope(
        "check",
        g,
        json!({
            "input": path_str(input),
            "direction": path_str(direction),
            "tau": tau,
            "scheme": if scheme == FdScheme::Central { "central" } else { "forward" },
        }),
        json!({
            "analytic": analytic,
            "finite_difference": fd,
            "abs_err": abs_err,
            "rel_err": rel_err,
            "kernel_match": true,
        }),
        json!({ "rank": sa.rank(), "tolerance": sa.profile.tolerance, "projector_distance": distance }),
    ))
}

pub enum MeanSource<'a> {
    File(&'a Path),
    Zero,
    Sample,
}

pub fn cmd_mle(g: &GlobalArgs, data: &Path, mean: MeanSource<'_>, projector: Option<&Path>) -> Result<Value, CliError> {
    let dataset = read_dataset(data)?;
    let (mu, mean_label) = match mean {
        MeanSource::File(p) => (read_vector(p)?, path_str(p)),
        MeanSource::Zero => (DVector::zeros(dataset.dim()), "zero".to_string()),
        MeanSource::Sample => (sample_mean(&dataset), "sample".to_string()),
    };
    if mu.len() != dataset.dim() {
        return Err(CliError::input(format!(
            "mean has dimension {} but samples have {}",
            mu.len(),
            dataset.dim()
        )));
    }
    let mode = match projector {
        Some(p) => MleMode::FixedRange(read_matrix(p, g.policy())?),
        None => MleMode::KernelFree,
    };
    if let MleMode::FixedRange(p) = &mode {
        if p.n() != dataset.dim() {
            return Err(CliError::input(format!("projector is {}x{} but samples have dimension {}", p.n(), p.n(), dataset.dim())));
        }
    }
    let sigma_hat = mle_covariance(&dataset, &mu, &mode)?;
    let r = residual_matrix(&dataset, &mu)?;
    let opts = g.options();
    let grad_norm = projected_gradient_norm(&sigma_hat, &r, &opts)?;
    let s = Spectrum::new(&sigma_hat, g.rel_tol)?;
    Ok(envelope(
        "mle",
        g,
        json!({
            "data": path_str(data),
            "mean": mean_label,
            "projector": projector.map(path_str),
        }),
        json!({
            "sigma_hat": hermitian_json(&sigma_hat),
            "R": real_matrix_json(&r.r),
            "N": r.samples,
            "mode": mode.name(),
            "projected_gradient_norm": grad_norm,
        }),
        json!({ "rank": s.rank(), "tolerance": s.profile.tolerance, "mean": mu.as_slice() }),
    ))
}

fn load_model(g: &GlobalArgs, mean: &Path, cov: &Path) -> Result<GaussianModel, CliError> {
    let mu = read_vector(mean)?;
    let sigma: HermitianMatrix = read_matrix(cov, g.policy())?;
    if mu.len() != sigma.n() {
        return Err(CliError::input(format!("mean has dimension {} but covariance is {}x{}", mu.len(), sigma.n(), sigma.n())));
    }
    Ok(GaussianModel::new(mu, sigma, g.rel_tol)?)
}

pub fn cmd_density(g: &GlobalArgs, x: &Path, mean: &Path, cov: &Path) -> Result<Value, CliError> {
    let point = read_vector(x)?;
    let model = load_model(g, mean, cov)?;
    if point.len() != model.dim() {
        return Err(CliError::input(format!("point has dimension {} but model has {}", point.len(), model.dim())));
    }
    let ld = log_density(&point, &model)?;
    let r = &point - model.mean();
    Ok(envelope(
        "density",
        g,
        json!({ "x": path_str(x), "mean": path_str(mean), "cov": path_str(cov) }),
        json!({
            "log_density": if ld.value.is_finite() { json!(ld.value) } else { Value::Null },
            "density": ld.value.exp(),
            "on_support": ld.on_support,
            "rank": model.rank(),
        }),
        json!({
            "pdet": model.pdet(),
            "off_support_distance": model.off_support_distance(&r),
            "support_tol": model.support_tol(),
        }),
    ))
}

/// Without `out`, CSV rows are the command's stdout and the envelope is returned for
/// stderr; with `out`, rows go to that file and the envelope is the stdout document.
pub fn sample(g: &GlobalArgs, cov: &Path, mean: &Path, count: usize, seed: u64, out: Option<&Path>) -> Result<Output, CliError> {
    let model = load_model(g, mean, cov)?;
    let data = sample_degenerate(&model, count, seed)?;
    let mut csv = String::new();
    for x in data.samples() {
        csv.push_str(&format_csv_row(&x));
        csv.push('\n');
    }
    let env = envelope(
        "sample",
        g,
        json!({ "cov": path_str(cov), "mean": path_str(mean), "count": count, "seed": seed, "out": out.map(path_str) }),
        json!({ "count": count, "n": model.dim(), "rank": model.rank() }),
        json!({ "pdet": model.pdet(), "eigenvalues": model.spectrum().decomposition.eigenvalues }),
    );
    match out {
        Some(path) => {
            std::fs::write(path, csv).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
            Ok(Output { envelope: env, csv: None })
        }
        None => Ok(Output { envelope: env, csv: Some(csv) }),
    }
}
