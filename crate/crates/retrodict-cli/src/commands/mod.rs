pub mod engineer;
pub mod optimize;
pub mod reproduce;
pub mod verify;

use std::path::Path;

use retrodict::engineer::EngineeringPlan;
use retrodict::multiport::{check_unitary, dft_unitary, MultiportUnitary};
use retrodict::rootcore::TargetState;
use retrodict::{C64, PlanMode};

use crate::schema::{
    fnv1a64, parse_inline_coefficients, ComplexJson, MatrixJson, PlanFile, TargetJson, VectorJson,
};
use crate::CliError;

/// Parse a --target argument: a file path when one exists, inline
/// coefficients otherwise. Trailing zero coefficients are trimmed so the
/// degree is exact, and the result is normalized.
pub fn load_target(spec: &str) -> Result<TargetState<f64>, CliError> {
    let mut coeffs: Vec<C64> = if Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| CliError::Validation(format!("cannot read {spec}: {e}")))?;
        let doc: TargetJson = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("invalid target file {spec}: {e}")))?;
        VectorJson {
            re: doc.re,
            im: doc.im,
        }
        .to_complex()
        .map_err(CliError::Validation)?
    } else {
        parse_inline_coefficients(spec).map_err(CliError::Validation)?
    };

    let peak = coeffs.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if peak == 0.0 {
        return Err(CliError::Validation(
            "target coefficients are all zero".into(),
        ));
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= 1e-14 * peak {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(CliError::Validation(
            "target degree N must be at least 1 (no detectors would fire)".into(),
        ));
    }
    TargetState::new(coeffs).map_err(|e| CliError::Validation(e.to_string()))
}

/// Parse a --unitary argument for a degree-N target: "dft" or a matrix file.
pub fn load_unitary(
    spec: &str,
    degree: usize,
) -> Result<(MultiportUnitary<f64>, String), CliError> {
    if spec == "dft" {
        return Ok((dft_unitary::<f64>(degree + 1), "dft".to_owned()));
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| CliError::Validation(format!("cannot read {spec}: {e}")))?;
    let doc: MatrixJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("invalid matrix file {spec}: {e}")))?;
    let unitary = doc.to_unitary().map_err(CliError::Validation)?;
    if unitary.dim() != degree + 1 {
        return Err(CliError::Validation(format!(
            "unitary dimension {} does not match target degree {} + 1",
            unitary.dim(),
            degree
        )));
    }
    let (ok, deviation) = check_unitary(&unitary, 1e-10);
    if !ok {
        return Err(CliError::Validation(format!(
            "matrix in {spec} is not unitary (deviation {deviation:.3e})"
        )));
    }
    Ok((
        unitary,
        format!("file:{:016x}", fnv1a64(text.as_bytes())),
    ))
}

/// Assemble the on-disk document for a finished plan.
pub fn plan_to_file(plan: &EngineeringPlan<f64>, provenance: &str, source_unitary: &MatrixJson) -> PlanFile {
    let (mode, phase) = match plan.mode {
        PlanMode::MultiInput => ("multi-input", None),
        PlanMode::SingleInput { phase } => ("single-input", Some(phase)),
    };
    let k = plan.roots.k.expect("plans carry k");
    let ratio = plan.success / k.norm_sqr();
    let mut file = PlanFile {
        version: env!("CARGO_PKG_VERSION").to_owned(),
        input_hash: String::new(),
        provenance: provenance.to_owned(),
        mode: mode.to_owned(),
        phase,
        target: VectorJson::from_complex(plan.target.coeffs()),
        unitary: MatrixJson::from_unitary(&plan.unitary),
        betas: VectorJson::from_complex(&plan.betas),
        g: VectorJson::from_complex(&plan.roots.g),
        g0: ComplexJson::from(plan.roots.g0.expect("plans carry g0")),
        k: ComplexJson::from(k),
        kbar: ComplexJson::from(plan.kbar),
        success: plan.success,
        ratio,
    };
    let canonical = serde_json::to_string(&(
        &file.target,
        source_unitary,
        &file.mode,
        &file.phase,
    ))
    .expect("canonical input serializes");
    file.input_hash = format!("fnv1a64:{:016x}", fnv1a64(canonical.as_bytes()));
    file
}

pub fn write_plan(path: &Path, file: &PlanFile) -> Result<(), CliError> {
    let body = serde_json::to_string_pretty(file).expect("plan serializes");
    std::fs::write(path, body + "\n")
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
}

pub fn read_plan(path: &Path) -> Result<PlanFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("invalid plan {}: {e}", path.display())))
}

pub fn format_complex(z: C64) -> String {
    format!("{:+.6}{:+.6}i", z.re, z.im)
}

/// Fixed-point for readable magnitudes, scientific for tiny ones.
pub fn format_value(v: f64) -> String {
    if v == 0.0 || v.abs() >= 1e-3 {
        format!("{v:.6}")
    } else {
        format!("{v:.6e}")
    }
}

/// Shared summary printed after `engineer` and `optimize`.
pub fn print_plan_summary(plan: &EngineeringPlan<f64>) {
    for (m, beta) in plan.betas.iter().enumerate() {
        println!(
            "beta_{} = {}   (|beta| = {:.6})",
            m + 1,
            format_complex(*beta),
            beta.norm()
        );
    }
    let k_sq = plan.roots.k.expect("plans carry k").norm_sqr();
    println!("|kbar|^2 = {}", format_value(plan.success));
    println!("|k|^2    = {}", format_value(k_sq));
    println!(
        "ratio |kbar|^2 / |k|^2 = {}%",
        format_value(100.0 * plan.success / k_sq)
    );
}
