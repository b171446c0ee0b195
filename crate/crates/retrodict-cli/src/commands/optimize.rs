//! `retrodict optimize`: maximize the success metric over the first-column
//! weights, then embed the optimized column in a full plan.

use std::path::Path;

use retrodict::engineer::{make_plan, PlanMode};
use retrodict::multiport::{complete_unitary, ColumnSpec};
use retrodict::optimize::{
    objective, optimize_grid, optimize_lagrange, optimize_n1, optimize_projected_gradient,
    ColumnWeights, OptimizationResult,
};
use retrodict::rootcore::{char_polynomial, find_roots, RootSet};
use retrodict::C64;

use super::{load_target, plan_to_file, print_plan_summary, write_plan};
use crate::schema::MatrixJson;
use crate::{CliError, MethodArg};

/// Grid resolution by free dimension; exhaustive search gets expensive fast.
fn grid_resolution(degree: usize) -> usize {
    match degree {
        1 => 10_000,
        2 => 300,
        _ => 60,
    }
}

fn run_method(
    method: MethodArg,
    roots: &RootSet<f64>,
) -> Result<OptimizationResult<f64>, CliError> {
    let degree = roots.degree();
    let uniform = ColumnWeights::uniform(degree + 1);
    match method {
        MethodArg::Lagrange => match optimize_lagrange(roots, &uniform) {
            Ok(result) => Ok(result),
            // Grid fallback first; boundary suprema are reportable results.
            Err(err) if degree <= 3 => optimize_grid(roots, grid_resolution(degree))
                .map_err(|_| CliError::NotConverged(err.to_string())),
            Err(err) => Err(CliError::NotConverged(err.to_string())),
        },
        MethodArg::Grid => optimize_grid(roots, grid_resolution(degree))
            .map_err(|e| CliError::Validation(e.to_string())),
        MethodArg::Auto => {
            if degree == 1 {
                return Ok(optimize_n1(roots.g[0]));
            }
            if let Ok(result) = optimize_lagrange(roots, &uniform) {
                return Ok(result);
            }
            let pg = optimize_projected_gradient(roots, &uniform);
            if pg.converged || pg.boundary {
                return Ok(pg);
            }
            if degree <= 3 {
                return optimize_grid(roots, grid_resolution(degree))
                    .map_err(|e| CliError::NotConverged(e.to_string()));
            }
            Err(CliError::NotConverged(
                "no optimizer converged for this root set".into(),
            ))
        }
    }
}

pub fn run(target_spec: &str, method: MethodArg, out: &Path) -> Result<(), CliError> {
    let target = load_target(target_spec)?;
    let degree = target.degree();
    let poly = char_polynomial(&target);
    let roots = find_roots(&poly).map_err(|e| CliError::Validation(e.to_string()))?;

    let uniform = ColumnWeights::uniform(degree + 1);
    let baseline = objective(&uniform, &roots);
    let result = run_method(method, &roots)?;

    println!(
        "baseline |kbar|^2 (uniform weights) = {}",
        super::format_value(baseline)
    );
    println!(
        "optimized |kbar|^2 = {}   (method {}, {} iterations)",
        super::format_value(result.value),
        result.method,
        result.iterations
    );
    let weights = result
        .weights
        .as_slice()
        .iter()
        .map(|x| format!("{x:.6}"))
        .collect::<Vec<_>>()
        .join(", ");
    println!("first-column weights |U_n0|^2: {weights}");
    if result.boundary {
        println!(
            "note: boundary-supremum; the objective has no interior maximum \
             for this target and the reported weights sit at the simplex floor"
        );
    }

    let entries: Vec<C64> = result
        .weights
        .as_slice()
        .iter()
        .map(|&x| C64::new(x.sqrt(), 0.0))
        .collect();
    let column = ColumnSpec::new(0, entries).map_err(|e| CliError::Validation(e.to_string()))?;
    let unitary =
        complete_unitary(&[column]).map_err(|e| CliError::Validation(e.to_string()))?;
    let provenance = format!("optimized:{}", result.method);
    let mut plan = make_plan(&target, &unitary, PlanMode::MultiInput)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    plan.provenance = provenance.clone();

    print_plan_summary(&plan);
    let source = MatrixJson::from_unitary(&unitary);
    let file = plan_to_file(&plan, &provenance, &source);
    write_plan(out, &file)?;
    println!("plan written to {}", out.display());
    Ok(())
}
