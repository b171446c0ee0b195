//! `retrodict reproduce`: recompute the published reference values and
//! report a pass/fail row for each, at the tolerances recorded in the
//! checked-in fixtures file.

use std::collections::BTreeMap;

use serde::Deserialize;

use retrodict::engineer::{make_plan, single_input_reduction, PlanMode};
use retrodict::multiport::{complete_unitary, dft_unitary, ColumnSpec};
use retrodict::optimize::{optimize_lagrange, optimize_n1, ColumnWeights};
use retrodict::rootcore::{char_polynomial, find_roots, TargetState};
use retrodict::C64;

use crate::schema::ReproRow;
use crate::{CaseArg, CliError, FormatArg};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fixture {
    case: String,
    quantity: String,
    value: f64,
    tol: f64,
}

const FIXTURES: &str = include_str!("../../fixtures/reference_values.json");

fn case_name(case: CaseArg) -> &'static str {
    match case {
        CaseArg::N1Dft => "n1-dft",
        CaseArg::N1Opt => "n1-opt",
        CaseArg::N2Dft => "n2-dft",
        CaseArg::N2Opt => "n2-opt",
        CaseArg::All => "all",
    }
}

/// Every quantity the fixtures refer to, keyed by (case, quantity).
fn computed_values() -> Result<BTreeMap<(String, String), f64>, CliError> {
    let mut values = BTreeMap::new();
    let mut put = |case: &str, quantity: &str, value: f64| {
        values.insert((case.to_owned(), quantity.to_owned()), value);
    };
    let fail = |e: &dyn std::fmt::Display| CliError::Validation(format!("reproduction: {e}"));

    // Equal superposition of |0> and |1> on the two-port DFT.
    let target1 = TargetState::<f64>::from_reals(&[1.0, 1.0]).map_err(|e| fail(&e))?;
    let dft2 = dft_unitary::<f64>(2);
    let plan = make_plan(&target1, &dft2, PlanMode::MultiInput).map_err(|e| fail(&e))?;
    let k_sq = plan.roots.k.unwrap().norm_sqr();
    put("n1-dft", "g1_re", plan.roots.g[0].re);
    put("n1-dft", "g1_im", plan.roots.g[0].im);
    put("n1-dft", "beta1_re", plan.betas[0].re);
    put("n1-dft", "beta1_im", plan.betas[0].im);
    put("n1-dft", "kbar_sq", plan.success);
    put("n1-dft", "k_sq", k_sq);
    put("n1-dft", "ratio_pct", 100.0 * plan.success / k_sq);

    // Optimized two-port configuration for the same target.
    let roots1 = find_roots(&char_polynomial(&target1)).map_err(|e| fail(&e))?;
    let opt1 = optimize_n1(roots1.g[0]);
    put("n1-opt", "x0", opt1.weights.as_slice()[0]);
    put("n1-opt", "kbar_sq_max", opt1.value);
    let column: Vec<C64> = opt1
        .weights
        .as_slice()
        .iter()
        .map(|&x| C64::new(x.sqrt(), 0.0))
        .collect();
    let u_opt1 = complete_unitary(&[ColumnSpec::new(0, column).map_err(|e| fail(&e))?])
        .map_err(|e| fail(&e))?;
    let plan_opt1 = make_plan(&target1, &u_opt1, PlanMode::MultiInput).map_err(|e| fail(&e))?;
    put("n1-opt", "beta1_abs", plan_opt1.betas[0].norm());
    put(
        "n1-opt",
        "ratio_pct",
        100.0 * plan_opt1.success / plan_opt1.roots.k.unwrap().norm_sqr(),
    );

    // Flat superposition of |0>, |1>, |2> on the three-port DFT.
    let target2 = TargetState::<f64>::from_reals(&[1.0, 1.0, 1.0]).map_err(|e| fail(&e))?;
    let dft3 = dft_unitary::<f64>(3);
    let plan = make_plan(&target2, &dft3, PlanMode::MultiInput).map_err(|e| fail(&e))?;
    let k_sq = plan.roots.k.unwrap().norm_sqr();
    put("n2-dft", "g1_re", plan.roots.g[0].re);
    put("n2-dft", "g1_im", plan.roots.g[0].im);
    put("n2-dft", "g2_re", plan.roots.g[1].re);
    put("n2-dft", "g2_im", plan.roots.g[1].im);
    put("n2-dft", "beta1_re", plan.betas[0].re);
    put("n2-dft", "beta1_im", plan.betas[0].im);
    put("n2-dft", "beta2_re", plan.betas[1].re);
    put("n2-dft", "beta2_im", plan.betas[1].im);
    put("n2-dft", "kbar_sq", plan.success);
    put("n2-dft", "k_sq", k_sq);
    put("n2-dft", "ratio_pct", 100.0 * plan.success / k_sq);

    // Optimized three-port configuration, plus its single-input reduction.
    let roots2 = find_roots(&char_polynomial(&target2)).map_err(|e| fail(&e))?;
    let opt2 =
        optimize_lagrange(&roots2, &ColumnWeights::uniform(3)).map_err(|e| fail(&e))?;
    let x = opt2.weights.as_slice();
    put("n2-opt", "x0", x[0]);
    put("n2-opt", "x1", x[1]);
    put("n2-opt", "x2", x[2]);
    put("n2-opt", "kbar_sq_max", opt2.value);
    let column: Vec<C64> = x.iter().map(|&w| C64::new(w.sqrt(), 0.0)).collect();
    let u_opt2 = complete_unitary(&[ColumnSpec::new(0, column).map_err(|e| fail(&e))?])
        .map_err(|e| fail(&e))?;
    let plan_opt2 = make_plan(&target2, &u_opt2, PlanMode::MultiInput).map_err(|e| fail(&e))?;
    put(
        "n2-opt",
        "ratio_pct",
        100.0 * plan_opt2.success / plan_opt2.roots.k.unwrap().norm_sqr(),
    );
    let beta_sq: f64 = plan_opt2.betas.iter().map(|b| b.norm_sqr()).sum();
    put("n2-opt", "sum_beta_sq", beta_sq);
    let column0 = ColumnSpec::new(0, u_opt2.column(0)).map_err(|e| fail(&e))?;
    let (beta1, column1) =
        single_input_reduction(&column0, &plan_opt2.roots, 0.0).map_err(|e| fail(&e))?;
    put("n2-opt", "single_beta1_abs", beta1.norm());
    put("n2-opt", "u01_sq", column1.entries[0].norm_sqr());
    put("n2-opt", "u11_sq", column1.entries[1].norm_sqr());
    put("n2-opt", "u21_sq", column1.entries[2].norm_sqr());
    let norm: f64 = column1.entries.iter().map(|e| e.norm_sqr()).sum();
    put("n2-opt", "col1_norm_residual", (norm - 1.0).abs());
    let dot = column0
        .entries
        .iter()
        .zip(&column1.entries)
        .fold(C64::new(0.0, 0.0), |acc, (&a, &b)| acc + a.conj() * b);
    put("n2-opt", "col1_orth_residual", dot.norm());

    Ok(values)
}

fn emit(rows: &[ReproRow], format: FormatArg) {
    match format {
        FormatArg::Table => {
            println!(
                "{:<7} {:<20} {:>18} {:>18} {:>12}  pass",
                "case", "quantity", "paper", "computed", "diff"
            );
            for row in rows {
                println!(
                    "{:<7} {:<20} {:>18.9} {:>18.9} {:>12.3e}  {}",
                    row.case, row.quantity, row.paper, row.computed, row.diff, row.pass
                );
            }
        }
        FormatArg::Csv => {
            println!("case,quantity,paper,computed,diff,pass");
            for row in rows {
                println!(
                    "{},{},{},{},{},{}",
                    row.case, row.quantity, row.paper, row.computed, row.diff, row.pass
                );
            }
        }
        FormatArg::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(rows).expect("rows serialize")
            );
        }
    }
}

pub fn run(case: CaseArg, format: FormatArg) -> Result<(), CliError> {
    let fixtures: Vec<Fixture> = serde_json::from_str(FIXTURES)
        .map_err(|e| CliError::Validation(format!("fixtures file is invalid: {e}")))?;
    let computed = computed_values()?;
    let selected = case_name(case);

    let mut rows = Vec::new();
    for fixture in &fixtures {
        if case != CaseArg::All && fixture.case != selected {
            continue;
        }
        let key = (fixture.case.clone(), fixture.quantity.clone());
        let Some(&value) = computed.get(&key) else {
            return Err(CliError::Validation(format!(
                "no computed value for {}/{}",
                fixture.case, fixture.quantity
            )));
        };
        let diff = (value - fixture.value).abs();
        rows.push(ReproRow {
            case: fixture.case.clone(),
            quantity: fixture.quantity.clone(),
            paper: fixture.value,
            computed: value,
            diff,
            pass: diff <= fixture.tol,
        });
    }
    if rows.is_empty() {
        return Err(CliError::Validation(format!(
            "no fixtures matched case '{selected}'"
        )));
    }
    emit(&rows, format);

    let failures = rows.iter().filter(|r| !r.pass).count();
    if failures == 0 {
        Ok(())
    } else {
        Err(CliError::OracleMismatch(format!(
            "{failures} of {} reference values out of tolerance",
            rows.len()
        )))
    }
}
