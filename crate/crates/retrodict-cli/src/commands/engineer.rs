//! `retrodict engineer`: coherent inputs for a target on a given multiport.

use std::path::Path;

use retrodict::engineer::{make_plan, PlanMode};

use super::{load_target, load_unitary, plan_to_file, print_plan_summary, write_plan};
use crate::schema::MatrixJson;
use crate::{CliError, ModeArg};

pub fn run(
    target_spec: &str,
    unitary_spec: &str,
    mode: ModeArg,
    phase: f64,
    out: &Path,
) -> Result<(), CliError> {
    let target = load_target(target_spec)?;
    let (unitary, provenance) = load_unitary(unitary_spec, target.degree())?;
    let plan_mode = match mode {
        ModeArg::Multi => PlanMode::MultiInput,
        ModeArg::Single => PlanMode::SingleInput { phase },
    };
    let mut plan = make_plan(&target, &unitary, plan_mode)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    plan.provenance = provenance.clone();

    println!(
        "target degree N = {}, mode = {}",
        target.degree(),
        match mode {
            ModeArg::Multi => "multi-input",
            ModeArg::Single => "single-input",
        }
    );
    print_plan_summary(&plan);

    let source = MatrixJson::from_unitary(&unitary);
    let file = plan_to_file(&plan, &provenance, &source);
    write_plan(out, &file)?;
    println!("plan written to {}", out.display());
    Ok(())
}
