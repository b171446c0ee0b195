//! `retrodict verify`: re-derive a plan's state with the Fock-space oracle
//! and compare it with the declared target.

use std::path::Path;

use retrodict::engineer::{engineered_state, squared_overlap};
use retrodict::focksim::{recommended_cutoff, retrodictive_state_oracle, FockError};
use retrodict::multiport::check_unitary;
use retrodict::{tol, C64};

use super::{format_complex, read_plan};
use crate::CliError;

pub fn run(plan_path: &Path, cutoff: Option<usize>) -> Result<(), CliError> {
    let file = read_plan(plan_path)?;
    let unitary = file.unitary.to_unitary().map_err(CliError::Validation)?;
    let (ok, deviation) = check_unitary(&unitary, 1e-10);
    if !ok {
        return Err(CliError::Validation(format!(
            "plan unitary fails the unitarity check (deviation {deviation:.3e})"
        )));
    }
    let betas = file.betas.to_complex().map_err(CliError::Validation)?;
    let target = file.target.to_complex().map_err(CliError::Validation)?;
    let degree = unitary.dim() - 1;
    if betas.len() != degree || target.len() != degree + 1 {
        return Err(CliError::Validation(
            "plan arrays do not match the unitary dimension".into(),
        ));
    }

    let q_max = degree + 2;
    let cutoff = cutoff.unwrap_or_else(|| recommended_cutoff(&betas, degree + q_max));
    let (oracle, report) = retrodictive_state_oracle(&unitary, &betas, q_max, cutoff)
        .map_err(|e| match e {
            FockError::CutoffTooSmall { .. } => CliError::CutoffTooSmall(e.to_string()),
            other => CliError::Validation(other.to_string()),
        })?;

    println!(
        "plan: degree N = {degree}, mode = {}, provenance = {}",
        file.mode, file.provenance
    );
    println!(
        "cutoff {} (norm deficit {:.3e}, amplitude error bound {:.3e})",
        report.cutoff, report.norm_deficit, report.amplitude_error_bound
    );

    let direct = engineered_state(&unitary, &betas);
    println!(" q   oracle coefficient        closed-form coefficient");
    for (q, coeff) in oracle.iter().enumerate() {
        let reference = direct
            .get(q)
            .copied()
            .unwrap_or_else(|| C64::new(0.0, 0.0));
        println!(
            "{q:>2}   {}     {}",
            format_complex(*coeff),
            format_complex(reference)
        );
    }

    let padded_target: Vec<C64> = (0..=q_max)
        .map(|q| target.get(q).copied().unwrap_or_else(|| C64::new(0.0, 0.0)))
        .collect();
    let overlap_target = squared_overlap(&oracle, &padded_target);
    let padded_direct: Vec<C64> = (0..=q_max)
        .map(|q| direct.get(q).copied().unwrap_or_else(|| C64::new(0.0, 0.0)))
        .collect();
    let overlap_direct = squared_overlap(&oracle, &padded_direct);
    println!("overlap(oracle, target)      = {overlap_target:.12}");
    println!("overlap(oracle, closed form) = {overlap_direct:.12}");

    if overlap_target >= 1.0 - tol::VERIFY_OVERLAP {
        println!("verdict: PASS");
        Ok(())
    } else {
        println!("verdict: FAIL");
        Err(CliError::OracleMismatch(format!(
            "oracle-vs-target squared overlap {overlap_target} is below 1 - {:.0e}",
            tol::VERIFY_OVERLAP
        )))
    }
}
