//! Free-energy cycle relations, in kcal/mol.
//!
//! Sign convention: the IL/water transfer free energy moves the solute from
//! water into the ionic liquid, so `ΔG_solv(IL) = ΔG_hyd + ΔG_transfer(IL←water)`.
//! Likewise for the organic solvent. Flipping the convention only changes
//! [`TRANSFER_SIGN`].

/// `+1` for water→solvent transfer energies.
pub const TRANSFER_SIGN: f64 = 1.0;

/// Hydration free energy from solvation in the IL and IL/water transfer.
pub fn hydration_dg(solvation: f64, transfer_il_water: f64) -> f64 {
    solvation - TRANSFER_SIGN * transfer_il_water
}

/// IL/organic transfer from the two water-referenced transfers.
pub fn il_organic_transfer(transfer_il_water: f64, transfer_org_water: f64) -> f64 {
    TRANSFER_SIGN * (transfer_il_water - transfer_org_water)
}

/// Hydration estimate for one solute: subtract per virtual system, then
/// average. `None` for an empty slice.
pub fn averaged_hydration(systems: &[(f64, f64)]) -> Option<f64> {
    if systems.is_empty() {
        return None;
    }
    let sum: f64 = systems.iter().map(|&(s, t)| hydration_dg(s, t)).sum();
    Some(sum / systems.len() as f64)
}
