//! Molecular graphs: SMILES parsing, ring and aromaticity perception, and
//! canonical SMILES output.
//!
//! A [`Molecule`] is immutable once built. Every downstream module keys
//! molecules by the string returned from [`canonicalize`].

mod aromaticity;
mod canon;
pub mod element;
mod molecule;
mod parser;
mod rings;
mod writer;

pub use canon::canonical_order;
pub use element::Element;
pub use molecule::{Atom, Bond, BondOrder, BondStereo, Chirality, Molecule};
pub use parser::{parse_smiles, ParseError, ParseErrorKind};
pub use rings::{all_simple_cycles, perceive_rings};
pub use writer::{write_smiles, write_smiles_in_order};

/// Parses `text` and re-emits it as canonical SMILES.
pub fn canonicalize(text: &str) -> Result<String, ParseError> {
    Ok(write_smiles(&parse_smiles(text)?))
}

/// True when both strings denote the same labeled graph.
///
/// Resonance forms that place a formal charge on different atoms are
/// different graphs and therefore do not match.
pub fn structural_match(a: &str, b: &str) -> Result<bool, ParseError> {
    Ok(canonicalize(a)? == canonicalize(b)?)
}
