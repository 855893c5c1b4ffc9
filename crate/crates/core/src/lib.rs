//! Exact computations around strict units of polynomial GF(2)-algebras:
//! Steenrod and Dyer-Lashof algebra arithmetic, co-Koszul charts, and unit
//! complexes built from Burnside and representation rings.

pub mod f2core;
pub mod steenrod;
pub mod ghm;
pub mod reference;
pub mod dyer_lashof;
pub mod dl_classify;
pub mod padic;
pub mod zplinalg;
pub mod glgroup;
pub mod burnside;
pub mod reprings;
pub mod checks;
pub mod cli;
