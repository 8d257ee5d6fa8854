//! Kernel for a displayed type theory with modal locks, display and
//! display coinductive types.

pub mod checker;
pub mod coinductive;
pub mod delta_plus;
pub mod display;
pub mod mode_theory;
pub mod printer;
pub mod simplex;
pub mod subst;
pub mod surface;
pub mod syntax;
