//! Constraint logic programming over hedges: a solver for equations and
//! regular membership constraints over unranked terms, and a CLP engine on top.

pub mod automaton;
pub mod constraint;
pub mod engine;
pub mod modes;
pub mod oracle;
pub mod parser;
pub mod printer;
pub mod regex;
pub mod solver;
pub mod syntax;
