//! Yoccoz puzzles, critical tableaux and dual-nest modulus accounting for
//! quadratic polynomials `z^2 + c`.

pub mod cli;
pub mod dynamics;
pub mod geometry;
pub mod modulus;
pub mod nest;
pub mod puzzle;
pub mod rays;
pub mod tableau;
