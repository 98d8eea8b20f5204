//! Closed-form solution families and Tricomi pipelines for
//! `U_xx + sign(U)·U_yy = 0` and `(U_xx + U_yy)(U_xx − U_yy) = 0`, with
//! finite-difference verification and an independent oracle.

pub mod acceptance;
pub mod families;
pub mod geometry;
pub mod numerics;
pub mod tricomi;
