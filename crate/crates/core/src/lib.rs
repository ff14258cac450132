//! Simulation and control library for a dandelion-picking hexapod.

pub mod cli;
pub mod controller;
pub mod gait;
pub mod geometry;
pub mod perception;
pub mod simulator;
