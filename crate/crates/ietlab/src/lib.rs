//! Exact interval exchange transformations and classification of the groups
//! generated by irrational rotations together with rational interval
//! exchanges.

pub mod classify;
pub mod constructions;
pub mod error;
pub mod exactnum;
pub mod haq;
pub mod ietcore;
pub mod permgrp;
pub mod verify;

pub use error::{IetError, Result};
