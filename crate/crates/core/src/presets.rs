//! Ready-made `(E, F)` pairs.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hb::HermiteBiehlerFunction;

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub e: HermiteBiehlerFunction,
    pub f: HermiteBiehlerFunction,
}

/// `E = F = e^{-iπz}`: two Paley–Wiener signals of band `π` multiplexed on
/// the half-integers of `PW_{2π}`.
pub fn paley_wiener() -> Preset {
    let e = HermiteBiehlerFunction::exponential(PI).expect("valid generator");
    Preset {
        name: "pw",
        f: e.clone(),
        e,
    }
}

/// `E = (z + i)e^{-iπz}`, `F = e^{-iπz}`: `|E|` is not constant on the line.
pub fn non_paley_wiener() -> Preset {
    Preset {
        name: "nonpw",
        e: HermiteBiehlerFunction::new(PI, vec![Complex64::new(0.0, -1.0)], Complex64::new(1.0, 0.0))
            .expect("valid generator"),
        f: HermiteBiehlerFunction::exponential(PI).expect("valid generator"),
    }
}

pub fn by_name(name: &str) -> Result<Preset> {
    match name {
        "pw" => Ok(paley_wiener()),
        "nonpw" => Ok(non_paley_wiener()),
        other => Err(Error::InvalidArgument(format!("unknown preset {other:?} (expected pw or nonpw)"))),
    }
}

pub fn all() -> Vec<Preset> {
    vec![paley_wiener(), non_paley_wiener()]
}
