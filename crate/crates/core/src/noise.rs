//! Configurable noise models attached to circuit execution.
//!
//! A model assigns a channel to each gate class, an optional channel fired
//! once per group element, coherent ZZ crosstalk rotations fired after every
//! gate layer on configured wire pairs, and classical measurement flips.

use crate::channel::NoiseChannel;
use crate::error::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;

/// Channel recipe, realized at a given arity when the model is compiled.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub enum ChannelSpec {
    #[default]
    None,
    /// Global depolarizing with strength `p` on the target wires.
    Depolarizing { p: f64 },
    /// Independent X flip with probability `p` on each target wire.
    BitFlip { p: f64 },
    /// Independent Z flip with probability `p` on each target wire.
    PhaseFlip { p: f64 },
}

impl ChannelSpec {
    pub fn is_none(&self) -> bool {
        matches!(self, ChannelSpec::None)
    }

    /// Validate parameters without realizing the channel.
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelSpec::None => Ok(()),
            ChannelSpec::Depolarizing { p }
            | ChannelSpec::BitFlip { p }
            | ChannelSpec::PhaseFlip { p } => {
                if (0.0..=1.0).contains(&p) {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(alloc::format!("probability {p} outside [0, 1]")))
                }
            }
        }
    }

    /// Realize on `n` register qubits acting on `targets`. `BitFlip` and
    /// `PhaseFlip` act independently per target wire; `Depolarizing` is a
    /// single global channel over the whole target set.
    pub fn realize(&self, n: usize, targets: &[usize]) -> Result<Option<NoiseChannel>> {
        match *self {
            ChannelSpec::None => Ok(None),
            ChannelSpec::Depolarizing { p } => {
                let local = NoiseChannel::depolarizing(targets.len(), p)?;
                Ok(Some(local.embed(n, targets)?))
            }
            ChannelSpec::BitFlip { p } => {
                Ok(Some(compose_per_qubit(NoiseChannel::bit_flip(p)?, n, targets)?))
            }
            ChannelSpec::PhaseFlip { p } => {
                Ok(Some(compose_per_qubit(NoiseChannel::phase_flip(p)?, n, targets)?))
            }
        }
    }
}

fn compose_per_qubit(single: NoiseChannel, n: usize, targets: &[usize]) -> Result<NoiseChannel> {
    // Independent single-qubit channels compose into one Kraus set.
    let mut kraus = vec![crate::cmat::CMat::identity(1 << n)];
    for &t in targets {
        let embedded = single.embed(n, &[t])?;
        let mut next = Vec::with_capacity(kraus.len() * embedded.kraus_operators().len());
        for k in embedded.kraus_operators() {
            for prev in kraus.iter() {
                next.push(k.mul(prev));
            }
        }
        kraus = next;
    }
    NoiseChannel::from_kraus(n, kraus)
}

/// Per-qubit classical measurement flip probabilities.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct MeasureFlips {
    /// P(read 1 | true 0).
    pub p01: f64,
    /// P(read 0 | true 1).
    pub p10: f64,
}

impl MeasureFlips {
    pub fn symmetric(p: f64) -> Self {
        Self { p01: p, p10: p }
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.p01, self.p10] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(alloc::format!(
                    "flip probability {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Full noise model for one experiment.
#[derive(Clone, Debug, Default)]
pub struct NoiseModel {
    /// Applied to the register once, before any gate.
    pub state_prep: ChannelSpec,
    /// Applied after each single-qubit gate, on its wire.
    pub single_qubit: ChannelSpec,
    /// Applied after each two-qubit gate, on its wire pair.
    pub two_qubit: ChannelSpec,
    /// Extra channel after each explicit CNOT (bare-platform penalty).
    pub cnot_penalty: ChannelSpec,
    /// Applied per gate layer to every wire not touched by the gate.
    pub idle: ChannelSpec,
    /// Applied once per group element, across the element scope wires.
    pub element: ChannelSpec,
    /// Coherent exp(i theta Z Z) rotations fired after every gate layer.
    pub crosstalk: Vec<ZzPair>,
    /// Per-qubit measurement flips (index = wire). Empty means noiseless.
    pub measure_flips: Vec<MeasureFlips>,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ZzPair {
    pub a: usize,
    pub b: usize,
    pub theta: f64,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        for spec in [
            &self.state_prep,
            &self.single_qubit,
            &self.two_qubit,
            &self.cnot_penalty,
            &self.idle,
            &self.element,
        ] {
            spec.validate()?;
        }
        for pair in self.crosstalk.iter() {
            if pair.a == pair.b {
                return Err(Error::InvalidParameter(alloc::string::String::from(
                    "crosstalk pair must name two distinct wires",
                )));
            }
            if !pair.theta.is_finite() {
                return Err(Error::InvalidParameter(alloc::string::String::from(
                    "crosstalk angle must be finite",
                )));
            }
        }
        for f in self.measure_flips.iter() {
            f.validate()?;
        }
        Ok(())
    }

    pub fn is_noiseless_gates(&self) -> bool {
        self.single_qubit.is_none()
            && self.two_qubit.is_none()
            && self.cnot_penalty.is_none()
            && self.idle.is_none()
            && self.element.is_none()
            && self.crosstalk.is_empty()
    }

    pub fn flips_for(&self, wire: usize) -> MeasureFlips {
        self.measure_flips.get(wire).copied().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_catches_bad_parameters() {
        let mut model = NoiseModel::noiseless();
        model.single_qubit = ChannelSpec::Depolarizing { p: 1.5 };
        assert!(model.validate().is_err());
        model.single_qubit = ChannelSpec::None;
        model.crosstalk = vec![ZzPair { a: 1, b: 1, theta: 0.1 }];
        assert!(model.validate().is_err());
        model.crosstalk = vec![ZzPair { a: 0, b: 1, theta: f64::NAN }];
        assert!(model.validate().is_err());
    }

    #[test]
    fn per_qubit_flip_composition_is_trace_preserving() {
        let spec = ChannelSpec::BitFlip { p: 0.25 };
        let ch = spec.realize(3, &[0, 2]).unwrap().unwrap();
        // from_kraus already checked completeness; spot check the action.
        let mut rho = crate::cmat::CMat::zeros(8, 8);
        rho[(0, 0)] = crate::cmat::ONE;
        let out = ch.apply(&rho);
        // Flip probabilities multiply independently on wires 0 and 2.
        assert!((out[(0, 0)].re - 0.5625).abs() < 1e-12);
        assert!((out[(4, 4)].re - 0.1875).abs() < 1e-12);
        assert!((out[(1, 1)].re - 0.1875).abs() < 1e-12);
        assert!((out[(5, 5)].re - 0.0625).abs() < 1e-12);
    }
}
