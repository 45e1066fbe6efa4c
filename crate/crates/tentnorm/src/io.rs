//! JSON wire formats for sequences, step functions, atom lists, and ball
//! families, with full validation on the way in.
//!
//! Serialization is deterministic: map keys are ordered and entry lists
//! follow the natural orders of the underlying types.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::atoms::ChainAtom;
use crate::dyadic::{DyadicIndex, DyadicSequence};
use crate::error::{Error, Result};
use crate::geometry::{BallFamily, ConvexBody, KBall, NormKind};
use crate::haar::StepFunction;

#[derive(Serialize, Deserialize)]
struct SequenceEntry {
    level: u32,
    index: u64,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct SequenceFile {
    entries: Vec<SequenceEntry>,
}

/// Parses `{"entries": [{"level", "index", "value"}, ...]}`; duplicate
/// coordinates and non-finite values are input errors.
pub fn sequence_from_json(text: &str) -> Result<DyadicSequence> {
    let file: SequenceFile = serde_json::from_str(text)?;
    let mut seq = DyadicSequence::new();
    for entry in file.entries {
        let interval = DyadicIndex::new(entry.level, entry.index)?;
        if !entry.value.is_finite() {
            return Err(Error::Input(format!("non-finite value at {interval}")));
        }
        if seq.get(interval) != 0.0 {
            return Err(Error::Input(format!("duplicate entry for {interval}")));
        }
        seq.set(interval, entry.value);
    }
    Ok(seq)
}

pub fn sequence_to_json(seq: &DyadicSequence) -> String {
    serde_json::to_string_pretty(&sequence_wire(seq)).expect("plain data serializes")
}

/// The `entries` wire form as a JSON value, for embedding in reports.
pub fn sequence_to_value(seq: &DyadicSequence) -> serde_json::Value {
    serde_json::to_value(sequence_wire(seq)).expect("plain data serializes")
}

fn sequence_wire(seq: &DyadicSequence) -> SequenceFile {
    let entries = seq
        .iter()
        .map(|(i, value)| SequenceEntry { level: i.level, index: i.position, value })
        .collect();
    SequenceFile { entries }
}

/// Parses `{"depth": d, "values": [...]}` with the length check of
/// [`StepFunction::new`].
pub fn step_from_json(text: &str) -> Result<StepFunction> {
    Ok(serde_json::from_str(text)?)
}

pub fn step_to_json(f: &StepFunction) -> String {
    serde_json::to_string_pretty(f).expect("plain data serializes")
}

#[derive(Serialize, Deserialize)]
struct AtomsFile {
    atoms: Vec<ChainAtom>,
}

/// Parses `{"atoms": [{"x": "k/2^j", "lambda": λ, "signs": [...]}, ...]}`.
pub fn atoms_from_json(text: &str) -> Result<Vec<ChainAtom>> {
    let file: AtomsFile = serde_json::from_str(text)?;
    Ok(file.atoms)
}

pub fn atoms_to_json(atoms: &[ChainAtom]) -> String {
    serde_json::to_string_pretty(&AtomsFile { atoms: atoms.to_vec() })
        .expect("plain data serializes")
}

#[derive(Serialize, Deserialize)]
struct BallWire {
    center: Vec<f64>,
    radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct FamilyWire {
    norm: NormKind,
    dim: usize,
    balls: Vec<BallWire>,
}

/// Parses `{"norm": "linf"|"l2"|"l1", "dim": n, "balls": [...]}`.  Weights
/// are optional per ball and default to 1 when any ball carries one.
pub fn family_from_json(text: &str) -> Result<BallFamily> {
    let wire: FamilyWire = serde_json::from_str(text)?;
    let body = ConvexBody::new(wire.dim, wire.norm)?;
    let mut balls = Vec::with_capacity(wire.balls.len());
    let mut weights = Vec::with_capacity(wire.balls.len());
    let mut any_weight = false;
    for ball in wire.balls {
        balls.push(KBall::new(ball.center, ball.radius)?);
        any_weight |= ball.weight.is_some();
        weights.push(ball.weight.unwrap_or(1.0));
    }
    BallFamily::new(body, balls, any_weight.then_some(weights))
}

pub fn family_to_json(family: &BallFamily) -> String {
    let weights = family.weights.clone();
    let balls = family
        .balls
        .iter()
        .enumerate()
        .map(|(i, b)| BallWire {
            center: b.center.clone(),
            radius: b.radius,
            weight: weights.as_ref().map(|w| w[i]),
        })
        .collect();
    let wire = FamilyWire { norm: family.body.norm, dim: family.body.dim, balls };
    serde_json::to_string_pretty(&wire).expect("plain data serializes")
}

pub fn read_sequence(path: &Path) -> Result<DyadicSequence> {
    sequence_from_json(&std::fs::read_to_string(path)?)
}

pub fn read_step(path: &Path) -> Result<StepFunction> {
    step_from_json(&std::fs::read_to_string(path)?)
}

pub fn read_atoms(path: &Path) -> Result<Vec<ChainAtom>> {
    atoms_from_json(&std::fs::read_to_string(path)?)
}

pub fn read_family(path: &Path) -> Result<BallFamily> {
    family_from_json(&std::fs::read_to_string(path)?)
}
