//! The two-way bridge between Kripke models and sequence valuations.
//!
//! A sequence value's component at index `n` lives on catalog frame
//! `n`, so a valuation induces a Kripke model on that frame by reading
//! off component `n` of every atom; conversely a model over frame `n`
//! induces a valuation whose atoms carry the model's truth sets at
//! component `n` and are full everywhere else. Forcing in the model
//! and component `n` of the evaluated sequence then agree on every
//! formula and world — [`forcing_component_mismatch`] is the exact
//! comparator for that claim, and [`check_lemma3`] stress-tests it in
//! both directions with seeded random formulas, models, and
//! valuations, shrinking any discrepancy to a minimal subformula.
//!
//! On top of the bridge sit two independently-computed validity
//! notions used to cross-check the engines against each other:
//! [`bounded_kripke_valid`] (forcing everywhere on the first `n`
//! catalog frames) and [`designated_under_all_induced`] (the evaluated
//! sequence is designated under every valuation induced from a model
//! on those frames). They agree on every formula.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::catalog::FrameCatalog;
use crate::formula::Formula;
use crate::kripke::{Model, ModelError, Upset};
use crate::validity::assignment_model;
use crate::values::{extend_valuation, EvalError, Tail, Valuation, ValueError, ValueSeq};

/// Errors from bridging models and valuations.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum BridgeError {
    /// The model's frame is not the catalog frame at the given index.
    #[error("model frame does not match catalog frame {index}")]
    FrameMismatch { index: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Builds the Kripke model on catalog frame `index` whose atoms are
/// the `index` components of the valuation's values.
pub fn induced_model(
    catalog: &FrameCatalog,
    valuation: &Valuation,
    index: usize,
) -> Result<Model, BridgeError> {
    let frame = catalog.frame_at(index);
    let mut val = BTreeMap::new();
    for (atom, value) in valuation.entries() {
        val.insert(atom.clone(), value.component(catalog, index));
    }
    Ok(Model::new(frame, val)?)
}

/// Builds the valuation induced by a model over catalog frame `index`:
/// every atom's value has the model's truth set as component `index`,
/// full sets at every other prefix component, and an all-ones tail.
pub fn induced_valuation(
    catalog: &FrameCatalog,
    model: &Model,
    index: usize,
) -> Result<Valuation, BridgeError> {
    if !catalog.frame_at(index).same_shape(model.frame()) {
        return Err(BridgeError::FrameMismatch { index });
    }
    let mut valuation = Valuation::new();
    for atom in model.atoms() {
        let truth_set = model.truth_set(&Formula::atom(atom));
        let prefix: Vec<_> = (0..=index)
            .map(|i| {
                if i == index {
                    catalog
                        .frame_at(i)
                        .upset(truth_set.set())
                        .expect("truth sets are upsets of the matching frame")
                } else {
                    catalog.frame_at(i).full_upset()
                }
            })
            .collect();
        let value = ValueSeq::new(catalog, prefix, Tail::AllOnes)?;
        valuation.set(atom, value)?;
    }
    Ok(valuation)
}

/// Compares forcing in `model` against component `index` of the
/// evaluated sequence, world by world. Returns the first world where
/// they disagree, or `None` when they agree everywhere — the expected
/// outcome whenever `model` and `valuation` are induced from each
/// other at `index`.
pub fn forcing_component_mismatch(
    catalog: &FrameCatalog,
    model: &Model,
    valuation: &Valuation,
    index: usize,
    formula: &Formula,
) -> Result<Option<usize>, BridgeError> {
    if !catalog.frame_at(index).same_shape(model.frame()) {
        return Err(BridgeError::FrameMismatch { index });
    }
    let value = extend_valuation(catalog, valuation, formula)?;
    let component = value.component(catalog, index);
    Ok((0..model.frame().n())
        .find(|&world| model.forces(world, formula) != component.set().contains(world)))
}

/// Forcing at every world of every assignment over the first
/// `frame_count` catalog frames.
pub fn bounded_kripke_valid(catalog: &FrameCatalog, formula: &Formula, frame_count: usize) -> bool {
    assert!(frame_count >= 1, "at least one frame is required");
    let atoms: Vec<String> = formula.atoms().into_iter().collect();
    (0..frame_count).all(|i| {
        let frame = catalog.frame_at(i);
        let upsets = frame.all_upsets();
        let assignments = (upsets.len() as u64)
            .checked_pow(atoms.len() as u32)
            .expect("assignment space fits in u64");
        (0..assignments).all(|code| {
            let model = assignment_model(&frame, &atoms, &upsets, code);
            (0..frame.n()).all(|world| model.forces(world, formula))
        })
    })
}

/// Designation of the evaluated sequence under every valuation induced
/// from an assignment model on the first `frame_count` catalog frames.
/// Agrees with [`bounded_kripke_valid`] on every formula.
pub fn designated_under_all_induced(
    catalog: &FrameCatalog,
    formula: &Formula,
    frame_count: usize,
) -> bool {
    assert!(frame_count >= 1, "at least one frame is required");
    let atoms: Vec<String> = formula.atoms().into_iter().collect();
    (0..frame_count).all(|i| {
        let frame = catalog.frame_at(i);
        let upsets = frame.all_upsets();
        let assignments = (upsets.len() as u64)
            .checked_pow(atoms.len() as u32)
            .expect("assignment space fits in u64");
        (0..assignments).all(|code| {
            let model = assignment_model(&frame, &atoms, &upsets, code);
            let valuation =
                induced_valuation(catalog, &model, i).expect("model was built on frame i");
            let value = extend_valuation(catalog, &valuation, formula)
                .expect("the valuation covers the formula's atoms");
            value.is_designated()
        })
    })
}

/// Which side of the bridge a randomized trial started from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lemma3Direction {
    /// Random valuation, compared against its induced model.
    ValuationToModel,
    /// Random model, compared against its induced valuation.
    ModelToValuation,
}

impl Lemma3Direction {
    pub fn name(self) -> &'static str {
        match self {
            Lemma3Direction::ValuationToModel => "valuation-to-model",
            Lemma3Direction::ModelToValuation => "model-to-valuation",
        }
    }
}

/// A disagreement found by [`check_lemma3`], shrunk so that every
/// proper subformula of `formula` agrees on all worlds.
#[derive(Clone, Debug)]
pub struct Lemma3Violation {
    pub direction: Lemma3Direction,
    pub frame_index: usize,
    pub world: usize,
    pub formula: Formula,
}

/// Options for the randomized bridge check.
#[derive(Clone, Copy, Debug)]
pub struct Lemma3Options {
    /// Maximum connective depth of sampled formulas.
    pub depth: usize,
    /// Catalog frames 0..frames are sampled.
    pub frames: usize,
    /// Number of trials; each runs both directions.
    pub trials: u64,
    /// Seed for the reproducible generator.
    pub seed: u64,
}

impl Default for Lemma3Options {
    fn default() -> Lemma3Options {
        Lemma3Options {
            depth: 3,
            frames: 5,
            trials: 200,
            seed: 7,
        }
    }
}

/// Outcome of [`check_lemma3`]: how much was checked and every
/// violation found (none, if the bridge holds).
#[derive(Clone, Debug)]
pub struct Lemma3Report {
    pub trials: u64,
    pub comparisons: u64,
    pub violations: Vec<Lemma3Violation>,
}

const SAMPLE_ATOMS: [&str; 3] = ["p", "q", "r"];

/// Samples a formula over `atoms` with connective depth at most `depth`.
pub fn random_formula(rng: &mut impl Rng, atoms: &[&str], depth: usize) -> Formula {
    let leaf = |rng: &mut dyn rand::RngCore| {
        let choice = rng.gen_range(0..=atoms.len());
        if choice == atoms.len() {
            Formula::Top
        } else {
            Formula::atom(atoms[choice])
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..6u8) {
        0 | 1 => leaf(rng),
        2 => Formula::neg(random_formula(rng, atoms, depth - 1)),
        3 => Formula::and(
            random_formula(rng, atoms, depth - 1),
            random_formula(rng, atoms, depth - 1),
        ),
        4 => Formula::or(
            random_formula(rng, atoms, depth - 1),
            random_formula(rng, atoms, depth - 1),
        ),
        _ => Formula::imp(
            random_formula(rng, atoms, depth - 1),
            random_formula(rng, atoms, depth - 1),
        ),
    }
}

/// Samples a model on catalog frame `frame_index` with one uniformly
/// chosen upset per atom.
pub fn random_model(
    catalog: &FrameCatalog,
    rng: &mut impl Rng,
    frame_index: usize,
    atoms: &[&str],
) -> Model {
    let frame = catalog.frame_at(frame_index);
    let upsets = frame.all_upsets();
    let val: BTreeMap<String, _> = atoms
        .iter()
        .map(|atom| {
            let upset = upsets[rng.gen_range(0..upsets.len())];
            (atom.to_string(), upset)
        })
        .collect();
    Model::new(frame, val).expect("sampled sets are upsets")
}

/// Samples a valuation with prefix length at most `max_prefix`, one
/// uniformly chosen upset per prefix component, and a fair-coin tail.
pub fn random_valuation(
    catalog: &FrameCatalog,
    rng: &mut impl Rng,
    max_prefix: usize,
    atoms: &[&str],
) -> Valuation {
    let mut valuation = Valuation::new();
    for atom in atoms {
        let len = rng.gen_range(0..=max_prefix);
        let prefix: Vec<Upset> = (0..len)
            .map(|i| {
                let upsets = catalog.frame_at(i).all_upsets();
                upsets[rng.gen_range(0..upsets.len())]
            })
            .collect();
        let tail = if rng.gen_bool(0.5) {
            Tail::AllOnes
        } else {
            Tail::AllZeros
        };
        let value = ValueSeq::new(catalog, prefix, tail).expect("sampled components are upsets");
        valuation.set(atom, value).expect("atom names are valid");
    }
    valuation
}

fn shrink_violation(
    catalog: &FrameCatalog,
    model: &Model,
    valuation: &Valuation,
    index: usize,
    formula: &Formula,
) -> (Formula, usize) {
    let children: Vec<&Formula> = match formula {
        Formula::Top | Formula::Atom(_) => vec![],
        Formula::Neg(g) => vec![g],
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => vec![a, b],
    };
    for child in children {
        if let Ok(Some(_)) = forcing_component_mismatch(catalog, model, valuation, index, child) {
            return shrink_violation(catalog, model, valuation, index, child);
        }
    }
    let world = forcing_component_mismatch(catalog, model, valuation, index, formula)
        .expect("bridge inputs stay well-formed while shrinking")
        .expect("formula still violates after shrinking");
    (formula.clone(), world)
}

/// Randomized two-directional check that forcing matches component
/// evaluation across the bridge. Deterministic for a fixed seed.
pub fn check_lemma3(catalog: &FrameCatalog, options: &Lemma3Options) -> Lemma3Report {
    assert!(options.frames >= 1, "at least one frame is required");
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut report = Lemma3Report {
        trials: options.trials,
        comparisons: 0,
        violations: Vec::new(),
    };
    for _ in 0..options.trials {
        let frame_index = rng.gen_range(0..options.frames);
        let formula = random_formula(&mut rng, &SAMPLE_ATOMS, options.depth);

        let valuation = random_valuation(catalog, &mut rng, options.frames, &SAMPLE_ATOMS);
        let model =
            induced_model(catalog, &valuation, frame_index).expect("induced model is well-formed");
        report.comparisons += 1;
        if forcing_component_mismatch(catalog, &model, &valuation, frame_index, &formula)
            .expect("induced pair is comparable")
            .is_some()
        {
            let (formula, world) =
                shrink_violation(catalog, &model, &valuation, frame_index, &formula);
            report.violations.push(Lemma3Violation {
                direction: Lemma3Direction::ValuationToModel,
                frame_index,
                world,
                formula,
            });
        }

        let model = random_model(catalog, &mut rng, frame_index, &SAMPLE_ATOMS);
        let valuation =
            induced_valuation(catalog, &model, frame_index).expect("model sits on frame_index");
        report.comparisons += 1;
        if forcing_component_mismatch(catalog, &model, &valuation, frame_index, &formula)
            .expect("induced pair is comparable")
            .is_some()
        {
            let (formula, world) =
                shrink_violation(catalog, &model, &valuation, frame_index, &formula);
            report.violations.push(Lemma3Violation {
                direction: Lemma3Direction::ModelToValuation,
                frame_index,
                world,
                formula,
            });
        }
    }
    report
}
