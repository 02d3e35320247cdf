//! Bounded validity and equivalence checking over the frame catalog.
//!
//! Three logics are told apart purely by a frame filter: classical
//! logic sees only the one-world frame, intuitionistic logic sees every
//! finite frame, and the Gödel–Dummett logic sees the connected frames
//! (any two successors of a common world comparable). A formula is
//! checked by enumerating every catalog frame within a world bound that
//! passes the filter, every assignment of upsets to its atoms, and
//! every world.
//!
//! Verdicts are *bounded*: `Valid { bound }` means no counterexample
//! with at most `bound` worlds, not logic-wide validity. A returned
//! counterexample is always the canonically first one — ordered by
//! catalog frame index, then assignment code, then world index — so
//! failures are reproducible, including under parallel search.
//!
//! The search refuses to start a frame once the running total of
//! candidate models would cross the configured ceiling; a refusal is an
//! error distinct from both verdicts.

use std::collections::BTreeMap;

use rayon::iter::{IntoParallelIterator, ParallelIterator};
use thiserror::Error;

use crate::catalog::{FrameCatalog, MAX_CATALOG_WORLDS};
use crate::formula::Formula;
use crate::kripke::{build_model, Frame, Model, ModelSpec, Upset};

/// Which frames a logic quantifies over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LogicClass {
    /// Classical: one-world frames only (forcing degenerates to the
    /// two-valued truth tables).
    Cpl,
    /// Intuitionistic: every finite frame.
    Ipl,
    /// Gödel–Dummett: connected frames.
    Gdl,
}

impl LogicClass {
    pub fn admits(self, frame: &Frame) -> bool {
        match self {
            LogicClass::Cpl => frame.n() == 1,
            LogicClass::Ipl => true,
            LogicClass::Gdl => frame.is_connected(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogicClass::Cpl => "cpl",
            LogicClass::Ipl => "ipl",
            LogicClass::Gdl => "gdl",
        }
    }
}

/// Resource controls for the exhaustive search.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    /// Maximum cumulative number of candidate models (assignments of
    /// upsets to atoms, summed over scanned frames).
    pub ceiling: u64,
    /// Worker threads for the per-frame assignment scan; 1 = serial.
    pub threads: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            ceiling: 10_000_000,
            threads: 1,
        }
    }
}

/// Refusals: the search never silently truncates.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SearchError {
    #[error(
        "search space too large: {needed} candidate models exceed the ceiling {ceiling} \
         (raise the ceiling or lower the world bound)"
    )]
    CeilingExceeded { needed: u64, ceiling: u64 },
    #[error("world bound {requested} exceeds the supported maximum {limit}")]
    BoundTooLarge { requested: usize, limit: usize },
}

/// Outcome of a bounded validity check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ValidityVerdict {
    /// No counterexample among the admitted frames with ≤ bound worlds.
    Valid { bound: usize },
    /// The canonically first failing (model, world).
    Counterexample {
        frame_index: usize,
        model: Model,
        world: usize,
    },
}

/// Outcome of a bounded equivalence check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EquivalenceVerdict {
    Equivalent {
        bound: usize,
    },
    Counterexample {
        direction: Direction,
        frame_index: usize,
        model: Model,
        world: usize,
    },
}

/// Which implication of an equivalence fails at a counterexample.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::LeftToRight => "left-to-right",
            Direction::RightToLeft => "right-to-left",
        }
    }
}

/// Exhaustively checks `f` over all catalog frames admitted by `logic`
/// with at most `max_worlds` worlds, under every assignment of upsets
/// to the atoms of `f`.
///
/// Assignments are encoded in mixed radix over the frame's upsets in
/// ascending bitmask order, with the alphabetically first atom as the
/// most significant digit; the returned counterexample is the first in
/// (frame index, assignment code, world index) order.
pub fn check_validity(
    catalog: &FrameCatalog,
    f: &Formula,
    logic: LogicClass,
    max_worlds: usize,
    limits: &SearchLimits,
) -> Result<ValidityVerdict, SearchError> {
    if max_worlds == 0 || max_worlds > MAX_CATALOG_WORLDS {
        return Err(SearchError::BoundTooLarge {
            requested: max_worlds,
            limit: MAX_CATALOG_WORLDS,
        });
    }
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let mut spent: u64 = 0;
    for (frame_index, frame) in catalog
        .frames_up_to_worlds(max_worlds)
        .into_iter()
        .enumerate()
    {
        if !logic.admits(&frame) {
            continue;
        }
        let upsets = frame.all_upsets();
        let assignment_count = (upsets.len() as u64)
            .checked_pow(atoms.len() as u32)
            .unwrap_or(u64::MAX);
        spent = spent.saturating_add(assignment_count);
        if spent > limits.ceiling {
            return Err(SearchError::CeilingExceeded {
                needed: spent,
                ceiling: limits.ceiling,
            });
        }
        let search = |code: u64| -> Option<(u64, Model, usize)> {
            let model = assignment_model(&frame, &atoms, &upsets, code);
            let world = (0..frame.n()).find(|&k| !model.forces(k, f))?;
            Some((code, model, world))
        };
        let hit = if limits.threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(limits.threads)
                .build()
                .expect("thread pool construction");
            // find_map_first keeps the canonically first hit even when
            // later codes finish earlier.
            pool.install(|| (0..assignment_count).into_par_iter().find_map_first(search))
        } else {
            (0..assignment_count).find_map(search)
        };
        if let Some((_code, model, world)) = hit {
            debug_assert!(!model.forces(world, f));
            return Ok(ValidityVerdict::Counterexample {
                frame_index,
                model,
                world,
            });
        }
    }
    Ok(ValidityVerdict::Valid { bound: max_worlds })
}

/// The model for one mixed-radix assignment code.
pub(crate) fn assignment_model(
    frame: &Frame,
    atoms: &[String],
    upsets: &[Upset],
    code: u64,
) -> Model {
    let base = upsets.len() as u64;
    let mut val = BTreeMap::new();
    let mut rest = code;
    for atom in atoms.iter().rev() {
        val.insert(atom.clone(), upsets[(rest % base) as usize]);
        rest /= base;
    }
    Model::new(frame.clone(), val).expect("upsets of the same frame")
}

/// Checks `f` and `g` for bounded equivalence: validity of the
/// conjunction of both implications. The counterexample names the
/// implication that fails at the witnessing world.
pub fn check_equivalence(
    catalog: &FrameCatalog,
    f: &Formula,
    g: &Formula,
    logic: LogicClass,
    max_worlds: usize,
    limits: &SearchLimits,
) -> Result<EquivalenceVerdict, SearchError> {
    let forward = Formula::imp(f.clone(), g.clone());
    let both = Formula::and(forward.clone(), Formula::imp(g.clone(), f.clone()));
    Ok(
        match check_validity(catalog, &both, logic, max_worlds, limits)? {
            ValidityVerdict::Valid { bound } => EquivalenceVerdict::Equivalent { bound },
            ValidityVerdict::Counterexample {
                frame_index,
                model,
                world,
            } => {
                let direction = if model.forces(world, &forward) {
                    Direction::RightToLeft
                } else {
                    Direction::LeftToRight
                };
                EquivalenceVerdict::Counterexample {
                    direction,
                    frame_index,
                    model,
                    world,
                }
            }
        },
    )
}

/// The disjunction of all implications pᵢ → p_j for 0 ≤ i < j ≤ n,
/// right-nested in lexicographic pair order, over the n+1 atoms
/// p0 … p{n}.
///
/// Any world whose successors carry at most n distinct atom truth-sets
/// forces some disjunct (two atoms share a set, or a pigeonhole pair is
/// ordered the right way), which is why a counterexample needs a world
/// seeing n+1 pairwise "decreasing" upsets.
pub fn pigeonhole_formula(n: usize) -> Formula {
    assert!(n >= 1, "at least one pair is needed");
    let atom = |i: usize| Formula::atom(format!("p{i}"));
    let mut disjuncts = Vec::new();
    for i in 0..=n {
        for j in (i + 1)..=n {
            disjuncts.push(Formula::imp(atom(i), atom(j)));
        }
    }
    let mut result = disjuncts.pop().expect("n >= 1 gives at least one pair");
    while let Some(d) = disjuncts.pop() {
        result = Formula::or(d, result);
    }
    result
}

/// The fan model refuting [`pigeonhole_formula`]`(n)`: a root `k` below
/// n pairwise incomparable leaves `k0 … k{n-1}`, leaf `ki` forcing
/// exactly the atom `pi`; the last atom `p{n}` is forced nowhere. The
/// root fails every disjunct: for each i < j, leaf `ki` forces `pi` but
/// not `pj`.
pub fn godel_fan(n: usize) -> (Model, Formula) {
    assert!(n >= 2, "a fan needs at least two leaves");
    let mut spec = ModelSpec {
        worlds: vec!["k".to_string()],
        order_pairs: Vec::new(),
        atoms: Vec::new(),
    };
    for i in 0..n {
        let leaf = format!("k{i}");
        spec.worlds.push(leaf.clone());
        spec.order_pairs.push(("k".to_string(), leaf.clone()));
        spec.atoms.push((format!("p{i}"), vec![leaf]));
    }
    spec.atoms.push((format!("p{n}"), Vec::new()));
    let model = build_model(&spec, false).expect("leaves are maximal, so atoms are persistent");
    (model, pigeonhole_formula(n))
}
