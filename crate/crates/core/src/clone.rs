//! Exact connective-definability decisions on a fixed finite model.
//!
//! Whether a target upset is the truth set of *some* formula built from
//! given generators and a chosen set of connectives is decidable by
//! computing the clone closure: the least family of upsets containing
//! the generators and closed under the frame operations of the chosen
//! connectives. The frame has finitely many upsets, so the closure is a
//! finite fixpoint, and it equals the set of truth sets of *all*
//! fragment formulas — no depth bound, no approximation.
//!
//! Both answers come with machine-checkable evidence. `Definable`
//! carries a witness formula of minimal connective count whose truth
//! set is the target; `NotDefinable` carries the entire closure, which
//! any checker can verify is operation-closed, contains the
//! generators, and misses the target. A `NotDefinable` certificate on
//! one model refutes definability in every logic whose frame class
//! contains that model's frame; a `Definable` witness proves nothing
//! beyond the model and wants a separate logic-wide equivalence check.
//!
//! [`check_separation`] verifies world-transfer predicates ("every
//! fragment formula forced on these worlds is forced on one of those")
//! by scanning the closure, turning structural-induction arguments
//! into finite certificate checks.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::Formula;
use crate::kripke::{FrameError, FrameOp, Model, Upset, WorldSet};

/// A definability question: can `target` be produced from the
/// generators using the connectives, as an upset of `model`'s frame?
#[derive(Clone, Debug)]
pub struct CloneProblem {
    model: Model,
    /// Labelled starting upsets; the labels become witness leaves.
    generators: Vec<(Formula, Upset)>,
    connectives: BTreeSet<FrameOp>,
    target: Upset,
}

/// Errors from problem construction.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum CloneError {
    #[error("generator '{label}' is not an upset of the model's frame: {source}")]
    Generator { label: String, source: FrameError },
    #[error("target is not an upset of the model's frame: {source}")]
    Target { source: FrameError },
}

/// The default generator list for a model: `T` naming the full set,
/// then each atom naming its truth set, in atom order.
pub fn default_generators(model: &Model) -> Vec<(Formula, Upset)> {
    let mut generators = vec![(Formula::Top, model.frame().full_upset())];
    for atom in model.atoms() {
        generators.push((Formula::atom(atom), model.truth_set(&Formula::atom(atom))));
    }
    generators
}

impl CloneProblem {
    pub fn new(
        model: Model,
        generators: Vec<(Formula, Upset)>,
        connectives: BTreeSet<FrameOp>,
        target: Upset,
    ) -> Result<CloneProblem, CloneError> {
        for (label, upset) in &generators {
            model
                .frame()
                .upset(upset.set())
                .map_err(|source| CloneError::Generator {
                    label: label.render(),
                    source,
                })?;
        }
        model
            .frame()
            .upset(target.set())
            .map_err(|source| CloneError::Target { source })?;
        Ok(CloneProblem {
            model,
            generators,
            connectives,
            target,
        })
    }

    /// Problem with the default generators (`T` plus the model's atoms).
    pub fn with_default_generators(
        model: Model,
        connectives: BTreeSet<FrameOp>,
        target: Upset,
    ) -> Result<CloneProblem, CloneError> {
        let generators = default_generators(&model);
        CloneProblem::new(model, generators, connectives, target)
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn target(&self) -> Upset {
        self.target
    }

    pub fn connectives(&self) -> &BTreeSet<FrameOp> {
        &self.connectives
    }
}

/// One closure element: the upset, a minimal witness, and the number of
/// connective applications in that witness's construction layer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosureMember {
    pub set: Upset,
    pub witness: Formula,
    pub depth: usize,
}

/// The answer, with evidence either way.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CloneCertificate {
    Definable { witness: Formula, depth: usize },
    NotDefinable { closure: Vec<ClosureMember> },
}

/// Computes the clone closure by breadth-first fixpoint iteration.
///
/// Layer 0 holds the generators; layer d+1 holds every upset first
/// reachable by one connective application whose deepest argument lies
/// in layer d. Each new upset gets the candidate witness with the
/// lexicographically least rendering among that layer's producers, so
/// witnesses have minimal connective depth with a deterministic
/// tie-break. The result is sorted by the upset's bitmask.
pub fn clone_closure(problem: &CloneProblem) -> Vec<ClosureMember> {
    let frame = problem.model.frame();
    // bits -> member; insertion also tracked per layer for the BFS.
    let mut by_bits: BTreeMap<u64, ClosureMember> = BTreeMap::new();
    let mut last_layer: Vec<u64> = Vec::new();
    for (label, upset) in &problem.generators {
        by_bits.entry(upset.bits()).or_insert_with(|| {
            last_layer.push(upset.bits());
            ClosureMember {
                set: *upset,
                witness: label.clone(),
                depth: 0,
            }
        });
    }
    let mut depth = 0;
    while !last_layer.is_empty() {
        depth += 1;
        // Lexicographically least witness rendering per new bitmask.
        let mut candidates: BTreeMap<u64, (String, Formula)> = BTreeMap::new();
        let mut offer = |bits: u64, witness: Formula| {
            let rendering = witness.render();
            match candidates.get(&bits) {
                Some((best, _)) if *best <= rendering => {}
                _ => {
                    candidates.insert(bits, (rendering, witness));
                }
            }
        };
        let known: Vec<(u64, Formula, usize)> = by_bits
            .values()
            .map(|m| (m.set.bits(), m.witness.clone(), m.depth))
            .collect();
        let newest = depth - 1;
        for &op in &problem.connectives {
            if op.arity() == 1 {
                for (bits, witness, d) in &known {
                    if *d != newest {
                        continue;
                    }
                    let arg = frame.upset(WorldSet::from_bits(*bits)).expect("member");
                    let result = frame.op_neg(arg);
                    if !by_bits.contains_key(&result.bits()) {
                        offer(result.bits(), op.build_formula(witness.clone(), None));
                    }
                }
            } else {
                for (xb, xw, xd) in &known {
                    for (yb, yw, yd) in &known {
                        if (*xd).max(*yd) != newest {
                            continue;
                        }
                        let x = frame.upset(WorldSet::from_bits(*xb)).expect("member");
                        let y = frame.upset(WorldSet::from_bits(*yb)).expect("member");
                        let result = match op {
                            FrameOp::And => frame.op_and(x, y),
                            FrameOp::Or => frame.op_or(x, y),
                            FrameOp::Imp => frame.op_imp(x, y),
                            FrameOp::Neg => unreachable!("unary handled above"),
                        };
                        if !by_bits.contains_key(&result.bits()) {
                            offer(
                                result.bits(),
                                op.build_formula(xw.clone(), Some(yw.clone())),
                            );
                        }
                    }
                }
            }
        }
        last_layer.clear();
        for (bits, (_rendering, witness)) in candidates {
            let set = frame.upset(WorldSet::from_bits(bits)).expect("op output");
            by_bits.insert(
                bits,
                ClosureMember {
                    set,
                    witness,
                    depth,
                },
            );
            last_layer.push(bits);
        }
    }
    by_bits.into_values().collect()
}

/// Decides the problem: `Definable` with the closure's witness when the
/// target is reached, the full closure as a refutation otherwise.
pub fn check_definable(problem: &CloneProblem) -> CloneCertificate {
    let closure = clone_closure(problem);
    match closure
        .iter()
        .find(|m| m.set.bits() == problem.target.bits())
    {
        Some(member) => CloneCertificate::Definable {
            witness: member.witness.clone(),
            depth: member.depth,
        },
        None => CloneCertificate::NotDefinable { closure },
    }
}

/// Checks a transfer predicate over the closure: every member
/// containing all `premise` worlds must contain some clause of
/// `conclusion_clauses` entirely. The target plays no role here.
pub fn check_separation(
    problem: &CloneProblem,
    premise: WorldSet,
    conclusion_clauses: &[WorldSet],
) -> bool {
    clone_closure(problem).iter().all(|member| {
        !premise.is_subset_of(member.set.set())
            || conclusion_clauses
                .iter()
                .any(|clause| clause.is_subset_of(member.set.set()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::model_from_text;
    use crate::parse::parse;

    fn ops(list: &[FrameOp]) -> BTreeSet<FrameOp> {
        list.iter().copied().collect()
    }

    fn problem(model_text: &str, connectives: &[FrameOp], target: &str) -> CloneProblem {
        let model = model_from_text(model_text).unwrap();
        let target = model.truth_set(&parse(target).unwrap());
        CloneProblem::with_default_generators(model, ops(connectives), target).unwrap()
    }

    fn closure_bits(problem: &CloneProblem) -> BTreeSet<u64> {
        clone_closure(problem)
            .iter()
            .map(|m| m.set.bits())
            .collect()
    }

    const ONE_TOP: &str = "worlds a b c\norder a b\norder c b\natom p a b\natom q b c";
    const ONE_TOP_Q_TOP: &str = "worlds a b c\norder a b\norder c b\natom p a b\natom q b";
    const TWO_CHAINS: &str = "worlds a b c d\norder a b\norder c d\natom p b\natom q d";
    const ONE_ROOT: &str = "worlds a b c\norder a b\norder a c\natom p b\natom q c";

    #[test]
    fn conjunction_is_not_reachable_without_it_on_the_one_top_model() {
        let p = problem(ONE_TOP, &[FrameOp::Neg, FrameOp::Or, FrameOp::Imp], "p & q");
        assert_eq!(p.target().bits(), 0b010);
        assert_eq!(
            closure_bits(&p),
            [0b000, 0b011, 0b110, 0b111].into_iter().collect()
        );
        assert!(matches!(
            check_definable(&p),
            CloneCertificate::NotDefinable { .. }
        ));
    }

    #[test]
    fn implication_is_not_reachable_without_it_on_the_one_top_model() {
        let p = problem(
            ONE_TOP_Q_TOP,
            &[FrameOp::Neg, FrameOp::Or, FrameOp::And],
            "p -> q",
        );
        assert_eq!(p.target().bits(), 0b110);
        assert_eq!(
            closure_bits(&p),
            [0b000, 0b010, 0b011, 0b111].into_iter().collect()
        );
        assert!(matches!(
            check_definable(&p),
            CloneCertificate::NotDefinable { .. }
        ));
    }

    #[test]
    fn disjunction_is_not_reachable_on_the_two_chain_model() {
        let without_and = problem(TWO_CHAINS, &[FrameOp::Neg, FrameOp::Imp], "p | q");
        assert_eq!(without_and.target().bits(), 0b1010);
        assert_eq!(
            closure_bits(&without_and),
            [0b0000, 0b0010, 0b1000, 0b0011, 0b1100, 0b1110, 0b1011, 0b1111]
                .into_iter()
                .collect()
        );
        assert!(matches!(
            check_definable(&without_and),
            CloneCertificate::NotDefinable { .. }
        ));

        let without_imp = problem(TWO_CHAINS, &[FrameOp::Neg, FrameOp::And], "p | q");
        assert_eq!(
            closure_bits(&without_imp),
            [0b0000, 0b0010, 0b1000, 0b0011, 0b1100, 0b1111]
                .into_iter()
                .collect()
        );
        assert!(matches!(
            check_definable(&without_imp),
            CloneCertificate::NotDefinable { .. }
        ));
    }

    #[test]
    fn disjunction_is_definable_from_conjunction_and_implication() {
        let p = problem(TWO_CHAINS, &[FrameOp::And, FrameOp::Imp], "p | q");
        match check_definable(&p) {
            CloneCertificate::Definable { witness, depth } => {
                assert_eq!(witness.render(), "((p -> q) -> q) & ((q -> p) -> p)");
                assert_eq!(depth, 3);
                // The witness's truth set really is the target,
                // computed through the forcing evaluator.
                assert_eq!(p.model().truth_set(&witness), p.target());
            }
            other => panic!("expected definable, got {other:?}"),
        }
    }

    #[test]
    fn disjunction_is_not_reachable_on_the_one_root_model() {
        let p = problem(
            ONE_ROOT,
            &[FrameOp::Neg, FrameOp::And, FrameOp::Imp],
            "p | q",
        );
        assert_eq!(p.target().bits(), 0b110);
        assert_eq!(
            closure_bits(&p),
            [0b000, 0b010, 0b100, 0b111].into_iter().collect()
        );
        assert!(matches!(
            check_definable(&p),
            CloneCertificate::NotDefinable { .. }
        ));
    }

    #[test]
    fn negation_is_not_reachable_from_the_positive_connectives() {
        let p = problem(
            "worlds r t\norder r t\natom p t",
            &[FrameOp::And, FrameOp::Or, FrameOp::Imp],
            "~p",
        );
        assert_eq!(p.target().bits(), 0b00);
        assert_eq!(closure_bits(&p), [0b10, 0b11].into_iter().collect());
        assert!(matches!(
            check_definable(&p),
            CloneCertificate::NotDefinable { .. }
        ));
    }

    #[test]
    fn separation_predicates_of_the_fixture_models() {
        let w = |indices: &[usize]| WorldSet::from_indices(indices.iter().copied());
        // One-top model, fragment without conjunction: anything forced
        // at the top is forced at one of the two bottoms.
        let thm3 = problem(ONE_TOP, &[FrameOp::Neg, FrameOp::Or, FrameOp::Imp], "p & q");
        assert!(check_separation(&thm3, w(&[1]), &[w(&[0]), w(&[2])]));
        // One-top model, fragment without implication.
        let thm4 = problem(
            ONE_TOP_Q_TOP,
            &[FrameOp::Neg, FrameOp::Or, FrameOp::And],
            "p -> q",
        );
        assert!(check_separation(&thm4, w(&[1, 2]), &[w(&[0])]));
        // Two-chain model, fragment without conjunction.
        let thm6_imp = problem(TWO_CHAINS, &[FrameOp::Neg, FrameOp::Imp], "p | q");
        assert!(check_separation(&thm6_imp, w(&[1, 3]), &[w(&[0]), w(&[2])]));
        // Two-chain model, fragment without implication: both tops
        // forcing transfers to both bottoms at once.
        let thm6_and = problem(TWO_CHAINS, &[FrameOp::Neg, FrameOp::And], "p | q");
        assert!(check_separation(&thm6_and, w(&[1, 3]), &[w(&[0, 2])]));
        // One-root model, full fragment without disjunction.
        let prop1 = problem(
            ONE_ROOT,
            &[FrameOp::Neg, FrameOp::And, FrameOp::Imp],
            "p | q",
        );
        assert!(check_separation(&prop1, w(&[1, 2]), &[w(&[0])]));
    }

    #[test]
    fn separation_fails_once_the_target_is_a_generator() {
        let model = model_from_text(ONE_TOP).unwrap();
        let target = model.truth_set(&parse("p & q").unwrap());
        let mut generators = default_generators(&model);
        generators.push((Formula::atom("g"), target));
        let p = CloneProblem::new(
            model,
            generators,
            ops(&[FrameOp::Neg, FrameOp::Or, FrameOp::Imp]),
            target,
        )
        .unwrap();
        let w = |indices: &[usize]| WorldSet::from_indices(indices.iter().copied());
        assert!(!check_separation(&p, w(&[1]), &[w(&[0]), w(&[2])]));
        assert!(matches!(
            check_definable(&p),
            CloneCertificate::Definable { depth: 0, .. }
        ));
    }

    #[test]
    fn no_connectives_means_the_closure_is_the_generators() {
        let p = problem(ONE_TOP, &[], "p & q");
        assert_eq!(
            closure_bits(&p),
            [0b011, 0b110, 0b111].into_iter().collect()
        );
    }

    #[test]
    fn generator_targets_get_atomic_witnesses() {
        let p = problem(ONE_TOP, &[FrameOp::Neg, FrameOp::Or, FrameOp::Imp], "q");
        match check_definable(&p) {
            CloneCertificate::Definable { witness, depth } => {
                assert_eq!(witness, Formula::atom("q"));
                assert_eq!(depth, 0);
            }
            other => panic!("expected definable, got {other:?}"),
        }
    }

    #[test]
    fn closure_members_verify_against_the_forcing_evaluator() {
        for (text, connectives) in [
            (ONE_TOP, vec![FrameOp::Neg, FrameOp::Or, FrameOp::Imp]),
            (TWO_CHAINS, vec![FrameOp::And, FrameOp::Imp]),
            (ONE_ROOT, vec![FrameOp::Neg, FrameOp::And, FrameOp::Imp]),
        ] {
            let p = problem(text, &connectives, "p | q");
            for member in clone_closure(&p) {
                assert_eq!(
                    p.model().truth_set(&member.witness),
                    member.set,
                    "witness {} on {text}",
                    member.witness
                );
            }
        }
    }

    #[test]
    fn closure_is_an_operation_fixpoint() {
        let p = problem(ONE_TOP, &[FrameOp::Neg, FrameOp::Or, FrameOp::Imp], "p & q");
        let frame = p.model().frame();
        let members = clone_closure(&p);
        for x in &members {
            let n = frame.op_neg(x.set);
            assert!(members.iter().any(|m| m.set == n));
            for y in &members {
                for result in [frame.op_or(x.set, y.set), frame.op_imp(x.set, y.set)] {
                    assert!(
                        members.iter().any(|m| m.set == result),
                        "escaped via {:?} {:?}",
                        x.set,
                        y.set
                    );
                }
            }
        }
    }
}
