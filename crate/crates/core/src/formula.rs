//! Propositional formulas over the language `{~, &, |, ->, T}`.
//!
//! The abstract syntax is a plain tree: the constant `T` (verum), atoms,
//! negation, conjunction, disjunction, and implication. There is no
//! falsum constant; refutation is expressed through negation.
//!
//! [`Formula`] values render to a canonical text form with minimal
//! parentheses (see [`Formula::fmt`]), and `parse(render(f)) == f` holds
//! for every formula. [`Fragment`] describes a sub-language (a subset of
//! connectives over a finite atom alphabet), and [`enumerate_formulas`]
//! streams every fragment formula up to a depth bound in a deterministic
//! order.

use std::collections::BTreeSet;
use std::fmt;

/// A propositional formula.
///
/// Binary connectives box both children; helper constructors
/// ([`Formula::atom`], [`Formula::neg`], …) keep call sites readable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    /// The constant true formula `T`.
    Top,
    /// A propositional atom; names match `[a-z][a-z0-9_]*`.
    Atom(String),
    /// Negation `~f`.
    Neg(Box<Formula>),
    /// Conjunction `f & g`.
    And(Box<Formula>, Box<Formula>),
    /// Disjunction `f | g`.
    Or(Box<Formula>, Box<Formula>),
    /// Implication `f -> g`.
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    // An associated constructor taking the operand by value, not a
    // `self` method; the std::ops::Neg name collision is intentional.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn imp(f: Formula, g: Formula) -> Formula {
        Formula::Imp(Box::new(f), Box::new(g))
    }

    /// The sorted set of atom names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        self.collect_atoms(&mut acc);
        acc
    }

    fn collect_atoms(&self, acc: &mut BTreeSet<String>) {
        match self {
            Formula::Top => {}
            Formula::Atom(name) => {
                acc.insert(name.clone());
            }
            Formula::Neg(f) => f.collect_atoms(acc),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Imp(f, g) => {
                f.collect_atoms(acc);
                g.collect_atoms(acc);
            }
        }
    }

    /// Tree depth: atoms and `T` have depth 0, every connective adds 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Atom(_) => 0,
            Formula::Neg(f) => 1 + f.depth(),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Imp(f, g) => {
                1 + f.depth().max(g.depth())
            }
        }
    }

    /// Binding strength used by the renderer and the parser:
    /// `->` (1) < `|` (2) < `&` (3) < `~` (4) < atoms and `T` (5).
    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Neg(..) => 4,
            Formula::Top | Formula::Atom(_) => 5,
        }
    }

    /// Writes `self`, parenthesizing iff its precedence is below `min`.
    ///
    /// `&` and `|` associate to the left, `->` to the right, so the left
    /// child of `&`/`|` may sit at the parent's own level while the right
    /// child must bind strictly tighter (and symmetrically for `->`).
    fn write_with(&self, out: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            out.write_str("(")?;
            self.write_with(out, 0)?;
            return out.write_str(")");
        }
        match self {
            Formula::Top => out.write_str("T"),
            Formula::Atom(name) => out.write_str(name),
            Formula::Neg(f) => {
                out.write_str("~")?;
                f.write_with(out, 4)
            }
            Formula::And(f, g) => {
                f.write_with(out, 3)?;
                out.write_str(" & ")?;
                g.write_with(out, 4)
            }
            Formula::Or(f, g) => {
                f.write_with(out, 2)?;
                out.write_str(" | ")?;
                g.write_with(out, 3)
            }
            Formula::Imp(f, g) => {
                f.write_with(out, 2)?;
                out.write_str(" -> ")?;
                g.write_with(out, 1)
            }
        }
    }

    /// Canonical text form; same as the `Display` impl.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Formula {
    /// Canonical rendering with minimal parentheses. Re-parsing the
    /// output reproduces the formula exactly, so rendering is injective.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(out, 0)
    }
}

/// A connective of the language; `Top` counts as a nullary connective so
/// that fragments can include or exclude the constant.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Connective {
    Neg,
    And,
    Or,
    Imp,
    Top,
}

/// A sub-language: a subset of connectives over a finite atom alphabet.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Fragment {
    pub connectives: BTreeSet<Connective>,
    pub atoms: BTreeSet<String>,
}

impl Fragment {
    pub fn new<C, A, S>(connectives: C, atoms: A) -> Fragment
    where
        C: IntoIterator<Item = Connective>,
        A: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Fragment {
            connectives: connectives.into_iter().collect(),
            atoms: atoms.into_iter().map(Into::into).collect(),
        }
    }
}

/// Whether every connective and atom of `f` belongs to the fragment.
pub fn in_fragment(f: &Formula, fragment: &Fragment) -> bool {
    match f {
        Formula::Top => fragment.connectives.contains(&Connective::Top),
        Formula::Atom(name) => fragment.atoms.contains(name),
        Formula::Neg(g) => {
            fragment.connectives.contains(&Connective::Neg) && in_fragment(g, fragment)
        }
        Formula::And(g, h) => {
            fragment.connectives.contains(&Connective::And)
                && in_fragment(g, fragment)
                && in_fragment(h, fragment)
        }
        Formula::Or(g, h) => {
            fragment.connectives.contains(&Connective::Or)
                && in_fragment(g, fragment)
                && in_fragment(h, fragment)
        }
        Formula::Imp(g, h) => {
            fragment.connectives.contains(&Connective::Imp)
                && in_fragment(g, fragment)
                && in_fragment(h, fragment)
        }
    }
}

/// Streams every fragment formula of depth at most `max_depth`, each
/// exactly once.
///
/// Order: ascending depth, and within one depth stratum lexicographic on
/// the canonical rendering. Strata are materialized one at a time, so
/// memory follows the largest stratum consumed; stratum sizes grow
/// doubly exponentially with depth, which callers must budget for.
pub fn enumerate_formulas(fragment: &Fragment, max_depth: usize) -> impl Iterator<Item = Formula> {
    FormulaStream {
        fragment: fragment.clone(),
        max_depth,
        strata: Vec::new(),
        current: Vec::new().into_iter(),
        next_depth: 0,
    }
}

struct FormulaStream {
    fragment: Fragment,
    max_depth: usize,
    /// Strata already produced, indexed by exact depth.
    strata: Vec<Vec<Formula>>,
    current: std::vec::IntoIter<Formula>,
    next_depth: usize,
}

impl FormulaStream {
    /// Builds the stratum of formulas with exact depth `d`, sorted by
    /// rendering. Distinct trees render distinctly, so no deduplication
    /// is needed.
    fn build_stratum(&self, d: usize) -> Vec<Formula> {
        let mut out = Vec::new();
        let conns = &self.fragment.connectives;
        if d == 0 {
            if conns.contains(&Connective::Top) {
                out.push(Formula::Top);
            }
            out.extend(self.fragment.atoms.iter().map(Formula::atom));
        } else {
            if conns.contains(&Connective::Neg) {
                out.extend(self.strata[d - 1].iter().cloned().map(Formula::neg));
            }
            // A binary node has exact depth d iff both children have
            // depth <= d-1 and at least one has exactly d-1.
            for dl in 0..d {
                for dr in 0..d {
                    if dl.max(dr) != d - 1 {
                        continue;
                    }
                    for l in &self.strata[dl] {
                        for r in &self.strata[dr] {
                            if conns.contains(&Connective::And) {
                                out.push(Formula::and(l.clone(), r.clone()));
                            }
                            if conns.contains(&Connective::Or) {
                                out.push(Formula::or(l.clone(), r.clone()));
                            }
                            if conns.contains(&Connective::Imp) {
                                out.push(Formula::imp(l.clone(), r.clone()));
                            }
                        }
                    }
                }
            }
        }
        out.sort_by_key(|f| f.render());
        out
    }
}

impl Iterator for FormulaStream {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            if let Some(f) = self.current.next() {
                return Some(f);
            }
            if self.next_depth > self.max_depth {
                return None;
            }
            let stratum = self.build_stratum(self.next_depth);
            self.strata.push(stratum.clone());
            self.current = stratum.into_iter();
            self.next_depth += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn renders_precedence_with_minimal_parentheses() {
        // -> binds loosest and associates right.
        let f = Formula::imp(p(), Formula::imp(q(), p()));
        assert_eq!(f.render(), "p -> q -> p");
        let g = Formula::imp(Formula::imp(p(), q()), p());
        assert_eq!(g.render(), "(p -> q) -> p");
        // & binds tighter than |, both associate left.
        let h = Formula::or(Formula::and(p(), q()), p());
        assert_eq!(h.render(), "p & q | p");
        let i = Formula::and(p(), Formula::and(q(), p()));
        assert_eq!(i.render(), "p & (q & p)");
        let j = Formula::and(Formula::and(p(), q()), p());
        assert_eq!(j.render(), "p & q & p");
        // ~ binds tightest.
        assert_eq!(Formula::neg(Formula::neg(p())).render(), "~~p");
        assert_eq!(Formula::neg(Formula::and(p(), q())).render(), "~(p & q)");
        assert_eq!(Formula::or(Formula::neg(p()), q()).render(), "~p | q");
        assert_eq!(Formula::neg(Formula::Top).render(), "~T");
    }

    #[test]
    fn disjunction_of_implications_parenthesizes_each_disjunct() {
        let f = Formula::or(Formula::imp(p(), q()), Formula::imp(q(), p()));
        assert_eq!(f.render(), "(p -> q) | (q -> p)");
    }

    #[test]
    fn atoms_are_sorted_and_deduplicated() {
        let f = parse("q & p | ~q -> p").unwrap();
        let atoms: Vec<_> = f.atoms().into_iter().collect();
        assert_eq!(atoms, ["p", "q"]);
        assert!(Formula::Top.atoms().is_empty());
    }

    #[test]
    fn fragment_membership_checks_connectives_and_atoms() {
        let frag = Fragment::new(
            [
                Connective::Neg,
                Connective::Or,
                Connective::Imp,
                Connective::Top,
            ],
            ["p", "q"],
        );
        assert!(in_fragment(&parse("~p | (q -> T)").unwrap(), &frag));
        // & is outside the fragment.
        assert!(!in_fragment(&parse("p & q").unwrap(), &frag));
        // r is outside the atom alphabet.
        assert!(!in_fragment(&parse("p | r").unwrap(), &frag));
    }

    #[test]
    fn enumerate_depth_zero_orders_top_before_atoms() {
        let frag = Fragment::new([Connective::Top], ["p"]);
        let got: Vec<_> = enumerate_formulas(&frag, 0).map(|f| f.render()).collect();
        assert_eq!(got, ["T", "p"]);
    }

    #[test]
    fn enumerate_orders_by_depth_then_rendering() {
        let frag = Fragment::new([Connective::Neg], ["p"]);
        let got: Vec<_> = enumerate_formulas(&frag, 2).map(|f| f.render()).collect();
        assert_eq!(got, ["p", "~p", "~~p"]);
    }

    /// Independent count of distinct fragment formulas with depth <= d:
    /// base cases are the atoms plus `T` when present, and a formula of
    /// positive depth is a connective applied to shallower formulas.
    fn count_up_to_depth(frag: &Fragment, d: usize) -> u64 {
        let base = frag.atoms.len() as u64 + u64::from(frag.connectives.contains(&Connective::Top));
        if d == 0 {
            return base;
        }
        let below = count_up_to_depth(frag, d - 1);
        let unary = u64::from(frag.connectives.contains(&Connective::Neg));
        let binary = [Connective::And, Connective::Or, Connective::Imp]
            .iter()
            .filter(|c| frag.connectives.contains(c))
            .count() as u64;
        // Exactly the formulas of depth <= d-1, plus one connective
        // layer over children of depth <= d-1 (at least one child of
        // depth exactly d-1 is implied by not being counted earlier).
        base + unary * below + binary * below * below
    }

    #[test]
    fn enumerate_count_matches_recurrence() {
        let frag = Fragment::new([Connective::Neg, Connective::And], ["p", "q"]);
        assert_eq!(count_up_to_depth(&frag, 2), 74);
        assert_eq!(enumerate_formulas(&frag, 2).count(), 74);

        let full = Fragment::new(
            [
                Connective::Neg,
                Connective::And,
                Connective::Or,
                Connective::Imp,
                Connective::Top,
            ],
            ["p"],
        );
        assert_eq!(
            enumerate_formulas(&full, 2).count() as u64,
            count_up_to_depth(&full, 2)
        );
    }

    #[test]
    fn enumerate_yields_each_formula_once_inside_fragment() {
        let frag = Fragment::new(
            [Connective::Neg, Connective::Imp, Connective::Top],
            ["p", "q"],
        );
        let all: Vec<_> = enumerate_formulas(&frag, 2).collect();
        let mut seen = BTreeSet::new();
        for f in &all {
            assert!(in_fragment(f, &frag), "{f} escaped the fragment");
            assert!(f.depth() <= 2);
            assert!(seen.insert(f.clone()), "{f} enumerated twice");
        }
        // Depths are non-decreasing along the stream.
        let depths: Vec<_> = all.iter().map(Formula::depth).collect();
        let mut sorted = depths.clone();
        sorted.sort_unstable();
        assert_eq!(depths, sorted);
    }
}
