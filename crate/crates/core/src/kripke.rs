//! Finite Kripke frames and models, and the forcing relation.
//!
//! A frame is a finite non-empty poset of *worlds*: a reflexive,
//! transitive, antisymmetric accessibility order. `j ≽ i` reads "j is a
//! successor of (lies above) i"; every world is its own successor. A
//! model adds a valuation sending each atom to an *upset* (an
//! upward-closed world set), which makes atomic truth persistent.
//!
//! Forcing at a world `k`:
//!
//! * `T` is forced everywhere;
//! * an atom is forced where its valuation says so;
//! * `f & g` and `f | g` are forced locally;
//! * `~f` is forced iff no successor of `k` forces `f`;
//! * `f -> g` is forced iff every successor forcing `f` also forces `g`.
//!
//! Persistence lifts from atoms to all formulas, so every truth set is
//! again an upset; [`Model::truth_set`] checks that invariant on every
//! call rather than trusting it.
//!
//! The same four connectives act directly on upsets as *frame
//! operations* ([`apply_frame_op`]); composing them over a formula tree
//! reproduces its truth set, which the test suites cross-validate
//! against the recursive forcing evaluator.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

/// Hard cap on worlds per frame, fixed by the bitset representation.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds of one frame, as a bitmask over world indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct WorldSet(u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn from_bits(bits: u64) -> WorldSet {
        WorldSet(bits)
    }

    pub fn singleton(i: usize) -> WorldSet {
        debug_assert!(i < MAX_WORLDS);
        WorldSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> WorldSet {
        indices.into_iter().fold(WorldSet::EMPTY, WorldSet::with)
    }

    /// All worlds `0..n`.
    pub fn full(n: usize) -> WorldSet {
        debug_assert!(n <= MAX_WORLDS);
        if n == MAX_WORLDS {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1 << n) - 1)
        }
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_WORLDS && self.0 & (1 << i) != 0
    }

    #[must_use]
    pub fn with(self, i: usize) -> WorldSet {
        debug_assert!(i < MAX_WORLDS);
        WorldSet(self.0 | (1 << i))
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn minus(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// World indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// An upward-closed world set of a specific frame.
///
/// Values are only handed out by [`Frame`] constructors and operations,
/// all of which establish upward closure, so holding an `Upset` is
/// holding a proof that the closure check passed against some frame.
/// Operations that consume upsets re-validate them against *their own*
/// frame, because nothing ties the value to the frame it came from.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Upset(WorldSet);

impl Upset {
    pub fn set(self) -> WorldSet {
        self.0
    }

    pub fn bits(self) -> u64 {
        self.0.bits()
    }

    pub fn contains(self, i: usize) -> bool {
        self.0.contains(i)
    }
}

/// Errors from frame and upset construction.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum FrameError {
    #[error("a frame needs at least one world")]
    EmptyFrame,
    #[error("too many worlds: {count} (maximum {MAX_WORLDS})")]
    TooManyWorlds { count: usize },
    #[error("duplicate world name '{name}'")]
    DuplicateWorld { name: String },
    #[error("invalid world name '{name}' (use ASCII letters, digits, '_')")]
    BadWorldName { name: String },
    #[error("worlds '{a}' and '{b}' lie above each other; the order must be antisymmetric")]
    OrderCycle { a: String, b: String },
    #[error("relation is not reflexive at world '{world}'")]
    NotReflexive { world: String },
    #[error("relation is not transitive: '{via}' reaches '{to}' but '{from}' does not")]
    NotTransitive {
        from: String,
        via: String,
        to: String,
    },
    #[error("successor set out of range for world '{world}'")]
    SuccessorsOutOfRange { world: String },
    #[error("set {{{set}}} is not upward closed: world '{world}' is in, its successor '{successor}' is not")]
    NotUpwardClosed {
        set: String,
        world: String,
        successor: String,
    },
}

/// A finite poset of named worlds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Frame {
    worlds: Vec<String>,
    /// `up[i]` is the set of successors of world `i`, including `i`.
    up: Vec<WorldSet>,
}

pub(crate) fn is_valid_world_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_world_list(worlds: &[String]) -> Result<(), FrameError> {
    if worlds.is_empty() {
        return Err(FrameError::EmptyFrame);
    }
    if worlds.len() > MAX_WORLDS {
        return Err(FrameError::TooManyWorlds {
            count: worlds.len(),
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for name in worlds {
        if !is_valid_world_name(name) {
            return Err(FrameError::BadWorldName { name: name.clone() });
        }
        if !seen.insert(name) {
            return Err(FrameError::DuplicateWorld { name: name.clone() });
        }
    }
    Ok(())
}

impl Frame {
    /// Builds a frame from explicit successor sets, validating that the
    /// relation is a poset (reflexive, transitive, antisymmetric).
    pub fn new(worlds: Vec<String>, up: Vec<WorldSet>) -> Result<Frame, FrameError> {
        check_world_list(&worlds)?;
        let n = worlds.len();
        assert_eq!(up.len(), n, "one successor set per world");
        let full = WorldSet::full(n);
        for (i, &s) in up.iter().enumerate() {
            if !s.is_subset_of(full) {
                return Err(FrameError::SuccessorsOutOfRange {
                    world: worlds[i].clone(),
                });
            }
            if !s.contains(i) {
                return Err(FrameError::NotReflexive {
                    world: worlds[i].clone(),
                });
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if !up[j].is_subset_of(up[i]) {
                    let to = up[j].minus(up[i]).iter().next().expect("non-subset");
                    return Err(FrameError::NotTransitive {
                        from: worlds[i].clone(),
                        via: worlds[j].clone(),
                        to: worlds[to].clone(),
                    });
                }
                if i != j && up[j].contains(i) {
                    return Err(FrameError::OrderCycle {
                        a: worlds[i].clone(),
                        b: worlds[j].clone(),
                    });
                }
            }
        }
        Ok(Frame { worlds, up })
    }

    /// Builds a frame from generating pairs `(lower, upper)`, taking the
    /// reflexive-transitive closure. Fails if the closure collapses two
    /// distinct worlds into a cycle.
    pub fn from_order_pairs(
        worlds: Vec<String>,
        pairs: &[(usize, usize)],
    ) -> Result<Frame, FrameError> {
        check_world_list(&worlds)?;
        let n = worlds.len();
        let mut up: Vec<WorldSet> = (0..n).map(WorldSet::singleton).collect();
        for &(lo, hi) in pairs {
            assert!(lo < n && hi < n, "order pair indices in range");
            up[lo] = up[lo].with(hi);
        }
        // Transitive closure by iterating "successors of my successors
        // are my successors" to a fixpoint.
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut acc = up[i];
                for j in up[i].iter() {
                    acc = acc.union(up[j]);
                }
                if acc != up[i] {
                    up[i] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if i != j && up[j].contains(i) {
                    return Err(FrameError::OrderCycle {
                        a: worlds[i].clone(),
                        b: worlds[j].clone(),
                    });
                }
            }
        }
        Ok(Frame { worlds, up })
    }

    pub fn n(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, i: usize) -> &str {
        &self.worlds[i]
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    /// Successors of world `i` (including `i` itself).
    pub fn up(&self, i: usize) -> WorldSet {
        self.up[i]
    }

    /// Whether `j ≽ i`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn all_worlds(&self) -> WorldSet {
        WorldSet::full(self.n())
    }

    /// Whether any two successors of a common world are comparable.
    ///
    /// This is the frame condition carving out the Godel-Dummett logic;
    /// one-world frames and all chains satisfy it, and so does any
    /// disjoint union of chains, since comparability is only required
    /// above a shared world.
    pub fn is_connected(&self) -> bool {
        for k in 0..self.n() {
            let succ: Vec<usize> = self.up[k].iter().collect();
            for (a, &i) in succ.iter().enumerate() {
                for &j in &succ[a + 1..] {
                    if !self.leq(i, j) && !self.leq(j, i) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_upward_closed(&self, set: WorldSet) -> bool {
        set.iter().all(|i| self.up[i].is_subset_of(set))
    }

    /// The least upset containing `set`.
    pub fn upward_closure(&self, set: WorldSet) -> Upset {
        let mut acc = WorldSet::EMPTY;
        for i in set.iter() {
            acc = acc.union(self.up[i]);
        }
        Upset(acc)
    }

    /// Checks `set` for upward closure and wraps it.
    pub fn upset(&self, set: WorldSet) -> Result<Upset, FrameError> {
        debug_assert!(set.is_subset_of(self.all_worlds()));
        for i in set.iter() {
            let escape = self.up[i].minus(set);
            if let Some(j) = escape.iter().next() {
                return Err(FrameError::NotUpwardClosed {
                    set: self.set_names(set),
                    world: self.worlds[i].clone(),
                    successor: self.worlds[j].clone(),
                });
            }
        }
        Ok(Upset(set))
    }

    pub fn empty_upset(&self) -> Upset {
        Upset(WorldSet::EMPTY)
    }

    pub fn full_upset(&self) -> Upset {
        Upset(self.all_worlds())
    }

    /// Every upset of the frame, ascending by bitmask value.
    ///
    /// Enumerates all `2^n` world sets, so keep frames small.
    pub fn all_upsets(&self) -> Vec<Upset> {
        let n = self.n();
        assert!(n <= 24, "upset enumeration is exponential in world count");
        (0..(1u64 << n))
            .map(WorldSet::from_bits)
            .filter(|&s| self.is_upward_closed(s))
            .map(Upset)
            .collect()
    }

    /// Space-separated world names of `set`, in index order.
    pub fn set_names(&self, set: WorldSet) -> String {
        let names: Vec<&str> = set.iter().map(|i| self.worlds[i].as_str()).collect();
        names.join(" ")
    }

    /// Same successor matrix; world names are ignored.
    pub fn same_shape(&self, other: &Frame) -> bool {
        self.up == other.up
    }

    /// Exhaustive search for an order isomorphism onto `other`.
    pub fn isomorphic_to(&self, other: &Frame) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let n = self.n();
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.search_iso(other, &mut perm, &mut used)
    }

    fn search_iso(&self, other: &Frame, perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = perm.len();
        if i == self.n() {
            return true;
        }
        'candidates: for c in 0..self.n() {
            if used[c] {
                continue;
            }
            // Check order agreement with the already-placed prefix.
            for (j, &pj) in perm.iter().enumerate() {
                if self.leq(i, j) != other.leq(c, pj) || self.leq(j, i) != other.leq(pj, c) {
                    continue 'candidates;
                }
            }
            if self.leq(i, i) != other.leq(c, c) {
                continue;
            }
            perm.push(c);
            used[c] = true;
            if self.search_iso(other, perm, used) {
                return true;
            }
            perm.pop();
            used[c] = false;
        }
        false
    }

    // Frame operations on upsets. Inputs are debug-checked; the public
    // checked entry point is `apply_frame_op`.

    /// `neg f`: worlds none of whose successors lie in `f`.
    pub fn op_neg(&self, f: Upset) -> Upset {
        debug_assert!(self.is_upward_closed(f.0));
        let mut out = WorldSet::EMPTY;
        for k in 0..self.n() {
            if self.up[k].intersection(f.0).is_empty() {
                out = out.with(k);
            }
        }
        debug_assert!(self.is_upward_closed(out));
        Upset(out)
    }

    /// `and`: intersection.
    pub fn op_and(&self, f: Upset, g: Upset) -> Upset {
        debug_assert!(self.is_upward_closed(f.0) && self.is_upward_closed(g.0));
        Upset(f.0.intersection(g.0))
    }

    /// `or`: union.
    pub fn op_or(&self, f: Upset, g: Upset) -> Upset {
        debug_assert!(self.is_upward_closed(f.0) && self.is_upward_closed(g.0));
        Upset(f.0.union(g.0))
    }

    /// `imp`: worlds all of whose successors in `f` lie in `g`.
    pub fn op_imp(&self, f: Upset, g: Upset) -> Upset {
        debug_assert!(self.is_upward_closed(f.0) && self.is_upward_closed(g.0));
        let mut out = WorldSet::EMPTY;
        for k in 0..self.n() {
            if self.up[k].intersection(f.0).is_subset_of(g.0) {
                out = out.with(k);
            }
        }
        debug_assert!(self.is_upward_closed(out));
        Upset(out)
    }
}

/// The four connective actions on upsets of a frame.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FrameOp {
    Neg,
    And,
    Or,
    Imp,
}

impl FrameOp {
    pub fn arity(self) -> usize {
        match self {
            FrameOp::Neg => 1,
            FrameOp::And | FrameOp::Or | FrameOp::Imp => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FrameOp::Neg => "neg",
            FrameOp::And => "and",
            FrameOp::Or => "or",
            FrameOp::Imp => "imp",
        }
    }

    /// Applies the matching connective to whole formulas.
    pub fn build_formula(self, f: Formula, g: Option<Formula>) -> Formula {
        match self {
            FrameOp::Neg => {
                debug_assert!(g.is_none());
                Formula::neg(f)
            }
            FrameOp::And => Formula::and(f, g.expect("binary op")),
            FrameOp::Or => Formula::or(f, g.expect("binary op")),
            FrameOp::Imp => Formula::imp(f, g.expect("binary op")),
        }
    }
}

impl fmt::Display for FrameOp {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(self.name())
    }
}

/// Errors from the checked frame-operation entry point.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum OpError {
    #[error("operation '{op}' takes {expected} argument(s), got {given}")]
    Arity {
        op: FrameOp,
        expected: usize,
        given: usize,
    },
    #[error("argument is not an upset of this frame: {0}")]
    ForeignUpset(FrameError),
}

/// Applies a frame operation, validating that the inputs really are
/// upsets *of this frame* (an `Upset` built on a different frame is not
/// trusted). `g` must be present exactly for the binary operations.
pub fn apply_frame_op(
    frame: &Frame,
    op: FrameOp,
    f: Upset,
    g: Option<Upset>,
) -> Result<Upset, OpError> {
    let given = 1 + usize::from(g.is_some());
    if given != op.arity() {
        return Err(OpError::Arity {
            op,
            expected: op.arity(),
            given,
        });
    }
    let check = |u: Upset| -> Result<Upset, OpError> {
        if !u.set().is_subset_of(frame.all_worlds()) {
            return Err(OpError::ForeignUpset(FrameError::SuccessorsOutOfRange {
                world: "?".to_string(),
            }));
        }
        frame.upset(u.set()).map_err(OpError::ForeignUpset)
    };
    let f = check(f)?;
    Ok(match op {
        FrameOp::Neg => frame.op_neg(f),
        FrameOp::And => frame.op_and(f, check(g.expect("arity checked"))?),
        FrameOp::Or => frame.op_or(f, check(g.expect("arity checked"))?),
        FrameOp::Imp => frame.op_imp(f, check(g.expect("arity checked"))?),
    })
}

/// Errors from model construction and world lookup.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("unknown world '{name}'")]
    UnknownWorld { name: String },
    #[error("invalid atom name '{name}' (use [a-z][a-z0-9_]*)")]
    BadAtomName { name: String },
    #[error("atom '{atom}' declared twice")]
    DuplicateAtom { atom: String },
    #[error("atom '{atom}' is not persistent: forced at '{world}' but not at its successor '{successor}'")]
    NotPersistent {
        atom: String,
        world: String,
        successor: String,
    },
}

pub(crate) fn is_valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// A Kripke model: a frame plus an upset valuation for finitely many
/// atoms. Atoms absent from the valuation are forced nowhere.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Model {
    frame: Frame,
    val: BTreeMap<String, Upset>,
}

impl Model {
    pub fn new(frame: Frame, val: BTreeMap<String, Upset>) -> Result<Model, ModelError> {
        for (atom, &u) in &val {
            if !is_valid_atom_name(atom) {
                return Err(ModelError::BadAtomName { name: atom.clone() });
            }
            // Re-check against this frame; the Upset may come from
            // elsewhere.
            frame.upset(u.set()).map_err(ModelError::Frame)?;
        }
        Ok(Model { frame, val })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.val.keys().map(String::as_str)
    }

    pub fn valuation(&self, atom: &str) -> Option<Upset> {
        self.val.get(atom).copied()
    }

    /// The forcing relation, by structural recursion over the formula.
    ///
    /// This is the reference evaluator: `~` and `->` quantify over the
    /// successor worlds directly. Panics if `world` is out of range.
    pub fn forces(&self, world: usize, f: &Formula) -> bool {
        assert!(world < self.frame.n(), "world index out of range");
        match f {
            Formula::Top => true,
            Formula::Atom(name) => self.val.get(name).is_some_and(|u| u.contains(world)),
            Formula::Neg(g) => self.frame.up(world).iter().all(|k| !self.forces(k, g)),
            Formula::And(g, h) => self.forces(world, g) && self.forces(world, h),
            Formula::Or(g, h) => self.forces(world, g) || self.forces(world, h),
            Formula::Imp(g, h) => self
                .frame
                .up(world)
                .iter()
                .all(|k| !self.forces(k, g) || self.forces(k, h)),
        }
    }

    /// Forcing by world name.
    pub fn forces_named(&self, world: &str, f: &Formula) -> Result<bool, ModelError> {
        let i = self
            .frame
            .world_index(world)
            .ok_or_else(|| ModelError::UnknownWorld {
                name: world.to_string(),
            })?;
        Ok(self.forces(i, f))
    }

    /// The set of worlds forcing `f`.
    ///
    /// Persistence makes every truth set an upset; this asserts that
    /// rather than assuming it, so a broken evaluator cannot hand out
    /// an `Upset` that is not upward closed.
    pub fn truth_set(&self, f: &Formula) -> Upset {
        let mut set = WorldSet::EMPTY;
        for k in 0..self.frame.n() {
            if self.forces(k, f) {
                set = set.with(k);
            }
        }
        self.frame
            .upset(set)
            .expect("truth sets are upward closed (persistence)")
    }
}

/// Plain data read from the model text format, before validation.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ModelSpec {
    pub worlds: Vec<String>,
    /// `(lower, upper)` pairs: the second world lies above the first.
    pub order_pairs: Vec<(String, String)>,
    pub atoms: Vec<(String, Vec<String>)>,
}

/// A syntax error in the model text format.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("model text, line {line}: {message}")]
pub struct ModelTextError {
    pub line: usize,
    pub message: String,
}

/// Parses the model text format.
///
/// One directive per line; `#` starts a comment; blank lines are
/// skipped. Directives:
///
/// ```text
/// worlds a b c     # declare all worlds (exactly one such line, first)
/// order a b        # b lies above a
/// atom p b c       # p is forced at b and c (world list may be empty)
/// ```
pub fn parse_model(text: &str) -> Result<ModelSpec, ModelTextError> {
    let mut spec = ModelSpec::default();
    let mut seen_worlds_line = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut words = body.split_whitespace();
        let directive = words.next().expect("non-empty line");
        let rest: Vec<&str> = words.collect();
        let err = |message: String| ModelTextError { line, message };
        match directive {
            "worlds" => {
                if seen_worlds_line {
                    return Err(err("duplicate 'worlds' line".to_string()));
                }
                if rest.is_empty() {
                    return Err(err("'worlds' needs at least one world name".to_string()));
                }
                seen_worlds_line = true;
                spec.worlds = rest.iter().map(|s| s.to_string()).collect();
            }
            "order" => {
                if !seen_worlds_line {
                    return Err(err("'worlds' line must come first".to_string()));
                }
                match rest.as_slice() {
                    [lo, hi] => spec.order_pairs.push((lo.to_string(), hi.to_string())),
                    _ => {
                        return Err(err(format!(
                            "'order' takes exactly two world names, got {}",
                            rest.len()
                        )))
                    }
                }
            }
            "atom" => {
                if !seen_worlds_line {
                    return Err(err("'worlds' line must come first".to_string()));
                }
                match rest.split_first() {
                    Some((name, worlds)) => spec.atoms.push((
                        name.to_string(),
                        worlds.iter().map(|s| s.to_string()).collect(),
                    )),
                    None => return Err(err("'atom' needs an atom name".to_string())),
                }
            }
            other => {
                return Err(err(format!(
                    "unknown directive '{other}' (expected 'worlds', 'order', or 'atom')"
                )))
            }
        }
    }
    if !seen_worlds_line {
        return Err(ModelTextError {
            line: text.lines().count().max(1),
            message: "missing 'worlds' line".to_string(),
        });
    }
    Ok(spec)
}

/// Validates a [`ModelSpec`] into a [`Model`].
///
/// The order pairs are closed reflexively and transitively; a cycle
/// between distinct worlds is rejected. Atom world lists that are not
/// upward closed are an error unless `close_up` is set, in which case
/// they are completed upward.
pub fn build_model(spec: &ModelSpec, close_up: bool) -> Result<Model, ModelError> {
    let lookup = |name: &str, worlds: &[String]| -> Result<usize, ModelError> {
        worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| ModelError::UnknownWorld {
                name: name.to_string(),
            })
    };
    let mut pairs = Vec::with_capacity(spec.order_pairs.len());
    for (lo, hi) in &spec.order_pairs {
        pairs.push((lookup(lo, &spec.worlds)?, lookup(hi, &spec.worlds)?));
    }
    let frame = Frame::from_order_pairs(spec.worlds.clone(), &pairs)?;
    let mut val = BTreeMap::new();
    for (atom, worlds) in &spec.atoms {
        if !is_valid_atom_name(atom) {
            return Err(ModelError::BadAtomName { name: atom.clone() });
        }
        let mut set = WorldSet::EMPTY;
        for w in worlds {
            set = set.with(lookup(w, &spec.worlds)?);
        }
        let upset = if close_up {
            frame.upward_closure(set)
        } else {
            frame.upset(set).map_err(|e| match e {
                FrameError::NotUpwardClosed {
                    world, successor, ..
                } => ModelError::NotPersistent {
                    atom: atom.clone(),
                    world,
                    successor,
                },
                other => ModelError::Frame(other),
            })?
        };
        if val.insert(atom.clone(), upset).is_some() {
            return Err(ModelError::DuplicateAtom { atom: atom.clone() });
        }
    }
    Model::new(frame, val)
}

/// Renders a model in the model text format: the `worlds` line, one
/// `order` line per covering pair (the transitive reduction, which
/// regenerates the full order on re-parse), and one `atom` line per
/// atom. The output is canonical: `parse_model` + `build_model` on it
/// reproduces the model exactly.
pub fn render_model(m: &Model) -> String {
    let frame = m.frame();
    let mut out = String::new();
    out.push_str("worlds");
    for w in frame.worlds() {
        out.push(' ');
        out.push_str(w);
    }
    out.push('\n');
    for (lo, hi) in covering_pairs(frame) {
        out.push_str(&format!(
            "order {} {}\n",
            frame.world_name(lo),
            frame.world_name(hi)
        ));
    }
    for (atom, &set) in &m.val {
        out.push_str("atom ");
        out.push_str(atom);
        for i in set.set().iter() {
            out.push(' ');
            out.push_str(frame.world_name(i));
        }
        out.push('\n');
    }
    out
}

/// The covering pairs `(lower, upper)` of the frame order: strict pairs
/// with no third world strictly between them.
pub fn covering_pairs(frame: &Frame) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..frame.n() {
        for j in frame.up(i).iter() {
            if i == j {
                continue;
            }
            let between = frame
                .up(i)
                .iter()
                .any(|m| m != i && m != j && frame.leq(m, j));
            if !between {
                pairs.push((i, j));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Convenience: parse + strict build.
pub fn model_from_text(text: &str) -> Result<Model, ModelFileError> {
    let spec = parse_model(text).map_err(ModelFileError::Text)?;
    build_model(&spec, false).map_err(ModelFileError::Model)
}

/// Errors from [`model_from_text`].
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ModelFileError {
    #[error(transparent)]
    Text(ModelTextError),
    #[error(transparent)]
    Model(ModelError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    /// The three-world frame with one top world `b` above both `a` and
    /// `c`, with `p` at `{a, b}` and `q` at `{b, c}`.
    fn lambda_model() -> Model {
        build_model(
            &parse_model("worlds a b c\norder a b\norder c b\natom p a b\natom q b c").unwrap(),
            false,
        )
        .unwrap()
    }

    #[test]
    fn forcing_on_the_one_top_model() {
        let m = lambda_model();
        let f = parse("p & q").unwrap();
        assert!(m.forces_named("b", &f).unwrap());
        assert!(!m.forces_named("a", &f).unwrap());
        assert!(!m.forces_named("c", &f).unwrap());
        assert_eq!(m.truth_set(&f).set(), WorldSet::from_indices([1]));
    }

    #[test]
    fn forcing_implication_quantifies_over_successors() {
        // Same frame, p at {a, b}, q at {b} only.
        let m = build_model(
            &parse_model("worlds a b c\norder a b\norder c b\natom p a b\natom q b").unwrap(),
            false,
        )
        .unwrap();
        let f = parse("p -> q").unwrap();
        assert!(!m.forces_named("a", &f).unwrap());
        assert!(m.forces_named("b", &f).unwrap());
        assert!(m.forces_named("c", &f).unwrap());
        assert_eq!(m.truth_set(&f).set(), WorldSet::from_indices([1, 2]));
    }

    #[test]
    fn negation_needs_every_successor_to_refute() {
        // Two-world chain 0 <= 1 with p at the top only.
        let m = build_model(
            &parse_model("worlds r t\norder r t\natom p t").unwrap(),
            false,
        )
        .unwrap();
        assert!(!m.forces_named("r", &parse("~p").unwrap()).unwrap());
        assert!(!m.forces_named("r", &parse("p").unwrap()).unwrap());
        // Hence excluded middle fails at the root.
        assert!(!m.forces_named("r", &parse("p | ~p").unwrap()).unwrap());
        // Double negation: every successor of r has a successor (t)
        // forcing p.
        assert!(m.forces_named("r", &parse("~~p").unwrap()).unwrap());
        assert!(!m.forces_named("r", &parse("~~p -> p").unwrap()).unwrap());
    }

    #[test]
    fn atoms_not_declared_are_forced_nowhere() {
        let m = lambda_model();
        assert!(!m.forces_named("b", &parse("x").unwrap()).unwrap());
        assert!(m.forces_named("b", &parse("x -> p").unwrap()).unwrap());
        assert_eq!(m.truth_set(&parse("x").unwrap()).set(), WorldSet::EMPTY);
    }

    #[test]
    fn top_is_forced_everywhere() {
        let m = lambda_model();
        assert_eq!(m.truth_set(&Formula::Top).set(), m.frame().all_worlds());
    }

    #[test]
    fn unknown_world_is_an_error() {
        let m = lambda_model();
        assert_eq!(
            m.forces_named("z", &Formula::Top).unwrap_err(),
            ModelError::UnknownWorld {
                name: "z".to_string()
            }
        );
    }

    #[test]
    fn build_model_closes_order_and_rejects_cycles() {
        // a <= b <= c: closure must add a <= c.
        let spec = parse_model("worlds a b c\norder a b\norder b c").unwrap();
        let m = build_model(&spec, false).unwrap();
        assert!(m.frame().leq(0, 2));
        // Antisymmetry violation between distinct worlds.
        let spec = parse_model("worlds a b\norder a b\norder b a").unwrap();
        match build_model(&spec, false).unwrap_err() {
            ModelError::Frame(FrameError::OrderCycle { .. }) => {}
            other => panic!("expected an order cycle, got {other:?}"),
        }
    }

    #[test]
    fn non_persistent_atoms_error_unless_closed_up() {
        let spec = parse_model("worlds a b\norder a b\natom p a").unwrap();
        match build_model(&spec, false).unwrap_err() {
            ModelError::NotPersistent {
                atom,
                world,
                successor,
            } => {
                assert_eq!(atom, "p");
                assert_eq!(world, "a");
                assert_eq!(successor, "b");
            }
            other => panic!("expected a persistence error, got {other:?}"),
        }
        let m = build_model(&spec, true).unwrap();
        assert_eq!(
            m.valuation("p").unwrap().set(),
            WorldSet::from_indices([0, 1])
        );
    }

    #[test]
    fn connectivity_of_the_fixture_frames() {
        // One top above two: connected.
        assert!(lambda_model().frame().is_connected());
        // Two disjoint chains: connected (no shared world sees both).
        let two_chains = build_model(
            &parse_model("worlds a b c d\norder a b\norder c d").unwrap(),
            false,
        )
        .unwrap();
        assert!(two_chains.frame().is_connected());
        // One bottom below two incomparable tops: not connected.
        let v = build_model(
            &parse_model("worlds a b c\norder a b\norder a c").unwrap(),
            false,
        )
        .unwrap();
        assert!(!v.frame().is_connected());
        // A single world: connected.
        let single = build_model(&parse_model("worlds w").unwrap(), false).unwrap();
        assert!(single.frame().is_connected());
    }

    #[test]
    fn frame_ops_match_their_definitions_on_the_one_top_frame() {
        let m = lambda_model();
        let fr = m.frame();
        let p = m.valuation("p").unwrap();
        let q = m.valuation("q").unwrap();
        assert_eq!(fr.op_and(p, q).set(), WorldSet::from_indices([1]));
        assert_eq!(fr.op_or(p, q).set(), WorldSet::full(3));
        assert_eq!(fr.op_neg(p).set(), WorldSet::EMPTY);
        // imp(p, q): worlds whose successors inside p stay inside q.
        assert_eq!(fr.op_imp(p, q).set(), WorldSet::from_indices([1, 2]));
        assert_eq!(fr.op_imp(q, p).set(), WorldSet::from_indices([0, 1]));
    }

    #[test]
    fn frame_ops_agree_with_forcing_on_fixture_formulas() {
        let m = lambda_model();
        let fr = m.frame();
        for (text, op_result) in [
            (
                "p & q",
                fr.op_and(m.valuation("p").unwrap(), m.valuation("q").unwrap()),
            ),
            (
                "p | q",
                fr.op_or(m.valuation("p").unwrap(), m.valuation("q").unwrap()),
            ),
            ("~p", fr.op_neg(m.valuation("p").unwrap())),
            (
                "p -> q",
                fr.op_imp(m.valuation("p").unwrap(), m.valuation("q").unwrap()),
            ),
        ] {
            assert_eq!(m.truth_set(&parse(text).unwrap()), op_result, "{text}");
        }
    }

    #[test]
    fn apply_frame_op_checks_arity_and_membership() {
        let m = lambda_model();
        let fr = m.frame();
        let p = m.valuation("p").unwrap();
        assert!(matches!(
            apply_frame_op(fr, FrameOp::Neg, p, Some(p)),
            Err(OpError::Arity { .. })
        ));
        assert!(matches!(
            apply_frame_op(fr, FrameOp::And, p, None),
            Err(OpError::Arity { .. })
        ));
        // An upset built on a different frame is re-checked here: {a}
        // (bit 0) is a fine upset on a two-world antichain, but on this
        // frame world a has successor b outside the set.
        let antichain =
            Frame::from_order_pairs(vec!["x".to_string(), "y".to_string()], &[]).unwrap();
        let foreign = antichain.upset(WorldSet::singleton(0)).unwrap();
        let err = apply_frame_op(fr, FrameOp::Neg, foreign, None);
        assert!(matches!(err, Err(OpError::ForeignUpset(_))));
    }

    #[test]
    fn truth_sets_are_upward_closed_for_sampled_formulas() {
        let m = lambda_model();
        for text in ["p", "q", "~p", "p -> q", "p | q", "~(p & q)", "~~q -> p"] {
            let f = parse(text).unwrap();
            let ts = m.truth_set(&f);
            assert!(m.frame().is_upward_closed(ts.set()), "{text}");
        }
    }

    #[test]
    fn one_world_forcing_is_classical() {
        for (p_true, q_true) in [(false, false), (false, true), (true, false), (true, true)] {
            let mut text = String::from("worlds w\n");
            if p_true {
                text.push_str("atom p w\n");
            } else {
                text.push_str("atom p\n");
            }
            if q_true {
                text.push_str("atom q w\n");
            }
            let m = build_model(&parse_model(&text).unwrap(), false).unwrap();
            let check = |s: &str, expect: bool| {
                assert_eq!(
                    m.forces(0, &parse(s).unwrap()),
                    expect,
                    "{s} with p={p_true}, q={q_true}"
                );
            };
            check("p & q", p_true && q_true);
            check("p | q", p_true || q_true);
            check("~p", !p_true);
            check("p -> q", !p_true || q_true);
            check("p | ~p", true);
            check("~~p -> p", true);
        }
    }

    #[test]
    fn model_text_roundtrip_is_identity() {
        let m = lambda_model();
        let text = render_model(&m);
        assert_eq!(
            text,
            "worlds a b c\norder a b\norder c b\natom p a b\natom q b c\n"
        );
        let again = model_from_text(&text).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn render_model_emits_covering_pairs_only() {
        // Chain a <= b <= c: the closure contains (a, c) but the text
        // shows only the two covering pairs.
        let m = build_model(
            &parse_model("worlds a b c\norder a b\norder b c\norder a c").unwrap(),
            false,
        )
        .unwrap();
        assert_eq!(render_model(&m), "worlds a b c\norder a b\norder b c\n");
        assert_eq!(model_from_text(&render_model(&m)).unwrap(), m);
    }

    #[test]
    fn parse_model_reports_line_numbers() {
        let err = parse_model("worlds a b\nborder a b").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("unknown directive 'border'"));

        let err = parse_model("order a b\nworlds a b").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("'worlds' line must come first"));

        let err = parse_model("worlds a b\norder a\n").unwrap_err();
        assert_eq!(err.line, 2);

        let err = parse_model("# only a comment\n").unwrap_err();
        assert!(err.message.contains("missing 'worlds' line"));

        let err = parse_model("worlds a b\nworlds c\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn parse_model_strips_comments_and_blank_lines() {
        let spec = parse_model(
            "# a fixture\nworlds a b # two worlds\n\norder a b # a below b\natom p b\n",
        )
        .unwrap();
        assert_eq!(spec.worlds, ["a", "b"]);
        assert_eq!(spec.order_pairs, [("a".to_string(), "b".to_string())]);
        assert_eq!(spec.atoms, [("p".to_string(), vec!["b".to_string()])]);
    }

    #[test]
    fn build_model_rejects_unknown_worlds_and_bad_names() {
        let spec = parse_model("worlds a b\norder a z").unwrap();
        assert_eq!(
            build_model(&spec, false).unwrap_err(),
            ModelError::UnknownWorld {
                name: "z".to_string()
            }
        );
        let spec = parse_model("worlds a\natom P a").unwrap();
        assert_eq!(
            build_model(&spec, false).unwrap_err(),
            ModelError::BadAtomName {
                name: "P".to_string()
            }
        );
        let spec = parse_model("worlds a\natom p a\natom p").unwrap();
        assert_eq!(
            build_model(&spec, false).unwrap_err(),
            ModelError::DuplicateAtom {
                atom: "p".to_string()
            }
        );
    }

    #[test]
    fn frame_isomorphism_ignores_names_and_detects_shape() {
        let v1 =
            Frame::from_order_pairs(vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (0, 2)])
                .unwrap();
        let v2 =
            Frame::from_order_pairs(vec!["x".into(), "y".into(), "z".into()], &[(2, 0), (2, 1)])
                .unwrap();
        let chain =
            Frame::from_order_pairs(vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (1, 2)])
                .unwrap();
        assert!(v1.isomorphic_to(&v2));
        assert!(!v1.isomorphic_to(&chain));
        assert!(!v1.same_shape(&v2));
    }

    #[test]
    fn upsets_of_the_two_chain() {
        let chain = Frame::from_order_pairs(vec!["r".into(), "t".into()], &[(0, 1)]).unwrap();
        let ups: Vec<u64> = chain.all_upsets().iter().map(|u| u.bits()).collect();
        assert_eq!(ups, [0b00, 0b10, 0b11]);
        assert!(chain.upset(WorldSet::singleton(0)).is_err());
    }
}
