//! Sequence-valued truth values over the frame catalog.
//!
//! A truth value is an infinite sequence (U₀, U₁, U₂, …) with entry i
//! an upset of catalog frame i, required to be *eventually constant*:
//! from some point on, every entry is the full set (tail `AllOnes`) or
//! every entry is empty (tail `AllZeros`). The value space is countable
//! because each value is a finite prefix plus a one-bit tail.
//!
//! Values are kept in canonical form — the last stored prefix entry
//! differs from the tail's constant — so structural equality decides
//! semantic equality. The designated value τ is the all-ones sequence:
//! empty prefix, `AllOnes` tail.
//!
//! The connectives act componentwise through the frame operations of
//! [`crate::kripke`]; on the constant tail they reduce to the classical
//! two-valued truth tables. A valuation maps atoms to values and
//! extends to all formulas by structural recursion; a formula is a
//! tautology of this semantics when every valuation sends it to τ.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::catalog::FrameCatalog;
use crate::formula::Formula;
use crate::kripke::{is_valid_atom_name, FrameError, FrameOp, OpError, Upset, WorldSet};

/// Largest frame index accepted in the valuation text format. Keeps a
/// hostile input from demanding astronomically deep catalog chunks.
pub const MAX_COMPONENT_INDEX: usize = 1000;

/// The constant continuation of a value past its stored prefix.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Tail {
    AllZeros,
    AllOnes,
}

impl Tail {
    /// The tail's constant value as an upset of catalog frame `i`.
    pub fn constant_on(self, catalog: &FrameCatalog, i: usize) -> Upset {
        let frame = catalog.frame_at(i);
        match self {
            Tail::AllZeros => frame.empty_upset(),
            Tail::AllOnes => frame.full_upset(),
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Tail::AllZeros => "zeros",
            Tail::AllOnes => "ones",
        }
    }
}

/// An eventually constant sequence of upsets, indexed by the catalog.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ValueSeq {
    prefix: Vec<Upset>,
    tail: Tail,
}

/// Errors from value construction.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ValueError {
    #[error("component {index} is not an upset of catalog frame {index}: {source}")]
    Component { index: usize, source: FrameError },
}

impl ValueSeq {
    /// Validates every prefix entry against its catalog frame and
    /// canonicalizes (drops trailing entries equal to the tail's
    /// constant).
    pub fn new(
        catalog: &FrameCatalog,
        prefix: Vec<Upset>,
        tail: Tail,
    ) -> Result<ValueSeq, ValueError> {
        for (index, &u) in prefix.iter().enumerate() {
            catalog
                .frame_at(index)
                .upset(u.set())
                .map_err(|source| ValueError::Component { index, source })?;
        }
        let mut value = ValueSeq { prefix, tail };
        value.canonicalize(catalog);
        Ok(value)
    }

    fn canonicalize(&mut self, catalog: &FrameCatalog) {
        while let Some(&last) = self.prefix.last() {
            let i = self.prefix.len() - 1;
            if last == self.tail.constant_on(catalog, i) {
                self.prefix.pop();
            } else {
                break;
            }
        }
    }

    /// The designated value: every component full.
    pub fn tau() -> ValueSeq {
        ValueSeq {
            prefix: Vec::new(),
            tail: Tail::AllOnes,
        }
    }

    /// The all-empty value.
    pub fn bottom() -> ValueSeq {
        ValueSeq {
            prefix: Vec::new(),
            tail: Tail::AllZeros,
        }
    }

    pub fn prefix(&self) -> &[Upset] {
        &self.prefix
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Component i, reading past the prefix from the tail.
    pub fn component(&self, catalog: &FrameCatalog, i: usize) -> Upset {
        match self.prefix.get(i) {
            Some(&u) => u,
            None => self.tail.constant_on(catalog, i),
        }
    }

    /// True exactly for τ (canonical form makes this structural).
    pub fn is_designated(&self) -> bool {
        self.prefix.is_empty() && self.tail == Tail::AllOnes
    }

    /// Componentwise negation.
    pub fn neg(&self, catalog: &FrameCatalog) -> ValueSeq {
        let prefix = (0..self.prefix.len())
            .map(|i| catalog.frame_at(i).op_neg(self.prefix[i]))
            .collect();
        let tail = match self.tail {
            Tail::AllZeros => Tail::AllOnes,
            Tail::AllOnes => Tail::AllZeros,
        };
        let mut value = ValueSeq { prefix, tail };
        value.canonicalize(catalog);
        value
    }

    fn binary(&self, catalog: &FrameCatalog, other: &ValueSeq, op: FrameOp) -> ValueSeq {
        let len = self.prefix.len().max(other.prefix.len());
        let prefix = (0..len)
            .map(|i| {
                let frame = catalog.frame_at(i);
                let x = self.component(catalog, i);
                let y = other.component(catalog, i);
                match op {
                    FrameOp::And => frame.op_and(x, y),
                    FrameOp::Or => frame.op_or(x, y),
                    FrameOp::Imp => frame.op_imp(x, y),
                    FrameOp::Neg => unreachable!("binary dispatch"),
                }
            })
            .collect();
        let a = self.tail == Tail::AllOnes;
        let b = other.tail == Tail::AllOnes;
        let ones = match op {
            FrameOp::And => a && b,
            FrameOp::Or => a || b,
            FrameOp::Imp => !a || b,
            FrameOp::Neg => unreachable!("binary dispatch"),
        };
        let mut value = ValueSeq {
            prefix,
            tail: if ones { Tail::AllOnes } else { Tail::AllZeros },
        };
        value.canonicalize(catalog);
        value
    }

    /// Componentwise intersection.
    pub fn and(&self, catalog: &FrameCatalog, other: &ValueSeq) -> ValueSeq {
        self.binary(catalog, other, FrameOp::And)
    }

    /// Componentwise union.
    pub fn or(&self, catalog: &FrameCatalog, other: &ValueSeq) -> ValueSeq {
        self.binary(catalog, other, FrameOp::Or)
    }

    /// Componentwise implication.
    pub fn imp(&self, catalog: &FrameCatalog, other: &ValueSeq) -> ValueSeq {
        self.binary(catalog, other, FrameOp::Imp)
    }
}

/// Uniform dispatcher over the four sequence operations; `y` must be
/// present exactly for the binary ones.
pub fn seq_op(
    catalog: &FrameCatalog,
    op: FrameOp,
    x: &ValueSeq,
    y: Option<&ValueSeq>,
) -> Result<ValueSeq, OpError> {
    let given = 1 + usize::from(y.is_some());
    if given != op.arity() {
        return Err(OpError::Arity {
            op,
            expected: op.arity(),
            given,
        });
    }
    Ok(match op {
        FrameOp::Neg => x.neg(catalog),
        FrameOp::And => x.and(catalog, y.expect("arity checked")),
        FrameOp::Or => x.or(catalog, y.expect("arity checked")),
        FrameOp::Imp => x.imp(catalog, y.expect("arity checked")),
    })
}

/// All canonical values whose prefix length is at most `max_prefix_len`,
/// in a fixed deterministic order (by tail, then prefix length, then
/// lexicographically by component upsets).
///
/// Any value is eventually hit by raising the bound, which is the
/// countability of the value space made executable.
pub fn enumerate_values(catalog: &FrameCatalog, max_prefix_len: usize) -> Vec<ValueSeq> {
    let mut out = Vec::new();
    for tail in [Tail::AllZeros, Tail::AllOnes] {
        for len in 0..=max_prefix_len {
            let upsets_per_component: Vec<Vec<Upset>> =
                (0..len).map(|i| catalog.frame_at(i).all_upsets()).collect();
            let mut choice = vec![0usize; len];
            'product: loop {
                let prefix: Vec<Upset> = (0..len)
                    .map(|i| upsets_per_component[i][choice[i]])
                    .collect();
                let canonical = match prefix.last() {
                    None => true,
                    Some(&last) => last != tail.constant_on(catalog, len - 1),
                };
                if canonical {
                    out.push(ValueSeq { prefix, tail });
                }
                // Advance the rightmost digit.
                for i in (0..len).rev() {
                    choice[i] += 1;
                    if choice[i] < upsets_per_component[i].len() {
                        continue 'product;
                    }
                    choice[i] = 0;
                }
                break;
            }
        }
    }
    out
}

/// A finite assignment of values to atoms.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Valuation {
    map: BTreeMap<String, ValueSeq>,
}

/// Errors from evaluating a formula under a valuation.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum EvalError {
    #[error("atom '{name}' has no value in the valuation")]
    MissingAtom { name: String },
    #[error("invalid atom name '{name}' (use [a-z][a-z0-9_]*)")]
    BadAtomName { name: String },
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn set(&mut self, atom: &str, value: ValueSeq) -> Result<(), EvalError> {
        if !is_valid_atom_name(atom) {
            return Err(EvalError::BadAtomName {
                name: atom.to_string(),
            });
        }
        self.map.insert(atom.to_string(), value);
        Ok(())
    }

    pub fn get(&self, atom: &str) -> Option<&ValueSeq> {
        self.map.get(atom)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &ValueSeq)> {
        self.map.iter()
    }
}

/// Evaluates a formula under a valuation: atoms look up their value
/// (an undeclared atom is an error, not a default), `T` is τ, and each
/// connective is the corresponding sequence operation.
pub fn extend_valuation(
    catalog: &FrameCatalog,
    v: &Valuation,
    f: &Formula,
) -> Result<ValueSeq, EvalError> {
    match f {
        Formula::Top => Ok(ValueSeq::tau()),
        Formula::Atom(name) => v
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::MissingAtom { name: name.clone() }),
        Formula::Neg(g) => Ok(extend_valuation(catalog, v, g)?.neg(catalog)),
        Formula::And(g, h) => {
            Ok(extend_valuation(catalog, v, g)?.and(catalog, &extend_valuation(catalog, v, h)?))
        }
        Formula::Or(g, h) => {
            Ok(extend_valuation(catalog, v, g)?.or(catalog, &extend_valuation(catalog, v, h)?))
        }
        Formula::Imp(g, h) => {
            Ok(extend_valuation(catalog, v, g)?.imp(catalog, &extend_valuation(catalog, v, h)?))
        }
    }
}

/// A syntax or consistency error in the valuation text format.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("valuation text, line {line}: {message}")]
pub struct ValuationTextError {
    pub line: usize,
    pub message: String,
}

/// Parses the valuation text format.
///
/// One directive per line; `#` starts a comment; blank lines are
/// skipped. Directives:
///
/// ```text
/// atom p tail=ones          # declare atom p with AllOnes tail
/// component 2 p = 1 3       # component 2 of p is the upset {1, 3}
/// ```
///
/// Components refer to worlds of catalog frame 2 by index. An atom's
/// components must follow its `atom` line; unspecified components
/// default to the tail's constant. Component indices are capped at
/// [`MAX_COMPONENT_INDEX`].
pub fn parse_valuation(
    catalog: &FrameCatalog,
    text: &str,
) -> Result<Valuation, ValuationTextError> {
    struct Pending {
        tail: Tail,
        components: BTreeMap<usize, Upset>,
    }
    let mut atoms: BTreeMap<String, Pending> = BTreeMap::new();
    let mut last_atom: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| ValuationTextError { line, message };
        let words: Vec<&str> = body.split_whitespace().collect();
        match words[0] {
            "atom" => {
                let [_, name, tail_spec] = words.as_slice() else {
                    return Err(err(
                        "'atom' takes a name and tail=ones|tail=zeros".to_string()
                    ));
                };
                if !is_valid_atom_name(name) {
                    return Err(err(format!("invalid atom name '{name}'")));
                }
                let tail = match *tail_spec {
                    "tail=ones" => Tail::AllOnes,
                    "tail=zeros" => Tail::AllZeros,
                    other => {
                        return Err(err(format!(
                            "expected tail=ones or tail=zeros, found '{other}'"
                        )))
                    }
                };
                let pending = Pending {
                    tail,
                    components: BTreeMap::new(),
                };
                if atoms.insert(name.to_string(), pending).is_some() {
                    return Err(err(format!("atom '{name}' declared twice")));
                }
                last_atom = Some(name.to_string());
            }
            "component" => {
                let (header, worlds) = match words.iter().position(|&w| w == "=") {
                    Some(eq) => (&words[1..eq], &words[eq + 1..]),
                    None => {
                        return Err(err(
                            "'component' needs '=' before the world list".to_string()
                        ))
                    }
                };
                let [index_text, name] = header else {
                    return Err(err(
                        "expected 'component <frame index> <atom> = <worlds>'".to_string()
                    ));
                };
                let index: usize = index_text
                    .parse()
                    .map_err(|_| err(format!("invalid frame index '{index_text}'")))?;
                if index > MAX_COMPONENT_INDEX {
                    return Err(err(format!(
                        "frame index {index} exceeds the supported maximum {MAX_COMPONENT_INDEX}"
                    )));
                }
                let Some(pending) = atoms.get_mut(*name) else {
                    return Err(err(format!(
                        "atom '{name}' must be declared with an 'atom' line first"
                    )));
                };
                if last_atom.as_deref() != Some(*name) {
                    return Err(err(format!(
                        "component lines for '{name}' must follow its 'atom' line"
                    )));
                }
                let frame = catalog.frame_at(index);
                let mut set = WorldSet::EMPTY;
                for w in worlds {
                    let k: usize = w
                        .parse()
                        .map_err(|_| err(format!("invalid world index '{w}'")))?;
                    if k >= frame.n() {
                        return Err(err(format!(
                            "world index {k} out of range for frame {index} ({} worlds)",
                            frame.n()
                        )));
                    }
                    set = set.with(k);
                }
                let upset = frame
                    .upset(set)
                    .map_err(|e| err(format!("component is not an upset: {e}")))?;
                if pending.components.insert(index, upset).is_some() {
                    return Err(err(format!(
                        "component {index} of atom '{name}' given twice"
                    )));
                }
            }
            other => {
                return Err(err(format!(
                    "unknown directive '{other}' (expected 'atom' or 'component')"
                )))
            }
        }
    }
    let mut valuation = Valuation::new();
    for (name, pending) in atoms {
        let len = pending
            .components
            .keys()
            .next_back()
            .map_or(0, |&max| max + 1);
        let prefix: Vec<Upset> = (0..len)
            .map(|i| match pending.components.get(&i) {
                Some(&u) => u,
                None => pending.tail.constant_on(catalog, i),
            })
            .collect();
        let value = ValueSeq::new(catalog, prefix, pending.tail)
            .expect("components were validated per line");
        valuation
            .set(&name, value)
            .expect("atom names were validated per line");
    }
    Ok(valuation)
}

/// Renders a valuation in the valuation text format (canonical: atoms
/// sorted, every stored prefix component listed, worlds ascending).
/// Parsing the output reproduces the valuation exactly.
pub fn render_valuation(v: &Valuation) -> String {
    let mut out = String::new();
    for atom in v.atoms() {
        let value = v.get(atom).expect("listed atom");
        writeln!(out, "atom {atom} tail={}", value.tail().keyword()).expect("string write");
        for (i, upset) in value.prefix().iter().enumerate() {
            write!(out, "component {i} {atom} =").expect("string write");
            for k in upset.set().iter() {
                write!(out, " {k}").expect("string write");
            }
            out.push('\n');
        }
    }
    out
}

/// Renders a single value, one `component` line per stored prefix
/// entry followed by the tail.
pub fn render_value(value: &ValueSeq) -> String {
    let mut out = String::new();
    for (i, upset) in value.prefix().iter().enumerate() {
        write!(out, "component {i} =").expect("string write");
        for k in upset.set().iter() {
            write!(out, " {k}").expect("string write");
        }
        out.push('\n');
    }
    writeln!(out, "tail {}", value.tail().keyword()).expect("string write");
    out
}
