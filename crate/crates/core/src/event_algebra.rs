//! Systems of logically connected events and their truth tables.
//!
//! An [`EventSystem`] is an ordered list of event labels plus propositional
//! constraints over them. Its logically consistent 0/1 assignments are the
//! rows of the truth table; their convex hull is the correlation polytope
//! whose facets are the linear constraints on event probabilities.
//!
//! Constraints use a prefix notation:
//!
//! ```text
//! (iff E3 (and E1 E2))
//! (implies A (or B (not C)))
//! ```

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use num_traits::{Signed, Zero};

use crate::polytope::LinearInequality;
use crate::{Error, Limits, Result};

/// A propositional formula over event labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(label: impl Into<String>) -> Self {
        Formula::Atom(label.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Parses a prefix-notation formula such as `(iff E3 (and E1 E2))`.
    pub fn parse(src: &str) -> Result<Formula> {
        let tokens = tokenize(src);
        let mut pos = 0;
        let f = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!(
                "trailing input after formula: {:?}",
                &tokens[pos..]
            )));
        }
        Ok(f)
    }

    /// Resolves atom labels to positions in `events`.
    fn compile(&self, events: &[String]) -> Result<Compiled> {
        Ok(match self {
            Formula::Atom(a) => Compiled::Var(
                events
                    .iter()
                    .position(|e| e == a)
                    .ok_or_else(|| Error::Parse(format!("unknown event {a:?} in constraint")))?,
            ),
            Formula::Not(f) => Compiled::Not(Box::new(f.compile(events)?)),
            Formula::And(fs) => {
                Compiled::And(fs.iter().map(|f| f.compile(events)).collect::<Result<_>>()?)
            }
            Formula::Or(fs) => {
                Compiled::Or(fs.iter().map(|f| f.compile(events)).collect::<Result<_>>()?)
            }
            Formula::Iff(a, b) => {
                Compiled::Iff(Box::new(a.compile(events)?), Box::new(b.compile(events)?))
            }
            Formula::Implies(a, b) => {
                Compiled::Implies(Box::new(a.compile(events)?), Box::new(b.compile(events)?))
            }
        })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, op: &str, xs: &[&Formula]| {
            write!(f, "({op}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(x) => list(f, "not", &[x]),
            Formula::And(xs) => list(f, "and", &xs.iter().collect::<Vec<_>>()),
            Formula::Or(xs) => list(f, "or", &xs.iter().collect::<Vec<_>>()),
            Formula::Iff(a, b) => list(f, "iff", &[a, b]),
            Formula::Implies(a, b) => list(f, "implies", &[a, b]),
        }
    }
}

fn tokenize(src: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for ch in src.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<Formula> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::Parse("unexpected end of formula".into()))?;
    *pos += 1;
    match tok.as_str() {
        ")" => Err(Error::Parse("unexpected ')'".into())),
        "(" => {
            let op = tokens
                .get(*pos)
                .ok_or_else(|| Error::Parse("missing operator after '('".into()))?
                .to_ascii_lowercase();
            *pos += 1;
            let mut args = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    None => return Err(Error::Parse("unbalanced parentheses".into())),
                    Some(")") => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => args.push(parse_expr(tokens, pos)?),
                }
            }
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(Error::Parse(format!(
                        "'{op}' takes {n} argument(s), got {}",
                        args.len()
                    )))
                }
            };
            match op.as_str() {
                "not" => {
                    arity(1)?;
                    Ok(Formula::not(args.pop().unwrap()))
                }
                "and" => Ok(Formula::And(args)),
                "or" => Ok(Formula::Or(args)),
                "iff" | "implies" => {
                    arity(2)?;
                    let b = args.pop().unwrap();
                    let a = args.pop().unwrap();
                    Ok(if op == "iff" {
                        Formula::iff(a, b)
                    } else {
                        Formula::implies(a, b)
                    })
                }
                other => Err(Error::Parse(format!("unknown connective {other:?}"))),
            }
        }
        atom => Ok(Formula::Atom(atom.to_string())),
    }
}

#[derive(Debug, Clone)]
enum Compiled {
    Var(usize),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Iff(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn eval(&self, bits: &[u8]) -> bool {
        match self {
            Compiled::Var(i) => bits[*i] != 0,
            Compiled::Not(f) => !f.eval(bits),
            Compiled::And(fs) => fs.iter().all(|f| f.eval(bits)),
            Compiled::Or(fs) => fs.iter().any(|f| f.eval(bits)),
            Compiled::Iff(a, b) => a.eval(bits) == b.eval(bits),
            Compiled::Implies(a, b) => !a.eval(bits) || b.eval(bits),
        }
    }
}

/// Named events plus propositional constraints linking them.
#[derive(Debug, Clone)]
pub struct EventSystem {
    events: Vec<String>,
    constraints: Vec<Formula>,
    compiled: Vec<Compiled>,
}

/// JSON document form: `{"events": [...], "constraints": ["(iff E3 (and E1 E2))"]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventSystemDoc {
    pub events: Vec<String>,
    #[serde(default)]
    pub constraints: Vec<String>,
}

impl EventSystem {
    /// Builds a system under the default event cap.
    pub fn new(events: Vec<String>, constraints: Vec<Formula>) -> Result<Self> {
        Self::with_limits(events, constraints, &Limits::default())
    }

    pub fn with_limits(
        events: Vec<String>,
        constraints: Vec<Formula>,
        limits: &Limits,
    ) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::EmptyInput("event system needs at least one event"));
        }
        if events.len() > limits.max_events {
            return Err(Error::EventLimitExceeded {
                count: events.len(),
                limit: limits.max_events,
            });
        }
        let mut seen = HashSet::new();
        for e in &events {
            if e.is_empty() || e.contains(['(', ')']) || e.contains(char::is_whitespace) {
                return Err(Error::Parse(format!("invalid event label {e:?}")));
            }
            if !seen.insert(e.as_str()) {
                return Err(Error::Parse(format!("duplicate event label {e:?}")));
            }
        }
        let compiled = constraints
            .iter()
            .map(|c| c.compile(&events))
            .collect::<Result<Vec<_>>>()?;
        Ok(EventSystem {
            events,
            constraints,
            compiled,
        })
    }

    pub fn from_doc(doc: &EventSystemDoc, limits: &Limits) -> Result<Self> {
        let constraints = doc
            .constraints
            .iter()
            .map(|c| Formula::parse(c))
            .collect::<Result<Vec<_>>>()?;
        Self::with_limits(doc.events.clone(), constraints, limits)
    }

    pub fn from_json(src: &str, limits: &Limits) -> Result<Self> {
        let doc: EventSystemDoc =
            serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(&doc, limits)
    }

    pub fn to_doc(&self) -> EventSystemDoc {
        EventSystemDoc {
            events: self.events.clone(),
            constraints: self.constraints.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn events(&self) -> &[String] {
        &self.events
    }

    pub fn constraints(&self) -> &[Formula] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// True iff every constraint holds under `assignment` (entries 0 or 1).
    pub fn satisfies(&self, assignment: &[u8]) -> Result<bool> {
        if assignment.len() != self.events.len() {
            return Err(Error::LengthMismatch {
                expected: self.events.len(),
                found: assignment.len(),
            });
        }
        if assignment.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("assignment entries must be 0 or 1".into()));
        }
        Ok(self.compiled.iter().all(|c| c.eval(assignment)))
    }

    /// All satisfying 0/1 assignments in lexicographic order, first event most
    /// significant. An unsatisfiable system yields an empty list.
    pub fn enumerate_extremal_vectors(&self) -> Vec<ExtremalVector> {
        let n = self.events.len();
        let mut bits = vec![0u8; n];
        let mut rows = Vec::new();
        for m in 0u64..(1u64 << n) {
            for (i, b) in bits.iter_mut().enumerate() {
                *b = ((m >> (n - 1 - i)) & 1) as u8;
            }
            if self.compiled.iter().all(|c| c.eval(&bits)) {
                rows.push(ExtremalVector { bits: bits.clone() });
            }
        }
        rows
    }
}

/// A logically consistent truth-table row.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtremalVector {
    bits: Vec<u8>,
}

impl ExtremalVector {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Free function form of [`EventSystem::enumerate_extremal_vectors`].
pub fn enumerate_extremal_vectors(sys: &EventSystem) -> Vec<ExtremalVector> {
    sys.enumerate_extremal_vectors()
}

/// Two-party, two-outcome measurement scenario as an event system.
///
/// Events are the single-party outcome events `A1..Am`, `B1..Bm` followed by
/// every joint event `AiBj`, constrained by `AiBj <-> (Ai and Bj)`. Only two
/// parties with two or three settings each are supported.
pub fn bell_scenario(parties: usize, settings_per_party: usize) -> Result<EventSystem> {
    if parties != 2 || !(2..=3).contains(&settings_per_party) {
        return Err(Error::UnsupportedScenario(format!(
            "{parties} parties with {settings_per_party} settings each (supported: 2 parties, 2 or 3 settings)"
        )));
    }
    let m = settings_per_party;
    let a: Vec<String> = (1..=m).map(|i| format!("A{i}")).collect();
    let b: Vec<String> = (1..=m).map(|j| format!("B{j}")).collect();
    let mut events: Vec<String> = a.iter().chain(b.iter()).cloned().collect();
    let mut constraints = Vec::new();
    for ai in &a {
        for bj in &b {
            let joint = format!("{ai}{bj}");
            constraints.push(Formula::iff(
                Formula::atom(joint.clone()),
                Formula::And(vec![Formula::atom(ai.clone()), Formula::atom(bj.clone())]),
            ));
            events.push(joint);
        }
    }
    EventSystem::new(events, constraints)
}

/// How a facet of a [`bell_scenario`] polytope involves the joint events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetKind {
    /// Nonnegativity or monotonicity: at most one joint event.
    Trivial,
    /// Clauser-Horne pattern: exactly four joint events with mixed signs.
    ClauserHorne,
    /// Any other facet over several joint events.
    OtherBell,
}

/// Classify a facet of `bell_scenario(2, settings)` by its joint-event terms.
pub fn bell_facet_kind(settings: usize, facet: &LinearInequality) -> FacetKind {
    let joint = &facet.coefficients()[2 * settings..];
    let nonzero: Vec<_> = joint.iter().filter(|c| !c.is_zero()).collect();
    let mixed = nonzero.iter().any(|c| c.is_positive()) && nonzero.iter().any(|c| c.is_negative());
    match nonzero.len() {
        0 | 1 => FacetKind::Trivial,
        4 if mixed => FacetKind::ClauserHorne,
        _ => FacetKind::OtherBell,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conjunction() -> EventSystem {
        EventSystem::new(
            vec!["E1".into(), "E2".into(), "E3".into()],
            vec![Formula::parse("(iff E3 (and E1 E2))").unwrap()],
        )
        .unwrap()
    }

    fn rows(sys: &EventSystem) -> Vec<Vec<u8>> {
        sys.enumerate_extremal_vectors()
            .into_iter()
            .map(|v| v.bits().to_vec())
            .collect()
    }

    #[test]
    fn conjunction_truth_table() {
        assert_eq!(
            rows(&conjunction()),
            vec![vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 1]]
        );
    }

    #[test]
    fn unconstrained_square() {
        let sys = EventSystem::new(vec!["E1".into(), "E2".into()], vec![]).unwrap();
        assert_eq!(rows(&sys), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert!(sys.satisfies(&[1, 0]).unwrap());
    }

    #[test]
    fn contradiction_is_empty_not_error() {
        let sys = EventSystem::new(
            vec!["E1".into()],
            vec![Formula::parse("(and E1 (not E1))").unwrap()],
        )
        .unwrap();
        assert!(sys.enumerate_extremal_vectors().is_empty());
    }

    #[test]
    fn satisfies_checks() {
        let sys = conjunction();
        assert!(sys.satisfies(&[1, 1, 1]).unwrap());
        assert!(!sys.satisfies(&[1, 1, 0]).unwrap());
        assert_eq!(
            sys.satisfies(&[1, 1]),
            Err(Error::LengthMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn event_cap() {
        let events: Vec<String> = (0..17).map(|i| format!("E{i}")).collect();
        assert_eq!(
            EventSystem::new(events, vec![]).unwrap_err(),
            Error::EventLimitExceeded { count: 17, limit: 16 }
        );
    }

    #[test]
    fn rejects_unknown_atoms_and_duplicates() {
        assert!(matches!(
            EventSystem::new(vec!["E1".into()], vec![Formula::atom("E2")]),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            EventSystem::new(vec!["E1".into(), "E1".into()], vec![]),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn parser_round_trip_and_errors() {
        let src = "(implies A (or B (not C)))";
        let f = Formula::parse(src).unwrap();
        assert_eq!(f.to_string(), src);
        assert_eq!(Formula::parse(&f.to_string()).unwrap(), f);
        assert!(Formula::parse("(iff A)").is_err());
        assert!(Formula::parse("(and A B").is_err());
        assert!(Formula::parse("(xor A B)").is_err());
        assert!(Formula::parse("A B").is_err());
        assert!(Formula::parse(")").is_err());
    }

    #[test]
    fn connective_semantics() {
        let sys = EventSystem::new(
            vec!["A".into(), "B".into()],
            vec![Formula::parse("(implies A B)").unwrap()],
        )
        .unwrap();
        assert_eq!(rows(&sys), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        let sys = EventSystem::new(
            vec!["A".into(), "B".into()],
            vec![Formula::parse("(or A B)").unwrap()],
        )
        .unwrap();
        assert_eq!(rows(&sys), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn json_document() {
        let sys = EventSystem::from_json(
            r#"{"events": ["E1", "E2", "E3"], "constraints": ["(iff E3 (and E1 E2))"]}"#,
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(rows(&sys).len(), 4);
        assert_eq!(sys.to_doc().constraints, vec!["(iff E3 (and E1 E2))"]);
    }

    #[test]
    fn chsh_scenario() {
        let sys = bell_scenario(2, 2).unwrap();
        assert_eq!(
            sys.events(),
            ["A1", "A2", "B1", "B2", "A1B1", "A1B2", "A2B1", "A2B2"]
        );
        let rows = rows(&sys);
        assert_eq!(rows.len(), 16);
        assert_eq!(rows.last().unwrap(), &vec![1u8; 8]);

        // independent construction: each local assignment with joints filled in
        let mut expected: Vec<Vec<u8>> = (0..16u8)
            .map(|m| {
                let (a1, a2, b1, b2) = ((m >> 3) & 1, (m >> 2) & 1, (m >> 1) & 1, m & 1);
                vec![a1, a2, b1, b2, a1 & b1, a1 & b2, a2 & b1, a2 & b2]
            })
            .collect();
        expected.sort();
        assert_eq!(rows, expected);
    }

    #[test]
    fn three_setting_scenario() {
        let sys = bell_scenario(2, 3).unwrap();
        assert_eq!(sys.len(), 15);
        assert_eq!(sys.enumerate_extremal_vectors().len(), 64);
    }

    #[test]
    fn unsupported_scenarios() {
        for (p, s) in [(3, 2), (2, 4), (2, 1), (1, 2)] {
            assert!(matches!(bell_scenario(p, s), Err(Error::UnsupportedScenario(_))));
        }
    }
}
